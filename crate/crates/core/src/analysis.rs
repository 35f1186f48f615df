//! Distance sweeps, maximum secure distance, chirp optimization and the
//! figure scenarios built from them.
//!
//! Grid points are evaluated in parallel and collected by index, so every
//! result here is bit-identical from run to run.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::keyrate::{evaluate_point, ProtocolPoint, ScenarioParams};
use crate::numerics::{find_root, maximize_scalar, Bracket};
use crate::PS;

/// Starting guess for the extinction bracket, km.
pub const DEFAULT_L_HINT_KM: f64 = 50.0;
/// Default accuracy of [`max_distance`], km.
pub const DEFAULT_L_TOL_KM: f64 = 0.01;
/// Bracket expansion gives up beyond this length, km.
pub const MAX_SEARCH_KM: f64 = 1e6;
/// L_max accuracy used inside chirp scans, km. Much tighter than the
/// user-facing default so golden-section search sees a smooth function.
pub const SCAN_L_TOL_KM: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// `(L in km, point)`, strictly increasing in L.
    pub rows: Vec<(f64, ProtocolPoint)>,
}

impl SweepResult {
    pub fn key_rates(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|(_, p)| p.key_rate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChirpScanResult {
    /// `(C, L_max in km)` on the coarse grid.
    pub samples: Vec<(f64, f64)>,
    pub c_star: f64,
    pub l_max_star: f64,
    /// The best grid point sat at an end of the grid, so `c_star` is that
    /// end point and the true optimum may lie outside the scanned range.
    pub at_boundary: bool,
}

fn validate_grid(name: &str, grid: &[f64], non_negative: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid(format!("{name} grid is empty")));
    }
    if let Some(bad) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid(format!("{name} grid contains {bad}")));
    }
    if non_negative && grid[0] < 0.0 {
        return Err(Error::InvalidGrid(format!(
            "{name} grid starts at {} < 0",
            grid[0]
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid(format!(
            "{name} grid is not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `steps + 1` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need lo < hi and at least one step, got [{lo}, {hi}] in {steps} steps"
        )));
    }
    let h = (hi - lo) / steps as f64;
    Ok((0..=steps)
        .map(|i| if i == steps { hi } else { lo + h * i as f64 })
        .collect())
}

/// Points `lo, lo + step, …` up to `hi` (included when it lands on the grid
/// within rounding).
pub fn stepped_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "need lo <= hi and step > 0, got [{lo}, {hi}] step {step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| lo + step * i as f64).collect())
}

/// Evaluates the protocol at every length in `l_grid_km`.
pub fn sweep_distance(params: &ScenarioParams, l_grid_km: &[f64]) -> Result<SweepResult> {
    params.validate()?;
    validate_grid("L", l_grid_km, true)?;
    let rows = l_grid_km
        .par_iter()
        .map(|&l| evaluate_point(params, l).map(|p| (l, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { rows })
}

fn has_key(params: &ScenarioParams, length_km: f64) -> Result<bool> {
    Ok(evaluate_point(params, length_km)?.key_rate > 0.0)
}

/// Length at which the key rate drops to zero, within `tol_km`.
///
/// Returns 0 when no key is produced even at L = 0. Otherwise the bracket
/// `[0, l_hint]` is doubled until it contains the extinction point, which is
/// then located by bisection on the indicator `key_rate > 0`.
pub fn max_distance(params: &ScenarioParams, l_hint_km: f64, tol_km: f64) -> Result<f64> {
    params.validate()?;
    if !(l_hint_km > 0.0 && l_hint_km.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "l_hint",
            value: l_hint_km,
            constraint: "l_hint > 0",
        });
    }
    if !(tol_km > 0.0 && tol_km.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "tol",
            value: tol_km,
            constraint: "tol > 0",
        });
    }
    if !has_key(params, 0.0)? {
        return Ok(0.0);
    }

    let (mut lo, mut hi) = (0.0, l_hint_km);
    while has_key(params, hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_SEARCH_KM {
            return Err(Error::NoExtinction {
                searched_km: MAX_SEARCH_KM,
            });
        }
    }

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let root = find_root(
        |l| match has_key(params, l) {
            Ok(true) => 1.0,
            Ok(false) => -1.0,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                -1.0
            }
        },
        Bracket::new(lo, hi)?,
        tol_km,
    )?;
    match failure.into_inner() {
        Some(e) => Err(e),
        None => Ok(root),
    }
}

/// L_max(C) over `c_grid`, then a golden-section refinement of the best
/// grid cell to within `tol` in C.
pub fn scan_chirp(params: &ScenarioParams, c_grid: &[f64], tol: f64) -> Result<ChirpScanResult> {
    params.validate()?;
    validate_grid("C", c_grid, false)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "tol",
            value: tol,
            constraint: "tol > 0",
        });
    }

    let l_max_at = |c: f64| max_distance(&params.with_chirp(c), DEFAULT_L_HINT_KM, SCAN_L_TOL_KM);

    let samples = c_grid
        .par_iter()
        .map(|&c| l_max_at(c).map(|l| (c, l)))
        .collect::<Result<Vec<_>>>()?;

    // First grid point attaining the maximum.
    let best = samples
        .iter()
        .enumerate()
        .fold(0, |b, (i, s)| if s.1 > samples[b].1 { i } else { b });
    let (c_grid_best, l_grid_best) = samples[best];

    if best == 0 || best == samples.len() - 1 {
        return Ok(ChirpScanResult {
            samples,
            c_star: c_grid_best,
            l_max_star: l_grid_best,
            at_boundary: true,
        });
    }

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let (c_refined, l_refined) = maximize_scalar(
        |c| match l_max_at(c) {
            Ok(l) => l,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NEG_INFINITY
            }
        },
        Bracket::new(samples[best - 1].0, samples[best + 1].0)?,
        tol,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }

    let (c_star, l_max_star) = if l_refined >= l_grid_best {
        (c_refined, l_refined)
    } else {
        (c_grid_best, l_grid_best)
    };
    Ok(ChirpScanResult {
        samples,
        c_star,
        l_max_star,
        at_boundary: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Key rate vs L for four windows and two jitters, C = 0.
    Fig1,
    /// Key rate vs L for C ∈ {−1, 0, 1} and two jitters, v = 50 ps.
    Fig2,
    /// L_max(C) for three jitters.
    Fig3a,
    /// Key rate vs L at the optimal chirp and at C = 0, per jitter.
    Fig3b,
    /// L_max(C) for three GVD values.
    Fig4a,
    /// Key rate vs L at the optimal chirp and at C = 0, per GVD value.
    Fig4b,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Fig1,
        Scenario::Fig2,
        Scenario::Fig3a,
        Scenario::Fig3b,
        Scenario::Fig4a,
        Scenario::Fig4b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fig1 => "fig1",
            Scenario::Fig2 => "fig2",
            Scenario::Fig3a => "fig3a",
            Scenario::Fig3b => "fig3b",
            Scenario::Fig4a => "fig4a",
            Scenario::Fig4b => "fig4b",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Jitters shared by every figure, s.
pub const FIGURE_JITTERS: [f64; 2] = [4.0 * PS, 25.0 * PS];
/// Windows named for the window comparison, s.
pub const FIGURE_WINDOWS: [f64; 3] = [5.0 * PS, 50.0 * PS, 125.0 * PS];
pub const FIGURE_CHIRPS: [f64; 3] = [-1.0, 0.0, 1.0];
/// GVD values of the dispersion comparison, s²/m.
pub const FIGURE_BETAS: [f64; 3] = [-1.15e-26, -1.5e-26, -0.7e-26];

/// Knobs of the figure scenarios that the figures themselves leave open.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOptions {
    /// Fourth window of the window comparison, s.
    pub extra_window: f64,
    /// Third jitter of the L_max(C) comparison, s.
    pub extra_jitter: f64,
    /// Intervals of the distance grid, which spans 0 to 1.2·max L_max.
    pub l_steps: usize,
    pub c_grid: Vec<f64>,
    pub chirp_tol: f64,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        Self {
            extra_window: 25.0 * PS,
            extra_jitter: 10.0 * PS,
            l_steps: 400,
            c_grid: stepped_grid(-2.0, 2.0, 0.05).expect("static grid"),
            chirp_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurveData {
    Sweep(SweepResult),
    ChirpScan(ChirpScanResult),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    /// Human-readable, e.g. `v=50ps jitter=25ps`.
    pub label: String,
    /// File-name friendly, e.g. `v50ps_j25ps`.
    pub slug: String,
    pub params: ScenarioParams,
    pub data: CurveData,
}

impl Curve {
    pub fn sweep(&self) -> Option<&SweepResult> {
        match &self.data {
            CurveData::Sweep(s) => Some(s),
            CurveData::ChirpScan(_) => None,
        }
    }

    pub fn chirp_scan(&self) -> Option<&ChirpScanResult> {
        match &self.data {
            CurveData::ChirpScan(s) => Some(s),
            CurveData::Sweep(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub scenario: Scenario,
    pub curves: Vec<Curve>,
}

fn ps(x: f64) -> f64 {
    // Round away the last-digit noise of x / 1e-12 for labels.
    (x / PS * 1e9).round() / 1e9
}

fn slug_number(x: f64) -> String {
    format!("{x}").replace('-', "m").replace('.', "p")
}

fn jitters_with(extra: f64) -> Vec<f64> {
    let mut js = FIGURE_JITTERS.to_vec();
    js.push(extra);
    js
}

/// Sweeps every parameter set over one shared grid, 0 to 1.2·max L_max.
fn sweep_family(
    family: Vec<(String, String, ScenarioParams)>,
    options: &ScenarioOptions,
) -> Result<Vec<Curve>> {
    let mut longest: f64 = 0.0;
    for (_, _, p) in &family {
        longest = longest.max(max_distance(p, DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM)?);
    }
    let top = if longest > 0.0 {
        1.2 * longest
    } else {
        DEFAULT_L_HINT_KM
    };
    let grid = uniform_grid(0.0, top, options.l_steps)?;
    family
        .into_iter()
        .map(|(label, slug, params)| {
            Ok(Curve {
                label,
                slug,
                data: CurveData::Sweep(sweep_distance(&params, &grid)?),
                params,
            })
        })
        .collect()
}

fn scan_family(
    family: Vec<(String, String, ScenarioParams)>,
    options: &ScenarioOptions,
) -> Result<Vec<Curve>> {
    family
        .into_iter()
        .map(|(label, slug, params)| {
            Ok(Curve {
                label,
                slug,
                data: CurveData::ChirpScan(scan_chirp(
                    &params,
                    &options.c_grid,
                    options.chirp_tol,
                )?),
                params,
            })
        })
        .collect()
}

/// Optimal-chirp and unchirped parameter sets for each member of `family`.
fn optimized_family(
    family: Vec<(String, String, ScenarioParams)>,
    options: &ScenarioOptions,
) -> Result<Vec<(String, String, ScenarioParams)>> {
    let mut out = Vec::with_capacity(2 * family.len());
    for (label, slug, params) in family {
        let scan = scan_chirp(&params, &options.c_grid, options.chirp_tol)?;
        let c_star = scan.c_star;
        out.push((
            format!("{label} C=0"),
            format!("{slug}_c0"),
            params.with_chirp(0.0),
        ));
        out.push((
            format!("{label} C*={c_star:.4}"),
            format!("{slug}_copt"),
            params.with_chirp(c_star),
        ));
    }
    Ok(out)
}

/// Builds the curves of one figure. `base` supplies every parameter the
/// figure does not vary itself.
pub fn run_scenario(
    scenario: Scenario,
    base: &ScenarioParams,
    options: &ScenarioOptions,
) -> Result<ScenarioOutput> {
    base.validate()?;
    let curves = match scenario {
        Scenario::Fig1 => {
            let mut windows = FIGURE_WINDOWS.to_vec();
            windows.push(options.extra_window);
            let mut family = Vec::new();
            for &j in &FIGURE_JITTERS {
                for &v in &windows {
                    family.push((
                        format!("v={}ps jitter={}ps", ps(v), ps(j)),
                        format!("v{}ps_j{}ps", slug_number(ps(v)), slug_number(ps(j))),
                        base.with_chirp(0.0).with_window(v).with_jitter(j),
                    ));
                }
            }
            sweep_family(family, options)?
        }
        Scenario::Fig2 => {
            let mut family = Vec::new();
            for &j in &FIGURE_JITTERS {
                for &c in &FIGURE_CHIRPS {
                    family.push((
                        format!("C={c} jitter={}ps", ps(j)),
                        format!("c{}_j{}ps", slug_number(c), slug_number(ps(j))),
                        base.with_window(50.0 * PS).with_chirp(c).with_jitter(j),
                    ));
                }
            }
            sweep_family(family, options)?
        }
        Scenario::Fig3a | Scenario::Fig3b => {
            let family = jitters_with(options.extra_jitter)
                .into_iter()
                .map(|j| {
                    (
                        format!("jitter={}ps", ps(j)),
                        format!("j{}ps", slug_number(ps(j))),
                        base.with_window(50.0 * PS).with_jitter(j),
                    )
                })
                .collect();
            if scenario == Scenario::Fig3a {
                scan_family(family, options)?
            } else {
                sweep_family(optimized_family(family, options)?, options)?
            }
        }
        Scenario::Fig4a | Scenario::Fig4b => {
            let family = FIGURE_BETAS
                .iter()
                .map(|&b| {
                    let b26 = (b * 1e26 * 1e9).round() / 1e9;
                    (
                        format!("beta={b26}e-26"),
                        format!("b{}", slug_number(b26)),
                        base.with_window(50.0 * PS)
                            .with_jitter(25.0 * PS)
                            .with_beta(b),
                    )
                })
                .collect();
            if scenario == Scenario::Fig4a {
                scan_family(family, options)?
            } else {
                sweep_family(optimized_family(family, options)?, options)?
            }
        }
    };
    Ok(ScenarioOutput { scenario, curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ScenarioParams {
        ScenarioParams::default()
    }

    #[test]
    fn grids() {
        assert_eq!(
            uniform_grid(0.0, 1.0, 4).unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert!(uniform_grid(1.0, 1.0, 4).is_err());
        assert!(uniform_grid(0.0, 1.0, 0).is_err());
        let c = stepped_grid(-2.0, 2.0, 0.05).unwrap();
        assert_eq!(c.len(), 81);
        assert_eq!(c[0], -2.0);
        assert!((c[80] - 2.0).abs() < 1e-12);
        assert!(c.contains(&0.0) || c[40].abs() < 1e-15);
    }

    #[test]
    fn sweep_single_point_delegates() {
        let s = sweep_distance(&table(), &[0.0]).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0], (0.0, evaluate_point(&table(), 0.0).unwrap()));
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        for g in [
            vec![],
            vec![1.0, 1.0],
            vec![2.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, f64::NAN],
        ] {
            assert!(matches!(
                sweep_distance(&table(), &g),
                Err(Error::InvalidGrid(_))
            ));
        }
    }

    #[test]
    fn sweep_key_rate_non_increasing_and_extinct_tail() {
        let grid = stepped_grid(0.0, 200.0, 1.0).unwrap();
        let s = sweep_distance(&table(), &grid).unwrap();
        let rates: Vec<f64> = s.key_rates().collect();
        assert!(rates.windows(2).all(|w| w[1] <= w[0]));
        let l_max = max_distance(&table(), DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM).unwrap();
        for (l, p) in &s.rows {
            if *l > l_max + DEFAULT_L_TOL_KM {
                assert_eq!(p.key_rate, 0.0);
            }
        }
        assert_eq!(*rates.last().unwrap(), 0.0);
    }

    #[test]
    fn sweep_is_deterministic() {
        let grid = uniform_grid(0.0, 60.0, 97).unwrap();
        let a = sweep_distance(&table(), &grid).unwrap();
        let b = sweep_distance(&table(), &grid).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn max_distance_matches_brute_force_scan() {
        let l = max_distance(&table(), DEFAULT_L_HINT_KM, 0.01).unwrap();
        // 10 m scan: first grid point with no key.
        let mut brute = None;
        for i in 0..20_000 {
            let x = i as f64 * 0.01;
            if evaluate_point(&table(), x).unwrap().key_rate == 0.0 {
                brute = Some(x);
                break;
            }
        }
        let brute = brute.unwrap();
        assert!((l - brute).abs() <= 0.02, "{l} vs {brute}");
    }

    #[test]
    fn max_distance_brackets_the_extinction() {
        let tol = 0.01;
        for params in [
            table(),
            table().with_jitter(4.0 * PS),
            table().with_chirp(-0.5),
            ScenarioParams {
                dark_rate: 0.0,
                period: 1.0,
                ..table()
            },
        ] {
            let l = max_distance(&params, DEFAULT_L_HINT_KM, tol).unwrap();
            assert!(evaluate_point(&params, l - 2.0 * tol).unwrap().key_rate > 0.0);
            assert_eq!(
                evaluate_point(&params, l + 2.0 * tol).unwrap().key_rate,
                0.0
            );
        }
    }

    #[test]
    fn max_distance_is_zero_when_insecure_at_origin() {
        // A narrow window with neighbours 5 ps away: each neighbour lands in
        // it almost as often as the signal photon.
        let params = ScenarioParams {
            period: 5.0 * PS,
            ..table().with_window(5.0 * PS)
        };
        assert!(evaluate_point(&params, 0.0).unwrap().qber > 0.12);
        assert_eq!(evaluate_point(&params, 0.0).unwrap().key_rate, 0.0);
        assert_eq!(max_distance(&params, 50.0, 0.01).unwrap(), 0.0);
    }

    #[test]
    fn max_distance_rejects_bad_inputs() {
        assert!(max_distance(&table(), 0.0, 0.01).is_err());
        assert!(max_distance(&table(), 50.0, 0.0).is_err());
    }

    #[test]
    fn hint_does_not_change_the_answer() {
        let a = max_distance(&table(), 1.0, 1e-6).unwrap();
        let b = max_distance(&table(), 50.0, 1e-6).unwrap();
        let c = max_distance(&table(), 300.0, 1e-6).unwrap();
        assert!((a - b).abs() < 2e-6 && (b - c).abs() < 2e-6);
    }

    #[test]
    fn more_loss_means_shorter_reach() {
        let a = max_distance(&table(), 50.0, 1e-4).unwrap();
        let b = max_distance(
            &ScenarioParams {
                alpha_db_per_km: 0.4,
                ..table()
            },
            50.0,
            1e-4,
        )
        .unwrap();
        assert!(b < a);
    }

    #[test]
    fn chirp_scan_finds_slightly_negative_optimum() {
        let grid = stepped_grid(-2.0, 2.0, 0.05).unwrap();
        for j in FIGURE_JITTERS {
            let scan = scan_chirp(&table().with_jitter(j), &grid, 1e-4).unwrap();
            assert!(!scan.at_boundary);
            assert!((-0.35..=-0.15).contains(&scan.c_star), "{}", scan.c_star);
            let l0 = max_distance(&table().with_jitter(j), 50.0, SCAN_L_TOL_KM).unwrap();
            assert!(scan.l_max_star > l0);
            for &(_, l) in &scan.samples {
                assert!(l <= scan.l_max_star);
            }
        }
    }

    #[test]
    fn chirp_curve_has_a_single_peak_at_negative_chirp() {
        let grid = stepped_grid(-2.0, 2.0, 0.05).unwrap();
        let scan = scan_chirp(&table(), &grid, 1e-4).unwrap();
        let l: Vec<f64> = scan.samples.iter().map(|s| s.1).collect();
        let peaks: Vec<usize> = (1..l.len() - 1)
            .filter(|&i| l[i] > l[i - 1] && l[i] >= l[i + 1])
            .collect();
        assert_eq!(peaks.len(), 1);
        assert!(scan.samples[peaks[0]].0 < 0.0);
    }

    #[test]
    fn flipping_beta_mirrors_the_optimal_chirp() {
        let grid = stepped_grid(-2.0, 2.0, 0.05).unwrap();
        let a = scan_chirp(&table(), &grid, 1e-5).unwrap();
        let b = scan_chirp(&table().with_beta(1.15e-26), &grid, 1e-5).unwrap();
        assert!((a.c_star + b.c_star).abs() <= 0.05);
        assert!((a.l_max_star - b.l_max_star).abs() < 1e-5);
    }

    #[test]
    fn chirp_scan_on_declining_grid_stops_at_boundary() {
        let grid = stepped_grid(0.5, 2.0, 0.05).unwrap();
        let scan = scan_chirp(&table(), &grid, 1e-4).unwrap();
        assert!(scan.at_boundary);
        assert_eq!(scan.c_star, 0.5);
    }

    #[test]
    fn scenario_names_round_trip() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!(matches!(
            "fig5".parse::<Scenario>(),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn scenario_shapes() {
        let options = ScenarioOptions {
            l_steps: 20,
            c_grid: stepped_grid(-1.0, 1.0, 0.25).unwrap(),
            ..ScenarioOptions::default()
        };
        let count = |sc| run_scenario(sc, &table(), &options).unwrap().curves.len();
        assert_eq!(count(Scenario::Fig1), 8);
        assert_eq!(count(Scenario::Fig2), 6);
        assert_eq!(count(Scenario::Fig3a), 3);
        assert_eq!(count(Scenario::Fig3b), 6);
        assert_eq!(count(Scenario::Fig4a), 3);
        assert_eq!(count(Scenario::Fig4b), 6);
    }

    #[test]
    fn fig2_negative_chirp_beats_positive() {
        let out = run_scenario(Scenario::Fig2, &table(), &ScenarioOptions::default()).unwrap();
        // Curves come as (C=−1, C=0, C=1) per jitter.
        for group in out.curves.chunks(3) {
            let minus = group[0].sweep().unwrap();
            let plus = group[2].sweep().unwrap();
            for (a, b) in minus.key_rates().zip(plus.key_rates()) {
                assert!(a >= b);
            }
        }
    }

    #[test]
    fn fig4_low_dispersion_reaches_furthest() {
        let options = ScenarioOptions {
            c_grid: stepped_grid(-1.0, 1.0, 0.05).unwrap(),
            ..ScenarioOptions::default()
        };
        let out = run_scenario(Scenario::Fig4a, &table(), &options).unwrap();
        let best: Vec<f64> = out
            .curves
            .iter()
            .map(|c| c.chirp_scan().unwrap().l_max_star)
            .collect();
        // Order: −1.15, −1.5, −0.7 (×1e-26 s²/m).
        assert!(best[2] > best[0] && best[0] > best[1]);
    }
}
