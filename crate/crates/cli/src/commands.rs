use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use chirp_qkd::analysis::{
    max_distance, run_scenario, scan_chirp, sweep_distance, uniform_grid, ChirpScanResult, Curve,
    CurveData, Scenario, ScenarioOutput, SweepResult, DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM,
};
use chirp_qkd::keyrate::evaluate_point;

use crate::config::{Config, RateUnits};
use crate::error::{CliError, Result};
use crate::output::{fmt_sig, write_file, write_scan_csv, write_sweep_csv};
use crate::svg::{Chart, Series};

/// Golden-section tolerance in C for `optimize-chirp` and the figures.
pub const CHIRP_TOL: f64 = 1e-4;

fn rate_scale(config: &Config) -> f64 {
    match config.rate_units {
        RateUnits::PerWindow => 1.0,
        RateUnits::PerSecond => 1.0 / (config.period_ps * 1e-12),
    }
}

fn rate_label(config: &Config) -> &'static str {
    match config.rate_units {
        RateUnits::PerWindow => "key rate (bits per window)",
        RateUnits::PerSecond => "key rate (bits/s)",
    }
}

/// Labelled single-point evaluation.
pub fn point(config: &Config, distance_km: f64, out: &mut dyn Write) -> Result<()> {
    if !(distance_km >= 0.0 && distance_km.is_finite()) {
        return Err(CliError::validation(
            "distance",
            format!("must be >= 0, got {distance_km}"),
        ));
    }
    let p = evaluate_point(&config.params(), distance_km)?;
    let rows = [
        ("L_km", distance_km),
        ("eta", p.eta),
        ("sigma_tot_ps", p.sigma_detected / 1e-12),
        ("p_sig", p.p_sig),
        ("p_w", p.p_w),
        ("p_det", p.p_det),
        ("p_raw", p.p_raw),
        ("qber", p.qber),
        ("key_rate", p.key_rate * rate_scale(config)),
    ];
    for (name, v) in rows {
        writeln!(out, "{name:<14}{}", fmt_sig(v))?;
    }
    if p.degenerate {
        eprintln!("warning: raw key probability is zero; qber reported as 0.5");
    }
    Ok(())
}

fn sweep_grid(config: &Config) -> Result<Vec<f64>> {
    let hi = match config.l_max_km {
        Some(hi) => hi,
        None => {
            let l = max_distance(&config.params(), DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM)?;
            if l > 0.0 {
                1.2 * l
            } else {
                DEFAULT_L_HINT_KM
            }
        }
    };
    if !(hi > config.l_min_km) {
        return Err(CliError::validation(
            "l_min_km",
            format!("must lie below the sweep end {hi} km"),
        ));
    }
    Ok(uniform_grid(config.l_min_km, hi, config.l_steps)?)
}

fn sweep_chart(title: String, config: &Config, curves: &[(String, &SweepResult)]) -> Chart {
    let scale = rate_scale(config);
    Chart {
        title,
        x_label: "L (km)".into(),
        y_label: rate_label(config).into(),
        log_y: true,
        series: curves
            .iter()
            .map(|(label, s)| Series {
                label: label.clone(),
                points: s
                    .rows
                    .iter()
                    .map(|(l, p)| (*l, p.key_rate * scale))
                    .collect(),
            })
            .collect(),
    }
}

fn scan_chart(title: String, curves: &[(String, &ChirpScanResult)]) -> Chart {
    Chart {
        title,
        x_label: "chirp C".into(),
        y_label: "L_max (km)".into(),
        log_y: false,
        series: curves
            .iter()
            .map(|(label, s)| Series {
                label: label.clone(),
                points: s.samples.clone(),
            })
            .collect(),
    }
}

/// Distance sweep as CSV, to `out_csv` or stdout; optional SVG.
pub fn sweep(config: &Config, out: &mut dyn Write) -> Result<()> {
    let grid = sweep_grid(config)?;
    let result = sweep_distance(&config.params(), &grid)?;
    let mut csv = Vec::new();
    write_sweep_csv(&mut csv, &result, rate_scale(config))?;
    match &config.out_csv {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(&csv)?,
    }
    if let Some(path) = &config.out_svg {
        let chart = sweep_chart(
            "Key rate vs distance".into(),
            config,
            &[(
                format!(
                    "C={} v={}ps jitter={}ps",
                    config.chirp, config.window_ps, config.jitter_ps
                ),
                &result,
            )],
        );
        write_file(path, chart.render().as_bytes())?;
    }
    Ok(())
}

pub fn lmax(config: &Config, out: &mut dyn Write) -> Result<()> {
    let l = max_distance(&config.params(), DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM)?;
    writeln!(out, "{}", fmt_sig(l))?;
    Ok(())
}

pub fn optimize_chirp(config: &Config, out: &mut dyn Write) -> Result<()> {
    let params = config.params();
    let scan = scan_chirp(&params, &config.c_grid()?, CHIRP_TOL)?;
    let l0 = max_distance(&params.with_chirp(0.0), DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM)?;
    writeln!(out, "c_star        {}", fmt_sig(scan.c_star))?;
    writeln!(out, "L_max_star_km {}", fmt_sig(scan.l_max_star))?;
    writeln!(out, "L_max_C0_km   {}", fmt_sig(l0))?;
    if scan.at_boundary {
        eprintln!(
            "warning: optimum at the edge of the chirp grid (C = {}); widen c_min/c_max",
            scan.c_star
        );
    }
    if let Some(path) = &config.out_csv {
        let mut csv = Vec::new();
        write_scan_csv(&mut csv, &scan)?;
        write_file(path, &csv)?;
    }
    if let Some(path) = &config.out_svg {
        let chart = scan_chart(
            "Maximum secure distance vs chirp".into(),
            &[("L_max".into(), &scan)],
        );
        write_file(path, chart.render().as_bytes())?;
    }
    Ok(())
}

fn figure_title(scenario: Scenario) -> &'static str {
    match scenario {
        Scenario::Fig1 => "Key rate: detection windows and jitters (C = 0)",
        Scenario::Fig2 => "Key rate: chirp C = -1, 0, 1 (v = 50 ps)",
        Scenario::Fig3a => "Maximum secure distance vs chirp: jitters",
        Scenario::Fig3b => "Key rate: optimal chirp vs C = 0, per jitter",
        Scenario::Fig4a => "Maximum secure distance vs chirp: GVD",
        Scenario::Fig4b => "Key rate: optimal chirp vs C = 0, per GVD",
    }
}

/// Writes `<dir>/<fig>_<curve>.csv` for every curve plus `<dir>/<fig>.svg`.
/// Returns the written paths in order.
pub fn write_figure(
    output: &ScenarioOutput,
    config: &Config,
    dir: &Path,
) -> Result<Vec<std::path::PathBuf>> {
    let name = output.scenario.name();
    let mut written = Vec::new();
    let mut sweeps = Vec::new();
    let mut scans = Vec::new();
    for Curve {
        label, slug, data, ..
    } in &output.curves
    {
        let mut csv = Vec::new();
        match data {
            CurveData::Sweep(s) => {
                write_sweep_csv(&mut csv, s, rate_scale(config))?;
                sweeps.push((label.clone(), s));
            }
            CurveData::ChirpScan(s) => {
                write_scan_csv(&mut csv, s)?;
                scans.push((label.clone(), s));
            }
        }
        let path = dir.join(format!("{name}_{slug}.csv"));
        write_file(&path, &csv)?;
        written.push(path);
    }
    let title = figure_title(output.scenario).to_string();
    let chart = if scans.is_empty() {
        sweep_chart(title, config, &sweeps)
    } else {
        scan_chart(title, &scans)
    };
    let path = dir.join(format!("{name}.svg"));
    write_file(&path, chart.render().as_bytes())?;
    written.push(path);
    Ok(written)
}

pub fn reproduce(
    config: &Config,
    scenario: Scenario,
    dir: &Path,
    out: &mut dyn Write,
) -> Result<()> {
    let output = run_scenario(scenario, &config.params(), &config.scenario_options()?)?;
    let written = write_figure(&output, config, dir)?;
    let mut summary = String::new();
    for curve in &output.curves {
        match &curve.data {
            CurveData::ChirpScan(s) => {
                let _ = writeln!(
                    summary,
                    "{}: c_star {} L_max {} km",
                    curve.label,
                    fmt_sig(s.c_star),
                    fmt_sig(s.l_max_star)
                );
            }
            CurveData::Sweep(_) => {}
        }
    }
    for path in written {
        let _ = writeln!(summary, "wrote {}", path.display());
    }
    out.write_all(summary.as_bytes())?;
    Ok(())
}

pub fn show_config(config: &Config, out: &mut dyn Write) -> Result<()> {
    out.write_all(config.to_text().as_bytes())?;
    Ok(())
}
