use chirp_qkd::analysis::{
    max_distance, run_scenario, scan_chirp, stepped_grid, sweep_distance, uniform_grid, Scenario,
    ScenarioOptions, DEFAULT_L_HINT_KM,
};
use chirp_qkd::detection::{
    p_signal, shifted_window_mass, window_probabilities, window_probabilities_numeric, Detector,
    PulseTrain,
};
use chirp_qkd::keyrate::{
    evaluate_point, key_rate, DarkCountModel, ScenarioParams, TransmittanceConvention,
    QBER_THRESHOLD,
};
use chirp_qkd::numerics::{integrate_real, QuadratureSpec};
use chirp_qkd::twf::{propagate_closed_form, Medium, Pulse};
use chirp_qkd::{KM, PS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn normal(sigma: f64, mean: f64) -> impl Fn(f64) -> f64 {
    move |t| {
        let z = (t - mean) / sigma;
        (-0.5 * z * z).exp() / ((2.0 * std::f64::consts::PI).sqrt() * sigma)
    }
}

#[test]
fn window_masses_match_direct_quadrature() {
    let spec = QuadratureSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for i in 0..100 {
        let s = rng.random_range(5.0..200.0) * PS;
        let period = rng.random_range(20.0..300.0) * PS;
        // Every fourth draw forces an overlapping window v > 𝔗.
        let v = if i % 4 == 0 {
            period * rng.random_range(1.05..2.0)
        } else {
            rng.random_range(1.0..300.0) * PS
        };
        let direct = integrate_real(normal(s, 0.0), -v / 2.0, v / 2.0, &spec).unwrap();
        assert!((p_signal(s, v).unwrap() - direct).abs() < 1e-9);
        for shift in [period, -period] {
            let direct = integrate_real(normal(s, shift), -v / 2.0, v / 2.0, &spec).unwrap();
            assert!((shifted_window_mass(s, v, period).unwrap() - direct).abs() < 1e-9);
        }
    }
}

#[test]
fn jitter_convolution_matches_closed_form_window_probabilities() {
    let spec = QuadratureSpec::default();
    let pulse = Pulse::new(10.0 * PS, -0.4).unwrap();
    let medium = Medium::new(-1.15e-26).unwrap();
    let train = PulseTrain::new(100.0 * PS).unwrap();
    for (l, j, v) in [(0.0, 25.0, 50.0), (30.0, 4.0, 125.0), (60.0, 25.0, 5.0)] {
        let state = propagate_closed_form(&pulse, &medium, l * KM).unwrap();
        let det = Detector::new(j * PS, v * PS).unwrap();
        let closed = window_probabilities(state.std_dev().hypot(j * PS), &det, &train).unwrap();
        let numeric = window_probabilities_numeric(&state, &det, &train, &spec).unwrap();
        assert!((closed.p_sig - numeric.p_sig).abs() < 1e-9);
        assert!((closed.p_w - numeric.p_w).abs() < 1e-9);
    }
}

#[test]
fn dark_count_models_agree_over_sweep() {
    let lin = ScenarioParams::default();
    let exact = ScenarioParams {
        dark_model: DarkCountModel::ExactPoisson,
        ..lin
    };
    let grid = stepped_grid(0.0, 200.0, 0.5).unwrap();
    let a = sweep_distance(&lin, &grid).unwrap();
    let b = sweep_distance(&exact, &grid).unwrap();
    for (x, y) in a.key_rates().zip(b.key_rates()) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn security_threshold_is_sharp() {
    assert_eq!(key_rate(0.3, QBER_THRESHOLD + 1e-12).unwrap(), 0.0);
    assert_eq!(key_rate(0.3, 0.110028).unwrap(), 0.0);
    assert!(key_rate(0.3, 0.1099).unwrap() > 0.0);
}

#[test]
fn bisection_agrees_with_brute_force_scan() {
    let base = ScenarioParams::default();
    for params in [
        base,
        base.with_jitter(4.0 * PS),
        base.with_chirp(-0.25),
        base.with_window(125.0 * PS),
        ScenarioParams {
            alpha_db_per_km: 0.35,
            ..base.with_beta(-0.7e-26)
        },
    ] {
        let l = max_distance(&params, DEFAULT_L_HINT_KM, 0.01).unwrap();
        let brute = (0..100_000)
            .map(|i| i as f64 * 0.01)
            .find(|&x| evaluate_point(&params, x).unwrap().key_rate == 0.0)
            .unwrap();
        assert!((l - brute).abs() <= 0.02, "{l} vs {brute}");
    }
}

#[test]
fn literal_transmittance_is_far_more_lossy() {
    let db = ScenarioParams::default();
    let lit = ScenarioParams {
        transmittance_convention: TransmittanceConvention::Literal,
        ..db
    };
    let a = max_distance(&db, 50.0, 1e-3).unwrap();
    let b = max_distance(&lit, 50.0, 1e-3).unwrap();
    assert!(b < a);
}

#[test]
fn optimal_chirp_is_mildly_negative_for_both_jitters() {
    let grid = stepped_grid(-2.0, 2.0, 0.05).unwrap();
    for j in [4.0, 25.0] {
        let params = ScenarioParams::default().with_jitter(j * PS);
        let scan = scan_chirp(&params, &grid, 1e-4).unwrap();
        assert!((-0.3..=-0.2).contains(&scan.c_star), "{}", scan.c_star);
    }
}

#[test]
fn optimal_chirp_gain_grows_as_dispersion_falls() {
    let grid = stepped_grid(-1.0, 1.0, 0.05).unwrap();
    let gain = |beta: f64| {
        let params = ScenarioParams::default().with_beta(beta);
        let scan = scan_chirp(&params, &grid, 1e-4).unwrap();
        scan.l_max_star / max_distance(&params, 50.0, 1e-7).unwrap()
    };
    assert!(gain(-0.7e-26) > gain(-1.15e-26));
    assert!(gain(-1.15e-26) > gain(-1.5e-26));
}

#[test]
fn scenarios_are_deterministic() {
    let options = ScenarioOptions {
        l_steps: 50,
        ..ScenarioOptions::default()
    };
    let base = ScenarioParams::default();
    let a = run_scenario(Scenario::Fig2, &base, &options).unwrap();
    let b = run_scenario(Scenario::Fig2, &base, &options).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweeps_share_grid_within_figure() {
    let options = ScenarioOptions {
        l_steps: 10,
        ..ScenarioOptions::default()
    };
    let out = run_scenario(Scenario::Fig1, &ScenarioParams::default(), &options).unwrap();
    let first: Vec<f64> = out.curves[0]
        .sweep()
        .unwrap()
        .rows
        .iter()
        .map(|r| r.0)
        .collect();
    assert_eq!(first.len(), 11);
    for c in &out.curves {
        let ls: Vec<f64> = c.sweep().unwrap().rows.iter().map(|r| r.0).collect();
        assert_eq!(ls, first);
        assert_eq!(c.sweep().unwrap().key_rates().last().unwrap(), 0.0);
    }
    assert!(uniform_grid(0.0, 1.0, 3).unwrap().len() == 4);
}
