use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use chirp_qkd::analysis::{max_distance, DEFAULT_L_HINT_KM, DEFAULT_L_TOL_KM};
use chirp_qkd::keyrate::ScenarioParams;

fn chirp_qkd(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chirp-qkd"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(table: &str, name: &str) -> f64 {
    table
        .lines()
        .find_map(|l| {
            let mut parts = l.split_whitespace();
            (parts.next() == Some(name)).then(|| parts.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("no {name} in {table}"))
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn point_defaults_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let o = chirp_qkd(&["point"], dir.path());
    assert!(o.status.success());
    let t = stdout(&o);
    assert!(field(&t, "qber") < 0.01);
    assert!(field(&t, "key_rate") > 0.0);
    assert_eq!(field(&t, "eta"), 1.0);
}

#[test]
fn point_far_beyond_extinction() {
    let dir = tempfile::tempdir().unwrap();
    let l = max_distance(
        &ScenarioParams::default(),
        DEFAULT_L_HINT_KM,
        DEFAULT_L_TOL_KM,
    )
    .unwrap();
    let o = chirp_qkd(
        &["point", "--distance", &(10.0 * l).to_string()],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "key_rate"), 0.0);
}

#[test]
fn point_ideal_limit() {
    let dir = tempfile::tempdir().unwrap();
    let o = chirp_qkd(
        &[
            "point",
            "--set",
            "dark_rate_hz=0",
            "--set",
            "period_ps=1e9",
            "--set",
            "jitter_ps=0",
            "--set",
            "window_ps=1e6",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert!((field(&stdout(&o), "key_rate") - 0.5).abs() < 1e-6);
}

#[test]
fn sweep_csv_shape_units_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let grid = ["--set", "l_max_km=20", "--set", "l_steps=2"];
    let run = |extra: &[&str], out: &str| {
        let mut args = vec!["sweep", "--out", out];
        args.extend_from_slice(&grid);
        args.extend_from_slice(extra);
        let o = chirp_qkd(&args, dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let a = run(&[], "a.csv");
    assert_eq!(a.lines().count(), 4);
    assert_eq!(
        a.lines().next().unwrap(),
        "L_km,p_sig,p_w,p_det,p_raw,qber,key_rate"
    );
    assert!(a.ends_with('\n') && !a.contains('\r'));
    assert_eq!(column(&a, 0), vec![0.0, 10.0, 20.0]);

    let again = run(&[], "again.csv");
    assert_eq!(a, again);

    let per_s = run(&["--set", "rate_units=per_second"], "s.csv");
    for (w, s) in column(&a, 6).iter().zip(column(&per_s, 6)) {
        assert!((s / (w * 1e10) - 1.0).abs() < 1e-9, "{s} vs {w}");
    }
    assert_eq!(column(&a, 5), column(&per_s, 5));
}

#[test]
fn sweep_to_stdout_with_svg() {
    let dir = tempfile::tempdir().unwrap();
    let o = chirp_qkd(
        &["sweep", "--svg", "k.svg", "--set", "l_steps=10"],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 12);
    let svg = fs::read_to_string(dir.path().join("k.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.contains("</svg>"));
}

#[test]
fn lmax_matches_library_and_loss() {
    let dir = tempfile::tempdir().unwrap();
    let o = chirp_qkd(&["lmax"], dir.path());
    let cli: f64 = stdout(&o).trim().parse().unwrap();
    let lib = max_distance(
        &ScenarioParams::default(),
        DEFAULT_L_HINT_KM,
        DEFAULT_L_TOL_KM,
    )
    .unwrap();
    assert!((cli - lib).abs() <= DEFAULT_L_TOL_KM);

    let o = chirp_qkd(&["lmax", "--set", "alpha_db_per_km=0.4"], dir.path());
    let lossy: f64 = stdout(&o).trim().parse().unwrap();
    assert!(lossy < cli);
}

#[test]
fn optimize_chirp_defaults_and_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let o = chirp_qkd(&["optimize-chirp", "--out", "scan.csv"], dir.path());
    assert!(o.status.success());
    let c = field(&stdout(&o), "c_star");
    assert!((-0.3..=-0.2).contains(&c), "{c}");
    assert!(field(&stdout(&o), "L_max_star_km") > field(&stdout(&o), "L_max_C0_km"));
    let csv = fs::read_to_string(dir.path().join("scan.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "C,L_max_km");
    assert_eq!(csv.lines().count(), 82);

    let o = chirp_qkd(
        &["optimize-chirp", "--set", "c_min=0.5", "--set", "c_max=2"],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "c_star"), 0.5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn gain_from_chirp_is_larger_at_low_dispersion() {
    let dir = tempfile::tempdir().unwrap();
    let gain = |b: &str| {
        let o = chirp_qkd(
            &["optimize-chirp", "--set", &format!("beta_e26={b}")],
            dir.path(),
        );
        let t = stdout(&o);
        field(&t, "L_max_star_km") / field(&t, "L_max_C0_km")
    };
    assert!(gain("-0.7") > gain("-1.5"));
}

#[test]
fn reproduce_writes_one_csv_per_curve_and_one_svg() {
    let dir = tempfile::tempdir().unwrap();
    for (fig, curves) in [("fig1", 8), ("fig2", 6), ("fig3a", 3)] {
        let out = dir.path().join(fig);
        let o = chirp_qkd(
            &[
                "reproduce",
                fig,
                "--out",
                out.to_str().unwrap(),
                "--set",
                "l_steps=40",
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut csvs = 0;
        let mut svgs = 0;
        for e in fs::read_dir(&out).unwrap() {
            let p = e.unwrap().path();
            match p.extension().and_then(|x| x.to_str()) {
                Some("csv") => {
                    csvs += 1;
                    let text = fs::read_to_string(&p).unwrap();
                    let header = text.lines().next().unwrap();
                    if fig == "fig3a" {
                        assert_eq!(header, "C,L_max_km");
                    } else {
                        assert_eq!(header, "L_km,p_sig,p_w,p_det,p_raw,qber,key_rate");
                    }
                }
                Some("svg") => svgs += 1,
                _ => panic!("unexpected file {}", p.display()),
            }
        }
        assert_eq!((csvs, svgs), (curves, 1), "{fig}");
    }
}

#[test]
fn config_file_precedence_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.conf"),
        "# test\njitter_ps = 4\nwindow_ps = 125\n",
    )
    .unwrap();
    let o = chirp_qkd(
        &[
            "show-config",
            "--config",
            "run.conf",
            "--set",
            "jitter_ps=25",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let t = stdout(&o);
    assert!(t.contains("jitter_ps = 25\n"));
    assert!(t.contains("window_ps = 125\n"));

    fs::write(dir.path().join("echo.conf"), &t).unwrap();
    let o2 = chirp_qkd(&["show-config", "--config", "echo.conf"], dir.path());
    assert_eq!(stdout(&o2), t);

    fs::write(dir.path().join("bad.conf"), "chirp = 0\nnoise = 3\n").unwrap();
    let o = chirp_qkd(&["point", "--config", "bad.conf"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.conf:2"));
    assert!(o.stdout.is_empty());

    let o = chirp_qkd(&["point", "--set", "window_ps=-5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("window_ps"));

    let o = chirp_qkd(&["point", "--config", "missing.conf"], dir.path());
    assert_eq!(o.status.code(), Some(1));

    let o = chirp_qkd(&["reproduce", "fig7"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
