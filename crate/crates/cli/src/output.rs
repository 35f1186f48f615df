use std::fs;
use std::io::Write;
use std::path::Path;

use chirp_qkd::analysis::{ChirpScanResult, SweepResult};

use crate::error::{CliError, Result};

pub const SWEEP_HEADER: [&str; 7] = ["L_km", "p_sig", "p_w", "p_det", "p_raw", "qber", "key_rate"];
pub const SCAN_HEADER: [&str; 2] = ["C", "L_max_km"];

/// Ten significant digits in C's `%.10g` style: fixed notation for
/// exponents in [−4, 10), scientific otherwise, trailing zeros removed.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..10).contains(&exp) {
        trim_zeros(format!("{:.*}", (9 - exp) as usize, x))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Sweep rows; `rate_scale` multiplies the key-rate column (1/𝔗 for bits/s).
pub fn write_sweep_csv<W: Write>(out: W, sweep: &SweepResult, rate_scale: f64) -> Result<()> {
    let mut w = writer(out);
    w.write_record(SWEEP_HEADER)?;
    for (l, p) in &sweep.rows {
        w.write_record([
            fmt_sig(*l),
            fmt_sig(p.p_sig),
            fmt_sig(p.p_w),
            fmt_sig(p.p_det),
            fmt_sig(p.p_raw),
            fmt_sig(p.qber),
            fmt_sig(p.key_rate * rate_scale),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_scan_csv<W: Write>(out: W, scan: &ChirpScanResult) -> Result<()> {
    let mut w = writer(out);
    w.write_record(SCAN_HEADER)?;
    for (c, l) in &scan.samples {
        w.write_record([fmt_sig(*c), fmt_sig(*l)])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, bytes).map_err(io)
}
