//! CSV writers. Files are UTF-8 with LF line endings; floats use six
//! significant digits.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Result, SimError};
use crate::gains::GainReport;
use crate::sweep::{ConvergenceRow, CurvePoint};

pub const CURVE_HEADER: &str = "scheme,side,snr_db,chi,trials,mean_rate_bps_hz,stderr_bps_hz";
pub const CONVERGENCE_HEADER: &str = "snr_db,iteration,mean_rate_bps_hz";
pub const GAIN_HEADER: &str = "benchmark,target_rate_bps_hz,snr_gain_db";

/// Six significant digits in the style of C's `%g`: fixed notation for
/// decimal exponents in `[-5, 6)`, otherwise `d.ddddde±x`, trailing zeros
/// trimmed.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.5e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mant));
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn curves_csv(points: &[CurvePoint]) -> String {
    let mut s = String::with_capacity(64 * (points.len() + 1));
    s.push_str(CURVE_HEADER);
    s.push('\n');
    for p in points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            p.scheme.kind.name(),
            p.scheme.side.name(),
            fmt_sig6(p.snr_db),
            fmt_sig6(p.chi),
            p.trials,
            fmt_sig6(p.mean_rate),
            fmt_sig6(p.stderr)
        );
    }
    s
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{}", fmt_sig6(r.snr_db), r.iteration, fmt_sig6(r.mean_rate));
    }
    s
}

pub fn gains_csv(report: &GainReport) -> String {
    let mut s = String::from(GAIN_HEADER);
    s.push('\n');
    for e in &report.entries {
        let _ = writeln!(s, "{},{},{}", e.benchmark, fmt_sig6(report.target_rate), fmt_sig6(e.snr_gain_db));
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| SimError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gains::GainEntry;
    use polarform_core::{Scheme, SchemeKind};

    #[test]
    fn sig6_formatting() {
        assert_eq!(fmt_sig6(0.0), "0");
        assert_eq!(fmt_sig6(-0.0), "0");
        assert_eq!(fmt_sig6(1.0), "1");
        assert_eq!(fmt_sig6(4.523500691), "4.5235");
        assert_eq!(fmt_sig6(4.5235069), "4.52351");
        assert_eq!(fmt_sig6(-5.0), "-5");
        assert_eq!(fmt_sig6(0.2), "0.2");
        assert_eq!(fmt_sig6(123456.7), "123457");
        assert_eq!(fmt_sig6(1234567.0), "1.23457e6");
        assert_eq!(fmt_sig6(9.9999999), "10");
        assert_eq!(fmt_sig6(0.000123456789), "0.000123457");
        assert_eq!(fmt_sig6(1.5e-7), "1.5e-7");
        assert_eq!(fmt_sig6(f64::NAN), "nan");
    }

    #[test]
    fn empty_and_single_outputs() {
        assert_eq!(curves_csv(&[]), format!("{CURVE_HEADER}\n"));
        let p = CurvePoint {
            scheme: Scheme::joint(SchemeKind::Spra),
            snr_db: 10.0,
            chi: 0.2,
            trials: 10000,
            mean_rate: 4.116682851,
            stderr: 0.0123456789,
        };
        let s = curves_csv(&[p]);
        assert_eq!(s.lines().count(), 2);
        assert_eq!(s, format!("{CURVE_HEADER}\nspra,joint,10,0.2,10000,4.11668,0.0123457\n"));
        assert!(!s.contains('\r'));
        let rep = GainReport { target_rate: 4.0, entries: vec![GainEntry { benchmark: "lpa".into(), snr_gain_db: 6.3 }] };
        assert_eq!(gains_csv(&rep), format!("{GAIN_HEADER}\nlpa,4,6.3\n"));
        let rows = [ConvergenceRow { snr_db: 5.0, iteration: 3, mean_rate: 3.0241 }];
        assert_eq!(convergence_csv(&rows), format!("{CONVERGENCE_HEADER}\n5,3,3.0241\n"));
    }

    #[test]
    fn io_errors_carry_path() {
        let err = write_file(Path::new("/nonexistent-dir/x.csv"), "a").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
