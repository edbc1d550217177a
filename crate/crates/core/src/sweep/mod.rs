//! Parameter sweeps: Monte Carlo success rates per grid point, written as CSV.

mod run;

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub use run::{parse_grid, run_sweep, ExperimentKind, SweepSpec};

pub const CSV_HEADER: [&str; 7] = ["point", "trials", "successes", "p_hat", "stderr", "stat", "errors"];

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub point: f64,
    pub trials: usize,
    pub successes: usize,
    /// Kind-specific statistic, e.g. a mean over successful trials.
    pub stat: f64,
    /// Trials whose solver reported an error; they count as failures.
    pub errors: usize,
}

impl SweepRow {
    pub fn p_hat(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }

    /// `sqrt(p_hat (1 - p_hat) / trials)`.
    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.p_hat();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// True when each estimate is at least the previous one minus `z`
    /// pooled standard errors.
    pub fn non_decreasing_within(&self, z: f64) -> bool {
        self.rows.windows(2).all(|w| {
            let pooled = (w[0].stderr().powi(2) + w[1].stderr().powi(2)).sqrt();
            w[1].p_hat() >= w[0].p_hat() - z * pooled
        })
    }
}

/// `%g`-style rendering with 6 significant digits.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    // rounding may carry into the next decade
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    let exp = if rounded.abs() >= 10f64.powi(exp + 1) { exp + 1 } else { exp };
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("scientific notation");
        let e: i32 = e.parse().expect("exponent");
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if e < 0 { '-' } else { '+' }, e.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv<W: Write>(res: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &res.rows {
        w.write_record([
            format_sig6(r.point),
            r.trials.to_string(),
            r.successes.to_string(),
            format_sig6(r.p_hat()),
            format_sig6(r.stderr()),
            format_sig6(r.stat),
            r.errors.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(res: &SweepResult) -> String {
    let mut buf = Vec::new();
    write_csv(res, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn emit_csv(res: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(res, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(0.5), "0.5");
        assert_eq!(format_sig6(1.0 / 3.0), "0.333333");
        assert_eq!(format_sig6(123456.7), "123457");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(999999.7), "1e+06");
        assert_eq!(format_sig6(0.0000123456), "1.23456e-05");
        assert_eq!(format_sig6(-2.5), "-2.5");
    }

    #[test]
    fn empty_result_is_header_only() {
        assert_eq!(csv_string(&SweepResult::default()), "point,trials,successes,p_hat,stderr,stat,errors\n");
    }

    #[test]
    fn row_statistics() {
        let r = SweepRow {
            point: 0.1,
            trials: 4,
            successes: 1,
            stat: 0.0,
            errors: 0,
        };
        assert_eq!(r.p_hat(), 0.25);
        assert!((r.stderr() - (0.25f64 * 0.75 / 4.0).sqrt()).abs() < 1e-15);
        let res = SweepResult { rows: vec![r] };
        assert_eq!(csv_string(&res).lines().nth(1).unwrap(), "0.1,4,1,0.25,0.216506,0,0");
    }
}
