//! Estimate reports: per-trial ratio tables, least-squares slope fits, and
//! CSV serialization shared by every verification harness.

use std::fmt::Write as _;

/// One measured trial at one sweep position.
#[derive(Debug, Clone)]
pub struct TrialRow {
    /// Swept parameter value (dyadic level, time, N, lambda, ...).
    pub param: f64,
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
}

impl TrialRow {
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            f64::NAN
        } else {
            self.lhs / self.rhs
        }
    }
}

/// Summary statistics of a sweep.
#[derive(Debug, Clone, Default)]
pub struct ReportSummary {
    pub max_ratio: f64,
    pub median_ratio: f64,
    /// Least-squares slope of log2(median ratio) against log2(param),
    /// when the sweep has >= 2 distinct parameter values.
    pub slope: Option<f64>,
    pub notes: Vec<String>,
}

/// Result of one estimate-verification run.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub id: String,
    pub seed: u64,
    pub params: Vec<(String, String)>,
    pub trials: Vec<TrialRow>,
    pub summary: ReportSummary,
    pub pass: bool,
}

impl EstimateReport {
    pub fn new(id: &str, seed: u64) -> Self {
        EstimateReport {
            id: id.to_string(),
            seed,
            params: Vec::new(),
            trials: Vec::new(),
            summary: ReportSummary::default(),
            pass: false,
        }
    }

    pub fn param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, param: f64, trial: usize, lhs: f64, rhs: f64) {
        self.trials.push(TrialRow { param, trial, lhs, rhs });
    }

    /// Median ratio per distinct parameter value, in parameter order.
    pub fn medians(&self) -> Vec<(f64, f64)> {
        let mut params: Vec<f64> = self.trials.iter().map(|t| t.param).collect();
        params.sort_by(f64::total_cmp);
        params.dedup();
        params
            .into_iter()
            .map(|p| {
                let mut rs: Vec<f64> = self
                    .trials
                    .iter()
                    .filter(|t| t.param == p && t.ratio().is_finite())
                    .map(|t| t.ratio())
                    .collect();
                rs.sort_by(f64::total_cmp);
                let med = if rs.is_empty() {
                    f64::NAN
                } else {
                    rs[rs.len() / 2]
                };
                (p, med)
            })
            .collect()
    }

    /// Fill the summary: max/median over all finite ratios and the fitted
    /// log2-log2 slope of the per-parameter medians.
    pub fn summarize(&mut self) {
        let mut rs: Vec<f64> = self
            .trials
            .iter()
            .map(|t| t.ratio())
            .filter(|r| r.is_finite())
            .collect();
        rs.sort_by(f64::total_cmp);
        if !rs.is_empty() {
            self.summary.max_ratio = *rs.last().unwrap();
            self.summary.median_ratio = rs[rs.len() / 2];
        }
        let meds = self.medians();
        let pts: Vec<(f64, f64)> = meds
            .iter()
            .filter(|(p, m)| *p > 0.0 && m.is_finite() && *m > 0.0)
            .map(|(p, m)| (p.log2(), m.log2()))
            .collect();
        self.summary.slope = fit_slope(&pts);
    }

    /// Long-format CSV: `param,trial,lhs,rhs,ratio` rows preceded by `#`
    /// metadata lines. Bit-stable across runs with the same seed.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# id = {}", self.id);
        let _ = writeln!(s, "# seed = {}", self.seed);
        for (k, v) in &self.params {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "# pass = {}", self.pass);
        let _ = writeln!(s, "# max_ratio = {:.17e}", self.summary.max_ratio);
        let _ = writeln!(s, "# median_ratio = {:.17e}", self.summary.median_ratio);
        if let Some(sl) = self.summary.slope {
            let _ = writeln!(s, "# slope = {sl:.17e}");
        }
        for n in &self.summary.notes {
            let _ = writeln!(s, "# note = {n}");
        }
        let _ = writeln!(s, "param,trial,lhs,rhs,ratio");
        for t in &self.trials {
            let _ = writeln!(
                s,
                "{:.17e},{},{:.17e},{:.17e},{:.17e}",
                t.param,
                t.trial,
                t.lhs,
                t.rhs,
                t.ratio()
            );
        }
        s
    }

    pub fn one_line(&self) -> String {
        format!(
            "{}: {} (max ratio {:.3e}, median {:.3e}{})",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.summary.max_ratio,
            self.summary.median_ratio,
            match self.summary.slope {
                Some(sl) => format!(", slope {sl:+.3}"),
                None => String::new(),
            }
        )
    }
}

/// Least-squares slope of `y` against `x`; `None` with fewer than 2 distinct
/// abscissae.
pub fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = (1..6)
            .map(|k| {
                let x = k as f64;
                (x, -2.0 * x + 1.0)
            })
            .collect();
        let s = fit_slope(&pts).unwrap();
        assert!((s + 2.0).abs() < 1e-12);
        assert!(fit_slope(&pts[..1]).is_none());
    }

    #[test]
    fn report_summary_and_csv() {
        let mut r = EstimateReport::new("demo", 1);
        for k in 1..=4u32 {
            for trial in 0..3 {
                let p = f64::from(1u32 << k);
                r.push(p, trial, p.sqrt() * (1.0 + 0.01 * trial as f64), 1.0);
            }
        }
        r.summarize();
        let slope = r.summary.slope.unwrap();
        assert!((slope - 0.5).abs() < 0.01, "slope {slope}");
        let csv = r.to_csv();
        assert!(csv.contains("param,trial,lhs,rhs,ratio"));
        assert_eq!(csv, r.to_csv(), "serialization must be deterministic");
    }

    #[test]
    fn zero_rhs_reported_as_skipped() {
        let mut r = EstimateReport::new("skip", 1);
        r.push(1.0, 0, 0.0, 0.0);
        r.summarize();
        assert_eq!(r.summary.max_ratio, 0.0);
    }
}
