//! Structured experiment reports: per-trial records, verdicts, scaling
//! series with log-log fits, and JSON/CSV emission.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;

/// Covering density of the plane by unit disks, kept as a named constant for
/// report annotation.
pub const THETA_2: f64 = 2.0 * std::f64::consts::PI / 5.196152422706632; // 2*pi/sqrt(27)

/// Volume of the unit d-ball (report annotation next to THETA_2).
pub fn unit_ball_volume(d: usize) -> f64 {
    let df = d as f64;
    std::f64::consts::PI.powf(df / 2.0) / gamma(df / 2.0 + 1.0)
}

/// Lanczos approximation, accurate far beyond annotation needs.
fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEFFS: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = COEFFS[0];
        let t = x + G + 0.5;
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

/// One trial of an experiment. `violations` holds human-readable descriptions
/// of every asserted inequality or identity the trial broke.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub skipped: bool,
    #[serde(flatten)]
    pub data: Map<String, Value>,
}

impl TrialRecord {
    pub fn new(trial: usize, seed: u64) -> Self {
        TrialRecord { trial, seed, violations: Vec::new(), skipped: false, data: Map::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn set_json(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    pub fn violate(&mut self, message: impl Into<String>) {
        self.violations.push(message.into());
    }

    pub fn skip(&mut self, reason: impl Into<String>) {
        self.skipped = true;
        self.data.insert("skip_reason".into(), Value::String(reason.into()));
    }
}

/// Structured record of one verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: Value,
    pub trials: Vec<TrialRecord>,
    pub summary: Map<String, Value>,
    pub verdict: Verdict,
    pub wall_clock_secs: f64,
}

/// Fraction of skipped trials above which a violation-free run is reported
/// as indeterminate rather than passing.
const SKIP_FRACTION_FOR_INDETERMINATE: f64 = 0.05;

impl ExperimentReport {
    /// Assembles a report; the verdict is `fail` iff at least one trial
    /// recorded a violation, `indeterminate` when too many trials were
    /// skipped (hull degeneracies and the like), and `pass` otherwise.
    pub fn assemble(
        experiment: &str,
        config: Value,
        trials: Vec<TrialRecord>,
        mut summary: Map<String, Value>,
        wall_clock_secs: f64,
    ) -> Self {
        let n_violations: usize = trials.iter().map(|t| t.violations.len()).sum();
        let n_skipped = trials.iter().filter(|t| t.skipped).count();
        let verdict = if n_violations > 0 {
            Verdict::Fail
        } else if !trials.is_empty()
            && (n_skipped as f64) / (trials.len() as f64) > SKIP_FRACTION_FOR_INDETERMINATE
        {
            Verdict::Indeterminate
        } else {
            Verdict::Pass
        };
        summary.insert("trials".into(), trials.len().into());
        summary.insert("violations".into(), n_violations.into());
        summary.insert("skipped".into(), n_skipped.into());
        ExperimentReport {
            experiment: experiment.to_string(),
            config,
            trials,
            summary,
            verdict,
            wall_clock_secs,
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }

    /// Flat CSV of the trial records: fixed columns, then the union of the
    /// data keys in sorted order.
    pub fn to_csv(&self) -> String {
        let mut keys: Vec<String> = Vec::new();
        for t in &self.trials {
            for k in t.data.keys() {
                if !keys.contains(k) {
                    keys.push(k.clone());
                }
            }
        }
        keys.sort();
        let mut out = String::from("trial,seed,skipped,violations");
        for k in &keys {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        for t in &self.trials {
            out.push_str(&format!("{},{},{},{}", t.trial, t.seed, t.skipped, t.violations.len()));
            for k in &keys {
                out.push(',');
                if let Some(v) = t.data.get(k) {
                    match v {
                        Value::String(s) => out.push_str(&s.replace(',', ";")),
                        other => out.push_str(&other.to_string().replace(',', ";")),
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Least-squares fit of y = slope * x + intercept.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub slope_stderr: f64,
}

pub fn least_squares(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    let dof = (xs.len() as f64 - 2.0).max(1.0);
    let slope_stderr = (ss_res / dof / sxx).sqrt();
    LineFit { slope, intercept, r2, slope_stderr }
}

/// A series of (spacing, measured quantities) pairs with its log-log fit of
/// g_k against the Hausdorff distance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub spacing: f64,
    pub delta_h: f64,
    pub f0: u64,
    pub g_k: f64,
    pub witnesses: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingSeries {
    pub points: Vec<ScalingPoint>,
    pub fit: Option<LineFit>,
}

impl ScalingSeries {
    /// Requires at least 5 points spanning at least one decade in delta_h
    /// before reporting a fit.
    pub fn new(points: Vec<ScalingPoint>) -> Self {
        let fit = if points.len() >= 5 {
            let lo = points.iter().map(|p| p.delta_h).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p.delta_h).fold(0.0f64, f64::max);
            if hi / lo >= 10.0 && points.iter().all(|p| p.g_k > 0.0) {
                let xs: Vec<f64> = points.iter().map(|p| p.delta_h.ln()).collect();
                let ys: Vec<f64> = points.iter().map(|p| p.g_k.ln()).collect();
                Some(least_squares(&xs, &ys))
            } else {
                None
            }
        } else {
            None
        };
        ScalingSeries { points, fit }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("spacing,delta_h,f0,g_k,witnesses\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.spacing, p.delta_h, p.f0, p.g_k, p.witnesses
            ));
        }
        out
    }
}

/// SplitMix64, used to derive independent per-trial seeds.
pub fn mix_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E3779B97F4A7C15) ^ index.wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_exact_line() {
        let xs: Vec<f64> = (1..=6).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 1.5 * x).collect();
        let fit = least_squares(&xs, &ys);
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!((fit.intercept - 3.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert!(fit.slope_stderr < 1e-10);
    }

    #[test]
    fn series_needs_five_points_and_a_decade() {
        let mk = |delta: f64| ScalingPoint { spacing: 0.1, delta_h: delta, f0: 10, g_k: 1.0 / delta, witnesses: 0 };
        let s = ScalingSeries::new(vec![mk(0.1), mk(0.05), mk(0.02), mk(0.01)]);
        assert!(s.fit.is_none());
        let s = ScalingSeries::new(vec![mk(0.1), mk(0.05), mk(0.02), mk(0.015), mk(0.009)]);
        assert!(s.fit.is_some());
        assert!((s.fit.unwrap().slope + 1.0).abs() < 1e-9);
    }

    #[test]
    fn verdict_rules() {
        let mut ok = TrialRecord::new(0, 1);
        ok.set("x", 1);
        let mut bad = TrialRecord::new(1, 2);
        bad.violate("broken");
        let report = ExperimentReport::assemble(
            "t",
            Value::Null,
            vec![ok.clone(), bad],
            Map::new(),
            0.1,
        );
        assert_eq!(report.verdict, Verdict::Fail);

        let mut skipped = TrialRecord::new(1, 2);
        skipped.skip("hull degenerate");
        let report = ExperimentReport::assemble(
            "t",
            Value::Null,
            vec![ok.clone(), skipped],
            Map::new(),
            0.1,
        );
        assert_eq!(report.verdict, Verdict::Indeterminate);

        let report =
            ExperimentReport::assemble("t", Value::Null, vec![ok], Map::new(), 0.1);
        assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn theta_2_value() {
        assert!((THETA_2 - 1.2091995761).abs() < 1e-9);
        assert!(THETA_2 > 0.0);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-9);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-9);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
        assert!((unit_ball_volume(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn seeds_are_reproducible_and_spread() {
        assert_eq!(mix_seed(1, 2, 3), mix_seed(1, 2, 3));
        assert_ne!(mix_seed(1, 2, 3), mix_seed(1, 2, 4));
        assert_ne!(mix_seed(1, 2, 3), mix_seed(1, 3, 3));
    }
}
