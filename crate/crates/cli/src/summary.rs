//! Per (domain, mode) aggregates with normal-approximation 95% intervals.

use std::fmt::Write;

use crate::rows::Row;

const Z95: f64 = 1.96;

/// Sample mean with the half-width of its 95% interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub n: usize,
    pub mean: f64,
    pub half_width: f64,
}

impl Estimate {
    pub fn low(&self) -> f64 {
        self.mean - self.half_width
    }

    pub fn high(&self) -> f64 {
        self.mean + self.half_width
    }
}

fn variance(xs: &[f64], mean: f64) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn estimate(xs: &[f64]) -> Estimate {
    let m = mean(xs);
    let hw = if xs.len() < 2 {
        0.0
    } else {
        Z95 * (variance(xs, m) / xs.len() as f64).sqrt()
    };
    Estimate {
        n: xs.len(),
        mean: m,
        half_width: hw,
    }
}

/// Difference of means `a - b` of two independent samples.
pub fn gap(a: &[f64], b: &[f64]) -> Estimate {
    let (ma, mb) = (mean(a), mean(b));
    let se = (variance(a, ma) / a.len() as f64 + variance(b, mb) / b.len() as f64).sqrt();
    Estimate {
        n: a.len().min(b.len()),
        mean: ma - mb,
        half_width: Z95 * se,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub domain: String,
    pub mode: String,
    pub success: Estimate,
    pub efficiency: Estimate,
    pub planning_time: f64,
    pub rollouts: f64,
    efficiencies: Vec<f64>,
}

impl Group {
    pub fn efficiencies(&self) -> &[f64] {
        &self.efficiencies
    }
}

/// Groups rows by (domain, mode) in order of first appearance.
pub fn summarize(rows: &[Row]) -> Vec<Group> {
    let mut keys: Vec<(&str, &str)> = Vec::new();
    for r in rows {
        let k = (r.domain.as_str(), r.mode.as_str());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .map(|(d, m)| {
            let g: Vec<&Row> = rows
                .iter()
                .filter(|r| r.domain == d && r.mode == m)
                .collect();
            let succ: Vec<f64> = g.iter().map(|r| r.success as f64).collect();
            let eff: Vec<f64> = g.iter().map(|r| r.efficiency).collect();
            Group {
                domain: d.to_string(),
                mode: m.to_string(),
                success: estimate(&succ),
                efficiency: estimate(&eff),
                planning_time: mean(&g.iter().map(|r| r.planning_time_s).collect::<Vec<_>>()),
                rollouts: mean(&g.iter().map(|r| r.rollouts as f64).collect::<Vec<_>>()),
                efficiencies: eff,
            }
        })
        .collect()
}

/// Plain-text table, plus each mode's efficiency gap over `reactive` when
/// both ran on a domain.
pub fn render(groups: &[Group]) -> String {
    let mut out = String::new();
    if groups.is_empty() {
        out.push_str("no rows\n");
        return out;
    }
    let _ = writeln!(
        out,
        "{:<10} {:<10} {:>6}  {:<17}  {:<21}  {:>11}  {:>9}",
        "domain",
        "mode",
        "tasks",
        "success (95% CI)",
        "efficiency (95% CI)",
        "plan s/task",
        "rollouts"
    );
    for g in groups {
        let _ = writeln!(
            out,
            "{:<10} {:<10} {:>6}  {:<17}  {:<21}  {:>11.4}  {:>9.1}",
            g.domain,
            g.mode,
            g.success.n,
            format!("{:.3} ± {:.3}", g.success.mean, g.success.half_width),
            format!("{:.4} ± {:.4}", g.efficiency.mean, g.efficiency.half_width),
            g.planning_time,
            g.rollouts
        );
    }
    let mut gaps = String::new();
    for g in groups.iter().filter(|g| g.mode != "reactive") {
        if let Some(base) = groups
            .iter()
            .find(|b| b.domain == g.domain && b.mode == "reactive")
        {
            let d = gap(g.efficiencies(), base.efficiencies());
            let _ = writeln!(
                gaps,
                "{:<10} {:<10} {:+.4} ± {:.4}",
                g.domain, g.mode, d.mean, d.half_width
            );
        }
    }
    if !gaps.is_empty() {
        out.push_str("\nefficiency gap over reactive (95% CI)\n");
        out.push_str(&gaps);
    }
    out
}
