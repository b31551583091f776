use serde::{Deserialize, Serialize};

use crate::ansatz::{AnsatzFamily, AnsatzSpec};
use crate::error::{Error, Result};
use crate::rng::derive_seed;

use super::anneal::AnnealConfig;
use super::run::train_generator;
use super::target::TargetDistribution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub family: AnsatzFamily,
    /// Held-out TVD per target, in target order.
    pub tvds: Vec<f64>,
    pub mean_tvd: f64,
    pub median_tvd: f64,
    /// Population variance across targets.
    pub tvd_variance: f64,
    pub ranks: Vec<f64>,
    pub avg_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub targets: Vec<String>,
    pub rows: Vec<FamilySummary>,
}

/// Ranks 1..=m, lowest value first; tied values share the mean of the ranks
/// they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end.
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

/// Summarizes a `families × targets` TVD matrix.
pub fn summarize(families: &[AnsatzFamily], targets: Vec<String>, tvds: Vec<Vec<f64>>) -> Result<ComparisonTable> {
    if families.len() < 2 {
        return Err(Error::Contract("comparison needs at least two families".into()));
    }
    if tvds.len() != families.len() || tvds.iter().any(|row| row.len() != targets.len()) {
        return Err(Error::Shape("TVD matrix does not match families × targets".into()));
    }
    if targets.is_empty() {
        return Err(Error::Contract("comparison needs at least one target".into()));
    }
    let mut ranks = vec![Vec::with_capacity(targets.len()); families.len()];
    for t in 0..targets.len() {
        let column: Vec<f64> = tvds.iter().map(|row| row[t]).collect();
        for (f, r) in average_ranks(&column).into_iter().enumerate() {
            ranks[f].push(r);
        }
    }
    let rows = families
        .iter()
        .zip(tvds)
        .zip(ranks)
        .map(|((&family, tvds), ranks)| {
            let m = tvds.len() as f64;
            let mean_tvd = tvds.iter().sum::<f64>() / m;
            let mut sorted = tvds.clone();
            sorted.sort_by(f64::total_cmp);
            let mid = sorted.len() / 2;
            let median_tvd = if sorted.len() % 2 == 1 {
                sorted[mid]
            } else {
                (sorted[mid - 1] + sorted[mid]) / 2.0
            };
            let tvd_variance = tvds.iter().map(|v| (v - mean_tvd).powi(2)).sum::<f64>() / m;
            let avg_rank = ranks.iter().sum::<f64>() / m;
            FamilySummary {
                family,
                tvds,
                mean_tvd,
                median_tvd,
                tvd_variance,
                ranks,
                avg_rank,
            }
        })
        .collect();
    Ok(ComparisonTable { targets, rows })
}

/// Trains every family against every target and tabulates held-out TVDs.
///
/// Each run gets its own seed derived from `config.seed`, the family and the
/// target index; the remaining settings are shared.
pub fn compare_ansatzes(
    targets: &[TargetDistribution],
    families: &[AnsatzFamily],
    num_qubits: usize,
    layers: usize,
    config: &AnnealConfig,
) -> Result<ComparisonTable> {
    if families.len() < 2 {
        return Err(Error::Contract("comparison needs at least two families".into()));
    }
    let mut tvds = Vec::with_capacity(families.len());
    for &family in families {
        let spec = AnsatzSpec {
            family,
            num_qubits,
            layers,
        };
        spec.validate()?;
        let mut row = Vec::with_capacity(targets.len());
        for (t, target) in targets.iter().enumerate() {
            let mut c = config.clone();
            let count = crate::ansatz::param_count(&spec);
            let bound = config.bounds.first().copied().unwrap_or([-std::f64::consts::TAU, std::f64::consts::TAU]);
            c.bounds = vec![bound; count];
            c.seed = derive_seed(config.seed, &format!("compare/{family}/{t}"));
            row.push(train_generator(&spec, target, &c)?.final_tvd);
        }
        tvds.push(row);
    }
    summarize(families, targets.iter().map(|t| t.label()).collect(), tvds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use AnsatzFamily::*;

    #[test]
    fn tie_convention() {
        assert_eq!(average_ranks(&[0.2, 0.2, 0.2, 0.2]), vec![2.5; 4]);
        assert_eq!(average_ranks(&[0.3, 0.1, 0.3, 0.0]), vec![3.5, 2.0, 3.5, 1.0]);
    }

    #[test]
    fn dominating_family_ranks_first() {
        let table = summarize(
            &[A1, A2, A3, A4],
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![0.3, 0.4, 0.2],
                vec![0.1, 0.1, 0.1],
                vec![0.5, 0.2, 0.3],
                vec![0.2, 0.6, 0.4],
            ],
        )
        .unwrap();
        assert_eq!(table.rows[1].avg_rank, 1.0);
        for row in &table.rows {
            assert!(row.ranks.iter().all(|r| (1.0..=4.0).contains(r)));
        }
        let a1 = &table.rows[0];
        assert!((a1.mean_tvd - 0.3).abs() < 1e-12);
        assert_eq!(a1.median_tvd, 0.3);
        assert!((a1.tvd_variance - 0.02 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn needs_two_families() {
        assert!(summarize(&[A1], vec!["a".into()], vec![vec![0.1]]).is_err());
    }
}
