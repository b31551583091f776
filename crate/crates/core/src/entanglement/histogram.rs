use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Count of values that fell outside the binning range and were folded
/// into the nearest boundary bin.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClampReport {
    pub below: usize,
    pub above: usize,
}

/// Normalized histogram of CE values. Bins are right-open except the last,
/// which is closed on both sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeHistogram {
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
    pub sample_count: usize,
    pub clamped: ClampReport,
}

impl CeHistogram {
    /// Wrap precomputed masses. They must be nonnegative and sum to one.
    pub fn from_masses(bin_edges: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        check_edges(&bin_edges)?;
        if masses.len() + 1 != bin_edges.len() {
            return Err(Error::Shape(format!(
                "{} masses for {} bins",
                masses.len(),
                bin_edges.len() - 1
            )));
        }
        if masses.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::Contract("negative or NaN mass".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Contract(format!("masses sum to {total}, not 1")));
        }
        Ok(CeHistogram {
            bin_edges,
            masses,
            sample_count: 0,
            clamped: ClampReport::default(),
        })
    }

    pub fn num_bins(&self) -> usize {
        self.masses.len()
    }
}

/// `bins` equal-width bins over `[low, high]`.
pub fn uniform_edges(low: f64, high: f64, bins: usize) -> Vec<f64> {
    let width = (high - low) / bins as f64;
    (0..=bins)
        .map(|i| if i == bins { high } else { low + width * i as f64 })
        .collect()
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 {
        return Err(Error::Shape("binning needs at least two edges".into()));
    }
    if edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Contract("bin edges must be strictly increasing".into()));
    }
    Ok(())
}

/// Index of the bin holding `value`, clamping out-of-range values to the
/// boundary bins. The second element reports which side was clamped.
pub fn bin_index(value: f64, edges: &[f64]) -> (usize, Option<bool>) {
    let bins = edges.len() - 1;
    if value < edges[0] {
        return (0, Some(false));
    }
    if value > edges[bins] {
        return (bins - 1, Some(true));
    }
    // First edge strictly greater than `value`, minus one: right-open bins.
    let idx = edges.partition_point(|&e| e <= value);
    (idx.saturating_sub(1).min(bins - 1), None)
}

pub fn histogram(values: &[f64], bin_edges: &[f64]) -> Result<CeHistogram> {
    check_edges(bin_edges)?;
    if values.is_empty() {
        return Err(Error::DegenerateInput("histogram of no values".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::DegenerateInput("NaN value in histogram input".into()));
    }
    let mut counts = vec![0usize; bin_edges.len() - 1];
    let mut clamped = ClampReport::default();
    for &v in values {
        let (i, side) = bin_index(v, bin_edges);
        match side {
            Some(false) => clamped.below += 1,
            Some(true) => clamped.above += 1,
            None => {}
        }
        counts[i] += 1;
    }
    let n = values.len() as f64;
    Ok(CeHistogram {
        bin_edges: bin_edges.to_vec(),
        masses: counts.iter().map(|&c| c as f64 / n).collect(),
        sample_count: values.len(),
        clamped,
    })
}

/// Total variation distance `½ Σ_x |P(x) − Q(x)|` between histograms on
/// identical binning.
pub fn tvd(p: &CeHistogram, q: &CeHistogram) -> Result<f64> {
    if p.bin_edges != q.bin_edges {
        return Err(Error::Contract(
            "total variation distance needs identical bin edges".into(),
        ));
    }
    Ok(tvd_masses(&p.masses, &q.masses))
}

pub(crate) fn tvd_masses(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
