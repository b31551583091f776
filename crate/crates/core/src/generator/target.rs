use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, Weibull};

use crate::entanglement::{histogram, uniform_edges, CeHistogram};
use crate::error::{Error, Result};

pub const DEFAULT_CE_MAX: f64 = 0.4;
pub const DEFAULT_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Uniform,
    Gaussian,
    WeibullLeft,
    WeibullRight,
    Empirical,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetKind::Uniform => "uniform",
            TargetKind::Gaussian => "gaussian",
            TargetKind::WeibullLeft => "weibull_left",
            TargetKind::WeibullRight => "weibull_right",
            TargetKind::Empirical => "empirical",
        })
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(TargetKind::Uniform),
            "gaussian" => Ok(TargetKind::Gaussian),
            "weibull_left" => Ok(TargetKind::WeibullLeft),
            "weibull_right" => Ok(TargetKind::WeibullRight),
            "empirical" => Ok(TargetKind::Empirical),
            other => Err(Error::Contract(format!("unknown target kind {other:?}"))),
        }
    }
}

/// A target CE density, discretized onto histogram bins over `[0, ce_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetDistribution {
    pub kind: TargetKind,
    pub params: BTreeMap<String, f64>,
    pub ce_max: f64,
    pub bin_edges: Vec<f64>,
    pub masses: Vec<f64>,
}

impl TargetDistribution {
    pub fn uniform(ce_max: f64, bins: usize) -> Result<Self> {
        let edges = edges(ce_max, bins)?;
        let masses = normalize(edges.windows(2).map(|w| w[1] - w[0]).collect())?;
        Ok(Self::assemble(TargetKind::Uniform, BTreeMap::new(), ce_max, edges, masses))
    }

    /// Normal density truncated to the binning range.
    pub fn gaussian(mu: f64, sigma: f64, ce_max: f64, bins: usize) -> Result<Self> {
        let dist = Normal::new(mu, sigma).map_err(|e| Error::Contract(e.to_string()))?;
        let edges = edges(ce_max, bins)?;
        let masses = normalize(cdf_masses(&edges, |x| dist.cdf(x)))?;
        let params = BTreeMap::from([("mu".to_string(), mu), ("sigma".to_string(), sigma)]);
        Ok(Self::assemble(TargetKind::Gaussian, params, ce_max, edges, masses))
    }

    /// Weibull density with the given shape and scale, truncated to the
    /// binning range. Mass concentrates at low CE.
    pub fn weibull_left(shape: f64, scale: f64, ce_max: f64, bins: usize) -> Result<Self> {
        let dist = Weibull::new(shape, scale).map_err(|e| Error::Contract(e.to_string()))?;
        let edges = edges(ce_max, bins)?;
        let masses = normalize(cdf_masses(&edges, |x| dist.cdf(x)))?;
        let params = BTreeMap::from([("shape".to_string(), shape), ("scale".to_string(), scale)]);
        Ok(Self::assemble(TargetKind::WeibullLeft, params, ce_max, edges, masses))
    }

    /// The left Weibull reflected across `reflect_point` (x ↦ 2r − x).
    /// On binning symmetric about the reflection point the masses are the
    /// left masses in reverse order.
    pub fn weibull_right(
        shape: f64,
        scale: f64,
        reflect_point: f64,
        ce_max: f64,
        bins: usize,
    ) -> Result<Self> {
        let dist = Weibull::new(shape, scale).map_err(|e| Error::Contract(e.to_string()))?;
        let edges = edges(ce_max, bins)?;
        let symmetric = edges
            .iter()
            .zip(edges.iter().rev())
            .all(|(a, b)| (a + b - 2.0 * reflect_point).abs() < 1e-12);
        let masses = if symmetric {
            let mut m = normalize(cdf_masses(&edges, |x| dist.cdf(x)))?;
            m.reverse();
            m
        } else {
            // P(2r − b ≤ X ≤ 2r − a) for each bin [a, b].
            let raw = edges
                .windows(2)
                .map(|w| {
                    let hi = 2.0 * reflect_point - w[0];
                    let lo = 2.0 * reflect_point - w[1];
                    dist.cdf(hi) - dist.cdf(lo)
                })
                .collect();
            normalize(raw)?
        };
        let params = BTreeMap::from([
            ("shape".to_string(), shape),
            ("scale".to_string(), scale),
            ("reflect_point".to_string(), reflect_point),
        ]);
        Ok(Self::assemble(TargetKind::WeibullRight, params, ce_max, edges, masses))
    }

    /// Histogram of observed CE values, e.g. from an amplitude-encoded
    /// classical dataset or a sensor ensemble.
    pub fn empirical(values: &[f64], ce_max: f64, bins: usize) -> Result<Self> {
        let edges = edges(ce_max, bins)?;
        let h = histogram(values, &edges)?;
        let params = BTreeMap::from([("count".to_string(), values.len() as f64)]);
        Ok(Self::assemble(TargetKind::Empirical, params, ce_max, edges, h.masses))
    }

    /// Default stress-test targets over `[0, 0.4]`.
    pub fn default_of(kind: TargetKind) -> Result<Self> {
        match kind {
            TargetKind::Uniform => Self::uniform(DEFAULT_CE_MAX, DEFAULT_BINS),
            TargetKind::Gaussian => Self::gaussian(0.2, 0.05, DEFAULT_CE_MAX, DEFAULT_BINS),
            TargetKind::WeibullLeft => Self::weibull_left(1.2, 0.05, DEFAULT_CE_MAX, DEFAULT_BINS),
            TargetKind::WeibullRight => {
                Self::weibull_right(1.2, 0.05, 0.2, DEFAULT_CE_MAX, DEFAULT_BINS)
            }
            TargetKind::Empirical => Err(Error::Contract(
                "an empirical target needs CE values".into(),
            )),
        }
    }

    fn assemble(
        kind: TargetKind,
        params: BTreeMap<String, f64>,
        ce_max: f64,
        bin_edges: Vec<f64>,
        masses: Vec<f64>,
    ) -> Self {
        TargetDistribution {
            kind,
            params,
            ce_max,
            bin_edges,
            masses,
        }
    }

    pub fn histogram(&self) -> CeHistogram {
        CeHistogram::from_masses(self.bin_edges.clone(), self.masses.clone())
            .expect("target masses are a probability vector")
    }

    /// Short label such as `gaussian(mu=0.2,sigma=0.05)`.
    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.kind, params.join(","))
    }
}

fn edges(ce_max: f64, bins: usize) -> Result<Vec<f64>> {
    if !(ce_max > 0.0) || bins == 0 {
        return Err(Error::Contract(format!(
            "target binning needs ce_max > 0 and bins > 0 (got {ce_max}, {bins})"
        )));
    }
    Ok(uniform_edges(0.0, ce_max, bins))
}

fn cdf_masses(edges: &[f64], cdf: impl Fn(f64) -> f64) -> Vec<f64> {
    edges.windows(2).map(|w| (cdf(w[1]) - cdf(w[0])).max(0.0)).collect()
}

fn normalize(raw: Vec<f64>) -> Result<Vec<f64>> {
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateInput(
            "target density has no mass on the binning range".into(),
        ));
    }
    Ok(raw.into_iter().map(|m| m / total).collect())
}
