//! Run configuration: one TOML file with a section per pipeline stage.
//! Every field has a default and unknown keys are rejected.

use std::f64::consts::TAU;
use std::path::PathBuf;

use cedist::ansatz::{AnsatzFamily, AnsatzSpec};
use cedist::generator::{AnnealConfig, CeEstimator, TargetDistribution, TargetKind};
use cedist::qml::ClassifierSpec;
use cedist::sensors::{DarkMatterConfig, SoilConfig};
use cedist::sim::NoiseSpec;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Root seed; every component derives its own seed from it.
    pub seed: u64,
    pub generate: GenerateSection,
    pub target: TargetSection,
    pub anneal: AnnealSection,
    pub noise: NoiseSpec,
    pub diversity: DiversitySection,
    pub sensors: SensorsSection,
    pub classify: ClassifySection,
    pub compare: CompareSection,
    pub ce: CeSection,
    pub swap: SwapSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 7,
            generate: Default::default(),
            target: Default::default(),
            anneal: Default::default(),
            noise: NoiseSpec::default(),
            diversity: Default::default(),
            sensors: Default::default(),
            classify: Default::default(),
            compare: Default::default(),
            ce: Default::default(),
            swap: Default::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenerateSection {
    pub family: AnsatzFamily,
    pub num_qubits: usize,
    pub layers: usize,
    pub dataset_size: usize,
    /// Readout shots per state for sampling estimators; 0 is analytic.
    pub shots: usize,
    /// Run dataset circuits through the `[noise]` model.
    pub noisy: bool,
}

impl Default for GenerateSection {
    fn default() -> Self {
        GenerateSection {
            family: AnsatzFamily::A4,
            num_qubits: 4,
            layers: 1,
            dataset_size: 1000,
            shots: 0,
            noisy: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TargetSection {
    pub kind: TargetKind,
    pub ce_max: f64,
    pub bins: usize,
    pub mu: f64,
    pub sigma: f64,
    pub shape: f64,
    pub scale: f64,
    pub reflect_point: f64,
    /// CE values for an empirical target: a dataset file or whitespace
    /// separated numbers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values_file: Option<PathBuf>,
}

impl Default for TargetSection {
    fn default() -> Self {
        TargetSection {
            kind: TargetKind::Gaussian,
            ce_max: 0.4,
            bins: 20,
            mu: 0.2,
            sigma: 0.05,
            shape: 1.2,
            scale: 0.05,
            reflect_point: 0.2,
            values_file: None,
        }
    }
}

impl TargetSection {
    pub fn build(&self) -> Result<TargetDistribution, CliError> {
        self.build_kind(self.kind)
    }

    pub fn build_kind(&self, kind: TargetKind) -> Result<TargetDistribution, CliError> {
        let t = match kind {
            TargetKind::Uniform => TargetDistribution::uniform(self.ce_max, self.bins),
            TargetKind::Gaussian => TargetDistribution::gaussian(self.mu, self.sigma, self.ce_max, self.bins),
            TargetKind::WeibullLeft => TargetDistribution::weibull_left(self.shape, self.scale, self.ce_max, self.bins),
            TargetKind::WeibullRight => {
                TargetDistribution::weibull_right(self.shape, self.scale, self.reflect_point, self.ce_max, self.bins)
            }
            TargetKind::Empirical => {
                let path = self
                    .values_file
                    .as_ref()
                    .ok_or_else(|| CliError::Config("target.values_file is required for an empirical target".into()))?;
                let values = crate::commands::load_ce_values(path)?;
                TargetDistribution::empirical(&values, self.ce_max, self.bins)
            }
        };
        t.map_err(|e| CliError::Config(format!("[target] {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnnealSection {
    /// Every angle ranges over `[-bound, bound]`.
    pub bound: f64,
    pub max_iterations: usize,
    pub initial_temperature: f64,
    pub visiting_shape: f64,
    pub acceptance_shape: f64,
    pub local_search: bool,
    pub samples_per_eval: usize,
    /// `full`, `nzp`, `ce1` or `ce_k:<k>`; defaults to `full` up to 8 qubits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ce_method: Option<CeEstimator>,
    pub diversity_weight: f64,
    pub diversity_pairs: usize,
    pub diversity_threshold: f64,
    pub true_haar: bool,
    pub holdout_samples: usize,
}

impl Default for AnnealSection {
    fn default() -> Self {
        let d = AnnealConfig::new(1, 4);
        AnnealSection {
            bound: TAU,
            max_iterations: d.max_iterations,
            initial_temperature: d.initial_temperature,
            visiting_shape: d.visiting_shape,
            acceptance_shape: d.acceptance_shape,
            local_search: d.local_search,
            samples_per_eval: d.samples_per_eval,
            ce_method: None,
            diversity_weight: d.diversity_weight,
            diversity_pairs: d.diversity_pairs,
            diversity_threshold: d.diversity_threshold,
            true_haar: d.true_haar,
            holdout_samples: d.holdout_samples,
        }
    }
}

impl AnnealSection {
    pub fn to_config(&self, param_count: usize, num_qubits: usize, seed: u64) -> Result<AnnealConfig, CliError> {
        if !(self.bound > 0.0 && self.bound.is_finite()) {
            return Err(CliError::Config(format!("anneal.bound must be positive, got {}", self.bound)));
        }
        let mut c = AnnealConfig::new(param_count, num_qubits);
        c.bounds = vec![[-self.bound, self.bound]; param_count];
        c.max_iterations = self.max_iterations;
        c.initial_temperature = self.initial_temperature;
        c.visiting_shape = self.visiting_shape;
        c.acceptance_shape = self.acceptance_shape;
        c.local_search = self.local_search;
        c.seed = seed;
        c.samples_per_eval = self.samples_per_eval;
        if let Some(m) = self.ce_method {
            c.ce_method = m;
        }
        c.diversity_weight = self.diversity_weight;
        c.diversity_pairs = self.diversity_pairs;
        c.diversity_threshold = self.diversity_threshold;
        c.true_haar = self.true_haar;
        c.holdout_samples = self.holdout_samples;
        c.validate(num_qubits).map_err(|e| CliError::Config(format!("[anneal] {e}")))?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiversitySection {
    pub pairs_per_bin: usize,
    /// SWAP-test shots per pair; 0 is analytic.
    pub shots: usize,
    pub threshold: f64,
}

impl Default for DiversitySection {
    fn default() -> Self {
        DiversitySection {
            pairs_per_bin: cedist::diversity::DEFAULT_PAIRS_PER_BIN,
            shots: 0,
            threshold: cedist::diversity::DEFAULT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SoilSection {
    pub num_sensor_qubits: usize,
    /// Mean soil-group phase of the high-moisture regime.
    pub phi_soil_high: f64,
    /// Mean soil-group phase of the low-moisture regime.
    pub phi_soil_low: f64,
    pub phi_free: f64,
    pub jitter_sigma: f64,
    pub shots_per_state: usize,
    pub ensemble_size: usize,
}

impl Default for SoilSection {
    fn default() -> Self {
        let high = SoilConfig::high_moisture(0);
        SoilSection {
            num_sensor_qubits: high.num_sensor_qubits,
            phi_soil_high: high.phi_soil_mean,
            phi_soil_low: SoilConfig::low_moisture(0).phi_soil_mean,
            phi_free: high.phi_free,
            jitter_sigma: high.jitter_sigma,
            shots_per_state: high.shots_per_state,
            ensemble_size: high.ensemble_size,
        }
    }
}

impl SoilSection {
    pub fn to_config(&self, phi_soil_mean: f64, seed: u64) -> SoilConfig {
        SoilConfig {
            num_sensor_qubits: self.num_sensor_qubits,
            phi_soil_mean,
            phi_free: self.phi_free,
            jitter_sigma: self.jitter_sigma,
            shots_per_state: self.shots_per_state,
            ensemble_size: self.ensemble_size,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DarkMatterSection {
    pub num_sensor_qubits: usize,
    pub phi_weak: f64,
    pub phi_strong: f64,
    pub jitter_sigma: f64,
    pub ensemble_size: usize,
}

impl Default for DarkMatterSection {
    fn default() -> Self {
        let weak = DarkMatterConfig::weak(0);
        DarkMatterSection {
            num_sensor_qubits: weak.num_sensor_qubits,
            phi_weak: weak.phi,
            phi_strong: DarkMatterConfig::strong(0).phi,
            jitter_sigma: weak.jitter_sigma,
            ensemble_size: weak.ensemble_size,
        }
    }
}

impl DarkMatterSection {
    pub fn to_config(&self, phi: f64, seed: u64) -> DarkMatterConfig {
        DarkMatterConfig {
            num_sensor_qubits: self.num_sensor_qubits,
            phi,
            jitter_sigma: self.jitter_sigma,
            ensemble_size: self.ensemble_size,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SensorsSection {
    pub soil: SoilSection,
    pub dark_matter: DarkMatterSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifySection {
    /// Dataset labelled 0; defaults to `soil_low.txt` in the output directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub low: Option<PathBuf>,
    /// Dataset labelled 1; defaults to `soil_high.txt` in the output directory.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub high: Option<PathBuf>,
    pub samples_per_class: usize,
    pub folds: usize,
    pub max_iterations: usize,
    /// Also score every fold under the `[noise]` model.
    pub noisy: bool,
    pub ansatz_reps: usize,
    pub decision_threshold: f64,
    pub trajectories: usize,
}

impl Default for ClassifySection {
    fn default() -> Self {
        let spec = ClassifierSpec::default();
        ClassifySection {
            low: None,
            high: None,
            samples_per_class: 200,
            folds: 5,
            max_iterations: 1000,
            noisy: true,
            ansatz_reps: spec.ansatz_reps,
            decision_threshold: spec.decision_threshold,
            trajectories: spec.trajectories,
        }
    }
}

impl ClassifySection {
    pub fn spec(&self) -> ClassifierSpec {
        ClassifierSpec {
            num_qubits: 3,
            ansatz_reps: self.ansatz_reps,
            decision_threshold: self.decision_threshold,
            trajectories: self.trajectories,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    pub families: Vec<AnsatzFamily>,
    /// Target kinds, each built from the `[target]` parameters.
    pub targets: Vec<TargetKind>,
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection {
            families: AnsatzFamily::ALL.to_vec(),
            targets: vec![
                TargetKind::Uniform,
                TargetKind::Gaussian,
                TargetKind::WeibullLeft,
                TargetKind::WeibullRight,
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CeSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    pub estimator: CeEstimator,
    pub shots: usize,
}

impl Default for CeSection {
    fn default() -> Self {
        CeSection {
            input: None,
            estimator: CeEstimator::Full,
            shots: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SwapSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
}

impl RunConfig {
    /// Parses TOML text. Artifact files are accepted too: their `#config`
    /// lines hold the configuration that produced them.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let body = cedist::io::extract_config(text).unwrap_or_else(|| text.to_string());
        toml::from_str(&body).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn ansatz(&self) -> Result<AnsatzSpec, CliError> {
        let spec = AnsatzSpec {
            family: self.generate.family,
            num_qubits: self.generate.num_qubits,
            layers: self.generate.layers,
        };
        spec.validate().map_err(|e| CliError::Config(format!("[generate] {e}")))?;
        Ok(spec)
    }
}
