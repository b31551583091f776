//! Training circuits whose outputs follow a target CE distribution, and
//! sampling datasets from trained circuits.

mod anneal;
mod compare;
mod dataset;
mod haar;
mod objective;
mod run;
mod target;

pub use anneal::{dual_annealing, AnnealConfig, AnnealOutcome, Objective};
pub use compare::{average_ranks, compare_ansatzes, summarize, ComparisonTable, FamilySummary};
pub use dataset::{generate_dataset, recompute_ce, Dataset, DatasetMetadata};
pub use haar::sample_haar_product;
pub use objective::{evaluate_on, CeEstimator, CostBreakdown, GenerationObjective};
pub use run::{holdout_tvd, train_generator, GenerationRun};
pub use target::{TargetDistribution, TargetKind, DEFAULT_BINS, DEFAULT_CE_MAX};
