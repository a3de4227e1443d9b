//! Graph filters (personalized PageRank, heat kernels) over normalized
//! adjacency operators, together with fairness-aware post-processing:
//! prior editing tuned by coordinate search, group rescaling baselines,
//! disparate-impact and ranking metrics, and rank-based significance tests.

pub mod adjacency;
pub mod baselines;
pub mod editing;
pub mod error;
pub mod filters;
pub mod graph;
pub mod metrics;
pub mod optimizer;
pub mod stats;

pub use adjacency::{normalize, propagate, Normalization, NormalizedAdjacency};
pub use editing::{edit_priors, tune, tune_with, EditKind, EditMechanism, EditParams, TuneOutcome};
pub use error::{Error, Result};
pub use filters::{apply_filter, BoundFilter, FilterFamily, FilterSpec, SpectralResponse};
pub use graph::{Graph, CommunityTable};
pub use metrics::{auc, objective, prule, Divergence, ObjectiveSpec, SensitiveGroups};
pub use optimizer::{minimize, Minimum, OptimizerSettings};
