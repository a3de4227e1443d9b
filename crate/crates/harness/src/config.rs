//! TOML experiment configuration.
//!
//! ```toml
//! seed = 7
//! workers = 4
//! fractions = [0.1, 0.2, 0.3]
//! filters = ["PPR.85", "HK3S"]
//! methods = ["None", "Mult", "FairEdit-C"]
//!
//! [[graphs]]
//! id = "sbm-balanced"
//! fixture = "balanced"
//!
//! [[graphs]]
//! id = "citations"
//! edges = "citations.edges"
//! labels = "citations.labels"
//! min_degree = 2
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use fairfilter::graph::{load_edge_list, load_labels, remove_low_degree, select_communities};
use fairfilter::{FilterSpec, OptimizerSettings, SensitiveGroups};
use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::grid::{GraphEntry, GridConfig};
use crate::methods::Method;
use crate::sbm::{fixture, generate_sbm, Benchmark, SbmParams};
use crate::seeds::cell_seed;

pub const DEFAULT_FRACTIONS: [f64; 3] = [0.1, 0.2, 0.3];
pub const DEFAULT_METHODS: [&str; 8] = [
    "None",
    "Mult",
    "LFPRO",
    "FairWalk",
    "FairPers",
    "FairPers-C",
    "FairEdit",
    "FairEdit-C",
];
pub const DEFAULT_MIN_COMMUNITY: usize = 100;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerSection {
    pub partitions: Option<usize>,
    pub contraction: Option<f64>,
    pub tolerance: Option<f64>,
    pub max_evaluations: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSource {
    pub id: String,
    pub fixture: Option<String>,
    pub sbm: Option<SbmParams>,
    pub edges: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    #[serde(default)]
    pub min_degree: usize,
    pub min_community: Option<usize>,
    /// Name of the community used as the sensitive attribute instead of the
    /// second qualifying one.
    pub sensitive: Option<String>,
    /// Generator seed for block models; derived from the global seed if absent.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    pub workers: Option<usize>,
    pub fractions: Option<Vec<f64>>,
    pub filters: Option<Vec<String>>,
    pub methods: Option<Vec<String>>,
    pub tolerance: Option<f64>,
    #[serde(default = "yes")]
    pub record_wall_time: bool,
    pub optimizer: Option<OptimizerSection>,
    #[serde(default)]
    pub graphs: Vec<GraphSource>,
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn grid_config(&self) -> Result<GridConfig> {
        let filters = match &self.filters {
            Some(names) => names
                .iter()
                .map(|n| n.parse::<FilterSpec>())
                .collect::<std::result::Result<Vec<_>, _>>()?,
            None => FilterSpec::benchmark_grid(),
        };
        let filters = match self.tolerance {
            Some(tol) => filters
                .into_iter()
                .map(|f| f.with_tolerance(tol))
                .collect::<std::result::Result<Vec<_>, _>>()?,
            None => filters,
        };
        let methods = match &self.methods {
            Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<Method>>>()?,
            None => DEFAULT_METHODS.iter().map(|n| n.parse().unwrap()).collect(),
        };
        let fractions = self.fractions.clone().unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec());
        if let Some(f) = fractions.iter().find(|f| !(**f > 0.0 && **f < 1.0)) {
            return Err(HarnessError::Config(format!("fraction {f} outside (0, 1)")));
        }
        let mut optimizer = OptimizerSettings::default();
        if let Some(o) = &self.optimizer {
            optimizer.partitions = o.partitions.unwrap_or(optimizer.partitions);
            optimizer.contraction = o.contraction.unwrap_or(optimizer.contraction);
            optimizer.tolerance = o.tolerance.unwrap_or(optimizer.tolerance);
            optimizer.max_evaluations = o.max_evaluations.unwrap_or(optimizer.max_evaluations);
        }
        Ok(GridConfig {
            filters,
            methods,
            fractions,
            seed: self.seed,
            workers: self.workers.unwrap_or_else(default_workers),
            record_wall_time: self.record_wall_time,
            optimizer,
        })
    }

    /// Loads every configured graph; relative paths resolve against `base`.
    pub fn load_graphs(&self, base: &Path) -> Result<Vec<GraphEntry>> {
        self.graphs
            .iter()
            .map(|g| Ok(GraphEntry::new(g.id.clone(), load_source(g, base, self.seed)?)))
            .collect()
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn load_source(source: &GraphSource, base: &Path, global_seed: u64) -> Result<Benchmark> {
    let seed = source
        .seed
        .unwrap_or_else(|| cell_seed(global_seed, &source.id, usize::MAX));
    match (&source.fixture, &source.sbm, &source.edges) {
        (Some(name), None, None) => {
            let params = fixture(name)
                .ok_or_else(|| HarnessError::Config(format!("unknown fixture `{name}`")))?;
            generate_sbm(&params, seed)
        }
        (None, Some(params), None) => generate_sbm(params, seed),
        (None, None, Some(edges)) => {
            let labels = source.labels.as_ref().ok_or_else(|| {
                HarnessError::Config(format!("graph `{}` has edges but no labels", source.id))
            })?;
            load_files(
                &base.join(edges),
                &base.join(labels),
                source.min_degree,
                source.min_community.unwrap_or(DEFAULT_MIN_COMMUNITY),
                source.sensitive.as_deref(),
            )
        }
        _ => Err(HarnessError::Config(format!(
            "graph `{}` needs exactly one of fixture, sbm or edges",
            source.id
        ))),
    }
}

/// Edge list plus community labels; low-degree nodes are pruned before the
/// positive and sensitive communities are chosen.
pub fn load_files(
    edges: &Path,
    labels: &Path,
    min_degree: usize,
    min_community: usize,
    sensitive: Option<&str>,
) -> Result<Benchmark> {
    let full = load_edge_list(edges)?;
    let table = load_labels(labels, &full)?;
    let (graph, table) = if min_degree > 0 {
        let pruned = remove_low_degree(&full, min_degree)?;
        let table = table.remap(&pruned.kept);
        (pruned.graph, table)
    } else {
        (full, table)
    };
    let explicit = match sensitive {
        Some(name) => Some(
            table
                .get(name)
                .ok_or_else(|| HarnessError::Config(format!("no community named `{name}`")))?
                .members
                .clone(),
        ),
        None => None,
    };
    let chosen = select_communities(&table, min_community, explicit.as_deref())?;
    let groups = SensitiveGroups::new(graph.node_count(), &chosen.sensitive)?;
    let mut positives = vec![false; graph.node_count()];
    for v in chosen.positive {
        positives[v] = true;
    }
    Ok(Benchmark {
        graph,
        groups,
        positives,
    })
}
