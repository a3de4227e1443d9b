//! Seeded stochastic block models used as the synthetic benchmark suite.

use fairfilter::{Graph, SensitiveGroups};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SbmParams {
    pub blocks: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
    pub sensitive_block: usize,
    pub positive_block: usize,
    #[serde(default = "default_connected")]
    pub connected: bool,
}

fn default_connected() -> bool {
    true
}

/// A graph with its sensitive attribute and positive labels.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub graph: Graph,
    pub groups: SensitiveGroups,
    pub positives: Vec<bool>,
}

fn sample_once(params: &SbmParams, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block_of: Vec<usize> = params
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(b, &size)| std::iter::repeat(b).take(size))
        .collect();
    let n = block_of.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if block_of[u] == block_of[v] {
                params.p_in
            } else {
                params.p_out
            };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("block sizes are validated to be non-empty")
}

/// Samples a block model; when `connected` is set, retries with successive
/// seeds until the sample is connected.
pub fn generate_sbm(params: &SbmParams, seed: u64) -> Result<Benchmark> {
    let bad = |msg: String| Err(HarnessError::Config(msg));
    if params.blocks.len() < 2 {
        return bad("a block model needs at least two blocks".into());
    }
    if params.blocks.contains(&0) {
        return bad("blocks must be non-empty".into());
    }
    for p in [params.p_in, params.p_out] {
        if !(0.0..=1.0).contains(&p) {
            return bad(format!("edge probability {p} outside [0, 1]"));
        }
    }
    for b in [params.sensitive_block, params.positive_block] {
        if b >= params.blocks.len() {
            return bad(format!("block index {b} out of range"));
        }
    }
    let attempts = if params.connected { MAX_ATTEMPTS } else { 1 };
    let graph = (0..attempts as u64)
        .map(|k| sample_once(params, seed.wrapping_add(k)))
        .find(|g| !params.connected || g.is_connected())
        .ok_or(HarnessError::Disconnected { attempts })?;

    let start = |b: usize| params.blocks[..b].iter().sum::<usize>();
    let range = |b: usize| start(b)..start(b) + params.blocks[b];
    let sensitive: Vec<usize> = range(params.sensitive_block).collect();
    let groups = SensitiveGroups::new(graph.node_count(), &sensitive)?;
    let mut positives = vec![false; graph.node_count()];
    for v in range(params.positive_block) {
        positives[v] = true;
    }
    Ok(Benchmark {
        graph,
        groups,
        positives,
    })
}

/// Named synthetic fixtures: two balanced blocks, three skewed blocks with a
/// sensitive minority, and a variant whose positives are the sensitive block.
pub fn fixture(name: &str) -> Option<SbmParams> {
    let params = match name {
        "balanced" => SbmParams {
            blocks: vec![100, 100],
            p_in: 0.08,
            p_out: 0.01,
            sensitive_block: 1,
            positive_block: 0,
            connected: true,
        },
        "skewed" => SbmParams {
            blocks: vec![120, 80, 40],
            p_in: 0.08,
            p_out: 0.01,
            sensitive_block: 2,
            positive_block: 0,
            connected: true,
        },
        "overlap" => SbmParams {
            blocks: vec![60, 140],
            p_in: 0.08,
            p_out: 0.01,
            sensitive_block: 0,
            positive_block: 0,
            connected: true,
        },
        _ => return None,
    };
    Some(params)
}

pub const FIXTURES: [&str; 3] = ["balanced", "skewed", "overlap"];
