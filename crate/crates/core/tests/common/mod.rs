#![allow(dead_code)]

use fairfilter::{normalize, Graph, Normalization, NormalizedAdjacency};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random connected graph: a random spanning tree plus extra edges.
pub fn connected_graph(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < extra {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Two planted blocks of `half` nodes each.
pub fn two_blocks(rng: &mut ChaCha8Rng, half: usize, p_in: f64, p_out: f64) -> Graph {
    loop {
        let n = 2 * half;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let p = if (u < half) == (v < half) { p_in } else { p_out };
                if rng.gen::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

pub fn dense(w: &NormalizedAdjacency) -> DMatrix<f64> {
    let rows = w.to_dense();
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

pub fn symmetric(g: &Graph) -> NormalizedAdjacency {
    normalize(g, Normalization::Symmetric)
}

pub fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen::<f64>()).collect()
}
