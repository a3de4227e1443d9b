//! Normalized adjacency operators and one-hop propagation.

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `D^{-1/2} A D^{-1/2}`
    Symmetric,
    /// `A D^{-1}`; every nonzero column sums to one.
    Column,
}

/// Sparse non-negative operator in compressed-row layout.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedAdjacency {
    kind: Normalization,
    row_offsets: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<f64>,
}

impl NormalizedAdjacency {
    /// Builds an operator from `(row, col, value)` triplets. Triplets with the
    /// same coordinates are summed.
    pub(crate) fn from_triplets(
        kind: Normalization,
        node_count: usize,
        mut entries: Vec<(usize, usize, f64)>,
    ) -> Self {
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_offsets = vec![0usize; node_count + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            last = Some((r, c));
            row_offsets[r + 1] += 1;
            cols.push(c);
            values.push(v);
        }
        for r in 0..node_count {
            row_offsets[r + 1] += row_offsets[r];
        }
        Self {
            kind,
            row_offsets,
            cols,
            values,
        }
    }

    pub fn kind(&self) -> Normalization {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.row_offsets.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzero `(col, value)` pairs of one row.
    pub fn row(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[u]..self.row_offsets[u + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.row(u).find(|&(c, _)| c == v).map_or(0.0, |(_, w)| w)
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.node_count()];
        for (&c, &v) in self.cols.iter().zip(&self.values) {
            sums[c] += v;
        }
        sums
    }

    /// Row-major dense copy, for small-graph checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.node_count();
        let mut dense = vec![vec![0.0; n]; n];
        for (u, row) in dense.iter_mut().enumerate() {
            for (v, w) in self.row(u) {
                row[v] = w;
            }
        }
        dense
    }

    /// `out = W q` without allocating; lengths must already match.
    pub(crate) fn propagate_into(&self, q: &[f64], out: &mut [f64]) {
        for (u, slot) in out.iter_mut().enumerate() {
            let span = self.row_offsets[u]..self.row_offsets[u + 1];
            *slot = self.cols[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&c, &w)| w * q[c])
                .sum();
        }
    }

    pub(crate) fn check_len(&self, signal: &[f64]) -> Result<()> {
        if signal.len() != self.node_count() {
            return Err(Error::DimensionMismatch {
                expected: self.node_count(),
                found: signal.len(),
            });
        }
        Ok(())
    }
}

/// Normalizes the adjacency matrix of `graph`. Isolated nodes get zero rows
/// and columns.
pub fn normalize(graph: &Graph, kind: Normalization) -> NormalizedAdjacency {
    let n = graph.node_count();
    let degree: Vec<f64> = (0..n).map(|v| graph.degree(v) as f64).collect();
    let mut entries = Vec::with_capacity(2 * graph.edge_count());
    for u in 0..n {
        for &v in graph.neighbors(u) {
            let w = match kind {
                Normalization::Symmetric => 1.0 / (degree[u] * degree[v]).sqrt(),
                Normalization::Column => 1.0 / degree[v],
            };
            entries.push((u, v, w));
        }
    }
    NormalizedAdjacency::from_triplets(kind, n, entries)
}

/// One-hop propagation `W q`.
pub fn propagate(w: &NormalizedAdjacency, q: &[f64]) -> Result<Vec<f64>> {
    w.check_len(q)?;
    let mut out = vec![0.0; q.len()];
    w.propagate_into(q, &mut out);
    Ok(out)
}
