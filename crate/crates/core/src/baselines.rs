//! Fairness baselines that do not edit priors: group-wise rescaling (Mult),
//! score redistribution (LFPRO) and the FairWalk operator.

use crate::adjacency::{NormalizedAdjacency, Normalization};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{prule, SensitiveGroups};

pub const LFPRO_TOLERANCE: f64 = 1e-12;

fn group_sums(r: &[f64], groups: &SensitiveGroups) -> (f64, f64) {
    r.iter()
        .enumerate()
        .fold((0.0, 0.0), |(s, sp), (v, &x)| {
            if groups.is_sensitive(v) {
                (s + x, sp)
            } else {
                (s, sp + x)
            }
        })
}

/// Rescales each group so that sensitive nodes hold the fraction
/// `φ = |S| / |V|` of the total mass, which sets the stochastic pRule to one.
pub fn mult(r: &[f64], groups: &SensitiveGroups) -> Result<Vec<f64>> {
    groups.check_len(r)?;
    if groups.sensitive_count() == 0 {
        return Err(Error::EmptyGroup("sensitive"));
    }
    if groups.nonsensitive_count() == 0 {
        return Err(Error::EmptyGroup("non-sensitive"));
    }
    let (sum_s, sum_sp) = group_sums(r, groups);
    if !(sum_s > 0.0) {
        return Err(Error::ZeroGroupMass { group: "sensitive" });
    }
    if !(sum_sp > 0.0) {
        return Err(Error::ZeroGroupMass {
            group: "non-sensitive",
        });
    }
    let phi = groups.sensitive_count() as f64 / groups.node_count() as f64;
    let (scale_s, scale_sp) = (phi / sum_s, (1.0 - phi) / sum_sp);
    Ok(r.iter()
        .enumerate()
        .map(|(v, &x)| if groups.is_sensitive(v) { x * scale_s } else { x * scale_sp })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LfproOutcome {
    pub scores: Vec<f64>,
    /// pRule before the first transfer and after each one.
    pub prule_trace: Vec<f64>,
}

/// Moves excess score mass from the over-represented group to the other one
/// until the stochastic pRule reaches one.
///
/// Each round asks every donor with positive score for an equal share of the
/// remaining excess (donors run dry at zero) and spreads what was collected
/// equally over the receiving group. Rounds repeat until the mass moved in a
/// round is at most `tol` times the total mass.
pub fn lfpro(r: &[f64], groups: &SensitiveGroups, tol: f64) -> Result<LfproOutcome> {
    groups.check_len(r)?;
    if groups.sensitive_count() == 0 {
        return Err(Error::EmptyGroup("sensitive"));
    }
    if groups.nonsensitive_count() == 0 {
        return Err(Error::EmptyGroup("non-sensitive"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    if r.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::InvalidParameter("scores must be non-negative".into()));
    }
    let mut scores = r.to_vec();
    let mut prule_trace = vec![prule(&scores, groups)?];
    let total: f64 = scores.iter().sum();
    if total == 0.0 {
        return Ok(LfproOutcome {
            scores,
            prule_trace,
        });
    }
    let phi = groups.sensitive_count() as f64 / groups.node_count() as f64;
    let target = phi * total;

    // every productive round either settles the excess or empties a donor
    for _ in 0..=groups.node_count() {
        let (sum_s, _) = group_sums(&scores, groups);
        let excess = sum_s - target;
        let donors_sensitive = excess > 0.0;
        let need = excess.abs();
        if need <= tol * total {
            break;
        }
        let donors: Vec<usize> = (0..scores.len())
            .filter(|&v| groups.is_sensitive(v) == donors_sensitive && scores[v] > 0.0)
            .collect();
        if donors.is_empty() {
            break;
        }
        let share = need / donors.len() as f64;
        let mut moved = 0.0;
        for v in donors {
            let take = scores[v].min(share);
            scores[v] -= take;
            moved += take;
        }
        let receivers = if donors_sensitive {
            groups.nonsensitive_count()
        } else {
            groups.sensitive_count()
        };
        let gift = moved / receivers as f64;
        for (v, x) in scores.iter_mut().enumerate() {
            if groups.is_sensitive(v) != donors_sensitive {
                *x += gift;
            }
        }
        prule_trace.push(prule(&scores, groups)?);
        if moved <= tol * total {
            break;
        }
    }
    Ok(LfproOutcome {
        scores,
        prule_trace,
    })
}

/// Column-normalized operator in which every node sends half of its weight
/// to its sensitive neighbours and half to the rest (split equally within
/// each class). Nodes whose neighbours all share one class send everything
/// there, as plain column normalization would.
pub fn fairwalk_normalize(graph: &Graph, groups: &SensitiveGroups) -> Result<NormalizedAdjacency> {
    let n = graph.node_count();
    if groups.node_count() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: groups.node_count(),
        });
    }
    let mut entries = Vec::with_capacity(2 * graph.edge_count());
    for u in 0..n {
        let neighbors = graph.neighbors(u);
        let sensitive = neighbors.iter().filter(|&&v| groups.is_sensitive(v)).count();
        let other = neighbors.len() - sensitive;
        for &v in neighbors {
            // share of u's unit column that goes to v
            let w = if sensitive == 0 || other == 0 {
                1.0 / neighbors.len() as f64
            } else if groups.is_sensitive(v) {
                0.5 / sensitive as f64
            } else {
                0.5 / other as f64
            };
            entries.push((v, u, w));
        }
    }
    Ok(NormalizedAdjacency::from_triplets(Normalization::Column, n, entries))
}
