//! Fairness-aware prior editing and the tuning loop that fits its parameters.
//!
//! Both mechanisms reweight each node's prior by exponentials of how far its
//! max-normalized posterior strays from the prior, with separate parameters
//! for sensitive and non-sensitive nodes:
//!
//! * `FairPers`: `a e^{-b x} + (1-a) e^{b x}` with signed `x = r/‖r‖∞ - q`;
//! * `FairEdit`: `a₀ q + a e^{-b|x|} + (1-a) e^{b|x|}`, which can also retain
//!   the original prior through `a₀`;
//! * `FairEdit0`: `FairEdit` with `a₀` pinned to zero.

use std::fmt;

use crate::adjacency::NormalizedAdjacency;
use crate::error::{Error, Result};
use crate::filters::{BoundFilter, FilterSpec};
use crate::metrics::{objective, ObjectiveSpec, SensitiveGroups};
use crate::optimizer::{minimize, OptimizerSettings};

pub const A_RANGE: (f64, f64) = (0.0, 1.0);
pub const B_RANGE: (f64, f64) = (-10.0, 10.0);
pub const A0_RANGE: (f64, f64) = (0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    FairPers,
    FairEdit,
    FairEdit0,
}

impl EditKind {
    /// Number of tuned parameters.
    pub fn dims(self) -> usize {
        match self {
            EditKind::FairEdit => 5,
            EditKind::FairPers | EditKind::FairEdit0 => 4,
        }
    }

    pub fn lower(self) -> Vec<f64> {
        let mut v = vec![A_RANGE.0, A_RANGE.0, B_RANGE.0, B_RANGE.0, A0_RANGE.0];
        v.truncate(self.dims());
        v
    }

    pub fn upper(self) -> Vec<f64> {
        let mut v = vec![A_RANGE.1, A_RANGE.1, B_RANGE.1, B_RANGE.1, A0_RANGE.1];
        v.truncate(self.dims());
        v
    }

    /// Unpacks `[a_S, a_S', b_S, b_S', (a₀)]`.
    pub fn params_from(self, theta: &[f64]) -> EditParams {
        EditParams {
            a_s: theta[0],
            a_sp: theta[1],
            b_s: theta[2],
            b_sp: theta[3],
            a0: if self == EditKind::FairEdit { theta[4] } else { 0.0 },
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EditKind::FairPers => "FairPers",
            EditKind::FairEdit => "FairEdit",
            EditKind::FairEdit0 => "FairEdit0",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EditParams {
    pub a_s: f64,
    pub a_sp: f64,
    pub b_s: f64,
    pub b_sp: f64,
    pub a0: f64,
}

fn in_range(x: f64, (lo, hi): (f64, f64)) -> bool {
    x >= lo && x <= hi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EditMechanism {
    kind: EditKind,
    params: EditParams,
}

impl EditMechanism {
    pub fn new(kind: EditKind, mut params: EditParams) -> Result<Self> {
        if kind == EditKind::FairEdit0 {
            params.a0 = 0.0;
        }
        let ok = in_range(params.a_s, A_RANGE)
            && in_range(params.a_sp, A_RANGE)
            && in_range(params.b_s, B_RANGE)
            && in_range(params.b_sp, B_RANGE)
            && in_range(params.a0, A0_RANGE);
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "edit parameters outside their box: {params:?}"
            )));
        }
        Ok(Self { kind, params })
    }

    pub fn kind(&self) -> EditKind {
        self.kind
    }

    pub fn params(&self) -> &EditParams {
        &self.params
    }
}

/// Edited priors for prior `q`, its posterior `r` and the sensitive groups.
pub fn edit_priors(
    mech: &EditMechanism,
    q: &[f64],
    r: &[f64],
    groups: &SensitiveGroups,
) -> Result<Vec<f64>> {
    groups.check_len(q)?;
    groups.check_len(r)?;
    let r_max = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(r_max > 0.0) {
        return Err(Error::ZeroSignal("posterior"));
    }
    let p = &mech.params;
    Ok(q.iter()
        .zip(r)
        .enumerate()
        .map(|(v, (&qv, &rv))| {
            let (a, b) = if groups.is_sensitive(v) {
                (p.a_s, p.b_s)
            } else {
                (p.a_sp, p.b_sp)
            };
            let x = rv / r_max - qv;
            match mech.kind {
                EditKind::FairPers => a * (-b * x).exp() + (1.0 - a) * (b * x).exp(),
                EditKind::FairEdit | EditKind::FairEdit0 => {
                    let e = x.abs();
                    p.a0 * qv + a * (-b * e).exp() + (1.0 - a) * (b * e).exp()
                }
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub params: EditParams,
    /// Posterior of the edited priors.
    pub posterior: Vec<f64>,
    pub loss: f64,
    pub evaluations: usize,
    /// Loss of every evaluated candidate, in order.
    pub trace: Vec<f64>,
}

/// Fits edit parameters so that the filtered edited priors minimize
/// `objective_spec` against the unedited posterior.
///
/// Only the prior and the sensitive attribute are consulted; nothing here
/// knows which nodes are held out for evaluation.
pub fn tune_with(
    kind: EditKind,
    filter: &BoundFilter<'_>,
    q: &[f64],
    groups: &SensitiveGroups,
    objective_spec: &ObjectiveSpec,
    settings: &OptimizerSettings,
) -> Result<TuneOutcome> {
    groups.check_len(q)?;
    if groups.sensitive_count() == 0 {
        return Err(Error::EmptyGroup("sensitive"));
    }
    if groups.nonsensitive_count() == 0 {
        return Err(Error::EmptyGroup("non-sensitive"));
    }
    let base = filter.apply(q)?;
    let evaluate = |theta: &[f64]| -> Result<(Vec<f64>, f64)> {
        let mech = EditMechanism::new(kind, kind.params_from(theta))?;
        let edited = edit_priors(&mech, q, &base, groups)?;
        let posterior = filter.apply(&edited)?;
        let loss = objective(objective_spec, &posterior, &base, groups)?;
        Ok((posterior, loss))
    };
    let found = minimize(
        |theta| evaluate(theta).map_or(f64::INFINITY, |(_, loss)| loss),
        &kind.lower(),
        &kind.upper(),
        settings,
    )?;
    let (posterior, loss) = evaluate(&found.point)?;
    Ok(TuneOutcome {
        params: kind.params_from(&found.point),
        posterior,
        loss,
        evaluations: found.evaluations,
        trace: found.trace,
    })
}

pub fn tune(
    kind: EditKind,
    spec: &FilterSpec,
    w: &NormalizedAdjacency,
    q: &[f64],
    groups: &SensitiveGroups,
    objective_spec: &ObjectiveSpec,
    settings: &OptimizerSettings,
) -> Result<TuneOutcome> {
    let filter = BoundFilter::new(*spec, w)?;
    tune_with(kind, &filter, q, groups, objective_spec, settings)
}
