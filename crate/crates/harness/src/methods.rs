//! The compared approaches and how each turns a prior into a posterior.

use std::fmt;
use std::str::FromStr;

use fairfilter::baselines::{fairwalk_normalize, lfpro, mult, LFPRO_TOLERANCE};
use fairfilter::{
    tune_with, BoundFilter, Divergence, EditKind, EditParams, FilterSpec, Graph,
    NormalizedAdjacency, ObjectiveSpec, OptimizerSettings, SensitiveGroups,
};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    None,
    Mult,
    Lfpro,
    FairWalk,
    FairPers,
    FairPersC,
    FairEdit,
    FairEditC,
    FairEdit0,
    FairEdit0C,
}

impl Method {
    pub const ALL: [Method; 10] = [
        Method::None,
        Method::Mult,
        Method::Lfpro,
        Method::FairWalk,
        Method::FairPers,
        Method::FairPersC,
        Method::FairEdit,
        Method::FairEditC,
        Method::FairEdit0,
        Method::FairEdit0C,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::None => "None",
            Method::Mult => "Mult",
            Method::Lfpro => "LFPRO",
            Method::FairWalk => "FairWalk",
            Method::FairPers => "FairPers",
            Method::FairPersC => "FairPers-C",
            Method::FairEdit => "FairEdit",
            Method::FairEditC => "FairEdit-C",
            Method::FairEdit0 => "FairEdit0",
            Method::FairEdit0C => "FairEdit0-C",
        }
    }

    /// Edit mechanism and tuning objective of the prior-editing methods.
    pub fn editing(self) -> Option<(EditKind, ObjectiveSpec)> {
        let (kind, divergence, constrained) = match self {
            Method::FairPers => (EditKind::FairPers, Divergence::MeanAbsolute, false),
            Method::FairPersC => (EditKind::FairPers, Divergence::MeanAbsolute, true),
            Method::FairEdit => (EditKind::FairEdit, Divergence::KullbackLeibler, false),
            Method::FairEditC => (EditKind::FairEdit, Divergence::KullbackLeibler, true),
            Method::FairEdit0 => (EditKind::FairEdit0, Divergence::KullbackLeibler, false),
            Method::FairEdit0C => (EditKind::FairEdit0, Divergence::KullbackLeibler, true),
            _ => return None,
        };
        let (w, sup) = if constrained { (10.0, 0.8) } else { (1.0, 1.0) };
        let spec = ObjectiveSpec::new(divergence, w, sup).expect("fixed weights are valid");
        Some((kind, spec))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| HarnessError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutput {
    pub posterior: Vec<f64>,
    pub params: Option<EditParams>,
    pub final_loss: Option<f64>,
}

impl MethodOutput {
    fn plain(posterior: Vec<f64>) -> Self {
        Self {
            posterior,
            params: None,
            final_loss: None,
        }
    }
}

/// Posterior of `method` for prior `q`. Only the prior, the graph and the
/// sensitive attribute are visible here; held-out nodes are not.
pub fn run_method(
    method: Method,
    spec: &FilterSpec,
    graph: &Graph,
    w: &NormalizedAdjacency,
    q: &[f64],
    groups: &SensitiveGroups,
    settings: &OptimizerSettings,
) -> Result<MethodOutput> {
    if method == Method::FairWalk {
        let walk = fairwalk_normalize(graph, groups)?;
        return Ok(MethodOutput::plain(BoundFilter::new(*spec, &walk)?.apply(q)?));
    }
    let filter = BoundFilter::new(*spec, w)?;
    if let Some((kind, objective)) = method.editing() {
        let out = tune_with(kind, &filter, q, groups, &objective, settings)?;
        return Ok(MethodOutput {
            posterior: out.posterior,
            params: Some(out.params),
            final_loss: Some(out.loss),
        });
    }
    let base = filter.apply(q)?;
    let posterior = match method {
        Method::Mult => mult(&base, groups)?,
        Method::Lfpro => lfpro(&base, groups, LFPRO_TOLERANCE)?.scores,
        _ => base,
    };
    Ok(MethodOutput::plain(posterior))
}
