//! Graph filters: personalized PageRank and heat kernels, their
//! post-processing (L1 normalization, sweep ratio), and spectral bounds.

use std::fmt;
use std::str::FromStr;

use crate::adjacency::NormalizedAdjacency;
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Grid resolution used by [`strictness_bound`].
pub const STRICTNESS_GRID: usize = 10_001;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FilterFamily {
    /// Hop weights `(1-a) a^n`.
    PersonalizedPageRank { alpha: f64 },
    /// Hop weights `e^{-t} t^n / n!`.
    HeatKernel { time: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub family: FilterFamily,
    /// Divide by the non-personalized posterior after filtering.
    pub sweep: bool,
    pub tolerance: f64,
}

impl FilterSpec {
    pub fn ppr(alpha: f64, sweep: bool) -> Result<Self> {
        Self::new(FilterFamily::PersonalizedPageRank { alpha }, sweep, DEFAULT_TOLERANCE)
    }

    pub fn heat(time: f64, sweep: bool) -> Result<Self> {
        Self::new(FilterFamily::HeatKernel { time }, sweep, DEFAULT_TOLERANCE)
    }

    pub fn new(family: FilterFamily, sweep: bool, tolerance: f64) -> Result<Self> {
        match family {
            FilterFamily::PersonalizedPageRank { alpha } if !(alpha > 0.0 && alpha < 1.0) => {
                return Err(Error::InvalidParameter(format!(
                    "pagerank parameter must lie in (0, 1), got {alpha}"
                )))
            }
            FilterFamily::HeatKernel { time } if !(time > 0.0 && time.is_finite()) => {
                return Err(Error::InvalidParameter(format!(
                    "heat kernel time must be positive, got {time}"
                )))
            }
            _ => {}
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        Ok(Self {
            family,
            sweep,
            tolerance,
        })
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self> {
        Self::new(self.family, self.sweep, tolerance)
    }

    /// The eight base filters: PPR.85, PPR.99, HK3, HK7 and their sweep variants.
    pub fn benchmark_grid() -> Vec<FilterSpec> {
        ["PPR.85", "PPR.99", "HK3", "HK7", "PPR.85S", "PPR.99S", "HK3S", "HK7S"]
            .iter()
            .map(|name| name.parse().unwrap())
            .collect()
    }
}

impl fmt::Display for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            FilterFamily::PersonalizedPageRank { alpha } => {
                let digits = alpha.to_string();
                write!(f, "PPR{}", digits.trim_start_matches('0'))?;
            }
            FilterFamily::HeatKernel { time } => write!(f, "HK{time}")?,
        }
        if self.sweep {
            f.write_str("S")?;
        }
        Ok(())
    }
}

impl FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognized filter name `{s}`"));
        let (body, sweep) = match s.strip_suffix('S') {
            Some(body) => (body, true),
            None => (s, false),
        };
        let family = if let Some(digits) = body.strip_prefix("PPR") {
            if !digits.starts_with('.') {
                return Err(bad());
            }
            let alpha: f64 = format!("0{digits}").parse().map_err(|_| bad())?;
            FilterFamily::PersonalizedPageRank { alpha }
        } else if let Some(digits) = body.strip_prefix("HK") {
            let time: f64 = digits.parse().map_err(|_| bad())?;
            FilterFamily::HeatKernel { time }
        } else {
            return Err(bad());
        };
        Self::new(family, sweep, DEFAULT_TOLERANCE)
    }
}

/// Frequency response `H(λ)` of a filter on the spectrum of a symmetric `W`.
pub trait SpectralResponse {
    fn response(&self, lambda: f64) -> f64;
}

impl SpectralResponse for FilterSpec {
    fn response(&self, lambda: f64) -> f64 {
        match self.family {
            FilterFamily::PersonalizedPageRank { alpha } => (1.0 - alpha) / (1.0 - alpha * lambda),
            FilterFamily::HeatKernel { time } => (-time * (1.0 - lambda)).exp(),
        }
    }
}

/// A finite hop-weight sequence `h_0, h_1, ...`, i.e. the polynomial `Σ h_n λ^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopWeights(pub Vec<f64>);

impl SpectralResponse for HopWeights {
    fn response(&self, lambda: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &h| acc * lambda + h)
    }
}

fn grid(samples: usize) -> impl Iterator<Item = f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(move |i| -1.0 + 2.0 * i as f64 / last)
}

fn response_range(filter: &impl SpectralResponse, samples: usize) -> (f64, f64) {
    grid(samples)
        .map(|lambda| filter.response(lambda))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), h| {
            (lo.min(h), hi.max(h))
        })
}

/// True iff the response is strictly positive on a uniform grid over [-1, 1].
pub fn positive_definite_check(filter: &impl SpectralResponse, samples: usize) -> bool {
    let (lo, _) = response_range(filter, samples.max(2));
    lo > 0.0
}

/// `(min H / max H) · (min p / max p)`: how loosely an optimizer may track
/// posterior-loss gradients while prior updates still descend the loss.
pub fn strictness_bound(filter: &impl SpectralResponse, post: &[f64]) -> Result<f64> {
    let (lo, hi) = response_range(filter, STRICTNESS_GRID);
    if !(lo > 0.0) {
        return Err(Error::NotPositiveDefinite { min_response: lo });
    }
    if post.is_empty() || post.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
        return Err(Error::InvalidParameter(
            "post-processing vector must be finite and strictly positive".into(),
        ));
    }
    let p_lo = post.iter().copied().fold(f64::INFINITY, f64::min);
    let p_hi = post.iter().copied().fold(0.0, f64::max);
    Ok(lo / hi * p_lo / p_hi)
}

fn iteration_cap(alpha: f64, tol: f64) -> usize {
    let predicted = (tol.ln() / alpha.ln()).ceil();
    10 * (predicted.max(1.0) as usize)
}

/// Personalized PageRank by power iteration of `r <- a W r + (1-a) q`,
/// stopping once the max-norm change is at most `tol`.
pub fn ppr(w: &NormalizedAdjacency, q: &[f64], alpha: f64, tol: f64) -> Result<Vec<f64>> {
    w.check_len(q)?;
    if !(alpha > 0.0 && alpha < 1.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "pagerank needs 0 < a < 1 and tol > 0 (a = {alpha}, tol = {tol})"
        )));
    }
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("prior has non-finite entries".into()));
    }
    let cap = iteration_cap(alpha, tol);
    let mut r: Vec<f64> = q.iter().map(|&x| (1.0 - alpha) * x).collect();
    let mut hop = vec![0.0; q.len()];
    let mut residual = f64::INFINITY;
    for _ in 0..cap {
        w.propagate_into(&r, &mut hop);
        residual = 0.0;
        for ((ri, &hi), &qi) in r.iter_mut().zip(&hop).zip(q) {
            let next = alpha * hi + (1.0 - alpha) * qi;
            residual = f64::max(residual, (next - *ri).abs());
            *ri = next;
        }
        if residual <= tol {
            return Ok(r);
        }
    }
    Err(Error::NoConvergence {
        iterations: cap,
        residual,
    })
}

/// Heat kernel `Σ e^{-t} t^n/n! W^n q`, truncated once the remaining Poisson
/// mass is at most `tol`.
pub fn heat_kernel(w: &NormalizedAdjacency, q: &[f64], time: f64, tol: f64) -> Result<Vec<f64>> {
    w.check_len(q)?;
    if !(time > 0.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "heat kernel needs t > 0 and tol > 0 (t = {time}, tol = {tol})"
        )));
    }
    let mut weight = (-time).exp();
    let mut covered = weight;
    let mut term = q.to_vec();
    let mut next = vec![0.0; q.len()];
    let mut r: Vec<f64> = q.iter().map(|&x| weight * x).collect();
    let mut n = 0usize;
    while 1.0 - covered > tol {
        n += 1;
        w.propagate_into(&term, &mut next);
        std::mem::swap(&mut term, &mut next);
        weight *= time / n as f64;
        for (ri, &ti) in r.iter_mut().zip(&term) {
            *ri += weight * ti;
        }
        covered += weight;
        // past the mode the weights only shrink; stop once they vanish
        if n as f64 > time && weight < f64::EPSILON * tol {
            break;
        }
    }
    Ok(r)
}

/// Divides by the L1 norm.
pub fn l1_normalize(r: &[f64]) -> Result<Vec<f64>> {
    let norm: f64 = r.iter().map(|x| x.abs()).sum();
    if norm == 0.0 {
        return Err(Error::ZeroSignal("signal to normalize"));
    }
    Ok(r.iter().map(|x| x / norm).collect())
}

/// Elementwise ratio of personalized to non-personalized posteriors.
pub fn sweep_ratio(personalized: &[f64], uniform: &[f64]) -> Result<Vec<f64>> {
    if personalized.len() != uniform.len() {
        return Err(Error::DimensionMismatch {
            expected: uniform.len(),
            found: personalized.len(),
        });
    }
    if let Some(node) = uniform.iter().position(|&u| !(u > 0.0)) {
        return Err(Error::ZeroUniformPosterior { node });
    }
    Ok(personalized
        .iter()
        .zip(uniform)
        .map(|(p, u)| p / u)
        .collect())
}

fn raw_filter(spec: &FilterSpec, w: &NormalizedAdjacency, q: &[f64]) -> Result<Vec<f64>> {
    w.check_len(q)?;
    // the output is L1-normalized, so rescaling the prior only keeps the
    // absolute tolerance meaningful for large edited priors
    let scale = q.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Err(Error::ZeroSignal("prior"));
    }
    let scaled: Vec<f64> = q.iter().map(|x| x / scale).collect();
    match spec.family {
        FilterFamily::PersonalizedPageRank { alpha } => ppr(w, &scaled, alpha, spec.tolerance),
        FilterFamily::HeatKernel { time } => heat_kernel(w, &scaled, time, spec.tolerance),
    }
}

/// A filter specification bound to an operator, with the non-personalized
/// posterior cached for the sweep ratio.
#[derive(Debug, Clone)]
pub struct BoundFilter<'a> {
    spec: FilterSpec,
    w: &'a NormalizedAdjacency,
    uniform: Option<Vec<f64>>,
}

impl<'a> BoundFilter<'a> {
    pub fn new(spec: FilterSpec, w: &'a NormalizedAdjacency) -> Result<Self> {
        let uniform = if spec.sweep {
            let ones = vec![1.0; w.node_count()];
            Some(l1_normalize(&raw_filter(&spec, w, &ones)?)?)
        } else {
            None
        };
        Ok(Self { spec, w, uniform })
    }

    pub fn spec(&self) -> &FilterSpec {
        &self.spec
    }

    pub fn operator(&self) -> &NormalizedAdjacency {
        self.w
    }

    pub fn node_count(&self) -> usize {
        self.w.node_count()
    }

    /// Filters `q`, L1-normalizes, then applies the sweep ratio if configured.
    pub fn apply(&self, q: &[f64]) -> Result<Vec<f64>> {
        let r = l1_normalize(&raw_filter(&self.spec, self.w, q)?)?;
        match &self.uniform {
            Some(uniform) => sweep_ratio(&r, uniform),
            None => Ok(r),
        }
    }

    /// The per-node post-processing multipliers relative to the raw filter
    /// output, up to the L1 scale: the inverse uniform posterior under sweep,
    /// ones otherwise.
    pub fn post_vector(&self) -> Vec<f64> {
        match &self.uniform {
            Some(uniform) => uniform.iter().map(|u| 1.0 / u).collect(),
            None => vec![1.0; self.w.node_count()],
        }
    }
}

pub fn apply_filter(spec: &FilterSpec, w: &NormalizedAdjacency, q: &[f64]) -> Result<Vec<f64>> {
    BoundFilter::new(*spec, w)?.apply(q)
}
