//! Derivative-free cyclic coordinate search with shrinking ranges.
//!
//! Starting from the center of the box, each step perturbs one coordinate on
//! a uniform line of `2·partitions + 1` points spanning `±range[i]`, moves to
//! the best point, then divides that coordinate's range by `contraction`.
//! The search stops once every coordinate's last line search saw a loss
//! spread of at most `tolerance`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    pub partitions: usize,
    pub contraction: f64,
    pub tolerance: f64,
    pub max_evaluations: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            partitions: 2,
            contraction: 2.0,
            tolerance: 0.01,
            max_evaluations: 10_000,
        }
    }
}

impl OptimizerSettings {
    /// The finer configuration (`part = 4, T = 1.3, ε = 0.001`).
    pub fn fine() -> Self {
        Self {
            partitions: 4,
            contraction: 1.3,
            tolerance: 0.001,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.partitions == 0 {
            return Err(Error::InvalidParameter("partitions must be at least 1".into()));
        }
        if !(self.contraction > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "contraction must exceed 1, got {}",
                self.contraction
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_evaluations == 0 {
            return Err(Error::InvalidParameter("max_evaluations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    pub loss: f64,
    pub evaluations: usize,
    /// Loss of every evaluated candidate, in evaluation order.
    pub trace: Vec<f64>,
}

struct Budget<F> {
    loss: F,
    evaluations: usize,
    max: usize,
    trace: Vec<f64>,
    best_point: Vec<f64>,
    best_loss: f64,
}

impl<F: FnMut(&[f64]) -> f64> Budget<F> {
    fn eval(&mut self, point: &[f64]) -> Result<f64> {
        if self.evaluations >= self.max {
            return Err(Error::BudgetExhausted {
                evaluations: self.evaluations,
                best_point: self.best_point.clone(),
                best_loss: self.best_loss,
            });
        }
        let mut value = (self.loss)(point);
        if value.is_nan() {
            value = f64::INFINITY;
        }
        self.evaluations += 1;
        self.trace.push(value);
        if value < self.best_loss || self.best_point.is_empty() {
            self.best_loss = value;
            self.best_point = point.to_vec();
        }
        Ok(value)
    }
}

/// Minimizes `loss` over the box `[lower, upper]`. Candidates falling outside
/// the box are clamped onto it; NaN losses count as `+∞`.
pub fn minimize<F>(
    loss: F,
    lower: &[f64],
    upper: &[f64],
    settings: &OptimizerSettings,
) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    settings.validate()?;
    if lower.len() != upper.len() || lower.is_empty() {
        return Err(Error::InvalidParameter(
            "bounds must be non-empty and of equal length".into(),
        ));
    }
    if lower.iter().zip(upper).any(|(lo, hi)| !(lo < hi)) {
        return Err(Error::InvalidParameter(
            "every lower bound must be below its upper bound".into(),
        ));
    }

    let dims = lower.len();
    let mut budget = Budget {
        loss,
        evaluations: 0,
        max: settings.max_evaluations,
        trace: Vec::new(),
        best_point: Vec::new(),
        best_loss: f64::INFINITY,
    };
    let mut theta: Vec<f64> = lower.iter().zip(upper).map(|(lo, hi)| (lo + hi) / 2.0).collect();
    let mut range: Vec<f64> = lower.iter().zip(upper).map(|(lo, hi)| hi - lo).collect();
    let mut spread = vec![f64::INFINITY; dims];
    let mut current = budget.eval(&theta)?;
    let part = settings.partitions as f64;
    let mut i = 0;

    while spread.iter().copied().fold(0.0, f64::max) > settings.tolerance {
        let mut offsets: Vec<f64> = Vec::with_capacity(2 * settings.partitions + 1);
        for p in 0..=2 * settings.partitions {
            let value = (theta[i] + range[i] * (p as f64 / part - 1.0)).clamp(lower[i], upper[i]);
            if !offsets.contains(&value) {
                offsets.push(value);
            }
        }

        // the current point holds unless beaten; equal improvers go to the lowest p
        let mut best = (theta[i], current);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for value in offsets {
            let l = if value == theta[i] {
                current
            } else {
                let mut candidate = theta.clone();
                candidate[i] = value;
                budget.eval(&candidate)?
            };
            lo = lo.min(l);
            hi = hi.max(l);
            if l < best.1 {
                best = (value, l);
            }
        }
        theta[i] = best.0;
        current = best.1;
        spread[i] = hi - lo;
        range[i] /= settings.contraction;
        i = (i + 1) % dims;
    }

    Ok(Minimum {
        point: theta,
        loss: current,
        evaluations: budget.evaluations,
        trace: budget.trace,
    })
}
