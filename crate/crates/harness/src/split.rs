//! Seeded train/test splits and the priors they induce.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(fraction: f64, seed: u64) -> Result<Self> {
        if !(fraction > 0.0 && fraction < 1.0) {
            return Err(HarnessError::InvalidSplit(format!(
                "fraction must lie in (0, 1), got {fraction}"
            )));
        }
        Ok(Self { fraction, seed })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    /// Sorted training nodes.
    pub train: Vec<usize>,
    /// Sorted held-out nodes.
    pub test: Vec<usize>,
    /// One on training positives, zero elsewhere.
    pub prior: Vec<f64>,
}

/// Samples `⌊fraction · n⌋` training nodes uniformly without repetition.
pub fn split(positives: &[bool], spec: &SplitSpec) -> Result<Split> {
    let n = positives.len();
    let size = (spec.fraction * n as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut in_train = vec![false; n];
    for v in sample(&mut rng, n, size) {
        in_train[v] = true;
    }
    let train: Vec<usize> = (0..n).filter(|&v| in_train[v]).collect();
    let test: Vec<usize> = (0..n).filter(|&v| !in_train[v]).collect();
    let prior: Vec<f64> = (0..n)
        .map(|v| if in_train[v] && positives[v] { 1.0 } else { 0.0 })
        .collect();
    if !prior.iter().any(|&x| x > 0.0) {
        return Err(HarnessError::EmptyPrior);
    }
    Ok(Split { train, test, prior })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_follow_the_floor() {
        let positives = vec![true; 10];
        let s = split(&positives, &SplitSpec::new(0.2, 5).unwrap()).unwrap();
        assert_eq!(s.train.len(), 2);
        assert_eq!(s, split(&positives, &SplitSpec::new(0.2, 5).unwrap()).unwrap());

        let s = split(&[true; 3], &SplitSpec::new(0.999, 1).unwrap()).unwrap();
        assert_eq!(s.train.len(), 2);
        assert_eq!(s.test.len(), 1);
    }

    #[test]
    fn no_positive_in_train() {
        let positives = [false; 10];
        assert!(matches!(
            split(&positives, &SplitSpec::new(0.5, 1).unwrap()),
            Err(HarnessError::EmptyPrior)
        ));
    }

    #[test]
    fn bad_fractions() {
        assert!(SplitSpec::new(0.0, 1).is_err());
        assert!(SplitSpec::new(1.0, 1).is_err());
    }
}
