//! Friedman test and Nemenyi post-hoc comparison of several approaches over
//! a common set of experiment settings.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Significance level of the Friedman omnibus test.
pub const FRIEDMAN_ALPHA: f64 = 0.001;
pub const NEMENYI_ALPHA: f64 = 0.05;

/// Two-tailed studentized range quantiles at α = 0.05 divided by √2,
/// indexed by the number of approaches k = 2..=10.
const Q_ALPHA_05: [f64; 9] = [1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164];

/// Rows are experiment settings, columns are approaches; higher is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    rows: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter("score matrix rows differ in length".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("score matrix has missing or non-finite cells".into()));
        }
        Ok(Self { rows })
    }

    pub fn settings(&self) -> usize {
        self.rows.len()
    }

    pub fn approaches(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Mean of each column.
    pub fn column_means(&self) -> Vec<f64> {
        let n = self.settings() as f64;
        (0..self.approaches())
            .map(|j| self.rows.iter().map(|r| r[j]).sum::<f64>() / n)
            .collect()
    }

    /// Average rank of each approach; rank 1 is the best (highest) value and
    /// ties share the mean of their ranks.
    pub fn average_ranks(&self) -> Vec<f64> {
        let k = self.approaches();
        let mut totals = vec![0.0; k];
        for row in &self.rows {
            for (j, r) in rank_descending(row).into_iter().enumerate() {
                totals[j] += r;
            }
        }
        let n = self.settings() as f64;
        totals.into_iter().map(|t| t / n).collect()
    }
}

/// 1-based ranks, highest value first, ties averaged.
pub fn rank_descending(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean;
        }
        i = j + 1;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
}

/// Friedman chi-square test that all approaches rank alike.
pub fn friedman(matrix: &ScoreMatrix) -> Result<FriedmanOutcome> {
    let (n, k) = (matrix.settings(), matrix.approaches());
    if k < 3 || n < 2 {
        return Err(Error::UnsupportedTest(format!(
            "friedman needs at least 3 approaches and 2 settings, got {k} and {n}"
        )));
    }
    let (nf, kf) = (n as f64, k as f64);
    let squares: f64 = matrix.average_ranks().iter().map(|r| r * r).sum();
    let statistic = 12.0 * nf / (kf * (kf + 1.0)) * (squares - kf * (kf + 1.0).powi(2) / 4.0);
    // rounding can leave a tiny negative value for identical columns
    let statistic = statistic.max(0.0);
    let dist = ChiSquared::new(kf - 1.0)
        .map_err(|e| Error::UnsupportedTest(format!("chi-square distribution: {e}")))?;
    let p_value = dist.sf(statistic);
    Ok(FriedmanOutcome {
        statistic,
        p_value,
        reject: p_value < FRIEDMAN_ALPHA,
        alpha: FRIEDMAN_ALPHA,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NemenyiOutcome {
    pub average_ranks: Vec<f64>,
    pub critical_difference: f64,
    /// Approach pairs `(i, j)`, `i < j`, whose rank gap exceeds the critical difference.
    pub significant: Vec<(usize, usize)>,
}

/// Studentized-range constant for `k` approaches at level `alpha`.
pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    if (alpha - NEMENYI_ALPHA).abs() > 1e-12 {
        return Err(Error::UnsupportedTest(format!(
            "nemenyi constants are tabulated for alpha = 0.05 only, got {alpha}"
        )));
    }
    if !(2..=10).contains(&k) {
        return Err(Error::UnsupportedTest(format!(
            "nemenyi constants cover 2 to 10 approaches, got {k}"
        )));
    }
    Ok(Q_ALPHA_05[k - 2])
}

pub fn critical_difference(k: usize, n: usize, alpha: f64) -> Result<f64> {
    let q = nemenyi_q(k, alpha)?;
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n as f64)).sqrt())
}

pub fn nemenyi(matrix: &ScoreMatrix, alpha: f64) -> Result<NemenyiOutcome> {
    let (n, k) = (matrix.settings(), matrix.approaches());
    if n == 0 {
        return Err(Error::UnsupportedTest("nemenyi needs at least one setting".into()));
    }
    let cd = critical_difference(k, n, alpha)?;
    let ranks = matrix.average_ranks();
    let mut significant = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if (ranks[i] - ranks[j]).abs() > cd {
                significant.push((i, j));
            }
        }
    }
    Ok(NemenyiOutcome {
        average_ranks: ranks,
        critical_difference: cd,
        significant,
    })
}
