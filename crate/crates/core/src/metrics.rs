//! Quality and fairness measures over posteriors, and the fairness-aware
//! objectives used to tune prior editing.

use crate::error::{Error, Result};

/// Partition of the nodes into a sensitive set `S` and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SensitiveGroups {
    mask: Vec<bool>,
    sensitive_count: usize,
}

impl SensitiveGroups {
    pub fn new(node_count: usize, sensitive: &[usize]) -> Result<Self> {
        let mut mask = vec![false; node_count];
        for &v in sensitive {
            if v >= node_count {
                return Err(Error::NodeOutOfRange {
                    index: v,
                    node_count,
                });
            }
            mask[v] = true;
        }
        Ok(Self::from_mask(mask))
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let sensitive_count = mask.iter().filter(|&&s| s).count();
        Self {
            mask,
            sensitive_count,
        }
    }

    pub fn node_count(&self) -> usize {
        self.mask.len()
    }

    pub fn is_sensitive(&self, v: usize) -> bool {
        self.mask[v]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn sensitive_count(&self) -> usize {
        self.sensitive_count
    }

    pub fn nonsensitive_count(&self) -> usize {
        self.mask.len() - self.sensitive_count
    }

    pub fn sensitive_nodes(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&v| self.mask[v]).collect()
    }

    /// The same partition with the roles of `S` and `S'` exchanged.
    pub fn swapped(&self) -> Self {
        Self::from_mask(self.mask.iter().map(|s| !s).collect())
    }

    pub(crate) fn check_len(&self, signal: &[f64]) -> Result<()> {
        if signal.len() != self.mask.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mask.len(),
                found: signal.len(),
            });
        }
        Ok(())
    }
}

/// Mann-Whitney AUC over `eval_nodes`; tied scores earn half credit.
pub fn auc(scores: &[f64], labels: &[bool], eval_nodes: &[usize]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            found: scores.len(),
        });
    }
    let mut entries: Vec<(f64, bool)> = eval_nodes.iter().map(|&v| (scores[v], labels[v])).collect();
    let positives = entries.iter().filter(|e| e.1).count();
    let negatives = entries.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(Error::SingleClass);
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));

    // sum of 1-based average ranks of the positives
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < entries.len() {
        let mut j = i;
        while j + 1 < entries.len() && entries[j + 1].0 == entries[i].0 {
            j += 1;
        }
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        let tied_positives = entries[i..=j].iter().filter(|e| e.1).count();
        rank_sum += mean_rank * tied_positives as f64;
        i = j + 1;
    }
    let p = positives as f64;
    let u = rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

fn prule_from_sums(sum_s: f64, count_s: usize, sum_sp: f64, count_sp: usize) -> Result<f64> {
    if count_s == 0 {
        return Err(Error::EmptyGroup("sensitive"));
    }
    if count_sp == 0 {
        return Err(Error::EmptyGroup("non-sensitive"));
    }
    let side_s = count_sp as f64 * sum_s;
    let side_sp = count_s as f64 * sum_sp;
    let hi = side_s.max(side_sp);
    if hi == 0.0 {
        return Ok(0.0);
    }
    Ok(side_s.min(side_sp) / hi)
}

/// Stochastic pRule: the min/max ratio of `|S'| Σ_S r` and `|S| Σ_{S'} r`.
/// Zero when every score is zero.
pub fn prule(r: &[f64], groups: &SensitiveGroups) -> Result<f64> {
    groups.check_len(r)?;
    let (mut sum_s, mut sum_sp) = (0.0, 0.0);
    for (v, &x) in r.iter().enumerate() {
        if groups.is_sensitive(v) {
            sum_s += x;
        } else {
            sum_sp += x;
        }
    }
    prule_from_sums(
        sum_s,
        groups.sensitive_count(),
        sum_sp,
        groups.nonsensitive_count(),
    )
}

/// Stochastic pRule with group sizes and sums taken over `eval_nodes` only.
pub fn prule_on_subset(r: &[f64], groups: &SensitiveGroups, eval_nodes: &[usize]) -> Result<f64> {
    groups.check_len(r)?;
    let (mut sum_s, mut sum_sp) = (0.0, 0.0);
    let (mut count_s, mut count_sp) = (0, 0);
    for &v in eval_nodes {
        if groups.is_sensitive(v) {
            sum_s += r[v];
            count_s += 1;
        } else {
            sum_sp += r[v];
            count_sp += 1;
        }
    }
    prule_from_sums(sum_s, count_s, sum_sp, count_sp)
}

fn max_of(r: &[f64]) -> f64 {
    r.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Mean absolute difference between the max-normalized signals.
pub fn mad_term(r_est: &[f64], r: &[f64]) -> Result<f64> {
    if r_est.len() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            found: r_est.len(),
        });
    }
    let (m_est, m) = (max_of(r_est), max_of(r));
    if !(m_est > 0.0) {
        return Err(Error::ZeroSignal("estimated posterior"));
    }
    if !(m > 0.0) {
        return Err(Error::ZeroSignal("posterior"));
    }
    let total: f64 = r_est
        .iter()
        .zip(r)
        .map(|(a, b)| (a / m_est - b / m).abs())
        .sum();
    Ok(total / r.len() as f64)
}

/// Floor applied to the reference distribution where it vanishes but the
/// estimate does not.
pub const KL_SUPPORT_FLOOR: f64 = 1e-12;

/// `KL(r_est | r)` between the L1-normalized signals, with `0 ln x = 0`.
pub fn kl_term(r_est: &[f64], r: &[f64]) -> Result<f64> {
    if r_est.len() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            found: r_est.len(),
        });
    }
    let (s_est, s): (f64, f64) = (r_est.iter().sum(), r.iter().sum());
    if !(s_est > 0.0) {
        return Err(Error::ZeroSignal("estimated posterior"));
    }
    if !(s > 0.0) {
        return Err(Error::ZeroSignal("posterior"));
    }
    Ok(r_est
        .iter()
        .zip(r)
        .map(|(a, b)| {
            let p_hat = a / s_est;
            if p_hat <= 0.0 {
                return 0.0;
            }
            let p = (b / s).max(KL_SUPPORT_FLOOR);
            p_hat * (p_hat / p).ln()
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divergence {
    /// Mean absolute difference of max-normalized posteriors.
    MeanAbsolute,
    /// KL divergence of L1-normalized posteriors.
    KullbackLeibler,
}

/// `divergence(r_est, r) - w_prule · min(pRule(r_est), sup_prule)`; lower is better.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub divergence: Divergence,
    pub w_prule: f64,
    pub sup_prule: f64,
}

impl ObjectiveSpec {
    pub fn new(divergence: Divergence, w_prule: f64, sup_prule: f64) -> Result<Self> {
        if !(w_prule >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "w_prule must be non-negative, got {w_prule}"
            )));
        }
        if !(sup_prule > 0.0 && sup_prule <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sup_prule must lie in (0, 1], got {sup_prule}"
            )));
        }
        Ok(Self {
            divergence,
            w_prule,
            sup_prule,
        })
    }
}

pub fn objective(
    spec: &ObjectiveSpec,
    r_est: &[f64],
    r: &[f64],
    groups: &SensitiveGroups,
) -> Result<f64> {
    let term = match spec.divergence {
        Divergence::MeanAbsolute => mad_term(r_est, r)?,
        Divergence::KullbackLeibler => kl_term(r_est, r)?,
    };
    let fairness = prule(r_est, groups)?.min(spec.sup_prule);
    Ok(term - spec.w_prule * fairness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn groups(n: usize, s: &[usize]) -> SensitiveGroups {
        SensitiveGroups::new(n, s).unwrap()
    }

    #[test]
    fn auc_perfect_and_inverted() {
        let labels = [true, false, true, false, false];
        let all: Vec<usize> = (0..5).collect();
        let scores: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
        assert_eq!(auc(&scores, &labels, &all).unwrap(), 1.0);
        let inverted: Vec<f64> = scores.iter().map(|s| 1.0 - s).collect();
        assert_eq!(auc(&inverted, &labels, &all).unwrap(), 0.0);
    }

    #[test]
    fn auc_enumerated_pairs() {
        let labels = [true, false, true, false];
        let scores = [0.9, 0.8, 0.7, 0.1];
        assert_abs_diff_eq!(auc(&scores, &labels, &[0, 1, 2, 3]).unwrap(), 0.75);
    }

    #[test]
    fn auc_ties_get_half_credit() {
        let labels = [true, false];
        assert_eq!(auc(&[0.5, 0.5], &labels, &[0, 1]).unwrap(), 0.5);
    }

    #[test]
    fn auc_single_class_is_undefined() {
        let labels = [true, true, false];
        assert!(matches!(auc(&[1.0, 0.5, 0.0], &labels, &[0, 1]), Err(Error::SingleClass)));
    }

    #[test]
    fn prule_worked_example() {
        let g = groups(4, &[0, 1]);
        assert_abs_diff_eq!(prule(&[0.8, 0.8, 0.6, 0.6], &g).unwrap(), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn prule_conventions() {
        let g = groups(4, &[0, 3]);
        assert_eq!(prule(&[0.0; 4], &g).unwrap(), 0.0);
        assert_eq!(prule(&[1.0; 4], &g).unwrap(), 1.0);
        assert!(matches!(prule(&[1.0; 4], &groups(4, &[])), Err(Error::EmptyGroup(_))));
        assert!(matches!(
            prule(&[1.0; 4], &groups(4, &[0, 1, 2, 3])),
            Err(Error::EmptyGroup(_))
        ));
    }

    #[test]
    fn prule_subset_cases() {
        let g = groups(4, &[0, 1]);
        let r = [1.0, 0.0, 1.0, 0.0];
        assert_eq!(prule_on_subset(&r, &g, &[0, 2]).unwrap(), 1.0);
        let all = [0, 1, 2, 3];
        assert_eq!(prule_on_subset(&r, &g, &all).unwrap(), prule(&r, &g).unwrap());
        assert!(matches!(prule_on_subset(&r, &g, &[2, 3]), Err(Error::EmptyGroup(_))));
    }

    #[test]
    fn mad_cases() {
        let r = [0.2, 0.5, 0.3];
        assert_eq!(mad_term(&r, &r).unwrap(), 0.0);
        let doubled: Vec<f64> = r.iter().map(|x| 2.0 * x).collect();
        assert_abs_diff_eq!(mad_term(&doubled, &r).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mad_term(&[1.0, 0.0], &[1.0, 1.0]).unwrap(), 0.5);
        assert!(mad_term(&[0.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn kl_cases() {
        let r = [0.2, 0.5, 0.3];
        assert_abs_diff_eq!(kl_term(&r, &r).unwrap(), 0.0, epsilon = 1e-15);
        let expected = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert_abs_diff_eq!(kl_term(&[1.0, 1.0], &[3.0, 1.0]).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.143841, epsilon = 1e-6);
        assert_abs_diff_eq!(
            kl_term(&[0.0, 1.0], &[0.5, 0.5]).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        assert!(kl_term(&[0.0, 0.0], &[1.0, 1.0]).is_err());
        // support mismatch stays finite
        assert!(kl_term(&[1.0, 1.0], &[1.0, 0.0]).unwrap().is_finite());
    }

    #[test]
    fn objective_cases() {
        let g = groups(4, &[0, 1]);
        let r = [0.8, 0.8, 0.6, 0.6];
        let kl1 = ObjectiveSpec::new(Divergence::KullbackLeibler, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(objective(&kl1, &r, &r, &g).unwrap(), -0.75, epsilon = 1e-15);

        // pRule 0.9 clipped at 0.8
        let r9 = [1.0, 1.0, 0.9, 0.9];
        assert_abs_diff_eq!(prule(&r9, &g).unwrap(), 0.9, epsilon = 1e-15);
        let kl_c = ObjectiveSpec::new(Divergence::KullbackLeibler, 10.0, 0.8).unwrap();
        assert_abs_diff_eq!(objective(&kl_c, &r9, &r9, &g).unwrap(), -8.0, epsilon = 1e-12);

        let g2 = groups(2, &[0]);
        let mad = ObjectiveSpec::new(Divergence::MeanAbsolute, 1.0, 1.0).unwrap();
        let p_star = prule(&[1.0, 0.0], &g2).unwrap();
        assert_abs_diff_eq!(
            objective(&mad, &[1.0, 0.0], &[1.0, 1.0], &g2).unwrap(),
            0.5 - p_star,
            epsilon = 1e-15
        );
    }

    #[test]
    fn objective_spec_validation() {
        assert!(ObjectiveSpec::new(Divergence::KullbackLeibler, -1.0, 1.0).is_err());
        assert!(ObjectiveSpec::new(Divergence::KullbackLeibler, 1.0, 0.0).is_err());
        assert!(ObjectiveSpec::new(Divergence::KullbackLeibler, 1.0, 1.5).is_err());
    }
}
