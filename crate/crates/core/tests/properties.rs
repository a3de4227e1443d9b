mod common;

use common::*;
use fairfilter::baselines::{lfpro, mult, LFPRO_TOLERANCE};
use fairfilter::metrics::{kl_term, prule};
use fairfilter::stats::{rank_descending, ScoreMatrix};
use fairfilter::{
    auc, edit_priors, normalize, propagate, EditKind, EditMechanism, EditParams, Normalization,
    SensitiveGroups,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn graph_and_signals(
    n: usize,
    seed: u64,
) -> (fairfilter::Graph, Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = connected_graph(&mut rng, n, 0.2);
    let x = random_signal(&mut rng, n);
    let y = random_signal(&mut rng, n);
    (g, x, y)
}

fn groups_from(mask: &[bool]) -> SensitiveGroups {
    SensitiveGroups::from_mask(mask.to_vec())
}

fn signal_and_mask() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    (2usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec(0.0f64..1.0, n),
            prop::collection::vec(any::<bool>(), n),
        )
    })
}

fn both_groups(mask: &[bool]) -> bool {
    mask.iter().any(|&s| s) && mask.iter().any(|&s| !s)
}

fn params() -> impl Strategy<Value = EditParams> {
    (0.0f64..=1.0, 0.0f64..=1.0, -10.0f64..=10.0, -10.0f64..=10.0, 0.0f64..=1.0).prop_map(
        |(a_s, a_sp, b_s, b_sp, a0)| EditParams {
            a_s,
            a_sp,
            b_s,
            b_sp,
            a0,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn propagation_is_linear(n in 2usize..30, seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (g, x, y) = graph_and_signals(n, seed);
        for kind in [Normalization::Symmetric, Normalization::Column] {
            let w = normalize(&g, kind);
            let mix: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
            let lhs = propagate(&w, &mix).unwrap();
            let px = propagate(&w, &x).unwrap();
            let py = propagate(&w, &y).unwrap();
            for v in 0..n {
                prop_assert!((lhs[v] - (a * px[v] + b * py[v])).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn symmetric_propagation_is_self_adjoint(n in 2usize..30, seed in any::<u64>()) {
        let (g, x, y) = graph_and_signals(n, seed);
        let w = normalize(&g, Normalization::Symmetric);
        let wx = propagate(&w, &x).unwrap();
        let wy = propagate(&w, &y).unwrap();
        let lhs: f64 = wx.iter().zip(&y).map(|(p, q)| p * q).sum();
        let rhs: f64 = x.iter().zip(&wy).map(|(p, q)| p * q).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn column_propagation_keeps_mass(n in 2usize..30, seed in any::<u64>()) {
        let (g, x, _) = graph_and_signals(n, seed);
        let w = normalize(&g, Normalization::Column);
        let wx = propagate(&w, &x).unwrap();
        prop_assert!((wx.iter().sum::<f64>() - x.iter().sum::<f64>()).abs() <= 1e-12);
    }

    #[test]
    fn prule_scale_and_swap((r, mask) in signal_and_mask(), c in 1e-3f64..1e3) {
        prop_assume!(both_groups(&mask));
        let g = groups_from(&mask);
        let base = prule(&r, &g).unwrap();
        let scaled: Vec<f64> = r.iter().map(|x| c * x).collect();
        prop_assert!((prule(&scaled, &g).unwrap() - base).abs() <= 1e-12);
        prop_assert!((prule(&r, &g.swapped()).unwrap() - base).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&base));
    }

    #[test]
    fn kl_is_non_negative((r, _) in signal_and_mask(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let est = random_signal(&mut rng, r.len());
        prop_assume!(r.iter().sum::<f64>() > 0.0);
        prop_assert!(kl_term(&est, &r).unwrap() >= -1e-12);
        prop_assert!(kl_term(&r, &r).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn auc_complement((scores, labels) in signal_and_mask()) {
        prop_assume!(both_groups(&labels));
        let mut sorted = scores.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|p| p[0] != p[1]));
        let nodes: Vec<usize> = (0..scores.len()).collect();
        let neg: Vec<f64> = scores.iter().map(|x| -x).collect();
        let total = auc(&scores, &labels, &nodes).unwrap() + auc(&neg, &labels, &nodes).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn mult_is_fair_and_keeps_order((r, mask) in signal_and_mask()) {
        prop_assume!(both_groups(&mask));
        let g = groups_from(&mask);
        let r: Vec<f64> = r.iter().map(|x| x + 1e-3).collect();
        let out = mult(&r, &g).unwrap();
        prop_assert!((prule(&out, &g).unwrap() - 1.0).abs() <= 1e-9);
        for u in 0..r.len() {
            for v in 0..r.len() {
                if mask[u] == mask[v] && r[u] < r[v] {
                    prop_assert!(out[u] < out[v]);
                }
            }
        }
    }

    #[test]
    fn lfpro_invariants((r, mask) in signal_and_mask()) {
        prop_assume!(both_groups(&mask));
        let g = groups_from(&mask);
        let out = lfpro(&r, &g, LFPRO_TOLERANCE).unwrap();
        let before: f64 = r.iter().sum();
        prop_assert!((out.scores.iter().sum::<f64>() - before).abs() <= 1e-9);
        prop_assert!(out.scores.iter().all(|&x| x >= -1e-15));
        for pair in out.prule_trace.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-12);
        }
    }

    #[test]
    fn edited_priors_are_finite_and_non_negative(
        (r, mask) in signal_and_mask(),
        p in params(),
        kind in prop_oneof![Just(EditKind::FairPers), Just(EditKind::FairEdit), Just(EditKind::FairEdit0)],
    ) {
        prop_assume!(r.iter().any(|&x| x > 0.0));
        let g = groups_from(&mask);
        let q: Vec<f64> = r.iter().map(|&x| if x > 0.5 { 1.0 } else { 0.0 }).collect();
        let mech = EditMechanism::new(kind, p).unwrap();
        for x in edit_priors(&mech, &q, &r, &g).unwrap() {
            prop_assert!(x.is_finite() && x >= 0.0);
        }
    }

    #[test]
    fn fairedit_without_a0_is_fairedit0((r, mask) in signal_and_mask(), mut p in params()) {
        prop_assume!(r.iter().any(|&x| x > 0.0));
        let g = groups_from(&mask);
        let q: Vec<f64> = r.iter().map(|&x| if x > 0.3 { 1.0 } else { 0.0 }).collect();
        p.a0 = 0.0;
        let full = edit_priors(&EditMechanism::new(EditKind::FairEdit, p).unwrap(), &q, &r, &g).unwrap();
        let zero = edit_priors(&EditMechanism::new(EditKind::FairEdit0, p).unwrap(), &q, &r, &g).unwrap();
        prop_assert_eq!(full, zero);
    }

    #[test]
    fn edits_are_exchangeable_within_groups((r, mask) in signal_and_mask(), p in params(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        prop_assume!(r.iter().any(|&x| x > 0.0));
        let g = groups_from(&mask);
        let q: Vec<f64> = r.iter().map(|&x| if x > 0.5 { 1.0 } else { 0.0 }).collect();
        // shuffle positions inside each group
        let mut perm: Vec<usize> = (0..r.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for class in [true, false] {
            let idx: Vec<usize> = (0..r.len()).filter(|&v| mask[v] == class).collect();
            let mut shuffled = idx.clone();
            shuffled.shuffle(&mut rng);
            for (a, b) in idx.iter().zip(shuffled) {
                perm[*a] = b;
            }
        }
        let rp: Vec<f64> = perm.iter().map(|&v| r[v]).collect();
        let qp: Vec<f64> = perm.iter().map(|&v| q[v]).collect();
        let mech = EditMechanism::new(EditKind::FairEdit, p).unwrap();
        let base = edit_priors(&mech, &q, &r, &g).unwrap();
        let moved = edit_priors(&mech, &qp, &rp, &g).unwrap();
        for v in 0..r.len() {
            prop_assert_eq!(moved[v], base[perm[v]]);
        }
    }

    #[test]
    fn average_ranks_sum(rows in (3usize..9).prop_flat_map(|k| prop::collection::vec(prop::collection::vec(0u8..5, k), 1..12))) {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
        let k = rows[0].len() as f64;
        let m = ScoreMatrix::new(rows.clone()).unwrap();
        let total: f64 = m.average_ranks().iter().sum();
        prop_assert!((total - k * (k + 1.0) / 2.0).abs() <= 1e-9);
        // monotone transforms of a row leave its ranks alone
        for row in &rows {
            let warped: Vec<f64> = row.iter().map(|x| (x * 0.7).exp() - 3.0).collect();
            prop_assert_eq!(rank_descending(row), rank_descending(&warped));
        }
    }
}
