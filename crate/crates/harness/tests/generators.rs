use fairfilter_harness::sbm::{generate_sbm, SbmParams};
use fairfilter_harness::seeds::cell_seed;
use fairfilter_harness::split::{split, SplitSpec};

fn two_blocks() -> SbmParams {
    SbmParams {
        blocks: vec![50, 50],
        p_in: 0.2,
        p_out: 0.01,
        sensitive_block: 1,
        positive_block: 0,
        connected: true,
    }
}

#[test]
fn block_model_edge_count() {
    // two blocks of 50: 2·C(50,2) within-block pairs, 2500 across
    let within: f64 = 2.0 * 1225.0;
    let mean = within * 0.2 + 2500.0 * 0.01;
    let sd = (within * 0.2 * 0.8 + 2500.0 * 0.01 * 0.99).sqrt();
    assert_eq!(mean, 515.0);
    for seed in 0..20 {
        let b = generate_sbm(&two_blocks(), seed).unwrap();
        assert_eq!(b.graph.node_count(), 100);
        assert!(b.graph.is_connected());
        let m = b.graph.edge_count() as f64;
        assert!((m - mean).abs() <= 4.0 * sd, "seed {seed}: {m} edges");
    }
}

#[test]
fn block_model_attributes() {
    let b = generate_sbm(&two_blocks(), 9).unwrap();
    assert_eq!(b.groups.sensitive_nodes(), (50..100).collect::<Vec<_>>());
    assert!(b.positives[..50].iter().all(|&p| p));
    assert!(b.positives[50..].iter().all(|&p| !p));
    let again = generate_sbm(&two_blocks(), 9).unwrap();
    assert_eq!(b.graph, again.graph);
}

#[test]
fn splits_partition_the_nodes() {
    let b = generate_sbm(&two_blocks(), 1).unwrap();
    for (i, f) in [0.1, 0.2, 0.3].into_iter().enumerate() {
        let s = split(&b.positives, &SplitSpec::new(f, cell_seed(3, "g", i)).unwrap()).unwrap();
        assert_eq!(s.train.len(), (f * 100.0).floor() as usize);
        assert_eq!(s.train.len() + s.test.len(), 100);
        assert!(s.train.iter().all(|v| s.test.binary_search(v).is_err()));
        for v in 0..100 {
            let expected = s.train.contains(&v) && b.positives[v];
            assert_eq!(s.prior[v] == 1.0, expected);
        }
    }
}

#[test]
fn positives_split_in_proportion_on_average() {
    let b = generate_sbm(&two_blocks(), 2).unwrap();
    let runs = 400;
    let mut total = 0usize;
    for seed in 0..runs {
        let s = split(&b.positives, &SplitSpec::new(0.2, seed).unwrap()).unwrap();
        total += s.train.iter().filter(|&&v| b.positives[v]).count();
    }
    // 50 positives, a fifth of them expected in training
    let mean = total as f64 / runs as f64;
    assert!((mean - 10.0).abs() < 0.5, "{mean}");
}
