use std::sync::Arc;

use contextuality::boxes::{parity_distribution, ChannelMixture, Violation};
use contextuality::random::{random_consistent_box, random_joint, random_small_box};
use contextuality::{
    box_of_joint, builtin, deterministic_box, direct_sum, kcbs, pr_box, tensor, tensor_power, ContextBox,
    DeterministicAssignment, Hypergraph, JointDistribution, XorFamily,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pr_graph() -> Arc<Hypergraph> {
    pr_box().hypergraph_arc().clone()
}

#[test]
fn validation_reports_each_problem() {
    assert!(pr_box().validate().is_valid());
    let mut d = pr_box().distributions().to_vec();
    d[1].iter_mut().for_each(|x| *x *= 2.0);
    let report = ContextBox::from_raw(pr_graph(), d).validate();
    assert!(matches!(report.violations[..], [Violation::Normalization { context: 1, .. }]));
    assert!(ContextBox::new(
        pr_graph(),
        vec![vec![0.5, 0.0, 0.0, 0.5]; 4]
            .into_iter()
            .map(|mut v| {
                v[0] *= 2.0;
                v
            })
            .collect()
    )
    .is_err());

    let mut d = pr_box().distributions().to_vec();
    d[2].pop();
    let report = ContextBox::from_raw(pr_graph(), d).validate();
    assert!(matches!(report.violations[..], [Violation::Shape { context: 2, expected: 4, found: 3 }]));

    let mut d = pr_box().distributions().to_vec();
    d[0] = vec![1.2, -0.2, 0.0, 0.0];
    let report = ContextBox::from_raw(pr_graph(), d).validate();
    assert!(report.violations.iter().any(|v| matches!(v, Violation::Negative { context: 0, .. })));
    assert!(!report.to_string().is_empty());
}

#[test]
fn consistency_of_named_boxes() {
    assert!(pr_box().is_consistent(1e-9));
    assert!(XorFamily::PeresMermin.extremal().unwrap().is_consistent(1e-9));
    assert!(XorFamily::MerminStar.extremal().unwrap().is_consistent(1e-9));
    assert!(kcbs().unwrap().is_consistent(1e-9));

    let mut d = pr_box().distributions().to_vec();
    d[0] = vec![1.0, 0.0, 0.0, 0.0];
    let b = ContextBox::new(pr_graph(), d).unwrap();
    let report = b.check_consistency(1e-9);
    assert!(!report.is_consistent());
    let a1 = b.hypergraph().index_of("A1").unwrap();
    let hit = report.violations.iter().find(|v| v.contexts.0 == 0 || v.contexts.1 == 0).unwrap();
    assert!((hit.distance - 0.5).abs() < 1e-12);
    assert!(b.hypergraph().context(0).contains(&a1));
    assert!(b.require_consistent(1e-9).is_err());
}

#[test]
fn marginals_of_joints() {
    let g2 = Arc::new(Hypergraph::binary_named(&["A1", "A2"], &[&["A1", "A2"]]).unwrap());
    let u = JointDistribution::uniform(g2);
    assert_eq!(u.marginal(&[0]).unwrap(), vec![0.5, 0.5]);

    let g3 = Arc::new(Hypergraph::binary_named(&["A1", "A2", "A3"], &[&["A1", "A2"], &["A2", "A3"]]).unwrap());
    let point = JointDistribution::point_mass(g3.clone(), &DeterministicAssignment::new(vec![1, 0, 1])).unwrap();
    assert_eq!(point.marginal(&[0, 2]).unwrap(), vec![0.0, 0.0, 0.0, 1.0]);

    let ghz = JointDistribution::new(g3.clone(), vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]).unwrap();
    assert_eq!(ghz.marginal(&[0, 1]).unwrap(), vec![0.5, 0.0, 0.0, 0.5]);
    let b = box_of_joint(&ghz, &g3).unwrap();
    assert_eq!(b.distribution(0), &[0.5, 0.0, 0.0, 0.5]);
    assert_eq!(b.distribution(1), &[0.5, 0.0, 0.0, 0.5]);
}

#[test]
fn deterministic_boxes() {
    let g = pr_graph();
    let zeros = deterministic_box(&DeterministicAssignment::new(vec![0; 4]), &g).unwrap();
    assert!(zeros.distributions().iter().all(|d| d == &[1.0, 0.0, 0.0, 0.0]));
    let ones = deterministic_box(&DeterministicAssignment::new(vec![1; 4]), &g).unwrap();
    assert!(ones.distributions().iter().all(|d| d == &[0.0, 0.0, 0.0, 1.0]));

    let chain = Arc::new(Hypergraph::cycle(4).unwrap());
    let alt = deterministic_box(&DeterministicAssignment::new(vec![0, 1, 0, 1]), &chain).unwrap();
    let d01 = [0.0, 1.0, 0.0, 0.0];
    let d10 = [0.0, 0.0, 1.0, 0.0];
    assert_eq!(alt.distribution(0), &d01);
    assert_eq!(alt.distribution(1), &d10);
    assert_eq!(alt.distribution(2), &d01);
    assert_eq!(alt.distribution(3), &d10);
    assert!(deterministic_box(&DeterministicAssignment::new(vec![0, 2, 0, 0]), &g).is_err());
}

#[test]
fn mixing_and_opposites() {
    let pr = pr_box();
    let opp = pr.opposite().unwrap();
    let half = pr.mix(&opp, 0.5).unwrap();
    assert!(half.distributions().iter().all(|d| d.iter().all(|&x| (x - 0.25).abs() < 1e-15)));
    assert_eq!(pr.mix(&opp, 1.0).unwrap(), pr);
    assert_eq!(opp.opposite().unwrap(), pr);
    assert!(pr.mix(&opp, 1.5).is_err());
    assert!(half.opposite().is_err());

    let pm = XorFamily::PeresMermin.extremal().unwrap();
    assert_eq!(pm.opposite().unwrap().opposite().unwrap(), pm);

    let c = (std::f64::consts::PI / 5.0).cos();
    let alpha = 2.0 * c / (1.0 + c);
    let ch5 = XorFamily::Chain(5).extremal().unwrap();
    let quantum = ch5.mix(&ch5.opposite().unwrap(), alpha).unwrap();
    assert!(quantum.max_abs_diff(&XorFamily::Chain(5).isotropic(alpha).unwrap()) < 1e-15);
    assert!(quantum.is_consistent(1e-12));
}

#[test]
fn named_boxes() {
    let pr = builtin("PR", None, None, false).unwrap();
    assert_eq!(pr.num_contexts(), 4);
    let even = [0.5, 0.0, 0.0, 0.5];
    let odd = [0.0, 0.5, 0.5, 0.0];
    assert_eq!(pr.distributions().iter().filter(|d| d.as_slice() == even).count(), 3);
    assert_eq!(pr.distribution(3), &odd);

    let k = kcbs().unwrap();
    let s = 1.0 / 5f64.sqrt();
    for d in k.distributions() {
        assert_eq!(d, &[1.0 - 2.0 * s, s, s, 0.0]);
    }

    let pm = builtin("pm", None, None, false).unwrap();
    assert_eq!(pm.num_contexts(), 6);
    assert!(pm.hypergraph().contexts().iter().all(|c| c.len() == 3));
    let (e3, o3) = (parity_distribution(3, false), parity_distribution(3, true));
    assert_eq!(pm.distributions().iter().filter(|d| **d == e3).count(), 5);
    assert_eq!(pm.distributions().iter().filter(|d| **d == o3).count(), 1);

    assert_eq!(builtin("CH", Some(7), Some(0.95), false).unwrap(), XorFamily::Chain(7).isotropic(0.95).unwrap());
    assert_eq!(builtin("PR", None, None, true).unwrap(), pr.opposite().unwrap());
    assert!(builtin("CH", None, None, false).is_err());
    assert!(builtin("CH", Some(2), None, false).is_err());
    assert!(builtin("KCBS", None, Some(0.5), false).is_err());
    assert!(builtin("XY", None, None, false).is_err());
}

#[test]
fn direct_sums() {
    let pr = pr_box();
    let sum = direct_sum(&pr, &XorFamily::PR.isotropic(0.5).unwrap()).unwrap();
    assert_eq!(sum.hypergraph().num_observables(), 8);
    assert_eq!(sum.num_contexts(), 8);
    assert!(sum.is_consistent(1e-12));
    assert_eq!(sum.hypergraph().components().len(), 2);

    let g = pr_graph();
    let d1 = deterministic_box(&DeterministicAssignment::new(vec![0, 1, 0, 1]), &g).unwrap();
    let d2 = deterministic_box(&DeterministicAssignment::new(vec![1, 1, 0, 0]), &g).unwrap();
    let s = direct_sum(&d1, &d2).unwrap();
    let both =
        deterministic_box(&DeterministicAssignment::new(vec![0, 1, 0, 1, 1, 1, 0, 0]), s.hypergraph_arc()).unwrap();
    assert_eq!(s, both);
}

#[test]
fn tensor_products() {
    let pr = pr_box();
    let t = tensor(&pr, &pr).unwrap();
    assert_eq!(t.num_contexts(), 16);
    assert!(t.hypergraph().contexts().iter().all(|c| c.len() == 4));
    for (c, d) in t.distributions().iter().enumerate() {
        assert_eq!(d.len(), 16);
        let (a, b) = (pr.distribution(c / 4), pr.distribution(c % 4));
        for (k, &x) in d.iter().enumerate() {
            assert!((x - a[k / 4] * b[k % 4]).abs() < 1e-15);
        }
    }
    assert!(t.is_consistent(1e-12));
    assert_eq!(tensor_power(&pr, 3).unwrap().num_contexts(), 64);
    assert!(tensor_power(&pr, 0).is_err());

    let single = Arc::new(Hypergraph::binary_named(&["X", "Y"], &[&["X", "Y"]]).unwrap());
    let zero = deterministic_box(&DeterministicAssignment::new(vec![0, 0]), &single).unwrap();
    let one = deterministic_box(&DeterministicAssignment::new(vec![1, 1]), &single).unwrap();
    let t = tensor(&zero, &one).unwrap();
    assert_eq!(t.num_contexts(), 1);
    let mut expected = vec![0.0; 16];
    expected[0b0011] = 1.0;
    assert_eq!(t.distribution(0), expected.as_slice());

    let ext = tensor(&pr, &zero).unwrap();
    for c in 0..4 {
        let d = ext.distribution(c);
        for (k, &x) in d.iter().enumerate() {
            let expected = if k % 4 == 0 { pr.distribution(c)[k / 4] } else { 0.0 };
            assert_eq!(x, expected);
        }
    }
}

#[test]
fn channel_mixtures_preserve_boxes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let b = random_small_box(&mut rng).unwrap();
        let m = ChannelMixture::random(&b.hypergraph().cardinalities(), 3, &mut rng);
        let out = m.apply(&b).unwrap();
        assert!(out.validate().is_valid());
        assert!(out.is_consistent(1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn joints_give_consistent_boxes(seed in any::<u64>(), n in 3usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Arc::new(Hypergraph::cycle(n).unwrap());
        let j = random_joint(&g, &mut rng);
        let b = box_of_joint(&j, &g).unwrap();
        prop_assert!(b.validate().is_valid());
        prop_assert!(b.is_consistent(1e-12));
    }

    #[test]
    fn mixtures_stay_valid(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pm = XorFamily::PeresMermin.extremal().unwrap();
        let a = random_consistent_box(pm.hypergraph_arc(), Some(&pm), &mut rng).unwrap();
        let b = random_consistent_box(pm.hypergraph_arc(), None, &mut rng).unwrap();
        let m = a.mix(&b, p).unwrap();
        prop_assert!(m.validate().is_valid());
        prop_assert!(m.is_consistent(1e-12));
    }

    #[test]
    fn compositions_stay_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_small_box(&mut rng).unwrap();
        let b = random_small_box(&mut rng).unwrap();
        for c in [direct_sum(&a, &b).unwrap(), tensor(&a, &b).unwrap()] {
            prop_assert!(c.validate().is_valid());
            prop_assert!(c.is_consistent(1e-12));
        }
    }
}
