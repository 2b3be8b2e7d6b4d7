use std::sync::Arc;

use contextuality::boxes::{builtin, deterministic_box, kcbs, pr_box, DeterministicAssignment, XorFamily};
use contextuality::ks::beta;
use contextuality::symmetry::{
    builtin_generators, chain_generators, generate_group, invariant_set_check, isotropic_parameter, GroupElement,
    TwirlGroup,
};
use contextuality::Error;

#[test]
fn named_boxes_are_fixed_by_their_generators() {
    let cases = [
        ("PM", XorFamily::PeresMermin.extremal().unwrap(), 8),
        ("M", XorFamily::MerminStar.extremal().unwrap(), 10),
        ("CH(5)", XorFamily::Chain(5).extremal().unwrap(), 4),
        ("PR", pr_box(), 3),
        ("KCBS", kcbs().unwrap(), 2),
    ];
    for (name, b, count) in cases {
        let set = builtin_generators(name).unwrap();
        assert_eq!(set.generators.len(), count, "{name}");
        assert_eq!(set.hypergraph.as_ref(), b.hypergraph(), "{name}");
        for (k, h) in set.generators.iter().enumerate() {
            let dev = h.apply(&b).unwrap().max_abs_diff(&b);
            assert_eq!(dev, 0.0, "{name} generator {} moves the box", k + 1);
        }
    }
}

#[test]
fn literal_pm_diagonal_mapping_is_not_a_bijection() {
    let g = XorFamily::PeresMermin.hypergraph().unwrap();
    let literal = GroupElement::from_swaps(&g, &[("A4", "A2"), ("A7", "A3"), ("A7", "A6")], &["A9"]);
    assert!(matches!(literal, Err(Error::InvalidGroupElement(_))));
}

#[test]
fn group_orders() {
    let kcbs_group = builtin_generators("KCBS").unwrap().group().unwrap();
    assert_eq!(kcbs_group.order(), 10);
    for n in 3..=12 {
        let grp = chain_generators(n).unwrap().group().unwrap();
        assert_eq!(grp.order(), 2 * n, "CH({n})");
        assert!(grp.acts_transitively_on_contexts());
    }
    let g = Arc::new(XorFamily::PR.hypergraph().unwrap());
    let trivial = generate_group(&g, &[GroupElement::identity(&g)], 10).unwrap();
    assert_eq!(trivial.order(), 1);
    let pm = builtin_generators("PM").unwrap();
    assert!(matches!(generate_group(&pm.hypergraph, &pm.generators, 4), Err(Error::GroupCapExceeded { cap: 4 })));
}

#[test]
fn group_is_closed_under_inverse() {
    let grp = builtin_generators("M").unwrap().group().unwrap();
    let elems: std::collections::HashSet<_> = grp.elements().iter().cloned().collect();
    for e in grp.elements() {
        assert!(elems.contains(&e.inverse()));
    }
}

#[test]
fn twirl_of_all_zeros_vertex_under_pm_group() {
    let set = builtin_generators("PM").unwrap();
    let grp = set.group().unwrap();
    let zero = deterministic_box(&DeterministicAssignment::new(vec![0; 9]), &set.hypergraph).unwrap();
    let t = grp.twirl(&zero).unwrap();
    let expected = XorFamily::PeresMermin.isotropic(5.0 / 6.0).unwrap();
    assert!(t.max_abs_diff(&expected) < 1e-12);
    let pm = XorFamily::PeresMermin.extremal().unwrap();
    assert!((isotropic_parameter(&t, &pm, &grp).unwrap() - 5.0 / 6.0).abs() < 1e-12);
}

#[test]
fn twirl_fixes_named_boxes_and_trivial_group_is_identity() {
    let pr = pr_box();
    let grp = builtin_generators("PR").unwrap().group().unwrap();
    assert!(grp.twirl(&pr).unwrap().max_abs_diff(&pr) < 1e-15);
    let half = XorFamily::PR.isotropic(0.5).unwrap();
    assert!((isotropic_parameter(&pr, &pr, &grp).unwrap() - 1.0).abs() < 1e-15);
    assert!((isotropic_parameter(&half, &pr, &grp).unwrap() - 0.5).abs() < 1e-15);
    let k = kcbs().unwrap();
    let trivial = TwirlGroup::trivial(k.hypergraph_arc());
    assert_eq!(trivial.twirl(&k).unwrap(), k);
}

#[test]
fn isotropic_parameter_rejects_non_invariant_boxes() {
    let grp = builtin_generators("PR").unwrap().group().unwrap();
    let g = grp.hypergraph().clone();
    let v = deterministic_box(&DeterministicAssignment::new(vec![0, 1, 0, 0]), &g).unwrap();
    assert!(matches!(isotropic_parameter(&v, &pr_box(), &grp), Err(Error::NotIsotropic(_))));
}

#[test]
fn twirled_vertices_lie_on_the_isotropic_segment() {
    for (name, fam) in [("PM", XorFamily::PeresMermin), ("M", XorFamily::MerminStar), ("CH(5)", XorFamily::Chain(5))] {
        let set = builtin_generators(name).unwrap();
        let grp = set.group().unwrap();
        let reference = fam.extremal().unwrap();
        let n = reference.num_contexts() as f64;
        for i in 0..set.hypergraph.joint_size() as usize {
            let a = DeterministicAssignment::from_joint_index(i, &set.hypergraph);
            let t = grp.twirl(&deterministic_box(&a, &set.hypergraph).unwrap()).unwrap();
            let alpha = beta(&reference, &t).unwrap() / n;
            let on_line = fam.isotropic(alpha).unwrap();
            assert!(t.max_abs_diff(&on_line) < 1e-9, "{name} vertex {i}");
        }
    }
}

#[test]
fn invariant_set_theorem_on_samples() {
    for name in ["PM", "M", "CH(6)"] {
        let set = builtin_generators(name).unwrap();
        let grp = set.group().unwrap();
        let contextual = builtin(name.trim_end_matches(|c: char| !c.is_alphabetic()), None, None, false).ok();
        let report = invariant_set_check(&grp, contextual.as_ref(), 25, 42).unwrap();
        assert!(report.passed(), "{name}: {:?}", report.failure.map(|f| f.0));
    }
    let pr = pr_box();
    let trivial = TwirlGroup::trivial(pr.hypergraph_arc());
    assert!(invariant_set_check(&trivial, Some(&pr), 5, 1).unwrap().passed());
}
