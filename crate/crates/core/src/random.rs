//! Seeded random joints, boxes and channels for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::Exp1;

use crate::boxes::{box_of_joint, parity_distribution, ContextBox, Hypergraph, JointDistribution, XorFamily};
use crate::error::Result;

/// Dirichlet(1, ..., 1) sample over the joint alphabet.
pub fn random_joint<R: Rng + ?Sized>(g: &Arc<Hypergraph>, rng: &mut R) -> JointDistribution {
    let size = g.joint_size() as usize;
    let mut p: Vec<f64> = (0..size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    JointDistribution::new(g.clone(), p).expect("normalized sample")
}

/// A random joint's box, mixed with `contextual` (if given) at a uniform
/// random weight.
pub fn random_consistent_box<R: Rng + ?Sized>(
    g: &Arc<Hypergraph>,
    contextual: Option<&ContextBox>,
    rng: &mut R,
) -> Result<ContextBox> {
    let nc = box_of_joint(&random_joint(g, rng), g)?;
    match contextual {
        Some(b) => b.mix(&nc, rng.gen::<f64>()),
        None => Ok(nc),
    }
}

/// Four triples on six observables, pairwise meeting in one observable;
/// every observable has degree two.
pub fn triangle_of_triples() -> Hypergraph {
    Hypergraph::binary_named(
        &["x1", "x2", "x3", "x4", "x5", "x6"],
        &[&["x1", "x2", "x3"], &["x3", "x4", "x5"], &["x5", "x6", "x1"], &["x2", "x4", "x6"]],
    )
    .expect("static hypergraph")
}

/// The xor-box on [`triangle_of_triples`] with only the last context odd.
pub fn triangle_xor_box() -> ContextBox {
    let g = Arc::new(triangle_of_triples());
    let d = (0..4).map(|c| parity_distribution(3, c == 3)).collect();
    ContextBox::from_raw(g, d)
}

/// Random consistent box on 4 to 6 binary observables, drawn on one of
/// CH(4), CH(5), CH(6) or [`triangle_of_triples`]: an xor-box with one odd
/// context at weight uniform in `[1/2, 1]`, the rest a random joint's box.
pub fn random_small_box<R: Rng + ?Sized>(rng: &mut R) -> Result<ContextBox> {
    let contextual = match [0, 1, 2, 3].choose(rng).copied().unwrap() {
        3 => triangle_xor_box(),
        k => XorFamily::Chain(4 + k).extremal()?,
    };
    let g = contextual.hypergraph_arc();
    let nc = box_of_joint(&random_joint(g, rng), g)?;
    contextual.mix(&nc, rng.gen_range(0.5..=1.0))
}
