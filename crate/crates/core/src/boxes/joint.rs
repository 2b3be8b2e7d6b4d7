use std::sync::Arc;

use super::context_box::{ContextBox, NEG_CLAMP, NORM_TOL};
use super::hypergraph::{digits, index_of_digits, strides, Hypergraph};
use crate::error::{Error, Result};

/// A probability vector over the full product alphabet of a hypergraph,
/// row-major with the first observable most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    hypergraph: Arc<Hypergraph>,
    probabilities: Vec<f64>,
}

/// One output per observable: a vertex of the non-contextual polytope.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicAssignment {
    pub outputs: Vec<usize>,
}

impl DeterministicAssignment {
    pub fn new(outputs: Vec<usize>) -> Self {
        DeterministicAssignment { outputs }
    }

    pub fn check(&self, g: &Hypergraph) -> Result<()> {
        if self.outputs.len() != g.num_observables() {
            return Err(Error::LengthMismatch(self.outputs.len(), g.num_observables()));
        }
        for (i, &v) in self.outputs.iter().enumerate() {
            if v >= g.cardinality(i) {
                return Err(Error::InvalidParameter(format!(
                    "output {v} of observable `{}` outside alphabet of size {}",
                    g.observables()[i].name,
                    g.cardinality(i)
                )));
            }
        }
        Ok(())
    }

    /// Position in the row-major joint alphabet.
    pub fn joint_index(&self, g: &Hypergraph) -> usize {
        index_of_digits(&self.outputs, &g.cardinalities())
    }

    pub fn from_joint_index(index: usize, g: &Hypergraph) -> Self {
        DeterministicAssignment { outputs: digits(index, &g.cardinalities()) }
    }

    /// Outcome index this assignment induces on context `c`.
    pub fn context_outcome(&self, g: &Hypergraph, c: usize) -> usize {
        let ctx = g.context(c);
        ctx.iter().fold(0, |acc, &i| acc * g.cardinality(i) + self.outputs[i])
    }
}

/// Index table mapping every joint outcome to its row-major index over the
/// ordered observable list `subset`.
pub(crate) fn projection_table(g: &Hypergraph, subset: &[usize]) -> Vec<u32> {
    let cards = g.cardinalities();
    let sub_cards: Vec<usize> = subset.iter().map(|&i| g.cardinality(i)).collect();
    let sub_strides = strides(&sub_cards);
    let mut weight = vec![0usize; cards.len()];
    for (pos, &i) in subset.iter().enumerate() {
        weight[i] = sub_strides[pos];
    }
    let mut table: Vec<u32> = vec![0];
    for (i, &d) in cards.iter().enumerate() {
        let mut next = Vec::with_capacity(table.len() * d);
        for &x in &table {
            for v in 0..d {
                next.push(x + (v * weight[i]) as u32);
            }
        }
        table = next;
    }
    table
}

impl JointDistribution {
    pub fn new(hypergraph: Arc<Hypergraph>, mut probabilities: Vec<f64>) -> Result<Self> {
        let dim = hypergraph.joint_size();
        if probabilities.len() as u128 != dim {
            return Err(Error::InvalidJoint(format!("expected {dim} probabilities, found {}", probabilities.len())));
        }
        for (i, x) in probabilities.iter_mut().enumerate() {
            if !x.is_finite() || *x < -NEG_CLAMP {
                return Err(Error::InvalidJoint(format!("entry {i} is {x}")));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidJoint(format!("sums to {sum}")));
        }
        Ok(JointDistribution { hypergraph, probabilities })
    }

    pub fn uniform(hypergraph: Arc<Hypergraph>) -> Self {
        let n = hypergraph.joint_size() as usize;
        JointDistribution { hypergraph, probabilities: vec![1.0 / n as f64; n] }
    }

    pub fn point_mass(hypergraph: Arc<Hypergraph>, a: &DeterministicAssignment) -> Result<Self> {
        a.check(&hypergraph)?;
        let n = hypergraph.joint_size() as usize;
        let mut p = vec![0.0; n];
        p[a.joint_index(&hypergraph)] = 1.0;
        Ok(JointDistribution { hypergraph, probabilities: p })
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn hypergraph_arc(&self) -> &Arc<Hypergraph> {
        &self.hypergraph
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Marginal on `subset`, returned row-major in hypergraph order.
    pub fn marginal(&self, subset: &[usize]) -> Result<Vec<f64>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let k = self.hypergraph.num_observables();
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= k) {
            return Err(Error::InvalidParameter(format!("observable index {bad} out of range")));
        }
        Ok(self.marginal_ordered(&sorted))
    }

    /// Marginal on an ordered list of observables (no validation).
    pub(crate) fn marginal_ordered(&self, subset: &[usize]) -> Vec<f64> {
        let table = projection_table(&self.hypergraph, subset);
        let size: usize = subset.iter().map(|&i| self.hypergraph.cardinality(i)).product();
        let mut out = vec![0.0; size];
        for (&t, &p) in table.iter().zip(&self.probabilities) {
            out[t as usize] += p;
        }
        out
    }

    /// Total-variation distance to another joint on the same alphabet.
    pub fn total_variation(&self, other: &JointDistribution) -> f64 {
        0.5 * self.probabilities.iter().zip(&other.probabilities).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }

    /// Product of the marginals on the given blocks of observables. The
    /// blocks must partition the observables.
    pub fn product_of_blocks(&self, blocks: &[Vec<usize>]) -> JointDistribution {
        let g = &self.hypergraph;
        let cards = g.cardinalities();
        let margs: Vec<Vec<f64>> = blocks.iter().map(|b| self.marginal_ordered(b)).collect();
        let tables: Vec<Vec<u32>> = blocks.iter().map(|b| projection_table(g, b)).collect();
        let n: usize = cards.iter().product();
        let probabilities =
            (0..n).map(|l| margs.iter().zip(&tables).map(|(m, t)| m[t[l] as usize]).product()).collect();
        JointDistribution { hypergraph: self.hypergraph.clone(), probabilities }
    }
}

/// The box whose every context distribution is the corresponding marginal
/// of `joint`.
pub fn box_of_joint(joint: &JointDistribution, g: &Arc<Hypergraph>) -> Result<ContextBox> {
    if joint.hypergraph() != g.as_ref() {
        return Err(Error::HypergraphMismatch("joint is defined on another hypergraph".into()));
    }
    let distributions = g.contexts().iter().map(|c| joint.marginal_ordered(c)).collect();
    Ok(ContextBox::from_raw(g.clone(), distributions))
}

/// Point-mass box induced by a deterministic assignment.
pub fn deterministic_box(a: &DeterministicAssignment, g: &Arc<Hypergraph>) -> Result<ContextBox> {
    a.check(g)?;
    let distributions = (0..g.num_contexts())
        .map(|c| {
            let mut d = vec![0.0; g.context_size(c)];
            d[a.context_outcome(g, c)] = 1.0;
            d
        })
        .collect();
    Ok(ContextBox::from_raw(g.clone(), distributions))
}
