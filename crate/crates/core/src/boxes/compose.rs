use std::collections::HashSet;
use std::sync::Arc;

use super::context_box::ContextBox;
use super::hypergraph::{Hypergraph, Observable};
use crate::error::{Error, Result};

/// Observables of both hypergraphs side by side; names shared by the two
/// sides get a `#1` / `#2` suffix.
fn disjoint_union(g1: &Hypergraph, g2: &Hypergraph) -> Vec<Observable> {
    let n1: HashSet<&str> = g1.observables().iter().map(|o| o.name.as_str()).collect();
    let n2: HashSet<&str> = g2.observables().iter().map(|o| o.name.as_str()).collect();
    let rename = |o: &Observable, other: &HashSet<&str>, tag: &str| {
        if other.contains(o.name.as_str()) {
            Observable::new(format!("{}#{tag}", o.name), o.cardinality)
        } else {
            o.clone()
        }
    };
    g1.observables()
        .iter()
        .map(|o| rename(o, &n2, "1"))
        .chain(g2.observables().iter().map(|o| rename(o, &n1, "2")))
        .collect()
}

/// Direct sum: union of observables, contexts of `b1` followed by those of `b2`.
pub fn direct_sum(b1: &ContextBox, b2: &ContextBox) -> Result<ContextBox> {
    let (g1, g2) = (b1.hypergraph(), b2.hypergraph());
    let k1 = g1.num_observables();
    let contexts =
        g1.contexts().iter().cloned().chain(g2.contexts().iter().map(|c| c.iter().map(|i| i + k1).collect())).collect();
    let g = Arc::new(Hypergraph::new(disjoint_union(g1, g2), contexts)?);
    let distributions = b1.distributions().iter().chain(b2.distributions()).cloned().collect();
    Ok(ContextBox::from_raw(g, distributions))
}

/// Tensor product: one context `c ∪ c'` per pair, carrying the product
/// distribution (observables of `c` most significant).
pub fn tensor(b1: &ContextBox, b2: &ContextBox) -> Result<ContextBox> {
    let (g1, g2) = (b1.hypergraph(), b2.hypergraph());
    let k1 = g1.num_observables();
    let mut contexts = Vec::with_capacity(g1.num_contexts() * g2.num_contexts());
    let mut distributions = Vec::with_capacity(contexts.capacity());
    for (c1, d1) in g1.contexts().iter().zip(b1.distributions()) {
        for (c2, d2) in g2.contexts().iter().zip(b2.distributions()) {
            contexts.push(c1.iter().copied().chain(c2.iter().map(|i| i + k1)).collect());
            distributions.push(d1.iter().flat_map(|x| d2.iter().map(move |y| x * y)).collect());
        }
    }
    let g = Arc::new(Hypergraph::new(disjoint_union(g1, g2), contexts)?);
    Ok(ContextBox::from_raw(g, distributions))
}

/// `b ⊗ b ⊗ ... ⊗ b` with `copies >= 1` factors.
pub fn tensor_power(b: &ContextBox, copies: usize) -> Result<ContextBox> {
    if copies == 0 {
        return Err(Error::InvalidParameter("tensor power needs at least one copy".into()));
    }
    let mut acc = b.clone();
    for _ in 1..copies {
        acc = tensor(&acc, b)?;
    }
    Ok(acc)
}
