use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::element::GroupElement;
use crate::boxes::{ContextBox, Hypergraph};
use crate::error::{Error, Result};
use crate::ks::beta;
use crate::random::random_consistent_box;

pub const DEFAULT_GROUP_CAP: usize = 2_000_000;

/// A finite group of hypergraph automorphisms, held as its full element list.
#[derive(Debug, Clone)]
pub struct TwirlGroup {
    hypergraph: Arc<Hypergraph>,
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
    actions: Vec<Vec<(usize, Vec<usize>)>>,
}

/// Breadth-first closure of `gens` under composition.
pub fn generate_group(g: &Arc<Hypergraph>, gens: &[GroupElement], cap: usize) -> Result<TwirlGroup> {
    for h in gens {
        h.check(g)?;
    }
    let id = GroupElement::identity(g);
    let mut seen: HashSet<GroupElement> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for h in gens {
            let y = h.compose(&x);
            if seen.insert(y.clone()) {
                if elements.len() >= cap {
                    return Err(Error::GroupCapExceeded { cap });
                }
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let actions = elements.iter().map(|e| e.context_action(g)).collect::<Result<_>>()?;
    Ok(TwirlGroup { hypergraph: g.clone(), generators: gens.to_vec(), elements, actions })
}

impl TwirlGroup {
    pub fn trivial(g: &Arc<Hypergraph>) -> Self {
        let id = GroupElement::identity(g);
        let actions = vec![id.context_action(g).expect("identity maps contexts to themselves")];
        TwirlGroup { hypergraph: g.clone(), generators: Vec::new(), elements: vec![id], actions }
    }

    pub fn hypergraph(&self) -> &Arc<Hypergraph> {
        &self.hypergraph
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Uniform average of `f(b)` over the group.
    pub fn twirl(&self, b: &ContextBox) -> Result<ContextBox> {
        let g = b.hypergraph();
        if g != self.hypergraph.as_ref() {
            return Err(Error::HypergraphMismatch("group acts on a different hypergraph".into()));
        }
        let mut acc: Vec<Vec<f64>> = b.distributions().iter().map(|d| vec![0.0; d.len()]).collect();
        for action in &self.actions {
            for (c, (target, map)) in action.iter().enumerate() {
                let target = *target;
                for (idx, &p) in b.distribution(c).iter().enumerate() {
                    acc[target][map[idx]] += p;
                }
            }
        }
        let w = 1.0 / self.order() as f64;
        acc.iter_mut().flatten().for_each(|x| *x *= w);
        Ok(ContextBox::from_raw(b.hypergraph_arc().clone(), acc))
    }

    /// Contexts in the orbit of each context.
    pub fn context_orbits(&self) -> Vec<Vec<usize>> {
        let g = &self.hypergraph;
        let mut orbit: Vec<Vec<usize>> = vec![Vec::new(); g.num_contexts()];
        for action in &self.actions {
            for (c, (t, _)) in action.iter().enumerate() {
                orbit[c].push(*t);
            }
        }
        for o in &mut orbit {
            o.sort_unstable();
            o.dedup();
        }
        orbit
    }

    pub fn acts_transitively_on_contexts(&self) -> bool {
        let n = self.hypergraph.num_contexts();
        self.context_orbits().first().is_none_or(|o| o.len() == n)
    }
}

/// Outcome of [`invariant_set_check`]; `failure` holds a falsifying box.
#[derive(Debug, Clone)]
pub struct InvariantSetReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub failure: Option<(String, ContextBox)>,
}

impl InvariantSetReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// On random consistent boxes (mixed with `contextual` when given): twirling
/// is idempotent, its image is fixed by every generator, and boxes fixed by
/// every generator are fixed by the twirl.
pub fn invariant_set_check(
    group: &TwirlGroup,
    contextual: Option<&ContextBox>,
    samples: usize,
    seed: u64,
) -> Result<InvariantSetReport> {
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = InvariantSetReport { samples, max_deviation: 0.0, failure: None };
    let fixed_by_generators = |b: &ContextBox| -> Result<f64> {
        let mut dev: f64 = 0.0;
        for h in group.generators() {
            dev = dev.max(h.apply(b)?.max_abs_diff(b));
        }
        Ok(dev)
    };
    if let Some(c) = contextual {
        if fixed_by_generators(c)? <= TOL {
            let dev = group.twirl(c)?.max_abs_diff(c);
            report.max_deviation = report.max_deviation.max(dev);
            if dev > TOL {
                report.failure = Some(("invariant box is not fixed by the twirl".into(), c.clone()));
            }
        }
    }
    for _ in 0..samples {
        let b = random_consistent_box(group.hypergraph(), contextual, &mut rng)?;
        let t = group.twirl(&b)?;
        let checks = [
            ("twirl is not idempotent", group.twirl(&t)?.max_abs_diff(&t)),
            ("twirled box is moved by a generator", fixed_by_generators(&t)?),
        ];
        for (what, dev) in checks {
            report.max_deviation = report.max_deviation.max(dev);
            if dev > TOL && report.failure.is_none() {
                report.failure = Some((what.to_string(), b.clone()));
            }
        }
        if fixed_by_generators(&b)? <= TOL {
            let dev = group.twirl(&b)?.max_abs_diff(&b);
            report.max_deviation = report.max_deviation.max(dev);
            if dev > TOL && report.failure.is_none() {
                report.failure = Some(("invariant box is not fixed by the twirl".into(), b));
            }
        }
    }
    Ok(report)
}

/// `alpha = beta(reference, b) / n` for a box fixed by the twirl over `group`.
pub fn isotropic_parameter(b: &ContextBox, reference: &ContextBox, group: &TwirlGroup) -> Result<f64> {
    let dev = group.twirl(b)?.max_abs_diff(b);
    if dev > 1e-9 {
        return Err(Error::NotIsotropic(dev));
    }
    Ok(beta(reference, b)? / b.num_contexts() as f64)
}
