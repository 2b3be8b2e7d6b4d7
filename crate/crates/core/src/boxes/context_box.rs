use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::hypergraph::{digits, strides, Hypergraph};
use crate::error::{Error, Result};

/// Absolute tolerance on the sum of every probability vector.
pub const NORM_TOL: f64 = 1e-9;
/// Entries in `[-NEG_CLAMP, 0)` are clamped to zero, anything below is rejected.
pub const NEG_CLAMP: f64 = 1e-12;

/// A box: one probability vector per context of a hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextBox {
    hypergraph: Arc<Hypergraph>,
    distributions: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Number of distributions differs from the number of contexts.
    ContextCount {
        expected: usize,
        found: usize,
    },
    Shape {
        context: usize,
        expected: usize,
        found: usize,
    },
    Normalization {
        context: usize,
        sum: f64,
    },
    Negative {
        context: usize,
        index: usize,
        value: f64,
    },
    NonFinite {
        context: usize,
        index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ContextCount { expected, found } => {
                write!(f, "expected {expected} distributions, found {found}")
            }
            Violation::Shape { context, expected, found } => {
                write!(f, "context {context}: expected length {expected}, found {found}")
            }
            Violation::Normalization { context, sum } => write!(f, "context {context}: sums to {sum}"),
            Violation::Negative { context, index, value } => {
                write!(f, "context {context}: entry {index} is negative ({value})")
            }
            Violation::NonFinite { context, index } => write!(f, "context {context}: entry {index} is not finite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contexts_with_violations(&self) -> BTreeSet<usize> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::Shape { context, .. }
                | Violation::Normalization { context, .. }
                | Violation::Negative { context, .. }
                | Violation::NonFinite { context, .. } => Some(*context),
                Violation::ContextCount { .. } => None,
            })
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalMismatch {
    pub contexts: (usize, usize),
    /// Total-variation distance between the two marginals on the overlap.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub violations: Vec<MarginalMismatch>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ContextBox {
    /// Builds a box, validating shapes and normalization. Tiny negative
    /// entries are clamped to zero.
    pub fn new(hypergraph: Arc<Hypergraph>, distributions: Vec<Vec<f64>>) -> Result<Self> {
        let mut b = ContextBox::from_raw(hypergraph, distributions);
        let report = b.validate();
        if !report.is_valid() {
            let msg: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidBox(msg.join("; ")));
        }
        for d in &mut b.distributions {
            for x in d.iter_mut() {
                if *x < 0.0 {
                    *x = 0.0;
                }
            }
        }
        Ok(b)
    }

    /// Wraps vectors without any checks; use [`ContextBox::validate`] afterwards.
    pub fn from_raw(hypergraph: Arc<Hypergraph>, distributions: Vec<Vec<f64>>) -> Self {
        ContextBox { hypergraph, distributions }
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn hypergraph_arc(&self) -> &Arc<Hypergraph> {
        &self.hypergraph
    }

    pub fn distributions(&self) -> &[Vec<f64>] {
        &self.distributions
    }

    pub fn distribution(&self, c: usize) -> &[f64] {
        &self.distributions[c]
    }

    pub fn num_contexts(&self) -> usize {
        self.hypergraph.num_contexts()
    }

    /// All context vectors concatenated in context order.
    pub fn stacked(&self) -> Vec<f64> {
        self.distributions.iter().flatten().copied().collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let g = &self.hypergraph;
        let mut violations = Vec::new();
        if self.distributions.len() != g.num_contexts() {
            violations.push(Violation::ContextCount { expected: g.num_contexts(), found: self.distributions.len() });
        }
        for (c, d) in self.distributions.iter().enumerate().take(g.num_contexts()) {
            let expected = g.context_size(c);
            if d.len() != expected {
                violations.push(Violation::Shape { context: c, expected, found: d.len() });
                continue;
            }
            let mut bad_entry = false;
            for (i, &x) in d.iter().enumerate() {
                if !x.is_finite() {
                    violations.push(Violation::NonFinite { context: c, index: i });
                    bad_entry = true;
                } else if x < -NEG_CLAMP {
                    violations.push(Violation::Negative { context: c, index: i, value: x });
                    bad_entry = true;
                }
            }
            if !bad_entry {
                let sum: f64 = d.iter().sum();
                if (sum - 1.0).abs() > NORM_TOL {
                    violations.push(Violation::Normalization { context: c, sum });
                }
            }
        }
        ValidationReport { violations }
    }

    /// Marginal of context `c` on the observables of `subset` (hypergraph
    /// indices, returned row-major in the order given).
    pub fn context_marginal(&self, c: usize, subset: &[usize]) -> Vec<f64> {
        marginalize(self.hypergraph.as_ref(), self.hypergraph.context(c), &self.distributions[c], subset)
    }

    /// Pairwise consistency: every two overlapping contexts must agree on the
    /// marginal of their shared observables within `tol` in total variation.
    pub fn check_consistency(&self, tol: f64) -> ConsistencyReport {
        let g = &self.hypergraph;
        let sets: Vec<BTreeSet<usize>> = g.contexts().iter().map(|c| c.iter().copied().collect()).collect();
        let mut violations = Vec::new();
        for a in 0..sets.len() {
            for b in (a + 1)..sets.len() {
                let shared: Vec<usize> = sets[a].intersection(&sets[b]).copied().collect();
                if shared.is_empty() {
                    continue;
                }
                let ma = self.context_marginal(a, &shared);
                let mb = self.context_marginal(b, &shared);
                let distance = 0.5 * ma.iter().zip(&mb).map(|(x, y)| (x - y).abs()).sum::<f64>();
                if distance > tol {
                    violations.push(MarginalMismatch { contexts: (a, b), distance });
                }
            }
        }
        ConsistencyReport { violations }
    }

    pub fn is_consistent(&self, tol: f64) -> bool {
        self.check_consistency(tol).is_consistent()
    }

    pub fn require_consistent(&self, tol: f64) -> Result<()> {
        let r = self.check_consistency(tol);
        match r.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Inconsistent(format!(
                "contexts {} and {} disagree on their overlap by {:e}",
                v.contexts.0, v.contexts.1, v.distance
            ))),
        }
    }

    pub fn same_hypergraph(&self, other: &ContextBox) -> Result<()> {
        if Arc::ptr_eq(&self.hypergraph, &other.hypergraph) || self.hypergraph == other.hypergraph {
            Ok(())
        } else {
            Err(Error::HypergraphMismatch("boxes live on different hypergraphs".into()))
        }
    }

    /// Context-wise convex combination `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &ContextBox, p: f64) -> Result<ContextBox> {
        self.same_hypergraph(other)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("mixing weight {p} outside [0, 1]")));
        }
        let distributions = self
            .distributions
            .iter()
            .zip(&other.distributions)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| p * x + (1.0 - p) * y).collect())
            .collect();
        Ok(ContextBox::from_raw(self.hypergraph.clone(), distributions))
    }

    /// Largest absolute entry-wise difference to another box on the same hypergraph.
    pub fn max_abs_diff(&self, other: &ContextBox) -> f64 {
        self.distributions
            .iter()
            .zip(&other.distributions)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Swaps the even- and odd-parity uniform distributions on every context.
    pub fn opposite(&self) -> Result<ContextBox> {
        if !self.hypergraph.is_binary() {
            return Err(Error::NotXor("opposite needs binary observables".into()));
        }
        let mut out = Vec::with_capacity(self.distributions.len());
        for (c, d) in self.distributions.iter().enumerate() {
            let m = self.hypergraph.context(c).len();
            let parity = xor_parity(d, 1e-9)
                .ok_or_else(|| Error::NotXor(format!("context {c} is not supported on a single parity class")))?;
            out.push(parity_distribution(m, !parity));
        }
        Ok(ContextBox::from_raw(self.hypergraph.clone(), out))
    }
}

/// Marginalizes a vector over `ctx` (ordered observables) onto `subset`.
pub(crate) fn marginalize(g: &Hypergraph, ctx: &[usize], dist: &[f64], subset: &[usize]) -> Vec<f64> {
    let cards: Vec<usize> = ctx.iter().map(|&i| g.cardinality(i)).collect();
    let positions: Vec<usize> =
        subset.iter().map(|s| ctx.iter().position(|x| x == s).expect("subset must lie inside the context")).collect();
    let sub_cards: Vec<usize> = subset.iter().map(|&i| g.cardinality(i)).collect();
    let sub_strides = strides(&sub_cards);
    let mut out = vec![0.0; sub_cards.iter().product()];
    for (idx, &p) in dist.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let d = digits(idx, &cards);
        let j: usize = positions.iter().zip(&sub_strides).map(|(&pos, &s)| d[pos] * s).sum();
        out[j] += p;
    }
    out
}

/// Uniform distribution over the `m`-bit strings of a given parity
/// (`false` = even, `true` = odd).
pub fn parity_distribution(m: usize, odd: bool) -> Vec<f64> {
    let len = 1usize << m;
    let w = 1.0 / (len / 2) as f64;
    (0..len).map(|s| if ((s.count_ones() % 2) == 1) == odd { w } else { 0.0 }).collect()
}

/// `Some(odd)` when `d` equals the uniform even (`false`) or odd (`true`)
/// parity distribution within `tol`.
pub fn xor_parity(d: &[f64], tol: f64) -> Option<bool> {
    if !d.len().is_power_of_two() || d.len() < 2 {
        return None;
    }
    let m = d.len().trailing_zeros() as usize;
    [false, true].into_iter().find(|&odd| {
        let target = parity_distribution(m, odd);
        d.iter().zip(&target).all(|(x, y)| (x - y).abs() <= tol)
    })
}
