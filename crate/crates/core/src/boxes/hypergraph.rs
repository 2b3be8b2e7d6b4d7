use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Observable {
    pub name: String,
    pub cardinality: usize,
}

impl Observable {
    pub fn new(name: impl Into<String>, cardinality: usize) -> Self {
        Observable { name: name.into(), cardinality }
    }

    pub fn binary(name: impl Into<String>) -> Self {
        Observable::new(name, 2)
    }
}

/// A measurement scenario: observables with finite alphabets and the contexts
/// (jointly measurable subsets) they are grouped into.
///
/// Contexts keep the order in which their observables were listed; every
/// outcome vector over a context is row-major in that order with the first
/// listed observable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    observables: Vec<Observable>,
    contexts: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn new(observables: Vec<Observable>, contexts: Vec<Vec<usize>>) -> Result<Self> {
        if observables.is_empty() {
            return Err(Error::InvalidHypergraph("no observables".into()));
        }
        let mut names = BTreeSet::new();
        for o in &observables {
            if o.cardinality < 2 {
                return Err(Error::InvalidHypergraph(format!(
                    "observable `{}` has cardinality {} < 2",
                    o.name, o.cardinality
                )));
            }
            if !names.insert(o.name.as_str()) {
                return Err(Error::InvalidHypergraph(format!("duplicate observable name `{}`", o.name)));
            }
        }
        let k = observables.len();
        let mut seen_sets = BTreeSet::new();
        let mut covered = vec![false; k];
        for (ci, c) in contexts.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidHypergraph(format!("context {ci} is empty")));
            }
            let set: BTreeSet<usize> = c.iter().copied().collect();
            if set.len() != c.len() {
                return Err(Error::InvalidHypergraph(format!("context {ci} repeats an observable")));
            }
            if let Some(&bad) = set.iter().find(|&&i| i >= k) {
                return Err(Error::InvalidHypergraph(format!(
                    "context {ci} references observable index {bad} (only {k} observables)"
                )));
            }
            if !seen_sets.insert(set) {
                return Err(Error::InvalidHypergraph(format!("context {ci} duplicates an earlier context")));
            }
            for &i in c {
                covered[i] = true;
            }
        }
        if let Some(i) = covered.iter().position(|&c| !c) {
            return Err(Error::InvalidHypergraph(format!(
                "observable `{}` belongs to no context",
                observables[i].name
            )));
        }
        Ok(Hypergraph { observables, contexts })
    }

    /// Binary observables named by `names`, contexts given by name.
    pub fn binary_named(names: &[&str], contexts: &[&[&str]]) -> Result<Self> {
        let observables: Vec<Observable> = names.iter().map(|n| Observable::binary(*n)).collect();
        let lookup = |n: &str| {
            names
                .iter()
                .position(|m| *m == n)
                .ok_or_else(|| Error::InvalidHypergraph(format!("unknown observable `{n}`")))
        };
        let contexts = contexts
            .iter()
            .map(|c| c.iter().map(|n| lookup(n)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(observables, contexts)
    }

    /// The `n`-cycle: observables `A1..An`, contexts `{A_i, A_{i+1 mod n}}`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("cycle needs n >= 3, got {n}")));
        }
        let observables = (1..=n).map(|i| Observable::binary(format!("A{i}"))).collect();
        let contexts = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Hypergraph::new(observables, contexts)
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn context(&self, c: usize) -> &[usize] {
        &self.contexts[c]
    }

    /// Number of contexts (`n`).
    pub fn num_contexts(&self) -> usize {
        self.contexts.len()
    }

    /// Number of observables (`k`).
    pub fn num_observables(&self) -> usize {
        self.observables.len()
    }

    pub fn cardinality(&self, i: usize) -> usize {
        self.observables[i].cardinality
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.observables.iter().map(|o| o.cardinality).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.observables.iter().position(|o| o.name == name)
    }

    pub fn is_binary(&self) -> bool {
        self.observables.iter().all(|o| o.cardinality == 2)
    }

    /// Size of the outcome space of context `c`.
    pub fn context_size(&self, c: usize) -> usize {
        self.contexts[c].iter().map(|&i| self.observables[i].cardinality).product()
    }

    /// Size of the joint outcome space as `u128` (may exceed `usize`).
    pub fn joint_size(&self) -> u128 {
        self.observables.iter().map(|o| o.cardinality as u128).product()
    }

    /// Number of contexts each observable belongs to.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.observables.len()];
        for c in &self.contexts {
            for &i in c {
                deg[i] += 1;
            }
        }
        deg
    }

    /// Index of the context whose observable set equals `set`, if any.
    pub fn find_context(&self, set: &BTreeSet<usize>) -> Option<usize> {
        self.contexts.iter().position(|c| c.len() == set.len() && c.iter().all(|i| set.contains(i)))
    }

    /// Connected components of observables (linked through shared contexts),
    /// each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let k = self.observables.len();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for c in &self.contexts {
            for w in c.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_slot = vec![usize::MAX; k];
        for i in 0..k {
            let r = find(&mut parent, i);
            if root_slot[r] == usize::MAX {
                root_slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[root_slot[r]].push(i);
        }
        groups
    }
}

/// Row-major strides for a list of cardinalities (last entry has stride 1).
pub(crate) fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

/// Splits a row-major index into digits.
pub(crate) fn digits(mut index: usize, cards: &[usize]) -> Vec<usize> {
    let mut d = vec![0; cards.len()];
    for i in (0..cards.len()).rev() {
        d[i] = index % cards[i];
        index /= cards[i];
    }
    d
}

pub(crate) fn index_of_digits(d: &[usize], cards: &[usize]) -> usize {
    d.iter().zip(cards).fold(0, |acc, (&v, &c)| acc * c + v)
}
