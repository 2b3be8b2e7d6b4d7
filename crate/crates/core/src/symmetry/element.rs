use std::collections::BTreeSet;

use crate::boxes::{digits, index_of_digits, ContextBox, Hypergraph};
use crate::error::{Error, Result};

/// Observable permutation composed with output relabelings.
///
/// An assignment `a` is sent to `a'` with `a'[perm[i]] = relabel[perm[i]][a[i]]`;
/// relabelings are indexed by the target observable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    perm: Vec<usize>,
    relabel: Vec<Vec<usize>>,
}

impl GroupElement {
    pub fn new(perm: Vec<usize>, relabel: Vec<Vec<usize>>) -> Result<Self> {
        let k = perm.len();
        if relabel.len() != k {
            return Err(Error::LengthMismatch(relabel.len(), k));
        }
        if !is_bijection(&perm) {
            return Err(Error::InvalidGroupElement("observable map is not a bijection".into()));
        }
        for (t, r) in relabel.iter().enumerate() {
            if !is_bijection(r) {
                return Err(Error::InvalidGroupElement(format!("relabeling of observable {t} is not a bijection")));
            }
        }
        Ok(GroupElement { perm, relabel })
    }

    pub fn identity(g: &Hypergraph) -> Self {
        GroupElement {
            perm: (0..g.num_observables()).collect(),
            relabel: g.cardinalities().iter().map(|&d| (0..d).collect()).collect(),
        }
    }

    /// Element built from named transpositions and bit flips (flips name
    /// the observable after the permutation). Each observable may appear in
    /// at most one transposition.
    pub fn from_swaps(g: &Hypergraph, swaps: &[(&str, &str)], flips: &[&str]) -> Result<Self> {
        let mut perm: Vec<usize> = (0..g.num_observables()).collect();
        let mut moved = BTreeSet::new();
        let lookup = |name: &str| {
            g.index_of(name).ok_or_else(|| Error::InvalidGroupElement(format!("unknown observable `{name}`")))
        };
        for &(x, y) in swaps {
            let (i, j) = (lookup(x)?, lookup(y)?);
            if i == j || !moved.insert(i) || !moved.insert(j) {
                return Err(Error::InvalidGroupElement(format!("swap {x}<->{y} does not define a bijection")));
            }
            perm.swap(i, j);
        }
        let mut relabel: Vec<Vec<usize>> = g.cardinalities().iter().map(|&d| (0..d).collect()).collect();
        for &f in flips {
            let t = lookup(f)?;
            if g.cardinality(t) != 2 {
                return Err(Error::InvalidGroupElement(format!("bit flip on non-binary observable `{f}`")));
            }
            relabel[t] = vec![1, 0];
        }
        let e = GroupElement::new(perm, relabel)?;
        e.check(g)?;
        Ok(e)
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn relabelings(&self) -> &[Vec<usize>] {
        &self.relabel
    }

    /// Checks cardinalities and that every context is mapped onto a context.
    pub fn check(&self, g: &Hypergraph) -> Result<()> {
        if self.perm.len() != g.num_observables() {
            return Err(Error::LengthMismatch(self.perm.len(), g.num_observables()));
        }
        for (i, &t) in self.perm.iter().enumerate() {
            if g.cardinality(i) != g.cardinality(t) || self.relabel[t].len() != g.cardinality(t) {
                return Err(Error::InvalidGroupElement(format!(
                    "observable {i} mapped to {t} with a different alphabet"
                )));
            }
        }
        for (c, ctx) in g.contexts().iter().enumerate() {
            let image: BTreeSet<usize> = ctx.iter().map(|&i| self.perm[i]).collect();
            if g.find_context(&image).is_none() {
                return Err(Error::InvalidGroupElement(format!("context {c} is not mapped onto a context")));
            }
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    #[allow(clippy::needless_range_loop)]
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut relabel = vec![Vec::new(); k];
        for i in 0..k {
            let mid = other.perm[i];
            let t = self.perm[mid];
            perm[i] = t;
            relabel[t] = other.relabel[mid].iter().map(|&v| self.relabel[t][v]).collect();
        }
        GroupElement { perm, relabel }
    }

    #[allow(clippy::needless_range_loop)]
    pub fn inverse(&self) -> GroupElement {
        let k = self.perm.len();
        let mut perm = vec![0; k];
        let mut relabel = vec![Vec::new(); k];
        for i in 0..k {
            let t = self.perm[i];
            perm[t] = i;
            let r = &self.relabel[t];
            let mut inv = vec![0; r.len()];
            for (v, &w) in r.iter().enumerate() {
                inv[w] = v;
            }
            relabel[i] = inv;
        }
        GroupElement { perm, relabel }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &t)| i == t)
            && self.relabel.iter().all(|r| r.iter().enumerate().all(|(v, &w)| v == w))
    }

    pub fn apply_assignment(&self, a: &[usize]) -> Vec<usize> {
        let mut out = vec![0; a.len()];
        for (i, &v) in a.iter().enumerate() {
            let t = self.perm[i];
            out[t] = self.relabel[t][v];
        }
        out
    }

    /// Per source context: target context and outcome index map.
    pub(crate) fn context_action(&self, g: &Hypergraph) -> Result<Vec<(usize, Vec<usize>)>> {
        let mut out = Vec::with_capacity(g.num_contexts());
        for ctx in g.contexts() {
            let image: BTreeSet<usize> = ctx.iter().map(|&i| self.perm[i]).collect();
            let target = g
                .find_context(&image)
                .ok_or_else(|| Error::InvalidGroupElement("context not mapped onto a context".into()))?;
            let tctx = g.context(target);
            let cards: Vec<usize> = ctx.iter().map(|&i| g.cardinality(i)).collect();
            let tcards: Vec<usize> = tctx.iter().map(|&i| g.cardinality(i)).collect();
            let pos: Vec<usize> = ctx.iter().map(|&i| tctx.iter().position(|&t| t == self.perm[i]).unwrap()).collect();
            let size: usize = cards.iter().product();
            let mut map = Vec::with_capacity(size);
            let mut td = vec![0; tctx.len()];
            for idx in 0..size {
                let d = digits(idx, &cards);
                for (k, &i) in ctx.iter().enumerate() {
                    let t = self.perm[i];
                    td[pos[k]] = self.relabel[t][d[k]];
                }
                map.push(index_of_digits(&td, &tcards));
            }
            out.push((target, map));
        }
        Ok(out)
    }

    /// Pushes each context distribution forward to the image context.
    pub fn apply(&self, b: &ContextBox) -> Result<ContextBox> {
        let g = b.hypergraph();
        self.check(g)?;
        let mut out: Vec<Vec<f64>> = b.distributions().iter().map(|d| vec![0.0; d.len()]).collect();
        for (c, (target, map)) in self.context_action(g)?.into_iter().enumerate() {
            for (idx, &p) in b.distribution(c).iter().enumerate() {
                out[target][map[idx]] = p;
            }
        }
        Ok(ContextBox::from_raw(b.hypergraph_arc().clone(), out))
    }
}

fn is_bijection(m: &[usize]) -> bool {
    let mut seen = vec![false; m.len()];
    m.iter().all(|&x| x < m.len() && !std::mem::replace(&mut seen[x], true))
}
