use rand::Rng;

use super::context_box::ContextBox;
use super::hypergraph::{digits, index_of_digits};
use crate::error::{Error, Result};

/// A stochastic matrix per observable, `matrices[i][out][in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalChannels {
    pub matrices: Vec<Vec<Vec<f64>>>,
}

/// A convex mixture of independent per-observable channels. Such maps send
/// consistent boxes to consistent boxes and non-contextual boxes to
/// non-contextual ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMixture {
    pub components: Vec<(f64, LocalChannels)>,
}

impl LocalChannels {
    pub fn random<R: Rng + ?Sized>(cards: &[usize], rng: &mut R) -> Self {
        let matrices = cards
            .iter()
            .map(|&d| {
                let mut m = vec![vec![0.0; d]; d];
                for col in 0..d {
                    let w: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
                    let s: f64 = w.iter().sum();
                    for (row, x) in m.iter_mut().zip(&w) {
                        row[col] = x / s;
                    }
                }
                m
            })
            .collect();
        LocalChannels { matrices }
    }
}

impl ChannelMixture {
    pub fn random<R: Rng + ?Sized>(cards: &[usize], components: usize, rng: &mut R) -> Self {
        let w: Vec<f64> = (0..components).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let s: f64 = w.iter().sum();
        ChannelMixture { components: w.iter().map(|x| (x / s, LocalChannels::random(cards, rng))).collect() }
    }

    pub fn apply(&self, b: &ContextBox) -> Result<ContextBox> {
        let g = b.hypergraph();
        for (_, ch) in &self.components {
            if ch.matrices.len() != g.num_observables() {
                return Err(Error::LengthMismatch(ch.matrices.len(), g.num_observables()));
            }
            for (i, m) in ch.matrices.iter().enumerate() {
                let d = g.cardinality(i);
                if m.len() != d || m.iter().any(|r| r.len() != d) {
                    return Err(Error::InvalidParameter(format!("channel on observable {i} has wrong shape")));
                }
            }
        }
        let mut out = Vec::with_capacity(b.num_contexts());
        for (c, dist) in b.distributions().iter().enumerate() {
            let ctx = g.context(c);
            let cards: Vec<usize> = ctx.iter().map(|&i| g.cardinality(i)).collect();
            let mut acc = vec![0.0; dist.len()];
            for (w, ch) in &self.components {
                let mut cur = dist.clone();
                for (pos, &obs) in ctx.iter().enumerate() {
                    let m = &ch.matrices[obs];
                    let mut next = vec![0.0; cur.len()];
                    for (idx, &p) in cur.iter().enumerate() {
                        if p == 0.0 {
                            continue;
                        }
                        let mut d = digits(idx, &cards);
                        let input = d[pos];
                        for (o, row) in m.iter().enumerate() {
                            d[pos] = o;
                            next[index_of_digits(&d, &cards)] += row[input] * p;
                        }
                    }
                    cur = next;
                }
                for (a, x) in acc.iter_mut().zip(cur) {
                    *a += w * x;
                }
            }
            out.push(acc);
        }
        Ok(ContextBox::from_raw(b.hypergraph_arc().clone(), out))
    }
}
