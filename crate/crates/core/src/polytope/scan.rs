use rayon::prelude::*;

use crate::boxes::{digits, strides, Hypergraph};
use crate::error::{Error, Result};

const BLOCK: usize = 4096;

/// Exhaustive minimization of `sum_c w[c][outcome_c(a)]` over deterministic
/// assignments `a`, walking the joint alphabet as an odometer.
#[derive(Debug, Clone)]
pub struct Scanner {
    cards: Vec<usize>,
    /// Per observable: (context, stride of the observable inside it).
    occurrences: Vec<Vec<(usize, usize)>>,
    contexts: Vec<Vec<(usize, usize)>>,
    size: usize,
}

impl Scanner {
    pub fn new(g: &Hypergraph, cap: u128) -> Result<Self> {
        let size = g.joint_size();
        if size > cap {
            return Err(Error::CapExceeded { what: "joint alphabet", size, cap });
        }
        let mut occurrences = vec![Vec::new(); g.num_observables()];
        let mut contexts = Vec::with_capacity(g.num_contexts());
        for (c, ctx) in g.contexts().iter().enumerate() {
            let cards: Vec<usize> = ctx.iter().map(|&i| g.cardinality(i)).collect();
            let st = strides(&cards);
            for (&i, &s) in ctx.iter().zip(&st) {
                occurrences[i].push((c, s));
            }
            contexts.push(ctx.iter().copied().zip(st).collect());
        }
        Ok(Scanner { cards: g.cardinalities(), occurrences, contexts, size: size as usize })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Outcome index induced on every context by joint outcome `index`.
    pub fn context_indices(&self, index: usize) -> Vec<usize> {
        let d = digits(index, &self.cards);
        self.contexts.iter().map(|ctx| ctx.iter().map(|&(i, s)| d[i] * s).sum()).collect()
    }

    pub fn score(&self, w: &[Vec<f64>], index: usize) -> f64 {
        self.context_indices(index).iter().zip(w).map(|(&k, wc)| wc[k]).sum()
    }

    /// Minimizing joint index (smallest among ties) and its exact score.
    pub fn argmin(&self, w: &[Vec<f64>]) -> (f64, usize) {
        let blocks = self.size.div_ceil(BLOCK);
        let (_, best) = (0..blocks)
            .into_par_iter()
            .map(|b| self.scan_block(w, b * BLOCK, BLOCK.min(self.size - b * BLOCK)))
            .reduce(|| (f64::INFINITY, usize::MAX), |x, y| if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
        (self.score(w, best), best)
    }

    pub fn argmax(&self, w: &[Vec<f64>]) -> (f64, usize) {
        let neg: Vec<Vec<f64>> = w.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        let (_, best) = self.argmin(&neg);
        (self.score(w, best), best)
    }

    fn scan_block(&self, w: &[Vec<f64>], start: usize, len: usize) -> (f64, usize) {
        let k = self.cards.len();
        let mut d = digits(start, &self.cards);
        let mut idx: Vec<usize> = self.contexts.iter().map(|ctx| ctx.iter().map(|&(i, s)| d[i] * s).sum()).collect();
        let mut score: f64 = idx.iter().zip(w).map(|(&j, wc)| wc[j]).sum();
        let mut best = (score, start);
        for step in 1..len {
            let mut i = k - 1;
            loop {
                let up = d[i] + 1 < self.cards[i];
                for &(c, s) in &self.occurrences[i] {
                    let old = idx[c];
                    idx[c] = if up { old + s } else { old - d[i] * s };
                    score += w[c][idx[c]] - w[c][old];
                }
                if up {
                    d[i] += 1;
                    break;
                }
                d[i] = 0;
                i -= 1;
            }
            if score < best.0 {
                best = (score, start + step);
            }
        }
        best
    }
}
