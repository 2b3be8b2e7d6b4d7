//! Blended pairwise Frank–Wolfe over the joint simplex, run on the stacked
//! context marginals. Atoms are the uniform joint and deterministic
//! assignments; the exhaustive oracle is only called when steps between
//! active atoms stop paying off.

use std::collections::HashMap;
use std::f64::consts::LN_2;

use crate::boxes::{ContextBox, JointDistribution};
use crate::error::Result;
use crate::polytope::Scanner;

const RESYNC_EVERY: usize = 500;

#[derive(Debug, Clone)]
struct Atom {
    index: usize,
    rows: Vec<u32>,
    weight: f64,
}

#[derive(Debug, Clone, Copy)]
enum Target {
    /// An active atom; `None` is the uniform joint.
    Active(Option<usize>),
    New(usize),
}

/// Marginal-space description of one box.
pub(crate) struct Problem<'a> {
    pub b: &'a ContextBox,
    pub scanner: Scanner,
    pub offsets: Vec<usize>,
    pub lens: Vec<usize>,
    pub target: Vec<f64>,
    row_context: Vec<usize>,
}

/// Current iterate: a sparse convex combination of atoms and its marginals.
#[derive(Debug, Clone)]
pub(crate) struct State {
    uniform: f64,
    atoms: Vec<Atom>,
    lookup: HashMap<usize, usize>,
    pub m: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome {
    pub value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl<'a> Problem<'a> {
    pub fn new(b: &'a ContextBox, cap: u128) -> Result<Self> {
        let scanner = Scanner::new(b.hypergraph(), cap)?;
        let lens: Vec<usize> = b.distributions().iter().map(|d| d.len()).collect();
        let mut offsets = Vec::with_capacity(lens.len());
        let mut row_context = Vec::new();
        let mut acc = 0;
        for (c, &l) in lens.iter().enumerate() {
            offsets.push(acc);
            acc += l;
            row_context.extend(std::iter::repeat_n(c, l));
        }
        Ok(Problem { b, scanner, offsets, lens, target: b.stacked(), row_context })
    }

    pub fn initial_state(&self) -> State {
        let m = self.lens.iter().flat_map(|&l| std::iter::repeat_n(1.0 / l as f64, l)).collect();
        State { uniform: 1.0, atoms: Vec::new(), lookup: HashMap::new(), m }
    }

    fn rows_of(&self, index: usize) -> Vec<u32> {
        self.scanner.context_indices(index).iter().zip(&self.offsets).map(|(&k, &o)| (o + k) as u32).collect()
    }

    /// `D(g_c || m_c)` in bits for every context.
    pub fn divergences(&self, m: &[f64]) -> Vec<f64> {
        let mut d = vec![0.0; self.lens.len()];
        for (r, (&g, &q)) in self.target.iter().zip(m).enumerate() {
            if g > 0.0 {
                d[self.row_context[r]] += if q > 0.0 { g * (g / q).log2() } else { f64::INFINITY };
            }
        }
        d.iter_mut().for_each(|x| *x = x.max(0.0));
        d
    }

    pub fn value(&self, m: &[f64], w: &[f64]) -> f64 {
        self.divergences(m).iter().zip(w).filter(|(_, &wc)| wc > 0.0).map(|(d, wc)| d * wc).sum()
    }

    fn gradient(&self, m: &[f64], w: &[f64]) -> Vec<f64> {
        self.target
            .iter()
            .zip(m)
            .enumerate()
            .map(|(r, (&g, &q))| {
                let wc = w[self.row_context[r]];
                if g > 0.0 && wc > 0.0 {
                    -wc * g / (q * LN_2)
                } else {
                    0.0
                }
            })
            .collect()
    }

    fn by_context(&self, v: &[f64]) -> Vec<Vec<f64>> {
        self.offsets.iter().zip(&self.lens).map(|(&o, &l)| v[o..o + l].to_vec()).collect()
    }

    fn uniform_score(&self, grad: &[f64]) -> f64 {
        self.offsets.iter().zip(&self.lens).map(|(&o, &l)| grad[o..o + l].iter().sum::<f64>() / l as f64).sum()
    }

    fn resync(&self, s: &mut State) {
        let mut m: Vec<f64> = self.lens.iter().flat_map(|&l| std::iter::repeat_n(s.uniform / l as f64, l)).collect();
        for a in &s.atoms {
            for &r in &a.rows {
                m[r as usize] += a.weight;
            }
        }
        s.m = m;
    }

    /// Runs until the Frank–Wolfe gap is at most `tol` or `max_iters`
    /// steps have been taken. Steps between active atoms are taken while
    /// their pairwise gap exceeds a threshold that halves whenever the
    /// oracle cannot beat it.
    pub fn solve(&self, s: &mut State, w: &[f64], tol: f64, max_iters: usize) -> Outcome {
        let mut iterations = 0;
        let mut phi = f64::INFINITY;
        loop {
            let grad = self.gradient(&s.m, w);
            let mut lo: (f64, Option<usize>) = (f64::INFINITY, None);
            let mut hi: (f64, Option<usize>) = (f64::NEG_INFINITY, None);
            if s.uniform > 0.0 {
                let u = self.uniform_score(&grad);
                lo = (u, None);
                hi = (u, None);
            }
            for (k, a) in s.atoms.iter().enumerate() {
                let sc: f64 = a.rows.iter().map(|&r| grad[r as usize]).sum();
                if sc < lo.0 {
                    lo = (sc, Some(k));
                }
                if sc > hi.0 {
                    hi = (sc, Some(k));
                }
            }
            let local = hi.0 - lo.0 > phi && lo.1 != hi.1 && iterations < max_iters;
            let target = if local {
                Target::Active(lo.1)
            } else {
                let (gap, smin, best) = self.fw_gap(s, &grad);
                if gap <= tol || iterations >= max_iters {
                    return Outcome { value: self.value(&s.m, w), gap, iterations, converged: gap <= tol };
                }
                if phi.is_infinite() || hi.0 - smin >= phi / 2.0 {
                    phi = phi.min(gap);
                    match s.lookup.get(&best) {
                        Some(&k) => Target::Active(Some(k)),
                        None => Target::New(best),
                    }
                } else {
                    phi /= 2.0;
                    continue;
                }
            };
            iterations += 1;
            if !self.pairwise_step(s, w, target, hi.1) {
                if local {
                    phi = (hi.0 - lo.0).min(phi);
                    continue;
                }
                let (gap, _, _) = self.fw_gap(s, &grad);
                return Outcome { value: self.value(&s.m, w), gap, iterations, converged: gap <= tol };
            }
            if iterations % RESYNC_EVERY == 0 {
                self.resync(s);
            }
        }
    }

    /// Frank–Wolfe gap, oracle score and oracle vertex.
    fn fw_gap(&self, s: &State, grad: &[f64]) -> (f64, f64, usize) {
        let (smin, best) = self.scanner.argmin(&self.by_context(grad));
        let inner: f64 = grad.iter().zip(&s.m).map(|(a, b)| a * b).sum();
        ((inner - smin).max(0.0), smin, best)
    }

    fn atom_rows(&self, s: &State, atom: Option<usize>) -> Vec<(usize, f64)> {
        match atom {
            Some(k) => s.atoms[k].rows.iter().map(|&r| (r as usize, 1.0)).collect(),
            None => self
                .offsets
                .iter()
                .zip(&self.lens)
                .flat_map(|(&o, &l)| (o..o + l).map(move |r| (r, 1.0 / l as f64)))
                .collect(),
        }
    }

    /// Moves mass from `away` to `target`; false if no progress is possible.
    fn pairwise_step(&self, s: &mut State, w: &[f64], target: Target, away: Option<usize>) -> bool {
        let (to_rows, new_rows) = match target {
            Target::Active(k) => (self.atom_rows(s, k), None),
            Target::New(index) => {
                let rows = self.rows_of(index);
                (rows.iter().map(|&r| (r as usize, 1.0)).collect(), Some(rows))
            }
        };
        let mut dir: HashMap<usize, f64> = HashMap::new();
        for (r, x) in to_rows {
            *dir.entry(r).or_insert(0.0) += x;
        }
        for (r, x) in self.atom_rows(s, away) {
            *dir.entry(r).or_insert(0.0) -= x;
        }
        let mut d: Vec<(usize, f64)> = dir.into_iter().filter(|&(_, x)| x != 0.0).collect();
        d.sort_unstable_by_key(|&(r, _)| r);
        let gamma_max = away.map_or(s.uniform, |k| s.atoms[k].weight);
        let gamma = self.line_search(&s.m, &d, w, gamma_max);
        if gamma <= 0.0 {
            return false;
        }
        for &(r, x) in &d {
            s.m[r] += gamma * x;
        }
        let dropped = gamma >= gamma_max;
        match (target, new_rows) {
            (Target::Active(Some(k)), _) => s.atoms[k].weight += gamma,
            (Target::Active(None), _) => s.uniform += gamma,
            (Target::New(index), Some(rows)) => {
                s.lookup.insert(index, s.atoms.len());
                s.atoms.push(Atom { index, rows, weight: gamma });
            }
            (Target::New(_), None) => unreachable!("new atoms carry their rows"),
        }
        match away {
            Some(k) => {
                s.atoms[k].weight -= gamma;
                if dropped || s.atoms[k].weight <= 0.0 {
                    let gone = s.atoms.swap_remove(k);
                    s.lookup.remove(&gone.index);
                    if k < s.atoms.len() {
                        s.lookup.insert(s.atoms[k].index, k);
                    }
                    self.resync(s);
                }
            }
            None => {
                s.uniform = if dropped { 0.0 } else { (s.uniform - gamma).max(0.0) };
                if dropped {
                    self.resync(s);
                }
            }
        }
        true
    }

    /// Minimizer of the convex `F(m + gamma d)` on `[0, gamma_max]`.
    fn line_search(&self, m: &[f64], d: &[(usize, f64)], w: &[f64], gamma_max: f64) -> f64 {
        let terms: Vec<(f64, f64, f64)> = d
            .iter()
            .filter(|&&(r, _)| self.target[r] > 0.0)
            .map(|&(r, dr)| (w[self.row_context[r]] * self.target[r], m[r], dr))
            .filter(|t| t.0 > 0.0)
            .collect();
        let deriv = |x: f64| -> (f64, f64) {
            let mut d1 = 0.0;
            let mut d2 = 0.0;
            for &(c, q, dr) in &terms {
                let den = q + x * dr;
                if den <= 0.0 {
                    return (f64::INFINITY, f64::INFINITY);
                }
                d1 -= c * dr / den;
                d2 += c * dr * dr / (den * den);
            }
            (d1 / LN_2, d2 / LN_2)
        };
        let (d0, _) = deriv(0.0);
        if d0.is_nan() || d0 >= 0.0 {
            return 0.0;
        }
        let (dmax, _) = deriv(gamma_max);
        if dmax <= 0.0 {
            return gamma_max;
        }
        let (mut lo, mut hi) = (0.0, gamma_max);
        let mut x = 0.5 * gamma_max;
        for _ in 0..100 {
            let (d1, d2) = deriv(x);
            if d1 == 0.0 {
                return x;
            }
            if d1 < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 1e-15 * hi.max(1e-300) {
                break;
            }
            let newton = x - d1 / d2;
            x = if newton.is_finite() && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        }
        lo
    }

    /// Dense joint of the current iterate.
    pub fn joint(&self, s: &State) -> JointDistribution {
        let n = self.scanner.size();
        let mut p = vec![s.uniform / n as f64; n];
        for a in &s.atoms {
            p[a.index] += a.weight;
        }
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        JointDistribution::new(self.b.hypergraph_arc().clone(), p).expect("convex combination of atoms")
    }
}
