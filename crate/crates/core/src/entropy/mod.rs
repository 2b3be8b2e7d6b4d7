//! Relative entropy of contextuality: the divergence from a box to the
//! closest single joint distribution, for fixed, uniform and worst-case
//! context weights.

mod fw;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::boxes::{projection_table, ContextBox, JointDistribution};
use crate::closed_form::chi;
use crate::error::{Error, Result};
use crate::ks::{classify_xor, nc_alpha_interval};
use crate::symmetry::TwirlGroup;

/// A probability vector over contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextWeights(Vec<f64>);

impl ContextWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter("context weights must be finite and nonnegative".into()));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("context weights sum to {s}")));
        }
        Ok(ContextWeights(weights))
    }

    pub fn uniform(n: usize) -> Self {
        ContextWeights(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    /// Mutual information evaluated through its equality with the
    /// relative entropy.
    Equivalence,
}

#[derive(Debug, Clone)]
pub struct MeasureReport {
    /// Value in bits.
    pub value: f64,
    /// Minimizing joint distribution.
    pub optimizer: JointDistribution,
    /// Frank–Wolfe gap of the inner solve: `value - gap` is a lower bound.
    pub gap: f64,
    pub weights: ContextWeights,
    /// For worst-case weights: a certified upper bound on the maximum.
    pub upper_bound: Option<f64>,
    pub iterations: usize,
    pub wall_time: Duration,
    pub converged: bool,
    pub route: Route,
}

impl MeasureReport {
    pub fn lower_bound(&self) -> f64 {
        (self.value - self.gap).max(0.0)
    }

    /// Width of the certified enclosure of the measured quantity.
    pub fn certificate(&self) -> f64 {
        match self.upper_bound {
            Some(u) => (u - self.lower_bound()).max(0.0),
            None => self.gap,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub dim_cap: u128,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-7, max_iters: 200_000, dim_cap: 1 << 22 }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        SolverOptions { tol, ..SolverOptions::default() }
    }
}

/// `sum_i g_i log2(g_i / p_i)`, infinite when `g` charges a zero of `p`.
pub fn relative_entropy(g: &[f64], p: &[f64]) -> Result<f64> {
    if g.len() != p.len() {
        return Err(Error::LengthMismatch(g.len(), p.len()));
    }
    let mut d = 0.0;
    for (&x, &y) in g.iter().zip(p) {
        if x > 0.0 {
            if y <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += x * (x / y).log2();
        }
    }
    Ok(d.max(0.0))
}

fn check_input(b: &ContextBox) -> Result<()> {
    let report = b.validate();
    if !report.is_valid() {
        return Err(Error::InvalidBox(report.to_string()));
    }
    b.require_consistent(1e-9)
}

/// Minimizer joint replaced by the product of its marginals on the
/// connected components of the hypergraph; context marginals are unchanged.
fn canonical_joint(joint: JointDistribution) -> JointDistribution {
    let blocks = joint.hypergraph().components();
    if blocks.len() > 1 {
        joint.product_of_blocks(&blocks)
    } else {
        joint
    }
}

/// `min_p sum_c w_c D(g_c || p_c)` over joint distributions `p`.
pub fn x_fixed(b: &ContextBox, w: &ContextWeights, opts: &SolverOptions) -> Result<MeasureReport> {
    check_input(b)?;
    if w.len() != b.num_contexts() {
        return Err(Error::LengthMismatch(w.len(), b.num_contexts()));
    }
    let start = Instant::now();
    let problem = fw::Problem::new(b, opts.dim_cap)?;
    let mut state = problem.initial_state();
    let out = problem.solve(&mut state, w.as_slice(), opts.tol, opts.max_iters);
    Ok(MeasureReport {
        value: out.value,
        optimizer: canonical_joint(problem.joint(&state)),
        gap: out.gap,
        weights: w.clone(),
        upper_bound: None,
        iterations: out.iterations,
        wall_time: start.elapsed(),
        converged: out.converged,
        route: Route::Direct,
    })
}

/// Uniform relative entropy of contextuality.
pub fn x_u(b: &ContextBox, opts: &SolverOptions) -> Result<MeasureReport> {
    x_fixed(b, &ContextWeights::uniform(b.num_contexts()), opts)
}

/// Mutual information of contextuality for fixed weights, computed as the
/// equal relative-entropy quantity.
pub fn i_fixed(b: &ContextBox, w: &ContextWeights, opts: &SolverOptions) -> Result<MeasureReport> {
    let mut r = x_fixed(b, w, opts)?;
    r.route = Route::Equivalence;
    Ok(r)
}

#[derive(Debug, Clone, Copy)]
pub struct OuterOptions {
    pub max_outer: usize,
    pub window: usize,
    pub min_improvement: f64,
}

impl Default for OuterOptions {
    fn default() -> Self {
        OuterOptions { max_outer: 5_000, window: 200, min_improvement: 1e-7 }
    }
}

/// `sup_w X_w(B)` by multiplicative-weights ascent with the per-context
/// divergences of the inner minimizer as supergradient.
pub fn x_max(b: &ContextBox, opts: &SolverOptions) -> Result<MeasureReport> {
    x_max_with(b, opts, &OuterOptions::default())
}

pub fn x_max_with(b: &ContextBox, opts: &SolverOptions, outer: &OuterOptions) -> Result<MeasureReport> {
    check_input(b)?;
    let start = Instant::now();
    let n = b.num_contexts();
    let problem = fw::Problem::new(b, opts.dim_cap)?;
    let mut state = problem.initial_state();
    let mut w = vec![1.0 / n as f64; n];
    let mut avg_m = vec![0.0; state.m.len()];
    let mut best: Option<(f64, f64, Vec<f64>, fw::State, bool)> = None;
    let mut upper = f64::INFINITY;
    let mut last_gain = 0;
    let mut iterations = 0;
    let mut eta0 = 0.0;
    let mut all_converged = true;
    for t in 1..=outer.max_outer {
        let out = problem.solve(&mut state, &w, opts.tol, opts.max_iters);
        iterations += out.iterations;
        all_converged &= out.converged;
        let div = problem.divergences(&state.m);
        for (a, &x) in avg_m.iter_mut().zip(&state.m) {
            *a += (x - *a) / t as f64;
        }
        let spread = div.iter().cloned().fold(0.0, f64::max);
        upper = upper.min(spread).min(problem.divergences(&avg_m).iter().cloned().fold(0.0, f64::max));
        let lower = out.value - out.gap;
        let improved = best.as_ref().is_none_or(|bst| lower > bst.0 - bst.1 + outer.min_improvement);
        if best.as_ref().is_none_or(|bst| lower > bst.0 - bst.1) {
            best = Some((out.value, out.gap, w.clone(), state.clone(), out.converged));
        }
        if improved {
            last_gain = t;
        }
        let bst = best.as_ref().unwrap();
        if upper - (bst.0 - bst.1) <= opts.tol || t - last_gain >= outer.window || spread == 0.0 {
            break;
        }
        if eta0 == 0.0 {
            eta0 = 1.0 / spread.max(1e-3);
        }
        let eta = eta0 / (t as f64).sqrt();
        let top = div.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (wc, &d) in w.iter_mut().zip(&div) {
            *wc *= (eta * (d - top)).exp();
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
    }
    let (value, gap, w, state, converged) = best.expect("at least one outer step");
    let weights = ContextWeights::new(w.clone()).unwrap_or_else(|_| {
        let s: f64 = w.iter().sum();
        ContextWeights(w.iter().map(|x| x / s).collect())
    });
    Ok(MeasureReport {
        value,
        optimizer: canonical_joint(problem.joint(&state)),
        gap,
        weights,
        upper_bound: Some(upper.max(value - gap)),
        iterations,
        wall_time: start.elapsed(),
        converged: converged && all_converged,
        route: Route::Direct,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    pub mutual_information: f64,
    pub relative_entropy: f64,
    pub residual: f64,
    pub gap: f64,
}

/// Evaluates the which-context mutual information of the ensemble built
/// from the minimizer, `g(l|c) = p*(l) g_c(l_c) / p*_c(l_c)`, next to the
/// relative entropy it should equal.
pub fn verify_equivalence(b: &ContextBox, w: &ContextWeights, opts: &SolverOptions) -> Result<Equivalence> {
    let report = x_fixed(b, w, opts)?;
    let mi = mutual_information_of_extension(b, w, &report.optimizer)?;
    Ok(Equivalence {
        mutual_information: mi,
        relative_entropy: report.value,
        residual: (mi - report.value).abs(),
        gap: report.gap,
    })
}

/// `sum_c w_c D(g(.|c) || sum_c' w_c' g(.|c'))` for the extensions of the
/// context distributions along `joint`; conditionals of `joint` that are
/// undefined are taken uniform.
pub fn mutual_information_of_extension(b: &ContextBox, w: &ContextWeights, joint: &JointDistribution) -> Result<f64> {
    let g = b.hypergraph();
    if joint.hypergraph() != g {
        return Err(Error::HypergraphMismatch("joint lives on a different hypergraph".into()));
    }
    let p = joint.probabilities();
    let size = p.len();
    let tables: Vec<Vec<u32>> = g.contexts().par_iter().map(|ctx| projection_table(g, ctx)).collect();
    let extension = |c: usize| -> Vec<f64> {
        let table = &tables[c];
        let dist = b.distribution(c);
        let mut marg = vec![0.0; dist.len()];
        for (&k, &x) in table.iter().zip(p) {
            marg[k as usize] += x;
        }
        let fiber = size / dist.len();
        table
            .iter()
            .zip(p)
            .map(|(&k, &x)| {
                let k = k as usize;
                let cond = if marg[k] > 0.0 { x / marg[k] } else { 1.0 / fiber as f64 };
                cond * dist[k]
            })
            .collect()
    };
    let ws = w.as_slice();
    let mixture = (0..g.num_contexts())
        .into_par_iter()
        .filter(|&c| ws[c] > 0.0)
        .map(|c| extension(c).into_iter().map(|x| ws[c] * x).collect::<Vec<f64>>())
        .reduce(|| vec![0.0; size], |a, e| a.iter().zip(&e).map(|(x, y)| x + y).collect());
    let terms: Vec<f64> = (0..g.num_contexts())
        .into_par_iter()
        .filter(|&c| ws[c] > 0.0)
        .map(|c| Ok(ws[c] * relative_entropy(&extension(c), &mixture)?))
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// Uniform relative entropy of an isotropic xor-box `alpha B + (1-alpha) B'`,
/// reduced to `min chi(alpha, alpha0)` over the non-contextual range of
/// `alpha0` (golden-section search).
pub fn x_u_isotropic_reduced(reference: &ContextBox, alpha: f64, group: &TwirlGroup, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
    }
    let profile = classify_xor(reference).ok_or_else(|| Error::NotXor("reference is not an xor-box".into()))?;
    let (lo, hi) = nc_alpha_interval(&profile)?;
    let dev = group.twirl(reference)?.max_abs_diff(reference);
    if dev > 1e-9 {
        return Err(Error::NotIsotropic(dev));
    }
    if !group.acts_transitively_on_contexts() {
        return Err(Error::HypothesesUnmet("group does not act transitively on contexts".into()));
    }
    Ok(golden_min(|a0| chi(alpha, a0), lo.max(1e-300), hi, tol.max(1e-15)))
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    [f(a), f(b), f1, f2].into_iter().fold(f64::INFINITY, f64::min)
}
