//! The non-contextual polytope: deterministic vertices, contextuality cost
//! by linear programming, and linear optimization over the polytope.

mod scan;
mod simplex;

use std::sync::Arc;

pub use scan::Scanner;
pub use simplex::{LpStatus, Tableau};

use crate::boxes::{deterministic_box, ContextBox, DeterministicAssignment, Hypergraph};
use crate::error::{Error, Result};

/// Largest vertex count solved with every column present.
pub const DENSE_VERTEX_CAP: u128 = 1 << 14;
/// Largest joint alphabet an exhaustive scan will walk.
pub const SCAN_CAP: u128 = 1 << 22;

#[derive(Debug, Clone)]
pub struct NCPolytope {
    hypergraph: Arc<Hypergraph>,
    vertices: Vec<DeterministicAssignment>,
}

/// Every deterministic assignment, in lexicographic order.
pub fn enumerate_vertices(g: &Arc<Hypergraph>, cap: u128) -> Result<NCPolytope> {
    let size = g.joint_size();
    if size > cap {
        return Err(Error::CapExceeded { what: "vertex enumeration (use column generation)", size, cap });
    }
    let vertices = (0..size as usize).map(|i| DeterministicAssignment::from_joint_index(i, g)).collect();
    Ok(NCPolytope { hypergraph: g.clone(), vertices })
}

impl NCPolytope {
    pub fn hypergraph(&self) -> &Arc<Hypergraph> {
        &self.hypergraph
    }

    pub fn vertices(&self) -> &[DeterministicAssignment] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_boxes(&self) -> Result<Vec<ContextBox>> {
        self.vertices.iter().map(|a| deterministic_box(a, &self.hypergraph)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpMode {
    Dense,
    ColumnGeneration { rounds: usize },
}

#[derive(Debug, Clone)]
pub struct CostReport {
    pub cost: f64,
    /// Certified enclosure `[1 - dual bound, 1 - primal value]`.
    pub interval: (f64, f64),
    pub weights: Vec<(DeterministicAssignment, f64)>,
    pub status: LpStatus,
    pub mode: LpMode,
    pub pivots: usize,
    /// Contextual part, present when `cost > tol`.
    pub residual: Option<ContextBox>,
}

impl CostReport {
    pub fn certificate(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

#[derive(Debug, Clone)]
pub struct CostOptions {
    pub tol: f64,
    pub dense_cap: u128,
    pub scan_cap: u128,
    pub max_rounds: usize,
    pub max_pivots: usize,
}

impl Default for CostOptions {
    fn default() -> Self {
        CostOptions {
            tol: 1e-9,
            dense_cap: DENSE_VERTEX_CAP,
            scan_cap: SCAN_CAP,
            max_rounds: 100_000,
            max_pivots: 1_000_000,
        }
    }
}

pub fn contextuality_cost(b: &ContextBox, tol: f64) -> Result<CostReport> {
    contextuality_cost_with(b, &CostOptions { tol, ..CostOptions::default() })
}

/// Largest non-contextual weight `sum_D w_D` with `sum_D w_D D <= b`
/// entry-wise; the cost is one minus it.
pub fn contextuality_cost_with(b: &ContextBox, opts: &CostOptions) -> Result<CostReport> {
    let report = b.validate();
    if !report.is_valid() {
        return Err(Error::InvalidBox(report.to_string()));
    }
    b.require_consistent(1e-9)?;
    let g = b.hypergraph_arc();
    let scanner = Scanner::new(g, opts.scan_cap)?;
    let offsets: Vec<usize> = b
        .distributions()
        .iter()
        .scan(0, |acc, d| {
            let o = *acc;
            *acc += d.len();
            Some(o)
        })
        .collect();
    let rhs = b.stacked();
    let column = |index: usize| -> Vec<(usize, f64)> {
        scanner.context_indices(index).iter().zip(&offsets).map(|(&k, &o)| (o + k, 1.0)).collect()
    };
    let by_context = |y: &[f64]| -> Vec<Vec<f64>> {
        b.distributions().iter().zip(&offsets).map(|(d, &o)| y[o..o + d.len()].to_vec()).collect()
    };

    let mut tableau = Tableau::new(&rhs);
    let mut columns: Vec<usize> = Vec::new();
    let dense = g.joint_size() <= opts.dense_cap;
    let mut rounds = 0;
    let (status, mu) = if dense {
        for i in 0..scanner.size() {
            tableau.add_column(&column(i), 1.0);
            columns.push(i);
        }
        let status = tableau.solve(opts.max_pivots);
        (status, scanner.argmin(&by_context(&tableau.duals())).0)
    } else {
        loop {
            let status = tableau.solve(opts.max_pivots);
            let (mu, best) = scanner.argmin(&by_context(&tableau.duals()));
            rounds += 1;
            if status != LpStatus::Optimal || 1.0 - mu <= opts.tol || rounds >= opts.max_rounds {
                let status =
                    if status == LpStatus::Optimal && 1.0 - mu > opts.tol { LpStatus::IterationLimit } else { status };
                break (status, mu);
            }
            tableau.add_column(&column(best), 1.0);
            columns.push(best);
        }
    };
    if status == LpStatus::Unbounded {
        return Err(Error::Lp("unbounded relaxation".into()));
    }

    let x = tableau.primal();
    let weights: Vec<(DeterministicAssignment, f64)> = columns
        .iter()
        .zip(&x)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&i, &w)| (DeterministicAssignment::from_joint_index(i, g), w))
        .collect();
    let primal: f64 = weights.iter().map(|(_, w)| w).sum::<f64>().min(1.0);
    let y = tableau.duals();
    let dual_bound =
        if mu > 0.0 { (rhs.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / mu).clamp(primal, 1.0) } else { 1.0 };
    let cost = 1.0 - primal;

    let residual = if cost > opts.tol {
        let mut rest: Vec<Vec<f64>> = b.distributions().to_vec();
        for (a, w) in &weights {
            for (c, r) in rest.iter_mut().enumerate() {
                r[a.context_outcome(g, c)] -= w;
            }
        }
        rest.iter_mut().flatten().for_each(|v| *v = (*v / cost).max(0.0));
        Some(ContextBox::from_raw(g.clone(), rest))
    } else {
        None
    };
    Ok(CostReport {
        cost,
        interval: (1.0 - dual_bound, cost),
        weights,
        status,
        mode: if dense { LpMode::Dense } else { LpMode::ColumnGeneration { rounds } },
        pivots: tableau.pivots,
        residual,
    })
}

pub fn is_noncontextual(b: &ContextBox, tol: f64) -> Result<bool> {
    Ok(contextuality_cost(b, tol)?.cost <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearOptimum {
    pub value: f64,
    pub vertex: DeterministicAssignment,
}

/// Optimum of `sum_c sum_o w[c][o] B(o|c)` over the polytope, attained at
/// a deterministic vertex.
pub fn optimize_linear(g: &Hypergraph, w: &[Vec<f64>], direction: Direction) -> Result<LinearOptimum> {
    if w.len() != g.num_contexts() {
        return Err(Error::LengthMismatch(w.len(), g.num_contexts()));
    }
    for (c, wc) in w.iter().enumerate() {
        let len: usize = g.context(c).iter().map(|&i| g.cardinality(i)).product();
        if wc.len() != len {
            return Err(Error::LengthMismatch(wc.len(), len));
        }
    }
    let scanner = Scanner::new(g, SCAN_CAP)?;
    let (value, index) = match direction {
        Direction::Max => scanner.argmax(w),
        Direction::Min => scanner.argmin(w),
    };
    Ok(LinearOptimum { value, vertex: DeterministicAssignment::from_joint_index(index, g) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{kcbs, pr_box, XorFamily};

    #[test]
    fn vertex_counts() {
        let count = |g: Hypergraph| enumerate_vertices(&Arc::new(g), 1 << 14).unwrap().vertex_count();
        assert_eq!(count(XorFamily::PR.hypergraph().unwrap()), 16);
        assert_eq!(count(XorFamily::PeresMermin.hypergraph().unwrap()), 512);
        assert_eq!(count(kcbs().unwrap().hypergraph().clone()), 32);
        let m = Arc::new(XorFamily::MerminStar.hypergraph().unwrap());
        assert!(enumerate_vertices(&m, 100).is_err());
    }

    #[test]
    fn pr_costs() {
        let r = contextuality_cost(&pr_box(), 1e-9).unwrap();
        assert!((r.cost - 1.0).abs() < 1e-9);
        assert!(r.weights.is_empty());
        let r = contextuality_cost(&XorFamily::PR.isotropic(0.75).unwrap(), 1e-9).unwrap();
        assert!(r.cost.abs() < 1e-9);
        assert!((r.weights.iter().map(|w| w.1).sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(r.residual.is_none());
    }

    #[test]
    fn column_generation_agrees_with_dense() {
        let b = XorFamily::PeresMermin.isotropic(11.0 / 12.0).unwrap();
        let dense = contextuality_cost(&b, 1e-9).unwrap();
        let cg = contextuality_cost_with(&b, &CostOptions { dense_cap: 1, ..CostOptions::default() }).unwrap();
        assert!(matches!(cg.mode, LpMode::ColumnGeneration { .. }));
        assert!((dense.cost - 0.5).abs() < 1e-8, "{}", dense.cost);
        assert!((cg.cost - 0.5).abs() < 1e-8, "{}", cg.cost);
        assert!(cg.interval.0 <= cg.cost + 1e-12 && cg.interval.1 - cg.interval.0 < 1e-8);
    }
}
