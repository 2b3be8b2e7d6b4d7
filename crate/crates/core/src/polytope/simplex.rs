//! Dense tableau simplex for `max c^T x  s.t.  A x <= b, x >= 0` with
//! `b >= 0`, so the slack basis is a feasible start. Columns can be added
//! after a solve, which is all column generation needs.

const EPS: f64 = 1e-9;
const DEGENERATE_SWITCH: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct Tableau {
    m: usize,
    /// Row-major, slack columns `0..m` first.
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    /// Reduced costs `c_j - y^T a_j`.
    reduced: Vec<f64>,
    cost: Vec<f64>,
    basis: Vec<usize>,
    objective: f64,
    pub pivots: usize,
}

impl Tableau {
    pub fn new(b: &[f64]) -> Self {
        let m = b.len();
        let rows = (0..m).map(|r| (0..m).map(|j| if j == r { 1.0 } else { 0.0 }).collect()).collect();
        Tableau {
            m,
            rows,
            rhs: b.iter().map(|&x| x.max(0.0)).collect(),
            reduced: vec![0.0; m],
            cost: vec![0.0; m],
            basis: (0..m).collect(),
            objective: 0.0,
            pivots: 0,
        }
    }

    pub fn num_structural(&self) -> usize {
        self.cost.len() - self.m
    }

    /// Adds a column given as sparse `(row, value)` entries; returns its
    /// structural index.
    pub fn add_column(&mut self, entries: &[(usize, f64)], c: f64) -> usize {
        let y = self.duals();
        let mut red = c;
        for &(i, v) in entries {
            red -= y[i] * v;
        }
        for r in 0..self.m {
            let x: f64 = entries.iter().map(|&(i, v)| self.rows[r][i] * v).sum();
            self.rows[r].push(x);
        }
        self.reduced.push(red);
        self.cost.push(c);
        self.cost.len() - 1 - self.m
    }

    /// Row duals `y = c_B^T B^{-1}`.
    pub fn duals(&self) -> Vec<f64> {
        (0..self.m).map(|i| -self.reduced[i]).collect()
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Value of every structural variable.
    pub fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.num_structural()];
        for (r, &j) in self.basis.iter().enumerate() {
            if j >= self.m {
                x[j - self.m] = self.rhs[r].max(0.0);
            }
        }
        x
    }

    pub fn solve(&mut self, max_pivots: usize) -> LpStatus {
        let mut degenerate = 0;
        loop {
            let bland = degenerate >= DEGENERATE_SWITCH;
            let entering = if bland {
                self.reduced.iter().position(|&d| d > EPS)
            } else {
                let (j, &d) = self
                    .reduced
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(b.0.cmp(&a.0)))
                    .expect("non-empty tableau");
                (d > EPS).then_some(j)
            };
            let Some(j) = entering else {
                return LpStatus::Optimal;
            };
            if self.pivots >= max_pivots {
                return LpStatus::IterationLimit;
            }
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.rows[r][j];
                if a > EPS {
                    let ratio = self.rhs[r] / a;
                    let better = match leave {
                        None => true,
                        Some((l, best)) => ratio < best - EPS || (ratio <= best + EPS && self.basis[r] < self.basis[l]),
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return LpStatus::Unbounded;
            };
            degenerate = if ratio <= EPS { degenerate + 1 } else { 0 };
            self.pivot(r, j);
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j];
        self.rows[r].iter_mut().for_each(|x| *x /= p);
        self.rhs[r] /= p;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.rows[i][j];
            if f != 0.0 {
                for (x, &y) in self.rows[i].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
                self.rhs[i] -= f * pivot_rhs;
                if self.rhs[i] < 0.0 && self.rhs[i] > -EPS {
                    self.rhs[i] = 0.0;
                }
            }
        }
        let f = self.reduced[j];
        for (x, &y) in self.reduced.iter_mut().zip(&pivot_row) {
            *x -= f * y;
        }
        self.objective += f * pivot_rhs;
        self.basis[r] = j;
        self.pivots += 1;
    }
}
