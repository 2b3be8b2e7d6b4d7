//! Named boxes: chain boxes (PR is the 4-chain), the Peres–Mermin square,
//! the Mermin star and the KCBS pentagon box.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::context_box::{parity_distribution, ContextBox};
use super::hypergraph::Hypergraph;
use crate::error::{Error, Result};

/// The xor-box families with a one-parameter isotropic line
/// `alpha * B + (1 - alpha) * B'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum XorFamily {
    /// `CH(n)`: `n`-cycle, correlated everywhere except the closing context.
    Chain(usize),
    /// Peres–Mermin square.
    PeresMermin,
    /// Mermin star.
    MerminStar,
}

impl XorFamily {
    pub const PR: XorFamily = XorFamily::Chain(4);

    pub fn hypergraph(&self) -> Result<Hypergraph> {
        match *self {
            XorFamily::Chain(n) => Hypergraph::cycle(n),
            XorFamily::PeresMermin => Hypergraph::binary_named(
                &["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"],
                &[
                    &["A1", "A2", "A3"],
                    &["A4", "A5", "A6"],
                    &["A7", "A8", "A9"],
                    &["A1", "A4", "A7"],
                    &["A2", "A5", "A8"],
                    &["A3", "A6", "A9"],
                ],
            ),
            XorFamily::MerminStar => Hypergraph::binary_named(
                &["A", "B", "C", "D", "E", "a", "b", "c", "d", "e"],
                &[
                    &["B", "e", "a", "D"],
                    &["D", "b", "c", "A"],
                    &["A", "d", "e", "C"],
                    &["C", "a", "b", "E"],
                    &["E", "c", "d", "B"],
                ],
            ),
        }
    }

    /// Number of contexts `n`.
    pub fn num_contexts(&self) -> usize {
        match *self {
            XorFamily::Chain(n) => n,
            XorFamily::PeresMermin => 6,
            XorFamily::MerminStar => 5,
        }
    }

    /// The extremal box: every context even except the last, which is odd.
    pub fn extremal(&self) -> Result<ContextBox> {
        let g = Arc::new(self.hypergraph()?);
        let n = g.num_contexts();
        let d = (0..n).map(|c| parity_distribution(g.context(c).len(), c == n - 1)).collect();
        Ok(ContextBox::from_raw(g, d))
    }

    /// `alpha * B + (1 - alpha) * B'`.
    pub fn isotropic(&self, alpha: f64) -> Result<ContextBox> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
        }
        let b = self.extremal()?;
        b.mix(&b.opposite()?, alpha)
    }

    pub fn name(&self) -> String {
        match *self {
            XorFamily::Chain(4) => "PR".into(),
            XorFamily::Chain(n) => format!("CH{n}"),
            XorFamily::PeresMermin => "PM".into(),
            XorFamily::MerminStar => "M".into(),
        }
    }
}

impl fmt::Display for XorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for XorFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "PR" => Ok(XorFamily::PR),
            "PM" => Ok(XorFamily::PeresMermin),
            "M" => Ok(XorFamily::MerminStar),
            other => {
                let n = other
                    .strip_prefix("CH")
                    .and_then(|r| r.trim_matches(|c| c == '(' || c == ')').parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownBuiltin(s.to_string()))?;
                if n < 3 {
                    return Err(Error::InvalidParameter(format!("chain needs n >= 3, got {n}")));
                }
                Ok(XorFamily::Chain(n))
            }
        }
    }
}

/// Any named box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Xor {
        family: XorFamily,
        alpha: f64,
    },
    /// The KCBS pentagon box, five identical contexts
    /// `(1 - 2/sqrt5, 1/sqrt5, 1/sqrt5, 0)`.
    Kcbs,
}

impl Builtin {
    pub fn build(&self) -> Result<ContextBox> {
        match *self {
            Builtin::Xor { family, alpha } => family.isotropic(alpha),
            Builtin::Kcbs => kcbs(),
        }
    }
}

/// Builds a named box. `name` is one of `PR`, `CH`, `PM`, `M`, `KCBS`
/// (case-insensitive); `n` is the chain length; `alpha` selects a member of
/// the isotropic line (default 1); `opposite` swaps even and odd contexts.
pub fn builtin(name: &str, n: Option<usize>, alpha: Option<f64>, opposite: bool) -> Result<ContextBox> {
    let upper = name.to_ascii_uppercase();
    if upper == "KCBS" {
        if alpha.is_some() || opposite || n.is_some() {
            return Err(Error::InvalidParameter("KCBS takes no parameters".into()));
        }
        return kcbs();
    }
    let family = match (upper.as_str(), n) {
        ("CH", Some(n)) => {
            if n < 3 {
                return Err(Error::InvalidParameter(format!("chain needs n >= 3, got {n}")));
            }
            XorFamily::Chain(n)
        }
        ("CH", None) => return Err(Error::InvalidParameter("chain needs a length".into())),
        (_, Some(_)) => return Err(Error::InvalidParameter(format!("{name} takes no length"))),
        (other, None) => other.parse()?,
    };
    let alpha = alpha.unwrap_or(1.0);
    family.isotropic(if opposite { 1.0 - alpha } else { alpha })
}

pub fn pr_box() -> ContextBox {
    XorFamily::PR.extremal().expect("PR hypergraph is valid")
}

pub fn kcbs() -> Result<ContextBox> {
    let g = Arc::new(Hypergraph::cycle(5)?);
    let s = 1.0 / 5f64.sqrt();
    let d = vec![1.0 - 2.0 * s, s, s, 0.0];
    Ok(ContextBox::from_raw(g, vec![d; 5]))
}
