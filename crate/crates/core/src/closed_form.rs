//! Closed-form values for isotropic xor-boxes, chain boxes and the KCBS box.

use std::f64::consts::{LOG2_E, PI};

use crate::boxes::XorFamily;
use crate::error::{Error, Result};

/// `h(a) = -a log2 a - (1-a) log2 (1-a)`.
pub fn binary_entropy(a: f64) -> f64 {
    let t = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    t(a) + t(1.0 - a)
}

/// Binary relative entropy `x log2(x/y) + (1-x) log2((1-x)/(1-y))`.
pub fn chi(x: f64, y: f64) -> f64 {
    let t = |a: f64, b: f64| if a > 0.0 { a * (a / b).log2() } else { 0.0 };
    t(x, y) + t(1.0 - x, 1.0 - y)
}

fn check(n: usize, alpha: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need n >= 3, got {n}")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [0, 1]")));
    }
    Ok(())
}

/// Uniform relative entropy of the isotropic xor-box with `n` contexts.
pub fn xu_isotropic(n: usize, alpha: f64) -> Result<f64> {
    check(n, alpha)?;
    let nf = n as f64;
    let v = if alpha >= (nf - 1.0) / nf {
        nf.log2() - alpha * (nf - 1.0).log2() - binary_entropy(alpha)
    } else if n.is_multiple_of(2) && alpha <= 1.0 / nf {
        nf.log2() - (1.0 - alpha) * (nf - 1.0).log2() - binary_entropy(alpha)
    } else {
        0.0
    };
    Ok(v.max(0.0))
}

/// `X_u` (equal to `X_max`) of the chain box `CH_alpha(n)`.
pub fn xu_chain(n: usize, alpha: f64) -> Result<f64> {
    xu_isotropic(n, alpha)
}

/// `alpha` of the maximally contextual quantum chain box.
pub fn quantum_chain_alpha(n: usize) -> Result<f64> {
    check(n, 0.0)?;
    let c = (PI / n as f64).cos();
    Ok(if n % 2 == 1 { 2.0 * c / (1.0 + c) } else { (1.0 + c) / 2.0 })
}

/// `max(0, n alpha - (n - 1))` for a family with `n` contexts.
pub fn cost_closed_form(family: XorFamily, alpha: f64) -> Result<f64> {
    let n = family.num_contexts();
    check(n, alpha)?;
    Ok((n as f64 * alpha - (n as f64 - 1.0)).max(0.0))
}

/// Cost of the isotropic xor-box with `n` contexts, including the
/// contextual region `alpha < 1/n` that exists for even `n`.
pub fn cost_isotropic(n: usize, alpha: f64) -> Result<f64> {
    check(n, alpha)?;
    let nf = n as f64;
    let low = if n.is_multiple_of(2) { 1.0 - nf * alpha } else { 0.0 };
    Ok((nf * alpha - (nf - 1.0)).max(low).max(0.0))
}

/// `n X_u(CH_alpha(n))`, in bits or in nats.
pub fn total_chain_x(n: usize, alpha: f64, nats: bool) -> Result<f64> {
    let bits = n as f64 * xu_chain(n, alpha)?;
    Ok(if nats { bits / LOG2_E } else { bits })
}
