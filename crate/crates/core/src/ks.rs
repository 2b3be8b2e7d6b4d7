//! The β functional of an xor reference box and the Kochen–Specker type
//! bounds it obeys on the non-contextual polytope.

use crate::boxes::{xor_parity, ContextBox, DeterministicAssignment};
use crate::error::{Error, Result};
use crate::polytope::{optimize_linear, Direction};

/// Entries above this count as support of a reference box.
pub const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct XorBoxProfile {
    pub context_size: usize,
    /// `true` for odd parity.
    pub parities: Vec<bool>,
    pub degrees: Vec<usize>,
    pub all_degrees_even: bool,
    pub single_odd_context: bool,
    pub n_even: bool,
}

impl XorBoxProfile {
    pub fn num_contexts(&self) -> usize {
        self.parities.len()
    }
}

/// Profile of an xor-box, `None` if some context is not exactly `P_even`
/// or `P_odd`, or context sizes differ.
pub fn classify_xor(b: &ContextBox) -> Option<XorBoxProfile> {
    let g = b.hypergraph();
    if !g.is_binary() {
        return None;
    }
    let m = g.context(0).len();
    if g.contexts().iter().any(|c| c.len() != m) {
        return None;
    }
    let parities = b.distributions().iter().map(|d| xor_parity(d, 1e-9)).collect::<Option<Vec<bool>>>()?;
    let degrees = g.degrees();
    let n = parities.len();
    Some(XorBoxProfile {
        context_size: m,
        all_degrees_even: degrees.iter().all(|d| d % 2 == 0),
        single_odd_context: parities.iter().filter(|&&p| p).count() == 1,
        n_even: n % 2 == 0,
        parities,
        degrees,
    })
}

/// Indicator of the reference box's support, per context.
pub fn support_weights(reference: &ContextBox) -> Vec<Vec<f64>> {
    reference
        .distributions()
        .iter()
        .map(|d| d.iter().map(|&x| if x > SUPPORT_TOL { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Total mass `b` puts on the supports of `reference`, summed over contexts.
pub fn beta(reference: &ContextBox, b: &ContextBox) -> Result<f64> {
    reference.same_hypergraph(b)?;
    Ok(reference
        .distributions()
        .iter()
        .zip(b.distributions())
        .map(|(r, d)| r.iter().zip(d).filter(|(&x, _)| x > SUPPORT_TOL).map(|(_, &y)| y).sum::<f64>())
        .sum())
}

/// `|beta(reference, b) - 2^(m-1) <b, reference>|`.
pub fn beta_scalar_identity_check(reference: &ContextBox, b: &ContextBox) -> Result<f64> {
    let profile = classify_xor(reference).ok_or_else(|| Error::NotXor("reference is not an xor-box".into()))?;
    let lhs = beta(reference, b)?;
    let dot: f64 = reference
        .distributions()
        .iter()
        .zip(b.distributions())
        .flat_map(|(r, d)| r.iter().zip(d).map(|(x, y)| x * y))
        .sum();
    Ok((lhs - 2f64.powi(profile.context_size as i32 - 1) * dot).abs())
}

/// Range of `alpha` for which the isotropic box is non-contextual.
pub fn nc_alpha_interval(profile: &XorBoxProfile) -> Result<(f64, f64)> {
    if !profile.single_odd_context || !profile.all_degrees_even {
        return Err(Error::HypothesesUnmet(
            "need exactly one odd context and every observable in an even number of contexts".into(),
        ));
    }
    let n = profile.num_contexts() as f64;
    let lo = if profile.n_even { 1.0 / n } else { 0.0 };
    Ok((lo, (n - 1.0) / n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetaBounds {
    pub num_contexts: usize,
    pub max: f64,
    pub argmax: DeterministicAssignment,
    pub min: f64,
    pub argmin: DeterministicAssignment,
    pub expected_max: f64,
    pub expected_min: f64,
}

impl BetaBounds {
    pub fn tight(&self, tol: f64) -> bool {
        (self.max - self.expected_max).abs() <= tol && (self.min - self.expected_min).abs() <= tol
    }
}

/// Extremes of `beta(reference, .)` over the non-contextual polytope,
/// next to the values `n - 1` and `1` (even `n`) or `0` (odd `n`).
pub fn verify_bounds_by_lp(reference: &ContextBox) -> Result<BetaBounds> {
    let profile = classify_xor(reference).ok_or_else(|| Error::NotXor("reference is not an xor-box".into()))?;
    let w = support_weights(reference);
    let g = reference.hypergraph();
    let hi = optimize_linear(g, &w, Direction::Max)?;
    let lo = optimize_linear(g, &w, Direction::Min)?;
    let n = profile.num_contexts();
    Ok(BetaBounds {
        num_contexts: n,
        max: hi.value,
        argmax: hi.vertex,
        min: lo.value,
        argmin: lo.vertex,
        expected_max: (n - 1) as f64,
        expected_min: if profile.n_even { 1.0 } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::{pr_box, XorFamily};

    #[test]
    fn profiles() {
        let pr = classify_xor(&pr_box()).unwrap();
        assert_eq!(pr.parities, vec![false, false, false, true]);
        assert_eq!(pr.context_size, 2);
        assert!(pr.degrees.iter().all(|&d| d == 2));
        let pm = classify_xor(&XorFamily::PeresMermin.extremal().unwrap()).unwrap();
        assert_eq!(pm.context_size, 3);
        assert!(classify_xor(&XorFamily::PR.isotropic(0.9).unwrap()).is_none());
    }

    #[test]
    fn beta_on_the_pr_line() {
        let pr = pr_box();
        assert_eq!(beta(&pr, &pr).unwrap(), 4.0);
        assert_eq!(beta(&pr, &pr.opposite().unwrap()).unwrap(), 0.0);
        let b = XorFamily::PR.isotropic(0.3).unwrap();
        assert!((beta(&pr, &b).unwrap() - 1.2).abs() < 1e-12);
        assert!(beta_scalar_identity_check(&pr, &b).unwrap() < 1e-12);
    }

    #[test]
    fn intervals() {
        let iv = |f: XorFamily| nc_alpha_interval(&classify_xor(&f.extremal().unwrap()).unwrap()).unwrap();
        assert_eq!(iv(XorFamily::PR), (0.25, 0.75));
        assert_eq!(iv(XorFamily::PeresMermin), (1.0 / 6.0, 5.0 / 6.0));
        assert_eq!(iv(XorFamily::MerminStar), (0.0, 0.8));
    }
}
