//! Xor-box profiles, the functional beta and its bounds over the
//! non-contextual polytope.

use contextuality::ks::{beta, classify_xor, nc_alpha_interval, verify_bounds_by_lp};
use contextuality::XorFamily;

fn main() -> contextuality::Result<()> {
    for family in [XorFamily::PR, XorFamily::PeresMermin, XorFamily::MerminStar, XorFamily::Chain(7)] {
        let b = family.extremal()?;
        let profile = classify_xor(&b).expect("extremal boxes are xor-boxes");
        let (lo, hi) = nc_alpha_interval(&profile)?;
        let bounds = verify_bounds_by_lp(&b)?;
        let half = beta(&b, &family.isotropic(0.5)?)?;
        println!(
            "{:>6}: n = {}, m = {}, beta in [{}, {}] on NC, alpha in [{lo:.4}, {hi:.4}], beta(alpha = 1/2) = {half}",
            family.name(),
            profile.num_contexts(),
            profile.context_size,
            bounds.min,
            bounds.max,
        );
    }
    Ok(())
}
