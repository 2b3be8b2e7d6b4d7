//! Uniform and worst-case weights differ on a direct sum.

use contextuality::entropy::{x_max, x_u, SolverOptions};
use contextuality::{direct_sum, pr_box, XorFamily};

fn main() -> contextuality::Result<()> {
    let b = direct_sum(&pr_box(), &XorFamily::PR.isotropic(0.5)?)?;
    let opts = SolverOptions::with_tol(1e-9);
    let u = x_u(&b, &opts)?;
    let m = x_max(&b, &opts)?;
    println!("X_u   = {:.9}", u.value);
    println!(
        "X_max = {:.9} (certified in [{:.9}, {:.9}])",
        m.value,
        m.lower_bound(),
        m.upper_bound.unwrap_or(f64::NAN)
    );
    let w = m.weights.as_slice();
    println!("worst-case weight on PR contexts: {:.6}", w[..4].iter().sum::<f64>());
    println!("worst-case weight on PR_1/2 contexts: {:.6}", w[4..].iter().sum::<f64>());
    Ok(())
}
