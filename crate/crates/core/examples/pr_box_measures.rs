//! Relative entropy of contextuality and cost along the PR line.

use contextuality::closed_form::xu_isotropic;
use contextuality::entropy::{x_max, x_u, SolverOptions};
use contextuality::polytope::contextuality_cost;
use contextuality::XorFamily;

fn main() -> contextuality::Result<()> {
    let opts = SolverOptions::with_tol(1e-9);
    println!("{:>6} {:>10} {:>10} {:>10} {:>8}", "alpha", "X_u", "closed", "X_max", "cost");
    for k in 0..=10 {
        let alpha = k as f64 / 10.0;
        let b = XorFamily::PR.isotropic(alpha)?;
        let u = x_u(&b, &opts)?;
        let m = x_max(&b, &opts)?;
        let c = contextuality_cost(&b, 1e-9)?;
        println!("{alpha:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>8.4}", u.value, xu_isotropic(4, alpha)?, m.value, c.cost);
    }
    Ok(())
}
