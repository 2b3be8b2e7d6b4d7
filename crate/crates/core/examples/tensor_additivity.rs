//! X_u of tensor powers against multiples of the single-copy value.

use std::time::Instant;

use contextuality::entropy::{x_u, SolverOptions};
use contextuality::{pr_box, tensor_power, XorFamily};

fn main() -> contextuality::Result<()> {
    let pr = pr_box();
    let pm = XorFamily::PeresMermin.extremal()?;
    let one_pr = (4f64 / 3.0).log2();
    let one_pm = (6f64 / 5.0).log2();
    for (name, b, copies, single, tol) in
        [("PR", &pr, 2, one_pr, 1e-7), ("PR", &pr, 3, one_pr, 1e-5), ("PM", &pm, 2, one_pm, 1e-6)]
    {
        let start = Instant::now();
        let r = x_u(&tensor_power(b, copies)?, &SolverOptions::with_tol(tol))?;
        println!(
            "X_u({name}^{copies}) = {:.9}, {copies} X_u({name}) = {:.9}, gap {:.1e}, {} iterations, {:.1}s",
            r.value,
            copies as f64 * single,
            r.gap,
            r.iterations,
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
