//! Contextuality cost as a linear program, with its certificate and the
//! non-contextual decomposition.

use contextuality::polytope::{contextuality_cost, contextuality_cost_with, CostOptions};
use contextuality::{kcbs, XorFamily};

fn main() -> contextuality::Result<()> {
    let pm = XorFamily::PeresMermin.isotropic(11.0 / 12.0)?;
    let r = contextuality_cost(&pm, 1e-9)?;
    println!(
        "C(PM_11/12) = {:.9} in [{:.9}, {:.9}] ({:?}, {} pivots)",
        r.cost, r.interval.0, r.interval.1, r.mode, r.pivots
    );
    for (vertex, w) in r.weights.iter().take(5) {
        println!("  {w:.4} x {:?}", vertex.outputs);
    }
    if r.weights.len() > 5 {
        println!("  ... {} vertices in total", r.weights.len());
    }

    let b = kcbs()?;
    let dense = contextuality_cost(&b, 1e-9)?;
    let cg = contextuality_cost_with(&b, &CostOptions { dense_cap: 1, ..CostOptions::default() })?;
    println!("C(KCBS) = {:.9} dense, {:.9} by column generation ({:?})", dense.cost, cg.cost, cg.mode);
    Ok(())
}
