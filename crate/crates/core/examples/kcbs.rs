//! The KCBS pentagon box: symmetry, value and cost.

use contextuality::closed_form::chi;
use contextuality::entropy::{x_u, SolverOptions};
use contextuality::polytope::{contextuality_cost, enumerate_vertices};
use contextuality::symmetry::builtin_generators;

fn main() -> contextuality::Result<()> {
    let b = contextuality::kcbs()?;
    let vertices = enumerate_vertices(b.hypergraph_arc(), 1 << 10)?;
    let group = builtin_generators("KCBS")?.group()?;
    let r = x_u(&b, &SolverOptions::with_tol(1e-10))?;
    let g00 = 1.0 - 2.0 / 5f64.sqrt();
    println!("{} deterministic vertices, symmetry group of order {}", vertices.vertex_count(), group.order());
    println!("X_u(KCBS) = {:.9}, closed form chi(g00, 1/5) = {:.9}", r.value, chi(g00, 0.2));
    println!("C(KCBS) = {:.9}", contextuality_cost(&b, 1e-9)?.cost);
    Ok(())
}
