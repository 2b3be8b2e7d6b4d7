//! X_u of chain boxes at alpha = 1 and at the quantum alpha, as CSV.

use contextuality::cli::{figure_chain, ChainSolver, ChainVariant};

fn main() -> contextuality::Result<()> {
    let rows = figure_chain(3, 50, ChainVariant::Both, ChainSolver::Both)?;
    println!("n,alpha,xu");
    for r in rows {
        println!("{},{},{}", r.n, r.alpha, r.xu);
    }
    Ok(())
}
