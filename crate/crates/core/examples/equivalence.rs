//! Mutual information of the which-context ensemble built from the
//! minimizer against the relative entropy of contextuality.

use contextuality::entropy::{verify_equivalence, ContextWeights, SolverOptions};
use contextuality::random::random_small_box;
use contextuality::{kcbs, pr_box};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> contextuality::Result<()> {
    let opts = SolverOptions::with_tol(1e-9);
    let mut boxes = vec![("PR".to_string(), pr_box()), ("KCBS".to_string(), kcbs()?)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..4 {
        boxes.push((format!("random {i}"), random_small_box(&mut rng)?));
    }
    for (name, b) in boxes {
        let e = verify_equivalence(&b, &ContextWeights::uniform(b.num_contexts()), &opts)?;
        println!(
            "{name:>9}: I = {:.9}, X = {:.9}, residual {:.1e}",
            e.mutual_information, e.relative_entropy, e.residual
        );
    }
    Ok(())
}
