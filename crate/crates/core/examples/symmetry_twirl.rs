//! Symmetry groups of named boxes and twirling onto the isotropic line.

use contextuality::symmetry::{builtin_generators, invariant_set_check, isotropic_parameter};
use contextuality::{deterministic_box, DeterministicAssignment, XorFamily};

fn main() -> contextuality::Result<()> {
    for name in ["PR", "PM", "M", "CH7", "KCBS"] {
        let gens = builtin_generators(name)?;
        let group = gens.group()?;
        println!(
            "{name:>4}: {} generators, order {}, transitive on contexts: {}",
            gens.generators.len(),
            group.order(),
            group.acts_transitively_on_contexts()
        );
    }

    let pm = XorFamily::PeresMermin.extremal()?;
    let group = builtin_generators("PM")?.group()?;
    let zeros = deterministic_box(&DeterministicAssignment::new(vec![0; 9]), pm.hypergraph_arc())?;
    let t = group.twirl(&zeros)?;
    println!("twirl of the all-zeros PM vertex has alpha = {:.6}", isotropic_parameter(&t, &pm, &group)?);

    let report = invariant_set_check(&group, Some(&pm), 100, 1)?;
    println!(
        "invariant set check on 100 samples: passed = {}, max deviation {:.2e}",
        report.passed(),
        report.max_deviation
    );
    Ok(())
}
