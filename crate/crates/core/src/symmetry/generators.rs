use std::sync::Arc;

use super::element::GroupElement;
use super::group::{generate_group, TwirlGroup, DEFAULT_GROUP_CAP};
use crate::boxes::{Hypergraph, XorFamily};
use crate::error::Result;

/// A named hypergraph with its generator set.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub hypergraph: Arc<Hypergraph>,
    pub generators: Vec<GroupElement>,
}

impl GeneratorSet {
    pub fn group(&self) -> Result<TwirlGroup> {
        generate_group(&self.hypergraph, &self.generators, DEFAULT_GROUP_CAP)
    }
}

/// Generator sets by name: `PM`, `M`, `CH(n)` / `CHn`, `PR`, `KCBS`.
pub fn builtin_generators(name: &str) -> Result<GeneratorSet> {
    if name.eq_ignore_ascii_case("KCBS") {
        return kcbs_generators();
    }
    match name.parse::<XorFamily>()? {
        XorFamily::Chain(n) => chain_generators(n),
        XorFamily::PeresMermin => peres_mermin_generators(),
        XorFamily::MerminStar => mermin_star_generators(),
    }
}

fn element(g: &Hypergraph, perm: Vec<usize>, flips: &[usize]) -> Result<GroupElement> {
    let mut relabel: Vec<Vec<usize>> = g.cardinalities().iter().map(|&d| (0..d).collect()).collect();
    for &t in flips {
        relabel[t] = vec![1, 0];
    }
    let e = GroupElement::new(perm, relabel)?;
    e.check(g)?;
    Ok(e)
}

/// The six row permutations, the swap of the first two columns and the
/// reflection in the main diagonal with a flip on `A9`.
pub fn peres_mermin_generators() -> Result<GeneratorSet> {
    let g = Arc::new(XorFamily::PeresMermin.hypergraph()?);
    let rows: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let mut generators = Vec::with_capacity(8);
    for sigma in rows {
        let perm = (0..9).map(|i| 3 * sigma[i / 3] + i % 3).collect();
        generators.push(element(&g, perm, &[])?);
    }
    generators.push(GroupElement::from_swaps(&g, &[("A1", "A2"), ("A4", "A5"), ("A7", "A8")], &[])?);
    generators.push(GroupElement::from_swaps(&g, &[("A2", "A4"), ("A3", "A7"), ("A6", "A8")], &["A9"])?);
    Ok(GeneratorSet { hypergraph: g, generators })
}

/// Swapped name pairs and flipped names.
type Reflection<'a> = (&'a [(&'a str, &'a str)], &'a [&'a str]);

/// Five reflections of the star, through `Aa`, `Cc`, `Dd`, `Ee`, `Bb`, and
/// flips on the triangles `Acd`, `Bde`, `Cea`, `Dab`, `Ebc`.
pub fn mermin_star_generators() -> Result<GeneratorSet> {
    let g = Arc::new(XorFamily::MerminStar.hypergraph()?);
    let reflections: [Reflection; 5] = [
        (&[("B", "E"), ("C", "D"), ("b", "e"), ("c", "d")], &[]),
        (&[("B", "D"), ("A", "E"), ("a", "e"), ("b", "d")], &["c"]),
        (&[("C", "E"), ("A", "B"), ("a", "b"), ("c", "e")], &["d"]),
        (&[("A", "D"), ("B", "C"), ("a", "d"), ("b", "c")], &["E"]),
        (&[("A", "C"), ("D", "E"), ("a", "c"), ("d", "e")], &["B"]),
    ];
    let mut generators = Vec::with_capacity(10);
    for (swaps, flips) in reflections {
        generators.push(GroupElement::from_swaps(&g, swaps, flips)?);
    }
    for tri in [["A", "c", "d"], ["B", "d", "e"], ["C", "e", "a"], ["D", "a", "b"], ["E", "b", "c"]] {
        generators.push(GroupElement::from_swaps(&g, &[], &tri)?);
    }
    Ok(GeneratorSet { hypergraph: g, generators })
}

/// `h_j` for `j = 1..n-1`: the shift `A_i -> A_{i+j}` with flips on
/// `A_1..A_j`.
pub fn chain_generators(n: usize) -> Result<GeneratorSet> {
    let g = Arc::new(Hypergraph::cycle(n)?);
    let generators = (1..n)
        .map(|j| element(&g, (0..n).map(|i| (i + j) % n).collect(), &(0..j).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    Ok(GeneratorSet { hypergraph: g, generators })
}

/// Rotation and reflection of the pentagon.
pub fn kcbs_generators() -> Result<GeneratorSet> {
    let g = Arc::new(Hypergraph::cycle(5)?);
    let rotation = element(&g, (0..5).map(|i| (i + 1) % 5).collect(), &[])?;
    let reflection = element(&g, (0..5).map(|i| (5 - i) % 5).collect(), &[])?;
    Ok(GeneratorSet { hypergraph: g, generators: vec![rotation, reflection] })
}
