//! Hypergraph automorphisms, their finite groups and twirling.

mod element;
mod generators;
mod group;

pub use element::GroupElement;
pub use generators::{
    builtin_generators, chain_generators, kcbs_generators, mermin_star_generators, peres_mermin_generators,
    GeneratorSet,
};
pub use group::{
    generate_group, invariant_set_check, isotropic_parameter, InvariantSetReport, TwirlGroup, DEFAULT_GROUP_CAP,
};
