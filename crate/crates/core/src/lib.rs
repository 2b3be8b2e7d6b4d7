//! Contextuality of boxes on measurement hypergraphs.
//!
//! A [`ContextBox`] assigns a probability distribution to every context of a
//! [`Hypergraph`]. The crate measures how far a box is from the
//! non-contextual polytope: the relative entropy of contextuality in its
//! uniform, fixed-weight and worst-case forms, and the contextuality cost.

pub mod boxes;
pub mod cli;
pub mod closed_form;
pub mod entropy;
pub mod error;
pub mod ks;
pub mod polytope;
pub mod random;
pub mod symmetry;

pub use boxes::{
    box_of_joint, builtin, deterministic_box, direct_sum, kcbs, pr_box, tensor, tensor_power, ContextBox,
    DeterministicAssignment, Hypergraph, JointDistribution, Observable, XorFamily,
};
pub use error::{Error, Result};
