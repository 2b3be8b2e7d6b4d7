//! Hypergraphs, boxes, joint distributions and the operations that build and
//! combine them.

mod builtin;
mod channel;
mod compose;
mod context_box;
mod hypergraph;
mod joint;

pub use builtin::{builtin, kcbs, pr_box, Builtin, XorFamily};
pub use channel::{ChannelMixture, LocalChannels};
pub use compose::{direct_sum, tensor, tensor_power};
pub use context_box::{
    parity_distribution, xor_parity, ConsistencyReport, ContextBox, MarginalMismatch, ValidationReport, Violation,
    NEG_CLAMP, NORM_TOL,
};
pub use hypergraph::{Hypergraph, Observable};
pub use joint::{box_of_joint, deterministic_box, DeterministicAssignment, JointDistribution};

pub(crate) use hypergraph::{digits, index_of_digits, strides};

pub(crate) use joint::projection_table;
