//! Command implementations behind the `ctxq` binary: box files, box
//! sources, measure rows, batch runs, chain figure data and verification
//! suites.

pub mod commands;
pub mod source;
pub mod spec_file;
pub mod verify;

pub use commands::{
    cmd_batch, cmd_figure_chain, cmd_measure, figure_chain, run_batch, run_measure, ChainSolver, ChainVariant,
    FigureRow, Format, Measure, MeasureOptions, ResultRow, WeightsSpec,
};
pub use source::BoxSource;
pub use spec_file::{emit_box, emit_box_string, parse_box, parse_box_str, BoxSpecFile};
pub use verify::{cmd_verify, run_suite, Check, Suite};
