//! End-to-end drivers: mesh families, manufactured solutions, convergence
//! tables and mesh diagnostics.

mod config;
mod diagnostics;
mod exact;
mod run;

pub use config::{
    parse_levels, CaseConfig, CaseId, ConfigBuilder, DiffusionSpec, MeshFamily, HEX_COLUMNS,
    SKEW_STRETCH_PER_COLUMN,
};
pub use diagnostics::{analyze_mesh, diagnostics_text, DIAGNOSTICS_HEADER};
pub use exact::ExactSolution;
pub use run::{
    run_case, run_level, write_atomic, ConvergenceTable, LevelOutcome, TableRow, TABLE_HEADER,
};
