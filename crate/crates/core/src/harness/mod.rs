//! Corpus generation, verification runs and report output.

mod config;
mod corpus;
mod report;
mod verify;

pub use config::{RunConfig, Tolerances};
pub use corpus::{gen_corpus, generate_entry, CorpusEntry, CorpusItem, CorpusSpec, EntryKind};
pub use report::{emit_report, ReportFormat};
pub use verify::{
    algebra_suite, fourier_residual, run_verify, Check, EntryReport, Refinement, Report, Residual, ShellPoint, Timing,
};
