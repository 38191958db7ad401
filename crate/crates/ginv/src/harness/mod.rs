//! Generators, theorem campaigns, matrix file I/O, and JSON reports.

mod campaign;
mod gen;
mod io;
pub mod json;
mod report;

pub use campaign::{all_theorem_ids, run_campaign, CampaignResult, Counterexample};
pub use gen::{generate, Family, GenSpec, Generated};
pub use io::{parse_matrix, read_matrix, render_matrix, write_matrix, MatrixFormat};
pub use report::{analyze, AnalysisReport};
