//! Sweeps over graph sources, report records and their persistence.
//!
//! [`run_sweep`] evaluates each (graph, check) pair in parallel and hands the
//! [`Outcome`]s to a sink in input order. Outcomes keep exact enclosures;
//! [`RunRecord`] is the serialized form with decimal endpoints.

mod corpus;
mod record;
mod report;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::graph::GraphError;

pub use corpus::{random_connected_graph, random_corpus, read_corpus};
pub use record::{parse_decimal, Outcome, RunRecord, DECIMAL_DIGITS};
pub use report::{emit_report, ReportPaths, ReportWriter, SummaryRow, Tally};
pub use sweep::{collect_records, construction_outcome_of, parse_checks, run_sweep, Source, SweepStats};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}, line {line}: {source}")]
    Corpus {
        path: PathBuf,
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("no checks selected")]
    NoChecks,
    #[error("thread pool: {0}")]
    Threads(String),
}
