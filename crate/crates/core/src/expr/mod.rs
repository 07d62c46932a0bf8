//! Text input and output: expressions, job files, reports.

pub mod job;
pub mod parse;
pub mod report;

pub use job::{parse_job, Command, JobSpec, Params};
pub use parse::{parse_expr, parse_poly, parse_ring_element, parse_ring_poly, parse_series, Expr};
pub use report::{Check, Report};
