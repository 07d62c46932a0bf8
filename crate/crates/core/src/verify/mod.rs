//! Worked examples, the probe-ring catalog, and the checks run by the
//! acceptance suite and the `selftest` command.

pub mod catalog;
pub mod checks;
pub mod examples;
pub mod linalg;
pub mod suites;

pub use catalog::Catalog;
pub use checks::{check_alpha_identity, check_leading_forms, check_model_consistency, check_stabilization, Sampling};
pub use examples::WorkedExample;
pub use suites::{flow_suite, kernel_suite, selftest, solver_suite, universal_suite, verify_example, ExampleRun};
