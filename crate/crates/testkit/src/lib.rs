//! Random instance generators and exhaustive reference solvers used by the
//! test suites of the omt crates.

pub mod gen;
pub mod oracle;
