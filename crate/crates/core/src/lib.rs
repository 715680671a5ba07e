//! Optimization modulo linear rational arithmetic, optionally combined with
//! equality over uninterpreted functions.

pub mod arith;
pub mod ast;
pub mod encoders;
pub mod euf;
pub mod lra;
pub mod omt;
pub mod sat;
