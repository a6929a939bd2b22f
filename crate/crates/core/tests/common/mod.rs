//! Independent oracles shared by the integration tests and the acceptance
//! runner. Nothing here calls the solver.

#![allow(dead_code)]

pub mod brute;
pub mod gen;
pub mod oracle;
pub mod tiny;
