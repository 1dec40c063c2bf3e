//! Benchmark CLI for the gstsp solver: dataset generation, solver and
//! baseline runs with gap tables, hyperparameter sweeps, shift-budget
//! curves, and distribution exports. The binary is a thin argument-parsing
//! shell over [`commands`].

pub mod commands;
pub mod error;
pub mod method;
pub mod report;
pub mod stats;
