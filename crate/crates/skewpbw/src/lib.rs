//! Exact normal-form arithmetic in skew PBW extensions.

pub mod catalog;
pub mod cli;
pub mod coeff;
pub mod engine;
pub mod graded;
pub mod invariants;
pub mod poly;
pub mod presentation;
pub mod quantum;
