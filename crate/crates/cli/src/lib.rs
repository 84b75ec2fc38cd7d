//! Experiment harness for linearized Reed-Solomon codes on the multishot
//! matrix channel.

pub mod campaign;
pub mod config;
pub mod report;
