//! Quantum ramp secret sharing over prime fields: exact share encoding and
//! decoding on a sparse state-vector simulator, plus a security auditor that
//! measures what coalitions of shares can learn.

pub mod audit;
pub mod cli;
pub mod codec;
pub mod error;
pub mod gf;
pub mod qsim;
pub mod scheme;

pub use error::{Error, Result};
