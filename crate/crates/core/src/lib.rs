//! Exact arithmetic, quadratic forms and valuations for certifying
//! quaternion and biquaternion division algebras, and the space-time block
//! codes built from them.

pub mod algebras;
pub mod cli;
pub mod codes;
pub mod error;
pub mod exactnum;
pub mod ffield;
pub mod qform;
pub mod sim;
pub mod valuation;

pub use error::{Error, Result};
