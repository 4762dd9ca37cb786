//! Locally recoverable evaluation codes from fibered curves over small
//! finite fields: constructions, parameter predictions, and brute-force
//! certification oracles.
//!
//! The pipeline is: pick a code family and parameters ([`families`]), split
//! the underlying curve into fibers ([`curves`]), evaluate a degree-capped
//! function basis on the fiber points ([`lrcode`]), then certify the claimed
//! parameters with exhaustive or sampled oracles ([`oracles`]). Field and
//! matrix arithmetic live in [`gfq`] and [`polyalg`]; the `lrc` binary
//! ([`cli`]) drives the whole pipeline from the command line.

pub mod cli;
pub mod curves;
pub mod error;
pub mod families;
pub mod gfq;
pub mod lrcode;
pub mod oracles;
pub mod polyalg;

pub use error::{Error, Result};
