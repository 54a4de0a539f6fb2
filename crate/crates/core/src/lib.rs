//! Phase-plane shooting, period maps and multiplicity certificates for
//! x' = h(y), y' = −λx − a(t)g(x) with stepwise weights.

pub mod autonomous;
pub mod certify;
pub mod cli;
pub mod error;
pub mod flow;
pub mod model;
pub mod numeric;
pub mod quadrature;
pub mod shoot;

pub use error::{Error, Result};
