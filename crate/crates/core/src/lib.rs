//! Hereditarily finite sets, the Ackermann coding, and the interpretations
//! between finite set theory and bounded arithmetic.

pub mod arith;
pub mod cardinal;
pub mod cli;
pub mod error;
pub mod eval;
pub mod interp;
pub mod logic;
pub mod order;
pub mod set;
pub mod verify;

pub use error::{Error, Result};
