//! Exact continued fractions of hyperelliptic functions, their Hankel
//! determinants, Somos relations and the Poisson structure of the
//! associated maps.

#![allow(clippy::needless_range_loop)]

pub mod bracket;
pub mod cfrac;
pub mod error;
pub mod exactnum;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod moments;
pub mod poisson;
pub mod random;
pub mod repro;
pub mod somos;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};
