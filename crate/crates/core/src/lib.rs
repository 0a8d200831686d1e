//! Numerical laboratory for frames generated by iterating a multiplication
//! operator `T_φ f = φ f` on the Hardy space H²(𝔻).
//!
//! Every object lives at a finite truncation order `N`: functions are
//! polynomials of degree at most `N`, orbits `{φⁿ f}` are cut at `n = K`, and
//! frame bounds are extremal eigenvalues of the compressed frame operator.

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod frame;
pub mod hardy;
pub mod json;
pub mod linalg;
pub mod orbit;
pub mod roots;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
