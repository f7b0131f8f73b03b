//! Resolvent calculus for discrete operator semigroups over `Q_p`.
//!
//! The crate evaluates `R(λ, A) = (I - λA)^{-1}` as a certified Neumann series,
//! its derivatives and Taylor recentering, and checks the resolvent-family
//! characterisations of equi-continuity of `(A^n)` on finite-dimensional
//! ultrametric spaces whose topology comes from a finite family of weighted
//! sup seminorms. Every characterisation is paired with an independent
//! algebraic oracle (characteristic polynomial integrality).

pub mod criteria;
pub mod document;
pub mod error;
pub mod exec;
pub mod instances;
pub mod linalg;
pub mod resolvent;
pub mod scalar;
pub mod suite;

pub use error::{PadicError, Result};
pub use exec::Exec;
pub use linalg::{PadicMatrix, SeminormFamily};
pub use scalar::{Backend, Exponent, PadicScalar, PrecisionBudget, Prime};
