//! Exact symbolic Hamiltonian mechanics on noncommutative algebras.
//!
//! Differential calculi are given either by generators and oriented rewrite
//! rules ([`forms::PresentedCalculus`]), by tensor legs of the universal
//! calculus ([`universal::UniversalCalculus`]) or by the graded tensor product
//! of polynomial forms on the plane with the universal calculus of 2x2 matrices
//! ([`polymat::PolyMatrixCalculus`]). All of them implement
//! [`calculus::Calculus`], on which the Cartan operations and the symplectic
//! solver are written once.

pub mod algebra;
pub mod calculus;
pub mod cartan;
pub mod display;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod lincomb;
pub mod models;
pub mod polymat;
pub mod scalar;
pub mod suite;
pub mod symplectic;
pub mod universal;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use scalar::{CycScalar, Rational};
