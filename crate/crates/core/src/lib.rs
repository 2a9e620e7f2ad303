//! Numerics for non-commutative phase spaces.
//!
//! The crate covers the structure matrices of a deformed Heisenberg-Weyl
//! algebra ([`algebra`]), the linear Darboux maps relating it to the standard
//! one ([`darboux`]), physicality certification of covariance matrices
//! ([`covariance`]), symplectic spectra and Williamson normal forms for a
//! deformed form `Ω` ([`williamson`]), linear symplectic capacities of Wigner
//! ellipsoids ([`capacity`]) and an exactly solvable isotropic oscillator used
//! as a reference model ([`oscillator`]).

pub mod algebra;
pub mod capacity;
pub mod covariance;
pub mod darboux;
pub mod error;
pub mod linalg;
pub mod oscillator;
pub mod quadrature;
pub mod williamson;

pub use error::{Error, Result};
pub use linalg::{Mat, DEFAULT_TOL};
