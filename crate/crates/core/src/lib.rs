//! Numerical tools for real matrix polynomials: nearest non-trivial Smith
//! form, lower McCoy rank approximation, approximate GCDs of adjoint entries
//! and the structured matrices behind them.
//!
//! The algebraic layer is generic over [`Scalar`]; the solvers work in
//! `f64`. The aliases below name the concrete types used throughout.

pub mod detadj;
pub mod error;
pub mod gcdkit;
pub mod lmsolve;
pub mod matpoly;
pub mod mccoy_opt;
pub mod oracle;
pub mod scalar;
pub mod snf_opt;
pub mod structured;

pub use error::{Error, Result};
pub use matpoly::{apply_perturbation, Degree, MatrixPolynomial, PerturbStructure, Polynomial, StructureKind};
pub use scalar::{Real, Scalar};

use num_rational::BigRational;

pub type Poly = Polynomial<f64>;
pub type MatPoly = MatrixPolynomial<f64>;
pub type ScalarMat = nalgebra::DMatrix<f64>;
pub type ComplexMat = nalgebra::DMatrix<nalgebra::Complex<f64>>;
pub type Complex = nalgebra::Complex<f64>;
pub type ExactPoly = Polynomial<BigRational>;
pub type ExactMatPoly = MatrixPolynomial<BigRational>;
