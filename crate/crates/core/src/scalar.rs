//! Scalar traits shared by the polynomial and matrix code.
//!
//! The algebraic layer (polynomials, convolution and Sylvester embeddings,
//! Kronecker products) only needs ring operations and is generic over
//! [`Scalar`], so it runs unchanged on `f32`, `f64` and exact rationals.
//! Spectral routines additionally need [`Real`].

use std::fmt::Debug;
use std::ops::Neg;

use nalgebra::RealField;
use num_traits::{FromPrimitive, Num};

/// Ring element usable as a polynomial coefficient.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + 'static {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = T> + 'static {}

/// Floating point coefficient: `f32` or `f64`.
pub trait Real: Scalar + Copy + FromPrimitive + RealField {
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}
