//! The scalar tower used by the cumulant engine: exact rationals, sparse
//! multivariate polynomials over the rationals (formal moments), and square
//! rational matrices with the diagonal conditional expectation.
//!
//! No floating point anywhere; every operation is exact.

mod matrix;
mod poly;
mod rat;

pub use matrix::RatMatrix;
pub use poly::{Monomial, Poly};
pub use rat::Rat;

use serde::{Deserialize, Serialize};

/// Ring operations shared by all scalar domains. Weights are always exact
/// rationals, so scalar multiplication by a [`Rat`] is part of the contract.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn scale(&self, c: &Rat) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

/// Marker for scalar domains in which ring elements commute with each other
/// and with the constants, so the blockwise-product multiplicative extension
/// is legal.
pub trait CommutativeRing: Ring {}

/// Tag selecting one of the three scalar domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarDomain {
    Rational,
    Poly,
    Matrix(usize),
}

impl ScalarDomain {
    /// Whether the multiplicative extension may use plain products over
    /// blocks; matrices need the nested evaluation instead.
    pub fn commutative_with_constants(self) -> bool {
        !matches!(self, ScalarDomain::Matrix(_))
    }
}
