//! Square rational matrices and the diagonal conditional expectation.
//!
//! The matrix domain is the desk-scale model of an operator-valued
//! probability space: the algebra is `d x d` rational matrices, the
//! constants are the diagonal ones, and the conditional expectation is the
//! diagonal-part map.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use super::{Rat, Ring};

/// A square matrix with exact rational entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(dim: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(RatMatrix { dim, entries })
    }

    pub fn zero(dim: usize) -> Self {
        RatMatrix {
            dim,
            entries: vec![Rat::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RatMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Rat {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rat) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn checked_add(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.dim_check(rhs)?;
        Ok(Ring::add(self, rhs))
    }

    pub fn checked_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        self.dim_check(rhs)?;
        Ok(Ring::mul(self, rhs))
    }

    fn dim_check(&self, rhs: &RatMatrix) -> Result<()> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(())
    }

    /// The diagonal-part map: zeroes every off-diagonal entry. This is the
    /// conditional expectation onto the diagonal subalgebra.
    pub fn diag_projection(&self) -> RatMatrix {
        let mut out = RatMatrix::zero(self.dim);
        for i in 0..self.dim {
            out.set(i, i, self.get(i, i).clone());
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Random matrix with entries `n/d`, `|n| <= bound`, `1 <= d <= bound`.
    pub fn random<R: Rng>(dim: usize, bound: i64, rng: &mut R) -> RatMatrix {
        let entries = (0..dim * dim)
            .map(|_| Rat::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)))
            .collect();
        RatMatrix { dim, entries }
    }

    /// Random diagonal matrix; a generic constant in the matrix domain.
    pub fn random_diagonal<R: Rng>(dim: usize, bound: i64, rng: &mut R) -> RatMatrix {
        let mut m = RatMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, Rat::new(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)));
        }
        m
    }
}

impl Ring for RatMatrix {
    fn zero_like(&self) -> Self {
        RatMatrix::zero(self.dim)
    }

    fn one_like(&self) -> Self {
        RatMatrix::identity(self.dim)
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        RatMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = RatMatrix::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let cur = out.get(i, j) + &(a * rhs.get(k, j));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    fn neg(&self) -> Self {
        RatMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    fn scale(&self, c: &Rat) -> Self {
        RatMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized as `{dim, entries}` with entries row-major `"p/q"` strings.
impl Serialize for RatMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            dim: usize,
            entries: &'a [Rat],
        }
        Repr {
            dim: self.dim,
            entries: &self.entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            entries: Vec<Rat>,
        }
        let r = Repr::deserialize(deserializer)?;
        RatMatrix::new(r.dim, r.entries).map_err(serde::de::Error::custom)
    }
}
