//! The matrix scalar domain: moments are diagonal parts of matrix products,
//! cumulants are evaluated on tuples of matrices through the nested
//! multiplicative extension, and constants are diagonal matrices.
//!
//! Matrices do not commute with the diagonal subalgebra, so there is no
//! word-indexed cumulant table here: cumulants of arbitrary tuples are
//! computed recursively straight from the defining moment-cumulant relation.

use rand::Rng;

use crate::algebra::{RatMatrix, Ring};
use crate::error::{Error, Result};
use crate::families::{self, FamilyId};
use crate::partition::Partition;
use crate::weights::WeightId;

/// `F(a_1 ... a_n)`: the diagonal part of the matrix product.
pub fn matrix_moment(args: &[RatMatrix]) -> RatMatrix {
    let mut product = args[0].clone();
    for a in &args[1..] {
        product = product.mul(a);
    }
    product.diag_projection()
}

/// Which neighbor receives the constant produced by collapsing a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttachSide {
    /// Multiply the produced constant onto the next argument to the right;
    /// at the right boundary fall back to the left neighbor.
    Right,
    /// Mirror image: prefer the preceding argument.
    Left,
}

/// Nested multiplicative extension of an arbitrary base family of maps:
/// repeatedly collapse an interval block to a constant via `base` and attach
/// it to a neighboring argument.
pub fn nested_extension(
    pi: &Partition,
    args: &[RatMatrix],
    side: AttachSide,
    base: &mut dyn FnMut(&[RatMatrix]) -> Result<RatMatrix>,
) -> Result<RatMatrix> {
    if !pi.is_noncrossing() {
        return Err(Error::CrossingPartition {
            partition: pi.to_string(),
        });
    }
    let n = pi.n();
    assert_eq!(n, args.len(), "partition and argument count must agree");
    let mut alive = vec![true; n];
    let mut current: Vec<RatMatrix> = args.to_vec();
    let mut remaining: Vec<&Vec<usize>> = pi.blocks().iter().collect();

    while remaining.len() > 1 {
        let idx = remaining
            .iter()
            .position(|b| {
                let (lo, hi) = (b[0], b[b.len() - 1]);
                (lo..=hi).all(|e| !alive[e - 1] || b.contains(&e))
            })
            .expect("a non-crossing partition always has an interval block");
        let block = remaining.remove(idx);
        let sub: Vec<RatMatrix> = block.iter().map(|&e| current[e - 1].clone()).collect();
        let value = base(&sub)?;
        for &e in block {
            alive[e - 1] = false;
        }
        let (lo, hi) = (block[0], block[block.len() - 1]);
        let right = (hi + 1..=n).find(|&e| alive[e - 1]);
        let left = (1..lo).rev().find(|&e| alive[e - 1]);
        let target = match side {
            AttachSide::Right => right.map(|r| (r, true)).or(left.map(|l| (l, false))),
            AttachSide::Left => left.map(|l| (l, false)).or(right.map(|r| (r, true))),
        };
        match target {
            Some((pos, prepend)) => {
                current[pos - 1] = if prepend {
                    value.mul(&current[pos - 1])
                } else {
                    current[pos - 1].mul(&value)
                };
            }
            None => unreachable!("another block still holds an alive position"),
        }
    }
    let block = remaining[0];
    let sub: Vec<RatMatrix> = block.iter().map(|&e| current[e - 1].clone()).collect();
    base(&sub)
}

/// Tuple-level cumulant evaluator for a weight supported on non-crossing
/// partitions.
pub struct MatrixCumulants {
    weight: WeightId,
    side: AttachSide,
    cap: usize,
}

impl MatrixCumulants {
    pub fn new(weight: WeightId, side: AttachSide, cap: usize) -> Result<Self> {
        if weight.summation_family() == FamilyId::All {
            return Err(Error::NonCommutativeDomain);
        }
        Ok(MatrixCumulants { weight, side, cap })
    }

    /// `c_(1_n)(a_1, ..., a_n)` solved recursively from the moment-cumulant
    /// relation; recursion terminates because every inner evaluation has
    /// strictly smaller arity.
    pub fn cumulant(&self, args: &[RatMatrix]) -> Result<RatMatrix> {
        let n = args.len();
        if n == 0 {
            return Err(Error::InvalidInput("cumulant of the empty tuple".into()));
        }
        let top_weight = self.weight.eval(&Partition::one(n));
        if top_weight.is_zero() {
            return Err(Error::NonInvertibleWeight {
                weight: self.weight.to_string(),
                order: n,
            });
        }
        let mut total = matrix_moment(args);
        if n > 1 {
            let top = Partition::one(n);
            for pi in families::enumerate(self.weight.summation_family(), n, self.cap)?.iter() {
                if *pi == top {
                    continue;
                }
                let w = self.weight.eval(pi);
                if w.is_zero() {
                    continue;
                }
                let term =
                    nested_extension(pi, args, self.side, &mut |sub| self.cumulant(sub))?;
                total = total.sub(&term.scale(&w));
            }
        }
        Ok(total.scale(&top_weight.recip()))
    }

    /// Nested extension of the cumulant family itself.
    pub fn extension(&self, pi: &Partition, args: &[RatMatrix]) -> Result<RatMatrix> {
        nested_extension(pi, args, self.side, &mut |sub| self.cumulant(sub))
    }
}

/// First left/right-attachment disagreement found when evaluating the
/// nested extension of both the moment family and the cumulant family on
/// random matrix tuples, over every non-crossing partition up to `n_max`.
pub fn balancedness_witness<R: Rng>(
    weight: &WeightId,
    n_max: usize,
    dim: usize,
    rng: &mut R,
    cap: usize,
) -> Result<Option<String>> {
    let right = MatrixCumulants::new(weight.clone(), AttachSide::Right, cap)?;
    let left = MatrixCumulants::new(weight.clone(), AttachSide::Left, cap)?;
    for n in 2..=n_max {
        let args: Vec<RatMatrix> = (0..n).map(|_| RatMatrix::random(dim, 4, rng)).collect();
        for pi in families::enumerate(FamilyId::Noncrossing, n, cap)?.iter() {
            let m_right =
                nested_extension(pi, &args, AttachSide::Right, &mut |s| Ok(matrix_moment(s)))?;
            let m_left =
                nested_extension(pi, &args, AttachSide::Left, &mut |s| Ok(matrix_moment(s)))?;
            if m_right != m_left {
                return Ok(Some(format!("moment extension differs at {pi}")));
            }
            let c_right = right.extension(pi, &args)?;
            let c_left = left.extension(pi, &args)?;
            if c_right != c_left {
                return Ok(Some(format!("cumulant extension differs at {pi}")));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::DEFAULT_ENUMERATION_CAP as CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moment_of_a_single_matrix_is_its_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = RatMatrix::random(3, 5, &mut rng);
        assert_eq!(matrix_moment(&[a.clone()]), a.diag_projection());
    }

    #[test]
    fn first_cumulant_is_the_diagonal_part_and_second_vanishes_on_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let engine = MatrixCumulants::new(
            WeightId::Indicator(FamilyId::AlmostInterval),
            AttachSide::Right,
            CAP,
        )
        .unwrap();
        let a = RatMatrix::random(3, 5, &mut rng);
        assert_eq!(engine.cumulant(&[a.clone()]).unwrap(), a.diag_projection());

        // c_2(a, b) = F(ab) - F(a)F(b) = 0 for diagonal b
        let b = RatMatrix::random_diagonal(3, 5, &mut rng);
        assert!(engine.cumulant(&[a.clone(), b.clone()]).unwrap().is_zero());
        assert!(engine.cumulant(&[b, a]).unwrap().is_zero());
    }

    #[test]
    fn weights_summed_over_all_partitions_are_rejected() {
        assert!(matches!(
            MatrixCumulants::new(
                WeightId::Indicator(FamilyId::All),
                AttachSide::Right,
                CAP
            ),
            Err(Error::NonCommutativeDomain)
        ));
    }

    #[test]
    fn nested_extension_respects_block_structure() {
        // pi = {{1,3},{2}} evaluates c_2(a_1 c_1(a_2), a_3) under right attachment
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let engine =
            MatrixCumulants::new(WeightId::ModifiedMonotone, AttachSide::Right, CAP).unwrap();
        let args: Vec<RatMatrix> = (0..3).map(|_| RatMatrix::random(2, 4, &mut rng)).collect();
        let pi: Partition = "1,3/2".parse().unwrap();
        let by_hand = {
            let inner = engine.cumulant(&[args[1].clone()]).unwrap();
            engine
                .cumulant(&[args[0].clone(), inner.mul(&args[2])])
                .unwrap()
        };
        assert_eq!(engine.extension(&pi, &args).unwrap(), by_hand);
    }

    #[test]
    fn conditional_expectation_balancedness() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let witness =
            balancedness_witness(&WeightId::ModifiedMonotone, 5, 2, &mut rng, CAP).unwrap();
        assert_eq!(witness, None);
    }
}
