//! Verifies independence of constants: for singleton-inductive weights,
//! every top cumulant of a word containing the constant symbol vanishes.
//!
//! The polynomial check runs on the fully generic functional, so a zero
//! there is a polynomial identity, not a numeric coincidence. The matrix
//! check replaces the constant slots by random diagonal matrices.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{RatMatrix, Ring};
use crate::error::Result;
use crate::families;
use crate::partition::Partition;
use crate::weights::WeightId;

use super::functional::GenericFunctional;
use super::matrix_domain::{AttachSide, MatrixCumulants};
use super::transform::CumulantSolver;
use super::word::{Word, CONSTANT_SYMBOL};

/// Letters used for the generic non-constant arguments.
pub const GENERIC_LETTERS: [char; 8] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h'];

/// Outcome of a constants-independence scan.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub weight: String,
    pub domain: String,
    pub max_order: usize,
    pub checked: usize,
    pub all_zero: bool,
    pub witnesses: Vec<ConstantsWitness>,
}

/// A nonzero cumulant of a constant-containing word.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsWitness {
    pub label: String,
    pub value: String,
}

/// Every word of length `n` whose constant positions range over all
/// nonempty position subsets, the other slots holding distinct letters.
fn constant_words(n: usize) -> Vec<Word> {
    let mut words = Vec::new();
    for mask in 1u32..(1 << n) {
        let mut letters = Vec::with_capacity(n);
        let mut next = 0;
        for pos in 0..n {
            if mask & (1 << pos) != 0 {
                letters.push(CONSTANT_SYMBOL);
            } else {
                letters.push(GENERIC_LETTERS[next]);
                next += 1;
            }
        }
        words.push(Word::new(letters));
    }
    words
}

/// Polynomial-identity check on the generic functional, orders `2..=max_order`.
pub fn constants_independence_poly(
    weight: &WeightId,
    max_order: usize,
    cap: usize,
) -> Result<ConstantsReport> {
    let generic = GenericFunctional::new(GENERIC_LETTERS[..max_order].to_vec());
    let mut solver = CumulantSolver::new(weight, &generic, cap);
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for n in 2..=max_order {
        for word in constant_words(n) {
            let c = solver.top_cumulant(&word)?;
            checked += 1;
            if !c.is_zero() {
                witnesses.push(ConstantsWitness {
                    label: word.to_string(),
                    value: c.to_string(),
                });
            }
        }
    }
    Ok(ConstantsReport {
        weight: weight.to_string(),
        domain: "poly".into(),
        max_order,
        checked,
        all_zero: witnesses.is_empty(),
        witnesses,
    })
}

/// Matrix-domain check: random tuples with one random diagonal constant in
/// every possible slot, orders `2..=max_order`.
pub fn constants_independence_matrix<R: Rng>(
    weight: &WeightId,
    max_order: usize,
    dim: usize,
    rng: &mut R,
    cap: usize,
) -> Result<ConstantsReport> {
    let engine = MatrixCumulants::new(weight.clone(), AttachSide::Right, cap)?;
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for n in 2..=max_order {
        for constant_pos in 1..=n {
            let args: Vec<RatMatrix> = (1..=n)
                .map(|p| {
                    if p == constant_pos {
                        RatMatrix::random_diagonal(dim, 4, rng)
                    } else {
                        RatMatrix::random(dim, 4, rng)
                    }
                })
                .collect();
            let c = engine.cumulant(&args)?;
            checked += 1;
            if !c.is_zero() {
                witnesses.push(ConstantsWitness {
                    label: format!("order {n}, constant in slot {constant_pos}"),
                    value: c.to_string(),
                });
            }
        }
    }
    Ok(ConstantsReport {
        weight: weight.to_string(),
        domain: format!("matrix:{dim}"),
        max_order,
        checked,
        all_zero: witnesses.is_empty(),
        witnesses,
    })
}

/// Bookkeeping of the inductive cancellation behind the independence of
/// constants, made explicit for one word length and constant position.
///
/// Writing the moment of a word with a constant in slot `r` two ways (the
/// constant as its own argument, or merged into a neighbor) gives two
/// weighted cumulant sums. Partitions where the constant shares a block of
/// intermediate size contribute zero; partitions isolating the constant as
/// a singleton pair off against the merged side when the weight preserves
/// singleton insertion; what remains forces the top cumulant to vanish.
#[derive(Debug, Clone, Serialize)]
pub struct CancellationReport {
    pub weight: String,
    pub n: usize,
    pub position: usize,
    pub case_intermediate_all_zero: bool,
    pub singleton_pairs_matched: usize,
    pub singleton_pair_failures: Vec<String>,
    pub sides_equal: bool,
    pub top_cumulant_zero: bool,
}

impl CancellationReport {
    pub fn holds(&self) -> bool {
        self.case_intermediate_all_zero
            && self.singleton_pair_failures.is_empty()
            && self.sides_equal
            && self.top_cumulant_zero
    }
}

/// Runs the cancellation bookkeeping for the word of `n + 1` letters with a
/// constant at `position` and distinct generic letters elsewhere.
pub fn verify_cancellation(
    weight: &WeightId,
    n: usize,
    position: usize,
    cap: usize,
) -> Result<CancellationReport> {
    assert!(n >= 1 && position >= 1 && position <= n + 1);
    let generic = GenericFunctional::new(GENERIC_LETTERS[..n].to_vec());
    let mut solver = CumulantSolver::new(weight, &generic, cap);

    let mut letters = Vec::with_capacity(n + 1);
    let mut next = 0;
    for p in 1..=n + 1 {
        if p == position {
            letters.push(CONSTANT_SYMBOL);
        } else {
            letters.push(GENERIC_LETTERS[next]);
            next += 1;
        }
    }
    let long_word = Word::new(letters);
    let short_word = long_word.without_position(position);

    let mult_ext = |solver: &mut CumulantSolver<crate::algebra::Poly>,
                        pi: &Partition,
                        word: &Word|
     -> Result<crate::algebra::Poly> {
        let mut out = crate::algebra::Poly::one();
        for block in pi.blocks() {
            out = out.mul(&solver.top_cumulant(&word.subword(block))?);
        }
        Ok(out)
    };

    let mut lhs_total = crate::algebra::Poly::zero();
    let mut rhs_total = crate::algebra::Poly::zero();
    let mut case_intermediate_all_zero = true;
    let mut singleton_pairs_matched = 0;
    let mut singleton_pair_failures = Vec::new();

    for sigma in families::enumerate(families::FamilyId::All, n + 1, cap)?.iter() {
        let w = weight.eval(sigma);
        let ext = mult_ext(&mut solver, sigma, &long_word)?;
        lhs_total = lhs_total.add(&ext.scale(&w));

        let constant_block = sigma
            .blocks()
            .iter()
            .find(|b| b.contains(&position))
            .expect("position is covered");
        if *sigma == Partition::one(n + 1) {
            continue;
        }
        if constant_block.len() == 1 {
            // pairs off against deleting the singleton on the merged side
            let partner = {
                let blocks: Vec<Vec<usize>> = sigma
                    .blocks()
                    .iter()
                    .filter(|b| b[..] != [position])
                    .map(|b| {
                        b.iter()
                            .map(|&e| if e > position { e - 1 } else { e })
                            .collect()
                    })
                    .collect();
                Partition::new(n, blocks).expect("deleting a singleton")
            };
            let partner_w = weight.eval(&partner);
            let partner_ext = mult_ext(&mut solver, &partner, &short_word)?;
            if partner_w == w && partner_ext == ext {
                singleton_pairs_matched += 1;
            } else {
                singleton_pair_failures.push(sigma.to_string());
            }
        } else if constant_block.len() <= n && !ext.is_zero() && !w.is_zero() {
            case_intermediate_all_zero = false;
        }
    }

    for pi in families::enumerate(families::FamilyId::All, n, cap)?.iter() {
        let w = weight.eval(pi);
        let ext = mult_ext(&mut solver, pi, &short_word)?;
        rhs_total = rhs_total.add(&ext.scale(&w));
    }

    let top_cumulant_zero = solver.top_cumulant(&long_word)?.is_zero();

    Ok(CancellationReport {
        weight: weight.to_string(),
        n,
        position,
        case_intermediate_all_zero,
        singleton_pairs_matched,
        singleton_pair_failures,
        sides_equal: lhs_total == rhs_total,
        top_cumulant_zero,
    })
}
