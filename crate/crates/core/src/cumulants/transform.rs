//! Weighted moment-cumulant transforms over commutative scalar domains.
//!
//! The defining relation is `F(w) = sum over partitions pi of
//! omega(pi) * c_pi(w)`, where `c_pi` is the multiplicative extension of the
//! top cumulants over the blocks of `pi`. Solving for the top cumulant is
//! triangular in the word length because every other term only involves
//! cumulants of shorter subwords.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{CommutativeRing, Rat};
use crate::error::{Error, Result};
use crate::families::{self, FamilyId};
use crate::partition::Partition;
use crate::weights::WeightId;

use super::functional::MomentSource;
use super::word::{words_up_to, Word};

/// Solved top-block cumulants for one weight over one functional.
#[derive(Debug, Clone, Serialize)]
pub struct CumulantTable<S> {
    pub weight: WeightId,
    pub alphabet: Vec<char>,
    pub max_order: usize,
    pub entries: BTreeMap<Word, S>,
}

impl<S: CommutativeRing> CumulantTable<S> {
    pub fn get(&self, word: &Word) -> Result<&S> {
        self.entries.get(word).ok_or_else(|| Error::MissingMoment {
            word: word.to_string(),
        })
    }
}

/// Recursive solver for top cumulants; memoizes per word.
pub struct CumulantSolver<'a, S: CommutativeRing> {
    weight: &'a WeightId,
    source: &'a dyn MomentSource<S>,
    cap: usize,
    memo: HashMap<Word, S>,
}

impl<'a, S: CommutativeRing> CumulantSolver<'a, S> {
    pub fn new(weight: &'a WeightId, source: &'a dyn MomentSource<S>, cap: usize) -> Self {
        CumulantSolver {
            weight,
            source,
            cap,
            memo: HashMap::new(),
        }
    }

    /// `c_(1_n)(word)`: the top cumulant of a word of length `n`.
    pub fn top_cumulant(&mut self, word: &Word) -> Result<S> {
        if let Some(hit) = self.memo.get(word) {
            return Ok(hit.clone());
        }
        let n = word.len();
        if n == 0 {
            return Err(Error::InvalidInput("cumulant of the empty word".into()));
        }
        let top_weight = self.weight.eval(&Partition::one(n));
        if top_weight.is_zero() {
            return Err(Error::NonInvertibleWeight {
                weight: self.weight.to_string(),
                order: n,
            });
        }
        let mut value = self.source.moment(word)?;
        if n > 1 {
            let family = self.weight.summation_family();
            let top = Partition::one(n);
            for pi in families::enumerate(family, n, self.cap)?.iter() {
                if *pi == top {
                    continue;
                }
                let w = self.weight.eval(pi);
                if w.is_zero() {
                    continue;
                }
                let mut term = self.source.unit();
                for block in pi.blocks() {
                    let factor = self.top_cumulant(&word.subword(block))?;
                    term = term.mul(&factor);
                }
                value = value.sub(&term.scale(&w));
            }
        }
        let result = value.scale(&top_weight.recip());
        self.memo.insert(word.clone(), result.clone());
        Ok(result)
    }

    /// Solves every word over the alphabet up to `max_order` into a table.
    pub fn solve_table(&mut self, max_order: usize) -> Result<CumulantTable<S>> {
        let alphabet = self.source.alphabet().to_vec();
        let mut entries = BTreeMap::new();
        for word in words_up_to(&alphabet, max_order) {
            let c = self.top_cumulant(&word)?;
            entries.insert(word, c);
        }
        Ok(CumulantTable {
            weight: self.weight.clone(),
            alphabet,
            max_order,
            entries,
        })
    }
}

/// Multiplicative extension over blocks, legal in commutative domains:
/// the product over blocks of the top cumulant of the subword.
pub fn mult_ext_commutative<S: CommutativeRing>(
    table: &CumulantTable<S>,
    pi: &Partition,
    word: &Word,
    unit: &S,
) -> Result<S> {
    let mut out = unit.clone();
    for block in pi.blocks() {
        out = out.mul(table.get(&word.subword(block))?);
    }
    Ok(out)
}

/// Multiplicative extension by the nested evaluation procedure: repeatedly
/// collapse an interval block into a constant and attach that constant to
/// the next argument on the right (to the left when the block touches the
/// end). In a commutative domain the constants pull out by multilinearity,
/// so this must agree with the blockwise product; it exists separately so
/// that agreement is testable.
pub fn mult_ext_nested<S: CommutativeRing>(
    table: &CumulantTable<S>,
    pi: &Partition,
    word: &Word,
    unit: &S,
) -> Result<S> {
    if !pi.is_noncrossing() {
        return Err(Error::CrossingPartition {
            partition: pi.to_string(),
        });
    }
    let n = pi.n();
    let mut alive = vec![true; n];
    let mut coeff: Vec<S> = vec![unit.clone(); n]; // scalar attached to each argument
    let mut remaining: Vec<&Vec<usize>> = pi.blocks().iter().collect();

    while remaining.len() > 1 {
        // find the first block that is an interval among alive positions
        let idx = remaining
            .iter()
            .position(|b| {
                let (lo, hi) = (b[0], b[b.len() - 1]);
                (lo..=hi).all(|e| !alive[e - 1] || b.contains(&e))
            })
            .expect("a non-crossing partition always has an interval block");
        let block = remaining.remove(idx);
        // by multilinearity the attached coefficients pull out of the cumulant
        let mut value = table.get(&word.subword(block))?.clone();
        for &e in block {
            value = value.mul(&coeff[e - 1]);
            alive[e - 1] = false;
        }
        let hi = block[block.len() - 1];
        let lo = block[0];
        if let Some(right) = (hi + 1..=n).find(|&e| alive[e - 1]) {
            coeff[right - 1] = coeff[right - 1].mul(&value);
        } else if let Some(left) = (1..lo).rev().find(|&e| alive[e - 1]) {
            coeff[left - 1] = coeff[left - 1].mul(&value);
        } else {
            unreachable!("some position outside a non-final block is alive");
        }
    }
    let block = remaining[0];
    let mut value = table.get(&word.subword(block))?.clone();
    for &e in block {
        value = value.mul(&coeff[e - 1]);
    }
    Ok(value)
}

/// Reconstructs a moment from a cumulant table: the weighted sum of
/// multiplicative extensions over the summation family.
pub fn cumulants_to_moments<S: CommutativeRing>(
    table: &CumulantTable<S>,
    word: &Word,
    unit: &S,
    cap: usize,
) -> Result<S> {
    weighted_moment(
        &table.weight,
        &mut |w| table.get(w).cloned(),
        word,
        unit,
        cap,
    )
}

/// The moment-cumulant sum with an arbitrary cumulant lookup; used both for
/// table reconstruction and for independence products defined cumulant-side.
pub fn weighted_moment<S: CommutativeRing>(
    weight: &WeightId,
    cumulant: &mut dyn FnMut(&Word) -> Result<S>,
    word: &Word,
    unit: &S,
    cap: usize,
) -> Result<S> {
    let n = word.len();
    if n == 0 {
        return Ok(unit.clone());
    }
    let mut total = unit.zero_like();
    for pi in families::enumerate(weight.summation_family(), n, cap)?.iter() {
        let w = weight.eval(pi);
        if w.is_zero() {
            continue;
        }
        let mut term = unit.clone();
        for block in pi.blocks() {
            term = term.mul(&cumulant(&word.subword(block))?);
        }
        total = total.add(&term.scale(&w));
    }
    Ok(total)
}

/// Cumulants straight from moments by Möbius inversion on a family lattice:
/// `c(w) = sum over pi in f(n) of mu(pi, 1_n) * F_pi(w)` with `F_pi` the
/// blockwise product of moments. Must agree with the recursive solver for
/// the indicator weight of the family.
pub fn moebius_inversion_cumulant<S: CommutativeRing>(
    source: &dyn MomentSource<S>,
    family: FamilyId,
    word: &Word,
    cap: usize,
) -> Result<S> {
    let n = word.len();
    if n == 0 {
        return Err(Error::InvalidInput("cumulant of the empty word".into()));
    }
    let poset = crate::poset::FamilyPoset::new(family, n, cap)?;
    let mu = poset.moebius_to_top();
    let mut total = source.unit().zero_like();
    for (i, pi) in poset.members().iter().enumerate() {
        if mu[i] == 0 {
            continue;
        }
        let mut term = source.unit();
        for block in pi.blocks() {
            term = term.mul(&source.moment(&word.subword(block))?);
        }
        total = total.add(&term.scale(&Rat::from_int(mu[i])));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Poly, Ring};
    use crate::cumulants::functional::{
        random_rational_functional, GenericFunctional, TableFunctional,
    };
    use crate::families::DEFAULT_ENUMERATION_CAP as CAP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn var(w: &str) -> Poly {
        Poly::var(format!("m_{w}"))
    }

    #[test]
    fn first_cumulant_is_the_first_moment() {
        let generic = GenericFunctional::new(vec!['x']);
        for weight in [
            WeightId::Indicator(FamilyId::All),
            WeightId::ModifiedMonotone,
        ] {
            let mut solver = CumulantSolver::new(&weight, &generic, CAP);
            assert_eq!(solver.top_cumulant(&Word::parse("x")).unwrap(), var("x"));
        }
    }

    #[test]
    fn variance_formula_under_noncrossing_weight() {
        let generic = GenericFunctional::new(vec!['x']);
        let weight = WeightId::Indicator(FamilyId::Noncrossing);
        let mut solver = CumulantSolver::new(&weight, &generic, CAP);
        let r2 = solver.top_cumulant(&Word::parse("xx")).unwrap();
        assert_eq!(r2, var("xx").sub(&var("x").mul(&var("x"))));
    }

    #[test]
    fn classical_second_cumulant() {
        let generic = GenericFunctional::new(vec!['x']);
        let weight = WeightId::Indicator(FamilyId::All);
        let mut solver = CumulantSolver::new(&weight, &generic, CAP);
        let c2 = solver.top_cumulant(&Word::parse("xx")).unwrap();
        assert_eq!(c2, var("xx").sub(&var("x").mul(&var("x"))));
    }

    #[test]
    fn boolean_third_cumulant_formula() {
        // b_3 = F(abc) - F(a)F(bc) - F(ab)F(c) + F(a)F(b)F(c)
        let generic = GenericFunctional::new(vec!['a', 'b', 'c']);
        let weight = WeightId::Indicator(FamilyId::Interval);
        let mut solver = CumulantSolver::new(&weight, &generic, CAP);
        let b3 = solver.top_cumulant(&Word::parse("abc")).unwrap();
        let expected = var("abc")
            .sub(&var("a").mul(&var("bc")))
            .sub(&var("ab").mul(&var("c")))
            .add(&var("a").mul(&var("b")).mul(&var("c")));
        assert_eq!(b3, expected);
    }

    #[test]
    fn non_invertible_weight_is_rejected() {
        let generic = GenericFunctional::new(vec!['x']);
        let weight = WeightId::Singleton;
        let mut solver = CumulantSolver::new(&weight, &generic, CAP);
        assert!(matches!(
            solver.top_cumulant(&Word::parse("xx")),
            Err(Error::NonInvertibleWeight { order: 2, .. })
        ));
    }

    #[test]
    fn unknown_symbols_are_rejected() {
        let generic = GenericFunctional::new(vec!['x']);
        let weight = WeightId::Indicator(FamilyId::All);
        let mut solver = CumulantSolver::new(&weight, &generic, CAP);
        assert!(matches!(
            solver.top_cumulant(&Word::parse("xz")),
            Err(Error::UnknownSymbol { symbol: 'z', .. })
        ));
    }

    #[test]
    fn semicircle_moments_are_catalan_and_bernoulli_moments_alternate() {
        // all cumulants zero except c_2 = 1 on one symbol
        for (family, expect) in [
            (FamilyId::Noncrossing, "catalan"),
            (FamilyId::Interval, "bernoulli"),
        ] {
            let weight = WeightId::Indicator(family);
            let mut entries = BTreeMap::new();
            for k in 1..=8usize {
                let value = if k == 2 { Rat::one() } else { Rat::zero() };
                entries.insert(Word::power('x', k), value);
            }
            let table = CumulantTable {
                weight,
                alphabet: vec!['x'],
                max_order: 8,
                entries,
            };
            for k in 1..=8usize {
                let m = cumulants_to_moments(&table, &Word::power('x', k), &Rat::one(), CAP)
                    .unwrap();
                let expected = if k % 2 == 1 {
                    Rat::zero()
                } else if expect == "catalan" {
                    Rat::from_int(families::catalan(k / 2) as i64)
                } else {
                    Rat::one()
                };
                assert_eq!(m, expected, "{expect} at k={k}");
            }
        }
    }

    #[test]
    fn round_trip_for_every_invertible_catalogued_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let source = random_rational_functional(&['x', 'y'], 5, &mut rng);
        for weight in WeightId::catalogue(&Rat::new(2, 3)) {
            if !(1..=5).all(|n| weight.invertible_at(n)) {
                continue;
            }
            let mut solver = CumulantSolver::new(&weight, &source, CAP);
            let table = solver.solve_table(5).unwrap();
            for word in words_up_to(&['x', 'y'], 5) {
                let back = cumulants_to_moments(&table, &word, &Rat::one(), CAP).unwrap();
                assert_eq!(back, source.moment(&word).unwrap(), "{weight} at {word}");
            }
        }
    }

    #[test]
    fn moebius_inversion_matches_recursive_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let source = random_rational_functional(&['x', 'y'], 5, &mut rng);
        for family in [
            FamilyId::All,
            FamilyId::Interval,
            FamilyId::AlmostInterval,
            FamilyId::Noncrossing,
        ] {
            let weight = WeightId::Indicator(family);
            let mut solver = CumulantSolver::new(&weight, &source, CAP);
            for word in words_up_to(&['x', 'y'], 5) {
                let direct = moebius_inversion_cumulant(&source, family, &word, CAP).unwrap();
                let recursive = solver.top_cumulant(&word).unwrap();
                assert_eq!(direct, recursive, "{family} at {word}");
            }
        }
    }

    #[test]
    fn nested_extension_agrees_with_commutative_extension() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let source = random_rational_functional(&['x', 'y'], 6, &mut rng);
        let weight = WeightId::ModifiedMonotone;
        let mut solver = CumulantSolver::new(&weight, &source, CAP);
        let table = solver.solve_table(6).unwrap();
        for n in 1..=6usize {
            let word = Word::parse(&"xyxyxy"[..n]);
            for pi in families::enumerate(FamilyId::Noncrossing, n, CAP)
                .unwrap()
                .iter()
            {
                let a = mult_ext_commutative(&table, pi, &word, &Rat::one()).unwrap();
                let b = mult_ext_nested(&table, pi, &word, &Rat::one()).unwrap();
                assert_eq!(a, b, "{pi}");
            }
        }
        // the nested procedure refuses crossing partitions
        let crossing: Partition = "1,3/2,4".parse().unwrap();
        assert!(mult_ext_nested(&table, &crossing, &Word::parse("xyxy"), &Rat::one()).is_err());
    }

    #[test]
    fn centered_interval_and_almost_interval_cumulants_agree() {
        // with F(x) = 0 the extra almost-interval partitions all contain a
        // singleton block and contribute nothing
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut source = TableFunctional::new(vec!['x'], Rat::one());
        for k in 1..=6usize {
            let v = if k == 1 {
                Rat::zero()
            } else {
                Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=6))
            };
            source.set(&Word::power('x', k), v).unwrap();
        }
        let wi = WeightId::Indicator(FamilyId::Interval);
        let wai = WeightId::Indicator(FamilyId::AlmostInterval);
        let mut si = CumulantSolver::new(&wi, &source, CAP);
        let mut sai = CumulantSolver::new(&wai, &source, CAP);
        for k in 1..=6usize {
            let w = Word::power('x', k);
            assert_eq!(
                si.top_cumulant(&w).unwrap(),
                sai.top_cumulant(&w).unwrap(),
                "k={k}"
            );
        }
    }
}
