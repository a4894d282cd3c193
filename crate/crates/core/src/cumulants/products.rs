//! Independence products: joint moment functionals built from marginals
//! over pairwise-disjoint alphabets. Only commutative scalar domains.
//!
//! Each product kind follows its defining factorization:
//! tensor products factor by grouping letters per marginal, boolean products
//! factor at every change of marginal, monotone products evaluate maximal
//! runs of the last marginal first, free products expand centered words
//! inductively, and fermi-boolean products set mixed cumulants over the
//! almost-interval family to zero.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::CommutativeRing;
use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::weights::WeightId;

use super::functional::MomentSource;
use super::transform::{weighted_moment, CumulantSolver, CumulantTable};
use super::word::Word;

/// The five product constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductKind {
    Tensor,
    Free,
    Boolean,
    Monotone,
    FermiBoolean,
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ProductKind::Tensor => "tensor",
            ProductKind::Free => "free",
            ProductKind::Boolean => "boolean",
            ProductKind::Monotone => "monotone",
            ProductKind::FermiBoolean => "fermi-boolean",
        };
        write!(f, "{name}")
    }
}

impl FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tensor" => Ok(ProductKind::Tensor),
            "free" => Ok(ProductKind::Free),
            "boolean" => Ok(ProductKind::Boolean),
            "monotone" => Ok(ProductKind::Monotone),
            "fermi-boolean" | "fermi" => Ok(ProductKind::FermiBoolean),
            other => Err(Error::InvalidInput(format!("unknown product kind {other:?}"))),
        }
    }
}

/// The joint functional of independent marginals. For the monotone kind the
/// marginal order matters: later marginals are evaluated first.
pub struct ProductFunctional<'a, S: CommutativeRing> {
    kind: ProductKind,
    marginals: Vec<&'a dyn MomentSource<S>>,
    alphabet: Vec<char>,
    owner: HashMap<char, usize>,
    max_order: usize,
    cap: usize,
    unit: S,
    free_memo: RefCell<HashMap<Word, S>>,
    // marginal cumulant tables over the almost-interval family (fermi-boolean)
    fermi_tables: Vec<CumulantTable<S>>,
}

impl<'a, S: CommutativeRing> ProductFunctional<'a, S> {
    pub fn new(
        kind: ProductKind,
        marginals: Vec<&'a dyn MomentSource<S>>,
        max_order: usize,
        cap: usize,
    ) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::InvalidInput("a product needs marginals".into()));
        }
        let unit = marginals[0].unit();
        let mut alphabet = Vec::new();
        let mut owner = HashMap::new();
        for (i, m) in marginals.iter().enumerate() {
            for &c in m.alphabet() {
                if owner.insert(c, i).is_some() {
                    return Err(Error::AlphabetCollision { symbol: c });
                }
                alphabet.push(c);
            }
        }
        let mut fermi_tables = Vec::new();
        if kind == ProductKind::FermiBoolean {
            let weight = WeightId::Indicator(FamilyId::AlmostInterval);
            for m in &marginals {
                let mut solver = CumulantSolver::new(&weight, *m, cap);
                fermi_tables.push(solver.solve_table(max_order)?);
            }
        }
        Ok(ProductFunctional {
            kind,
            marginals,
            alphabet,
            owner,
            max_order,
            cap,
            unit,
            free_memo: RefCell::new(HashMap::new()),
            fermi_tables,
        })
    }

    fn owner_of(&self, c: char) -> usize {
        self.owner[&c]
    }

    /// Maximal runs of letters from one marginal: (marginal index, run word).
    fn runs(&self, word: &Word) -> Vec<(usize, Word)> {
        let mut out: Vec<(usize, Vec<char>)> = Vec::new();
        for &c in word.letters() {
            let o = self.owner_of(c);
            match out.last_mut() {
                Some((last, run)) if *last == o => run.push(c),
                _ => out.push((o, vec![c])),
            }
        }
        out.into_iter().map(|(o, run)| (o, Word::new(run))).collect()
    }

    fn tensor_moment(&self, word: &Word) -> Result<S> {
        let mut total = self.unit.clone();
        for (i, m) in self.marginals.iter().enumerate() {
            let letters: Vec<char> = word
                .letters()
                .iter()
                .copied()
                .filter(|&c| self.owner_of(c) == i)
                .collect();
            if letters.is_empty() {
                continue;
            }
            total = total.mul(&m.moment(&Word::new(letters))?);
        }
        Ok(total)
    }

    fn boolean_moment(&self, word: &Word) -> Result<S> {
        let mut total = self.unit.clone();
        for (o, run) in self.runs(word) {
            total = total.mul(&self.marginals[o].moment(&run)?);
        }
        Ok(total)
    }

    fn monotone_moment(&self, word: &Word) -> Result<S> {
        let runs = self.runs(word);
        if runs.len() <= 1 {
            return match runs.first() {
                Some((o, run)) => self.marginals[*o].moment(run),
                None => Ok(self.unit.clone()),
            };
        }
        // evaluate every maximal run of the highest marginal; the produced
        // constants are scalars here and pull out of the rest
        let highest = runs.iter().map(|(o, _)| *o).max().unwrap();
        let mut scalar = self.unit.clone();
        let mut rest = Word::empty();
        for (o, run) in runs {
            if o == highest {
                scalar = scalar.mul(&self.marginals[o].moment(&run)?);
            } else {
                rest = rest.concat(&run);
            }
        }
        Ok(scalar.mul(&self.monotone_moment(&rest)?))
    }

    fn free_moment(&self, word: &Word) -> Result<S> {
        if let Some(hit) = self.free_memo.borrow().get(word) {
            return Ok(hit.clone());
        }
        let runs = self.runs(word);
        let k = runs.len();
        if k <= 1 {
            return match runs.first() {
                Some((o, run)) => self.marginals[*o].moment(run),
                None => Ok(self.unit.clone()),
            };
        }
        // centering the alternating runs kills the word, so expanding
        // each run as (centered + moment) expresses F(word) through
        // strictly shorter words
        let run_moments: Vec<S> = runs
            .iter()
            .map(|(o, run)| self.marginals[*o].moment(run))
            .collect::<Result<_>>()?;
        let mut total = self.unit.zero_like();
        for mask in 0..(1u32 << k) - 1 {
            let mut coeff = self.unit.clone();
            let mut kept = Word::empty();
            for (i, (_, run)) in runs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    kept = kept.concat(run);
                } else {
                    coeff = coeff.mul(&run_moments[i]);
                }
            }
            let dropped = k - mask.count_ones() as usize;
            let sub = self.free_moment(&kept)?;
            let term = coeff.mul(&sub);
            total = if dropped % 2 == 0 {
                total.add(&term)
            } else {
                total.sub(&term)
            };
        }
        // 0 = sum over all masks of (-1)^dropped * coeff * F(kept); the full
        // mask contributes F(word) itself
        let result = total.neg();
        self.free_memo
            .borrow_mut()
            .insert(word.clone(), result.clone());
        Ok(result)
    }

    fn fermi_boolean_moment(&self, word: &Word) -> Result<S> {
        let weight = WeightId::Indicator(FamilyId::AlmostInterval);
        weighted_moment(
            &weight,
            &mut |sub| {
                let owners: Vec<usize> =
                    sub.letters().iter().map(|&c| self.owner_of(c)).collect();
                let first = owners[0];
                if owners.iter().all(|&o| o == first) {
                    self.fermi_tables[first].get(sub).cloned()
                } else {
                    Ok(self.unit.zero_like())
                }
            },
            word,
            &self.unit,
            self.cap,
        )
    }
}

impl<'a, S: CommutativeRing> MomentSource<S> for ProductFunctional<'a, S> {
    fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    fn unit(&self) -> S {
        self.unit.clone()
    }

    fn reduced_moment(&self, word: &Word) -> Result<S> {
        if word.len() > self.max_order {
            return Err(Error::OrderCapExceeded {
                order: word.len(),
                cap: self.max_order,
            });
        }
        match self.kind {
            ProductKind::Tensor => self.tensor_moment(word),
            ProductKind::Boolean => self.boolean_moment(word),
            ProductKind::Monotone => self.monotone_moment(word),
            ProductKind::Free => self.free_moment(word),
            ProductKind::FermiBoolean => self.fermi_boolean_moment(word),
        }
    }
}
