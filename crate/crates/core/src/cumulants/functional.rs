//! Moment functionals: maps from words to scalars with the conditional
//! expectation contract `F(w 1 w') = F(w w')` built in (the constant symbol
//! is deleted before evaluation, and the empty word evaluates to the unit).

use std::collections::HashMap;

use rand::Rng;

use crate::algebra::{Rat, Ring};
use crate::error::{Error, Result};

use super::word::{words_up_to, Word};

/// A moment functional with values in a scalar ring.
pub trait MomentSource<S: Ring> {
    /// The non-constant symbols.
    fn alphabet(&self) -> &[char];

    /// Value of the empty word, i.e. the unit of the scalar ring.
    fn unit(&self) -> S;

    /// Moment of a nonempty constant-free word.
    fn reduced_moment(&self, word: &Word) -> Result<S>;

    /// Moment of an arbitrary word: validates symbols, deletes constants.
    fn moment(&self, word: &Word) -> Result<S> {
        word.check_alphabet(self.alphabet())?;
        let reduced = word.reduced();
        if reduced.is_empty() {
            Ok(self.unit())
        } else {
            self.reduced_moment(&reduced)
        }
    }
}

/// A functional backed by an explicit word-to-value table.
#[derive(Debug, Clone)]
pub struct TableFunctional<S> {
    alphabet: Vec<char>,
    one: S,
    values: HashMap<Word, S>,
}

impl<S: Ring> TableFunctional<S> {
    pub fn new(alphabet: Vec<char>, one: S) -> Self {
        TableFunctional {
            alphabet,
            one,
            values: HashMap::new(),
        }
    }

    /// Records the moment of `word`; the stored key is the reduced word, so
    /// `x1y` and `xy` set the same entry.
    pub fn set(&mut self, word: &Word, value: S) -> Result<()> {
        word.check_alphabet(&self.alphabet)?;
        let key = word.reduced();
        if key.is_empty() {
            return Err(Error::InvalidInput(
                "the empty word always has moment 1".into(),
            ));
        }
        self.values.insert(key, value);
        Ok(())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.values.iter()
    }
}

impl<S: Ring> MomentSource<S> for TableFunctional<S> {
    fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    fn unit(&self) -> S {
        self.one.clone()
    }

    fn reduced_moment(&self, word: &Word) -> Result<S> {
        self.values
            .get(word)
            .cloned()
            .ok_or_else(|| Error::MissingMoment {
                word: word.to_string(),
            })
    }
}

/// A random rational functional: every word up to `max_order` gets an
/// independent small random rational moment.
pub fn random_rational_functional<R: Rng>(
    alphabet: &[char],
    max_order: usize,
    rng: &mut R,
) -> TableFunctional<Rat> {
    let mut f = TableFunctional::new(alphabet.to_vec(), Rat::one());
    for word in words_up_to(alphabet, max_order) {
        let value = Rat::new(rng.gen_range(-6..=6), rng.gen_range(1..=6));
        f.set(&word, value).expect("alphabet word");
    }
    f
}

/// The fully generic functional: the moment of each constant-free word `w`
/// is its own polynomial indeterminate `m_w`.
#[derive(Debug, Clone)]
pub struct GenericFunctional {
    alphabet: Vec<char>,
}

impl GenericFunctional {
    pub fn new(alphabet: Vec<char>) -> Self {
        GenericFunctional { alphabet }
    }

    pub fn moment_variable(word: &Word) -> String {
        format!("m_{word}")
    }
}

impl MomentSource<crate::algebra::Poly> for GenericFunctional {
    fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    fn unit(&self) -> crate::algebra::Poly {
        crate::algebra::Poly::one()
    }

    fn reduced_moment(&self, word: &Word) -> Result<crate::algebra::Poly> {
        Ok(crate::algebra::Poly::var(Self::moment_variable(word)))
    }
}
