//! Words over a finite alphabet of non-commutative random variables, plus
//! the distinguished constant symbol `1`.

use std::fmt;

use crate::error::{Error, Result};

/// The symbol standing for the unit constant inside words.
pub const CONSTANT_SYMBOL: char = '1';

/// A finite word; each letter is one symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<char>);

impl Word {
    pub fn new(letters: Vec<char>) -> Self {
        Word(letters)
    }

    pub fn parse(s: &str) -> Self {
        Word(s.chars().collect())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The single-symbol word repeated `k` times.
    pub fn power(symbol: char, k: usize) -> Self {
        Word(vec![symbol; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn contains_constant(&self) -> bool {
        self.0.contains(&CONSTANT_SYMBOL)
    }

    /// Deletes every occurrence of the constant symbol.
    pub fn reduced(&self) -> Word {
        Word(
            self.0
                .iter()
                .copied()
                .filter(|&c| c != CONSTANT_SYMBOL)
                .collect(),
        )
    }

    /// Letters at the given 1-based positions, in order.
    pub fn subword(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&p| self.0[p - 1]).collect())
    }

    /// The word with the letter at 1-based `position` removed.
    pub fn without_position(&self, position: usize) -> Word {
        let mut letters = self.0.clone();
        letters.remove(position - 1);
        Word(letters)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Validates every letter against an alphabet (the constant symbol is
    /// always allowed).
    pub fn check_alphabet(&self, alphabet: &[char]) -> Result<()> {
        for &c in &self.0 {
            if c != CONSTANT_SYMBOL && !alphabet.contains(&c) {
                return Err(Error::UnknownSymbol {
                    symbol: c,
                    alphabet: alphabet.iter().collect(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(Word::parse(&s))
    }
}

/// All words of exactly `len` letters over `alphabet`, lexicographically.
pub fn words_of_length(alphabet: &[char], len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for &c in alphabet {
                let mut letters = w.0.clone();
                letters.push(c);
                next.push(Word(letters));
            }
        }
        out = next;
    }
    out
}

/// All nonempty words of length at most `max_len` over `alphabet`.
pub fn words_up_to(alphabet: &[char], max_len: usize) -> Vec<Word> {
    (1..=max_len)
        .flat_map(|len| words_of_length(alphabet, len))
        .collect()
}
