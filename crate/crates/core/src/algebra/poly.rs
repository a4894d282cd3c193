//! Sparse multivariate polynomials over the rationals. Indeterminates are
//! named strings; the cumulant engine uses one indeterminate per word of
//! formal moments (`m_xy`, `m_xx`, ...).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CommutativeRing, Rat, Ring};

/// A commutative monomial: variable name to exponent, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: impl Into<String>) -> Self {
        let mut m = BTreeMap::new();
        m.insert(name.into(), 1);
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &rhs.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(name: impl Into<String>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(name), Rat::one());
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

impl Ring for Poly {
    fn zero_like(&self) -> Self {
        Poly::zero()
    }

    fn one_like(&self) -> Self {
        Poly::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, coeff)| (m.clone(), coeff * c))
                .collect(),
        }
    }
}

impl CommutativeRing for Poly {}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                first = false;
                if m.is_one() {
                    write!(f, "{c}")?;
                } else if c.is_one() {
                    write!(f, "{m}")?;
                } else if (-c).is_one() {
                    write!(f, "-{m}")?;
                } else {
                    write!(f, "{c}*{m}")?;
                }
            } else {
                let (sign, mag) = if c.is_negative() {
                    ("-", -c)
                } else {
                    ("+", c.clone())
                };
                if m.is_one() {
                    write!(f, " {sign} {mag}")?;
                } else if mag.is_one() {
                    write!(f, " {sign} {m}")?;
                } else {
                    write!(f, " {sign} {mag}*{m}")?;
                }
            }
        }
        Ok(())
    }
}

/// Serialized form: list of `{coeff, monomial}` pairs.
impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            coeff: &'a Rat,
            monomial: &'a Monomial,
        }
        serializer.collect_seq(self.terms.iter().map(|(m, c)| Term {
            coeff: c,
            monomial: m,
        }))
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Term {
            coeff: Rat,
            monomial: Monomial,
        }
        let terms = Vec::<Term>::deserialize(deserializer)?;
        let mut out = Poly::zero();
        for t in terms {
            out.insert_term(t.monomial, t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(name: &str) -> Poly {
        Poly::var(name)
    }

    #[test]
    fn variables_commute() {
        let (x, y) = (v("m_x"), v("m_y"));
        assert_eq!(x.mul(&y), y.mul(&x));
    }

    #[test]
    fn cancellation_is_detected_exactly() {
        let x = v("m_x");
        let expr = x.mul(&x).sub(&x.mul(&x));
        assert!(expr.is_zero());

        let half = Poly::constant(Rat::new(1, 2));
        let combined = x.scale(&Rat::new(1, 2)).add(&x.scale(&Rat::new(1, 2)));
        assert_eq!(combined, x);
        assert!(!half.is_zero());
    }

    #[test]
    fn display_is_readable() {
        let p = v("m_xx").sub(&v("m_x").mul(&v("m_x")));
        assert_eq!(p.to_string(), "-m_x^2 + m_xx");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::constant(Rat::new(-3, 2)).to_string(), "-3/2");
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(
            (0usize..4, -4i64..=4, 1i64..=3),
            0..5,
        )
        .prop_map(|parts| {
            let vars = ["m_a", "m_b", "m_c", "m_d"];
            let mut p = Poly::zero();
            for (vi, num, den) in parts {
                p = p.add(&Poly::var(vars[vi]).scale(&Rat::new(num, den)));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn distributivity((p, q, r) in (arb_poly(), arb_poly(), arb_poly())) {
            let lhs = p.add(&q).mul(&r);
            let rhs = p.mul(&r).add(&q.mul(&r));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn subtraction_of_self_is_zero(p in arb_poly()) {
            prop_assert!(p.sub(&p).is_zero());
        }
    }
}
