//! The weight catalogue: indicator weights of the six families, monotone
//! and cyclic-monotone weights, their singleton-removal modifications,
//! q-crossing weights and the singleton weight, with monic/invertible
//! classification.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::families::FamilyId;
use crate::partition::{NestingForest, Partition};

/// Identifier of a catalogued weight on set partitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightId {
    /// `1` on members of the family, `0` elsewhere.
    Indicator(FamilyId),
    /// Reciprocal nesting tree factorial on non-crossing partitions.
    Monotone,
    /// Monotone weight of the singleton-removal.
    ModifiedMonotone,
    /// Reciprocal tree factorial of the circular nesting forest.
    CyclicMonotone,
    /// Cyclic-monotone weight of the singleton-removal.
    ModifiedCyclicMonotone,
    /// `q^(number of crossings)` on pair partitions, `0` elsewhere.
    QCrossing(Rat),
    /// `q^crossings` of the singleton-removal when that is a pair partition.
    ModifiedQCrossing(Rat),
    /// `1` exactly on the discrete partition `0_n`.
    Singleton,
}

impl WeightId {
    /// Every catalogued weight, instantiating the q-crossing weights at `q`.
    pub fn catalogue(q: &Rat) -> Vec<WeightId> {
        let mut all: Vec<WeightId> = FamilyId::ALL_FAMILIES
            .iter()
            .map(|&f| WeightId::Indicator(f))
            .collect();
        all.extend([
            WeightId::Monotone,
            WeightId::ModifiedMonotone,
            WeightId::CyclicMonotone,
            WeightId::ModifiedCyclicMonotone,
            WeightId::QCrossing(q.clone()),
            WeightId::ModifiedQCrossing(q.clone()),
            WeightId::Singleton,
        ]);
        all
    }

    /// Exact weight of a partition.
    pub fn eval(&self, p: &Partition) -> Rat {
        match self {
            WeightId::Indicator(f) => {
                if f.contains(p) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
            WeightId::Monotone => monotone_weight(p),
            WeightId::ModifiedMonotone => monotone_weight(&p.remove_singletons()),
            WeightId::CyclicMonotone => cyclic_monotone_weight(p),
            WeightId::ModifiedCyclicMonotone => cyclic_monotone_weight(&p.remove_singletons()),
            WeightId::QCrossing(q) => q_crossing_weight(q, p),
            WeightId::ModifiedQCrossing(q) => q_crossing_weight(q, &p.remove_singletons()),
            WeightId::Singleton => {
                if p.is_discrete() && !p.is_empty() {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
        }
    }

    /// Smallest catalogued family outside of which the weight vanishes,
    /// used as the summation domain of moment-cumulant formulas.
    pub fn summation_family(&self) -> FamilyId {
        match self {
            WeightId::Indicator(f) => *f,
            WeightId::Monotone
            | WeightId::ModifiedMonotone
            | WeightId::CyclicMonotone
            | WeightId::ModifiedCyclicMonotone => FamilyId::Noncrossing,
            WeightId::QCrossing(_) | WeightId::ModifiedQCrossing(_) => FamilyId::All,
            WeightId::Singleton => FamilyId::Interval,
        }
    }

    /// Declared support family, when the support is one of the six families.
    pub fn declared_support(&self) -> Option<FamilyId> {
        match self {
            WeightId::Indicator(f) => Some(*f),
            WeightId::Monotone
            | WeightId::ModifiedMonotone
            | WeightId::CyclicMonotone
            | WeightId::ModifiedCyclicMonotone => Some(FamilyId::Noncrossing),
            WeightId::QCrossing(_) | WeightId::ModifiedQCrossing(_) | WeightId::Singleton => None,
        }
    }

    pub fn invertible_at(&self, n: usize) -> bool {
        !self.eval(&Partition::one(n)).is_zero()
    }

    /// Verifies monic/invertible flags by exhaustive evaluation of the top
    /// elements up to `n_max`. Invertibility is per-order data.
    pub fn classify(&self, n_max: usize) -> WeightClassification {
        let mut monic = true;
        let mut invertible_orders = Vec::new();
        for n in 1..=n_max {
            let top = self.eval(&Partition::one(n));
            if !top.is_one() {
                monic = false;
            }
            if !top.is_zero() {
                invertible_orders.push(n);
            }
        }
        WeightClassification {
            weight: self.to_string(),
            n_max,
            monic,
            invertible: invertible_orders.len() == n_max,
            invertible_orders,
            support: self.declared_support(),
        }
    }
}

/// Result of [`WeightId::classify`]: flags verified up to the recorded cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightClassification {
    pub weight: String,
    pub n_max: usize,
    pub monic: bool,
    pub invertible: bool,
    pub invertible_orders: Vec<usize>,
    pub support: Option<FamilyId>,
}

fn monotone_weight(p: &Partition) -> Rat {
    if p.is_empty() {
        return Rat::one();
    }
    match p.nesting_forest() {
        Ok(forest) => Rat::new(1, forest.tree_factorial() as i64),
        Err(_) => Rat::zero(),
    }
}

fn cyclic_monotone_weight(p: &Partition) -> Rat {
    if p.is_empty() {
        return Rat::one();
    }
    if !p.is_noncrossing() {
        return Rat::zero();
    }
    let forest = cyclic_nesting_forest(p).expect("non-crossing input");
    Rat::new(1, forest.tree_factorial() as i64)
}

fn q_crossing_weight(q: &Rat, p: &Partition) -> Rat {
    if p.blocks().iter().all(|b| b.len() == 2) {
        q.powi(p.crossing_count() as i64)
    } else {
        Rat::zero()
    }
}

/// One cyclic gap of a block: the arc strictly between two elements that are
/// consecutive on the circle.
#[derive(Debug, Clone, Copy)]
struct CyclicGap {
    /// arc runs from `after` exclusive to `before` exclusive, wrapping past n
    after: usize,
    before: usize,
    steps: usize,
}

impl CyclicGap {
    fn contains(&self, e: usize) -> bool {
        if self.after < self.before {
            self.after < e && e < self.before
        } else {
            // wrapping arc
            e > self.after || e < self.before
        }
    }
}

fn cyclic_gaps(block: &[usize], n: usize) -> Vec<CyclicGap> {
    let k = block.len();
    (0..k)
        .map(|i| {
            let after = block[i];
            let before = block[(i + 1) % k];
            let steps = if i + 1 < k {
                before - after
            } else {
                before + n - after
            };
            CyclicGap {
                after,
                before,
                steps,
            }
        })
        .collect()
}

/// Nesting forest of a non-crossing partition drawn on the circle.
///
/// A block whose convex hull contains the circle center (every cyclic gap
/// spans at most half the circle, hulls taken closed) covers every other
/// block. A block not containing the center has a unique center-facing gap
/// (the one spanning more than half the circle); it covers exactly the
/// blocks lying in its other gaps. Parenthood is the innermost covering
/// block; blocks covered by nobody are the roots visible from the center.
pub fn cyclic_nesting_forest(p: &Partition) -> Result<NestingForest> {
    if !p.is_noncrossing() {
        return Err(Error::CrossingPartition {
            partition: p.to_string(),
        });
    }
    let n = p.n();
    let blocks = p.blocks();
    let k = blocks.len();
    let gaps: Vec<Vec<CyclicGap>> = blocks.iter().map(|b| cyclic_gaps(b, n)).collect();
    // center-facing gap per block: the unique gap spanning more than half
    // the circle. A block with no such gap has a closed hull containing the
    // center (non-crossing keeps that block unique) and covers every other
    // block; gaps of exactly half the circle put the center on the hull
    // boundary and count as containing.
    let facing: Vec<Option<usize>> = gaps
        .iter()
        .map(|gs| gs.iter().position(|g| 2 * g.steps > n))
        .collect();

    let covers = |b: usize, c: usize| -> bool {
        if b == c {
            return false;
        }
        let probe = blocks[c][0];
        gaps[b]
            .iter()
            .enumerate()
            .any(|(i, g)| Some(i) != facing[b] && g.contains(probe))
    };

    let mut parent = vec![None; k];
    for c in 0..k {
        let covering: Vec<usize> = (0..k).filter(|&b| covers(b, c)).collect();
        if covering.is_empty() {
            continue;
        }
        let innermost: Vec<usize> = covering
            .iter()
            .copied()
            .filter(|&b| covering.iter().all(|&o| o == b || covers(o, b)))
            .collect();
        match innermost[..] {
            [b] => parent[c] = Some(b),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "ambiguous circular nesting for {p}"
                )))
            }
        }
    }
    Ok(NestingForest::from_parents(parent))
}

impl fmt::Display for WeightId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightId::Indicator(fam) => write!(f, "indicator-{fam}"),
            WeightId::Monotone => write!(f, "monotone"),
            WeightId::ModifiedMonotone => write!(f, "modified-monotone"),
            WeightId::CyclicMonotone => write!(f, "cyclic-monotone"),
            WeightId::ModifiedCyclicMonotone => write!(f, "modified-cyclic-monotone"),
            WeightId::QCrossing(q) => write!(f, "q-crossing:{q}"),
            WeightId::ModifiedQCrossing(q) => write!(f, "modified-q-crossing:{q}"),
            WeightId::Singleton => write!(f, "singleton"),
        }
    }
}

impl FromStr for WeightId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let q = || -> Result<Rat> {
            param
                .ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "{name} needs a rational parameter, e.g. {name}:2/3"
                    ))
                })?
                .parse()
        };
        match name.to_ascii_lowercase().as_str() {
            "monotone" => Ok(WeightId::Monotone),
            "modified-monotone" => Ok(WeightId::ModifiedMonotone),
            "cyclic-monotone" => Ok(WeightId::CyclicMonotone),
            "modified-cyclic-monotone" => Ok(WeightId::ModifiedCyclicMonotone),
            "q-crossing" => Ok(WeightId::QCrossing(q()?)),
            "modified-q-crossing" => Ok(WeightId::ModifiedQCrossing(q()?)),
            "singleton" => Ok(WeightId::Singleton),
            other => {
                if let Some(fam) = other.strip_prefix("indicator-") {
                    Ok(WeightId::Indicator(fam.parse()?))
                } else {
                    Err(Error::InvalidInput(format!("unknown weight {s:?}")))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{enumerate, DEFAULT_ENUMERATION_CAP};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn q23() -> Rat {
        Rat::new(2, 3)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(WeightId::Monotone.eval(&p("1,3/2")), Rat::new(1, 2));
        assert_eq!(WeightId::ModifiedMonotone.eval(&p("1,3/2")), Rat::one());
        assert_eq!(
            WeightId::Indicator(FamilyId::Interval).eval(&p("1,3/2")),
            Rat::zero()
        );
        assert_eq!(WeightId::Monotone.eval(&p("1,3/2,4")), Rat::zero());
        for n in 1..=5usize {
            let blocks: Vec<Vec<usize>> = (1..=n).map(|i| vec![i, 2 * n + 1 - i]).collect();
            let nested = Partition::new(2 * n, blocks).unwrap();
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(WeightId::Monotone.eval(&nested), Rat::new(1, fact));
        }
    }

    #[test]
    fn singleton_weight_is_the_discrete_indicator() {
        assert_eq!(WeightId::Singleton.eval(&p("1/2/3")), Rat::one());
        assert_eq!(WeightId::Singleton.eval(&p("1,2/3")), Rat::zero());
        assert_eq!(WeightId::Singleton.eval(&p("1")), Rat::one());
    }

    #[test]
    fn q_crossing_examples() {
        let w = WeightId::QCrossing(q23());
        assert_eq!(w.eval(&p("1,3/2,4")), q23());
        assert_eq!(w.eval(&p("1,2/3,4")), Rat::one());
        assert_eq!(w.eval(&p("1,2,3")), Rat::zero());
        assert_eq!(w.eval(&p("1,2/3")), Rat::zero());

        // q = 1 is identically 1 on pairings; q = 0 keeps non-crossing pairings only
        let all4 = enumerate(FamilyId::All, 4, DEFAULT_ENUMERATION_CAP).unwrap();
        for pi in all4.iter() {
            let pairing = pi.blocks().iter().all(|b| b.len() == 2);
            let at_one = WeightId::QCrossing(Rat::one()).eval(pi);
            assert_eq!(at_one, if pairing { Rat::one() } else { Rat::zero() });
            let at_zero = WeightId::QCrossing(Rat::zero()).eval(pi);
            let expected = pairing && pi.is_noncrossing();
            assert_eq!(at_zero.is_one(), expected, "{pi}");
        }

        let wm = WeightId::ModifiedQCrossing(q23());
        assert_eq!(wm.eval(&p("1,3/2,4")), q23());
        assert_eq!(wm.eval(&p("1,3/2,5/4")), q23());
        assert_eq!(wm.eval(&p("1/2/3")), Rat::one());
        // singleton removal keeps the full block, which is not a pairing
        assert_eq!(wm.eval(&Partition::one(3)), Rat::zero());
    }

    #[test]
    fn classification_examples() {
        let c = WeightId::ModifiedMonotone.classify(6);
        assert!(c.monic && c.invertible);
        assert_eq!(c.support, Some(FamilyId::Noncrossing));

        let c = WeightId::Singleton.classify(6);
        assert!(!c.monic && !c.invertible);
        assert_eq!(c.support, None);
        assert_eq!(c.invertible_orders, vec![1]);

        // the full partition is not a pairing beyond n = 2
        let c = WeightId::QCrossing(q23()).classify(6);
        assert!(!c.invertible);
        assert_eq!(c.invertible_orders, vec![2]);

        // the modified q-crossing weight stays singleton-inductive but is
        // still only invertible where the reduced top block is a pairing
        let c = WeightId::ModifiedQCrossing(q23()).classify(6);
        assert!(!c.monic && !c.invertible);
        assert_eq!(c.invertible_orders, vec![1, 2]);
    }

    #[test]
    fn normalization_at_order_one() {
        for w in WeightId::catalogue(&q23()) {
            let at_one = w.eval(&Partition::one(1));
            if matches!(w, WeightId::QCrossing(_)) {
                // supported on pairings, so the one-element partition gets 0
                assert!(at_one.is_zero());
            } else {
                assert!(at_one.is_one(), "{w}");
            }
        }
    }

    #[test]
    fn modified_monotone_is_one_exactly_on_almost_interval() {
        let cap = DEFAULT_ENUMERATION_CAP;
        for n in 1..=7 {
            for pi in enumerate(FamilyId::Noncrossing, n, cap).unwrap().iter() {
                let is_one = WeightId::ModifiedMonotone.eval(pi).is_one();
                assert_eq!(is_one, FamilyId::AlmostInterval.contains(pi), "{pi}");
            }
        }
    }

    #[test]
    fn monotone_weight_nonzero_exactly_on_noncrossing() {
        let cap = DEFAULT_ENUMERATION_CAP;
        for n in 1..=7 {
            for pi in enumerate(FamilyId::All, n, cap).unwrap().iter() {
                assert_eq!(
                    !WeightId::Monotone.eval(pi).is_zero(),
                    pi.is_noncrossing(),
                    "{pi}"
                );
                assert_eq!(
                    !WeightId::CyclicMonotone.eval(pi).is_zero(),
                    pi.is_noncrossing(),
                    "{pi}"
                );
            }
        }
    }

    /// Restriction of a partition to a window of consecutive positions,
    /// relabelled to start at 1. Only valid when no block leaves the window.
    fn restrict(p: &Partition, lo: usize, hi: usize) -> Partition {
        let blocks: Vec<Vec<usize>> = p
            .blocks()
            .iter()
            .filter(|b| b[0] >= lo && b[b.len() - 1] <= hi)
            .map(|b| b.iter().map(|&e| e - lo + 1).collect())
            .collect();
        Partition::new(hi - lo + 1, blocks).unwrap()
    }

    #[test]
    fn monotone_weight_is_multiplicative_over_interval_closures() {
        let cap = DEFAULT_ENUMERATION_CAP;
        for n in 2..=8 {
            for pi in enumerate(FamilyId::Noncrossing, n, cap).unwrap().iter() {
                // cut wherever no block spans the boundary
                let mut cuts = vec![0];
                for k in 1..n {
                    let spans = pi.blocks().iter().any(|b| b[0] <= k && b[b.len() - 1] > k);
                    if !spans {
                        cuts.push(k);
                    }
                }
                cuts.push(n);
                if cuts.len() == 2 {
                    continue;
                }
                for w in [WeightId::Monotone, WeightId::ModifiedMonotone] {
                    let mut product = Rat::one();
                    for pair in cuts.windows(2) {
                        product = &product * &w.eval(&restrict(pi, pair[0] + 1, pair[1]));
                    }
                    assert_eq!(w.eval(pi), product, "{w} at {pi}");
                }
            }
        }
    }

    #[test]
    fn cyclic_monotone_weight_geometric_spot_checks() {
        // short arcs all border the central region
        assert_eq!(WeightId::CyclicMonotone.eval(&p("1,6/2,3/4,5")), Rat::one());
        assert_eq!(WeightId::CyclicMonotone.eval(&p("1,5,6/2,3/4")), Rat::one());
        // on the circle {2,3} sits beside {1,4}, not inside it
        assert_eq!(WeightId::CyclicMonotone.eval(&p("1,4/2,3")), Rat::one());
        assert_eq!(WeightId::Monotone.eval(&p("1,4/2,3")), Rat::new(1, 2));
        // an arc longer than half the circle wraps around the center and
        // hides everything else behind its chord
        assert_eq!(
            WeightId::CyclicMonotone.eval(&p("1/2,3,4,5")),
            Rat::new(1, 2)
        );
        assert_eq!(
            WeightId::CyclicMonotone.eval(&p("1/2,3,4,5,6/7")),
            Rat::new(1, 3)
        );
        // crossing partitions stay outside the support
        assert_eq!(WeightId::CyclicMonotone.eval(&p("1,3/2,4")), Rat::zero());
    }

    fn rotate(p: &Partition) -> Partition {
        let n = p.n();
        let blocks: Vec<Vec<usize>> = p
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&e| e % n + 1).collect())
            .collect();
        Partition::new(n, blocks).unwrap()
    }

    #[test]
    fn cyclic_monotone_weight_is_rotation_invariant() {
        let cap = DEFAULT_ENUMERATION_CAP;
        for n in 1..=8 {
            for pi in enumerate(FamilyId::Noncrossing, n, cap).unwrap().iter() {
                let w = WeightId::CyclicMonotone.eval(pi);
                assert_eq!(w, WeightId::CyclicMonotone.eval(&rotate(pi)), "{pi}");
            }
        }
    }

    #[test]
    fn cyclic_forest_shapes() {
        // a block whose hull contains the center is the unique root
        let f = cyclic_nesting_forest(&p("1/2,5/3,4/6")).unwrap();
        // blocks sorted by minimum: {1}, {2,5}, {3,4}, {6}; {2,5} is a diameter
        assert_eq!(f.parent(0), Some(1));
        assert_eq!(f.parent(1), None);
        assert_eq!(f.parent(2), Some(1));
        assert_eq!(f.parent(3), Some(1));
        assert_eq!(f.tree_factorial(), 4);

        // arcs hide the blocks lying behind their chords: {1} and {8} sit
        // behind {2,7}, and {4,5} behind {3,6}; the center sees {2,7}, {3,6}
        let f = cyclic_nesting_forest(&p("1/2,7/3,6/4,5/8")).unwrap();
        // blocks: {1}, {2,7}, {3,6}, {4,5}, {8}
        assert_eq!(f.parent(1), None);
        assert_eq!(f.parent(2), None);
        assert_eq!(f.parent(3), Some(2));
        assert_eq!(f.parent(0), Some(1));
        assert_eq!(f.parent(4), Some(1));
        assert_eq!(f.tree_factorial(), 3 * 2);

        // on the circle, {2,3} is not nested inside {1,4}
        let f = cyclic_nesting_forest(&p("1,4/2,3")).unwrap();
        assert_eq!(f.roots().count(), 2);
        assert_eq!(f.tree_factorial(), 1);
    }

    #[test]
    fn weight_names_round_trip() {
        for w in WeightId::catalogue(&q23()) {
            assert_eq!(w.to_string().parse::<WeightId>().unwrap(), w);
        }
        assert!("q-crossing".parse::<WeightId>().is_err());
        assert!("nope".parse::<WeightId>().is_err());
    }
}
