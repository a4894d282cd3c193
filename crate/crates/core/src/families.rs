//! The six partition families: all partitions `P`, non-crossing `NC`,
//! interval `I`, cyclic-interval `CI`, and the almost-interval variants
//! obtained by ignoring singletons in the interval condition.
//!
//! One trusted generator (restricted-growth strings) produces `P(n)`; every
//! family is a predicate filter over it. Filtered enumerations are cached
//! per `(family, n)` when small enough to keep around.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Default bound on the ground-set size accepted by enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 13;

/// Identifier of a partition family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    All,
    Noncrossing,
    Interval,
    CyclicInterval,
    AlmostInterval,
    AlmostCyclicInterval,
}

impl FamilyId {
    pub const ALL_FAMILIES: [FamilyId; 6] = [
        FamilyId::All,
        FamilyId::Noncrossing,
        FamilyId::Interval,
        FamilyId::CyclicInterval,
        FamilyId::AlmostInterval,
        FamilyId::AlmostCyclicInterval,
    ];

    /// Membership predicate. The almost-* families are the non-crossing
    /// partitions whose singleton-removal lands in the base family.
    pub fn contains(self, p: &Partition) -> bool {
        match self {
            FamilyId::All => true,
            FamilyId::Noncrossing => p.is_noncrossing(),
            FamilyId::Interval => p.is_interval(),
            FamilyId::CyclicInterval => p.is_cyclic_interval(),
            FamilyId::AlmostInterval => {
                p.is_noncrossing() && p.remove_singletons().is_interval()
            }
            FamilyId::AlmostCyclicInterval => {
                p.is_noncrossing() && p.remove_singletons().is_cyclic_interval()
            }
        }
    }

    /// Closed-form cardinality where one is known: `|I(n)| = 2^(n-1)`,
    /// `|CI(n)| = 2^n - n`, `|AI(n)| = F_(2n-1)`, Catalan for `NC`, Bell
    /// for `P`. The almost-cyclic-interval family has none.
    pub fn closed_form_count(self, n: usize) -> Option<u64> {
        if n == 0 {
            return Some(1);
        }
        match self {
            FamilyId::All => Some(bell(n)),
            FamilyId::Noncrossing => Some(catalan(n)),
            FamilyId::Interval => Some(1u64 << (n - 1)),
            FamilyId::CyclicInterval => Some((1u64 << n) - n as u64),
            FamilyId::AlmostInterval => Some(fibonacci(2 * n - 1)),
            FamilyId::AlmostCyclicInterval => None,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FamilyId::All => "all",
            FamilyId::Noncrossing => "nc",
            FamilyId::Interval => "interval",
            FamilyId::CyclicInterval => "cyclic-interval",
            FamilyId::AlmostInterval => "almost-interval",
            FamilyId::AlmostCyclicInterval => "almost-cyclic-interval",
        };
        write!(f, "{name}")
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" | "p" => Ok(FamilyId::All),
            "nc" | "noncrossing" | "non-crossing" => Ok(FamilyId::Noncrossing),
            "i" | "interval" => Ok(FamilyId::Interval),
            "ci" | "cyclic-interval" => Ok(FamilyId::CyclicInterval),
            "ai" | "almost-interval" => Ok(FamilyId::AlmostInterval),
            "aci" | "almost-cyclic-interval" => Ok(FamilyId::AlmostCyclicInterval),
            other => Err(Error::InvalidInput(format!("unknown family {other:?}"))),
        }
    }
}

/// Visits every partition of `{1..n}` exactly once, in restricted-growth
/// string order. `n = 0` visits the empty partition once.
pub fn for_each_partition<F: FnMut(&Partition)>(n: usize, mut visit: F) {
    if n == 0 {
        visit(&Partition::empty());
        return;
    }
    let mut rgs = vec![0usize; n];
    loop {
        visit(&Partition::from_rgs(&rgs));
        // advance to the next restricted-growth string
        let mut i = n - 1;
        loop {
            let max_prefix = rgs[..i].iter().copied().max().map_or(0, |m| m + 1);
            if i > 0 && rgs[i] < max_prefix {
                rgs[i] += 1;
                for v in rgs.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                break;
            }
            if i == 0 {
                return;
            }
            i -= 1;
        }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::SizeCapExceeded { n, cap });
    }
    Ok(())
}

type Cache = Mutex<HashMap<(FamilyId, usize), Arc<Vec<Partition>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

// cache entries above this length are rebuilt on demand instead of retained
const CACHE_MEMBER_LIMIT: usize = 120_000;

/// All members of the family on `{1..n}`, each exactly once, sorted
/// lexicographically on the canonical block form.
pub fn enumerate(family: FamilyId, n: usize, cap: usize) -> Result<Arc<Vec<Partition>>> {
    check_cap(n, cap)?;
    if let Some(hit) = cache().lock().unwrap().get(&(family, n)) {
        return Ok(Arc::clone(hit));
    }
    let mut members = Vec::new();
    for_each_partition(n, |p| {
        if family.contains(p) {
            members.push(p.clone());
        }
    });
    members.sort_unstable();
    let members = Arc::new(members);
    if members.len() <= CACHE_MEMBER_LIMIT {
        cache()
            .lock()
            .unwrap()
            .insert((family, n), Arc::clone(&members));
    }
    Ok(members)
}

/// Number of members of the family on `{1..n}`; streams the generator, so
/// it works at sizes where materializing `P(n)` would not. One pass counts
/// all six families and the row is cached per `n`.
pub fn cardinality(family: FamilyId, n: usize, cap: usize) -> Result<u64> {
    let idx = FamilyId::ALL_FAMILIES
        .iter()
        .position(|&f| f == family)
        .expect("catalogued family");
    Ok(family_counts(n, cap)?[idx])
}

/// Member counts of all six families on `{1..n}`, in the order of
/// [`FamilyId::ALL_FAMILIES`], from a single generator pass.
pub fn family_counts(n: usize, cap: usize) -> Result<[u64; 6]> {
    check_cap(n, cap)?;
    static ROWS: OnceLock<Mutex<HashMap<usize, [u64; 6]>>> = OnceLock::new();
    let rows = ROWS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = rows.lock().unwrap().get(&n) {
        return Ok(*hit);
    }
    let mut counts = [0u64; 6];
    for_each_partition(n, |p| {
        for (i, family) in FamilyId::ALL_FAMILIES.iter().enumerate() {
            if family.contains(p) {
                counts[i] += 1;
            }
        }
    });
    rows.lock().unwrap().insert(n, counts);
    Ok(counts)
}

/// Bell number `B_n` (partitions of an n-set) via the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

/// Catalan number `C_n`.
pub fn catalan(n: usize) -> u64 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c as u64
}

/// Fibonacci number `F_k` with `F_1 = F_2 = 1`.
pub fn fibonacci(k: usize) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 2..k {
        let next = a + b;
        a = b;
        b = next;
    }
    if k <= 2 {
        1
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn generator_counts_match_bell() {
        for n in 0..=9 {
            let mut count = 0u64;
            for_each_partition(n, |_| count += 1);
            assert_eq!(count, bell(n), "n={n}");
        }
    }

    #[test]
    fn generator_yields_distinct_canonical_partitions() {
        let mut seen = std::collections::HashSet::new();
        for_each_partition(6, |p| {
            assert!(seen.insert(p.clone()), "duplicate {p}");
        });
        assert_eq!(seen.len(), bell(6) as usize);
    }

    #[test]
    fn enumerate_examples() {
        let cap = DEFAULT_ENUMERATION_CAP;
        assert_eq!(enumerate(FamilyId::Interval, 4, cap).unwrap().len(), 8);
        assert_eq!(enumerate(FamilyId::CyclicInterval, 3, cap).unwrap().len(), 5);
        assert_eq!(enumerate(FamilyId::AlmostInterval, 5, cap).unwrap().len(), 34);
        assert_eq!(enumerate(FamilyId::All, 4, cap).unwrap().len(), 15);
        assert_eq!(enumerate(FamilyId::Noncrossing, 4, cap).unwrap().len(), 14);
        assert_eq!(enumerate(FamilyId::AlmostInterval, 6, cap).unwrap().len(), 89);
    }

    #[test]
    fn membership_examples() {
        assert!(!FamilyId::AlmostInterval.contains(&p("1,4/2,3")));
        assert!(FamilyId::AlmostInterval.contains(&p("1,3/2")));
        assert!(!FamilyId::Noncrossing.contains(&p("1,3/2,4")));
        assert!(FamilyId::AlmostCyclicInterval.contains(&p("1,4/2,3")));
    }

    #[test]
    fn enumeration_agrees_with_membership_filter() {
        let cap = DEFAULT_ENUMERATION_CAP;
        for n in 1..=6 {
            let all = enumerate(FamilyId::All, n, cap).unwrap();
            for family in FamilyId::ALL_FAMILIES {
                let filtered: Vec<_> = all
                    .iter()
                    .filter(|p| family.contains(p))
                    .cloned()
                    .collect();
                let members = enumerate(family, n, cap).unwrap();
                assert_eq!(*members.as_slice(), filtered[..], "{family} at n={n}");
            }
        }
    }

    #[test]
    fn closed_forms_match_enumeration() {
        let cap = DEFAULT_ENUMERATION_CAP;
        for n in 1..=8 {
            for family in FamilyId::ALL_FAMILIES {
                if let Some(expected) = family.closed_form_count(n) {
                    assert_eq!(
                        cardinality(family, n, cap).unwrap(),
                        expected,
                        "{family} at n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn almost_interval_fibonacci_class_decomposition() {
        // classify members by the first right-neighbor of 1: the classes have
        // cardinalities |AI(m-1)|, |AI(m-1)|, |AI(m-2)|, ..., |AI(1)|
        let cap = DEFAULT_ENUMERATION_CAP;
        for m in 3..=8usize {
            let members = enumerate(FamilyId::AlmostInterval, m, cap).unwrap();
            let mut class_sizes = vec![0u64; m + 2];
            for pi in members.iter() {
                let block_of_one = pi
                    .blocks()
                    .iter()
                    .find(|b| b.contains(&1))
                    .expect("1 is covered");
                if block_of_one.len() == 1 {
                    class_sizes[1] += 1;
                } else {
                    class_sizes[block_of_one[1]] += 1;
                }
            }
            assert_eq!(class_sizes[1], cardinality(FamilyId::AlmostInterval, m - 1, cap).unwrap());
            for r in 2..=m {
                assert_eq!(
                    class_sizes[r],
                    cardinality(FamilyId::AlmostInterval, m + 1 - r, cap).unwrap(),
                    "class r={r} at m={m}"
                );
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate(FamilyId::All, 14, DEFAULT_ENUMERATION_CAP),
            Err(Error::SizeCapExceeded { n: 14, cap: 13 })
        ));
    }

    #[test]
    fn family_names_round_trip() {
        for family in FamilyId::ALL_FAMILIES {
            assert_eq!(family.to_string().parse::<FamilyId>().unwrap(), family);
        }
    }
}
