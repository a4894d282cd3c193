//! Set partitions of `{1..n}` and the elementary maps on them.
//!
//! A [`Partition`] stores its blocks in canonical form: every block sorted,
//! blocks ordered by their minimum. The ground set `{1..n}` is implicit in
//! `n`; the empty partition (`n = 0`) is allowed and is the image of an
//! all-singleton partition under [`Partition::remove_singletons`].

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A set partition of `{1..n}` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition of `{1..n}` from a claimed block decomposition,
    /// canonicalizing and validating it.
    pub fn new<I, B>(n: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = usize>,
    {
        let mut seen = vec![false; n + 1];
        let mut canon: Vec<Vec<usize>> = Vec::new();
        for block in blocks {
            let mut b: Vec<usize> = block.into_iter().collect();
            if b.is_empty() {
                return Err(Error::EmptyBlock);
            }
            b.sort_unstable();
            for &e in &b {
                if e == 0 || e > n {
                    return Err(Error::ElementOutOfRange { element: e, n });
                }
                if seen[e] {
                    return Err(Error::OverlappingElement { element: e });
                }
                seen[e] = true;
            }
            canon.push(b);
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(Error::UncoveredElement { element: missing });
        }
        canon.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks: canon })
    }

    /// The empty partition of the empty set.
    pub fn empty() -> Self {
        Partition {
            n: 0,
            blocks: Vec::new(),
        }
    }

    /// The minimum `0_n`: all blocks singletons. `zero(0)` is the empty partition.
    pub fn zero(n: usize) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|e| vec![e]).collect(),
        }
    }

    /// The maximum `1_n`: a single full block. Requires `n >= 1`.
    pub fn one(n: usize) -> Self {
        assert!(n >= 1, "1_n needs a nonempty ground set");
        Partition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    /// Builds a partition from a restricted-growth string (`rgs[i]` is the
    /// block index of element `i + 1`). Trusted fast path for enumeration.
    pub(crate) fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        // restricted growth makes block minima already increasing
        Partition {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `true` iff every block is a singleton (includes the empty partition).
    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Block index of each element: `block_of[e - 1]` for `e in 1..=n`.
    pub fn block_of(&self) -> Vec<usize> {
        let mut idx = vec![0usize; self.n];
        for (i, block) in self.blocks.iter().enumerate() {
            for &e in block {
                idx[e - 1] = i;
            }
        }
        idx
    }

    /// Linear non-crossing test: scan left to right keeping a stack of open
    /// blocks; a block reopening while not on top witnesses a crossing.
    pub fn is_noncrossing(&self) -> bool {
        let block_of = self.block_of();
        let mut remaining: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        let mut open: Vec<bool> = vec![false; self.blocks.len()];
        let mut stack: Vec<usize> = Vec::new();
        for e in 0..self.n {
            let b = block_of[e];
            if stack.last() == Some(&b) {
                // continuing the top block
            } else if open[b] {
                return false;
            } else {
                open[b] = true;
                stack.push(b);
            }
            remaining[b] -= 1;
            if remaining[b] == 0 {
                stack.pop();
            }
        }
        true
    }

    /// `true` iff every block is a run of consecutive integers.
    pub fn is_interval(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
    }

    /// `true` iff every block is an arc when `1..n` is placed on a circle
    /// (so `n` and `1` count as consecutive). Vacuously true for `n <= 2`.
    pub fn is_cyclic_interval(&self) -> bool {
        self.blocks.iter().all(|b| {
            // a sorted block is a cyclic arc iff at most one of its cyclic
            // gaps (consecutive differences plus the wrap gap) exceeds 1
            let inner_breaks = b.windows(2).filter(|w| w[1] != w[0] + 1).count();
            let wrap_break = usize::from(b[0] + self.n - b[b.len() - 1] != 1);
            inner_breaks + wrap_break <= 1
        })
    }

    /// Deletes all singleton blocks and relabels the survivors
    /// order-isomorphically. An all-singleton partition maps to the empty
    /// partition of the empty set.
    pub fn remove_singletons(&self) -> Partition {
        let survivors: Vec<&Vec<usize>> = self.blocks.iter().filter(|b| b.len() > 1).collect();
        let mut kept: Vec<usize> = survivors.iter().flat_map(|b| b.iter().copied()).collect();
        kept.sort_unstable();
        let rank = |e: usize| kept.binary_search(&e).unwrap() + 1;
        let blocks: Vec<Vec<usize>> = survivors
            .iter()
            .map(|b| b.iter().map(|&e| rank(e)).collect())
            .collect();
        Partition {
            n: kept.len(),
            blocks,
        }
    }

    /// Inserts a singleton `{r}` at position `r`, shifting the rest: the map
    /// from partitions of `{1..n}` to partitions of `{1..n+1}` whose image is
    /// the sub-poset of partitions with `{r}` a singleton.
    pub fn insert_singleton(&self, r: usize) -> Result<Partition> {
        if r == 0 || r > self.n + 1 {
            return Err(Error::PositionOutOfRange { r, max: self.n + 1 });
        }
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| if e >= r { e + 1 } else { e }).collect())
            .collect();
        blocks.push(vec![r]);
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition {
            n: self.n + 1,
            blocks,
        })
    }

    /// Number of crossings: quadruples `a<b<c<d` with `a,c` in one block and
    /// `b,d` in another. Plain quadruple scan; `n` stays small here.
    pub fn crossing_count(&self) -> usize {
        let block_of = self.block_of();
        let mut count = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                if block_of[b] == block_of[a] {
                    continue;
                }
                for c in b + 1..self.n {
                    if block_of[c] != block_of[a] {
                        continue;
                    }
                    for d in c + 1..self.n {
                        if block_of[d] == block_of[b] {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    /// Nesting forest of a non-crossing partition: the parent of a block is
    /// the inclusion-minimal block strictly nesting it; outer blocks are roots.
    pub fn nesting_forest(&self) -> Result<NestingForest> {
        if !self.is_noncrossing() {
            return Err(Error::CrossingPartition {
                partition: self.to_string(),
            });
        }
        let spans: Vec<(usize, usize)> = self
            .blocks
            .iter()
            .map(|b| (b[0], b[b.len() - 1]))
            .collect();
        let parent: Vec<Option<usize>> = spans
            .iter()
            .map(|&(lo, hi)| {
                spans
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(plo, phi))| plo < lo && hi < phi)
                    .max_by_key(|&(_, &(plo, _))| plo)
                    .map(|(j, _)| j)
            })
            .collect();
        Ok(NestingForest::from_parents(parent))
    }
}

/// The nesting forest of a non-crossing partition: one node per block,
/// edges from a block to the blocks directly nested inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingForest {
    parent: Vec<Option<usize>>,
    subtree_size: Vec<usize>,
}

impl NestingForest {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Self {
        let k = parent.len();
        let mut subtree_size = vec![1usize; k];
        // accumulate sizes bottom-up; parents always have smaller span minima,
        // so repeated passes over reverse topological order terminate
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(depth(&parent, v)));
        for &v in &order {
            if let Some(p) = parent[v] {
                subtree_size[p] += subtree_size[v];
            }
        }
        NestingForest {
            parent,
            subtree_size,
        }
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn subtree_size(&self, node: usize) -> usize {
        self.subtree_size[node]
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.parent[v].is_none())
    }

    /// Product over nodes of their subtree sizes. Equals 1 exactly when the
    /// forest has no nesting at all.
    pub fn tree_factorial(&self) -> u64 {
        self.subtree_size.iter().map(|&s| s as u64).product()
    }
}

fn depth(parent: &[Option<usize>], mut v: usize) -> usize {
    let mut d = 0;
    while let Some(p) = parent[v] {
        d += 1;
        v = p;
    }
    d
}

impl fmt::Display for Partition {
    /// Text format: blocks as comma-separated lists joined by `/`,
    /// e.g. `1,3/2,4`. The empty partition prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for block in &self.blocks {
            if !first {
                write!(f, "/")?;
            }
            first = false;
            let parts: Vec<String> = block.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for group in s.split('/') {
            let mut block = Vec::new();
            for item in group.split(',') {
                let e: usize = item.trim().parse().map_err(|_| Error::ParseError {
                    text: s.to_string(),
                    reason: format!("{item:?} is not a positive integer"),
                })?;
                block.push(e);
            }
            blocks.push(block);
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::new(n, blocks)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn construction_canonicalizes() {
        let part = Partition::new(4, vec![vec![4, 2], vec![3, 1]]).unwrap();
        assert_eq!(part.to_string(), "1,3/2,4");
        assert_eq!(part.num_blocks(), 2);
    }

    #[test]
    fn construction_rejects_overlap_gap_and_range() {
        assert_eq!(
            Partition::new(3, vec![vec![1, 2], vec![2, 3]]),
            Err(Error::OverlappingElement { element: 2 })
        );
        assert_eq!(
            Partition::new(2, vec![vec![1]]),
            Err(Error::UncoveredElement { element: 2 })
        );
        assert_eq!(
            Partition::new(2, vec![vec![1, 2, 5]]),
            Err(Error::ElementOutOfRange { element: 5, n: 2 })
        );
        assert_eq!(
            Partition::new(1, vec![vec![1], vec![]]),
            Err(Error::EmptyBlock)
        );
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["1,3/2,4", "1,2,3", "1/2/3", ""] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("1,x/2".parse::<Partition>().is_err());
    }

    #[test]
    fn noncrossing_examples() {
        assert!(!p("1,3/2,4").is_noncrossing());
        assert!(p("1,4/2,3").is_noncrossing());
        assert!(p("1,5,6/2,3/4").is_noncrossing());
        assert!(p("1,3/2").is_noncrossing());
        assert!(Partition::empty().is_noncrossing());
    }

    #[test]
    fn interval_examples() {
        assert!(p("1,2/3").is_interval());
        assert!(!p("1,3/2").is_interval());
        assert!(p("1,2,3,4").is_interval());
    }

    #[test]
    fn cyclic_interval_examples() {
        assert!(p("1,5,6/2,3/4").is_cyclic_interval());
        assert!(!p("1,3/2,4").is_cyclic_interval());
        assert!(!p("1,3/2/4").is_cyclic_interval());
        assert!(p("1,4/2,3").is_cyclic_interval());
        // every interval partition is cyclic-interval
        assert!(p("1,2/3,4/5").is_cyclic_interval());
        // n = 1, 2: everything qualifies
        assert!(p("1/2").is_cyclic_interval());
        assert!(p("1,2").is_cyclic_interval());
        assert!(p("1").is_cyclic_interval());
    }

    #[test]
    fn remove_singletons_examples() {
        assert_eq!(p("1,4/2/3,6/5").remove_singletons(), p("1,3/2,4"));
        assert_eq!(p("1,2,3").remove_singletons(), p("1,2,3"));
        assert_eq!(p("1/2/3").remove_singletons(), Partition::empty());
    }

    #[test]
    fn insert_singleton_examples() {
        let pi = p("1,3/2,4");
        assert_eq!(pi.insert_singleton(1).unwrap(), p("1/2,4/3,5"));
        assert_eq!(pi.insert_singleton(3).unwrap(), p("1,4/2,5/3"));
        assert_eq!(pi.insert_singleton(5).unwrap(), p("1,3/2,4/5"));
        assert!(pi.insert_singleton(6).is_err());
        assert!(pi.insert_singleton(0).is_err());
    }

    #[test]
    fn crossing_count_examples() {
        assert_eq!(p("1,3/2,4").crossing_count(), 1);
        assert_eq!(p("1,4/2,3").crossing_count(), 0);
        assert_eq!(p("1,4/2/3,6/5").remove_singletons().crossing_count(), 1);
        assert_eq!(p("1,4/2/3,6/5").crossing_count(), 1);
    }

    #[test]
    fn nesting_forest_shapes() {
        let f = p("1,4/2,3").nesting_forest().unwrap();
        assert_eq!(f.parent(0), None);
        assert_eq!(f.parent(1), Some(0));
        assert_eq!(f.tree_factorial(), 2);

        let f = p("1,2/3,4").nesting_forest().unwrap();
        assert_eq!(f.roots().count(), 2);
        assert_eq!(f.tree_factorial(), 1);

        // fully nested chain {1,2n},{2,2n-1},...,{n,n+1} has factorial n!
        for n in 1..=6usize {
            let blocks: Vec<Vec<usize>> = (1..=n).map(|i| vec![i, 2 * n + 1 - i]).collect();
            let pi = Partition::new(2 * n, blocks).unwrap();
            let f = pi.nesting_forest().unwrap();
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(f.tree_factorial(), fact);
        }

        let f = p("1,6/2,3/4,5").nesting_forest().unwrap();
        assert_eq!(f.tree_factorial(), 3);

        assert!(p("1,3/2,4").nesting_forest().is_err());
    }

    /// Independent oracle for the tree factorial: by the hook length formula
    /// for forests, (number of blocks)! / (product of subtree sizes) counts
    /// the orderings of the blocks in which parents precede children.
    fn count_parent_first_orders(f: &NestingForest) -> u64 {
        fn rec(f: &NestingForest, placed: &mut Vec<bool>, remaining: usize) -> u64 {
            if remaining == 0 {
                return 1;
            }
            let mut total = 0;
            for v in 0..f.len() {
                let ready = !placed[v] && f.parent(v).map_or(true, |p| placed[p]);
                if ready {
                    placed[v] = true;
                    total += rec(f, placed, remaining - 1);
                    placed[v] = false;
                }
            }
            total
        }
        rec(f, &mut vec![false; f.len()], f.len())
    }

    #[test]
    fn tree_factorial_agrees_with_linear_extension_count() {
        for s in ["1,6/2,3/4,5", "1,4/2,3", "1,2/3,4", "1,8/2,5/3,4/6,7", "1,2,9/3,4/5,8/6,7"] {
            let pi = p(s);
            let f = pi.nesting_forest().unwrap();
            let k = f.len() as u64;
            let fact: u64 = (1..=k).product();
            assert_eq!(f.tree_factorial() * count_parent_first_orders(&f), fact, "{s}");
        }
    }

    fn arb_partition(max_n: usize) -> impl Strategy<Value = Partition> {
        (1..=max_n)
            .prop_flat_map(|n| proptest::collection::vec(0..n, n))
            .prop_map(|raw| {
                // normalize to a restricted-growth string
                let mut map: Vec<Option<usize>> = vec![None; raw.len()];
                let mut next = 0;
                let rgs: Vec<usize> = raw
                    .iter()
                    .map(|&v| {
                        *map[v].get_or_insert_with(|| {
                            let id = next;
                            next += 1;
                            id
                        })
                    })
                    .collect();
                Partition::from_rgs(&rgs)
            })
    }

    proptest! {
        #[test]
        fn removing_singletons_commutes_with_insertion(pi in arb_partition(7), r in 1usize..=8) {
            prop_assume!(r <= pi.n() + 1);
            let inserted = pi.insert_singleton(r).unwrap();
            prop_assert_eq!(inserted.remove_singletons(), pi.remove_singletons());
        }

        #[test]
        fn insertion_preserves_crossings(pi in arb_partition(7), r in 1usize..=8) {
            prop_assume!(r <= pi.n() + 1);
            let inserted = pi.insert_singleton(r).unwrap();
            prop_assert_eq!(inserted.crossing_count(), pi.crossing_count());
            prop_assert_eq!(inserted.is_noncrossing(), pi.is_noncrossing());
        }

        #[test]
        fn family_inclusions(pi in arb_partition(8)) {
            if pi.is_interval() {
                prop_assert!(pi.is_cyclic_interval());
            }
            if pi.is_cyclic_interval() {
                prop_assert!(pi.is_noncrossing());
            }
        }

        #[test]
        fn crossing_count_zero_iff_noncrossing(pi in arb_partition(8)) {
            prop_assert_eq!(pi.crossing_count() == 0, pi.is_noncrossing());
        }

        #[test]
        fn tree_factorial_one_iff_interval(pi in arb_partition(8)) {
            prop_assume!(pi.is_noncrossing());
            let f = pi.nesting_forest().unwrap();
            prop_assert_eq!(f.tree_factorial() == 1, pi.is_interval());
        }

        #[test]
        fn parse_display_round_trip(pi in arb_partition(8)) {
            let text = pi.to_string();
            prop_assert_eq!(text.parse::<Partition>().unwrap(), pi);
        }
    }
}
