//! Reverse-refinement order on partitions, meets/joins inside a family,
//! Möbius functions on family sub-posets, Weisner sums, and the
//! singleton-inductivity checks for families and weights.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::Rat;
use crate::error::{Error, Result};
use crate::families::{self, FamilyId};
use crate::partition::Partition;
use crate::weights::WeightId;

/// `true` iff every block of `finer` is contained in a block of `coarser`
/// (reverse refinement: `finer <= coarser`).
pub fn leq(finer: &Partition, coarser: &Partition) -> Result<bool> {
    if finer.n() != coarser.n() {
        return Err(Error::GroundSetMismatch {
            left: finer.n(),
            right: coarser.n(),
        });
    }
    let block_of = coarser.block_of();
    Ok(finer
        .blocks()
        .iter()
        .all(|b| b.iter().all(|&e| block_of[e - 1] == block_of[b[0] - 1])))
}

/// Join in the full partition lattice: transitive closure of the union of
/// block structures (union-find over elements).
pub fn join_all(a: &Partition, b: &Partition) -> Result<Partition> {
    if a.n() != b.n() {
        return Err(Error::GroundSetMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let n = a.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for p in [a, b] {
        for block in p.blocks() {
            for w in block.windows(2) {
                let (x, y) = (find(&mut parent, w[0] - 1), find(&mut parent, w[1] - 1));
                if x != y {
                    parent[x] = y;
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in 0..n {
        groups.entry(find(&mut parent, e)).or_default().push(e + 1);
    }
    Partition::new(n, groups.into_values())
}

/// Meet in the full partition lattice: blockwise intersections.
pub fn meet_all(a: &Partition, b: &Partition) -> Result<Partition> {
    if a.n() != b.n() {
        return Err(Error::GroundSetMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let (ba, bb) = (a.block_of(), b.block_of());
    let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for e in 1..=a.n() {
        groups.entry((ba[e - 1], bb[e - 1])).or_default().push(e);
    }
    Partition::new(a.n(), groups.into_values())
}

/// An interval `[lower, upper]` inside a family sub-poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetInterval {
    pub family: FamilyId,
    pub lower: Partition,
    pub upper: Partition,
}

impl PosetInterval {
    pub fn new(family: FamilyId, lower: Partition, upper: Partition) -> Result<Self> {
        if !leq(&lower, &upper)? {
            return Err(Error::NotComparable {
                lower: lower.to_string(),
                upper: upper.to_string(),
            });
        }
        for p in [&lower, &upper] {
            if !family.contains(p) {
                return Err(Error::InvalidInput(format!("{p} is not in {family}")));
            }
        }
        Ok(PosetInterval {
            family,
            lower,
            upper,
        })
    }
}

/// A family's members on a fixed ground set with the full order relation
/// precomputed; the workhorse behind Möbius, join and Weisner queries.
pub struct FamilyPoset {
    family: FamilyId,
    n: usize,
    members: std::sync::Arc<Vec<Partition>>,
    index: HashMap<Partition, usize>,
    below: Vec<Vec<bool>>, // below[i][j] <=> members[j] <= members[i]
}

impl FamilyPoset {
    pub fn new(family: FamilyId, n: usize, cap: usize) -> Result<Self> {
        let members = families::enumerate(family, n, cap)?;
        let m = members.len();
        let index: HashMap<Partition, usize> = members
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut below = vec![vec![false; m]; m];
        for (i, upper) in members.iter().enumerate() {
            let block_of = upper.block_of();
            for (j, lower) in members.iter().enumerate() {
                below[i][j] = lower
                    .blocks()
                    .iter()
                    .all(|b| b.iter().all(|&e| block_of[e - 1] == block_of[b[0] - 1]));
            }
        }
        Ok(FamilyPoset {
            family,
            n,
            members,
            index,
            below,
        })
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn ground_set_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &Partition {
        &self.members[i]
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn leq_idx(&self, lower: usize, upper: usize) -> bool {
        self.below[upper][lower]
    }

    pub fn bottom(&self) -> usize {
        self.index_of(&Partition::zero(self.n))
            .expect("0_n belongs to every family")
    }

    pub fn top(&self) -> usize {
        self.index_of(&Partition::one(self.n))
            .expect("1_n belongs to every family")
    }

    /// Möbius function on the sub-poset, by the standard recursion
    /// `mu(x,x) = 1`, `mu(x,y) = -sum_(x <= z < y) mu(x,z)`.
    pub fn moebius_idx(&self, lower: usize, upper: usize) -> Result<i64> {
        if !self.leq_idx(lower, upper) {
            return Err(Error::NotComparable {
                lower: self.members[lower].to_string(),
                upper: self.members[upper].to_string(),
            });
        }
        Ok(self.moebius_row(lower)[upper])
    }

    /// `mu(lower, z)` for every `z` above `lower` (0 for incomparable `z`),
    /// computed in one upward sweep.
    pub fn moebius_row(&self, lower: usize) -> Vec<i64> {
        let m = self.len();
        let mut up: Vec<usize> = (0..m).filter(|&z| self.leq_idx(lower, z)).collect();
        up.sort_by_key(|&z| self.members[z].num_blocks());
        up.reverse(); // finer elements first
        let mut mu = vec![0i64; m];
        for (pos, &z) in up.iter().enumerate() {
            if z == lower {
                mu[z] = 1;
                continue;
            }
            let mut acc: i64 = 0;
            for &w in &up[..pos] {
                if w != z && self.leq_idx(w, z) {
                    acc = acc.checked_add(mu[w]).expect("moebius sum overflow");
                }
            }
            mu[z] = -acc;
        }
        mu
    }

    /// `mu(z, top)` for every `z`, in one downward sweep.
    pub fn moebius_to_top(&self) -> Vec<i64> {
        let m = self.len();
        let top = self.top();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&z| self.members[z].num_blocks()); // coarser first
        let mut mu = vec![0i64; m];
        for (pos, &z) in order.iter().enumerate() {
            if z == top {
                mu[z] = 1;
                continue;
            }
            if !self.leq_idx(z, top) {
                continue;
            }
            let mut acc: i64 = 0;
            for &w in &order[..pos] {
                if w != z && self.leq_idx(z, w) {
                    acc = acc.checked_add(mu[w]).expect("moebius sum overflow");
                }
            }
            mu[z] = -acc;
        }
        mu
    }

    /// Least upper bound inside the family, when it exists and is unique.
    pub fn join_idx(&self, a: usize, b: usize) -> Result<usize> {
        self.unique_extremum(a, b, true)
    }

    /// Greatest lower bound inside the family, when it exists and is unique.
    pub fn meet_idx(&self, a: usize, b: usize) -> Result<usize> {
        self.unique_extremum(a, b, false)
    }

    fn unique_extremum(&self, a: usize, b: usize, upper: bool) -> Result<usize> {
        let m = self.len();
        let mut bounds: Vec<usize> = (0..m)
            .filter(|&k| {
                if upper {
                    self.leq_idx(a, k) && self.leq_idx(b, k)
                } else {
                    self.leq_idx(k, a) && self.leq_idx(k, b)
                }
            })
            .collect();
        // visiting bounds from the extremal side keeps the accepted list tiny
        bounds.sort_by_key(|&k| {
            let blocks = self.members[k].num_blocks();
            if upper {
                std::cmp::Reverse(blocks)
            } else {
                std::cmp::Reverse(usize::MAX - blocks)
            }
        });
        let mut extremal: Vec<usize> = Vec::new();
        for &k in &bounds {
            let dominated = extremal.iter().any(|&l| {
                if upper {
                    self.leq_idx(l, k)
                } else {
                    self.leq_idx(k, l)
                }
            });
            if !dominated {
                extremal.push(k);
            }
        }
        match extremal[..] {
            [k] => Ok(k),
            _ => Err(Error::NotALattice {
                family: self.family.to_string(),
                left: self.members[a].to_string(),
                right: self.members[b].to_string(),
                count: extremal.len(),
            }),
        }
    }

    /// Whether every pair has a unique join and meet inside the family.
    pub fn is_lattice(&self) -> bool {
        let m = self.len();
        for a in 0..m {
            for b in a + 1..m {
                if self.join_idx(a, b).is_err() || self.meet_idx(a, b).is_err() {
                    return false;
                }
            }
        }
        true
    }

    /// Cover relations of the sub-poset Hasse diagram, as (lower, upper).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let m = self.len();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i == j || !self.leq_idx(i, j) {
                    continue;
                }
                let intermediate = (0..m)
                    .any(|k| k != i && k != j && self.leq_idx(i, k) && self.leq_idx(k, j));
                if !intermediate {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// The order relation as an abstract poset, forgetting the partitions.
    pub fn abstract_poset(&self) -> AbstractPoset {
        let m = self.len();
        let mut rel = vec![vec![false; m]; m];
        for (i, row) in rel.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.leq_idx(i, j);
            }
        }
        AbstractPoset { leq: rel }
    }

    /// Graphviz rendering of the Hasse diagram, edges pointing upward.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
        for p in self.members.iter() {
            out.push_str(&format!("  \"{p}\";\n"));
        }
        for (lo, hi) in self.covers() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.members[lo], self.members[hi]
            ));
        }
        out.push_str("}\n");
        out
    }

    /// Weisner sum for `sigma != 0_n`: `sum of mu(0, pi) over pi with
    /// pi v sigma = 1_n`, together with the contributing partitions.
    pub fn weisner_sum(&self, sigma: &Partition) -> Result<(i64, Vec<Partition>)> {
        let s = self
            .index_of(sigma)
            .ok_or_else(|| Error::InvalidInput(format!("{sigma} is not in {}", self.family)))?;
        if sigma.is_discrete() {
            return Err(Error::InvalidInput(
                "Weisner's lemma needs sigma above the bottom".into(),
            ));
        }
        let mu = self.moebius_row(self.bottom());
        let top = self.top();
        let mut sum: i64 = 0;
        let mut contributors = Vec::new();
        for pi in 0..self.len() {
            if self.join_idx(pi, s)? == top {
                sum = sum.checked_add(mu[pi]).expect("weisner sum overflow");
                contributors.push(self.members[pi].clone());
            }
        }
        Ok((sum, contributors))
    }
}

/// Möbius value on an interval of a family sub-poset.
pub fn moebius(interval: &PosetInterval, cap: usize) -> Result<i64> {
    let poset = FamilyPoset::new(interval.family, interval.upper.n(), cap)?;
    let lo = poset.index_of(&interval.lower).expect("member checked");
    let hi = poset.index_of(&interval.upper).expect("member checked");
    poset.moebius_idx(lo, hi)
}

/// Möbius value on the full interval `[0_n, 1_n]` of a family.
pub fn moebius_full(family: FamilyId, n: usize, cap: usize) -> Result<i64> {
    let poset = FamilyPoset::new(family, n, cap)?;
    poset.moebius_idx(poset.bottom(), poset.top())
}

/// Checks Weisner's lemma at one `sigma`: the sum vanishes.
pub fn weisner_check(family: FamilyId, n: usize, sigma: &Partition, cap: usize) -> Result<bool> {
    let poset = FamilyPoset::new(family, n, cap)?;
    let (sum, _) = poset.weisner_sum(sigma)?;
    Ok(sum == 0)
}

/// Outcome of a singleton-inductivity scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiReport {
    pub subject: String,
    pub holds: bool,
    pub max_n_checked: usize,
    pub witness: Option<SiWitness>,
}

/// A concrete violation: inserting a singleton at `position` into
/// `partition` (living on `n` elements) broke the property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SiWitness {
    pub n: usize,
    pub position: usize,
    pub partition: Partition,
    pub inserted: Partition,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_before: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_after: Option<Rat>,
}

/// Checks that singleton insertion is an order-isomorphism from the family
/// on `n` elements onto the sub-poset of members with that singleton, for
/// every `n < n_max` and every insertion position.
pub fn si_check_family(family: FamilyId, n_max: usize, cap: usize) -> Result<SiReport> {
    for n in 1..n_max {
        let small = families::enumerate(family, n, cap)?;
        let large = families::enumerate(family, n + 1, cap)?;
        for r in 1..=n + 1 {
            // forward: the family is closed under inserting the singleton
            for pi in small.iter() {
                let image = pi.insert_singleton(r)?;
                if !family.contains(&image) {
                    return Ok(SiReport {
                        subject: family.to_string(),
                        holds: false,
                        max_n_checked: n_max,
                        witness: Some(SiWitness {
                            n,
                            position: r,
                            partition: pi.clone(),
                            inserted: image.clone(),
                            detail: format!("{image} left {family}"),
                            weight_before: None,
                            weight_after: None,
                        }),
                    });
                }
            }
            // backward: every member with the singleton comes from the family
            for sigma in large.iter() {
                if !sigma.blocks().contains(&vec![r]) {
                    continue;
                }
                let preimage = delete_singleton(sigma, r);
                if !family.contains(&preimage) {
                    return Ok(SiReport {
                        subject: family.to_string(),
                        holds: false,
                        max_n_checked: n_max,
                        witness: Some(SiWitness {
                            n,
                            position: r,
                            partition: preimage.clone(),
                            inserted: sigma.clone(),
                            detail: format!("preimage {preimage} left {family}"),
                            weight_before: None,
                            weight_after: None,
                        }),
                    });
                }
            }
            // order preservation both ways
            for a in small.iter() {
                for b in small.iter() {
                    let fa = a.insert_singleton(r)?;
                    let fb = b.insert_singleton(r)?;
                    if leq(a, b)? != leq(&fa, &fb)? {
                        return Ok(SiReport {
                            subject: family.to_string(),
                            holds: false,
                            max_n_checked: n_max,
                            witness: Some(SiWitness {
                                n,
                                position: r,
                                partition: a.clone(),
                                inserted: fa.clone(),
                                detail: format!("order of ({a}, {b}) not preserved"),
                                weight_before: None,
                                weight_after: None,
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(SiReport {
        subject: family.to_string(),
        holds: true,
        max_n_checked: n_max,
        witness: None,
    })
}

fn delete_singleton(sigma: &Partition, r: usize) -> Partition {
    let blocks: Vec<Vec<usize>> = sigma
        .blocks()
        .iter()
        .filter(|b| b[..] != [r])
        .map(|b| b.iter().map(|&e| if e > r { e - 1 } else { e }).collect())
        .collect();
    Partition::new(sigma.n() - 1, blocks).expect("deleting a singleton keeps a partition")
}

/// Checks `omega_1({1}) = 1` and weight preservation under every singleton
/// insertion, up to ground sets of size `n_max`.
pub fn si_check_weight(weight: &WeightId, n_max: usize, cap: usize) -> Result<SiReport> {
    let normalization = weight.eval(&Partition::one(1));
    if !normalization.is_one() {
        return Ok(SiReport {
            subject: weight.to_string(),
            holds: false,
            max_n_checked: n_max,
            witness: Some(SiWitness {
                n: 1,
                position: 0,
                partition: Partition::one(1),
                inserted: Partition::one(1),
                detail: "normalization at order one fails".into(),
                weight_before: Some(Rat::one()),
                weight_after: Some(normalization),
            }),
        });
    }
    for n in 1..n_max {
        let all = families::enumerate(FamilyId::All, n, cap)?;
        for pi in all.iter() {
            let before = weight.eval(pi);
            for r in 1..=n + 1 {
                let image = pi.insert_singleton(r)?;
                let after = weight.eval(&image);
                if before != after {
                    return Ok(SiReport {
                        subject: weight.to_string(),
                        holds: false,
                        max_n_checked: n_max,
                        witness: Some(SiWitness {
                            n,
                            position: r,
                            partition: pi.clone(),
                            inserted: image,
                            detail: "weight not preserved by singleton insertion".into(),
                            weight_before: Some(before),
                            weight_after: Some(after),
                        }),
                    });
                }
            }
        }
    }
    Ok(SiReport {
        subject: weight.to_string(),
        holds: true,
        max_n_checked: n_max,
        witness: None,
    })
}

/// A finite poset given purely by its order relation.
pub struct AbstractPoset {
    leq: Vec<Vec<bool>>,
}

impl AbstractPoset {
    pub fn new(leq: Vec<Vec<bool>>) -> Self {
        AbstractPoset { leq }
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// The boolean lattice on `dim` atoms (subset order): the poset of
    /// interval partitions on `dim + 1` points in button coordinates.
    pub fn hypercube(dim: usize) -> Self {
        let m = 1usize << dim;
        let mut leq = vec![vec![false; m]; m];
        for (a, row) in leq.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = a & b == a;
            }
        }
        AbstractPoset { leq }
    }

    /// The hypercube on `dim` atoms with the top two levels collapsed to a
    /// single maximum: all words with at most one unpressed button become
    /// one element.
    pub fn collapsed_hypercube(dim: usize) -> Self {
        let full = 1usize << dim;
        let keep: Vec<usize> = (0..full)
            .filter(|w| (dim as u32 - w.count_ones()) >= 2)
            .collect();
        let m = keep.len() + 1; // + collapsed top
        let top = m - 1;
        let mut leq = vec![vec![false; m]; m];
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                leq[i][j] = a & b == a;
            }
            leq[i][top] = true;
        }
        leq[top][top] = true;
        AbstractPoset { leq }
    }

    fn covers(&self) -> Vec<Vec<usize>> {
        let m = self.len();
        let mut up = vec![Vec::new(); m];
        for i in 0..m {
            for j in 0..m {
                if i == j || !self.leq(i, j) {
                    continue;
                }
                let between =
                    (0..m).any(|k| k != i && k != j && self.leq(i, k) && self.leq(k, j));
                if !between {
                    up[i].push(j);
                }
            }
        }
        up
    }

    /// Stable colors from iterated degree refinement on the Hasse diagram.
    fn refine_colors(&self) -> Vec<u64> {
        let up = self.covers();
        let m = self.len();
        let mut down = vec![Vec::new(); m];
        for (i, ups) in up.iter().enumerate() {
            for &j in ups {
                down[j].push(i);
            }
        }
        let mut colors: Vec<u64> = (0..m)
            .map(|v| hash_pair(up[v].len() as u64, down[v].len() as u64))
            .collect();
        for _ in 0..m.min(24) {
            let mut next = Vec::with_capacity(m);
            for v in 0..m {
                let mut ups: Vec<u64> = up[v].iter().map(|&w| colors[w]).collect();
                let mut downs: Vec<u64> = down[v].iter().map(|&w| colors[w]).collect();
                ups.sort_unstable();
                downs.sort_unstable();
                let mut h = colors[v];
                for u in ups {
                    h = hash_pair(h, u);
                }
                h = hash_pair(h, 0x9e3779b97f4a7c15);
                for d in downs {
                    h = hash_pair(h, d);
                }
                next.push(h);
            }
            if next == colors {
                break;
            }
            colors = next;
        }
        colors
    }
}

fn hash_pair(a: u64, b: u64) -> u64 {
    let mut x = a ^ b.rotate_left(17).wrapping_mul(0x9e3779b97f4a7c15);
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Poset isomorphism by color refinement plus backtracking. Candidates must
/// share a refined color and agree with all previously mapped elements on
/// the order relation.
pub fn are_isomorphic(a: &AbstractPoset, b: &AbstractPoset) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ca = a.refine_colors();
    let cb = b.refine_colors();
    let mut ha = ca.clone();
    let mut hb = cb.clone();
    ha.sort_unstable();
    hb.sort_unstable();
    if ha != hb {
        return false;
    }
    let m = a.len();
    // map the most constrained (rarest color) elements first
    let mut order: Vec<usize> = (0..m).collect();
    let mut freq: HashMap<u64, usize> = HashMap::new();
    for &c in &ca {
        *freq.entry(c).or_insert(0) += 1;
    }
    order.sort_by_key(|&v| (freq[&ca[v]], ca[v]));

    fn backtrack(
        a: &AbstractPoset,
        b: &AbstractPoset,
        ca: &[u64],
        cb: &[u64],
        order: &[usize],
        pos: usize,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..b.len() {
            if used[w] || ca[v] != cb[w] {
                continue;
            }
            let consistent = order[..pos].iter().all(|&u| {
                let fu = map[u].unwrap();
                a.leq(u, v) == b.leq(fu, w) && a.leq(v, u) == b.leq(w, fu)
            });
            if !consistent {
                continue;
            }
            map[v] = Some(w);
            used[w] = true;
            if backtrack(a, b, ca, cb, order, pos + 1, map, used) {
                return true;
            }
            map[v] = None;
            used[w] = false;
        }
        false
    }

    let mut map = vec![None; m];
    let mut used = vec![false; m];
    backtrack(a, b, &ca, &cb, &order, 0, &mut map, &mut used)
}
