//! Set partitions of `{1..n}`, non-crossing partitions, their block
//! structure and the counting functions used by the variation formulas.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

/// Default cap on `n` for full `Part(n)` enumeration (Bell(12) = 4 213 597).
pub const DEFAULT_PARTITION_CAP: usize = 12;
/// Default cap on `n` for non-crossing enumeration. The variation formulas
/// need `NC_{1,2}(2n)` up to `2n = 16`.
pub const DEFAULT_NC_CAP: usize = 16;

/// A partition of `{1..n}`. Blocks are sorted internally and ordered by
/// their minimum element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Build from arbitrary blocks over `{1..n}`; validates disjointness and
    /// coverage, then canonicalizes the order.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(invalid("empty block"));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n {
                    return Err(invalid(format!("element {x} outside 1..={n}")));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(invalid(format!("element {x} appears twice")));
                }
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(invalid(format!("element {x} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { n, blocks })
    }

    /// From a restricted growth string `a_1..a_n` (0-based labels).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in rgs.iter().enumerate() {
            if label == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[label].push(i + 1);
        }
        SetPartition {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn rgs(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (label, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x - 1] = label;
            }
        }
        out
    }

    /// `0̂`: all singletons.
    pub fn finest(n: usize) -> Self {
        SetPartition {
            n,
            blocks: (1..=n).map(|x| vec![x]).collect(),
        }
    }

    /// `1̂`: one block.
    pub fn coarsest(n: usize) -> Self {
        SetPartition {
            n,
            blocks: vec![(1..=n).collect()],
        }
    }

    /// `τ_m = {(1,2),(3,4),…,(2m−1,2m)}` on `{1..2m}`.
    pub fn adjacent_pairs(m: usize) -> Self {
        SetPartition {
            n: 2 * m,
            blocks: (0..m).map(|j| vec![2 * j + 1, 2 * j + 2]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks `|π|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `self ≤ other` in refinement order: every block of `self` lies inside
    /// a block of `other`.
    pub fn is_finer_than(&self, other: &SetPartition) -> bool {
        if self.n != other.n {
            return false;
        }
        let label = other.rgs();
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| label[x - 1] == label[b[0] - 1]))
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(de)?;
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::new(n, blocks).map_err(serde::de::Error::custom)
    }
}

/// All partitions of `{1..n}` in restricted-growth-string lexicographic
/// order, with the default cap.
pub fn enumerate_set_partitions(n: usize) -> Result<Vec<SetPartition>> {
    enumerate_set_partitions_with_cap(n, DEFAULT_PARTITION_CAP)
}

pub fn enumerate_set_partitions_with_cap(n: usize, cap: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(invalid("ground set size must be at least 1"));
    }
    if n > cap {
        return Err(Error::SizeLimit {
            what: "set partition size",
            requested: n,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    // running maximum of rgs[..=i]
    let mut maxes = vec![0usize; n];
    loop {
        out.push(SetPartition::from_rgs(&rgs));
        // rightmost position that can be incremented
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            if rgs[i] <= maxes[i - 1] {
                break;
            }
            i -= 1;
        }
        rgs[i] += 1;
        maxes[i] = maxes[i - 1].max(rgs[i]);
        for j in i + 1..n {
            rgs[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

fn blocks_cross(u: &[usize], v: &[usize]) -> bool {
    // look for the pattern a b a b in the merged order
    let (mut i, mut j) = (0, 0);
    let mut pattern: Vec<bool> = Vec::with_capacity(u.len() + v.len());
    while i < u.len() || j < v.len() {
        let take_u = j == v.len() || (i < u.len() && u[i] < v[j]);
        let tag = take_u;
        if take_u {
            i += 1;
        } else {
            j += 1;
        }
        if pattern.last() != Some(&tag) {
            pattern.push(tag);
        }
    }
    pattern.len() >= 4
}

/// True iff no `x1 < y1 < x2 < y2` has `x1, x2` in one block and `y1, y2` in
/// another.
pub fn is_noncrossing(p: &SetPartition) -> bool {
    let b = &p.blocks;
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| !blocks_cross(&b[i], &b[j])))
}

/// Filters for [`enumerate_nc`]; each flag is independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NcFilter {
    /// Only blocks of size 1 or 2 (`NC_{1,2}`).
    pub pairs_and_singletons: bool,
    /// No singleton block is outer.
    pub no_outer_singletons: bool,
    /// No outer block is one of the pairs `(2j−1, 2j)`; requires even `n`.
    pub outer_disjoint_from_tau: bool,
}

impl NcFilter {
    pub const NONE: NcFilter = NcFilter {
        pairs_and_singletons: false,
        no_outer_singletons: false,
        outer_disjoint_from_tau: false,
    };
    pub const ALL: NcFilter = NcFilter {
        pairs_and_singletons: true,
        no_outer_singletons: true,
        outer_disjoint_from_tau: true,
    };
}

/// All non-crossing partitions of `{1..n}` passing `filter`, in
/// restricted-growth-string order, with the default cap.
pub fn enumerate_nc(n: usize, filter: NcFilter) -> Result<Vec<SetPartition>> {
    enumerate_nc_with_cap(n, filter, DEFAULT_NC_CAP)
}

pub fn enumerate_nc_with_cap(n: usize, filter: NcFilter, cap: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(invalid("ground set size must be at least 1"));
    }
    if n > cap {
        return Err(Error::SizeLimit {
            what: "non-crossing partition size",
            requested: n,
            cap,
        });
    }
    if filter.outer_disjoint_from_tau && n % 2 == 1 {
        return Err(invalid(format!(
            "the adjacent-pair filter needs an even ground set, got n = {n}"
        )));
    }
    let mut out = Vec::new();
    for_each_nc(n, filter.pairs_and_singletons, &mut |blocks| {
        let outer = outer_flags(blocks);
        if filter.no_outer_singletons
            && blocks.iter().zip(&outer).any(|(b, &o)| o && b.len() == 1)
        {
            return;
        }
        if filter.outer_disjoint_from_tau
            && blocks
                .iter()
                .zip(&outer)
                .any(|(b, &o)| o && is_adjacent_pair(b))
        {
            return;
        }
        out.push(SetPartition {
            n,
            blocks: blocks.to_vec(),
        });
    });
    Ok(out)
}

fn is_adjacent_pair(b: &[usize]) -> bool {
    b.len() == 2 && b[0] % 2 == 1 && b[1] == b[0] + 1
}

/// Visit every non-crossing partition of `{1..n}` (blocks canonical) in
/// restricted-growth-string order. A block may only receive a new element
/// while no later-opened block is still waiting for one, which is exactly
/// the non-crossing condition.
pub(crate) fn for_each_nc(n: usize, pairs_only: bool, visit: &mut dyn FnMut(&[Vec<usize>])) {
    fn rec(
        i: usize,
        n: usize,
        pairs_only: bool,
        blocks: &mut Vec<Vec<usize>>,
        open: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if i > n {
            visit(blocks);
            return;
        }
        for pos in 0..open.len() {
            let b = open[pos];
            if pairs_only && blocks[b].len() >= 2 {
                continue;
            }
            let closed = open.split_off(pos + 1);
            blocks[b].push(i);
            rec(i + 1, n, pairs_only, blocks, open, visit);
            blocks[b].pop();
            open.extend(closed);
        }
        blocks.push(vec![i]);
        open.push(blocks.len() - 1);
        rec(i + 1, n, pairs_only, blocks, open, visit);
        open.pop();
        blocks.pop();
    }
    rec(1, n, pairs_only, &mut Vec::new(), &mut Vec::new(), visit);
}

/// Outer/inner flag per block of a non-crossing partition: a block is inner
/// iff another block has elements on both sides of it.
pub(crate) fn outer_flags(blocks: &[Vec<usize>]) -> Vec<bool> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let (lo, hi) = (v[0], *v.last().unwrap());
            !blocks
                .iter()
                .enumerate()
                .any(|(j, w)| j != i && w[0] < lo && *w.last().unwrap() > hi)
        })
        .collect()
}

/// Block indices (into [`SetPartition::blocks`]) by kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockClassification {
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub singletons: Vec<usize>,
}

pub fn classify_blocks(p: &SetPartition) -> Result<BlockClassification> {
    if !is_noncrossing(p) {
        return Err(invalid(format!("{p:?} is crossing")));
    }
    let mut out = BlockClassification::default();
    for (i, is_outer) in outer_flags(&p.blocks).into_iter().enumerate() {
        if is_outer {
            out.outer.push(i);
        } else {
            out.inner.push(i);
        }
        if p.blocks[i].len() == 1 {
            out.singletons.push(i);
        }
    }
    Ok(out)
}

fn same_size(p: &SetPartition, q: &SetPartition) -> Result<()> {
    if p.n != q.n {
        return Err(invalid(format!(
            "partitions of different sets: {} vs {}",
            p.n, q.n
        )));
    }
    Ok(())
}

/// Smallest partition coarser than both, computed in `Part(n)`.
pub fn join(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    same_size(p, q)?;
    let mut parent: Vec<usize> = (0..=p.n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for b in p.blocks.iter().chain(&q.blocks) {
        for w in b.windows(2) {
            let (a, c) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != c {
                parent[a.max(c)] = a.min(c);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 1..=p.n {
        let r = find(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    SetPartition::new(p.n, groups.into_values().collect())
}

/// Largest partition finer than both: the nonempty blockwise intersections.
pub fn meet(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    same_size(p, q)?;
    let (lp, lq) = (p.rgs(), q.rgs());
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for x in 1..=p.n {
        groups.entry((lp[x - 1], lq[x - 1])).or_default().push(x);
    }
    SetPartition::new(p.n, groups.into_values().collect())
}

/// Rows `S(i, ·)` for `i = 0..=n`.
fn stirling_table(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigUint::zero(); i + 1];
        for k in 1..=i {
            let stay = prev.get(k).map(|s| s * BigUint::from(k)).unwrap_or_default();
            row[k] = stay + &prev[k - 1];
        }
        rows.push(row);
    }
    rows
}

/// Stirling number of the second kind via `S(n,k) = k S(n−1,k) + S(n−1,k−1)`.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    stirling_table(n)[n][k].clone()
}

/// `Σ_{k=1}^{max_blocks} S(n, k)`: partitions of an `n`-set into at most
/// `max_blocks` blocks.
pub fn stirling2_prefix_sum(n: usize, max_blocks: usize) -> BigUint {
    let table = stirling_table(n);
    table[n].iter().take(max_blocks + 1).sum()
}

pub fn bell(n: usize) -> BigUint {
    stirling_table(n)[n].iter().sum()
}

pub fn catalan(n: usize) -> BigUint {
    // C_n = binom(2n, n) / (n + 1)
    let mut c = BigUint::one();
    for i in 0..n {
        c = c * BigUint::from(2 * (2 * i + 1)) / BigUint::from(i + 2);
    }
    c
}

/// `N (N−1) … (N−k+1)`; zero when `k > N` for non-negative `N`.
pub fn falling_factorial(n: &BigInt, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        let factor = n - BigInt::from(i);
        if factor.is_zero() {
            return BigInt::zero();
        }
        acc *= factor;
    }
    acc
}

/// `Σ_{π ≥ base} N_{|π|}` over `Part(n)`. Partitions coarser than `base`
/// are partitions of its `m` blocks, so this is `Σ_k S(m,k) N_k`.
pub fn coarser_weight(base: &SetPartition, labels: usize) -> BigInt {
    let m = base.len();
    let table = stirling_table(m);
    let n = BigInt::from(labels);
    (1..=m.min(labels))
        .map(|k| BigInt::from(table[m][k].clone()) * falling_factorial(&n, k))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    /// Independent crossing test: scan every quadruple.
    fn crossing_by_quadruples(p: &SetPartition) -> bool {
        let label = p.rgs();
        let n = p.n();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        if label[a] == label[c] && label[b] == label[d] && label[a] != label[b] {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn enumeration_counts_match_bell() {
        assert_eq!(enumerate_set_partitions(1).unwrap(), vec![sp(1, &[&[1]])]);
        assert_eq!(enumerate_set_partitions(3).unwrap().len(), 5);
        assert_eq!(enumerate_set_partitions(4).unwrap().len(), 15);
        for n in 1..=9 {
            let all = enumerate_set_partitions(n).unwrap();
            assert_eq!(BigUint::from(all.len()), bell(n), "n = {n}");
            let mut dedup = all.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
        }
    }

    #[test]
    fn enumeration_is_rgs_lexicographic() {
        let all = enumerate_set_partitions(5).unwrap();
        let rgs: Vec<_> = all.iter().map(SetPartition::rgs).collect();
        assert!(rgs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], SetPartition::coarsest(5));
        assert_eq!(*all.last().unwrap(), SetPartition::finest(5));
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_set_partitions(13).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { cap: 12, requested: 13, .. }));
        assert!(err.to_string().contains("12"));
        assert!(enumerate_set_partitions(0).is_err());
        assert!(enumerate_nc(17, NcFilter::NONE).is_err());
    }

    #[test]
    fn crossing_examples() {
        assert!(!is_noncrossing(&sp(4, &[&[1, 3], &[2, 4]])));
        assert!(is_noncrossing(&sp(4, &[&[1, 4], &[2, 3]])));
        assert!(is_noncrossing(&sp(4, &[&[1, 3], &[2], &[4]])));
        for p in enumerate_set_partitions(7).unwrap() {
            assert_eq!(is_noncrossing(&p), !crossing_by_quadruples(&p), "{p:?}");
        }
    }

    #[test]
    fn nc_counts_are_catalan() {
        for n in 1..=10 {
            let nc = enumerate_nc(n, NcFilter::NONE).unwrap();
            assert_eq!(BigUint::from(nc.len()), catalan(n), "n = {n}");
            assert!(nc.iter().all(is_noncrossing));
        }
        assert_eq!(enumerate_nc(4, NcFilter::NONE).unwrap().len(), 14);
    }

    #[test]
    fn nc_matches_filtered_part() {
        for n in 1..=8 {
            let direct = enumerate_nc(n, NcFilter::NONE).unwrap();
            let filtered: Vec<_> = enumerate_set_partitions(n)
                .unwrap()
                .into_iter()
                .filter(is_noncrossing)
                .collect();
            assert_eq!(direct, filtered, "n = {n}");
        }
    }

    #[test]
    fn nc_filters() {
        let f = NcFilter {
            pairs_and_singletons: true,
            ..NcFilter::NONE
        };
        assert_eq!(
            enumerate_nc(2, f).unwrap(),
            vec![sp(2, &[&[1, 2]]), sp(2, &[&[1], &[2]])]
        );
        let mut got = enumerate_nc(4, NcFilter::ALL).unwrap();
        got.sort();
        let mut want = vec![sp(4, &[&[1, 4], &[2, 3]]), sp(4, &[&[1, 4], &[2], &[3]])];
        want.sort();
        assert_eq!(got, want);
        assert!(enumerate_nc(3, NcFilter::ALL).is_err());
        // Motzkin numbers count NC_{1,2}
        let motzkin = [1, 2, 4, 9, 21, 51, 127, 323];
        for (n, &m) in (1..=8).zip(&motzkin) {
            assert_eq!(enumerate_nc(n, f).unwrap().len(), m);
        }
    }

    #[test]
    fn block_classification_examples() {
        let c = classify_blocks(&sp(4, &[&[1, 4], &[2, 3]])).unwrap();
        assert_eq!((c.outer, c.inner), (vec![0], vec![1]));
        let c = classify_blocks(&sp(4, &[&[1, 4], &[2], &[3]])).unwrap();
        assert_eq!(c.outer, vec![0]);
        assert_eq!(c.inner, vec![1, 2]);
        assert_eq!(c.singletons, vec![1, 2]);
        let c = classify_blocks(&sp(4, &[&[1, 2], &[3, 4]])).unwrap();
        assert_eq!(c.outer, vec![0, 1]);
        assert!(classify_blocks(&sp(4, &[&[1, 3], &[2, 4]])).is_err());
    }

    #[test]
    fn classification_partitions_blocks() {
        for n in 1..=8 {
            for p in enumerate_nc(n, NcFilter::NONE).unwrap() {
                let c = classify_blocks(&p).unwrap();
                let mut all: Vec<_> = c.inner.iter().chain(&c.outer).copied().collect();
                all.sort_unstable();
                assert_eq!(all, (0..p.len()).collect::<Vec<_>>());
                let singles: Vec<_> = (0..p.len()).filter(|&i| p.blocks()[i].len() == 1).collect();
                assert_eq!(c.singletons, singles);
            }
        }
    }

    #[test]
    fn join_meet_examples() {
        let sigma = sp(6, &[&[1, 6], &[2, 5], &[3, 4]]);
        let tau = SetPartition::adjacent_pairs(3);
        assert_eq!(join(&sigma, &tau).unwrap(), sp(6, &[&[1, 2, 5, 6], &[3, 4]]));
        let sigma = sp(4, &[&[1, 4], &[2, 3]]);
        let tau = SetPartition::adjacent_pairs(2);
        assert_eq!(join(&sigma, &tau).unwrap(), SetPartition::coarsest(4));
        assert_eq!(meet(&sigma, &tau).unwrap(), SetPartition::finest(4));
        assert_eq!(meet(&sigma, &sigma).unwrap(), sigma);
        assert!(join(&sigma, &SetPartition::finest(3)).is_err());
    }

    #[test]
    fn join_and_meet_are_lattice_bounds() {
        for n in 1..=5 {
            let all = enumerate_set_partitions(n).unwrap();
            for p in &all {
                for q in &all {
                    let j = join(p, q).unwrap();
                    let m = meet(p, q).unwrap();
                    assert!(p.is_finer_than(&j) && q.is_finer_than(&j));
                    assert!(m.is_finer_than(p) && m.is_finer_than(q));
                    for r in &all {
                        if p.is_finer_than(r) && q.is_finer_than(r) {
                            assert!(j.is_finer_than(r));
                        }
                        if r.is_finer_than(p) && r.is_finer_than(q) {
                            assert!(r.is_finer_than(&m));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stirling_and_friends() {
        assert_eq!(stirling2(4, 2), BigUint::from(7u32));
        let two_block = enumerate_set_partitions(4)
            .unwrap()
            .into_iter()
            .filter(|p| p.len() == 2)
            .count();
        assert_eq!(two_block, 7);
        assert_eq!(falling_factorial(&BigInt::from(3), 5), BigInt::zero());
        assert_eq!(falling_factorial(&BigInt::from(5), 2), BigInt::from(20));
        assert_eq!(coarser_weight(&SetPartition::coarsest(3), 4), BigInt::from(4));
        for n in 1..=10 {
            let total: BigUint = (0..=n).map(|k| stirling2(n, k)).sum();
            assert_eq!(BigUint::from(enumerate_set_partitions(n).unwrap().len()), total);
        }
    }

    #[test]
    fn coarser_weight_matches_enumeration() {
        for n in 1..=6 {
            let all = enumerate_set_partitions(n).unwrap();
            for base in all.iter().step_by(3) {
                for labels in 1..=5 {
                    let brute: BigInt = all
                        .iter()
                        .filter(|p| base.is_finer_than(p))
                        .map(|p| falling_factorial(&BigInt::from(labels), p.len()))
                        .sum();
                    assert_eq!(coarser_weight(base, labels), brute);
                }
            }
        }
    }

    #[test]
    fn json_shape() {
        let p = sp(4, &[&[2, 3], &[4, 1]]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[[1,4],[2,3]]");
        let back: SetPartition = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<SetPartition>("[[1,1]]").is_err());
    }
}
