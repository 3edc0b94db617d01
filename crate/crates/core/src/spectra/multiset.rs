//! Multisets `E^U = {sum_{i in S} b(i) mod 1 : S in U}` for families `U` of
//! index tuples, where `b` is the defining-representation angle vector listed
//! by cycle. These give exact checks of the tuple-family decompositions:
//!
//! * distinct k-tuples over `[n]` split into those avoiding `n` and `k`
//!   copies of distinct (k-1)-tuples over `[n-1]` (because `b(n) = 0`);
//! * tuples with exactly one repeated pair, compared with rotated copies of
//!   distinct (k-2)-tuples.

use std::collections::{BTreeMap, HashSet};

use crate::combinat::{binomial, lcm_u64};
use crate::perm::CycleType;
use crate::Result;

use super::check_k;

/// Residues mod `denom`, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleMultiset {
    denom: u64,
    counts: BTreeMap<u64, u64>,
}

impl AngleMultiset {
    pub fn new(denom: u64) -> Self {
        AngleMultiset {
            denom,
            counts: BTreeMap::new(),
        }
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn insert(&mut self, residue: u64, times: u64) {
        if times > 0 {
            *self.counts.entry(residue % self.denom).or_insert(0) += times;
        }
    }

    pub fn len(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `{x + shift}`.
    pub fn rotate(&self, shift: u64) -> Self {
        let mut out = AngleMultiset::new(self.denom);
        for (&r, &c) in &self.counts {
            out.insert(r + shift, c);
        }
        out
    }

    /// Multiset union (sum of multiplicities).
    pub fn extend(&mut self, other: &AngleMultiset) {
        assert_eq!(self.denom, other.denom, "angle multisets over different denominators");
        for (&r, &c) in &other.counts {
            self.insert(r, c);
        }
    }

    /// `times` copies of `self`.
    pub fn repeat(&self, times: u64) -> Self {
        let mut out = AngleMultiset::new(self.denom);
        for (&r, &c) in &self.counts {
            out.insert(r, c * times);
        }
        out
    }
}

/// `b(1..=n)` as residues over `lcm` of the cycle lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleVector {
    denom: u64,
    b: Vec<u64>,
}

impl AngleVector {
    pub fn new(ct: &CycleType) -> Self {
        let lengths = ct.lengths_desc();
        let denom = lengths.iter().fold(1u64, |d, &l| lcm_u64(d, l as u64));
        let mut b = Vec::with_capacity(ct.n());
        for l in lengths {
            let l = l as u64;
            b.extend((1..=l).map(|a| (a % l) * (denom / l)));
        }
        AngleVector { denom, b }
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// `b(i)` for 1-based `i`.
    pub fn get(&self, i: usize) -> u64 {
        self.b[i - 1]
    }

    fn sum(&self, tuple: &[usize]) -> u64 {
        tuple.iter().map(|&i| self.get(i)).sum::<u64>() % self.denom
    }
}

/// Visits all k-tuples of distinct entries from `pool`.
fn distinct_tuples(pool: &[usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(pool: &[usize], k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for (idx, &x) in pool.iter().enumerate() {
            if !used[idx] {
                used[idx] = true;
                cur.push(x);
                go(pool, k, used, cur, visit);
                cur.pop();
                used[idx] = false;
            }
        }
    }
    go(pool, k, &mut vec![false; pool.len()], &mut Vec::with_capacity(k), visit);
}

/// `E` over distinct k-tuples from `pool`.
fn tuple_angles_from(v: &AngleVector, pool: &[usize], k: usize) -> AngleMultiset {
    let mut out = AngleMultiset::new(v.denom);
    distinct_tuples(pool, k, &mut |t| out.insert(v.sum(t), 1));
    out
}

/// `E` over distinct k-tuples from `[m]`.
pub fn tuple_angles(v: &AngleVector, m: usize, k: usize) -> AngleMultiset {
    let pool: Vec<usize> = (1..=m).collect();
    tuple_angles_from(v, &pool, k)
}

/// `E` over distinct k-tuples from `[n] \ {j}`.
pub fn tuple_angles_avoiding(v: &AngleVector, j: usize, k: usize) -> AngleMultiset {
    let pool: Vec<usize> = (1..=v.n()).filter(|&i| i != j).collect();
    tuple_angles_from(v, &pool, k)
}

/// `E` over k-tuples from `[n]` in which exactly two entries coincide and
/// all others are distinct, enumerated over all of `[n]^k`.
pub fn duplicate_angles(v: &AngleVector, k: usize) -> AngleMultiset {
    let n = v.n();
    let mut out = AngleMultiset::new(v.denom);
    let mut t = vec![1usize; k];
    loop {
        let mut sorted = t.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() + 1 == k {
            let repeated_pair = sorted.iter().all(|x| t.iter().filter(|y| *y == x).count() <= 2);
            if repeated_pair {
                out.insert(v.sum(&t), 1);
            }
        }
        let mut pos = 0;
        while pos < k && t[pos] == n {
            t[pos] = 1;
            pos += 1;
        }
        if pos == k {
            break;
        }
        t[pos] += 1;
    }
    out
}

/// Both sides of the recursive relation
/// `E(Q_{n,k}) = E(Q_{n-1,k}) + k E(Q_{n-1,k-1})`.
pub fn recursive_relation_sides(ct: &CycleType, k: usize) -> Result<(AngleMultiset, AngleMultiset)> {
    check_k(ct.n(), k, usize::MAX)?;
    let v = AngleVector::new(ct);
    let n = v.n();
    let lhs = tuple_angles(&v, n, k);
    let mut rhs = tuple_angles(&v, n - 1, k);
    rhs.extend(&tuple_angles(&v, n - 1, k - 1).repeat(k as u64));
    Ok((lhs, rhs))
}

/// Duplicate tuples grouped by the repeated value `j` and the positions of
/// the pair: `C(k,2)` copies of `sum_j (2 b(j) + E(distinct (k-2)-tuples
/// avoiding j))`.
pub fn duplicate_decomposition(ct: &CycleType, k: usize) -> Result<AngleMultiset> {
    check_k(ct.n(), k, usize::MAX)?;
    let v = AngleVector::new(ct);
    let mut out = AngleMultiset::new(v.denom);
    if k < 2 {
        return Ok(out);
    }
    for j in 1..=v.n() {
        out.extend(&tuple_angles_avoiding(&v, j, k - 2).rotate(2 * v.get(j)));
    }
    let pairs = binomial(k as u64, 2).try_into().expect("small k");
    Ok(out.repeat(pairs))
}

/// Outcome of [`union_of_rotations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RotationCover {
    /// Shifts `c_1, ..., c_N` with `target = union of (base + c_i)`.
    Found(Vec<u64>),
    Impossible,
    /// The search budget ran out.
    Undecided,
}

/// Decides whether `target` is a union of `copies` rotated copies of `base`,
/// by exact-cover search: the smallest uncovered residue must lie in the
/// next copy, which fixes at most `|base|` candidate shifts.
pub fn union_of_rotations(target: &AngleMultiset, base: &AngleMultiset, copies: u64, budget: u64) -> RotationCover {
    assert_eq!(target.denom, base.denom, "angle multisets over different denominators");
    if target.len() != copies * base.len() {
        return RotationCover::Impossible;
    }
    if base.is_empty() {
        return RotationCover::Found(vec![0; copies as usize]);
    }
    let d = target.denom;
    let mut remaining = target.counts.clone();
    let mut shifts = Vec::new();
    let mut failed: HashSet<Vec<(u64, u64)>> = HashSet::new();
    let mut nodes = 0u64;

    fn go(
        remaining: &mut BTreeMap<u64, u64>,
        base: &AngleMultiset,
        d: u64,
        shifts: &mut Vec<u64>,
        failed: &mut HashSet<Vec<(u64, u64)>>,
        nodes: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        let Some((&x, _)) = remaining.iter().next() else {
            return Some(true);
        };
        *nodes += 1;
        if *nodes > budget {
            return None;
        }
        let key: Vec<(u64, u64)> = remaining.iter().map(|(&r, &c)| (r, c)).collect();
        if failed.contains(&key) {
            return Some(false);
        }
        for &a in base.counts.keys() {
            let c = (x + d - a) % d;
            let fits = base
                .counts
                .iter()
                .all(|(&r, &m)| remaining.get(&((r + c) % d)).copied().unwrap_or(0) >= m);
            if !fits {
                continue;
            }
            for (&r, &m) in &base.counts {
                let slot = remaining.get_mut(&((r + c) % d)).expect("checked");
                *slot -= m;
                if *slot == 0 {
                    remaining.remove(&((r + c) % d));
                }
            }
            shifts.push(c);
            match go(remaining, base, d, shifts, failed, nodes, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            shifts.pop();
            for (&r, &m) in &base.counts {
                *remaining.entry((r + c) % d).or_insert(0) += m;
            }
        }
        failed.insert(key);
        Some(false)
    }

    match go(&mut remaining, base, d, &mut shifts, &mut failed, &mut nodes, budget) {
        Some(true) => RotationCover::Found(shifts),
        Some(false) => RotationCover::Impossible,
        None => RotationCover::Undecided,
    }
}

/// Tests the literal duplicate statement: is `E(Q^dup_{n,k})` a union of
/// `n C(k,2)` rotated copies of `E(Q_{n-1,k-2})`?
pub fn duplicate_rotation_cover(ct: &CycleType, k: usize, budget: u64) -> Result<RotationCover> {
    check_k(ct.n(), k, usize::MAX)?;
    let v = AngleVector::new(ct);
    if k < 2 {
        return Ok(RotationCover::Impossible);
    }
    let n = v.n();
    let target = duplicate_angles(&v, k);
    let base = tuple_angles(&v, n - 1, k - 2);
    let copies = n as u64 * binomial(k as u64, 2).try_into().unwrap_or(u64::MAX);
    Ok(union_of_rotations(&target, &base, copies, budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn angle_vector_example() {
        let v = AngleVector::new(&ct("4,4,3,2"));
        assert_eq!(v.denom(), 12);
        let expect = [3, 6, 9, 0, 3, 6, 9, 0, 4, 8, 0, 6, 0];
        assert_eq!((1..=13).map(|i| v.get(i)).collect::<Vec<_>>(), expect);
    }

    #[test]
    fn sizes() {
        let v = AngleVector::new(&ct("3,2,1"));
        assert_eq!(tuple_angles(&v, 6, 3).len(), 120);
        assert_eq!(duplicate_angles(&v, 3).len(), 3 * 6 * 5);
        assert_eq!(duplicate_angles(&v, 2).len(), 6);
        assert_eq!(tuple_angles(&v, 5, 0).len(), 1);
    }

    #[test]
    fn recursive_relation_small() {
        for c in ["3,2", "4,1", "5", "2,2,1"] {
            for k in 1..=3 {
                let (l, r) = recursive_relation_sides(&ct(c), k).unwrap();
                assert_eq!(l, r, "{c} k={k}");
            }
        }
    }

    #[test]
    fn rotation_cover_search() {
        let mut base = AngleMultiset::new(6);
        base.insert(0, 1);
        base.insert(3, 1);
        let mut target = base.rotate(1);
        target.extend(&base.rotate(2));
        target.extend(&base);
        assert!(matches!(union_of_rotations(&target, &base, 3, 1000), RotationCover::Found(_)));
        let mut bad = AngleMultiset::new(6);
        bad.insert(0, 2);
        bad.insert(3, 1);
        bad.insert(1, 1);
        assert_eq!(union_of_rotations(&bad, &base, 2, 1000), RotationCover::Impossible);
    }

    #[test]
    fn literal_duplicate_statement_fails_for_three_tuples() {
        assert_eq!(duplicate_rotation_cover(&ct("2,1"), 3, 10_000).unwrap(), RotationCover::Impossible);
        assert!(matches!(duplicate_rotation_cover(&ct("2,1"), 2, 10_000).unwrap(), RotationCover::Found(_)));
    }
}
