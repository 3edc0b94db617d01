use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::necklace::necklaces_with_period;
use super::{check_k, SpectrumCycleType, DEFAULT_K_BOUND};
use crate::combinat::{divisors, factorial, falling, lcm_big};
use crate::perm::CycleType;
use crate::Result;

/// How a k-subset meets the cycles of one length: the sorted (non-increasing)
/// sizes of its intersections with the distinct cycles it touches.
struct Row {
    len: u64,
    sizes: Vec<u64>,
    weight: BigUint,
}

/// Cycle type of `sigma` acting on k-subsets.
pub fn induced_subset_cycle_type(ct: &CycleType, k: usize) -> Result<SpectrumCycleType> {
    check_k(ct.n(), k, DEFAULT_K_BOUND)?;
    let lengths: Vec<(u64, u64)> = ct.counts().iter().map(|(&l, &c)| (l as u64, c as u64)).collect();
    let mut spec = SpectrumCycleType::new();
    let mut rows = Vec::new();
    patterns(&lengths, 0, k as u64, &mut rows, &mut |rows: &[Row]| {
        add_pattern(rows, &mut spec);
    });
    Ok(spec)
}

/// Enumerates, length by length, every way of distributing `remaining`
/// points over the cycles.
fn patterns<F: FnMut(&[Row])>(lengths: &[(u64, u64)], from: usize, remaining: u64, rows: &mut Vec<Row>, f: &mut F) {
    if remaining == 0 {
        f(rows);
        return;
    }
    for li in from..lengths.len() {
        let (len, c) = lengths[li];
        for total in 1..=remaining.min(len * c) {
            for sizes in bounded_partitions(total, len, c) {
                let mut weight = falling(c, sizes.len() as u64);
                let mut run = 1u64;
                for w in sizes.windows(2) {
                    if w[0] == w[1] {
                        run += 1;
                    } else {
                        weight /= factorial(run);
                        run = 1;
                    }
                }
                weight /= factorial(run);
                rows.push(Row { len, sizes, weight });
                patterns(lengths, li + 1, remaining - total, rows, f);
                rows.pop();
            }
        }
    }
}

/// Partitions of `total` into at most `max_parts` parts, each at most `max_part`.
fn bounded_partitions(total: u64, max_part: u64, max_parts: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, cap: u64, parts_left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, max_part, max_parts, &mut Vec::new(), &mut out);
    out
}

fn add_pattern(rows: &[Row], spec: &mut SpectrumCycleType) {
    let mut base = BigUint::one();
    let mut cells: Vec<(u64, u64)> = Vec::new();
    for row in rows {
        base *= &row.weight;
        cells.extend(row.sizes.iter().map(|&s| (row.len, s)));
    }
    let options: Vec<Vec<(u64, BigUint)>> = cells
        .iter()
        .map(|&(len, s)| {
            divisors(len)
                .into_iter()
                .map(|d| (d, BigUint::from(d) * necklaces_with_period(len, s, d)))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; cells.len()];
    loop {
        let mut count = base.clone();
        let mut l = BigUint::one();
        for (opts, &i) in options.iter().zip(&idx) {
            let (d, c) = &opts[i];
            count *= c;
            l = lcm_big(&l, &BigUint::from(*d));
        }
        let orbits = &count / &l;
        debug_assert!(&orbits * &l == count);
        spec.add(l, orbits);
        let mut pos = 0;
        while pos < idx.len() {
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let s = induced_subset_cycle_type(&ct("4"), 2).unwrap();
        assert_eq!(s, SpectrumCycleType::from_counts([(4u32, 1u32), (2, 1)]));
        let s = induced_subset_cycle_type(&ct("3"), 2).unwrap();
        assert_eq!(s, SpectrumCycleType::from_counts([(3u32, 1u32)]));
        let s = induced_subset_cycle_type(&CycleType::identity(7), 3).unwrap();
        assert_eq!(s, SpectrumCycleType::from_counts([(1u32, 35u32)]));
    }

    #[test]
    fn degree_is_binomial() {
        for t in ["6,4,4,3,1", "10,10", "7,5,3,2,2,1"] {
            let c = ct(t);
            for k in 1..=4 {
                let s = induced_subset_cycle_type(&c, k).unwrap();
                assert_eq!(s.total(), &binomial(c.n() as u64, k as u64), "{t} k={k}");
            }
        }
    }

    #[test]
    fn bounded_partitions_respect_limits() {
        assert_eq!(bounded_partitions(4, 2, 2), vec![vec![2, 2]]);
        assert_eq!(bounded_partitions(3, 3, 3).len(), 3);
    }
}
