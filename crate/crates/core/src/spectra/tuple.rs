use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{check_k, SpectrumCycleType, DEFAULT_K_BOUND};
use crate::combinat::{falling, lcm_big, set_partitions};
use crate::perm::CycleType;
use crate::Result;

/// Shape of a double partition of `[k]`: for each outer block, the sorted
/// sizes of its inner blocks. Outer blocks are sorted as well, so shapes that
/// differ only by relabelling positions collapse together.
type Shape = Vec<Vec<usize>>;

/// All double partitions of `[k]`, grouped by shape with multiplicities.
pub(crate) fn double_partition_shapes(k: usize) -> BTreeMap<Shape, u64> {
    let mut shapes = BTreeMap::new();
    for outer in set_partitions(k) {
        let inner_choices: Vec<Vec<Vec<usize>>> = outer
            .iter()
            .map(|block| {
                set_partitions(block.len())
                    .into_iter()
                    .map(|p| {
                        let mut sizes: Vec<usize> = p.iter().map(Vec::len).collect();
                        sizes.sort_unstable_by(|a, b| b.cmp(a));
                        sizes
                    })
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; outer.len()];
        loop {
            let mut shape: Shape = idx.iter().enumerate().map(|(b, &i)| inner_choices[b][i].clone()).collect();
            shape.sort_unstable_by(|a, b| b.cmp(a));
            *shapes.entry(shape).or_insert(0) += 1;
            let mut pos = 0;
            while pos < idx.len() {
                idx[pos] += 1;
                if idx[pos] < inner_choices[pos].len() {
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
    shapes
}

/// Cycle type of `sigma` acting on ordered k-tuples of distinct points.
pub fn induced_tuple_cycle_type(ct: &CycleType, k: usize) -> Result<SpectrumCycleType> {
    induced_tuple_cycle_type_bounded(ct, k, DEFAULT_K_BOUND)
}

pub fn induced_tuple_cycle_type_bounded(ct: &CycleType, k: usize, k_bound: usize) -> Result<SpectrumCycleType> {
    check_k(ct.n(), k, k_bound)?;
    let lengths: Vec<(u64, u64)> = ct.counts().iter().map(|(&l, &c)| (l as u64, c as u64)).collect();
    let mut spec = SpectrumCycleType::new();
    for (shape, mult) in double_partition_shapes(k) {
        let mut assigned = Vec::with_capacity(shape.len());
        let mut used = vec![false; lengths.len()];
        assign(&shape, &lengths, &mut used, &mut assigned, &mut |picks: &[usize]| {
            let mut count = BigUint::from(mult);
            let mut l = BigUint::one();
            for (row, &li) in shape.iter().zip(picks) {
                let (len, c) = lengths[li];
                count *= falling(c, row.len() as u64);
                for &s in row {
                    count *= falling(len, s as u64);
                }
                l = lcm_big(&l, &BigUint::from(len));
            }
            if !count.is_zero() {
                let orbits = &count / &l;
                debug_assert!((&orbits * &l) == count);
                spec.add(l, orbits);
            }
        });
    }
    Ok(spec)
}

fn assign<F: FnMut(&[usize])>(
    shape: &Shape,
    lengths: &[(u64, u64)],
    used: &mut [bool],
    picks: &mut Vec<usize>,
    f: &mut F,
) {
    if picks.len() == shape.len() {
        f(picks);
        return;
    }
    let row = &shape[picks.len()];
    for li in 0..lengths.len() {
        if used[li] {
            continue;
        }
        let (len, c) = lengths[li];
        if (c as usize) < row.len() || row.iter().any(|&s| s as u64 > len) {
            continue;
        }
        used[li] = true;
        picks.push(li);
        assign(shape, lengths, used, picks, f);
        picks.pop();
        used[li] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        let s = induced_tuple_cycle_type(&ct("3"), 2).unwrap();
        assert_eq!(s, SpectrumCycleType::from_counts([(3u32, 2u32)]));
        let s = induced_tuple_cycle_type(&ct("1,1,1"), 2).unwrap();
        assert_eq!(s, SpectrumCycleType::from_counts([(1u32, 6u32)]));
        let s = induced_tuple_cycle_type(&ct("2,1"), 2).unwrap();
        assert_eq!(s, SpectrumCycleType::from_counts([(2u32, 3u32)]));
    }

    #[test]
    fn shape_multiplicities_count_double_partitions() {
        for (k, total) in [(1usize, 1u64), (2, 3), (3, 12), (4, 60)] {
            let s: u64 = double_partition_shapes(k).values().sum();
            assert_eq!(s, total, "k={k}");
        }
    }

    #[test]
    fn k_out_of_range() {
        assert!(induced_tuple_cycle_type(&ct("3"), 0).is_err());
        assert!(induced_tuple_cycle_type(&ct("3"), 4).is_err());
        assert!(induced_tuple_cycle_type(&ct("5,4,3,2,1,1"), 6).is_err());
    }
}
