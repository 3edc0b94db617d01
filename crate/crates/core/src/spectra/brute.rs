use std::collections::HashMap;

use num_bigint::BigUint;

use super::{Mode, SpectrumCycleType};
use crate::combinat::{binomial, falling};
use crate::perm::cycle_type_of;
use crate::{Error, Result};

/// Largest induced degree the oracle will materialise.
pub const BRUTE_FORCE_BOUND: u64 = 1_000_000;

/// The induced permutation on k-tuples or k-subsets: the list of elements
/// (tuples, or subsets in increasing order) and the image index of each.
pub fn induced_permutation(perm: &[usize], k: usize, mode: Mode) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let ct = cycle_type_of(perm)?;
    let n = ct.n();
    let zero_based = perm.contains(&0);
    let p: Vec<usize> = perm.iter().map(|&x| if zero_based { x } else { x - 1 }).collect();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must satisfy 1 <= k <= n = {n}")));
    }
    let degree = match mode {
        Mode::Tuple => falling(n as u64, k as u64),
        Mode::Set => binomial(n as u64, k as u64),
        Mode::Irrep => {
            return Err(Error::InvalidParameter(
                "the brute-force oracle handles tuple and set modes only".into(),
            ))
        }
    };
    if degree > BigUint::from(BRUTE_FORCE_BOUND) {
        return Err(Error::bound("induced degree", degree.to_string(), BRUTE_FORCE_BOUND.to_string()));
    }
    let mut elements = Vec::new();
    let mut cur = Vec::with_capacity(k);
    let mut used = vec![false; n];
    build(n, k, mode, &mut cur, &mut used, &mut elements);
    let index: HashMap<&[usize], usize> = elements.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let image = elements
        .iter()
        .map(|e| {
            let mut img: Vec<usize> = e.iter().map(|&x| p[x]).collect();
            if mode == Mode::Set {
                img.sort_unstable();
            }
            index[img.as_slice()]
        })
        .collect();
    Ok((elements, image))
}

fn build(n: usize, k: usize, mode: Mode, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    let start = match mode {
        Mode::Set => cur.last().map_or(0, |&x| x + 1),
        _ => 0,
    };
    for x in start..n {
        if used[x] {
            continue;
        }
        used[x] = true;
        cur.push(x);
        build(n, k, mode, cur, used, out);
        cur.pop();
        used[x] = false;
    }
}

/// Cycle type of the explicitly constructed induced permutation.
pub fn brute_force_induced(perm: &[usize], k: usize, mode: Mode) -> Result<SpectrumCycleType> {
    let (_, image) = induced_permutation(perm, k, mode)?;
    let mut seen = vec![false; image.len()];
    let mut spec = SpectrumCycleType::new();
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = image[x];
            len += 1;
        }
        spec.add(BigUint::from(len), BigUint::from(1u32));
    }
    Ok(spec)
}
