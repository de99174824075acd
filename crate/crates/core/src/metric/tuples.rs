use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::space::{Distances, FiniteMetricSpace};
use super::REL_TOL;
use crate::error::{Error, Result};

/// Largest host size accepted by the triple search.
pub const TRIPLE_SEARCH_MAX_POINTS: usize = 64;

/// Upper limit on `C(n, k)` for searches with `k > 3`.
const SUBSET_SEARCH_CAP: u128 = 2_000_000;

/// Ordered points `r_1 … r_k` with `d(r_i, r_1)` strictly increasing and
/// `d(r_i, r_k) = d(r_i, r_j) + d(r_j, r_k)` for all `i < j < k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinearTuple {
    pub indices: Vec<usize>,
}

pub fn is_linear_tuple(space: &FiniteMetricSpace, indices: &[usize]) -> Result<bool> {
    if indices.len() < 3 {
        return Err(Error::Structural("a linear tuple needs at least 3 points".into()));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= space.len()) {
        return Err(Error::Structural(format!("index {bad} out of range")));
    }
    let distinct: BTreeSet<_> = indices.iter().collect();
    if distinct.len() != indices.len() {
        return Err(Error::Structural("repeated index in tuple".into()));
    }
    Ok(match space.distances() {
        Distances::Rational(_) => exact_check(space, indices),
        Distances::Double(_) => float_check(space, indices),
    })
}

fn exact_check(space: &FiniteMetricSpace, r: &[usize]) -> bool {
    let d = |a: usize, b: usize| space.d_exact(a, b).expect("rational space");
    let increasing = r.windows(2).all(|w| d(w[1], r[0]) > d(w[0], r[0]));
    increasing
        && triples(r.len()).all(|(i, j, k)| *d(r[i], r[k]) == d(r[i], r[j]) + d(r[j], r[k]))
}

fn float_check(space: &FiniteMetricSpace, r: &[usize]) -> bool {
    let d = |a: usize, b: usize| space.d(a, b);
    let scale = r
        .iter()
        .flat_map(|&a| r.iter().map(move |&b| d(a, b)))
        .fold(0.0, f64::max);
    let tol = REL_TOL * if scale.is_zero() { 1.0 } else { scale };
    let increasing = r.windows(2).all(|w| d(w[1], r[0]) - d(w[0], r[0]) > tol);
    increasing
        && triples(r.len())
            .all(|(i, j, k)| (d(r[i], r[k]) - d(r[i], r[j]) - d(r[j], r[k])).abs() <= tol)
}

fn triples(k: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..k).flat_map(move |i| {
        ((i + 1)..k).flat_map(move |j| ((j + 1)..k).map(move |l| (i, j, l)))
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every linear `k`-tuple of the space, each reported once with its first
/// index smaller than its last, in lexicographic order.
///
/// Cost is `C(n, k) · k` orderings checked; `k = 3` is limited to
/// `n ≤ 64` and larger `k` to `C(n, k) ≤ 2·10⁶`.
pub fn find_linear_tuples(space: &FiniteMetricSpace, k: usize) -> Result<Vec<LinearTuple>> {
    if k < 3 {
        return Err(Error::Structural("tuple length must be at least 3".into()));
    }
    let n = space.len();
    if k > n {
        return Ok(Vec::new());
    }
    if k == 3 && n > TRIPLE_SEARCH_MAX_POINTS {
        return Err(Error::SearchGuard(format!(
            "triple search limited to {TRIPLE_SEARCH_MAX_POINTS} points, got {n}"
        )));
    }
    if k > 3 && binomial(n, k) > SUBSET_SEARCH_CAP {
        return Err(Error::SearchGuard(format!(
            "C({n}, {k}) = {} subsets exceeds {SUBSET_SEARCH_CAP}",
            binomial(n, k)
        )));
    }

    let mut found = BTreeSet::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        for &first in &subset {
            let mut order = subset.clone();
            order.sort_by(|&a, &b| space.d(first, a).total_cmp(&space.d(first, b)));
            if order[0] == first
                && order[0] < order[k - 1]
                && is_linear_tuple(space, &order)?
            {
                found.insert(LinearTuple { indices: order });
            }
        }
        // next k-subset in lexicographic order
        let Some(pos) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            break;
        };
        subset[pos] += 1;
        for i in (pos + 1)..k {
            subset[i] = subset[i - 1] + 1;
        }
    }
    Ok(found.into_iter().collect())
}
