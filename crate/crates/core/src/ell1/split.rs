use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::interval::{require_unit, IntervalVector};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Largest support accepted by the exhaustive search.
pub const SPLIT_SUPPORT_GUARD: usize = 24;

#[derive(Debug, Clone, Copy)]
pub struct SplitOptions {
    /// Decide by the max-coordinate bound before searching.
    pub use_shortcut: bool,
    pub deadline: Option<Instant>,
}

impl Default for SplitOptions {
    fn default() -> Self {
        Self {
            use_shortcut: true,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// Some `|x_i| > 2^{−n}`: a disjointly supported piece containing
    /// coordinate `i` already has norm above `2^{−n}`.
    MaxCoordinate {
        coordinate: i64,
        #[serde(with = "exact::serde_rational")]
        value: Rational,
        #[serde(with = "exact::serde_rational")]
        bound: Rational,
    },
    /// Exhaustive search found no partition.
    ExhaustiveSearch { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SplitVerdict {
    /// Coordinate groups, each with absolute sum `2^{−n}`.
    Feasible { groups: Vec<Vec<i64>> },
    Infeasible { certificate: Obstruction },
}

impl SplitVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }
}

/// Decides whether the unit vector `x` is a sum of `2^n` disjointly
/// supported vectors of norm `2^{−n}` each. Disjoint supports force whole
/// coordinates into pieces, so this is a partition of the support into
/// `2^n` groups of absolute sum `2^{−n}`.
pub fn disjoint_split_check(
    x: &IntervalVector,
    n: usize,
    opts: SplitOptions,
) -> Result<SplitVerdict> {
    require_unit(x)?;
    let m = x.support_len();
    if m > SPLIT_SUPPORT_GUARD {
        return Err(Error::SearchGuard(format!(
            "support {m} exceeds {SPLIT_SUPPORT_GUARD}"
        )));
    }
    if n >= 64 {
        return Err(Error::SearchGuard(format!("2^{n} groups")));
    }
    let bound = exact::pow2_neg(n);
    if opts.use_shortcut {
        if let Some((coordinate, value)) = x.max_abs() {
            if value > bound {
                return Ok(SplitVerdict::Infeasible {
                    certificate: Obstruction::MaxCoordinate {
                        coordinate,
                        value,
                        bound,
                    },
                });
            }
        }
    }

    // Scale to integers: weights |x_i|·L with L the lcm of denominators.
    let coords: Vec<(i64, Rational)> = x.entries().map(|(i, a)| (i, a.abs())).collect();
    let lcm = coords
        .iter()
        .fold(BigInt::one(), |l, (_, a)| l.lcm(a.denom()));
    let groups = 1u64 << n;
    let target_big = Rational::from_integer(lcm.clone()) / Rational::from_integer(BigInt::from(groups));
    if !target_big.is_integer() {
        // Every subset sum is an integer multiple of 1/L.
        return Ok(SplitVerdict::Infeasible {
            certificate: Obstruction::ExhaustiveSearch { nodes: 0 },
        });
    }
    let too_big = || Error::SearchGuard("denominators exceed 128-bit search range".into());
    let target = target_big.to_integer().to_u128().ok_or_else(too_big)?;
    let mut items: Vec<(i64, u128)> = coords
        .iter()
        .map(|(i, a)| {
            let w = (a * Rational::from_integer(lcm.clone())).to_integer();
            w.to_u128().map(|w| (*i, w)).ok_or_else(too_big)
        })
        .collect::<Result<_>>()?;
    items.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut search = Search::new(&items, target, opts.deadline);
    match search.run()? {
        Some(order) => Ok(SplitVerdict::Feasible {
            groups: search.groups(&order),
        }),
        None => Ok(SplitVerdict::Infeasible {
            certificate: Obstruction::ExhaustiveSearch { nodes: search.nodes },
        }),
    }
}

/// Depth-first bucket filling over bitmasks of used items. The partial
/// bucket is `sum(mask) mod target`, so a mask fully determines the state
/// and dead masks are memoized in a bitset.
struct Search<'a> {
    items: &'a [(i64, u128)],
    target: u128,
    dead: Vec<u64>,
    nodes: u64,
    deadline: Option<Instant>,
}

impl<'a> Search<'a> {
    fn new(items: &'a [(i64, u128)], target: u128, deadline: Option<Instant>) -> Self {
        let words = ((1usize << items.len()) + 63) / 64;
        Self {
            items,
            target,
            dead: vec![0; words],
            nodes: 0,
            deadline,
        }
    }

    fn run(&mut self) -> Result<Option<Vec<usize>>> {
        if self.target.is_zero() || self.items.iter().any(|&(_, w)| w > self.target) {
            return Ok(None);
        }
        let mut path = Vec::with_capacity(self.items.len());
        Ok(if self.dfs(0, 0, &mut path)? { Some(path) } else { None })
    }

    fn is_dead(&self, mask: usize) -> bool {
        self.dead[mask / 64] >> (mask % 64) & 1 == 1
    }

    fn dfs(&mut self, mask: usize, sum: u128, path: &mut Vec<usize>) -> Result<bool> {
        let m = self.items.len();
        if mask == (1 << m) - 1 {
            return Ok(sum % self.target == 0);
        }
        if self.is_dead(mask) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes % 4096 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Cancelled);
        }
        let fill = sum % self.target;
        let mut last_weight = None;
        for i in 0..m {
            if mask >> i & 1 == 1 {
                continue;
            }
            let w = self.items[i].1;
            // equal weights are interchangeable
            if last_weight == Some(w) {
                continue;
            }
            if fill + w <= self.target {
                last_weight = Some(w);
                path.push(i);
                if self.dfs(mask | 1 << i, sum + w, path)? {
                    return Ok(true);
                }
                path.pop();
            }
            // a fresh bucket takes the first free item; other choices are symmetric
            if fill == 0 {
                break;
            }
        }
        self.dead[mask / 64] |= 1 << (mask % 64);
        Ok(false)
    }

    fn groups(&self, order: &[usize]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        let mut fill = 0u128;
        for &i in order {
            current.push(self.items[i].0);
            fill += self.items[i].1;
            if fill == self.target {
                current.sort_unstable();
                out.push(std::mem::take(&mut current));
                fill = 0;
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn exhaustive() -> SplitOptions {
        SplitOptions {
            use_shortcut: false,
            ..Default::default()
        }
    }

    #[test]
    fn single_coordinate_is_obstructed() {
        let x = IntervalVector::from_dense([int(1)]);
        match disjoint_split_check(&x, 1, SplitOptions::default()).unwrap() {
            SplitVerdict::Infeasible {
                certificate: Obstruction::MaxCoordinate { value, bound, .. },
            } => {
                assert_eq!(value, int(1));
                assert_eq!(bound, ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(!disjoint_split_check(&x, 1, exhaustive()).unwrap().is_feasible());
    }

    #[test]
    fn two_halves() {
        let x = IntervalVector::from_dense([ratio(1, 2), ratio(-1, 2)]);
        assert_eq!(
            disjoint_split_check(&x, 1, exhaustive()).unwrap(),
            SplitVerdict::Feasible { groups: vec![vec![0], vec![1]] }
        );
        assert!(!disjoint_split_check(&x, 2, SplitOptions::default()).unwrap().is_feasible());
        assert!(!disjoint_split_check(&x, 2, exhaustive()).unwrap().is_feasible());
    }

    #[test]
    fn four_quarters() {
        let x = IntervalVector::from_dense(vec![ratio(1, 4); 4]);
        assert!(disjoint_split_check(&x, 2, SplitOptions::default()).unwrap().is_feasible());
    }

    #[test]
    fn needs_real_grouping() {
        // {1/2, 1/4 + 1/4} for n = 1; {3/8+1/8, 1/4+1/4} fails n = 2 since 3/8 > 1/4
        let x = IntervalVector::from_dense([ratio(3, 8), ratio(1, 8), ratio(1, 4), ratio(1, 4)]);
        let v = disjoint_split_check(&x, 1, exhaustive()).unwrap();
        assert_eq!(v, SplitVerdict::Feasible { groups: vec![vec![0, 1], vec![2, 3]] });
        assert!(!disjoint_split_check(&x, 2, exhaustive()).unwrap().is_feasible());
    }

    #[test]
    fn small_max_but_no_partition() {
        // max 1/3 ≤ 1/2, but no subset sums to 1/2
        let x = IntervalVector::from_dense(vec![ratio(1, 3); 3]);
        let v = disjoint_split_check(&x, 1, SplitOptions::default()).unwrap();
        assert!(matches!(
            v,
            SplitVerdict::Infeasible { certificate: Obstruction::ExhaustiveSearch { .. } }
        ));
    }

    #[test]
    fn guards() {
        let x = IntervalVector::from_dense(vec![ratio(1, 25); 25]);
        assert!(matches!(
            disjoint_split_check(&x, 1, SplitOptions::default()),
            Err(Error::SearchGuard(_))
        ));
        let not_unit = IntervalVector::from_dense([ratio(1, 2)]);
        assert!(matches!(
            disjoint_split_check(&not_unit, 1, SplitOptions::default()),
            Err(Error::Structural(_))
        ));
    }
}
