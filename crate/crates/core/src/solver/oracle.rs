use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::objective::evaluate_distortion;
use super::optimize::{embed_min_distortion, SolveConfig};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

/// Largest space the oracle accepts.
pub const ORACLE_MAX_POINTS: usize = 5;
/// Largest target dimension the oracle accepts.
pub const ORACLE_MAX_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Target width of the bracket.
    pub resolution: f64,
    /// Cells examined before the search is refused.
    pub max_cells: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            resolution: 0.01,
            max_cells: 100_000_000,
        }
    }
}

/// `lower ≤ optimal distortion ≤ upper`, with `upper` attained by `coords`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleBracket {
    pub lower: f64,
    pub upper: f64,
    pub coords: Vec<Vec<f64>>,
    /// Cells examined.
    pub cells: usize,
    /// Drop of the upper bound from the starting configuration to the
    /// final one.
    pub refinement_gain: f64,
}

type Interval = (f64, f64);

/// The search space: point 0 at the origin, point 1 at `ℓ_p`-distance
/// `d(0,1)` on a fixed ray (or on an arc of the sphere when `ℓ_p^2` has no
/// rotations), the rest in boxes large enough to hold every configuration
/// at least as good as the incumbent.
struct Layout<'a> {
    space: &'a FiniteMetricSpace,
    p: f64,
    d: usize,
    /// Point 1 sweeps `(a, b)` with `a ≥ b ≥ 0`, `a^p + b^p = d01^p`.
    arc: bool,
}

impl Layout<'_> {
    fn n(&self) -> usize {
        self.space.len()
    }

    fn arc_point(&self, b: f64) -> [f64; 2] {
        let d01 = self.space.d(0, 1);
        let a = (1.0 - b.powf(self.p)).max(0.0).powf(1.0 / self.p);
        [a * d01, b * d01]
    }

    /// Per-point coordinate boxes of a cell.
    fn boxes(&self, cell: &[Interval]) -> Vec<Vec<Interval>> {
        let d01 = self.space.d(0, 1);
        let mut out = vec![vec![(0.0, 0.0); self.d]];
        let mut rest = cell;
        if self.arc {
            let (lo, hi) = cell[0];
            let a_hi = self.arc_point(lo)[0];
            let a_lo = self.arc_point(hi)[0];
            out.push(vec![(a_lo, a_hi), (lo * d01, hi * d01)]);
            rest = &cell[1..];
        } else {
            let mut x1 = vec![(0.0, 0.0); self.d];
            x1[0] = (d01, d01);
            out.push(x1);
        }
        out.extend(rest.chunks(self.d).map(<[Interval]>::to_vec));
        out
    }

    fn center(&self, cell: &[Interval]) -> Vec<Vec<f64>> {
        let mid = |&(lo, hi): &Interval| 0.5 * (lo + hi);
        let mut out = vec![vec![0.0; self.d]];
        let mut rest = cell;
        if self.arc {
            out.push(self.arc_point(mid(&cell[0])).to_vec());
            rest = &cell[1..];
        } else {
            let mut x1 = vec![0.0; self.d];
            x1[0] = self.space.d(0, 1);
            out.push(x1);
        }
        out.extend(rest.chunks(self.d).map(|c| c.iter().map(mid).collect()));
        out
    }

    fn norm(&self, v: impl Iterator<Item = f64>) -> f64 {
        if self.p == 1.0 {
            v.sum()
        } else {
            v.map(|x| x.powf(self.p)).sum::<f64>().powf(1.0 / self.p)
        }
    }

    /// Lower bound on the distortion of every configuration in the cell.
    fn lower_bound(&self, cell: &[Interval]) -> f64 {
        let boxes = self.boxes(cell);
        let n = self.n();
        let (mut max_lo, mut min_hi) = (0.0f64, f64::INFINITY);
        for u in 0..n {
            for v in u + 1..n {
                let (a, b) = (&boxes[u], &boxes[v]);
                let gap = self.norm((0..self.d).map(|i| (a[i].0 - b[i].1).max(b[i].0 - a[i].1).max(0.0)));
                let reach = self.norm((0..self.d).map(|i| (a[i].1 - b[i].0).abs().max((b[i].1 - a[i].0).abs())));
                let duv = self.space.d(u, v);
                max_lo = max_lo.max(gap / duv);
                min_hi = min_hi.min(reach / duv);
            }
        }
        if min_hi == 0.0 {
            return 1.0;
        }
        (max_lo / min_hi).max(1.0)
    }

    /// Variable weights so that bisection compares lengths in the target.
    fn width(&self, cell: &[Interval], k: usize) -> f64 {
        let w = cell[k].1 - cell[k].0;
        if self.arc && k == 0 {
            w * self.space.d(0, 1)
        } else {
            w
        }
    }
}

fn bits(x: f64) -> u64 {
    // nonnegative finite floats order like their bit patterns
    x.max(0.0).to_bits()
}

/// Brackets the least distortion of `space` into `ℓ_p^d` (`n ≤ 5`,
/// `d ≤ 2`) by best-first branch and bound over normalized configurations.
/// Stops once `upper − lower ≤ resolution`; refuses past `max_cells`.
pub fn brute_force_oracle(space: &FiniteMetricSpace, p: f64, d: usize, cfg: &OracleConfig) -> Result<OracleBracket> {
    let n = space.len();
    if !(2..=ORACLE_MAX_POINTS).contains(&n) {
        return Err(Error::SearchGuard(format!(
            "oracle takes 2 to {ORACLE_MAX_POINTS} points, got {n}"
        )));
    }
    if !(1..=ORACLE_MAX_DIM).contains(&d) {
        return Err(Error::SearchGuard(format!("oracle takes d ≤ {ORACLE_MAX_DIM}, got {d}")));
    }
    if !(p >= 1.0 && p.is_finite()) || !(cfg.resolution > 0.0) {
        return Err(Error::Structural("need p ≥ 1 and a positive resolution".into()));
    }
    if !crate::metric::validate_space(space).is_empty() {
        return Err(Error::Structural("input violates the metric axioms".into()));
    }

    // incumbent from a short local search
    let seed_cfg = SolveConfig {
        p,
        dim: d,
        restarts: 4,
        iterations: 1500,
        ..SolveConfig::default()
    };
    let start = embed_min_distortion(space, &seed_cfg)?;
    let mut upper = start.report.distortion;
    let mut coords = start.coords;
    let start_upper = upper;
    if n == 2 {
        return Ok(OracleBracket {
            lower: 1.0,
            upper,
            coords,
            cells: 0,
            refinement_gain: 0.0,
        });
    }

    let layout = Layout {
        space,
        p,
        d,
        arc: d == 2 && p != 2.0,
    };
    let mut root: Vec<Interval> = Vec::new();
    if layout.arc {
        root.push((0.0, 0.5f64.powf(1.0 / p)));
    }
    for j in 2..n {
        let r = upper * space.d(0, j);
        for i in 0..d {
            // a reflection fixing the first axis puts point 2 in the upper half
            let lo = if j == 2 && i == 1 && !layout.arc { 0.0 } else { -r };
            root.push((lo, r));
        }
    }

    let mut cells: Vec<Vec<Interval>> = vec![root];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((bits(layout.lower_bound(&cells[0])), 0usize)));
    let mut dropped_min = f64::INFINITY;
    let mut examined = 0usize;
    let lower = loop {
        let Some(Reverse((lb_bits, idx))) = heap.pop() else {
            break dropped_min;
        };
        let lb = f64::from_bits(lb_bits);
        if upper - lb <= cfg.resolution {
            break lb.min(dropped_min);
        }
        examined += 1;
        if examined > cfg.max_cells {
            return Err(Error::CapExceeded {
                cap: cfg.max_cells,
                required: examined + heap.len(),
                what: "oracle cells".into(),
            });
        }
        let cell = std::mem::take(&mut cells[idx]);
        let k = (0..cell.len())
            .max_by(|&a, &b| layout.width(&cell, a).total_cmp(&layout.width(&cell, b)))
            .expect("cells are nonempty");
        let mid = 0.5 * (cell[k].0 + cell[k].1);
        for half in [(cell[k].0, mid), (mid, cell[k].1)] {
            let mut child = cell.clone();
            child[k] = half;
            let x = layout.center(&child);
            let value = evaluate_distortion(&x, space, p)?.distortion;
            if value < upper {
                upper = value;
                coords = x;
            }
            let child_lb = layout.lower_bound(&child);
            if child_lb >= upper - cfg.resolution {
                dropped_min = dropped_min.min(child_lb);
                continue;
            }
            let slot = if cells[idx].is_empty() && half.0 == cell[k].0 {
                cells[idx] = child;
                idx
            } else {
                cells.push(child);
                cells.len() - 1
            };
            heap.push(Reverse((bits(child_lb), slot)));
        }
    };
    Ok(OracleBracket {
        lower: lower.min(upper).max(1.0),
        upper,
        coords,
        cells: examined,
        refinement_gain: start_upper - upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> FiniteMetricSpace {
        FiniteMetricSpace::from_double(vec![
            vec![0.0, 1.0, 2.0, 1.0],
            vec![1.0, 0.0, 1.0, 2.0],
            vec![2.0, 1.0, 0.0, 1.0],
            vec![1.0, 2.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    #[test]
    fn equilateral_in_the_plane() {
        let tri = FiniteMetricSpace::from_double(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let b = brute_force_oracle(&tri, 2.0, 2, &OracleConfig::default()).unwrap();
        assert!(b.lower <= 1.0 + 1e-9 && b.upper <= 1.0 + 0.01);
    }

    #[test]
    fn line_in_l1_dimension_one() {
        let line = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0], vec![3.0]], 1.0).unwrap();
        let b = brute_force_oracle(&line, 1.0, 1, &OracleConfig::default()).unwrap();
        assert!(b.upper <= 1.0 + 0.01);
    }

    #[test]
    fn four_cycle_bracket() {
        let b = brute_force_oracle(&cycle4(), 2.0, 2, &OracleConfig::default()).unwrap();
        let s = 2f64.sqrt();
        assert!(b.lower <= s + 1e-9 && b.upper >= s - 1e-9, "{b:?}");
        assert!(b.upper - b.lower <= 0.01 + 1e-12);
        assert!((b.upper - s).abs() < 0.01);
        // a line cannot hold the cycle as well as the plane
        let line = brute_force_oracle(&cycle4(), 2.0, 1, &OracleConfig::default()).unwrap();
        assert!(line.lower > s);
    }

    #[test]
    fn guards() {
        let six = FiniteMetricSpace::from_points(&(0..6).map(|i| vec![i as f64]).collect::<Vec<_>>(), 2.0).unwrap();
        assert!(matches!(
            brute_force_oracle(&six, 2.0, 2, &OracleConfig::default()),
            Err(Error::SearchGuard(_))
        ));
        let cfg = OracleConfig { resolution: 1e-6, max_cells: 10 };
        assert!(matches!(
            brute_force_oracle(&cycle4(), 1.5, 2, &cfg),
            Err(Error::CapExceeded { .. })
        ));
    }
}
