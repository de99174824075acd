use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;
use crate::vecops;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanPointSet {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

impl EuclideanPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance from `x` to the nearest point of the set.
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        self.points
            .iter()
            .map(|p| vecops::dist2(p, x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Why the net covers the ball: every candidate is within `last_distance`
/// of the net and every ball point is within `mesh_radius` of a candidate,
/// so the covering radius is at most `last_distance + mesh_radius ≤ delta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveringCertificate {
    pub delta: f64,
    pub mesh_radius: f64,
    /// Farthest-point threshold `delta − mesh_radius`; non-seed net points
    /// are pairwise farther apart than this.
    pub stop_threshold: f64,
    pub last_distance: f64,
    pub candidates: usize,
}

impl CoveringCertificate {
    pub fn covering_bound(&self) -> f64 {
        self.last_distance + self.mesh_radius
    }
}

#[derive(Debug, Clone)]
pub struct Net {
    /// Seeds first, in the order given, then greedy picks in pick order.
    pub points: EuclideanPointSet,
    pub seeds: usize,
    pub certificate: CoveringCertificate,
}

/// Farthest-point net of the closed ball `B(center, radius)`.
///
/// Candidates are the cubic lattice of spacing `δ/(2√dim)` around the
/// center, projected onto the ball; this puts every ball point within
/// `δ/4` of a candidate. Points are added farthest-first until every
/// candidate is within `3δ/4` of the net, so the whole ball is within `δ`.
/// Without seeds the center is picked first.
pub fn greedy_net(center: &[f64], radius: f64, delta: f64, seeds: &[Vec<f64>]) -> Result<Net> {
    if !(delta > 0.0) {
        return Err(Error::Structural("δ must be positive".into()));
    }
    if !(radius >= 0.0) {
        return Err(Error::Structural("radius must be nonnegative".into()));
    }
    let dim = center.len();
    if dim == 0 {
        return Err(Error::DimensionMismatch("zero-dimensional ball".into()));
    }
    for s in seeds {
        if s.len() != dim {
            return Err(Error::DimensionMismatch("seed of wrong length".into()));
        }
        if vecops::dist2(s, center) > radius * (1.0 + 1e-12) + 1e-12 {
            return Err(Error::Structural("seed outside the ball".into()));
        }
    }
    let cap = limits::cap(limits::NET_CAP);
    let spacing = delta / (2.0 * (dim as f64).sqrt());
    let mesh_radius = delta / 4.0;
    let threshold = delta - mesh_radius;

    let reach = radius + mesh_radius;
    let k = (reach / spacing).ceil() as i64;
    let per_axis = (2 * k + 1) as f64;
    let lattice = per_axis.powi(dim as i32);
    let packing_estimate =
        ((radius + threshold / 2.0) / (threshold / 2.0)).powi(dim as i32).ceil() as usize;
    if lattice > 200.0 * cap as f64 {
        return Err(Error::NetTooLarge {
            cap,
            estimate: packing_estimate,
        });
    }

    let candidates = lattice_candidates(center, radius, spacing, k, reach);
    let index = GridIndex::new(&candidates, threshold.max(spacing));

    let mut net: Vec<Vec<f64>> = Vec::new();
    let mut dist = vec![f64::INFINITY; candidates.len()];
    let mut heap: BinaryHeap<(u64, std::cmp::Reverse<usize>)> = BinaryHeap::new();

    let add = |p: &[f64], dist: &mut Vec<f64>, heap: &mut BinaryHeap<_>, reach: f64| {
        for i in index.within(p, reach, &candidates) {
            let d = vecops::dist2(&candidates[i], p);
            if d < dist[i] {
                dist[i] = d;
                heap.push((d.to_bits(), std::cmp::Reverse(i)));
            }
        }
    };

    let firsts: Vec<Vec<f64>> = if seeds.is_empty() {
        vec![center.to_vec()]
    } else {
        seeds.to_vec()
    };
    for p in &firsts {
        add(p, &mut dist, &mut heap, f64::INFINITY);
        net.push(p.clone());
    }

    let last_distance = loop {
        let far = loop {
            match heap.peek() {
                Some(&(bits, std::cmp::Reverse(i))) if f64::from_bits(bits) != dist[i] => {
                    heap.pop();
                }
                Some(&(bits, std::cmp::Reverse(i))) => break Some((f64::from_bits(bits), i)),
                None => break None,
            }
        };
        let Some((d, i)) = far else { break 0.0 };
        if d <= threshold {
            break d;
        }
        if net.len() >= cap {
            return Err(Error::NetTooLarge {
                cap,
                estimate: packing_estimate.max(cap + 1),
            });
        }
        let p = candidates[i].clone();
        add(&p, &mut dist, &mut heap, d);
        net.push(p);
    };

    Ok(Net {
        points: EuclideanPointSet { dim, points: net },
        seeds: seeds.len(),
        certificate: CoveringCertificate {
            delta,
            mesh_radius,
            stop_threshold: threshold,
            last_distance,
            candidates: candidates.len(),
        },
    })
}

fn lattice_candidates(center: &[f64], radius: f64, spacing: f64, k: i64, reach: f64) -> Vec<Vec<f64>> {
    let dim = center.len();
    let mut out = Vec::new();
    let mut idx = vec![-k; dim];
    loop {
        let offset: Vec<f64> = idx.iter().map(|&i| i as f64 * spacing).collect();
        let len = vecops::norm2(&offset);
        if len <= reach {
            let s = if len > radius { radius / len } else { 1.0 };
            out.push(vecops::add(center, &vecops::scale(&offset, s)));
        }
        let Some(pos) = (0..dim).rev().find(|&p| idx[p] < k) else {
            break;
        };
        idx[pos] += 1;
        for q in (pos + 1)..dim {
            idx[q] = -k;
        }
    }
    out
}

/// Uniform bucket grid over candidate points for radius queries.
struct GridIndex {
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl GridIndex {
    fn new(points: &[Vec<f64>], cell: f64) -> Self {
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { cell, buckets }
    }

    fn key(p: &[f64], cell: f64) -> Vec<i64> {
        p.iter().map(|x| (x / cell).floor() as i64).collect()
    }

    /// Indices of points possibly within `r` of `p` (a superset).
    fn within<'a>(&'a self, p: &[f64], r: f64, points: &'a [Vec<f64>]) -> Vec<usize> {
        let span = (r / self.cell).ceil();
        let cells_per_axis = 2.0 * span + 1.0;
        if !r.is_finite() || cells_per_axis.powi(p.len() as i32) > self.buckets.len() as f64 {
            return (0..points.len()).collect();
        }
        let span = span as i64;
        let base = Self::key(p, self.cell);
        let dim = p.len();
        let mut out = Vec::new();
        let mut off = vec![-span; dim];
        loop {
            let key: Vec<i64> = base.iter().zip(&off).map(|(b, o)| b + o).collect();
            if let Some(b) = self.buckets.get(&key) {
                out.extend_from_slice(b);
            }
            let Some(pos) = (0..dim).rev().find(|&q| off[q] < span) else {
                break;
            };
            off[pos] += 1;
            for q in (pos + 1)..dim {
                off[q] = -span;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn segment_net_keeps_the_seed() {
        let net = greedy_net(&[1.0], 1.0, 0.5, &[vec![1.0]]).unwrap();
        let mut xs: Vec<f64> = net.points.points.iter().map(|p| p[0]).collect();
        assert!(xs.contains(&1.0));
        xs.sort_by(f64::total_cmp);
        assert!((4..=6).contains(&xs.len()), "{xs:?}");
        assert_eq!(xs.first(), Some(&0.0));
        assert_eq!(xs.last(), Some(&2.0));
    }

    #[test]
    fn coarse_delta_gives_the_center() {
        let net = greedy_net(&[3.0, -1.0], 1.0, 2.5, &[]).unwrap();
        assert_eq!(net.points.points, vec![vec![3.0, -1.0]]);
    }

    #[test]
    fn monte_carlo_covering_in_the_disc() {
        let delta = 0.4;
        let net = greedy_net(&[0.0, 0.0], 1.0, delta, &[]).unwrap();
        assert!(net.certificate.covering_bound() <= delta + 1e-12);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 10_000 {
            let p = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            if vecops::norm2(&p) > 1.0 {
                continue;
            }
            assert!(net.points.distance_to(&p) <= delta);
            checked += 1;
        }
        let pts = &net.points.points;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                assert!(vecops::dist2(&pts[i], &pts[j]) > net.certificate.stop_threshold);
            }
            assert!(vecops::norm2(&pts[i]) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn refuses_oversized_nets() {
        assert!(matches!(
            greedy_net(&[0.0; 6], 1.0, 0.01, &[]),
            Err(Error::NetTooLarge { .. })
        ));
    }
}
