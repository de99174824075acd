use serde::{Deserialize, Serialize};

use super::level::{build_level, LevelParams, SimplexScaffold};
use crate::error::{Error, Result};
use crate::limits;
use crate::metric::{FiniteMetricSpace, LevelledFamily};
use crate::net::NetSchedule;
use crate::vecops;

/// A point of the assembled witness, in `R^{N_max}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPoint {
    /// 0 for the origin.
    pub level: usize,
    /// Index into the level's points.
    pub local: usize,
    pub coords: Vec<f64>,
}

/// `{0} ∪ M_1 ∪ … ∪ M_N` with the axis scalars `α_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpace {
    pub levels: Vec<SimplexScaffold>,
    /// `α_i e_i = s^i_i`, with `α_1 = 1`.
    pub alphas: Vec<f64>,
}

/// Builds levels `1..=max_level` under the `LP_EMBED_CAP` point cap.
pub fn build_space(max_level: usize, schedule: &NetSchedule) -> Result<WitnessSpace> {
    if max_level == 0 {
        return Err(Error::Structural("need at least one level".into()));
    }
    let cap = limits::cap(limits::WITNESS_CAP);
    let mut space = WitnessSpace {
        levels: Vec::with_capacity(max_level),
        alphas: Vec::with_capacity(max_level),
    };
    let mut total = 1usize;
    for n in 1..=max_level {
        let level = build_level(n, schedule, None).map_err(|e| match e {
            Error::NetTooLarge { cap, estimate } => Error::PartialBuild {
                completed: n - 1,
                reason: format!("level {n} net needs about {estimate} points, cap {cap}"),
            },
            other => other,
        })?;
        total += level.points.len();
        if total > cap {
            return Err(Error::PartialBuild {
                completed: n - 1,
                reason: format!("level {n} brings the witness to {total} points, cap {cap}"),
            });
        }
        space.alphas.push(level.points[level.anchors[n - 1]][n - 1]);
        space.levels.push(level);
    }
    Ok(space)
}

impl WitnessSpace {
    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> Option<&SimplexScaffold> {
        n.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn params(&self) -> Vec<LevelParams> {
        self.levels.iter().map(|l| l.params).collect()
    }

    pub fn len(&self) -> usize {
        1 + self.levels.iter().map(|l| l.points.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `α_i e_i` for `i < n`, in `R^n`.
    pub fn prior_axis_points(&self, n: usize) -> Vec<Vec<f64>> {
        (0..n.saturating_sub(1).min(self.alphas.len()))
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = self.alphas[i];
                v
            })
            .collect()
    }

    /// Origin first, then each level's points, padded to `R^{N_max}`.
    pub fn points(&self) -> Vec<WitnessPoint> {
        let dim = self.max_level();
        let mut out = vec![WitnessPoint {
            level: 0,
            local: 0,
            coords: vec![0.0; dim],
        }];
        for level in &self.levels {
            for (k, p) in level.points.iter().enumerate() {
                let mut coords = p.clone();
                coords.resize(dim, 0.0);
                out.push(WitnessPoint {
                    level: level.n,
                    local: k,
                    coords,
                });
            }
        }
        out
    }

    /// Euclidean distance matrix of the witness, labelled `0` and
    /// `L{n}:{k}`. Refused above the export cap.
    pub fn to_metric_space(&self) -> Result<FiniteMetricSpace> {
        let cap = limits::cap(limits::EXPORT_CAP);
        let n = self.len();
        if n > cap {
            return Err(Error::CapExceeded {
                cap,
                required: n,
                what: "witness points for a distance matrix".into(),
            });
        }
        let pts = self.points();
        let coords: Vec<Vec<f64>> = pts.iter().map(|p| p.coords.clone()).collect();
        let labels = pts
            .iter()
            .map(|p| match p.level {
                0 => "0".to_string(),
                l => format!("L{l}:{}", p.local),
            })
            .collect();
        FiniteMetricSpace::from_points(&coords, 2.0)?.with_labels(labels)
    }

    /// Sidecar form: `{"levels": [...]}` with the full scaffold of each level.
    pub fn scaffold_json(&self) -> serde_json::Value {
        serde_json::json!({ "levels": self.levels, "alphas": self.alphas })
    }

    pub fn from_scaffold_json(value: serde_json::Value) -> Result<Self> {
        let space: Self = serde_json::from_value(value)?;
        for (i, level) in space.levels.iter().enumerate() {
            if level.n != i + 1 {
                return Err(Error::Structural(format!("level {} stored at position {}", level.n, i + 1)));
            }
        }
        if space.alphas.len() != space.levels.len() {
            return Err(Error::Structural("one α per level expected".into()));
        }
        Ok(space)
    }
}

impl LevelledFamily for WitnessSpace {
    /// `(level, local index)`; the origin is `(0, 0)`.
    type Member = (usize, usize);
    type Norm = f64;

    fn level_members(&self, level: usize) -> Vec<((usize, usize), f64)> {
        if level == 0 {
            return vec![((0, 0), 0.0)];
        }
        self.level(level)
            .map(|l| {
                l.points
                    .iter()
                    .enumerate()
                    .map(|(k, p)| ((level, k), vecops::norm2(p)))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Levels `n ≥ 2` sit at distance at least `n` from the origin.
    fn tail_norm_bound(&self, level: usize) -> Option<f64> {
        Some(if level < 2 { 0.0 } else { level as f64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{find_linear_tuples, is_linear_tuple};
    use crate::metric::ball_count;

    #[test]
    fn one_level_is_collinear() {
        let space = build_space(1, &NetSchedule::default()).unwrap();
        assert_eq!(space.alphas, vec![1.0]);
        let metric = space.to_metric_space().unwrap();
        for i in 1..metric.len() {
            for j in i + 1..metric.len() {
                let (a, b) = if metric.d(0, i) < metric.d(0, j) { (i, j) } else { (j, i) };
                assert!(is_linear_tuple(&metric, &[0, a, b]).unwrap());
            }
        }
        let triples = find_linear_tuples(&metric, 3).unwrap();
        let n = metric.len();
        assert_eq!(triples.len(), n * (n - 1) * (n - 2) / 6);
    }

    #[test]
    fn ball_of_radius_2_5_misses_level_3() {
        let space = build_space(3, &NetSchedule::default()).unwrap();
        let ball = ball_count(&space, &2.5).unwrap();
        assert!(ball.members.iter().all(|&(l, _)| l <= 1));
        assert_eq!(ball.cutoff_level, 3);
        assert_eq!(space.alphas, vec![1.0, 24.0, 48.0]);
    }

    #[test]
    fn sidecar_round_trip() {
        let space = build_space(2, &NetSchedule::default()).unwrap();
        let back = WitnessSpace::from_scaffold_json(space.scaffold_json()).unwrap();
        assert_eq!(back, space);
    }
}
