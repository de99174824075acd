use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{
    chain_points, chebyshev_center, greedy_net, simplex_contains_ball, EuclideanPointSet,
    NetSchedule, Simplex,
};
use crate::vecops;

/// Ray coordinates of one level: `s_i = t·e_i` for `i ≤ n` and
/// `s_{n+1} = u·e_n`. Level 1 is the segment `[0, u·e_1]` with anchor
/// `t·e_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelParams {
    pub n: usize,
    pub t: f64,
    pub u: f64,
}

impl LevelParams {
    /// `t = 4n(n+1)`, `u = 2t`; level 1 is `t = 1`, `u = 2`.
    pub fn default_for(n: usize) -> Self {
        if n == 1 {
            return Self { n, t: 1.0, u: 2.0 };
        }
        let t = 4.0 * n as f64 * (n as f64 + 1.0);
        Self { n, t, u: 2.0 * t }
    }

    pub fn vertices(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        if n == 1 {
            return vec![vec![0.0], vec![self.u]];
        }
        let mut out: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n];
                v[i] = self.t;
                v
            })
            .collect();
        let mut apex = vec![0.0; n];
        apex[n - 1] = self.u;
        out.push(apex);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum PointRole {
    /// Simplex vertex `s_{i+1}`.
    Vertex { index: usize },
    Net { index: usize },
    /// Chain point `w_{step+1}` of net point `net`.
    Chain { net: usize, step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    /// Index into the level's points.
    pub point: usize,
    /// Simplex vertex dropped to reach this point.
    pub dropped: usize,
}

/// Chain of one net point: `z = w_0, w_1, …` with `w_{k−1}` on the
/// segment `[w_k, s_dropped]`, ending on the edge `[s_i, s_j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    /// Index of `z` among the level's points.
    pub z: usize,
    pub links: Vec<ChainLink>,
    /// Vertices spanning the edge holding the last chain point, if that
    /// point is not itself a vertex.
    pub edge: Option<(usize, usize)>,
}

impl Chain {
    /// Index of the last point of the chain (`z` when empty).
    pub fn last_point(&self) -> usize {
        self.links.last().map_or(self.z, |l| l.point)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCertificate {
    /// Smallest facet slack of the unit ball around `y`; contained iff ≥ 1.
    pub ball_slack: f64,
    pub ball_contained: bool,
    /// Lower bound on the distance from the simplex to the origin, from the
    /// functional `x ↦ Σ x_i / √n` (0 for level 1).
    pub origin_distance_bound: f64,
    /// Smallest norm over the level's points.
    pub min_point_norm: f64,
    pub covering_bound: f64,
    pub net_separation: f64,
}

/// Level `n` of the witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexScaffold {
    pub n: usize,
    pub params: LevelParams,
    pub delta: f64,
    pub vertices: Vec<Vec<f64>>,
    /// Center `y_n` of the unit ball.
    pub y: Vec<f64>,
    pub inradius: f64,
    pub net: EuclideanPointSet,
    pub chains: Vec<Chain>,
    /// `M_n`: deduplicated vertices (level ≥ 2), net points and chain
    /// points, excluding the origin.
    pub points: Vec<Vec<f64>>,
    pub roles: Vec<PointRole>,
    /// Indices of the ray points `s_1 … s_n` (level 1: `e_1`).
    pub anchors: Vec<usize>,
    pub certificate: LevelCertificate,
}

struct PointTable {
    points: Vec<Vec<f64>>,
    roles: Vec<PointRole>,
    seen: HashMap<Vec<u64>, usize>,
}

impl PointTable {
    fn new() -> Self {
        Self {
            points: Vec::new(),
            roles: Vec::new(),
            seen: HashMap::new(),
        }
    }

    /// Index of `p`, inserting it if new; `None` for the origin.
    fn insert(&mut self, p: Vec<f64>, role: PointRole) -> Option<usize> {
        if p.iter().all(|&x| x == 0.0) {
            return None;
        }
        let key: Vec<u64> = p.iter().map(|x| (x + 0.0).to_bits()).collect();
        if let Some(&i) = self.seen.get(&key) {
            return Some(i);
        }
        let i = self.points.len();
        self.seen.insert(key, i);
        self.points.push(p);
        self.roles.push(role);
        Some(i)
    }
}

/// Builds level `n`: vertices on the rays, `y_n` at the Chebyshev center, a
/// `δ_n`-net of the unit ball around `y_n`, and every net point's chain.
pub fn build_level(n: usize, schedule: &NetSchedule, params: Option<LevelParams>) -> Result<SimplexScaffold> {
    if n == 0 {
        return Err(Error::Structural("levels start at 1".into()));
    }
    let params = params.unwrap_or_else(|| LevelParams::default_for(n));
    if params.n != n {
        return Err(Error::Structural(format!("params for level {} used at level {n}", params.n)));
    }
    let fail = |certificate: String| Error::Construction { level: n, certificate };
    if !(params.t > 0.0 && params.u > params.t) {
        return Err(fail(format!("need 0 < t < u, got t = {}, u = {}", params.t, params.u)));
    }
    let delta = schedule.delta(n);
    let vertices = params.vertices();
    let simplex = Simplex::new(vertices.clone()).map_err(|e| fail(e.to_string()))?;
    let mut table = PointTable::new();

    let (y, inradius, net, chains, anchors) = if n == 1 {
        // the segment [0, u·e_1], its midpoint ball and a net seeded with t·e_1
        let y = vec![params.u / 2.0];
        let inradius = params.u / 2.0;
        let anchor = vec![params.t];
        let net = greedy_net(&y, 1.0, delta, &[anchor.clone()]).map_err(|e| fail(e.to_string()))?;
        for (k, p) in net.points.points.iter().enumerate() {
            table.insert(p.clone(), PointRole::Net { index: k });
        }
        let a = table.insert(anchor, PointRole::Net { index: 0 }).expect("anchor is nonzero");
        (y, inradius, net, Vec::new(), vec![a])
    } else {
        let (y, inradius) = chebyshev_center(&simplex).map_err(|e| fail(e.to_string()))?;
        // refuse before netting: a ball poking out of the simplex has no chains
        let containment = simplex_contains_ball(&simplex, &y, 1.0)?;
        if !containment.contained {
            return Err(fail(format!(
                "unit ball around y_{n} not contained (slack {})",
                containment.min_slack
            )));
        }
        let vertex_idx: Vec<usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| table.insert(v.clone(), PointRole::Vertex { index: i }).expect("vertices are nonzero"))
            .collect();
        let net = greedy_net(&y, 1.0, delta, &[]).map_err(|e| fail(e.to_string()))?;
        let mut chains = Vec::with_capacity(net.points.len());
        for (k, z) in net.points.points.iter().enumerate() {
            let zi = table.insert(z.clone(), PointRole::Net { index: k }).expect("net avoids the origin");
            let steps = chain_points(z, &simplex).map_err(|e| fail(e.to_string()))?;
            let mut links = Vec::with_capacity(steps.len());
            for (s, step) in steps.iter().enumerate() {
                let point = table
                    .insert(step.point.clone(), PointRole::Chain { net: k, step: s })
                    .expect("chain avoids the origin");
                links.push(ChainLink { point, dropped: step.dropped });
            }
            let last_weights = match steps.last() {
                Some(s) => s.weights.clone(),
                None => simplex.barycentric(z).map_err(|e| fail(e.to_string()))?,
            };
            let support: Vec<usize> = (0..last_weights.len())
                .filter(|&i| last_weights[i] > crate::net::BARYCENTRIC_TOL)
                .collect();
            let edge = (support.len() == 2).then(|| (support[0], support[1]));
            chains.push(Chain { z: zi, links, edge });
        }
        let anchors = vertex_idx[..n].to_vec();
        (y, inradius, net, chains, anchors)
    };

    let scaffold_net = net;
    let mut scaffold = SimplexScaffold {
        n,
        params,
        delta,
        vertices,
        y,
        inradius,
        net: scaffold_net.points,
        chains,
        points: table.points,
        roles: table.roles,
        anchors,
        certificate: LevelCertificate {
            ball_slack: 0.0,
            ball_contained: false,
            origin_distance_bound: 0.0,
            min_point_norm: 0.0,
            covering_bound: scaffold_net.certificate.covering_bound(),
            net_separation: scaffold_net.certificate.stop_threshold,
        },
    };
    scaffold.certificate = certify_level(&scaffold)?;
    let c = &scaffold.certificate;
    if !c.ball_contained {
        return Err(fail(format!("unit ball around y_{n} not contained (slack {})", c.ball_slack)));
    }
    if n >= 2 && c.origin_distance_bound < n as f64 {
        return Err(fail(format!(
            "simplex only {} from the origin, need {n}",
            c.origin_distance_bound
        )));
    }
    Ok(scaffold)
}

/// Recomputes the containment and distance certificates from the stored
/// geometry.
pub fn certify_level(level: &SimplexScaffold) -> Result<LevelCertificate> {
    let n = level.n;
    let simplex = Simplex::new(level.vertices.clone())?;
    let containment = simplex_contains_ball(&simplex, &level.y, 1.0)?;
    let origin_distance_bound = if n == 1 {
        0.0
    } else {
        let root = (n as f64).sqrt();
        level
            .vertices
            .iter()
            .map(|v| v.iter().sum::<f64>() / root)
            .fold(f64::INFINITY, f64::min)
    };
    let min_point_norm = level
        .points
        .iter()
        .map(|p| vecops::norm2(p))
        .fold(f64::INFINITY, f64::min);
    Ok(LevelCertificate {
        ball_slack: containment.min_slack,
        ball_contained: containment.contained,
        origin_distance_bound,
        min_point_norm,
        covering_bound: level.certificate.covering_bound,
        net_separation: level.certificate.net_separation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(n: usize) -> SimplexScaffold {
        build_level(n, &NetSchedule::default(), None).unwrap()
    }

    #[test]
    fn level_one_is_a_segment_net_with_e1() {
        let l = level(1);
        assert_eq!(l.vertices, vec![vec![0.0], vec![2.0]]);
        assert_eq!(l.points[l.anchors[0]], vec![1.0]);
        assert!(l.points.iter().all(|p| p[0] > 0.0 && p[0] <= 2.0));
        assert!(l.chains.is_empty());
    }

    #[test]
    fn level_two_defaults() {
        let l = level(2);
        assert_eq!(l.params, LevelParams { n: 2, t: 24.0, u: 48.0 });
        assert_eq!(
            l.vertices,
            vec![vec![24.0, 0.0], vec![0.0, 24.0], vec![0.0, 48.0]]
        );
        assert!(l.certificate.ball_contained);
        assert!(l.certificate.min_point_norm >= 2.0);
        assert!(l.certificate.origin_distance_bound >= 2.0);
        assert_eq!(l.chains.len(), l.net.len());
    }

    #[test]
    fn chains_are_linear_and_short() {
        let l = level(3);
        for chain in &l.chains {
            assert!(chain.links.len() <= l.vertices.len() - 2);
            let mut prev = &l.points[chain.z];
            for link in &chain.links {
                let w = &l.points[link.point];
                let s = &l.vertices[link.dropped];
                let defect = vecops::dist2(w, prev) + vecops::dist2(prev, s) - vecops::dist2(w, s);
                assert!(defect.abs() < 1e-9 * vecops::norm2(s));
                prev = w;
            }
        }
    }

    #[test]
    fn bad_params_name_the_certificate() {
        let params = LevelParams { n: 3, t: 2.0, u: 4.0 };
        match build_level(3, &NetSchedule::default(), Some(params)) {
            Err(Error::Construction { level: 3, certificate }) => {
                assert!(certificate.contains("not contained") || certificate.contains("origin"), "{certificate}")
            }
            other => panic!("{other:?}"),
        }
        let params = LevelParams { n: 2, t: 5.0, u: 4.0 };
        assert!(build_level(2, &NetSchedule::default(), Some(params)).is_err());
    }

    #[test]
    fn coarse_delta_leaves_one_net_point() {
        let l = build_level(2, &NetSchedule::constant(10.0).unwrap(), None).unwrap();
        assert_eq!(l.net.len(), 1);
        assert!(l.certificate.ball_contained);
    }

    #[test]
    fn scaffold_round_trips_through_json() {
        let l = level(2);
        let json = serde_json::to_string(&l).unwrap();
        let back: SimplexScaffold = serde_json::from_str(&json).unwrap();
        assert_eq!(back, l);
        assert_eq!(certify_level(&back).unwrap(), l.certificate);
    }
}
