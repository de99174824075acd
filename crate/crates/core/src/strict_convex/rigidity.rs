use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::level::{PointRole, SimplexScaffold};
use crate::error::{Error, Result};
use crate::vecops;

/// A point referenced by a constraint of level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "ref", content = "index", rename_all = "snake_case")]
pub enum PointRef {
    Origin,
    /// Index into the level's points.
    Local(usize),
    /// `α_{i+1} e_{i+1}` from an earlier level.
    PriorAxis(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `(0, s_n, s_{n+1})`.
    Apex,
    /// `w_{step}` on the segment from `w_{step+1}` to the dropped vertex.
    ChainStep { net: usize, step: usize },
    /// Last chain point on the edge `[s_i, s_j]`.
    FinalEdge { net: usize },
    /// `(0, α_i e_i, s_i)`.
    Axis { axis: usize },
    /// Level 1: a net point collinear with 0 and `e_1`.
    Segment { point: usize },
}

/// Linear triple `(a, b, c)`: `d(a, c) = d(a, b) + d(b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub tuple: [PointRef; 3],
}

fn vertex_index(level: &SimplexScaffold, i: usize) -> Option<usize> {
    level
        .roles
        .iter()
        .position(|r| *r == PointRole::Vertex { index: i })
}

/// Every linear triple an isometry fixing 0 has to preserve on level `n`.
/// `prior_axis_count` is the number of earlier axes tied in (`n − 1` in
/// a full witness; fewer skips the missing axis tuples).
pub fn rigidity_constraints(level: &SimplexScaffold, prior_axis_count: usize) -> Vec<Constraint> {
    let n = level.n;
    let mut out = Vec::new();
    if n == 1 {
        let anchor = level.anchors[0];
        let a_norm = vecops::norm2(&level.points[anchor]);
        for (k, p) in level.points.iter().enumerate() {
            if k == anchor {
                continue;
            }
            let (mid, far) = if vecops::norm2(p) < a_norm {
                (k, anchor)
            } else {
                (anchor, k)
            };
            out.push(Constraint {
                kind: ConstraintKind::Segment { point: k },
                tuple: [PointRef::Origin, PointRef::Local(mid), PointRef::Local(far)],
            });
        }
        return out;
    }
    let v = |i: usize| PointRef::Local(vertex_index(level, i).expect("vertices are stored"));
    out.push(Constraint {
        kind: ConstraintKind::Apex,
        tuple: [PointRef::Origin, v(n - 1), v(n)],
    });
    for (k, chain) in level.chains.iter().enumerate() {
        let mut prev = chain.z;
        for (s, link) in chain.links.iter().enumerate() {
            out.push(Constraint {
                kind: ConstraintKind::ChainStep { net: k, step: s },
                tuple: [PointRef::Local(link.point), PointRef::Local(prev), v(link.dropped)],
            });
            prev = link.point;
        }
        if let Some((i, j)) = chain.edge {
            out.push(Constraint {
                kind: ConstraintKind::FinalEdge { net: k },
                tuple: [v(i), PointRef::Local(chain.last_point()), v(j)],
            });
        }
    }
    for i in 0..prior_axis_count.min(n - 1) {
        out.push(Constraint {
            kind: ConstraintKind::Axis { axis: i },
            tuple: [PointRef::Origin, PointRef::PriorAxis(i), v(i)],
        });
    }
    out
}

/// Images of the origin, the level's points and the prior axis points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelImage {
    pub origin: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub prior_axes: Vec<Vec<f64>>,
}

impl LevelImage {
    /// The inclusion of the level into its own coordinates.
    pub fn identity(level: &SimplexScaffold, prior_axis_points: &[Vec<f64>]) -> Self {
        Self {
            origin: vec![0.0; level.n],
            points: level.points.clone(),
            prior_axes: prior_axis_points.to_vec(),
        }
    }

    /// Applies `x ↦ Qx` to every image.
    pub fn mapped(&self, q: &DMatrix<f64>) -> Self {
        let map = |x: &Vec<f64>| {
            let mut padded = x.clone();
            padded.resize(q.ncols(), 0.0);
            (q * nalgebra::DVector::from_vec(padded)).iter().copied().collect()
        };
        Self {
            origin: map(&self.origin),
            points: self.points.iter().map(map).collect(),
            prior_axes: self.prior_axes.iter().map(map).collect(),
        }
    }
}

/// Random orthogonal `dim × dim` matrix: the Q factor of a Gaussian matrix.
pub fn random_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

/// Moves the image of the first net point with a nonempty chain by
/// `amount` orthogonally to its first chain segment, leaving every other
/// image in place. Returns the perturbed image and the constraint it breaks.
pub fn perturb_chain_point(level: &SimplexScaffold, image: &LevelImage, amount: f64) -> Option<(LevelImage, Constraint)> {
    let constraints = rigidity_constraints(level, image.prior_axes.len());
    let (k, chain) = level.chains.iter().enumerate().find(|(_, c)| !c.links.is_empty())?;
    let target = *constraints
        .iter()
        .find(|c| c.kind == ConstraintKind::ChainStep { net: k, step: 0 })?;
    let [PointRef::Local(w1), _, PointRef::Local(s)] = target.tuple else {
        return None;
    };
    let dir = vecops::sub(&image.points[s], &image.points[w1]);
    let len = vecops::norm2(&dir);
    let dim = dir.len();
    // the coordinate axis least aligned with the segment, made orthogonal
    let j = (0..dim)
        .min_by(|&a, &b| dir[a].abs().total_cmp(&dir[b].abs()))?;
    let mut normal = vec![0.0; dim];
    normal[j] = 1.0;
    let along = dir[j] / (len * len);
    let normal = vecops::sub(&normal, &vecops::scale(&dir, along));
    let normal = vecops::scale(&normal, amount / vecops::norm2(&normal));
    let mut out = image.clone();
    out.points[chain.z] = vecops::add(&out.points[chain.z], &normal);
    Some((out, target))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityOutcome {
    pub passed: bool,
    pub constraints_checked: usize,
    /// First constraint whose additivity fails in the image.
    pub violated: Option<Constraint>,
    /// Additivity defect of the violated constraint.
    pub defect: f64,
    /// Numerical rank of the span of the axis images (on pass).
    pub span_rank: Option<usize>,
    /// Largest distance of a point image from that span (on pass).
    pub span_residual: Option<f64>,
}

struct Resolver<'a> {
    source: (&'a [Vec<f64>], &'a [Vec<f64>]),
    image: &'a LevelImage,
}

impl Resolver<'_> {
    fn src(&self, r: PointRef) -> Option<&[f64]> {
        match r {
            PointRef::Origin => None,
            PointRef::Local(i) => Some(&self.source.0[i]),
            PointRef::PriorAxis(i) => Some(&self.source.1[i]),
        }
    }

    fn img(&self, r: PointRef) -> &[f64] {
        match r {
            PointRef::Origin => &self.image.origin,
            PointRef::Local(i) => &self.image.points[i],
            PointRef::PriorAxis(i) => &self.image.prior_axes[i],
        }
    }

    fn src_dist(&self, a: PointRef, b: PointRef) -> f64 {
        match (self.src(a), self.src(b)) {
            (None, None) => 0.0,
            (Some(x), None) | (None, Some(x)) => vecops::norm2(x),
            (Some(x), Some(y)) => vecops::dist2(x, y),
        }
    }
}

/// Checks an image of level `n` against the rigidity constraints:
/// additivity of each triple, then that the map is an isometry, then that
/// every image lies in the span of the axis images.
pub fn verify_embedding_rigidity(
    level: &SimplexScaffold,
    prior_axis_points: &[Vec<f64>],
    image: &LevelImage,
    tol: f64,
) -> Result<RigidityOutcome> {
    if image.points.len() != level.points.len() || image.prior_axes.len() != prior_axis_points.len() {
        return Err(Error::Structural(format!(
            "image covers {} points and {} axes, level has {} and {}",
            image.points.len(),
            image.prior_axes.len(),
            level.points.len(),
            prior_axis_points.len()
        )));
    }
    let dim = image.origin.len();
    if image.points.iter().chain(&image.prior_axes).any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch("image points of mixed dimension".into()));
    }
    let scale = level
        .points
        .iter()
        .chain(prior_axis_points)
        .map(|p| vecops::norm2(p))
        .fold(1.0, f64::max);
    let eps = tol * scale;
    if vecops::norm2(&image.origin) > eps {
        return Err(Error::Structural("image of 0 must be 0".into()));
    }

    let r = Resolver {
        source: (&level.points, prior_axis_points),
        image,
    };
    let constraints = rigidity_constraints(level, prior_axis_points.len());
    for c in &constraints {
        let [a, b, d] = c.tuple;
        let ia = r.img(a);
        let ib = r.img(b);
        let id = r.img(d);
        let defect = vecops::dist2(ia, ib) + vecops::dist2(ib, id) - vecops::dist2(ia, id);
        if defect.abs() > eps {
            return Ok(RigidityOutcome {
                passed: false,
                constraints_checked: constraints.len(),
                violated: Some(*c),
                defect,
                span_rank: None,
                span_residual: None,
            });
        }
    }

    let refs: Vec<PointRef> = std::iter::once(PointRef::Origin)
        .chain((0..level.points.len()).map(PointRef::Local))
        .chain((0..prior_axis_points.len()).map(PointRef::PriorAxis))
        .collect();
    let mut worst = (0usize, 0usize, 0.0f64);
    for i in 0..refs.len() {
        for j in i + 1..refs.len() {
            let off = (r.src_dist(refs[i], refs[j]) - vecops::dist2(r.img(refs[i]), r.img(refs[j]))).abs();
            if off > worst.2 {
                worst = (i, j, off);
            }
        }
    }
    if worst.2 > eps {
        return Err(Error::NotIsometry(worst.0, worst.1, worst.2));
    }

    let axes: Vec<&[f64]> = image
        .prior_axes
        .iter()
        .map(Vec::as_slice)
        .chain(level.anchors.iter().skip(image.prior_axes.len()).map(|&a| image.points[a].as_slice()))
        .collect();
    let (rank, residual) = span_of(&axes, &image.points, dim);
    Ok(RigidityOutcome {
        passed: residual <= eps,
        constraints_checked: constraints.len(),
        violated: None,
        defect: 0.0,
        span_rank: Some(rank),
        span_residual: Some(residual),
    })
}

/// Numerical rank of `axes` and the largest distance of `points` from
/// their span.
fn span_of(axes: &[&[f64]], points: &[Vec<f64>], dim: usize) -> (usize, f64) {
    if axes.is_empty() || dim == 0 {
        let r = points.iter().map(|p| vecops::norm2(p)).fold(0.0, f64::max);
        return (0, r);
    }
    let a = DMatrix::from_fn(dim, axes.len(), |i, j| axes[j][i]);
    let svd = a.svd(true, false);
    let top = svd.singular_values.max();
    let u = svd.u.expect("requested U");
    let basis: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 1e-9 * top)
        .collect();
    let mut residual = 0.0f64;
    for p in points {
        let mut rest = nalgebra::DVector::from_column_slice(p);
        for &k in &basis {
            let col = u.column(k);
            let c = col.dot(&rest);
            rest -= col * c;
        }
        residual = residual.max(rest.norm());
    }
    (basis.len(), residual)
}
