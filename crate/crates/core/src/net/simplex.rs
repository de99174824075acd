use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::vecops;

/// Barycentric weights above `-BARYCENTRIC_TOL` are treated as inside.
pub const BARYCENTRIC_TOL: f64 = 1e-12;

const SPAN_TOL: f64 = 1e-9;

/// A facet as a half-space `normal · x ≤ offset` of the affine span,
/// with `normal` a unit vector in ambient coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    /// The vertex this facet is opposite to.
    pub opposite: usize,
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// The convex hull of affinely independent vertices, possibly in a higher
/// ambient dimension.
#[derive(Debug, Clone)]
pub struct Simplex {
    vertices: Vec<Vec<f64>>,
    /// Orthonormal basis of the affine span's direction space.
    basis: Vec<Vec<f64>>,
    /// Rows map local coordinates (relative to vertex 0) to barycentric
    /// weights of vertices `1..k`.
    bary: DMatrix<f64>,
}

impl Simplex {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Structural("a simplex needs at least 2 vertices".into()));
        }
        let dim = vertices[0].len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch("vertices of different lengths".into()));
        }
        let scale = vertices
            .iter()
            .map(|v| vecops::dist2(v, &vertices[0]))
            .fold(0.0, f64::max);
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for v in &vertices[1..] {
            let mut w = vecops::sub(v, &vertices[0]);
            for _ in 0..2 {
                for b in &basis {
                    let c = vecops::dot(&w, b);
                    w = vecops::sub(&w, &vecops::scale(b, c));
                }
            }
            let len = vecops::norm2(&w);
            if len <= SPAN_TOL * scale.max(1.0) {
                return Err(Error::NoInterior);
            }
            basis.push(vecops::scale(&w, 1.0 / len));
        }
        let m = basis.len();
        let local = DMatrix::from_fn(m, m, |r, c| {
            vecops::dot(&vecops::sub(&vertices[c + 1], &vertices[0]), &basis[r])
        });
        let bary = local.try_inverse().ok_or(Error::NoInterior)?;
        Ok(Self {
            vertices,
            basis,
            bary,
        })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Dimension of the affine span.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.vertices.iter().map(|v| vecops::scale(v, lambda)).collect())
    }

    fn to_local(&self, x: &[f64]) -> Result<DVector<f64>> {
        if x.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, simplex lives in {}",
                x.len(),
                self.ambient_dim()
            )));
        }
        let rel = vecops::sub(x, &self.vertices[0]);
        let local: Vec<f64> = self.basis.iter().map(|b| vecops::dot(&rel, b)).collect();
        let mut back = rel.clone();
        for (b, c) in self.basis.iter().zip(&local) {
            back = vecops::sub(&back, &vecops::scale(b, *c));
        }
        let off = vecops::norm2(&back);
        let scale = vecops::norm2(&rel).max(1.0);
        if off > SPAN_TOL * scale {
            return Err(Error::DimensionMismatch(format!(
                "point is {off:e} off the affine span"
            )));
        }
        Ok(DVector::from_vec(local))
    }

    fn from_local(&self, y: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .zip(y)
            .fold(self.vertices[0].clone(), |acc, (b, c)| {
                vecops::add(&acc, &vecops::scale(b, *c))
            })
    }

    /// Affine barycentric weight functions: weight `j` is `g_j · y + c_j`.
    fn weight_functions(&self) -> Vec<(Vec<f64>, f64)> {
        let m = self.dim();
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|r| (0..m).map(|c| self.bary[(r, c)]).collect())
            .collect();
        let g0: Vec<f64> = (0..m).map(|c| -rows.iter().map(|r| r[c]).sum::<f64>()).collect();
        std::iter::once((g0, 1.0))
            .chain(rows.into_iter().map(|r| (r, 0.0)))
            .collect()
    }

    /// Barycentric coordinates of a point of the affine span.
    pub fn barycentric(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.to_local(x)?;
        let rest = &self.bary * &y;
        let mut w = Vec::with_capacity(self.vertices.len());
        w.push(1.0 - rest.sum());
        w.extend(rest.iter());
        Ok(w)
    }

    pub fn point_from_weights(&self, w: &[f64]) -> Vec<f64> {
        let dim = self.ambient_dim();
        self.vertices
            .iter()
            .zip(w)
            .fold(vec![0.0; dim], |acc, (v, wi)| vecops::add(&acc, &vecops::scale(v, *wi)))
    }

    /// Facet half-spaces in ambient coordinates. Each vertex satisfies all of them.
    pub fn facets(&self) -> Vec<Facet> {
        self.weight_functions()
            .into_iter()
            .enumerate()
            .map(|(j, (g, c))| {
                let len = vecops::norm2(&g);
                // weight_j ≥ 0  ⇔  (−g/|g|)·y ≤ c/|g|
                let local_normal = vecops::scale(&g, -1.0 / len);
                let normal = self
                    .basis
                    .iter()
                    .zip(&local_normal)
                    .fold(vec![0.0; self.ambient_dim()], |acc, (b, a)| {
                        vecops::add(&acc, &vecops::scale(b, *a))
                    });
                let offset = c / len + vecops::dot(&normal, &self.vertices[0]);
                Facet {
                    opposite: j,
                    normal,
                    offset,
                }
            })
            .collect()
    }

    /// Euclidean distance from `x` (in the span) to each facet hyperplane,
    /// signed positive inside.
    pub fn facet_slacks(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.to_local(x)?;
        Ok(self
            .weight_functions()
            .into_iter()
            .map(|(g, c)| (vecops::dot(&g, y.as_slice()) + c) / vecops::norm2(&g))
            .collect())
    }
}

/// Center and radius of the largest ball inside the simplex (within its
/// affine span), from the LP `max r` s.t. every facet slack is at least `r`.
pub fn chebyshev_center(simplex: &Simplex) -> Result<(Vec<f64>, f64)> {
    let m = simplex.dim();
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let ys: Vec<_> = (0..m)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let r = lp.add_var(1.0, (0.0, f64::INFINITY));
    for (g, c) in simplex.weight_functions() {
        let len = vecops::norm2(&g);
        // (g·y + c)/|g| ≥ r
        let mut terms: Vec<_> = ys.iter().zip(&g).map(|(&v, gi)| (v, -gi / len)).collect();
        terms.push((r, 1.0));
        lp.add_constraint(&terms[..], ComparisonOp::Le, c / len);
    }
    let sol = lp.solve().map_err(|e| Error::Lp(e.to_string()))?;
    let y: Vec<f64> = ys.iter().map(|&v| sol[v]).collect();
    let radius = sol[r];
    if radius <= 0.0 {
        return Err(Error::NoInterior);
    }
    Ok((simplex.from_local(&y), radius))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Containment {
    pub contained: bool,
    /// Facet with the smallest slack.
    pub worst_facet: usize,
    pub min_slack: f64,
}

/// Whether the ball of `radius` around `center` lies in the simplex:
/// every facet is at distance at least `radius − 1e-9` from the center.
pub fn simplex_contains_ball(simplex: &Simplex, center: &[f64], radius: f64) -> Result<Containment> {
    let slacks = simplex.facet_slacks(center)?;
    let (worst_facet, &min_slack) = slacks
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("a simplex has facets");
    Ok(Containment {
        contained: min_slack >= radius - 1e-9,
        worst_facet,
        min_slack,
    })
}

/// One step of a chain: the new point `w_k` and the vertex dropped to reach
/// it. The previous point lies on the segment `[w_k, vertex]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub point: Vec<f64>,
    pub dropped: usize,
    /// Barycentric weights of `point`.
    pub weights: Vec<f64>,
}

/// Walks `z` outward through faces of decreasing dimension, dropping the
/// lowest-index vertex that still has positive weight, until the current
/// point is a vertex or lies on an edge.
pub fn chain_points(z: &[f64], simplex: &Simplex) -> Result<Vec<ChainStep>> {
    let mut w = simplex.barycentric(z)?;
    if let Some((vertex, &weight)) = w
        .iter()
        .enumerate()
        .find(|(_, &wi)| wi < -BARYCENTRIC_TOL)
    {
        return Err(Error::OutsideSimplex { vertex, weight });
    }
    for wi in w.iter_mut() {
        if *wi < BARYCENTRIC_TOL {
            *wi = 0.0;
        }
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|wi| *wi /= total);

    let mut steps = Vec::new();
    loop {
        let support: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
        if support.len() <= 2 {
            return Ok(steps);
        }
        let dropped = support[0];
        let lambda = w[dropped];
        w[dropped] = 0.0;
        w.iter_mut().for_each(|wi| *wi /= 1.0 - lambda);
        steps.push(ChainStep {
            point: simplex.point_from_weights(&w),
            dropped,
            weights: w.clone(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Simplex {
        Simplex::new(vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 4.0]]).unwrap()
    }

    #[test]
    fn right_triangle_inradius() {
        let (c, r) = chebyshev_center(&triangle()).unwrap();
        let expected = 4.0 - 2.0 * 2f64.sqrt();
        assert!((r - expected).abs() < 1e-9);
        assert!((c[0] - expected).abs() < 1e-9 && (c[1] - expected).abs() < 1e-9);
    }

    #[test]
    fn segment_in_higher_dimension() {
        let s = Simplex::new(vec![vec![1.0, 1.0, 0.0], vec![3.0, 1.0, 0.0]]).unwrap();
        let (c, r) = chebyshev_center(&s).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        assert!(vecops::dist2(&c, &[2.0, 1.0, 0.0]) < 1e-9);
    }

    #[test]
    fn homogeneity() {
        let (c, r) = chebyshev_center(&triangle()).unwrap();
        let (c3, r3) = chebyshev_center(&triangle().scaled(3.0).unwrap()).unwrap();
        assert!((r3 - 3.0 * r).abs() < 1e-8);
        assert!(vecops::dist2(&c3, &vecops::scale(&c, 3.0)) < 1e-8);
    }

    #[test]
    fn flat_simplex_has_no_interior() {
        let flat = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(matches!(flat, Err(Error::NoInterior)));
    }

    #[test]
    fn facets_hold_at_vertices() {
        let s = triangle();
        for f in s.facets() {
            for (i, v) in s.vertices().iter().enumerate() {
                let lhs = vecops::dot(&f.normal, v);
                assert!(lhs <= f.offset + 1e-12);
                if i != f.opposite {
                    assert!((lhs - f.offset).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn containment_around_inradius() {
        let s = triangle();
        let (c, r) = chebyshev_center(&s).unwrap();
        assert!(simplex_contains_ball(&s, &c, r - 1e-6).unwrap().contained);
        assert!(!simplex_contains_ball(&s, &c, r + 1e-6).unwrap().contained);
        let tilted = Simplex::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        assert!(matches!(
            simplex_contains_ball(&tilted, &[0.2, 0.2, 0.5], 0.01),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn chain_in_a_triangle() {
        let s = triangle();
        let chain = chain_points(&[1.0, 1.0], &s).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain[0].dropped, 0);
        assert!(vecops::dist2(&chain[0].point, &[2.0, 2.0]) < 1e-12);
        assert!(chain_points(&[4.0, 0.0], &s).unwrap().is_empty());
        assert!(chain_points(&[2.0, 0.0], &s).unwrap().is_empty());
        assert!(matches!(
            chain_points(&[3.0, 3.0], &s),
            Err(Error::OutsideSimplex { .. })
        ));
    }
}
