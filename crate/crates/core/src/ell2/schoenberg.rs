use serde::Serialize;

use super::jacobi::symmetric_eigen;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::metric::FiniteMetricSpace;
use crate::vecops;

/// Eigenvalues above `-PSD_REL_TOL · ‖G‖_F` count as nonnegative.
pub const PSD_REL_TOL: f64 = 1e-9;

/// `G[i][j] = (d(x₀,x_i)² + d(x₀,x_j)² − d(x_i,x_j)²) / 2` over the
/// non-base points, in their original order.
#[derive(Debug, Clone)]
pub struct SchoenbergMatrix {
    pub base: usize,
    /// Point index behind each row.
    pub points: Vec<usize>,
    pub values: Vec<Vec<f64>>,
    /// Present when the space is rational.
    pub exact: Option<Vec<Vec<Rational>>>,
}

impl SchoenbergMatrix {
    pub fn frobenius(&self) -> f64 {
        self.values.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `vᵀ G v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(v)
            .map(|(row, vi)| vi * vecops::dot(row, v))
            .sum()
    }
}

pub fn schoenberg_matrix(space: &FiniteMetricSpace, base: usize) -> Result<SchoenbergMatrix> {
    let n = space.len();
    if n < 2 {
        return Err(Error::Structural("need at least 2 points".into()));
    }
    if base >= n {
        return Err(Error::Structural(format!("base {base} out of range")));
    }
    let points: Vec<usize> = (0..n).filter(|&i| i != base).collect();
    let values = points
        .iter()
        .map(|&i| {
            points
                .iter()
                .map(|&j| {
                    let (a, b, c) = (space.d(base, i), space.d(base, j), space.d(i, j));
                    (a * a + b * b - c * c) / 2.0
                })
                .collect()
        })
        .collect();
    let exact = space.d_exact(0, 0).map(|_| {
        let d = |i, j| space.d_exact(i, j).expect("rational");
        points
            .iter()
            .map(|&i| {
                points
                    .iter()
                    .map(|&j| {
                        let (a, b, c) = (d(base, i), d(base, j), d(i, j));
                        (a * a + b * b - c * c) / exact::int(2)
                    })
                    .collect()
            })
            .collect()
    });
    Ok(SchoenbergMatrix {
        base,
        points,
        values,
        exact,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum L2Verdict {
    /// Coordinates for every point (base at the origin), one row per point.
    Embeddable { coords: Vec<Vec<f64>>, rank: usize },
    /// Unit vector `v` over the non-base points with `vᵀGv = eigenvalue < 0`.
    NotEmbeddable {
        eigenvalue: f64,
        certificate: Vec<f64>,
        points: Vec<usize>,
    },
}

impl L2Verdict {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, Self::Embeddable { .. })
    }
}

/// Decides isometric embeddability into `ℓ_2` with base point 0.
pub fn embeds_isometrically_l2(space: &FiniteMetricSpace) -> Result<L2Verdict> {
    if space.len() == 1 {
        return Ok(L2Verdict::Embeddable {
            coords: vec![vec![]],
            rank: 0,
        });
    }
    let g = schoenberg_matrix(space, 0)?;
    let eig = symmetric_eigen(&g.values)?;
    let scale = g.frobenius();
    let tol = PSD_REL_TOL * scale;
    let (min_k, &min_val) = eig
        .values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    if min_val < -tol {
        return Ok(L2Verdict::NotEmbeddable {
            eigenvalue: min_val,
            certificate: eig.vectors[min_k].clone(),
            points: g.points,
        });
    }
    let kept: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > tol)
        .collect();
    let mut coords = vec![vec![0.0; kept.len()]; space.len()];
    for (row, &p) in g.points.iter().enumerate() {
        coords[p] = kept
            .iter()
            .map(|&k| eig.vectors[k][row] * eig.values[k].sqrt())
            .collect();
    }
    Ok(L2Verdict::Embeddable {
        coords,
        rank: kept.len(),
    })
}

/// Whether every point lies within `tol` of the line through the two
/// farthest-apart points.
pub fn check_collinear(points: &[Vec<f64>], tol: f64) -> bool {
    if points.len() <= 2 {
        return true;
    }
    let mut best = (0, 1, -1.0);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = vecops::dist2(&points[i], &points[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (a, b, len) = best;
    if len == 0.0 {
        return true;
    }
    let dir = vecops::scale(&vecops::sub(&points[b], &points[a]), 1.0 / len);
    points.iter().all(|p| {
        let rel = vecops::sub(p, &points[a]);
        let along = vecops::dot(&rel, &dir);
        let perp = vecops::sub(&rel, &vecops::scale(&dir, along));
        vecops::norm2(&perp) <= tol
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};

    fn line(xs: &[i64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_rational(
            xs.iter()
                .map(|a| xs.iter().map(|b| int((a - b).abs())).collect())
                .collect(),
        )
        .unwrap()
    }

    pub(crate) fn four_cycle() -> FiniteMetricSpace {
        let d = [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]];
        FiniteMetricSpace::from_rational(
            d.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn schoenberg_examples() {
        let g = schoenberg_matrix(&line(&[0, 1, 2]), 0).unwrap();
        assert_eq!(
            g.exact.unwrap(),
            vec![vec![int(1), int(2)], vec![int(2), int(4)]]
        );
        let g = schoenberg_matrix(&line(&[0, 1]), 0).unwrap();
        assert_eq!(g.exact.unwrap(), vec![vec![int(1)]]);
        let tri = FiniteMetricSpace::from_rational(vec![
            vec![int(0), int(1), int(1)],
            vec![int(1), int(0), int(1)],
            vec![int(1), int(1), int(0)],
        ])
        .unwrap();
        for base in 0..3 {
            let g = schoenberg_matrix(&tri, base).unwrap();
            assert_eq!(
                g.exact.unwrap(),
                vec![vec![int(1), ratio(1, 2)], vec![ratio(1, 2), int(1)]]
            );
        }
    }

    #[test]
    fn collinear_points_embed_in_one_dimension() {
        match embeds_isometrically_l2(&line(&[0, 1, 2])).unwrap() {
            L2Verdict::Embeddable { coords, rank } => {
                assert_eq!(rank, 1);
                assert!((coords[2][0].abs() - 2.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn four_cycle_has_negative_certificate() {
        let s = four_cycle();
        let g = schoenberg_matrix(&s, 0).unwrap();
        match embeds_isometrically_l2(&s).unwrap() {
            L2Verdict::NotEmbeddable { eigenvalue, certificate, .. } => {
                // G = [[1,2,-1],[2,4,2],[-1,2,1]]: spectrum {2, 2 ± 2√3}
                assert!((eigenvalue - (2.0 - 2.0 * 3f64.sqrt())).abs() < 1e-10);
                assert!(g.quadratic_form(&certificate) < 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn collinearity() {
        assert!(check_collinear(&[vec![0.0, 0.0], vec![5.0, 1.0]], 1e-9));
        assert!(check_collinear(
            &[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]],
            1e-9
        ));
        assert!(!check_collinear(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]],
            1e-9
        ));
    }
}
