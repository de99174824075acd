use crate::error::{Error, Result};
use crate::metric::{DistortionReport, FiniteMetricSpace};
use crate::vecops;

pub(crate) fn check_coords(coords: &[Vec<f64>], space: &FiniteMetricSpace, p: f64) -> Result<usize> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Structural(format!("exponent p = {p} must lie in [1, ∞)")));
    }
    if coords.len() != space.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinate rows for {} points",
            coords.len(),
            space.len()
        )));
    }
    let d = coords.first().map_or(0, Vec::len);
    if coords.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch("coordinate rows of mixed length".into()));
    }
    Ok(d)
}

/// Distortion of `u ↦ coords[u]` into `ℓ_p`, from the pair ratios
/// `ρ_uv = ‖x_u − x_v‖_p / d(u, v)`. Coincident rows give an infinite
/// report.
pub fn evaluate_distortion(coords: &[Vec<f64>], space: &FiniteMetricSpace, p: f64) -> Result<DistortionReport> {
    check_coords(coords, space, p)?;
    let n = space.len();
    if n < 2 {
        return Err(Error::Structural("need at least 2 points".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for u in 0..n {
        for v in u + 1..n {
            let q = vecops::lp_dist(&coords[u], &coords[v], p) / space.d(u, v);
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    Ok(DistortionReport::from_extremes(lo, hi))
}

/// Value and gradient of the smoothed log-distortion
/// `T·LSE(log ρ / T) + T·LSE(−log ρ / T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedObjective {
    pub value: f64,
    pub gradient: Vec<Vec<f64>>,
}

fn lse(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = xs.map(|x| (x - m).exp()).sum();
    (m, s)
}

/// Smoothed objective at temperature `t`. Infinite, with a zero gradient,
/// when two rows coincide.
pub fn smoothed_objective(coords: &[Vec<f64>], space: &FiniteMetricSpace, p: f64, t: f64) -> SmoothedObjective {
    let n = space.len();
    let d = coords.first().map_or(0, Vec::len);
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let mut logs = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            let norm = vecops::lp_dist(&coords[u], &coords[v], p);
            if norm == 0.0 {
                return SmoothedObjective {
                    value: f64::INFINITY,
                    gradient: vec![vec![0.0; d]; n],
                };
            }
            pairs.push((u, v, norm));
            logs.push((norm / space.d(u, v)).ln());
        }
    }
    let (m_hi, s_hi) = lse(logs.iter().map(|l| l / t));
    let (m_lo, s_lo) = lse(logs.iter().map(|l| -l / t));
    let value = t * (m_hi + s_hi.ln()) + t * (m_lo + s_lo.ln());

    let mut gradient = vec![vec![0.0; d]; n];
    for (&(u, v, norm), &l) in pairs.iter().zip(&logs) {
        let w = (l / t - m_hi).exp() / s_hi - (-l / t - m_lo).exp() / s_lo;
        if w == 0.0 {
            continue;
        }
        // ∂ log‖Δ‖_p / ∂Δ_i = sign(Δ_i)·(|Δ_i|/‖Δ‖)^{p−1} / ‖Δ‖, with sign(0) = 0
        for i in 0..d {
            let delta = coords[u][i] - coords[v][i];
            if delta == 0.0 {
                continue;
            }
            let mag = if p == 1.0 { 1.0 } else { (delta.abs() / norm).powf(p - 1.0) };
            let g = w * delta.signum() * mag / norm;
            gradient[u][i] += g;
            gradient[v][i] -= g;
        }
    }
    SmoothedObjective { value, gradient }
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
    fn square_against_cycle() {
        let sq = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        let rep = evaluate_distortion(&sq, &cycle4(), 2.0).unwrap();
        assert!((rep.distortion - 2f64.sqrt()).abs() < 1e-12);
        let big: Vec<Vec<f64>> = sq.iter().map(|r| vecops::scale(r, 5.0)).collect();
        let rep5 = evaluate_distortion(&big, &cycle4(), 2.0).unwrap();
        assert!((rep5.distortion - rep.distortion).abs() < 1e-12);
        assert!((rep5.r - 5.0 * rep.r).abs() < 1e-12);
    }

    #[test]
    fn cycle_is_isometric_in_l1() {
        let c = vec![vec![0.5, 0.5], vec![-0.5, 0.5], vec![-0.5, -0.5], vec![0.5, -0.5]];
        let rep = evaluate_distortion(&c, &cycle4(), 1.0).unwrap();
        assert!((rep.distortion - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_rows_are_infinite() {
        let c = vec![vec![0.0], vec![0.0], vec![1.0], vec![2.0]];
        assert!(evaluate_distortion(&c, &cycle4(), 2.0).unwrap().is_infinite());
        assert!(smoothed_objective(&c, &cycle4(), 2.0, 0.1).value.is_infinite());
    }

    #[test]
    fn smoothing_upper_bounds_log_distortion() {
        let sq = vec![vec![0.0, 0.0], vec![1.0, 0.1], vec![1.2, 1.0], vec![0.0, 0.9]];
        let exact = evaluate_distortion(&sq, &cycle4(), 2.0).unwrap().distortion.ln();
        for t in [1.0, 0.1, 0.01] {
            let v = smoothed_objective(&sq, &cycle4(), 2.0, t).value;
            assert!(v >= exact - 1e-12);
            assert!(v <= exact + 2.0 * t * (6f64).ln() + 1e-12);
        }
    }

    #[test]
    fn bad_shapes() {
        assert!(evaluate_distortion(&[vec![0.0]], &cycle4(), 2.0).is_err());
        let c = vec![vec![0.0]; 4];
        assert!(evaluate_distortion(&c, &cycle4(), 0.5).is_err());
    }
}
