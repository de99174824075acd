use num_traits::Zero;
use serde::Serialize;

use super::space::FiniteMetricSpace;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// Scale `r` and Lipschitz constants of a map, normalized so that
/// `lip_down = 1`: `r·d_A ≤ d_Y ≤ r·distortion·d_A` over all pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub r: f64,
    pub lip_up: f64,
    pub lip_down: f64,
    pub distortion: f64,
    /// Exact distortion when both metrics are rational.
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub exact: Option<Rational>,
}

mod opt_rational {
    use crate::exact::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&crate::exact::format(q)),
            None => s.serialize_none(),
        }
    }
}

impl DistortionReport {
    /// Builds the report from the extreme pair ratios `d_Y / d_A`.
    pub fn from_extremes(min_ratio: f64, max_ratio: f64) -> Self {
        if min_ratio <= 0.0 {
            return Self {
                r: 0.0,
                lip_up: f64::INFINITY,
                lip_down: 1.0,
                distortion: f64::INFINITY,
                exact: None,
            };
        }
        let c = (max_ratio / min_ratio).max(1.0);
        Self {
            r: min_ratio,
            lip_up: c,
            lip_down: 1.0,
            distortion: c,
            exact: None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        !self.distortion.is_finite()
    }
}

/// Distortion of `u ↦ assignment[u]` from `source` into `target`.
pub fn distortion_of_map(
    source: &FiniteMetricSpace,
    target: &FiniteMetricSpace,
    assignment: &[usize],
) -> Result<DistortionReport> {
    let n = source.len();
    if n < 2 {
        return Err(Error::Structural("source needs at least 2 points".into()));
    }
    if assignment.len() != n {
        return Err(Error::Structural(format!(
            "assignment has {} entries for {n} source points",
            assignment.len()
        )));
    }
    if let Some(&bad) = assignment.iter().find(|&&a| a >= target.len()) {
        return Err(Error::Structural(format!("target index {bad} out of range")));
    }

    let both_exact = source.d_exact(0, 1).is_some() && target.d_exact(0, 0).is_some();
    if both_exact {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for u in 0..n {
            for v in (u + 1)..n {
                let dy = target.d_exact(assignment[u], assignment[v]).expect("exact");
                if dy.is_zero() {
                    return Err(Error::NotAnEmbedding(u, v));
                }
                let da = source.d_exact(u, v).expect("exact");
                if da.is_zero() {
                    return Err(Error::Structural(format!("source points {u}, {v} coincide")));
                }
                let q = dy / da;
                if lo.as_ref().is_none_or(|l| &q < l) {
                    lo = Some(q.clone());
                }
                if hi.as_ref().is_none_or(|h| &q > h) {
                    hi = Some(q);
                }
            }
        }
        let (lo, hi) = (lo.expect("n >= 2"), hi.expect("n >= 2"));
        let c = &hi / &lo;
        let mut rep = DistortionReport::from_extremes(exact::to_f64(&lo), exact::to_f64(&hi));
        rep.distortion = exact::to_f64(&c);
        rep.lip_up = rep.distortion;
        rep.exact = Some(c);
        return Ok(rep);
    }

    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for u in 0..n {
        for v in (u + 1)..n {
            let dy = target.d(assignment[u], assignment[v]);
            if dy == 0.0 {
                return Err(Error::NotAnEmbedding(u, v));
            }
            let da = source.d(u, v);
            if da == 0.0 {
                return Err(Error::Structural(format!("source points {u}, {v} coincide")));
            }
            let q = dy / da;
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    Ok(DistortionReport::from_extremes(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn line(xs: &[i64]) -> FiniteMetricSpace {
        FiniteMetricSpace::from_rational(
            xs.iter()
                .map(|a| xs.iter().map(|b| int((a - b).abs())).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_has_distortion_one() {
        let s = line(&[0, 1, 5, 7]);
        let rep = distortion_of_map(&s, &s, &[0, 1, 2, 3]).unwrap();
        assert_eq!(rep.exact, Some(int(1)));
        assert_eq!(rep.distortion, 1.0);
    }

    #[test]
    fn scaling_is_absorbed_by_r() {
        let s = line(&[0, 1, 5]);
        let t = s.scaled_exact(&int(3));
        let rep = distortion_of_map(&s, &t, &[0, 1, 2]).unwrap();
        assert_eq!(rep.distortion, 1.0);
        assert_eq!(rep.r, 3.0);
    }

    #[test]
    fn line_to_line_ratio_enumeration() {
        // ratios 1/1, 2/3, 1/2 => max/min = 2
        let rep = distortion_of_map(&line(&[0, 1, 3]), &line(&[0, 1, 2]), &[0, 1, 2]).unwrap();
        assert_eq!(rep.exact, Some(int(2)));
        assert_eq!(rep.r, 0.5);
    }

    #[test]
    fn collapsing_map_is_rejected() {
        let s = line(&[0, 1, 3]);
        assert!(matches!(
            distortion_of_map(&s, &s, &[0, 0, 2]),
            Err(Error::NotAnEmbedding(0, 1))
        ));
    }
}
