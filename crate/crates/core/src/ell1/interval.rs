use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::step::StepFunction;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};

/// A finitely supported `ℓ_1` vector, pictured as the vertical segments
/// joining `(i, 0)` and `(i, a_i)`. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalVector {
    entries: BTreeMap<i64, Rational>,
}

impl IntervalVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (i64, Rational)>>(entries: I) -> Self {
        let mut v = Self::new();
        for (i, a) in entries {
            v.set(i, a);
        }
        v
    }

    /// Coordinates `0, 1, 2, …`.
    pub fn from_dense<I: IntoIterator<Item = Rational>>(values: I) -> Self {
        Self::from_entries(values.into_iter().enumerate().map(|(i, a)| (i as i64, a)))
    }

    pub fn set(&mut self, i: i64, a: Rational) {
        if a.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, a);
        }
    }

    pub fn get(&self, i: i64) -> Rational {
        self.entries.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.entries.iter().map(|(&i, a)| (i, a))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Total length of the segments, `Σ |a_i|`.
    pub fn norm(&self) -> Rational {
        self.entries.values().map(|a| a.abs()).fold(Rational::zero(), |s, a| s + a)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, b) in &other.entries {
            let v = out.get(i) - b;
            out.set(i, v);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&i, b) in &other.entries {
            let v = out.get(i) + b;
            out.set(i, v);
        }
        out
    }

    /// Largest `|a_i|` and its coordinate.
    pub fn max_abs(&self) -> Option<(i64, Rational)> {
        self.entries
            .iter()
            .map(|(&i, a)| (i, a.abs()))
            .fold(None, |best: Option<(i64, Rational)>, (i, a)| match best {
                Some((_, ref b)) if *b >= a => best,
                _ => Some((i, a)),
            })
    }

    pub fn disjoint_from(&self, other: &Self) -> bool {
        self.entries.keys().all(|i| !other.entries.contains_key(i))
    }
}

impl Serialize for IntervalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .entries
            .iter()
            .map(|(i, a)| (i.to_string(), exact::format(a)))
            .collect();
        serde_json::json!({ "entries": map }).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalVector {
    /// Accepts `{"entries": {"i": "p/q", …}}` or a dense list `["p/q", …]`.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Sparse { entries: BTreeMap<String, String> },
            Dense(Vec<String>),
        }
        let parse = |s: &str| exact::parse(s).map_err(serde::de::Error::custom);
        match Raw::deserialize(d)? {
            Raw::Dense(vals) => Ok(Self::from_dense(
                vals.iter().map(|s| parse(s)).collect::<std::result::Result<Vec<_>, _>>()?,
            )),
            Raw::Sparse { entries } => {
                let mut v = Self::new();
                for (i, a) in entries {
                    let i: i64 = i.parse().map_err(serde::de::Error::custom)?;
                    v.set(i, parse(&a)?);
                }
                Ok(v)
            }
        }
    }
}

/// Total length of the common part of the segments of `a` and `b`:
/// coordinates with opposite signs contribute nothing, same signs
/// contribute `min(|a_i|, |b_i|)`.
pub fn overlap_length(a: &IntervalVector, b: &IntervalVector) -> Rational {
    derive_x_sigma(a, b).norm()
}

/// The vector whose segments are the intersections of those of `x` and `y`.
pub fn derive_x_sigma(x: &IntervalVector, y: &IntervalVector) -> IntervalVector {
    IntervalVector::from_entries(x.entries().filter_map(|(i, a)| {
        let b = y.entries.get(&i)?;
        if a.is_positive() == b.is_positive() {
            let m = exact::min(&a.abs(), &b.abs());
            Some((i, if a.is_positive() { m } else { -m }))
        } else {
            None
        }
    }))
}

/// Renders step functions as `ℓ_1` vectors over a shared coordinate system:
/// each cell between consecutive breakpoints of the union becomes one
/// coordinate carrying `height × width`. On the rendered set this is an
/// isometry for the `L_1` distance.
pub fn render_common(fns: &[StepFunction]) -> Vec<IntervalVector> {
    let mut xs: Vec<&Rational> = fns.iter().flat_map(|f| f.breakpoints()).collect();
    xs.sort();
    xs.dedup();
    fns.iter()
        .map(|f| {
            IntervalVector::from_entries(xs.windows(2).enumerate().map(|(i, w)| {
                let width = w[1] - w[0];
                (i as i64, f.value_after(w[0]) * width)
            }))
        })
        .collect()
}

/// Rejects vectors whose norm is not exactly one.
pub(crate) fn require_unit(x: &IntervalVector) -> Result<()> {
    let norm = x.norm();
    if norm != Rational::from_integer(1.into()) {
        return Err(Error::Structural(format!(
            "expected a unit vector, norm is {}",
            exact::format(&norm)
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ell1::{DyadicString, L1Member};
    use crate::exact::{int, ratio};

    fn v(entries: &[(i64, Rational)]) -> IntervalVector {
        IntervalVector::from_entries(entries.iter().cloned())
    }

    #[test]
    fn opposite_signs_never_overlap() {
        let a = v(&[(1, ratio(1, 4))]);
        let b = v(&[(1, ratio(-1, 4))]);
        assert_eq!(overlap_length(&a, &b), int(0));
    }

    #[test]
    fn overlap_examples() {
        let a = v(&[(1, int(1)), (2, ratio(-3, 5))]);
        assert_eq!(overlap_length(&a, &a), a.norm());
        assert_eq!(
            overlap_length(&v(&[(1, int(1))]), &v(&[(1, ratio(1, 2))])),
            ratio(1, 2)
        );
    }

    #[test]
    fn x_sigma_examples() {
        let x = v(&[(1, int(1)), (2, int(-1))]);
        let y = v(&[(1, ratio(1, 2)), (2, int(1))]);
        assert_eq!(derive_x_sigma(&x, &y), v(&[(1, ratio(1, 2))]));
        assert_eq!(derive_x_sigma(&x, &x), x);
        assert_eq!(derive_x_sigma(&x, &v(&[(7, int(1))])), IntervalVector::new());
    }

    #[test]
    fn rendering_preserves_distances_and_overlap_with_d() {
        let members: Vec<L1Member> = std::iter::once(L1Member::D)
            .chain((1..=3).flat_map(|l| DyadicString::all_of_len(l).map(L1Member::F)))
            .collect();
        let fns: Vec<_> = members.iter().map(L1Member::step_function).collect();
        let rendered = render_common(&fns);
        for i in 0..fns.len() {
            for j in 0..fns.len() {
                assert_eq!(rendered[i].sub(&rendered[j]).norm(), fns[i].l1_distance(&fns[j]));
            }
        }
        for (m, r) in members.iter().zip(&rendered).skip(1) {
            assert_eq!(overlap_length(r, &rendered[0]), crate::exact::pow2_neg(m.level()));
        }
    }

    #[test]
    fn json_forms() {
        let dense: IntervalVector = serde_json::from_str(r#"["1/2", "1/2"]"#).unwrap();
        assert_eq!(dense, v(&[(0, ratio(1, 2)), (1, ratio(1, 2))]));
        let sparse: IntervalVector =
            serde_json::from_str(r#"{"entries": {"3": "-1/4", "5": "3/4"}}"#).unwrap();
        assert_eq!(serde_json::from_value::<IntervalVector>(serde_json::to_value(&sparse).unwrap()).unwrap(), sparse);
    }
}
