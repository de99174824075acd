use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::REL_TOL;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::vecops;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arith {
    Rational,
    Double,
}

/// Row-major `n × n` distance matrix, tagged by arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum Distances {
    Rational(Vec<Rational>),
    Double(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    n: usize,
    dist: Distances,
    labels: Option<Vec<String>>,
}

fn check_square<T>(rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Structural(format!(
            "row {i} has {} entries, expected {n}",
            row.len()
        )));
    }
    Ok(n)
}

impl FiniteMetricSpace {
    pub fn from_rational(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = check_square(&rows)?;
        let flat: Vec<Rational> = rows.into_iter().flatten().collect();
        if let Some(k) = flat.iter().position(|q| q.is_negative()) {
            return Err(Error::Structural(format!(
                "negative entry at ({}, {})",
                k / n,
                k % n
            )));
        }
        Ok(Self {
            n,
            dist: Distances::Rational(flat),
            labels: None,
        })
    }

    pub fn from_double(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = check_square(&rows)?;
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(k) = flat.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Structural(format!(
                "negative or non-finite entry at ({}, {})",
                k / n,
                k % n
            )));
        }
        Ok(Self {
            n,
            dist: Distances::Double(flat),
            labels: None,
        })
    }

    /// Pairwise `ℓ_p` distances between coordinate rows.
    pub fn from_points(points: &[Vec<f64>], p: f64) -> Result<Self> {
        let n = points.len();
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = vecops::lp_dist(&points[i], &points[j], p);
                rows[i][j] = d;
                rows[j][i] = d;
            }
        }
        Self::from_double(rows)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Structural(format!(
                "{} labels for {} points",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn arith(&self) -> Arith {
        match self.dist {
            Distances::Rational(_) => Arith::Rational,
            Distances::Double(_) => Arith::Double,
        }
    }

    pub fn distances(&self) -> &Distances {
        &self.dist
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        match &self.dist {
            Distances::Rational(v) => exact::to_f64(&v[i * self.n + j]),
            Distances::Double(v) => v[i * self.n + j],
        }
    }

    pub fn d_exact(&self, i: usize, j: usize) -> Option<&Rational> {
        match &self.dist {
            Distances::Rational(v) => Some(&v[i * self.n + j]),
            Distances::Double(_) => None,
        }
    }

    pub fn diameter(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.d(i, j))
            .fold(0.0, f64::max)
    }

    /// Multiplies every distance by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let dist = match &self.dist {
            Distances::Rational(v) => {
                Distances::Double(v.iter().map(|q| exact::to_f64(q) * lambda).collect())
            }
            Distances::Double(v) => Distances::Double(v.iter().map(|x| x * lambda).collect()),
        };
        Self {
            n: self.n,
            dist,
            labels: self.labels.clone(),
        }
    }

    pub fn scaled_exact(&self, lambda: &Rational) -> Self {
        let dist = match &self.dist {
            Distances::Rational(v) => Distances::Rational(v.iter().map(|q| q * lambda).collect()),
            Distances::Double(v) => {
                let l = exact::to_f64(lambda);
                Distances::Double(v.iter().map(|x| x * l).collect())
            }
        };
        Self {
            n: self.n,
            dist,
            labels: self.labels.clone(),
        }
    }

    /// Restriction to the listed points, in the given order.
    pub fn subspace(&self, idx: &[usize]) -> Self {
        let n = idx.len();
        let dist = match &self.dist {
            Distances::Rational(v) => Distances::Rational(
                idx.iter()
                    .flat_map(|&i| idx.iter().map(move |&j| v[i * self.n + j].clone()))
                    .collect(),
            ),
            Distances::Double(v) => Distances::Double(
                idx.iter()
                    .flat_map(|&i| idx.iter().map(move |&j| v[i * self.n + j]))
                    .collect(),
            ),
        };
        let labels = self
            .labels
            .as_ref()
            .map(|l| idx.iter().map(|&i| l[i].clone()).collect());
        Self { n, dist, labels }
    }

    pub fn to_json(&self) -> Value {
        let dist: Vec<Value> = (0..self.n)
            .map(|i| {
                Value::Array(
                    (0..self.n)
                        .map(|j| match &self.dist {
                            Distances::Rational(v) => {
                                Value::String(exact::format(&v[i * self.n + j]))
                            }
                            Distances::Double(v) => Value::from(v[i * self.n + j]),
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "arith": self.arith(),
            "dist": dist,
            "labels": self.labels.clone().unwrap_or_default(),
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json value");
        s.push('\n');
        s
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            arith: Arith,
            dist: Vec<Vec<Value>>,
            #[serde(default)]
            labels: Vec<String>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        if raw.dist.len() != raw.n {
            return Err(Error::Structural(format!(
                "n = {} but dist has {} rows",
                raw.n,
                raw.dist.len()
            )));
        }
        let space = match raw.arith {
            Arith::Rational => {
                let rows = raw
                    .dist
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| match v {
                                Value::String(s) => exact::parse(s),
                                Value::Number(k) if k.is_i64() => {
                                    Ok(exact::int(k.as_i64().unwrap_or_default()))
                                }
                                other => Err(Error::Structural(format!(
                                    "rational entry must be a \"p/q\" string, got {other}"
                                ))),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_rational(rows)?
            }
            Arith::Double => {
                let rows = raw
                    .dist
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| {
                                v.as_f64().ok_or_else(|| {
                                    Error::Structural(format!("double entry expected, got {v}"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::from_double(rows)?
            }
        };
        if raw.labels.is_empty() {
            Ok(space)
        } else {
            space.with_labels(raw.labels)
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

/// A failed metric axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `d(i, i) ≠ 0`.
    Identity { i: usize },
    /// `d(i, j) ≠ d(j, i)`.
    Symmetry { i: usize, j: usize },
    /// `d(i, j) = 0` with `i ≠ j`.
    Separation { i: usize, j: usize },
    /// `d(i, j) > d(i, via) + d(via, j)`.
    Triangle { i: usize, j: usize, via: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity { i } => write!(f, "identity violated at {i}"),
            Self::Symmetry { i, j } => write!(f, "symmetry violated at ({i}, {j})"),
            Self::Separation { i, j } => write!(f, "distinct points {i}, {j} at distance 0"),
            Self::Triangle { i, j, via } => {
                write!(f, "triangle violated: d({i},{j}) > d({i},{via}) + d({via},{j})")
            }
        }
    }
}

/// Lists every failed metric axiom; empty iff the matrix is a metric.
/// Exact on rational matrices, relative tolerance `1e-9 · diameter` on doubles.
pub fn validate_space(space: &FiniteMetricSpace) -> Vec<Violation> {
    let n = space.len();
    let mut out = Vec::new();
    match space.distances() {
        Distances::Rational(v) => {
            let d = |i: usize, j: usize| &v[i * n + j];
            for i in 0..n {
                if !d(i, i).is_zero() {
                    out.push(Violation::Identity { i });
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if d(i, j) != d(j, i) {
                        out.push(Violation::Symmetry { i, j });
                    }
                    if d(i, j).is_zero() || d(j, i).is_zero() {
                        out.push(Violation::Separation { i, j });
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for via in 0..n {
                        if via != i && via != j && d(i, j) > &(d(i, via) + d(via, j)) {
                            out.push(Violation::Triangle { i, j, via });
                        }
                    }
                }
            }
        }
        Distances::Double(v) => {
            let d = |i: usize, j: usize| v[i * n + j];
            let tol = REL_TOL * space.diameter().max(f64::MIN_POSITIVE);
            for i in 0..n {
                if d(i, i).abs() > tol {
                    out.push(Violation::Identity { i });
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if (d(i, j) - d(j, i)).abs() > tol {
                        out.push(Violation::Symmetry { i, j });
                    }
                    if d(i, j) <= tol || d(j, i) <= tol {
                        out.push(Violation::Separation { i, j });
                    }
                }
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for via in 0..n {
                        if via != i && via != j && d(i, j) > d(i, via) + d(via, j) + tol {
                            out.push(Violation::Triangle { i, j, via });
                        }
                    }
                }
            }
        }
    }
    out
}
