use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Net spacing per level, `n ↦ δ_n > 0`, nonincreasing in `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum NetSchedule {
    /// `δ_n = numerator / (factor·n + offset)`.
    Reciprocal {
        numerator: f64,
        factor: f64,
        offset: f64,
    },
    /// `δ_n = values[n−1]`; levels past the end reuse the last value.
    Explicit(Vec<f64>),
}

impl Default for NetSchedule {
    /// `δ_n = 2/(n + 3)`: half the unit radius at level 1, small enough to
    /// matter and coarse enough that level 4 stays in the thousands.
    fn default() -> Self {
        Self::Reciprocal {
            numerator: 2.0,
            factor: 1.0,
            offset: 3.0,
        }
    }
}

impl NetSchedule {
    pub fn constant(delta: f64) -> Result<Self> {
        Self::explicit(vec![delta])
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Structural("empty δ schedule".into()));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Structural("δ values must be positive".into()));
        }
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Structural("δ schedule must be nonincreasing".into()));
        }
        Ok(Self::Explicit(values))
    }

    pub fn delta(&self, n: usize) -> f64 {
        assert!(n >= 1, "levels start at 1");
        match self {
            Self::Reciprocal {
                numerator,
                factor,
                offset,
            } => numerator / (factor * n as f64 + offset),
            Self::Explicit(v) => v[(n - 1).min(v.len() - 1)],
        }
    }
}

impl fmt::Display for NetSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Reciprocal {
                numerator,
                factor,
                offset,
            } => {
                write!(f, "{numerator}/({factor}n")?;
                if *offset != 0.0 {
                    write!(f, "+{offset}")?;
                }
                write!(f, ")")
            }
            Self::Explicit(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for NetSchedule {
    type Err = Error;

    /// Accepts `a/(bn+c)`, `a/(bn)`, `a/n`, `a/(n+c)`, or a comma list of
    /// positive numbers.
    fn from_str(spec: &str) -> Result<Self> {
        let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Structural(format!("cannot parse δ schedule {spec:?}"));
        if !s.contains('n') {
            let values = s
                .split(',')
                .map(|p| p.parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Self::explicit(values);
        }
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let numerator: f64 = num.parse().map_err(|_| bad())?;
        let den = den
            .strip_prefix('(')
            .and_then(|d| d.strip_suffix(')'))
            .unwrap_or(den);
        let (lin, off) = match den.split_once('+') {
            Some((l, o)) => (l, o.parse::<f64>().map_err(|_| bad())?),
            None => (den, 0.0),
        };
        let factor_str = lin.strip_suffix('n').ok_or_else(bad)?;
        let factor = if factor_str.is_empty() {
            1.0
        } else {
            factor_str.trim_end_matches('*').parse().map_err(|_| bad())?
        };
        if !(numerator > 0.0 && factor > 0.0 && off >= 0.0) {
            return Err(bad());
        }
        Ok(Self::Reciprocal {
            numerator,
            factor,
            offset: off,
        })
    }
}
