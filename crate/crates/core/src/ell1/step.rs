use num_traits::{Signed, Zero};

use crate::exact::Rational;

/// A finitely supported step function on `ℝ`: height `knots[i].1` on
/// `(knots[i].0, knots[i+1].0]`, zero before the first knot and after the
/// last. Breakpoints are strictly increasing, adjacent heights differ, and
/// the last height is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepFunction {
    knots: Vec<(Rational, Rational)>,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `height · 𝟙_{(left, right]}`.
    pub fn indicator(left: Rational, right: Rational, height: Rational) -> Self {
        assert!(left < right, "empty interval");
        if height.is_zero() {
            return Self::zero();
        }
        Self {
            knots: vec![(left, height), (right, Rational::zero())],
        }
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Rational> {
        self.knots.iter().map(|(x, _)| x)
    }

    /// Value on the cell just right of `x` (the function is left-open).
    pub fn value_after(&self, x: &Rational) -> Rational {
        match self.knots.partition_point(|(k, _)| k <= x) {
            0 => Rational::zero(),
            i => self.knots[i - 1].1.clone(),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            knots: self.knots.iter().map(|(x, h)| (x.clone(), h * c)).collect(),
        }
    }

    /// Pointwise sum via a sweep over height jumps.
    pub fn sum<I: IntoIterator<Item = Self>>(fns: I) -> Self {
        let mut jumps: Vec<(Rational, Rational)> = Vec::new();
        for f in fns {
            let mut prev = Rational::zero();
            for (x, h) in f.knots {
                let delta = &h - &prev;
                prev = h;
                jumps.push((x, delta));
            }
        }
        jumps.sort_by(|a, b| a.0.cmp(&b.0));

        let mut knots: Vec<(Rational, Rational)> = Vec::new();
        let mut level = Rational::zero();
        let mut i = 0;
        while i < jumps.len() {
            let x = jumps[i].0.clone();
            while i < jumps.len() && jumps[i].0 == x {
                level += &jumps[i].1;
                i += 1;
            }
            let changed = match knots.last() {
                Some((_, h)) => *h != level,
                None => !level.is_zero(),
            };
            if changed {
                knots.push((x, level.clone()));
            }
        }
        Self { knots }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::sum([self.clone(), other.scaled(&Rational::from_integer((-1).into()))])
    }

    /// `∫ |f|`.
    pub fn l1_norm(&self) -> Rational {
        self.knots
            .windows(2)
            .map(|w| w[0].1.abs() * (&w[1].0 - &w[0].0))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn l1_distance(&self, other: &Self) -> Rational {
        self.sub(other).l1_norm()
    }

    /// Whether `f·g = 0` almost everywhere.
    pub fn disjoint_from(&self, other: &Self) -> bool {
        let mut xs: Vec<&Rational> = self.breakpoints().chain(other.breakpoints()).collect();
        xs.sort();
        xs.dedup();
        xs.iter()
            .all(|x| self.value_after(x).is_zero() || other.value_after(x).is_zero())
    }
}
