use num_traits::{One, Zero};
use serde::Serialize;

use super::dyadic::{interval_of_string, psi, DyadicString};
use super::step::StepFunction;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::limits;
use crate::metric::{FiniteMetricSpace, LevelledFamily};

/// A point of the witness: `0`, `d = 𝟙_{(0,1]}`, or
/// `f_σ = d_σ + ℓ(σ)·𝟙_{(Ψ(σ), Ψ(σ)+1]}` for a nonempty `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum L1Member {
    Zero,
    D,
    F(DyadicString),
}

impl L1Member {
    /// The dyadic piece `d_σ = 𝟙_{I(σ)}`.
    pub fn dyadic_piece(sigma: &DyadicString) -> StepFunction {
        let iv = interval_of_string(sigma);
        StepFunction::indicator(iv.left, iv.right, Rational::one())
    }

    /// The block `ℓ(σ)·𝟙_{(Ψ(σ), Ψ(σ)+1]}`.
    pub fn block_piece(sigma: &DyadicString) -> StepFunction {
        let at = Rational::from_integer(psi(sigma));
        let end = &at + Rational::one();
        StepFunction::indicator(at, end, exact::int(sigma.len() as i64))
    }

    pub fn step_function(&self) -> StepFunction {
        match self {
            Self::Zero => StepFunction::zero(),
            Self::D => Self::dyadic_piece(&DyadicString::empty()),
            Self::F(sigma) => {
                StepFunction::sum([Self::dyadic_piece(sigma), Self::block_piece(sigma)])
            }
        }
    }

    /// `‖·‖_1` by integration.
    pub fn norm(&self) -> Rational {
        self.step_function().l1_norm()
    }

    /// Closed form: `‖f_σ‖ = 2^{−ℓ(σ)} + ℓ(σ)`, `‖d‖ = 1`, `‖0‖ = 0`.
    pub fn closed_form_norm(&self) -> Rational {
        match self {
            Self::Zero => Rational::zero(),
            Self::D => Rational::one(),
            Self::F(sigma) => exact::pow2_neg(sigma.len()) + exact::int(sigma.len() as i64),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Zero => "0".into(),
            Self::D => "d".into(),
            Self::F(sigma) => format!("f_{sigma}"),
        }
    }

    pub fn level(&self) -> usize {
        match self {
            Self::Zero | Self::D => 0,
            Self::F(sigma) => sigma.len(),
        }
    }
}

/// Exact `∫ |a − b|` over the merged breakpoints.
pub fn l1_distance(a: &L1Member, b: &L1Member) -> Rational {
    a.step_function().l1_distance(&b.step_function())
}

#[derive(Debug, Clone)]
pub struct L1Space {
    pub members: Vec<L1Member>,
    pub space: FiniteMetricSpace,
}

/// `{0, d} ∪ {f_σ : 1 ≤ ℓ(σ) ≤ max_len}` with its exact distance matrix.
/// Members are ordered `0, d`, then by length and binary value.
pub fn build_l1_space(max_len: usize) -> Result<L1Space> {
    let cap = limits::cap(limits::L1_MEMBER_CAP);
    let required = if max_len >= 62 {
        usize::MAX
    } else {
        1usize << (max_len + 1)
    };
    if required > cap {
        return Err(Error::CapExceeded {
            cap,
            required,
            what: format!("L1 witness with max_len {max_len}"),
        });
    }
    let mut members = vec![L1Member::Zero, L1Member::D];
    for len in 1..=max_len {
        members.extend(DyadicString::all_of_len(len).map(L1Member::F));
    }
    let fns: Vec<StepFunction> = members.iter().map(L1Member::step_function).collect();
    let n = members.len();
    let mut rows = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = fns[i].l1_distance(&fns[j]);
            rows[j][i] = dist.clone();
            rows[i][j] = dist;
        }
    }
    let space = FiniteMetricSpace::from_rational(rows)?
        .with_labels(members.iter().map(L1Member::label).collect())?;
    Ok(L1Space { members, space })
}

/// The infinite witness as a lazily generated family: level 0 is `{0, d}`,
/// level `ℓ ≥ 1` is every `f_σ` with `ℓ(σ) = ℓ`. Norms grow like `ℓ`, so
/// every ball is finite.
#[derive(Debug, Clone, Copy, Default)]
pub struct L1Family;

impl LevelledFamily for L1Family {
    type Member = L1Member;
    type Norm = Rational;

    fn level_members(&self, level: usize) -> Vec<(L1Member, Rational)> {
        if level == 0 {
            return vec![
                (L1Member::Zero, Rational::zero()),
                (L1Member::D, Rational::one()),
            ];
        }
        DyadicString::all_of_len(level)
            .map(|s| {
                let m = L1Member::F(s);
                let norm = m.norm();
                (m, norm)
            })
            .collect()
    }

    /// `ℓ + 2^{−ℓ}` is increasing for `ℓ ≥ 1`, so it bounds every later level.
    fn tail_norm_bound(&self, level: usize) -> Option<Rational> {
        Some(if level == 0 {
            Rational::zero()
        } else {
            exact::int(level as i64) + exact::pow2_neg(level)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub n: usize,
    /// `{I(σ) : ℓ(σ) = n}` tiles `(0, 1]`.
    pub partition: bool,
    /// `Σ d_σ = d` as step functions.
    pub sum_is_d: bool,
    /// `‖d_σ‖ = 2^{−n}` for every `σ`.
    pub norms: bool,
}

impl LevelCheck {
    pub fn passed(&self) -> bool {
        self.partition && self.sum_is_d && self.norms
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub levels: Vec<LevelCheck>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(LevelCheck::passed)
    }
}

/// Checks exactly, for each `1 ≤ n ≤ max_len`, that the length-`n` dyadic
/// pieces are disjoint, tile `(0,1]`, sum to `d` and have norm `2^{−n}`.
pub fn verify_decomposition_identities(max_len: usize) -> DecompositionReport {
    let d = L1Member::D.step_function();
    let levels = (1..=max_len)
        .map(|n| {
            let intervals: Vec<_> = DyadicString::all_of_len(n).map(|s| interval_of_string(&s)).collect();
            let mut sorted = intervals.clone();
            sorted.sort_by(|a, b| a.left.cmp(&b.left));
            let partition = sorted.first().is_some_and(|iv| iv.left.is_zero())
                && sorted.last().is_some_and(|iv| iv.right.is_one())
                && sorted.windows(2).all(|w| w[0].right == w[1].left);

            let pieces: Vec<StepFunction> = intervals
                .iter()
                .map(|iv| StepFunction::indicator(iv.left.clone(), iv.right.clone(), Rational::one()))
                .collect();
            let target = exact::pow2_neg(n);
            let norms = pieces.iter().all(|p| p.l1_norm() == target);
            let sum_is_d = StepFunction::sum(pieces) == d;
            LevelCheck {
                n,
                partition,
                sum_is_d,
                norms,
            }
        })
        .collect();
    DecompositionReport { levels }
}
