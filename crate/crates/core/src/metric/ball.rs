use crate::error::{Error, Result};

/// Levels scanned before a family is declared uncertifiable.
const MAX_SCAN_LEVELS: usize = 1 << 20;

/// A lazily generated point family, split into finite levels, with a
/// designated origin and a norm (distance to that origin).
pub trait LevelledFamily {
    type Member: Clone;
    type Norm: PartialOrd + Clone;

    /// Members of `level` with their norms; empty past the end of a
    /// truncated family.
    fn level_members(&self, level: usize) -> Vec<(Self::Member, Self::Norm)>;

    /// Lower bound on the norm of every member at any level `≥ level`.
    /// `None` means the family cannot bound its tail.
    fn tail_norm_bound(&self, level: usize) -> Option<Self::Norm>;
}

#[derive(Debug, Clone)]
pub struct BallCount<M> {
    pub members: Vec<M>,
    pub levels_scanned: usize,
    /// Every member at level `≥ cutoff_level` has norm above the radius.
    pub cutoff_level: usize,
}

impl<M> BallCount<M> {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

/// Members of the closed ball of `radius` around the family's origin, with
/// the level past which no member can lie in the ball.
pub fn ball_count<F: LevelledFamily>(
    family: &F,
    radius: &F::Norm,
) -> Result<BallCount<F::Member>> {
    let mut members = Vec::new();
    for level in 0..MAX_SCAN_LEVELS {
        let bound = family.tail_norm_bound(level).ok_or_else(|| {
            Error::NotCertifiable(format!("no tail norm bound at level {level}"))
        })?;
        if bound > *radius {
            return Ok(BallCount {
                members,
                levels_scanned: level,
                cutoff_level: level,
            });
        }
        members.extend(
            family
                .level_members(level)
                .into_iter()
                .filter(|(_, norm)| norm <= radius)
                .map(|(m, _)| m),
        );
    }
    Err(Error::NotCertifiable(format!(
        "tail bound stays within the radius for {MAX_SCAN_LEVELS} levels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integers k ≥ 0 on a line, one per level.
    struct Naturals;
    impl LevelledFamily for Naturals {
        type Member = usize;
        type Norm = f64;
        fn level_members(&self, level: usize) -> Vec<(usize, f64)> {
            vec![(level, level as f64)]
        }
        fn tail_norm_bound(&self, level: usize) -> Option<f64> {
            Some(level as f64)
        }
    }

    struct Unbounded;
    impl LevelledFamily for Unbounded {
        type Member = ();
        type Norm = f64;
        fn level_members(&self, _: usize) -> Vec<((), f64)> {
            vec![((), 0.0)]
        }
        fn tail_norm_bound(&self, _: usize) -> Option<f64> {
            None
        }
    }

    #[test]
    fn naturals_ball() {
        let b = ball_count(&Naturals, &3.5).unwrap();
        assert_eq!(b.members, vec![0, 1, 2, 3]);
        assert_eq!(b.cutoff_level, 4);
    }

    #[test]
    fn refuses_without_bound() {
        assert!(matches!(
            ball_count(&Unbounded, &1.0),
            Err(Error::NotCertifiable(_))
        ));
    }
}
