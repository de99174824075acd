use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::objective::{check_coords, evaluate_distortion, smoothed_objective};
use crate::ell2::{schoenberg_matrix, symmetric_eigen};
use crate::error::{Error, Result};
use crate::metric::{DistortionReport, FiniteMetricSpace};
use crate::seed;
use crate::vecops;

/// Starting and final smoothing temperatures.
const T_START: f64 = 0.01;
const T_END: f64 = 1e-5;
/// Armijo sufficient-decrease constant and backtracking limit.
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACK: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    pub p: f64,
    pub dim: usize,
    pub restarts: usize,
    /// Gradient steps per restart.
    pub iterations: usize,
    /// First trial step, relative to the squared coordinate scale.
    pub initial_step: f64,
    /// Temperature factor applied at every plateau.
    pub decay: f64,
    pub seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            p: 2.0,
            dim: 2,
            restarts: 8,
            iterations: 6000,
            initial_step: 0.05,
            decay: 0.5,
            seed: 0,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::Structural(format!("p = {} must lie in [1, ∞)", self.p)));
        }
        if self.dim == 0 || self.restarts == 0 || self.iterations == 0 {
            return Err(Error::Structural("dim, restarts and iterations must be positive".into()));
        }
        if !(self.initial_step > 0.0) || !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::Structural("need initial_step > 0 and 0 < decay < 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingResult {
    pub coords: Vec<Vec<f64>>,
    /// Recomputed from `coords`; an upper bound on the optimal distortion.
    pub report: DistortionReport,
    /// The winning restart reached the final temperature on a plateau.
    pub converged: bool,
    pub restarts_used: usize,
    pub best_restart: usize,
}

struct RestartOutcome {
    coords: Vec<Vec<f64>>,
    distortion: f64,
    converged: bool,
}

fn mean_distance(space: &FiniteMetricSpace) -> f64 {
    let n = space.len();
    let mut total = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            total += space.d(u, v);
        }
    }
    total / (n * (n - 1) / 2) as f64
}

fn coord_scale(x: &[Vec<f64>], p: f64) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            total += vecops::lp_dist(&x[u], &x[v], p);
        }
    }
    total / (n * (n - 1) / 2) as f64
}

/// Classical scaling from the Schoenberg matrix, truncated to the top `dim`
/// nonnegative eigenvalues.
fn spectral_init(space: &FiniteMetricSpace, dim: usize) -> Result<Vec<Vec<f64>>> {
    let n = space.len();
    let g = schoenberg_matrix(space, 0)?;
    let eig = symmetric_eigen(&g.values)?;
    let mut x = vec![vec![0.0; dim]; n];
    for k in 0..dim.min(eig.values.len()) {
        let lambda = eig.values[k].max(0.0).sqrt();
        for (row, &pt) in g.points.iter().enumerate() {
            x[pt][k] = lambda * eig.vectors[k][row];
        }
    }
    Ok(x)
}

fn gaussian_init<R: Rng>(n: usize, dim: usize, scale: f64, rng: &mut R) -> Vec<Vec<f64>> {
    let sigma = scale / (2.0 * dim as f64).sqrt();
    (0..n)
        .map(|_| (0..dim).map(|_| sigma * rng.sample::<f64, _>(StandardNormal)).collect())
        .collect()
}

fn initial_coords(space: &FiniteMetricSpace, cfg: &SolveConfig, restart: usize) -> Result<Vec<Vec<f64>>> {
    let mut rng = seed::rng(cfg.seed, &format!("restart/{restart}"));
    let scale = mean_distance(space);
    if restart == 0 {
        let mut x = spectral_init(space, cfg.dim)?;
        if evaluate_distortion(&x, space, cfg.p)?.is_infinite() {
            let jitter = gaussian_init(space.len(), cfg.dim, 1e-3 * scale, &mut rng);
            x = x.iter().zip(&jitter).map(|(a, b)| vecops::add(a, b)).collect();
        }
        return Ok(x);
    }
    Ok(gaussian_init(space.len(), cfg.dim, scale, &mut rng))
}

fn descend(space: &FiniteMetricSpace, cfg: &SolveConfig, mut x: Vec<Vec<f64>>) -> Result<RestartOutcome> {
    let p = cfg.p;
    let mut best = (evaluate_distortion(&x, space, p)?.distortion, x.clone());
    let mut t = T_START;
    let mut step = cfg.initial_step * coord_scale(&x, p).powi(2);
    let mut obj = smoothed_objective(&x, space, p, t);
    let mut converged = false;
    for _ in 0..cfg.iterations {
        let g2: f64 = obj.gradient.iter().flatten().map(|g| g * g).sum();
        let mut moved = false;
        if g2 > 0.0 && obj.value.is_finite() {
            for _ in 0..MAX_BACKTRACK {
                let trial: Vec<Vec<f64>> = x
                    .iter()
                    .zip(&obj.gradient)
                    .map(|(xi, gi)| vecops::sub(xi, &vecops::scale(gi, step)))
                    .collect();
                let next = smoothed_objective(&trial, space, p, t);
                if next.value <= obj.value - ARMIJO * step * g2 {
                    let gain = obj.value - next.value;
                    x = trial;
                    obj = next;
                    step *= 2.0;
                    moved = gain > 1e-15 * obj.value.abs().max(1e-3);
                    break;
                }
                step *= 0.5;
            }
        }
        let current = evaluate_distortion(&x, space, p)?.distortion;
        if current < best.0 {
            best = (current, x.clone());
        }
        if !moved {
            if t <= T_END {
                converged = true;
                break;
            }
            t = (t * cfg.decay).max(T_END);
            step = cfg.initial_step * coord_scale(&x, p).powi(2);
            obj = smoothed_objective(&x, space, p, t);
        }
    }
    Ok(RestartOutcome {
        coords: best.1,
        distortion: best.0,
        converged,
    })
}

/// Best-of-restarts local minimization of the log-distortion into `ℓ_p^d`.
/// Restart 0 starts from classical scaling, the others from seeded Gaussian
/// clouds. Deterministic for a given seed; ties go to the lowest restart.
pub fn embed_min_distortion(space: &FiniteMetricSpace, cfg: &SolveConfig) -> Result<EmbeddingResult> {
    cfg.validate()?;
    let n = space.len();
    if n < 2 {
        return Err(Error::Structural("need at least 2 points".into()));
    }
    if !crate::metric::validate_space(space).is_empty() {
        return Err(Error::Structural("input violates the metric axioms".into()));
    }

    let workers = std::thread::available_parallelism().map_or(1, |w| w.get()).min(cfg.restarts);
    let mut outcomes: Vec<Option<Result<RestartOutcome>>> = (0..cfg.restarts).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..cfg.restarts)
                        .step_by(workers)
                        .map(|i| (i, initial_coords(space, cfg, i).and_then(|x0| descend(space, cfg, x0))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, out) in h.join().expect("restart worker panicked") {
                outcomes[i] = Some(out);
            }
        }
    });

    let mut best: Option<(usize, RestartOutcome)> = None;
    for (i, out) in outcomes.into_iter().enumerate() {
        let out = out.expect("every restart ran")?;
        if best.as_ref().is_none_or(|(_, b)| out.distortion < b.distortion) {
            best = Some((i, out));
        }
    }
    let (best_restart, out) = best.expect("restarts ≥ 1");
    check_coords(&out.coords, space, cfg.p)?;
    let report = evaluate_distortion(&out.coords, space, cfg.p)?;
    Ok(EmbeddingResult {
        coords: out.coords,
        report,
        converged: out.converged,
        restarts_used: cfg.restarts,
        best_restart,
    })
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
    fn line_embeds_in_one_dimension() {
        let line = FiniteMetricSpace::from_points(&[vec![0.0], vec![1.0], vec![3.0]], 2.0).unwrap();
        let cfg = SolveConfig { dim: 1, ..Default::default() };
        let res = embed_min_distortion(&line, &cfg).unwrap();
        assert!(res.report.distortion <= 1.0 + 1e-6, "{}", res.report.distortion);
    }

    #[test]
    fn four_cycle_in_the_plane() {
        let res = embed_min_distortion(&cycle4(), &SolveConfig::default()).unwrap();
        assert!((res.report.distortion - 2f64.sqrt()).abs() < 1e-3, "{}", res.report.distortion);
        let l1 = SolveConfig { p: 1.0, ..Default::default() };
        let res = embed_min_distortion(&cycle4(), &l1).unwrap();
        assert!(res.report.distortion <= 1.0 + 1e-4, "{}", res.report.distortion);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = SolveConfig { restarts: 3, seed: 11, ..Default::default() };
        let a = embed_min_distortion(&cycle4(), &cfg).unwrap();
        let b = embed_min_distortion(&cycle4(), &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SolveConfig { p: 0.5, ..Default::default() };
        assert!(embed_min_distortion(&cycle4(), &cfg).is_err());
        let cfg = SolveConfig { restarts: 0, ..Default::default() };
        assert!(embed_min_distortion(&cycle4(), &cfg).is_err());
    }
}
