//! Upper-bounds the distortion of small metric spaces into `ℓ_p^d` with the
//! restarted local search, and brackets it with the branch and bound oracle.

use lp_embed::solver::{brute_force_oracle, embed_min_distortion, OracleConfig, SolveConfig};
use lp_embed::FiniteMetricSpace;
use rand::Rng;

fn main() -> lp_embed::Result<()> {
    let cycle = FiniteMetricSpace::from_double(vec![
        vec![0.0, 1.0, 2.0, 1.0],
        vec![1.0, 0.0, 1.0, 2.0],
        vec![2.0, 1.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0],
    ])?;
    for (p, d) in [(2.0, 2), (1.0, 2), (2.0, 1), (3.0, 2)] {
        let cfg = SolveConfig { p, dim: d, ..Default::default() };
        let res = embed_min_distortion(&cycle, &cfg)?;
        let bracket = brute_force_oracle(&cycle, p, d, &OracleConfig::default())?;
        println!(
            "4-cycle into l_{p}^{d}: solver {:.6} (converged {}), oracle [{:.4}, {:.4}] after {} cells",
            res.report.distortion, res.converged, bracket.lower, bracket.upper, bracket.cells
        );
    }

    let mut rng = lp_embed::seed::rng(2024, "example/random-metrics");
    for k in 0..5 {
        let mut m = vec![vec![0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let v = rng.random_range(1.0..2.0);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        let space = FiniteMetricSpace::from_double(m)?;
        let res = embed_min_distortion(&space, &SolveConfig::default())?;
        let bracket = brute_force_oracle(&space, 2.0, 2, &OracleConfig::default())?;
        println!(
            "random metric {k}: solver {:.5}, oracle [{:.5}, {:.5}] ({} cells)",
            res.report.distortion, bracket.lower, bracket.upper, bracket.cells
        );
    }
    Ok(())
}
