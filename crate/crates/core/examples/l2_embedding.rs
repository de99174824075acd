//! Schoenberg test for isometric `ℓ_2` embeddability: recovers coordinates
//! when they exist and prints the negative direction when they do not.

use lp_embed::ell2::{check_collinear, embeds_isometrically_l2, L2Verdict};
use lp_embed::FiniteMetricSpace;

fn describe(name: &str, space: &FiniteMetricSpace) -> lp_embed::Result<()> {
    match embeds_isometrically_l2(space)? {
        L2Verdict::Embeddable { coords, rank } => {
            println!("{name}: embeds in l_2^{rank}, collinear {}", check_collinear(&coords, 1e-9));
            for c in coords {
                println!("    {c:?}");
            }
        }
        L2Verdict::NotEmbeddable { eigenvalue, certificate, .. } => {
            println!("{name}: no isometric l_2 image, eigenvalue {eigenvalue:.6} along {certificate:.4?}");
        }
    }
    Ok(())
}

fn main() -> lp_embed::Result<()> {
    let line = FiniteMetricSpace::from_double(vec![
        vec![0.0, 1.0, 3.0],
        vec![1.0, 0.0, 2.0],
        vec![3.0, 2.0, 0.0],
    ])?;
    describe("points 0, 1, 3 on a line", &line)?;

    let square = FiniteMetricSpace::from_points(
        &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
        2.0,
    )?;
    describe("unit square", &square)?;

    let cycle = FiniteMetricSpace::from_double(vec![
        vec![0.0, 1.0, 2.0, 1.0],
        vec![1.0, 0.0, 1.0, 2.0],
        vec![2.0, 1.0, 0.0, 1.0],
        vec![1.0, 2.0, 1.0, 0.0],
    ])?;
    describe("4-cycle with path metric", &cycle)?;

    let star = FiniteMetricSpace::from_double(vec![
        vec![0.0, 1.0, 1.0, 1.0],
        vec![1.0, 0.0, 2.0, 2.0],
        vec![1.0, 2.0, 0.0, 2.0],
        vec![1.0, 2.0, 2.0, 0.0],
    ])?;
    describe("star with three leaves", &star)
}
