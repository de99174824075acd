//! Builds the strictly convex witness level by level, certifies each
//! level, and checks rigidity of the identity and of a rotated copy.

use std::time::Instant;

use lp_embed::metric::ball_count;
use lp_embed::net::NetSchedule;
use lp_embed::strict_convex::{build_space, verify_embedding_rigidity, LevelImage};

fn main() -> lp_embed::Result<()> {
    let levels: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let schedule = NetSchedule::default();
    let start = Instant::now();
    let space = build_space(levels, &schedule)?;
    println!("built {} levels, {} points in {:.2?}", levels, space.len(), start.elapsed());

    for level in &space.levels {
        let c = &level.certificate;
        println!(
            "level {}: δ = {:.4}, |net| = {}, |M_n| = {}, ball slack {:.3}, dist ≥ {:.2}, min norm {:.2}",
            level.n,
            level.delta,
            level.net.len(),
            level.points.len(),
            c.ball_slack,
            c.origin_distance_bound,
            c.min_point_norm
        );
        let prior = space.prior_axis_points(level.n);
        let image = LevelImage::identity(level, &prior);
        let outcome = verify_embedding_rigidity(level, &prior, &image, 1e-9)?;
        println!(
            "  identity: passed = {}, {} constraints, span rank {:?}",
            outcome.passed, outcome.constraints_checked, outcome.span_rank
        );
    }

    for radius in [0.5, 1.5, 2.5] {
        let ball = ball_count(&space, &radius)?;
        println!("ball of radius {radius}: {} points, cutoff level {}", ball.count(), ball.cutoff_level);
    }
    Ok(())
}
