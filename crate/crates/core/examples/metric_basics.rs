//! Exact metric spaces: validation, distortion of a map between two spaces,
//! and the linear tuples of a small space.

use lp_embed::exact;
use lp_embed::metric::{distortion_of_map, find_linear_tuples, validate_space};
use lp_embed::FiniteMetricSpace;

fn line(points: &[i64]) -> lp_embed::Result<FiniteMetricSpace> {
    FiniteMetricSpace::from_rational(
        points.iter().map(|a| points.iter().map(|b| exact::int((a - b).abs())).collect()).collect(),
    )
}

fn main() -> lp_embed::Result<()> {
    let source = line(&[0, 1, 2, 3])?;
    let target = line(&[0, 2, 3, 7])?;
    let report = distortion_of_map(&source, &target, &[0, 1, 2, 3])?;
    println!(
        "0,1,2,3 -> 0,2,3,7: expansion {}, contraction {}, distortion {} (exact {})",
        report.lip_up,
        report.lip_down,
        report.distortion,
        report.exact.as_ref().map(|q| q.to_string()).unwrap_or_default()
    );

    let tuples = find_linear_tuples(&source, 4)?;
    println!("linear 4-tuples of a 4-point line: {:?}", tuples.iter().map(|t| &t.indices).collect::<Vec<_>>());

    let broken = FiniteMetricSpace::from_double(vec![
        vec![0.0, 1.0, 5.0],
        vec![1.0, 0.0, 1.0],
        vec![5.0, 1.0, 0.0],
    ])?;
    for v in validate_space(&broken) {
        println!("violation: {v:?}");
    }
    Ok(())
}
