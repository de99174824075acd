//! Builds the dyadic `L_1` witness, checks its decomposition identities,
//! counts balls around the origin and looks for long linear tuples.

use lp_embed::ell1::{build_l1_space, render_common, verify_decomposition_identities, L1Family, L1Member};
use lp_embed::exact;
use lp_embed::metric::{ball_count, find_linear_tuples};

fn main() -> lp_embed::Result<()> {
    let max_len: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);

    let report = verify_decomposition_identities(max_len);
    for level in &report.levels {
        println!(
            "length {}: tiles (0,1] {}, pieces sum to d {}, piece norms 2^-n {}",
            level.n, level.partition, level.sum_is_d, level.norms
        );
    }

    let witness = build_l1_space(max_len)?;
    println!("{} members", witness.members.len());
    let labels = witness.space.labels().unwrap_or_default();
    for (i, m) in witness.members.iter().enumerate().take(6) {
        println!("  {:>6}  norm {}", labels[i], m.norm());
    }

    // every pairwise distance survives rendering into a finite l_1 vector
    let fns: Vec<_> = witness.members.iter().map(L1Member::step_function).collect();
    let vectors = render_common(&fns);
    let worst = (0..fns.len())
        .flat_map(|i| (0..fns.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| vectors[i].sub(&vectors[j]).norm() != *witness.space.d_exact(i, j).unwrap())
        .count();
    println!("rendered into l_1^{}: {worst} mismatched pairs", vectors.iter().map(|v| v.support_len()).max().unwrap_or(0));

    let tuples = find_linear_tuples(&witness.space, 3)?;
    println!("{} linear triples", tuples.len());

    for r in [1, 2, 3] {
        let ball = ball_count(&L1Family, &exact::int(r))?;
        println!("ball of radius {r}: {} members, nothing past level {}", ball.count(), ball.cutoff_level);
    }
    Ok(())
}
