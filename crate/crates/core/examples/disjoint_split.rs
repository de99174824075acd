//! Asks whether unit `ℓ_1` vectors split into `2^n` disjointly supported
//! pieces of equal norm, with and without the max-coordinate shortcut.

use lp_embed::ell1::{disjoint_split_check, IntervalVector, SplitOptions, SplitVerdict};
use lp_embed::exact;

fn show(name: &str, x: &IntervalVector, n: usize) -> lp_embed::Result<()> {
    let exhaustive = SplitOptions { use_shortcut: false, deadline: None };
    let fast = disjoint_split_check(x, n, SplitOptions::default())?;
    let slow = disjoint_split_check(x, n, exhaustive)?;
    assert_eq!(fast.is_feasible(), slow.is_feasible());
    match fast {
        SplitVerdict::Feasible { groups } => println!("{name}, n = {n}: feasible, groups {groups:?}"),
        SplitVerdict::Infeasible { certificate } => {
            println!("{name}, n = {n}: infeasible, {}", serde_json::to_string(&certificate).unwrap())
        }
    }
    Ok(())
}

fn main() -> lp_embed::Result<()> {
    let halves = IntervalVector::from_dense([exact::ratio(1, 2), exact::ratio(1, 2)]);
    show("(1/2, 1/2)", &halves, 1)?;
    show("(1/2, 1/2)", &halves, 2)?;

    let eighths = IntervalVector::from_dense((0..8).map(|_| exact::ratio(1, 8)));
    show("eight eighths", &eighths, 2)?;
    show("eight eighths", &eighths, 3)?;

    // every coordinate is small but no grouping hits 1/4 exactly
    let uneven = IntervalVector::from_dense([3, 3, 3, 3, 4, 4].map(|k| exact::ratio(k, 20)));
    show("(3,3,3,3,4,4)/20", &uneven, 2)?;

    let signed = IntervalVector::from_entries([(0, exact::ratio(1, 4)), (5, exact::ratio(-1, 4)), (9, exact::ratio(1, 2))]);
    show("(1/4, -1/4, 1/2)", &signed, 1)
}
