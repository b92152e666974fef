//! Compares the length bound for distance 7, locality 2 with two earlier
//! bounds, then prints a full report for the first fixture's parameters.

use lrc_spread::bounds::{length_bound_eq5, prior_length_bounds, BoundsReport};

fn main() -> lrc_spread::Result<()> {
    println!("{:>4} {:>8} {:>10} {:>12}", "q", "new", "chen", "guruswami");
    for q in [4, 5, 7, 8, 9, 11, 13, 16] {
        let prior = prior_length_bounds(7, 2, q)?;
        println!("{q:>4} {:>8} {:>10.1} {:>12.1}", length_bound_eq5(q), prior.chen, prior.guruswami);
    }
    println!();
    print!("{}", BoundsReport::compute(9, Some(2), Some(7), 2, 4)?.to_table());
    Ok(())
}
