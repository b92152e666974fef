//! Runs the greedy construction for one field and several seeds and prints
//! the resulting code parameters.

use lrc_spread::cli::build_code;
use lrc_spread::construct::{guaranteed_pairs, Policy};
use lrc_spread::spread::Spread;
use lrc_spread::Field;

fn main() -> lrc_spread::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let field = Field::with_order(q)?;
    let spread = Spread::build(&field);
    println!("q = {q}, guaranteed L >= {}", guaranteed_pairs(q));
    for policy in std::iter::once(Policy::Lex).chain((1..=5).map(Policy::Seeded)) {
        let built = build_code(&spread, policy)?;
        let Some(code) = &built.code else {
            println!("{policy:?}: L = {}, too short for a code", built.pairs());
            continue;
        };
        let d = built.distance.unwrap();
        let class = built.report.as_ref().and_then(|r| r.classification).unwrap();
        println!(
            "{policy:?}: L = {}, ({}, {}, {d}, {})_{q} {class}",
            built.pairs(),
            code.len(),
            code.dimension(),
            code.locality()
        );
    }
    Ok(())
}
