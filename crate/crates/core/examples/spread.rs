//! Builds the 2-spread of GF(q)^4 and checks it.

use lrc_spread::spread::Spread;
use lrc_spread::Field;

fn main() -> lrc_spread::Result<()> {
    let q: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let field = Field::with_order(q)?;
    let spread = Spread::build(&field);
    println!("q = {q}: {} planes (q^2 + 1 = {})", spread.len(), q * q + 1);
    for plane in spread.planes().iter().take(3) {
        let pts: Vec<String> = spread.projective_points(plane.id).iter().map(|p| format!("{:?}", p.rep())).collect();
        println!("plane {}: basis {:?}\n  points {}", plane.id, plane.basis, pts.join(" "));
    }
    println!("{:?}", spread.verify());
    Ok(())
}
