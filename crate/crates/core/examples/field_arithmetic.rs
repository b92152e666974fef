//! Arithmetic in GF(4) and GF(9) with integer-encoded elements.

use lrc_spread::field::{ArithOp, Field};

fn main() -> lrc_spread::Result<()> {
    // GF(4) = GF(2)[x]/(x^2 + x + 1); gamma encodes as 2, gamma^2 = gamma + 1 as 3.
    let gf4 = Field::new(2, 2, Some(&[1, 1, 1]))?;
    let gamma = gf4.element(2)?;
    let sq = gamma.apply(&gamma, ArithOp::Mul)?;
    println!("GF(4): gamma^2 = {}, gamma^-1 = {}", sq.value(), gamma.inverse()?.value());

    println!("GF(4) multiplication table:");
    for a in gf4.elements() {
        let row: Vec<String> = gf4.elements().map(|b| gf4.mul(a, b).to_string()).collect();
        println!("  {}", row.join(" "));
    }

    let gf9 = Field::with_order(9)?;
    let g = gf9.primitive_element();
    let powers: Vec<u32> = (0..8).map(|i| gf9.pow(g, i)).collect();
    println!("GF(9) modulus {:?}, powers of {g}: {powers:?}", gf9.modulus());
    Ok(())
}
