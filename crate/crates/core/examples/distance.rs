//! Minimum distance of the bundled fixtures, by column dependence and, where
//! small enough, by enumerating codewords.

use lrc_spread::cli::verify_matrix;
use lrc_spread::codec::{min_distance, min_weight_codeword, LrcCode};
use lrc_spread::io;

fn main() -> lrc_spread::Result<()> {
    for (name, mf) in [("H1", io::h1()), ("H2", io::h2())] {
        let rep = verify_matrix(&mf)?;
        let r = rep.r.map_or("?".to_string(), |r| r.to_string());
        let class = rep.classification_at_q.map_or("unclassified".to_string(), |c| c.to_string());
        println!("{name}: ({}, {}, {}, {r})_{} {class}, consistent = {}", rep.n, rep.k, rep.d, rep.q, rep.consistent());
        let code = LrcCode::from_parity_check(mf.to_matrix()?, None)?;
        println!("  capped at 6: {}", min_distance(&code, 6));
        match min_weight_codeword(&code) {
            Ok(cw) => println!("  lightest codeword {cw:?}"),
            Err(e) => println!("  no enumeration: {e}"),
        }
    }
    Ok(())
}
