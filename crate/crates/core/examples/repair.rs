//! Local and global repair on the GF(7) fixture, then a small simulation.

use lrc_spread::codec::LrcCode;
use lrc_spread::io;
use lrc_spread::sim::{simulate_repairs, FailureModel};

fn main() -> lrc_spread::Result<()> {
    let code = LrcCode::from_parity_check(io::h2().to_matrix()?, None)?;
    let msg: Vec<u32> = (0..code.dimension() as u32).map(|i| (3 * i + 1) % 7).collect();
    let cw = code.encode(&msg)?;
    println!("codeword {cw:?}");

    let mut word: Vec<Option<u32>> = cw.iter().map(|&x| Some(x)).collect();
    word[4] = None;
    let local = code.repair_local(&word, 4)?;
    println!("node 4 rebuilt as {} from nodes {:?}", local.value, local.helpers);

    for i in [0, 3, 7, 9, 13, 17] {
        word[i] = None;
    }
    let global = code.repair_global(&word)?;
    println!("7 erasures repaired globally: {} (read {})", global.codeword == cw, global.helpers_read);

    for model in [
        FailureModel::SingleUniform,
        FailureModel::MultiUniform(6),
        FailureModel::MultiUniform(7),
        FailureModel::GroupBurst,
    ] {
        let s = simulate_repairs(&code, 5000, model, 1)?.summary;
        println!(
            "{model}: success {:.4} [{:.4}, {:.4}], helpers {:.2}, local {:.2}",
            s.success_rate, s.success_ci95.0, s.success_ci95.1, s.mean_helpers_read, s.local_fraction
        );
    }
    Ok(())
}
