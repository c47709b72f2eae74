//! Brute-force checks over small finite groups `GL_n(F_q)`.
//!
//! ```bash
//! cargo run --release --example oracle_checks
//! ```

use satake_modp::oracle::{self, TinyWeightModule};
use satake_modp::root_datum::StandardParabolic;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, q) in [(2, 2), (2, 3), (3, 2)] {
        println!(
            "GL_{n}(F_{q}): order {}, Bruhat {}",
            oracle::check_gl_order(n, q)?,
            oracle::check_bruhat(n, q)?
        );
        for i in 1..n {
            println!("  orbits on G/P_{i}: {:?}", oracle::iwasawa_orbit_counts(n, q, i)?);
            println!("  minuscule Satake for omega_{i}: {}", oracle::check_minuscule_satake(n, q, i)?);
        }
    }

    let (n, q) = (3, 2);
    let borel = StandardParabolic::borel(n);
    for nu in oracle::supported_weights(n, q)? {
        let module = TinyWeightModule::new(q, &nu)?;
        let report = oracle::check_invariants_coinvariants(q, &nu, &borel)?;
        println!(
            "F({nu}): dim {}, invariants {}, coinvariants {}, iso {}",
            module.dim(),
            report.dim_invariants,
            report.dim_coinvariants,
            report.isomorphism
        );
    }

    // GL_5(F_3) is far beyond brute force
    match oracle::check_gl_order(5, 3) {
        Err(e) => println!("refused: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
