//! Pro-p Iwahori 0-Hecke algebra: Demazure products and a mechanical derivation
//! that `v = Πv` in a module cut out by `S_i v = 0`, `Π^n v = v`, `v = Σ x_i v`.
//!
//! ```bash
//! cargo run --release --example hecke0_derivation
//! ```

use satake_modp::field::Field;
use satake_modp::hecke0::{self, ExtAffineElem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 3;
    let s1 = ExtAffineElem::s(n, 1)?;
    let pi = ExtAffineElem::pi(n);
    let (w, _) = s1.compose(&pi)?;
    println!("w = s_1Π: window {:?}, length {}, reduced word {:?}", w.window(), w.length(), w.reduced_word());

    let d = hecke0::demazure_product(&w, &w)?;
    println!("T_w T_w = {} T_({}) with central shift {}", d.sign, d.result, d.central);

    let f5 = Field::prime(5)?;
    let zeta = f5.one();
    println!("braid + rotation relations: {}", hecke0::verify_braid_and_rotation(n, &zeta)?);
    println!("shift commutation: {}", hecke0::verify_shift_commutation(n, &zeta)?);

    for n in 2..=3 {
        let report = hecke0::derive_pi_invariance(n, n * n, &f5)?;
        println!("\nn = {n}: {:?}, minimal cap {:?}", report.status, report.minimal_sufficient_cap);
        for step in &report.steps {
            println!("  {}  ⟹  {}", step.identity, step.conclusion);
            for line in &step.trace {
                println!("      {line}");
            }
        }
    }
    Ok(())
}
