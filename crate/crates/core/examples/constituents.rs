//! Irreducible constituents of a parabolic induction and their parameters.
//!
//! ```bash
//! cargo run --example constituents
//! ```

use satake_modp::classify::{self, BlockRep, InductionDatum};
use satake_modp::eigen::SmoothCharacter;
use satake_modp::field::Field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f5 = Field::prime(5)?;
    let eta = |u| SmoothCharacter::new(f5.from_int(u), 0, 5);

    // Ind_B^G of 1 ⊗ 1 ⊗ 2 ⊗ 2 for GL_4
    let chars = vec![eta(1)?, eta(1)?, eta(2)?, eta(2)?];
    let verdict = classify::is_irreducible_principal_series(&chars);
    println!("principal series irreducible: {}", verdict.irreducible);

    let datum = InductionDatum::from_blocks(chars.into_iter().map(|c| BlockRep::character(1, c)).collect())?;
    println!("datum {datum}, delta = {}", classify::delta(&datum));
    for block in classify::normalize(&datum) {
        println!("  super-block of size {} with {} free roots", block.size(), block.freedom());
    }

    let poset = classify::constituents(&datum)?;
    println!("{} constituents", poset.len());
    for (i, rep) in poset.elements().iter().enumerate() {
        let pair = classify::param_pair(rep)?;
        println!("  [{i}] {rep}\n      parameter {pair}");
    }
    for (a, b) in poset.order().hasse_edges() {
        println!("  [{a}] < [{b}]");
    }

    // a supersingular block stays put
    let ss = BlockRep::Supersingular { size: 2, label: "π".into(), central_char: eta(3)? };
    let mixed = InductionDatum::from_blocks(vec![BlockRep::steinberg(2, eta(1)?), ss])?;
    println!("\ndatum {mixed}: {} constituent(s)", classify::constituents(&mixed)?.len());
    Ok(())
}
