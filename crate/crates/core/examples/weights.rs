//! Irreducible weights of `GL_n(F_q)`, their Levi restrictions, and regular covers.
//!
//! ```bash
//! cargo run --example weights
//! ```

use satake_modp::root_datum::StandardParabolic;
use satake_modp::weights::{self, WeightClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let all = WeightClass::enumerate(3, 2)?;
    println!("{} weights of GL_3(F_2)", all.len());

    let levi = StandardParabolic::new(vec![2, 1])?;
    for v in &all {
        let restricted = weights::restrict_to_levi(v, &levi)?;
        let cover = weights::regular_cover(&restricted);
        println!(
            "  {v}: M-regular {}, central exponents {:?}, regular cover {}",
            weights::is_m_regular(v, &levi)?,
            weights::central_character_exponents(&restricted),
            cover.nu(),
        );
    }

    // change of weight along alpha_i when nu is orthogonal to alpha_i^vee
    let v = WeightClass::trivial(3, 3)?;
    for i in 1..3 {
        println!("partner of {v} along alpha_{i}: {}", weights::weight_partner_for_change(&v, i)?);
    }
    Ok(())
}
