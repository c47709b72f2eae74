//! Hecke eigenvalues attached to a parameter pair `(M, sigma)`.
//!
//! ```bash
//! cargo run --example eigensystems
//! ```

use satake_modp::eigen::{self, ParamPair, SmoothCharacter};
use satake_modp::field::Field;
use satake_modp::root_datum::{Coweight, HighestWeight, StandardParabolic};
use satake_modp::weights::WeightClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f9 = Field::with_degree(3, 2)?;
    let g = f9.generator();
    let chi = |u, t| SmoothCharacter::new(u, t, 3);

    let levi = StandardParabolic::new(vec![1, 2])?;
    let pair = ParamPair::new(levi, vec![chi(g.clone(), 0)?, chi(f9.one(), 0)?])?;
    println!("pair {pair}");
    for lambda in [vec![-1, 0, 0], vec![-1, -1, -1], vec![-1, -1, 0], vec![-2, 0, 0]] {
        let lambda = Coweight(lambda);
        println!("  tau_({lambda}) -> {}", eigen::eval_tau(&pair, &lambda));
    }

    let v = WeightClass::new(HighestWeight(vec![0, 0, 0]), 3)?;
    eigen::check_compatible(&pair, &v)?;
    println!("  T_(-1,0,0) -> {}", eigen::eval_t(&pair, &Coweight(vec![-1, 0, 0]), &v)?);
    println!("  supersingular: {}", eigen::is_supersingular(&pair));

    let full = ParamPair::new(StandardParabolic::full(3), vec![chi(g.clone(), 0)?])?;
    println!("\npair {full}\n  supersingular: {}", eigen::is_supersingular(&full));

    let twisted = eigen::twist(&pair, &chi(g.pow(2), 0)?)?;
    println!("\ntwist by g^2: {twisted}");
    println!("  tau_(-1,0,0) -> {}", eigen::eval_tau(&twisted, &Coweight(vec![-1, 0, 0])));
    Ok(())
}
