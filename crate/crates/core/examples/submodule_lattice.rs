//! The lattice of submodules of a parabolic induction, with Graphviz output.
//!
//! ```bash
//! cargo run --example submodule_lattice > lattice.dot
//! dot -Tsvg lattice.dot > lattice.svg
//! ```

use satake_modp::classify::{self, BlockRep, InductionDatum};
use satake_modp::cli::export_lattice_dot;
use satake_modp::eigen::SmoothCharacter;
use satake_modp::field::Field;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = Field::prime(3)?;
    let one = SmoothCharacter::trivial(&f3, 3)?;
    let datum = InductionDatum::from_blocks(vec![BlockRep::character(1, one); 3])?;
    let lattice = classify::submodule_lattice(&datum)?;

    eprintln!("{} constituents, {} submodules", lattice.poset.len(), lattice.lower_set_count);
    eprintln!("socle {:?}, cosocle {:?}", lattice.socle, lattice.cosocle);
    for (j, sub) in lattice.lower_sets().iter().enumerate() {
        eprintln!("  U_{j} = {sub:?}");
    }
    print!("{}", export_lattice_dot(&lattice));
    Ok(())
}
