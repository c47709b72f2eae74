//! Expand `T_lambda` in the `tau` basis, invert, and multiply in the spherical Hecke algebra.
//!
//! ```bash
//! cargo run --example satake_transform
//! ```

use satake_modp::field::Field;
use satake_modp::hecke::{self, Basis, HeckeElement};
use satake_modp::root_datum::{Coweight, HighestWeight};
use satake_modp::weights::WeightClass;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f3 = Field::prime(3)?;
    let v = WeightClass::new(HighestWeight(vec![0, 0, 0]), 3)?;

    let t = HeckeElement::basis_element(&v, Basis::T, Coweight(vec![-2, -1, 0]), &f3)?;
    let tau = hecke::satake_t_to_tau(&t)?;
    println!("{t}\n  = {tau}");
    let back = hecke::satake_tau_to_t(&tau)?;
    assert_eq!(back, t);

    // products are computed in the tau basis, where the algebra is a monoid algebra
    let a = HeckeElement::basis_element(&v, Basis::Tau, Coweight(vec![-1, 0, 0]), &f3)?;
    let b = HeckeElement::basis_element(&v, Basis::Tau, Coweight(vec![-1, -1, 0]), &f3)?;
    let ab = hecke::multiply(&a, &b)?;
    println!("{a} * {b} = {ab}");
    println!("in the T basis: {}", ab.in_basis(Basis::T)?);

    // a weight that is regular for a smaller Levi gives a smaller support
    let w = WeightClass::new(HighestWeight(vec![1, 0, 0]), 3)?;
    let t = HeckeElement::basis_element(&w, Basis::T, Coweight(vec![-2, -1, 0]), &f3)?;
    println!("\nnu = {}: {t}\n  = {}", w.nu(), hecke::satake_t_to_tau(&t)?);
    Ok(())
}
