//! The spherical Hecke algebra `H_G(V) ≅ k[X_*(T)_-]` of a Serre weight.
//!
//! Elements are stored in one of two bases: the double-coset basis `T_lambda`
//! or the monoid basis `tau_lambda` of the Satake image. The change of basis is
//!
//! ```text
//! tau_mu = sum_{lambda antidominant, lambda >=_M mu} S(T_lambda)
//! ```
//!
//! with `M` the Levi cut out by `Stab_W(nu)`, and its inverse is obtained by
//! Möbius inversion on the poset of antidominant coweights under `>=_M`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::root_datum::{
    self, coroot_coefficients, fundamental_antidominant_coweight, interval_above, leq_m, stab_levi,
    Coweight, RootDatumError, StandardParabolic,
};
use crate::weights::{WeightClass, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("coweight {0} is not antidominant")]
    NotAntidominant(Coweight),
    #[error("elements live over different weights: {0} vs {1}")]
    WeightMismatch(WeightClass, WeightClass),
    #[error("{mu} is not below {lambda} for {levi}")]
    NotBelow { mu: Coweight, lambda: Coweight, levi: StandardParabolic },
    #[error("simple root alpha_{index} is not in the Levi {levi}")]
    RootNotInLevi { index: usize, levi: StandardParabolic },
    #[error("scalar field has characteristic {field}, weight has p = {weight}")]
    Characteristic { field: u64, weight: u64 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("residue field mismatch: q = {0} vs q = {1}")]
    ResidueField(u64, u64),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// Characteristic-function basis `T_lambda`.
    T,
    /// Satake-image basis `tau_lambda`.
    Tau,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::T => write!(f, "T"),
            Basis::Tau => write!(f, "tau"),
        }
    }
}

type MoebiusRow = Arc<Vec<(Coweight, i64)>>;

fn moebius_cache() -> &'static RwLock<HashMap<(Vec<usize>, Vec<i64>), MoebiusRow>> {
    static CACHE: OnceLock<RwLock<HashMap<(Vec<usize>, Vec<i64>), MoebiusRow>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Möbius values `m(mu, lambda)` for every `lambda` in `interval_above(mu, M)`,
/// as integers.
///
/// Rows are cached per Levi and per `mu` up to central translation, which
/// preserves both antidominance and `>=_M`.
pub fn moebius_row(mu: &Coweight, levi: &StandardParabolic) -> Result<Vec<(Coweight, i64)>, RootDatumError> {
    if levi.rank() != mu.rank() {
        return Err(RootDatumError::LengthMismatch(levi.rank(), mu.rank()));
    }
    if !mu.is_antidominant() {
        return Err(RootDatumError::NotAntidominant(mu.clone()));
    }
    let shift = *mu.0.last().unwrap();
    let normalized = Coweight(mu.0.iter().map(|x| x - shift).collect());
    let key = (levi.composition().to_vec(), normalized.0.clone());
    let cached = moebius_cache().read().unwrap().get(&key).cloned();
    let row = match cached {
        Some(row) => row,
        None => {
            let row = Arc::new(compute_moebius_row(&normalized, levi)?);
            moebius_cache().write().unwrap().insert(key, row.clone());
            row
        }
    };
    Ok(row
        .iter()
        .map(|(l, v)| (Coweight(l.0.iter().map(|x| x + shift).collect()), *v))
        .collect())
}

fn compute_moebius_row(mu: &Coweight, levi: &StandardParabolic) -> Result<Vec<(Coweight, i64)>, RootDatumError> {
    let interval = interval_above(mu, levi)?;
    let mut with_height: Vec<(i64, Coweight)> = interval
        .into_iter()
        .map(|l| {
            let c = coroot_coefficients(mu, &l, levi).unwrap().expect("member of the interval");
            (c.iter().sum(), l)
        })
        .collect();
    with_height.sort();
    let mut values: Vec<(Coweight, i64)> = Vec::with_capacity(with_height.len());
    for (_, lambda) in with_height {
        let v = if values.is_empty() {
            1
        } else {
            let mut s = 0;
            for (nu, m) in &values {
                if leq_m(nu, &lambda, levi)? {
                    s += m;
                }
            }
            -s
        };
        values.push((lambda, v));
    }
    values.sort();
    Ok(values)
}

/// `m(mu, lambda)` in the poset of antidominant coweights under `>=_M`,
/// reduced into `field`.
pub fn moebius(
    mu: &Coweight,
    lambda: &Coweight,
    levi: &StandardParabolic,
    field: &Field,
) -> Result<Scalar, HeckeError> {
    if !leq_m(mu, lambda, levi)? || !lambda.is_antidominant() {
        return Err(HeckeError::NotBelow { mu: mu.clone(), lambda: lambda.clone(), levi: levi.clone() });
    }
    let row = moebius_row(mu, levi)?;
    let v = row
        .iter()
        .find(|(l, _)| l == lambda)
        .map(|(_, v)| *v)
        .expect("lambda lies in the interval above mu");
    Ok(field.from_int(v))
}

/// An element of `H_G(V)` in a chosen basis.
#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    weight: WeightClass,
    field: Field,
    basis: Basis,
    terms: BTreeMap<Coweight, Scalar>,
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(k, c)| format!("[{}]·{}_({})", c, self.basis, k)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl HeckeElement {
    pub fn zero(weight: &WeightClass, basis: Basis, field: &Field) -> Result<Self, HeckeError> {
        if field.characteristic() != weight.p() {
            return Err(HeckeError::Characteristic { field: field.characteristic(), weight: weight.p() });
        }
        Ok(Self { weight: weight.clone(), field: field.clone(), basis, terms: BTreeMap::new() })
    }

    /// The basis vector `T_lambda` or `tau_lambda`.
    pub fn basis_element(
        weight: &WeightClass,
        basis: Basis,
        lambda: Coweight,
        field: &Field,
    ) -> Result<Self, HeckeError> {
        let mut x = Self::zero(weight, basis, field)?;
        x.add_term(lambda, field.one())?;
        Ok(x)
    }

    /// The unit `T_0 = tau_0`.
    pub fn one(weight: &WeightClass, basis: Basis, field: &Field) -> Result<Self, HeckeError> {
        Self::basis_element(weight, basis, Coweight::zero(weight.rank()), field)
    }

    pub fn from_terms(
        weight: &WeightClass,
        basis: Basis,
        field: &Field,
        terms: impl IntoIterator<Item = (Coweight, Scalar)>,
    ) -> Result<Self, HeckeError> {
        let mut x = Self::zero(weight, basis, field)?;
        for (k, c) in terms {
            x.add_term(k, c)?;
        }
        Ok(x)
    }

    pub fn add_term(&mut self, lambda: Coweight, c: Scalar) -> Result<(), HeckeError> {
        if lambda.rank() != self.weight.rank() {
            return Err(HeckeError::RankMismatch(lambda.rank(), self.weight.rank()));
        }
        if !lambda.is_antidominant() {
            return Err(HeckeError::NotAntidominant(lambda));
        }
        self.add_unchecked(lambda, &c);
        Ok(())
    }

    fn add_unchecked(&mut self, lambda: Coweight, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&lambda) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&lambda);
                }
            }
            None => {
                self.terms.insert(lambda, c.clone());
            }
        }
    }

    pub fn weight(&self) -> &WeightClass {
        &self.weight
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    /// The Levi `M` with `W_M = Stab_W(nu)`.
    pub fn levi(&self) -> StandardParabolic {
        stab_levi(self.weight.nu())
    }

    pub fn terms(&self) -> &BTreeMap<Coweight, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, lambda: &Coweight) -> Scalar {
        self.terms.get(lambda).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_space(&self, other: &Self) -> Result<(), HeckeError> {
        if self.weight != other.weight {
            return Err(HeckeError::WeightMismatch(self.weight.clone(), other.weight.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, HeckeError> {
        self.same_space(other)?;
        let other = other.in_basis(self.basis)?;
        let mut out = self.clone();
        for (k, c) in other.terms {
            out.add_unchecked(k, &c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self { terms: BTreeMap::new(), ..self.clone() };
        for (k, v) in &self.terms {
            out.add_unchecked(k.clone(), &(v * c));
        }
        out
    }

    pub fn in_basis(&self, basis: Basis) -> Result<Self, HeckeError> {
        match (self.basis, basis) {
            (Basis::T, Basis::Tau) => satake_t_to_tau(self),
            (Basis::Tau, Basis::T) => satake_tau_to_t(self),
            _ => Ok(self.clone()),
        }
    }
}

/// `S(T_lambda) = sum_{mu >=_M lambda} m(lambda, mu) tau_mu`, extended linearly.
pub fn satake_t_to_tau(x: &HeckeElement) -> Result<HeckeElement, HeckeError> {
    if x.basis == Basis::Tau {
        return Ok(x.clone());
    }
    let levi = x.levi();
    let mut out = HeckeElement::zero(&x.weight, Basis::Tau, &x.field)?;
    for (lambda, c) in &x.terms {
        for (mu, m) in moebius_row(lambda, &levi)? {
            if m != 0 {
                out.add_unchecked(mu, &(c * &x.field.from_int(m)));
            }
        }
    }
    Ok(out)
}

/// `tau_mu ↦ sum_{lambda in interval_above(mu, M)} T_lambda`, extended linearly.
pub fn satake_tau_to_t(x: &HeckeElement) -> Result<HeckeElement, HeckeError> {
    if x.basis == Basis::T {
        return Ok(x.clone());
    }
    let levi = x.levi();
    let mut out = HeckeElement::zero(&x.weight, Basis::T, &x.field)?;
    for (mu, c) in &x.terms {
        for lambda in interval_above(mu, &levi)? {
            out.add_unchecked(lambda, c);
        }
    }
    Ok(out)
}

/// Product in `H_G(V)`: computed through `tau_a tau_b = tau_{a+b}` and
/// returned in the basis of `a`.
pub fn multiply(a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement, HeckeError> {
    a.same_space(b)?;
    let ta = a.in_basis(Basis::Tau)?;
    let tb = b.in_basis(Basis::Tau)?;
    let mut out = HeckeElement::zero(&a.weight, Basis::Tau, &a.field)?;
    for (ka, ca) in &ta.terms {
        for (kb, cb) in &tb.terms {
            out.add_unchecked(ka + kb, &(ca * cb));
        }
    }
    out.in_basis(a.basis)
}

fn antidominant_in_box(n: usize, radius: i64) -> Vec<Coweight> {
    fn rec(prefix: &mut Vec<i64>, n: usize, radius: i64, out: &mut Vec<Coweight>) {
        if prefix.len() == n {
            out.push(Coweight(prefix.clone()));
            return;
        }
        let start = prefix.last().copied().unwrap_or(-radius);
        for x in start..=radius {
            prefix.push(x);
            rec(prefix, n, radius, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, radius, &mut out);
    out
}

/// Exhaustively checks, over antidominant `mu` with entries in
/// `[-radius, radius]`, that `mu >=_M 2 lambda` holds exactly when
/// `mu = 2 lambda` or `mu >=_M 2 lambda + alpha_i^vee`, where `lambda` is
/// the fundamental antidominant coweight for `alpha_i`.
pub fn doubling_support_claim(levi: &StandardParabolic, i: usize, radius: i64) -> Result<bool, HeckeError> {
    let n = levi.rank();
    let lambda = fundamental_antidominant_coweight(n, i)?;
    if !levi.simple_roots().contains(&i) {
        return Err(HeckeError::RootNotInLevi { index: i, levi: levi.clone() });
    }
    let two_lambda = lambda.scaled(2);
    let shifted = &two_lambda + &Coweight::simple_coroot(n, i)?;
    for mu in antidominant_in_box(n, radius) {
        let lhs = leq_m(&two_lambda, &mu, levi)?;
        let rhs = mu == two_lambda || leq_m(&shifted, &mu, levi)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The maximal coweight `lambda_0` supporting `H_G(V_1, V_2)`, or `None` if
/// the bimodule vanishes (the `U(k)`-invariant lines differ as `T(k)`-characters).
///
/// `lambda_0` pairs to `0` with `alpha_i` when `<nu_1 - nu_2, alpha_i^vee> = 0`
/// and to `-1` otherwise, normalised so that its last entry is `0`.
pub fn bimodule_support(v1: &WeightClass, v2: &WeightClass) -> Result<Option<Coweight>, HeckeError> {
    if v1.rank() != v2.rank() {
        return Err(HeckeError::RankMismatch(v1.rank(), v2.rank()));
    }
    if v1.q() != v2.q() {
        return Err(HeckeError::ResidueField(v1.q(), v2.q()));
    }
    let m = v1.q() as i64 - 1;
    let diff: Vec<i64> = v1.nu().0.iter().zip(&v2.nu().0).map(|(a, b)| a - b).collect();
    if diff.iter().any(|d| d.rem_euclid(m) != 0) {
        return Ok(None);
    }
    let n = v1.rank();
    let mut lambda = vec![0i64; n];
    for i in (1..n).rev() {
        let step = if diff[i - 1] == diff[i] { 0 } else { 1 };
        lambda[i - 1] = lambda[i] - step;
    }
    Ok(Some(Coweight(lambda)))
}

/// Satake support `(lambda, lambda + alpha_i^vee)` of the change-of-weight
/// operator `V → F(nu + (q-1) omega_i)`.
pub fn change_of_weight_support(v: &WeightClass, i: usize) -> Result<(Coweight, Coweight), HeckeError> {
    let value = v.nu().pairing(i)?;
    if value != 0 {
        return Err(WeightError::PairingNotZero { index: i, value }.into());
    }
    let n = v.rank();
    let lambda = fundamental_antidominant_coweight(n, i)?;
    let other = &lambda + &root_datum::Coweight::simple_coroot(n, i)?;
    Ok((lambda, other))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::HighestWeight;

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    fn weight(nu: &[i64], q: u64) -> WeightClass {
        WeightClass::new(HighestWeight(nu.to_vec()), q).unwrap()
    }

    #[test]
    fn satake_gl2_trivial_weight() {
        let f = Field::prime(3).unwrap();
        let v = weight(&[0, 0], 3);
        let t = HeckeElement::basis_element(&v, Basis::T, cw(&[-2, 0]), &f).unwrap();
        let s = satake_t_to_tau(&t).unwrap();
        let expected = HeckeElement::from_terms(
            &v,
            Basis::Tau,
            &f,
            [(cw(&[-2, 0]), f.one()), (cw(&[-1, -1]), f.from_int(-1))],
        )
        .unwrap();
        assert_eq!(s, expected);

        let t = HeckeElement::basis_element(&v, Basis::T, cw(&[-1, 0]), &f).unwrap();
        let s = satake_t_to_tau(&t).unwrap();
        assert_eq!(s.terms().len(), 1);
        assert!(s.coefficient(&cw(&[-1, 0])).is_one());
    }

    #[test]
    fn satake_regular_weight_is_identity() {
        let f = Field::prime(3).unwrap();
        let v = weight(&[2, 0], 3);
        for l in [[-3, 1], [-1, 0], [0, 0], [-5, 4]] {
            let t = HeckeElement::basis_element(&v, Basis::T, cw(&l), &f).unwrap();
            let s = satake_t_to_tau(&t).unwrap();
            assert_eq!(s.terms().len(), 1);
            assert!(s.coefficient(&cw(&l)).is_one());
            assert_eq!(satake_tau_to_t(&s).unwrap(), t);
        }
    }

    #[test]
    fn tau_to_t_examples() {
        let f = Field::prime(5).unwrap();
        let v = weight(&[0, 0], 5);
        let x = HeckeElement::basis_element(&v, Basis::Tau, cw(&[-1, 1]), &f).unwrap();
        let y = satake_tau_to_t(&x).unwrap();
        assert_eq!(y.terms().keys().cloned().collect::<Vec<_>>(), vec![cw(&[-1, 1]), cw(&[0, 0])]);
        let v3 = weight(&[0, 0, 0], 5);
        let x = HeckeElement::basis_element(&v3, Basis::Tau, cw(&[-1, 0, 1]), &f).unwrap();
        let y = satake_tau_to_t(&x).unwrap();
        assert_eq!(y.terms().keys().cloned().collect::<Vec<_>>(), vec![cw(&[-1, 0, 1]), cw(&[0, 0, 0])]);
    }

    #[test]
    fn moebius_examples() {
        let f = Field::prime(7).unwrap();
        let g2 = StandardParabolic::full(2);
        assert!(moebius(&cw(&[-1, 1]), &cw(&[-1, 1]), &g2, &f).unwrap().is_one());
        assert_eq!(moebius(&cw(&[-1, 1]), &cw(&[0, 0]), &g2, &f).unwrap(), f.from_int(-1));
        let g3 = StandardParabolic::full(3);
        assert_eq!(moebius(&cw(&[-1, 0, 1]), &cw(&[0, 0, 0]), &g3, &f).unwrap(), f.from_int(-1));
        assert!(matches!(
            moebius(&cw(&[0, 0]), &cw(&[-1, 1]), &g2, &f),
            Err(HeckeError::NotBelow { .. })
        ));
    }

    #[test]
    fn moebius_is_not_translation_invariant() {
        // same difference lambda - mu, different intervals
        let g3 = StandardParabolic::full(3);
        let a = moebius_row(&cw(&[-1, 0, 1]), &g3).unwrap();
        let b = moebius_row(&cw(&[-2, 0, 2]), &g3).unwrap();
        let at = |row: &Vec<(Coweight, i64)>, l: &[i64]| row.iter().find(|(k, _)| k.0 == l).unwrap().1;
        assert_eq!(at(&a, &[0, 0, 0]), -1);
        assert_eq!(at(&b, &[-1, 0, 1]), 1);
    }

    #[test]
    fn multiply_examples() {
        let f = Field::prime(3).unwrap();
        let v = weight(&[0, 0], 3);
        let tau = HeckeElement::basis_element(&v, Basis::Tau, cw(&[-1, 0]), &f).unwrap();
        let sq = multiply(&tau, &tau).unwrap();
        assert_eq!(sq, HeckeElement::basis_element(&v, Basis::Tau, cw(&[-2, 0]), &f).unwrap());

        let t = HeckeElement::basis_element(&v, Basis::T, cw(&[-1, 0]), &f).unwrap();
        let sq = multiply(&t, &t).unwrap();
        let expected = HeckeElement::from_terms(
            &v,
            Basis::T,
            &f,
            [(cw(&[-2, 0]), f.one()), (cw(&[-1, -1]), f.one())],
        )
        .unwrap();
        assert_eq!(sq, expected);

        let one = HeckeElement::one(&v, Basis::T, &f).unwrap();
        assert_eq!(multiply(&sq, &one).unwrap(), sq);
        let other = HeckeElement::one(&weight(&[1, 0], 3), Basis::T, &f).unwrap();
        assert!(matches!(multiply(&t, &other), Err(HeckeError::WeightMismatch(..))));
    }

    #[test]
    fn characteristic_must_match() {
        let f = Field::prime(5).unwrap();
        let v = weight(&[0, 0], 3);
        assert!(matches!(
            HeckeElement::zero(&v, Basis::T, &f),
            Err(HeckeError::Characteristic { .. })
        ));
        assert!(HeckeElement::basis_element(&v, Basis::T, cw(&[1, 0]), &Field::prime(3).unwrap()).is_err());
    }

    #[test]
    fn support_claim_examples() {
        assert!(doubling_support_claim(&StandardParabolic::full(2), 1, 4).unwrap());
        assert!(doubling_support_claim(&StandardParabolic::full(3), 1, 3).unwrap());
        let m = StandardParabolic::new(vec![2, 2]).unwrap();
        assert!(matches!(
            doubling_support_claim(&m, 2, 2),
            Err(HeckeError::RootNotInLevi { index: 2, .. })
        ));
    }

    #[test]
    fn bimodule_support_examples() {
        for q in [3u64, 4, 5] {
            let v1 = weight(&[0, 0], q);
            assert_eq!(bimodule_support(&v1, &v1).unwrap(), Some(cw(&[0, 0])));
            let v2 = weight(&[q as i64 - 1, 0], q);
            assert_eq!(bimodule_support(&v1, &v2).unwrap(), Some(cw(&[-1, 0])));
            let v3 = weight(&[1, 0], q);
            assert_eq!(bimodule_support(&v1, &v3).unwrap(), None);
        }
    }

    #[test]
    fn change_of_weight_support_examples() {
        let v = weight(&[0, 0], 3);
        assert_eq!(change_of_weight_support(&v, 1).unwrap(), (cw(&[-1, 0]), cw(&[0, -1])));
        let v = weight(&[0, 0, 0], 3);
        assert_eq!(change_of_weight_support(&v, 1).unwrap(), (cw(&[-1, 0, 0]), cw(&[0, -1, 0])));
        assert!(change_of_weight_support(&weight(&[1, 0], 3), 1).is_err());
    }
}
