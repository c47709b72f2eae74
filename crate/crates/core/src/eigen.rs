//! Hecke eigensystems as pairs `(M, chi_M)`.
//!
//! A smooth character of `F^×` with values in a field of characteristic `p`
//! is determined by its value at `ϖ` and a character of `k^×`; the latter is
//! recorded as an exponent mod `q-1`.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::hecke::{satake_t_to_tau, Basis, HeckeElement, HeckeError};
use crate::root_datum::{Coweight, RootDatumError, StandardParabolic};
use crate::weights::{central_character_exponents, restrict_to_levi, prime_of, WeightClass, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("the value at the uniformiser must be nonzero")]
    ZeroUnramified,
    #[error("Levi {levi} has {blocks} blocks but {chars} characters were given")]
    BlockCount { levi: StandardParabolic, blocks: usize, chars: usize },
    #[error("characters disagree on q or on the scalar field")]
    Inconsistent,
    #[error("tame exponents {given:?} do not match the central character {expected:?}")]
    Incompatible { given: Vec<i64>, expected: Vec<i64> },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("residue field mismatch: q = {0} vs q = {1}")]
    ResidueField(u64, u64),
    #[error("simple root alpha_{0} lies in the Levi of the pair")]
    RootInLevi(usize),
    #[error("<nu, alpha_{index}^vee> = {value}, expected 0")]
    PairingNotZero { index: usize, value: i64 },
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

/// A smooth character `F^× → k̄^×`, trivial on `1 + ϖO`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmoothCharacter {
    unramified: Scalar,
    tame_exponent: i64,
    q: u64,
}

impl SmoothCharacter {
    pub fn new(unramified: Scalar, tame_exponent: i64, q: u64) -> Result<Self, EigenError> {
        prime_of(q)?;
        if unramified.is_zero() {
            return Err(EigenError::ZeroUnramified);
        }
        Ok(Self { unramified, tame_exponent: tame_exponent.rem_euclid(q as i64 - 1), q })
    }

    pub fn trivial(field: &Field, q: u64) -> Result<Self, EigenError> {
        Self::new(field.one(), 0, q)
    }

    /// Value at `ϖ`.
    pub fn unramified(&self) -> &Scalar {
        &self.unramified
    }

    pub fn tame_exponent(&self) -> i64 {
        self.tame_exponent
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn field(&self) -> &Field {
        self.unramified.field()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, EigenError> {
        if self.q != other.q || self.field() != other.field() {
            return Err(EigenError::Inconsistent);
        }
        Self::new(&self.unramified * &other.unramified, self.tame_exponent + other.tame_exponent, self.q)
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::new(self.unramified.pow(e), self.tame_exponent * e, self.q).expect("unit stays a unit")
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }
}

impl fmt::Display for SmoothCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(ϖ ↦ [{}], x^{})", self.unramified, self.tame_exponent)
    }
}

/// `(M, chi_M)`: a standard Levi and one character per block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamPair {
    levi: StandardParabolic,
    chars: Vec<SmoothCharacter>,
}

impl ParamPair {
    pub fn new(levi: StandardParabolic, chars: Vec<SmoothCharacter>) -> Result<Self, EigenError> {
        if levi.num_blocks() != chars.len() {
            return Err(EigenError::BlockCount { blocks: levi.num_blocks(), chars: chars.len(), levi });
        }
        if chars.windows(2).any(|w| w[0].q != w[1].q || w[0].field() != w[1].field()) {
            return Err(EigenError::Inconsistent);
        }
        Ok(Self { levi, chars })
    }

    pub fn levi(&self) -> &StandardParabolic {
        &self.levi
    }

    pub fn chars(&self) -> &[SmoothCharacter] {
        &self.chars
    }

    pub fn field(&self) -> &Field {
        self.chars[0].field()
    }

    pub fn q(&self) -> u64 {
        self.chars[0].q
    }

    pub fn rank(&self) -> usize {
        self.levi.rank()
    }

    pub fn tame_exponents(&self) -> Vec<i64> {
        self.chars.iter().map(|c| c.tame_exponent).collect()
    }
}

impl fmt::Display for ParamPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chars: Vec<String> = self.chars.iter().map(|c| c.to_string()).collect();
        write!(f, "({}, [{}])", self.levi, chars.join(", "))
    }
}

/// `chi_M(lambda(ϖ))^{-1}` if `lambda(ϖ)` is central in `M`, else `0`.
pub fn eval_tau(pair: &ParamPair, lambda: &Coweight) -> Scalar {
    let field = pair.field();
    if lambda.rank() != pair.rank() || !lambda.is_central_in(&pair.levi) {
        return field.zero();
    }
    let mut out = field.one();
    for (r, chi) in pair.levi.blocks().zip(&pair.chars) {
        out *= chi.unramified.pow(-lambda.0[r.start]);
    }
    out
}

/// Checks that the tame parts of `pair` match the central character of
/// `V_{N̄(k)}` on `Z_M(k)`.
pub fn check_compatible(pair: &ParamPair, v: &WeightClass) -> Result<(), EigenError> {
    if pair.rank() != v.rank() {
        return Err(EigenError::RankMismatch(pair.rank(), v.rank()));
    }
    if pair.q() != v.q() {
        return Err(EigenError::ResidueField(pair.q(), v.q()));
    }
    let expected = central_character_exponents(&restrict_to_levi(v, &pair.levi)?);
    let given = pair.tame_exponents();
    if expected != given {
        return Err(EigenError::Incompatible { given, expected });
    }
    Ok(())
}

/// The eigenvalue of `T_lambda` on `V`.
pub fn eval_t(pair: &ParamPair, lambda: &Coweight, v: &WeightClass) -> Result<Scalar, EigenError> {
    let x = HeckeElement::basis_element(v, Basis::T, lambda.clone(), pair.field())?;
    eval_element(pair, &x)
}

/// The eigenvalue of an arbitrary element of `H_G(V)`.
pub fn eval_element(pair: &ParamPair, x: &HeckeElement) -> Result<Scalar, EigenError> {
    check_compatible(pair, x.weight())?;
    if x.field() != pair.field() {
        return Err(EigenError::Inconsistent);
    }
    let tau = satake_t_to_tau(x)?;
    let mut out = pair.field().zero();
    for (mu, c) in tau.terms() {
        out += c * &eval_tau(pair, mu);
    }
    Ok(out)
}

/// Whether the eigensystem factors through the partial Satake map for `L`,
/// i.e. `M ⊆ L`.
pub fn factors_through(pair: &ParamPair, l: &StandardParabolic) -> bool {
    pair.levi.is_contained_in(l)
}

pub fn is_supersingular(pair: &ParamPair) -> bool {
    pair.levi.is_full()
}

/// `chi_b ↦ chi_b · (eta ∘ det_b)`.
pub fn twist(pair: &ParamPair, eta: &SmoothCharacter) -> Result<ParamPair, EigenError> {
    let chars = pair
        .levi
        .composition()
        .iter()
        .zip(&pair.chars)
        .map(|(&size, chi)| chi.mul(&eta.pow(size as i64)))
        .collect::<Result<Vec<_>, _>>()?;
    ParamPair::new(pair.levi.clone(), chars)
}

/// Whether the change-of-weight operator for `alpha_i` is invertible on the
/// eigenspace: either `alpha_i^vee(ϖ)` is not central in `M`, or `chi_M` is
/// nontrivial on it.
pub fn change_of_weight_applicable(v: &WeightClass, i: usize, pair: &ParamPair) -> Result<bool, EigenError> {
    if pair.rank() != v.rank() {
        return Err(EigenError::RankMismatch(pair.rank(), v.rank()));
    }
    let value = v.nu().pairing(i)?;
    if value != 0 {
        return Err(EigenError::PairingNotZero { index: i, value });
    }
    if pair.levi.simple_roots().contains(&i) {
        return Err(EigenError::RootInLevi(i));
    }
    let (a, b) = (pair.levi.block_of(i), pair.levi.block_of(i + 1));
    let sizes = pair.levi.composition();
    if sizes[a] != 1 || sizes[b] != 1 {
        return Ok(true);
    }
    Ok(pair.chars[a].unramified != pair.chars[b].unramified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::HighestWeight;

    fn chi(f: &Field, u: i64, t: i64, q: u64) -> SmoothCharacter {
        SmoothCharacter::new(f.from_int(u), t, q).unwrap()
    }

    fn comp(c: &[usize]) -> StandardParabolic {
        StandardParabolic::new(c.to_vec()).unwrap()
    }

    #[test]
    fn eval_tau_examples() {
        let f = Field::prime(5).unwrap();
        let pair = ParamPair::new(comp(&[1, 1]), vec![chi(&f, 2, 0, 5), chi(&f, 3, 0, 5)]).unwrap();
        assert_eq!(eval_tau(&pair, &Coweight(vec![0, -1])), f.from_int(3));
        assert!(eval_tau(&pair, &Coweight(vec![0, 0])).is_one());
        let g = ParamPair::new(StandardParabolic::full(2), vec![chi(&f, 2, 0, 5)]).unwrap();
        assert!(eval_tau(&g, &Coweight(vec![-1, 0])).is_zero());
        assert_eq!(eval_tau(&g, &Coweight(vec![-1, -1])), f.from_int(2));
    }

    #[test]
    fn eval_t_examples() {
        let f = Field::prime(3).unwrap();
        let v = WeightClass::trivial(2, 3).unwrap();
        let t = ParamPair::new(comp(&[1, 1]), vec![chi(&f, 1, 0, 3), chi(&f, 1, 0, 3)]).unwrap();
        assert!(eval_t(&t, &Coweight(vec![-1, 0]), &v).unwrap().is_one());
        let g = ParamPair::new(StandardParabolic::full(2), vec![chi(&f, 2, 0, 3)]).unwrap();
        assert!(eval_t(&g, &Coweight(vec![-1, 0]), &v).unwrap().is_zero());
        assert!(eval_t(&g, &Coweight(vec![0, 0]), &v).unwrap().is_one());
        let bad = ParamPair::new(comp(&[1, 1]), vec![chi(&f, 1, 1, 3), chi(&f, 1, 0, 3)]).unwrap();
        assert!(matches!(eval_t(&bad, &Coweight(vec![0, 0]), &v), Err(EigenError::Incompatible { .. })));
    }

    #[test]
    fn factorisation_and_supersingularity() {
        let f = Field::prime(3).unwrap();
        let p21 = ParamPair::new(comp(&[2, 1]), vec![chi(&f, 1, 0, 3), chi(&f, 1, 0, 3)]).unwrap();
        assert!(factors_through(&p21, &comp(&[2, 1])));
        assert!(factors_through(&p21, &StandardParabolic::full(3)));
        assert!(!factors_through(&p21, &StandardParabolic::borel(3)));
        let g = ParamPair::new(StandardParabolic::full(3), vec![chi(&f, 1, 0, 3)]).unwrap();
        assert!(!factors_through(&g, &comp(&[2, 1])));
        assert!(is_supersingular(&g));
        assert!(!is_supersingular(&p21));
    }

    #[test]
    fn twist_examples() {
        let f = Field::prime(7).unwrap();
        let q = 7;
        let t = ParamPair::new(comp(&[1, 1]), vec![chi(&f, 2, 1, q), chi(&f, 3, 0, q)]).unwrap();
        assert_eq!(twist(&t, &SmoothCharacter::trivial(&f, q).unwrap()).unwrap(), t);
        let eta = chi(&f, 5, 2, q);
        let tw = twist(&t, &eta).unwrap();
        assert_eq!(tw.chars()[0], chi(&f, 10, 3, q));
        assert_eq!(tw.chars()[1], chi(&f, 15, 2, q));
        let g = ParamPair::new(StandardParabolic::full(2), vec![chi(&f, 3, 1, q)]).unwrap();
        let tw = twist(&g, &eta).unwrap();
        assert_eq!(tw.chars()[0], chi(&f, 75, 5, q));
        assert_eq!(twist(&tw, &eta.inverse()).unwrap(), g);
    }

    #[test]
    fn change_of_weight_examples() {
        let f = Field::prime(5).unwrap();
        let v = WeightClass::trivial(2, 5).unwrap();
        let t = ParamPair::new(comp(&[1, 1]), vec![chi(&f, 2, 0, 5), chi(&f, 3, 0, 5)]).unwrap();
        assert!(change_of_weight_applicable(&v, 1, &t).unwrap());
        let t = ParamPair::new(comp(&[1, 1]), vec![chi(&f, 2, 0, 5), chi(&f, 2, 0, 5)]).unwrap();
        assert!(!change_of_weight_applicable(&v, 1, &t).unwrap());
        let v3 = WeightClass::trivial(3, 5).unwrap();
        let p = ParamPair::new(comp(&[2, 1]), vec![chi(&f, 2, 0, 5), chi(&f, 2, 0, 5)]).unwrap();
        assert!(change_of_weight_applicable(&v3, 2, &p).unwrap());
        assert!(matches!(change_of_weight_applicable(&v3, 1, &p), Err(EigenError::RootInLevi(1))));
        let w = WeightClass::new(HighestWeight(vec![1, 0]), 5).unwrap();
        assert!(change_of_weight_applicable(&w, 1, &t).is_err());
    }
}
