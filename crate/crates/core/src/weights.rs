//! Serre weights of `GL_n(F_q)` described by their `q`-restricted highest weights.
//!
//! `F(nu) ≅ F(nu')` exactly when `nu - nu'` is a multiple of `(q-1)(1,…,1)`.
//! Classes are stored through a canonical representative whose last entry
//! lies in `[0, q-2]`; the Levi analogue normalises each block separately.

use std::fmt;

use thiserror::Error;

use crate::field::is_prime;
use crate::root_datum::{HighestWeight, RootDatumError, StandardParabolic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("weight {nu} is not {q}-restricted")]
    NotRestricted { nu: HighestWeight, q: u64 },
    #[error("weight {nu} is not {q}-restricted on the blocks of {levi}")]
    NotRestrictedOnBlocks { nu: HighestWeight, levi: StandardParabolic, q: u64 },
    #[error("<nu, alpha_{index}^vee> = {value}, expected 0")]
    PairingNotZero { index: usize, value: i64 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("residue field size mismatch: {0} vs {1}")]
    FieldMismatch(u64, u64),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
}

/// Returns the prime `p` with `q = p^f`.
pub fn prime_of(q: u64) -> Result<u64, WeightError> {
    if q < 2 {
        return Err(WeightError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    if r != 1 || !is_prime(p) {
        return Err(WeightError::NotPrimePower(q));
    }
    Ok(p)
}

fn shift_block(v: &mut [i64], range: std::ops::Range<usize>, q: u64) {
    let m = q as i64 - 1;
    let last = v[range.end - 1];
    // bring the last entry of the block into [0, q-2]
    let target = last.rem_euclid(m.max(1));
    let shift = if m == 0 { last } else { last - target };
    for x in &mut v[range] {
        *x -= shift;
    }
}

fn restricted_on(nu: &[i64], range: std::ops::Range<usize>, q: u64) -> bool {
    nu[range].windows(2).all(|w| {
        let d = w[0] - w[1];
        0 <= d && d < q as i64
    })
}

/// The isomorphism class of the irreducible `GL_n(F_q)`-representation `F(nu)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightClass {
    nu: HighestWeight,
    q: u64,
    p: u64,
}

impl WeightClass {
    /// Canonicalises a `q`-restricted dominant weight.
    pub fn new(nu: HighestWeight, q: u64) -> Result<Self, WeightError> {
        let p = prime_of(q)?;
        let n = nu.rank();
        if n == 0 || !restricted_on(&nu.0, 0..n, q) {
            return Err(WeightError::NotRestricted { nu, q });
        }
        let mut v = nu.0;
        shift_block(&mut v, 0..n, q);
        Ok(Self { nu: HighestWeight(v), q, p })
    }

    pub fn trivial(n: usize, q: u64) -> Result<Self, WeightError> {
        Self::new(HighestWeight::zero(n), q)
    }

    pub fn nu(&self) -> &HighestWeight {
        &self.nu
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.nu.rank()
    }

    /// Every canonical class for `GL_n(F_q)`.
    pub fn enumerate(n: usize, q: u64) -> Result<Vec<Self>, WeightError> {
        let p = prime_of(q)?;
        let mut out = Vec::new();
        let mut diffs = vec![0i64; n.saturating_sub(1)];
        let last_max = q as i64 - 2;
        loop {
            for last in 0..=last_max.max(0) {
                let mut v = vec![0i64; n];
                v[n - 1] = last;
                for i in (0..n - 1).rev() {
                    v[i] = v[i + 1] + diffs[i];
                }
                out.push(Self { nu: HighestWeight(v), q, p });
            }
            // odometer over differences in [0, q-1]
            let mut k = 0;
            loop {
                if k == diffs.len() {
                    out.sort();
                    return Ok(out);
                }
                diffs[k] += 1;
                if diffs[k] < q as i64 {
                    break;
                }
                diffs[k] = 0;
                k += 1;
            }
        }
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}) mod q={}", self.nu, self.q)
    }
}

/// A Serre weight of the Levi `M(F_q)`, i.e. a tuple of weights, one per block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeviWeightClass {
    levi: StandardParabolic,
    nu: HighestWeight,
    q: u64,
}

impl LeviWeightClass {
    pub fn new(levi: StandardParabolic, nu: HighestWeight, q: u64) -> Result<Self, WeightError> {
        prime_of(q)?;
        if levi.rank() != nu.rank() {
            return Err(WeightError::RankMismatch(levi.rank(), nu.rank()));
        }
        let mut v = nu.0.clone();
        for r in levi.blocks() {
            if !restricted_on(&v, r.clone(), q) {
                return Err(WeightError::NotRestrictedOnBlocks { nu, levi: levi.clone(), q });
            }
            shift_block(&mut v, r, q);
        }
        Ok(Self { levi, nu: HighestWeight(v), q })
    }

    pub fn levi(&self) -> &StandardParabolic {
        &self.levi
    }

    pub fn nu(&self) -> &HighestWeight {
        &self.nu
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Every canonical Levi weight class for `M(F_q)`.
    pub fn enumerate(levi: &StandardParabolic, q: u64) -> Result<Vec<Self>, WeightError> {
        let per_block: Vec<Vec<WeightClass>> = levi
            .composition()
            .iter()
            .map(|&size| WeightClass::enumerate(size, q))
            .collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_block.len()];
        loop {
            let v: Vec<i64> = idx
                .iter()
                .zip(&per_block)
                .flat_map(|(i, ws)| ws[*i].nu.0.clone())
                .collect();
            out.push(Self { levi: levi.clone(), nu: HighestWeight(v), q });
            let mut k = 0;
            loop {
                if k == idx.len() {
                    out.sort();
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < per_block[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// `V^{N(k)}` as a weight of the Levi of `parabolic`: same highest weight,
/// reduced blockwise.
pub fn restrict_to_levi(v: &WeightClass, parabolic: &StandardParabolic) -> Result<LeviWeightClass, WeightError> {
    LeviWeightClass::new(parabolic.clone(), v.nu.clone(), v.q)
}

/// `0 < <nu, alpha^vee>` for every simple root outside `Delta_M`.
pub fn is_m_regular(v: &WeightClass, levi: &StandardParabolic) -> Result<bool, WeightError> {
    if v.rank() != levi.rank() {
        return Err(WeightError::RankMismatch(v.rank(), levi.rank()));
    }
    for i in levi.boundary_roots() {
        if v.nu.pairing(i)? <= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique `M`-regular weight restricting to `vbar`.
///
/// Blocks are shifted by multiples of `q-1`, right to left, until every
/// boundary pairing lands in `[1, q-1]`; that interval is a full residue
/// system mod `q-1`, so each shift is forced.
pub fn regular_cover(vbar: &LeviWeightClass) -> WeightClass {
    let q = vbar.q as i64;
    let m = q - 1;
    let mut v = vbar.nu.0.clone();
    let ranges: Vec<_> = vbar.levi.blocks().collect();
    for b in (0..ranges.len().saturating_sub(1)).rev() {
        let left_last = v[ranges[b].end - 1];
        let right_first = v[ranges[b + 1].start];
        let d = left_last - right_first;
        // want d + k*m in [1, m]
        let target = (d - 1).rem_euclid(m) + 1;
        let k = (target - d) / m;
        for x in &mut v[ranges[b].clone()] {
            *x += k * m;
        }
    }
    WeightClass::new(HighestWeight(v), vbar.q).expect("regular cover is q-restricted")
}

/// Exponents `e_b` such that `Z_M(k) = prod k^×` acts on `V_{N̄(k)}` by
/// `z ↦ prod z_b^{e_b}`, each reduced mod `q-1`.
pub fn central_character_exponents(vbar: &LeviWeightClass) -> Vec<i64> {
    let m = vbar.q as i64 - 1;
    vbar.levi
        .blocks()
        .map(|r| vbar.nu.0[r].iter().sum::<i64>().rem_euclid(m))
        .collect()
}

/// `F(nu + (q-1) omega_i)` for `<nu, alpha_i^vee> = 0`.
pub fn weight_partner_for_change(v: &WeightClass, i: usize) -> Result<WeightClass, WeightError> {
    let value = v.nu.pairing(i)?;
    if value != 0 {
        return Err(WeightError::PairingNotZero { index: i, value });
    }
    let m = v.q as i64 - 1;
    let mut nu = v.nu.0.clone();
    for x in &mut nu[..i] {
        *x += m;
    }
    WeightClass::new(HighestWeight(nu), v.q)
}
