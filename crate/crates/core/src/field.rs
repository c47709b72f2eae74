//! Finite fields `F_{p^m}` presented as `F_p[x]/(f)` for a monic irreducible `f`.
//!
//! Scalars carry a handle to their field so that arithmetic operators can be
//! used directly. Mixing scalars from different fields is a logic error and
//! panics.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus must have degree at least 1")]
    DegreeZero,
    #[error("modulus polynomial {0:?} is not irreducible over F_{1}")]
    Reducible(Vec<u64>, u64),
    #[error("cannot parse field element {0:?}")]
    Parse(String),
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
}

struct FieldInner {
    p: u64,
    /// Monic modulus, low degree first, length `m + 1`.
    modulus: Vec<u64>,
}

/// A finite field `F_p[x]/(modulus)`.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}{:?}", self.0.p, self.degree(), self.0.modulus)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

// Dense polynomials over F_p, low degree first, no trailing zeros.
mod poly {
    use super::{inv_mod, mulmod};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![0; a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            r[i] = *x;
        }
        for (i, y) in b.iter().enumerate() {
            r[i] = (r[i] + p - y) % p;
        }
        trim(&mut r);
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + mulmod(*x, *y, p)) % p;
            }
        }
        trim(&mut r);
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let d = r.len() - 1;
            let c = mulmod(r[d], lead_inv, p);
            if c != 0 {
                for (i, y) in m.iter().enumerate() {
                    let k = d - dm + i;
                    r[k] = (r[k] + p - mulmod(c, *y, p)) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        r
    }
}

/// Rabin-style irreducibility test for a polynomial of degree `m` over `F_p`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        xp = poly::powmod(&xp, p as u128, f, p);
        let g = poly::gcd(f, &poly::sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, vec![0, 1])
    }

    /// `F_p[x]/(modulus)` with `modulus` given low degree first. The modulus
    /// is made monic; it must be irreducible.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let mut f: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        poly::trim(&mut f);
        if f.len() < 2 {
            return Err(FieldError::DegreeZero);
        }
        let lead_inv = inv_mod(*f.last().unwrap(), p);
        for c in f.iter_mut() {
            *c = mulmod(*c, lead_inv, p);
        }
        if !is_irreducible(&f, p) {
            return Err(FieldError::Reducible(modulus, p));
        }
        Ok(Field(Arc::new(FieldInner { p, modulus: f })))
    }

    /// `F_{p^m}` using the lexicographically first monic irreducible modulus.
    pub fn with_degree(p: u64, m: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::DegreeZero);
        }
        if m == 1 {
            return Self::prime(p);
        }
        let total = (p as u128).pow(m as u32);
        for idx in 0..total {
            let mut f = Vec::with_capacity(m + 1);
            let mut r = idx;
            for _ in 0..m {
                f.push((r % p as u128) as u64);
                r /= p as u128;
            }
            f.push(1);
            if f[0] != 0 && is_irreducible(&f, p) {
                return Ok(Field(Arc::new(FieldInner { p, modulus: f })));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    /// Monic modulus coefficients, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Number of elements, `p^m`.
    pub fn order(&self) -> u128 {
        (self.0.p as u128).pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Scalar {
        Scalar { field: self.clone(), c: vec![0; self.degree()] }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        let p = self.0.p as i128;
        let v = ((n as i128 % p + p) % p) as u64;
        let mut c = vec![0; self.degree()];
        c[0] = v;
        Scalar { field: self.clone(), c }
    }

    /// The class of `x` in `F_p[x]/(f)`.
    pub fn generator(&self) -> Scalar {
        let mut c = vec![0; self.degree()];
        if self.degree() == 1 {
            c[0] = (self.0.p - self.0.modulus[0]) % self.0.p;
        } else {
            c[1] = 1;
        }
        Scalar { field: self.clone(), c }
    }

    /// Element with the given coefficients on the basis `1, x, …, x^{m-1}`.
    pub fn element(&self, coeffs: &[i64]) -> Result<Scalar, FieldError> {
        if coeffs.len() > self.degree() {
            return Err(FieldError::WrongLength { expected: self.degree(), got: coeffs.len() });
        }
        let p = self.0.p as i128;
        let mut c = vec![0; self.degree()];
        for (i, x) in coeffs.iter().enumerate() {
            c[i] = ((*x as i128 % p + p) % p) as u64;
        }
        Ok(Scalar { field: self.clone(), c })
    }

    /// Parses `"a"` (an integer) or `"a0,a1,…"` (coefficient vector).
    pub fn parse(&self, s: &str) -> Result<Scalar, FieldError> {
        let coeffs: Result<Vec<i64>, _> =
            s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        let coeffs = coeffs.map_err(|_| FieldError::Parse(s.to_string()))?;
        if coeffs.is_empty() {
            return Err(FieldError::Parse(s.to_string()));
        }
        self.element(&coeffs)
    }

    /// All field elements in coefficient-lexicographic order. Intended for
    /// small fields only.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let p = self.0.p;
        let m = self.degree();
        (0..self.order()).map(move |mut idx| {
            let mut c = vec![0u64; m];
            for slot in c.iter_mut() {
                *slot = (idx % p as u128) as u64;
                idx /= p as u128;
            }
            Scalar { field: self.clone(), c }
        })
    }

    /// Nonzero elements.
    pub fn units(&self) -> impl Iterator<Item = Scalar> + '_ {
        self.elements().filter(|x| !x.is_zero())
    }
}

/// An element of a finite field.
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    c: Vec<u64>,
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| *x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|x| *x == 0)
    }

    fn check(&self, other: &Scalar) {
        assert!(self.field == other.field, "scalars from different fields");
    }

    fn mul_raw(&self, other: &Scalar) -> Vec<u64> {
        let p = self.field.0.p;
        let m = self.c.len();
        if m == 1 {
            return vec![mulmod(self.c[0], other.c[0], p)];
        }
        let prod = poly::mul(&self.c, &other.c, p);
        let mut r = poly::rem(&prod, &self.field.0.modulus, p);
        r.resize(m, 0);
        r
    }

    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut r = self.field.one();
        let mut b = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.0.p;
        if self.c.len() == 1 {
            return Some(Scalar { field: self.field.clone(), c: vec![inv_mod(self.c[0], p)] });
        }
        let e = self.field.order() - 2;
        let mut r = poly::powmod(&self.c, e, &self.field.0.modulus, p);
        r.resize(self.c.len(), 0);
        Some(Scalar { field: self.field.clone(), c: r })
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.field == other.field
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.c.cmp(&other.c)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.c.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let p = self.field.0.p;
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| (a + b) % p).collect();
        Scalar { field: self.field.clone(), c }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        let p = self.field.0.p;
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| (a + p - b) % p).collect();
        Scalar { field: self.field.clone(), c }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        Scalar { field: self.field.clone(), c: self.mul_raw(rhs) }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        let p = self.field.0.p;
        let c = self.c.iter().map(|a| (p - a) % p).collect();
        Scalar { field: self.field.clone(), c }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}
impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}
impl SubAssign for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}
impl MulAssign for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self *= &rhs;
    }
}
