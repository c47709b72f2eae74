//! The extended affine 0-Hecke algebra of type `Ã_{n-1}`.
//!
//! Elements of the extended affine symmetric group are bijections
//! `f: Z → Z` with `f(x + n) = f(x) + n`, stored by their window
//! `[f(1), …, f(n)]` and composed as functions. The generators are
//!
//! ```text
//! s_i (1 <= i < n)   swaps i and i+1
//! s_0                swaps 0 and 1
//! Π                  x ↦ x - 1
//! ```
//!
//! so that `S_k Π = Π S_{k+1}`. `Π^n` is central; it is factored out of every
//! element and replaced by a scalar `ζ`, so a stored window always has
//! `Σ (f(i) - i) = -n r` with `0 <= r < n` (the rotation).
//!
//! In the 0-Hecke algebra `T_w T_s = T_{ws}` when the length goes up and
//! `-T_w` otherwise; `T_Π` multiplies freely.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::field::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Hecke0Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("rank must be at least {min}, got {n}")]
    RankTooSmall { n: usize, min: usize },
    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("window {0:?} is not an affine permutation")]
    NotAffinePermutation(Vec<i64>),
    #[error("length cap {cap} is below n^2 = {min}")]
    CapTooSmall { cap: usize, min: usize },
    #[error("elements live over different scalar fields or central parameters")]
    FieldMismatch,
}

/// An element of the extended affine symmetric group modulo `Π^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffineElem {
    window: Vec<i64>,
}

impl ExtAffineElem {
    /// Builds an element from a window, factoring out central `Π^n` powers.
    /// Returns the element and the exponent `a` with `f = Π^{na} · result`.
    pub fn from_window(window: Vec<i64>) -> Result<(Self, i64), Hecke0Error> {
        let n = window.len() as i64;
        if n == 0 {
            return Err(Hecke0Error::NotAffinePermutation(window));
        }
        let residues: BTreeSet<i64> = window.iter().map(|x| x.rem_euclid(n)).collect();
        let shift: i64 = window.iter().enumerate().map(|(i, x)| x - (i as i64 + 1)).sum();
        if residues.len() as i64 != n || shift.rem_euclid(n) != 0 {
            return Err(Hecke0Error::NotAffinePermutation(window));
        }
        Ok(Self::normalize(window))
    }

    fn normalize(mut window: Vec<i64>) -> (Self, i64) {
        let n = window.len() as i64;
        let shift: i64 = window.iter().enumerate().map(|(i, x)| x - (i as i64 + 1)).sum();
        let rotation = -shift / n;
        let a = rotation.div_euclid(n);
        for x in &mut window {
            *x += n * a;
        }
        (Self { window }, a)
    }

    pub fn identity(n: usize) -> Self {
        Self { window: (1..=n as i64).collect() }
    }

    /// `s_i` for `0 <= i < n`; `s_0` is the affine reflection.
    pub fn s(n: usize, i: usize) -> Result<Self, Hecke0Error> {
        if n < 2 {
            return Err(Hecke0Error::RankTooSmall { n, min: 2 });
        }
        if i >= n {
            return Err(Hecke0Error::IndexOutOfRange { index: i, n });
        }
        let mut window: Vec<i64> = (1..=n as i64).collect();
        if i == 0 {
            window[0] = 0;
            window[n - 1] = n as i64 + 1;
        } else {
            window.swap(i - 1, i);
        }
        Ok(Self { window })
    }

    /// `Π: x ↦ x - 1`.
    pub fn pi(n: usize) -> Self {
        Self { window: (0..n as i64).collect() }
    }

    /// The translation `x ↦ x - n·lambda_x`, reduced modulo `Π^n`.
    pub fn translation(lambda: &[i64]) -> (Self, i64) {
        let n = lambda.len() as i64;
        Self::normalize(lambda.iter().enumerate().map(|(j, l)| j as i64 + 1 - n * l).collect())
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// The power `r` of `Π` in `w = Π^r σ` with `σ` of rotation zero.
    pub fn rotation(&self) -> usize {
        let n = self.window.len() as i64;
        let shift: i64 = self.window.iter().enumerate().map(|(i, x)| x - (i as i64 + 1)).sum();
        (-shift / n) as usize
    }

    /// `f(x)` for any integer `x`.
    pub fn apply(&self, x: i64) -> i64 {
        let n = self.window.len() as i64;
        self.window[(x - 1).rem_euclid(n) as usize] + n * (x - 1).div_euclid(n)
    }

    /// `self ∘ other`, with the number of `Π^n` factors removed.
    pub fn compose(&self, other: &Self) -> Result<(Self, i64), Hecke0Error> {
        if self.rank() != other.rank() {
            return Err(Hecke0Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(Self::normalize(other.window.iter().map(|&x| self.apply(x)).collect()))
    }

    /// Inverse modulo `Π^n`, with the exponent `a` such that
    /// `self · result = Π^{na}`.
    pub fn inverse(&self) -> (Self, i64) {
        let n = self.window.len() as i64;
        let mut inv = vec![0i64; n as usize];
        for (i, &y) in self.window.iter().enumerate() {
            let r = (y - 1).rem_euclid(n);
            let k = (y - 1).div_euclid(n);
            inv[r as usize] = i as i64 + 1 - n * k;
        }
        let (e, a) = Self::normalize(inv);
        (e, -a)
    }

    /// Number of affine inversions.
    pub fn length(&self) -> usize {
        let n = self.window.len() as i64;
        let mut total = 0;
        for i in 0..self.window.len() {
            for j in i + 1..self.window.len() {
                total += (self.window[j] - self.window[i]).div_euclid(n).unsigned_abs() as usize;
            }
        }
        total
    }

    /// `ℓ(w s_i) < ℓ(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        let n = self.window.len();
        if i == 0 {
            self.window[n - 1] - n as i64 > self.window[0]
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    /// A right descent among the finite generators `s_1, …, s_{n-1}`.
    pub fn has_finite_right_descent(&self) -> bool {
        (1..self.window.len()).any(|i| self.has_right_descent(i))
    }

    /// `w s_i`, which never changes the rotation.
    fn times_s(&self, i: usize) -> Self {
        let n = self.window.len();
        let mut w = self.window.clone();
        if i == 0 {
            let first = w[0];
            w[0] = w[n - 1] - n as i64;
            w[n - 1] = first + n as i64;
        } else {
            w.swap(i - 1, i);
        }
        Self { window: w }
    }

    /// A reduced expression `w = Π^r s_{i_1} ⋯ s_{i_k}`.
    pub fn reduced_word(&self) -> (usize, Vec<usize>) {
        let n = self.window.len();
        let mut cur = self.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..n {
                if cur.has_right_descent(i) {
                    cur = cur.times_s(i);
                    word.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        word.reverse();
        (cur.rotation(), word)
    }
}

impl fmt::Display for ExtAffineElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Result of a signed Demazure product `T_w T_{w'} = sign · ζ^central · T_result`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemazureProduct {
    pub sign: i64,
    pub central: i64,
    pub result: ExtAffineElem,
}

/// `T_w · T_{w'}` in the 0-Hecke algebra, computed along a reduced word of `w'`.
pub fn demazure_product(w: &ExtAffineElem, w2: &ExtAffineElem) -> Result<DemazureProduct, Hecke0Error> {
    if w.rank() != w2.rank() {
        return Err(Hecke0Error::RankMismatch(w.rank(), w2.rank()));
    }
    let (r, word) = w2.reduced_word();
    let pi = ExtAffineElem::pi(w.rank());
    let mut cur = w.clone();
    let mut central = 0;
    for _ in 0..r {
        let (next, a) = cur.compose(&pi)?;
        cur = next;
        central += a;
    }
    let mut sign = 1;
    for i in word {
        if cur.has_right_descent(i) {
            sign = -sign;
        } else {
            cur = cur.times_s(i);
        }
    }
    Ok(DemazureProduct { sign, central, result: cur })
}

/// An element of the 0-Hecke algebra with `Π^n = ζ`.
#[derive(Clone, PartialEq, Eq)]
pub struct Hecke0Element {
    n: usize,
    zeta: Scalar,
    terms: BTreeMap<ExtAffineElem, Scalar>,
}

impl fmt::Debug for Hecke0Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Hecke0Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("[{c}]·T{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn add_term(terms: &mut BTreeMap<ExtAffineElem, Scalar>, key: ExtAffineElem, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let entry = terms.entry(key.clone()).or_insert_with(|| c.field().zero());
    *entry += c;
    if entry.is_zero() {
        terms.remove(&key);
    }
}

fn signed(field: &Field, zeta: &Scalar, sign: i64, central: i64) -> Scalar {
    &field.from_int(sign) * &zeta.pow(central)
}

impl Hecke0Element {
    pub fn zero(n: usize, zeta: &Scalar) -> Self {
        Self { n, zeta: zeta.clone(), terms: BTreeMap::new() }
    }

    pub fn basis(w: ExtAffineElem, zeta: &Scalar) -> Self {
        let mut x = Self::zero(w.rank(), zeta);
        x.terms.insert(w, zeta.field().one());
        x
    }

    pub fn one(n: usize, zeta: &Scalar) -> Self {
        Self::basis(ExtAffineElem::identity(n), zeta)
    }

    pub fn s(n: usize, i: usize, zeta: &Scalar) -> Result<Self, Hecke0Error> {
        Ok(Self::basis(ExtAffineElem::s(n, i)?, zeta))
    }

    pub fn pi(n: usize, zeta: &Scalar) -> Self {
        Self::basis(ExtAffineElem::pi(n), zeta)
    }

    /// The product of the generators in `word`, read left to right.
    pub fn word(n: usize, word: &[Letter], zeta: &Scalar) -> Result<Self, Hecke0Error> {
        let mut x = Self::one(n, zeta);
        for l in word {
            let g = match *l {
                Letter::S(i) => Self::s(n, i, zeta)?,
                Letter::Pi => Self::pi(n, zeta),
            };
            x = x.mul(&g)?;
        }
        Ok(x)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        self.zeta.field()
    }

    pub fn terms(&self) -> &BTreeMap<ExtAffineElem, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single `(coefficient, element)` pair if this is a multiple of a basis element.
    pub fn as_monomial(&self) -> Option<(&Scalar, &ExtAffineElem)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(w, c)| (c, w))
        } else {
            None
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), Hecke0Error> {
        if self.n != other.n {
            return Err(Hecke0Error::RankMismatch(self.n, other.n));
        }
        if self.zeta != other.zeta {
            return Err(Hecke0Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, Hecke0Error> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_term(&mut out.terms, w.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n, &self.zeta);
        for (w, v) in &self.terms {
            add_term(&mut out.terms, w.clone(), &(v * c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Hecke0Error> {
        self.add(&other.scale(&self.field().from_int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Hecke0Error> {
        self.compatible(other)?;
        let mut out = Self::zero(self.n, &self.zeta);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let d = demazure_product(w1, w2)?;
                let c = &(c1 * c2) * &signed(self.field(), &self.zeta, d.sign, d.central);
                add_term(&mut out.terms, d.result, &c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> Result<Self, Hecke0Error> {
        let mut out = Self::one(self.n, &self.zeta);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }
}

/// A generator in a word: `S_i` (with `S_0` affine) or `Π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    S(usize),
    Pi,
}

/// `S_i S_{i+1} ⋯ S_j`, empty when `j < i`.
pub fn s_run(i: usize, j: usize) -> Vec<Letter> {
    (i..=j).map(Letter::S).collect()
}

/// `x_i = S_i ⋯ S_{n-1} Π`, with `x_n = Π`.
pub fn x_word(n: usize, i: usize) -> Vec<Letter> {
    let mut w = if i < n { s_run(i, n - 1) } else { vec![] };
    w.push(Letter::Pi);
    w
}

/// Moves every `Π` to the right using `Π S_k = S_{k-1} Π` (indices mod `n`)
/// and returns the remaining letters together with the power of `Π`.
pub fn push_pi_right(n: usize, word: &[Letter]) -> (Vec<Letter>, usize) {
    let mut letters = Vec::new();
    let mut pis = 0usize;
    for l in word.iter().rev() {
        match *l {
            Letter::Pi => pis += 1,
            Letter::S(k) => letters.push(Letter::S(k)),
        }
        if let Letter::S(_) = l {
            continue;
        }
        // Π passes over everything to its right
        for m in letters.iter_mut() {
            if let Letter::S(k) = m {
                *k = (*k + n - 1) % n;
            }
        }
    }
    letters.reverse();
    (letters, pis)
}

/// Renders a word with `Π` pushed right and `Π^n` removed, e.g. `S_1S_2Π^2`.
pub fn render_word(n: usize, word: &[Letter]) -> String {
    let (letters, pis) = push_pi_right(n, word);
    let mut out: String = letters
        .iter()
        .map(|l| match l {
            Letter::S(k) => format!("S_{k}"),
            Letter::Pi => unreachable!(),
        })
        .collect();
    match pis % n {
        0 => {}
        1 => out.push('Π'),
        e => out.push_str(&format!("Π^{e}")),
    }
    out
}

/// A vector of the module generated by `v` subject to `S_i v = 0`
/// (`1 <= i < n`) and `Π^n v = ζ v`, in the basis `T_w v` with `w` free of
/// finite right descents.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleElem {
    n: usize,
    zeta: Scalar,
    terms: BTreeMap<ExtAffineElem, Scalar>,
}

impl fmt::Debug for ModuleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("[{c}]·T{w}v")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl ModuleElem {
    /// The generator `v`.
    pub fn v(n: usize, zeta: &Scalar) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ExtAffineElem::identity(n), zeta.field().one());
        Self { n, zeta: zeta.clone(), terms }
    }

    pub fn zero(n: usize, zeta: &Scalar) -> Self {
        Self { n, zeta: zeta.clone(), terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<ExtAffineElem, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `h · self`.
    pub fn act(&self, h: &Hecke0Element) -> Result<Self, Hecke0Error> {
        if h.n != self.n {
            return Err(Hecke0Error::RankMismatch(h.n, self.n));
        }
        if h.zeta != self.zeta {
            return Err(Hecke0Error::FieldMismatch);
        }
        let mut out = Self::zero(self.n, &self.zeta);
        for (u, c1) in &h.terms {
            for (w, c2) in &self.terms {
                let d = demazure_product(u, w)?;
                if d.result.has_finite_right_descent() {
                    continue;
                }
                let c = &(c1 * c2) * &signed(h.field(), &h.zeta, d.sign, d.central);
                add_term(&mut out.terms, d.result, &c);
            }
        }
        Ok(out)
    }

    pub fn act_word(&self, word: &[Letter]) -> Result<Self, Hecke0Error> {
        self.act(&Hecke0Element::word(self.n, word, &self.zeta)?)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_term(&mut out.terms, w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let minus = self.zeta.field().from_int(-1);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_term(&mut out.terms, w.clone(), &(c * &minus));
        }
        out
    }
}

/// Checks the quadratic, commutation, braid and rotation relations among
/// `S_0, …, S_{n-1}, Π`, together with `Π^n = ζ`.
pub fn verify_braid_and_rotation(n: usize, zeta: &Scalar) -> Result<bool, Hecke0Error> {
    if n < 2 {
        return Err(Hecke0Error::RankTooSmall { n, min: 2 });
    }
    let s = |i: usize| Hecke0Element::s(n, i, zeta);
    let pi = Hecke0Element::pi(n, zeta);
    let minus = zeta.field().from_int(-1);
    for i in 0..n {
        if s(i)?.mul(&s(i)?)? != s(i)?.scale(&minus) {
            return Ok(false);
        }
        for j in 0..n {
            let d = (i + n - j) % n;
            let dist = d.min(n - d);
            if dist >= 2 && s(i)?.mul(&s(j)?)? != s(j)?.mul(&s(i)?)? {
                return Ok(false);
            }
            if dist == 1 && n >= 3 {
                let lhs = s(i)?.mul(&s(j)?)?.mul(&s(i)?)?;
                let rhs = s(j)?.mul(&s(i)?)?.mul(&s(j)?)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        // S_k Π = Π S_{k+1}, read cyclically
        if s(i)?.mul(&pi)? != pi.mul(&s((i + 1) % n)?)? {
            return Ok(false);
        }
    }
    let pin = pi.pow(n)?;
    Ok(pin == Hecke0Element::one(n, zeta).scale(zeta))
}

fn s_run_element(n: usize, i: usize, j: usize, zeta: &Scalar) -> Result<Hecke0Element, Hecke0Error> {
    Hecke0Element::word(n, &s_run(i, j), zeta)
}

/// For all `1 <= i <= k <= l <= j <= n-1`, checks
/// `S_{i…j} S_{k…(l-1)} = S_{(k+1)…l} S_{i…j}`.
pub fn verify_shift_commutation(n: usize, zeta: &Scalar) -> Result<bool, Hecke0Error> {
    if n < 2 {
        return Err(Hecke0Error::RankTooSmall { n, min: 2 });
    }
    for i in 1..n {
        for j in i..n {
            let outer = s_run_element(n, i, j, zeta)?;
            for k in i..=j {
                for l in k..=j {
                    let lhs = outer.mul(&s_run_element(n, k, l - 1, zeta)?)?;
                    let rhs = s_run_element(n, k + 1, l, zeta)?.mul(&outer)?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Checks that `(T_{x_i})^i = T_{t_i}` where `x_i = S_i ⋯ S_{n-1} Π` and
/// `t_i` is the translation by `(1^i, 0^{n-i})`, of length `i(n-i)`.
pub fn verify_translation_power(n: usize, i: usize, zeta: &Scalar) -> Result<bool, Hecke0Error> {
    if n < 2 {
        return Err(Hecke0Error::RankTooSmall { n, min: 2 });
    }
    if i == 0 || i >= n {
        return Err(Hecke0Error::IndexOutOfRange { index: i, n });
    }
    let x = Hecke0Element::word(n, &x_word(n, i), zeta)?;
    let u = x.pow(i)?;
    let lambda: Vec<i64> = (0..n).map(|k| if k < i { 1 } else { 0 }).collect();
    let (t, a) = ExtAffineElem::translation(&lambda);
    if a != 0 {
        return Ok(false);
    }
    Ok(u == Hecke0Element::basis(t.clone(), zeta) && t.length() == i * (n - i))
}

/// Sparse row echelon form over `F_p`, with basis vectors indexed on the fly.
struct Echelon {
    p: u64,
    index: HashMap<ExtAffineElem, usize>,
    pivots: HashMap<usize, Vec<(usize, u64)>>,
}

impl Echelon {
    fn new(p: u64) -> Self {
        Self { p, index: HashMap::new(), pivots: HashMap::new() }
    }

    fn vector(&mut self, m: &ModuleElem) -> BTreeMap<usize, u64> {
        let mut out = BTreeMap::new();
        for (w, c) in &m.terms {
            let next = self.index.len();
            let k = *self.index.entry(w.clone()).or_insert(next);
            // relations have prime-field coefficients
            out.insert(k, c.coeffs().first().copied().unwrap_or(0));
        }
        out
    }

    fn reduce(&self, mut v: BTreeMap<usize, u64>) -> BTreeMap<usize, u64> {
        while let Some((&k, &c)) = v.last_key_value() {
            let Some(row) = self.pivots.get(&k) else { break };
            for &(j, r) in row {
                let e = v.entry(j).or_insert(0);
                *e = (*e + self.p - (c * r) % self.p) % self.p;
                if *e == 0 {
                    v.remove(&j);
                }
            }
        }
        v
    }

    fn insert(&mut self, m: &ModuleElem) -> bool {
        let v = self.vector(m);
        let v = self.reduce(v);
        let Some((&lead, &c)) = v.last_key_value() else { return false };
        let inv = modpow(c, self.p - 2, self.p);
        let row = v.into_iter().map(|(j, x)| (j, x * inv % self.p)).collect();
        self.pivots.insert(lead, row);
        true
    }

    fn contains(&mut self, m: &ModuleElem) -> bool {
        let v = self.vector(m);
        self.reduce(v).is_empty()
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Elements of the extended affine symmetric group modulo `Π^n`, by length.
fn elements_by_length(n: usize, max_len: usize) -> Vec<Vec<ExtAffineElem>> {
    let pi = ExtAffineElem::pi(n);
    let mut level: Vec<ExtAffineElem> = Vec::new();
    let mut cur = ExtAffineElem::identity(n);
    for _ in 0..n {
        level.push(cur.clone());
        cur = cur.compose(&pi).unwrap().0;
    }
    let mut out = vec![level];
    for len in 1..=max_len {
        let mut seen = BTreeSet::new();
        for w in &out[len - 1] {
            for i in 0..n {
                if !w.has_right_descent(i) {
                    seen.insert(w.times_s(i));
                }
            }
        }
        out.push(seen.into_iter().collect());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationStatus {
    Proved,
    /// The target was not reached within the cap; this is not a refutation.
    Inconclusive { step: String, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    /// Human-readable identity, e.g. `(S_1Π)^2 v = S_1Πv`.
    pub identity: String,
    /// What follows from it, e.g. `S_1Πv = 0`.
    pub conclusion: String,
    pub trace: Vec<String>,
    /// Smallest `L` such that the target lies in the span of `T_u·r`, `ℓ(u) <= L`.
    pub sufficient_length: Option<usize>,
    /// Rank of that span.
    pub span_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationReport {
    pub n: usize,
    pub cap: usize,
    pub characteristic: u64,
    pub steps: Vec<DerivationStep>,
    pub status: DerivationStatus,
    /// Largest length actually needed across all steps.
    pub minimal_sufficient_cap: Option<usize>,
    /// `v` itself is not in the span at the cap, so the relations do not
    /// collapse the module.
    pub nondegenerate: bool,
}

struct SpanSearch {
    echelon: Echelon,
    levels: Vec<Vec<ExtAffineElem>>,
    relations: Vec<ModuleElem>,
    zeta: Scalar,
    done: usize,
}

impl SpanSearch {
    fn new(n: usize, cap: usize, relations: Vec<ModuleElem>, zeta: &Scalar, levels: &[Vec<ExtAffineElem>]) -> Self {
        let _ = n;
        Self {
            echelon: Echelon::new(zeta.field().characteristic()),
            levels: levels[..=cap.min(levels.len() - 1)].to_vec(),
            relations,
            zeta: zeta.clone(),
            done: 0,
        }
    }

    fn add_level(&mut self, len: usize) -> Result<(), Hecke0Error> {
        for u in &self.levels[len] {
            let h = Hecke0Element::basis(u.clone(), &self.zeta);
            for r in &self.relations {
                let t = r.act(&h)?;
                if !t.is_zero() {
                    self.echelon.insert(&t);
                }
            }
        }
        self.done = len + 1;
        Ok(())
    }

    /// Grows the span level by level until `target` is reached.
    fn reach(&mut self, target: &ModuleElem) -> Result<Option<usize>, Hecke0Error> {
        if self.done > 0 && self.echelon.contains(target) {
            return Ok(Some(self.done - 1));
        }
        while self.done < self.levels.len() {
            let len = self.done;
            self.add_level(len)?;
            if self.echelon.contains(target) {
                return Ok(Some(len));
            }
        }
        Ok(None)
    }
}

/// Derives `x_i v = 0` for `i = 1, …, n-1` and then `v = Πv` in the module
/// generated by `v` with `S_i v = 0`, `Π^n v = v` and
/// `v = Σ_{i=1}^{n} x_i v`, assuming each `U_i = x_i^i` acts nilpotently.
///
/// Step `i` shows `x_i² v = x_i v` by linear algebra over the left translates
/// `T_u · r`, `ℓ(u) <= cap`, of the relations known so far.
pub fn derive_pi_invariance(n: usize, cap: usize, field: &Field) -> Result<DerivationReport, Hecke0Error> {
    if n < 2 {
        return Err(Hecke0Error::RankTooSmall { n, min: 2 });
    }
    if cap < n * n {
        return Err(Hecke0Error::CapTooSmall { cap, min: n * n });
    }
    let zeta = field.one();
    let v = ModuleElem::v(n, &zeta);
    let xv = |i: usize| v.act_word(&x_word(n, i));
    let mut r0 = v.clone();
    for i in 1..=n {
        r0 = r0.sub(&xv(i)?);
    }
    let mut relations = vec![r0];
    let mut steps = Vec::new();
    let mut status = DerivationStatus::Proved;
    let mut needed: usize = 0;
    let mut last_search = None;
    let levels = elements_by_length(n, cap);

    for i in 1..n {
        let x = Hecke0Element::word(n, &x_word(n, i), &zeta)?;
        let xv_i = v.act(&x)?;
        let target = xv_i.act(&x)?.sub(&xv_i);
        let mut search = SpanSearch::new(n, cap, relations.clone(), &zeta, &levels);
        let found = search.reach(&target)?;
        let name = render_word(n, &x_word(n, i));
        let (mut trace, symbolic) = idempotency_trace(n, i)?;
        if let (false, Some(len), Some(last)) = (symbolic, found, trace.last_mut()) {
            last.push_str(&format!("  [span of relation translates, length <= {len}]"));
        }
        let mut step = DerivationStep {
            identity: format!("({name})^2 v = {name}v"),
            conclusion: format!("{name}v = 0"),
            trace,
            sufficient_length: found,
            span_rank: search.echelon.rank(),
        };
        match found {
            Some(len) => needed = needed.max(len),
            None => {
                step.conclusion = String::from("inconclusive");
                steps.push(step);
                status = DerivationStatus::Inconclusive { step: format!("({name})^2 v = {name}v"), cap };
                break;
            }
        }
        steps.push(step);
        relations.push(xv_i);
    }

    let mut nondegenerate = false;
    if status == DerivationStatus::Proved {
        let target = v.sub(&v.act_word(&[Letter::Pi])?);
        let mut search = SpanSearch::new(n, cap, relations.clone(), &zeta, &levels);
        let found = search.reach(&target)?;
        let terms: Vec<String> = (1..=n).map(|i| format!("{}v", render_word(n, &x_word(n, i)))).collect();
        let step = DerivationStep {
            identity: "v = Πv".into(),
            conclusion: "v = Πv".into(),
            trace: vec![format!("v = {}", terms.join(" + ")), "= Πv".into()],
            sufficient_length: found,
            span_rank: search.echelon.rank(),
        };
        match found {
            Some(len) => needed = needed.max(len),
            None => status = DerivationStatus::Inconclusive { step: "v = Πv".into(), cap },
        }
        steps.push(step);
        last_search = Some(search);
    }
    if let Some(mut search) = last_search {
        while search.done < search.levels.len() && search.done <= needed + 1 {
            let len = search.done;
            search.add_level(len)?;
        }
        nondegenerate = !search.echelon.contains(&v);
    }

    let minimal_sufficient_cap = (status == DerivationStatus::Proved).then_some(needed);
    Ok(DerivationReport {
        n,
        cap,
        characteristic: field.characteristic(),
        steps,
        status,
        minimal_sufficient_cap,
        nondegenerate,
    })
}

/// The displayed computation of `x_i² v`, substituting
/// `x_i v = v - Σ_{j>i} x_j v` and dropping terms `T_w v` that vanish
/// because `w` ends in a finite `S_k`.
///
/// The flag is false when the last line needs the linear-algebra certificate.
fn idempotency_trace(n: usize, i: usize) -> Result<(Vec<String>, bool), Hecke0Error> {
    let x = x_word(n, i);
    let name = render_word(n, &x);
    let later: Vec<Vec<Letter>> = (i + 1..=n).map(|j| x_word(n, j)).collect();
    let inner: Vec<String> = later.iter().map(|w| format!(" − {}v", render_word(n, w))).collect();
    let mut trace = vec![format!("({name})^2 v = {name}(v{})", inner.join(""))];

    // (sign, word) pairs of x_i·(v − Σ x_j v)
    let mut terms: Vec<(i64, Vec<Letter>)> = vec![(1, x.clone())];
    for w in &later {
        terms.push((-1, [x.clone(), w.clone()].concat()));
    }
    let render = |terms: &[(i64, Vec<Letter>)]| -> String {
        let mut s = String::new();
        for (k, (sign, w)) in terms.iter().enumerate() {
            let body = format!("{}v", render_word(n, w));
            match (k, *sign) {
                (0, 1) => s.push_str(&body),
                (0, _) => s.push_str(&format!("−{body}")),
                (_, 1) => s.push_str(&format!(" + {body}")),
                _ => s.push_str(&format!(" − {body}")),
            }
        }
        s
    };
    trace.push(format!("= {}", render(&terms)));

    // signs are integers; read them off in characteristic 3 where ±1 differ
    let f3 = Field::prime(3).expect("3 is prime");
    let v = ModuleElem::v(n, &f3.one());
    let mut survivors = Vec::new();
    for (sign, w) in &terms {
        let m = v.act_word(w)?;
        if let Some((c, _)) = m.terms.iter().next().map(|(w, c)| (c.clone(), w.clone())) {
            // a single basis vector, possibly with a Demazure sign
            let s = if c == f3.from_int(-1) { -sign } else { *sign };
            survivors.push((s, w.clone()));
        }
    }
    if survivors.len() < terms.len() {
        trace.push(format!("= {}", render(&survivors)));
    }
    let symbolic = survivors == vec![(1, x.clone())];
    if !symbolic {
        trace.push(format!("= {name}v"));
    }
    Ok((trace, symbolic))
}
