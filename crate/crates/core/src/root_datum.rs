//! Type-A root datum of `GL_n`.
//!
//! Conventions are fixed once and for all: `alpha_i = e_i - e_{i+1}` with the
//! coroot given by the same vector, the pairing is the dot product, an
//! antidominant coweight has weakly increasing entries and a dominant weight
//! weakly decreasing entries. Simple roots are indexed `1..=n-1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootDatumError {
    #[error("simple root index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("coweight {0} is not antidominant")]
    NotAntidominant(Coweight),
    #[error("{0:?} is not a composition of a positive integer")]
    InvalidComposition(Vec<usize>),
    #[error("parabolic {inner} is not contained in the Levi {outer}")]
    NotInsideLevi { inner: StandardParabolic, outer: StandardParabolic },
    #[error("cannot parse integer vector {0:?}")]
    Parse(String),
}

fn fmt_vec(v: &[i64], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    write!(f, "{}", parts.join(","))
}

fn parse_vec(s: &str) -> Result<Vec<i64>, RootDatumError> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    s.split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| RootDatumError::Parse(s.to_string()))
        .and_then(|v| if v.is_empty() { Err(RootDatumError::Parse(s.to_string())) } else { Ok(v) })
}

macro_rules! int_vector {
    ($name:ident) => {
        impl $name {
            pub fn new(entries: Vec<i64>) -> Self {
                Self(entries)
            }

            pub fn zero(n: usize) -> Self {
                Self(vec![0; n])
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn entries(&self) -> &[i64] {
                &self.0
            }

            pub fn sum(&self) -> i64 {
                self.0.iter().sum()
            }

            fn check_index(&self, i: usize) -> Result<(), RootDatumError> {
                let n = self.rank();
                if i == 0 || i >= n {
                    return Err(RootDatumError::IndexOutOfRange { index: i, n });
                }
                Ok(())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt_vec(&self.0, f)
            }
        }

        impl FromStr for $name {
            type Err = RootDatumError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                parse_vec(s).map(Self)
            }
        }

        impl From<Vec<i64>> for $name {
            fn from(v: Vec<i64>) -> Self {
                Self(v)
            }
        }

        impl std::ops::Add for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                assert_eq!(self.rank(), rhs.rank());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl std::ops::Sub for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                assert_eq!(self.rank(), rhs.rank());
                $name(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }
    };
}

/// An element of `X_*(T) = Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coweight(pub Vec<i64>);
int_vector!(Coweight);

/// An element of `X^*(T) = Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HighestWeight(pub Vec<i64>);
int_vector!(HighestWeight);

impl Coweight {
    pub fn is_antidominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// The simple coroot `alpha_i^vee = e_i - e_{i+1}` in rank `n`.
    pub fn simple_coroot(n: usize, i: usize) -> Result<Self, RootDatumError> {
        if i == 0 || i >= n {
            return Err(RootDatumError::IndexOutOfRange { index: i, n });
        }
        let mut v = vec![0; n];
        v[i - 1] = 1;
        v[i] = -1;
        Ok(Coweight(v))
    }

    pub fn scaled(&self, k: i64) -> Self {
        Coweight(self.0.iter().map(|x| k * x).collect())
    }

    /// `true` if the entries are constant on each block of `levi`.
    pub fn is_central_in(&self, levi: &StandardParabolic) -> bool {
        levi.blocks().all(|r| self.0[r.clone()].windows(2).all(|w| w[0] == w[1]))
    }
}

impl HighestWeight {
    pub fn is_dominant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// `<nu, alpha_i^vee>` for the simple coroot `i`.
    pub fn pairing(&self, i: usize) -> Result<i64, RootDatumError> {
        self.check_index(i)?;
        Ok(self.0[i - 1] - self.0[i])
    }
}

/// `<lambda, alpha_i>` for a coweight and a simple root.
pub fn pairing(lambda: &Coweight, i: usize) -> Result<i64, RootDatumError> {
    lambda.check_index(i)?;
    Ok(lambda.0[i - 1] - lambda.0[i])
}

/// A standard parabolic subgroup of `GL_n`, stored as the block sizes of its
/// Levi factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardParabolic {
    composition: Vec<usize>,
}

impl StandardParabolic {
    pub fn new(composition: Vec<usize>) -> Result<Self, RootDatumError> {
        if composition.is_empty() || composition.contains(&0) {
            return Err(RootDatumError::InvalidComposition(composition));
        }
        Ok(Self { composition })
    }

    /// The whole group `GL_n`.
    pub fn full(n: usize) -> Self {
        Self { composition: vec![n] }
    }

    /// The upper-triangular Borel (Levi = diagonal torus).
    pub fn borel(n: usize) -> Self {
        Self { composition: vec![1; n] }
    }

    /// Builds the parabolic whose Levi has simple roots `roots` (1-based).
    pub fn from_simple_roots(n: usize, roots: &BTreeSet<usize>) -> Result<Self, RootDatumError> {
        if let Some(&bad) = roots.iter().find(|&&i| i == 0 || i >= n) {
            return Err(RootDatumError::IndexOutOfRange { index: bad, n });
        }
        let mut composition = Vec::new();
        let mut size = 1;
        for i in 1..n {
            if roots.contains(&i) {
                size += 1;
            } else {
                composition.push(size);
                size = 1;
            }
        }
        composition.push(size);
        Ok(Self { composition })
    }

    /// All `2^{n-1}` standard parabolics of `GL_n`, ordered by the bitmask of
    /// their simple roots.
    pub fn all(n: usize) -> Vec<Self> {
        let roots: Vec<usize> = (1..n).collect();
        (0u64..(1 << roots.len()))
            .map(|mask| {
                let set = roots
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, i)| *i)
                    .collect();
                Self::from_simple_roots(n, &set).unwrap()
            })
            .collect()
    }

    pub fn composition(&self) -> &[usize] {
        &self.composition
    }

    pub fn rank(&self) -> usize {
        self.composition.iter().sum()
    }

    pub fn num_blocks(&self) -> usize {
        self.composition.len()
    }

    /// Index ranges (0-based coordinates) of the Levi blocks.
    pub fn blocks(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.composition.iter().scan(0, |start, size| {
            let r = *start..*start + size;
            *start += size;
            Some(r)
        })
    }

    /// Block index containing the 1-based coordinate `pos`.
    pub fn block_of(&self, pos: usize) -> usize {
        let mut end = 0;
        for (b, size) in self.composition.iter().enumerate() {
            end += size;
            if pos <= end {
                return b;
            }
        }
        panic!("coordinate {pos} out of range")
    }

    /// `Delta_M`: simple roots inside the Levi blocks.
    pub fn simple_roots(&self) -> BTreeSet<usize> {
        (1..self.rank()).filter(|i| !self.is_boundary(*i)).collect()
    }

    /// `Delta - Delta_M`: the roots separating consecutive blocks.
    pub fn boundary_roots(&self) -> BTreeSet<usize> {
        (1..self.rank()).filter(|i| self.is_boundary(*i)).collect()
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        let mut end = 0;
        for size in &self.composition {
            end += size;
            if end == i {
                return true;
            }
        }
        false
    }

    /// `Delta_self ⊆ Delta_other`, i.e. the Levi of `self` sits inside that of `other`.
    pub fn is_contained_in(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.simple_roots().is_subset(&other.simple_roots())
    }

    pub fn is_full(&self) -> bool {
        self.composition.len() == 1
    }
}

impl fmt::Display for StandardParabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.composition.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An element of the finite Weyl group `S_n`, stored as 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylPerm {
    images: Vec<usize>,
}

impl WeylPerm {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Self { images })
    }

    /// The simple reflection `s_i` (1-based) in `S_n`.
    pub fn simple_reflection(n: usize, i: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, i);
        Self { images }
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<WeylPerm>) {
            let n = used.len();
            if prefix.len() == n {
                out.push(WeylPerm { images: prefix.clone() });
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    prefix.push(x);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let n = self.images.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.images[a] > self.images[b])
            .count()
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (a, &b) in self.images.iter().enumerate() {
            inv[b] = a;
        }
        Self { images: inv }
    }

    /// Coordinate permutation: `(w v)_{w(a)} = v_a`.
    pub fn act(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (a, &x) in v.iter().enumerate() {
            out[self.images[a]] = x;
        }
        out
    }

    pub fn act_coweight(&self, c: &Coweight) -> Coweight {
        Coweight(self.act(&c.0))
    }
}

/// `lambda - mu` as a non-negative combination of the simple coroots of `levi`.
///
/// Returns the partial sums `p_i = sum_{j <= i} (lambda_j - mu_j)`, which are
/// the coefficients of `alpha_i^vee`, when they exist.
pub fn coroot_coefficients(
    mu: &Coweight,
    lambda: &Coweight,
    levi: &StandardParabolic,
) -> Result<Option<Vec<i64>>, RootDatumError> {
    let n = mu.rank();
    if lambda.rank() != n {
        return Err(RootDatumError::LengthMismatch(n, lambda.rank()));
    }
    if levi.rank() != n {
        return Err(RootDatumError::LengthMismatch(n, levi.rank()));
    }
    let mut coeffs = Vec::with_capacity(n.saturating_sub(1));
    let mut partial = 0;
    for j in 0..n {
        partial += lambda.0[j] - mu.0[j];
        if j + 1 == n {
            if partial != 0 {
                return Ok(None);
            }
        } else {
            if partial < 0 || (partial != 0 && levi.is_boundary(j + 1)) {
                return Ok(None);
            }
            coeffs.push(partial);
        }
    }
    Ok(Some(coeffs))
}

/// `mu <=_M lambda`: `lambda - mu` is a non-negative integral combination of
/// the simple coroots of `M`.
pub fn leq_m(mu: &Coweight, lambda: &Coweight, levi: &StandardParabolic) -> Result<bool, RootDatumError> {
    Ok(coroot_coefficients(mu, lambda, levi)?.is_some())
}

/// All antidominant `lambda` with `mu <=_M lambda`, in increasing lexicographic order.
pub fn interval_above(mu: &Coweight, levi: &StandardParabolic) -> Result<Vec<Coweight>, RootDatumError> {
    let n = mu.rank();
    if levi.rank() != n {
        return Err(RootDatumError::LengthMismatch(n, levi.rank()));
    }
    if !mu.is_antidominant() {
        return Err(RootDatumError::NotAntidominant(mu.clone()));
    }
    // Every such lambda has all entries in [mu_1, mu_n].
    let lo = mu.0[0];
    let hi = mu.0[n - 1];
    let total = mu.sum();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);

    fn dfs(
        j: usize,
        partial: i64,
        current: &mut Vec<i64>,
        ctx: (&Coweight, &StandardParabolic, i64, i64, i64),
        out: &mut Vec<Coweight>,
    ) {
        let (mu, levi, lo, hi, total) = ctx;
        let n = mu.rank();
        if j + 1 == n {
            let last = total - current.iter().sum::<i64>();
            if last <= hi && current.last().is_none_or(|&prev| prev <= last) {
                let mut v = current.clone();
                v.push(last);
                out.push(Coweight(v));
            }
            return;
        }
        let start = current.last().copied().unwrap_or(lo);
        for x in start..=hi {
            let p = partial + x - mu.0[j];
            if p < 0 {
                continue;
            }
            if p != 0 && levi.is_boundary(j + 1) {
                // increasing x only makes p larger
                if p > 0 {
                    break;
                }
            }
            current.push(x);
            dfs(j + 1, p, current, ctx, out);
            current.pop();
        }
    }

    dfs(0, 0, &mut current, (mu, levi, lo, hi, total), &mut out);
    out.sort();
    Ok(out)
}

/// The Levi `M` with `W_M = Stab_W(nu)`.
pub fn stab_levi(nu: &HighestWeight) -> StandardParabolic {
    let n = nu.rank();
    let roots = (1..n).filter(|&i| nu.0[i - 1] == nu.0[i]).collect();
    StandardParabolic::from_simple_roots(n, &roots).expect("indices in range")
}

/// `lambda = (-1, …, -1, 0, …, 0)` with `i` entries `-1`; `-lambda` is the
/// minuscule fundamental coweight dual to `alpha_i`.
pub fn fundamental_antidominant_coweight(n: usize, i: usize) -> Result<Coweight, RootDatumError> {
    if i == 0 || i >= n {
        return Err(RootDatumError::IndexOutOfRange { index: i, n });
    }
    Ok(Coweight((0..n).map(|k| if k < i { -1 } else { 0 }).collect()))
}

/// All standard parabolics `P'` with `Delta_{P'} ∩ Delta_M = Delta_Q`.
///
/// `q` is a standard parabolic of `GL_n` whose simple roots lie in `Delta_M`.
/// Output is ordered by the bitmask of the added boundary roots.
pub fn parabolics_with_levi_trace(
    levi: &StandardParabolic,
    q: &StandardParabolic,
) -> Result<Vec<StandardParabolic>, RootDatumError> {
    if levi.rank() != q.rank() {
        return Err(RootDatumError::LengthMismatch(levi.rank(), q.rank()));
    }
    if !q.is_contained_in(levi) {
        return Err(RootDatumError::NotInsideLevi { inner: q.clone(), outer: levi.clone() });
    }
    let n = levi.rank();
    let base = q.simple_roots();
    let free: Vec<usize> = levi.boundary_roots().into_iter().collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1 << free.len()) {
        let mut roots = base.clone();
        for (b, i) in free.iter().enumerate() {
            if mask >> b & 1 == 1 {
                roots.insert(*i);
            }
        }
        out.push(StandardParabolic::from_simple_roots(n, &roots)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cw(v: &[i64]) -> Coweight {
        Coweight(v.to_vec())
    }

    fn comp(c: &[usize]) -> StandardParabolic {
        StandardParabolic::new(c.to_vec()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&cw(&[-1, 0, 0]), 1).unwrap(), -1);
        assert_eq!(pairing(&cw(&[0, 0]), 1).unwrap(), 0);
        assert_eq!(pairing(&cw(&[-1, -1, 0]), 2).unwrap(), -1);
        assert!(pairing(&cw(&[0, 0]), 2).is_err());
        assert!(pairing(&cw(&[0, 0]), 0).is_err());
    }

    #[test]
    fn leq_m_examples() {
        let g2 = StandardParabolic::full(2);
        assert!(leq_m(&cw(&[-1, 1]), &cw(&[0, 0]), &g2).unwrap());
        for m in StandardParabolic::all(2) {
            assert!(leq_m(&cw(&[-1, 1]), &cw(&[-1, 1]), &m).unwrap());
        }
        assert!(!leq_m(&cw(&[-1, 0, 1]), &cw(&[0, 0, 0]), &comp(&[2, 1])).unwrap());
        assert!(leq_m(&cw(&[-1, 0, 1]), &cw(&[0, 0, 0]), &comp(&[3])).unwrap());
        assert!(leq_m(&cw(&[0]), &cw(&[0, 0]), &g2).is_err());
    }

    #[test]
    fn interval_above_examples() {
        assert_eq!(
            interval_above(&cw(&[-1, 1]), &StandardParabolic::full(2)).unwrap(),
            vec![cw(&[-1, 1]), cw(&[0, 0])]
        );
        assert_eq!(
            interval_above(&cw(&[-1, 0, 1]), &StandardParabolic::full(3)).unwrap(),
            vec![cw(&[-1, 0, 1]), cw(&[0, 0, 0])]
        );
        assert_eq!(interval_above(&cw(&[0, 0]), &StandardParabolic::borel(2)).unwrap(), vec![cw(&[0, 0])]);
        assert!(matches!(
            interval_above(&cw(&[1, 0]), &StandardParabolic::full(2)),
            Err(RootDatumError::NotAntidominant(_))
        ));
    }

    #[test]
    fn interval_matches_brute_force() {
        // scan a box around mu and filter by the definition
        let m = StandardParabolic::full(3);
        let mu = cw(&[-3, 0, 2]);
        let mut brute = Vec::new();
        for a in -3..=2 {
            for b in -3..=2 {
                let c = mu.sum() - a - b;
                let l = cw(&[a, b, c]);
                if l.is_antidominant() && leq_m(&mu, &l, &m).unwrap() {
                    brute.push(l);
                }
            }
        }
        brute.sort();
        assert_eq!(interval_above(&mu, &m).unwrap(), brute);
    }

    #[test]
    fn stab_levi_examples() {
        assert_eq!(stab_levi(&HighestWeight(vec![0, 0, 0])), comp(&[3]));
        assert_eq!(stab_levi(&HighestWeight(vec![2, 0])), comp(&[1, 1]));
        assert_eq!(stab_levi(&HighestWeight(vec![1, 1, 0])), comp(&[2, 1]));
    }

    #[test]
    fn fundamental_coweights() {
        assert_eq!(fundamental_antidominant_coweight(2, 1).unwrap(), cw(&[-1, 0]));
        assert_eq!(fundamental_antidominant_coweight(3, 2).unwrap(), cw(&[-1, -1, 0]));
        assert_eq!(fundamental_antidominant_coweight(4, 1).unwrap(), cw(&[-1, 0, 0, 0]));
        assert!(fundamental_antidominant_coweight(3, 3).is_err());
        for n in 2..6 {
            for i in 1..n {
                let l = fundamental_antidominant_coweight(n, i).unwrap();
                assert!(l.is_antidominant());
                for j in 1..n {
                    assert_eq!(pairing(&l, j).unwrap(), if i == j { -1 } else { 0 });
                }
                // minuscule: <-lambda, e_a - e_b> in {0, 1} for a < b
                for a in 0..n {
                    for b in a + 1..n {
                        let v = -(l.0[a] - l.0[b]);
                        assert!(v == 0 || v == 1);
                    }
                }
            }
        }
    }

    #[test]
    fn levi_trace_examples() {
        let m = comp(&[2, 1]);
        let got = parabolics_with_levi_trace(&m, &comp(&[1, 1, 1])).unwrap();
        assert_eq!(got, vec![comp(&[1, 1, 1]), comp(&[1, 2])]);
        let got = parabolics_with_levi_trace(&m, &comp(&[2, 1])).unwrap();
        assert_eq!(got, vec![comp(&[2, 1]), comp(&[3])]);
        let g = StandardParabolic::full(3);
        for q in StandardParabolic::all(3) {
            assert_eq!(parabolics_with_levi_trace(&g, &q).unwrap(), vec![q.clone()]);
        }
        assert!(matches!(
            parabolics_with_levi_trace(&m, &comp(&[1, 2])),
            Err(RootDatumError::NotInsideLevi { .. })
        ));
    }

    #[test]
    fn parabolic_views() {
        let p = comp(&[2, 1, 3]);
        assert_eq!(p.simple_roots(), [1, 4, 5].into_iter().collect());
        assert_eq!(p.boundary_roots(), [2, 3].into_iter().collect());
        assert_eq!(StandardParabolic::from_simple_roots(6, &p.simple_roots()).unwrap(), p);
        assert_eq!(p.block_of(3), 1);
        assert_eq!(p.block_of(4), 2);
        assert_eq!(StandardParabolic::all(4).len(), 8);
        assert!(StandardParabolic::new(vec![2, 0]).is_err());
    }

    #[test]
    fn weyl_perms() {
        let all = WeylPerm::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all.iter().map(|w| w.length()).sum::<usize>(), 9);
        let s1 = WeylPerm::simple_reflection(3, 1);
        assert_eq!(s1.act(&[-1, 0, 0]), vec![0, -1, 0]);
        for w in &all {
            assert_eq!(w.compose(&w.inverse()), WeylPerm::identity(3));
        }
    }
}
