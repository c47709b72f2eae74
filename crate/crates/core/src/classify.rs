//! Classification data for irreducible admissible representations of `GL_n(F)`
//! and the constituent structure of parabolically induced representations.
//!
//! An induction datum is a standard parabolic `P` together with, for each
//! block, either an opaque supersingular representation or a generalized
//! Steinberg `Sp_Q ⊗ (eta ∘ det)`. `Sp_B` is the Steinberg representation and
//! `Sp_G` the trivial one.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::eigen::{EigenError, ParamPair, SmoothCharacter};
use crate::poset::{FinitePoset, Mask, MAX_ELEMENTS};
use crate::root_datum::{parabolics_with_levi_trace, RootDatumError, StandardParabolic};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("block sizes {blocks:?} do not match the composition of {parabolic}")]
    SizeMismatch { parabolic: StandardParabolic, blocks: Vec<usize> },
    #[error("Steinberg block of size {size} carries a parabolic of GL_{rank}")]
    SteinbergRank { size: usize, rank: usize },
    #[error("datum is not in canonical form")]
    NotCanonical,
    #[error("{0} constituents exceed the lattice limit")]
    TooLarge(usize),
    #[error(transparent)]
    RootDatum(#[from] RootDatumError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// One tensor factor of the inducing representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BlockRep {
    Supersingular { size: usize, label: String, central_char: SmoothCharacter },
    Steinberg { size: usize, q: StandardParabolic, eta: SmoothCharacter },
}

impl BlockRep {
    /// The character `eta ∘ det` of `GL_size`.
    pub fn character(size: usize, eta: SmoothCharacter) -> Self {
        BlockRep::Steinberg { size, q: StandardParabolic::full(size), eta }
    }

    /// The twisted Steinberg `St ⊗ (eta ∘ det)` of `GL_size`.
    pub fn steinberg(size: usize, eta: SmoothCharacter) -> Self {
        BlockRep::Steinberg { size, q: StandardParabolic::borel(size), eta }
    }

    pub fn size(&self) -> usize {
        match self {
            BlockRep::Supersingular { size, .. } | BlockRep::Steinberg { size, .. } => *size,
        }
    }

    fn steinberg_eta(&self) -> Option<&SmoothCharacter> {
        match self {
            BlockRep::Steinberg { eta, .. } => Some(eta),
            BlockRep::Supersingular { .. } => None,
        }
    }
}

impl fmt::Display for BlockRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockRep::Supersingular { size, label, central_char } => {
                write!(f, "ss[{label}; GL_{size}; ω={central_char}]")
            }
            BlockRep::Steinberg { size, q, eta } => write!(f, "Sp_{q}[GL_{size}]⊗{eta}"),
        }
    }
}

/// `Ind_P^G(sigma_1 ⊗ … ⊗ sigma_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InductionDatum {
    parabolic: StandardParabolic,
    blocks: Vec<BlockRep>,
}

impl InductionDatum {
    pub fn new(parabolic: StandardParabolic, blocks: Vec<BlockRep>) -> Result<Self, ClassifyError> {
        let sizes: Vec<usize> = blocks.iter().map(BlockRep::size).collect();
        if sizes != parabolic.composition() {
            return Err(ClassifyError::SizeMismatch { parabolic, blocks: sizes });
        }
        for b in &blocks {
            if let BlockRep::Steinberg { size, q, .. } = b {
                if q.rank() != *size {
                    return Err(ClassifyError::SteinbergRank { size: *size, rank: q.rank() });
                }
            }
        }
        Ok(Self { parabolic, blocks })
    }

    /// Same as [`InductionDatum::new`] with `P` read off the block sizes.
    pub fn from_blocks(blocks: Vec<BlockRep>) -> Result<Self, ClassifyError> {
        let p = StandardParabolic::new(blocks.iter().map(BlockRep::size).collect())?;
        Self::new(p, blocks)
    }

    pub fn parabolic(&self) -> &StandardParabolic {
        &self.parabolic
    }

    pub fn blocks(&self) -> &[BlockRep] {
        &self.blocks
    }

    pub fn rank(&self) -> usize {
        self.parabolic.rank()
    }
}

impl fmt::Display for InductionDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "Ind_{}({})", self.parabolic, parts.join(" ⊗ "))
    }
}

/// An irreducible representation, given by its canonical datum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IrreducibleRep {
    datum: InductionDatum,
}

impl IrreducibleRep {
    pub fn new(datum: InductionDatum) -> Result<Self, ClassifyError> {
        if !validate(&datum) {
            return Err(ClassifyError::NotCanonical);
        }
        Ok(Self { datum })
    }

    pub fn datum(&self) -> &InductionDatum {
        &self.datum
    }
}

impl fmt::Display for IrreducibleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.datum.fmt(f)
    }
}

/// Canonical form: supersingular blocks have size `> 1`, and adjacent
/// Steinberg blocks carry different characters.
pub fn validate(datum: &InductionDatum) -> bool {
    let ss_ok = datum
        .blocks
        .iter()
        .all(|b| !matches!(b, BlockRep::Supersingular { size, .. } if *size <= 1));
    ss_ok && delta(datum) == 0
}

/// Number of adjacent Steinberg pairs with equal character.
pub fn delta(datum: &InductionDatum) -> usize {
    datum
        .blocks
        .windows(2)
        .filter(|w| matches!((w[0].steinberg_eta(), w[1].steinberg_eta()), (Some(a), Some(b)) if a == b))
        .count()
}

/// A block of the normalized datum: either a supersingular block or a maximal
/// run of Steinberg blocks sharing one character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuperBlock {
    Supersingular(BlockRep),
    Run {
        /// Block sizes of the run; the Levi `L` of `GL_m`.
        levi: StandardParabolic,
        /// The parabolics `Q_j` of the run, placed side by side inside `GL_m`.
        q: StandardParabolic,
        eta: SmoothCharacter,
    },
}

impl SuperBlock {
    pub fn size(&self) -> usize {
        match self {
            SuperBlock::Supersingular(b) => b.size(),
            SuperBlock::Run { levi, .. } => levi.rank(),
        }
    }

    /// Number of free boundary roots, i.e. run length minus one.
    pub fn freedom(&self) -> usize {
        match self {
            SuperBlock::Supersingular(_) => 0,
            SuperBlock::Run { levi, .. } => levi.num_blocks() - 1,
        }
    }

    /// The choices `S'` with `S' ∩ L = S`, ordered by bitmask of added roots.
    pub fn choices(&self) -> Vec<BlockRep> {
        match self {
            SuperBlock::Supersingular(b) => vec![b.clone()],
            SuperBlock::Run { levi, q, eta } => parabolics_with_levi_trace(levi, q)
                .expect("run parabolic lies in its Levi")
                .into_iter()
                .map(|s| BlockRep::Steinberg { size: levi.rank(), q: s, eta: eta.clone() })
                .collect(),
        }
    }
}

/// Groups maximal runs of equal-character Steinberg blocks.
pub fn normalize(datum: &InductionDatum) -> Vec<SuperBlock> {
    let mut out: Vec<SuperBlock> = Vec::new();
    for b in &datum.blocks {
        match b {
            BlockRep::Supersingular { .. } => out.push(SuperBlock::Supersingular(b.clone())),
            BlockRep::Steinberg { size, q, eta } => {
                if let Some(SuperBlock::Run { levi, q: run_q, eta: run_eta }) = out.last_mut() {
                    if run_eta == eta {
                        let mut sizes = levi.composition().to_vec();
                        sizes.push(*size);
                        let mut roots = run_q.simple_roots();
                        let offset = levi.rank();
                        roots.extend(q.simple_roots().into_iter().map(|i| i + offset));
                        let n = offset + size;
                        *levi = StandardParabolic::new(sizes).expect("positive sizes");
                        *run_q = StandardParabolic::from_simple_roots(n, &roots).expect("roots in range");
                        continue;
                    }
                }
                out.push(SuperBlock::Run {
                    levi: StandardParabolic::full(*size),
                    q: q.clone(),
                    eta: eta.clone(),
                });
            }
        }
    }
    out
}

/// The canonical datum obtained by choosing, for each super-block, the entry
/// of [`SuperBlock::choices`] given by `choice`.
fn assemble(supers: &[SuperBlock], choice: &[usize]) -> IrreducibleRep {
    let blocks: Vec<BlockRep> = supers.iter().zip(choice).map(|(s, &c)| s.choices()[c].clone()).collect();
    let datum = InductionDatum::from_blocks(blocks).expect("sizes are consistent");
    IrreducibleRep { datum }
}

/// The Jordan–Hölder constituents with their order `<=_X`.
#[derive(Debug, Clone)]
pub struct ConstituentPoset {
    elements: Vec<IrreducibleRep>,
    /// Per element, the bitmask of boundary roots added in each super-block.
    choices: Vec<Vec<usize>>,
    order: FinitePoset,
}

impl ConstituentPoset {
    pub fn elements(&self) -> &[IrreducibleRep] {
        &self.elements
    }

    /// Per element, the bitmask of boundary roots added in each super-block.
    pub fn choices(&self) -> &[Vec<usize>] {
        &self.choices
    }

    pub fn order(&self) -> &FinitePoset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq(a, b)
    }
}

/// Enumerates the `2^delta` constituents of `Ind_P^G(sigma)`, ordered
/// lexicographically in the per-super-block bitmasks. `a <=_X b` iff each
/// choice of `a` contains the corresponding choice of `b`.
pub fn constituents(datum: &InductionDatum) -> Result<ConstituentPoset, ClassifyError> {
    let supers = normalize(datum);
    let d: usize = supers.iter().map(SuperBlock::freedom).sum();
    if d >= 64 || 1usize << d > MAX_ELEMENTS {
        return Err(ClassifyError::TooLarge(if d >= 64 { usize::MAX } else { 1 << d }));
    }
    let radices: Vec<usize> = supers.iter().map(|s| 1 << s.freedom()).collect();
    let mut choices: Vec<Vec<usize>> = vec![vec![]];
    for r in &radices {
        choices = choices
            .into_iter()
            .flat_map(|c| (0..*r).map(move |x| [c.clone(), vec![x]].concat()))
            .collect();
    }
    let elements: Vec<IrreducibleRep> = choices.iter().map(|c| assemble(&supers, c)).collect();
    let order = FinitePoset::new(elements.len(), |a, b| {
        choices[a].iter().zip(&choices[b]).all(|(x, y)| x & y == *y)
    });
    Ok(ConstituentPoset { elements, choices, order })
}

/// The generalized Steinberg constituents `Sp_{P'}` of `Ind_P^G Sp_Q`.
pub fn steinberg_constituents(
    p: &StandardParabolic,
    q: &StandardParabolic,
) -> Result<Vec<StandardParabolic>, ClassifyError> {
    Ok(parabolics_with_levi_trace(p, q)?)
}

/// The Hecke eigensystem attached to a datum: supersingular blocks keep their
/// Levi block and central character, Steinberg blocks split into torus blocks.
pub fn param_pair_of_datum(datum: &InductionDatum) -> Result<ParamPair, ClassifyError> {
    let mut sizes = Vec::new();
    let mut chars = Vec::new();
    for b in &datum.blocks {
        match b {
            BlockRep::Supersingular { size, central_char, .. } => {
                sizes.push(*size);
                chars.push(central_char.clone());
            }
            BlockRep::Steinberg { size, eta, .. } => {
                for _ in 0..*size {
                    sizes.push(1);
                    chars.push(eta.clone());
                }
            }
        }
    }
    Ok(ParamPair::new(StandardParabolic::new(sizes)?, chars)?)
}

pub fn param_pair(rep: &IrreducibleRep) -> Result<ParamPair, ClassifyError> {
    param_pair_of_datum(&rep.datum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrincipalSeriesVerdict {
    /// Exact criterion: adjacent characters differ.
    pub irreducible: bool,
    /// Sufficient criterion: adjacent characters differ already on `k^×`.
    pub tame_criterion: bool,
}

/// Irreducibility of `Ind_B^G(chi_1 ⊗ … ⊗ chi_n)`.
pub fn is_irreducible_principal_series(chars: &[SmoothCharacter]) -> PrincipalSeriesVerdict {
    let irreducible = chars.windows(2).all(|w| w[0] != w[1]);
    let tame_criterion = chars.windows(2).all(|w| w[0].tame_exponent() != w[1].tame_exponent());
    PrincipalSeriesVerdict { irreducible, tame_criterion }
}

/// Submodules of `Ind_P^G(sigma)` as lower sets of its constituent poset.
#[derive(Debug, Clone)]
pub struct SubmoduleLattice {
    pub poset: ConstituentPoset,
    pub lower_set_count: u128,
    /// Per constituent `j`, the submodule generated by `j` (cosocle `j`).
    pub principal: Vec<Mask>,
    pub socle: Vec<usize>,
    pub cosocle: Vec<usize>,
}

impl SubmoduleLattice {
    /// Every submodule, as the set of its constituents.
    pub fn lower_sets(&self) -> Vec<BTreeSet<usize>> {
        self.poset
            .order
            .lower_sets()
            .into_iter()
            .map(|m| crate::poset::members(m).into_iter().collect())
            .collect()
    }
}

pub fn submodule_lattice(datum: &InductionDatum) -> Result<SubmoduleLattice, ClassifyError> {
    let poset = constituents(datum)?;
    let order = &poset.order;
    let lower_set_count = order.count_lower_sets();
    let principal = (0..poset.len()).map(|i| order.principal_lower_set(i)).collect();
    let socle = order.minimal();
    let cosocle = order.maximal();
    Ok(SubmoduleLattice { poset, lower_set_count, principal, socle, cosocle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn eta(u: i64) -> SmoothCharacter {
        SmoothCharacter::new(Field::prime(5).unwrap().from_int(u), 0, 5).unwrap()
    }

    fn st1(u: i64) -> BlockRep {
        BlockRep::character(1, eta(u))
    }

    fn ss(size: usize) -> BlockRep {
        BlockRep::Supersingular { size, label: "s".into(), central_char: eta(2) }
    }

    fn comp(c: &[usize]) -> StandardParabolic {
        StandardParabolic::new(c.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&InductionDatum::from_blocks(vec![st1(1), st1(2)]).unwrap()));
        assert!(!validate(&InductionDatum::from_blocks(vec![st1(1), st1(1)]).unwrap()));
        assert!(validate(&InductionDatum::from_blocks(vec![ss(2), st1(1)]).unwrap()));
        assert!(!validate(&InductionDatum::from_blocks(vec![ss(1)]).unwrap()));
        assert!(matches!(
            InductionDatum::new(comp(&[2, 1]), vec![st1(1), st1(2)]),
            Err(ClassifyError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn delta_examples() {
        let d = |b: Vec<BlockRep>| delta(&InductionDatum::from_blocks(b).unwrap());
        assert_eq!(d(vec![st1(1), st1(2)]), 0);
        assert_eq!(d(vec![st1(1), st1(1), st1(2)]), 1);
        assert_eq!(d(vec![st1(1), st1(1), st1(1)]), 2);
        assert_eq!(d(vec![st1(1), ss(2), st1(1)]), 0);
    }

    #[test]
    fn constituents_gl2() {
        let c = constituents(&InductionDatum::from_blocks(vec![st1(1), st1(1)]).unwrap()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.elements()[0].datum().blocks(), &[BlockRep::steinberg(2, eta(1))]);
        assert_eq!(c.elements()[1].datum().blocks(), &[BlockRep::character(2, eta(1))]);
        // the character is the submodule
        assert!(c.leq(1, 0));
        assert!(!c.leq(0, 1));
    }

    #[test]
    fn constituents_gl3_partial_run() {
        let c = constituents(&InductionDatum::from_blocks(vec![st1(1), st1(1), st1(2)]).unwrap()).unwrap();
        assert_eq!(c.len(), 2);
        for rep in c.elements() {
            assert_eq!(rep.datum().parabolic(), &comp(&[2, 1]));
            assert!(validate(rep.datum()));
        }
        let valid = InductionDatum::from_blocks(vec![ss(2), st1(1)]).unwrap();
        let c = constituents(&valid).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.elements()[0].datum(), &valid);
    }

    #[test]
    fn steinberg_constituents_examples() {
        let got = steinberg_constituents(&comp(&[2, 1]), &StandardParabolic::borel(3)).unwrap();
        assert_eq!(got, vec![StandardParabolic::borel(3), comp(&[1, 2])]);
        let g = StandardParabolic::full(3);
        assert_eq!(steinberg_constituents(&g, &comp(&[2, 1])).unwrap(), vec![comp(&[2, 1])]);
        let got = steinberg_constituents(&StandardParabolic::borel(2), &StandardParabolic::borel(2)).unwrap();
        assert_eq!(got, vec![StandardParabolic::borel(2), StandardParabolic::full(2)]);
        assert!(steinberg_constituents(&StandardParabolic::borel(3), &g).is_err());
    }

    #[test]
    fn param_pair_examples() {
        let g = IrreducibleRep::new(InductionDatum::from_blocks(vec![ss(2)]).unwrap()).unwrap();
        let pp = param_pair(&g).unwrap();
        assert!(pp.levi().is_full());
        assert_eq!(pp.chars(), &[eta(2)]);

        let st = IrreducibleRep::new(InductionDatum::from_blocks(vec![BlockRep::steinberg(3, eta(3))]).unwrap())
            .unwrap();
        let pp = param_pair(&st).unwrap();
        assert_eq!(pp.levi(), &StandardParabolic::borel(3));
        assert_eq!(pp.chars(), &[eta(3), eta(3), eta(3)]);

        let mixed = IrreducibleRep::new(InductionDatum::from_blocks(vec![ss(2), st1(1)]).unwrap()).unwrap();
        let pp = param_pair(&mixed).unwrap();
        assert_eq!(pp.levi(), &comp(&[2, 1]));
        assert_eq!(pp.chars(), &[eta(2), eta(1)]);
    }

    #[test]
    fn principal_series() {
        let v = is_irreducible_principal_series(&[eta(1), eta(2)]);
        assert!(v.irreducible && !v.tame_criterion);
        assert!(!is_irreducible_principal_series(&[eta(1), eta(1)]).irreducible);
        let f = Field::prime(7).unwrap();
        let c = |t| SmoothCharacter::new(f.one(), t, 7).unwrap();
        let v = is_irreducible_principal_series(&[c(0), c(1), c(2)]);
        assert!(v.irreducible && v.tame_criterion);
    }

    #[test]
    fn lattice_examples() {
        let l = submodule_lattice(&InductionDatum::from_blocks(vec![st1(1), st1(1)]).unwrap()).unwrap();
        assert_eq!(l.lower_set_count, 3);
        let l = submodule_lattice(&InductionDatum::from_blocks(vec![st1(1); 3]).unwrap()).unwrap();
        assert_eq!(l.poset.len(), 4);
        assert_eq!(l.lower_set_count, 6);
        // trivial character at the bottom, Steinberg at the top
        assert_eq!(l.socle, vec![3]);
        assert_eq!(l.cosocle, vec![0]);
        assert_eq!(l.poset.elements()[3].datum().blocks(), &[BlockRep::character(3, eta(1))]);
        assert_eq!(l.lower_sets().len(), 6);
        let l = submodule_lattice(&InductionDatum::from_blocks(vec![st1(1), st1(1), st1(2)]).unwrap()).unwrap();
        assert_eq!(l.lower_set_count, 3);
        let l = submodule_lattice(&InductionDatum::from_blocks(vec![st1(1); 4]).unwrap()).unwrap();
        assert_eq!(l.lower_set_count, 20);
    }
}
