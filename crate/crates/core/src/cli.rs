//! Command-line surface: JSON job specs, dispatch, and JSON/DOT output.
//!
//! Every command is first turned into a [`JobSpec`]; `--json-in` files use
//! the same schema, so a job given on the command line and the equivalent
//! JSON file produce byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::classify::{
    self, constituents, delta, is_irreducible_principal_series, param_pair_of_datum, submodule_lattice, BlockRep,
    ClassifyError, InductionDatum, SubmoduleLattice,
};
use crate::eigen::{self, EigenError, ParamPair, SmoothCharacter};
use crate::field::{Field, FieldError, Scalar};
use crate::hecke::{self, satake_t_to_tau, satake_tau_to_t, Basis, HeckeElement, HeckeError};
use crate::hecke0::{self, demazure_product, DerivationReport, DerivationStatus, ExtAffineElem, Hecke0Error};
use crate::oracle::{self, OracleError};
use crate::root_datum::{Coweight, HighestWeight, RootDatumError, StandardParabolic};
use crate::weights::{self, prime_of, LeviWeightClass, WeightClass, WeightError};

/// Environment variable holding the default scalar field, e.g. `3`, `3^2` or `3:2,2,1`.
pub const FIELD_ENV: &str = "SATAKE_FIELD";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Satake,
    Classify,
    Lattice,
    Hecke0,
    Weights,
    Eigen,
    Verify,
}

/// `F_p[x]/(modulus)`, or `F_{p^m}` with the default modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Low degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    /// Parses `p`, `p^m` or `p:c0,c1,…`.
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Schema(format!("cannot parse scalar field {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        if let Some((p, m)) = s.split_once('^') {
            Ok(Self { p: num(p)?, m: Some(num(m)? as usize), modulus: None })
        } else if let Some((p, coeffs)) = s.split_once(':') {
            let modulus = coeffs.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
            Ok(Self { p: num(p)?, m: None, modulus: Some(modulus) })
        } else {
            Ok(Self { p: num(s)?, m: None, modulus: None })
        }
    }

    pub fn build(&self) -> Result<Field, CliError> {
        let field = match (&self.modulus, self.m) {
            (Some(f), m) => {
                let field = Field::new(self.p, f.clone())?;
                if m.is_some_and(|m| m != field.degree()) {
                    return Err(CliError::Schema("scalar field degree disagrees with its modulus".into()));
                }
                field
            }
            (None, m) => Field::with_degree(self.p, m.unwrap_or(1))?,
        };
        Ok(field)
    }
}

/// One job: a command, its parameters, and optionally the scalar field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    #[serde(default)]
    pub params: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar_field: Option<FieldSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input; exit code 2.
    Schema(String),
    /// Well-formed input rejected by the mathematics; exit code 1.
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Schema(m) => json!({"error": {"kind": "schema", "message": m}}),
            CliError::Domain { kind, message } => json!({"error": {"kind": kind, "message": message}}),
        }
    }
}

macro_rules! domain_error {
    ($($ty:ty => $kind:literal),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Domain { kind: $kind, message: e.to_string() }
            }
        })*
    };
}

domain_error! {
    RootDatumError => "root_datum",
    WeightError => "weights",
    HeckeError => "hecke",
    EigenError => "eigen",
    ClassifyError => "classify",
    Hecke0Error => "hecke0",
    OracleError => "oracle",
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        CliError::Schema(format!("scalar field: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Schema(e.to_string())
    }
}

fn coweight(s: &str) -> Result<Coweight, CliError> {
    s.parse().map_err(|e: RootDatumError| CliError::Schema(e.to_string()))
}

fn highest_weight(s: &str) -> Result<HighestWeight, CliError> {
    s.parse().map_err(|e: RootDatumError| CliError::Schema(e.to_string()))
}

fn composition(c: &[usize]) -> Result<StandardParabolic, CliError> {
    Ok(StandardParabolic::new(c.to_vec())?)
}

fn scalar(field: &Field, s: &str) -> Result<Scalar, CliError> {
    field.parse(s).map_err(|e| CliError::Schema(e.to_string()))
}

fn require<T>(x: Option<T>, name: &str) -> Result<T, CliError> {
    x.ok_or_else(|| CliError::Schema(format!("missing parameter `{name}`")))
}

/// `{"unramified": "<coefficients>", "tame": <integer>}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharJson {
    pub unramified: String,
    pub tame: i64,
}

impl CharJson {
    fn build(&self, field: &Field, q: u64) -> Result<SmoothCharacter, CliError> {
        Ok(SmoothCharacter::new(scalar(field, &self.unramified)?, self.tame, q)?)
    }

    pub fn of(c: &SmoothCharacter) -> Self {
        Self { unramified: c.unramified().to_string(), tame: c.tame_exponent() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BlockJson {
    /// `Sp_Q ⊗ (eta ∘ det)`; `parabolic` defaults to the Borel of the block.
    Steinberg {
        eta: CharJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        parabolic: Option<Vec<usize>>,
    },
    /// `eta ∘ det`.
    Character { eta: CharJson },
    Supersingular { label: String, central_char: CharJson },
}

/// `Ind_P(blocks)`; block sizes come from `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatumJson {
    #[serde(rename = "P")]
    pub p: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub blocks: Vec<BlockJson>,
}

impl DatumJson {
    fn build(&self, field: &Field, q: Option<u64>) -> Result<InductionDatum, CliError> {
        let q = require(self.q.or(q), "q")?;
        if self.p.len() != self.blocks.len() {
            return Err(CliError::Schema(format!("{} block sizes but {} blocks", self.p.len(), self.blocks.len())));
        }
        let blocks = self
            .p
            .iter()
            .zip(&self.blocks)
            .map(|(&size, b)| {
                Ok(match b {
                    BlockJson::Steinberg { eta, parabolic: None } => BlockRep::steinberg(size, eta.build(field, q)?),
                    BlockJson::Steinberg { eta, parabolic: Some(c) } => {
                        BlockRep::Steinberg { size, q: composition(c)?, eta: eta.build(field, q)? }
                    }
                    BlockJson::Character { eta } => BlockRep::character(size, eta.build(field, q)?),
                    BlockJson::Supersingular { label, central_char } => BlockRep::Supersingular {
                        size,
                        label: label.clone(),
                        central_char: central_char.build(field, q)?,
                    },
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(InductionDatum::new(composition(&self.p)?, blocks)?)
    }

    pub fn of(datum: &InductionDatum, q: u64) -> Self {
        let blocks = datum
            .blocks()
            .iter()
            .map(|b| match b {
                BlockRep::Steinberg { size, q, eta } if q.is_full() && *size == q.rank() => {
                    BlockJson::Character { eta: CharJson::of(eta) }
                }
                BlockRep::Steinberg { size, q, eta } => BlockJson::Steinberg {
                    eta: CharJson::of(eta),
                    parabolic: (*q != StandardParabolic::borel(*size)).then(|| q.composition().to_vec()),
                },
                BlockRep::Supersingular { label, central_char, .. } => {
                    BlockJson::Supersingular { label: label.clone(), central_char: CharJson::of(central_char) }
                }
            })
            .collect();
        Self { p: datum.parabolic().composition().to_vec(), q: Some(q), blocks }
    }
}

fn char_json(c: &SmoothCharacter) -> Value {
    serde_json::to_value(CharJson::of(c)).expect("plain struct")
}

fn pair_json(pair: &ParamPair) -> Value {
    json!({
        "levi": pair.levi().composition(),
        "chars": pair.chars().iter().map(char_json).collect::<Vec<_>>(),
    })
}

fn element_json(x: &HeckeElement) -> Value {
    let terms: Map<String, Value> = x.terms().iter().map(|(k, c)| (k.to_string(), Value::String(c.to_string()))).collect();
    json!({
        "basis": match x.basis() { Basis::T => "T", Basis::Tau => "tau" },
        "terms": terms,
    })
}

fn datum_q(datum: &InductionDatum) -> u64 {
    datum
        .blocks()
        .iter()
        .map(|b| match b {
            BlockRep::Steinberg { eta, .. } => eta.q(),
            BlockRep::Supersingular { central_char, .. } => central_char.q(),
        })
        .next()
        .expect("a datum has at least one block")
}

/// Field used when none is configured: `F_q` for commands that carry a
/// residue field size, `F_2` otherwise. Satake expansions only need `F_p`.
fn default_field(spec: &Option<FieldSpec>, q: Option<u64>, prime_only: bool) -> Result<Field, CliError> {
    if let Some(fs) = spec {
        return fs.build();
    }
    let Some(q) = q else { return Ok(Field::prime(2)?) };
    let p = prime_of(q)?;
    if prime_only {
        return Ok(Field::prime(p)?);
    }
    let mut f = 0;
    while p.pow(f) < q {
        f += 1;
    }
    Ok(Field::with_degree(p, f as usize)?)
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SatakeAction {
    /// `T`-basis element to `tau`-basis.
    Expand,
    /// `tau`-basis element to `T`-basis.
    Invert,
    /// Product `T_a · T_b`, in the `T`-basis.
    Multiply,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SatakeParams {
    action: SatakeAction,
    #[serde(default)]
    n: Option<usize>,
    q: u64,
    nu: String,
    #[serde(default)]
    lambda: Option<String>,
    #[serde(default)]
    terms: Option<BTreeMap<String, String>>,
    #[serde(default)]
    a: Option<String>,
    #[serde(default)]
    b: Option<String>,
}

fn run_satake(params: SatakeParams, field_spec: &Option<FieldSpec>) -> Result<Value, CliError> {
    let field = default_field(field_spec, Some(params.q), true)?;
    let v = WeightClass::new(highest_weight(&params.nu)?, params.q)?;
    if params.n.is_some_and(|n| n != v.rank()) {
        return Err(CliError::Schema(format!("--n {} disagrees with the rank of nu", params.n.unwrap())));
    }
    let element = |basis: Basis| -> Result<HeckeElement, CliError> {
        let mut terms = Vec::new();
        if let Some(l) = &params.lambda {
            terms.push((coweight(l)?, field.one()));
        }
        for (k, c) in params.terms.iter().flatten() {
            terms.push((coweight(k)?, scalar(&field, c)?));
        }
        if terms.is_empty() {
            return Err(CliError::Schema("give `lambda` or `terms`".into()));
        }
        Ok(HeckeElement::from_terms(&v, basis, &field, terms)?)
    };
    let out = match params.action {
        SatakeAction::Expand => satake_t_to_tau(&element(Basis::T)?)?,
        SatakeAction::Invert => satake_tau_to_t(&element(Basis::Tau)?)?,
        SatakeAction::Multiply => {
            let a = HeckeElement::basis_element(&v, Basis::T, coweight(&require(params.a, "a")?)?, &field)?;
            let b = HeckeElement::basis_element(&v, Basis::T, coweight(&require(params.b, "b")?)?, &field)?;
            hecke::multiply(&a, &b)?
        }
    };
    Ok(element_json(&out))
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifyAction {
    /// Jordan–Hölder constituents and their order.
    Constituents,
    /// Irreducibility of a principal series `Ind_B(chars)`.
    Irreducible,
    /// Whether the datum is already in canonical form.
    Validate,
    /// The Hecke eigensystem of the datum.
    ParamPair,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyParams {
    action: ClassifyAction,
    #[serde(default)]
    datum: Option<DatumJson>,
    #[serde(default)]
    chars: Option<Vec<CharJson>>,
    #[serde(default)]
    q: Option<u64>,
}

fn run_classify(params: ClassifyParams, field_spec: &Option<FieldSpec>) -> Result<Value, CliError> {
    if params.action == ClassifyAction::Irreducible {
        let q = require(params.q, "q")?;
        let field = default_field(field_spec, Some(q), false)?;
        let chars = require(params.chars, "chars")?
            .iter()
            .map(|c| c.build(&field, q))
            .collect::<Result<Vec<_>, _>>()?;
        let verdict = is_irreducible_principal_series(&chars);
        return Ok(json!({"irreducible": verdict.irreducible, "tame_criterion": verdict.tame_criterion}));
    }
    let dj = require(params.datum, "datum")?;
    let q = require(dj.q.or(params.q), "q")?;
    let field = default_field(field_spec, Some(q), false)?;
    let datum = dj.build(&field, Some(q))?;
    match params.action {
        ClassifyAction::Validate => Ok(json!({"canonical": classify::validate(&datum)})),
        ClassifyAction::ParamPair => Ok(pair_json(&param_pair_of_datum(&datum)?)),
        ClassifyAction::Constituents => {
            let poset = constituents(&datum)?;
            let items: Vec<Value> = poset
                .elements()
                .iter()
                .zip(poset.choices())
                .enumerate()
                .map(|(i, (rep, choice))| {
                    json!({
                        "index": i,
                        "name": rep.to_string(),
                        "datum": serde_json::to_value(DatumJson::of(rep.datum(), q)).expect("plain struct"),
                        "choices": choice,
                    })
                })
                .collect();
            Ok(json!({
                "count": poset.len(),
                "delta": delta(&datum),
                "param_pair": pair_json(&param_pair_of_datum(&datum)?),
                "constituents": items,
                "covers": poset.order().hasse_edges(),
            }))
        }
        ClassifyAction::Irreducible => unreachable!(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeParams {
    datum: DatumJson,
    #[serde(default)]
    q: Option<u64>,
    #[serde(default)]
    dot: bool,
}

fn set_label(set: &std::collections::BTreeSet<usize>) -> String {
    let parts: Vec<String> = set.iter().map(|i| format!("π{i}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Renders the submodule lattice: one node per submodule, labeled by its
/// constituents, and one edge per covering relation.
pub fn export_lattice_dot(lattice: &SubmoduleLattice) -> String {
    let sets = lattice.lower_sets();
    let mut out = String::from("digraph submodules {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, s) in sets.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", set_label(s));
    }
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if b.len() == a.len() + 1 && a.is_subset(b) {
                let _ = writeln!(out, "  n{i} -> n{j};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn lattice_json(lattice: &SubmoduleLattice) -> Value {
    let sets = lattice.lower_sets();
    let mut covers = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if b.len() == a.len() + 1 && a.is_subset(b) {
                covers.push((i, j));
            }
        }
    }
    json!({
        "constituents": lattice.poset.elements().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "submodule_count": lattice.lower_set_count.to_string(),
        "submodules": sets,
        "covers": covers,
        "socle": lattice.socle,
        "cosocle": lattice.cosocle,
    })
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Hecke0Action {
    /// Symbolic derivation of `v = Πv`.
    Derive,
    /// Quadratic, braid, rotation, shift and translation-power identities.
    Verify,
    /// Signed Demazure product of two windows.
    Demazure,
    /// Length and reduced word of a window.
    Length,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Hecke0Params {
    action: Hecke0Action,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    cap: Option<usize>,
    #[serde(default)]
    zeta: Option<String>,
    #[serde(default)]
    w: Option<String>,
    #[serde(default)]
    w2: Option<String>,
}

fn report_json(r: &DerivationReport) -> Value {
    let status = match &r.status {
        DerivationStatus::Proved => json!("proved"),
        DerivationStatus::Inconclusive { step, cap } => json!({"inconclusive": {"step": step, "cap": cap}}),
    };
    json!({
        "n": r.n,
        "cap": r.cap,
        "characteristic": r.characteristic,
        "status": status,
        "minimal_sufficient_cap": r.minimal_sufficient_cap,
        "nondegenerate": r.nondegenerate,
        "steps": r.steps.iter().map(|s| json!({
            "identity": s.identity,
            "conclusion": s.conclusion,
            "trace": s.trace,
            "sufficient_length": s.sufficient_length,
            "span_rank": s.span_rank,
        })).collect::<Vec<_>>(),
    })
}

fn window(s: &str) -> Result<(ExtAffineElem, i64), CliError> {
    let v = coweight(s)?.0;
    Ok(ExtAffineElem::from_window(v)?)
}

fn run_hecke0(params: Hecke0Params, field_spec: &Option<FieldSpec>) -> Result<Value, CliError> {
    let field = default_field(field_spec, None, true)?;
    let zeta = match &params.zeta {
        Some(z) => scalar(&field, z)?,
        None => field.one(),
    };
    match params.action {
        Hecke0Action::Derive => {
            let n = require(params.n, "n")?;
            let cap = params.cap.unwrap_or(n * n);
            Ok(report_json(&hecke0::derive_pi_invariance(n, cap, &field)?))
        }
        Hecke0Action::Verify => {
            let n = require(params.n, "n")?;
            let translation: Vec<bool> =
                (1..n).map(|i| hecke0::verify_translation_power(n, i, &zeta)).collect::<Result<_, _>>()?;
            Ok(json!({
                "braid_and_rotation": hecke0::verify_braid_and_rotation(n, &zeta)?,
                "shift_commutation": hecke0::verify_shift_commutation(n, &zeta)?,
                "translation_power": translation,
            }))
        }
        Hecke0Action::Demazure => {
            let (w, a) = window(&require(params.w, "w")?)?;
            let (w2, b) = window(&require(params.w2, "w2")?)?;
            let d = demazure_product(&w, &w2)?;
            Ok(json!({
                "sign": d.sign,
                "central": d.central + a + b,
                "result": d.result.window(),
            }))
        }
        Hecke0Action::Length => {
            let (w, a) = window(&require(params.w, "w")?)?;
            let (rot, word) = w.reduced_word();
            Ok(json!({
                "window": w.window(),
                "central": a,
                "length": w.length(),
                "rotation": rot,
                "reduced_word": word,
            }))
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WeightsAction {
    /// Canonical weight representatives of `GL_n(F_q)`.
    Enumerate,
    /// Restriction of a weight to a Levi.
    Restrict,
    /// Whether a weight is regular for a Levi.
    Regular,
    /// The unique regular weight restricting to a Levi weight.
    Cover,
    /// The partner weight for changing weight at a simple root.
    Partner,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsParams {
    action: WeightsAction,
    q: u64,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    nu: Option<String>,
    #[serde(default)]
    levi: Option<Vec<usize>>,
    #[serde(default)]
    i: Option<usize>,
}

fn run_weights(params: WeightsParams) -> Result<Value, CliError> {
    let q = params.q;
    let weight = || -> Result<WeightClass, CliError> {
        Ok(WeightClass::new(highest_weight(&require(params.nu.clone(), "nu")?)?, q)?)
    };
    let levi = || -> Result<StandardParabolic, CliError> { composition(&require(params.levi.clone(), "levi")?) };
    match params.action {
        WeightsAction::Enumerate => {
            let ws = WeightClass::enumerate(require(params.n, "n")?, q)?;
            Ok(json!({"weights": ws.iter().map(|w| w.nu().to_string()).collect::<Vec<_>>()}))
        }
        WeightsAction::Restrict => {
            let r = weights::restrict_to_levi(&weight()?, &levi()?)?;
            Ok(json!({
                "levi": r.levi().composition(),
                "nu": r.nu().to_string(),
                "central_exponents": weights::central_character_exponents(&r),
            }))
        }
        WeightsAction::Regular => Ok(json!({"regular": weights::is_m_regular(&weight()?, &levi()?)?})),
        WeightsAction::Cover => {
            let vbar = LeviWeightClass::new(levi()?, highest_weight(&require(params.nu.clone(), "nu")?)?, q)?;
            Ok(json!({"nu": weights::regular_cover(&vbar).nu().to_string()}))
        }
        WeightsAction::Partner => {
            let w = weights::weight_partner_for_change(&weight()?, require(params.i, "i")?)?;
            Ok(json!({"nu": w.nu().to_string()}))
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EigenAction {
    /// Value of the eigensystem on `tau_lambda`, or on `T_lambda` given `nu`.
    Eval,
    /// Whether the pair is supersingular.
    Supersingular,
    /// Whether the change-of-weight isomorphism applies at a simple root.
    Change,
    /// Twist by a character.
    Twist,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EigenParams {
    action: EigenAction,
    q: u64,
    levi: Vec<usize>,
    chars: Vec<CharJson>,
    #[serde(default)]
    lambda: Option<String>,
    #[serde(default)]
    nu: Option<String>,
    #[serde(default)]
    i: Option<usize>,
    #[serde(default)]
    eta: Option<CharJson>,
}

fn run_eigen(params: EigenParams, field_spec: &Option<FieldSpec>) -> Result<Value, CliError> {
    let q = params.q;
    let field = default_field(field_spec, Some(q), false)?;
    let chars = params.chars.iter().map(|c| c.build(&field, q)).collect::<Result<Vec<_>, _>>()?;
    let pair = ParamPair::new(composition(&params.levi)?, chars)?;
    let weight = || -> Result<WeightClass, CliError> {
        Ok(WeightClass::new(highest_weight(&require(params.nu.clone(), "nu")?)?, q)?)
    };
    match params.action {
        EigenAction::Eval => {
            let lambda = coweight(&require(params.lambda.clone(), "lambda")?)?;
            let value = match &params.nu {
                Some(_) => eigen::eval_t(&pair, &lambda, &weight()?)?,
                None => eigen::eval_tau(&pair, &lambda),
            };
            Ok(json!({"value": value.to_string()}))
        }
        EigenAction::Supersingular => Ok(json!({"supersingular": eigen::is_supersingular(&pair)})),
        EigenAction::Change => {
            let applicable = eigen::change_of_weight_applicable(&weight()?, require(params.i, "i")?, &pair)?;
            Ok(json!({"applicable": applicable}))
        }
        EigenAction::Twist => {
            let eta = require(params.eta.clone(), "eta")?.build(&field, q)?;
            Ok(pair_json(&eigen::twist(&pair, &eta)?))
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyParams {
    #[serde(default)]
    all: bool,
    #[serde(default)]
    gates: Vec<String>,
    #[serde(default = "default_max_n")]
    max_n: usize,
    #[serde(default = "default_max_q")]
    max_q: u64,
}

fn default_max_n() -> usize {
    3
}

fn default_max_q() -> u64 {
    3
}

/// Names accepted by `verify --gate`.
pub const GATES: [&str; 7] = ["gl-order", "bruhat", "minuscule", "iwahori", "invariants", "projection", "hecke0"];

fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| prime_of(q).is_ok()).collect()
}

fn gate_outcome(r: Result<bool, OracleError>) -> Value {
    match r {
        Ok(true) => json!("pass"),
        Ok(false) => json!("fail"),
        Err(OracleError::TooLarge { .. }) => json!("skipped: size guard"),
        Err(e) => json!(format!("error: {e}")),
    }
}

fn run_gate(gate: &str, n: usize, q: u64) -> Vec<Value> {
    let entry = |detail: String, outcome: Value| json!({"gate": gate, "n": n, "q": q, "case": detail, "result": outcome});
    let mut out = Vec::new();
    match gate {
        "gl-order" => out.push(entry(String::new(), gate_outcome(oracle::check_gl_order(n, q)))),
        "bruhat" => out.push(entry(String::new(), gate_outcome(oracle::check_bruhat(n, q)))),
        "minuscule" => {
            for i in 1..n {
                out.push(entry(format!("i={i}"), gate_outcome(oracle::check_minuscule_satake(n, q, i))));
            }
        }
        "iwahori" => {
            for i in 1..=n {
                out.push(entry(format!("i={i}"), gate_outcome(oracle::check_iwahori_coset_count(n, q, i))));
            }
        }
        "invariants" | "projection" => {
            let weights = match oracle::supported_weights(n, q) {
                Ok(w) => w,
                Err(e) => return vec![entry(String::new(), gate_outcome(Err(e)))],
            };
            let parabolics = StandardParabolic::all(n);
            for nu in &weights {
                for p in &parabolics {
                    if gate == "invariants" {
                        let r = oracle::check_invariants_coinvariants(q, nu, p).map(|r| r.passed());
                        out.push(entry(format!("nu={nu} P={p}"), gate_outcome(r)));
                        continue;
                    }
                    for l in &parabolics {
                        match oracle::check_regular_projection(q, nu, p, l) {
                            Err(OracleError::NotRegular) => {}
                            r => out.push(entry(format!("nu={nu} P={p} Q={l}"), gate_outcome(r))),
                        }
                    }
                }
            }
        }
        "hecke0" => {
            let Ok(field) = Field::with_degree(prime_of(q).unwrap_or(2), 1) else { return out };
            let zeta = field.one();
            let ok = hecke0::verify_braid_and_rotation(n, &zeta).unwrap_or(false)
                && hecke0::verify_shift_commutation(n, &zeta).unwrap_or(false)
                && (1..n).all(|i| hecke0::verify_translation_power(n, i, &zeta).unwrap_or(false));
            out.push(entry(String::new(), json!(if ok { "pass" } else { "fail" })));
        }
        _ => {}
    }
    out
}

fn run_verify(params: VerifyParams) -> Result<Value, CliError> {
    let gates: Vec<String> = if params.all || params.gates.is_empty() {
        GATES.iter().map(|s| s.to_string()).collect()
    } else {
        params.gates.clone()
    };
    if let Some(bad) = gates.iter().find(|g| !GATES.contains(&g.as_str())) {
        return Err(CliError::Schema(format!("unknown gate {bad:?}")));
    }
    let mut results = Vec::new();
    for gate in &gates {
        for n in 2..=params.max_n {
            for q in prime_powers_up_to(params.max_q) {
                results.extend(run_gate(gate, n, q));
            }
        }
    }
    let failed: Vec<&Value> = results
        .iter()
        .filter(|r| r["result"].as_str().is_some_and(|s| s == "fail" || s.starts_with("error")))
        .collect();
    let report = json!({"passed": failed.is_empty(), "checks": results.len(), "failures": failed, "results": results});
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Domain { kind: "verify", message: serde_json::to_string(&failed).expect("json") })
    }
}

/// Output of a successful job.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Dot(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => serde_json::to_string_pretty(v).expect("json") + "\n",
            Output::Dot(s) => s.clone(),
        }
    }
}

fn params<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, CliError> {
    Ok(serde_json::from_value(v.clone())?)
}

/// Runs a job without writing anything.
pub fn execute(spec: &JobSpec) -> Result<Output, CliError> {
    let fs = &spec.scalar_field;
    if let Some(f) = fs {
        f.build()?;
    }
    let v = &spec.params;
    let json = match spec.command {
        Command::Satake => run_satake(params(v)?, fs)?,
        Command::Classify => run_classify(params(v)?, fs)?,
        Command::Lattice => {
            let p: LatticeParams = params(v)?;
            let q = require(p.datum.q.or(p.q), "q")?;
            let field = default_field(fs, Some(q), false)?;
            let datum = p.datum.build(&field, Some(q))?;
            debug_assert_eq!(datum_q(&datum), q);
            let lattice = submodule_lattice(&datum)?;
            if p.dot {
                return Ok(Output::Dot(export_lattice_dot(&lattice)));
            }
            lattice_json(&lattice)
        }
        Command::Hecke0 => run_hecke0(params(v)?, fs)?,
        Command::Weights => run_weights(params(v)?)?,
        Command::Eigen => run_eigen(params(v)?, fs)?,
        Command::Verify => run_verify(params(v)?)?,
    };
    Ok(Output::Json(json))
}

/// Runs a job, writes its output (or a JSON error) to `out`, and returns the exit code.
pub fn run(spec: &JobSpec, out: &mut dyn Write) -> i32 {
    let (text, code) = match execute(spec) {
        Ok(o) => (o.render(), 0),
        Err(e) => (serde_json::to_string_pretty(&e.to_json()).expect("json") + "\n", e.exit_code()),
    };
    if out.write_all(text.as_bytes()).is_err() {
        return 1;
    }
    code
}

/// Parses a job file.
pub fn parse_job(text: &str) -> Result<JobSpec, CliError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Parser)]
#[command(name = "satake-modp", version, about = "Mod-p Satake transforms, Hecke eigensystems and classification data for GL_n")]
pub struct Cli {
    /// Read the whole job from a JSON file instead of the subcommand.
    #[arg(long, global = true)]
    pub json_in: Option<PathBuf>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit DOT instead of JSON (lattice only).
    #[arg(long, global = true)]
    pub dot: bool,
    /// Scalar field: `p`, `p^m`, or `p:c0,c1,…` (modulus, low degree first).
    #[arg(long, global = true, env = FIELD_ENV)]
    pub field: Option<String>,
    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Satake change of basis and multiplication.
    Satake(SatakeArgs),
    /// Constituents, irreducibility and canonical data.
    Classify(ClassifyArgs),
    /// Submodule lattice of a parabolic induction.
    Lattice(LatticeArgs),
    /// Affine 0-Hecke algebra computations.
    Hecke0(Hecke0Args),
    /// Serre weights.
    Weights(WeightsArgs),
    /// Hecke eigensystems.
    Eigen(EigenArgs),
    /// Finite-group brute-force gates.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SatakeArgs {
    pub action: SatakeAction,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// JSON object `{"<coweight>": "<scalar>", …}`.
    #[arg(long)]
    pub terms: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub action: ClassifyAction,
    /// JSON induction datum.
    #[arg(long)]
    pub datum: Option<String>,
    /// JSON list of characters.
    #[arg(long)]
    pub chars: Option<String>,
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long)]
    pub datum: String,
    #[arg(long)]
    pub q: Option<u64>,
}

#[derive(Debug, Args)]
pub struct Hecke0Args {
    pub action: Hecke0Action,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub cap: Option<usize>,
    #[arg(long)]
    pub zeta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w2: Option<String>,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    pub action: WeightsAction,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Composition, e.g. `2,1`.
    #[arg(long)]
    pub levi: Option<String>,
    #[arg(long)]
    pub i: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    pub action: EigenAction,
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub levi: String,
    /// JSON list of characters.
    #[arg(long)]
    pub chars: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    #[arg(long)]
    pub i: Option<usize>,
    /// JSON character.
    #[arg(long)]
    pub eta: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub all: bool,
    #[arg(long = "gate")]
    pub gates: Vec<String>,
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_q: u64,
}

fn insert<T: Serialize>(m: &mut Map<String, Value>, key: &str, v: Option<T>) {
    if let Some(v) = v {
        m.insert(key.to_string(), serde_json::to_value(v).expect("json"));
    }
}

fn insert_json(m: &mut Map<String, Value>, key: &str, text: Option<&str>) -> Result<(), CliError> {
    if let Some(t) = text {
        let v: Value = serde_json::from_str(t).map_err(|e| CliError::Schema(format!("--{key}: {e}")))?;
        m.insert(key.to_string(), v);
    }
    Ok(())
}

fn composition_arg(s: &str) -> Result<Vec<usize>, CliError> {
    s.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Schema(format!("cannot parse composition {s:?}")))
}

fn action_name<T: ValueEnum>(a: &T) -> Value {
    Value::String(a.to_possible_value().expect("no skipped variants").get_name().to_string())
}

impl Cli {
    /// The job this invocation describes.
    pub fn job(&self) -> Result<JobSpec, CliError> {
        let scalar_field = self.field.as_deref().map(FieldSpec::parse).transpose()?;
        if let Some(path) = &self.json_in {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
            let mut spec = parse_job(&text)?;
            if spec.scalar_field.is_none() {
                spec.scalar_field = scalar_field;
            }
            if self.dot && spec.command == Command::Lattice {
                if let Value::Object(m) = &mut spec.params {
                    m.insert("dot".into(), Value::Bool(true));
                }
            }
            return Ok(spec);
        }
        let Some(sub) = &self.command else {
            return Err(CliError::Schema("no command given".into()));
        };
        let mut m = Map::new();
        let command = match sub {
            Sub::Satake(a) => {
                m.insert("action".into(), action_name(&a.action));
                insert(&mut m, "n", a.n);
                insert(&mut m, "q", Some(a.q));
                insert(&mut m, "nu", Some(&a.nu));
                insert(&mut m, "lambda", a.lambda.as_ref());
                insert_json(&mut m, "terms", a.terms.as_deref())?;
                insert(&mut m, "a", a.a.as_ref());
                insert(&mut m, "b", a.b.as_ref());
                Command::Satake
            }
            Sub::Classify(a) => {
                m.insert("action".into(), action_name(&a.action));
                insert_json(&mut m, "datum", a.datum.as_deref())?;
                insert_json(&mut m, "chars", a.chars.as_deref())?;
                insert(&mut m, "q", a.q);
                Command::Classify
            }
            Sub::Lattice(a) => {
                insert_json(&mut m, "datum", Some(&a.datum))?;
                insert(&mut m, "q", a.q);
                if self.dot {
                    m.insert("dot".into(), Value::Bool(true));
                }
                Command::Lattice
            }
            Sub::Hecke0(a) => {
                m.insert("action".into(), action_name(&a.action));
                insert(&mut m, "n", a.n);
                insert(&mut m, "cap", a.cap);
                insert(&mut m, "zeta", a.zeta.as_ref());
                insert(&mut m, "w", a.w.as_ref());
                insert(&mut m, "w2", a.w2.as_ref());
                Command::Hecke0
            }
            Sub::Weights(a) => {
                m.insert("action".into(), action_name(&a.action));
                insert(&mut m, "q", Some(a.q));
                insert(&mut m, "n", a.n);
                insert(&mut m, "nu", a.nu.as_ref());
                insert(&mut m, "levi", a.levi.as_deref().map(composition_arg).transpose()?);
                insert(&mut m, "i", a.i);
                Command::Weights
            }
            Sub::Eigen(a) => {
                m.insert("action".into(), action_name(&a.action));
                insert(&mut m, "q", Some(a.q));
                insert(&mut m, "levi", Some(composition_arg(&a.levi)?));
                insert_json(&mut m, "chars", Some(&a.chars))?;
                insert(&mut m, "lambda", a.lambda.as_ref());
                insert(&mut m, "nu", a.nu.as_ref());
                insert(&mut m, "i", a.i);
                insert_json(&mut m, "eta", a.eta.as_deref())?;
                Command::Eigen
            }
            Sub::Verify(a) => {
                insert(&mut m, "all", Some(a.all));
                if !a.gates.is_empty() {
                    insert(&mut m, "gates", Some(&a.gates));
                }
                insert(&mut m, "max_n", Some(a.max_n));
                insert(&mut m, "max_q", Some(a.max_q));
                Command::Verify
            }
        };
        Ok(JobSpec { command, params: Value::Object(m), scalar_field })
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let spec = match cli.job() {
        Ok(s) => s,
        Err(e) => {
            println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("json"));
            return e.exit_code();
        }
    };
    match &cli.out {
        Some(path) => {
            let mut buf = Vec::new();
            let code = run(&spec, &mut buf);
            if std::fs::write(path, buf).is_err() {
                eprintln!("cannot write {}", path.display());
                return 1;
            }
            code
        }
        None => run(&spec, &mut std::io::stdout().lock()),
    }
}
