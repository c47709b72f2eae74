//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use satake_modp::classify::{self, BlockRep, InductionDatum};
use satake_modp::eigen::{self, ParamPair, SmoothCharacter};
use satake_modp::field::{Field, Scalar};
use satake_modp::hecke::{self, doubling_support_claim, satake_t_to_tau, satake_tau_to_t, Basis, HeckeElement};
use satake_modp::hecke0::{self, DerivationStatus};
use satake_modp::oracle::{self, OracleError};
use satake_modp::poset::FinitePoset;
use satake_modp::root_datum::{fundamental_antidominant_coweight, Coweight, HighestWeight, StandardParabolic};
use satake_modp::weights::{self, LeviWeightClass, WeightClass};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// A weight whose stabilizer is exactly `levi`: constant on blocks, dropping by one between blocks.
fn weight_with_stabilizer(levi: &StandardParabolic, q: u64) -> WeightClass {
    let nb = levi.num_blocks() as i64;
    let nu: Vec<i64> = (1..=levi.rank()).map(|j| nb - 1 - levi.block_of(j) as i64).collect();
    WeightClass::new(HighestWeight(nu), q).unwrap()
}

fn random_antidominant(rng: &mut StdRng, n: usize, radius: i64) -> Coweight {
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-radius..=radius)).collect();
    v.sort();
    Coweight(v)
}

fn random_scalar(rng: &mut StdRng, field: &Field) -> Scalar {
    let coeffs: Vec<i64> = (0..field.degree()).map(|_| rng.gen_range(0..field.characteristic() as i64)).collect();
    field.element(&coeffs).unwrap()
}

fn random_unit(rng: &mut StdRng, field: &Field) -> Scalar {
    loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_element(rng: &mut StdRng, v: &WeightClass, field: &Field, radius: i64) -> HeckeElement {
    let terms: Vec<_> = (0..rng.gen_range(1..=3))
        .map(|_| (random_antidominant(rng, v.rank(), radius), random_scalar(rng, field)))
        .collect();
    HeckeElement::from_terms(v, Basis::T, field, terms).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut checked = 0;
    for n in 2..=4 {
        let levis = StandardParabolic::all(n);
        for _ in 0..200 {
            let q = [2u64, 3, 5][rng.gen_range(0..3)];
            let levi = &levis[rng.gen_range(0..levis.len())];
            let v = weight_with_stabilizer(levi, q);
            let field = Field::prime(weights::prime_of(q).unwrap()).unwrap();
            let x = random_element(&mut rng, &v, &field, 4);
            let back = satake_tau_to_t(&satake_t_to_tau(&x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(back == x, || format!("round trip failed for n={n}, levi={levi}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} elements"))
}

fn criterion_2() -> Outcome {
    let mut cases = 0;
    for (n, q) in [(2usize, 2u64), (2, 3), (2, 5), (3, 2), (3, 3)] {
        for i in 1..n {
            let ok = oracle::check_minuscule_satake(n, q, i).map_err(|e| e.to_string())?;
            ensure(ok, || format!("minuscule gate failed at n={n} q={q} i={i}"))?;
            let counts = oracle::iwasawa_orbit_counts(n, q, i).map_err(|e| e.to_string())?;
            let total: u128 = counts.values().sum();
            ensure(total == oracle::q_multinomial(q, &[i, n - i]), || format!("orbit total at n={n} q={q}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (n, q, i) cases"))
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    for n in 2..=4 {
        for levi in StandardParabolic::all(n) {
            for i in levi.simple_roots() {
                let claim = doubling_support_claim(&levi, i, 4).map_err(|e| e.to_string())?;
                ensure(claim, || format!("support claim fails for M={levi}, i={i}"))?;
                let v = weight_with_stabilizer(&levi, 5);
                let field = Field::prime(5).unwrap();
                let two_lambda = fundamental_antidominant_coweight(n, i).unwrap().scaled(2);
                let x = HeckeElement::basis_element(&v, Basis::T, two_lambda, &field).unwrap();
                let tau = satake_t_to_tau(&x).map_err(|e| e.to_string())?;
                let sum = tau.terms().values().fold(field.zero(), |acc, c| &acc + c);
                ensure(tau.terms().len() == 2 && sum.is_zero(), || {
                    format!("T_2lambda for M={levi}, i={i} expands to {:?}", tau.terms())
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (M, i) cases, zero counterexamples"))
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|first| compositions(n - first).into_iter().map(move |rest| [vec![first], rest].concat()))
        .collect()
}

fn block_options(size: usize, etas: &[SmoothCharacter]) -> Vec<BlockRep> {
    let mut out = Vec::new();
    for eta in etas {
        out.push(BlockRep::character(size, eta.clone()));
        if size > 1 {
            out.push(BlockRep::steinberg(size, eta.clone()));
            out.push(BlockRep::Supersingular { size, label: "π".into(), central_char: eta.clone() });
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let f9 = Field::with_degree(3, 2).unwrap();
    let g = f9.generator();
    let etas = vec![
        SmoothCharacter::new(f9.one(), 0, 3).unwrap(),
        SmoothCharacter::new(g.clone(), 0, 3).unwrap(),
        SmoothCharacter::new(g.pow(2), 1, 3).unwrap(),
    ];
    let mut data = 0usize;
    for n in 1..=5 {
        for comp in compositions(n) {
            let mut families: Vec<Vec<BlockRep>> = vec![vec![]];
            for &size in &comp {
                let opts = block_options(size, &etas);
                families = families
                    .into_iter()
                    .flat_map(|f| opts.iter().map(move |o| [f.clone(), vec![o.clone()]].concat()))
                    .collect();
            }
            for blocks in families {
                let datum = InductionDatum::from_blocks(blocks).map_err(|e| e.to_string())?;
                let poset = classify::constituents(&datum).map_err(|e| e.to_string())?;
                let d = classify::delta(&datum);
                ensure(poset.len() == 1 << d, || format!("{datum}: {} constituents, delta {d}", poset.len()))?;
                let distinct: HashSet<_> = poset.elements().iter().collect();
                ensure(distinct.len() == poset.len(), || format!("{datum}: repeated constituents"))?;
                let pair = classify::param_pair_of_datum(&datum).map_err(|e| e.to_string())?;
                for rep in poset.elements() {
                    ensure(classify::param_pair(rep).map_err(|e| e.to_string())? == pair, || {
                        format!("{datum}: constituent {rep} has a different eigensystem")
                    })?;
                }
                data += 1;
            }
        }
    }
    let one = SmoothCharacter::trivial(&f9, 3).unwrap();
    for (n, expected) in [(2, 2), (3, 4), (4, 8)] {
        let datum = InductionDatum::from_blocks(vec![BlockRep::character(1, one.clone()); n]).unwrap();
        let len = classify::constituents(&datum).map_err(|e| e.to_string())?.len();
        ensure(len == expected, || format!("Ind_B 1 for GL_{n} has length {len}"))?;
    }
    Ok(format!("{data} induction data; Ind_B 1 lengths 2, 4, 8"))
}

/// Down-sets of the Boolean lattice on `k` atoms, by checking every subset.
fn brute_boolean_downsets(k: usize) -> usize {
    let elems = 1usize << k;
    (0u64..1 << elems)
        .filter(|set| {
            (0..elems).all(|b| set >> b & 1 == 0 || (0..elems).all(|a| a & b != a || set >> a & 1 == 1))
        })
        .count()
}

fn criterion_5() -> Outcome {
    let f = Field::prime(2).unwrap();
    let one = SmoothCharacter::trivial(&f, 2).unwrap();
    let mut sizes = Vec::new();
    for (n, expected) in [(2usize, 3usize), (3, 6), (4, 20)] {
        let datum = InductionDatum::from_blocks(vec![BlockRep::character(1, one.clone()); n]).unwrap();
        let lattice = classify::submodule_lattice(&datum).map_err(|e| e.to_string())?;
        let brute = brute_boolean_downsets(n - 1);
        let independent = FinitePoset::new(1 << (n - 1), |a, b| a & b == a).count_lower_sets() as usize;
        ensure(
            lattice.lower_set_count as usize == expected
                && lattice.lower_sets().len() == expected
                && brute == expected
                && independent == expected,
            || format!("n={n}: pipeline {} vs brute {brute}", lattice.lower_set_count),
        )?;
        sizes.push(expected.to_string());
    }
    Ok(format!("sizes {}", sizes.join(", ")))
}

fn criterion_6() -> Outcome {
    let field = Field::prime(3).unwrap();
    for zeta in [field.one(), field.from_int(2)] {
        for n in 2..=5 {
            let e = |r: Result<bool, hecke0::Hecke0Error>| r.map_err(|e| e.to_string());
            ensure(e(hecke0::verify_braid_and_rotation(n, &zeta))?, || format!("braid/rotation n={n}"))?;
            ensure(e(hecke0::verify_shift_commutation(n, &zeta))?, || format!("shift commutation n={n}"))?;
            for i in 1..n {
                ensure(e(hecke0::verify_translation_power(n, i, &zeta))?, || format!("translation power n={n} i={i}"))?;
            }
        }
    }
    let mut caps = Vec::new();
    for n in 2..=4 {
        let report = hecke0::derive_pi_invariance(n, n * n, &Field::prime(2).unwrap()).map_err(|e| e.to_string())?;
        ensure(report.status == DerivationStatus::Proved, || format!("derivation for n={n}: {:?}", report.status))?;
        caps.push(format!("{}", report.minimal_sufficient_cap.unwrap_or(0)));
        if n == 2 {
            let expected = ["(S_1Π)^2 v = S_1Π(v − Πv)", "= S_1Πv − S_1v", "= S_1Πv"];
            ensure(report.steps[0].trace == expected, || format!("n=2 trace {:?}", report.steps[0].trace))?;
        }
    }
    Ok(format!("identities for n <= 5; derivations proved for n = 2, 3, 4 (length needed {})", caps.join("/")))
}

fn criterion_7() -> Outcome {
    let mut cases = 0;
    for n in 1..=3 {
        for q in [2u64, 3, 4] {
            let all = WeightClass::enumerate(n, q).map_err(|e| e.to_string())?;
            for levi in StandardParabolic::all(n) {
                let regular: Vec<&WeightClass> =
                    all.iter().filter(|v| weights::is_m_regular(v, &levi).unwrap()).collect();
                let images: BTreeSet<LeviWeightClass> = regular
                    .iter()
                    .map(|v| weights::restrict_to_levi(v, &levi))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                let targets: BTreeSet<LeviWeightClass> =
                    LeviWeightClass::enumerate(&levi, q).map_err(|e| e.to_string())?.into_iter().collect();
                ensure(images.len() == regular.len() && images == targets, || {
                    format!("n={n} q={q} M={levi}: {} regular, {} images, {} targets", regular.len(), images.len(), targets.len())
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (n, q, M) cases"))
}

fn criterion_8() -> Outcome {
    let (mut inv, mut proj) = (0, 0);
    for n in 2..=3 {
        for q in [2u64, 3] {
            let family = oracle::supported_weights(n, q).map_err(|e| e.to_string())?;
            let parabolics = StandardParabolic::all(n);
            for nu in &family {
                for p in &parabolics {
                    let r = oracle::check_invariants_coinvariants(q, nu, p).map_err(|e| e.to_string())?;
                    ensure(r.passed(), || format!("invariants/coinvariants n={n} q={q} nu={nu} P={p}: {r:?}"))?;
                    inv += 1;
                    for l in &parabolics {
                        match oracle::check_regular_projection(q, nu, p, l) {
                            Err(OracleError::NotRegular) => {}
                            Ok(true) => proj += 1,
                            Ok(false) => return Err(format!("projection n={n} q={q} nu={nu} P={p} Q={l}")),
                            Err(e) => return Err(e.to_string()),
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{inv} invariant checks, {proj} projection checks"))
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut triples = 0;
    while triples < 500 {
        let n = rng.gen_range(1..=3);
        let q = [2u64, 3, 4, 5][rng.gen_range(0..4)];
        let p = weights::prime_of(q).unwrap();
        let field = Field::with_degree(p, 2).unwrap();
        let weights_all = WeightClass::enumerate(n, q).unwrap();
        let v = &weights_all[rng.gen_range(0..weights_all.len())];
        let levis = StandardParabolic::all(n);
        let levi = levis[rng.gen_range(0..levis.len())].clone();
        let tame = weights::central_character_exponents(&weights::restrict_to_levi(v, &levi).unwrap());
        let chars = tame
            .iter()
            .map(|t| SmoothCharacter::new(random_unit(&mut rng, &field), *t, q).unwrap())
            .collect();
        let pair = ParamPair::new(levi, chars).unwrap();
        let a = random_element(&mut rng, v, &field, 3);
        let b = random_element(&mut rng, v, &field, 3);
        let ab = hecke::multiply(&a, &b).map_err(|e| e.to_string())?;
        let ev = |x: &HeckeElement| eigen::eval_element(&pair, x).map_err(|e| e.to_string());
        ensure(ev(&ab)? == &ev(&a)? * &ev(&b)?, || format!("eval not multiplicative for {pair}"))?;
        triples += 1;
    }

    let mut cases = 0;
    for n in 2..=3 {
        for q in [2u64, 3, 4] {
            let field = Field::with_degree(weights::prime_of(q).unwrap(), 2).unwrap();
            let units: Vec<Scalar> = field.units().take(3).collect();
            for v in WeightClass::enumerate(n, q).unwrap() {
                for i in 1..n {
                    if v.nu().pairing(i).unwrap() != 0 {
                        continue;
                    }
                    for levi in StandardParabolic::all(n) {
                        if levi.simple_roots().contains(&i) {
                            continue;
                        }
                        let tame = weights::central_character_exponents(&weights::restrict_to_levi(&v, &levi).unwrap());
                        let mut choices: Vec<Vec<Scalar>> = vec![vec![]];
                        for _ in 0..tame.len() {
                            choices = choices
                                .into_iter()
                                .flat_map(|c| units.iter().map(move |u| [c.clone(), vec![u.clone()]].concat()))
                                .collect();
                        }
                        for values in choices {
                            let chars = values
                                .into_iter()
                                .zip(&tame)
                                .map(|(u, t)| SmoothCharacter::new(u, *t, q).unwrap())
                                .collect();
                            let pair = ParamPair::new(levi.clone(), chars).unwrap();
                            let two_lambda = fundamental_antidominant_coweight(n, i).unwrap().scaled(2);
                            let shifted = &two_lambda + &Coweight::simple_coroot(n, i).unwrap();
                            let (x, y) = (eigen::eval_tau(&pair, &two_lambda), eigen::eval_tau(&pair, &shifted));
                            let direct = !x.is_zero() && x != y;
                            let applicable =
                                eigen::change_of_weight_applicable(&v, i, &pair).map_err(|e| e.to_string())?;
                            ensure(direct == applicable, || format!("change of weight at i={i} for {pair}"))?;
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{triples} multiplicativity triples, {cases} change-of-weight cases"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Satake round trip", criterion_1),
        ("minuscule oracle gate", criterion_2),
        ("doubling support claim", criterion_3),
        ("classification counts", criterion_4),
        ("lattice counts", criterion_5),
        ("0-Hecke identities and derivation", criterion_6),
        ("weight bijection", criterion_7),
        ("finite-group brute-force gates", criterion_8),
        ("eigensystem algebra", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}; {secs:.2}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
