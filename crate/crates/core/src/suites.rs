//! Identity suites. Each returns a certificate with one aggregated check per
//! id; randomized samples draw from ChaCha stream `i` of the suite seed, so
//! a failing sample can be replayed from `(seed, i)` alone.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certificate::{Certificate, Check, Verdict};
use crate::ellis::{decompose, rees_matrix};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::gen::random_family;
use crate::group::{FiniteGroup, Group};
use crate::nonstd::lemmas::{tmat_from, tmat_mul};
use crate::nonstd::{h_on_types, oracle, parse, random_expr, u_g, ug_sandwich, EllisClass, Expr, Tower};
use crate::quasihom::{
    check_glcm, check_good, compose_morphisms, derived_exponents, equivalence_witness, morphism_witness, uniqueness_bound, universality_construct, verify_derived,
    Choice, ErrorBudget, Model, QuasiHom,
};
use crate::sl2::{cocycle_h, cocycle_identity_check, grid_cocycle_violation, inverse_sign_lemma, prop53_arithmetic_ledger, random_mat, random_with_pattern, rotation_b, small_grid, CoverElem, Mat2, Mat2Q};

pub const SUITES: [&str; 4] = ["ellis", "quasihom", "sl2", "nonstd"];

#[derive(Clone, Copy, Debug)]
pub struct SuiteOpts {
    pub seed: u64,
    /// `None` uses the suite's default.
    pub samples: Option<usize>,
    pub exec: Exec,
}

impl Default for SuiteOpts {
    fn default() -> Self {
        SuiteOpts { seed: 1, samples: None, exec: Exec::default() }
    }
}

pub fn default_samples(name: &str) -> Option<usize> {
    match name {
        "ellis" => Some(25),
        "quasihom" => Some(50),
        "sl2" => Some(10_000),
        "nonstd" => Some(1_000),
        _ => None,
    }
}

pub fn run_suite(name: &str, opts: SuiteOpts) -> Result<Certificate> {
    let samples = opts.samples.or(default_samples(name)).ok_or_else(|| Error::Unknown(format!("suite `{name}`")))?;
    let mut cert = match name {
        "ellis" => ellis_suite(opts.seed, samples, opts.exec)?,
        "quasihom" => quasihom_suite(opts.seed, samples, opts.exec)?,
        "sl2" => sl2_suite(opts.seed, samples, opts.exec)?,
        "nonstd" => nonstd_suite(opts.seed, samples, opts.exec)?,
        _ => unreachable!("checked above"),
    };
    cert.seed = Some(opts.seed);
    cert.summarize("samples", samples);
    Ok(cert)
}

/// Sample `i` of a suite.
pub fn sample_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Merge per-sample checks into one check per id: failing iff any sample
/// fails; exponents become maxima; the first failure is kept as witness.
fn aggregate(samples: Vec<(usize, Vec<Check>)>) -> Vec<Check> {
    struct Tally {
        verdict: Verdict,
        runs: u64,
        fails: u64,
        exps: BTreeMap<String, u64>,
        first: Option<(usize, Check)>,
    }
    let mut order: Vec<String> = Vec::new();
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    for (i, checks) in samples {
        for c in checks {
            let t = tallies.entry(c.id.clone()).or_insert_with(|| {
                order.push(c.id.clone());
                Tally { verdict: Verdict::Info, runs: 0, fails: 0, exps: BTreeMap::new(), first: None }
            });
            t.runs += 1;
            if c.verdict != Verdict::Info && t.verdict == Verdict::Info {
                t.verdict = Verdict::Pass;
            }
            for (k, v) in &c.exponents {
                let e = t.exps.entry(format!("max_{k}")).or_insert(0);
                *e = (*e).max(*v);
            }
            if !c.passed() {
                t.fails += 1;
                t.verdict = Verdict::Fail;
                if t.first.is_none() {
                    t.first = Some((i, c));
                }
            }
        }
    }
    order
        .into_iter()
        .map(|id| {
            let t = tallies.remove(&id).expect("tallied");
            let mut c = Check { verdict: t.verdict, ..Check::new(&id, true) };
            c.exponents = t.exps;
            c = c.exp("samples", t.runs).exp("failures", t.fails);
            if let Some((i, first)) = t.first {
                c = c.wit("first_failure", serde_json::json!({ "sample": i, "check": first }));
            }
            c
        })
        .collect()
}

// ---------------------------------------------------------------- ellis

/// A Rees matrix semigroup `M(A; I, Λ; P)` with its known decomposition.
#[derive(Clone, Debug)]
pub struct ReesFixture {
    pub name: String,
    pub a: Group,
    pub i: usize,
    pub l: usize,
    pub p: Vec<Vec<usize>>,
}

fn small_groups() -> Vec<(&'static str, Group)> {
    let c = FiniteGroup::cyclic;
    vec![
        ("C1", c(1)),
        ("C2", c(2)),
        ("C3", c(3)),
        ("C4", c(4)),
        ("C2xC2", FiniteGroup::direct_product(&c(2), &c(2))),
        ("C5", c(5)),
        ("C6", c(6)),
        ("S3", FiniteGroup::symmetric(3)),
        ("C7", c(7)),
        ("C8", c(8)),
        ("C2xC4", FiniteGroup::direct_product(&c(2), &c(4))),
        ("C2^3", FiniteGroup::direct_product(&FiniteGroup::direct_product(&c(2), &c(2)), &c(2))),
        ("D4", FiniteGroup::dihedral(4)),
        ("Q8", FiniteGroup::quaternion()),
    ]
}

/// `count` fixtures: the first nine sweep every shape `|I|, |Λ| <= 3` over
/// the first groups, the rest are random, all with random sandwich entries.
pub fn rees_fixtures(seed: u64, count: usize) -> Vec<ReesFixture> {
    let groups = small_groups();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let (gname, a) = if k < groups.len() { groups[k].clone() } else { groups.choose(&mut rng).expect("nonempty").clone() };
            let (i, l) = if k < 9 { (k / 3 + 1, k % 3 + 1) } else { (rng.gen_range(1..=3), rng.gen_range(1..=3)) };
            let p: Vec<Vec<usize>> = (0..l).map(|_| (0..i).map(|_| rng.gen_range(0..a.order())).collect()).collect();
            ReesFixture { name: format!("M({gname}; {i}, {l})"), a, i, l, p }
        })
        .collect()
}

pub fn ellis_suite(seed: u64, count: usize, exec: Exec) -> Result<Certificate> {
    let fixtures = rees_fixtures(seed, count);
    let per: Vec<Result<(usize, Vec<Check>)>> = exec.map(fixtures.len(), |k| {
        let fx = &fixtures[k];
        let s = rees_matrix(&fx.a, fx.i, fx.l, &fx.p)?;
        let dec = decompose(&s)?;
        let counts: Vec<usize> = dec.ideals.iter().map(|m| m.idempotents.len()).collect();
        let comps: Vec<&crate::ellis::EllisGroup> = dec.ideals.iter().flat_map(|m| m.groups.iter()).collect();
        let iso_ok = comps.iter().all(|g| fx.a.find_isomorphism(&g.group).is_some());
        let n = comps.len();
        Ok((
            k,
            vec![
                Check::new("ellis-ideal-count", dec.ideals.len() == fx.l).exp("ideals", dec.ideals.len() as u64).wit("fixture", &fx.name),
                Check::new("ellis-idempotents", counts.iter().all(|&c| c == fx.i)).wit("fixture", &fx.name).wit("per_ideal", &counts),
                Check::new("ellis-group-iso", iso_ok).exp("group_order", fx.a.order() as u64).wit("fixture", &fx.name),
                Check::new("ellis-iso-witnesses", dec.isos.len() == n * n).exp("components", n as u64).wit("fixture", &fx.name),
            ],
        ))
    });
    let per: Vec<(usize, Vec<Check>)> = per.into_iter().collect::<Result<_>>()?;
    let mut cert = Certificate::new("suite:ellis");
    cert.summarize("fixtures", fixtures.iter().map(|f| f.name.clone()).collect::<Vec<_>>());
    cert.extend(aggregate(per));
    Ok(cert)
}

// ---------------------------------------------------------------- quasihom

fn quasihom_sample(seed: u64, i: usize) -> Result<Vec<Check>> {
    let mut rng = sample_rng(seed, i);
    let fam = random_family(&mut rng)?;
    let inst = &fam.inst;
    let [f1, f2, f3] = [&fam.models[0], &fam.models[1], &fam.models[2]];
    let mut out = Vec::new();

    // The pipeline's own f is a model of X.
    let f = Model::from_pipeline(inst)?;
    let v = check_glcm(&f.as_quasihom(), &inst.x, &inst.algebra, &f.err)?;
    out.push(Check::new("glcm-self", v.pass).exp("l", v.l.unwrap_or(0) as u64).exp("i", v.i_bound.unwrap_or(0) as u64));

    // Derived exponents of ρ : H1 -> H2 : S2.
    let q = QuasiHom::new(&f1.target, &f2.target, fam.rho.clone(), &f2.err)?;
    let good = check_good(&q, &f1.err)?;
    match (good.n, good.m) {
        (Some(n), Some(m)) => {
            let budget = derived_exponents(&ErrorBudget::base(q.err_exp as u64, n as u64, m as u64), 3);
            let ok = budget.recheck() && verify_derived(&q, &f1.err, &budget, 3)?;
            out.push(Check::new("rem42-derived", ok).exp("e", q.err_exp as u64).exp("n", n as u64).exp("m", m as u64).exp("n_3", budget.get("n_3").unwrap_or(0)));
        }
        _ => out.push(Check::info("rem42-derived").note("rho is not good within the witness bound")),
    }

    // Composition δρ.
    let rho = morphism_witness(f1, f2, &fam.rho)?;
    let delta = morphism_witness(f2, f3, &fam.delta)?;
    let comp = compose_morphisms(f1, f2, f3, &rho, &delta)?;
    out.push(
        Check::new("rem43-k", comp.verified && comp.n_k1 as u64 <= comp.n_k1_formula)
            .exp("k1", comp.k1 as u64)
            .exp("k2", comp.k2 as u64)
            .exp("n_k1", comp.n_k1 as u64)
            .exp("n_k1_formula", comp.n_k1_formula)
            .exp("k", comp.k)
            .wit("k_minimal", comp.k_minimal),
    );

    // Universality for h = f1, uniqueness against the perturbed quotient map.
    let u = universality_construct(inst, f1, Choice::Seeded(seed ^ i as u64))?;
    out.extend(u.checks.iter().cloned());
    let rho_q = morphism_witness(&f, f1, &fam.from_quotient)?;
    out.push(uniqueness_bound(&f, f1, &rho_q, &u.h_tilde, u.l)?);

    // Category laws and the equivalence relation.
    let delta_p = morphism_witness(f2, f3, &fam.delta_p)?;
    let cat = crate::quasihom::category_laws(f2, f3, &fam.rho, &fam.rho_p, &fam.delta, &delta_p)?;
    out.push(
        Check::new("prop410-category", cat.verified)
            .exp("l1", cat.l1 as u64)
            .exp("l2", cat.l2 as u64)
            .exp("k2p", cat.k2p as u64)
            .exp("n_l1", cat.n_l1 as u64)
            .exp("exponent", cat.exponent as u64),
    );
    let t = &f2.err;
    let w = |a: &[usize], b: &[usize]| equivalence_witness(t, a, b);
    let refl = w(&fam.rho, &fam.rho) == Some(0);
    let (ab, ba) = (w(&fam.rho, &fam.rho_p), w(&fam.rho_p, &fam.rho));
    let (bc, ac) = (w(&fam.rho_p, &fam.rho_pp), w(&fam.rho, &fam.rho_pp));
    let trans = matches!((ab, bc, ac), (Some(x), Some(y), Some(z)) if z <= x + y);
    out.push(Check::new("equiv-laws", refl && ab == ba && ab.is_some() && trans).wit("witnesses", [ab, bc, ac]));
    Ok(out)
}

pub fn quasihom_suite(seed: u64, samples: usize, exec: Exec) -> Result<Certificate> {
    let per: Vec<Result<(usize, Vec<Check>)>> = exec.map(samples, |i| quasihom_sample(seed, i).map(|c| (i, c)));
    let per: Vec<(usize, Vec<Check>)> = per.into_iter().collect::<Result<_>>()?;
    let mut cert = Certificate::new("suite:quasihom");
    cert.extend(aggregate(per));
    Ok(cert)
}

// ---------------------------------------------------------------- sl2

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sl2_sample(seed: u64, i: usize) -> Result<Vec<Check>> {
    let mut rng = sample_rng(seed, i);
    let (a, b, c) = (random_mat(&mut rng), random_mat(&mut rng), random_mat(&mut rng));
    let mut out = vec![Check::new("sl2-cocycle-random", cocycle_identity_check(&a, &b, &c))];
    let n = |rng: &mut ChaCha8Rng| BigInt::from(rng.gen_range(-5i64..=5));
    let x = CoverElem::new(a.clone(), n(&mut rng));
    let y = CoverElem::new(b.clone(), n(&mut rng));
    let z = CoverElem::new(c, n(&mut rng));
    let assoc = x.mul(&y)?.mul(&z)? == x.mul(&y.mul(&z)?)?;
    out.push(Check::new("sl2-cover-assoc", assoc));
    let inv = x.mul(&y)?.inv() == y.inv().mul(&x.inv())?;
    out.push(Check::new("sl2-cover-inverse", inv && x.mul(&x.inv())? == CoverElem::identity()));
    let h = cocycle_h(&a, &b);
    out.push(Check::new("sl2-h-range", (-1..=1).contains(&h)).wit("h", h));
    let pat = random_mat(&mut rng).sign_pattern();
    let (p, q) = (random_with_pattern(&mut rng, pat), random_with_pattern(&mut rng, pat));
    let v = inverse_sign_lemma(&p, &q)?;
    out.push(Check::new("sl2-same-sign", v.pass()).wit("pattern", pat).wit("verdict", v));
    Ok(out)
}

pub fn sl2_suite(seed: u64, samples: usize, exec: Exec) -> Result<Certificate> {
    let mut cert = Certificate::new("suite:sl2");
    let bm: Mat2Q = rotation_b();
    let b2 = bm.mul(&bm);
    cert.push(Check::new("sl2-h-bb", cocycle_h(&bm, &bm) == 1).wit("h", cocycle_h(&bm, &bm)));
    cert.push(Check::new("sl2-h-b2b2", cocycle_h(&b2, &b2) == -1).wit("h", cocycle_h(&b2, &b2)));
    let cb = CoverElem::new(bm.clone(), 0);
    let minus_i = Mat2::new(qi(-1), qi(0), qi(0), qi(-1))?;
    cert.push(Check::new("sl2-b-squared", cb.pow(2)? == CoverElem::new(minus_i, 1)));
    cert.push(Check::new("sl2-b-fourth", cb.pow(4)? == CoverElem::new(Mat2::identity(), 1)));
    cert.push(Check::new("sl2-cocycle-bbb", cocycle_identity_check(&bm, &bm, &bm)));
    let ident = CoverElem::<BigRational>::identity();
    cert.push(Check::new("sl2-cover-unit", ident.mul(&cb)? == cb && cb.mul(&ident)? == cb));

    // Exhaustive grid.
    let g = small_grid().len();
    let first = grid_cocycle_violation(exec);
    cert.push(Check::new("sl2-cocycle-grid", first.is_none()).exp("grid", g as u64).exp("triples", (g * g * g) as u64).wit("offending", first));

    let per: Vec<Result<(usize, Vec<Check>)>> = exec.map(samples, |i| sl2_sample(seed, i).map(|c| (i, c)));
    let per: Vec<(usize, Vec<Check>)> = per.into_iter().collect::<Result<_>>()?;
    let mut values = [false; 3];
    for (_, cs) in &per {
        if let Some(h) = cs.iter().find(|c| c.id == "sl2-h-range").and_then(|c| c.witnesses.get("h")).and_then(|v| v.as_i64()) {
            values[(h + 1) as usize] = true;
        }
    }
    let mut agg = aggregate(per);
    for c in agg.iter_mut().filter(|c| c.id == "sl2-h-range") {
        if !values.iter().all(|&v| v) && c.verdict == Verdict::Pass {
            c.verdict = Verdict::Fail;
        }
        c.witnesses.insert("attained".into(), serde_json::json!(values));
    }
    cert.extend(agg);

    let chain = prop53_arithmetic_ledger(14);
    let top = chain.last().map(|s| s.value);
    let alt = (prop53_arithmetic_ledger(10).last().map(|s| s.value), prop53_arithmetic_ledger(0).last().map(|s| s.value));
    cert.push(Check::new("sl2-chain-696", top == Some(696) && alt == (Some(504), Some(24))).exp("x", 696).wit("chain", chain));
    Ok(cert)
}

// ---------------------------------------------------------------- nonstd

#[derive(Clone, Debug, Serialize)]
struct OracleCase {
    sample: usize,
    expr: String,
    tower: i8,
    oracle: i8,
}

/// Rational matrices of determinant 1 with `c` of the given sign.
fn with_c_sign(rng: &mut impl Rng, sign: i8) -> Mat2Q {
    loop {
        let m = random_mat(rng);
        if crate::sl2::sgn(&m.c) == sign {
            return m;
        }
    }
}

fn lemma511(t: &Tower, seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let rot = ug_sandwich(t, &tmat_from(t, &rotation_b()))?;
    out.push(Check::new("nonstd-l511-rotation", rot.class == Some(EllisClass::UG) && rot.formula_matches).wit("leading", &rot.leading).wit("class", rot.class));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (id, sign, want) in [("nonstd-l511-gamma-pos", 1, EllisClass::UG), ("nonstd-l511-gamma-neg", -1, EllisClass::Q1)] {
        let mut bad = None;
        for _ in 0..24 {
            let m = with_c_sign(&mut rng, sign);
            let s = ug_sandwich(t, &tmat_from(t, &m))?;
            if s.class != Some(want) || !s.formula_matches {
                bad = Some(m.to_string());
                break;
            }
        }
        out.push(Check::new(id, bad.is_none()).exp("matrices", 24).wit("class", want).wit("offending", bad));
    }
    let gamma = t.named("gamma")?;
    let bm = [t.int(-1), t.int(0), gamma, t.int(-1)];
    let s = ug_sandwich(t, &bm)?;
    out.push(Check::new("nonstd-l511-infinitesimal", s.class == Some(EllisClass::Q1) && s.formula_matches).wit("leading", &s.leading).wit("class", s.class));
    Ok(out)
}

fn lemma58(t: &Tower, seed: u64) -> Result<Vec<Check>> {
    let a = u_g(t, false)?;
    let a1 = u_g(t, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gs: Vec<Mat2Q> = (0..24).map(|_| random_mat(&mut rng)).chain([rotation_b(), Mat2::identity()]).collect();
    let (mut bad1, mut bad2, mut bad3) = (None, None, None);
    for g in &gs {
        let gm = tmat_from(t, g);
        if bad1.is_none() && h_on_types(t, &gm, &a) != 0 {
            bad1 = Some(g.to_string());
        }
        if bad2.is_none() && h_on_types(t, &a, &gm) != 0 {
            bad2 = Some(g.to_string());
        }
        // h(u, gu) = 0 together with h(u,g) + h(ug,u) = h(u,gu) + h(g,u).
        let ga = tmat_mul(&gm, &a);
        let h_u_gu = h_on_types(t, &a1, &ga);
        let lhs = h_on_types(t, &a1, &gm) as i32 + h_on_types(t, &tmat_mul(&a1, &gm), &a) as i32;
        let rhs = h_u_gu as i32 + h_on_types(t, &gm, &a) as i32;
        if bad3.is_none() && (h_u_gu != 0 || lhs != rhs) {
            bad3 = Some(g.to_string());
        }
    }
    let n = gs.len() as u64;
    Ok(vec![
        Check::new("nonstd-l58-1", bad1.is_none()).exp("matrices", n).wit("offending", bad1),
        Check::new("nonstd-l58-2", bad2.is_none()).exp("matrices", n).wit("offending", bad2),
        Check::new("nonstd-l58-3", bad3.is_none()).exp("matrices", n).wit("offending", bad3),
    ])
}

fn fixed_signs(t: &Tower) -> Result<Check> {
    let cases = [("(- b 1000000)", 1), ("(- (/ 1 b) x)", -1), ("(- (/ y (- 1 x)) 1/7)", -1), ("(- (/ y (- 1 x)) 1/1000000)", -1), ("(- (+ x x) (* 2 x))", 0)];
    let mut bad = Vec::new();
    for (src, want) in cases {
        let got = t.sign(&parse(src)?.to_ratfn(t)?);
        if got != want {
            bad.push((src, got));
        }
    }
    Ok(Check::new("nonstd-fixed-signs", bad.is_empty()).exp("cases", cases.len() as u64).wit("offending", bad))
}

fn relations(t: &Tower) -> Result<Check> {
    let circle = parse("(- (+ (^ (- 1 x) 2) (^ y 2)) 1)")?;
    let circle1 = parse("(- (+ (^ (- 1 x') 2) (^ y' 2)) 1)")?;
    let y2 = parse("(- (^ y 2) (- (* 2 x) (^ x 2)))")?;
    let mut ok = t.relations_hold()?;
    for e in [&circle, &circle1, &y2] {
        ok &= t.sign(&e.to_ratfn(t)?) == 0 && oracle::oracle_sign(t, e)? == Some(0);
    }
    // y > 0 and x, y infinitesimal.
    for src in ["y", "y'", "(- 1/1000000 x)", "(- 1/1000000 y)"] {
        ok &= t.sign(&parse(src)?.to_ratfn(t)?) == 1;
    }
    Ok(Check::new("nonstd-relations", ok))
}

fn decided(t: &Tower, e: &Expr) -> Result<Option<(i8, i8)>> {
    let f = match e.to_ratfn(t) {
        Ok(f) => f,
        Err(Error::DivisionByZero) => return Ok(None),
        Err(err) => return Err(err),
    };
    Ok(oracle::oracle_sign(t, e)?.map(|o| (t.sign(&f), o)))
}

pub fn nonstd_suite(seed: u64, samples: usize, exec: Exec) -> Result<Certificate> {
    let t = Tower::standard();
    let mut cert = Certificate::new("suite:nonstd");
    cert.extend(lemma511(&t, seed)?);
    cert.extend(lemma58(&t, seed)?);
    cert.push(fixed_signs(&t)?);
    cert.push(relations(&t)?);

    // Random expressions against the oracle, until `samples` are decided.
    let mut compared: Vec<(usize, i8, i8, String)> = Vec::new();
    let mut skipped = 0u64;
    let mut next = 0usize;
    while compared.len() < samples && next < 8 * samples.max(1) {
        let batch = (samples - compared.len()).max(16) * 5 / 4;
        let res: Vec<Result<(String, Option<(i8, i8)>)>> = exec.map(batch, |k| {
            let mut rng = sample_rng(seed, next + k);
            let e = random_expr(&mut rng, &t, 3, 3);
            Ok((e.to_string(), decided(&t, &e)?))
        });
        for (k, r) in res.into_iter().enumerate() {
            let (src, d) = r?;
            match d {
                Some((tw, or)) if compared.len() < samples => compared.push((next + k, tw, or, src)),
                Some(_) => {}
                None => skipped += 1,
            }
        }
        next += batch;
    }
    let mismatch: Vec<OracleCase> = compared.iter().filter(|c| c.1 != c.2).map(|c| OracleCase { sample: c.0, expr: c.3.clone(), tower: c.1, oracle: c.2 }).take(5).collect();
    cert.push(
        Check::new("nonstd-oracle", mismatch.is_empty() && compared.len() >= samples)
            .exp("compared", compared.len() as u64)
            .exp("skipped", skipped)
            .wit("mismatches", mismatch),
    );

    // Positivity is closed under + and *.
    let pos: Vec<(usize, crate::nonstd::RatFn, String)> = (0..samples.max(64) * 2)
        .filter_map(|i| {
            let mut rng = sample_rng(seed ^ 0x0c10_5ed, i);
            let e = random_expr(&mut rng, &t, 2, 3);
            let f = e.to_ratfn(&t).ok()?;
            (t.sign(&f) == 1).then(|| (i, f, e.to_string()))
        })
        .take(200)
        .collect();
    let mut bad = None;
    for w in pos.windows(2) {
        let (a, b) = (&w[0].1, &w[1].1);
        if t.sign(&a.add(b)) != 1 || t.sign(&a.mul(b)) != 1 {
            bad = Some((w[0].2.clone(), w[1].2.clone()));
            break;
        }
    }
    cert.push(Check::new("nonstd-order-closure", bad.is_none() && pos.len() > 1).exp("pairs", pos.len().saturating_sub(1) as u64).wit("offending", bad));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_keeps_first_failure() {
        let per = vec![(0, vec![Check::new("a", true).exp("n", 2)]), (1, vec![Check::new("a", false).exp("n", 5)]), (2, vec![Check::new("a", false)])];
        let agg = aggregate(per);
        assert_eq!(agg.len(), 1);
        assert_eq!(agg[0].verdict, Verdict::Fail);
        assert_eq!(agg[0].exponents["max_n"], 5);
        assert_eq!(agg[0].exponents["failures"], 2);
        assert_eq!(agg[0].witnesses["first_failure"]["sample"], 1);
    }

    #[test]
    fn small_runs_pass() {
        for name in SUITES {
            let samples = match name {
                "ellis" => 9,
                "quasihom" => 3,
                "sl2" => 200,
                _ => 60,
            };
            let cert = run_suite(name, SuiteOpts { seed: 5, samples: Some(samples), exec: Exec::default() }).unwrap();
            assert!(cert.all_pass(), "{name}: {:#?}", cert.failures());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", SuiteOpts::default()), Err(Error::Unknown(_))));
    }
}
