//! Quasi-homomorphisms between finite groups: error sets, the model and
//! goodness checkers, the exponent ledger, morphisms with their
//! composition, and the universality constructions over a pipeline
//! instance.
//!
//! Compactness clauses are vacuous for finite targets; they are recorded as
//! automatic passes. Separation clauses quantify over all pairs of subsets,
//! and reduce to pairs of points: a pair `(Y, Z)` violates a separation
//! statement iff some single pair `(y, z) ∈ Y × Z` does.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::GAlgebra;
use crate::certificate::Check;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::Group;
use crate::pipeline::{build_f_tower, PipelineInstance};
use crate::subset::GSubset;

/// Default search bound for minimal witnesses.
pub const WITNESS_BOUND: usize = 8;

/// Pair count above which error sets are sampled.
pub const EXHAUSTIVE_PAIRS: usize = 1_000_000;

/// `(error_r, error_l)` of a map from a magma on `0..n` into `target`.
pub fn error_sets<M>(n: usize, mul: M, target: &Group, map: &[usize]) -> (GSubset, GSubset)
where
    M: Fn(usize, usize) -> usize + Sync + Send,
{
    let t = target.order();
    let (r, l) = Exec::default().fold_reduce(
        n,
        || (FixedBitSet::with_capacity(t), FixedBitSet::with_capacity(t)),
        |(mut r, mut l), x| {
            let fx_inv = target.inv(map[x]);
            for y in 0..n {
                let fy_inv = target.inv(map[y]);
                let fxy = map[mul(x, y)];
                r.insert(target.mul(target.mul(fy_inv, fx_inv), fxy));
                l.insert(target.mul(target.mul(fxy, fy_inv), fx_inv));
            }
            (r, l)
        },
        |(mut r1, mut l1), (r2, l2)| {
            r1.union_with(&r2);
            l1.union_with(&l2);
            (r1, l1)
        },
    );
    let to_set = |b: FixedBitSet| GSubset::from_predicate(target, |i| b.contains(i));
    (to_set(r), to_set(l))
}

fn sampled_error_sets(n: usize, mul: impl Fn(usize, usize) -> usize, target: &Group, map: &[usize], samples: usize, seed: u64) -> (GSubset, GSubset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = GSubset::empty(target);
    let mut l = GSubset::empty(target);
    for _ in 0..samples {
        let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let (fx_inv, fy_inv, fxy) = (target.inv(map[x]), target.inv(map[y]), map[mul(x, y)]);
        r.insert(target.mul(target.mul(fy_inv, fx_inv), fxy));
        l.insert(target.mul(target.mul(fxy, fy_inv), fx_inv));
    }
    (r, l)
}

/// `base^0, base^1, ...` up to stabilization; `get(k)` is exact for every
/// `k` because the powers are constant past the stabilization index.
#[derive(Clone, Debug)]
pub struct Powers {
    pows: Vec<GSubset>,
}

impl Powers {
    pub fn new(base: &GSubset) -> Self {
        let mut pows = vec![GSubset::identity(base.group())];
        if base.is_empty() {
            return Powers { pows };
        }
        loop {
            let next = pows.last().expect("nonempty").product(base).expect("same group");
            let done = pows.len() > 1 && next == *pows.last().expect("nonempty");
            if done {
                break;
            }
            pows.push(next);
        }
        Powers { pows }
    }

    pub fn get(&self, k: usize) -> &GSubset {
        &self.pows[k.min(self.pows.len() - 1)]
    }

    /// Index past which the powers are constant.
    pub fn stable_at(&self) -> usize {
        self.pows.len() - 1
    }

    /// Least `k` with `s ⊆ base^k`, if any.
    pub fn level_of(&self, s: &GSubset) -> Option<usize> {
        self.pows.iter().position(|p| s.is_subset(p))
    }
}

/// `f : source -> target : base^err_exp`.
#[derive(Clone, Debug)]
pub struct QuasiHom {
    pub source: Group,
    pub target: Group,
    pub map: Vec<usize>,
    /// Symmetric and conjugation-closed.
    pub base: GSubset,
    pub err_exp: usize,
    /// The error scan was sampled rather than exhaustive.
    pub sampled: bool,
}

impl QuasiHom {
    /// Least exponent `e` with `error_r ∪ error_l ⊆ base^e`.
    pub fn new(source: &Group, target: &Group, map: Vec<usize>, base: &GSubset) -> Result<QuasiHom> {
        if map.len() != source.order() {
            return Err(Error::Precondition("map length differs from source order".into()));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= target.order()) {
            return Err(Error::OutOfRange(v, target.order()));
        }
        if !std::sync::Arc::ptr_eq(base.group(), target) {
            return Err(Error::GroupMismatch);
        }
        if !base.is_symmetric() || !base.is_normal() {
            return Err(Error::BadErrorSet);
        }
        let n = source.order();
        let sampled = n * n > EXHAUSTIVE_PAIRS;
        let (r, l) = if sampled {
            sampled_error_sets(n, |a, b| source.mul(a, b), target, &map, EXHAUSTIVE_PAIRS, 0x5eed)
        } else {
            error_sets(n, |a, b| source.mul(a, b), target, &map)
        };
        let err = r.union(&l);
        let err_exp = Powers::new(base)
            .level_of(&err)
            .ok_or_else(|| Error::Precondition("errors are not contained in any power of the error base".into()))?;
        Ok(QuasiHom { source: source.clone(), target: target.clone(), map, base: base.clone(), err_exp, sampled })
    }

    pub fn errors(&self) -> (GSubset, GSubset) {
        error_sets(self.source.order(), |a, b| self.source.mul(a, b), &self.target, &self.map)
    }

    pub fn image(&self, s: &GSubset) -> GSubset {
        GSubset::from_elems(&self.target, s.iter().map(|a| self.map[a])).expect("in range")
    }

    pub fn preimage(&self, y: &GSubset) -> GSubset {
        GSubset::from_predicate(&self.source, |a| y.contains(self.map[a]))
    }
}

/// Least `m` in `1..=bound` such that every source pair `(a, d*a)` with
/// `d ∈ diffs` satisfies `T^m h(a) ∩ T^m h(d*a) ≠ ∅`, i.e.
/// `h(da) h(a)^-1 ∈ T^(2m)` (with `unit`-fold powers of `T`).
fn separation_exponent(source: &Group, map: &[usize], diffs: &GSubset, tp: &Powers, unit: usize, bound: usize) -> std::result::Result<usize, (usize, usize)> {
    let target = tp.get(0).group().clone();
    let mut worst = None;
    for m in 1..=bound {
        let t2m = tp.get(2 * m * unit);
        let bad = (0..source.order()).find_map(|a| {
            diffs.iter().map(|d| source.mul(d, a)).find(|&b| !t2m.contains(target.mul(map[b], target.inv(map[a])))).map(|b| (a, b))
        });
        match bad {
            None => return Ok(m),
            Some(p) => worst = Some(p),
        }
    }
    Err(worst.expect("bound >= 1"))
}

/// Outcome of the model checker.
#[derive(Clone, Debug, Serialize)]
pub struct GlcmVerdict {
    /// `error_r ∪ error_l ⊆ C`.
    pub error_set_ok: bool,
    /// Least `i` with `f^-1[target] ⊆ X^i`; covers every preimage.
    pub i_bound: Option<usize>,
    /// Images of the `X^i` are finite, hence relatively compact.
    pub images_auto_pass: bool,
    /// Least `l <= 8` witnessing separation by a block-union.
    pub l: Option<usize>,
    /// Counterexample pair `(y, z)` for `l = 8` when no `l` works.
    pub counterexample: Option<(usize, usize)>,
    pub pass: bool,
}

/// Check that `f` is a model of `X` with error set `C`, separation being by
/// block-unions of `alg`.
pub fn check_glcm(f: &QuasiHom, x: &GSubset, alg: &GAlgebra, c: &GSubset) -> Result<GlcmVerdict> {
    if !c.is_symmetric() || !c.is_normal() {
        return Err(Error::BadErrorSet);
    }
    let (r, l) = f.errors();
    let error_set_ok = r.union(&l).is_subset(c);
    let src = GSubset::full(&f.source);
    let mut acc = GSubset::identity(&f.source);
    let mut i_bound = None;
    for i in 0..=f.source.order() {
        if src.is_subset(&acc) {
            i_bound = Some(i);
            break;
        }
        acc = acc.product(x)?;
    }
    // Linked pairs: both fibres meet a common atom.
    let cp = Powers::new(c);
    let mut linked: Vec<(usize, usize)> = Vec::new();
    for a in alg.atoms() {
        let mut vals: Vec<usize> = a.iter().map(|g| f.map[g]).collect();
        vals.sort_unstable();
        vals.dedup();
        for &y in &vals {
            for &z in &vals {
                if y != z {
                    linked.push((y, z));
                }
            }
        }
    }
    linked.sort_unstable();
    linked.dedup();
    let t = &f.target;
    let fails = |lv: usize| linked.iter().copied().find(|&(y, z)| !cp.get(2 * lv).contains(t.mul(z, t.inv(y))));
    let l_found = (1..=WITNESS_BOUND).find(|&lv| fails(lv).is_none());
    let counterexample = if l_found.is_none() { fails(WITNESS_BOUND) } else { None };
    let pass = error_set_ok && i_bound.is_some() && l_found.is_some();
    Ok(GlcmVerdict { error_set_ok, i_bound, images_auto_pass: true, l: l_found, counterexample, pass })
}

/// Witnesses for goodness of `h : H -> L : T` with respect to `(H, S)`.
#[derive(Clone, Debug, Serialize)]
pub struct GoodVerdict {
    pub preimages_auto_pass: bool,
    pub images_auto_pass: bool,
    /// Least `n` with `h[S] ⊆ T^n`.
    pub n: Option<usize>,
    /// Least `m` for the separation item.
    pub m: Option<usize>,
    /// A pair `(a, b)` with `Sa ∩ Sb ≠ ∅` whose images are `T^bound`-apart.
    pub counterexample: Option<(usize, usize)>,
}

impl GoodVerdict {
    pub fn pass(&self) -> bool {
        self.n.is_some() && self.m.is_some()
    }
}

/// Goodness of `h` for `(H, S)`, with exponents in units of `h.base`.
pub fn check_good(h: &QuasiHom, s: &GSubset) -> Result<GoodVerdict> {
    check_good_units(h, s, 1, WITNESS_BOUND)
}

/// As [`check_good`], with `T` replaced by `T^unit`.
pub fn check_good_units(h: &QuasiHom, s: &GSubset, unit: usize, bound: usize) -> Result<GoodVerdict> {
    if !s.is_symmetric() || !s.is_normal() {
        return Err(Error::BadErrorSet);
    }
    let tp = Powers::new(&h.base);
    let hs = h.image(s);
    let n = (1..=bound).find(|&n| hs.is_subset(tp.get(n * unit)));
    let diffs = s.inverse_set().product(s)?;
    let (m, counterexample) = match separation_exponent(&h.source, &h.map, &diffs, &tp, unit, bound) {
        Ok(m) => (Some(m), None),
        Err(p) => (None, Some(p)),
    };
    Ok(GoodVerdict { preimages_auto_pass: true, images_auto_pass: true, n, m, counterexample })
}

/// One derived exponent with the identity that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub value: u64,
    pub identity: &'static str,
    pub inputs: BTreeMap<&'static str, u64>,
}

/// Symbolic exponents threaded through the morphism arithmetic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ErrorBudget {
    pub entries: BTreeMap<String, LedgerEntry>,
}

impl ErrorBudget {
    pub fn base(e: u64, n: u64, m: u64) -> Self {
        let mut b = ErrorBudget::default();
        b.set("e", e, "error exponent", &[]);
        b.set("n", n, "h[S] ⊆ T^n", &[]);
        b.set("m", m, "separation witness", &[]);
        b
    }

    pub fn set(&mut self, key: &str, value: u64, identity: &'static str, inputs: &[(&'static str, u64)]) {
        self.entries.insert(key.to_string(), LedgerEntry { value, identity, inputs: inputs.iter().copied().collect() });
    }

    pub fn get(&self, key: &str) -> Option<u64> {
        self.entries.get(key).map(|e| e.value)
    }

    /// Recompute every entry from its recorded inputs.
    pub fn recheck(&self) -> bool {
        self.entries.values().all(|e| {
            let i = |k: &str| e.inputs.get(k).copied().unwrap_or(0);
            match e.identity {
                "n_m = m*n + (m-1)*e" => e.value == i("m") * i("n") + (i("m") - 1) * i("e"),
                "n_0 = e" => e.value == i("e"),
                "k_1 = 0" => e.value == 0,
                "k_j = n_(j-1) + e" => e.value == i("n_prev") + i("e"),
                "m_j = k_j + m" => e.value == i("k_j") + i("m"),
                "k = 4*k2 + k2*n_k1" => e.value == 4 * i("k2") + i("k2") * i("n_k1"),
                "n = 4*max(m2, k + 12*(4l+1))" => e.value == 4 * i("m2").max(i("k") + 12 * (4 * i("l") + 1)),
                "k2'*n_l1 + l2 + k2'" => e.value == i("k2p") * i("n_l1") + i("l2") + i("k2p"),
                _ => true,
            }
        })
    }
}

/// `n_m`: `h[S^m] ⊆ T^(n_m)`, by induction from `h[S] ⊆ T^n` and the error
/// exponent `e`.
pub fn n_of(n: u64, e: u64, m: u64) -> u64 {
    if m == 0 {
        e
    } else {
        m * n + (m - 1) * e
    }
}

/// `k_j`: `h[S^(j-1) h^-1[Y]] ⊆ T^(k_j) Y`.
pub fn k_of(n: u64, e: u64, j: u64) -> u64 {
    if j <= 1 {
        0
    } else {
        n_of(n, e, j - 1) + e
    }
}

/// Fill `n_1..n_upto`, `k_1..k_upto`, `m_1..m_upto` from `e`, `n`, `m`.
pub fn derived_exponents(budget: &ErrorBudget, upto: u64) -> ErrorBudget {
    let mut b = budget.clone();
    let e = b.get("e").unwrap_or(0);
    let n = b.get("n").unwrap_or(0);
    let m = b.get("m").unwrap_or(0);
    b.set("n_0", e, "n_0 = e", &[("e", e)]);
    for j in 1..=upto {
        b.set(&format!("n_{j}"), n_of(n, e, j), "n_m = m*n + (m-1)*e", &[("m", j), ("n", n), ("e", e)]);
        let kj = k_of(n, e, j);
        if j == 1 {
            b.set("k_1", 0, "k_1 = 0", &[]);
        } else {
            b.set(&format!("k_{j}"), kj, "k_j = n_(j-1) + e", &[("n_prev", n_of(n, e, j - 1)), ("e", e)]);
        }
        b.set(&format!("m_{j}"), kj + m, "m_j = k_j + m", &[("k_j", kj), ("m", m)]);
    }
    b
}

/// Exact check of the derived exponents of a good quasi-homomorphism:
/// `h[S^j] ⊆ T^(n_j)` and the separation statement with `S^j` at
/// `T^(m_j)`, for `j = 1..=upto`.
pub fn verify_derived(h: &QuasiHom, s: &GSubset, budget: &ErrorBudget, upto: u64) -> Result<bool> {
    let tp = Powers::new(&h.base);
    let sp = Powers::new(s);
    for j in 1..=upto {
        let nj = budget.get(&format!("n_{j}")).ok_or_else(|| Error::MissingWitness(format!("n_{j}")))? as usize;
        if !h.image(sp.get(j as usize)).is_subset(tp.get(nj)) {
            return Ok(false);
        }
        let mj = budget.get(&format!("m_{j}")).ok_or_else(|| Error::MissingWitness(format!("m_{j}")))? as usize;
        let diffs = sp.get(2 * j as usize);
        let t2m = tp.get(2 * mj);
        let t = &h.target;
        let ok = (0..h.source.order()).all(|a| diffs.iter().all(|d| t2m.contains(t.mul(h.map[h.source.mul(d, a)], t.inv(h.map[a])))));
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A model `f : G -> H : S`.
#[derive(Clone, Debug)]
pub struct Model {
    pub group: Group,
    pub target: Group,
    pub map: Vec<usize>,
    pub err: GSubset,
}

impl Model {
    pub fn new(group: &Group, target: &Group, map: Vec<usize>, err: &GSubset) -> Result<Model> {
        let q = QuasiHom::new(group, target, map, err)?;
        if q.err_exp > 1 {
            return Err(Error::NotMorphism("errors exceed the error set".into()));
        }
        Ok(Model { group: group.clone(), target: target.clone(), map: q.map, err: err.clone() })
    }

    /// The model of a pipeline instance with error set `C`.
    pub fn from_pipeline(inst: &PipelineInstance) -> Result<Model> {
        let tower = build_f_tower(inst)?;
        Model::new(&inst.group, inst.quotient(), inst.f_map(), &tower.c)
    }

    pub fn as_quasihom(&self) -> QuasiHom {
        QuasiHom::new(&self.group, &self.target, self.map.clone(), &self.err).expect("validated")
    }
}

/// `ρ ∈ Mor(f, h)` with witness `k` and goodness witnesses in units of
/// `T^k` (`T` the error set of `h`).
#[derive(Clone, Debug, Serialize)]
pub struct Morphism {
    pub map: Vec<usize>,
    pub k: usize,
    pub n: usize,
    pub m: usize,
}

fn contains_k(tp: &Powers, tgt: &Group, x: usize, y: usize, k: usize) -> bool {
    // x ∈ y T^k
    tp.get(k).contains(tgt.mul(tgt.inv(y), x))
}

/// Do the two containments defining a morphism hold with exponent `k`?
pub fn is_morphism_k(f: &Model, h: &Model, rho: &[usize], k: usize) -> bool {
    let tp = Powers::new(&h.err);
    let (r, l) = error_sets(f.target.order(), |a, b| f.target.mul(a, b), &h.target, rho);
    r.union(&l).is_subset(tp.get(k)) && (0..f.group.order()).all(|g| contains_k(&tp, &h.target, rho[f.map[g]], h.map[g], k))
}

/// Least `k` making `rho` a morphism `f -> h`, with goodness witnesses.
pub fn morphism_witness(f: &Model, h: &Model, rho: &[usize]) -> Result<Morphism> {
    if rho.len() != f.target.order() || rho.iter().any(|&v| v >= h.target.order()) {
        return Err(Error::NotMorphism("map shape".into()));
    }
    let tp = Powers::new(&h.err);
    for k in 0..=tp.stable_at().max(1) {
        if !is_morphism_k(f, h, rho, k) {
            continue;
        }
        let q = QuasiHom { source: f.target.clone(), target: h.target.clone(), map: rho.to_vec(), base: h.err.clone(), err_exp: k, sampled: false };
        let good = check_good_units(&q, &f.err, k.max(1), WITNESS_BOUND)?;
        if k == 0 && !good.pass() {
            // T^0 = {e} forces exact factorization; try a larger k.
            continue;
        }
        if let (Some(n), Some(m)) = (good.n, good.m) {
            return Ok(Morphism { map: rho.to_vec(), k, n, m });
        }
    }
    Err(Error::NotMorphism("no exponent k makes the map a good morphism".into()))
}

/// Least `j` with `rho[S^a] ⊆ (T^k)^j`, i.e. `n_a` of the good
/// quasi-homomorphism `rho : H -> L : T^k`.
pub fn n_scan(rho: &[usize], s: &GSubset, a: usize, t: &GSubset, k: usize) -> Option<usize> {
    let sp = Powers::new(s);
    let tp = Powers::new(t);
    let img = GSubset::from_elems(t.group(), sp.get(a).iter().map(|x| rho[x])).expect("in range");
    if k == 0 {
        return img.is_subset(tp.get(0)).then_some(0);
    }
    (0..=tp.stable_at() + 1).find(|&j| img.is_subset(tp.get(j * k)))
}

/// Result of composing two morphisms.
#[derive(Clone, Debug, Serialize)]
pub struct Composite {
    pub map: Vec<usize>,
    pub k1: usize,
    pub k2: usize,
    /// `n_{k1}` of `δ : H_2 -> H_3 : S_3^(k2)`, least by scan.
    pub n_k1: usize,
    /// `n_{k1}` from the ledger identity.
    pub n_k1_formula: u64,
    pub k: u64,
    pub k_minimal: Option<usize>,
    pub verified: bool,
}

/// `δρ ∈ Mor(f1, f3)` with `k = 4 k2 + k2 n_{k1}`, verified exactly.
pub fn compose_morphisms(f1: &Model, f2: &Model, f3: &Model, rho: &Morphism, delta: &Morphism) -> Result<Composite> {
    if !is_morphism_k(f1, f2, &rho.map, rho.k) || !is_morphism_k(f2, f3, &delta.map, delta.k) {
        return Err(Error::NotMorphism("input witnesses fail".into()));
    }
    let map: Vec<usize> = rho.map.iter().map(|&p| delta.map[p]).collect();
    let n_k1 = n_scan(&delta.map, &f2.err, rho.k, &f3.err, delta.k).ok_or_else(|| Error::MissingWitness("n_k1".into()))?;
    let n_k1_formula = n_of(delta.n as u64, 1, rho.k as u64);
    let (k1, k2) = (rho.k, delta.k);
    let k = 4 * k2 as u64 + k2 as u64 * n_k1 as u64;
    let verified = is_morphism_k(f1, f3, &map, k as usize);
    let tp = Powers::new(&f3.err);
    let k_minimal = (0..=tp.stable_at()).find(|&j| is_morphism_k(f1, f3, &map, j));
    Ok(Composite { map, k1, k2, n_k1, n_k1_formula, k, k_minimal, verified })
}

/// Choice rule for the "arbitrary" picks of the universality construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Choice {
    Least,
    Seeded(u64),
}

/// The maps `h_M`, `h*`, `h̄`, `h̃` and their ledger checks.
#[derive(Clone, Debug, Serialize)]
pub struct Universality {
    pub l: usize,
    /// `4l + 1`.
    pub unit: usize,
    pub h_m: Vec<usize>,
    pub h_star: Vec<usize>,
    pub h_bar: Vec<usize>,
    pub h_tilde: Vec<usize>,
    pub checks: Vec<Check>,
    /// `h̃` as a morphism `f -> h`.
    pub morphism: Option<Morphism>,
}

impl Universality {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

fn pick(cands: &[usize], choice: Choice, salt: u64) -> usize {
    match choice {
        Choice::Least => *cands.iter().min().expect("nonempty"),
        Choice::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
            *cands.iter().choose(&mut rng).expect("nonempty")
        }
    }
}

/// Every `(x, y)` pair in `lhs ∈ rhs S^k` form, reporting the first miss.
fn within(tp: &Powers, tgt: &Group, pairs: impl Iterator<Item = (usize, usize)>, k: usize) -> Option<(usize, usize)> {
    let sk = tp.get(k);
    pairs.into_iter().find(|&(x, y)| !sk.contains(tgt.mul(tgt.inv(y), x)))
}

fn error_check(id: &str, n: usize, mul: impl Fn(usize, usize) -> usize + Sync + Send, tgt: &Group, map: &[usize], tp: &Powers, k: usize, unit: usize) -> Check {
    let (r, l) = error_sets(n, mul, tgt, map);
    let e = r.union(&l);
    let bad = e.difference(tp.get(k)).to_vec();
    Check::new(id, bad.is_empty()).exp("unit_multiple", (k / unit) as u64).exp("s_exponent", k as u64).wit("offending", bad)
}

/// Finite form of the universality construction: from the model `h` of the
/// same `X` (separation by the instance algebra), build `h̃ ∈ Mor(f, h)` and
/// check every ledger containment with `s = 4l + 1`.
pub fn universality_construct(inst: &PipelineInstance, h: &Model, choice: Choice) -> Result<Universality> {
    if !std::sync::Arc::ptr_eq(&h.group, &inst.group) {
        return Err(Error::GroupMismatch);
    }
    let hq = h.as_quasihom();
    let verdict = check_glcm(&hq, &inst.x, &inst.algebra, &h.err)?;
    if !verdict.pass {
        return Err(Error::MissingWitness("h has no separation witness l <= 8".into()));
    }
    let l = verdict.l.expect("pass");
    let s = 4 * l + 1;
    let tgt = &h.target;
    let tp = Powers::new(&h.err);
    let alg = &inst.algebra;
    let semi = &inst.semigroup;
    let g = &inst.group;
    let q = inst.quotient();

    let h_m: Vec<usize> = (0..alg.num_atoms())
        .map(|i| {
            let cands: Vec<usize> = alg.atom(i).iter().map(|a| h.map[a]).collect();
            pick(&cands, choice, i as u64)
        })
        .collect();
    let h_star: Vec<usize> = (0..g.order()).map(|a| h_m[alg.atom_of(a)]).collect();
    let h_bar = h_m.clone();
    let h_tilde: Vec<usize> = (0..q.order())
        .map(|c| {
            let cands: Vec<usize> = inst.pi_inverse(&GSubset::singleton(q, c)).into_iter().map(|p| h_bar[p]).collect();
            pick(&cands, choice, (1u64 << 32) + c as u64)
        })
        .collect();

    let mut checks = Vec::new();
    checks.push(error_check("univ-hstar-error", g.order(), |a, b| g.mul(a, b), tgt, &h_star, &tp, s, s));
    checks.push(error_check("univ-hbar-error", semi.order(), |a, b| semi.op(a, b), tgt, &h_bar, &tp, s, s));

    let miss = within(&tp, tgt, (0..g.order()).map(|x| (h_bar[inst.stone.embed(x)], h.map[x])), 2 * l);
    checks.push(Check::new("univ-hbar-extends", miss.is_none()).exp("s_exponent", 2 * l as u64).wit("offending", miss));

    let miss = within(&tp, tgt, (0..g.order()).map(|x| (h_bar[inst.big_f(x)], h.map[x])), 4 * s);
    checks.push(Check::new("univ-hbar-ugu", miss.is_none()).exp("unit_multiple", 4).exp("s_exponent", 4 * s as u64).wit("offending", miss));

    // Claim 1.
    let miss = within(&tp, tgt, (0..g.order()).map(|a| (h_star[g.inv(a)], tgt.inv(h_star[a]))), 2 * s);
    checks.push(Check::new("univ-claim1-inverse", miss.is_none()).exp("unit_multiple", 2).wit("offending", miss));
    let e = tgt.identity();
    let same_atom = alg.atoms().iter().flat_map(|at| at.iter().flat_map(move |a| at.iter().map(move |b| (a, b))));
    let miss = within(&tp, tgt, same_atom.map(|(a, b)| (h_star[g.mul(a, g.inv(b))], e)), 3 * s);
    checks.push(Check::new("univ-claim1-equiv", miss.is_none()).exp("unit_multiple", 3).wit("offending", miss));
    let tower = build_f_tower(inst)?;
    let mut fn_bad = None;
    for n in 1..=10usize {
        let k = (4 * n - 1) * s;
        if let Some(a) = tower.f[n].iter().find(|&a| !tp.get(k).contains(h_star[a])) {
            fn_bad = Some((n, a));
            break;
        }
    }
    checks.push(Check::new("univ-claim1-fn", fn_bad.is_none()).exp("n_max", 10).wit("offending", fn_bad));

    // Claim 2 and the properties of h̃.
    let comp = inst.comp();
    let miss = within(&tp, tgt, comp.elems.iter().map(|&p| (h_tilde[inst.pi(p)], h_bar[p])), 12 * s);
    checks.push(Check::new("univ-claim2", miss.is_none()).exp("unit_multiple", 12).exp("s_exponent", 12 * s as u64).wit("offending", miss));
    checks.push(error_check("univ-htilde-error", q.order(), |a, b| q.mul(a, b), tgt, &h_tilde, &tp, 37 * s, s));
    let fvals = inst.f_map();
    let miss = within(&tp, tgt, (0..g.order()).map(|x| (h_tilde[fvals[x]], h.map[x])), 16 * s);
    checks.push(Check::new("univ-htilde-f", miss.is_none()).exp("unit_multiple", 16).exp("s_exponent", 16 * s as u64).wit("offending", miss));
    let bad: Vec<usize> = tower.c.iter().filter(|&c| !tp.get(51 * s).contains(h_tilde[c])).collect();
    checks.push(Check::new("univ-htilde-c", bad.is_empty()).exp("unit_multiple", 51).wit("offending", bad));

    // Separation for h̃ with m = 56s + 2l: pairs (p, cp), c ∈ C^-1 C.
    let m = 56 * s + 2 * l;
    let diffs = tower.c.inverse_set().product(&tower.c)?;
    let s2m = tp.get(2 * m);
    let sep_bad = (0..q.order()).find_map(|p| {
        diffs.iter().map(|d| q.mul(d, p)).find(|&r| !s2m.contains(tgt.mul(h_tilde[r], tgt.inv(h_tilde[p])))).map(|r| (p, r))
    });
    checks.push(Check::new("univ-sep-m", sep_bad.is_none()).exp("m", m as u64).wit("offending", sep_bad));

    let f_model = Model::from_pipeline(inst)?;
    let morphism = morphism_witness(&f_model, h, &h_tilde).ok();
    let k_ok = is_morphism_k(&f_model, h, &h_tilde, 37 * s);
    checks.push(
        Check::new("univ-morphism", k_ok && morphism.is_some())
            .exp("k_bound", 37 * s as u64)
            .wit("k_minimal", morphism.as_ref().map(|m| m.k)),
    );
    Ok(Universality { l, unit: s, h_m, h_star, h_bar, h_tilde, checks, morphism })
}

/// Least `m` such that `S^m Y ∩ S^m Z = ∅` forces
/// `C^2 ρ^-1[Y] ∩ C^2 ρ^-1[Z] = ∅`, in units of `S`.
pub fn m2_scan(f: &Model, h: &Model, rho: &[usize]) -> Option<usize> {
    let q = &f.target;
    let c2 = f.err.product(&f.err).ok()?;
    let diffs = c2.inverse_set().product(&c2).ok()?;
    let tp = Powers::new(&h.err);
    let tgt = &h.target;
    (1..=tp.stable_at() + 1).find(|&m| {
        let s2m = tp.get(2 * m);
        (0..q.order()).all(|p| diffs.iter().all(|d| s2m.contains(tgt.mul(rho[q.mul(d, p)], tgt.inv(rho[p])))))
    })
}

/// Approximate uniqueness: `ρ(p) ∈ h̃(p) S^n` with
/// `n = 4 max(m2, k + 12(4l + 1))`.
pub fn uniqueness_bound(f: &Model, h: &Model, rho: &Morphism, h_tilde: &[usize], l: usize) -> Result<Check> {
    let m2 = m2_scan(f, h, &rho.map).ok_or_else(|| Error::MissingWitness("m2".into()))?;
    let n = 4 * m2.max(rho.k + 12 * (4 * l + 1));
    let tp = Powers::new(&h.err);
    let tgt = &h.target;
    let miss = within(&tp, tgt, (0..f.target.order()).map(|p| (rho.map[p], h_tilde[p])), n);
    let needed = (0..=tp.stable_at()).find(|&j| within(&tp, tgt, (0..f.target.order()).map(|p| (rho.map[p], h_tilde[p])), j).is_none());
    Ok(Check::new("univ-uniqueness-n", miss.is_none())
        .exp("n", n as u64)
        .exp("m2", m2 as u64)
        .exp("k", rho.k as u64)
        .exp("l", l as u64)
        .wit("n_needed", needed)
        .wit("offending", miss))
}

/// Least `l` with `ρ'(p) ∈ ρ(p) T^l` for all `p`.
pub fn equivalence_witness(t: &GSubset, rho: &[usize], rho_p: &[usize]) -> Option<usize> {
    let tp = Powers::new(t);
    let tgt = t.group();
    (0..=tp.stable_at()).find(|&l| within(&tp, tgt, rho_p.iter().copied().zip(rho.iter().copied()), l).is_none())
}

/// Outcome of the category check.
#[derive(Clone, Debug, Serialize)]
pub struct CategoryVerdict {
    pub l1: usize,
    pub l2: usize,
    pub k2p: usize,
    pub n_l1: usize,
    pub exponent: usize,
    pub verified: bool,
}

/// `ρ2 ρ1 ~ ρ2' ρ1'` with exponent `k2' n_{l1} + l2 + k2'`.
pub fn category_laws(f2: &Model, f3: &Model, rho1: &[usize], rho1_p: &[usize], rho2: &[usize], rho2_p: &Morphism) -> Result<CategoryVerdict> {
    let l1 = equivalence_witness(&f2.err, rho1, rho1_p).ok_or_else(|| Error::MissingWitness("l1".into()))?;
    let l2 = equivalence_witness(&f3.err, rho2, &rho2_p.map).ok_or_else(|| Error::MissingWitness("l2".into()))?;
    let k2p = rho2_p.k;
    let n_l1 = n_scan(&rho2_p.map, &f2.err, l1, &f3.err, k2p).ok_or_else(|| Error::MissingWitness("n_l1".into()))?;
    let exponent = k2p * n_l1 + l2 + k2p;
    let lhs: Vec<usize> = rho1.iter().map(|&p| rho2[p]).collect();
    let rhs: Vec<usize> = rho1_p.iter().map(|&p| rho2_p.map[p]).collect();
    let tp = Powers::new(&f3.err);
    let verified = within(&tp, &f3.target, rhs.iter().copied().zip(lhs.iter().copied()), exponent).is_none();
    Ok(CategoryVerdict { l1, l2, k2p, n_l1, exponent, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn identity_is_exact() {
        let g = FiniteGroup::cyclic(6);
        let e = GSubset::identity(&g);
        let q = QuasiHom::new(&g, &g, (0..6).collect(), &e).unwrap();
        assert_eq!(q.err_exp, 0);
        let good = check_good(&q, &GSubset::from_elems(&g, [0, 3]).unwrap()).unwrap();
        // h[S] = {0,3} is not inside T^n = {0}.
        assert_eq!(good.n, None);
        let v = check_good(&q, &e).unwrap();
        assert_eq!((v.n, v.m), (Some(1), Some(1)));
    }

    #[test]
    fn constant_map_passes_separation_vacuously() {
        let g = FiniteGroup::symmetric(3);
        let e = GSubset::identity(&g);
        let q = QuasiHom::new(&g, &g, vec![g.identity(); 6], &e).unwrap();
        let s = GSubset::from_predicate(&g, |x| g.element_order(x) <= 2);
        let v = check_good(&q, &s).unwrap();
        assert_eq!(v.m, Some(1));
    }

    #[test]
    fn ledger_identities() {
        let b = derived_exponents(&ErrorBudget::base(1, 2, 1), 3);
        assert_eq!(b.get("n_3"), Some(8));
        assert_eq!(b.get("n_1"), Some(2));
        assert_eq!(b.get("k_2"), Some(3));
        assert_eq!(b.get("m_2"), Some(4));
        assert!(b.recheck());
        let hom = derived_exponents(&ErrorBudget::base(0, 3, 1), 4);
        assert_eq!(hom.get("n_4"), Some(12));
    }
}
