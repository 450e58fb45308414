//! The main construction on a finite instance: the carrier `G = <X>`, the
//! d-closed algebra of `X`-powers, its Stone semigroup and Ellis group
//! `u*M`, the sets `F_n`, the error set `C`, the map
//! `f(g) = ugu / H(u*M)`, and a certificate checking every containment.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::algebra::{d_closure_with_budget, generate_algebra_with, stone_semigroup, GAlgebra, StoneSemigroup, Translates, DEFAULT_ATOM_BUDGET};
use crate::certificate::{Certificate, Check};
use crate::ellis::{circle, decompose, tau_closure, EllisDecomposition, EllisGroup, FiniteSemigroup, HausdorffQuotient};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::quasihom::error_sets;
use crate::subset::{covering_number, power_filtration, GSubset};

/// Smallest horizon for which every exponent of the certificate is in range.
pub const MIN_HORIZON: usize = 34;

/// `F_n` is kept for `n <= F_LEVELS`.
pub const F_LEVELS: usize = 14;

/// Largest `l` tried when searching for a separation witness.
pub const MAX_L: usize = 8;

/// Which equivalence defines `F_1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceMode {
    /// `x ≡ y` iff `x` and `y` lie in the same atom of the algebra.
    #[default]
    Atoms,
    /// Atoms of the d-closure of the algebra generated by the two-sided
    /// translates of the `X`-powers alone.
    CoarseAtoms,
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub n_max: usize,
    pub mode: EquivalenceMode,
    /// Additional seeds of the algebra, as subsets of the ambient group.
    pub extra_seeds: Vec<GSubset>,
    pub atom_budget: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { n_max: MIN_HORIZON, mode: EquivalenceMode::Atoms, extra_seeds: Vec::new(), atom_budget: DEFAULT_ATOM_BUDGET }
    }
}

/// A complete instance. The carrier is `<X>`, reindexed densely;
/// `carrier_embed[i]` is the ambient index of carrier element `i`.
#[derive(Clone, Debug)]
pub struct PipelineInstance {
    pub ambient: Group,
    pub carrier_embed: Vec<usize>,
    pub group: Group,
    pub x: GSubset,
    pub n_max: usize,
    pub mode: EquivalenceMode,
    /// `powers[i] = X^(i+1)`.
    pub powers: Vec<GSubset>,
    pub algebra: GAlgebra,
    /// The algebra defining `≡` and separation; equal to `algebra` in
    /// [`EquivalenceMode::Atoms`].
    pub separating: GAlgebra,
    pub stone: StoneSemigroup,
    pub semigroup: FiniteSemigroup,
    pub dec: EllisDecomposition,
}

impl PipelineInstance {
    pub fn build(ambient: &Group, x: &GSubset, cfg: &PipelineConfig) -> Result<PipelineInstance> {
        if cfg.n_max < MIN_HORIZON {
            return Err(Error::Horizon { got: cfg.n_max, need: MIN_HORIZON });
        }
        if !std::sync::Arc::ptr_eq(x.group(), ambient) {
            return Err(Error::GroupMismatch);
        }
        if !x.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let span = x.generated_subgroup();
        let (group, carrier_embed) = ambient.subgroup(&span)?;
        let mut pos = vec![usize::MAX; ambient.order()];
        for (i, &a) in carrier_embed.iter().enumerate() {
            pos[a] = i;
        }
        let restrict = |s: &GSubset| -> Result<GSubset> {
            if !s.is_subset(&span) {
                return Err(Error::Precondition("seed is not contained in the group generated by X".into()));
            }
            GSubset::from_elems(&group, s.iter().map(|a| pos[a]))
        };
        let xc = restrict(x)?;
        let powers = power_filtration(&xc, cfg.n_max)?;

        let mut x_seeds: Vec<GSubset> = Vec::new();
        for p in &powers {
            if !x_seeds.contains(p) {
                x_seeds.push(p.clone());
            }
        }
        let mut seeds = x_seeds.clone();
        for s in &cfg.extra_seeds {
            seeds.push(restrict(s)?);
        }
        let algebra = d_closure_with_budget(&generate_algebra_with(&group, &seeds, Translates::Left)?, cfg.atom_budget)?;
        let separating = match cfg.mode {
            EquivalenceMode::Atoms => algebra.clone(),
            EquivalenceMode::CoarseAtoms => {
                let coarse = d_closure_with_budget(&generate_algebra_with(&group, &x_seeds, Translates::TwoSided)?, cfg.atom_budget)?;
                if !algebra.refines(&coarse) {
                    return Err(Error::Precondition("coarse algebra is not coarser than the atom algebra".into()));
                }
                coarse
            }
        };
        let stone = stone_semigroup(&algebra, &powers)?;
        stone.verify()?;
        let semigroup = FiniteSemigroup::from_stone(&stone);
        let dec = decompose(&semigroup)?;
        if dec.hausdorff.is_none() {
            return Err(Error::NoTags);
        }
        Ok(PipelineInstance { ambient: ambient.clone(), carrier_embed, group, x: xc, n_max: cfg.n_max, mode: cfg.mode, powers, algebra, separating, stone, semigroup, dec })
    }

    pub fn comp(&self) -> &EllisGroup {
        self.dec.chosen()
    }

    pub fn hausdorff(&self) -> &HausdorffQuotient {
        self.dec.hausdorff.as_ref().expect("checked at build")
    }

    pub fn quotient(&self) -> &Group {
        &self.hausdorff().quotient
    }

    pub fn u(&self) -> usize {
        self.comp().u
    }

    pub fn num_atoms(&self) -> usize {
        self.stone.order()
    }

    /// `π(p)` for `p ∈ u*M`.
    pub fn pi(&self, p: usize) -> usize {
        let local = self.comp().local(p).expect("element of u*M");
        self.hausdorff().proj[local]
    }

    /// `π[A ∩ u*M]`.
    pub fn pi_of_atoms(&self, atoms: &FixedBitSet) -> GSubset {
        let mut s = GSubset::empty(self.quotient());
        for p in atoms.ones() {
            if self.comp().contains(p) {
                s.insert(self.pi(p));
            }
        }
        s
    }

    /// `π^-1[S]` as semigroup elements of `u*M`.
    pub fn pi_inverse(&self, s: &GSubset) -> Vec<usize> {
        self.comp().elems.iter().copied().filter(|&p| s.contains(self.pi(p))).collect()
    }

    pub fn u_m(&self) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.num_atoms());
        for &p in &self.comp().elems {
            b.insert(p);
        }
        b
    }

    /// `F(g) = u * g * u`, an element of `u*M`.
    pub fn big_f(&self, g: usize) -> usize {
        let u = self.u();
        let s = &self.semigroup;
        s.op(s.op(u, self.stone.embed(g)), u)
    }

    pub fn f(&self, g: usize) -> usize {
        self.pi(self.big_f(g))
    }

    pub fn f_map(&self) -> Vec<usize> {
        (0..self.group.order()).map(|g| self.f(g)).collect()
    }

    /// `f̂(p) = upu / H(u*M)`.
    pub fn f_hat(&self, p: usize) -> usize {
        let u = self.u();
        let s = &self.semigroup;
        self.pi(s.op(s.op(u, p), u))
    }

    pub fn f_hat_map(&self) -> Vec<usize> {
        (0..self.num_atoms()).map(|p| self.f_hat(p)).collect()
    }

    /// `f^-1[Y]` for `Y` a subset of the quotient.
    pub fn preimage(&self, y: &GSubset) -> GSubset {
        GSubset::from_predicate(&self.group, |g| y.contains(self.f(g)))
    }

    /// `X^n`, with `X^0 = {e}`; computed past the horizon when needed.
    pub fn x_power(&self, n: usize) -> GSubset {
        if n == 0 {
            return GSubset::identity(&self.group);
        }
        if n <= self.powers.len() {
            return self.powers[n - 1].clone();
        }
        let mut acc = self.powers.last().expect("n_max >= 1").clone();
        for _ in self.powers.len()..n {
            let next = acc.product(&self.x).expect("same group");
            if next == acc {
                break;
            }
            acc = next;
        }
        acc
    }

    /// Least `n` with `s ⊆ X^n`. The carrier is `<X>`, so this exists.
    pub fn x_level(&self, s: &GSubset) -> usize {
        let mut n = 0;
        let mut acc = GSubset::identity(&self.group);
        while !s.is_subset(&acc) {
            n += 1;
            acc = if n <= self.powers.len() { self.powers[n - 1].clone() } else { acc.product(&self.x).expect("same group") };
        }
        n
    }

    /// Atoms contained in `X^n` (the finite `S_{X^n}`).
    pub fn level_atoms(&self, n: usize) -> FixedBitSet {
        let xn = self.x_power(n);
        let mut b = FixedBitSet::with_capacity(self.num_atoms());
        for (i, a) in self.algebra.atoms().iter().enumerate() {
            if a.is_subset(&xn) {
                b.insert(i);
            }
        }
        b
    }

    /// `π[cl_tau(π^-1[S])]`, the closure in the quotient topology.
    pub fn quotient_closure(&self, s: &GSubset) -> Result<GSubset> {
        let pre = self.pi_inverse(s);
        let cl = tau_closure(&self.semigroup, self.comp(), &pre)?;
        GSubset::from_elems(self.quotient(), cl.into_iter().map(|p| self.pi(p)))
    }

    /// `U = π[V]` for the minimal τ-open neighbourhood `V` of `u`.
    pub fn neighbourhood_u(&self) -> GSubset {
        let mut s = GSubset::empty(self.quotient());
        for &p in &self.hausdorff().open_nbhd {
            s.insert(self.pi(p));
        }
        s
    }

    /// Group element tags of an atom set, for reports.
    fn atoms_to_vec(b: &FixedBitSet) -> Vec<usize> {
        b.ones().collect()
    }
}

/// The sets `F_n`, `F̃_n` and the error set `C` built from `F̃_base`.
#[derive(Clone, Debug)]
pub struct FTower {
    /// `f[n] = F_n` for `0 <= n <= F_LEVELS` (`F_0 = {e}`).
    pub f: Vec<GSubset>,
    /// `ftilde[n]` = atoms meeting `F_n`.
    pub ftilde: Vec<FixedBitSet>,
    pub base: usize,
    /// Conjugation closure of `π[F̃_base ∩ u*M]` in the quotient.
    pub ftilde_conj: GSubset,
    pub c: GSubset,
}

fn f1_of(alg: &GAlgebra) -> GSubset {
    let g = alg.group();
    let mut s = GSubset::empty(g);
    for a in alg.atoms() {
        let p = a.product(&a.inverse_set()).expect("same group");
        s = s.union(&p);
    }
    s
}

/// The error set from `F̃_base`: `cl(F̃) ∪ cl(F̃)^-1` where `F̃` is the
/// quotient-conjugation closure of `π[F̃_base ∩ u*M]`.
pub fn error_set_from(inst: &PipelineInstance, ftilde_base: &FixedBitSet) -> Result<(GSubset, GSubset)> {
    let conj = inst.pi_of_atoms(ftilde_base).conjugation_closure();
    let cl = inst.quotient_closure(&conj)?;
    let c = cl.union(&cl.inverse_set());
    Ok((conj, c))
}

pub fn build_f_tower(inst: &PipelineInstance) -> Result<FTower> {
    build_f_tower_with_base(inst, 7)
}

pub fn build_f_tower_with_base(inst: &PipelineInstance, base: usize) -> Result<FTower> {
    assert!((1..=F_LEVELS).contains(&base));
    let f1 = f1_of(&inst.separating);
    let mut f = vec![GSubset::identity(&inst.group), f1.clone()];
    for n in 2..=F_LEVELS {
        let next = f[n - 1].product(&f1)?;
        f.push(next);
    }
    let ftilde: Vec<FixedBitSet> = f
        .iter()
        .map(|fn_| {
            let mut b = FixedBitSet::with_capacity(inst.num_atoms());
            for a in inst.algebra.atoms_meeting(fn_) {
                b.insert(a);
            }
            b
        })
        .collect();
    let (ftilde_conj, c) = error_set_from(inst, &ftilde[base])?;
    Ok(FTower { f, ftilde, base, ftilde_conj, c })
}

/// Pairs `(y, z)` of quotient elements whose fibres under `f` meet a common
/// atom of the separating algebra. `f^-1[Y]` and `f^-1[Z]` are separated by
/// a block-union iff no linked pair lies in `Y × Z`.
pub fn linked_pairs(inst: &PipelineInstance, fvals: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in inst.separating.atoms() {
        let vals: BTreeSet<usize> = a.iter().map(|g| fvals[g]).collect();
        for &y in &vals {
            for &z in &vals {
                out.insert((y, z));
            }
        }
    }
    out
}

/// First linked pair `(y, z)` with `C^l y ∩ C^l z = ∅`, if any.
pub fn separation_failure(c: &GSubset, l: usize, linked: &BTreeSet<(usize, usize)>) -> Option<(usize, usize)> {
    let cl = c.power(l);
    linked.iter().copied().find(|&(y, z)| cl.translate_right(y).is_disjoint(&cl.translate_right(z)))
}

/// Least `l` in `1..=MAX_L` witnessing separation, if any.
pub fn minimal_separation_l(c: &GSubset, linked: &BTreeSet<(usize, usize)>) -> Option<usize> {
    (1..=MAX_L).find(|&l| separation_failure(c, l, linked).is_none())
}

/// Direct check over every pair `(Y, Z)` of disjoint subsets of a small
/// quotient: `C^l Y ∩ C^l Z = ∅` implies the hull of `f^-1[Y]` misses
/// `f^-1[Z]`. Returns `None` when the quotient is too large.
pub fn separation_exhaustive(inst: &PipelineInstance, c: &GSubset, l: usize, limit: usize) -> Option<bool> {
    let q = inst.quotient();
    let k = q.order();
    if k > limit {
        return None;
    }
    let cl = c.power(l);
    let fvals = inst.f_map();
    let fibres: Vec<GSubset> = (0..k).map(|y| GSubset::from_predicate(&inst.group, |g| fvals[g] == y)).collect();
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let (mut ys, mut zs) = (GSubset::empty(q), GSubset::empty(q));
        let mut c3 = code;
        for y in 0..k {
            match c3 % 3 {
                1 => ys.insert(y),
                2 => zs.insert(y),
                _ => {}
            }
            c3 /= 3;
        }
        if ys.is_empty() || zs.is_empty() {
            continue;
        }
        let cy = cl.product(&ys).expect("same group");
        let cz = cl.product(&zs).expect("same group");
        if !cy.is_disjoint(&cz) {
            continue;
        }
        let mut fy = GSubset::empty(&inst.group);
        let mut fz = GSubset::empty(&inst.group);
        for y in ys.iter() {
            fy = fy.union(&fibres[y]);
        }
        for z in zs.iter() {
            fz = fz.union(&fibres[z]);
        }
        if !inst.separating.hull(&fy).is_disjoint(&fz) {
            return Some(false);
        }
    }
    Some(true)
}

fn missing(a: &GSubset, b: &GSubset) -> Vec<usize> {
    a.difference(b).to_vec()
}

fn subset_check(id: &str, a: &GSubset, b: &GSubset) -> Check {
    let bad = missing(a, b);
    let c = Check::new(id, bad.is_empty());
    if bad.is_empty() {
        c
    } else {
        c.wit("offending", bad)
    }
}

fn atoms_subset(a: &FixedBitSet, b: &FixedBitSet) -> Vec<usize> {
    a.difference(b).collect()
}

/// Every containment of the main theorem and its supporting lemmas.
pub fn theorem_certificate(inst: &PipelineInstance) -> Result<Certificate> {
    if inst.n_max < MIN_HORIZON {
        return Err(Error::Horizon { got: inst.n_max, need: MIN_HORIZON });
    }
    let tower = build_f_tower(inst)?;
    let q = inst.quotient().clone();
    let fvals = inst.f_map();
    let fhat = inst.f_hat_map();
    let c = &tower.c;
    let um = inst.u_m();
    let ft = |n: usize| -> &FixedBitSet { &tower.ftilde[n] };
    let ft_um = |n: usize| -> GSubset { inst.pi_of_atoms(ft(n)) };

    let mut cert = Certificate::new("main-theorem");
    cert.summarize("group_order", inst.group.order());
    cert.summarize("ambient_order", inst.ambient.order());
    cert.summarize("x", inst.x.to_vec());
    cert.summarize("n_max", inst.n_max);
    cert.summarize("mode", inst.mode);
    cert.summarize("atoms", inst.num_atoms());
    cert.summarize("quotient_order", q.order());
    cert.summarize("h_order", inst.hausdorff().h.len());
    cert.summarize("c", c.to_vec());
    cert.summarize("f", &fvals);

    // f is a map with f(e) = identity and error set C.
    let (err_r, err_l) = error_sets(inst.group.order(), |a, b| inst.group.mul(a, b), &q, &fvals);
    cert.push(Check::new("f-identity", fvals[inst.group.identity()] == q.identity()));
    cert.push(subset_check("quasihom-error-c", &err_r.union(&err_l), c).wit("error_r", &err_r).wit("error_l", &err_l));

    // (a) error_r(f) and error_l(f) inside π[F̃_3 ∩ u*M].
    let f3 = ft_um(3);
    cert.push(subset_check("thm-main-error-r", &err_r, &f3).exp("ftilde", 3).wit("target", &f3));
    cert.push(subset_check("thm-main-error-l", &err_l, &f3).exp("ftilde", 3));

    // (b) C normal, symmetric, inside π[F̃_10 ∩ u*M].
    let f10 = ft_um(10);
    let normal_sym = c.is_normal() && c.is_symmetric();
    let inside = missing(c, &f10);
    cert.push(
        Check::new("thm-main-c-normal", normal_sym && inside.is_empty())
            .exp("ftilde", 10)
            .wit("normal", c.is_normal())
            .wit("symmetric", c.is_symmetric())
            .wit("offending", inside),
    );

    // (c) f^-1[C] ⊆ X^30.
    let pre_c = inst.preimage(c);
    cert.push(subset_check("thm-main-c30", &pre_c, &inst.x_power(30)).exp("x", 30).wit("preimage", &pre_c));

    // (d) a neighbourhood U with f^-1[U] ⊆ X^14 and f^-1[UC] ⊆ X^34.
    let u_nb = inst.neighbourhood_u();
    let pre_u = inst.preimage(&u_nb);
    let uc = u_nb.product(c)?;
    let pre_uc = inst.preimage(&uc);
    cert.push(subset_check("thm-main-u14", &pre_u, &inst.x_power(14)).exp("x", 14).wit("u", &u_nb).wit("preimage", &pre_u));
    cert.push(subset_check("thm-main-uc34", &pre_uc, &inst.x_power(34)).exp("x", 34).wit("uc", &uc).wit("preimage", &pre_uc));

    // (e) separation with l = 2.
    let linked = linked_pairs(inst, &fvals);
    let fail2 = separation_failure(c, 2, &linked);
    let min_l = minimal_separation_l(c, &linked);
    let exhaustive = separation_exhaustive(inst, c, 2, 6);
    let mut sep = Check::new("thm-main-sep-l2", fail2.is_none() && exhaustive != Some(false))
        .exp("l", 2)
        .wit("linked_pairs", linked.len())
        .wit("minimal_l", min_l)
        .wit("exhaustive", exhaustive);
    if let Some(p) = fail2 {
        sep = sep.wit("offending_pair", p);
    }
    cert.push(sep);

    // (f) two-set form: disjoint block-unions D1, D2 inside some X^n.
    let c2 = c.power(2);
    let fibres: Vec<GSubset> = (0..q.order()).map(|y| GSubset::from_predicate(&inst.group, |g| fvals[g] == y)).collect();
    let hulls: Vec<GSubset> = fibres.iter().map(|s| inst.separating.hull(s)).collect();
    let mut bad_pair = None;
    let mut used = GSubset::empty(&inst.group);
    'outer: for y in 0..q.order() {
        for z in 0..q.order() {
            if c2.translate_right(y).is_disjoint(&c2.translate_right(z)) {
                used = used.union(&hulls[y]).union(&hulls[z]);
                if !hulls[y].is_disjoint(&hulls[z]) {
                    bad_pair = Some((y, z));
                    break 'outer;
                }
            }
        }
    }
    let d_level = inst.x_level(&used);
    let mut two = Check::new("rem-two-sets", bad_pair.is_none()).exp("l", 2).exp("n", d_level as u64);
    if let Some(p) = bad_pair {
        two = two.wit("offending_pair", p);
    }
    cert.push(two);

    // (g) f^-1[UC] is generic: finitely many left translates cover X.
    let (count, translates) = covering_number(&inst.x, &pre_uc)?;
    let mut covered = GSubset::empty(&inst.group);
    for &t in &translates {
        covered = covered.union(&pre_uc.translate_left(t));
    }
    let (count_g, translates_g) = covering_number(&GSubset::full(&inst.group), &pre_uc)?;
    cert.push(
        Check::new("fact-generic-uc", inst.x.is_subset(&covered))
            .exp("translates", count as u64)
            .wit("translates", translates)
            .wit("group_translates", translates_g)
            .exp("group_translates", count_g as u64),
    );

    // (h) f[X^i] ⊆ f[X]^i C^(i-1).
    let image = |s: &GSubset| GSubset::from_elems(&q, s.iter().map(|g| fvals[g])).expect("in range");
    let fx = image(&inst.x);
    let mut pow_fx = fx.clone();
    let mut pow_c = GSubset::identity(&q);
    let mut bad_i = None;
    for i in 1..=inst.n_max {
        if i > 1 {
            pow_fx = pow_fx.product(&fx)?;
            pow_c = pow_c.product(c)?;
        }
        let bound = pow_fx.product(&pow_c)?;
        if !image(&inst.x_power(i)).is_subset(&bound) {
            bad_i = Some(i);
            break;
        }
    }
    let mut img = Check::new("rem-image-bound", bad_i.is_none()).exp("i_max", inst.n_max as u64);
    if let Some(i) = bad_i {
        img = img.wit("offending_i", i);
    }
    cert.push(img);

    // (i) the lemma suite.
    for n in 1..=F_LEVELS {
        if 2 * n > inst.n_max {
            break;
        }
        let ok_f = tower.f[n].is_subset(&inst.x_power(2 * n));
        let bad = atoms_subset(ft(n), &inst.level_atoms(2 * n));
        if !(ok_f && bad.is_empty()) {
            cert.push(Check::new("lem-fn-x2n", false).exp("n", n as u64).wit("offending_atoms", bad));
            break;
        }
        if n == F_LEVELS || 2 * (n + 1) > inst.n_max {
            cert.push(Check::new("lem-fn-x2n", true).exp("n_max_checked", n as u64));
        }
    }
    let u = inst.u();
    cert.push(Check::new("lem-u-in-f1", ft(1).contains(u) && atoms_subset(ft(1), &inst.level_atoms(2)).is_empty()).exp("x", 2));

    let comp = inst.comp();
    let inv_in_um = |p: usize| comp.elems[comp.group.inv(comp.local(p).expect("in u*M"))];
    let mut inv_bad = None;
    for n in 1..F_LEVELS {
        for p in ft(n).ones().filter(|&p| um.contains(p)) {
            if !ft(n + 1).contains(inv_in_um(p)) {
                inv_bad = Some((n, p));
            }
        }
    }
    cert.push(Check::new("lem-inverse-shift", inv_bad.is_none()).wit("offending", inv_bad));

    let mut pre_bad = None;
    for n in 1..=inst.n_max - 4 {
        let lvl = inst.level_atoms(n);
        let xn4 = inst.x_power(n + 4);
        if let Some(g) = (0..inst.group.order()).find(|&g| lvl.contains(inst.big_f(g)) && !xn4.contains(g)) {
            pre_bad = Some((n, g));
            break;
        }
    }
    cert.push(Check::new("lem-preimage-n4", pre_bad.is_none()).exp("shift", 4).wit("offending", pre_bad));

    let lvl4 = inst.level_atoms(4);
    let v_bad: Vec<usize> = inst.hausdorff().open_nbhd.iter().copied().filter(|&p| !lvl4.contains(p)).collect();
    cert.push(Check::new("lem-v-x4", v_bad.is_empty()).exp("x", 4).wit("offending", v_bad));

    // (F̃_7 ∩ u*M)^{u*M} ⊆ F̃_8 ∩ u*M ⊆ S_{X^16}, and its closure in F̃_9.
    let s = &inst.semigroup;
    let mut conj7 = Vec::new();
    for p in ft(7).ones().filter(|&p| um.contains(p)) {
        for &r in &comp.elems {
            conj7.push(s.op(s.op(r, p), inv_in_um(r)));
        }
    }
    conj7.sort_unstable();
    conj7.dedup();
    let lvl16 = inst.level_atoms(16);
    let conj_bad: Vec<usize> = conj7.iter().copied().filter(|&p| !ft(8).contains(p) || !lvl16.contains(p)).collect();
    cert.push(Check::new("lem-conj-f8", conj_bad.is_empty()).exp("ftilde", 8).exp("x", 16).wit("offending", conj_bad));
    let cl7 = tau_closure(s, comp, &conj7)?;
    let lvl18 = inst.level_atoms(18);
    let cl_bad: Vec<usize> = cl7.iter().copied().filter(|&p| !ft(9).contains(p) || !lvl18.contains(p)).collect();
    cert.push(Check::new("lem-closure-f9", cl_bad.is_empty()).exp("ftilde", 9).exp("x", 18).wit("offending", cl_bad));

    let lvl6 = inst.level_atoms(6);
    let h_bad: Vec<usize> = inst.hausdorff().h.iter().copied().filter(|&p| !ft(3).contains(p) || !lvl6.contains(p)).collect();
    cert.push(Check::new("lem-h-f3", h_bad.is_empty()).exp("ftilde", 3).exp("x", 6).wit("h", &inst.hausdorff().h).wit("offending", h_bad));

    // error_r(f̂) ∪ error_l(f̂) ⊆ π[F̃_5 ∩ u*M].
    let (hr, hl) = error_sets(inst.num_atoms(), |a, b| s.op(a, b), &q, &fhat);
    let f5 = ft_um(5);
    cert.push(subset_check("prop-fhat-f5", &hr.union(&hl), &f5).exp("ftilde", 5));
    cert.push(Check::new("fhat-extends-f", (0..inst.group.order()).all(|g| fhat[inst.stone.embed(g)] == fvals[g])));

    // Collapse of the τ-machinery on d-closed algebras.
    cert.extend(collapse_checks(inst)?);
    Ok(cert)
}

/// Collapse of the τ-topology: atoms act uniformly, `u∘Q = uQ`, `cl_tau`
/// is discrete and `H(u*M) = {u}`.
pub fn collapse_checks(inst: &PipelineInstance) -> Result<Vec<Check>> {
    let s = &inst.semigroup;
    let tags = s.tags().ok_or(Error::NoTags)?;
    let k = s.order();
    let alg = &inst.algebra;
    let mut act_bad = None;
    'a: for (i, a) in alg.atoms().iter().enumerate() {
        let rep = a.min_elem().expect("nonempty");
        for g in a.iter() {
            for q in 0..k {
                if tags.act[g * k + q] != tags.act[rep * k + q] {
                    act_bad = Some((i, g, q));
                    break 'a;
                }
            }
        }
    }
    let comp = inst.comp();
    let u = comp.u;
    let mut circle_bad = None;
    for &q in &comp.elems {
        if circle(s, u, &[q])? != vec![s.op(u, q)] {
            circle_bad = Some(q);
            break;
        }
    }
    let mut tau_bad = None;
    for &q in &comp.elems {
        if tau_closure(s, comp, &[q])? != vec![q] {
            tau_bad = Some(q);
            break;
        }
    }
    let h = &inst.hausdorff().h;
    Ok(vec![
        Check::new("collapse-atom-action", act_bad.is_none()).wit("offending", act_bad),
        Check::new("collapse-circle", circle_bad.is_none()).wit("offending", circle_bad),
        Check::new("collapse-tau-discrete", tau_bad.is_none()).wit("offending", tau_bad),
        Check::new("collapse-h-trivial", *h == vec![u]).wit("h", h),
    ])
}

/// The smaller error sets built from `F̃_3` and `F̃_1`, and evidence on
/// whether `F̃_n * F̃_m = F̃_{n+m}`.
pub fn alt_error_sets(inst: &PipelineInstance) -> Result<Certificate> {
    let tower = build_f_tower(inst)?;
    let mut cert = Certificate::new("alternate-error-sets");
    let u_nb = inst.neighbourhood_u();
    let fvals = inst.f_map();
    let linked = linked_pairs(inst, &fvals);

    let (_, c3) = error_set_from(inst, &tower.ftilde[3])?;
    let pre3 = inst.preimage(&c3);
    cert.push(subset_check("alt-c22", &pre3, &inst.x_power(22)).exp("ftilde", 3).exp("x", 22));
    let pre_uc3 = inst.preimage(&u_nb.product(&c3)?);
    cert.push(subset_check("alt-uc26", &pre_uc3, &inst.x_power(26)).exp("ftilde", 3).exp("x", 26));
    cert.push(Check::info("alt-sep-base3").wit("minimal_l", minimal_separation_l(&c3, &linked)));

    let (_, c1) = error_set_from(inst, &tower.ftilde[1])?;
    let pre1 = inst.preimage(&c1);
    cert.push(subset_check("alt-c18", &pre1, &inst.x_power(18)).exp("ftilde", 1).exp("x", 18));
    cert.push(Check::info("alt-sep-base1").wit("minimal_l", minimal_separation_l(&c1, &linked)));

    // Products of atom sets in the Stone semigroup.
    let s = &inst.semigroup;
    let um = inst.u_m();
    let prod = |a: &FixedBitSet, b: &FixedBitSet| {
        let mut r = FixedBitSet::with_capacity(s.order());
        for p in a.ones() {
            for q in b.ones() {
                r.insert(s.op(p, q));
            }
        }
        r
    };
    let mut sub_bad = Vec::new();
    let mut sup_gaps = Vec::new();
    let mut sup_gaps_um = Vec::new();
    for n in 1..=4 {
        for m in 1..=4 {
            let (a, b, t) = (&tower.ftilde[n], &tower.ftilde[m], &tower.ftilde[n + m]);
            let ab = prod(a, b);
            if !ab.is_subset(t) {
                sub_bad.push((n, m));
            }
            if !t.is_subset(&ab) {
                sup_gaps.push((n, m));
            }
            let mut au = a.clone();
            au.intersect_with(&um);
            let mut bu = b.clone();
            bu.intersect_with(&um);
            let mut tu = t.clone();
            tu.intersect_with(&um);
            if prod(&au, &bu) != tu {
                sup_gaps_um.push((n, m));
            }
        }
    }
    cert.push(Check::new("q-fn-fm-sub", sub_bad.is_empty()).wit("offending", sub_bad).exp("n_max", 4));
    cert.push(
        Check::info("q-fn-fm-eq")
            .wit("counterexamples", sup_gaps)
            .wit("counterexamples_um", sup_gaps_um)
            .note("finite evidence only"),
    );
    Ok(cert)
}

/// Dump of the main objects, for reports.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineDump {
    pub atoms: Vec<Vec<usize>>,
    pub u: usize,
    pub u_m: Vec<usize>,
    pub h: Vec<usize>,
    pub f1: Vec<usize>,
    pub c: Vec<usize>,
    pub ftilde7: Vec<usize>,
}

pub fn dump(inst: &PipelineInstance) -> Result<PipelineDump> {
    let tower = build_f_tower(inst)?;
    Ok(PipelineDump {
        atoms: inst.algebra.dump(),
        u: inst.u(),
        u_m: inst.comp().elems.clone(),
        h: inst.hausdorff().h.clone(),
        f1: tower.f[1].to_vec(),
        c: tower.c.to_vec(),
        ftilde7: PipelineInstance::atoms_to_vec(&tower.ftilde[7]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn coset_instance() -> PipelineInstance {
        // Z/6 with X the whole group; seeding the evens gives the coset algebra.
        let g = FiniteGroup::cyclic(6);
        let x = GSubset::full(&g);
        let evens = GSubset::from_elems(&g, [0, 2, 4]).unwrap();
        let cfg = PipelineConfig { extra_seeds: vec![evens], ..Default::default() };
        PipelineInstance::build(&g, &x, &cfg).unwrap()
    }

    #[test]
    fn refuses_short_horizon() {
        let g = FiniteGroup::cyclic(6);
        let x = GSubset::from_elems(&g, [5, 0, 1]).unwrap();
        let cfg = PipelineConfig { n_max: 10, ..Default::default() };
        let err = PipelineInstance::build(&g, &x, &cfg).unwrap_err();
        assert_eq!(err, Error::Horizon { got: 10, need: 34 });
    }

    #[test]
    fn coset_instance_collapses_to_parity() {
        let inst = coset_instance();
        assert_eq!(inst.num_atoms(), 2);
        let t = build_f_tower(&inst).unwrap();
        assert_eq!(t.f[1].to_vec(), vec![0, 2, 4]);
        assert_eq!(t.c.len(), 1);
        let f = inst.f_map();
        assert_eq!(inst.quotient().order(), 2);
        for g in 0..6 {
            assert_eq!(f[g] == f[0], g % 2 == 0);
        }
        assert_eq!(inst.preimage(&t.c).to_vec(), vec![0, 2, 4]);
        let cert = theorem_certificate(&inst).unwrap();
        assert!(cert.all_pass(), "{:#?}", cert.failures());
    }

    #[test]
    fn interval_instance_is_discrete() {
        // X^2 = {4,5,0,1,2} separates points, so the algebra is discrete.
        let g = FiniteGroup::cyclic(6);
        let x = GSubset::from_elems(&g, [5, 0, 1]).unwrap();
        let inst = PipelineInstance::build(&g, &x, &PipelineConfig::default()).unwrap();
        assert_eq!(inst.num_atoms(), 6);
        let cert = theorem_certificate(&inst).unwrap();
        assert!(cert.all_pass(), "{:#?}", cert.failures());
        let alt = alt_error_sets(&inst).unwrap();
        assert!(alt.all_pass(), "{:#?}", alt.failures());
    }

    #[test]
    fn singleton_atoms_give_trivial_c() {
        let g = FiniteGroup::cyclic(5);
        let x = GSubset::from_elems(&g, [4, 0, 1]).unwrap();
        let inst = PipelineInstance::build(&g, &x, &PipelineConfig::default()).unwrap();
        let t = build_f_tower(&inst).unwrap();
        assert_eq!(t.f[1].to_vec(), vec![0]);
        assert_eq!(t.c.len(), 1);
        // f is an isomorphism onto the quotient.
        let f = inst.f_map();
        let mut sorted = f.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
    }
}
