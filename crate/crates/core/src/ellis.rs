//! Structure of finite semigroups: minimal left ideals, idempotents, Ellis
//! groups, the circle operation, `cl_tau`, `H(uM)` and the quotient.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::algebra::StoneSemigroup;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::{FiniteGroup, Group};
use crate::subset::GSubset;

/// Group elements tagged into a semigroup: `embed(g)` and the action
/// `g . q`, given independently of the semigroup operation.
#[derive(Clone, Debug)]
pub struct GTags {
    pub group: Group,
    pub embed: Vec<usize>,
    /// `act[g * order + q]`.
    pub act: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FiniteSemigroup {
    order: usize,
    table: Vec<u32>,
    tags: Option<GTags>,
}

impl FiniteSemigroup {
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != order * order {
            return Err(Error::InvalidTable("table size".into()));
        }
        if let Some(&x) = table.iter().find(|&&x| x as usize >= order) {
            return Err(Error::OutOfRange(x as usize, order));
        }
        let s = FiniteSemigroup { order, table, tags: None };
        s.check_associative()?;
        Ok(s)
    }

    pub fn from_fn(order: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table = (0..order * order).map(|k| op(k / order, k % order) as u32).collect();
        Self::from_table(order, table)
    }

    /// The Stone semigroup with its group tags: `embed = atom_of` and the
    /// action given by translating atoms.
    pub fn from_stone(s: &StoneSemigroup) -> Self {
        let k = s.order();
        let g = s.algebra().group().clone();
        let n = g.order();
        let embed = (0..n).map(|x| s.embed(x)).collect();
        let mut act = vec![0usize; n * k];
        for x in 0..n {
            for q in 0..k {
                act[x * k + q] = s.act(x, q);
            }
        }
        FiniteSemigroup { order: k, table: s.table().to_vec(), tags: Some(GTags { group: g, embed, act }) }
    }

    pub fn with_tags(mut self, tags: GTags) -> Result<Self> {
        if tags.embed.len() != tags.group.order() || tags.act.len() != tags.group.order() * self.order {
            return Err(Error::Precondition("tag sizes".into()));
        }
        self.tags = Some(tags);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tags(&self) -> Option<&GTags> {
        self.tags.as_ref()
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| self.op(self.op(a, b), c) != self.op(a, self.op(b, c));
        if let Some(a) = Exec::default().find_first(n, |a| (0..n).any(|b| (0..n).any(|c| bad(a, b, c)))) {
            let (b, c) = (0..n)
                .flat_map(|b| (0..n).map(move |c| (b, c)))
                .find(|&(b, c)| bad(a, b, c))
                .expect("witness");
            return Err(Error::NotAssociative(a, b, c));
        }
        Ok(())
    }

    /// `{s} ∪ S*s`.
    pub fn principal_left_ideal(&self, s: usize) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.order);
        b.insert(s);
        for t in 0..self.order {
            b.insert(self.op(t, s));
        }
        b
    }

    /// `S*A`.
    pub fn left_multiple(&self, a: &FixedBitSet) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(self.order);
        for x in a.ones() {
            for t in 0..self.order {
                b.insert(self.op(t, x));
            }
        }
        b
    }

    pub fn is_left_ideal(&self, a: &FixedBitSet) -> bool {
        a.count_ones(..) > 0 && self.left_multiple(a).is_subset(a)
    }

    /// `p . Q`.
    pub fn mul_set(&self, p: usize, q: &[usize]) -> Vec<usize> {
        sorted_unique(q.iter().map(|&x| self.op(p, x)))
    }

    /// `Q . r`.
    pub fn set_mul(&self, q: &[usize], r: usize) -> Vec<usize> {
        sorted_unique(q.iter().map(|&x| self.op(x, r)))
    }
}

fn sorted_unique(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// All minimal left ideals, each verified minimal (`S*t = M` for every
/// `t ∈ M`). Ordered by least element.
pub fn minimal_left_ideals(s: &FiniteSemigroup) -> Vec<Vec<usize>> {
    let n = s.order();
    let principal: Vec<FixedBitSet> = Exec::default().map(n, |x| s.principal_left_ideal(x));
    let mut distinct: Vec<FixedBitSet> = principal.into_iter().collect::<HashSet<_>>().into_iter().collect();
    distinct.sort_by_key(|b| (b.count_ones(..), b.minimum()));
    let mut minimal: Vec<FixedBitSet> = Vec::new();
    for cand in distinct {
        // A left ideal containing a smaller one contains a minimal one.
        if !minimal.iter().any(|m| m.is_subset(&cand)) {
            minimal.push(cand);
        }
    }
    let mut out: Vec<Vec<usize>> = minimal.iter().map(|m| m.ones().collect()).collect();
    out.sort();
    for m in &minimal {
        let ok = s.is_left_ideal(m)
            && m.ones().all(|t| {
                let mut st = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    st.insert(s.op(x, t));
                }
                st == *m
            });
        assert!(ok, "principal-ideal filter returned a non-minimal ideal");
    }
    out
}

/// An Ellis group `u*M` with its operation as a [`FiniteGroup`] on local
/// indices. `elems[i]` is the semigroup element with local index `i`.
#[derive(Clone, Debug)]
pub struct EllisGroup {
    pub u: usize,
    pub elems: Vec<usize>,
    pub group: Group,
}

impl EllisGroup {
    pub fn local(&self, x: usize) -> Option<usize> {
        self.elems.binary_search(&x).ok()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.local(x).is_some()
    }
}

#[derive(Clone, Debug)]
pub struct IdealStructure {
    pub elems: Vec<usize>,
    pub idempotents: Vec<usize>,
    pub groups: Vec<EllisGroup>,
}

/// `J(M)` and the groups `u*M`, with the group axioms and the disjoint
/// union `M = ⊔ u*M` verified.
pub fn idempotents_and_groups(s: &FiniteSemigroup, m: &[usize]) -> Result<IdealStructure> {
    let mut mb = FixedBitSet::with_capacity(s.order());
    for &x in m {
        mb.insert(x);
    }
    if !s.is_left_ideal(&mb) {
        return Err(Error::NotMinimalIdeal);
    }
    let idempotents: Vec<usize> = m.iter().copied().filter(|&u| s.op(u, u) == u).collect();
    if idempotents.is_empty() {
        return Err(Error::NotMinimalIdeal);
    }
    let mut groups = Vec::new();
    let mut seen = FixedBitSet::with_capacity(s.order());
    for &u in &idempotents {
        let elems = s.mul_set(u, m);
        for &x in &elems {
            if seen.contains(x) {
                return Err(Error::Precondition("components u*M overlap".into()));
            }
            seen.insert(x);
        }
        let pos = |x: usize| elems.binary_search(&x).ok();
        let mut rows = Vec::with_capacity(elems.len());
        for &a in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for &b in &elems {
                row.push(pos(s.op(a, b)).ok_or(Error::Precondition("u*M not closed".into()))?);
            }
            rows.push(row);
        }
        let group = FiniteGroup::from_table(rows, None)?;
        if elems[group.identity()] != u {
            return Err(Error::Precondition("identity of u*M is not u".into()));
        }
        groups.push(EllisGroup { u, elems, group });
    }
    if seen.count_ones(..) != m.len() {
        return Err(Error::Precondition("components do not cover M".into()));
    }
    Ok(IdealStructure { elems: m.to_vec(), idempotents, groups })
}

/// A verified isomorphism between two Ellis groups, as a map on semigroup
/// elements of the source component.
#[derive(Clone, Debug, Serialize)]
pub struct IsoWitness {
    pub from: (usize, usize),
    pub to: (usize, usize),
    pub method: &'static str,
    pub map: Vec<(usize, usize)>,
}

fn verified_local_map(a: &EllisGroup, b: &EllisGroup, f: impl Fn(usize) -> usize) -> Option<Vec<usize>> {
    let phi: Option<Vec<usize>> = a.elems.iter().map(|&x| b.local(f(x))).collect();
    let phi = phi?;
    a.group.is_isomorphism(&b.group, &phi).then_some(phi)
}

/// Isomorphisms between every ordered pair of components, structured
/// candidates first and exhaustive search as fallback.
pub fn group_isomorphisms(s: &FiniteSemigroup, ideals: &[IdealStructure]) -> Vec<IsoWitness> {
    let comps: Vec<((usize, usize), &EllisGroup)> = ideals
        .iter()
        .enumerate()
        .flat_map(|(i, id)| id.groups.iter().enumerate().map(move |(j, g)| ((i, j), g)))
        .collect();
    let mut out = Vec::new();
    for &(ka, a) in &comps {
        for &(kb, b) in &comps {
            let v = b.u;
            let candidates: [(&'static str, Box<dyn Fn(usize) -> usize>); 3] = [
                ("x -> v*x", Box::new(move |x| s.op(v, x))),
                ("x -> x*v", Box::new(move |x| s.op(x, v))),
                ("x -> v*x*v", Box::new(move |x| s.op(s.op(v, x), v))),
            ];
            let mut found = None;
            for (name, f) in candidates.iter() {
                if let Some(phi) = verified_local_map(a, b, f) {
                    found = Some((*name, phi));
                    break;
                }
            }
            if found.is_none() {
                if let Some(phi) = a.group.find_isomorphism(&b.group) {
                    found = Some(("exhaustive", phi));
                }
            }
            let (method, phi) = found.expect("Ellis groups of one semigroup are isomorphic");
            let map = phi.iter().enumerate().map(|(i, &j)| (a.elems[i], b.elems[j])).collect();
            out.push(IsoWitness { from: ka, to: kb, method, map });
        }
    }
    out
}

/// `p ∘ Q = {g . q : embed(g) = p, q ∈ Q}`. Nets in a finite discrete
/// space converge only when eventually constant.
pub fn circle(s: &FiniteSemigroup, p: usize, q: &[usize]) -> Result<Vec<usize>> {
    let tags = s.tags().ok_or(Error::NoTags)?;
    let gs: Vec<usize> = (0..tags.group.order()).filter(|&g| tags.embed[g] == p).collect();
    if gs.is_empty() {
        return Err(Error::NotGroupImage(p));
    }
    Ok(sorted_unique(gs.iter().flat_map(|&g| q.iter().map(move |&x| tags.act[g * s.order() + x]))))
}

/// `cl_tau(Q) = u(u ∘ Q)` for `Q ⊆ u*M`.
pub fn tau_closure(s: &FiniteSemigroup, comp: &EllisGroup, q: &[usize]) -> Result<Vec<usize>> {
    if !q.iter().all(|&x| comp.contains(x)) {
        return Err(Error::NotInEllisGroup);
    }
    let uq = circle(s, comp.u, q)?;
    Ok(s.mul_set(comp.u, &uq))
}

/// Extensive, monotone and idempotent on all subsets (when `|u*M| <= 10`)
/// or on all singletons and pairs otherwise.
pub fn is_closure_operator(s: &FiniteSemigroup, comp: &EllisGroup) -> Result<bool> {
    let k = comp.elems.len();
    let subsets: Vec<Vec<usize>> = if k <= 10 {
        (0u32..(1 << k)).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).map(|i| comp.elems[i]).collect()).collect()
    } else {
        let mut v = vec![Vec::new()];
        for i in 0..k {
            v.push(vec![comp.elems[i]]);
            for j in i + 1..k {
                v.push(vec![comp.elems[i], comp.elems[j]]);
            }
        }
        v
    };
    let cls: Vec<Vec<usize>> = subsets.iter().map(|q| tau_closure(s, comp, q)).collect::<Result<_>>()?;
    let sub = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
    for (q, c) in subsets.iter().zip(&cls) {
        if !sub(q, c) || tau_closure(s, comp, c)? != *c {
            return Ok(false);
        }
    }
    for (i, a) in subsets.iter().enumerate() {
        for (j, b) in subsets.iter().enumerate() {
            if sub(a, b) && !sub(&cls[i], &cls[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `H(u*M)`, the quotient `u*M / H` and the projection.
#[derive(Clone, Debug)]
pub struct HausdorffQuotient {
    /// Elements of `H` (semigroup indices).
    pub h: Vec<usize>,
    /// Minimal open neighbourhood of `u`.
    pub open_nbhd: Vec<usize>,
    pub quotient: Group,
    /// Local index in `u*M` -> quotient element.
    pub proj: Vec<usize>,
}

/// `H = ⋂ cl_tau(V)` over open `V ∋ u`, computed through the minimal open
/// neighbourhood of `u`.
pub fn h_subgroup_and_quotient(s: &FiniteSemigroup, comp: &EllisGroup) -> Result<HausdorffQuotient> {
    let u = comp.u;
    let all = &comp.elems;
    // Points whose closure misses u; the union W of their closures is the
    // largest closed set avoiding u.
    let mut w: Vec<usize> = Vec::new();
    for &x in all {
        let c = tau_closure(s, comp, &[x])?;
        if c.binary_search(&u).is_err() {
            w.extend(c);
        }
    }
    let w = sorted_unique(w.into_iter());
    if tau_closure(s, comp, &w)? != w || w.binary_search(&u).is_ok() {
        return Err(Error::Precondition("cl_tau does not define a topology here".into()));
    }
    let open_nbhd: Vec<usize> = all.iter().copied().filter(|x| w.binary_search(x).is_err()).collect();
    let h = tau_closure(s, comp, &open_nbhd)?;
    let grp = &comp.group;
    let hloc = GSubset::from_elems(grp, h.iter().map(|&x| comp.local(x).expect("in u*M")))?;
    if !hloc.is_closed_subgroup() || !hloc.is_normal() {
        return Err(Error::Precondition("H(uM) is not a normal subgroup".into()));
    }
    let (quotient, proj) = grp.quotient(&hloc)?;
    Ok(HausdorffQuotient { h, open_nbhd, quotient, proj })
}

/// Full decomposition of a finite semigroup.
#[derive(Clone, Debug)]
pub struct EllisDecomposition {
    pub ideals: Vec<IdealStructure>,
    pub isos: Vec<IsoWitness>,
    /// For the first component of the first ideal, when tags exist.
    pub hausdorff: Option<HausdorffQuotient>,
}

impl EllisDecomposition {
    pub fn chosen(&self) -> &EllisGroup {
        &self.ideals[0].groups[0]
    }
}

pub fn decompose(s: &FiniteSemigroup) -> Result<EllisDecomposition> {
    decompose_with(s, true)
}

/// With `with_isos = false` the pairwise isomorphism witnesses are skipped
/// (they are quadratic in the number of components).
pub fn decompose_with(s: &FiniteSemigroup, with_isos: bool) -> Result<EllisDecomposition> {
    let ideals: Vec<IdealStructure> =
        minimal_left_ideals(s).iter().map(|m| idempotents_and_groups(s, m)).collect::<Result<_>>()?;
    let isos = if with_isos { group_isomorphisms(s, &ideals) } else { Vec::new() };
    let hausdorff = match s.tags() {
        Some(_) => Some(h_subgroup_and_quotient(s, &ideals[0].groups[0])?),
        None => None,
    };
    Ok(EllisDecomposition { ideals, isos, hausdorff })
}

/// Summary suitable for reports.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub ideal_count: usize,
    pub ideal_sizes: Vec<usize>,
    pub idempotents_per_ideal: Vec<usize>,
    pub group_orders: Vec<usize>,
    pub iso_methods: Vec<&'static str>,
    pub h_order: Option<usize>,
    pub quotient_table: Option<Vec<Vec<usize>>>,
}

impl EllisDecomposition {
    pub fn report(&self) -> DecompositionReport {
        DecompositionReport {
            ideal_count: self.ideals.len(),
            ideal_sizes: self.ideals.iter().map(|i| i.elems.len()).collect(),
            idempotents_per_ideal: self.ideals.iter().map(|i| i.idempotents.len()).collect(),
            group_orders: self.ideals.iter().flat_map(|i| i.groups.iter().map(|g| g.elems.len())).collect(),
            iso_methods: self.isos.iter().map(|w| w.method).collect(),
            h_order: self.hausdorff.as_ref().map(|h| h.h.len()),
            quotient_table: self.hausdorff.as_ref().map(|h| {
                let q = &h.quotient;
                (0..q.order()).map(|a| (0..q.order()).map(|b| q.mul(a, b)).collect()).collect()
            }),
        }
    }
}

/// Rees matrix semigroup `M(A; I, Λ; P)` with `P` a `|Λ| x |I|` matrix
/// over `A`. Element `(i, a, λ)` has index `(i * |A| + a) * |Λ| + λ`, and
/// `(i,a,λ)(j,b,μ) = (i, a P[λ][j] b, μ)`.
pub fn rees_matrix(a: &FiniteGroup, i_count: usize, l_count: usize, p: &[Vec<usize>]) -> Result<FiniteSemigroup> {
    if p.len() != l_count || p.iter().any(|r| r.len() != i_count) {
        return Err(Error::Precondition("sandwich matrix must be |Λ| x |I|".into()));
    }
    let na = a.order();
    let n = i_count * na * l_count;
    let dec = |x: usize| (x / (na * l_count), (x / l_count) % na, x % l_count);
    FiniteSemigroup::from_fn(n, |x, y| {
        let (i, ga, l) = dec(x);
        let (j, gb, mu) = dec(y);
        let mid = a.mul(a.mul(ga, p[l][j]), gb);
        (i * na + mid) * l_count + mu
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{d_closure, generate_algebra, stone_semigroup, GAlgebra};

    fn group_semigroup(g: &FiniteGroup) -> FiniteSemigroup {
        FiniteSemigroup::from_fn(g.order(), |a, b| g.mul(a, b)).unwrap()
    }

    /// Full transformation monoid on `k` points, maps encoded base `k`.
    fn full_transformations(k: usize) -> FiniteSemigroup {
        let n = k.pow(k as u32);
        let decode = |x: usize| -> Vec<usize> { (0..k).map(|i| x / k.pow(i as u32) % k).collect() };
        let encode = |f: &[usize]| -> usize { f.iter().enumerate().map(|(i, &v)| v * k.pow(i as u32)).sum() };
        // (f*g)(i) = f(g(i)).
        FiniteSemigroup::from_fn(n, |a, b| {
            let (f, g) = (decode(a), decode(b));
            encode(&(0..k).map(|i| f[g[i]]).collect::<Vec<_>>())
        })
        .unwrap()
    }

    #[test]
    fn group_has_one_ideal() {
        let g = FiniteGroup::dihedral(3);
        let s = group_semigroup(&g);
        let ideals = minimal_left_ideals(&s);
        assert_eq!(ideals, vec![(0..6).collect::<Vec<_>>()]);
        let st = idempotents_and_groups(&s, &ideals[0]).unwrap();
        assert_eq!(st.idempotents, vec![g.identity()]);
        assert_eq!(st.groups[0].elems.len(), 6);
    }

    #[test]
    fn full_transformation_monoid_on_three_points() {
        let s = full_transformations(3);
        let ideals = minimal_left_ideals(&s);
        // Left ideals under (f*g)(i) = f(g(i)) absorb left composition: the
        // constant maps c form S*c = {constants}, a single minimal ideal.
        let constants: Vec<usize> = vec![0, 13, 26];
        assert_eq!(ideals, vec![constants.clone()]);
        let st = idempotents_and_groups(&s, &ideals[0]).unwrap();
        assert_eq!(st.idempotents, constants);
        assert!(st.groups.iter().all(|g| g.elems.len() == 1));
    }

    #[test]
    fn rees_two_by_two_over_z2() {
        let a = FiniteGroup::cyclic(2);
        let s = rees_matrix(&a, 2, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let dec = decompose(&s).unwrap();
        assert_eq!(dec.ideals.len(), 2);
        assert!(dec.ideals.iter().all(|i| i.elems.len() == 4 && i.idempotents.len() == 2));
        assert!(dec.ideals.iter().all(|i| i.groups.iter().all(|g| g.elems.len() == 2)));
        assert_eq!(dec.isos.len(), 16);
        assert!(dec.hausdorff.is_none());
    }

    fn stone_of(g: &Group, seeds: &[GSubset]) -> FiniteSemigroup {
        let alg = d_closure(&generate_algebra(g, seeds).unwrap()).unwrap();
        FiniteSemigroup::from_stone(&stone_semigroup(&alg, &[]).unwrap())
    }

    #[test]
    fn circle_on_stone_semigroups() {
        let g = FiniteGroup::cyclic(6);
        let evens = GSubset::from_elems(&g, [0, 2, 4]).unwrap();
        let s = stone_of(&g, &[evens]);
        for p in 0..2 {
            for q in 0..2 {
                assert_eq!(circle(&s, p, &[q]).unwrap(), vec![s.op(p, q)]);
            }
            assert!(circle(&s, p, &[]).unwrap().is_empty());
        }
        let d = stone_of(&g, &[GSubset::identity(&g)]);
        assert_eq!(circle(&d, 3, &[1, 2]).unwrap(), d.mul_set(3, &[1, 2]));
        let plain = group_semigroup(&g);
        assert_eq!(circle(&plain, 0, &[1]), Err(Error::NoTags));
    }

    #[test]
    fn tau_closure_is_discrete_on_stone_semigroups() {
        let g = FiniteGroup::dihedral(4);
        let s = stone_of(&g, &[GSubset::identity(&g)]);
        let dec = decompose(&s).unwrap();
        let comp = dec.chosen();
        assert_eq!(tau_closure(&s, comp, &[comp.u]).unwrap(), vec![comp.u]);
        assert_eq!(tau_closure(&s, comp, &comp.elems).unwrap(), comp.elems);
        assert!(is_closure_operator(&s, comp).unwrap());
        let h = dec.hausdorff.as_ref().unwrap();
        assert_eq!(h.h, vec![comp.u]);
        assert_eq!(h.quotient.order(), 8);
        let outside = (0..s.order()).find(|x| !comp.contains(*x));
        if let Some(x) = outside {
            assert_eq!(tau_closure(&s, comp, &[x]), Err(Error::NotInEllisGroup));
        }
    }

    #[test]
    fn one_atom_algebra() {
        let g = FiniteGroup::cyclic(5);
        let alg = GAlgebra::trivial(&g);
        let s = FiniteSemigroup::from_stone(&stone_semigroup(&alg, &[]).unwrap());
        let dec = decompose(&s).unwrap();
        assert_eq!(dec.report().h_order, Some(1));
        assert_eq!(dec.hausdorff.unwrap().quotient.order(), 1);
    }
}
