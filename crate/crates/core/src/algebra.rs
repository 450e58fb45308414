//! Left-invariant Boolean algebras on a finite group, the d-operator and
//! the Stone semigroup on atoms.
//!
//! An algebra is stored by its atom partition. Atoms are numbered by their
//! least element, so equal algebras have identical representations.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::Group;
use crate::subset::GSubset;

/// Default cap on the number of atoms produced by [`d_closure`].
pub const DEFAULT_ATOM_BUDGET: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct GAlgebra {
    group: Group,
    atoms: Vec<GSubset>,
    atom_of: Vec<u32>,
}

impl PartialEq for GAlgebra {
    fn eq(&self, other: &Self) -> bool {
        std::sync::Arc::ptr_eq(&self.group, &other.group) && self.atom_of == other.atom_of
    }
}

impl Eq for GAlgebra {}

/// Which translates of each seed are adjoined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Translates {
    Left,
    TwoSided,
}

impl GAlgebra {
    /// Canonical algebra from a labelling of elements: equal labels share an
    /// atom.
    fn from_labels<K: std::hash::Hash + Eq>(group: &Group, label: impl Fn(usize) -> K) -> GAlgebra {
        let n = group.order();
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut atom_of = vec![0u32; n];
        let mut atoms: Vec<GSubset> = Vec::new();
        for x in 0..n {
            let next = ids.len() as u32;
            let id = *ids.entry(label(x)).or_insert(next);
            if id as usize == atoms.len() {
                atoms.push(GSubset::empty(group));
            }
            atoms[id as usize].insert(x);
            atom_of[x] = id;
        }
        GAlgebra { group: group.clone(), atoms, atom_of }
    }

    /// The algebra whose atoms are the given blocks.
    pub fn from_partition(group: &Group, blocks: &[GSubset]) -> Result<GAlgebra> {
        let n = group.order();
        let mut lab = vec![usize::MAX; n];
        for (i, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::Precondition("empty block".into()));
            }
            for x in b.iter() {
                if lab[x] != usize::MAX {
                    return Err(Error::Precondition("blocks overlap".into()));
                }
                lab[x] = i;
            }
        }
        if lab.contains(&usize::MAX) {
            return Err(Error::Precondition("blocks do not cover the group".into()));
        }
        Ok(Self::from_labels(group, |x| lab[x]))
    }

    /// Singleton atoms: the full power set.
    pub fn discrete(group: &Group) -> GAlgebra {
        Self::from_labels(group, |x| x)
    }

    /// A single atom.
    pub fn trivial(group: &Group) -> GAlgebra {
        Self::from_labels(group, |_| 0u8)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn atoms(&self) -> &[GSubset] {
        &self.atoms
    }

    pub fn atom(&self, i: usize) -> &GSubset {
        &self.atoms[i]
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    #[inline]
    pub fn atom_of(&self, g: usize) -> usize {
        self.atom_of[g] as usize
    }

    /// Atoms as sorted element lists.
    pub fn dump(&self) -> Vec<Vec<usize>> {
        self.atoms.iter().map(|a| a.to_vec()).collect()
    }

    pub fn is_block_union(&self, u: &GSubset) -> bool {
        self.atoms.iter().all(|a| a.is_subset(u) || a.is_disjoint(u))
    }

    /// Union of the atoms with the given indices.
    pub fn block_union(&self, atoms: impl IntoIterator<Item = usize>) -> GSubset {
        let mut s = GSubset::empty(&self.group);
        for i in atoms {
            for x in self.atoms[i].iter() {
                s.insert(x);
            }
        }
        s
    }

    /// Indices of atoms meeting `s`.
    pub fn atoms_meeting(&self, s: &GSubset) -> Vec<usize> {
        let mut hit = vec![false; self.atoms.len()];
        for x in s.iter() {
            hit[self.atom_of(x)] = true;
        }
        (0..hit.len()).filter(|&i| hit[i]).collect()
    }

    /// Smallest block-union containing `s`.
    pub fn hull(&self, s: &GSubset) -> GSubset {
        self.block_union(self.atoms_meeting(s))
    }

    /// Every left translate of every atom is a union of atoms.
    pub fn is_left_invariant(&self) -> bool {
        let g = &self.group;
        (0..g.order()).all(|h| self.atoms.iter().all(|a| self.is_block_union(&a.translate_left(h))))
    }

    /// Common refinement with another algebra on the same group.
    pub fn refine(&self, other: &GAlgebra) -> GAlgebra {
        Self::from_labels(&self.group, |x| (self.atom_of[x], other.atom_of[x]))
    }

    /// `self` refines `other` (every atom of `self` lies in an atom of `other`).
    pub fn refines(&self, other: &GAlgebra) -> bool {
        self.atoms.iter().all(|a| {
            let t = other.atom_of(a.min_elem().expect("atoms are nonempty"));
            a.iter().all(|x| other.atom_of(x) == t)
        })
    }

    /// For each atom `q`, the set of atoms meeting `g*q`. Two elements with
    /// different signatures are separated by some `d_q(U)`.
    fn d_signature(&self, g: usize) -> Vec<FixedBitSet> {
        let row = self.group.row(g);
        self.atoms
            .iter()
            .map(|q| {
                let mut s = FixedBitSet::with_capacity(self.atoms.len());
                for a in q.iter() {
                    s.insert(self.atom_of[row[a] as usize] as usize);
                }
                s
            })
            .collect()
    }

    /// Every `d_q(U)` with `U` a block-union is itself a block-union.
    pub fn is_d_closed(&self) -> bool {
        self.atoms.iter().all(|a| {
            let mut it = a.iter();
            let first = self.d_signature(it.next().expect("nonempty"));
            it.all(|x| self.d_signature(x) == first)
        })
    }
}

/// Smallest left-invariant algebra containing every seed (and, with
/// [`Translates::TwoSided`], every right translate of every seed).
pub fn generate_algebra(group: &Group, seeds: &[GSubset]) -> Result<GAlgebra> {
    generate_algebra_with(group, seeds, Translates::Left)
}

pub fn generate_algebra_with(group: &Group, seeds: &[GSubset], mode: Translates) -> Result<GAlgebra> {
    if seeds.is_empty() {
        return Err(Error::Empty("algebra seeds"));
    }
    let mut family: Vec<GSubset> = Vec::new();
    for s in seeds {
        if s.group().order() != group.order() {
            return Err(Error::GroupMismatch);
        }
        match mode {
            Translates::Left => family.push(s.clone()),
            Translates::TwoSided => {
                for g in 0..group.order() {
                    family.push(s.translate_right(g));
                }
            }
        }
    }
    family.sort_by(|a, b| a.bits().as_slice().cmp(b.bits().as_slice()));
    family.dedup();
    // x and y share an atom iff x*S^-1 = y*S^-1 for every seed S, since
    // x*S^-1 is the set of g with x in g*S.
    let mut alg = GAlgebra::trivial(group);
    for s in &family {
        let sinv = s.inverse_set();
        let keys: Vec<Vec<_>> = Exec::default().map(group.order(), |x| {
            GSubset::singleton(group, x)
                .product_unchecked(&sinv, Exec::Sequential)
                .bits()
                .as_slice()
                .to_vec()
        });
        alg = GAlgebra::from_labels(group, |x| (alg.atom_of[x], keys[x].clone()));
    }
    Ok(alg)
}

/// `d_q(U) = {g : g*q ⊆ U}`, the set of `g` with `q ⊆ g^-1 U`.
pub fn d_operator(alg: &GAlgebra, q: usize, u: &GSubset) -> Result<GSubset> {
    if !alg.is_block_union(u) {
        return Err(Error::NotInAlgebra);
    }
    let atom = alg.atom(q);
    Ok(GSubset::from_predicate(alg.group(), |g| atom.translate_left(g).is_subset(u)))
}

/// Least d-closed refinement, by fixpoint iteration.
pub fn d_closure(alg: &GAlgebra) -> Result<GAlgebra> {
    d_closure_with_budget(alg, DEFAULT_ATOM_BUDGET)
}

pub fn d_closure_with_budget(alg: &GAlgebra, budget: usize) -> Result<GAlgebra> {
    let mut cur = alg.clone();
    loop {
        if cur.num_atoms() > budget {
            return Err(Error::AtomBudget(cur.num_atoms(), budget));
        }
        let sigs: Vec<Vec<FixedBitSet>> = Exec::default().map(cur.group.order(), |g| cur.d_signature(g));
        let next = GAlgebra::from_labels(&cur.group, |x| (cur.atom_of[x], sigs[x].clone()));
        if next.num_atoms() == cur.num_atoms() {
            return Ok(cur);
        }
        cur = next;
    }
}

/// The Stone semigroup of a d-closed algebra: atoms with `U ∈ p*q` iff
/// `d_q(U) ∈ p`.
#[derive(Clone, Debug)]
pub struct StoneSemigroup {
    algebra: GAlgebra,
    table: Vec<u32>,
    /// `filtration[n-1]` marks the atoms contained in `X^n`.
    filtration: Vec<FixedBitSet>,
}

impl StoneSemigroup {
    pub fn algebra(&self) -> &GAlgebra {
        &self.algebra
    }

    pub fn order(&self) -> usize {
        self.algebra.num_atoms()
    }

    #[inline]
    pub fn op(&self, p: usize, q: usize) -> usize {
        self.table[p * self.order() + q] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn embed(&self, g: usize) -> usize {
        self.algebra.atom_of(g)
    }

    /// Atom `g*q` (a single atom because the algebra is left-invariant).
    pub fn act(&self, g: usize, q: usize) -> usize {
        let a = self.algebra.atom(q).min_elem().expect("nonempty");
        self.algebra.atom_of(self.algebra.group().mul(g, a))
    }

    pub fn horizon(&self) -> usize {
        self.filtration.len()
    }

    /// Is atom `p` contained in `X^n`? Level 0 is `{e}`.
    pub fn in_level(&self, p: usize, n: usize) -> bool {
        if n == 0 {
            let a = self.algebra.atom(p);
            return a.len() == 1 && a.contains(self.algebra.group().identity());
        }
        let n = n.min(self.filtration.len());
        self.filtration[n - 1].contains(p)
    }

    /// Least `n` with atom `p ⊆ X^n`, if within the horizon.
    pub fn level(&self, p: usize) -> Option<usize> {
        (0..=self.filtration.len()).find(|&n| self.in_level(p, n))
    }

    /// Operation table as text, one row per atom.
    pub fn dump_table(&self) -> String {
        let k = self.order();
        let mut out = String::new();
        for p in 0..k {
            let row: Vec<String> = (0..k).map(|q| self.op(p, q).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Associativity and `op(embed g, embed h) = embed(gh)`.
    pub fn verify(&self) -> Result<()> {
        let k = self.order();
        let bad = Exec::default().find_first(k, |a| {
            (0..k).any(|b| (0..k).any(|c| self.op(self.op(a, b), c) != self.op(a, self.op(b, c))))
        });
        if let Some(a) = bad {
            let (b, c) = (0..k)
                .flat_map(|b| (0..k).map(move |c| (b, c)))
                .find(|&(b, c)| self.op(self.op(a, b), c) != self.op(a, self.op(b, c)))
                .expect("witness");
            return Err(Error::NotAssociative(a, b, c));
        }
        let g = self.algebra.group();
        let n = g.order();
        let ext = Exec::default().all(n, |x| (0..n).all(|y| self.op(self.embed(x), self.embed(y)) == self.embed(g.mul(x, y))));
        if !ext {
            return Err(Error::Precondition("semigroup does not extend the group action".into()));
        }
        Ok(())
    }
}

pub fn stone_semigroup(alg: &GAlgebra, x_powers: &[GSubset]) -> Result<StoneSemigroup> {
    let k = alg.num_atoms();
    let g = alg.group();
    let rows: Vec<Option<Vec<u32>>> = Exec::default().map(k, |p| {
        let pa = alg.atom(p);
        let rep = pa.min_elem().expect("nonempty");
        let mut row = Vec::with_capacity(k);
        for q in 0..k {
            let qa = alg.atom(q);
            let r = alg.atom_of(g.mul(rep, qa.min_elem().expect("nonempty")));
            // The ultrafilter condition: every g in p maps q into r.
            let ru = alg.atom(r);
            if !pa.iter().all(|x| qa.iter().all(|y| ru.contains(g.mul(x, y)))) {
                return None;
            }
            row.push(r as u32);
        }
        Some(row)
    });
    let mut table = Vec::with_capacity(k * k);
    for r in rows {
        table.extend(r.ok_or(Error::NotDClosed)?);
    }
    let filtration = x_powers
        .iter()
        .map(|xn| {
            let mut s = FixedBitSet::with_capacity(k);
            for (i, a) in alg.atoms().iter().enumerate() {
                if a.is_subset(xn) {
                    s.insert(i);
                }
            }
            s
        })
        .collect();
    Ok(StoneSemigroup { algebra: alg.clone(), table, filtration })
}

/// `p -> l_p` with `l_p(q) = p*q`.
#[derive(Clone, Debug)]
pub struct TranslationRepresentation {
    pub maps: Vec<Vec<usize>>,
    pub injective: bool,
    pub closed_under_composition: bool,
}

pub fn left_translation_representation(s: &StoneSemigroup) -> TranslationRepresentation {
    let k = s.order();
    let maps: Vec<Vec<usize>> = (0..k).map(|p| (0..k).map(|q| s.op(p, q)).collect()).collect();
    let mut index: HashMap<&[usize], usize> = HashMap::new();
    for (p, m) in maps.iter().enumerate() {
        index.entry(m.as_slice()).or_insert(p);
    }
    let injective = index.len() == k;
    let closed_under_composition = (0..k).all(|p| {
        (0..k).all(|q| {
            let comp: Vec<usize> = (0..k).map(|r| maps[p][maps[q][r]]).collect();
            index.contains_key(comp.as_slice())
        })
    });
    TranslationRepresentation { maps, injective, closed_under_composition }
}
