//! Subsets of a finite group as bitsets, and the subset calculus built on
//! them.

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::group::Group;

/// Exhaustive refinement of greedy covers is attempted up to this size.
pub const EXACT_COVER_LIMIT: usize = 4;

#[derive(Clone)]
pub struct GSubset {
    group: Group,
    bits: FixedBitSet,
}

impl PartialEq for GSubset {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits && same_group(&self.group, &other.group)
    }
}

impl Eq for GSubset {}

impl std::hash::Hash for GSubset {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.as_slice().hash(state);
    }
}

impl fmt::Debug for GSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn same_group(a: &Group, b: &Group) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GSubset {
    pub fn empty(group: &Group) -> Self {
        GSubset { group: group.clone(), bits: FixedBitSet::with_capacity(group.order()) }
    }

    pub fn full(group: &Group) -> Self {
        let mut s = Self::empty(group);
        s.bits.insert_range(..);
        s
    }

    pub fn singleton(group: &Group, g: usize) -> Self {
        let mut s = Self::empty(group);
        s.bits.insert(g);
        s
    }

    pub fn identity(group: &Group) -> Self {
        Self::singleton(group, group.identity())
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(group: &Group, elems: I) -> Result<Self> {
        let mut s = Self::empty(group);
        for g in elems {
            if g >= group.order() {
                return Err(Error::OutOfRange(g, group.order()));
            }
            s.bits.insert(g);
        }
        Ok(s)
    }

    pub fn from_predicate(group: &Group, pred: impl Fn(usize) -> bool) -> Self {
        let mut s = Self::empty(group);
        for g in 0..group.order() {
            if pred(g) {
                s.bits.insert(g);
            }
        }
        s
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.bits.contains(g)
    }

    pub fn insert(&mut self, g: usize) {
        self.bits.insert(g);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn min_elem(&self) -> Option<usize> {
        self.bits.minimum()
    }

    fn check(&self, other: &GSubset) -> Result<()> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn is_subset(&self, other: &GSubset) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &GSubset) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &GSubset) -> GSubset {
        let mut s = self.clone();
        s.bits.union_with(&other.bits);
        s
    }

    pub fn intersection(&self, other: &GSubset) -> GSubset {
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        s
    }

    pub fn difference(&self, other: &GSubset) -> GSubset {
        let mut s = self.clone();
        s.bits.difference_with(&other.bits);
        s
    }

    pub fn complement(&self) -> GSubset {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }

    /// Elements not in `self`, listed.
    pub fn missing_from(&self, sup: &GSubset) -> Vec<usize> {
        self.difference(sup).to_vec()
    }

    /// `A*B = {ab : a in A, b in B}` under the default execution policy.
    pub fn product(&self, other: &GSubset) -> Result<GSubset> {
        self.product_with(other, Exec::default())
    }

    pub fn product_with(&self, other: &GSubset, exec: Exec) -> Result<GSubset> {
        self.check(other)?;
        Ok(self.product_unchecked(other, exec))
    }

    pub(crate) fn product_unchecked(&self, other: &GSubset, exec: Exec) -> GSubset {
        let g = &self.group;
        let n = g.order();
        let left: Vec<usize> = self.to_vec();
        let right: Vec<usize> = other.to_vec();
        if left.is_empty() || right.is_empty() {
            return GSubset::empty(g);
        }
        // Small products are not worth a thread hop.
        let exec = if left.len() * right.len() < 4096 { Exec::Sequential } else { exec };
        let bits = exec.fold_reduce(
            left.len(),
            || FixedBitSet::with_capacity(n),
            |mut acc, i| {
                let row = g.row(left[i]);
                for &b in &right {
                    acc.insert(row[b] as usize);
                }
                acc
            },
            |mut a, b| {
                a.union_with(&b);
                a
            },
        );
        GSubset { group: g.clone(), bits }
    }

    /// `{a^-1 : a in A}`.
    pub fn inverse_set(&self) -> GSubset {
        let mut s = GSubset::empty(&self.group);
        for a in self.iter() {
            s.bits.insert(self.group.inv(a));
        }
        s
    }

    pub fn translate_left(&self, g: usize) -> GSubset {
        let mut s = GSubset::empty(&self.group);
        let row = self.group.row(g);
        for a in self.iter() {
            s.bits.insert(row[a] as usize);
        }
        s
    }

    pub fn translate_right(&self, g: usize) -> GSubset {
        let mut s = GSubset::empty(&self.group);
        for a in self.iter() {
            s.bits.insert(self.group.mul(a, g));
        }
        s
    }

    pub fn conjugate(&self, g: usize) -> GSubset {
        let mut s = GSubset::empty(&self.group);
        for a in self.iter() {
            s.bits.insert(self.group.conj(g, a));
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        self.contains(self.group.identity()) && self.inverse_set() == *self
    }

    /// Closed under conjugation by every group element.
    pub fn is_normal(&self) -> bool {
        let g = &self.group;
        self.iter().all(|a| (0..g.order()).all(|x| self.contains(g.conj(x, a))))
    }

    /// Union of all conjugates.
    pub fn conjugation_closure(&self) -> GSubset {
        let g = &self.group;
        let mut s = GSubset::empty(g);
        for a in self.iter() {
            for x in 0..g.order() {
                s.bits.insert(g.conj(x, a));
            }
        }
        s
    }

    pub fn is_closed_subgroup(&self) -> bool {
        let g = &self.group;
        self.contains(g.identity())
            && self.iter().all(|a| self.contains(g.inv(a)) && self.iter().all(|b| self.contains(g.mul(a, b))))
    }

    /// The subgroup generated by `self`.
    pub fn generated_subgroup(&self) -> GSubset {
        let g = &self.group;
        let gens = self.union(&self.inverse_set());
        let mut span = GSubset::identity(g);
        let mut frontier: Vec<usize> = vec![g.identity()];
        while let Some(x) = frontier.pop() {
            for s in gens.iter() {
                let y = g.mul(x, s);
                if !span.contains(y) {
                    span.insert(y);
                    frontier.push(y);
                }
            }
        }
        span
    }

    /// `self^k`, with `self^0 = {e}`.
    pub fn power(&self, k: usize) -> GSubset {
        let mut acc = GSubset::identity(&self.group);
        for _ in 0..k {
            acc = acc.product_unchecked(self, Exec::default());
        }
        acc
    }

    /// The largest subgroup `K` with `K*self = self`... only meaningful for
    /// nonempty sets; returns `{k : self*k = self}` (right stabilizer).
    pub fn right_stabilizer(&self) -> GSubset {
        let g = self.group.clone();
        GSubset::from_predicate(&g, |k| self.translate_right(k) == *self)
    }

    /// Largest normal subgroup of `G` contained in the subgroup `self`.
    pub fn normal_core(&self) -> GSubset {
        let g = &self.group;
        let mut core = self.clone();
        for x in 0..g.order() {
            core = core.intersection(&self.conjugate(x));
        }
        core
    }

    pub fn labels(&self) -> Vec<String> {
        self.iter().map(|a| self.group.label(a)).collect()
    }
}

impl Serialize for GSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// `[X, X^2, ..., X^n_max]`.
pub fn power_filtration(x: &GSubset, n_max: usize) -> Result<Vec<GSubset>> {
    power_filtration_with(x, n_max, Exec::default())
}

pub fn power_filtration_with(x: &GSubset, n_max: usize, exec: Exec) -> Result<Vec<GSubset>> {
    if !x.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut out = Vec::with_capacity(n_max);
    if n_max == 0 {
        return Ok(out);
    }
    out.push(x.clone());
    while out.len() < n_max {
        let last = out.last().expect("nonempty");
        let next = last.product_unchecked(x, exec);
        if next == *last {
            // Stabilized at the generated subgroup.
            while out.len() < n_max {
                out.push(next.clone());
            }
            break;
        }
        out.push(next);
    }
    Ok(out)
}

/// `X*X ⊆ F*X` with `|F| = k`.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxWitness {
    pub k: usize,
    pub f: GSubset,
}

impl ApproxWitness {
    pub fn verify(&self, x: &GSubset) -> bool {
        let xx = x.product_unchecked(x, Exec::Sequential);
        self.f.len() == self.k && xx.is_subset(&self.f.product_unchecked(x, Exec::Sequential))
    }
}

pub fn doubling_witness(x: &GSubset) -> Result<ApproxWitness> {
    if !x.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let xx = x.product_unchecked(x, Exec::default());
    let (_, translates) = cover(&xx, x)?;
    let f = GSubset::from_elems(x.group(), translates.iter().copied())?;
    let w = ApproxWitness { k: f.len(), f };
    debug_assert!(w.verify(x));
    Ok(w)
}

/// Left translates `g_i * tile` covering `target`: a greedy cover, replaced
/// by an exact minimum found by exhaustive search over smaller sizes when the
/// greedy answer is small.
pub fn covering_number(target: &GSubset, tile: &GSubset) -> Result<(usize, Vec<usize>)> {
    target.check(tile)?;
    cover(target, tile)
}

fn cover(target: &GSubset, tile: &GSubset) -> Result<(usize, Vec<usize>)> {
    if tile.is_empty() {
        return Err(Error::Empty("cover tile"));
    }
    if target.is_empty() {
        return Ok((0, Vec::new()));
    }
    // Useful translates: g with g*tile meeting target, i.e. g in target*tile^-1.
    // Translates lying wholly inside the target are tried first.
    let mut cands: Vec<usize> = target.product_unchecked(&tile.inverse_set(), Exec::default()).to_vec();
    cands.sort_by_key(|&c| (!tile.translate_left(c).is_subset(target), c));
    let pieces: Vec<GSubset> = cands.iter().map(|&c| tile.translate_left(c).intersection(target)).collect();

    let mut left = target.clone();
    let mut chosen = Vec::new();
    while !left.is_empty() {
        let (best, _) = pieces
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.intersection(&left).len()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("candidates nonempty");
        chosen.push(cands[best]);
        left = left.difference(&pieces[best]);
    }
    let greedy = chosen.len();
    let limit = (greedy - 1).min(EXACT_COVER_LIMIT);
    for size in 1..=limit {
        if let Some(sel) = exact_cover_of_size(target, &pieces, size) {
            let mut t: Vec<usize> = sel.into_iter().map(|i| cands[i]).collect();
            t.sort_unstable();
            return Ok((size, t));
        }
    }
    chosen.sort_unstable();
    Ok((greedy, chosen))
}

fn exact_cover_of_size(target: &GSubset, pieces: &[GSubset], size: usize) -> Option<Vec<usize>> {
    fn rec(
        target: &GSubset,
        pieces: &[GSubset],
        start: usize,
        size: usize,
        acc: &mut Vec<usize>,
        covered: &GSubset,
    ) -> bool {
        if acc.len() == size {
            return target.is_subset(covered);
        }
        for i in start..pieces.len() {
            acc.push(i);
            let c = covered.union(&pieces[i]);
            if rec(target, pieces, i + 1, size, acc, &c) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = Vec::new();
    let empty = GSubset::empty(target.group());
    if rec(target, pieces, 0, size, &mut acc, &empty) {
        Some(acc)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z(n: usize) -> Group {
        FiniteGroup::cyclic(n)
    }

    #[test]
    fn product_in_z6() {
        let g = z(6);
        let a = GSubset::from_elems(&g, [5, 0, 1]).unwrap();
        let p = a.product(&a).unwrap();
        assert_eq!(p.to_vec(), vec![0, 1, 2, 4, 5]);
        assert_eq!(a.product(&GSubset::identity(&g)).unwrap(), a);
        assert!(GSubset::empty(&g).product(&a).unwrap().is_empty());
    }

    #[test]
    fn product_rejects_foreign_subsets() {
        let a = GSubset::full(&z(6));
        let b = GSubset::full(&z(5));
        assert_eq!(a.product(&b), Err(Error::GroupMismatch));
    }

    #[test]
    fn inverse_in_z6() {
        let g = z(6);
        let a = GSubset::from_elems(&g, [1, 2]).unwrap();
        assert_eq!(a.inverse_set().to_vec(), vec![4, 5]);
        let x = GSubset::from_elems(&g, [5, 0, 1]).unwrap();
        assert_eq!(x.inverse_set(), x);
    }

    #[test]
    fn filtration_in_z6() {
        let g = z(6);
        let x = GSubset::from_elems(&g, [5, 0, 1]).unwrap();
        let f = power_filtration(&x, 3).unwrap();
        assert_eq!(f[0], x);
        assert_eq!(f[1].to_vec(), vec![0, 1, 2, 4, 5]);
        assert_eq!(f[2], GSubset::full(&g));
        let e = GSubset::identity(&g);
        assert!(power_filtration(&e, 4).unwrap().iter().all(|s| *s == e));
        let not_sym = GSubset::from_elems(&g, [0, 1]).unwrap();
        assert_eq!(power_filtration(&not_sym, 2), Err(Error::NotSymmetric));
    }

    #[test]
    fn doubling_in_z12() {
        let g = z(12);
        let x = GSubset::from_elems(&g, [11, 0, 1]).unwrap();
        let w = doubling_witness(&x).unwrap();
        assert_eq!(w.k, 2);
        assert_eq!(w.f.to_vec(), vec![1, 11]);
        assert!(w.verify(&x));
        let h = GSubset::from_elems(&g, [0, 4, 8]).unwrap();
        assert_eq!(doubling_witness(&h).unwrap().k, 1);
        assert_eq!(doubling_witness(&GSubset::full(&g)).unwrap().k, 1);
    }

    #[test]
    fn covers_in_z6() {
        let g = z(6);
        let tile = GSubset::from_elems(&g, [5, 0, 1]).unwrap();
        let (k, t) = covering_number(&GSubset::full(&g), &tile).unwrap();
        assert_eq!(k, 2);
        // Exhaustive search over pairs: the covering pairs are {0,3}, {1,4}, {2,5}.
        assert_eq!(t, vec![0, 3]);
        let small = GSubset::from_elems(&g, [0, 1]).unwrap();
        assert_eq!(covering_number(&small, &tile).unwrap().0, 1);
        let (k, _) = covering_number(&GSubset::full(&g), &GSubset::identity(&g)).unwrap();
        assert_eq!(k, 6);
        assert_eq!(covering_number(&small, &GSubset::empty(&g)), Err(Error::Empty("cover tile")));
    }
}
