//! Finite groups with dense element indexing.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::GSubset;

pub type Group = Arc<FiniteGroup>;

/// Largest order for which table input is checked for associativity on all
/// triples; above it a seeded sample of triples is used.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;
const SAMPLED_ASSOC_TRIPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Table,
    PermutationGenerators,
    MatrixGeneratorsOverPrimeField,
    CentralExtension,
}

/// A finite group on the indices `0..order`.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    identity: usize,
    labels: Option<Vec<String>>,
    provenance: Provenance,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Row `a` of the table: `b -> a*b`.
    #[inline]
    pub fn row(&self, a: usize) -> &[u32] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Build a group from a Cayley table, validating every group axiom.
    pub fn from_table(rows: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Group> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty("group table"));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", r.len())));
            }
            for &x in r {
                if x >= n {
                    return Err(Error::OutOfRange(x, n));
                }
                table.push(x as u32);
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidTable("label count differs from order".into()));
            }
        }
        Self::assemble(n, table, labels, Provenance::Table, true).map(Arc::new)
    }

    fn assemble(
        n: usize,
        table: Vec<u32>,
        labels: Option<Vec<String>>,
        provenance: Provenance,
        check_assoc: bool,
    ) -> Result<FiniteGroup> {
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no two-sided identity".into()))?;
        let mut inv = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {a} has no inverse")))?;
            if at(b, a) != identity {
                return Err(Error::InvalidTable(format!("inverse of {a} is one-sided")));
            }
            inv[a] = b as u32;
        }
        let g = FiniteGroup { order: n, table, inv, identity, labels, provenance };
        if check_assoc {
            g.check_associative()?;
        }
        Ok(g)
    }

    /// Exhaustive on small orders, seeded sampling above
    /// [`EXHAUSTIVE_ASSOC_LIMIT`].
    pub fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c));
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            let hit = crate::Exec::default().find_first(n, |a| {
                (0..n).any(|b| (0..n).any(|c| bad(a, b, c)))
            });
            if let Some(a) = hit {
                let (b, c) = (0..n)
                    .flat_map(|b| (0..n).map(move |c| (b, c)))
                    .find(|&(b, c)| bad(a, b, c))
                    .expect("witness exists");
                return Err(Error::NotAssociative(a, b, c));
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if bad(a, b, c) {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Enumerate the closure of `gens` under `op` starting from `identity`.
    /// Index 0 is the identity; the rest follow breadth-first discovery.
    fn closure<T, F>(identity: T, gens: &[T], op: F, label: impl Fn(&T) -> String) -> (Vec<u32>, Vec<String>, usize)
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = op(&elems[i], g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = index[&op(&elems[a], &elems[b])] as u32;
            }
        }
        let labels = elems.iter().map(label).collect();
        (table, labels, n)
    }

    /// The group generated by permutations of `0..degree`, composed right to
    /// left: `(p*q)(i) = p(q(i))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<Group> {
        for p in gens {
            if p.len() != degree {
                return Err(Error::InvalidTable(format!("permutation {p:?} has wrong degree")));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || seen[x] {
                    return Err(Error::InvalidTable(format!("{p:?} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let (table, labels, n) = Self::closure(
            id,
            gens,
            |p, q| q.iter().map(|&i| p[i]).collect(),
            |p| format!("{p:?}"),
        );
        Self::assemble(n, table, Some(labels), Provenance::PermutationGenerators, false).map(Arc::new)
    }

    /// The group generated by invertible `dim x dim` matrices over `Z/p`.
    pub fn from_matrices(p: u32, dim: usize, gens: &[Vec<u32>]) -> Result<Group> {
        if !(2..=13).contains(&p) || !(2..p).all(|d| d * d > p || p % d != 0) {
            return Err(Error::Precondition(format!("modulus {p} must be a prime <= 13")));
        }
        for m in gens {
            if m.len() != dim * dim || m.iter().any(|&x| x >= p) {
                return Err(Error::InvalidTable(format!("matrix {m:?} malformed")));
            }
        }
        let mut id = vec![0u32; dim * dim];
        for i in 0..dim {
            id[i * dim + i] = 1;
        }
        let mul = |a: &Vec<u32>, b: &Vec<u32>| {
            let mut c = vec![0u32; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    let mut s = 0u32;
                    for k in 0..dim {
                        s = (s + a[i * dim + k] * b[k * dim + j]) % p;
                    }
                    c[i * dim + j] = s;
                }
            }
            c
        };
        // Invertibility: some power returns to the identity.
        for m in gens {
            let mut x = m.clone();
            let mut steps = 0usize;
            while x != id {
                x = mul(&x, m);
                steps += 1;
                if steps > (p as usize).pow((dim * dim) as u32) {
                    return Err(Error::InvalidTable(format!("matrix {m:?} is singular")));
                }
            }
        }
        let (table, labels, n) = Self::closure(id, gens, mul, |m| format!("{m:?}"));
        Self::assemble(n, table, Some(labels), Provenance::MatrixGeneratorsOverPrimeField, false).map(Arc::new)
    }

    /// Central extension of `base` by `Z/m` with law
    /// `(a,i)(b,j) = (ab, i+j+c(a,b))`. Element `(a,i)` has index `a*m+i`.
    pub fn central_extension<F>(base: &FiniteGroup, m: usize, cocycle: F) -> Result<Group>
    where
        F: Fn(usize, usize) -> i64,
    {
        if m == 0 {
            return Err(Error::Precondition("extension modulus must be positive".into()));
        }
        let nb = base.order;
        let mi = m as i64;
        let c: Vec<i64> = (0..nb * nb).map(|k| cocycle(k / nb, k % nb).rem_euclid(mi)).collect();
        let cc = |a: usize, b: usize| c[a * nb + b];
        for a in 0..nb {
            for b in 0..nb {
                for x in 0..nb {
                    let lhs = cc(a, b) + cc(base.mul(a, b), x);
                    let rhs = cc(a, base.mul(b, x)) + cc(b, x);
                    if (lhs - rhs).rem_euclid(mi) != 0 {
                        return Err(Error::CocycleViolation(a, b, x));
                    }
                }
            }
        }
        let n = nb * m;
        let mut table = vec![0u32; n * n];
        for a in 0..nb {
            for i in 0..m {
                for b in 0..nb {
                    for j in 0..m {
                        let k = (i as i64 + j as i64 + cc(a, b)).rem_euclid(mi) as usize;
                        table[(a * m + i) * n + b * m + j] = (base.mul(a, b) * m + k) as u32;
                    }
                }
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", base.label(x / m), x % m)).collect();
        Self::assemble(n, table, Some(labels), Provenance::CentralExtension, true).map(Arc::new)
    }

    pub fn cyclic(n: usize) -> Group {
        assert!(n > 0);
        let table = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Arc::new(FiniteGroup {
            order: n,
            table,
            inv: (0..n).map(|i| ((n - i) % n) as u32).collect(),
            identity: 0,
            labels: Some(labels),
            provenance: Provenance::Table,
        })
    }

    /// Dihedral group of order `2n` acting on an `n`-gon (`n >= 3`), or the
    /// Klein group for `n = 2`.
    pub fn dihedral(n: usize) -> Group {
        assert!(n >= 2);
        if n == 2 {
            return Self::direct_product(&Self::cyclic(2), &Self::cyclic(2));
        }
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(n, &[r, s]).expect("valid permutations")
    }

    pub fn symmetric(n: usize) -> Group {
        assert!(n >= 1);
        if n == 1 {
            return Self::cyclic(1);
        }
        let mut cyc: Vec<usize> = (1..n).collect();
        cyc.push(0);
        let mut tr: Vec<usize> = (0..n).collect();
        tr.swap(0, 1);
        Self::from_permutations(n, &[cyc, tr]).expect("valid permutations")
    }

    pub fn alternating(n: usize) -> Group {
        assert!(n >= 3);
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(n, &gens).expect("valid permutations")
    }

    /// Quaternion group of order 8, generated by two matrices over `Z/3`.
    pub fn quaternion() -> Group {
        Self::from_matrices(3, 2, &[vec![0, 2, 1, 0], vec![1, 1, 1, 2]]).expect("Q8 generators")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Group {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let (x1, x2) = (x / nb, x % nb);
                let (y1, y2) = (y / nb, y % nb);
                table[x * n + y] = (a.mul(x1, y1) * nb + b.mul(x2, y2)) as u32;
            }
        }
        let labels = (0..n).map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb))).collect();
        Arc::new(
            Self::assemble(n, table, Some(labels), Provenance::Table, false).expect("product of groups"),
        )
    }

    /// The subgroup on `set` (which must be closed under products and
    /// inverses), reindexed densely. Returns the group and the embedding.
    pub fn subgroup(&self, set: &GSubset) -> Result<(Group, Vec<usize>)> {
        let elems: Vec<usize> = set.iter().collect();
        if !set.contains(self.identity) || !set.is_closed_subgroup() {
            return Err(Error::Precondition("set is not a subgroup".into()));
        }
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                table[i * n + j] = pos[self.mul(a, b)] as u32;
            }
        }
        let labels = elems.iter().map(|&e| self.label(e)).collect();
        let g = Self::assemble(n, table, Some(labels), self.provenance, false)?;
        Ok((Arc::new(g), elems))
    }

    /// `G/N` for a normal subgroup `N`. Returns the quotient and the
    /// projection, with cosets numbered by least representative.
    pub fn quotient(&self, normal: &GSubset) -> Result<(Group, Vec<usize>)> {
        if !normal.contains(self.identity) || !normal.is_closed_subgroup() || !normal.is_normal() {
            return Err(Error::Precondition("not a normal subgroup".into()));
        }
        let mut proj = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if proj[g] != usize::MAX {
                continue;
            }
            let k = reps.len();
            reps.push(g);
            for x in normal.iter() {
                proj[self.mul(g, x)] = k;
            }
        }
        let q = reps.len();
        let mut table = vec![0u32; q * q];
        for i in 0..q {
            for j in 0..q {
                table[i * q + j] = proj[self.mul(reps[i], reps[j])] as u32;
            }
        }
        let labels = reps.iter().map(|&r| format!("{}N", self.label(r))).collect();
        let g = Self::assemble(q, table, Some(labels), Provenance::Table, false)?;
        Ok((Arc::new(g), proj))
    }

    /// A small generating set, chosen greedily by element index.
    pub fn generators(self: &Arc<Self>) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = GSubset::singleton(self, self.identity);
        for g in 0..self.order {
            if !span.contains(g) {
                gens.push(g);
                let mut s = span.clone();
                s.insert(g);
                span = s.generated_subgroup();
            }
        }
        gens
    }

    /// An isomorphism `self -> other` as an index map, if one exists.
    /// Backtracks over images of a generating set.
    pub fn find_isomorphism(self: &Arc<Self>, other: &Arc<Self>) -> Option<Vec<usize>> {
        if self.order != other.order {
            return None;
        }
        let n = self.order;
        let gens = self.generators();
        // Each element as a word: BFS tree over generators.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut order = vec![self.identity];
        let mut seen = vec![false; n];
        seen[self.identity] = true;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for (gi, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, gi));
                    order.push(y);
                }
            }
            i += 1;
        }
        let ord_a: Vec<usize> = (0..n).map(|x| self.element_order(x)).collect();
        let ord_b: Vec<usize> = (0..n).map(|x| other.element_order(x)).collect();
        let mut images = vec![0usize; gens.len()];
        let try_extend = |images: &[usize]| -> Option<Vec<usize>> {
            let mut phi = vec![usize::MAX; n];
            phi[self.identity] = other.identity;
            for &x in order.iter().skip(1) {
                let (p, gi) = parent[x].expect("bfs parent");
                phi[x] = other.mul(phi[p], images[gi]);
            }
            let mut hit = vec![false; n];
            for &y in &phi {
                if hit[y] {
                    return None;
                }
                hit[y] = true;
            }
            for a in 0..n {
                for b in 0..n {
                    if phi[self.mul(a, b)] != other.mul(phi[a], phi[b]) {
                        return None;
                    }
                }
            }
            Some(phi)
        };
        fn rec(
            k: usize,
            gens: &[usize],
            images: &mut Vec<usize>,
            ord_a: &[usize],
            ord_b: &[usize],
            n: usize,
            f: &dyn Fn(&[usize]) -> Option<Vec<usize>>,
        ) -> Option<Vec<usize>> {
            if k == gens.len() {
                return f(images);
            }
            for y in 0..n {
                if ord_b[y] == ord_a[gens[k]] {
                    images[k] = y;
                    if let Some(phi) = rec(k + 1, gens, images, ord_a, ord_b, n, f) {
                        return Some(phi);
                    }
                }
            }
            None
        }
        rec(0, &gens, &mut images, &ord_a, &ord_b, n, &try_extend)
    }

    /// True iff `phi` is a bijective homomorphism `self -> other`.
    pub fn is_isomorphism(&self, other: &FiniteGroup, phi: &[usize]) -> bool {
        let n = self.order;
        if other.order != n || phi.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &y in phi {
            if y >= n || hit[y] {
                return false;
            }
            hit[y] = true;
        }
        (0..n).all(|a| (0..n).all(|b| phi[self.mul(a, b)] == other.mul(phi[a], phi[b])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_table_is_addition() {
        let g = FiniteGroup::cyclic(6);
        assert_eq!(g.mul(4, 5), 3);
        assert_eq!(g.inv(2), 4);
        g.check_associative().unwrap();
    }

    #[test]
    fn constructors_have_expected_orders() {
        assert_eq!(FiniteGroup::dihedral(5).order(), 10);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::alternating(4).order(), 12);
        let q = FiniteGroup::quaternion();
        assert_eq!(q.order(), 8);
        // Q8 has a unique element of order 2 and six of order 4.
        let orders: Vec<usize> = q.elements().map(|x| q.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        let sl = FiniteGroup::from_matrices(3, 2, &[vec![1, 1, 0, 1], vec![1, 0, 1, 1]]).unwrap();
        assert_eq!(sl.order(), 24);
    }

    #[test]
    fn table_validation_rejects_broken_tables() {
        assert!(matches!(
            FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None),
            Err(Error::InvalidTable(_))
        ));
        // A loop that is not associative: the Moufang-free quasigroup of order 5
        // with identity 0 built from a Latin square.
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(rows, None), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn extension_of_z2_by_z2_with_nontrivial_cocycle_is_z4() {
        let base = FiniteGroup::cyclic(2);
        let e = FiniteGroup::central_extension(&base, 2, |a, b| (a == 1 && b == 1) as i64).unwrap();
        let z4 = FiniteGroup::cyclic(4);
        let phi = e.find_isomorphism(&z4).expect("isomorphic to Z/4");
        assert!(e.is_isomorphism(&z4, &phi));
        let klein = FiniteGroup::dihedral(2);
        assert!(e.find_isomorphism(&klein).is_none());
    }

    #[test]
    fn trivial_cocycle_gives_direct_product() {
        let base = FiniteGroup::cyclic(3);
        let e = FiniteGroup::central_extension(&base, 2, |_, _| 0).unwrap();
        let p = FiniteGroup::direct_product(&base, &FiniteGroup::cyclic(2));
        assert!(e.find_isomorphism(&p).is_some());
    }

    #[test]
    fn bad_cocycle_is_rejected() {
        let base = FiniteGroup::cyclic(3);
        let r = FiniteGroup::central_extension(&base, 2, |a, b| (a == 1 && b == 2) as i64);
        assert!(matches!(r, Err(Error::CocycleViolation(..))));
    }

    #[test]
    fn quotient_of_z6_by_evens() {
        let g = FiniteGroup::cyclic(6);
        let n = GSubset::from_elems(&g, [0, 2, 4]).unwrap();
        let (q, proj) = g.quotient(&n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1, 0, 1]);
    }
}
