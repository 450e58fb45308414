//! `SL_2` over the rationals, the explicit 2-cocycle `h` and the group law of
//! the universal cover `SL_2 × Z`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A 2×2 matrix `(a b; c d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

pub type Mat2Q = Mat2<BigRational>;
pub type Mat2Small = Mat2<Ratio<i64>>;

impl<T: Clone + Signed> Mat2<T> {
    /// Checked constructor: the determinant must be 1.
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let m = Mat2 { a, b, c, d };
        if !m.det().is_one() {
            return Err(Error::Determinant);
        }
        Ok(m)
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn identity() -> Self {
        Mat2 { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = |x: &T, y: &T| x.clone() * y.clone();
        Mat2 {
            a: m(&self.a, &o.a) + m(&self.b, &o.c),
            b: m(&self.a, &o.b) + m(&self.b, &o.d),
            c: m(&self.c, &o.a) + m(&self.d, &o.c),
            d: m(&self.c, &o.b) + m(&self.d, &o.d),
        }
    }

    /// `(d -b; -c a)`.
    pub fn inv(&self) -> Self {
        Mat2 { a: self.d.clone(), b: -self.b.clone(), c: -self.c.clone(), d: self.a.clone() }
    }

    pub fn neg(&self) -> Self {
        Mat2 { a: -self.a.clone(), b: -self.b.clone(), c: -self.c.clone(), d: -self.d.clone() }
    }

    /// Entrywise signs in `{-1, 0, 1}`.
    pub fn sign_pattern(&self) -> [i8; 4] {
        [sgn(&self.a), sgn(&self.b), sgn(&self.c), sgn(&self.d)]
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

pub fn sgn<T: Signed>(x: &T) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// `c(d)`: `c` if `c ≠ 0`, else `d`.
pub fn c_of_d<T: Clone + Signed>(c: &T, d: &T) -> T {
    if c.is_zero() {
        d.clone()
    } else {
        c.clone()
    }
}

/// Sign of `c(d)` of a matrix.
pub fn branch_sign<T: Clone + Signed>(m: &Mat2<T>) -> i8 {
    sgn(&c_of_d(&m.c, &m.d))
}

/// The cocycle from the signs of `c(d)` for `m1`, `m2` and `m1 m2`.
pub fn h_from_signs(s1: i8, s2: i8, s3: i8) -> i8 {
    if s1 > 0 && s2 > 0 && s3 < 0 {
        1
    } else if s1 < 0 && s2 < 0 && s3 > 0 {
        -1
    } else {
        0
    }
}

/// The 2-cocycle `h(m1, m2)`.
pub fn cocycle_h<T: Clone + Signed>(m1: &Mat2<T>, m2: &Mat2<T>) -> i8 {
    let v = h_from_signs(branch_sign(m1), branch_sign(m2), branch_sign(&m1.mul(m2)));
    debug_assert!((-1..=1).contains(&v));
    v
}

/// An element `(m, n)` of the universal cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverElem<T> {
    pub m: Mat2<T>,
    pub n: BigInt,
}

pub type CoverQ = CoverElem<BigRational>;

impl<T: Clone + Signed> CoverElem<T> {
    pub fn new(m: Mat2<T>, n: impl Into<BigInt>) -> Self {
        CoverElem { m, n: n.into() }
    }

    pub fn identity() -> Self {
        CoverElem { m: Mat2::identity(), n: BigInt::zero() }
    }

    /// `(m1 m2, n1 + n2 + h(m1, m2))`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let m = self.m.mul(&o.m);
        if !m.det().is_one() {
            return Err(Error::Determinant);
        }
        let n = &self.n + &o.n + BigInt::from(cocycle_h(&self.m, &o.m));
        Ok(CoverElem { m, n })
    }

    /// `(m^-1, -n - h(m, m^-1))`.
    pub fn inv(&self) -> Self {
        let mi = self.m.inv();
        let h = cocycle_h(&self.m, &mi);
        CoverElem { n: -&self.n - BigInt::from(h), m: mi }
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = CoverElem::identity();
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

/// `h(a,b) + h(ab,c) = h(a,bc) + h(b,c)`.
pub fn cocycle_identity_check<T: Clone + Signed>(a: &Mat2<T>, b: &Mat2<T>, c: &Mat2<T>) -> bool {
    let ab = a.mul(b);
    let bc = b.mul(c);
    let lhs = cocycle_h(a, b) as i32 + cocycle_h(&ab, c) as i32;
    let rhs = cocycle_h(a, &bc) as i32 + cocycle_h(b, c) as i32;
    lhs == rhs
}

/// Outcome of the same-sign-pattern lemma on one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseSignVerdict {
    pub h_inv_b: i8,
    pub h_a_inv: i8,
    /// `(a,0)^-1 (b,0) = (a^-1 b, 0)`.
    pub cover_path: bool,
}

impl InverseSignVerdict {
    pub fn pass(&self) -> bool {
        self.h_inv_b == self.h_a_inv && self.cover_path
    }
}

/// `h(a^-1, b) = h(a, a^-1)` for `a`, `b` with the same entrywise signs.
pub fn inverse_sign_lemma<T: Clone + Signed>(a: &Mat2<T>, b: &Mat2<T>) -> Result<InverseSignVerdict> {
    if a.sign_pattern() != b.sign_pattern() {
        return Err(Error::Precondition("sign patterns differ".into()));
    }
    let ai = a.inv();
    let h_inv_b = cocycle_h(&ai, b);
    let h_a_inv = cocycle_h(a, &ai);
    let lhs = CoverElem::new(a.clone(), 0).inv().mul(&CoverElem::new(b.clone(), 0))?;
    let cover_path = lhs == CoverElem::new(ai.mul(b), 0);
    Ok(InverseSignVerdict { h_inv_b, h_a_inv, cover_path })
}

/// `B = (0 -1; 1 0)`.
pub fn rotation_b<T: Clone + Signed>() -> Mat2<T> {
    Mat2 { a: T::zero(), b: -T::one(), c: T::one(), d: T::zero() }
}

/// One step of the exponent chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub value: u64,
    pub rule: &'static str,
    pub anchor: &'static str,
}

/// Replay `b -> 4b -> 12*4b -> 12*4b + 24` from a bound `b` on the fibre of
/// the identity coset.
pub fn prop53_arithmetic_ledger(f_bound: u64) -> Vec<ChainStep> {
    let p4 = 4 * f_bound;
    let p12 = 12 * p4;
    vec![
        ChainStep { value: f_bound, rule: "{B} x kZ inside X^b", anchor: "\\subseteq X^{14}" },
        ChainStep { value: p4, rule: "(B,0)^4 = (I,1), so {I} x (1+kZ) inside X^(4b)", anchor: "X^{14 \\cdot 4}=X^{56}" },
        ChainStep { value: p12, rule: "twelve factors cover {-12..12} + kZ", anchor: "X^{56\\cdot 12}=X^{672}" },
        ChainStep { value: p12 + 24, rule: "every g has some (g,n), |n| <= 12, in X^24", anchor: "X^{672+24}=X^{696}" },
    ]
}

/// Bounded-height positive rational `p/q` with `1 <= p, q <= h`.
fn small_pos(rng: &mut impl Rng, h: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(1..=h)), BigInt::from(rng.gen_range(1..=h)))
}

fn signed(rng: &mut impl Rng, h: i64, sign: i8) -> BigRational {
    match sign {
        0 => BigRational::zero(),
        s if s > 0 => small_pos(rng, h),
        _ => -small_pos(rng, h),
    }
}

/// A random element of `SL_2(Q)` with entries of bounded height; a share of
/// the samples has `c = 0` to exercise that branch.
pub fn random_mat(rng: &mut impl Rng) -> Mat2Q {
    let h = 9;
    let any = |rng: &mut dyn rand::RngCore| rng.gen_range(-1i8..=1);
    let nonzero = |rng: &mut dyn rand::RngCore| if rng.gen_bool(0.5) { 1i8 } else { -1 };
    loop {
        if rng.gen_range(0..6) == 0 {
            // c = 0: a = 1/d.
            let sd = nonzero(rng);
            let d = signed(rng, h, sd);
            let sb = any(rng);
            let b = signed(rng, h, sb);
            return Mat2::new(d.recip(), b, BigRational::zero(), d).expect("det 1");
        }
        let (sa, sb, sc) = (any(rng), any(rng), nonzero(rng));
        let a = signed(rng, h, sa);
        let b = signed(rng, h, sb);
        let c = signed(rng, h, sc);
        if a.is_zero() {
            // bc = -1.
            if b.is_zero() {
                continue;
            }
            let sd = any(rng);
            let d = signed(rng, h, sd);
            return Mat2::new(a, b.clone(), -b.recip(), d).expect("det 1");
        }
        let d = (BigRational::one() + &b * &c) / &a;
        return Mat2::new(a, b, c, d).expect("det 1");
    }
}

/// A random matrix with the given entrywise sign pattern, by rejection.
pub fn random_with_pattern(rng: &mut impl Rng, pat: [i8; 4]) -> Mat2Q {
    let h = 9;
    loop {
        let m = if pat[0] == 0 {
            // a = 0 forces bc = -1.
            let b = signed(rng, h, pat[1]);
            if b.is_zero() {
                unreachable!("a = 0 forces b != 0");
            }
            Mat2 { a: BigRational::zero(), c: -b.recip(), b, d: signed(rng, h, pat[3]) }
        } else {
            let a = signed(rng, h, pat[0]);
            let b = signed(rng, h, pat[1]);
            let c = signed(rng, h, pat[2]);
            let d = (BigRational::one() + &b * &c) / &a;
            Mat2 { a, b, c, d }
        };
        if m.sign_pattern() == pat && m.det().is_one() {
            return m;
        }
    }
}

/// All matrices with entries in `{-2, -1, -1/2, 0, 1/2, 1, 2}` and
/// determinant 1.
pub fn small_grid() -> Vec<Mat2Small> {
    let vals: Vec<Ratio<i64>> = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)].iter().map(|&(p, q)| Ratio::new(p, q)).collect();
    let mut out = Vec::new();
    for a in &vals {
        for b in &vals {
            for c in &vals {
                for d in &vals {
                    if let Ok(m) = Mat2::new(*a, *b, *c, *d) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// The grid scaled by 2, so every entry is an integer. `h` only sees
/// signs, which positive scaling keeps.
pub fn scaled_grid() -> Vec<Mat2<i64>> {
    let s = |x: &Ratio<i64>| (x * 2).to_integer();
    small_grid().iter().map(|m| Mat2 { a: s(&m.a), b: s(&m.b), c: s(&m.c), d: s(&m.d) }).collect()
}

/// First triple `(x, y, z)` of grid indices where the cocycle identity
/// fails, scanning `x` rows with `exec`.
pub fn grid_cocycle_violation(exec: crate::exec::Exec) -> Option<(usize, usize, usize)> {
    let grid = scaled_grid();
    let g = grid.len();
    let prod: Vec<Mat2<i64>> = (0..g * g).map(|k| grid[k / g].mul(&grid[k % g])).collect();
    let h: Vec<i8> = (0..g * g).map(|k| cocycle_h(&grid[k / g], &grid[k % g])).collect();
    let row = |x: usize| {
        (0..g).find_map(|y| {
            (0..g)
                .find(|&z| {
                    let lhs = h[x * g + y] as i32 + cocycle_h(&prod[x * g + y], &grid[z]) as i32;
                    let rhs = cocycle_h(&grid[x], &prod[y * g + z]) as i32 + h[y * g + z] as i32;
                    lhs != rhs
                })
                .map(|z| (x, y, z))
        })
    };
    exec.map(g, row).into_iter().flatten().next()
}
