//! Matrices over the tower, the idempotent `u_G`, the sandwich entry and
//! the cocycle on types.

use serde::Serialize;

use super::poly::RatFn;
use super::tower::Tower;
use crate::error::Result;
use crate::sl2::{h_from_signs, Mat2Q};

/// `(a b; c d)` over the tower.
pub type TMat = [RatFn; 4];

pub fn tmat_mul(p: &TMat, q: &TMat) -> TMat {
    [
        p[0].mul(&q[0]).add(&p[1].mul(&q[2])),
        p[0].mul(&q[1]).add(&p[1].mul(&q[3])),
        p[2].mul(&q[0]).add(&p[3].mul(&q[2])),
        p[2].mul(&q[1]).add(&p[3].mul(&q[3])),
    ]
}

pub fn tmat_det(m: &TMat) -> RatFn {
    m[0].mul(&m[3]).sub(&m[1].mul(&m[2]))
}

pub fn tmat_neg(m: &TMat) -> TMat {
    [m[0].neg(), m[1].neg(), m[2].neg(), m[3].neg()]
}

pub fn tmat_from(t: &Tower, m: &Mat2Q) -> TMat {
    [t.rational(m.a.clone()), t.rational(m.b.clone()), t.rational(m.c.clone()), t.rational(m.d.clone())]
}

/// The matrix realizing `u_G` in the unprimed (`primed = false`) or primed
/// block: `((1-x)b, (1-x)c - y/b; yb, yc + (1-x)/b)`.
pub fn u_g(t: &Tower, primed: bool) -> Result<TMat> {
    let q = if primed { "'" } else { "" };
    let b = t.named(&format!("b{q}"))?;
    let c = t.named(&format!("c{q}"))?;
    let x = t.named(&format!("x{q}"))?;
    let y = t.named(&format!("y{q}"))?;
    let omx = t.int(1).sub(&x);
    let binv = b.recip()?;
    Ok([omx.mul(&b), omx.mul(&c).sub(&y.mul(&binv)), y.mul(&b), y.mul(&c).add(&omx.mul(&binv))])
}

/// Left bottom entry of `A' B A`:
/// `y'b'(α(1-x)b + βyb) + (y'c' + (1-x')/b')(γ(1-x)b + δyb)`.
pub fn ug_sandwich_entry(t: &Tower, bm: &TMat) -> Result<RatFn> {
    let (b, x, y) = (t.named("b")?, t.named("x")?, t.named("y")?);
    let (b1, c1, x1, y1) = (t.named("b'")?, t.named("c'")?, t.named("x'")?, t.named("y'")?);
    let omx = t.int(1).sub(&x);
    let [al, be, ga, de] = bm;
    let first = al.mul(&omx).mul(&b).add(&be.mul(&y).mul(&b));
    let second = ga.mul(&omx).mul(&b).add(&de.mul(&y).mul(&b));
    let left = y1.mul(&b1).mul(&first);
    let right = y1.mul(&c1).add(&t.int(1).sub(&x1).div(&b1)?).mul(&second);
    Ok(left.add(&right))
}

/// Element of the two-element Ellis group `{u_G, q_1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EllisClass {
    #[serde(rename = "u_G")]
    UG,
    #[serde(rename = "q1")]
    Q1,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sandwich {
    pub sign: i8,
    pub class: Option<EllisClass>,
    pub leading: String,
    /// The closed formula equals the entry of the matrix product.
    pub formula_matches: bool,
}

/// `u_G tp(B) u_G`, read off the sign of the sandwich entry.
pub fn ug_sandwich(t: &Tower, bm: &TMat) -> Result<Sandwich> {
    let entry = ug_sandwich_entry(t, bm)?;
    let prod = tmat_mul(&tmat_mul(&u_g(t, true)?, bm), &u_g(t, false)?);
    let formula_matches = prod[2].equals(&entry);
    let rep = t.sign_report(&entry);
    let class = match rep.sign {
        1 => Some(EllisClass::UG),
        -1 => Some(EllisClass::Q1),
        _ => None,
    };
    Ok(Sandwich { sign: rep.sign, class, leading: rep.leading, formula_matches })
}

/// Sign of `c(d)` for a tower matrix.
pub fn branch_sign(t: &Tower, m: &TMat) -> i8 {
    let s = t.sign(&m[2]);
    if s != 0 {
        s
    } else {
        t.sign(&m[3])
    }
}

/// `h(p, q)` for realizations `p`, `q` placed so that `p` sits in a later
/// block than `q`.
pub fn h_on_types(t: &Tower, p: &TMat, q: &TMat) -> i8 {
    h_from_signs(branch_sign(t, p), branch_sign(t, q), branch_sign(t, &tmat_mul(p, q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_g_has_determinant_one() {
        let t = Tower::standard();
        for primed in [false, true] {
            let a = u_g(&t, primed).unwrap();
            assert!(tmat_det(&a).equals(&t.int(1)));
        }
    }
}
