//! Exact substitution oracle: pick rationals spread far enough apart that
//! the dominant monomial of numerator and denominator outweighs the rest,
//! then evaluate the original expression tree at that point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::expr::Expr;
use super::poly::{Poly, RatFn};
use super::tower::{Kind, Tower};
use crate::error::{Error, Result};

/// Largest per-class exponent (in bits) the oracle will use.
pub const MAX_SPREAD_BITS: u64 = 50_000;

fn log2_bounds(v: &BigRational) -> (i64, i64) {
    let p = v.numer().abs().bits() as i64;
    let q = v.denom().bits() as i64;
    (p - q - 1, p - q + 1)
}

/// Per-class exponents `E_j`; class `j` is set to `2^E_j` (infinite) or
/// `2^-E_j` (infinitesimal). `None` when the spread exceeds the budget.
pub fn spread(t: &Tower, f: &RatFn) -> Option<Vec<u64>> {
    let n = t.len();
    let polys: [&Poly; 2] = [&f.num, &f.den];
    let mut d = vec![0u64; n];
    let mut terms = 1u64;
    let mut r_bits = 0i64;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        terms = terms.max(p.len() as u64);
        for j in 0..n {
            let lo = p.terms.keys().map(|m| m[j]).min().expect("nonempty");
            let hi = p.terms.keys().map(|m| m[j]).max().expect("nonempty");
            d[j] = d[j].max((hi - lo) as u64);
        }
        let lo = p.terms.values().map(|c| log2_bounds(c).0).min().expect("nonempty");
        let hi = p.terms.values().map(|c| log2_bounds(c).1).max().expect("nonempty");
        r_bits = r_bits.max(hi - lo);
    }
    let lg_t = 64 - terms.leading_zeros() as u64;
    let base = lg_t + r_bits.max(0) as u64 + 2;
    let mut e = vec![0u64; n];
    let mut tail = 0u64;
    for j in (0..n).rev() {
        e[j] = tail + base;
        if e[j] > MAX_SPREAD_BITS {
            return None;
        }
        tail += d[j] * e[j];
    }
    Some(e)
}

/// Values of the tower generators at the oracle point.
pub fn point(t: &Tower, e: &[u64]) -> Vec<BigRational> {
    t.classes
        .iter()
        .zip(e)
        .map(|(c, &k)| {
            let p = BigRational::from_integer(num_traits::pow(BigInt::from(2), k as usize));
            match c.kind {
                Kind::Infinite => p,
                Kind::Infinitesimal => p.recip(),
            }
        })
        .collect()
}

/// Value of a named quantity at a point.
pub fn lookup(t: &Tower, at: &[BigRational], name: &str) -> Result<BigRational> {
    let circle = |s: &BigRational, want_x: bool| {
        let one = BigRational::from_integer(1.into());
        let two = BigRational::from_integer(2.into());
        let den = &one + s * s;
        if want_x {
            &two * s * s / den
        } else {
            &two * s / den
        }
    };
    let idx = |n: &str| t.index(n).ok_or_else(|| Error::UnknownGenerator(n.to_string()));
    Ok(match name {
        "x" => circle(&at[idx("s")?], true),
        "y" => circle(&at[idx("s")?], false),
        "x'" => circle(&at[idx("s'")?], true),
        "y'" => circle(&at[idx("s'")?], false),
        "γ" => at[idx("gamma")?].clone(),
        _ => at[idx(name)?].clone(),
    })
}

/// Sign at the oracle point, or `None` when the expression is too large
/// for the budget or a subexpression divides by zero at the point.
pub fn oracle_sign(t: &Tower, e: &Expr) -> Result<Option<i8>> {
    let f = e.to_ratfn(t)?;
    let Some(exps) = spread(t, &f) else { return Ok(None) };
    let at = point(t, &exps);
    match e.eval(&|n| lookup(t, &at, n)) {
        Ok(v) => Ok(Some(if v.is_positive() {
            1
        } else if v.is_zero() {
            0
        } else {
            -1
        })),
        Err(Error::DivisionByZero) => Ok(None),
        Err(err) => Err(err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonstd::expr::parse;

    #[test]
    fn oracle_agrees_on_fixed_cases() {
        let t = Tower::standard();
        for (src, want) in [("(- b 1000000)", 1), ("(- (/ 1 b) x)", -1), ("(- (/ y (- 1 x)) 1/1000)", -1), ("(- c (^ b 5))", 1), ("(- b b)", 0)] {
            let e = parse(src).unwrap();
            assert_eq!(t.sign(&e.to_ratfn(&t).unwrap()), want, "{src}");
            assert_eq!(oracle_sign(&t, &e).unwrap(), Some(want), "{src}");
        }
    }
}
