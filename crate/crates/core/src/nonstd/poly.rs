//! Laurent polynomials and quotients of them over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Monomial = Vec<i32>;

/// A Laurent polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(nvars: usize, m: Monomial, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize, exp: i32) -> Self {
        let mut m = vec![0; nvars];
        m[i] = exp;
        Poly::monomial(nvars, m, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        let zero = {
            let e = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *e += c;
            e.is_zero()
        };
        if zero {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Multiply by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone())).collect() }
    }

    /// Single term, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_exponents(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.iter().zip(m).map(|(a, b)| *a.min(b)).collect()))
    }

    /// Value at a point with every variable nonzero.
    pub fn eval(&self, at: &[BigRational]) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in at.iter().zip(m) {
                t *= pow_int(v, e);
            }
            total += t;
        }
        total
    }
}

pub fn pow_int(v: &BigRational, e: i32) -> BigRational {
    let p = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `num / den`, not reduced beyond monomial factors.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars;
        RatFn { num: p, den: Poly::constant(n, BigRational::one()) }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        RatFn::from_poly(Poly::constant(nvars, c))
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        RatFn::constant(nvars, BigRational::from_integer(c.into()))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        RatFn::from_poly(Poly::var(nvars, i, 1))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancel the common monomial factor and fold monomial denominators.
    fn normalize(mut self) -> Self {
        if self.num.is_zero() {
            self.den = Poly::constant(self.nvars(), BigRational::one());
            return self;
        }
        if let Some((m, c)) = self.den.as_monomial() {
            let inv: Vec<i32> = m.iter().map(|e| -e).collect();
            let c = c.recip();
            self.num = self.num.shift(&inv).scale(&c);
            self.den = Poly::constant(self.nvars(), BigRational::one());
            return self;
        }
        let (a, b) = (self.num.min_exponents().expect("nonzero"), self.den.min_exponents().expect("nonzero"));
        let common: Vec<i32> = a.iter().zip(&b).map(|(x, y)| -(*x.min(y))).collect();
        if common.iter().any(|&e| e != 0) {
            self.num = self.num.shift(&common);
            self.den = self.den.shift(&common);
        }
        self
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn { num: self.num.add(&o.num), den: self.den.clone() }.normalize();
        }
        RatFn { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.normalize()
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalize()
    }

    pub fn recip(&self) -> Result<RatFn> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn { num: self.den.clone(), den: self.num.clone() }.normalize())
    }

    pub fn div(&self, o: &RatFn) -> Result<RatFn> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFn> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = RatFn::int(self.nvars(), 1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, o: &RatFn) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn eval(&self, at: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(at) / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_in_two_variables() {
        let x = RatFn::var(2, 0);
        let y = RatFn::var(2, 1);
        let s = x.add(&x);
        assert!(s.equals(&x.mul(&RatFn::int(2, 2))));
        let q = x.mul(&y).div(&y).unwrap();
        assert!(q.equals(&x));
        let z = x.sub(&x);
        assert!(z.is_zero());
        assert!(z.recip().is_err());
        let r = x.add(&y).pow(-1).unwrap();
        assert!(r.mul(&x.add(&y)).equals(&RatFn::int(2, 1)));
    }
}
