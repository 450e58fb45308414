//! The ordered tower: generators of the rationals, each an archimedean class
//! of its own, listed from most to least dominant.
//!
//! Class `i` dominates class `j > i`: an infinite generator of class `i`
//! exceeds every power of the later generators, and an infinitesimal of
//! class `i` is below every positive power of them. The sign of a Laurent
//! polynomial is the sign of the coefficient of its dominant monomial.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::poly::{Monomial, Poly, RatFn};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Infinite,
    Infinitesimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Class {
    pub name: String,
    pub kind: Kind,
    pub block: usize,
}

/// Largest number of terms [`Tower::expand`] produces.
pub const EXPAND_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tower {
    pub classes: Vec<Class>,
}

/// A sign together with the monomial that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub sign: i8,
    pub leading: String,
}

impl Tower {
    /// Two blocks `(c, b, s)` and `(c', b', s')` with the infinitesimal
    /// `gamma` between them. Inside a block `c` dominates `b`, and the
    /// circle parameter `s` is milder than both. Every later class is milder
    /// than every earlier one: this is what finite satisfiability in the
    /// reals forces on the later block.
    pub fn standard() -> Tower {
        let c = |name: &str, kind, block| Class { name: name.to_string(), kind, block };
        Tower {
            classes: vec![
                c("c", Kind::Infinite, 0),
                c("b", Kind::Infinite, 0),
                c("s", Kind::Infinitesimal, 0),
                c("gamma", Kind::Infinitesimal, 1),
                c("c'", Kind::Infinite, 2),
                c("b'", Kind::Infinite, 2),
                c("s'", Kind::Infinitesimal, 2),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn gen(&self, name: &str) -> Result<RatFn> {
        let i = self.index(name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(RatFn::var(self.len(), i))
    }

    pub fn int(&self, v: i64) -> RatFn {
        RatFn::int(self.len(), v)
    }

    pub fn rational(&self, v: BigRational) -> RatFn {
        RatFn::constant(self.len(), v)
    }

    /// `x = 2s^2 / (1 + s^2)` for the circle parameter of a block.
    pub fn x_of(&self, s_name: &str) -> Result<RatFn> {
        let s = self.gen(s_name)?;
        let s2 = s.mul(&s);
        self.int(2).mul(&s2).div(&self.int(1).add(&s2))
    }

    /// `y = 2s / (1 + s^2)`, so that `(1 - x)^2 + y^2 = 1` and `y > 0`.
    pub fn y_of(&self, s_name: &str) -> Result<RatFn> {
        let s = self.gen(s_name)?;
        self.int(2).mul(&s).div(&self.int(1).add(&s.mul(&s)))
    }

    /// Named value: a generator, or `x`, `y` (`x'`, `y'`) of a block.
    pub fn named(&self, name: &str) -> Result<RatFn> {
        match name {
            "x" => self.x_of("s"),
            "y" => self.y_of("s"),
            "x'" => self.x_of("s'"),
            "y'" => self.y_of("s'"),
            "γ" => self.gen("gamma"),
            _ => self.gen(name),
        }
    }

    fn key(&self, m: &[i32]) -> Vec<i32> {
        m.iter()
            .zip(&self.classes)
            .map(|(&e, c)| match c.kind {
                Kind::Infinite => -e,
                Kind::Infinitesimal => e,
            })
            .collect()
    }

    /// Compare monomials by magnitude.
    pub fn cmp_monomials(&self, a: &[i32], b: &[i32]) -> Ordering {
        // Smaller key means larger magnitude.
        self.key(b).cmp(&self.key(a))
    }

    /// Dominant term of a nonzero polynomial.
    pub fn leading<'a>(&self, p: &'a Poly) -> Option<(&'a Monomial, &'a BigRational)> {
        p.terms.iter().min_by(|(a, _), (b, _)| self.key(a).cmp(&self.key(b)))
    }

    pub fn sign_poly(&self, p: &Poly) -> i8 {
        match self.leading(p) {
            None => 0,
            Some((_, c)) => {
                if c.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn sign(&self, f: &RatFn) -> i8 {
        self.sign_poly(&f.num) * self.sign_poly(&f.den)
    }

    pub fn sign_report(&self, f: &RatFn) -> SignReport {
        let sign = self.sign(f);
        let leading = if sign == 0 { "0".to_string() } else { self.fmt_terms(&self.expand(f, 1)) };
        SignReport { sign, leading }
    }

    pub fn cmp(&self, a: &RatFn, b: &RatFn) -> Ordering {
        self.sign(&a.sub(b)).cmp(&0)
    }

    /// The first `depth` terms (capped at [`EXPAND_CAP`]) of the expansion of
    /// `f` in decreasing magnitude, by long division of dominant terms.
    pub fn expand(&self, f: &RatFn, depth: usize) -> Vec<(Monomial, BigRational)> {
        let depth = depth.min(EXPAND_CAP);
        let mut out = Vec::new();
        let Some((dm, dc)) = self.leading(&f.den) else { return out };
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = f.num.clone();
        while out.len() < depth {
            let Some((m, c)) = self.leading(&rem) else { break };
            let qm: Monomial = m.iter().zip(&dm).map(|(a, b)| a - b).collect();
            let qc = c / &dc;
            let term = Poly::monomial(rem.nvars, qm.clone(), qc.clone());
            rem = rem.sub(&f.den.mul(&term));
            out.push((qm, qc));
        }
        out
    }

    pub fn fmt_monomial(&self, m: &[i32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.classes)
            .filter(|(e, _)| **e != 0)
            .map(|(e, c)| if *e == 1 { c.name.clone() } else { format!("{}^{}", c.name, e) })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn fmt_terms(&self, terms: &[(Monomial, BigRational)]) -> String {
        if terms.is_empty() {
            return "0".to_string();
        }
        terms
            .iter()
            .map(|(m, c)| {
                let mono = self.fmt_monomial(m);
                if mono == "1" {
                    c.to_string()
                } else if c.is_one() {
                    mono
                } else if (-c).is_one() {
                    format!("-{mono}")
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `(1 - x)^2 + y^2 - 1` for both blocks, which must vanish.
    pub fn relations_hold(&self) -> Result<bool> {
        for s in ["s", "s'"] {
            let one = self.int(1);
            let x = self.x_of(s)?;
            let y = self.y_of(s)?;
            let r = one.sub(&x).pow(2)?.add(&y.pow(2)?).sub(&one);
            if !r.is_zero() {
                return Ok(false);
            }
            // y^2 = 2x - x^2
            if !y.pow(2)?.equals(&self.int(2).mul(&x).sub(&x.pow(2)?)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Default for Tower {
    fn default() -> Self {
        Tower::standard()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_signs() {
        let t = Tower::standard();
        let b = t.gen("b").unwrap();
        let x = t.named("x").unwrap();
        let y = t.named("y").unwrap();
        assert_eq!(t.sign(&b.sub(&t.int(1_000_000))), 1);
        assert_eq!(t.sign(&b.recip().unwrap().sub(&x)), -1);
        let ratio = y.div(&t.int(1).sub(&x)).unwrap();
        assert_eq!(t.sign(&ratio.sub(&t.rational(BigRational::new(1.into(), 1000.into())))), -1);
        assert_eq!(t.sign(&ratio), 1);
        // Later infinite generators are smaller, later infinitesimals larger.
        assert_eq!(t.sign(&b.sub(&t.gen("b'").unwrap())), 1);
        assert_eq!(t.sign(&t.gen("gamma").unwrap().sub(&x)), 1);
        assert!(t.relations_hold().unwrap());
    }

    #[test]
    fn geometric_expansion() {
        let t = Tower::standard();
        let x = t.named("x").unwrap();
        let inv = t.int(1).sub(&x).recip().unwrap();
        let terms = t.expand(&inv, 3);
        // (1 + s^2) / (1 - s^2) = 1 + 2 s^2 + 2 s^4 + ...
        assert_eq!(t.fmt_terms(&terms), "1 + 2*s^2 + 2*s^4");
        assert_eq!(t.expand(&inv, 1000).len(), EXPAND_CAP);
    }
}
