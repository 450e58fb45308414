//! Expression trees over the tower, a prefix text form, and random
//! expressions for the oracle suite.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::poly::{pow_int, RatFn};
use super::tower::Tower;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn num(v: i64) -> Expr {
        Expr::Num(BigRational::from_integer(v.into()))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn to_ratfn(&self, t: &Tower) -> Result<RatFn> {
        Ok(match self {
            Expr::Num(v) => t.rational(v.clone()),
            Expr::Var(n) => t.named(n)?,
            Expr::Neg(a) => a.to_ratfn(t)?.neg(),
            Expr::Add(a, b) => a.to_ratfn(t)?.add(&b.to_ratfn(t)?),
            Expr::Sub(a, b) => a.to_ratfn(t)?.sub(&b.to_ratfn(t)?),
            Expr::Mul(a, b) => a.to_ratfn(t)?.mul(&b.to_ratfn(t)?),
            Expr::Div(a, b) => a.to_ratfn(t)?.div(&b.to_ratfn(t)?)?,
            Expr::Pow(a, e) => a.to_ratfn(t)?.pow(*e)?,
        })
    }

    /// Exact value with `lookup` giving each variable.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Result<BigRational>) -> Result<BigRational> {
        Ok(match self {
            Expr::Num(v) => v.clone(),
            Expr::Var(n) => lookup(n)?,
            Expr::Neg(a) => -a.eval(lookup)?,
            Expr::Add(a, b) => a.eval(lookup)? + b.eval(lookup)?,
            Expr::Sub(a, b) => a.eval(lookup)? - b.eval(lookup)?,
            Expr::Mul(a, b) => a.eval(lookup)? * b.eval(lookup)?,
            Expr::Div(a, b) => {
                let d = b.eval(lookup)?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                a.eval(lookup)? / d
            }
            Expr::Pow(a, e) => {
                let v = a.eval(lookup)?;
                if v.is_zero() && *e < 0 {
                    return Err(Error::DivisionByZero);
                }
                pow_int(&v, *e)
            }
        })
    }

    /// Variable names occurring in the expression.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Var(n) => out.push(n.clone()),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(n) => write!(f, "{n}"),
            Expr::Neg(a) => write!(f, "(- {a})"),
            Expr::Add(a, b) => write!(f, "(+ {a} {b})"),
            Expr::Sub(a, b) => write!(f, "(- {a} {b})"),
            Expr::Mul(a, b) => write!(f, "(* {a} {b})"),
            Expr::Div(a, b) => write!(f, "(/ {a} {b})"),
            Expr::Pow(a, e) => write!(f, "(^ {a} {e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(usize, Tok)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' | ')' | ' ' | '\t' | '\n' | '\r' => {
                if !cur.is_empty() {
                    out.push((start, Tok::Atom(std::mem::take(&mut cur))));
                }
                if ch == '(' {
                    out.push((i, Tok::Open));
                } else if ch == ')' {
                    out.push((i, Tok::Close));
                }
            }
            _ => {
                if cur.is_empty() {
                    start = i;
                }
                cur.push(ch);
            }
        }
    }
    if !cur.is_empty() {
        out.push((start, Tok::Atom(cur)));
    }
    out
}

fn parse_number(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((w, frac)) = s.split_once('.') {
        let digits = format!("{w}{frac}");
        let p: BigInt = digits.parse().ok()?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(p, q));
    }
    if let Some((m, e)) = s.split_once('e') {
        let m: BigInt = m.parse().ok()?;
        let e: usize = e.parse().ok()?;
        return Some(BigRational::from_integer(m * num_traits::pow(BigInt::from(10), e)));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: 1, msg: format!("column {}: {}", pos + 1, msg.into()) }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn expr(&mut self) -> Result<Expr> {
        let (pos, tok) = self.toks.get(self.at).cloned().ok_or_else(|| perr(self.end, "unexpected end of input"))?;
        self.at += 1;
        match tok {
            Tok::Close => Err(perr(pos, "unexpected ')'")),
            Tok::Atom(a) => Ok(match parse_number(&a) {
                Some(v) => Expr::Num(v),
                None => Expr::Var(a),
            }),
            Tok::Open => {
                let (opos, op) = match self.toks.get(self.at).cloned() {
                    Some((p, Tok::Atom(op))) => (p, op),
                    _ => return Err(perr(pos, "expected an operator after '('")),
                };
                self.at += 1;
                let mut args = Vec::new();
                loop {
                    match self.toks.get(self.at) {
                        Some((_, Tok::Close)) => {
                            self.at += 1;
                            break;
                        }
                        Some(_) => args.push(self.expr()?),
                        None => return Err(perr(self.end, "missing ')'")),
                    }
                }
                build(opos, &op, args)
            }
        }
    }
}

fn build(pos: usize, op: &str, mut args: Vec<Expr>) -> Result<Expr> {
    let fold = |args: Vec<Expr>, f: fn(Box<Expr>, Box<Expr>) -> Expr| {
        let mut it = args.into_iter();
        let first = it.next().expect("checked nonempty");
        it.fold(first, |acc, e| f(Box::new(acc), Box::new(e)))
    };
    match (op, args.len()) {
        (_, 0) => Err(perr(pos, format!("'{op}' needs arguments"))),
        ("-", 1) => Ok(Expr::Neg(Box::new(args.pop().expect("one")))),
        ("+", _) => Ok(fold(args, Expr::Add)),
        ("*", _) => Ok(fold(args, Expr::Mul)),
        ("-", _) => Ok(fold(args, Expr::Sub)),
        ("/", 2) => Ok(fold(args, Expr::Div)),
        ("^", 2) => match &args[1] {
            Expr::Num(v) if v.is_integer() => {
                let e: i32 = v.to_integer().try_into().map_err(|_| perr(pos, "exponent out of range"))?;
                Ok(Expr::Pow(Box::new(args.swap_remove(0)), e))
            }
            _ => Err(perr(pos, "exponent must be an integer")),
        },
        ("/" | "^", n) => Err(perr(pos, format!("'{op}' takes 2 arguments, got {n}"))),
        _ => Err(perr(pos, format!("unknown operator '{op}'"))),
    }
}

/// Parse the prefix form, e.g. `(- b 1000000)` or `(/ y (- 1 x))`.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = tokenize(text);
    let mut p = Parser { toks, at: 0, end: text.len() };
    let e = p.expr()?;
    if let Some((pos, _)) = p.toks.get(p.at) {
        return Err(perr(*pos, "trailing input"));
    }
    Ok(e)
}

/// Names that a random expression may use for a tower class.
fn names_for(class: &str) -> &'static [&'static str] {
    match class {
        "c" => &["c"],
        "b" => &["b"],
        "s" => &["s", "x", "y"],
        "gamma" => &["gamma"],
        "c'" => &["c'"],
        "b'" => &["b'"],
        "s'" => &["s'", "x'", "y'"],
        _ => &[],
    }
}

/// A random expression of depth at most `depth` over at most `max_classes`
/// classes of the tower.
pub fn random_expr(rng: &mut impl Rng, t: &Tower, depth: usize, max_classes: usize) -> Expr {
    let mut classes: Vec<&str> = t.classes.iter().map(|c| c.name.as_str()).collect();
    classes.shuffle(rng);
    let k = rng.gen_range(1..=max_classes.min(classes.len()));
    let names: Vec<&str> = classes[..k].iter().flat_map(|c| names_for(c).iter().copied()).collect();
    gen(rng, &names, depth)
}

fn gen(rng: &mut impl Rng, names: &[&str], depth: usize) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.6) {
            Expr::var(names.choose(rng).expect("nonempty"))
        } else {
            let p: i64 = rng.gen_range(-20..=20);
            let q: i64 = rng.gen_range(1..=6);
            Expr::Num(BigRational::new(p.into(), q.into()))
        };
    }
    let a = Box::new(gen(rng, names, depth - 1));
    match rng.gen_range(0..7) {
        0 => Expr::Neg(a),
        1 => Expr::Add(a, Box::new(gen(rng, names, depth - 1))),
        2 | 3 => Expr::Sub(a, Box::new(gen(rng, names, depth - 1))),
        4 => Expr::Mul(a, Box::new(gen(rng, names, depth - 1))),
        5 => Expr::Div(a, Box::new(gen(rng, names, depth - 1))),
        _ => Expr::Pow(a, rng.gen_range(-2..=3)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let e = parse("(- b 1000000)").unwrap();
        assert_eq!(e.to_string(), "(- b 1000000)");
        let e = parse("(/ y (- 1 x))").unwrap();
        assert_eq!(e.vars(), vec!["x", "y"]);
        assert_eq!(parse("(+ 1/2 0.25 1e3)").unwrap().eval(&|_| unreachable!()).unwrap(), BigRational::new(4003.into(), 4.into()));
        assert!(matches!(parse("(- b"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(% b 1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(^ b x)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("b c"), Err(Error::Parse { .. })));
    }
}
