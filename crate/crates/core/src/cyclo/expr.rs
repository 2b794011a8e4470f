//! Text form of cyclotomic numbers.
//!
//! Output uses `E(n)` for ζ_n with a common denominator pulled out, e.g.
//! `(1-E(8)+E(8)^3)/4`. Input additionally accepts `i`, `sqrt(r)`,
//! `cos(r*pi)`, `sin(r*pi)`, `^` with integer exponents, implicit
//! multiplication and named constants supplied through an [`Env`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CycloError, Cyclotomic};

pub(super) fn format(x: &Cyclotomic) -> String {
    if let Some(r) = x.as_rational() {
        return super::rational_string(r);
    }
    let n = x.conductor();
    let terms = x.terms();
    let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let mut out = String::new();
    for (e, c) in &terms {
        let num = c.numer() * (&den / c.denom());
        let neg = num.is_negative();
        let mag = num.abs();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let root = match *e {
            0 => None,
            1 => Some(format!("E({n})")),
            e => Some(format!("E({n})^{e}")),
        };
        match root {
            None => out.push_str(&mag.to_string()),
            Some(r) if mag.is_one() => out.push_str(&r),
            Some(r) => {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&r);
            }
        }
    }
    if den.is_one() {
        out
    } else if terms.len() == 1 {
        format!("{out}/{den}")
    } else {
        format!("({out})/{den}")
    }
}

/// Named constants available to the parser.
#[derive(Debug, Clone, Default)]
pub struct Env {
    vars: BTreeMap<String, Cyclotomic>,
}

impl Env {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: Cyclotomic) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: &str, value: Cyclotomic) {
        self.vars.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Cyclotomic> {
        self.vars.get(name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, CycloError> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c == 'π' {
            out.push(Tok::Ident("pi".into()));
            i += 1;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(CycloError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Intermediate value: a field element or a rational multiple of π.
#[derive(Debug, Clone)]
enum Val {
    Num(Cyclotomic),
    Pi(BigRational),
}

fn perr<T>(msg: impl Into<String>) -> Result<T, CycloError> {
    Err(CycloError::Parse(msg.into()))
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), CycloError> {
        if self.eat(op) {
            Ok(())
        } else {
            perr(format!("expected '{op}'"))
        }
    }

    fn expr(&mut self) -> Result<Val, CycloError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                acc = add(acc, rhs)?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = add(acc, neg(rhs))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')))
    }

    fn term(&mut self) -> Result<Val, CycloError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = mul(acc, rhs)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                acc = div(acc, rhs)?;
            } else if self.starts_factor() {
                let rhs = self.power()?;
                acc = mul(acc, rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Val, CycloError> {
        if self.eat('-') {
            Ok(neg(self.unary()?))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Val, CycloError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let exp = self.unary()?;
        let e = match exp {
            Val::Num(x) => match x.as_rational() {
                Some(r) if r.is_integer() => r.to_integer().to_i64(),
                _ => None,
            },
            Val::Pi(_) => None,
        };
        let Some(e) = e else {
            return perr("exponent must be an integer");
        };
        match base {
            Val::Num(x) => {
                if e < 0 && x.is_zero() {
                    return Err(CycloError::DivisionByZero);
                }
                Ok(Val::Num(x.pow(e)))
            }
            Val::Pi(_) => perr("cannot raise pi to a power"),
        }
    }

    fn int_arg(&mut self) -> Result<u32, CycloError> {
        self.expect('(')?;
        let n = match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => n.to_u32(),
            _ => None,
        };
        self.pos += 1;
        self.expect(')')?;
        match n {
            Some(n) if n >= 1 => Ok(n),
            _ => perr("E(n) needs a positive integer"),
        }
    }

    fn paren_arg(&mut self) -> Result<Val, CycloError> {
        self.expect('(')?;
        let v = self.expr()?;
        self.expect(')')?;
        Ok(v)
    }

    fn atom(&mut self) -> Result<Val, CycloError> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return perr("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Val::Num(Cyclotomic::from_rational(BigRational::from_integer(n)))),
            Tok::Op('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Op(c) => perr(format!("unexpected '{c}'")),
            Tok::Ident(name) => match name.as_str() {
                "E" => {
                    let n = self.int_arg()?;
                    Ok(Val::Num(Cyclotomic::try_root_of_unity(n, 1)?))
                }
                "i" | "I" => Ok(Val::Num(Cyclotomic::i())),
                "pi" => Ok(Val::Pi(BigRational::one())),
                "sqrt" => match self.paren_arg()? {
                    Val::Num(x) => match x.as_rational() {
                        Some(r) => Ok(Val::Num(Cyclotomic::sqrt_rational(r))),
                        None => perr("sqrt needs a rational argument"),
                    },
                    Val::Pi(_) => perr("sqrt of pi is not cyclotomic"),
                },
                "cos" | "sin" => {
                    let arg = match self.paren_arg()? {
                        Val::Pi(r) => r,
                        Val::Num(x) if x.is_zero() => BigRational::zero(),
                        Val::Num(_) => return perr(format!("{name} needs a rational multiple of pi")),
                    };
                    trig(&name, &arg).map(Val::Num)
                }
                _ => match self.env.get(&name) {
                    Some(v) => Ok(Val::Num(v.clone())),
                    None => perr(format!("unknown name {name:?}")),
                },
            },
        }
    }
}

/// cos or sin of r·π.
fn trig(name: &str, r: &BigRational) -> Result<Cyclotomic, CycloError> {
    // r·π = 2π·a/(2b)
    let a = r.numer().to_i64();
    let n = (r.denom() * 2u8).to_u32();
    let (Some(a), Some(n)) = (a, n) else {
        return perr("trigonometric argument too large");
    };
    let z = Cyclotomic::try_root_of_unity(n, a)?;
    let zi = Cyclotomic::try_root_of_unity(n, -a)?;
    let half = Cyclotomic::from_frac(1, 2);
    if name == "cos" {
        Ok((z + zi) * half)
    } else {
        // (z − z⁻¹)/(2i) = −i(z − z⁻¹)/2
        Ok(-(Cyclotomic::i() * (z - zi) * half))
    }
}

fn neg(v: Val) -> Val {
    match v {
        Val::Num(x) => Val::Num(-x),
        Val::Pi(r) => Val::Pi(-r),
    }
}

fn add(a: Val, b: Val) -> Result<Val, CycloError> {
    match (a, b) {
        (Val::Num(x), Val::Num(y)) => x.checked_add(&y).map(Val::Num),
        (Val::Pi(x), Val::Pi(y)) => Ok(Val::Pi(x + y)),
        _ => perr("cannot mix pi with field elements outside cos/sin"),
    }
}

fn mul(a: Val, b: Val) -> Result<Val, CycloError> {
    match (a, b) {
        (Val::Num(x), Val::Num(y)) => x.checked_mul(&y).map(Val::Num),
        (Val::Num(x), Val::Pi(r)) | (Val::Pi(r), Val::Num(x)) => match x.as_rational() {
            Some(q) => Ok(Val::Pi(r * q)),
            None => perr("pi may only be scaled by rationals"),
        },
        (Val::Pi(_), Val::Pi(_)) => perr("pi squared is not supported"),
    }
}

fn div(a: Val, b: Val) -> Result<Val, CycloError> {
    match (a, b) {
        (Val::Num(x), Val::Num(y)) => x.checked_div(&y).map(Val::Num),
        (Val::Pi(r), Val::Num(x)) => match x.as_rational() {
            Some(q) if q.is_zero() => Err(CycloError::DivisionByZero),
            Some(q) => Ok(Val::Pi(r / q)),
            None => perr("pi may only be divided by rationals"),
        },
        _ => perr("cannot divide by pi"),
    }
}

/// Parses an expression, resolving free names through `env`.
pub fn parse_with(s: &str, env: &Env) -> Result<Cyclotomic, CycloError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return perr("empty expression");
    }
    let mut p = Parser { toks, pos: 0, env };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return perr(format!("trailing input at token {}", p.pos));
    }
    match v {
        Val::Num(x) => Ok(x),
        Val::Pi(_) => perr("pi is not cyclotomic"),
    }
}
