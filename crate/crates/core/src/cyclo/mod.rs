//! Exact arithmetic in cyclotomic fields.
//!
//! A [`Cyclotomic`] is an element of Q(ζ_N), always held at its minimal
//! conductor so that structural equality is field equality. Mixed-conductor
//! arithmetic lifts both operands to the least common multiple.

mod ball;
mod expr;
mod field;

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use ball::{Ball, ComplexBall};
pub use expr::{parse_with, Env};
use field::{lcm, normalize_conductor, Field};

/// Conductors above this are rejected rather than silently degraded.
pub const MAX_CONDUCTOR: u32 = 5040;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("value is not real")]
    NotReal,
    #[error("conductor {0} exceeds the supported maximum {MAX_CONDUCTOR}")]
    ConductorTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("malformed serialized value: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

fn check_conductor(n: u64) -> Result<u32, CycloError> {
    if n > MAX_CONDUCTOR as u64 {
        Err(CycloError::ConductorTooLarge(n))
    } else {
        Ok(n as u32)
    }
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    /// ζ_N^k, with k reduced mod N.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        Self::try_root_of_unity(n, k).expect("conductor out of range")
    }

    pub fn try_root_of_unity(n: u32, k: i64) -> Result<Self, CycloError> {
        assert!(n >= 1, "root_of_unity needs N >= 1");
        check_conductor(n as u64)?;
        let mut e = k.rem_euclid(n as i64) as u64;
        let mut sign = 1i64;
        let mut m = n;
        if n % 4 == 2 {
            // ζ_{2m} = -ζ_m^{(m+1)/2} for odd m
            m = n / 2;
            if e % 2 == 1 {
                sign = -1;
            }
            e = (e * ((m as u64 + 1) / 2)) % m as u64;
        }
        let field = Field::get(m);
        let mut coeffs = vec![BigRational::zero(); field.dim];
        for &(idx, s) in &field.expansion[e as usize] {
            coeffs[idx as usize] += BigRational::from_integer(BigInt::from(sign * s as i64));
        }
        Ok(Cyclotomic {
            conductor: m,
            coeffs,
        }
        .reduced())
    }

    /// Square root of a rational, as an element of a cyclotomic field.
    pub fn sqrt_rational(r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let negative = r.is_negative();
        let r = r.abs();
        // sqrt(a/b) = sqrt(a·b)/b
        let num = r.numer() * r.denom();
        let den = r.denom().clone();
        let n = num.to_u64().expect("square root argument too large");
        let mut out = Self::from_rational(BigRational::new(BigInt::one(), den));
        let mut rest = n;
        let mut square = 1u64;
        let mut p = 2u64;
        let mut primes = Vec::new();
        while p * p <= rest {
            while rest % (p * p) == 0 {
                rest /= p * p;
                square *= p;
            }
            if rest % p == 0 {
                rest /= p;
                primes.push(p);
            }
            p += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        out = out * Self::from_int(square as i64);
        for p in primes {
            out = out * Self::sqrt_prime(p as u32);
        }
        if negative {
            out = out * Self::i();
        }
        out
    }

    fn sqrt_prime(p: u32) -> Self {
        if p == 2 {
            return Self::root_of_unity(8, 1) + Self::root_of_unity(8, -1);
        }
        // quadratic Gauss sum: p ≡ 1 (4) gives √p, p ≡ 3 (4) gives i√p
        let mut g = Self::zero();
        for k in 1..p {
            let legendre = mod_pow(k as u64, ((p - 1) / 2) as u64, p as u64);
            let term = Self::root_of_unity(p, k as i64);
            if legendre == 1 {
                g += term;
            } else {
                g -= term;
            }
        }
        if p % 4 == 1 {
            g
        } else {
            -(Self::i() * g)
        }
    }

    pub fn i() -> Self {
        Self::root_of_unity(4, 1)
    }

    /// cos(2πk/N)
    pub fn cos_2pi(k: i64, n: u32) -> Self {
        (Self::root_of_unity(n, k) + Self::root_of_unity(n, -k)) * Self::from_frac(1, 2)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Coefficients in the canonical basis of Q(ζ_conductor).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    pub fn is_rational(&self) -> bool {
        self.conductor == 1
    }

    /// Pairs (exponent of ζ_N, coefficient) of the nonzero terms, by exponent.
    pub fn terms(&self) -> Vec<(u32, BigRational)> {
        let field = Field::get(self.conductor);
        let mut out: Vec<(u32, BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (field.exps[i], c.clone()))
            .collect();
        out.sort_by_key(|(e, _)| *e);
        out
    }

    fn lift(&self, m: u32) -> Vec<BigRational> {
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let from = Field::get(self.conductor);
        let to = Field::get(m);
        let scale = m / self.conductor;
        let mut out = vec![BigRational::zero(); to.dim];
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (from.exps[idx] as u64 * scale as u64 % m as u64) as usize;
            for &(j, s) in &to.expansion[e] {
                if s > 0 {
                    out[j as usize] += c;
                } else {
                    out[j as usize] -= c;
                }
            }
        }
        out
    }

    fn common_conductor(&self, other: &Self) -> Result<u32, CycloError> {
        let m = lcm(self.conductor as u64, other.conductor as u64);
        check_conductor(m).map(normalize_conductor)
    }

    /// Shrinks the conductor until no prime-power axis can be dropped.
    fn reduced(mut self) -> Self {
        loop {
            if self.conductor == 1 {
                return self;
            }
            let field = Field::get(self.conductor);
            if self.coeffs.iter().skip(1).all(Zero::is_zero) {
                let c = self.coeffs.swap_remove(0);
                return Self::from_rational(c);
            }
            let mut shrunk = false;
            for (axis, f) in field.factors.iter().enumerate() {
                let lower_q = f.q / f.p;
                let fits = self.coeffs.iter().enumerate().all(|(idx, c)| {
                    let k = field.axis_index(idx, axis);
                    c.is_zero() || if lower_q == 1 || (f.p == 2 && lower_q == 2) { k == 0 } else { k % f.p as usize == 0 }
                });
                if !fits {
                    continue;
                }
                let new_n = normalize_conductor(self.conductor / f.q * lower_q);
                let target = Field::get(new_n);
                let mut coeffs = vec![BigRational::zero(); target.dim];
                for (idx, c) in self.coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    // ζ_N^e = ζ_{N'}^{e·N'/N}; the exponent is divisible by construction
                    let e = field.exps[idx] as u64 * new_n as u64;
                    debug_assert_eq!(e % self.conductor as u64, 0);
                    let e = (e / self.conductor as u64) as usize;
                    let exp = &target.expansion[e % new_n as usize];
                    debug_assert_eq!(exp.len(), 1);
                    let (j, s) = exp[0];
                    coeffs[j as usize] = if s > 0 { c.clone() } else { -c.clone() };
                }
                self = Cyclotomic {
                    conductor: new_n,
                    coeffs,
                };
                shrunk = true;
                break;
            }
            if !shrunk {
                return self;
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        if self.conductor == 1 && other.conductor == 1 {
            return Ok(Self::from_rational(&self.coeffs[0] + &other.coeffs[0]));
        }
        let m = self.common_conductor(other)?;
        let mut a = self.lift(m);
        let b = other.lift(m);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Ok(Cyclotomic {
            conductor: m,
            coeffs: a,
        }
        .reduced())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        let m = self.common_conductor(other)?;
        let field = Field::get(m);
        let a = self.lift(m);
        let b = other.lift(m);
        // accumulate by exponent of ζ_m, expand once at the end
        let mut by_exp = vec![BigRational::zero(); m as usize];
        let nz_b: Vec<(usize, &BigRational)> = b.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, y) in &nz_b {
                let e = (field.exps[i] + field.exps[j]) % m;
                by_exp[e as usize] += x * y;
            }
        }
        let mut coeffs = vec![BigRational::zero(); field.dim];
        for (e, c) in by_exp.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(j, s) in &field.expansion[e] {
                if s > 0 {
                    coeffs[j as usize] += &c;
                } else {
                    coeffs[j as usize] -= &c;
                }
            }
        }
        Ok(Cyclotomic {
            conductor: m,
            coeffs,
        }
        .reduced())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let field = Field::get(self.conductor);
        let n = self.conductor;
        let mut coeffs = vec![BigRational::zero(); field.dim];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (n - field.exps[i]) % n;
            for &(j, s) in &field.expansion[e as usize] {
                if s > 0 {
                    coeffs[j as usize] += c;
                } else {
                    coeffs[j as usize] -= c;
                }
            }
        }
        Cyclotomic {
            conductor: n,
            coeffs,
        }
        .reduced()
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// |x|² as an exact (real) cyclotomic.
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    /// Multiplicative inverse, solving x·y = 1 in the basis of Q(ζ_N).
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        let n = self.conductor;
        let field = Field::get(n);
        let dim = field.dim;
        // column j of the multiplication map is x·b_j
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut basis = vec![BigRational::zero(); dim];
            basis[j] = BigRational::one();
            let bj = Cyclotomic {
                conductor: n,
                coeffs: basis,
            };
            let prod = self.checked_mul(&bj)?;
            cols.push(prod.lift(n));
        }
        // augmented system [M | e_0]
        let mut rows: Vec<Vec<BigRational>> = (0..dim)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..dim).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..dim {
            let pivot = (col..dim)
                .find(|&r| !rows[r][col].is_zero())
                .expect("multiplication map of a nonzero element is invertible");
            rows.swap(col, pivot);
            let p = rows[col][col].recip();
            for v in rows[col].iter_mut() {
                *v *= &p;
            }
            for r in 0..dim {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in col..=dim {
                        let delta = &rows[col][c] * &f;
                        rows[r][c] -= delta;
                    }
                }
            }
        }
        let coeffs = rows.into_iter().map(|mut row| row.pop().unwrap()).collect();
        Ok(Cyclotomic { conductor: n, coeffs }.reduced())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: i64) -> Self {
        let mut base = if e < 0 {
            e = -e;
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Fast double-precision embedding (no error bound).
    pub fn to_c64(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.terms()
            .into_iter()
            .map(|(e, c)| {
                let theta = 2.0 * std::f64::consts::PI * e as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }

    /// Rigorous complex enclosure at the requested precision (bits ≥ 53).
    pub fn to_complex(&self, precision: u32) -> ComplexBall {
        ball::enclose(self, precision.max(53))
    }

    /// Exact sign of a real cyclotomic number.
    pub fn real_sign(&self) -> Result<Sign, CycloError> {
        if self.is_zero() {
            return Ok(Sign::Zero);
        }
        if !self.is_real() {
            return Err(CycloError::NotReal);
        }
        if let Some(r) = self.as_rational() {
            return Ok(if r.is_positive() { Sign::Positive } else { Sign::Negative });
        }
        let mut prec = 64;
        loop {
            let re = self.to_complex(prec).re;
            if let Some(s) = re.sign() {
                return Ok(s);
            }
            prec *= 2;
        }
    }

    /// Real part as f64, for values already known to be real.
    pub fn to_f64(&self) -> f64 {
        self.to_c64().re
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Cyclotomic {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for Cyclotomic {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
        impl $tr<Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                self.$method(&rhs)
            }
        }
    };
}

impl Cyclotomic {
    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.checked_add(&-other)
    }
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: Cyclotomic) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Cyclotomic {
    fn sum<I: Iterator<Item = Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Cyclotomic> for Cyclotomic {
    fn sum<I: Iterator<Item = &'a Cyclotomic>>(iter: I) -> Self {
        iter.fold(Cyclotomic::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&expr::format(self))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({})", expr::format(self))
    }
}

impl FromStr for Cyclotomic {
    type Err = CycloError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_with(s, &Env::default())
    }
}

/// JSON form: `{"conductor": N, "coeffs": ["p/q", ...]}` in the canonical basis.
#[derive(Serialize, Deserialize)]
struct Wire {
    conductor: u32,
    coeffs: Vec<String>,
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CycloError> {
    let bad = || CycloError::Malformed(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl Cyclotomic {
    /// Rebuilds a value from a conductor and basis coefficients, validating shape.
    pub fn from_parts(conductor: u32, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if conductor == 0 || conductor != normalize_conductor(conductor) {
            return Err(CycloError::Malformed(format!("conductor {conductor} is not normalized")));
        }
        check_conductor(conductor as u64)?;
        let dim = Field::get(conductor).dim;
        if coeffs.len() != dim {
            return Err(CycloError::Malformed(format!(
                "conductor {conductor} needs {dim} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { conductor, coeffs }.reduced())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(rational_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        let coeffs = wire
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        Cyclotomic::from_parts(wire.conductor, coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn unit_root_is_one() {
        assert!(z(1, 0).is_one());
        assert!(z(7, 7).is_one());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = z(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(-1));
    }

    #[test]
    fn cube_roots_sum_to_minus_one() {
        assert_eq!(z(3, 1) + z(3, 2), Cyclotomic::from_int(-1));
    }

    #[test]
    fn sixth_root_reduces_to_conductor_three() {
        let w = z(6, 1);
        assert_eq!(w.conductor(), 3);
        assert_eq!(w.pow(6), Cyclotomic::one());
        assert_eq!(w.pow(3), Cyclotomic::from_int(-1));
    }

    #[test]
    fn real_combination_drops_to_smaller_field() {
        // ζ_8 + ζ_8^{-1} = √2 lives in Q(ζ_8) but ζ_8^2 + ζ_8^{-2} = 0
        assert!((z(8, 2) + z(8, -2)).is_zero());
        let s = z(8, 1) + z(8, 7);
        assert_eq!(&s * &s, Cyclotomic::from_int(2));
    }

    #[test]
    fn square_roots_square_back() {
        for n in [2i64, 3, 5, 6, 7, 12, 13] {
            let r = Cyclotomic::sqrt_rational(&BigRational::from_integer(n.into()));
            assert_eq!(&r * &r, Cyclotomic::from_int(n), "sqrt({n})");
            assert!(r.to_c64().re > 0.0 && r.to_c64().im.abs() < 1e-12, "sqrt({n}) must be the positive root");
        }
        let half = Cyclotomic::sqrt_rational(&BigRational::new(1.into(), 2.into()));
        assert!((half.to_f64() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn inverse_and_division() {
        let x = z(5, 1) + Cyclotomic::from_int(3) * z(5, 3) - z(4, 1);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!((&x / &x), Cyclotomic::one());
        assert_eq!(Cyclotomic::zero().inv(), Err(CycloError::DivisionByZero));
    }

    #[test]
    fn conjugation_is_an_involution() {
        let x = z(12, 5) + Cyclotomic::from_frac(2, 3) * z(9, 2);
        assert_eq!(x.conj().conj(), x);
        assert!(x.norm_sqr().is_real());
    }

    #[test]
    fn sign_examples() {
        assert_eq!(Cyclotomic::zero().real_sign(), Ok(Sign::Zero));
        let one_minus_sqrt2 = Cyclotomic::one() - (z(8, 1) + z(8, -1));
        assert_eq!(one_minus_sqrt2.real_sign(), Ok(Sign::Negative));
        let golden = z(5, 1) + z(5, 4) + Cyclotomic::one();
        assert_eq!(golden.real_sign(), Ok(Sign::Positive));
        assert_eq!(z(3, 1).real_sign(), Err(CycloError::NotReal));
    }

    #[test]
    fn conductor_cap_is_an_error() {
        assert!(matches!(Cyclotomic::try_root_of_unity(5041, 1), Err(CycloError::ConductorTooLarge(_))));
        let a = z(2520, 1);
        let b = z(11, 1);
        assert!(matches!(a.checked_add(&b), Err(CycloError::ConductorTooLarge(_))));
    }

    #[test]
    fn json_round_trip() {
        let x = (Cyclotomic::one() - z(8, 1) + z(8, 3)) * Cyclotomic::from_frac(1, 4);
        let s = serde_json::to_string(&x).unwrap();
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }

    #[test]
    fn malformed_json_is_rejected() {
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"conductor":5,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"conductor":6,"coeffs":["1","0"]}"#).is_err());
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"conductor":1,"coeffs":["1/0"]}"#).is_err());
    }
}
