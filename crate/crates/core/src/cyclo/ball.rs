//! Fixed-point interval arithmetic used to certify signs and embeddings.
//!
//! A [`Ball`] is the interval [mid − rad, mid + rad]·2^−w with integer mid and
//! rad. Every operation rounds outward, so the true value always stays inside.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Cyclotomic, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    w: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Ball,
    pub im: Ball,
}

impl Ball {
    fn exact(mid: BigInt, w: u32) -> Ball {
        Ball { mid, rad: BigInt::zero(), w }
    }

    fn zero(w: u32) -> Ball {
        Ball::exact(BigInt::zero(), w)
    }

    fn from_rational(r: &BigRational, w: u32) -> Ball {
        let scaled = r.numer() << w as usize;
        let (q, rem) = scaled.div_mod_floor(r.denom());
        Ball {
            mid: q,
            rad: if rem.is_zero() { BigInt::zero() } else { BigInt::one() },
            w,
        }
    }

    fn add(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.w, o.w);
        Ball {
            mid: &self.mid + &o.mid,
            rad: &self.rad + &o.rad,
            w: self.w,
        }
    }

    fn neg(&self) -> Ball {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
            w: self.w,
        }
    }

    fn mul(&self, o: &Ball) -> Ball {
        debug_assert_eq!(self.w, o.w);
        let mid = &self.mid * &o.mid;
        let rad = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let exact = rad.is_zero() && (&mid & ((BigInt::one() << self.w as usize) - 1u8)).is_zero();
        let mid = mid >> self.w as usize;
        let rad = if exact {
            BigInt::zero()
        } else {
            (rad >> self.w as usize) + 2u8
        };
        Ball { mid, rad, w: self.w }
    }

    fn div_int(&self, n: u64) -> Ball {
        let (q, rem) = self.mid.div_mod_floor(&BigInt::from(n));
        let rad = if rem.is_zero() && self.rad.is_zero() {
            BigInt::zero()
        } else {
            &self.rad / n + 1u8
        };
        Ball { mid: q, rad, w: self.w }
    }

    /// Largest possible magnitude, in units of 2^−w.
    fn magnitude(&self) -> BigInt {
        self.mid.abs() + &self.rad
    }

    fn widen(&mut self, extra: &BigInt) {
        self.rad += extra;
    }

    /// Sign if the ball excludes zero (or is exactly zero).
    pub fn sign(&self) -> Option<Sign> {
        if self.mid.is_zero() && self.rad.is_zero() {
            return Some(Sign::Zero);
        }
        if self.mid > self.rad {
            Some(Sign::Positive)
        } else if -&self.mid > self.rad {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    pub fn precision(&self) -> u32 {
        self.w
    }

    fn scaled_to_f64(x: &BigInt, w: u32) -> f64 {
        // keep 64 significant bits before converting
        let bits = x.bits() as i64;
        let shift = (bits - 64).max(0);
        let head = (x >> shift as usize).to_f64().unwrap_or(0.0);
        head * 2f64.powi((shift - w as i64) as i32)
    }

    pub fn mid_f64(&self) -> f64 {
        Ball::scaled_to_f64(&self.mid, self.w)
    }

    pub fn radius_f64(&self) -> f64 {
        Ball::scaled_to_f64(&self.rad, self.w)
    }

    /// Whether `x` lies in the ball, allowing one ulp of `x` for rounding.
    pub fn contains(&self, x: f64) -> bool {
        let slack = x.abs() * f64::EPSILON * 2.0 + f64::MIN_POSITIVE;
        (x - self.mid_f64()).abs() <= self.radius_f64() + slack
    }
}

/// Σ_k (−1)^k / ((2k+1)·x^{2k+1}), scaled by 2^w.
fn atan_inv(x: u64, w: u32) -> Ball {
    let one = BigInt::one() << w as usize;
    let x2 = BigInt::from(x * x);
    let mut power = &one / x; // 2^w / x^{2k+1}, truncated
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    let mut errors = BigInt::zero();
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        // truncation in power (≤1, accumulated ≤ k+1) and in the division (≤1)
        errors += 2u8;
        power = &power / &x2;
        k += 1;
    }
    // alternating tail bounded by the first omitted term, which is < 1 unit
    Ball {
        mid: sum,
        rad: errors + 1u8,
        w,
    }
}

fn pi(w: u32) -> Ball {
    let a = atan_inv(5, w);
    let b = atan_inv(239, w);
    let sixteen = Ball::exact(BigInt::from(16) << w as usize, w);
    let four = Ball::exact(BigInt::from(4) << w as usize, w);
    sixteen.mul(&a).add(&four.mul(&b).neg())
}

/// (cos θ, sin θ) for θ = 2πe/n.
fn cos_sin(e: i64, n: u32, w: u32) -> (Ball, Ball) {
    let n = n as i64;
    let mut e = e.rem_euclid(n);
    if 4 * e % n == 0 {
        let unit = BigInt::one() << w as usize;
        let (c, s) = match 4 * e / n {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        return (Ball::exact(unit.clone() * c, w), Ball::exact(unit * s, w));
    }
    if 2 * e > n {
        e -= n;
    }
    // |θ| ≤ π
    let theta = pi(w)
        .mul(&Ball::exact(BigInt::from(2 * e) << w as usize, w))
        .div_int(n as u64);
    let mut cos = Ball::zero(w);
    let mut sin = Ball::zero(w);
    let mut term = Ball::exact(BigInt::one() << w as usize, w); // θ^k/k!
    let mut k = 0u64;
    loop {
        // the series is alternating with decreasing terms once k > |θ|
        if k > 4 && term.magnitude() <= BigInt::one() {
            let tail = term.magnitude() * 2u8;
            cos.widen(&tail);
            sin.widen(&tail);
            break;
        }
        let signed = if (k / 2) % 2 == 0 { term.clone() } else { term.neg() };
        if k % 2 == 0 {
            cos = cos.add(&signed);
        } else {
            sin = sin.add(&signed);
        }
        term = term.mul(&theta).div_int(k + 1);
        k += 1;
    }
    (cos, sin)
}

/// Encloses x in a complex ball computed with `precision` fractional bits plus guard bits.
pub(super) fn enclose(x: &Cyclotomic, precision: u32) -> ComplexBall {
    let terms = x.terms();
    // guard bits cover the per-term rounding and coefficient magnitudes
    let guard = 16 + 2 * (64 - (terms.len() as u64).leading_zeros());
    let w = precision + guard;
    let n = x.conductor();
    let mut re = Ball::zero(w);
    let mut im = Ball::zero(w);
    for (e, c) in &terms {
        let cb = Ball::from_rational(c, w);
        if *e == 0 {
            re = re.add(&cb);
            continue;
        }
        let (cos, sin) = cos_sin(*e as i64, n, w);
        re = re.add(&cb.mul(&cos));
        im = im.add(&cb.mul(&sin));
    }
    ComplexBall { re, im }
}

impl ComplexBall {
    pub fn re_sign(&self) -> Option<Sign> {
        self.re.sign()
    }
}
