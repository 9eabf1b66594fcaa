//! Fixed-point multiprecision arithmetic.
//!
//! Values are `mantissa / 2^bits` with a `BigInt` mantissa, so magnitudes are
//! unbounded while the absolute resolution is `2^-bits`. The only
//! transcendentals the formulas need are sin/cos at arbitrary arguments and
//! the constant pi; both are computed here with guard bits and cached where
//! it pays off.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

const GUARD: u32 = 32;

/// Bits needed for roughly `digits` decimal digits of absolute resolution.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Round-to-nearest right shift (ties away from zero).
fn shr_round(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    let half = BigInt::from(1) << (s - 1);
    if x.is_negative() {
        -((-x + half) >> s)
    } else {
        (x + half) >> s
    }
}

/// Round-to-nearest integer division (ties away from zero).
fn div_round(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_rem(den);
    if &r.abs() * 2 >= den.abs() {
        let adj = if num.is_negative() == den.is_negative() { 1 } else { -1 };
        q + adj
    } else {
        q
    }
}

/// A fixed-point real: `m / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

impl Real {
    pub fn raw(m: BigInt, bits: u32) -> Self {
        Real { m, bits }
    }
    pub fn zero(bits: u32) -> Self {
        Real { m: BigInt::zero(), bits }
    }
    pub fn one(bits: u32) -> Self {
        Real { m: BigInt::from(1) << bits, bits }
    }
    pub fn from_i64(v: i64, bits: u32) -> Self {
        Real { m: BigInt::from(v) << bits, bits }
    }
    pub fn from_bigint(v: &BigInt, bits: u32) -> Self {
        Real { m: v.clone() << bits, bits }
    }
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Self {
        assert!(!den.is_zero());
        Real { m: div_round(&(num.clone() << bits), den), bits }
    }
    pub fn from_rational(r: &BigRational, bits: u32) -> Self {
        Real::from_ratio(r.numer(), r.denom(), bits)
    }
    pub fn from_f64(v: f64, bits: u32) -> Self {
        // exact binary expansion of the f64
        let r = BigRational::from_float(v).expect("finite float");
        Real::from_rational(&r, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }
    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }
    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    fn chk(&self, other: &Real) {
        assert_eq!(self.bits, other.bits, "mixed fixed-point scales");
    }

    pub fn add(&self, o: &Real) -> Real {
        self.chk(o);
        Real { m: &self.m + &o.m, bits: self.bits }
    }
    pub fn sub(&self, o: &Real) -> Real {
        self.chk(o);
        Real { m: &self.m - &o.m, bits: self.bits }
    }
    pub fn neg(&self) -> Real {
        Real { m: -&self.m, bits: self.bits }
    }
    pub fn abs(&self) -> Real {
        Real { m: self.m.abs(), bits: self.bits }
    }
    pub fn mul(&self, o: &Real) -> Real {
        self.chk(o);
        Real { m: shr_round(&(&self.m * &o.m), self.bits), bits: self.bits }
    }
    pub fn mul_i64(&self, v: i64) -> Real {
        Real { m: &self.m * v, bits: self.bits }
    }
    pub fn div(&self, o: &Real) -> Real {
        self.chk(o);
        assert!(!o.m.is_zero(), "division by zero");
        Real { m: div_round(&(self.m.clone() << self.bits), &o.m), bits: self.bits }
    }
    pub fn div_i64(&self, v: i64) -> Real {
        Real { m: div_round(&self.m, &BigInt::from(v)), bits: self.bits }
    }
    /// Multiply by 2^e (exact).
    pub fn shl(&self, e: i64) -> Real {
        if e >= 0 {
            Real { m: self.m.clone() << e as u32, bits: self.bits }
        } else {
            Real { m: shr_round(&self.m, (-e) as u32), bits: self.bits }
        }
    }
    pub fn square(&self) -> Real {
        self.mul(self)
    }

    pub fn cmp_val(&self, o: &Real) -> std::cmp::Ordering {
        self.chk(o);
        self.m.cmp(&o.m)
    }
    pub fn lt(&self, o: &Real) -> bool {
        self.cmp_val(o) == std::cmp::Ordering::Less
    }

    /// Change scale (lossy when reducing).
    pub fn with_bits(&self, bits: u32) -> Real {
        if bits >= self.bits {
            Real { m: self.m.clone() << (bits - self.bits), bits }
        } else {
            Real { m: shr_round(&self.m, self.bits - bits), bits }
        }
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.m.is_negative(), "sqrt of negative value");
        Real { m: (self.m.clone() << self.bits).sqrt(), bits: self.bits }
    }

    /// Integer power by binary exponentiation.
    pub fn pow_u64(&self, mut e: u64) -> Real {
        let mut base = self.clone();
        let mut acc = Real::one(self.bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Nearest integer and the distance to it.
    pub fn round_int(&self) -> (BigInt, Real) {
        let q = shr_round(&self.m, self.bits);
        let err = Real { m: &self.m - (q.clone() << self.bits), bits: self.bits };
        (q, err.abs())
    }

    pub fn to_f64(&self) -> f64 {
        let nbits = self.m.bits() as i64;
        if nbits <= 900 {
            return self.m.to_f64().unwrap_or(f64::NAN) / 2f64.powi(self.bits as i32);
        }
        // scale down to keep the conversion in range
        let drop = (nbits - 64) as u32;
        let top = shr_round(&self.m, drop);
        top.to_f64().unwrap_or(f64::NAN) * 2f64.powi(drop as i32 - self.bits as i32)
    }

    /// Decimal rendering with the given number of fractional digits.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let scaled = div_round(
            &(self.m.abs() * BigInt::from(10u32).pow(digits)),
            &(BigInt::from(1) << self.bits),
        );
        let s = scaled.to_string();
        let (int_part, frac_part) = if s.len() > digits as usize {
            let split = s.len() - digits as usize;
            (s[..split].to_string(), s[split..].to_string())
        } else {
            ("0".to_string(), format!("{:0>width$}", s, width = digits as usize))
        };
        let sign = if self.m.is_negative() { "-" } else { "" };
        format!("{sign}{int_part}.{frac_part}")
    }
}

static PI_CACHE: Mutex<Option<HashMap<u32, BigInt>>> = Mutex::new(None);

/// pi at the given scale (Machin's formula, cached).
pub fn pi(bits: u32) -> Real {
    {
        let guard = PI_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(m) = map.get(&bits) {
                return Real::raw(m.clone(), bits);
            }
        }
    }
    let work = bits + GUARD;
    let atan_inv = |x: i64| -> BigInt {
        // atan(1/x) = sum (-1)^i / ((2i+1) x^(2i+1))
        let xx = BigInt::from(x) * x;
        let mut power = (BigInt::from(1) << work) / x;
        let mut acc = BigInt::zero();
        let mut i: u64 = 0;
        while !power.is_zero() {
            let term = &power / (2 * i + 1);
            if i % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            power /= &xx;
            i += 1;
        }
        acc
    };
    let pi_work = atan_inv(5) * 16 - atan_inv(239) * 4;
    let m = shr_round(&pi_work, GUARD);
    let mut guard = PI_CACHE.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(bits, m.clone());
    Real::raw(m, bits)
}

/// Simultaneous sin and cos via quadrant reduction and Taylor series.
pub fn sin_cos(x: &Real) -> (Real, Real) {
    let bits = x.bits();
    let work = bits + GUARD;
    let xw = x.with_bits(work);
    let half_pi = pi(work).shl(-1);
    let q = div_round(xw.mantissa(), half_pi.mantissa());
    let y = Real::raw(xw.mantissa() - &q * half_pi.mantissa(), work);
    let (s, c) = taylor_sin_cos(&y);
    let r = q.mod_floor(&BigInt::from(4)).to_i64().unwrap();
    let (s, c) = match r {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (s.with_bits(bits), c.with_bits(bits))
}

pub fn sin(x: &Real) -> Real {
    sin_cos(x).0
}
pub fn cos(x: &Real) -> Real {
    sin_cos(x).1
}
pub fn tan(x: &Real) -> Real {
    let (s, c) = sin_cos(x);
    s.div(&c)
}

fn taylor_sin_cos(y: &Real) -> (Real, Real) {
    let bits = y.bits();
    let y2 = y.square();
    // sin
    let mut term = y.clone();
    let mut sin_acc = y.clone();
    let mut i: i64 = 1;
    while !term.is_zero() {
        term = term.mul(&y2).div_i64(-(2 * i) * (2 * i + 1));
        sin_acc = sin_acc.add(&term);
        i += 1;
    }
    // cos
    let mut term = Real::one(bits);
    let mut cos_acc = Real::one(bits);
    let mut i: i64 = 1;
    while !term.is_zero() {
        term = term.mul(&y2).div_i64(-(2 * i - 1) * (2 * i));
        cos_acc = cos_acc.add(&term);
        i += 1;
    }
    (sin_acc, cos_acc)
}

/// sin(pi * num/den) for doubled-integer arguments, i.e. exact rationals.
pub fn sin_pi_ratio(num: i64, den: i64, bits: u32) -> Real {
    unit_root(num, den, bits).im
}
/// cos(pi * num/den).
pub fn cos_pi_ratio(num: i64, den: i64, bits: u32) -> Real {
    unit_root(num, den, bits).re
}

/// A complex number over fixed-point reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }
    pub fn zero(bits: u32) -> Self {
        Complex { re: Real::zero(bits), im: Real::zero(bits) }
    }
    pub fn one(bits: u32) -> Self {
        Complex { re: Real::one(bits), im: Real::zero(bits) }
    }
    pub fn from_real(re: Real) -> Self {
        let bits = re.bits();
        Complex { re, im: Real::zero(bits) }
    }
    pub fn bits(&self) -> u32 {
        self.re.bits()
    }
    pub fn add(&self, o: &Complex) -> Complex {
        Complex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
    pub fn sub(&self, o: &Complex) -> Complex {
        Complex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
    pub fn neg(&self) -> Complex {
        Complex { re: self.re.neg(), im: self.im.neg() }
    }
    pub fn mul(&self, o: &Complex) -> Complex {
        Complex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
    pub fn mul_real(&self, o: &Real) -> Complex {
        Complex { re: self.re.mul(o), im: self.im.mul(o) }
    }
    pub fn mul_i64(&self, v: i64) -> Complex {
        Complex { re: self.re.mul_i64(v), im: self.im.mul_i64(v) }
    }
    pub fn div(&self, o: &Complex) -> Complex {
        let den = o.norm_sqr();
        let num = self.mul(&o.conj());
        Complex { re: num.re.div(&den), im: num.im.div(&den) }
    }
    pub fn conj(&self) -> Complex {
        Complex { re: self.re.clone(), im: self.im.neg() }
    }
    pub fn norm_sqr(&self) -> Real {
        self.re.square().add(&self.im.square())
    }
    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn pow_u64(&self, mut e: u64) -> Complex {
        let mut base = self.clone();
        let mut acc = Complex::one(self.bits());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

static UNIT_CACHE: Mutex<Option<HashMap<(i64, u32), Vec<Complex>>>> = Mutex::new(None);

/// `e^(i pi j / den)` from a cached table of the 2*den roots.
///
/// Built once per (den, bits) from one sin/cos evaluation and repeated
/// multiplication at guarded precision.
pub fn unit_root(j: i64, den: i64, bits: u32) -> Complex {
    assert!(den > 0);
    let period = 2 * den;
    let idx = j.rem_euclid(period) as usize;
    {
        let guard = UNIT_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(tab) = map.get(&(den, bits)) {
                return tab[idx].clone();
            }
        }
    }
    let work = bits + GUARD;
    let theta = pi(work).div_i64(den);
    let (s, c) = sin_cos(&theta);
    let omega = Complex::new(c, s);
    let mut tab_work = Vec::with_capacity(period as usize);
    let mut cur = Complex::one(work);
    for _ in 0..period {
        tab_work.push(cur.clone());
        cur = cur.mul(&omega);
    }
    let tab: Vec<Complex> = tab_work
        .iter()
        .map(|z| Complex::new(z.re.with_bits(bits), z.im.with_bits(bits)))
        .collect();
    let out = tab[idx].clone();
    let mut guard = UNIT_CACHE.lock().unwrap();
    guard
        .get_or_insert_with(HashMap::new)
        .insert((den, bits), tab);
    out
}

/// Determinant by expansion along the first column (matrices stay tiny here).
pub fn det_complex(mat: &[Vec<Complex>]) -> Complex {
    let n = mat.len();
    assert!(n > 0 && mat.iter().all(|r| r.len() == n));
    let bits = mat[0][0].bits();
    if n == 1 {
        return mat[0][0].clone();
    }
    if n == 2 {
        return mat[0][0].mul(&mat[1][1]).sub(&mat[0][1].mul(&mat[1][0]));
    }
    let mut acc = Complex::zero(bits);
    for h in 0..n {
        if mat[h][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Complex>> = (0..n)
            .filter(|&r| r != h)
            .map(|r| mat[r][1..].to_vec())
            .collect();
        let term = mat[h][0].mul(&det_complex(&minor));
        if h % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}
