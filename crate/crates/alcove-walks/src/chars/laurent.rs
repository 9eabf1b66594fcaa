//! Exact Laurent polynomials in one variable `q^(1/2)` with rational
//! coefficients. Exponents are stored doubled (integer keys), so `q^(1/2)`
//! itself is the monomial with doubled exponent 1.

use crate::error::{Error, Result};
use crate::mp::{Complex, Real};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    /// doubled exponent -> coefficient; zero coefficients are never stored
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(BigRational::one(), 0)
    }

    /// `c * q^(e2/2)`
    pub fn monomial(c: BigRational, e2: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e2, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_int(v: i64) -> Self {
        LaurentPoly::monomial(BigRational::from_integer(BigInt::from(v)), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, e2: i64) -> BigRational {
        self.coeffs.get(&e2).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp2(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp2(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.coeffs.clone();
        for (e, c) in &o.coeffs {
            let entry = out.entry(*e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.remove(e);
            }
        }
        LaurentPoly { coeffs: out }
    }

    pub fn sub(&self, o: &LaurentPoly) -> LaurentPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e = e1 + e2;
                let entry = out.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs: out }
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by `q^(e2/2)` (exact shift).
    pub fn shift(&self, e2: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + e2, c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
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

    /// Exact division; errors if the divisor does not divide exactly.
    ///
    /// Character bialternants always divide exactly, so a failure here means
    /// a bug in the caller.
    pub fn div_exact(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        if den.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let num_min = self.min_exp2().unwrap();
        let den_min = den.min_exp2().unwrap();
        let num_deg = (self.max_exp2().unwrap() - num_min) as usize;
        let den_deg = (den.max_exp2().unwrap() - den_min) as usize;
        if num_deg < den_deg {
            return Err(Error::internal("non-exact Laurent division (degree)"));
        }
        let mut num_vec = vec![BigRational::zero(); num_deg + 1];
        for (e, c) in &self.coeffs {
            num_vec[(e - num_min) as usize] = c.clone();
        }
        let mut den_vec = vec![BigRational::zero(); den_deg + 1];
        for (e, c) in &den.coeffs {
            den_vec[(e - den_min) as usize] = c.clone();
        }
        let lead = den_vec[den_deg].clone();
        let mut quot = vec![BigRational::zero(); num_deg - den_deg + 1];
        for i in (0..quot.len()).rev() {
            let c = &num_vec[i + den_deg] / &lead;
            if c.is_zero() {
                continue;
            }
            quot[i] = c.clone();
            for (j, d) in den_vec.iter().enumerate() {
                if !d.is_zero() {
                    let v = &num_vec[i + j] - &c * d;
                    num_vec[i + j] = v;
                }
            }
        }
        if num_vec.iter().any(|c| !c.is_zero()) {
            return Err(Error::internal("non-exact Laurent division (remainder)"));
        }
        let offset = num_min - den_min;
        let mut coeffs = BTreeMap::new();
        for (i, c) in quot.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs.insert(offset + i as i64, c);
            }
        }
        Ok(LaurentPoly { coeffs })
    }

    /// Evaluate with `s` standing for `q^(1/2)`.
    pub fn eval_complex(&self, s: &Complex) -> Complex {
        let bits = s.bits();
        if self.is_zero() {
            return Complex::zero(bits);
        }
        let lo = self.min_exp2().unwrap();
        let hi = self.max_exp2().unwrap();
        let s_inv = Complex::one(bits).div(s);
        let mut power = if lo >= 0 {
            s.pow_u64(lo as u64)
        } else {
            s_inv.pow_u64((-lo) as u64)
        };
        let mut acc = Complex::zero(bits);
        for e in lo..=hi {
            if let Some(c) = self.coeffs.get(&e) {
                acc = acc.add(&power.mul_real(&Real::from_rational(c, bits)));
            }
            if e < hi {
                power = power.mul(s);
            }
        }
        acc
    }

    /// Evaluate with a rational value of `q^(1/2)`.
    pub fn eval_rational(&self, s: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            acc += c * pow_rational(s, *e);
        }
        acc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }
}

pub fn pow_rational(s: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e >= 0 { s.clone() } else { s.recip() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// `q^(a2/2) - q^(-a2/2)` (doubled argument), ubiquitous in the closed forms.
pub fn q_sin(a2: i64) -> LaurentPoly {
    LaurentPoly::monomial(BigRational::one(), a2)
        .sub(&LaurentPoly::monomial(BigRational::one(), -a2))
}

/// `q^(a2/2) + q^(-a2/2)`.
pub fn q_cos(a2: i64) -> LaurentPoly {
    LaurentPoly::monomial(BigRational::one(), a2)
        .add(&LaurentPoly::monomial(BigRational::one(), -a2))
}

/// A quotient of Laurent polynomials, kept unreduced; carrier for
/// closed-form sides built from products and sums of `q_sin` ratios.
#[derive(Clone, Debug)]
pub struct LaurentRatio {
    pub num: LaurentPoly,
    pub den: LaurentPoly,
}

impl LaurentRatio {
    pub fn one() -> Self {
        LaurentRatio { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }
    pub fn zero() -> Self {
        LaurentRatio { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }
    pub fn from_poly(p: LaurentPoly) -> Self {
        LaurentRatio { num: p, den: LaurentPoly::one() }
    }
    pub fn mul(&self, o: &LaurentRatio) -> LaurentRatio {
        LaurentRatio { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }
    pub fn mul_poly(&self, p: &LaurentPoly) -> LaurentRatio {
        LaurentRatio { num: self.num.mul(p), den: self.den.clone() }
    }
    pub fn div_poly(&self, p: &LaurentPoly) -> LaurentRatio {
        LaurentRatio { num: self.num.clone(), den: self.den.mul(p) }
    }
    pub fn add(&self, o: &LaurentRatio) -> LaurentRatio {
        LaurentRatio {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }
    pub fn scale(&self, c: &BigRational) -> LaurentRatio {
        LaurentRatio { num: self.num.scale(c), den: self.den.clone() }
    }
    /// Exact equality against a polynomial: `num == p * den`.
    pub fn equals_poly(&self, p: &LaurentPoly) -> bool {
        self.num == p.mul(&self.den)
    }
}

/// Determinant of a small matrix of Laurent polynomials by cofactor
/// expansion along the first column.
pub fn det_laurent(mat: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = mat.len();
    assert!(n > 0 && mat.iter().all(|r| r.len() == n));
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = LaurentPoly::zero();
    for h in 0..n {
        if mat[h][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = (0..n)
            .filter(|&r| r != h)
            .map(|r| mat[r][1..].to_vec())
            .collect();
        let term = mat[h][0].mul(&det_laurent(&minor));
        if h % 2 == 0 {
            acc = acc.add(&term);
        } else {
            acc = acc.sub(&term);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(e2: i64) -> LaurentPoly {
        LaurentPoly::monomial(BigRational::one(), e2)
    }

    #[test]
    fn arithmetic_basics() {
        let p = q(2).add(&q(-2)); // q + 1/q
        let sq = p.mul(&p);
        assert_eq!(sq.coeff(4), BigRational::one());
        assert_eq!(sq.coeff(0), BigRational::from_integer(2.into()));
        assert_eq!(sq.coeff(-4), BigRational::one());
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = q_sin(6);
        let b = q_sin(2);
        // (q^3 - q^-3)/(q - q^-1) = q^2 + 1 + q^-2
        let quot = a.div_exact(&b).unwrap();
        assert_eq!(quot, q(4).add(&q(0)).add(&q(-4)));
        assert_eq!(quot.mul(&b), a);
    }

    #[test]
    fn division_rejects_remainder() {
        let a = q(2).add(&LaurentPoly::one());
        let b = q_sin(2);
        assert!(a.div_exact(&b).is_err());
    }

    #[test]
    fn rational_eval() {
        // p = q + q^{-1} at q = 4 (s = 2): 4 + 1/4
        let p = q(2).add(&q(-2));
        let s = BigRational::from_integer(2.into());
        assert_eq!(p.eval_rational(&s), BigRational::new(17.into(), 4.into()));
    }

    #[test]
    fn det_of_singular_matrix() {
        let mat = vec![
            vec![q(2), LaurentPoly::one()],
            vec![LaurentPoly::one(), q(-2)],
        ];
        assert!(det_laurent(&mat).is_zero());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
            proptest::collection::vec((-8i64..8, -9i64..9), 0..6).prop_map(|terms| {
                let mut p = LaurentPoly::zero();
                for (e, c) in terms {
                    p = p.add(&LaurentPoly::monomial(
                        BigRational::from_integer(c.into()),
                        e,
                    ));
                }
                p
            })
        }

        proptest! {
            #[test]
            fn product_division_roundtrip(a in arb_poly(), b in arb_poly()) {
                prop_assume!(!b.is_zero());
                let prod = a.mul(&b);
                let quot = prod.div_exact(&b).unwrap();
                prop_assert_eq!(quot, a);
            }

            #[test]
            fn evaluation_is_a_ring_morphism(a in arb_poly(), b in arb_poly()) {
                let s = BigRational::new(3.into(), 2.into());
                let lhs = a.mul(&b).eval_rational(&s);
                let rhs = a.eval_rational(&s) * b.eval_rational(&s);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ratio_equality() {
        let r = LaurentRatio { num: q_sin(4), den: q_sin(2) };
        assert!(r.equals_poly(&q_cos(2)));
    }
}
