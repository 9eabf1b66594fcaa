//! Saddle-point approximation for the coefficient of `z^(d + nk/2)` in
//! `prod_j (1 + omega^{r_j} z)^k` with `omega = e^(2 pi i / m)`, plus the
//! exact-coefficient oracle it is checked against.

use crate::error::{Error, Result};
use crate::mp::{bits_for_digits, pi, sin_cos, tan, unit_root, Complex, Real};
use num_bigint::BigInt;
use num_traits::One;

/// Parameters of one coefficient problem. `d2 = 2d` so d may be a
/// half-integer; `d + nk/2` must be an integer for a nonzero coefficient.
#[derive(Clone, Debug)]
pub struct SaddleProblem {
    pub m: i64,
    pub rs: Vec<i64>,
    pub d2: i64,
    pub k: u64,
}

impl SaddleProblem {
    pub fn new(m: i64, rs: Vec<i64>, d2: i64, k: u64) -> Result<Self> {
        validate_rs(m, &rs)?;
        if (d2 + rs.len() as i64 * k as i64) % 2 != 0 {
            return Err(Error::invalid("d + nk/2 must be an integer"));
        }
        Ok(SaddleProblem { m, rs, d2, k })
    }

    /// The target exponent `d + nk/2`.
    pub fn target(&self) -> i64 {
        (self.d2 + self.rs.len() as i64 * self.k as i64) / 2
    }
}

fn validate_rs(m: i64, rs: &[i64]) -> Result<()> {
    if m < 1 {
        return Err(Error::invalid("m must be positive"));
    }
    if rs.is_empty() {
        return Err(Error::invalid("rs must be non-empty"));
    }
    for (i, &r) in rs.iter().enumerate() {
        if !(0..m).contains(&r) {
            return Err(Error::invalid("rs entries must lie in 0..m"));
        }
        if rs[..i].contains(&r) {
            return Err(Error::invalid("rs entries must be pairwise distinct"));
        }
    }
    Ok(())
}

/// Roots of the tangent-sum equation with the derived maximizer data.
#[derive(Clone, Debug)]
pub struct SaddleSolution {
    /// the n roots of `sum_j tan(pi (theta + r_j)/m) = 0` in [0, m)
    pub thetas: Vec<Real>,
    /// the maximum of `prod_j 2|cos(pi (theta + r_j)/m)|` over the roots
    pub c_max: Real,
    /// indices into `thetas` attaining the maximum
    pub maximizers: Vec<usize>,
    /// `c0(theta) = sum_j (2 cos(pi (theta + r_j)/m))^-2` per maximizer
    pub c0_values: Vec<Real>,
    /// sign of `prod_j cos(pi (theta + r_j)/m)` per maximizer
    pub epsilon_signs: Vec<i8>,
}

const SOLVE_DIGITS: u32 = 64;
const BISECT_STEPS: u32 = 220;

/// Locates the n roots by bisection, one in each open circular interval
/// between consecutive poles `-r_j + m/2 (mod m)`, where the tangent sum is
/// continuous, increasing, and runs from -inf to +inf.
pub fn solve_saddle(m: i64, rs: &[i64]) -> Result<SaddleSolution> {
    validate_rs(m, rs)?;
    let bits = bits_for_digits(SOLVE_DIGITS);
    let n = rs.len();
    let pi_v = pi(bits);
    let m_real = Real::from_i64(m, bits);
    let f = |theta: &Real| -> Real {
        let mut acc = Real::zero(bits);
        for &r in rs {
            let arg = pi_v.mul(&theta.add(&Real::from_i64(r, bits))).div(&m_real);
            acc = acc.add(&tan(&arg));
        }
        acc
    };
    // poles at theta = m/2 - r (mod m), in doubled units to stay exact
    let mut poles: Vec<Real> = rs
        .iter()
        .map(|&r| {
            let two_pole = (m - 2 * r).rem_euclid(2 * m);
            Real::from_i64(two_pole, bits).shl(-1)
        })
        .collect();
    poles.sort_by(|a, b| a.cmp_val(b));
    // nudge interval ends inward by 1e-9 * m to avoid pole evaluation
    let eps = Real::from_ratio(&BigInt::from(m), &BigInt::from(1_000_000_000i64), bits);
    let mut thetas = Vec::with_capacity(n);
    for i in 0..n {
        let lo = poles[i].add(&eps);
        let hi = if i + 1 < n {
            poles[i + 1].sub(&eps)
        } else {
            poles[0].add(&m_real).sub(&eps)
        };
        let (mut lo, mut hi) = (lo, hi);
        if !f(&lo).is_negative() || f(&hi).is_negative() {
            return Err(Error::numeric(
                "no sign change across an inter-pole interval",
            ));
        }
        for _ in 0..BISECT_STEPS {
            let mid = lo.add(&hi).shl(-1);
            if f(&mid).is_negative() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = lo.add(&hi).shl(-1);
        let residual = f(&root).abs();
        if Real::from_f64(1e-12, bits).lt(&residual) {
            return Err(Error::numeric("bisection residual too large"));
        }
        // reduce into [0, m): the cosines have period 2m, so the signs
        // depend on the representative; snap roots at the seam to 0
        let snap = m_real.mul(&Real::from_f64(1e-12, bits));
        let root = if m_real.sub(&snap).lt(&root) || !root.lt(&m_real) {
            root.sub(&m_real)
        } else {
            root
        };
        thetas.push(root);
    }
    let mut prods = Vec::with_capacity(n);
    let mut c0s = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for theta in &thetas {
        let mut prod = Real::one(bits);
        let mut c0 = Real::zero(bits);
        let mut sign = 1i8;
        for &r in rs {
            let arg = pi_v.mul(&theta.add(&Real::from_i64(r, bits))).div(&m_real);
            let c = sin_cos(&arg).1.shl(1); // 2 cos
            if c.is_negative() {
                sign = -sign;
            }
            prod = prod.mul(&c.abs());
            c0 = c0.add(&Real::one(bits).div(&c.square()));
        }
        prods.push(prod);
        c0s.push(c0);
        signs.push(sign);
    }
    let c_max = prods
        .iter()
        .cloned()
        .max_by(|a, b| a.cmp_val(b))
        .expect("nonempty");
    let window = c_max.mul(&Real::from_f64(1e-12, bits));
    let maximizers: Vec<usize> = (0..n)
        .filter(|&i| c_max.sub(&prods[i]).lt(&window))
        .collect();
    let c0_values = maximizers.iter().map(|&i| c0s[i].clone()).collect();
    let epsilon_signs = maximizers.iter().map(|&i| signs[i]).collect();
    Ok(SaddleSolution {
        thetas,
        c_max,
        maximizers,
        c0_values,
        epsilon_signs,
    })
}

/// Result of the saddle-point approximation.
///
/// The value is complex whenever the exponent subset is not closed under
/// negation mod m (the coefficient itself is complex then); for symmetric
/// subsets the imaginary part is a rounding residue.
#[derive(Clone, Debug)]
pub struct SaddleEstimate {
    pub value: Real,
    pub value_im: Real,
    /// true when the maximizer sum vanishes; the approximation then only
    /// asserts the coefficient is of order strictly below C^k
    pub subexponential: bool,
    pub c_max: Real,
}

impl SaddleEstimate {
    pub fn modulus(&self) -> Real {
        self.value.square().add(&self.value_im.square()).sqrt()
    }
}

/// `C^k / sqrt(2 pi k) * sum_l eps_l omega^{(k/2) sum r_j - d theta_l} /
/// sqrt(c0(theta_l))` over the maximizing roots, carried out at the given
/// precision (the value overflows f64 long before k = 400).
pub fn approx_coeff(problem: &SaddleProblem, bits: u32) -> Result<SaddleEstimate> {
    if problem.k == 0 {
        return Err(Error::invalid("approx_coeff requires k >= 1"));
    }
    let sol = solve_saddle(problem.m, &problem.rs)?;
    let sbits = sol.c_max.bits();
    let k = problem.k;
    let pi_s = pi(sbits);
    let m_real = Real::from_i64(problem.m, sbits);
    let sum_r: i64 = problem.rs.iter().sum();
    let mut sum = Complex::zero(sbits);
    for (idx, &ti) in sol.maximizers.iter().enumerate() {
        let theta = &sol.thetas[ti];
        // omega^{(k/2) sum r - d theta} = e^{i (pi/m)(k sum_r - d2 theta)}
        let arg = pi_s
            .mul(&Real::from_i64(k as i64 * sum_r, sbits).sub(&theta.mul_i64(problem.d2)))
            .div(&m_real);
        let (s, c) = sin_cos(&arg);
        let phase = Complex::new(c, s);
        let amp = Real::one(sbits).div(&sol.c0_values[idx].sqrt());
        let signed = if sol.epsilon_signs[idx] < 0 { phase.neg() } else { phase };
        sum = sum.add(&signed.mul_real(&amp));
    }
    let tol = Real::from_f64(1e-9, sbits);
    if sum.abs().lt(&tol) {
        return Ok(SaddleEstimate {
            value: Real::zero(bits),
            value_im: Real::zero(bits),
            subexponential: true,
            c_max: sol.c_max,
        });
    }
    let ck = sol.c_max.with_bits(bits).pow_u64(k);
    let denom = pi(bits).mul_i64(2 * k as i64).sqrt();
    let value = ck.mul(&sum.re.with_bits(bits)).div(&denom);
    let value_im = ck.mul(&sum.im.with_bits(bits)).div(&denom);
    Ok(SaddleEstimate {
        value,
        value_im,
        subexponential: false,
        c_max: sol.c_max,
    })
}

/// Default cap on k for the dense-convolution oracle.
pub const EXACT_COEFF_K_CAP: u64 = 1 << 12;

/// Exact coefficient of `z^(d + nk/2)` in `prod_j (1 + omega^{r_j} z)^k` by
/// convolving the exact binomial rows against root-of-unity powers, with
/// precision escalated until the result is stable to 1e-12 relative.
pub fn exact_coeff(problem: &SaddleProblem) -> Result<Complex> {
    let target = problem.target();
    let n = problem.rs.len() as i64;
    let deg = n * problem.k as i64;
    if target < 0 || target > deg {
        return Ok(Complex::zero(bits_for_digits(SOLVE_DIGITS)));
    }
    if problem.k > EXACT_COEFF_K_CAP {
        return Err(Error::resource(format!(
            "exact_coeff degree cap exceeded (k = {})",
            problem.k
        )));
    }
    // magnitude can reach 2^(nk); start with enough digits to resolve it
    let mut digits = SOLVE_DIGITS + (problem.k as u32 * problem.rs.len() as u32) / 3;
    let mut prev: Option<(Complex, u32)> = None;
    loop {
        let bits = bits_for_digits(digits);
        let v = exact_coeff_at(problem, bits);
        if let Some((p, pbits)) = &prev {
            let pv = Complex::new(p.re.with_bits(bits), p.im.with_bits(bits));
            let _ = pbits;
            let diff = v.sub(&pv).abs();
            let scale = v.abs().add(&Real::one(bits));
            if diff.div(&scale).to_f64() < 1e-12 {
                return Ok(v);
            }
        }
        if digits > 8192 {
            return Err(Error::precision("exact_coeff did not stabilize"));
        }
        prev = Some((v, bits));
        digits *= 2;
    }
}

fn exact_coeff_at(problem: &SaddleProblem, bits: u32) -> Complex {
    let k = problem.k as usize;
    let target = problem.target() as usize;
    let mut row = Vec::with_capacity(k + 1);
    row.push(BigInt::one());
    for j in 0..k {
        let next = &row[j] * (k - j) / (j + 1);
        row.push(next);
    }
    // coefficients of the running product, truncated beyond the target
    let mut coeffs: Vec<Complex> = vec![Complex::one(bits)];
    for &r in &problem.rs {
        let mut next = vec![Complex::zero(bits); (coeffs.len() + k).min(target + 1)];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in row.iter().enumerate() {
                if i + j >= next.len() {
                    break;
                }
                // (1 + w^r z)^k contributes binom(k,j) w^{r j} z^j
                let w = unit_root(2 * r * j as i64, problem.m, bits);
                let term = c.mul(&w.mul_real(&Real::from_bigint(b, bits)));
                next[i + j] = next[i + j].add(&term);
            }
        }
        coeffs = next;
    }
    coeffs
        .get(target)
        .cloned()
        .unwrap_or_else(|| Complex::zero(bits))
}
