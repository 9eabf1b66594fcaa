//! Exact walk counts from the determinantal/spectral formulas, evaluated in
//! high-precision arithmetic and rounded to certified integers.
//!
//! Three routes:
//! * positive standard steps on the type A alcove: exact rational
//!   arithmetic over factorials,
//! * diagonal steps on the type A alcove: exact integer arithmetic over
//!   binomial determinants,
//! * the nine remaining (family, step set) combinations: finite spectral
//!   expressions `Σ w_i b_i^k` evaluated under an escalating precision
//!   policy until the nearest-integer rounding is certified.

use crate::error::{Error, Result};
use crate::geometry::{parity_feasible, Family, Point, RegionSpec, StepSet, WalkProblem};
use crate::mp::{bits_for_digits, det_complex, unit_root, Complex, Real};
use crate::oracle::BigCount;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::Mutex;

/// Precision escalation policy for spectral evaluation.
#[derive(Clone, Debug)]
pub struct PrecisionPolicy {
    pub start_digits: u32,
    pub max_digits: u32,
    /// Absolute distance to the nearest integer (and to the real axis)
    /// required for certification.
    pub int_tolerance: f64,
    /// Expand the determinant into eigenvalue terms only when the number of
    /// index tuples `n·(2m)^n` stays below this; otherwise the determinant of
    /// power-summed entries is evaluated directly per k. Both are exact.
    pub expand_threshold: u64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_digits: 64,
            max_digits: 1024,
            int_tolerance: 1e-9,
            expand_threshold: 1_000_000,
        }
    }
}

impl PrecisionPolicy {
    /// A policy that always takes the direct determinant route; the fastest
    /// choice when sweeping many end points at small k.
    pub fn direct() -> Self {
        PrecisionPolicy {
            expand_threshold: 0,
            ..Self::default()
        }
    }
}

/// One term of a spectral decomposition: the count is `Σ w_i · b_i^k`
/// (times a k-dependent binomial prefactor on the type A alcove with
/// standard steps).
#[derive(Clone, Debug)]
pub struct SpectralTerm {
    pub eigenvalue: Complex,
    pub weight: Complex,
}

fn factorials(upto: usize) -> Vec<BigInt> {
    let mut f = Vec::with_capacity(upto + 1);
    f.push(BigInt::one());
    for i in 1..=upto {
        f.push(&f[i - 1] * i);
    }
    f
}

fn binomial_row(k: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(k as usize + 1);
    row.push(BigInt::one());
    for j in 0..k {
        let next = &row[j as usize] * (k - j) / (j + 1);
        row.push(next);
    }
    row
}

/// Determinant of a small rational matrix by cofactor expansion.
fn det_rational(mat: &[Vec<BigRational>]) -> BigRational {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = BigRational::zero();
    for h in 0..n {
        if mat[h][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigRational>> = (0..n)
            .filter(|&r| r != h)
            .map(|r| mat[r][1..].to_vec())
            .collect();
        let term = &mat[h][0] * det_rational(&minor);
        if h % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn det_bigint(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for h in 0..n {
        if mat[h][0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = (0..n)
            .filter(|&r| r != h)
            .map(|r| mat[r][1..].to_vec())
            .collect();
        let term = &mat[h][0] * det_bigint(&minor);
        if h % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Enumerates integer tuples `(k_1, ..., k_n)` with `Σ k_h = 0` and
/// `k_h` in the given per-coordinate ranges.
fn zero_sum_tuples(ranges: &[(i64, i64)], f: &mut impl FnMut(&[i64])) {
    fn rec(ranges: &[(i64, i64)], idx: usize, cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        let n = ranges.len();
        if idx == n - 1 {
            let last = -cur.iter().sum::<i64>();
            if last >= ranges[n - 1].0 && last <= ranges[n - 1].1 {
                cur.push(last);
                f(cur);
                cur.pop();
            }
            return;
        }
        for v in ranges[idx].0..=ranges[idx].1 {
            cur.push(v);
            rec(ranges, idx + 1, cur, f);
            cur.pop();
        }
    }
    if ranges.len() == 1 {
        if ranges[0].0 <= 0 && 0 <= ranges[0].1 {
            f(&[0]);
        }
        return;
    }
    rec(ranges, 0, &mut Vec::new(), f);
}

/// Number of walks with positive standard steps on the type A alcove
/// (exact rational evaluation; the step count is `|λ| - |η|`).
pub fn count_a_positive(eta: &Point, lambda: &Point, m: i64) -> Result<BigCount> {
    let n = eta.dim();
    if lambda.dim() != n {
        return Err(Error::dimension(n, lambda.dim()));
    }
    if eta.coords2.iter().any(|c| c % 2 != 0) || lambda.coords2.iter().any(|c| c % 2 != 0) {
        return Err(Error::invalid("positive-step counts take integer points"));
    }
    let d = (lambda.sum2() - eta.sum2()) / 2;
    if d < 0 {
        return Ok(BigCount::zero());
    }
    let e: Vec<i64> = eta.coords2.iter().map(|c| c / 2).collect();
    let l: Vec<i64> = lambda.coords2.iter().map(|c| c / 2).collect();
    let maxdiff = e
        .iter()
        .flat_map(|&eh| l.iter().map(move |&lt| (lt - eh).abs()))
        .max()
        .unwrap_or(0);
    // outside |m k_h| <= d + maxdiff every determinant row vanishes
    let bound = d + maxdiff;
    let fact = factorials((d + 2 * maxdiff) as usize + 1);
    let kb = div_ceil(bound, m);
    let ranges = vec![(-kb, kb); n];
    let mut total = BigRational::zero();
    zero_sum_tuples(&ranges, &mut |ks| {
        let mut mat = vec![vec![BigRational::zero(); n]; n];
        let mut row_all_zero = false;
        for h in 0..n {
            let mut nonzero = false;
            for t in 0..n {
                let c = l[t] - e[h] + m * ks[h];
                if (0..=d).contains(&c) {
                    mat[h][t] = BigRational::new(BigInt::one(), fact[c as usize].clone());
                    nonzero = true;
                }
            }
            if !nonzero {
                row_all_zero = true;
                break;
            }
        }
        if !row_all_zero {
            total += det_rational(&mat);
        }
    });
    let result = total * BigRational::from_integer(fact[d as usize].clone());
    if !result.is_integer() {
        return Err(Error::internal("positive-step sum did not reduce to an integer"));
    }
    let int = result.to_integer();
    if int.is_negative() {
        return Err(Error::internal("negative positive-step count"));
    }
    Ok(int.to_biguint().unwrap())
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// Number of walks with exactly k diagonal steps on the type A alcove
/// (exact integer evaluation; requires integral m).
pub fn count_a_diagonal(eta: &Point, lambda: &Point, m2: i64, k: u64) -> Result<BigCount> {
    if m2 % 2 != 0 {
        return Err(Error::unsupported(
            "diagonal-step counts on the type A alcove require integral m",
        ));
    }
    let m = m2 / 2;
    let n = eta.dim();
    if lambda.dim() != n {
        return Err(Error::dimension(n, lambda.dim()));
    }
    // entry argument: k/2 + λ_t - η_h + m k_h; doubled numerator must be even
    if eta
        .coords2
        .iter()
        .zip(&lambda.coords2)
        .any(|(a, b)| (k as i64 + b - a) % 2 != 0)
    {
        return Ok(BigCount::zero());
    }
    let row = binomial_row(k);
    let binom = |j: i64| -> BigInt {
        if j < 0 || j > k as i64 {
            BigInt::zero()
        } else {
            row[j as usize].clone()
        }
    };
    let maxdiff2 = eta
        .coords2
        .iter()
        .flat_map(|&eh| lambda.coords2.iter().map(move |&lt| (lt - eh).abs()))
        .max()
        .unwrap_or(0);
    let bound2 = k as i64 + maxdiff2; // doubled bound on |2m k_h|
    let kb = div_ceil(bound2, 2 * m);
    let ranges = vec![(-kb, kb); n];
    let mut total = BigInt::zero();
    zero_sum_tuples(&ranges, &mut |ks| {
        let mut mat = vec![vec![BigInt::zero(); n]; n];
        for h in 0..n {
            for t in 0..n {
                // j = k/2 + (λ2_t - η2_h)/2 + m k_h
                let j2 = k as i64 + lambda.coords2[t] - eta.coords2[h] + 2 * m * ks[h];
                mat[h][t] = binom(j2 / 2);
            }
        }
        total += det_bigint(&mat);
    });
    if total.is_negative() {
        return Err(Error::internal("negative diagonal-step count"));
    }
    Ok(total.to_biguint().unwrap())
}

/// The nine spectral combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kernel {
    AStandard,
    Circle { diagonal: bool },
    Alcove { family: Family, diagonal: bool },
}

fn kernel_for(region: &RegionSpec, steps: StepSet) -> Result<Kernel> {
    match (region.family, steps) {
        (Family::AlcoveA, StepSet::Standard) => Ok(Kernel::AStandard),
        (Family::CircleM, StepSet::Standard) => Ok(Kernel::Circle { diagonal: false }),
        (Family::CircleM, StepSet::Diagonal) => Ok(Kernel::Circle { diagonal: true }),
        (f @ (Family::AlcoveB | Family::AlcoveC | Family::AlcoveD), StepSet::Standard) => {
            if f == Family::AlcoveC && region.m2 % 2 != 0 {
                return Err(Error::unsupported(
                    "type C alcove walks with standard steps require integral m",
                ));
            }
            Ok(Kernel::Alcove { family: f, diagonal: false })
        }
        (f @ (Family::AlcoveB | Family::AlcoveC | Family::AlcoveD), StepSet::Diagonal) => {
            Ok(Kernel::Alcove { family: f, diagonal: true })
        }
        _ => Err(Error::unsupported(format!(
            "no exact formula for family {:?} with {:?} steps",
            region.family, steps
        ))),
    }
}

/// One sine/cosine determinant block of an alcove formula.
///
/// Each block contributes `pref · det_{h,t}( Σ_r g(j(r)·η_h) g(j(r)·λ_t) ·
/// (2cos(π·bfac·j(r)/(2m2)))^k )` with `j(r) = 2r` or `2r+1`, all angles over
/// the unit-root table of order `2·m2` (so half-integer coordinates and m
/// stay exact). `bfac` is 2 for standard steps and 1 for diagonal steps.
struct Block {
    pref: (i64, i64),
    odd: bool,
    r_len: i64,
    /// Im (sine) or Re (cosine) entries
    sine: bool,
}

fn alcove_r_len(diagonal: bool, m2: i64) -> i64 {
    // standard: r to 2m-1; diagonal: r to 4m-1
    if diagonal {
        2 * m2
    } else {
        m2
    }
}

fn alcove_bfac(diagonal: bool) -> i64 {
    if diagonal {
        1
    } else {
        2
    }
}

fn alcove_blocks(family: Family, diagonal: bool, m2: i64) -> Vec<Block> {
    let r_len = alcove_r_len(diagonal, m2);
    match family {
        Family::AlcoveC => vec![Block { pref: (1, 1), odd: false, r_len, sine: true }],
        Family::AlcoveB => vec![
            Block { pref: (1, 2), odd: false, r_len, sine: true },
            Block { pref: (1, 2), odd: true, r_len, sine: true },
        ],
        Family::AlcoveD => vec![
            Block { pref: (1, 4), odd: false, r_len, sine: true },
            Block { pref: (1, 4), odd: true, r_len, sine: true },
            Block { pref: (1, 4), odd: false, r_len, sine: false },
            Block { pref: (1, 4), odd: true, r_len, sine: false },
        ],
        _ => unreachable!(),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct PowKey {
    den: i64,
    idx: i64,
    k: u64,
    bits: u32,
}

static POW_CACHE: Mutex<Option<HashMap<PowKey, Real>>> = Mutex::new(None);

/// `(2 cos(pi idx/den))^k`, cached.
fn cos_base_pow(idx: i64, den: i64, k: u64, bits: u32) -> Real {
    let key = PowKey { den, idx: idx.rem_euclid(2 * den), k, bits };
    {
        let guard = POW_CACHE.lock().unwrap();
        if let Some(map) = guard.as_ref() {
            if let Some(v) = map.get(&key) {
                return v.clone();
            }
        }
    }
    let base = unit_root(key.idx, den, bits).re.shl(1);
    let v = base.pow_u64(k);
    let mut guard = POW_CACHE.lock().unwrap();
    guard.get_or_insert_with(HashMap::new).insert(key, v.clone());
    v
}

/// Spectral evaluation of the exact formulas for one (region, step set).
///
/// Every formula is a finite combination of determinants whose rows carry an
/// independent summation index r. Expanding by multilinearity and grouping
/// the resulting tuples by their underlying set turns each formula into
/// `prefactor(k) * sum_S w_S * b_S^k`, where `w_S` is a product of two small
/// determinants (one over the start point, one over the end point) and `b_S`
/// is real: a sum of cosines for standard steps, a product for diagonal
/// steps. For the diagonal (product-type) kernels the count can also be
/// computed per k as a determinant of per-entry powered sums; both routes
/// are exact and cross-checked in tests.
pub struct SpectralEvaluator {
    pub region: RegionSpec,
    pub steps: StepSet,
    kernel: Kernel,
    term_cache: Mutex<HashMap<(Vec<i64>, Vec<i64>, usize, u32), std::sync::Arc<Vec<SpectralTerm>>>>,
}

impl SpectralEvaluator {
    pub fn new(region: RegionSpec, steps: StepSet) -> Result<Self> {
        let kernel = kernel_for(&region, steps)?;
        Ok(SpectralEvaluator {
            region,
            steps,
            kernel,
            term_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Number of r-sets the eigenvalue expansion produces (per block/class).
    pub fn expansion_size(&self) -> u64 {
        let n = self.region.n as u64;
        let m2 = self.region.m2 as u64;
        let choose = |r: u64, n: u64| -> u64 {
            let mut acc: u64 = 1;
            for i in 0..n {
                acc = acc * (r - i) / (i + 1);
            }
            acc
        };
        match self.kernel {
            Kernel::AStandard => choose(m2 / 2, n),
            Kernel::Circle { diagonal } => {
                let r = if diagonal { m2 } else { m2 / 2 };
                n * choose(r, n)
            }
            Kernel::Alcove { family, diagonal } => {
                let blocks = match family {
                    Family::AlcoveC => 1,
                    Family::AlcoveB => 2,
                    _ => 4,
                };
                let r = if diagonal { 2 * m2 } else { m2 };
                blocks * choose(r, n)
            }
        }
    }

    fn canon(&self, p: &Point) -> Point {
        if self.region.family == Family::CircleM {
            Point::new(p.coords2.iter().map(|&c| c.rem_euclid(self.region.m2)).collect())
        } else {
            p.clone()
        }
    }

    /// Certified exact count of k-step walks from eta to lambda.
    ///
    /// `s` is the cyclic end-point class, meaningful only on the circle.
    pub fn count(
        &self,
        eta: &Point,
        lambda: &Point,
        s: usize,
        k: u64,
        policy: &PrecisionPolicy,
    ) -> Result<BigCount> {
        let n = self.region.n;
        if eta.dim() != n || lambda.dim() != n {
            return Err(Error::dimension(n, eta.dim().max(lambda.dim())));
        }
        let eta = self.canon(eta);
        let lambda = self.canon(lambda);
        if k == 0 {
            // zero-step walk; expansions drop zero eigenvalues, so answer directly
            let same = eta == lambda && (self.region.family != Family::CircleM || s == 0);
            return Ok(if same { BigCount::one() } else { BigCount::zero() });
        }
        let diag_direct = matches!(
            self.kernel,
            Kernel::Circle { diagonal: true } | Kernel::Alcove { diagonal: true, .. }
        ) && self.expansion_size() > policy.expand_threshold;
        let value = certify_integer(policy, |bits| {
            if diag_direct {
                self.diagonal_direct_value(&eta, &lambda, s, k, bits)
            } else {
                let terms = self.terms_cached(&eta, &lambda, s, bits)?;
                let sum = eval_terms(&terms, k, bits);
                Ok(sum.mul_real(&self.a_std_prefactor(&eta, &lambda, k, bits)))
            }
        })?;
        if value.is_negative() {
            return Err(Error::internal(format!(
                "spectral count came out negative ({value})"
            )));
        }
        Ok(value.to_biguint().unwrap())
    }

    /// k-dependent exact prefactor: 1 everywhere except the type A alcove,
    /// where the binomial from the Bessel-coefficient extraction multiplies
    /// the eigenvalue sum.
    fn a_std_prefactor(&self, eta: &Point, lambda: &Point, k: u64, bits: u32) -> Real {
        match self.kernel {
            Kernel::AStandard => {
                let d = (lambda.sum2() - eta.sum2()) / 2;
                let a2 = k as i64 + d;
                if a2 % 2 != 0 || a2 < 0 || a2 > 2 * k as i64 {
                    return Real::zero(bits);
                }
                let row = binomial_row(k);
                Real::from_bigint(&row[(a2 / 2) as usize], bits)
            }
            _ => Real::one(bits),
        }
    }

    fn terms_cached(
        &self,
        eta: &Point,
        lambda: &Point,
        s: usize,
        bits: u32,
    ) -> Result<std::sync::Arc<Vec<SpectralTerm>>> {
        let key = (eta.coords2.clone(), lambda.coords2.clone(), s, bits);
        if let Some(t) = self.term_cache.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = std::sync::Arc::new(self.spectrum(eta, lambda, s, bits)?);
        self.term_cache
            .lock()
            .unwrap()
            .insert(key, t.clone());
        Ok(t)
    }

    /// The eigenvalue expansion of the formula: `count = prefactor(k) *
    /// sum w_i b_i^k` for k >= 1. Terms with vanishing eigenvalue or weight
    /// are dropped, so k = 0 is answered separately by `count`.
    pub fn spectrum(
        &self,
        eta: &Point,
        lambda: &Point,
        s: usize,
        bits: u32,
    ) -> Result<Vec<SpectralTerm>> {
        let n = self.region.n;
        let m2 = self.region.m2;
        let eta = self.canon(eta);
        let lambda = self.canon(lambda);
        // weights below 2^(-bits/2) are rounding residue of exact zeros
        let drop_tol = Real::raw(BigInt::one() << (bits / 2), bits);
        let mut terms: Vec<SpectralTerm> = Vec::new();
        let mut push = |b: Complex, w: Complex| {
            if w.abs().lt(&drop_tol) || b.abs().lt(&drop_tol) {
                return;
            }
            terms.push(SpectralTerm { eigenvalue: b, weight: w });
        };
        match self.kernel {
            Kernel::AStandard => {
                let m = m2 / 2;
                let d = (lambda.sum2() - eta.sum2()) / 2;
                let scale = Real::from_ratio(&BigInt::one(), &BigInt::from(m).pow(n as u32), bits);
                subsets(m, n, &mut |rs| {
                    let mut w = Complex::zero(bits);
                    for &r in rs.iter() {
                        w = w.add(&unit_root(2 * r, m, bits));
                    }
                    let modulus = w.abs();
                    if modulus.lt(&drop_tol) {
                        return;
                    }
                    // W^a conj(W)^b = |W|^k (W/|W|)^D with D = |lam| - |eta|
                    let phase_unit = Complex::new(w.re.div(&modulus), w.im.div(&modulus));
                    let phase = if d >= 0 {
                        phase_unit.pow_u64(d as u64)
                    } else {
                        phase_unit.conj().pow_u64((-d) as u64)
                    };
                    let det_eta = det_complex(&unit_matrix(rs, &eta.coords2, 1, m, bits));
                    let det_lam = det_complex(&unit_matrix(rs, &lambda.coords2, -1, m, bits));
                    let weight = det_eta.mul(&det_lam).mul(&phase).mul_real(&scale);
                    push(Complex::from_real(modulus), weight);
                });
            }
            Kernel::Circle { diagonal } => {
                let den = m2 * n as i64;
                let r_hi = if diagonal { m2 } else { m2 / 2 };
                // per-entry factor 1/m = 2/m2 (standard) or 1/(2m) = 1/m2
                // (diagonal), kept as an exact ratio since m may be half-integral
                let num = if diagonal { BigInt::one() } else { BigInt::from(2).pow(n as u32) };
                let scale = Real::from_ratio(
                    &num,
                    &(BigInt::from(m2).pow(n as u32) * n),
                    bits,
                );
                for u in 0..n as i64 {
                    let phase_s = unit_root(-2 * u * s as i64, n as i64, bits);
                    subsets(r_hi, n, &mut |rs| {
                        let js: Vec<i64> = rs.iter().map(|&r| u + n as i64 * r).collect();
                        let eig = circle_eigenvalue(&js, den, diagonal, bits);
                        // e^{±2 pi i j x / (m n)} needs the doubled index over m2*n
                        let det_eta = det_complex(&unit_matrix(&js, &eta.coords2, 2, den, bits));
                        let det_lam = det_complex(&unit_matrix(&js, &lambda.coords2, -2, den, bits));
                        let w = det_eta
                            .mul(&det_lam)
                            .mul(&phase_s)
                            .mul_real(&scale);
                        push(Complex::from_real(eig), w);
                    });
                }
            }
            Kernel::Alcove { family, diagonal } => {
                let blocks = alcove_blocks(family, diagonal, m2);
                let den = 2 * m2;
                let bfac = alcove_bfac(diagonal);
                let num = if diagonal { BigInt::one() } else { BigInt::from(2).pow(n as u32) };
                let scale = Real::from_ratio(&num, &BigInt::from(m2).pow(n as u32), bits);
                for blk in &blocks {
                    let pref = Real::from_ratio(&BigInt::from(blk.pref.0), &BigInt::from(blk.pref.1), bits)
                        .mul(&scale);
                    subsets(blk.r_len, n, &mut |rs| {
                        let js: Vec<i64> = rs
                            .iter()
                            .map(|&r| if blk.odd { 2 * r + 1 } else { 2 * r })
                            .collect();
                        let mut b = Real::zero(bits);
                        let mut bprod = Real::one(bits);
                        for &j in &js {
                            let c = unit_root(bfac * j, den, bits).re.shl(1);
                            if diagonal {
                                bprod = bprod.mul(&c);
                            } else {
                                b = b.add(&c);
                            }
                        }
                        let eig = if diagonal { bprod } else { b };
                        let det_eta = det_complex(&trig_matrix(&js, &eta.coords2, den, blk.sine, bits));
                        let det_lam = det_complex(&trig_matrix(&js, &lambda.coords2, den, blk.sine, bits));
                        let w = det_eta.mul(&det_lam).mul_real(&pref);
                        push(Complex::from_real(eig), w);
                    });
                }
            }
        }
        Ok(terms)
    }

    /// Per-k determinant evaluation for the diagonal kernels, where the base
    /// is a product over rows and per-entry powering is exact.
    fn diagonal_direct_value(
        &self,
        eta: &Point,
        lambda: &Point,
        s: usize,
        k: u64,
        bits: u32,
    ) -> Result<Complex> {
        let n = self.region.n;
        let m2 = self.region.m2;
        match self.kernel {
            Kernel::Circle { diagonal: true } => {
                let den = m2 * n as i64;
                let mut total = Complex::zero(bits);
                for u in 0..n as i64 {
                    let mut mat = vec![vec![Complex::zero(bits); n]; n];
                    for h in 0..n {
                        for t in 0..n {
                            let d2 = lambda.coords2[t] - eta.coords2[h];
                            let mut entry = Complex::zero(bits);
                            for r in 0..m2 {
                                let j = u + n as i64 * r;
                                let phase = unit_root(-2 * j * d2, den, bits);
                                let bp = cos_base_pow(2 * j, den, k, bits);
                                entry = entry.add(&phase.mul_real(&bp));
                            }
                            mat[h][t] = entry;
                        }
                    }
                    let phase_s = unit_root(-2 * u * s as i64, n as i64, bits);
                    total = total.add(&det_complex(&mat).mul(&phase_s));
                }
                let scale = Real::from_ratio(
                    &BigInt::one(),
                    &(BigInt::from(m2).pow(n as u32) * n),
                    bits,
                );
                Ok(total.mul_real(&scale))
            }
            Kernel::Alcove { family, diagonal: true } => {
                let blocks = alcove_blocks(family, true, m2);
                let den = 2 * m2;
                let mut total = Complex::zero(bits);
                for blk in &blocks {
                    let mut mat = vec![vec![Complex::zero(bits); n]; n];
                    for h in 0..n {
                        for t in 0..n {
                            let mut entry = Real::zero(bits);
                            for r in 0..blk.r_len {
                                let j = 2 * r + if blk.odd { 1 } else { 0 };
                                let g_eta = trig(j * eta.coords2[h], den, blk.sine, bits);
                                let g_lam = trig(j * lambda.coords2[t], den, blk.sine, bits);
                                let bp = cos_base_pow(j, den, k, bits);
                                entry = entry.add(&g_eta.mul(&g_lam).mul(&bp));
                            }
                            mat[h][t] = Complex::from_real(entry);
                        }
                    }
                    let pref = Real::from_ratio(&BigInt::from(blk.pref.0), &BigInt::from(blk.pref.1), bits);
                    total = total.add(&det_complex(&mat).mul_real(&pref));
                }
                let scale = Real::from_ratio(&BigInt::one(), &BigInt::from(m2).pow(n as u32), bits);
                Ok(total.mul_real(&scale))
            }
            _ => Err(Error::internal("direct route is only defined for diagonal kernels")),
        }
    }
}

fn circle_eigenvalue(js: &[i64], den: i64, diagonal: bool, bits: u32) -> Real {
    let mut b = Real::zero(bits);
    let mut bprod = Real::one(bits);
    for &j in js {
        let c = if diagonal {
            unit_root(2 * j, den, bits).re.shl(1)
        } else {
            unit_root(4 * j, den, bits).re.shl(1)
        };
        if diagonal {
            bprod = bprod.mul(&c);
        } else {
            b = b.add(&c);
        }
    }
    if diagonal {
        bprod
    } else {
        b
    }
}

/// `mat[h][t] = e^(sign * i pi 2 js[h] coords2[t] / (2 den))`, i.e. the
/// Vandermonde-type factor `omega^(±js[h] x_t)` over the order-2den table.
fn unit_matrix(js: &[i64], coords2: &[i64], sign: i64, den: i64, bits: u32) -> Vec<Vec<Complex>> {
    let n = coords2.len();
    (0..n)
        .map(|h| {
            (0..n)
                .map(|t| unit_root(sign * js[h] * coords2[t], den, bits))
                .collect()
        })
        .collect()
}

fn trig_matrix(js: &[i64], coords2: &[i64], den: i64, sine: bool, bits: u32) -> Vec<Vec<Complex>> {
    let n = coords2.len();
    (0..n)
        .map(|h| {
            (0..n)
                .map(|t| Complex::from_real(trig(js[h] * coords2[t], den, sine, bits)))
                .collect()
        })
        .collect()
}

/// Strictly increasing index sets of size n from {0, ..., hi-1}.
fn subsets(hi: i64, n: usize, f: &mut impl FnMut(&[i64])) {
    fn rec(hi: i64, n: usize, from: i64, cur: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
        if cur.len() == n {
            f(cur);
            return;
        }
        let remaining = (n - cur.len()) as i64;
        for r in from..=(hi - remaining) {
            cur.push(r);
            rec(hi, n, r + 1, cur, f);
            cur.pop();
        }
    }
    rec(hi, n, 0, &mut Vec::new(), f);
}

fn trig(idx: i64, den: i64, sine: bool, bits: u32) -> Real {
    let z = unit_root(idx, den, bits);
    if sine {
        z.im
    } else {
        z.re
    }
}

/// `sum w_i b_i^k` over the expansion terms (k >= 1; zero eigenvalues were
/// dropped by construction).
fn eval_terms(terms: &[SpectralTerm], k: u64, bits: u32) -> Complex {
    let mut acc = Complex::zero(bits);
    for t in terms {
        acc = acc.add(&t.weight.mul(&t.eigenvalue.pow_u64(k)));
    }
    acc
}

/// Escalates precision until the value is certifiably a real integer.
fn certify_integer(
    policy: &PrecisionPolicy,
    f: impl Fn(u32) -> Result<Complex>,
) -> Result<BigInt> {
    let mut digits = policy.start_digits;
    loop {
        let bits = bits_for_digits(digits);
        let v = f(bits)?;
        let tol = Real::from_f64(policy.int_tolerance, bits);
        // magnitude guard: the fixed-point resolution must clear the value's
        // own magnitude, or rounding noise can masquerade as certification
        let mag_ok = (v.re.mantissa().bits() as i64) < bits as i64 + (bits as i64 - 96).max(0);
        let (q, err) = v.re.round_int();
        if mag_ok && v.im.abs().lt(&tol) && err.lt(&tol) {
            return Ok(q);
        }
        if digits >= policy.max_digits {
            return Err(Error::precision(format!(
                "no certified integer at {digits} digits (residual {:.3e}, imag {:.3e})",
                err.to_f64(),
                v.im.abs().to_f64()
            )));
        }
        digits = (digits * 2).min(policy.max_digits);
    }
}

/// Exact count via the appropriate formula for the problem's combination.
pub fn count_exact(problem: &WalkProblem) -> Result<BigCount> {
    count_exact_with(problem, &PrecisionPolicy::default())
}

pub fn count_exact_with(problem: &WalkProblem, policy: &PrecisionPolicy) -> Result<BigCount> {
    problem.validate()?;
    let end = problem
        .end
        .as_ref()
        .ok_or_else(|| Error::invalid("count_exact requires an end point"))?;
    match (problem.region.family, problem.steps) {
        (Family::AlcoveA, StepSet::PositiveStandard) => {
            let d = (end.sum2() - problem.start.sum2()) / 2;
            if d != problem.k as i64 {
                return Ok(BigCount::zero());
            }
            count_a_positive(&problem.start, end, problem.region.m_int()?)
        }
        (Family::AlcoveA, StepSet::Diagonal) => {
            count_a_diagonal(&problem.start, end, problem.region.m2, problem.k)
        }
        _ => {
            let ev = SpectralEvaluator::new(problem.region, problem.steps)?;
            let s = if problem.region.family == Family::CircleM {
                problem.shift_s()?
            } else {
                0
            };
            ev.count(&problem.start, end, s, problem.k, policy)
        }
    }
}

/// Convenience wrapper for the spectral combinations only.
pub fn count_spectral(problem: &WalkProblem) -> Result<BigCount> {
    count_spectral_with(problem, &PrecisionPolicy::default())
}

pub fn count_spectral_with(problem: &WalkProblem, policy: &PrecisionPolicy) -> Result<BigCount> {
    let end = problem
        .end
        .as_ref()
        .ok_or_else(|| Error::invalid("count_spectral requires an end point"))?;
    let ev = SpectralEvaluator::new(problem.region, problem.steps)?;
    let s = if problem.region.family == Family::CircleM {
        problem.shift_s()?
    } else {
        0
    };
    ev.count(&problem.start, end, s, problem.k, policy)
}

/// Free-endpoint exact total: the sum of exact counts over every admissible
/// end point (finite for every supported combination).
pub fn count_exact_free_total(
    region: &RegionSpec,
    steps: StepSet,
    start: &Point,
    k: u64,
    policy: &PrecisionPolicy,
) -> Result<BigCount> {
    let endpoints = free_endpoints(region, steps, start, k)?;
    let mut total = BigCount::zero();
    for end in endpoints {
        let mut problem = WalkProblem::new(*region, steps, start.clone(), Some(end), k)?;
        problem.circle_shift_s = None;
        if !parity_feasible(&problem) {
            continue;
        }
        total += count_exact_with(&problem, policy)?;
    }
    Ok(total)
}

/// All candidate end points of a k-step walk (a finite superset of the
/// reachable set; unreachable points contribute zero counts).
pub fn free_endpoints(
    region: &RegionSpec,
    steps: StepSet,
    start: &Point,
    k: u64,
) -> Result<Vec<Point>> {
    match region.family {
        Family::AlcoveA => crate::geometry::alcove_a_endpoints(region, start, steps, k),
        Family::CircleM => {
            let half = match steps {
                StepSet::Diagonal => {
                    if region.m2 % 2 == 0 {
                        (start.coords2[0] + k as i64).rem_euclid(2) == 1
                    } else {
                        // half-integer circle: both classes occur; enumerate all
                        return crate::geometry::region_points(region, false);
                    }
                }
                _ => start.coords2[0].rem_euclid(2) == 1,
            };
            crate::geometry::region_points(region, half)
        }
        _ => {
            let half = match steps {
                StepSet::Diagonal => (start.coords2[0] + k as i64).rem_euclid(2) == 1,
                _ => start.coords2[0].rem_euclid(2) == 1,
            };
            crate::geometry::region_points(region, half)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::in_region;
    use crate::oracle::{count_dp, count_dp_free};

    fn region(family: Family, n: usize, m2: i64) -> RegionSpec {
        RegionSpec::new(family, n, m2).unwrap()
    }

    #[test]
    fn positive_trivial_cases() {
        // λ = η: single empty walk
        let eta = Point::from_ints(&[2, 1]);
        assert_eq!(count_a_positive(&eta, &eta, 3).unwrap(), BigCount::one());
        // |λ| < |η|: impossible
        let lam = Point::from_ints(&[1, 0]);
        assert_eq!(count_a_positive(&eta, &lam, 3).unwrap(), BigCount::zero());
        // derived example: one walk from (2,1) to (3,2)
        let lam = Point::from_ints(&[3, 2]);
        assert_eq!(count_a_positive(&eta, &lam, 3).unwrap(), BigCount::one());
    }

    #[test]
    fn positive_matches_dp() {
        let a = region(Family::AlcoveA, 2, 6);
        let eta = Point::from_ints(&[2, 0]);
        for k in 0..=6u64 {
            let problem =
                WalkProblem::new(a, StepSet::PositiveStandard, eta.clone(), None, k).unwrap();
            let dist = count_dp_free(&problem).unwrap();
            for (lam, want) in &dist.entries {
                assert_eq!(&count_a_positive(&eta, lam, 3).unwrap(), want, "k={k}");
            }
        }
    }

    #[test]
    fn diagonal_n1_is_a_binomial() {
        // n = 1 with large m: a free one-dimensional walk. Displacement 3/2
        // in 5 half-steps needs 4 up-moves: binom(5, 4) = 5.
        let eta = Point::from_halves(&[1]);
        let lam = Point::from_halves(&[4]);
        assert_eq!(
            count_a_diagonal(&eta, &lam, 40, 5).unwrap(),
            BigCount::from(5u32)
        );
        // parity-impossible displacement
        assert_eq!(
            count_a_diagonal(&eta, &Point::from_halves(&[3]), 40, 5).unwrap(),
            BigCount::zero()
        );
    }

    #[test]
    fn diagonal_matches_dp() {
        let a = region(Family::AlcoveA, 2, 6);
        let eta = Point::from_halves(&[3, 1]);
        for k in [0u64, 2, 4] {
            let problem = WalkProblem::new(a, StepSet::Diagonal, eta.clone(), None, k).unwrap();
            let dist = count_dp_free(&problem).unwrap();
            for (lam, want) in &dist.entries {
                assert_eq!(&count_a_diagonal(&eta, lam, 6, k).unwrap(), want, "k={k}");
            }
        }
    }

    #[test]
    fn spectral_c_diagonal_matches_dp() {
        let c = region(Family::AlcoveC, 2, 8);
        let eta = Point::from_ints(&[2, 1]);
        let ev = SpectralEvaluator::new(c, StepSet::Diagonal).unwrap();
        let policy = PrecisionPolicy::direct();
        for k in [0u64, 2, 4, 6] {
            let p = WalkProblem::new(c, StepSet::Diagonal, eta.clone(), Some(eta.clone()), k)
                .unwrap();
            let want = count_dp(&p).unwrap();
            let got = ev.count(&eta, &eta, 0, k, &policy).unwrap();
            assert_eq!(got, want, "k={k}");
        }
    }

    #[test]
    fn spectral_a_standard_matches_dp() {
        let a = region(Family::AlcoveA, 2, 6);
        let eta = Point::from_ints(&[2, 1]);
        let ev = SpectralEvaluator::new(a, StepSet::Standard).unwrap();
        let policy = PrecisionPolicy::direct();
        for k in 0..=6u64 {
            let problem = WalkProblem::new(a, StepSet::Standard, eta.clone(), None, k).unwrap();
            let dist = count_dp_free(&problem).unwrap();
            for (lam, want) in &dist.entries {
                let got = ev.count(&eta, lam, 0, k, &policy).unwrap();
                assert_eq!(&got, want, "k={k} lam={}", lam.display());
            }
        }
    }

    #[test]
    fn spectral_circle_standard_matches_dp() {
        let c = region(Family::CircleM, 2, 8);
        let eta = Point::from_ints(&[1, 0]);
        let ev = SpectralEvaluator::new(c, StepSet::Standard).unwrap();
        let policy = PrecisionPolicy::direct();
        for k in [2u64, 4, 6] {
            let problem = WalkProblem::new(c, StepSet::Standard, eta.clone(), None, k).unwrap();
            let dist = count_dp_free(&problem).unwrap();
            for (lam, want) in &dist.entries {
                let s = crate::geometry::circle_shift(&c, lam).unwrap();
                let got = ev.count(&eta, lam, s, k, &policy).unwrap();
                assert_eq!(&got, want, "k={k} lam={}", lam.display());
            }
        }
    }

    #[test]
    fn expansion_and_direct_agree_on_diagonal_kernels() {
        let c = region(Family::AlcoveC, 2, 8);
        let eta = Point::from_ints(&[2, 1]);
        let lam = Point::from_ints(&[3, 1]);
        let ev = SpectralEvaluator::new(c, StepSet::Diagonal).unwrap();
        let direct = PrecisionPolicy::direct();
        let expanded = PrecisionPolicy::default();
        for k in [1u64, 3, 5, 9] {
            assert_eq!(
                ev.count(&eta, &lam, 0, k, &direct).unwrap(),
                ev.count(&eta, &lam, 0, k, &expanded).unwrap(),
                "k={k}"
            );
        }
        let circ = region(Family::CircleM, 2, 8);
        let eta = Point::from_ints(&[2, 0]);
        let ev = SpectralEvaluator::new(circ, StepSet::Diagonal).unwrap();
        for k in [2u64, 4, 6] {
            assert_eq!(
                ev.count(&eta, &eta, 0, k, &direct).unwrap(),
                ev.count(&eta, &eta, 0, k, &expanded).unwrap(),
                "circle k={k}"
            );
        }
    }

    #[test]
    fn spectrum_is_real_and_conjugation_closed() {
        let c = region(Family::CircleM, 2, 6);
        let eta = Point::from_ints(&[1, 0]);
        let ev = SpectralEvaluator::new(c, StepSet::Diagonal).unwrap();
        let bits = bits_for_digits(40);
        let terms = ev.spectrum(&eta, &eta, 0, bits).unwrap();
        assert!(!terms.is_empty());
        let tol = Real::from_f64(1e-20, bits);
        for k in [2u64, 4] {
            let v = eval_terms(&terms, k, bits);
            assert!(v.im.abs().lt(&tol), "Σ w b^k not real at k={k}");
        }
        // eigenvalues are real here, hence trivially closed under conjugation
        for t in &terms {
            assert!(t.eigenvalue.im.abs().lt(&tol));
        }
    }

    #[test]
    fn parity_infeasible_is_certified_zero() {
        let c = region(Family::AlcoveC, 2, 8);
        let eta = Point::from_ints(&[2, 1]);
        let ev = SpectralEvaluator::new(c, StepSet::Standard).unwrap();
        let got = ev.count(&eta, &eta, 0, 3, &PrecisionPolicy::direct()).unwrap();
        assert_eq!(got, BigCount::zero());
    }

    #[test]
    fn certification_is_monotone_in_precision() {
        // once certified, more digits never change the rounded integer
        let c = region(Family::AlcoveC, 2, 8);
        let eta = Point::from_ints(&[2, 1]);
        let ev = SpectralEvaluator::new(c, StepSet::Standard).unwrap();
        for digits in [32u32, 64, 128, 256] {
            let policy = PrecisionPolicy {
                start_digits: digits,
                expand_threshold: 0,
                ..PrecisionPolicy::default()
            };
            // frozen from the DP oracle: the m=4 type C alcove is the path
            // graph (2,1)-(3,1)-(3,2), whose 8-step return count is 8
            assert_eq!(
                ev.count(&eta, &eta, 0, 8, &policy).unwrap(),
                BigCount::from(8u32),
                "digits={digits}"
            );
        }
    }

    #[test]
    fn free_endpoints_cover_dp_support() {
        for (fam, steps, m2, start) in [
            (Family::AlcoveC, StepSet::Standard, 8, Point::from_ints(&[2, 1])),
            (Family::AlcoveB, StepSet::Diagonal, 6, Point::from_halves(&[3, 1])),
            (Family::AlcoveD, StepSet::Standard, 6, Point::from_ints(&[2, 1])),
            (Family::CircleM, StepSet::Diagonal, 5, Point::from_ints(&[2, 0])),
        ] {
            let region = RegionSpec::new(fam, 2, m2).unwrap();
            for k in [1u64, 2, 3] {
                let problem =
                    WalkProblem::new(region, steps, start.clone(), None, k).unwrap();
                let dist = count_dp_free(&problem).unwrap();
                let endpoints = free_endpoints(&region, steps, &start, k).unwrap();
                for p in dist.entries.keys() {
                    assert!(
                        endpoints.contains(p),
                        "{fam:?} {steps:?} k={k}: endpoint {} missing",
                        p.display()
                    );
                    assert!(in_region(&region, p).unwrap());
                }
            }
        }
    }
}
