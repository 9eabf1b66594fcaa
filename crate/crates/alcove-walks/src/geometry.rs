//! Region geometry shared by every counting route: the four alcove families,
//! the circle, step sets, and the parity predicates.
//!
//! All coordinates are stored *doubled* so that half-integer points, step
//! vectors of ±1/2 and half-integer values of `m` are exact integers. A point
//! `(3/2, 1/2)` is stored as `coords2 = [3, 1]`, and `m = 5/2` as `m2 = 5`.

use crate::error::{Error, Result};

/// Which region the walk is confined to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    /// `x_1 > x_2 > ... > x_n > x_1 - m`
    AlcoveA,
    /// `x_1 > ... > x_n > 0` and `x_1 + x_2 < 2m`
    AlcoveB,
    /// `m > x_1 > ... > x_n > 0`
    AlcoveC,
    /// `x_1 > ... > x_{n-1} > |x_n|` and `x_1 + x_2 < 2m`
    AlcoveD,
    /// n coordinates reduced modulo m, pairwise distinct mod m
    CircleM,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::AlcoveA => "A",
            Family::AlcoveB => "B",
            Family::AlcoveC => "C",
            Family::AlcoveD => "D",
            Family::CircleM => "circle",
        }
    }
}

/// The step set of the walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum StepSet {
    /// `+e_j` only; legal only on the type A alcove
    PositiveStandard,
    /// `±e_j`
    Standard,
    /// `(±1/2, ..., ±1/2)`, every sign pattern
    Diagonal,
}

impl StepSet {
    pub fn as_str(self) -> &'static str {
        match self {
            StepSet::PositiveStandard => "positive",
            StepSet::Standard => "standard",
            StepSet::Diagonal => "diagonal",
        }
    }
}

/// A region instance: family, dimension and (doubled) size parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RegionSpec {
    pub family: Family,
    pub n: usize,
    /// 2m; odd values encode half-integer m.
    pub m2: i64,
}

impl RegionSpec {
    pub fn new(family: Family, n: usize, m2: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("dimension n must be positive"));
        }
        if m2 < 2 {
            return Err(Error::invalid("m must be at least 1 (m2 >= 2)"));
        }
        if family == Family::AlcoveD && n == 1 {
            // The n = 1 degeneration of the type D alcove has no bounding
            // walls at all; the exact formula then counts walks on a cycle,
            // not walks in a region, so we reject it.
            return Err(Error::invalid("the type D alcove requires n >= 2"));
        }
        Ok(RegionSpec { family, n, m2 })
    }

    /// True when m is an integer.
    pub fn m_is_integer(&self) -> bool {
        self.m2 % 2 == 0
    }

    /// m as an integer; errors when m is a half-integer.
    pub fn m_int(&self) -> Result<i64> {
        if self.m_is_integer() {
            Ok(self.m2 / 2)
        } else {
            Err(Error::unsupported("this operation requires integral m"))
        }
    }
}

/// A point with doubled coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub coords2: Vec<i64>,
}

impl Point {
    pub fn new(coords2: Vec<i64>) -> Self {
        Point { coords2 }
    }

    /// Point with integer coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        Point {
            coords2: coords.iter().map(|c| 2 * c).collect(),
        }
    }

    /// Point with coordinates `halves[j] / 2`.
    pub fn from_halves(halves: &[i64]) -> Self {
        Point {
            coords2: halves.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords2.len()
    }

    /// Doubled coordinate sum `2|x|`.
    pub fn sum2(&self) -> i64 {
        self.coords2.iter().sum()
    }

    /// All coordinates in one parity class (all integers or all half-integers).
    pub fn uniform_parity(&self) -> bool {
        self.coords2
            .iter()
            .all(|c| c.rem_euclid(2) == self.coords2[0].rem_euclid(2))
    }

    /// Renders the mathematical coordinates, halves as `p/2`.
    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .coords2
            .iter()
            .map(|&c| {
                if c % 2 == 0 {
                    format!("{}", c / 2)
                } else {
                    format!("{}/2", c)
                }
            })
            .collect();
        parts.join(",")
    }

    /// Parses comma-separated mathematical values, accepting `a`, `a/2`, `a.5`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut coords2 = Vec::new();
        for item in s.split(',') {
            coords2.push(parse_half(item.trim())?);
        }
        Ok(Point { coords2 })
    }
}

/// Parses one integer or half-integer into its doubled value.
pub fn parse_half(s: &str) -> Result<i64> {
    if let Some(num) = s.strip_suffix("/2") {
        let v: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("cannot parse half-integer '{s}'")))?;
        if v % 2 == 0 {
            return Err(Error::invalid(format!("'{s}' is not in lowest terms")));
        }
        Ok(v)
    } else if let Some(num) = s.strip_suffix(".5") {
        let v: i64 = if num.is_empty() || num == "-" {
            0
        } else {
            num.parse()
                .map_err(|_| Error::invalid(format!("cannot parse '{s}'")))?
        };
        Ok(2 * v + if s.starts_with('-') { -1 } else { 1 })
    } else {
        let v: i64 = s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("cannot parse coordinate '{s}'")))?;
        Ok(2 * v)
    }
}

/// A fully specified counting problem.
#[derive(Clone, Debug)]
pub struct WalkProblem {
    pub region: RegionSpec,
    pub steps: StepSet,
    pub start: Point,
    pub end: Option<Point>,
    pub k: u64,
    /// Cyclic class of the end point on the circle; derived from `end`
    /// when absent.
    pub circle_shift_s: Option<usize>,
}

impl WalkProblem {
    pub fn new(
        region: RegionSpec,
        steps: StepSet,
        start: Point,
        end: Option<Point>,
        k: u64,
    ) -> Result<Self> {
        let p = WalkProblem {
            region,
            steps,
            start,
            end,
            k,
            circle_shift_s: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let region = &self.region;
        if self.steps == StepSet::PositiveStandard && region.family != Family::AlcoveA {
            return Err(Error::unsupported(
                "positive standard steps are only defined on the type A alcove",
            ));
        }
        if self.start.dim() != region.n {
            return Err(Error::dimension(region.n, self.start.dim()));
        }
        if region.family == Family::CircleM
            && self.steps == StepSet::Standard
            && !region.m_is_integer()
        {
            return Err(Error::unsupported(
                "circle walks with standard steps require integral m",
            ));
        }
        if region.family == Family::AlcoveA && !region.m_is_integer() {
            return Err(Error::unsupported(
                "type A alcove walks require integral m",
            ));
        }
        if !in_region(region, &self.start)? {
            return Err(Error::invalid(format!(
                "start point ({}) is not strictly inside the region",
                self.start.display()
            )));
        }
        if let Some(end) = &self.end {
            if end.dim() != region.n {
                return Err(Error::dimension(region.n, end.dim()));
            }
            if !in_region(region, end)? {
                return Err(Error::invalid(format!(
                    "end point ({}) is not strictly inside the region",
                    end.display()
                )));
            }
            if region.family == Family::CircleM {
                let s = circle_shift(region, end)?;
                if let Some(given) = self.circle_shift_s {
                    if given != s {
                        return Err(Error::invalid(format!(
                            "end point has cyclic class s={s}, but s={given} was requested"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The cyclic class of the end point (circle problems only).
    pub fn shift_s(&self) -> Result<usize> {
        match (self.circle_shift_s, &self.end) {
            (Some(s), _) => Ok(s),
            (None, Some(end)) => circle_shift(&self.region, end),
            (None, None) => Err(Error::invalid("no end point to derive s from")),
        }
    }
}

/// Canonical doubled residue in `[0, m2)`.
#[inline]
pub fn reduce2(region: &RegionSpec, c2: i64) -> i64 {
    c2.rem_euclid(region.m2)
}

/// Strict membership in the open region.
///
/// For the circle this is pairwise distinctness of the coordinates mod m.
pub fn in_region(region: &RegionSpec, p: &Point) -> Result<bool> {
    if p.dim() != region.n {
        return Err(Error::dimension(region.n, p.dim()));
    }
    let c = &p.coords2;
    let n = region.n;
    let m2 = region.m2;
    Ok(match region.family {
        Family::AlcoveA => {
            // x_1 > ... > x_n > x_1 - m; for n = 1 the constraint is vacuous.
            c.windows(2).all(|w| w[0] > w[1]) && (n == 1 || c[n - 1] > c[0] - m2)
        }
        Family::AlcoveC => c[0] < m2 && c.windows(2).all(|w| w[0] > w[1]) && c[n - 1] > 0,
        Family::AlcoveB => {
            // For n = 1 the affine wall degenerates to x_1 < 2m.
            let affine = if n >= 2 { c[0] + c[1] < 2 * m2 } else { c[0] < 2 * m2 };
            c.windows(2).all(|w| w[0] > w[1]) && c[n - 1] > 0 && affine
        }
        Family::AlcoveD => {
            // Besides the printed inequalities, the reflection group also
            // fixes the wall x_1 - x_n < 2m, which is implied for n >= 3 but
            // binding for n = 2.
            c[..n - 1].windows(2).all(|w| w[0] > w[1])
                && c[n - 2] > c[n - 1].abs()
                && c[0] + c[1] < 2 * m2
                && c[0] - c[n - 1] < 2 * m2
        }
        Family::CircleM => {
            for h in 0..n {
                for t in (h + 1)..n {
                    if (c[h] - c[t]).rem_euclid(m2) == 0 {
                        return Ok(false);
                    }
                }
            }
            true
        }
    })
}

/// All points reachable from `p` by one legal step that stay strictly inside.
///
/// Circle points are canonicalized to doubled residues in `[0, m2)`.
pub fn neighbors(region: &RegionSpec, steps: StepSet, p: &Point) -> Result<Vec<Point>> {
    if p.dim() != region.n {
        return Err(Error::dimension(region.n, p.dim()));
    }
    if steps == StepSet::PositiveStandard && region.family != Family::AlcoveA {
        return Err(Error::unsupported(
            "positive standard steps are only defined on the type A alcove",
        ));
    }
    let n = region.n;
    let circle = region.family == Family::CircleM;
    let mut out = Vec::new();
    let mut push = |cand: Point| -> Result<()> {
        let cand = if circle {
            Point::new(cand.coords2.iter().map(|&c| reduce2(region, c)).collect())
        } else {
            cand
        };
        if in_region(region, &cand)? {
            out.push(cand);
        }
        Ok(())
    };
    match steps {
        StepSet::PositiveStandard | StepSet::Standard => {
            let signs: &[i64] = if steps == StepSet::Standard { &[2, -2] } else { &[2] };
            for j in 0..n {
                for &s in signs {
                    let mut c = p.coords2.clone();
                    c[j] += s;
                    push(Point::new(c))?;
                }
            }
        }
        StepSet::Diagonal => {
            for mask in 0..(1u32 << n) {
                let c = p
                    .coords2
                    .iter()
                    .enumerate()
                    .map(|(j, &x)| x + if mask >> j & 1 == 1 { 1 } else { -1 })
                    .collect();
                push(Point::new(c))?;
            }
        }
    }
    Ok(out)
}

/// The cyclic class s of a circle end point: the unique rotation for which
/// `λ_{s+1} > ... > λ_n > λ_1 > ... > λ_s` (coordinates taken in `[0, m)`).
pub fn circle_shift(region: &RegionSpec, p: &Point) -> Result<usize> {
    if p.dim() != region.n {
        return Err(Error::dimension(region.n, p.dim()));
    }
    let n = region.n;
    let c: Vec<i64> = p.coords2.iter().map(|&x| reduce2(region, x)).collect();
    for s in 0..n {
        // rotation (λ_{s+1}, ..., λ_n, λ_1, ..., λ_s) must be strictly decreasing
        let rotated: Vec<i64> = (0..n).map(|i| c[(s + i) % n]).collect();
        if rotated.windows(2).all(|w| w[0] > w[1]) {
            return Ok(s);
        }
    }
    Err(Error::invalid(
        "circle point is not a rotation of a strictly decreasing vector",
    ))
}

/// Necessary parity condition for a k-step walk from start to end.
///
/// Returns false only when no walk of length k can exist for parity reasons;
/// true is not a guarantee of reachability.
pub fn parity_feasible(problem: &WalkProblem) -> bool {
    let end = match &problem.end {
        Some(e) => e,
        None => return true,
    };
    let start = &problem.start;
    let region = &problem.region;
    let k = problem.k as i64;
    match problem.steps {
        StepSet::PositiveStandard => {
            // |λ| - |η| must equal k exactly.
            end.sum2() - start.sum2() == 2 * k
        }
        StepSet::Diagonal => {
            if region.family == Family::CircleM && region.m2 % 2 != 0 {
                // Wrapping around a half-integer circle flips the parity
                // class, so k is unrestricted.
                return true;
            }
            // Every coordinate alternates integer/half-integer each step.
            start
                .coords2
                .iter()
                .zip(&end.coords2)
                .all(|(a, b)| (a + b + k) % 2 == 0)
        }
        StepSet::Standard => {
            if region.family == Family::CircleM {
                let m = region.m2 / 2;
                let s = match problem.shift_s() {
                    Ok(s) => s as i64,
                    Err(_) => return false,
                };
                let d = (end.sum2() - start.sum2()) / 2;
                let n = region.n as i64;
                if m % 2 == 0 {
                    (k - d) % 2 == 0
                } else if n % 2 == 0 {
                    // N·n·m is even, s·m ≡ s (mod 2)
                    (k - d - s * m) % 2 == 0
                } else {
                    // both m and n odd: N·n·m takes both parities
                    true
                }
            } else {
                let d = (end.sum2() - start.sum2()) / 2;
                (d - k) % 2 == 0
            }
        }
    }
}

/// Enumerates all points of the region in the given parity class.
///
/// `half_integer` selects the coordinate class; only finite regions
/// (the C, B, D alcoves and the circle) are supported.
pub fn region_points(region: &RegionSpec, half_integer: bool) -> Result<Vec<Point>> {
    let n = region.n;
    let m2 = region.m2;
    let par = if half_integer { 1 } else { 0 };
    let mut out = Vec::new();
    match region.family {
        Family::AlcoveC | Family::AlcoveB | Family::AlcoveD => {
            // Coordinates are bounded by 2m in every family (type C by m).
            let hi = if region.family == Family::AlcoveC { m2 } else { 2 * m2 };
            let lo = if region.family == Family::AlcoveD { -hi } else { 0 };
            let mut coords = vec![0i64; n];
            enumerate_rec(&mut coords, 0, lo, hi, par, &mut |c| {
                let p = Point::new(c.to_vec());
                if in_region(region, &p).unwrap_or(false) {
                    out.push(p);
                }
            });
        }
        Family::CircleM => {
            // All vectors of distinct doubled residues; for integral m the
            // class is fixed, for half-integer m every residue occurs.
            let slots: Vec<i64> = if m2 % 2 == 0 {
                (0..m2).filter(|c| c.rem_euclid(2) == par).collect()
            } else {
                (0..m2).collect()
            };
            let mut chosen = Vec::new();
            subsets_rec(&slots, n, 0, &mut chosen, &mut |set| {
                // one point per cyclic rotation of the decreasing ordering
                let mut sorted = set.to_vec();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                for s in 0..n {
                    let rotated: Vec<i64> = (0..n).map(|i| sorted[(n - s + i) % n]).collect();
                    out.push(Point::new(rotated));
                }
            });
        }
        Family::AlcoveA => {
            return Err(Error::unsupported(
                "the type A alcove is infinite; enumerate end points via walk length",
            ))
        }
    }
    Ok(out)
}

fn enumerate_rec(
    coords: &mut [i64],
    idx: usize,
    lo: i64,
    hi: i64,
    par: i64,
    f: &mut impl FnMut(&[i64]),
) {
    if idx == coords.len() {
        f(coords);
        return;
    }
    let mut c = lo + (lo.rem_euclid(2) != par) as i64;
    while c < hi {
        // strict decrease prune (except last coordinate of type D handled by in_region)
        if idx == 0 || c < coords[idx - 1] || idx == coords.len() - 1 {
            coords[idx] = c;
            enumerate_rec(coords, idx + 1, lo, hi, par, f);
        }
        c += 2;
    }
}

fn subsets_rec(slots: &[i64], want: usize, from: usize, chosen: &mut Vec<i64>, f: &mut impl FnMut(&[i64])) {
    if chosen.len() == want {
        f(chosen);
        return;
    }
    if slots.len() - from < want - chosen.len() {
        return;
    }
    for i in from..slots.len() {
        chosen.push(slots[i]);
        subsets_rec(slots, want, i + 1, chosen, f);
        chosen.pop();
    }
}

/// End points of type A alcove walks with the given step count, i.e. all
/// alcove points λ with `|λ| = |η| + j` for the admissible values of j.
pub fn alcove_a_endpoints(region: &RegionSpec, start: &Point, steps: StepSet, k: u64) -> Result<Vec<Point>> {
    if region.family != Family::AlcoveA {
        return Err(Error::invalid("alcove_a_endpoints requires the type A alcove"));
    }
    let n = region.n;
    let m2 = region.m2;
    let k = k as i64;
    let sums2: Vec<i64> = match steps {
        StepSet::PositiveStandard => vec![start.sum2() + 2 * k],
        StepSet::Standard => (-k..=k)
            .filter(|j| (j - k) % 2 == 0)
            .map(|j| start.sum2() + 2 * j)
            .collect(),
        StepSet::Diagonal => {
            // each coordinate moves by ±1/2, so |λ| - |η| ∈ {-nk/2, ..., nk/2}
            let n = n as i64;
            (-(n * k)..=n * k)
                .filter(|j| (j - n * k) % 2 == 0)
                .map(|j| start.sum2() + j)
                .collect()
        }
    };
    // Parametrize by the doubled differences d_i = x_i - x_{i+1}; coordinates
    // share a parity class, so differences are integers (doubled: even >= 2)
    // with Σ d_i <= m - 1.
    let mut out = Vec::new();
    let step2 = 2;
    let diffs = vec![0i64; n.saturating_sub(1)];
    fn rec(
        diffs: &mut [i64],
        idx: usize,
        m2: i64,
        step2: i64,
        f: &mut impl FnMut(&[i64]),
    ) {
        if idx == diffs.len() {
            f(diffs);
            return;
        }
        let used: i64 = diffs[..idx].iter().sum();
        let mut d = step2;
        while used + d + (diffs.len() - idx - 1) as i64 * step2 <= m2 - step2 {
            diffs[idx] = d;
            rec(diffs, idx + 1, m2, step2, f);
            d += step2;
        }
    }
    let parity_class = match steps {
        StepSet::Diagonal => (start.coords2[0] + k).rem_euclid(2),
        _ => start.coords2[0].rem_euclid(2),
    };
    for &sum2 in &sums2 {
        rec(&mut diffs.clone(), 0, m2, step2, &mut |ds| {
            // x_i = x_n + suffix_i with suffix the reversed cumulative sums;
            // the coordinate sum then pins x_n
            let mut suffix = vec![0i64; n];
            for i in (0..n - 1).rev() {
                suffix[i] = suffix[i + 1] + ds[i];
            }
            let total_offset: i64 = suffix.iter().sum();
            let num = sum2 - total_offset;
            if num.rem_euclid(n as i64) != 0 {
                return;
            }
            let xn = num / n as i64;
            if xn.rem_euclid(2) != parity_class {
                return;
            }
            let coords: Vec<i64> = (0..n).map(|i| xn + suffix[i]).collect();
            out.push(Point::new(coords));
        });
    }
    // n = 1: no differences, every admissible sum gives the single coordinate
    if n == 1 {
        out.clear();
        for &sum2 in &sums2 {
            out.push(Point::new(vec![sum2]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(family: Family, n: usize, m: i64) -> RegionSpec {
        RegionSpec::new(family, n, 2 * m).unwrap()
    }

    #[test]
    fn in_region_examples() {
        let a = region(Family::AlcoveA, 2, 3);
        assert!(in_region(&a, &Point::from_ints(&[2, 1])).unwrap());
        let d = region(Family::AlcoveD, 2, 3);
        assert!(in_region(&d, &Point::from_ints(&[2, -1])).unwrap());
        let c = region(Family::AlcoveC, 2, 3);
        assert!(!in_region(&c, &Point::from_ints(&[3, 1])).unwrap());
        assert!(in_region(&c, &Point::from_ints(&[2, 1])).unwrap());
    }

    #[test]
    fn in_region_dimension_mismatch() {
        let a = region(Family::AlcoveA, 2, 3);
        assert!(in_region(&a, &Point::from_ints(&[1, 2, 3])).is_err());
    }

    #[test]
    fn neighbors_alcove_a_standard() {
        let a = region(Family::AlcoveA, 2, 3);
        let mut got = neighbors(&a, StepSet::Standard, &Point::from_ints(&[2, 1])).unwrap();
        got.sort();
        let mut want = vec![Point::from_ints(&[3, 1]), Point::from_ints(&[2, 0])];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn neighbors_diagonal_bound() {
        let c = region(Family::AlcoveC, 2, 3);
        let got = neighbors(&c, StepSet::Diagonal, &Point::from_halves(&[5, 1])).unwrap();
        assert!(got.len() <= 4);
        for p in &got {
            assert!(in_region(&c, p).unwrap());
        }
    }

    #[test]
    fn neighbors_diagonal_alcove_c_half() {
        // (5/2, 1/2) in C with m=3: sign patterns land on (2,0),(2,1),(3,0),(3,1);
        // (3,1) and (3,0) violate m > x_1 only when x_1 = 3 = m, so they drop.
        let c = region(Family::AlcoveC, 2, 3);
        let mut got = neighbors(&c, StepSet::Diagonal, &Point::from_halves(&[5, 1])).unwrap();
        got.sort();
        let mut want = vec![Point::from_ints(&[2, 1])];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn positive_steps_require_type_a() {
        let c = region(Family::AlcoveC, 2, 3);
        assert!(neighbors(&c, StepSet::PositiveStandard, &Point::from_ints(&[2, 1])).is_err());
    }

    #[test]
    fn parity_standard_same_endpoints_odd_k() {
        let a = region(Family::AlcoveA, 2, 3);
        let p = WalkProblem::new(
            a,
            StepSet::Standard,
            Point::from_ints(&[2, 1]),
            Some(Point::from_ints(&[2, 1])),
            1,
        )
        .unwrap();
        assert!(!parity_feasible(&p));
    }

    #[test]
    fn parity_diagonal_flips_class() {
        let c = region(Family::AlcoveC, 2, 4);
        let p = WalkProblem::new(
            c,
            StepSet::Diagonal,
            Point::from_ints(&[2, 1]),
            Some(Point::from_ints(&[2, 1])),
            3,
        )
        .unwrap();
        assert!(!parity_feasible(&p));
    }

    #[test]
    fn parity_circle_odd_odd_unrestricted() {
        let c = region(Family::CircleM, 3, 3);
        for k in [5u64, 8] {
            let p = WalkProblem::new(
                c,
                StepSet::Standard,
                Point::from_ints(&[2, 1, 0]),
                Some(Point::from_ints(&[2, 1, 0])),
                k,
            )
            .unwrap();
            assert!(parity_feasible(&p));
        }
    }

    #[test]
    fn circle_shift_detection() {
        let c = region(Family::CircleM, 3, 5);
        assert_eq!(circle_shift(&c, &Point::from_ints(&[4, 2, 1])).unwrap(), 0);
        assert_eq!(circle_shift(&c, &Point::from_ints(&[1, 4, 2])).unwrap(), 1);
        assert_eq!(circle_shift(&c, &Point::from_ints(&[2, 1, 4])).unwrap(), 2);
    }

    #[test]
    fn region_points_alcove_c() {
        let c = region(Family::AlcoveC, 2, 4);
        let pts = region_points(&c, false).unwrap();
        // integer points with 4 > x1 > x2 > 0: (2,1),(3,1),(3,2)
        assert_eq!(pts.len(), 3);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_region() -> impl Strategy<Value = RegionSpec> {
            (0..5usize, 1..4usize, 2..13i64).prop_filter_map("valid region", |(f, n, m2)| {
                let family = [
                    Family::AlcoveA,
                    Family::AlcoveB,
                    Family::AlcoveC,
                    Family::AlcoveD,
                    Family::CircleM,
                ][f];
                RegionSpec::new(family, n, m2).ok()
            })
        }

        proptest! {
            #[test]
            fn neighbors_stay_inside_and_step_once(region in arb_region(), seed in 0u64..1000) {
                let half = seed % 2 == 1;
                let pts = match region.family {
                    Family::AlcoveA => vec![Point::new(
                        (0..region.n as i64).rev().map(|v| 2 * v + if half { 1 } else { 0 }).collect(),
                    )],
                    _ => region_points(&region, half).unwrap_or_default(),
                };
                for p in pts.iter().take(6) {
                    if !in_region(&region, p).unwrap() {
                        continue;
                    }
                    for steps in [StepSet::Standard, StepSet::Diagonal] {
                        for q in neighbors(&region, steps, p).unwrap() {
                            prop_assert!(in_region(&region, &q).unwrap());
                            let diff: Vec<i64> = p
                                .coords2
                                .iter()
                                .zip(&q.coords2)
                                .map(|(a, b)| b - a)
                                .collect();
                            if region.family == Family::CircleM {
                                // steps are read modulo the circle length
                                let m2 = region.m2;
                                match steps {
                                    StepSet::Diagonal => {
                                        for d in &diff {
                                            let ok = (d - 1).rem_euclid(m2) == 0
                                                || (d + 1).rem_euclid(m2) == 0;
                                            prop_assert!(ok, "diff {d}");
                                        }
                                    }
                                    _ => {
                                        let mut movers = 0;
                                        for d in &diff {
                                            if d.rem_euclid(m2) == 0 {
                                                continue;
                                            }
                                            movers += 1;
                                            let ok = (d - 2).rem_euclid(m2) == 0
                                                || (d + 2).rem_euclid(m2) == 0;
                                            prop_assert!(ok, "diff {d}");
                                        }
                                        prop_assert!(movers <= 1);
                                    }
                                }
                            } else {
                                match steps {
                                    StepSet::Diagonal => {
                                        for d in &diff {
                                            prop_assert_eq!(d.abs(), 1);
                                        }
                                    }
                                    _ => {
                                        let moved: Vec<&i64> =
                                            diff.iter().filter(|d| **d != 0).collect();
                                        prop_assert_eq!(moved.len(), 1);
                                        prop_assert_eq!(moved[0].abs(), 2);
                                    }
                                }
                            }
                        }
                    }
                }
            }

            #[test]
            fn diagonal_steps_flip_the_parity_class(m2 in 4..11i64, half in proptest::bool::ANY) {
                let region = RegionSpec::new(Family::AlcoveC, 2, m2).unwrap();
                for p in region_points(&region, half).unwrap_or_default().iter().take(5) {
                    let class = p.coords2[0].rem_euclid(2);
                    for q in neighbors(&region, StepSet::Diagonal, p).unwrap() {
                        prop_assert!(q.uniform_parity());
                        prop_assert_eq!(q.coords2[0].rem_euclid(2), 1 - class);
                    }
                }
            }
        }
    }

    #[test]
    fn alcove_a_endpoint_enumeration_matches_small_dp() {
        let a = region(Family::AlcoveA, 2, 3);
        let start = Point::from_ints(&[2, 1]);
        let pts = alcove_a_endpoints(&a, &start, StepSet::Standard, 2).unwrap();
        // (from (2,1), 2 standard steps): reachable endpoints have |λ| ∈ {|η|-2, |η|, |η|+2}
        for p in &pts {
            assert!(in_region(&a, p).unwrap());
            assert!((p.sum2() - start.sum2()).abs() <= 4);
        }
        assert!(pts.contains(&Point::from_ints(&[2, 1])));
        assert!(pts.contains(&Point::from_ints(&[3, 2])));
        assert!(pts.contains(&Point::from_ints(&[1, 0])));
    }
}
