//! Ground-truth enumeration: dynamic programming over region points, the
//! per-particle trajectory view, and the positive-vs-standard step identity.

use crate::error::{Error, Result};
use crate::geometry::{
    in_region, neighbors, parity_feasible, Family, Point, RegionSpec, StepSet, WalkProblem,
};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exact walk count.
pub type BigCount = BigUint;

/// Map from end point (canonical form) to exact count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EndpointDistribution {
    pub entries: BTreeMap<Point, BigCount>,
}

impl EndpointDistribution {
    pub fn total(&self) -> BigCount {
        self.entries.values().sum()
    }
    pub fn get(&self, p: &Point) -> BigCount {
        self.entries.get(p).cloned().unwrap_or_else(BigCount::zero)
    }
}

/// Default cap on the number of simultaneous frontier states.
pub const DEFAULT_FRONTIER_CAP: usize = 10_000_000;

/// Exact number of k-step walks from start to end, every point strictly
/// inside the region.
pub fn count_dp(problem: &WalkProblem) -> Result<BigCount> {
    count_dp_capped(problem, DEFAULT_FRONTIER_CAP)
}

pub fn count_dp_capped(problem: &WalkProblem, cap: usize) -> Result<BigCount> {
    let end = problem
        .end
        .as_ref()
        .ok_or_else(|| Error::invalid("count_dp requires an end point"))?;
    if !parity_feasible(problem) {
        return Ok(BigCount::zero());
    }
    let dist = run_dp(problem, cap)?;
    let canon = canonical(&problem.region, end);
    Ok(dist.get(&canon))
}

/// Exact counts for every reachable end point after k steps.
pub fn count_dp_free(problem: &WalkProblem) -> Result<EndpointDistribution> {
    count_dp_free_capped(problem, DEFAULT_FRONTIER_CAP)
}

pub fn count_dp_free_capped(problem: &WalkProblem, cap: usize) -> Result<EndpointDistribution> {
    if problem.end.is_some() {
        return Err(Error::invalid("count_dp_free requires a free end point"));
    }
    run_dp(problem, cap)
}

fn canonical(region: &RegionSpec, p: &Point) -> Point {
    if region.family == Family::CircleM {
        Point::new(
            p.coords2
                .iter()
                .map(|&c| c.rem_euclid(region.m2))
                .collect(),
        )
    } else {
        p.clone()
    }
}

fn run_dp(problem: &WalkProblem, cap: usize) -> Result<EndpointDistribution> {
    problem.validate()?;
    let region = &problem.region;
    let start = canonical(region, &problem.start);
    if !in_region(region, &start)? {
        return Err(Error::invalid("start point not in region"));
    }
    let mut frontier: BTreeMap<Point, BigCount> = BTreeMap::new();
    frontier.insert(start, BigCount::one());
    for _ in 0..problem.k {
        let mut next: BTreeMap<Point, BigCount> = BTreeMap::new();
        for (p, cnt) in &frontier {
            for q in neighbors(region, problem.steps, p)? {
                *next.entry(q).or_insert_with(BigCount::zero) += cnt;
            }
            if next.len() > cap {
                return Err(Error::resource(format!(
                    "DP frontier exceeded {cap} states"
                )));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(EndpointDistribution { entries: frontier })
}

/// Splits a walk into the n per-particle trajectories, checking that each
/// transition is a legal step and that the region (equivalently, the
/// non-collision constraints) holds at every time.
///
/// Returned positions are doubled, matching `Point`.
pub fn trajectories_view(
    region: &RegionSpec,
    steps: StepSet,
    walk: &[Point],
) -> Result<Vec<Vec<i64>>> {
    if walk.is_empty() {
        return Err(Error::invalid("empty walk"));
    }
    let n = region.n;
    for p in walk {
        if p.dim() != n {
            return Err(Error::dimension(n, p.dim()));
        }
        if !in_region(region, &canonical(region, p))? {
            return Err(Error::invalid(format!(
                "walk leaves the region at ({})",
                p.display()
            )));
        }
    }
    for w in walk.windows(2) {
        let succ = neighbors(region, steps, &canonical(region, &w[0]))?;
        if !succ.contains(&canonical(region, &w[1])) {
            return Err(Error::invalid(format!(
                "({}) -> ({}) is not a legal step",
                w[0].display(),
                w[1].display()
            )));
        }
    }
    let mut tracks = vec![Vec::with_capacity(walk.len()); n];
    for p in walk {
        for (j, &c) in p.coords2.iter().enumerate() {
            tracks[j].push(c);
        }
    }
    // non-collision: distinct coordinates at every time, and for the type A
    // alcove the m-shifted bottom particle stays below the top one
    for t in 0..walk.len() {
        for h in 0..n {
            for j in (h + 1)..n {
                let (a, b) = (tracks[h][t], tracks[j][t]);
                let collide = if region.family == Family::CircleM {
                    (a - b).rem_euclid(region.m2) == 0
                } else {
                    a == b
                };
                if collide {
                    return Err(Error::internal("trajectories collide"));
                }
            }
        }
        if region.family == Family::AlcoveA && n > 1 && tracks[n - 1][t] + region.m2 <= tracks[0][t] {
            return Err(Error::internal("m-shifted trajectory collides"));
        }
    }
    Ok(tracks)
}

/// Checks the positive-step identity on the type A alcove: the number of
/// k-step positive walks times 2^k equals the number of k-step standard
/// walks (both with free end point).
pub fn gleich_check(region: &RegionSpec, start: &Point, k: u64) -> Result<bool> {
    if region.family != Family::AlcoveA {
        return Err(Error::invalid("gleich_check requires the type A alcove"));
    }
    region.m_int()?;
    let pos = count_dp_free(&WalkProblem::new(
        *region,
        StepSet::PositiveStandard,
        start.clone(),
        None,
        k,
    )?)?
    .total();
    let std = count_dp_free(&WalkProblem::new(
        *region,
        StepSet::Standard,
        start.clone(),
        None,
        k,
    )?)?
    .total();
    Ok(pos << k == std)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Family;

    fn region(family: Family, n: usize, m: i64) -> RegionSpec {
        RegionSpec::new(family, n, 2 * m).unwrap()
    }

    fn problem(
        region: RegionSpec,
        steps: StepSet,
        start: &[i64],
        end: Option<&[i64]>,
        k: u64,
    ) -> WalkProblem {
        WalkProblem::new(
            region,
            steps,
            Point::from_ints(start),
            end.map(Point::from_ints),
            k,
        )
        .unwrap()
    }

    #[test]
    fn zero_steps() {
        let a = region(Family::AlcoveA, 2, 3);
        let same = problem(a, StepSet::Standard, &[2, 1], Some(&[2, 1]), 0);
        assert_eq!(count_dp(&same).unwrap(), BigCount::one());
        let diff = problem(a, StepSet::Standard, &[2, 1], Some(&[3, 2]), 0);
        assert_eq!(count_dp(&diff).unwrap(), BigCount::zero());
    }

    #[test]
    fn two_standard_steps_in_a() {
        // hand enumeration: the only surviving walks pass through (3,1), (2,0)
        let a = region(Family::AlcoveA, 2, 3);
        let p = problem(a, StepSet::Standard, &[2, 1], Some(&[2, 1]), 2);
        assert_eq!(count_dp(&p).unwrap(), BigCount::from(2u32));
    }

    #[test]
    fn one_positive_walk() {
        let a = region(Family::AlcoveA, 2, 3);
        let p = problem(a, StepSet::PositiveStandard, &[2, 1], Some(&[3, 2]), 2);
        assert_eq!(count_dp(&p).unwrap(), BigCount::one());
    }

    #[test]
    fn free_endpoint_small() {
        let a = region(Family::AlcoveA, 2, 3);
        let p = problem(a, StepSet::Standard, &[2, 1], None, 1);
        let dist = count_dp_free(&p).unwrap();
        assert_eq!(dist.total(), BigCount::from(2u32));
        assert_eq!(dist.get(&Point::from_ints(&[3, 1])), BigCount::one());
        assert_eq!(dist.get(&Point::from_ints(&[2, 0])), BigCount::one());
        let p = problem(a, StepSet::PositiveStandard, &[2, 1], None, 1);
        assert_eq!(count_dp_free(&p).unwrap().total(), BigCount::one());
    }

    #[test]
    fn dp_matches_naive_path_enumeration() {
        // brute force over all step sequences for a small diagonal problem
        let c = region(Family::AlcoveC, 2, 3);
        let start = Point::from_ints(&[2, 1]);
        for k in 0..=6u64 {
            let mut naive = 0u64;
            let mut stack = vec![(start.clone(), 0u64)];
            while let Some((p, depth)) = stack.pop() {
                if depth == k {
                    if p == start {
                        naive += 1;
                    }
                    continue;
                }
                for q in neighbors(&c, StepSet::Diagonal, &p).unwrap() {
                    stack.push((q, depth + 1));
                }
            }
            let prob = problem(c, StepSet::Diagonal, &[2, 1], Some(&[2, 1]), k);
            assert_eq!(count_dp(&prob).unwrap(), BigCount::from(naive));
        }
    }

    #[test]
    fn time_reversal_symmetry() {
        let c = region(Family::AlcoveC, 2, 4);
        for k in [2u64, 4, 6] {
            let fwd = problem(c, StepSet::Standard, &[3, 1], Some(&[2, 1]), k);
            let bwd = problem(c, StepSet::Standard, &[2, 1], Some(&[3, 1]), k);
            assert_eq!(count_dp(&fwd).unwrap(), count_dp(&bwd).unwrap());
        }
    }

    #[test]
    fn parity_infeasible_gives_zero() {
        let a = region(Family::AlcoveA, 2, 3);
        let p = problem(a, StepSet::Standard, &[2, 1], Some(&[2, 1]), 3);
        assert!(!parity_feasible(&p));
        assert_eq!(count_dp(&p).unwrap(), BigCount::zero());
    }

    #[test]
    fn gleich_small_cases() {
        let a = region(Family::AlcoveA, 2, 3);
        let start = Point::from_ints(&[2, 1]);
        for k in 0..=6 {
            assert!(gleich_check(&a, &start, k).unwrap());
        }
        let a3 = region(Family::AlcoveA, 3, 4);
        let start3 = Point::from_ints(&[3, 2, 1]);
        for k in 0..=5 {
            assert!(gleich_check(&a3, &start3, k).unwrap());
        }
    }

    #[test]
    fn frontier_cap_enforced() {
        let a = region(Family::AlcoveA, 2, 3);
        let p = problem(a, StepSet::Standard, &[2, 1], None, 6);
        assert!(matches!(
            count_dp_free_capped(&p, 2),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn trajectories_of_valid_walk() {
        let a = region(Family::AlcoveA, 2, 3);
        let walk = vec![
            Point::from_ints(&[2, 1]),
            Point::from_ints(&[3, 1]),
            Point::from_ints(&[3, 2]),
        ];
        let tracks = trajectories_view(&a, StepSet::Standard, &walk).unwrap();
        assert_eq!(tracks, vec![vec![4, 6, 6], vec![2, 2, 4]]);
        let single = trajectories_view(&a, StepSet::Standard, &walk[..1]).unwrap();
        assert_eq!(single, vec![vec![4], vec![2]]);
    }

    #[test]
    fn trajectories_reject_illegal_walk() {
        let a = region(Family::AlcoveA, 2, 3);
        let walk = vec![Point::from_ints(&[2, 1]), Point::from_ints(&[4, 1])];
        assert!(trajectories_view(&a, StepSet::Standard, &walk).is_err());
    }

    #[test]
    fn circle_dp_counts_rotated_endpoints() {
        let c = region(Family::CircleM, 2, 4);
        // 2 steps from (1,0): particle 1 can wrap to 3 or return
        let p = problem(c, StepSet::Standard, &[1, 0], None, 2);
        let dist = count_dp_free(&p).unwrap();
        // states are vectors of doubled residues mod 8
        assert!(dist.total() > BigCount::zero());
        for pt in dist.entries.keys() {
            assert!(in_region(&c, pt).unwrap());
        }
    }
}
