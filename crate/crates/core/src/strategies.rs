//! Route planning on a single carousel: pure rotations, the greedy
//! nearest-item heuristic, m-step routes (at most one turn, after at most
//! m items) and the optimal route, which is the (n-1)-step route.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::spacings::OrderInstance;

/// Order-pick strategy selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategySpec {
    ClockwiseOnly,
    CounterclockwiseOnly,
    NearestItem,
    /// Shortest route turning at most once, after at most `m` items.
    MStep(usize),
    Optimal,
}

/// Direction of the first leg of a candidate route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Clockwise,
    Counterclockwise,
}

/// A one-turn (or no-turn) route in closed form.
///
/// With sorted positions `u_(1) <= ... <= u_(k)` strictly inside the
/// circle and `u_(0) = 0`:
/// clockwise first, turn after `j`: `2 u_(j) + 1 - u_(j+1)`;
/// counterclockwise first, turn after `j`: `2 (1 - u_(k+1-j)) + u_(k-j)`;
/// no turn: `u_(k)` clockwise, `1 - u_(1)` counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidateRoute<T> {
    pub first_direction: Direction,
    /// Items collected before the turn; `None` for pure rotations.
    pub turn_after: Option<usize>,
    pub travel_time: T,
}

/// A fully planned route.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteResult<T> {
    /// Item indices in pick order (indices into the instance).
    pub pick_order: Vec<usize>,
    /// Signed arc lengths, positive clockwise; one leg per pick.
    pub legs: Vec<T>,
    /// Sum of absolute leg lengths.
    pub travel_time: T,
    /// Sign changes between consecutive nonzero legs.
    pub turns: usize,
}

impl<T: Real> RouteResult<T> {
    fn from_legs(pick_order: Vec<usize>, legs: Vec<T>) -> Self {
        let travel_time = legs.iter().map(|l| l.abs()).sum();
        let turns = count_turns(&legs);
        Self { pick_order, legs, travel_time, turns }
    }

    /// Picks made strictly before the first direction change, or `None`
    /// when the route never turns.
    pub fn steps_before_turn(&self) -> Option<usize> {
        let mut sign = 0i8;
        for (i, leg) in self.legs.iter().enumerate() {
            let s = leg_sign(*leg);
            if s != 0 {
                if sign != 0 && s != sign {
                    return Some(i);
                }
                sign = s;
            }
        }
        None
    }
}

fn leg_sign<T: Real>(leg: T) -> i8 {
    if leg > T::zero() {
        1
    } else if leg < T::zero() {
        -1
    } else {
        0
    }
}

fn count_turns<T: Real>(legs: &[T]) -> usize {
    let mut turns = 0;
    let mut sign = 0i8;
    for leg in legs {
        let s = leg_sign(*leg);
        if s != 0 {
            if sign != 0 && s != sign {
                turns += 1;
            }
            sign = s;
        }
    }
    turns
}

/// Sorted view with items at the origin split off. Items exactly at the
/// picker's start are collected with zero-length legs before any rotation,
/// so the candidate formulas apply to the strictly interior positions.
struct Prepared<T> {
    at_origin: Vec<usize>,
    interior: Vec<(T, usize)>,
}

fn prepare<T: Real>(instance: &OrderInstance<T>) -> Prepared<T> {
    let mut at_origin = Vec::new();
    let mut interior = Vec::new();
    for (u, idx) in instance.sorted_with_indices() {
        if u == T::zero() {
            at_origin.push(idx);
        } else {
            interior.push((u, idx));
        }
    }
    Prepared { at_origin, interior }
}

fn candidate_time<T: Real>(u: &[T], dir: Direction, turn_after: Option<usize>) -> T {
    let k = u.len();
    let one = T::one();
    let two = one + one;
    match (dir, turn_after) {
        (Direction::Clockwise, None) => u[k - 1],
        (Direction::Counterclockwise, None) => one - u[0],
        (Direction::Clockwise, Some(j)) => two * u[j - 1] + one - u[j],
        (Direction::Counterclockwise, Some(j)) => two * (one - u[k - j]) + u[k - j - 1],
    }
}

/// Candidate bound: at most `m` items before the turn, or every one-turn
/// route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateLimit {
    Steps(usize),
    All,
}

/// Enumerates the candidate one-turn routes of an instance. With limit
/// `Steps(m)` this yields `2 min(m + 1, k)` candidates (`k` items away
/// from the origin): both pure rotations plus turns after `1..=min(m, k-1)`
/// items in each first direction. `All` is `Steps(k - 1)`, the full
/// `2k`-candidate set whose minimum is the optimal travel time.
pub fn enumerate_candidates<T: Real>(
    instance: &OrderInstance<T>,
    limit: CandidateLimit,
) -> Result<Vec<CandidateRoute<T>>> {
    if instance.is_empty() {
        return Err(Error::invalid("candidate enumeration requires at least one item"));
    }
    let prepared = prepare(instance);
    Ok(candidates_of(&prepared, limit))
}

fn candidates_of<T: Real>(prepared: &Prepared<T>, limit: CandidateLimit) -> Vec<CandidateRoute<T>> {
    let u: Vec<T> = prepared.interior.iter().map(|(u, _)| *u).collect();
    let k = u.len();
    if k == 0 {
        return Vec::new();
    }
    let max_turn = match limit {
        CandidateLimit::Steps(m) => m.min(k - 1),
        CandidateLimit::All => k - 1,
    };
    let mut out = Vec::with_capacity(2 * (max_turn + 1));
    for dir in [Direction::Clockwise, Direction::Counterclockwise] {
        out.push(CandidateRoute {
            first_direction: dir,
            turn_after: None,
            travel_time: candidate_time(&u, dir, None),
        });
        for j in 1..=max_turn {
            out.push(CandidateRoute {
                first_direction: dir,
                turn_after: Some(j),
                travel_time: candidate_time(&u, dir, Some(j)),
            });
        }
    }
    out
}

/// Plans the route prescribed by `strategy`.
pub fn plan_route<T: Real>(instance: &OrderInstance<T>, strategy: StrategySpec) -> RouteResult<T> {
    let prepared = prepare(instance);
    match strategy {
        StrategySpec::ClockwiseOnly => sweep_route(&prepared, Direction::Clockwise),
        StrategySpec::CounterclockwiseOnly => sweep_route(&prepared, Direction::Counterclockwise),
        StrategySpec::NearestItem => nearest_item_route(instance),
        StrategySpec::MStep(m) => best_candidate_route(&prepared, CandidateLimit::Steps(m)),
        StrategySpec::Optimal => best_candidate_route(&prepared, CandidateLimit::All),
    }
}

fn sweep_route<T: Real>(prepared: &Prepared<T>, dir: Direction) -> RouteResult<T> {
    let mut pick_order = prepared.at_origin.clone();
    let mut legs: Vec<T> = vec![T::zero(); pick_order.len()];
    match dir {
        Direction::Clockwise => {
            let mut pos = T::zero();
            for (u, idx) in &prepared.interior {
                legs.push(*u - pos);
                pick_order.push(*idx);
                pos = *u;
            }
        }
        Direction::Counterclockwise => {
            let mut pos = T::zero();
            for (u, idx) in prepared.interior.iter().rev() {
                let dist = if pos == T::zero() { T::one() - *u } else { pos - *u };
                legs.push(-dist);
                pick_order.push(*idx);
                pos = *u;
            }
        }
    }
    RouteResult::from_legs(pick_order, legs)
}

fn best_candidate_route<T: Real>(prepared: &Prepared<T>, limit: CandidateLimit) -> RouteResult<T> {
    let candidates = candidates_of(prepared, limit);
    if candidates.is_empty() {
        let legs = vec![T::zero(); prepared.at_origin.len()];
        return RouteResult::from_legs(prepared.at_origin.clone(), legs);
    }
    let best = candidates
        .iter()
        .min_by(|a, b| a.travel_time.partial_cmp(&b.travel_time).expect("finite times"))
        .expect("nonempty candidate set");
    reconstruct_route(prepared, best)
}

fn reconstruct_route<T: Real>(prepared: &Prepared<T>, cand: &CandidateRoute<T>) -> RouteResult<T> {
    let u = &prepared.interior;
    let k = u.len();
    let one = T::one();
    let mut pick_order = prepared.at_origin.clone();
    let mut legs: Vec<T> = vec![T::zero(); pick_order.len()];

    let push_cw = |legs: &mut Vec<T>, pick_order: &mut Vec<usize>, pos: &mut T, i: usize, wrap: bool| {
        let (pu, idx) = u[i];
        let dist = if wrap { pu + one - *pos } else { pu - *pos };
        legs.push(dist);
        pick_order.push(idx);
        *pos = pu;
    };
    let push_ccw = |legs: &mut Vec<T>, pick_order: &mut Vec<usize>, pos: &mut T, i: usize, wrap: bool| {
        let (pu, idx) = u[i];
        let dist = if wrap { *pos + one - pu } else { *pos - pu };
        legs.push(-dist);
        pick_order.push(idx);
        *pos = pu;
    };

    let mut pos = T::zero();
    match (cand.first_direction, cand.turn_after) {
        (Direction::Clockwise, None) => {
            for i in 0..k {
                push_cw(&mut legs, &mut pick_order, &mut pos, i, false);
            }
        }
        (Direction::Counterclockwise, None) => {
            for i in (0..k).rev() {
                push_ccw(&mut legs, &mut pick_order, &mut pos, i, i == k - 1);
            }
        }
        (Direction::Clockwise, Some(j)) => {
            for i in 0..j {
                push_cw(&mut legs, &mut pick_order, &mut pos, i, false);
            }
            for i in (j..k).rev() {
                push_ccw(&mut legs, &mut pick_order, &mut pos, i, i == k - 1);
            }
        }
        (Direction::Counterclockwise, Some(j)) => {
            for i in ((k - j)..k).rev() {
                push_ccw(&mut legs, &mut pick_order, &mut pos, i, i == k - 1);
            }
            for i in 0..(k - j) {
                push_cw(&mut legs, &mut pick_order, &mut pos, i, i == 0);
            }
        }
    }
    RouteResult::from_legs(pick_order, legs)
}

/// Greedy nearest-item route. The globally nearest remaining item is
/// always one of the two circular neighbours of the current position, so
/// a doubly linked list over the sorted order gives O(1) steps.
fn nearest_item_route<T: Real>(instance: &OrderInstance<T>) -> RouteResult<T> {
    let sorted = instance.sorted_with_indices();
    let k = sorted.len();
    if k == 0 {
        return RouteResult::from_legs(Vec::new(), Vec::new());
    }
    let one = T::one();
    let cw_dist = |from: T, to: T| -> T {
        let d = to - from;
        if d >= T::zero() {
            d
        } else {
            d + one
        }
    };

    let mut next: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    let mut prev: Vec<usize> = (0..k).map(|i| (i + k - 1) % k).collect();

    let mut pick_order = Vec::with_capacity(k);
    let mut legs = Vec::with_capacity(k);
    let mut pos = T::zero();
    // neighbours of the virtual origin before the first pick
    let mut cw_nb = 0usize;
    let mut ccw_nb = k - 1;

    for remaining in (1..=k).rev() {
        let d_cw = cw_dist(pos, sorted[cw_nb].0);
        let d_ccw = cw_dist(sorted[ccw_nb].0, pos);
        // ties break clockwise
        let (chosen, leg) = if d_cw <= d_ccw { (cw_nb, d_cw) } else { (ccw_nb, -d_ccw) };

        pick_order.push(sorted[chosen].1);
        legs.push(leg);
        pos = sorted[chosen].0;

        if remaining > 1 {
            // unlink `chosen`; its own pointers stay valid as the anchor
            let (p, n) = (prev[chosen], next[chosen]);
            next[p] = n;
            prev[n] = p;
            cw_nb = n;
            ccw_nb = p;
        }
    }
    RouteResult::from_legs(pick_order, legs)
}

/// Compact per-route record for batch studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteSample<T> {
    pub travel_time: T,
    pub turns: usize,
    pub steps_before_turn: Option<usize>,
}

/// Draws `samples` random instances of size `n` and plans each one,
/// deterministically in `(seed, stream)` for any thread count.
pub fn sample_routes<T: Real>(
    n: usize,
    strategy: StrategySpec,
    samples: usize,
    base: &crate::numerics::rng::RandomStream,
    threads: usize,
) -> Vec<RouteSample<T>> {
    crate::parallel::batch_map(base, samples, threads, |_, rng| {
        let instance = crate::spacings::sample_order::<T>(n, rng);
        let route = plan_route(&instance, strategy);
        RouteSample {
            travel_time: route.travel_time,
            turns: route.turns,
            steps_before_turn: route.steps_before_turn(),
        }
    })
}

/// Travel times only, sorted ascending, ready for a KS comparison.
pub fn sample_travel_times<T: Real>(
    n: usize,
    strategy: StrategySpec,
    samples: usize,
    base: &crate::numerics::rng::RandomStream,
    threads: usize,
) -> Vec<T> {
    let mut times: Vec<T> = sample_routes(n, strategy, samples, base, threads)
        .into_iter()
        .map(|s| s.travel_time)
        .collect();
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite travel times"));
    times
}
