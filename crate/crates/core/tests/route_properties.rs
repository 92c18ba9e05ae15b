//! Property tests over arbitrary instances: route structure, dominance,
//! bounds and the recursion's complementarity.

use proptest::prelude::*;

use carousel_core::spacings::{spacings, OrderInstance};
use carousel_core::strategies::{
    enumerate_candidates, plan_route, CandidateLimit, StrategySpec,
};

fn positions() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 1..16)
}

proptest! {
    #[test]
    fn spacings_are_nonnegative_and_sum_to_one(pos in positions()) {
        let inst = OrderInstance::new(pos).unwrap();
        let d = spacings(&inst);
        prop_assert!(d.values().iter().all(|x| *x >= 0.0));
        prop_assert!((d.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn routes_visit_every_item_once_and_times_add_up(pos in positions()) {
        let n = pos.len();
        let inst = OrderInstance::new(pos).unwrap();
        for strategy in [
            StrategySpec::ClockwiseOnly,
            StrategySpec::CounterclockwiseOnly,
            StrategySpec::NearestItem,
            StrategySpec::MStep(2),
            StrategySpec::Optimal,
        ] {
            let route = plan_route(&inst, strategy);
            let mut order = route.pick_order.clone();
            order.sort_unstable();
            prop_assert_eq!(order, (0..n).collect::<Vec<_>>());
            let total: f64 = route.legs.iter().map(|l| l.abs()).sum();
            prop_assert!((total - route.travel_time).abs() < 1e-12);
        }
    }

    #[test]
    fn one_turn_strategies_turn_at_most_once(pos in positions()) {
        let inst = OrderInstance::new(pos).unwrap();
        for strategy in [StrategySpec::MStep(0), StrategySpec::MStep(3), StrategySpec::Optimal] {
            let route = plan_route(&inst, strategy);
            prop_assert!(route.turns <= 1, "{:?}: turns {}", strategy, route.turns);
        }
        prop_assert_eq!(plan_route(&inst, StrategySpec::ClockwiseOnly).turns, 0);
        prop_assert_eq!(plan_route(&inst, StrategySpec::CounterclockwiseOnly).turns, 0);
    }

    #[test]
    fn dominance_chain_holds_per_instance(pos in positions()) {
        let inst = OrderInstance::new(pos.clone()).unwrap();
        let opt = plan_route(&inst, StrategySpec::Optimal).travel_time;
        let ni = plan_route(&inst, StrategySpec::NearestItem).travel_time;
        let cw = plan_route(&inst, StrategySpec::ClockwiseOnly).travel_time;
        let ccw = plan_route(&inst, StrategySpec::CounterclockwiseOnly).travel_time;
        let mut prev = opt;
        for m in (0..pos.len()).rev() {
            let t = plan_route(&inst, StrategySpec::MStep(m)).travel_time;
            prop_assert!(t + 1e-12 >= prev, "m = {m}");
            prev = t;
        }
        prop_assert!(opt <= ni + 1e-12);
        prop_assert!(opt <= cw + 1e-12);
        prop_assert!(opt <= ccw + 1e-12);
        prop_assert!(ni <= 1.0 - 0.5f64.powi(pos.len() as i32) + 1e-12);
        prop_assert!(ni <= 1.0);
    }

    #[test]
    fn optimal_is_exactly_the_full_candidate_minimum(pos in positions()) {
        let inst = OrderInstance::new(pos.clone()).unwrap();
        let opt = plan_route(&inst, StrategySpec::Optimal).travel_time;
        let nm1 = plan_route(&inst, StrategySpec::MStep(pos.len().saturating_sub(1))).travel_time;
        prop_assert_eq!(opt, nm1);
        let best = enumerate_candidates(&inst, CandidateLimit::All)
            .unwrap()
            .into_iter()
            .map(|c| c.travel_time)
            .fold(f64::INFINITY, f64::min);
        prop_assert!((opt - best).abs() < 1e-12);
    }

    #[test]
    fn recursion_is_complementary(
        rotations in prop::collection::vec(0.0..1.0f64, 1..50),
        picks in prop::collection::vec(0.0..2.0f64, 1..50),
    ) {
        let mut w = 0.0f64;
        let mut prev_a = 0.0f64;
        for (b, a) in rotations.iter().zip(&picks) {
            let x = b - (prev_a + w);
            let next = x.max(0.0);
            prop_assert!(next >= 0.0);
            prop_assert!(next >= x);
            prop_assert!(next * (next - x) == 0.0);
            w = next;
            prev_a = *a;
        }
    }
}
