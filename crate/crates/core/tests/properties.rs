//! Cross-module invariants over random small instances.

mod common;

use std::collections::BTreeSet;

use csc::harness::solve;
use csc::instance::{induced_subgraph, load, save, Violation, Fleet, Instance, NodeId, Point, View, EPS_LEN};
use csc::kernel::{rooted_orienteering, rooted_team_orienteering, st_orienteering, KernelConfig};
use csc::oracle::{opt_restricted, opt_true};
use csc::route::Variant;
use csc::verify::{objective, verify};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = Point> {
    (0.0f64..10.0, 0.0f64..10.0).prop_map(|(x, y)| Point::new(x, y))
}

/// Periods `(T_t, T_c)` for each regime, scaled to a 10 x 10 square.
fn periods(variant: Variant) -> BoxedStrategy<(f64, f64)> {
    if variant.charge_ge_sweep() {
        (8.0f64..16.0, 1usize..=3).prop_map(|(t, q)| (t, t * q as f64)).boxed()
    } else {
        (6.0f64..14.0, 2usize..=3).prop_map(|(c, q)| (c * q as f64, c)).boxed()
    }
}

fn instance(variant: Variant, max_targets: usize, max_sensors: usize) -> impl Strategy<Value = Instance> {
    let chargers = if variant == Variant::Csc2TcGeTt || variant == Variant::Csc2TtGtTc { 2usize..=2 } else { 1usize..=2 };
    (
        prop::collection::vec(point(), 0..=max_targets),
        chargers.prop_flat_map(|k| prop::collection::vec(point(), k)),
        1..=max_sensors,
        periods(variant),
    )
        .prop_map(|(targets, chargers, sensors, (sweep, charge))| {
            let fleet = Fleet { sensors, speed: 1.0, sweep_period: sweep, charge_period: charge };
            Instance::euclidean(&targets, &chargers, fleet)
        })
}

fn any_variant() -> impl Strategy<Value = Variant> {
    prop::sample::select(Variant::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solver_output_verifies((variant, inst) in any_variant().prop_flat_map(|v| (Just(v), instance(v, 9, 3)))) {
        let (schedule, trace) = solve(&inst, variant, &KernelConfig::exact()).unwrap();
        let report = verify(&inst, &schedule).unwrap();
        prop_assert!(report.feasible, "{:?}", report.issues);
        prop_assert!(schedule.covered.is_subset(&report.verified_covered));
        prop_assert_eq!(objective(&report), schedule.covered.len());
        prop_assert!(schedule.sensors_used() <= inst.sensors());
        prop_assert_eq!(&trace.covered, &schedule.covered);
        let gains: usize = trace.steps.iter().map(|s| s.gain).sum();
        prop_assert_eq!(gains, schedule.covered.len());
    }

    #[test]
    fn oracles_bracket_greedy((variant, inst) in any_variant().prop_flat_map(|v| (Just(v), instance(v, 7, 2)))) {
        let (schedule, _) = solve(&inst, variant, &KernelConfig::exact()).unwrap();
        let r = opt_restricted(&inst, variant).unwrap();
        let t = opt_true(&inst, variant).unwrap();
        prop_assert!(!r.truncated && !t.truncated);
        prop_assert!(t.opt_value >= r.opt_value);
        prop_assert!(r.opt_value >= schedule.covered.len());
        for w in [&r.witness, &t.witness] {
            let report = verify(&inst, w).unwrap();
            prop_assert!(report.feasible);
            prop_assert_eq!(objective(&report), w.covered.len());
        }
    }

    #[test]
    fn exact_prize_grows_with_budget(inst in instance(Variant::RcscTcGeTt, 8, 1), a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let view = View::full(&inst);
        let small = rooted_orienteering(&view, 0, lo, &KernelConfig::exact()).unwrap();
        let large = rooted_orienteering(&view, 0, hi, &KernelConfig::exact()).unwrap();
        prop_assert!(small.prize <= large.prize);
        prop_assert!(large.segment().walk_length(&inst) <= hi + EPS_LEN);
    }

    #[test]
    fn heuristic_never_beats_exact(inst in instance(Variant::Csc2TcGeTt, 9, 1), extra in 0.0f64..15.0, seed in any::<u64>()) {
        let view = View::full(&inst);
        let budget = inst.dist(NodeId::Charger(0), NodeId::Charger(1)) + extra;
        let exact = st_orienteering(&view, 0, 1, budget, &KernelConfig::exact()).unwrap();
        let heur = st_orienteering(&view, 0, 1, budget, &KernelConfig::heuristic(seed)).unwrap();
        prop_assert!(heur.prize <= exact.prize);
        prop_assert!(heur.segment().walk_length(&inst) <= budget + EPS_LEN);
        let pool: Vec<usize> = (0..inst.n_targets()).collect();
        prop_assert_eq!(exact.prize, common::enumerate_walk(&inst, &pool, 0, 1, budget));
    }

    #[test]
    fn team_loops_respect_budget(inst in instance(Variant::RcscTtGtTc, 8, 1), budget in 0.0f64..12.0, count in 1usize..4) {
        let view = View::full(&inst);
        let team = rooted_team_orienteering(&view, 0, budget, count, &KernelConfig::exact()).unwrap();
        prop_assert_eq!(team.segments.len(), count);
        let mut seen = BTreeSet::new();
        for s in &team.segments {
            prop_assert!(s.walk_length(&inst) <= budget + EPS_LEN);
            for &t in &s.via {
                prop_assert!(seen.insert(t));
            }
        }
        prop_assert_eq!(seen.len(), team.prize);
        let single = rooted_orienteering(&view, 0, budget, &KernelConfig::exact()).unwrap();
        prop_assert!(team.prize >= single.prize);
    }

    #[test]
    fn induced_view_keeps_distances(inst in instance(Variant::RcscTcGeTt, 9, 1), mask in any::<u16>()) {
        let keep: BTreeSet<usize> = (0..inst.n_targets()).filter(|i| mask >> i & 1 == 1).collect();
        let view = induced_subgraph(&inst, &keep).unwrap();
        prop_assert_eq!(view.targets().len(), keep.len());
        for &a in view.targets() {
            for &b in view.targets() {
                let (x, y) = (NodeId::Target(a), NodeId::Target(b));
                prop_assert_eq!(view.dist(x, y), inst.dist(x, y));
            }
            prop_assert_eq!(view.dist(NodeId::Target(a), NodeId::Charger(0)), inst.dist(NodeId::Target(a), NodeId::Charger(0)));
        }
    }

    #[test]
    fn coordinate_instances_validate_and_round_trip(inst in instance(Variant::RcscTcGeTt, 9, 3)) {
        let report = inst.validate();
        prop_assert!(report.violations.iter().all(|v| *v == Violation::NoTargets), "{:?}", report);
        prop_assert_eq!(report.is_valid(), inst.n_targets() > 0);
        prop_assert_eq!(&report, &inst.validate());
        let back = load(&save(&inst)).unwrap();
        prop_assert_eq!(save(&back), save(&inst));
    }

    #[test]
    fn phase_shift_keeps_gaps((variant, inst) in any_variant().prop_flat_map(|v| (Just(v), instance(v, 8, 3))), shift in 0.0f64..50.0) {
        let (schedule, _) = solve(&inst, variant, &KernelConfig::exact()).unwrap();
        let mut moved = schedule.clone();
        for it in &mut moved.itineraries {
            let period = it.period(inst.speed());
            it.phase = if period > 0.0 { (it.phase + shift).rem_euclid(period) } else { 0.0 };
        }
        let a = verify(&inst, &schedule).unwrap();
        let b = verify(&inst, &moved).unwrap();
        prop_assert_eq!(&a.verified_covered, &b.verified_covered);
        for (t, g) in &a.per_target_gap {
            prop_assert!((g - b.per_target_gap[t]).abs() < 1e-6);
        }
    }
}
