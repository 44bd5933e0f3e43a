//! Greedy solvers for the restricted problem, where every sensor recharges
//! only at the charger its loop starts from.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::csc2::CompositionState;
use crate::error::Result;
use crate::instance::{induced_subgraph, Instance};
use crate::kernel::{rooted_orienteering, rooted_team_orienteering, KernelConfig, KernelResult};
use crate::route::{place_sensors_on_loop, Itinerary, Loop, Schedule, Segment, Variant};

/// One greedy pick.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceStep {
    pub segments: Vec<Segment>,
    /// Sensors consumed, or segment slots for the two-charger `T_t > T_c` solver.
    pub cost: usize,
    /// Newly covered targets.
    pub gain: usize,
    /// Budget left before this step, in the same unit as `cost`.
    pub remaining: usize,
}

impl TraceStep {
    pub fn unity(&self) -> f64 {
        self.gain as f64 / self.cost as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    SensorsExhausted,
    AllCovered,
    /// Every candidate would cover nothing new.
    NoGain,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyTrace {
    pub steps: Vec<TraceStep>,
    pub covered: BTreeSet<usize>,
    pub stop: StopReason,
    /// Final segment tally, for the two-charger `T_t > T_c` solver only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composition: Option<CompositionState>,
}

impl GreedyTrace {
    pub(crate) fn new(steps: Vec<TraceStep>, covered: BTreeSet<usize>, stop: StopReason) -> Self {
        GreedyTrace { steps, covered, stop, composition: None }
    }
}

/// Orders `(gain, cost)` pairs by gain per cost, larger first, compared
/// exactly by cross-multiplication.
pub(crate) fn by_unity(a: (usize, usize), b: (usize, usize)) -> Ordering {
    (b.0 * a.1).cmp(&(a.0 * b.1))
}

pub(crate) fn stop_reason(uncovered: &BTreeSet<usize>, remaining: usize) -> StopReason {
    if uncovered.is_empty() {
        StopReason::AllCovered
    } else if remaining == 0 {
        StopReason::SensorsExhausted
    } else {
        StopReason::NoGain
    }
}

struct Candidate {
    charger: usize,
    k: usize,
    walk: KernelResult,
}

/// `T_c >= T_t`: each round tries a loop of length `k * L_t` at every charger
/// for `k <= min(Q, M')` and deploys `k` sensors on the loop with the best
/// newly-covered targets per sensor. Ties go to smaller `k`, then smaller
/// charger, then the lexicographically smaller walk.
pub fn solve_rcsc_tc_ge_tt(inst: &Instance, cfg: &KernelConfig) -> Result<(Schedule, GreedyTrace)> {
    cfg.check()?;
    inst.require_valid()?;
    let params = Variant::RcscTcGeTt.check(inst)?;
    let q = params.multiple();
    let sweep = params.sweep_length;

    let mut uncovered: BTreeSet<usize> = (0..inst.n_targets()).collect();
    let mut remaining = inst.sensors();
    let mut schedule = Schedule::empty(Variant::RcscTcGeTt);
    let mut steps = Vec::new();

    while remaining > 0 && !uncovered.is_empty() {
        let view = induced_subgraph(inst, &uncovered)?;
        let options: Vec<(usize, usize)> = (0..inst.n_chargers())
            .flat_map(|c| (1..=q.min(remaining)).map(move |k| (c, k)))
            .collect();
        let candidates: Vec<Candidate> = options
            .par_iter()
            .map(|&(charger, k)| {
                rooted_orienteering(&view, charger, k as f64 * sweep, cfg)
                    .map(|walk| Candidate { charger, k, walk })
            })
            .collect::<Result<_>>()?;
        let best = candidates
            .into_iter()
            .min_by(|x, y| {
                by_unity((x.walk.prize, x.k), (y.walk.prize, y.k))
                    .then(x.k.cmp(&y.k))
                    .then(x.charger.cmp(&y.charger))
                    .then_with(|| x.walk.segment().via.cmp(&y.walk.segment().via))
            })
            .expect("at least one charger and one sensor");
        if best.walk.prize == 0 {
            break;
        }

        let route = Loop::new(best.walk.segments.clone())?;
        let first = schedule.sensors_used();
        for mut it in place_sensors_on_loop(&route, best.k, sweep, params.speed)? {
            it.sensor += first;
            schedule.itineraries.push(it);
        }
        for t in best.walk.targets() {
            uncovered.remove(&t);
            schedule.covered.insert(t);
        }
        steps.push(TraceStep {
            segments: best.walk.segments,
            cost: best.k,
            gain: best.walk.prize,
            remaining,
        });
        remaining -= best.k;
    }

    let trace = GreedyTrace::new(steps, schedule.covered.clone(), stop_reason(&uncovered, remaining));
    Ok((schedule, trace))
}

/// `T_t > T_c`: each round gives one sensor `Q̂` loops of length at most
/// `L_c` at the single charger whose team of loops covers the most new
/// targets (ties to the smaller charger).
pub fn solve_rcsc_tt_gt_tc(inst: &Instance, cfg: &KernelConfig) -> Result<(Schedule, GreedyTrace)> {
    cfg.check()?;
    inst.require_valid()?;
    let params = Variant::RcscTtGtTc.check(inst)?;
    let q_hat = params.multiple();
    let charge = params.charge_length;

    let mut uncovered: BTreeSet<usize> = (0..inst.n_targets()).collect();
    let mut remaining = inst.sensors();
    let mut schedule = Schedule::empty(Variant::RcscTtGtTc);
    let mut steps = Vec::new();

    while remaining > 0 && !uncovered.is_empty() {
        let view = induced_subgraph(inst, &uncovered)?;
        let teams: Vec<KernelResult> = (0..inst.n_chargers())
            .into_par_iter()
            .map(|c| rooted_team_orienteering(&view, c, charge, q_hat, cfg))
            .collect::<Result<_>>()?;
        // First maximum wins, so ties keep the smaller charger.
        let best = teams
            .into_iter()
            .reduce(|acc, t| if t.prize > acc.prize { t } else { acc })
            .expect("at least one charger");
        if best.prize == 0 {
            break;
        }
        for t in best.targets() {
            uncovered.remove(&t);
            schedule.covered.insert(t);
        }
        schedule.itineraries.push(Itinerary {
            sensor: schedule.sensors_used(),
            phase: 0.0,
            segment_budget: charge,
            route: Loop::new(best.segments.clone())?,
        });
        steps.push(TraceStep { segments: best.segments, cost: 1, gain: best.prize, remaining });
        remaining -= 1;
    }

    let trace = GreedyTrace::new(steps, schedule.covered.clone(), stop_reason(&uncovered, remaining));
    Ok((schedule, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::instance::{Fleet, Point};
    use crate::verify::verify;

    fn fleet(sensors: usize, sweep: f64, charge: f64) -> Fleet {
        Fleet { sensors, speed: 1.0, sweep_period: sweep, charge_period: charge }
    }

    #[test]
    fn single_loop_covers_all() {
        let targets = [Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let inst = Instance::euclidean(&targets, &[Point::new(0.0, 0.0)], fleet(1, 4.0, 4.0));
        let (schedule, trace) = solve_rcsc_tc_ge_tt(&inst, &KernelConfig::exact()).unwrap();
        assert_eq!(schedule.covered.len(), 3);
        assert_eq!(schedule.itineraries.len(), 1);
        assert_eq!(trace.stop, StopReason::AllCovered);
        assert!(verify(&inst, &schedule).unwrap().feasible);
    }

    #[test]
    fn no_targets_gives_empty_schedule() {
        let inst = Instance::euclidean(&[], &[Point::new(0.0, 0.0)], fleet(2, 1.0, 1.0));
        let (schedule, trace) = solve_rcsc_tc_ge_tt(&inst, &KernelConfig::exact()).unwrap();
        assert!(schedule.itineraries.is_empty());
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn wrong_regime_is_mismatch() {
        let inst = Instance::euclidean(&[Point::new(1.0, 0.0)], &[Point::new(0.0, 0.0)], fleet(1, 4.0, 2.0));
        assert!(matches!(solve_rcsc_tc_ge_tt(&inst, &KernelConfig::exact()), Err(Error::VariantMismatch(_))));
        let inst = Instance::euclidean(&[Point::new(1.0, 0.0)], &[Point::new(0.0, 0.0)], fleet(1, 2.0, 4.0));
        assert!(matches!(solve_rcsc_tt_gt_tc(&inst, &KernelConfig::exact()), Err(Error::VariantMismatch(_))));
    }

    #[test]
    fn team_covers_two_clusters() {
        // L_c = 4: each cluster fits one loop, both do not fit one loop.
        let targets = [Point::new(1.5, 0.0), Point::new(1.9, 0.0), Point::new(-1.5, 0.0), Point::new(-1.9, 0.0)];
        let inst = Instance::euclidean(&targets, &[Point::new(0.0, 0.0)], fleet(1, 8.0, 4.0));
        let (schedule, trace) = solve_rcsc_tt_gt_tc(&inst, &KernelConfig::exact()).unwrap();
        assert_eq!(schedule.covered.len(), 4);
        assert_eq!(schedule.itineraries[0].route.segments().len(), 2);
        assert_eq!(trace.steps.len(), 1);
        assert!(verify(&inst, &schedule).unwrap().feasible);
    }

    #[test]
    fn team_prefers_larger_cluster() {
        let mut targets: Vec<Point> = (0..5).map(|i| Point::new(0.2 * i as f64, 0.5)).collect();
        targets.extend((0..3).map(|i| Point::new(20.0 + 0.2 * i as f64, 0.5)));
        let inst = Instance::euclidean(&targets, &[Point::new(0.0, 0.0), Point::new(20.0, 0.0)], fleet(1, 6.0, 3.0));
        let (schedule, _) = solve_rcsc_tt_gt_tc(&inst, &KernelConfig::exact()).unwrap();
        assert_eq!(schedule.covered, (0..5).collect());
        assert_eq!(schedule.itineraries[0].route.start_charger(), 0);
    }

    #[test]
    fn unity_ordering() {
        assert_eq!(by_unity((4, 1), (6, 2)), Ordering::Less);
        assert_eq!(by_unity((3, 1), (6, 2)), Ordering::Equal);
        assert_eq!(by_unity((0, 1), (1, 3)), Ordering::Greater);
    }
}
