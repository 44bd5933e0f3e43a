//! Greedy solvers for two chargers `a = 0` and `b = 1`, where a sensor may
//! recharge at either.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{induced_subgraph, Instance, NodeId, View, EPS_LEN};
use crate::kernel::{rooted_orienteering, st_loop, KernelConfig, KernelResult};
use crate::rcsc::{by_unity, stop_reason, GreedyTrace, StopReason, TraceStep};
use crate::route::{chain_segments, place_sensors_on_loop, Composition, Itinerary, Loop, Schedule, Segment, Variant};

const A: usize = 0;
const B: usize = 1;

/// Segment tally of the `T_t > T_c` solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompositionState {
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
    /// Slots still open out of `M * Q̂`.
    pub remaining: usize,
}

impl CompositionState {
    pub fn composition(&self) -> Composition {
        Composition::new(self.k1, self.k2, self.k3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    SelfLoop { charger: usize, k: usize },
    Mutual { j1: usize, j2: usize },
}

impl Shape {
    fn cost(self) -> usize {
        match self {
            Shape::SelfLoop { k, .. } => k,
            Shape::Mutual { j1, j2 } => j1 + j2,
        }
    }
}

/// Smallest `j >= 1` with `j * L_t >= d(a, b)`.
fn min_span(dab: f64, sweep: f64, cap: usize) -> usize {
    let mut j = 1;
    while j <= cap && (j as f64) * sweep < dab - EPS_LEN {
        j += 1;
    }
    j
}

fn charger_distance(inst: &Instance) -> f64 {
    inst.dist(NodeId::Charger(A), NodeId::Charger(B))
}

fn finish_trace(steps: Vec<TraceStep>, schedule: &Schedule, uncovered: &BTreeSet<usize>, remaining: usize) -> GreedyTrace {
    GreedyTrace::new(steps, schedule.covered.clone(), stop_reason(uncovered, remaining))
}

/// `T_c >= T_t`: candidates are self loops of length `k * L_t` at either
/// charger (`k <= min(Q, M')`) and mutual loops built by [`st_loop`] with
/// legs of `j1 * L_t` and `j2 * L_t`, where each `j` lies in
/// `[max(Q̄, 1), Q]` and `j1 + j2 <= M'`. The chosen loop carries `cost`
/// sensors spaced evenly; every leg is at most `Q * L_t = L_c`.
///
/// Ties on gain per sensor go to the cheaper loop, then self loops before
/// mutual ones, then smaller charger or legs, then the smaller walk.
pub fn solve_2csc_tc_ge_tt(inst: &Instance, cfg: &KernelConfig) -> Result<(Schedule, GreedyTrace)> {
    cfg.check()?;
    let params = Variant::Csc2TcGeTt.check(inst)?;
    inst.require_valid()?;
    let q = params.multiple();
    let sweep = params.sweep_length;
    let q_bar = min_span(charger_distance(inst), sweep, q);

    let mut uncovered: BTreeSet<usize> = (0..inst.n_targets()).collect();
    let mut remaining = inst.sensors();
    let mut schedule = Schedule::empty(Variant::Csc2TcGeTt);
    let mut steps = Vec::new();

    while remaining > 0 && !uncovered.is_empty() {
        let view = induced_subgraph(inst, &uncovered)?;
        let mut shapes: Vec<Shape> = Vec::new();
        for charger in [A, B] {
            shapes.extend((1..=q.min(remaining)).map(|k| Shape::SelfLoop { charger, k }));
        }
        for j1 in q_bar..=q {
            for j2 in q_bar..=q {
                if j1 + j2 <= remaining {
                    shapes.push(Shape::Mutual { j1, j2 });
                }
            }
        }
        let candidates: Vec<(Shape, KernelResult)> = shapes
            .par_iter()
            .map(|&shape| {
                let walk = match shape {
                    Shape::SelfLoop { charger, k } => rooted_orienteering(&view, charger, k as f64 * sweep, cfg),
                    Shape::Mutual { j1, j2 } => st_loop(&view, A, B, j1 as f64 * sweep, j2 as f64 * sweep, cfg),
                }?;
                Ok((shape, walk))
            })
            .collect::<Result<_>>()?;
        let via = |w: &KernelResult| w.segments.iter().map(|s| s.via.clone()).collect::<Vec<_>>();
        let (shape, walk) = candidates
            .into_iter()
            .min_by(|(sx, wx), (sy, wy)| {
                by_unity((wx.prize, sx.cost()), (wy.prize, sy.cost()))
                    .then(sx.cost().cmp(&sy.cost()))
                    .then(sx.cmp(sy))
                    .then_with(|| via(wx).cmp(&via(wy)))
            })
            .expect("self loops always exist");
        if walk.prize == 0 {
            break;
        }

        let cost = shape.cost();
        let route = Loop::new(walk.segments.clone())?;
        let first = schedule.sensors_used();
        for mut it in place_sensors_on_loop(&route, cost, sweep, params.speed)? {
            it.sensor += first;
            schedule.itineraries.push(it);
        }
        for t in walk.targets() {
            uncovered.remove(&t);
            schedule.covered.insert(t);
        }
        steps.push(TraceStep { segments: walk.segments, cost, gain: walk.prize, remaining });
        remaining -= cost;
    }

    let trace = finish_trace(steps, &schedule, &uncovered, remaining);
    Ok((schedule, trace))
}

/// A pick of one or two segment slots.
#[derive(Clone, Debug)]
struct Move {
    segments: Vec<Segment>,
    delta: Composition,
    gain: usize,
}

impl Move {
    fn slots(&self) -> usize {
        self.delta.segments()
    }
}

fn add(c: Composition, d: Composition) -> Composition {
    Composition::new(c.a_self + d.a_self, c.b_self + d.b_self, c.mutual_pairs + d.mutual_pairs)
}

/// A way to fill `rem` more slots so that the final composition chains into
/// exactly `sensors` chains, or `None`. Prefers fewer mutual pairs, then
/// more `a` loops.
fn completion(c: Composition, rem: usize, sensors: usize, q_hat: usize, mutual_ok: bool) -> Option<Composition> {
    let max_pairs = if mutual_ok { rem / 2 } else { 0 };
    for z in 0..=max_pairs {
        for x in (0..=rem - 2 * z).rev() {
            let d = Composition::new(x, rem - 2 * z - x, z);
            if add(c, d).is_chainable(sensors, q_hat) {
                return Some(d);
            }
        }
    }
    None
}

struct Round<'a, 'v> {
    inst: &'a Instance,
    view: &'a View<'v>,
    cfg: &'a KernelConfig,
    charge: f64,
}

impl Round<'_, '_> {
    fn self_loop(&self, view: &View<'_>, charger: usize) -> Result<Segment> {
        let walk = rooted_orienteering(view, charger, self.charge, self.cfg)?;
        Ok(walk.segments.into_iter().next().expect("one segment"))
    }

    fn single(&self, charger: usize) -> Result<Move> {
        let seg = self.self_loop(self.view, charger)?;
        let delta = if charger == A { Composition::new(1, 0, 0) } else { Composition::new(0, 1, 0) };
        Ok(Move { gain: seg.via.len(), segments: vec![seg], delta })
    }

    fn mutual(&self) -> Result<Move> {
        let walk = st_loop(self.view, A, B, self.charge, self.charge, self.cfg)?;
        Ok(Move { gain: walk.prize, segments: walk.segments, delta: Composition::new(0, 0, 1) })
    }

    /// Best self loop at `first`, then best at `second` on what is left.
    fn pair(&self, first: usize, second: usize) -> Result<Move> {
        let s1 = self.self_loop(self.view, first)?;
        let rest = self.view.without(&s1.via);
        let s2 = self.self_loop(&rest, second)?;
        let count = |c| usize::from(first == c) + usize::from(second == c);
        Ok(Move {
            gain: s1.via.len() + s2.via.len(),
            segments: vec![s1, s2],
            delta: Composition::new(count(A), count(B), 0),
        })
    }

    fn direct(&self, delta: Composition) -> Vec<Segment> {
        let mut out = Vec::new();
        out.extend((0..delta.a_self).map(|_| Segment::direct(self.inst, A, A)));
        out.extend((0..delta.b_self).map(|_| Segment::direct(self.inst, B, B)));
        for _ in 0..delta.mutual_pairs {
            out.push(Segment::direct(self.inst, A, B));
            out.push(Segment::direct(self.inst, B, A));
        }
        out
    }
}

/// `T_t > T_c`: picks `M * Q̂` segments of length at most `L_c`, each round
/// taking the best of an `a` self loop, a `b` self loop (one slot each) or a
/// mutual pair from [`st_loop`] (two slots), by gain per slot. Ties prefer
/// self loops, and `a` over `b`.
///
/// Only picks that leave the tally completable into `M` closed chains of
/// `Q̂` segments are considered. With two slots left and no mutual pair yet,
/// the last two slots follow the fix-up table on `(k1 mod Q̂, k2 mod Q̂)`:
/// both zero admits a mutual pair (and, for `Q̂ = 2`, two `a` or two `b`
/// loops); only `k2` off admits a pair or two `b` loops; only `k1` off a pair
/// or two `a` loops; both off a pair or one of each in either order. Ties
/// there prefer the pair. If the best pick gains nothing the remaining slots
/// are filled with empty segments. Finally [`chain_segments`] turns the
/// segments into one itinerary per sensor; idle sensors are dropped.
pub fn solve_2csc_tt_gt_tc(inst: &Instance, cfg: &KernelConfig) -> Result<(Schedule, GreedyTrace)> {
    cfg.check()?;
    let params = Variant::Csc2TtGtTc.check(inst)?;
    inst.require_valid()?;
    let q_hat = params.multiple();
    let charge = params.charge_length;
    let sensors = inst.sensors();
    let slots = sensors * q_hat;
    let mutual_ok = charger_distance(inst) <= charge + EPS_LEN;

    let mut uncovered: BTreeSet<usize> = (0..inst.n_targets()).collect();
    let mut comp = Composition::default();
    let mut chosen: Vec<Segment> = Vec::with_capacity(slots);
    let mut steps = Vec::new();
    let mut schedule = Schedule::empty(Variant::Csc2TtGtTc);
    let mut stalled = false;

    while chosen.len() < slots {
        let rem = slots - chosen.len();
        let view = induced_subgraph(inst, &uncovered)?;
        let round = Round { inst, view: &view, cfg, charge };
        let fits = |m: &Move| {
            m.slots() <= rem && completion(add(comp, m.delta), rem - m.slots(), sensors, q_hat, mutual_ok).is_some()
        };

        let pick = if rem == 2 && comp.mutual_pairs == 0 {
            let (r1, r2) = (comp.a_self % q_hat, comp.b_self % q_hat);
            let mut table: Vec<Move> = Vec::new();
            if mutual_ok {
                table.push(round.mutual()?);
            }
            match (r1 == 0, r2 == 0) {
                (true, true) if q_hat == 2 => {
                    table.push(round.pair(A, A)?);
                    table.push(round.pair(B, B)?);
                }
                (true, true) => {}
                (true, false) => table.push(round.pair(B, B)?),
                (false, true) => table.push(round.pair(A, A)?),
                (false, false) => {
                    table.push(round.pair(A, B)?);
                    table.push(round.pair(B, A)?);
                }
            }
            let mut allowed: Vec<Move> = table.into_iter().filter(|m| fits(m)).collect();
            if allowed.is_empty() {
                // The table offered nothing chainable; widen to every two-slot pick.
                allowed = [round.pair(A, A)?, round.pair(B, B)?, round.pair(A, B)?]
                    .into_iter()
                    .filter(|m| fits(m))
                    .collect();
            }
            // First maximum wins: the mutual pair leads the list.
            allowed.into_iter().reduce(|acc, m| if m.gain > acc.gain { m } else { acc })
        } else {
            let mut moves = vec![round.single(A)?, round.single(B)?];
            if mutual_ok && rem >= 2 {
                moves.push(round.mutual()?);
            }
            moves
                .into_iter()
                .filter(|m| fits(m))
                .reduce(|acc, m| if by_unity((m.gain, m.slots()), (acc.gain, acc.slots())).is_lt() { m } else { acc })
        };
        let pick = pick.ok_or_else(|| Error::Contract(format!("no chainable pick from {comp:?} with {rem} slots left")))?;

        if pick.gain == 0 {
            let fill = completion(comp, rem, sensors, q_hat, mutual_ok)
                .ok_or_else(|| Error::Contract(format!("tally {comp:?} cannot be completed")))?;
            chosen.extend(round.direct(fill));
            comp = add(comp, fill);
            stalled = true;
            break;
        }
        for &t in pick.segments.iter().flat_map(|s| s.via.iter()) {
            uncovered.remove(&t);
            schedule.covered.insert(t);
        }
        steps.push(TraceStep { segments: pick.segments.clone(), cost: pick.slots(), gain: pick.gain, remaining: rem });
        comp = add(comp, pick.delta);
        chosen.extend(pick.segments);
    }

    debug_assert!(comp.is_reasonable(q_hat) && comp.is_chainable(sensors, q_hat));
    for chain in chain_segments(chosen, q_hat)? {
        if chain.iter().all(|s| s.via.is_empty()) {
            continue;
        }
        schedule.itineraries.push(Itinerary {
            sensor: schedule.itineraries.len(),
            phase: 0.0,
            segment_budget: charge,
            route: Loop::new(chain)?,
        });
    }

    let stop = match (uncovered.is_empty(), stalled) {
        (true, _) => StopReason::AllCovered,
        (false, true) => StopReason::NoGain,
        (false, false) => StopReason::SensorsExhausted,
    };
    let mut trace = GreedyTrace::new(steps, schedule.covered.clone(), stop);
    trace.composition = Some(CompositionState { k1: comp.a_self, k2: comp.b_self, k3: comp.mutual_pairs, remaining: 0 });
    Ok((schedule, trace))
}
