//! Exhaustive reference optima for small instances.
//!
//! [`opt_restricted`] maximizes coverage over exactly the candidate routes
//! the greedy solvers pick from. [`opt_true`] searches a broader family of
//! periodic schedules. Both enumerate target subsets directly with their own
//! walk tables and share no search code with [`crate::kernel`].
//!
//! Every witness is run through [`crate::verify::verify`] before it is
//! returned; a witness that fails is reported as a contract error.

mod subsets;
mod walks;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{DerivedParams, Instance, NodeId, EPS_LEN};
use crate::route::{chain_segments, place_sensors_on_loop, Family, Loop, Schedule, Segment, Variant};
use crate::verify::{objective, verify};

use subsets::{best_split, better, members, EvenPaths, Partition, INF};
use walks::Walks;

pub const RESTRICTED_MAX_TARGETS: usize = 12;
pub const RESTRICTED_MAX_SENSORS: usize = 4;
pub const RESTRICTED_MAX_CHARGERS: usize = 2;
pub const TRUE_MAX_TARGETS: usize = 8;
pub const TRUE_MAX_SENSORS: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub opt_value: usize,
    pub witness: Schedule,
    /// Subset combinations examined; a rough effort measure.
    pub search_space_size: u64,
    /// The instance exceeded the oracle's limits and nothing was searched.
    pub truncated: bool,
}

impl OracleResult {
    fn truncated(variant: Variant) -> Self {
        OracleResult { opt_value: 0, witness: Schedule::empty(variant), search_space_size: 0, truncated: true }
    }
}

/// A route shared by `sensors` evenly spaced sensors.
struct Crew {
    segments: Vec<Segment>,
    sensors: usize,
}

struct Ctx<'a> {
    inst: &'a Instance,
    n: usize,
    params: DerivedParams,
    /// Closed walks at each charger.
    home: Vec<Walks>,
    /// Walks from charger 0 to charger 1, when there are two.
    across: Option<Walks>,
    work: u64,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance, params: DerivedParams, with_across: bool) -> Self {
        let targets: Vec<usize> = (0..inst.n_targets()).collect();
        let n = targets.len();
        let home: Vec<Walks> = (0..inst.n_chargers()).map(|c| Walks::new(inst, &targets, c, c)).collect();
        let across = with_across.then(|| Walks::new(inst, &targets, 0, 1));
        let work = (home.len() + usize::from(with_across)) as u64 * (1u64 << n) * (n * n) as u64;
        Ctx { inst, n, params, home, across, work }
    }

    fn size(&self) -> usize {
        1 << self.n
    }

    fn across(&self) -> &Walks {
        self.across.as_ref().expect("two chargers")
    }

    fn loop_at(&self, c: usize, block: usize) -> Segment {
        Segment::new(self.inst, c, self.home[c].order(block), c)
    }

    fn path(&self, block: usize) -> Segment {
        Segment::new(self.inst, 0, self.across().order(block), 1)
    }

    /// Price table: `f(len)` applied to each set's shortest closed walk at `c`.
    fn home_prices(&self, c: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.size()).map(|s| if s == 0 { INF } else { f(self.home[c].len(s)) }).collect()
    }

    fn across_prices(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.size()).map(|s| if s == 0 { INF } else { f(self.across().len(s)) }).collect()
    }

    fn direct(&self) -> f64 {
        self.inst.dist(NodeId::Charger(0), NodeId::Charger(1))
    }

    /// Turns crews into a schedule, checks it, and packages the result.
    fn finish(self, variant: Variant, covered: usize, crews: Vec<Crew>) -> Result<OracleResult> {
        let mut schedule = Schedule::empty(variant);
        let sweep = self.params.sweep_length;
        for crew in crews {
            let route = Loop::new(crew.segments)?;
            let first = schedule.sensors_used();
            for mut it in place_sensors_on_loop(&route, crew.sensors, sweep, self.params.speed)? {
                it.sensor += first;
                if !variant.charge_ge_sweep() {
                    it.segment_budget = self.params.charge_length;
                }
                schedule.itineraries.push(it);
            }
        }
        schedule.covered = members(covered).collect();
        let report = verify(self.inst, &schedule)?;
        if !report.feasible || objective(&report) != schedule.covered.len() {
            return Err(Error::Contract(format!(
                "oracle witness for {variant} failed verification: {:?}",
                report.issues
            )));
        }
        Ok(OracleResult {
            opt_value: schedule.covered.len(),
            witness: schedule,
            search_space_size: self.work,
            truncated: false,
        })
    }
}

fn fits(len: f64, cap: f64) -> bool {
    len <= cap + EPS_LEN
}

/// Smallest `k` in `1..=cap` with `len <= k * unit`, as a price.
fn units(len: f64, unit: f64, cap: usize) -> f64 {
    (1..=cap).find(|&k| fits(len, k as f64 * unit)).map_or(INF, |k| k as f64)
}

/// Largest coverable set whose price is within `budget`.
fn best_within(costs: &[f64], budget: f64) -> usize {
    (0..costs.len())
        .filter(|&s| costs[s] <= budget + 1e-9)
        .fold(0, |acc, s| if better(s, acc) { s } else { acc })
}

/// Exact optimum over the greedy's own candidate family for `variant`.
///
/// * `rcsc_tc_ge_tt`: loops at one charger of length `k * L_t`, costing `k`
///   sensors, `k <= Q`.
/// * `rcsc_tt_gt_tc`: one sensor per `Q̂` loops of length `L_c` at one charger.
/// * `csc2_tc_ge_tt`: the above self loops plus mutual loops with legs of
///   `j1 * L_t` and `j2 * L_t` (`j <= Q`), costing `j1 + j2` sensors.
/// * `csc2_tt_gt_tc`: one sensor per closed chain of `Q̂` segments of length
///   at most `L_c`.
///
/// Instances beyond [`RESTRICTED_MAX_TARGETS`], [`RESTRICTED_MAX_SENSORS`] or
/// [`RESTRICTED_MAX_CHARGERS`] come back truncated.
pub fn opt_restricted(inst: &Instance, variant: Variant) -> Result<OracleResult> {
    inst.require_valid()?;
    let params = variant.check(inst)?;
    if inst.n_targets() > RESTRICTED_MAX_TARGETS
        || inst.sensors() > RESTRICTED_MAX_SENSORS
        || inst.n_chargers() > RESTRICTED_MAX_CHARGERS
    {
        return Ok(OracleResult::truncated(variant));
    }
    let two = variant.family() == Family::Csc2;
    let mut ctx = Ctx::new(inst, params, two);
    let budget = inst.sensors() as f64;
    let q = params.multiple();
    let sweep = params.sweep_length;
    let charge = params.charge_length;
    let chargers = inst.n_chargers();

    match variant {
        Variant::RcscTcGeTt | Variant::Csc2TcGeTt => {
            let own: Vec<Vec<f64>> = (0..chargers).map(|c| ctx.home_prices(c, |l| units(l, sweep, q))).collect();
            let mut price: Vec<f64> =
                (0..ctx.size()).map(|s| own.iter().map(|p| p[s]).fold(INF, f64::min)).collect();
            let mut legs = None;
            if two {
                let mut leg: Vec<f64> = ctx.across_prices(|l| units(l, sweep, q));
                leg[0] = units(ctx.direct(), sweep, q);
                let (mutual, split) = best_split(ctx.n, &leg, &leg, &mut ctx.work);
                for s in 1..ctx.size() {
                    price[s] = price[s].min(mutual[s]);
                }
                legs = Some((leg, split));
            }
            let plan = Partition::new(ctx.n, &price, &mut ctx.work);
            let best = best_within(plan.costs(), budget);
            let mut crews = Vec::new();
            for block in plan.blocks(best) {
                let sensors = price[block] as usize;
                if let Some(c) = (0..chargers).find(|&c| own[c][block] == price[block]) {
                    crews.push(Crew { segments: vec![ctx.loop_at(c, block)], sensors });
                } else {
                    let (_, split) = legs.as_ref().expect("mutual price needs legs");
                    let there = split[block];
                    let back = ctx.path(block ^ there).reversed();
                    crews.push(Crew { segments: vec![ctx.path(there), back], sensors });
                }
            }
            ctx.finish(variant, best, crews)
        }
        Variant::RcscTtGtTc => {
            let parts: Vec<Partition> = (0..chargers)
                .map(|c| {
                    let p = ctx.home_prices(c, |l| if fits(l, charge) { 1.0 } else { INF });
                    Partition::new(ctx.n, &p, &mut ctx.work)
                })
                .collect();
            let home_of = |s: usize| (0..chargers).find(|&c| parts[c].cost(s) <= q as f64);
            let price: Vec<f64> =
                (0..ctx.size()).map(|s| if s != 0 && home_of(s).is_some() { 1.0 } else { INF }).collect();
            let plan = Partition::new(ctx.n, &price, &mut ctx.work);
            let best = best_within(plan.costs(), budget);
            let mut crews = Vec::new();
            for block in plan.blocks(best) {
                let c = home_of(block).expect("priced block has a home");
                let mut segments: Vec<Segment> = parts[c].blocks(block).into_iter().map(|b| ctx.loop_at(c, b)).collect();
                segments.resize_with(q, || Segment::direct(inst, c, c));
                crews.push(Crew { segments, sensors: 1 });
            }
            ctx.finish(variant, best, crews)
        }
        Variant::Csc2TtGtTc => {
            let per_loop = |l: f64| if fits(l, charge) { 1.0 } else { INF };
            let at_a = ctx.home_prices(0, per_loop);
            let at_b = ctx.home_prices(1, per_loop);
            let either: Vec<f64> = at_a.iter().zip(&at_b).map(|(x, y)| x.min(*y)).collect();
            let parts_a = Partition::new(ctx.n, &at_a, &mut ctx.work);
            let parts_b = Partition::new(ctx.n, &at_b, &mut ctx.work);
            let selfs = Partition::new(ctx.n, &either, &mut ctx.work);
            let cross_ok = fits(ctx.direct(), charge);
            let paths = Partition::new(ctx.n, &ctx.across_prices(per_loop), &mut ctx.work);
            // Slots used by the path blocks of a mixed chain: an even count, at least two.
            let path_slots: Vec<f64> =
                paths.costs().iter().map(|&k| if cross_ok { 2.0 * (k / 2.0).ceil().max(1.0) } else { INF }).collect();
            let (mixed, split) = best_split(ctx.n, selfs.costs(), &path_slots, &mut ctx.work);
            let slots = q as f64;
            let price: Vec<f64> = (0..ctx.size())
                .map(|s| {
                    let ok = parts_a.cost(s) <= slots || parts_b.cost(s) <= slots || mixed[s] <= slots;
                    if s != 0 && ok { 1.0 } else { INF }
                })
                .collect();
            let plan = Partition::new(ctx.n, &price, &mut ctx.work);
            let best = best_within(plan.costs(), budget);
            let mut crews = Vec::new();
            for block in plan.blocks(best) {
                let segments = if let Some((c, parts)) =
                    [(0, &parts_a), (1, &parts_b)].into_iter().find(|(_, p)| p.cost(block) <= slots)
                {
                    let mut segs: Vec<Segment> = parts.blocks(block).into_iter().map(|b| ctx.loop_at(c, b)).collect();
                    segs.resize_with(q, || Segment::direct(inst, c, c));
                    segs
                } else {
                    let own = split[block];
                    let mut segs: Vec<Segment> = selfs
                        .blocks(own)
                        .into_iter()
                        .map(|b| ctx.loop_at(if at_a[b].is_finite() { 0 } else { 1 }, b))
                        .collect();
                    let mut legs: Vec<Segment> = paths.blocks(block ^ own).into_iter().map(|b| ctx.path(b)).collect();
                    let pairs = legs.len().div_ceil(2).max(1);
                    legs.resize_with(2 * pairs, || Segment::direct(inst, 0, 1));
                    segs.resize_with(q - 2 * pairs, || Segment::direct(inst, 0, 0));
                    segs.extend(legs.into_iter().enumerate().map(|(i, s)| if i % 2 == 1 { s.reversed() } else { s }));
                    let mut chains = chain_segments(segs, q)?;
                    if chains.len() != 1 {
                        return Err(Error::Contract("mixed block did not form one chain".into()));
                    }
                    chains.pop().expect("one chain")
                };
                crews.push(Crew { segments, sensors: 1 });
            }
            ctx.finish(variant, best, crews)
        }
    }
}

/// How the cheapest route through a set is built.
enum RouteKind {
    Home(usize),
    Mixed,
}

/// Exact optimum over schedules in which sensors travel in crews: each crew
/// of `g` sensors shares one closed route of length at most `g * L_t`,
/// evenly spaced, and every charger-to-charger stretch of the route is at
/// most `L_c`. Routes may revisit chargers any number of times and their
/// stretches need not be equal. For the restricted family a route touches a
/// single charger; with two free chargers a route may cross between them an
/// even number of times.
///
/// With at most two sensors this covers one crew of one or two sensors and
/// two independent single-sensor routes. Schedules where sensors on
/// different routes share targets are not searched.
///
/// Instances beyond [`TRUE_MAX_TARGETS`] or [`TRUE_MAX_SENSORS`] come back
/// truncated.
pub fn opt_true(inst: &Instance, variant: Variant) -> Result<OracleResult> {
    inst.require_valid()?;
    let params = variant.check(inst)?;
    if inst.n_targets() > TRUE_MAX_TARGETS || inst.sensors() > TRUE_MAX_SENSORS {
        return Ok(OracleResult::truncated(variant));
    }
    let two = variant.family() == Family::Csc2;
    let mut ctx = Ctx::new(inst, params, two);
    let charge = params.charge_length;
    let sweep = params.sweep_length;
    let size = ctx.size();
    let stretch = |l: f64| if fits(l, charge) { l } else { INF };

    let arcs: Vec<Partition> = (0..inst.n_chargers())
        .map(|c| {
            let p = ctx.home_prices(c, stretch);
            Partition::new(ctx.n, &p, &mut ctx.work)
        })
        .collect();
    let mut route: Vec<(f64, RouteKind)> = (0..size)
        .map(|s| {
            (0..arcs.len())
                .map(|c| (arcs[c].cost(s), RouteKind::Home(c)))
                .fold((INF, RouteKind::Home(0)), |acc, x| if x.0 < acc.0 { x } else { acc })
        })
        .collect();

    let mut mixed_plan = None;
    if two && fits(ctx.direct(), charge) {
        let legs = EvenPaths::new(ctx.n, &ctx.across_prices(stretch), ctx.direct(), &mut ctx.work);
        let (both, sides) = best_split(ctx.n, arcs[0].costs(), arcs[1].costs(), &mut ctx.work);
        let (mixed, cross) = best_split(ctx.n, &both, &legs.costs(), &mut ctx.work);
        for (s, r) in route.iter_mut().enumerate() {
            if mixed[s] < r.0 {
                *r = (mixed[s], RouteKind::Mixed);
            }
        }
        mixed_plan = Some((legs, sides, cross));
    }

    let crew_route = |ctx: &Ctx, set: usize| -> Vec<Segment> {
        match route[set].1 {
            RouteKind::Home(c) => arcs[c].blocks(set).into_iter().map(|b| ctx.loop_at(c, b)).collect(),
            RouteKind::Mixed => {
                let (legs, sides, cross) = mixed_plan.as_ref().expect("mixed route has a plan");
                let ends = cross[set];
                let at_a = sides[ends];
                let (blocks, pad) = legs.blocks(set ^ ends);
                let mut paths: Vec<Segment> = blocks.into_iter().map(|b| ctx.path(b)).collect();
                paths.extend((0..pad).map(|_| Segment::direct(ctx.inst, 0, 1)));
                let mut segs: Vec<Segment> = arcs[0].blocks(at_a).into_iter().map(|b| ctx.loop_at(0, b)).collect();
                let mut paths = paths.into_iter();
                segs.push(paths.next().expect("at least two paths"));
                segs.extend(arcs[1].blocks(ends ^ at_a).into_iter().map(|b| ctx.loop_at(1, b)));
                segs.push(paths.next().expect("at least two paths").reversed());
                while let (Some(there), Some(back)) = (paths.next(), paths.next()) {
                    segs.push(there);
                    segs.push(back.reversed());
                }
                segs
            }
        }
    };

    // Smallest crew size that can run each set's route.
    let crew_size = |s: usize| (1..=inst.sensors()).find(|&g| fits(route[s].0, g as f64 * sweep));
    let mut best = 0;
    let mut best_crews: Vec<(usize, usize)> = Vec::new();
    for s in 1..size {
        if let Some(g) = crew_size(s) {
            if better(s, best) {
                best = s;
                best_crews = vec![(s, g)];
            }
        }
    }
    if inst.sensors() >= 2 {
        let solo: Vec<f64> = (0..size).map(|s| if fits(route[s].0, sweep) { 0.0 } else { INF }).collect();
        let (pair, split) = best_split(ctx.n, &solo, &solo, &mut ctx.work);
        for s in 1..size {
            if pair[s] == 0.0 && better(s, best) {
                best = s;
                best_crews = [split[s], s ^ split[s]].into_iter().filter(|&x| x != 0).map(|x| (x, 1)).collect();
            }
        }
    }

    let crews: Vec<Crew> = best_crews
        .into_iter()
        .map(|(set, sensors)| Crew { segments: crew_route(&ctx, set), sensors })
        .collect();
    ctx.finish(variant, best, crews)
}
