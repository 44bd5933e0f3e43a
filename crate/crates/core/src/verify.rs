//! Continuous-time feasibility check for schedules.
//!
//! Each sensor moves forward along its loop at speed `V` and is at arc
//! position 0 at time `phase`. Timing uses the stored segment lengths; a
//! stored length may exceed the walk it describes (the sensor idles or
//! detours before reaching the end charger) but never undercut it.
//!
//! Gaps are steady-state and cyclic. Visits by sensors sharing a period are
//! merged exactly. Sensors with different periods are not merged; a target's
//! gap is then the smallest per-group gap, which can only overstate the true
//! gap.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Instance, NodeId, EPS_LEN};
use crate::route::{chain_break, Family, Itinerary, Schedule};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum Issue {
    TooManySensors { used: usize, available: usize },
    DuplicateSensor { sensor: usize },
    BrokenChain { sensor: usize, segment: usize },
    /// Stored length shorter than the walk through its nodes.
    ShortSegment { sensor: usize, segment: usize, stored: f64, walk: f64 },
    /// A restricted sensor touched a charger other than its home.
    AwayFromHome { sensor: usize, segment: usize, charger: usize },
    NeverCharges { sensor: usize },
    ChargeGap { sensor: usize, gap: f64, limit: f64 },
    /// A claimed target is not revisited within `T_t` (`gap` is `None` when
    /// it is never visited).
    Uncovered { target: usize, gap: Option<f64>, limit: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    /// Targets whose worst revisit gap is at most `T_t`.
    pub verified_covered: BTreeSet<usize>,
    /// Worst revisit gap of every visited target.
    pub per_target_gap: BTreeMap<usize, f64>,
    /// Worst time between counted charger visits; `None` if the sensor never
    /// reaches a counted charger.
    pub per_sensor_charge_gap: BTreeMap<usize, Option<f64>>,
    pub feasible: bool,
    pub issues: Vec<Issue>,
}

/// Number of verified covered targets.
pub fn objective(report: &CoverageReport) -> usize {
    report.verified_covered.len()
}

fn check_nodes(inst: &Instance, schedule: &Schedule) -> Result<()> {
    for it in &schedule.itineraries {
        for seg in it.route.segments() {
            for c in [seg.start, seg.end] {
                if !inst.contains(NodeId::Charger(c)) {
                    return Err(Error::Input(format!("sensor {} uses unknown charger {c}", it.sensor)));
                }
            }
            if let Some(&t) = seg.via.iter().find(|&&t| !inst.contains(NodeId::Target(t))) {
                return Err(Error::Input(format!("sensor {} visits unknown target {t}", it.sensor)));
            }
            if !(seg.length.is_finite() && seg.length >= 0.0) {
                return Err(Error::Input(format!(
                    "sensor {} has a segment of length {}",
                    it.sensor, seg.length
                )));
            }
        }
        if it.route.segments().is_empty() {
            return Err(Error::Input(format!("sensor {} has an empty route", it.sensor)));
        }
        if !it.phase.is_finite() {
            return Err(Error::Input(format!("sensor {} has phase {}", it.sensor, it.phase)));
        }
    }
    if let Some(&t) = schedule.covered.iter().find(|&&t| !inst.contains(NodeId::Target(t))) {
        return Err(Error::Input(format!("claimed target {t} is not in the instance")));
    }
    Ok(())
}

/// Arc positions of every target visit and every segment start.
struct Timeline {
    total: f64,
    targets: Vec<(usize, f64)>,
    chargers: Vec<(usize, f64)>,
}

fn timeline(inst: &Instance, it: &Itinerary) -> Timeline {
    let mut pos = 0.0;
    let mut targets = Vec::new();
    let mut chargers = Vec::new();
    for seg in it.route.segments() {
        chargers.push((seg.start, pos));
        let mut prev = inst.index(NodeId::Charger(seg.start));
        let mut along = pos;
        for &t in &seg.via {
            along += inst.d(prev, t);
            targets.push((t, along));
            prev = t;
        }
        pos += seg.length;
    }
    Timeline { total: pos, targets, chargers }
}

/// Largest cyclic gap between sorted points on a circle of circumference `period`.
fn cyclic_gap(mut points: Vec<f64>, period: f64) -> f64 {
    if period <= 0.0 {
        return 0.0;
    }
    points.sort_by(f64::total_cmp);
    let wrap = points[0] + period - points[points.len() - 1];
    points.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// Checks charging and sweep requirements for every sensor and claimed target.
pub fn verify(inst: &Instance, schedule: &Schedule) -> Result<CoverageReport> {
    let fleet = inst.fleet();
    if !(fleet.speed > 0.0) {
        return Err(Error::Input(format!("speed must be positive, got {}", fleet.speed)));
    }
    check_nodes(inst, schedule)?;
    let speed = fleet.speed;
    let eps_time = EPS_LEN / speed;
    let restricted = schedule.variant.family() == Family::Rcsc;
    let mut issues = Vec::new();

    let used = schedule.sensors_used();
    if used > fleet.sensors {
        issues.push(Issue::TooManySensors { used, available: fleet.sensors });
    }
    let mut seen = BTreeSet::new();
    for it in &schedule.itineraries {
        if !seen.insert(it.sensor) {
            issues.push(Issue::DuplicateSensor { sensor: it.sensor });
        }
    }

    let mut charge_gaps = BTreeMap::new();
    // Visit phases (time) per target, grouped by sensor period.
    let mut groups: Vec<(f64, BTreeMap<usize, Vec<f64>>)> = Vec::new();
    for it in &schedule.itineraries {
        let segs = it.route.segments();
        if let Some(i) = chain_break(segs) {
            issues.push(Issue::BrokenChain { sensor: it.sensor, segment: i });
        }
        for (i, seg) in segs.iter().enumerate() {
            let walk = seg.walk_length(inst);
            if seg.length < walk - EPS_LEN {
                issues.push(Issue::ShortSegment { sensor: it.sensor, segment: i, stored: seg.length, walk });
            }
        }
        let home = segs[0].start;
        if restricted {
            for (i, seg) in segs.iter().enumerate() {
                if let Some(c) = [seg.start, seg.end].into_iter().find(|&c| c != home) {
                    issues.push(Issue::AwayFromHome { sensor: it.sensor, segment: i, charger: c });
                }
            }
        }

        let line = timeline(inst, it);
        let counted: Vec<f64> = line
            .chargers
            .iter()
            .filter(|&&(c, _)| !restricted || c == home)
            .map(|&(_, p)| p)
            .collect();
        let gap = (!counted.is_empty()).then(|| cyclic_gap(counted, line.total) / speed);
        match gap {
            None => issues.push(Issue::NeverCharges { sensor: it.sensor }),
            Some(g) if g > fleet.charge_period + eps_time => {
                issues.push(Issue::ChargeGap { sensor: it.sensor, gap: g, limit: fleet.charge_period })
            }
            Some(_) => {}
        }
        charge_gaps.insert(it.sensor, gap);

        let period = line.total / speed;
        let group = match groups.iter().position(|(p, _)| (p - period).abs() <= eps_time) {
            Some(g) => g,
            None => {
                groups.push((period, BTreeMap::new()));
                groups.len() - 1
            }
        };
        for &(t, p) in &line.targets {
            let at = if period > 0.0 { (it.phase + p / speed).rem_euclid(period) } else { 0.0 };
            groups[group].1.entry(t).or_default().push(at);
        }
    }

    let mut per_target_gap: BTreeMap<usize, f64> = BTreeMap::new();
    for (period, visits) in groups {
        for (t, times) in visits {
            let g = cyclic_gap(times, period);
            per_target_gap.entry(t).and_modify(|best| *best = best.min(g)).or_insert(g);
        }
    }
    let within = |g: f64| g <= fleet.sweep_period + eps_time;
    let verified_covered: BTreeSet<usize> =
        per_target_gap.iter().filter(|&(_, &g)| within(g)).map(|(&t, _)| t).collect();
    for &t in &schedule.covered {
        if !verified_covered.contains(&t) {
            issues.push(Issue::Uncovered {
                target: t,
                gap: per_target_gap.get(&t).copied(),
                limit: fleet.sweep_period,
            });
        }
    }

    Ok(CoverageReport {
        verified_covered,
        per_target_gap,
        per_sensor_charge_gap: charge_gaps,
        feasible: issues.is_empty(),
        issues,
    })
}
