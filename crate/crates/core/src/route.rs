//! Routes and schedules: charger-to-charger segments, cyclic loops, per-sensor
//! itineraries and whole schedules.
//!
//! Chargers and targets in this module are plain indices; a segment's
//! `start`/`end` are charger indices and `via` lists target indices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{DerivedParams, Instance, NodeId, Regime, EPS_LEN};

/// A walk from one charger to another (possibly the same) through targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub via: Vec<usize>,
    pub length: f64,
}

impl Segment {
    /// Builds the segment and computes its length from the instance metric.
    pub fn new(inst: &Instance, start: usize, via: Vec<usize>, end: usize) -> Self {
        let length = inst.walk_length(NodeId::Charger(start), &via, NodeId::Charger(end));
        Segment { start, end, via, length }
    }

    /// Charger-to-charger segment with no targets.
    pub fn direct(inst: &Instance, start: usize, end: usize) -> Self {
        Segment::new(inst, start, Vec::new(), end)
    }

    /// Length recomputed from the metric, ignoring the stored value.
    pub fn walk_length(&self, inst: &Instance) -> f64 {
        inst.walk_length(NodeId::Charger(self.start), &self.via, NodeId::Charger(self.end))
    }

    pub fn is_self(&self) -> bool {
        self.start == self.end
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self) -> Segment {
        let mut via = self.via.clone();
        via.reverse();
        Segment { start: self.end, end: self.start, via, length: self.length }
    }
}

/// A closed route: segments whose endpoints chain cyclically.
///
/// Deserialization does not check chaining; [`crate::verify`] reports broken
/// chains in loaded schedules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Loop {
    segments: Vec<Segment>,
}

impl Loop {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Contract("a loop needs at least one segment".into()));
        }
        if let Some(i) = chain_break(&segments) {
            let next = (i + 1) % segments.len();
            return Err(Error::Contract(format!(
                "segment {i} ends at charger {} but segment {next} starts at charger {}",
                segments[i].end, segments[next].start
            )));
        }
        Ok(Loop { segments })
    }

    /// Loop made of one closed segment.
    pub fn single(segment: Segment) -> Result<Self> {
        Loop::new(vec![segment])
    }

    /// `a -> b` then `b -> a`.
    pub fn mutual(forward: Segment, back: Segment) -> Result<Self> {
        if forward.is_self() {
            return Err(Error::Contract("mutual loop needs two distinct chargers".into()));
        }
        Loop::new(vec![forward, back])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn into_segments(self) -> Vec<Segment> {
        self.segments
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// Charger at arc position 0.
    pub fn start_charger(&self) -> usize {
        self.segments[0].start
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.segments.iter().flat_map(|s| s.via.iter().copied())
    }
}

/// Index of the first segment whose end does not meet the next start.
pub(crate) fn chain_break(segments: &[Segment]) -> Option<usize> {
    let n = segments.len();
    (0..n).find(|&i| segments[i].end != segments[(i + 1) % n].start)
}

/// One sensor's periodic route. At time `phase` the sensor is at arc
/// position 0 of `route`; it then moves forward at constant speed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Itinerary {
    pub sensor: usize,
    pub phase: f64,
    /// Per-segment length cap in force when the route was built.
    pub segment_budget: f64,
    #[serde(rename = "segments")]
    pub route: Loop,
}

impl Itinerary {
    /// Traversal period `total_length / V`.
    pub fn period(&self, speed: f64) -> f64 {
        self.route.total_length() / speed
    }

    /// Arc position in `[0, total_length)` at time `t`.
    pub fn arc_position(&self, t: f64, speed: f64) -> f64 {
        let total = self.route.total_length();
        if total <= 0.0 {
            return 0.0;
        }
        ((t - self.phase) * speed).rem_euclid(total)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    RcscTcGeTt,
    RcscTtGtTc,
    Csc2TcGeTt,
    Csc2TtGtTc,
}

/// Problem family; combined with the period regime it fixes the variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Each sensor recharges only at its home charger.
    Rcsc,
    /// Two chargers, either may be used.
    Csc2,
}

impl Variant {
    pub const ALL: [Variant; 4] =
        [Variant::RcscTcGeTt, Variant::RcscTtGtTc, Variant::Csc2TcGeTt, Variant::Csc2TtGtTc];

    pub fn new(family: Family, regime: Regime) -> Self {
        match (family, regime) {
            (Family::Rcsc, Regime::ChargeGeSweep { .. }) => Variant::RcscTcGeTt,
            (Family::Rcsc, Regime::SweepGtCharge { .. }) => Variant::RcscTtGtTc,
            (Family::Csc2, Regime::ChargeGeSweep { .. }) => Variant::Csc2TcGeTt,
            (Family::Csc2, Regime::SweepGtCharge { .. }) => Variant::Csc2TtGtTc,
        }
    }

    pub fn family(self) -> Family {
        match self {
            Variant::RcscTcGeTt | Variant::RcscTtGtTc => Family::Rcsc,
            Variant::Csc2TcGeTt | Variant::Csc2TtGtTc => Family::Csc2,
        }
    }

    /// True for the `T_c >= T_t` variants.
    pub fn charge_ge_sweep(self) -> bool {
        matches!(self, Variant::RcscTcGeTt | Variant::Csc2TcGeTt)
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::RcscTcGeTt => "rcsc_tc_ge_tt",
            Variant::RcscTtGtTc => "rcsc_tt_gt_tc",
            Variant::Csc2TcGeTt => "csc2_tc_ge_tt",
            Variant::Csc2TtGtTc => "csc2_tt_gt_tc",
        }
    }

    /// Errors unless the instance's period regime and charger count suit
    /// this variant.
    pub fn check(self, inst: &Instance) -> Result<DerivedParams> {
        let params = inst.params()?;
        if Variant::new(self.family(), params.regime) != self {
            return Err(Error::VariantMismatch(format!(
                "{self} does not match periods T_t={} T_c={}",
                inst.sweep_period(),
                inst.charge_period()
            )));
        }
        if self.family() == Family::Csc2 && inst.n_chargers() != 2 {
            return Err(Error::VariantMismatch(format!(
                "{self} requires exactly 2 chargers, instance has {}",
                inst.n_chargers()
            )));
        }
        Ok(params)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown variant `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub variant: Variant,
    pub itineraries: Vec<Itinerary>,
    pub covered: BTreeSet<usize>,
}

impl Schedule {
    pub fn empty(variant: Variant) -> Self {
        Schedule { variant, itineraries: Vec::new(), covered: BTreeSet::new() }
    }

    /// Number of distinct sensor ids in use.
    pub fn sensors_used(&self) -> usize {
        self.itineraries.iter().map(|it| it.sensor).collect::<BTreeSet<_>>().len()
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("schedules always serialize");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_slice(bytes);
        serde_path_to_error::deserialize(de)
            .map_err(|e| Error::parse(e.path().to_string(), e.into_inner().to_string()))
    }
}

/// Every target visited by some itinerary.
pub fn targets_on(schedule: &Schedule) -> BTreeSet<usize> {
    schedule.itineraries.iter().flat_map(|it| it.route.targets()).collect()
}

/// Puts `count` sensors on `route`, equally spaced by arc length.
///
/// Sensor `i` gets phase `i * total / (count * V)`, so neighbours are
/// `total / count <= L_t` apart at all times. The route may be shorter than
/// `count * L_t` (budgeted routes rarely use the full budget) but never
/// longer. Sensors are numbered `0..count`; callers renumber.
pub fn place_sensors_on_loop(
    route: &Loop,
    count: usize,
    sweep_length: f64,
    speed: f64,
) -> Result<Vec<Itinerary>> {
    if count == 0 {
        return Err(Error::Contract("cannot place zero sensors".into()));
    }
    let total = route.total_length();
    let cap = count as f64 * sweep_length;
    if total > cap + EPS_LEN {
        return Err(Error::Contract(format!(
            "loop of length {total} exceeds {count} x L_t = {cap}"
        )));
    }
    let spacing = total / count as f64;
    Ok((0..count)
        .map(|i| Itinerary {
            sensor: i,
            phase: i as f64 * spacing / speed,
            segment_budget: cap,
            route: route.clone(),
        })
        .collect())
}

/// Segment counts of a two-charger selection: `a_self` loops at charger `a`,
/// `b_self` at `b`, and `mutual_pairs` pairs `a -> b`, `b -> a`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Composition {
    pub a_self: usize,
    pub b_self: usize,
    pub mutual_pairs: usize,
}

impl Composition {
    pub fn new(a_self: usize, b_self: usize, mutual_pairs: usize) -> Self {
        Composition { a_self, b_self, mutual_pairs }
    }

    pub fn segments(&self) -> usize {
        self.a_self + self.b_self + 2 * self.mutual_pairs
    }

    /// At least one mutual pair, or both self counts divisible by `q_hat`.
    pub fn is_reasonable(&self, q_hat: usize) -> bool {
        q_hat > 0 && (self.mutual_pairs > 0 || (self.a_self.is_multiple_of(q_hat) && self.b_self.is_multiple_of(q_hat)))
    }

    /// Smallest number of mixed chains (chains holding mutual pairs) that lets
    /// the composition split into exactly `sensors` closed chains of `q_hat`
    /// segments each, or `None` if no split exists.
    ///
    /// A mixed chain holds between 1 and `q_hat / 2` mutual pairs plus any
    /// self loops; every other chain is `q_hat` self loops at one charger.
    pub fn mixed_chains(&self, sensors: usize, q_hat: usize) -> Option<usize> {
        if q_hat == 0 || self.segments() != sensors * q_hat {
            return None;
        }
        let pure = self.a_self / q_hat + self.b_self / q_hat;
        if self.mutual_pairs == 0 {
            return (self.a_self.is_multiple_of(q_hat) && self.b_self.is_multiple_of(q_hat)).then_some(0);
        }
        let per_chain = q_hat / 2;
        if per_chain == 0 {
            return None;
        }
        let lo = self.mutual_pairs.div_ceil(per_chain);
        let hi = self.mutual_pairs.min(sensors);
        (lo..=hi).find(|&g| sensors - g <= pure)
    }

    pub fn is_chainable(&self, sensors: usize, q_hat: usize) -> bool {
        self.mixed_chains(sensors, q_hat).is_some()
    }
}

/// Splits segments into closed chains of exactly `q_hat` segments each.
///
/// Segments may touch at most two chargers; `a` is the smaller index. Output
/// order: pure `a` chains, pure `b` chains, then mixed chains. A mixed chain
/// runs its `a` loops, one `a -> b`, its `b` loops, one `b -> a`, then any
/// further mutual pairs. Mutual segments are paired in input order.
pub fn chain_segments(segments: Vec<Segment>, q_hat: usize) -> Result<Vec<Vec<Segment>>> {
    if q_hat == 0 {
        return Err(Error::Contract("chains need at least one segment".into()));
    }
    let chargers: BTreeSet<usize> = segments.iter().flat_map(|s| [s.start, s.end]).collect();
    if chargers.len() > 2 {
        return Err(Error::Contract(format!("segments touch {} chargers", chargers.len())));
    }
    let mut it = chargers.iter().copied();
    let a = it.next().unwrap_or(0);
    let b = it.next();

    let (mut a_self, mut b_self, mut ab, mut ba) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for s in segments {
        match (s.start == a, s.end == a) {
            (true, true) => a_self.push(s),
            (false, false) => b_self.push(s),
            (true, false) => ab.push(s),
            (false, true) => ba.push(s),
        }
    }
    if ab.len() != ba.len() {
        return Err(Error::Contract(format!(
            "{} forward and {} backward mutual segments cannot pair up",
            ab.len(),
            ba.len()
        )));
    }
    let comp = Composition::new(a_self.len(), b_self.len(), ab.len());
    let total = comp.segments();
    if !total.is_multiple_of(q_hat) {
        return Err(Error::Contract(format!("{total} segments do not split into chains of {q_hat}")));
    }
    let sensors = total / q_hat;
    let g = comp.mixed_chains(sensors, q_hat).ok_or_else(|| {
        Error::Contract(format!(
            "composition ({}, {}, {}) with chains of {q_hat} cannot be chained (b = {b:?})",
            comp.a_self, comp.b_self, comp.mutual_pairs
        ))
    })?;

    let pure_a = (comp.a_self / q_hat).min(sensors - g);
    let pure_b = sensors - g - pure_a;
    let mut a_iter = a_self.into_iter();
    let mut b_iter = b_self.into_iter();
    let mut chains = Vec::with_capacity(sensors);
    for _ in 0..pure_a {
        chains.push(a_iter.by_ref().take(q_hat).collect());
    }
    for _ in 0..pure_b {
        chains.push(b_iter.by_ref().take(q_hat).collect());
    }

    // Spread the mutual pairs: every mixed chain gets at least one.
    let pairs_per: Vec<usize> = (0..g)
        .map(|i| comp.mutual_pairs / g + usize::from(i < comp.mutual_pairs % g))
        .collect();
    let mut pairs = ab.into_iter().zip(ba);
    for z in pairs_per {
        let mut free = q_hat - 2 * z;
        let a_part: Vec<Segment> = a_iter.by_ref().take(free).collect();
        free -= a_part.len();
        let b_part: Vec<Segment> = b_iter.by_ref().take(free).collect();
        let (first_ab, first_ba) = pairs.next().expect("pair count matches");
        let mut chain = a_part;
        chain.push(first_ab);
        chain.extend(b_part);
        chain.push(first_ba);
        for (f, r) in pairs.by_ref().take(z - 1) {
            chain.push(f);
            chain.push(r);
        }
        chains.push(chain);
    }
    debug_assert!(a_iter.next().is_none() && b_iter.next().is_none() && pairs.next().is_none());
    debug_assert!(chains.iter().all(|c: &Vec<Segment>| c.len() == q_hat && chain_break(c).is_none()));
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Fleet, Point};
    use proptest::prelude::*;

    fn square() -> Instance {
        Instance::euclidean(
            &[Point::new(0.0, 1.0), Point::new(1.0, 1.0), Point::new(2.0, 0.0)],
            &[Point::new(0.0, 0.0), Point::new(1.0, 0.0)],
            Fleet { sensors: 3, speed: 2.0, sweep_period: 2.0, charge_period: 4.0 },
        )
    }

    fn seg(start: usize, end: usize) -> Segment {
        Segment { start, end, via: Vec::new(), length: 1.0 }
    }

    fn lap(length: f64) -> Loop {
        Loop::single(Segment { start: 0, end: 0, via: vec![0], length }).unwrap()
    }

    #[test]
    fn segment_length_from_metric() {
        let inst = square();
        let s = Segment::new(&inst, 0, vec![0, 1], 1);
        assert!((s.length - 3.0).abs() < 1e-12);
        assert_eq!(Segment::direct(&inst, 0, 1).length, 1.0);
        assert_eq!(s.reversed().via, vec![1, 0]);
    }

    #[test]
    fn loop_chaining_enforced() {
        assert!(Loop::new(vec![seg(0, 1), seg(1, 0)]).is_ok());
        assert!(Loop::new(vec![seg(0, 1), seg(0, 1)]).is_err());
        assert!(Loop::new(vec![]).is_err());
        assert!(Loop::mutual(seg(0, 0), seg(0, 0)).is_err());
    }

    #[test]
    fn placement_single_and_triple() {
        let one = place_sensors_on_loop(&lap(4.0), 1, 4.0, 2.0).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].phase, 0.0);
        // L_t = 4, V = 2, T_t = 2.
        let three = place_sensors_on_loop(&lap(12.0), 3, 4.0, 2.0).unwrap();
        let phases: Vec<f64> = three.iter().map(|it| it.phase).collect();
        assert_eq!(phases, vec![0.0, 2.0, 4.0]);
        assert!(place_sensors_on_loop(&lap(12.0), 2, 4.0, 2.0).is_err());
        assert!(place_sensors_on_loop(&lap(1.0), 0, 4.0, 2.0).is_err());
    }

    #[test]
    fn chain_examples() {
        let chains = chain_segments(vec![seg(0, 0), seg(0, 0)], 2).unwrap();
        assert_eq!(chains.len(), 1);
        let mut six: Vec<Segment> = (0..3).map(|_| seg(0, 0)).collect();
        six.extend((0..3).map(|_| seg(1, 1)));
        assert_eq!(chain_segments(six, 3).unwrap().len(), 2);
        assert!(chain_segments(vec![seg(0, 0), seg(1, 1)], 2).is_err());
        let mixed = chain_segments(vec![seg(0, 0), seg(1, 0), seg(0, 1), seg(1, 1)], 4).unwrap();
        assert_eq!(mixed.len(), 1);
        let ends: Vec<(usize, usize)> = mixed[0].iter().map(|s| (s.start, s.end)).collect();
        assert_eq!(ends, vec![(0, 0), (0, 1), (1, 1), (1, 0)]);
    }

    #[test]
    fn reasonable_but_unchainable() {
        // One mutual pair fills a whole chain of two, leaving lone self loops.
        let c = Composition::new(1, 1, 1);
        assert!(c.is_reasonable(2));
        assert!(!c.is_chainable(2, 2));
        assert!(Composition::new(2, 0, 1).is_chainable(2, 2));
    }

    #[test]
    fn targets_union() {
        assert!(targets_on(&Schedule::empty(Variant::RcscTcGeTt)).is_empty());
        let it = |via: Vec<usize>| Itinerary {
            sensor: 0,
            phase: 0.0,
            segment_budget: 1.0,
            route: Loop::single(Segment { start: 0, end: 0, via, length: 1.0 }).unwrap(),
        };
        let s = Schedule {
            variant: Variant::RcscTcGeTt,
            itineraries: vec![it(vec![1]), it(vec![1, 3])],
            covered: BTreeSet::new(),
        };
        assert_eq!(targets_on(&s), [1, 3].into_iter().collect());
    }

    #[test]
    fn schedule_json_round_trip() {
        let inst = square();
        let route = Loop::mutual(Segment::new(&inst, 0, vec![0], 1), Segment::new(&inst, 1, vec![2], 0))
            .unwrap();
        let s = Schedule {
            variant: Variant::Csc2TcGeTt,
            itineraries: place_sensors_on_loop(&route, 2, 4.0, 2.0).unwrap(),
            covered: [0, 2].into_iter().collect(),
        };
        let text = String::from_utf8(s.to_json()).unwrap();
        assert!(text.contains("\"variant\": \"csc2_tc_ge_tt\""));
        assert_eq!(Schedule::from_json(text.as_bytes()).unwrap(), s);
        assert_eq!("rcsc_tt_gt_tc".parse::<Variant>().unwrap(), Variant::RcscTtGtTc);
    }

    #[test]
    fn variant_checks() {
        let inst = square();
        assert!(Variant::RcscTcGeTt.check(&inst).is_ok());
        assert!(Variant::Csc2TcGeTt.check(&inst).is_ok());
        assert!(matches!(Variant::RcscTtGtTc.check(&inst), Err(Error::VariantMismatch(_))));
        let one = Instance::euclidean(&[Point::new(1.0, 0.0)], &[Point::new(0.0, 0.0)], *inst.fleet());
        assert!(matches!(Variant::Csc2TcGeTt.check(&one), Err(Error::VariantMismatch(_))));
    }

    proptest! {
        #[test]
        fn stored_length_matches_walk(
            pts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..8),
            order in prop::collection::vec(0usize..8, 0..12),
        ) {
            let targets: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
            let inst = Instance::euclidean(&targets, &[Point::new(0.0, 0.0), Point::new(3.0, 3.0)],
                Fleet { sensors: 1, speed: 1.0, sweep_period: 1.0, charge_period: 1.0 });
            let via: Vec<usize> = order.into_iter().map(|i| i % targets.len()).collect();
            let s = Segment::new(&inst, 0, via.clone(), 1);
            let mut manual = 0.0;
            let mut prev = Point::new(0.0, 0.0);
            for &t in &via {
                manual += prev.distance(&targets[t]);
                prev = targets[t];
            }
            manual += prev.distance(&Point::new(3.0, 3.0));
            prop_assert!((s.length - manual).abs() <= EPS_LEN);
            prop_assert!((s.walk_length(&inst) - s.length).abs() <= EPS_LEN);
        }

        #[test]
        fn placement_keeps_spacing(k in 1usize..6, frac in 0.05f64..1.0, speed in 0.5f64..3.0) {
            let sweep = 5.0;
            let total = k as f64 * sweep * frac;
            let route = lap(total);
            let its = place_sensors_on_loop(&route, k, sweep, speed).unwrap();
            let hyper = 4.0 * sweep / speed;
            for step in 0..=1000 {
                let t = hyper * step as f64 / 1000.0;
                for i in 0..k {
                    let here = its[i].arc_position(t, speed);
                    let next = its[(i + 1) % k].arc_position(t, speed);
                    let gap = (here - next).rem_euclid(total);
                    let gap = if k == 1 { total } else { gap };
                    prop_assert!((gap - total / k as f64).abs() <= 1e-7 || (gap - total / k as f64 + total).abs() <= 1e-7,
                        "gap {gap} expected {}", total / k as f64);
                    prop_assert!(gap <= sweep + EPS_LEN);
                }
            }
        }

        #[test]
        fn chaining_respects_sensor_bound(a in 0usize..9, b in 0usize..9, m in 0usize..5, q in 2usize..5) {
            let mut segs: Vec<Segment> = (0..a).map(|_| seg(0, 0)).collect();
            segs.extend((0..b).map(|_| seg(1, 1)));
            for _ in 0..m {
                segs.push(seg(0, 1));
                segs.push(seg(1, 0));
            }
            let comp = Composition::new(a, b, m);
            let total = a + b + 2 * m;
            match chain_segments(segs, q) {
                Ok(chains) => {
                    prop_assert!(comp.is_chainable(total / q, q));
                    prop_assert!(chains.len() <= total.div_ceil(q) + 1);
                    for c in &chains {
                        prop_assert_eq!(c.len(), q);
                        prop_assert!(chain_break(c).is_none());
                    }
                }
                Err(_) => prop_assert!(total % q != 0 || !comp.is_chainable(total / q, q)),
            }
        }
    }
}
