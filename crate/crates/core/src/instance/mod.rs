//! Problem input: targets, charging stations, a metric over both, and the
//! fleet parameters (sensor count, speed, sweep and charge periods).
//!
//! Nodes are addressed by [`NodeId`]. Internally all distances live in one
//! row-major matrix ordered targets `t_0..t_{N-1}` then chargers
//! `c_0..c_{K-1}`, the same order the instance file uses.

mod file;
mod validate;
mod view;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use file::{load, save};
pub use validate::{validate, Note, ValidationReport, Violation};
pub use view::{induced_subgraph, View};

/// Global slack for every length comparison.
pub const EPS_LEN: f64 = 1e-9;

/// Relative tolerance used when deciding whether a period ratio is integral.
const RATIO_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum NodeId {
    Target(usize),
    Charger(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Sensor fleet and timing requirements shared by every sensor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fleet {
    pub sensors: usize,
    /// Travel speed `V` (length per time).
    pub speed: f64,
    /// `T_t`: every covered target must be visited at least once per this period.
    pub sweep_period: f64,
    /// `T_c`: every sensor must pass a charger at least once per this period.
    pub charge_period: f64,
}

/// Which of the two period ratios is the integer one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `T_c >= T_t` with `Q = T_c / T_t`.
    ChargeGeSweep { q: usize },
    /// `T_t > T_c` with `Q̂ = T_t / T_c >= 2`.
    SweepGtCharge { q_hat: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedParams {
    pub speed: f64,
    /// `L_t = V * T_t`.
    pub sweep_length: f64,
    /// `L_c = V * T_c`.
    pub charge_length: f64,
    pub regime: Regime,
    /// `max(T_t, T_c)`.
    pub hyperperiod: f64,
}

impl DerivedParams {
    /// `Q` or `Q̂`, whichever applies.
    pub fn multiple(&self) -> usize {
        match self.regime {
            Regime::ChargeGeSweep { q } => q,
            Regime::SweepGtCharge { q_hat } => q_hat,
        }
    }
}

/// Integer ratio `num / den` if it is one within tolerance.
fn integer_ratio(num: f64, den: f64) -> Option<usize> {
    if !(num > 0.0 && den > 0.0 && num.is_finite() && den.is_finite()) {
        return None;
    }
    let r = num / den;
    let rounded = r.round();
    if rounded >= 1.0 && (r - rounded).abs() <= RATIO_TOL * rounded {
        Some(rounded as usize)
    } else {
        None
    }
}

pub(crate) fn regime_of(sweep_period: f64, charge_period: f64) -> Option<Regime> {
    if let Some(q) = integer_ratio(charge_period, sweep_period) {
        return Some(Regime::ChargeGeSweep { q });
    }
    match integer_ratio(sweep_period, charge_period) {
        Some(q_hat) if q_hat >= 2 => Some(Regime::SweepGtCharge { q_hat }),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n_targets: usize,
    n_chargers: usize,
    coords: Option<Vec<Point>>,
    /// False when distances were derived from `coords`.
    explicit_dist: bool,
    dist: Vec<f64>,
    fleet: Fleet,
}

impl Instance {
    /// Coordinate-mode instance with Euclidean distances.
    pub fn euclidean(targets: &[Point], chargers: &[Point], fleet: Fleet) -> Self {
        let coords: Vec<Point> = targets.iter().chain(chargers).copied().collect();
        let n = coords.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = coords[i].distance(&coords[j]);
            }
        }
        Instance {
            n_targets: targets.len(),
            n_chargers: chargers.len(),
            coords: Some(coords),
            explicit_dist: false,
            dist,
            fleet,
        }
    }

    /// Matrix-mode instance. `dist` is row-major over `n_targets + n_chargers`
    /// nodes. Only the shape is checked here; metric properties are reported
    /// by [`validate`].
    pub fn with_matrix(
        n_targets: usize,
        n_chargers: usize,
        dist: Vec<f64>,
        fleet: Fleet,
    ) -> Result<Self> {
        let n = n_targets + n_chargers;
        if dist.len() != n * n {
            return Err(Error::Input(format!(
                "distance matrix has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        Ok(Instance { n_targets, n_chargers, coords: None, explicit_dist: true, dist, fleet })
    }

    /// Attach coordinates (used for rendering) to a matrix-mode instance.
    pub fn with_coords(mut self, coords: Vec<Point>) -> Result<Self> {
        if coords.len() != self.n_nodes() {
            return Err(Error::Input(format!(
                "expected {} coordinates, got {}",
                self.n_nodes(),
                coords.len()
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn n_targets(&self) -> usize {
        self.n_targets
    }

    pub fn n_chargers(&self) -> usize {
        self.n_chargers
    }

    pub fn n_nodes(&self) -> usize {
        self.n_targets + self.n_chargers
    }

    pub fn fleet(&self) -> &Fleet {
        &self.fleet
    }

    pub fn sensors(&self) -> usize {
        self.fleet.sensors
    }

    pub fn speed(&self) -> f64 {
        self.fleet.speed
    }

    pub fn sweep_period(&self) -> f64 {
        self.fleet.sweep_period
    }

    pub fn charge_period(&self) -> f64 {
        self.fleet.charge_period
    }

    /// Copy of this instance with a different sensor count.
    pub fn with_sensors(&self, sensors: usize) -> Self {
        let mut out = self.clone();
        out.fleet.sensors = sensors;
        out
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn has_explicit_dist(&self) -> bool {
        self.explicit_dist
    }

    pub fn point(&self, node: NodeId) -> Option<Point> {
        self.coords.as_ref().map(|c| c[self.index(node)])
    }

    /// Position of `node` in the flat node ordering.
    pub fn index(&self, node: NodeId) -> usize {
        match node {
            NodeId::Target(t) => t,
            NodeId::Charger(c) => self.n_targets + c,
        }
    }

    pub fn node_at(&self, index: usize) -> NodeId {
        if index < self.n_targets {
            NodeId::Target(index)
        } else {
            NodeId::Charger(index - self.n_targets)
        }
    }

    pub fn contains(&self, node: NodeId) -> bool {
        match node {
            NodeId::Target(t) => t < self.n_targets,
            NodeId::Charger(c) => c < self.n_chargers,
        }
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> f64 {
        self.d(self.index(a), self.index(b))
    }

    /// Distance between flat node indices.
    #[inline]
    pub(crate) fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n_nodes() + j]
    }

    #[inline]
    pub(crate) fn charger_node(&self, c: usize) -> usize {
        self.n_targets + c
    }

    pub(crate) fn raw_dist(&self) -> &[f64] {
        &self.dist
    }

    /// Length of the walk `from -> via... -> to`.
    pub fn walk_length(&self, from: NodeId, via: &[usize], to: NodeId) -> f64 {
        let mut prev = self.index(from);
        let mut total = 0.0;
        for &t in via {
            total += self.d(prev, t);
            prev = t;
        }
        total + self.d(prev, self.index(to))
    }

    /// `L_t`, `L_c`, `Q`/`Q̂`. Fails when the periods are not integer multiples
    /// of one another or are not positive.
    pub fn params(&self) -> Result<DerivedParams> {
        let Fleet { speed, sweep_period, charge_period, .. } = self.fleet;
        if !(speed > 0.0) {
            return Err(Error::Input(format!("speed must be positive, got {speed}")));
        }
        let regime = regime_of(sweep_period, charge_period).ok_or_else(|| {
            Error::Input(format!(
                "periods T_t={sweep_period} and T_c={charge_period} are not integer multiples"
            ))
        })?;
        Ok(DerivedParams {
            speed,
            sweep_length: speed * sweep_period,
            charge_length: speed * charge_period,
            regime,
            hyperperiod: sweep_period.max(charge_period),
        })
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Errors with the first violation if the instance is not valid. An
    /// empty target set is tolerated: solving it yields an empty schedule.
    pub(crate) fn require_valid(&self) -> Result<DerivedParams> {
        let report = self.validate();
        let mut violations = report.violations.iter().filter(|v| **v != Violation::NoTargets);
        if let Some(v) = violations.next() {
            return Err(Error::Input(format!(
                "instance fails validation ({} violations), first: {v}",
                1 + violations.count()
            )));
        }
        self.params()
    }
}
