use std::fmt;

use serde::Serialize;

use super::{regime_of, Instance, NodeId, EPS_LEN};

/// A broken structural precondition. Any violation makes the instance invalid.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    NoTargets,
    NoChargers,
    NoSensors,
    NonPositiveSpeed { value: f64 },
    NonPositivePeriod { period: String, value: f64 },
    NonFiniteDistance { from: NodeId, to: NodeId },
    NegativeDistance { from: NodeId, to: NodeId, value: f64 },
    Asymmetric { from: NodeId, to: NodeId, forward: f64, backward: f64 },
    NonzeroDiagonal { node: NodeId, value: f64 },
    /// `dist(from, to) > dist(from, via) + dist(via, to)`.
    Triangle { from: NodeId, to: NodeId, via: NodeId, direct: f64, detour: f64 },
    /// Neither `T_c / T_t` nor `T_t / T_c` is a usable integer.
    Multiplicity { sweep_period: f64, charge_period: f64 },
}

/// Informational findings that do not invalidate the instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "note", rename_all = "snake_case")]
pub enum Note {
    CoincidentTargetCharger { target: usize, charger: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<Note>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoTargets => write!(f, "no targets"),
            Violation::NoChargers => write!(f, "no chargers"),
            Violation::NoSensors => write!(f, "no sensors"),
            Violation::NonPositiveSpeed { value } => write!(f, "speed {value} is not positive"),
            Violation::NonPositivePeriod { period, value } => {
                write!(f, "{period} {value} is not positive")
            }
            Violation::NonFiniteDistance { from, to } => {
                write!(f, "distance {from:?} -> {to:?} is not finite")
            }
            Violation::NegativeDistance { from, to, value } => {
                write!(f, "distance {from:?} -> {to:?} is negative ({value})")
            }
            Violation::Asymmetric { from, to, forward, backward } => {
                write!(f, "distance {from:?} <-> {to:?} is asymmetric ({forward} vs {backward})")
            }
            Violation::NonzeroDiagonal { node, value } => {
                write!(f, "distance {node:?} -> itself is {value}")
            }
            Violation::Triangle { from, to, via, direct, detour } => write!(
                f,
                "triangle inequality fails: {from:?} -> {to:?} is {direct}, via {via:?} is {detour}"
            ),
            Violation::Multiplicity { sweep_period, charge_period } => write!(
                f,
                "T_t={sweep_period} and T_c={charge_period} are not integer multiples"
            ),
        }
    }
}

/// Checks every structural invariant and lists all failures. Pure.
pub fn validate(inst: &Instance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    if inst.n_targets() == 0 {
        v.push(Violation::NoTargets);
    }
    if inst.n_chargers() == 0 {
        v.push(Violation::NoChargers);
    }
    if inst.sensors() == 0 {
        v.push(Violation::NoSensors);
    }
    let fleet = inst.fleet();
    if !(fleet.speed > 0.0) {
        v.push(Violation::NonPositiveSpeed { value: fleet.speed });
    }
    let mut periods_ok = true;
    for (name, value) in [("sweep_period", fleet.sweep_period), ("charge_period", fleet.charge_period)] {
        if !(value > 0.0) {
            periods_ok = false;
            v.push(Violation::NonPositivePeriod { period: name.to_string(), value });
        }
    }
    if periods_ok && regime_of(fleet.sweep_period, fleet.charge_period).is_none() {
        v.push(Violation::Multiplicity {
            sweep_period: fleet.sweep_period,
            charge_period: fleet.charge_period,
        });
    }

    let n = inst.n_nodes();
    let node = |i: usize| inst.node_at(i);
    let mut metric_ok = true;
    for i in 0..n {
        let dii = inst.d(i, i);
        if dii.abs() > EPS_LEN {
            v.push(Violation::NonzeroDiagonal { node: node(i), value: dii });
        }
        for j in 0..n {
            let dij = inst.d(i, j);
            if !dij.is_finite() {
                metric_ok = false;
                v.push(Violation::NonFiniteDistance { from: node(i), to: node(j) });
            } else if dij < 0.0 {
                v.push(Violation::NegativeDistance { from: node(i), to: node(j), value: dij });
            }
            if i < j {
                let dji = inst.d(j, i);
                if (dij - dji).abs() > EPS_LEN {
                    v.push(Violation::Asymmetric {
                        from: node(i),
                        to: node(j),
                        forward: dij,
                        backward: dji,
                    });
                }
            }
        }
    }
    if metric_ok {
        for i in 0..n {
            for j in (i + 1)..n {
                let direct = inst.d(i, j);
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let detour = inst.d(i, k) + inst.d(k, j);
                    if direct > detour + EPS_LEN {
                        v.push(Violation::Triangle {
                            from: node(i),
                            to: node(j),
                            via: node(k),
                            direct,
                            detour,
                        });
                    }
                }
            }
        }
    }

    for t in 0..inst.n_targets() {
        for c in 0..inst.n_chargers() {
            if inst.d(t, inst.charger_node(c)).abs() <= EPS_LEN {
                report.notes.push(Note::CoincidentTargetCharger { target: t, charger: c });
            }
        }
    }
    report
}
