//! JSON instance documents.
//!
//! ```json
//! { "targets": [{"id": 0, "x": 1.0, "y": 2.0}, ...],
//!   "chargers": [{"id": 0, "x": 0.0, "y": 0.0}],
//!   "dist": [[...], ...],
//!   "speed": 1.0, "sweep_period": 10.0, "charge_period": 20.0, "sensors": 2 }
//! ```
//!
//! `dist` is optional when every node carries coordinates and is then derived
//! as Euclidean distance. It may be given as nested rows or as one flat
//! row-major array.

use serde::{Deserialize, Serialize};

use super::{Fleet, Instance, Point};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum DistDoc {
    Rows(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    targets: Vec<NodeDoc>,
    chargers: Vec<NodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dist: Option<DistDoc>,
    speed: f64,
    sweep_period: f64,
    charge_period: f64,
    sensors: usize,
}

/// Orders nodes by id and extracts coordinates if every node has them.
fn order_nodes(nodes: Vec<NodeDoc>, field: &str) -> Result<Vec<Option<Point>>> {
    let n = nodes.len();
    let mut slots: Vec<Option<Option<Point>>> = vec![None; n];
    for (pos, node) in nodes.into_iter().enumerate() {
        let path = format!("{field}[{pos}]");
        if node.id >= n {
            return Err(Error::parse(format!("{path}.id"), format!("id {} out of range 0..{n}", node.id)));
        }
        if slots[node.id].is_some() {
            return Err(Error::parse(format!("{path}.id"), format!("duplicate id {}", node.id)));
        }
        let point = match (node.x, node.y) {
            (Some(x), Some(y)) => Some(Point::new(x, y)),
            (None, None) => None,
            (Some(_), None) => return Err(Error::parse(format!("{path}.y"), "missing y coordinate")),
            (None, Some(_)) => return Err(Error::parse(format!("{path}.x"), "missing x coordinate")),
        };
        slots[node.id] = Some(point);
    }
    Ok(slots.into_iter().map(|s| s.expect("ids form a permutation")).collect())
}

fn flatten_dist(doc: DistDoc, n: usize) -> Result<Vec<f64>> {
    let flat = match doc {
        DistDoc::Rows(rows) => {
            if rows.len() != n {
                return Err(Error::parse("dist", format!("expected {n} rows, got {}", rows.len())));
            }
            let mut flat = Vec::with_capacity(n * n);
            for (i, row) in rows.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::parse(
                        format!("dist[{i}]"),
                        format!("expected {n} entries, got {}", row.len()),
                    ));
                }
                flat.extend(row);
            }
            flat
        }
        DistDoc::Flat(flat) => {
            if flat.len() != n * n {
                return Err(Error::parse(
                    "dist",
                    format!("expected {} entries, got {}", n * n, flat.len()),
                ));
            }
            flat
        }
    };
    for (idx, &d) in flat.iter().enumerate() {
        if !(d >= 0.0) {
            return Err(Error::parse(
                format!("dist[{}][{}]", idx / n, idx % n),
                format!("distance must be nonnegative, got {d}"),
            ));
        }
    }
    Ok(flat)
}

/// Decodes an instance document.
pub fn load(bytes: &[u8]) -> Result<Instance> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let doc: InstanceDoc = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        // serde reports a missing field at its parent; name the field itself.
        let msg = inner.to_string();
        let path = match msg.strip_prefix("missing field `").and_then(|s| s.split('`').next()) {
            Some(field) if path == "." => field.to_string(),
            Some(field) => format!("{path}.{field}"),
            None => path,
        };
        Error::parse(path, msg)
    })?;

    let n_targets = doc.targets.len();
    let n_chargers = doc.chargers.len();
    let mut points = order_nodes(doc.targets, "targets")?;
    points.extend(order_nodes(doc.chargers, "chargers")?);
    let fleet = Fleet {
        sensors: doc.sensors,
        speed: doc.speed,
        sweep_period: doc.sweep_period,
        charge_period: doc.charge_period,
    };
    let coords: Option<Vec<Point>> = points.iter().copied().collect();

    match (doc.dist, coords) {
        (Some(dist), coords) => {
            let flat = flatten_dist(dist, n_targets + n_chargers)?;
            let inst = Instance::with_matrix(n_targets, n_chargers, flat, fleet)?;
            match coords {
                Some(c) if !c.is_empty() => inst.with_coords(c),
                _ => Ok(inst),
            }
        }
        (None, Some(coords)) => {
            let (t, c) = coords.split_at(n_targets);
            Ok(Instance::euclidean(t, c, fleet))
        }
        (None, None) => Err(Error::parse("dist", "required when nodes have no coordinates")),
    }
}

/// Encodes an instance. Distances derived from coordinates are omitted and
/// recomputed on load; explicit matrices are written in full precision.
pub fn save(inst: &Instance) -> Vec<u8> {
    let coords = inst.coords();
    let node = |i: usize, flat: usize| NodeDoc {
        id: i,
        x: coords.map(|c| c[flat].x),
        y: coords.map(|c| c[flat].y),
    };
    let n = inst.n_nodes();
    let doc = InstanceDoc {
        targets: (0..inst.n_targets()).map(|i| node(i, i)).collect(),
        chargers: (0..inst.n_chargers()).map(|c| node(c, inst.charger_node(c))).collect(),
        dist: inst.has_explicit_dist().then(|| {
            DistDoc::Rows(inst.raw_dist().chunks(n.max(1)).map(|r| r.to_vec()).collect())
        }),
        speed: inst.speed(),
        sweep_period: inst.sweep_period(),
        charge_period: inst.charge_period(),
        sensors: inst.sensors(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("instance documents always serialize");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::NodeId;

    #[test]
    fn coordinate_mode_derives_euclidean() {
        let doc = br#"{
            "targets": [{"id": 0, "x": 3.0, "y": 0.0}, {"id": 1, "x": 3.0, "y": 4.0}],
            "chargers": [{"id": 0, "x": 0.0, "y": 0.0}],
            "speed": 1.0, "sweep_period": 12.0, "charge_period": 12.0, "sensors": 1
        }"#;
        let inst = load(doc).unwrap();
        assert_eq!(inst.dist(NodeId::Charger(0), NodeId::Target(0)), 3.0);
        assert_eq!(inst.dist(NodeId::Charger(0), NodeId::Target(1)), 5.0);
        assert_eq!(inst.dist(NodeId::Target(0), NodeId::Target(1)), 4.0);
    }

    #[test]
    fn missing_speed_names_field() {
        let doc = br#"{"targets": [{"id":0}], "chargers": [{"id":0}], "dist": [[0,1],[1,0]],
                       "sweep_period": 1, "charge_period": 1, "sensors": 1}"#;
        match load(doc) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "speed"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_distance_rejected() {
        let doc = br#"{"targets": [{"id":0}], "chargers": [{"id":0}], "dist": [[0,-1],[1,0]],
                       "speed": 1, "sweep_period": 1, "charge_period": 1, "sensors": 1}"#;
        match load(doc) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "dist[0][1]"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn nested_path_reported() {
        let doc = br#"{"targets": [{"id":0, "x": "a", "y": 1}], "chargers": [{"id":0}],
                       "speed": 1, "sweep_period": 1, "charge_period": 1, "sensors": 1}"#;
        match load(doc) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "targets[0].x"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ids_reorder_nodes() {
        let doc = br#"{"targets": [{"id":1, "x": 5, "y": 0}, {"id":0, "x": 1, "y": 0}],
                       "chargers": [{"id":0, "x": 0, "y": 0}],
                       "speed": 1, "sweep_period": 1, "charge_period": 1, "sensors": 1}"#;
        let inst = load(doc).unwrap();
        assert_eq!(inst.dist(NodeId::Charger(0), NodeId::Target(0)), 1.0);
        let dup = br#"{"targets": [{"id":0}, {"id":0}], "chargers": [{"id":0}], "dist": [],
                       "speed": 1, "sweep_period": 1, "charge_period": 1, "sensors": 1}"#;
        assert!(matches!(load(dup), Err(Error::Parse { .. })));
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let dist = vec![0.0, 0.1 + 0.2, 1.0 / 3.0, 0.1 + 0.2, 0.0, 2.0f64.sqrt(), 1.0 / 3.0, 2.0f64.sqrt(), 0.0];
        let inst = Instance::with_matrix(
            2,
            1,
            dist,
            Fleet { sensors: 2, speed: 0.7, sweep_period: 3.0, charge_period: 9.0 },
        )
        .unwrap();
        let back = load(&save(&inst)).unwrap();
        assert_eq!(back, inst);
        let flat = br#"{"targets": [{"id":0}], "chargers": [{"id":0}], "dist": [0, 2, 2, 0],
                       "speed": 1, "sweep_period": 1, "charge_period": 1, "sensors": 1}"#;
        assert_eq!(load(flat).unwrap().dist(NodeId::Target(0), NodeId::Charger(0)), 2.0);
    }
}
