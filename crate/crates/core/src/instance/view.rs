use std::collections::BTreeSet;

use super::{Instance, NodeId};
use crate::error::{Error, Result};

/// The subgraph induced by all chargers plus a subset of targets.
///
/// Distances are read straight from the parent instance, which is never
/// modified.
#[derive(Clone, Debug)]
pub struct View<'a> {
    inst: &'a Instance,
    targets: Vec<usize>,
}

impl<'a> View<'a> {
    pub fn full(inst: &'a Instance) -> Self {
        View { inst, targets: (0..inst.n_targets()).collect() }
    }

    pub fn induced<I>(inst: &'a Instance, targets: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let set: BTreeSet<usize> = targets.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&t| t >= inst.n_targets()) {
            return Err(Error::Input(format!(
                "unknown target {bad} (instance has {} targets)",
                inst.n_targets()
            )));
        }
        Ok(View { inst, targets: set.into_iter().collect() })
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    /// Target ids present in the view, ascending.
    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn chargers(&self) -> std::ops::Range<usize> {
        0..self.inst.n_chargers()
    }

    pub fn contains_target(&self, t: usize) -> bool {
        self.targets.binary_search(&t).is_ok()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        match node {
            NodeId::Target(t) => self.contains_target(t),
            NodeId::Charger(c) => c < self.inst.n_chargers(),
        }
    }

    pub fn dist(&self, a: NodeId, b: NodeId) -> f64 {
        self.inst.dist(a, b)
    }

    /// The view with `removed` targets taken out.
    pub fn without(&self, removed: &[usize]) -> View<'a> {
        let removed: BTreeSet<usize> = removed.iter().copied().collect();
        View {
            inst: self.inst,
            targets: self.targets.iter().copied().filter(|t| !removed.contains(t)).collect(),
        }
    }
}

/// Residual graph over `uncovered` targets and all chargers.
pub fn induced_subgraph<'a>(inst: &'a Instance, uncovered: &BTreeSet<usize>) -> Result<View<'a>> {
    View::induced(inst, uncovered.iter().copied())
}
