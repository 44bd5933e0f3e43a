//! Budgeted path subroutines used by the greedy solvers.
//!
//! Every kernel sees a [`View`] (the residual targets plus all chargers) and
//! returns walks over distinct targets whose recomputed length stays within
//! the budget plus [`EPS_LEN`]. Targets whose out-and-back detour alone
//! exceeds the budget are dropped before any search, so the exact node limit
//! counts only reachable targets.

mod bound;
mod exact;
mod heuristic;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{View, EPS_LEN};
use crate::route::Segment;

pub use bound::{approximation_bound, rho};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelConfig {
    pub mode: Mode,
    /// Largest number of reachable targets exact search accepts.
    pub exact_node_limit: usize,
    pub heuristic_restarts: usize,
    pub rng_seed: u64,
}

/// Exact team search enumerates `3^n` subset pairs; keep `n` small.
pub const MAX_EXACT_NODE_LIMIT: usize = 16;

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { mode: Mode::Exact, exact_node_limit: 14, heuristic_restarts: 16, rng_seed: 0 }
    }
}

impl KernelConfig {
    pub fn exact() -> Self {
        KernelConfig::default()
    }

    pub fn heuristic(rng_seed: u64) -> Self {
        KernelConfig { mode: Mode::Heuristic, rng_seed, ..KernelConfig::default() }
    }

    pub fn check(&self) -> Result<()> {
        if !(2..=MAX_EXACT_NODE_LIMIT).contains(&self.exact_node_limit) {
            return Err(Error::Input(format!(
                "exact_node_limit must lie in 2..={MAX_EXACT_NODE_LIMIT}, got {}",
                self.exact_node_limit
            )));
        }
        if self.heuristic_restarts == 0 {
            return Err(Error::Input("heuristic_restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Walks returned by a kernel. `prize` counts distinct targets over all
/// segments.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelResult {
    pub segments: Vec<Segment>,
    pub prize: usize,
    /// Produced by exhaustive search.
    pub optimal: bool,
}

impl KernelResult {
    fn new(segments: Vec<Segment>, optimal: bool) -> Self {
        let prize = segments.iter().flat_map(|s| s.via.iter()).collect::<BTreeSet<_>>().len();
        KernelResult { segments, prize, optimal }
    }

    pub fn targets(&self) -> BTreeSet<usize> {
        self.segments.iter().flat_map(|s| s.via.iter().copied()).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length).sum()
    }

    /// The single segment of a rooted or s-t result.
    pub fn segment(&self) -> &Segment {
        &self.segments[0]
    }
}

/// Reachable targets and a dense local distance matrix. Local indices
/// `0..n` are targets in ascending id order, `n` is the start charger and
/// `n + 1` the end charger.
pub(crate) struct PathProblem {
    pub ids: Vec<usize>,
    pub n: usize,
    d: Vec<f64>,
    pub budget: f64,
}

impl PathProblem {
    fn new(view: &View<'_>, start: usize, end: usize, budget: f64) -> Self {
        let inst = view.instance();
        let (s, e) = (inst.charger_node(start), inst.charger_node(end));
        let ids: Vec<usize> = view
            .targets()
            .iter()
            .copied()
            .filter(|&t| inst.d(s, t) + inst.d(t, e) <= budget + EPS_LEN)
            .collect();
        let n = ids.len();
        let flat: Vec<usize> = ids.iter().copied().chain([s, e]).collect();
        let mut d = vec![0.0; (n + 2) * (n + 2)];
        for (i, &a) in flat.iter().enumerate() {
            for (j, &b) in flat.iter().enumerate() {
                d[i * (n + 2) + j] = inst.d(a, b);
            }
        }
        PathProblem { ids, n, d, budget }
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i * (self.n + 2) + j]
    }

    pub fn start(&self) -> usize {
        self.n
    }

    pub fn end(&self) -> usize {
        self.n + 1
    }

    /// Length of `start -> seq -> end`, summed in walk order.
    pub fn length(&self, seq: &[usize]) -> f64 {
        let mut prev = self.start();
        let mut total = 0.0;
        for &u in seq {
            total += self.d(prev, u);
            prev = u;
        }
        total + self.d(prev, self.end())
    }

    pub fn fits(&self, len: f64) -> bool {
        len <= self.budget + EPS_LEN
    }

    /// The same problem over a subset of local targets (kept in order).
    pub fn restrict(&self, keep: &[usize]) -> PathProblem {
        let n = keep.len();
        let flat: Vec<usize> = keep.iter().copied().chain([self.start(), self.end()]).collect();
        let mut d = vec![0.0; (n + 2) * (n + 2)];
        for (i, &a) in flat.iter().enumerate() {
            for (j, &b) in flat.iter().enumerate() {
                d[i * (n + 2) + j] = self.d(a, b);
            }
        }
        PathProblem { ids: keep.iter().map(|&u| self.ids[u]).collect(), n, d, budget: self.budget }
    }

    fn global(&self, seq: &[usize]) -> Vec<usize> {
        seq.iter().map(|&u| self.ids[u]).collect()
    }
}

fn check_budget(budget: f64) -> Result<()> {
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::Input(format!("budget must be nonnegative, got {budget}")));
    }
    Ok(())
}

fn check_charger(view: &View<'_>, c: usize) -> Result<()> {
    if c >= view.instance().n_chargers() {
        return Err(Error::Input(format!("charger {c} not in instance")));
    }
    Ok(())
}

/// Best walk `start -> ... -> end` within `budget` over the view's targets.
fn best_path(
    view: &View<'_>,
    start: usize,
    end: usize,
    budget: f64,
    cfg: &KernelConfig,
) -> Result<KernelResult> {
    let problem = PathProblem::new(view, start, end, budget);
    let (seq, optimal) = match cfg.mode {
        Mode::Exact => {
            if problem.n > cfg.exact_node_limit {
                return Err(Error::ExactLimit { limit: cfg.exact_node_limit, got: problem.n });
            }
            (exact::branch_and_bound(&problem), true)
        }
        Mode::Heuristic => (heuristic::insertion(&problem, cfg), false),
    };
    let segment = Segment::new(view.instance(), start, problem.global(&seq), end);
    debug_assert!(segment.length <= budget + EPS_LEN);
    Ok(KernelResult::new(vec![segment], optimal))
}

/// Closed walk at `root` of length at most `budget`, maximizing distinct
/// targets visited.
pub fn rooted_orienteering(
    view: &View<'_>,
    root: usize,
    budget: f64,
    cfg: &KernelConfig,
) -> Result<KernelResult> {
    check_budget(budget)?;
    check_charger(view, root)?;
    best_path(view, root, root, budget, cfg)
}

/// Walk `s -> t` of length at most `budget`, maximizing distinct targets.
pub fn st_orienteering(
    view: &View<'_>,
    s: usize,
    t: usize,
    budget: f64,
    cfg: &KernelConfig,
) -> Result<KernelResult> {
    check_budget(budget)?;
    check_charger(view, s)?;
    check_charger(view, t)?;
    if s == t {
        return Err(Error::Contract("s-t orienteering needs distinct endpoints".into()));
    }
    let direct = view.instance().d(view.instance().charger_node(s), view.instance().charger_node(t));
    if budget < direct - EPS_LEN {
        return Err(Error::Infeasible(format!(
            "budget {budget} is below the charger distance {direct}"
        )));
    }
    best_path(view, s, t, budget, cfg)
}

/// `count` closed walks at `root`, each within `budget`, over disjoint
/// targets, maximizing the total. Always returns exactly `count` segments;
/// unused walks are empty.
pub fn rooted_team_orienteering(
    view: &View<'_>,
    root: usize,
    budget: f64,
    count: usize,
    cfg: &KernelConfig,
) -> Result<KernelResult> {
    check_budget(budget)?;
    check_charger(view, root)?;
    if count == 0 {
        return Err(Error::Input("team orienteering needs at least one walk".into()));
    }
    if count == 1 {
        return rooted_orienteering(view, root, budget, cfg);
    }
    let inst = view.instance();
    match cfg.mode {
        Mode::Exact => {
            let problem = PathProblem::new(view, root, root, budget);
            if problem.n > cfg.exact_node_limit {
                return Err(Error::ExactLimit { limit: cfg.exact_node_limit, got: problem.n });
            }
            let mut segments: Vec<Segment> = exact::team(&problem, count)
                .into_iter()
                .map(|block| Segment::new(inst, root, problem.global(&block), root))
                .collect();
            segments.resize_with(count, || Segment::direct(inst, root, root));
            Ok(KernelResult::new(segments, true))
        }
        Mode::Heuristic => {
            let mut residual = view.clone();
            let mut segments = Vec::with_capacity(count);
            for i in 0..count {
                let walk_cfg = KernelConfig { rng_seed: cfg.rng_seed.wrapping_add(i as u64), ..*cfg };
                let walk = rooted_orienteering(&residual, root, budget, &walk_cfg)?;
                let seg = walk.segments.into_iter().next().expect("one segment");
                residual = residual.without(&seg.via);
                segments.push(seg);
            }
            Ok(KernelResult::new(segments, false))
        }
    }
}

/// Two-phase mutual loop: the best `s -> t` walk within `l1`, then the best
/// `s -> t` walk within `l2` over the remaining targets, run backwards.
/// Result segments are `s -> t` then `t -> s`.
pub fn st_loop(
    view: &View<'_>,
    s: usize,
    t: usize,
    l1: f64,
    l2: f64,
    cfg: &KernelConfig,
) -> Result<KernelResult> {
    let first = st_orienteering(view, s, t, l1, cfg)?;
    let p1 = first.segments.into_iter().next().expect("one segment");
    let residual = view.without(&p1.via);
    let second = st_orienteering(&residual, s, t, l2, cfg)?;
    let p2 = second.segment().reversed();
    Ok(KernelResult::new(vec![p1, p2], first.optimal && second.optimal))
}
