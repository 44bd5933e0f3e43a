use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{KernelConfig, PathProblem};

/// Cheapest-detour insertion seeded from every reachable target, then
/// `heuristic_restarts` randomized runs that pick among the three cheapest
/// insertions. Deterministic for a given `rng_seed`.
pub(crate) fn insertion(p: &PathProblem, cfg: &KernelConfig) -> Vec<usize> {
    let mut best = Vec::new();
    for first in 0..p.n {
        keep_better(&mut best, build(p, first, None));
    }
    if p.n > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        for _ in 0..cfg.heuristic_restarts {
            let first = rng.gen_range(0..p.n);
            let walk = build(p, first, Some(&mut rng));
            keep_better(&mut best, walk);
        }
    }
    best
}

/// More targets wins; equal counts keep the lexicographically smaller walk.
fn keep_better(best: &mut Vec<usize>, cand: Vec<usize>) {
    if cand.len() > best.len() || (cand.len() == best.len() && cand < *best) {
        *best = cand;
    }
}

fn build(p: &PathProblem, first: usize, mut rng: Option<&mut ChaCha8Rng>) -> Vec<usize> {
    let mut seq = vec![first];
    if !p.fits(p.length(&seq)) {
        return Vec::new();
    }
    let mut closed = vec![false; p.n];
    closed[first] = true;
    loop {
        let len = p.length(&seq);
        let mut options: Vec<(f64, usize, usize)> = Vec::new();
        for u in (0..p.n).filter(|&u| !closed[u]) {
            let (delta, pos) = (0..=seq.len())
                .map(|pos| {
                    let prev = if pos == 0 { p.start() } else { seq[pos - 1] };
                    let next = if pos == seq.len() { p.end() } else { seq[pos] };
                    (p.d(prev, u) + p.d(u, next) - p.d(prev, next), pos)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("at least one position");
            if p.fits(len + delta) {
                options.push((delta, u, pos));
            }
        }
        if options.is_empty() {
            return seq;
        }
        options.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let pick = match rng.as_deref_mut() {
            Some(r) => r.gen_range(0..options.len().min(3)),
            None => 0,
        };
        let (_, u, pos) = options[pick];
        closed[u] = true;
        seq.insert(pos, u);
        if !p.fits(p.length(&seq)) {
            seq.remove(pos);
        }
    }
}
