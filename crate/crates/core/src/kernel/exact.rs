use std::collections::HashMap;

use super::PathProblem;

/// Longest feasible target sequence, lexicographically smallest among ties.
///
/// Depth-first in ascending local index order, so sequences of equal length
/// are met in lexicographic order and only strict improvements replace the
/// incumbent. Two prunes:
/// * bound: current length plus the number of unvisited targets whose detour
///   to the end still fits cannot beat the incumbent;
/// * dominance: an earlier prefix reached the same (visited set, last node)
///   no longer than this one.
pub(crate) fn branch_and_bound(p: &PathProblem) -> Vec<usize> {
    let mut search = Search { p, best: Vec::new(), seq: Vec::new(), memo: HashMap::new() };
    search.dfs(p.start(), 0, 0.0);
    search.best
}

struct Search<'p> {
    p: &'p PathProblem,
    best: Vec<usize>,
    seq: Vec<usize>,
    memo: HashMap<(u64, usize), f64>,
}

impl Search<'_> {
    fn dfs(&mut self, last: usize, mask: u64, len: f64) {
        let p = self.p;
        let open: Vec<usize> = (0..p.n)
            .filter(|&u| mask & (1 << u) == 0 && p.fits(len + p.d(last, u) + p.d(u, p.end())))
            .collect();
        if self.seq.len() + open.len() <= self.best.len() {
            return;
        }
        for u in open {
            let next_len = len + p.d(last, u);
            let next_mask = mask | (1 << u);
            match self.memo.get(&(next_mask, u)) {
                Some(&seen) if next_len >= seen => continue,
                _ => {
                    self.memo.insert((next_mask, u), next_len);
                }
            }
            self.seq.push(u);
            if self.seq.len() > self.best.len() {
                self.best.clone_from(&self.seq);
            }
            self.dfs(u, next_mask, next_len);
            self.seq.pop();
        }
    }
}

/// Up to `count` disjoint closed walks at the root (start and end coincide).
///
/// Held-Karp gives the shortest tour through every target subset; a subset
/// DP then finds the fewest feasible blocks covering each set. Among the
/// largest sets coverable by `count` blocks the lexicographically smallest
/// is chosen, split deterministically, and each block ordered by
/// [`branch_and_bound`] restricted to it.
pub(crate) fn team(p: &PathProblem, count: usize) -> Vec<Vec<usize>> {
    let n = p.n;
    let full = 1usize << n;
    let tour = tour_lengths(p);
    let feasible: Vec<bool> = tour.iter().map(|&l| p.fits(l)).collect();

    const NONE: usize = usize::MAX;
    let mut blocks = vec![NONE; full];
    blocks[0] = 0;
    for set in 1..full {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
        // Blocks holding the lowest member: `low | sub` for every sub of `rest`.
        let mut sub = rest;
        loop {
            let block = low | sub;
            if feasible[block] && blocks[set ^ block] != NONE {
                blocks[set] = blocks[set].min(blocks[set ^ block] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    let members = |set: usize| (0..n).filter(move |&u| set & (1 << u) != 0);
    let chosen = (0..full)
        .filter(|&s| blocks[s] <= count)
        .max_by(|&x, &y| {
            x.count_ones().cmp(&y.count_ones()).then_with(|| members(y).cmp(members(x)))
        })
        .unwrap_or(0);

    let mut out = Vec::new();
    let mut set = chosen;
    while set != 0 {
        let low = set & set.wrapping_neg();
        let rest = set ^ low;
        let mut sub = rest;
        let block = loop {
            let block = low | sub;
            if feasible[block] && blocks[set ^ block] != NONE && blocks[set ^ block] + 1 == blocks[set] {
                break block;
            }
            debug_assert!(sub != 0, "block decomposition must exist");
            sub = (sub - 1) & rest;
        };
        out.push(order_block(p, block));
        set ^= block;
    }
    out
}

/// Shortest closed tour from the root through each subset; infinite where
/// no prefix fits the budget.
fn tour_lengths(p: &PathProblem) -> Vec<f64> {
    let n = p.n;
    let full = 1usize << n;
    // path[set * n + j]: shortest root -> set -> j ending at j in set.
    let mut path = vec![f64::INFINITY; full * n.max(1)];
    for j in 0..n {
        path[(1 << j) * n + j] = p.d(p.start(), j);
    }
    for set in 1..full {
        for j in 0..n {
            let cur = path[set * n + j];
            if set & (1 << j) == 0 || !cur.is_finite() || !p.fits(cur) {
                continue;
            }
            for k in 0..n {
                if set & (1 << k) == 0 {
                    let next = (set | (1 << k)) * n + k;
                    let cand = cur + p.d(j, k);
                    if cand < path[next] {
                        path[next] = cand;
                    }
                }
            }
        }
    }
    let mut tour = vec![f64::INFINITY; full];
    tour[0] = 0.0;
    for (set, slot) in tour.iter_mut().enumerate().skip(1) {
        for j in 0..n {
            if set & (1 << j) != 0 {
                *slot = slot.min(path[set * n + j] + p.d(j, p.end()));
            }
        }
    }
    tour
}

fn order_block(p: &PathProblem, block: usize) -> Vec<usize> {
    let keep: Vec<usize> = (0..p.n).filter(|&u| block & (1 << u) != 0).collect();
    let sub = p.restrict(&keep);
    let seq = branch_and_bound(&sub);
    seq.into_iter().map(|u| keep[u]).collect()
}
