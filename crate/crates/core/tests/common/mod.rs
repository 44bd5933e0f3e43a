//! Brute-force references written independently of the library's search code.
#![allow(dead_code)]

use csc::instance::{Instance, NodeId};

/// Best prize over every ordering of every target subset for a walk from
/// charger `s` to charger `t` within `budget`. Orders are extended only while
/// the open prefix fits, which is safe because prefixes only grow.
pub fn enumerate_walk(inst: &Instance, pool: &[usize], s: usize, t: usize, budget: f64) -> usize {
    fn go(inst: &Instance, pool: &[usize], used: &mut Vec<bool>, last: NodeId, len: f64, t: NodeId, budget: f64, depth: usize, best: &mut usize) {
        if len + inst.dist(last, t) <= budget + 1e-9 {
            *best = (*best).max(depth);
        }
        for i in 0..pool.len() {
            if used[i] {
                continue;
            }
            let next = NodeId::Target(pool[i]);
            let step = len + inst.dist(last, next);
            if step > budget + 1e-9 {
                continue;
            }
            used[i] = true;
            go(inst, pool, used, next, step, t, budget, depth + 1, best);
            used[i] = false;
        }
    }
    let s = NodeId::Charger(s);
    let t = NodeId::Charger(t);
    if inst.dist(s, t) > budget + 1e-9 {
        return 0;
    }
    let mut best = 0;
    go(inst, pool, &mut vec![false; pool.len()], s, 0.0, t, budget, 0, &mut best);
    best
}

/// Shortest walk from charger `s` to charger `t` through every target subset
/// (bit `i` = target `i`), by plain dynamic programming.
pub fn shortest_through(inst: &Instance, s: usize, t: usize) -> Vec<f64> {
    let n = inst.n_targets();
    let (s, t) = (NodeId::Charger(s), NodeId::Charger(t));
    let tg = NodeId::Target;
    let mut end = vec![vec![f64::INFINITY; n]; 1 << n];
    for j in 0..n {
        end[1 << j][j] = inst.dist(s, tg(j));
    }
    for set in 1usize..1 << n {
        for j in 0..n {
            let here = end[set][j];
            if !here.is_finite() {
                continue;
            }
            for k in (0..n).filter(|k| set >> k & 1 == 0) {
                let v = here + inst.dist(tg(j), tg(k));
                let slot = &mut end[set | 1 << k][k];
                if v < *slot {
                    *slot = v;
                }
            }
        }
    }
    (0..1usize << n)
        .map(|set| {
            if set == 0 {
                inst.dist(s, t)
            } else {
                (0..n).filter(|j| set >> j & 1 == 1).map(|j| end[set][j] + inst.dist(tg(j), t)).fold(f64::INFINITY, f64::min)
            }
        })
        .collect()
}

/// Most targets two disjoint `s`-`t` walks within `l1` and `l2` can visit.
pub fn best_two_walks(inst: &Instance, s: usize, t: usize, l1: f64, l2: f64) -> usize {
    let walks = shortest_through(inst, s, t);
    let n = inst.n_targets();
    let mut best = 0;
    for set in 0usize..1 << n {
        let mut sub = set;
        loop {
            if walks[sub] <= l1 + 1e-9 && walks[set ^ sub] <= l2 + 1e-9 {
                best = best.max(set.count_ones() as usize);
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & set;
        }
    }
    best
}
