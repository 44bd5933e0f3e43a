//! Min-plus dynamic programs over subsets of at most a dozen targets.

pub(super) const INF: f64 = f64::INFINITY;

/// Cheapest split of every set into blocks with the given per-block prices
/// (`INF` marks a forbidden block). Blocks are nonempty.
pub(super) struct Partition {
    best: Vec<f64>,
    pick: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, price: &[f64], work: &mut u64) -> Self {
        let size = 1usize << n;
        let mut best = vec![INF; size];
        let mut pick = vec![0; size];
        best[0] = 0.0;
        for set in 1..size {
            // The block holding the lowest member is chosen last, which makes
            // every partition reachable exactly once.
            let low = set & set.wrapping_neg();
            let rest = set ^ low;
            let mut sub = rest;
            loop {
                let block = sub | low;
                *work += 1;
                let total = price[block] + best[set ^ block];
                if total < best[set] {
                    best[set] = total;
                    pick[set] = block;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        Partition { best, pick }
    }

    pub fn cost(&self, set: usize) -> f64 {
        self.best[set]
    }

    pub fn costs(&self) -> &[f64] {
        &self.best
    }

    pub fn blocks(&self, mut set: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while set != 0 {
            let b = self.pick[set];
            out.push(b);
            set ^= b;
        }
        out
    }
}

/// For every set, the cheapest `left[x] + right[set \ x]` over all `x ⊆ set`,
/// with the chosen `x`.
pub(super) fn best_split(n: usize, left: &[f64], right: &[f64], work: &mut u64) -> (Vec<f64>, Vec<usize>) {
    let size = 1usize << n;
    let mut best = vec![INF; size];
    let mut pick = vec![0; size];
    for set in 0..size {
        let mut sub = set;
        loop {
            *work += 1;
            let total = left[sub] + right[set ^ sub];
            if total < best[set] {
                best[set] = total;
                pick[set] = sub;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & set;
        }
    }
    (best, pick)
}

/// Paths between the two chargers covering each set, where the number of
/// paths must be even and at least two. Missing paths are padded with the
/// direct charger-to-charger walk.
pub(super) struct EvenPaths {
    /// `dp[state][set]` with state 0 = no path, 1 = odd count, 2 = even >= 2.
    dp: [Vec<f64>; 3],
    pick: [Vec<(usize, u8)>; 3],
    direct: f64,
}

impl EvenPaths {
    pub fn new(n: usize, price: &[f64], direct: f64, work: &mut u64) -> Self {
        let size = 1usize << n;
        let mut dp = [vec![INF; size], vec![INF; size], vec![INF; size]];
        let mut pick = [vec![(0, 0); size], vec![(0, 0); size], vec![(0, 0); size]];
        dp[0][0] = 0.0;
        for set in 1..size {
            let low = set & set.wrapping_neg();
            let rest = set ^ low;
            let mut sub = rest;
            loop {
                let block = sub | low;
                *work += 1;
                if price[block].is_finite() {
                    for prev in 0..3u8 {
                        let next = if prev == 1 { 2 } else { 1 };
                        let total = dp[prev as usize][set ^ block] + price[block];
                        if total < dp[next][set] {
                            dp[next][set] = total;
                            pick[next][set] = (block, prev);
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        EvenPaths { dp, pick, direct }
    }

    fn finish(&self, set: usize) -> (f64, usize, usize) {
        [(0, 2), (1, 1), (2, 0)]
            .into_iter()
            .map(|(state, pad)| (self.dp[state][set] + pad as f64 * self.direct, state, pad))
            .fold((INF, 0, 0), |acc, x| if x.0 < acc.0 { x } else { acc })
    }

    pub fn costs(&self) -> Vec<f64> {
        (0..self.dp[0].len()).map(|s| self.finish(s).0).collect()
    }

    /// Target blocks of the chosen paths plus the number of empty paths.
    pub fn blocks(&self, mut set: usize) -> (Vec<usize>, usize) {
        let (_, mut state, pad) = self.finish(set);
        let mut out = Vec::new();
        while state != 0 {
            let (block, prev) = self.pick[state][set];
            out.push(block);
            set ^= block;
            state = prev as usize;
        }
        (out, pad)
    }
}

pub(super) fn members(set: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&i| set >> i & 1 == 1)
}

/// Larger sets first, then the lexicographically smaller member list.
pub(super) fn better(a: usize, b: usize) -> bool {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    if ca != cb {
        return ca > cb;
    }
    members(a).lt(members(b))
}
