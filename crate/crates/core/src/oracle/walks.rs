use crate::instance::{Instance, NodeId};

const NO_PARENT: u8 = u8::MAX;

/// Shortest walk from one charger through every subset of targets to another
/// charger, by dynamic programming over (visited set, last target).
///
/// Subsets are bitmasks over local target positions `0..n`.
pub(super) struct Walks {
    n: usize,
    targets: Vec<usize>,
    /// Predecessor of `j` on the best walk through `set` ending at `j`,
    /// stored at `set * n + j`.
    parent: Vec<u8>,
    closed: Vec<f64>,
    exit: Vec<u8>,
}

impl Walks {
    pub fn new(inst: &Instance, targets: &[usize], start: usize, end: usize) -> Self {
        let n = targets.len();
        let size = 1usize << n;
        let s = NodeId::Charger(start);
        let e = NodeId::Charger(end);
        let node = |j: usize| NodeId::Target(targets[j]);
        // Shortest start -> (all of set) ending at `j`, at `set * n + j`.
        let mut open = vec![f64::INFINITY; size * n];
        let mut parent = vec![NO_PARENT; size * n];
        for j in 0..n {
            open[(1 << j) * n + j] = inst.dist(s, node(j));
        }
        for set in 1..size {
            for j in 0..n {
                let here = open[set * n + j];
                if here.is_infinite() {
                    continue;
                }
                for k in 0..n {
                    let bit = 1 << k;
                    if set & bit != 0 {
                        continue;
                    }
                    let slot = (set | bit) * n + k;
                    let via = here + inst.dist(node(j), node(k));
                    if via < open[slot] {
                        open[slot] = via;
                        parent[slot] = j as u8;
                    }
                }
            }
        }
        let mut closed = vec![f64::INFINITY; size];
        let mut exit = vec![NO_PARENT; size];
        closed[0] = inst.dist(s, e);
        for set in 1..size {
            for j in 0..n {
                if set & (1 << j) == 0 {
                    continue;
                }
                let total = open[set * n + j] + inst.dist(node(j), e);
                if total < closed[set] {
                    closed[set] = total;
                    exit[set] = j as u8;
                }
            }
        }
        Walks { n, targets: targets.to_vec(), parent, closed, exit }
    }

    pub fn len(&self, set: usize) -> f64 {
        self.closed[set]
    }

    /// Target ids of the shortest walk through `set`, in visiting order.
    pub fn order(&self, set: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if set == 0 {
            return out;
        }
        let mut set = set;
        let mut j = self.exit[set];
        while j != NO_PARENT {
            out.push(self.targets[j as usize]);
            let prev = self.parent[set * self.n + j as usize];
            set &= !(1 << j);
            j = prev;
        }
        out.reverse();
        out
    }
}
