//! Exact maximum-weight clique by branch and bound.
//!
//! Vertices are branched on in increasing index order and bounded with a greedy
//! colouring (each colour class contributes its heaviest vertex). Only strict
//! improvements replace the incumbent, so the reported clique is the
//! lexicographically least optimum.

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Bits {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

/// Undirected graph with vertex weights.
pub struct WeightedGraph {
    adj: Vec<Bits>,
    weights: Vec<u64>,
}

impl WeightedGraph {
    pub fn new(weights: Vec<u64>) -> WeightedGraph {
        let n = weights.len();
        WeightedGraph {
            adj: vec![Bits::empty(n); n],
            weights,
        }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a].insert(b);
            self.adj[b].insert(a);
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Heaviest clique and its weight; vertices in increasing order.
    pub fn max_weight_clique(&self) -> (u64, Vec<usize>) {
        let mut state = State {
            graph: self,
            best: 0,
            best_set: Vec::new(),
        };
        let mut current = Vec::new();
        state.expand(&mut current, 0, Bits::full(self.len()));
        (state.best, state.best_set)
    }

    // Sum over greedy colour classes of the heaviest member.
    fn colour_bound(&self, cand: &Bits) -> u64 {
        let mut uncoloured = cand.clone();
        let mut bound = 0;
        while !uncoloured.is_empty() {
            let mut open = uncoloured.clone();
            let mut heaviest = 0;
            while let Some(v) = open.first() {
                heaviest = heaviest.max(self.weights[v]);
                uncoloured.remove(v);
                open.remove(v);
                open.and_not(&self.adj[v]);
            }
            bound += heaviest;
        }
        bound
    }
}

struct State<'g> {
    graph: &'g WeightedGraph,
    best: u64,
    best_set: Vec<usize>,
}

impl State<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, weight: u64, mut cand: Bits) {
        if weight > self.best {
            self.best = weight;
            self.best_set = current.clone();
        }
        while let Some(v) = cand.first() {
            if weight + self.graph.colour_bound(&cand) <= self.best {
                return;
            }
            cand.remove(v);
            current.push(v);
            let next = cand.and(&self.graph.adj[v]);
            self.expand(current, weight + self.graph.weights[v], next);
            current.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // every vertex subset, checked for pairwise adjacency
    fn brute_force(n: usize, edges: &[(usize, usize)], w: &[u64]) -> (u64, Vec<usize>) {
        let adj = |a: usize, b: usize| edges.contains(&(a, b)) || edges.contains(&(b, a));
        let mut best = (0u64, Vec::new());
        let mut candidates: Vec<Vec<usize>> = (0u32..1 << n)
            .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
            .collect();
        candidates.sort();
        for set in candidates {
            let ok = set
                .iter()
                .enumerate()
                .all(|(i, &a)| set[i + 1..].iter().all(|&b| adj(a, b)));
            if !ok {
                continue;
            }
            let weight: u64 = set.iter().map(|&v| w[v]).sum();
            if weight > best.0 {
                best = (weight, set);
            }
        }
        best
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=11);
            let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..4)).collect();
            let density = rng.gen_range(0.1..0.9);
            let mut edges = Vec::new();
            let mut g = WeightedGraph::new(w.clone());
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(density) {
                        edges.push((a, b));
                        g.add_edge(a, b);
                    }
                }
            }
            assert_eq!(g.max_weight_clique(), brute_force(n, &edges, &w));
        }
    }

    #[test]
    fn empty_graph() {
        let g = WeightedGraph::new(vec![]);
        assert_eq!(g.max_weight_clique(), (0, vec![]));
        let g = WeightedGraph::new(vec![2, 5, 5]);
        assert_eq!(g.max_weight_clique(), (5, vec![1]));
    }
}
