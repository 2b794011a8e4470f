//! Simple undirected graphs on 0..n with bitset adjacency.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<Vec<u64>>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

fn count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            adj: vec![vec![0; words]; n],
        }
    }

    pub fn from_fn(n: usize, mut edge: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.adj[i][j / 64] |= 1 << (j % 64);
        self.adj[j][i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        bit(&self.adj[i], j)
    }

    pub fn degree(&self, i: usize) -> usize {
        count(&self.adj[i])
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        members(&self.adj[i]).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Induced subgraph on `vertices`, relabelled 0..k in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        Graph::from_fn(vertices.len(), |a, b| self.has_edge(vertices[a], vertices[b]))
    }

    fn full_set(&self) -> Vec<u64> {
        let mut s = vec![0u64; self.words];
        for i in 0..self.n {
            s[i / 64] |= 1 << (i % 64);
        }
        s
    }

    /// All maximal cliques with at least `min_size` vertices, each sorted,
    /// listed in lexicographic order.
    pub fn maximal_cliques(&self, min_size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut r = Vec::new();
        self.bron_kerbosch(&mut r, self.full_set(), vec![0; self.words], min_size, &mut out);
        for c in out.iter_mut() {
            c.sort_unstable();
        }
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: &mut Vec<usize>, p: Vec<u64>, mut x: Vec<u64>, min: usize, out: &mut Vec<Vec<usize>>) {
        if p.iter().all(|&w| w == 0) {
            if x.iter().all(|&w| w == 0) && r.len() >= min && !r.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        if r.len() + count(&p) < min {
            return;
        }
        // Tomita pivot: maximize |P ∩ N(u)|
        let pivot = members(&p)
            .chain(members(&x))
            .max_by_key(|&u| (count(&and(&p, &self.adj[u])), std::cmp::Reverse(u)))
            .expect("P is nonempty");
        let mut p = p;
        let candidates: Vec<usize> = members(&p).filter(|&v| !bit(&self.adj[pivot], v)).collect();
        for v in candidates {
            r.push(v);
            self.bron_kerbosch(r, and(&p, &self.adj[v]), and(&x, &self.adj[v]), min, out);
            r.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }

    /// Whether the given vertices are pairwise adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(a, &u)| vertices[a + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Independence number by branch and bound over at most `budget` search
    /// nodes. Returns `None` when the budget runs out.
    pub fn independence_number(&self, budget: u64) -> Option<usize> {
        // independent sets of G are cliques of the complement
        let comp = Graph::from_fn(self.n, |i, j| !self.has_edge(i, j));
        let mut best = 0;
        let mut nodes = 0u64;
        let ok = comp.max_clique(&mut Vec::new(), comp.full_set(), &mut best, &mut nodes, budget);
        ok.then_some(best)
    }

    fn max_clique(&self, r: &mut Vec<usize>, p: Vec<u64>, best: &mut usize, nodes: &mut u64, budget: u64) -> bool {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        if r.len() > *best {
            *best = r.len();
        }
        // greedy colouring of P bounds the clique that can still be added
        let order: Vec<usize> = members(&p).collect();
        let mut colour_of = vec![0usize; order.len()];
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for (k, &v) in order.iter().enumerate() {
            let slot = classes
                .iter()
                .position(|cls| and(cls, &self.adj[v]).iter().all(|&w| w == 0));
            let slot = match slot {
                Some(s) => s,
                None => {
                    classes.push(vec![0; self.words]);
                    classes.len() - 1
                }
            };
            classes[slot][v / 64] |= 1 << (v % 64);
            colour_of[k] = slot + 1;
        }
        let mut idx: Vec<usize> = (0..order.len()).collect();
        idx.sort_by_key(|&k| std::cmp::Reverse(colour_of[k]));
        let mut p = p;
        for k in idx {
            if r.len() + colour_of[k] <= *best {
                return true;
            }
            let v = order[k];
            r.push(v);
            let ok = self.max_clique(r, and(&p, &self.adj[v]), best, nodes, budget);
            r.pop();
            if !ok {
                return false;
            }
            p[v / 64] &= !(1 << (v % 64));
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_fn(n, |i, j| (j - i) == 1 || (i == 0 && j == n - 1))
    }

    #[test]
    fn pentagon_cliques_and_alpha() {
        let g = cycle(5);
        assert_eq!(g.maximal_cliques(1).len(), 5);
        assert_eq!(g.independence_number(1_000), Some(2));
    }

    #[test]
    fn complete_and_empty() {
        let k = Graph::from_fn(6, |_, _| true);
        assert_eq!(k.maximal_cliques(2), vec![vec![0, 1, 2, 3, 4, 5]]);
        assert_eq!(k.independence_number(100), Some(1));
        let e = Graph::new(7);
        assert_eq!(e.independence_number(10_000), Some(7));
        assert_eq!(e.maximal_cliques(1).len(), 7);
        assert!(e.maximal_cliques(2).is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let e = Graph::new(30);
        assert_eq!(e.independence_number(3), None);
    }

    #[test]
    fn wide_graph_uses_several_words() {
        let g = Graph::from_fn(130, |i, j| (i + j) % 2 == 0);
        // two disjoint cliques: evens and odds
        let cl = g.maximal_cliques(1);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].len(), 65);
        assert_eq!(g.independence_number(100_000), Some(2));
    }
}
