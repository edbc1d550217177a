//! Simple undirected graphs on vertices `1..=n`, G(n,p) sampling and
//! independently layered unions.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::rng::{stream, StreamRng};

/// Vertex label. Labels run from 1 to n; 0 is never a vertex.
pub type Vertex = u32;

/// An unordered vertex pair stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    lo: Vertex,
    hi: Vertex,
}

impl Edge {
    /// Panics on a self-loop.
    pub fn new(u: Vertex, v: Vertex) -> Edge {
        Edge::try_new(u, v).expect("self-loop is not an edge")
    }

    pub fn try_new(u: Vertex, v: Vertex) -> Option<Edge> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Some(Edge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Some(Edge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(self) -> Vertex {
        self.lo
    }

    pub fn hi(self) -> Vertex {
        self.hi
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(self, v: Vertex) -> Option<Vertex> {
        if v == self.lo {
            Some(self.hi)
        } else if v == self.hi {
            Some(self.lo)
        } else {
            None
        }
    }

    /// Index of the pair in the lexicographic enumeration of all pairs of `[n]`
    /// (1-based, so `{1,2}` is 1 and `{n-1,n}` is `n(n-1)/2`).
    pub fn lex_index(self, n: usize) -> usize {
        let (u, v) = (self.lo as usize, self.hi as usize);
        // rows 1..u-1 contribute (n-1) + (n-2) + ... + (n-u+1) pairs
        (u - 1) * (2 * n - u) / 2 + (v - u)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    // adj[0] is unused so vertex labels index directly.
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            m: 0,
            adj: vec![Vec::new(); n + 1],
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 1..=n as Vertex {
            for v in u + 1..=n as Vertex {
                pairs.push((u, v));
            }
        }
        Graph::from_lex_pairs(n, &pairs)
    }

    /// The cycle 1-2-...-n-1.
    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<(Vertex, Vertex)> = (1..n as Vertex).map(|v| (v, v + 1)).collect();
        if n >= 3 {
            edges.push((1, n as Vertex));
        }
        Graph::from_edges(n, edges).expect("cycle edges are valid")
    }

    /// The path 1-2-...-n.
    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n as Vertex).map(|v| (v, v + 1))).expect("path edges are valid")
    }

    /// Builds a graph, rejecting self-loops, out-of-range labels and repeated pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            g.adj[u as usize].push(v);
            g.adj[v as usize].push(u);
            g.m += 1;
        }
        for list in &mut g.adj {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("duplicate edge touching vertex {}", w[0])));
            }
        }
        Ok(g)
    }

    /// Builds a graph from pairs that may repeat; repeats are merged.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            g.adj[u as usize].push(v);
            g.adj[v as usize].push(u);
        }
        let mut twice_m = 0;
        for list in &mut g.adj {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        g.m = twice_m / 2;
        Ok(g)
    }

    // Pairs (u, v) with u < v in lexicographic order: appending produces sorted lists.
    fn from_lex_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Graph {
        let mut g = Graph::empty(n);
        for &(u, v) in pairs {
            g.adj[u as usize].push(v);
            g.adj[v as usize].push(u);
        }
        g.m = pairs.len();
        debug_assert!(g.is_well_formed());
        g
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v as usize > self.n {
            Err(Error::invalid(format!("vertex {v} outside 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n as Vertex
    }

    /// Neighbors of `v` in ascending order.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        if u == 0 || v == 0 || u as usize > self.n || v as usize > self.n {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize].binary_search(&b).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo, e.hi)
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices().flat_map(move |u| {
            self.adj[u as usize]
                .iter()
                .filter(move |&&v| v > u)
                .map(move |&v| Edge { lo: u, hi: v })
        })
    }

    /// Subgraph induced by `keep`, relabeled `1..=keep.len()` in the order of
    /// `keep`. Returns the graph and the map from new label to old label
    /// (index 0 unused).
    pub fn induced(&self, keep: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let mut new_label = vec![0 as Vertex; self.n + 1];
        let mut back = vec![0 as Vertex; keep.len() + 1];
        for (i, &v) in keep.iter().enumerate() {
            new_label[v as usize] = i as Vertex + 1;
            back[i + 1] = v;
        }
        let mut edges = Vec::new();
        for &u in keep {
            for &v in self.neighbors(u) {
                let (a, b) = (new_label[u as usize], new_label[v as usize]);
                if b != 0 && a < b {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(keep.len(), edges).expect("induced edges are valid");
        (g, back)
    }

    /// Union over graphs on the same vertex set; shared edges are merged.
    pub fn union<'a, I>(graphs: I) -> Result<Graph>
    where
        I: IntoIterator<Item = &'a Graph>,
    {
        let mut iter = graphs.into_iter().peekable();
        let n = match iter.peek() {
            Some(g) => g.n,
            None => return Err(Error::invalid("union of no graphs")),
        };
        let mut pairs = Vec::new();
        for g in iter {
            if g.n != n {
                return Err(Error::invalid("union of graphs with different vertex counts"));
            }
            pairs.extend(g.edges().map(|e| (e.lo, e.hi)));
        }
        Graph::from_edges_dedup(n, pairs)
    }

    pub fn with_extra_edges<I>(&self, extra: I) -> Graph
    where
        I: IntoIterator<Item = Edge>,
    {
        let pairs = self
            .edges()
            .chain(extra)
            .map(|e| (e.lo, e.hi))
            .collect::<Vec<_>>();
        Graph::from_edges_dedup(self.n, pairs).expect("edges of a valid graph")
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1 as Vertex]);
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Breadth-first distances from `src`; `usize::MAX` marks unreachable.
    pub fn distances_from(&self, src: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n + 1];
        dist[src as usize] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if dist[v as usize] == usize::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Checks the structural invariants: sorted symmetric adjacency, no
    /// self-loops, no repeats, and an edge count matching the lists.
    pub fn is_well_formed(&self) -> bool {
        if self.adj.len() != self.n + 1 || !self.adj[0].is_empty() {
            return false;
        }
        let mut twice_m = 0;
        for u in self.vertices() {
            let list = &self.adj[u as usize];
            twice_m += list.len();
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &v in list {
                if v == u || v == 0 || v as usize > self.n {
                    return false;
                }
                if self.adj[v as usize].binary_search(&u).is_err() {
                    return false;
                }
            }
        }
        twice_m == 2 * self.m
    }
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{what} = {p} is not a probability")))
    }
}

/// Samples each of the C(n,2) pairs independently with probability `p`,
/// walking the lexicographic pair order with geometric skips.
pub(crate) fn sample_pairs(n: usize, p: f64, rng: &mut StreamRng) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    if n < 2 || p <= 0.0 {
        return out;
    }
    if p >= 1.0 {
        return Graph::complete(n).edges().map(|e| (e.lo, e.hi)).collect();
    }
    let skips = Geometric::new(p).expect("p in (0,1)");
    let (mut u, mut v) = (1usize, 1usize);
    loop {
        let mut step = usize::try_from(skips.sample(rng))
            .unwrap_or(usize::MAX)
            .saturating_add(1);
        loop {
            let left_in_row = n - v;
            if step <= left_in_row {
                v += step;
                break;
            }
            step -= left_in_row;
            u += 1;
            if u >= n {
                return out;
            }
            v = u;
        }
        out.push((u as Vertex, v as Vertex));
    }
}

/// G(n,p) driven by the `gnp` stream of `seed`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_probability(p, "p")?;
    let mut rng = stream(seed, "gnp", 0);
    Ok(Graph::from_lex_pairs(n, &sample_pairs(n, p, &mut rng)))
}

/// Independent G(n,p_i) layers on a shared vertex set. A pair may appear in
/// several layers; [`LayeredGraph::union`] merges them.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    n: usize,
    layers: Vec<Graph>,
    layer_probs: Vec<f64>,
}

impl LayeredGraph {
    pub fn new(layers: Vec<Graph>, layer_probs: Vec<f64>) -> Result<LayeredGraph> {
        let n = match layers.first() {
            Some(g) => g.n(),
            None => return Err(Error::invalid("a layered graph needs at least one layer")),
        };
        if layers.iter().any(|g| g.n() != n) {
            return Err(Error::invalid("layers must share the vertex count"));
        }
        if layer_probs.len() != layers.len() {
            return Err(Error::invalid("one probability per layer is required"));
        }
        Ok(LayeredGraph {
            n,
            layers,
            layer_probs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Graph] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> &Graph {
        &self.layers[i]
    }

    pub fn layer_probs(&self) -> &[f64] {
        &self.layer_probs
    }

    pub fn union(&self) -> Graph {
        Graph::union(&self.layers).expect("layers share n")
    }

    /// Union of a subset of layers, by index.
    pub fn union_of(&self, idx: &[usize]) -> Graph {
        Graph::union(idx.iter().map(|&i| &self.layers[i])).expect("layers share n")
    }

    /// Edge probability of the union: `1 - prod(1 - p_i)`.
    pub fn union_prob(&self) -> f64 {
        1.0 - self.layer_probs.iter().map(|p| 1.0 - p).product::<f64>()
    }
}

/// Layer `i` is drawn from the `layer` stream of `seed` at index `i`.
pub fn gen_layered(n: usize, layer_probs: &[f64], seed: u64) -> Result<LayeredGraph> {
    if layer_probs.is_empty() {
        return Err(Error::invalid("empty layer list"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    for &p in layer_probs {
        check_probability(p, "layer probability")?;
    }
    let layers = layer_probs
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut rng = stream(seed, "layer", i as u64);
            Graph::from_lex_pairs(n, &sample_pairs(n, p, &mut rng))
        })
        .collect();
    LayeredGraph::new(layers, layer_probs.to_vec())
}

/// Splits the edges of `g` into layers distributed as independent
/// G(n,p_i) conditioned on their union being `g`: each edge receives the
/// non-empty layer set T with probability proportional to
/// `prod_{i in T} p_i * prod_{i not in T} (1 - p_i)`.
pub fn split_layers(g: &Graph, layer_probs: &[f64], seed: u64) -> Result<LayeredGraph> {
    let k = layer_probs.len();
    if k == 0 || k > 16 {
        return Err(Error::invalid("between 1 and 16 layers are supported"));
    }
    for &p in layer_probs {
        check_probability(p, "layer probability")?;
    }
    // Weights of the non-empty subsets of layers.
    let weights: Vec<f64> = (1u32..1 << k)
        .map(|mask| {
            (0..k)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        layer_probs[i]
                    } else {
                        1.0 - layer_probs[i]
                    }
                })
                .product()
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::invalid("all layer probabilities are zero"));
    }
    let mut rng = stream(seed, "split-layers", 0);
    let mut per_layer: Vec<Vec<(Vertex, Vertex)>> = vec![Vec::new(); k];
    for e in g.edges() {
        let mut x = rng.random::<f64>() * total;
        let mut chosen = weights.len();
        for (j, w) in weights.iter().enumerate() {
            if x < *w {
                chosen = j;
                break;
            }
            x -= w;
        }
        // Rounding can leave x just above the last weight.
        let mask = if chosen == weights.len() {
            weights.len() as u32
        } else {
            chosen as u32 + 1
        };
        for (i, layer) in per_layer.iter_mut().enumerate() {
            if mask & (1 << i) != 0 {
                layer.push((e.lo, e.hi));
            }
        }
    }
    let layers = per_layer
        .iter()
        .map(|pairs| Graph::from_lex_pairs(g.n(), pairs))
        .collect();
    LayeredGraph::new(layers, layer_probs.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_triangle_at_p_one() {
        let g = gen_gnp(3, 1.0, 99).unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn empty_at_p_zero() {
        let g = gen_gnp(5, 0.0, 3).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.n(), 5);
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = gen_gnp(100, 0.5, 7).unwrap();
        let b = gen_gnp(100, 0.5, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gen_gnp(100, 0.5, 8).unwrap());
    }

    #[test]
    fn gnp_rejects_bad_arguments() {
        assert!(gen_gnp(0, 0.5, 1).is_err());
        assert!(gen_gnp(4, 1.5, 1).is_err());
        assert!(gen_gnp(4, -0.1, 1).is_err());
        assert!(gen_gnp(4, f64::NAN, 1).is_err());
    }

    #[test]
    fn sampled_adjacency_is_sorted() {
        for seed in 0..20 {
            let g = gen_gnp(60, 0.2, seed).unwrap();
            assert!(g.is_well_formed());
        }
    }

    #[test]
    fn layered_extremes() {
        let lg = gen_layered(4, &[1.0, 1.0], 5).unwrap();
        assert_eq!(lg.layer(0), &Graph::complete(4));
        assert_eq!(lg.layer(1), &Graph::complete(4));
        assert_eq!(lg.union(), Graph::complete(4));

        let lg = gen_layered(4, &[0.0, 1.0], 5).unwrap();
        assert_eq!(lg.layer(0).edge_count(), 0);
        assert_eq!(lg.layer(1), &Graph::complete(4));
        assert!(gen_layered(4, &[], 5).is_err());
    }

    #[test]
    fn lex_index_enumerates_pairs() {
        let n = 7;
        for (i, e) in Graph::complete(n).edges().enumerate() {
            assert_eq!(e.lex_index(n), i + 1);
        }
    }

    #[test]
    fn from_edges_rejects_defects() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(1, 4)]).is_err());
        assert!(Graph::from_edges(3, [(1, 2), (2, 1)]).is_err());
        assert!(Graph::from_edges_dedup(3, [(1, 2), (2, 1)]).unwrap().edge_count() == 1);
    }

    #[test]
    fn induced_relabels_in_order() {
        let g = Graph::complete(5);
        let (h, back) = g.induced(&[2, 4, 5]);
        assert_eq!(h, Graph::complete(3));
        assert_eq!(back, vec![0, 2, 4, 5]);
    }

    #[test]
    fn split_preserves_union() {
        let g = gen_gnp(80, 0.3, 11).unwrap();
        let lg = split_layers(&g, &[0.1, 0.1, 0.05, 0.05], 4).unwrap();
        assert_eq!(lg.union(), g);
        assert_eq!(lg.layers().len(), 4);
    }
}
