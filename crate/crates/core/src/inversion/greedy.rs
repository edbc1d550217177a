//! Leftmost-neighbor walk in G1 followed by a completion through the
//! unvisited vertices in G2.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{count_inversions, Fenwick};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, LayeredGraph, Vertex};
use crate::ham::{brute_hamilton_capped, is_permutation, posa_solve, HamCycle, RotationParams};
use crate::rng::derive_seed;

#[derive(Clone, Debug)]
pub struct GreedyParams {
    /// Number of vertices left for the completion; `None` uses [`default_u_target`].
    pub u_target: Option<usize>,
    pub rotation: RotationParams,
    /// Completions on at most this many auxiliary vertices are solved exhaustively.
    pub brute_cap: usize,
}

impl Default for GreedyParams {
    fn default() -> Self {
        GreedyParams {
            u_target: None,
            rotation: RotationParams::default(),
            brute_cap: 10,
        }
    }
}

/// `[p_1, p_2]` with `p_1 = p/3` and `1 - p = (1 - p_1)(1 - p_2)`.
pub fn greedy_layer_probs(p: f64) -> [f64; 2] {
    let p1 = p / 3.0;
    [p1, 1.0 - (1.0 - p) / (1.0 - p1)]
}

/// `round(2 ln n / p1)`, at least 4 and at most `n - 1`.
pub fn default_u_target(n: usize, p1: f64) -> usize {
    let raw = if p1 > 0.0 {
        (2.0 * (n as f64).ln() / p1).round()
    } else {
        f64::INFINITY
    };
    let t = if raw.is_finite() { (raw as usize).max(4) } else { usize::MAX };
    t.min(n.saturating_sub(1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GreedyTranscript {
    pub n: usize,
    pub p1: f64,
    pub u_target: usize,
    /// `v_1 = 1, v_2, ..., v_{j0}`.
    pub walk: Vec<Vertex>,
    /// Unvisited vertices after the walk, ascending.
    pub unvisited: Vec<Vertex>,
    pub j0: usize,
    /// Smallest unvisited label, if any vertex is unvisited.
    pub j1: Option<Vertex>,
    /// True when the walk stopped because `v_{j0}` had no unvisited G1-neighbor.
    pub dead_end: bool,
    /// `a_j`: unvisited labels below `v_j` right after step `j`.
    pub a: Vec<u64>,
    /// `alpha_j`: later cycle vertices below `v_j`, for `j <= j0`; empty
    /// unless the cycle was completed.
    pub alpha: Vec<u64>,
    /// The path through the unvisited vertices, from the `v_{j0}` side.
    pub completion: Option<Vec<Vertex>>,
    pub completion_error: Option<String>,
    pub inversions: Option<u64>,
}

impl GreedyTranscript {
    /// `sum_{j <= j0} alpha_j + |U| (n - j1)`, once the cycle is complete.
    pub fn inversion_bound(&self) -> Option<u64> {
        if self.completion.is_none() {
            return None;
        }
        let tail = match self.j1 {
            Some(j1) => self.unvisited.len() as u64 * (self.n as u64 - j1 as u64),
            None => 0,
        };
        Some(self.alpha.iter().sum::<u64>() + tail)
    }

    /// `(value, count)` pairs of the `a_j`, ascending by value.
    pub fn a_histogram(&self) -> Vec<(u64, usize)> {
        let mut h = BTreeMap::new();
        for &x in &self.a {
            *h.entry(x).or_insert(0) += 1;
        }
        h.into_iter().collect()
    }

    pub fn a_histogram_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in self.a_histogram() {
            let _ = writeln!(out, "{v},{c}");
        }
        out
    }

    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("n", self.n.to_string());
        kv("p1", self.p1.to_string());
        kv("u_target", self.u_target.to_string());
        kv("j0", self.j0.to_string());
        kv("unvisited", self.unvisited.len().to_string());
        kv("j1", self.j1.map_or("none".into(), |v| v.to_string()));
        kv("dead_end", self.dead_end.to_string());
        kv("sum_a", self.a.iter().sum::<u64>().to_string());
        kv("completed", self.completion.is_some().to_string());
        if let Some(e) = &self.completion_error {
            kv("completion_error", e.clone());
        }
        if let Some(i) = self.inversions {
            kv("sum_alpha", self.alpha.iter().sum::<u64>().to_string());
            kv("inversions", i.to_string());
        }
        if let Some(b) = self.inversion_bound() {
            kv("inversion_bound", b.to_string());
        }
        out
    }
}

fn in_host(g1: &Graph, g2: &Graph, u: Vertex, v: Vertex) -> bool {
    g1.has_edge(u, v) || g2.has_edge(u, v)
}

/// Runs the walk on layer 0 and completes through layer 1. The walk is
/// deterministic; `seed` only drives the completion search.
pub fn greedy_low_inversion(
    lg: &LayeredGraph,
    params: &GreedyParams,
    seed: u64,
) -> Result<(Option<HamCycle>, GreedyTranscript)> {
    if lg.layers().len() < 2 {
        return Err(Error::invalid("the greedy construction needs two layers"));
    }
    let n = lg.n();
    let (g1, g2) = (lg.layer(0), lg.layer(1));
    let p1 = lg.layer_probs()[0];
    let u_target = params
        .u_target
        .unwrap_or_else(|| default_u_target(n, p1))
        .min(n.saturating_sub(1));

    let mut visited = vec![false; n + 1];
    let mut unvisited = Fenwick::full(n);
    let mut walk = vec![1 as Vertex];
    visited[1] = true;
    unvisited.add(1, -1);
    let mut a = vec![0u64];
    let mut dead_end = false;
    while n - walk.len() > u_target {
        let cur = *walk.last().unwrap();
        match g1.neighbors(cur).iter().copied().find(|&w| !visited[w as usize]) {
            Some(w) => {
                visited[w as usize] = true;
                unvisited.add(w as usize, -1);
                a.push(unvisited.prefix(w as usize - 1) as u64);
                walk.push(w);
            }
            None => {
                dead_end = true;
                break;
            }
        }
    }
    let rest: Vec<Vertex> = (1..=n as Vertex).filter(|&v| !visited[v as usize]).collect();
    let mut tr = GreedyTranscript {
        n,
        p1,
        u_target,
        j0: walk.len(),
        j1: rest.first().copied(),
        walk,
        unvisited: rest,
        dead_end,
        a,
        alpha: Vec::new(),
        completion: None,
        completion_error: None,
        inversions: None,
    };
    match complete(g1, g2, &tr.walk, &tr.unvisited, params, seed) {
        Ok(path) => {
            let mut seq = tr.walk.clone();
            seq.extend_from_slice(&path);
            let valid = n >= 3
                && is_permutation(&seq)
                && (0..n).all(|i| in_host(g1, g2, seq[i], seq[(i + 1) % n]));
            if !valid {
                tr.completion_error = Some("assembled sequence is not a Hamilton cycle".into());
                return Ok((None, tr));
            }
            tr.alpha = alphas(&seq)[..tr.j0].to_vec();
            tr.inversions = Some(count_inversions(&seq));
            tr.completion = Some(path);
            Ok((Some(HamCycle::new(seq)?), tr))
        }
        Err(msg) => {
            tr.completion_error = Some(msg);
            Ok((None, tr))
        }
    }
}

/// `alpha_j = |{k > j : seq[k] < seq[j]}|`.
fn alphas(seq: &[Vertex]) -> Vec<u64> {
    let mut later = Fenwick::new(seq.len());
    let mut out = vec![0u64; seq.len()];
    for (j, &v) in seq.iter().enumerate().rev() {
        out[j] = later.prefix(v as usize - 1) as u64;
        later.add(v as usize, 1);
    }
    out
}

// A Hamilton path through `rest` leaving from the walk's last vertex and
// returning to vertex 1. Auxiliary labels: 1 is v_{j0}, 2 is v_1 (when the
// walk has more than one vertex), then `rest` in order. The auxiliary edge
// {1,2} stands for the walk and is required.
fn complete(
    g1: &Graph,
    g2: &Graph,
    walk: &[Vertex],
    rest: &[Vertex],
    params: &GreedyParams,
    seed: u64,
) -> std::result::Result<Vec<Vertex>, String> {
    let n = g1.n();
    if n < 3 {
        return Err("fewer than 3 vertices".into());
    }
    let s = *walk.last().unwrap();
    if rest.is_empty() {
        return if in_host(g1, g2, s, 1) {
            Ok(Vec::new())
        } else {
            Err(format!("walk ends at {s}, which is not adjacent to 1"))
        };
    }
    let terminals: Vec<Vertex> = if walk.len() == 1 { vec![s] } else { vec![s, 1] };
    let t = terminals.len() as Vertex;
    let mut labels = terminals.clone();
    labels.extend_from_slice(rest);
    let mut edges = Vec::new();
    if t == 2 {
        edges.push((1, 2));
    }
    for (i, &u) in rest.iter().enumerate() {
        let a = t + 1 + i as Vertex;
        for (ti, &x) in terminals.iter().enumerate() {
            if in_host(g1, g2, x, u) {
                edges.push((ti as Vertex + 1, a));
            }
        }
        for (k, &w) in rest.iter().enumerate().skip(i + 1) {
            if g2.has_edge(u, w) {
                edges.push((a, t + 1 + k as Vertex));
            }
        }
    }
    let m = labels.len();
    let aux = Graph::from_edges(m, edges).map_err(|e| e.to_string())?;
    let required = (t == 2).then(|| Edge::new(1, 2));
    let degrees = terminals
        .iter()
        .enumerate()
        .map(|(i, &x)| format!("{x}:{}", aux.degree(i as Vertex + 1) - (t as usize - 1)))
        .collect::<Vec<_>>()
        .join(",");

    let cycle = if m < 3 {
        None
    } else if m <= params.brute_cap {
        brute_hamilton_capped(&aux, params.brute_cap, |seq| {
            required.is_none_or(|_| seq[1] == 2 || seq[m - 1] == 2)
        })
        .map_err(|e| e.to_string())?
    } else {
        posa_solve(&aux, &[], required, &params.rotation, derive_seed(seed, "greedy-completion", 0))
            .ok()
            .map(|sol| sol.cycle)
    };
    let Some(cycle) = cycle else {
        return Err(format!(
            "no Hamilton path through {} unvisited vertices (attachment degrees {degrees})",
            rest.len()
        ));
    };
    // orient as 1 (= v_{j0}), rest..., 2 (= v_1)
    let seq = if t == 2 && cycle.as_slice()[1] == 2 {
        cycle.reversed().into_vec()
    } else {
        cycle.into_vec()
    };
    Ok(seq[1..=rest.len()].iter().map(|&x| labels[x as usize - 1]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_layered;

    fn two_layers(g1: Graph, g2: Graph) -> LayeredGraph {
        LayeredGraph::new(vec![g1, g2], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn complete_first_layer_walks_in_order() {
        let lg = two_layers(Graph::complete(12), Graph::complete(12));
        let params = GreedyParams {
            u_target: Some(4),
            ..Default::default()
        };
        let (h, tr) = greedy_low_inversion(&lg, &params, 1).unwrap();
        assert_eq!(tr.walk, (1..=8).collect::<Vec<_>>());
        assert!(tr.a.iter().all(|&x| x == 0));
        assert_eq!(tr.unvisited, vec![9, 10, 11, 12]);
        let h = h.unwrap();
        assert!(tr.inversions.unwrap() <= tr.inversion_bound().unwrap());
        assert_eq!(tr.inversions, Some(crate::inversion::inversions(&h)));
    }

    #[test]
    fn three_vertex_walk_skips() {
        let g1 = Graph::from_edges(3, [(1, 3), (2, 3)]).unwrap();
        let lg = two_layers(g1, Graph::complete(3));
        let params = GreedyParams {
            u_target: Some(0),
            ..Default::default()
        };
        let (h, tr) = greedy_low_inversion(&lg, &params, 1).unwrap();
        assert_eq!(tr.walk, vec![1, 3, 2]);
        assert_eq!(tr.a, vec![0, 1, 0]);
        assert_eq!(h.unwrap().as_slice(), &[1, 3, 2]);
        assert_eq!(tr.alpha, vec![0, 1, 0]);
    }

    #[test]
    fn walk_dominates_alpha() {
        for seed in 0..10 {
            let lg = gen_layered(300, &[0.05, 0.1], seed).unwrap();
            let (h, tr) = greedy_low_inversion(&lg, &GreedyParams::default(), seed).unwrap();
            if h.is_some() {
                assert!(tr.a.iter().zip(&tr.alpha).all(|(a, al)| a >= al));
                assert!(tr.inversions.unwrap() <= tr.inversion_bound().unwrap());
            }
            assert_eq!(tr.walk.len() + tr.unvisited.len(), 300);
        }
    }

    #[test]
    fn histogram_csv() {
        let tr = GreedyTranscript {
            n: 3,
            p1: 0.5,
            u_target: 0,
            walk: vec![1, 3, 2],
            unvisited: vec![],
            j0: 3,
            j1: None,
            dead_end: false,
            a: vec![0, 1, 0],
            alpha: vec![],
            completion: None,
            completion_error: None,
            inversions: None,
        };
        assert_eq!(tr.a_histogram_csv(), "value,count\n0,2\n1,1\n");
    }

    #[test]
    fn default_target() {
        assert_eq!(default_u_target(1000, 0.5), 28);
        assert_eq!(default_u_target(10, 0.99), 5);
        assert_eq!(default_u_target(5, 0.001), 4);
        assert_eq!(default_u_target(3, 0.9), 2);
    }
}
