//! Extension-rotation search for Hamilton cycles.
//!
//! The solver keeps a path, extends it while an endpoint has a neighbor off
//! the path, and otherwise explores restricted rotations breadth-first with
//! one endpoint fixed (the END set), then with each END vertex fixed in
//! turn (the END(v) sets). A path whose endpoints are adjacent closes into a
//! cycle; a cycle that misses some vertex is reopened into a longer path
//! through an edge leaving it. When every rotation is exhausted, booster
//! edges are consumed in order: a booster `{x, y}` with `y` in END(x)
//! closes a cycle and joins the graph. The protected edge is never removed.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::Rng;

use super::{validate_cycle, HamCycle};
use crate::graph::{Edge, Graph, Vertex};
use crate::rng::stream;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationParams {
    /// Rotation states explored per attempt before giving up; `None` means `50 n^2`.
    pub state_budget: Option<usize>,
    /// Further attempts after the first, each from a seeded random start.
    pub restarts: usize,
}

impl Default for RotationParams {
    fn default() -> Self {
        RotationParams {
            state_budget: None,
            restarts: 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PosaStats {
    pub attempts: usize,
    pub states: usize,
    pub reopenings: usize,
    pub boosters_consumed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosaSolution {
    pub cycle: HamCycle,
    /// Boosters that closed a cycle and therefore may appear in `cycle`.
    pub used_boosters: Vec<Edge>,
    pub stats: PosaStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailReason {
    InvalidInput(String),
    TooFewVertices,
    LowDegree(Vertex),
    Disconnected,
    BoostersExhausted,
    BudgetExhausted,
    ValidationFailed,
}

/// Diagnostics of a failed solve, taken from the best attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosaFailure {
    pub reason: FailReason,
    pub longest_path: usize,
    pub end_size: usize,
    pub boosters_used: usize,
    pub boosters_consumed: usize,
    pub states: usize,
}

impl fmt::Display for PosaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "extension-rotation failed ({:?}): longest path {}, |END| {}, boosters used {}/{} consumed, {} states",
            self.reason,
            self.longest_path,
            self.end_size,
            self.boosters_used,
            self.boosters_consumed,
            self.states
        )
    }
}

impl std::error::Error for PosaFailure {}

enum Probe {
    /// A path with the same vertex set whose free endpoint has an off-path neighbor.
    Extend(Vec<Vertex>),
    /// A path whose endpoints are adjacent.
    Cycle(Vec<Vertex>),
    /// One path per reachable endpoint, none of them extendable or closable.
    Saturated(Vec<Vec<Vertex>>),
}

struct Solver<'a> {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    protected: Option<Edge>,
    boosters: &'a [Edge],
    cursor: usize,
    used: Vec<Edge>,
    budget: usize,
    states: usize,
    total_states: usize,
    reopenings: usize,
    longest: usize,
    end_size: usize,
}

impl Solver<'_> {
    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    fn activate(&mut self, f: Edge) {
        for (a, b) in [(f.lo(), f.hi()), (f.hi(), f.lo())] {
            let list = &mut self.adj[a as usize];
            if let Err(at) = list.binary_search(&b) {
                list.insert(at, b);
            }
        }
        self.used.push(f);
    }

    fn off_path_neighbor(&self, v: Vertex, on: &[bool]) -> Option<Vertex> {
        self.adj[v as usize].iter().copied().find(|&w| !on[w as usize])
    }

    fn extend(&mut self, path: &mut Vec<Vertex>, on: &mut [bool]) {
        loop {
            let z = *path.last().unwrap();
            if let Some(w) = self.off_path_neighbor(z, on) {
                path.push(w);
                on[w as usize] = true;
                continue;
            }
            if let Some(w) = self.off_path_neighbor(path[0], on) {
                path.reverse();
                path.push(w);
                on[w as usize] = true;
                continue;
            }
            break;
        }
        self.longest = self.longest.max(path.len());
    }

    fn probe(&mut self, start: &[Vertex], on: &[bool]) -> Result<Probe, FailReason> {
        let k = start.len();
        let fixed = start[0];
        let mut reached = vec![false; self.n + 1];
        let mut pos = vec![usize::MAX; self.n + 1];
        let mut queue = VecDeque::from([start.to_vec()]);
        reached[start[k - 1] as usize] = true;
        let mut saturated = Vec::new();
        while let Some(p) = queue.pop_front() {
            self.states += 1;
            self.total_states += 1;
            if self.states > self.budget {
                return Err(FailReason::BudgetExhausted);
            }
            let z = p[k - 1];
            if self.off_path_neighbor(z, on).is_some() {
                return Ok(Probe::Extend(p));
            }
            if k >= 3 && self.has_edge(z, fixed) {
                return Ok(Probe::Cycle(p));
            }
            for (i, &v) in p.iter().enumerate() {
                pos[v as usize] = i;
            }
            for &x in &self.adj[z as usize] {
                let i = pos[x as usize];
                if i == usize::MAX || i < 1 || i + 3 > k {
                    continue;
                }
                let new_end = p[i + 1];
                if reached[new_end as usize] || self.protected == Some(Edge::new(p[i], new_end)) {
                    continue;
                }
                reached[new_end as usize] = true;
                let mut q = p.clone();
                q[i + 1..].reverse();
                queue.push_back(q);
            }
            for &v in &p {
                pos[v as usize] = usize::MAX;
            }
            saturated.push(p);
        }
        Ok(Probe::Saturated(saturated))
    }

    // `path` closes into a cycle missing some vertex; break a non-protected
    // cycle edge next to the lowest-labeled vertex with an outside neighbor
    // and step out through that neighbor.
    fn reopen(&mut self, path: &mut Vec<Vertex>, on: &mut [bool]) -> Result<(), FailReason> {
        let k = path.len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_unstable_by_key(|&i| path[i]);
        for i in order {
            let x = path[i];
            let Some(y) = self.off_path_neighbor(x, on) else {
                continue;
            };
            let prev = path[(i + k - 1) % k];
            let next = path[(i + 1) % k];
            let w = [prev, next]
                .into_iter()
                .filter(|&w| self.protected != Some(Edge::new(x, w)))
                .min()
                .expect("a cycle vertex has two cycle edges, at most one protected");
            let mut reopened = Vec::with_capacity(k + 1);
            if w == next {
                reopened.extend_from_slice(&path[(i + 1) % k..]);
                reopened.extend_from_slice(&path[..(i + 1) % k]);
            } else {
                reopened.extend(path[..i].iter().rev());
                reopened.extend(path[i..].iter().rev());
            }
            debug_assert_eq!(reopened.last(), Some(&x));
            reopened.push(y);
            on[y as usize] = true;
            *path = reopened;
            self.reopenings += 1;
            self.longest = self.longest.max(path.len());
            return Ok(());
        }
        Err(FailReason::Disconnected)
    }

    fn close_with_booster(
        &mut self,
        first: &[Vec<Vertex>],
        second: &HashMap<Vertex, Vec<Vec<Vertex>>>,
    ) -> Option<Vec<Vertex>> {
        let fixed = first[0][0];
        while self.cursor < self.boosters.len() {
            let f = self.boosters[self.cursor];
            self.cursor += 1;
            let mut hit = None;
            for (a, b) in [(f.lo(), f.hi()), (f.hi(), f.lo())] {
                if a == fixed {
                    hit = first.iter().find(|p| *p.last().unwrap() == b);
                } else if let Some(paths) = second.get(&a) {
                    hit = paths.iter().find(|p| *p.last().unwrap() == b);
                }
                if hit.is_some() {
                    break;
                }
            }
            if let Some(p) = hit {
                let p = p.clone();
                self.activate(f);
                return Some(p);
            }
        }
        None
    }

    fn grow(&mut self, start: Vec<Vertex>) -> Result<Vec<Vertex>, FailReason> {
        self.states = 0;
        let mut on = vec![false; self.n + 1];
        for &v in &start {
            on[v as usize] = true;
        }
        let mut path = start;
        'outer: loop {
            self.extend(&mut path, &mut on);
            let k = path.len();
            if k >= 3 && self.has_edge(path[0], path[k - 1]) {
                if k == self.n {
                    return Ok(path);
                }
                self.reopen(&mut path, &mut on)?;
                continue;
            }
            let first = match self.probe(&path, &on)? {
                Probe::Extend(p) => {
                    path = p;
                    continue;
                }
                Probe::Cycle(p) => {
                    if p.len() == self.n {
                        return Ok(p);
                    }
                    path = p;
                    self.reopen(&mut path, &mut on)?;
                    continue;
                }
                Probe::Saturated(states) => states,
            };
            self.end_size = first.len();
            let mut second = HashMap::with_capacity(first.len());
            for p in &first {
                let v = *p.last().unwrap();
                let reversed: Vec<Vertex> = p.iter().rev().copied().collect();
                match self.probe(&reversed, &on)? {
                    Probe::Extend(q) => {
                        path = q;
                        continue 'outer;
                    }
                    Probe::Cycle(q) => {
                        if q.len() == self.n {
                            return Ok(q);
                        }
                        path = q;
                        self.reopen(&mut path, &mut on)?;
                        continue 'outer;
                    }
                    Probe::Saturated(states) => {
                        second.insert(v, states);
                    }
                }
            }
            match self.close_with_booster(&first, &second) {
                Some(p) => {
                    if p.len() == self.n {
                        return Ok(p);
                    }
                    path = p;
                    self.reopen(&mut path, &mut on)?;
                }
                None => return Err(FailReason::BoostersExhausted),
            }
        }
    }
}

/// Searches `g` (plus boosters, consumed in order) for a Hamilton cycle
/// containing `required_edge`. Monte Carlo: may fail on Hamiltonian
/// graphs, but every returned cycle is validated against `g` and the
/// boosters it used.
pub fn posa_solve(
    g: &Graph,
    boosters: &[Edge],
    required_edge: Option<Edge>,
    params: &RotationParams,
    seed: u64,
) -> Result<PosaSolution, PosaFailure> {
    let n = g.n();
    let fail = |reason| PosaFailure {
        reason,
        longest_path: 0,
        end_size: 0,
        boosters_used: 0,
        boosters_consumed: 0,
        states: 0,
    };
    if let Some(e) = required_edge {
        if !g.contains_edge(e) {
            return Err(fail(FailReason::InvalidInput(format!("required edge {e} is not in the graph"))));
        }
    }
    if let Some(f) = boosters.iter().find(|f| f.hi() as usize > n) {
        return Err(fail(FailReason::InvalidInput(format!("booster {f} outside 1..={n}"))));
    }
    if n < 3 {
        return Err(fail(FailReason::TooFewVertices));
    }
    let everything = g.with_extra_edges(boosters.iter().copied());
    if let Some(v) = everything.vertices().find(|&v| everything.degree(v) < 2) {
        return Err(fail(FailReason::LowDegree(v)));
    }
    if !everything.is_connected() {
        return Err(fail(FailReason::Disconnected));
    }

    let mut solver = Solver {
        n,
        adj: g.vertices().fold(vec![Vec::new()], |mut acc, v| {
            acc.push(g.neighbors(v).to_vec());
            acc
        }),
        protected: required_edge,
        boosters,
        cursor: 0,
        used: Vec::new(),
        budget: params.state_budget.unwrap_or(50 * n * n).max(1),
        states: 0,
        total_states: 0,
        reopenings: 0,
        longest: 0,
        end_size: 0,
    };
    let mut last_reason = FailReason::BudgetExhausted;
    let mut attempts = 0;
    for attempt in 0..=params.restarts {
        attempts += 1;
        let start = match (required_edge, attempt) {
            (Some(e), a) if a % 2 == 0 => vec![e.lo(), e.hi()],
            (Some(e), _) => vec![e.hi(), e.lo()],
            (None, 0) => {
                let best = g.vertices().max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)));
                vec![best.expect("n >= 3")]
            }
            (None, a) => {
                let mut rng = stream(seed, "posa-start", a as u64);
                vec![rng.random_range(1..=n as Vertex)]
            }
        };
        match solver.grow(start) {
            Ok(seq) => {
                let cycle = HamCycle::rooted(&seq).expect("a Hamilton path is a permutation");
                let host = g.with_extra_edges(solver.used.iter().copied());
                if !validate_cycle(&host, cycle.as_slice(), required_edge) {
                    last_reason = FailReason::ValidationFailed;
                    break;
                }
                return Ok(PosaSolution {
                    cycle,
                    used_boosters: solver.used.clone(),
                    stats: PosaStats {
                        attempts,
                        states: solver.total_states,
                        reopenings: solver.reopenings,
                        boosters_consumed: solver.cursor,
                    },
                });
            }
            Err(reason @ FailReason::Disconnected) => {
                last_reason = reason;
                break;
            }
            Err(reason) => last_reason = reason,
        }
    }
    Err(PosaFailure {
        reason: last_reason,
        longest_path: solver.longest,
        end_size: solver.end_size,
        boosters_used: solver.used.len(),
        boosters_consumed: solver.cursor,
        states: solver.total_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_gnp;

    #[test]
    fn complete_graph() {
        let g = Graph::complete(8);
        let s = posa_solve(&g, &[], None, &RotationParams::default(), 1).unwrap();
        assert!(validate_cycle(&g, s.cycle.as_slice(), None));
    }

    #[test]
    fn isolated_vertex_fails() {
        let mut edges: Vec<_> = Graph::complete(5).edges().map(|e| (e.lo(), e.hi())).collect();
        edges.retain(|&(u, v)| u != 5 && v != 5);
        let g = Graph::from_edges(5, edges).unwrap();
        let f = posa_solve(&g, &[], None, &RotationParams::default(), 1).unwrap_err();
        assert_eq!(f.reason, FailReason::LowDegree(5));
    }

    #[test]
    fn required_edge_is_used() {
        let g = Graph::complete(6);
        let e = Edge::new(2, 5);
        let s = posa_solve(&g, &[], Some(e), &RotationParams::default(), 3).unwrap();
        assert!(validate_cycle(&g, s.cycle.as_slice(), Some(e)));
    }

    #[test]
    fn required_edge_must_exist() {
        let g = Graph::cycle(5);
        let f = posa_solve(&g, &[], Some(Edge::new(1, 3)), &RotationParams::default(), 3).unwrap_err();
        assert!(matches!(f.reason, FailReason::InvalidInput(_)));
    }

    #[test]
    fn two_triangles_joined_by_a_path_are_rejected() {
        // 1-2-3-1 and 4-5-6-4 joined by 3-4: connected, min degree 2, no Hamilton cycle
        let g = Graph::from_edges(6, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (5, 6), (4, 6)]).unwrap();
        assert!(posa_solve(&g, &[], None, &RotationParams::default(), 5).is_err());
    }

    #[test]
    fn booster_closes_a_hamilton_path() {
        // A path plus one chord cannot close; the booster {1,6} can.
        let g = Graph::path(6).with_extra_edges([Edge::new(1, 3), Edge::new(4, 6)]);
        assert!(posa_solve(&g, &[], None, &RotationParams::default(), 1).is_err());
        let s = posa_solve(&g, &[Edge::new(2, 5), Edge::new(1, 6)], None, &RotationParams::default(), 1)
            .unwrap();
        let host = g.with_extra_edges(s.used_boosters.iter().copied());
        assert!(validate_cycle(&host, s.cycle.as_slice(), None));
        assert!(!s.used_boosters.is_empty());
    }

    #[test]
    fn random_dense_graphs_are_solved() {
        for seed in 0..30 {
            let g = gen_gnp(200, 0.08, seed).unwrap();
            if g.min_degree() < 2 {
                continue;
            }
            let s = posa_solve(&g, &[], None, &RotationParams::default(), seed).unwrap();
            assert!(validate_cycle(&g, s.cycle.as_slice(), None));
        }
    }
}
