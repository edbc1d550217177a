//! Search engines. Positions are 0-based pattern indices; position `i`
//! holds `x_{i+1}` and edge `i` joins positions `i` and `i+1 (mod n)`.

use rand::seq::SliceRandom;
use rand::Rng;

use super::PatternProblem;
use crate::coloring::{Color, ColorPattern, EdgeColoring, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::ham::HamCycle;
use crate::rng::stream;

/// Largest n accepted by exact search.
pub const PATTERN_EXACT_CAP: usize = 14;
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Complete search; `n <= PATTERN_EXACT_CAP`.
    Exact,
    /// Fail-first backtracking, abandoned after `node_budget` search nodes.
    Heuristic { node_budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatch {
    /// The presentation `(x_1, ..., x_n)` aligned with the patterns.
    pub aligned: Vec<Vertex>,
    /// The same cycle rooted at vertex 1.
    pub cycle: HamCycle,
}

/// Constraint tables shared by both engines. An edge color of 0 matches any
/// pattern entry; the coupling experiment uses it for uncolored edges.
pub(super) struct Engine<'a> {
    pub n: usize,
    pub graph: &'a Graph,
    // (n+1)^2 table, 0 when uncolored
    pub edge_color: Option<Vec<Color>>,
    pub c1: Option<&'a [Color]>,
    pub vertex_color: Option<&'a VertexColoring>,
    pub c2: Option<&'a [Color]>,
    pub rainbow: bool,
    pub palette: usize,
}

impl<'a> Engine<'a> {
    pub fn from_problem(prob: &'a PatternProblem) -> Engine<'a> {
        let ec = prob.edge_coloring();
        Engine {
            n: prob.n(),
            graph: prob.graph(),
            edge_color: ec.map(|ec| dense_colors(prob.n(), ec.iter().map(|(e, c)| (e.lo(), e.hi(), c)))),
            c1: prob.edge_pattern().map(ColorPattern::seq),
            vertex_color: prob.vertex_coloring(),
            c2: prob.vertex_pattern().map(ColorPattern::seq),
            rainbow: prob.rainbow(),
            palette: ec.map_or(0, |ec| ec.palette() as usize),
        }
    }

    fn color(&self, u: Vertex, v: Vertex) -> Color {
        match &self.edge_color {
            Some(t) => t[u as usize * (self.n + 1) + v as usize],
            None => 0,
        }
    }

    fn vertex_ok(&self, pos: usize, v: Vertex) -> bool {
        match (self.vertex_color, self.c2) {
            (Some(vc), Some(c2)) => vc.color(v) == c2[pos],
            _ => true,
        }
    }

    /// Edge `pos` joins `u` (at `pos`) and `v` (at `pos + 1`).
    fn edge_ok(&self, pos: usize, u: Vertex, v: Vertex, used: &[bool]) -> bool {
        let c = self.color(u, v);
        if let Some(c1) = self.c1 {
            if c != 0 && c != c1[pos] {
                return false;
            }
        }
        !(self.rainbow && used[c as usize])
    }

    /// Exhaustive search from every start vertex. Without the rainbow
    /// condition, failed `(visited set, last vertex)` states are memoized.
    pub fn exact(&self) -> Option<Vec<Vertex>> {
        let n = self.n;
        if n < 3 {
            return None;
        }
        let memo_len = if self.rainbow { 0 } else { (1usize << n) * n };
        let mut failed = vec![false; memo_len];
        let mut used = vec![false; self.palette + 1];
        let mut seq = Vec::with_capacity(n);
        for start in 1..=n as Vertex {
            if !self.vertex_ok(0, start) {
                continue;
            }
            failed.iter_mut().for_each(|f| *f = false);
            seq.clear();
            seq.push(start);
            if self.exact_dfs(&mut seq, 1 << (start - 1), &mut failed, &mut used) {
                return Some(seq);
            }
        }
        None
    }

    fn exact_dfs(&self, seq: &mut Vec<Vertex>, mask: u32, failed: &mut [bool], used: &mut [bool]) -> bool {
        let n = self.n;
        let k = seq.len();
        let last = seq[k - 1];
        if k == n {
            return self.graph.has_edge(last, seq[0]) && self.edge_ok(n - 1, last, seq[0], used);
        }
        let key = mask as usize * n + (last as usize - 1);
        if !self.rainbow && failed[key] {
            return false;
        }
        for &w in self.graph.neighbors(last) {
            if mask & (1 << (w - 1)) != 0 || !self.vertex_ok(k, w) || !self.edge_ok(k - 1, last, w, used) {
                continue;
            }
            let c = self.color(last, w) as usize;
            if self.rainbow {
                used[c] = true;
            }
            seq.push(w);
            if self.exact_dfs(seq, mask | (1 << (w - 1)), failed, used) {
                return true;
            }
            seq.pop();
            if self.rainbow {
                used[c] = false;
            }
        }
        if !self.rainbow {
            failed[key] = true;
        }
        false
    }

    /// Fail-first backtracking: the path grows at whichever end has fewer
    /// admissible continuations, trying continuations with the fewest
    /// unvisited neighbors first. `Ok(None)` means the search space was
    /// exhausted within the budget.
    pub fn heuristic(&self, node_budget: u64, seed: u64) -> Result<Option<Vec<Vertex>>> {
        let n = self.n;
        if n < 3 {
            return Ok(None);
        }
        let mut rng = stream(seed, "pattern-heuristic", 0);
        let mut starts: Vec<Vertex> = (1..=n as Vertex).filter(|&v| self.vertex_ok(0, v)).collect();
        starts.shuffle(&mut rng);
        let mut st = Heur {
            path: std::collections::VecDeque::with_capacity(n),
            left_pos: 0,
            visited: vec![false; n + 1],
            used: vec![false; self.palette + 1],
            nodes: 0,
            budget: node_budget,
            tiebreak: (0..=n).map(|_| rng.random::<u32>()).collect(),
        };
        for s in starts {
            st.path.clear();
            st.path.push_back(s);
            st.left_pos = 0;
            st.visited[s as usize] = true;
            if self.heur_dfs(&mut st)? {
                let mut aligned = vec![0; n];
                for (i, &v) in st.path.iter().enumerate() {
                    aligned[(st.left_pos + i) % n] = v;
                }
                return Ok(Some(aligned));
            }
            st.visited[s as usize] = false;
        }
        Ok(None)
    }

    // Continuations at one end: (new vertex, its edge color).
    fn continuations(&self, st: &Heur, right: bool) -> Vec<(Vertex, Color)> {
        let n = self.n;
        let len = st.path.len();
        let (end, new_pos, edge_pos) = if right {
            let pos = (st.left_pos + len - 1) % n;
            (*st.path.back().unwrap(), (pos + 1) % n, pos)
        } else {
            let pos = (st.left_pos + n - 1) % n;
            (*st.path.front().unwrap(), pos, pos)
        };
        self.graph
            .neighbors(end)
            .iter()
            .copied()
            .filter(|&y| {
                !st.visited[y as usize]
                    && self.vertex_ok(new_pos, y)
                    && if right {
                        self.edge_ok(edge_pos, end, y, &st.used)
                    } else {
                        self.edge_ok(edge_pos, y, end, &st.used)
                    }
            })
            .map(|y| (y, self.color(end, y)))
            .collect()
    }

    // Every unvisited vertex needs two neighbors among unvisited vertices and path ends.
    fn degree_prune(&self, st: &Heur) -> bool {
        let (a, b) = (*st.path.front().unwrap(), *st.path.back().unwrap());
        let remaining = self.n - st.path.len();
        if remaining <= 1 {
            return false;
        }
        self.graph.vertices().any(|v| {
            !st.visited[v as usize]
                && self
                    .graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| !st.visited[w as usize] || w == a || w == b)
                    .take(2)
                    .count()
                    < 2
        })
    }

    fn heur_dfs(&self, st: &mut Heur) -> Result<bool> {
        st.nodes += 1;
        if st.nodes > st.budget {
            return Err(Error::BudgetExhausted {
                what: "find_patterned",
                budget: st.budget,
            });
        }
        let n = self.n;
        let len = st.path.len();
        if len == n {
            let (a, b) = (*st.path.front().unwrap(), *st.path.back().unwrap());
            let pos = (st.left_pos + n - 1) % n;
            return Ok(self.graph.has_edge(b, a) && self.edge_ok(pos, b, a, &st.used));
        }
        if self.degree_prune(st) {
            return Ok(false);
        }
        let right_opts = self.continuations(st, true);
        let (right, mut opts) = if len == 1 || right_opts.len() <= 1 {
            (true, right_opts)
        } else {
            let left_opts = self.continuations(st, false);
            if left_opts.len() < right_opts.len() {
                (false, left_opts)
            } else {
                (true, right_opts)
            }
        };
        let onward = |y: Vertex| {
            self.graph
                .neighbors(y)
                .iter()
                .filter(|&&w| !st.visited[w as usize])
                .count()
        };
        opts.sort_by_cached_key(|&(y, _)| (onward(y), st.tiebreak[y as usize]));
        for (y, c) in opts {
            st.visited[y as usize] = true;
            if self.rainbow {
                st.used[c as usize] = true;
            }
            if right {
                st.path.push_back(y);
            } else {
                st.path.push_front(y);
                st.left_pos = (st.left_pos + n - 1) % n;
            }
            if self.heur_dfs(st)? {
                return Ok(true);
            }
            if right {
                st.path.pop_back();
            } else {
                st.path.pop_front();
                st.left_pos = (st.left_pos + 1) % n;
            }
            st.visited[y as usize] = false;
            if self.rainbow {
                st.used[c as usize] = false;
            }
        }
        Ok(false)
    }
}

struct Heur {
    path: std::collections::VecDeque<Vertex>,
    left_pos: usize,
    visited: Vec<bool>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
    tiebreak: Vec<u32>,
}

pub(super) fn dense_colors(n: usize, colors: impl Iterator<Item = (Vertex, Vertex, Color)>) -> Vec<Color> {
    let mut t = vec![0; (n + 1) * (n + 1)];
    for (u, v, c) in colors {
        t[u as usize * (n + 1) + v as usize] = c;
        t[v as usize * (n + 1) + u as usize] = c;
    }
    t
}

/// Finds a presentation of a Hamilton cycle that follows the problem's
/// patterns. Exact mode decides existence; heuristic mode may give up with
/// [`Error::BudgetExhausted`], which is distinct from `Ok(None)`.
pub fn find_patterned(prob: &PatternProblem, mode: SearchMode, seed: u64) -> Result<Option<PatternMatch>> {
    let engine = Engine::from_problem(prob);
    let found = match mode {
        SearchMode::Exact => {
            if prob.n() > PATTERN_EXACT_CAP {
                return Err(Error::CapExceeded {
                    what: "find_patterned",
                    n: prob.n(),
                    cap: PATTERN_EXACT_CAP,
                });
            }
            engine.exact()
        }
        SearchMode::Heuristic { node_budget } => engine.heuristic(node_budget, seed)?,
    };
    match found {
        Some(aligned) if prob.is_satisfied_by(&aligned) => {
            let cycle = HamCycle::rooted(&aligned)?;
            Ok(Some(PatternMatch { aligned, cycle }))
        }
        Some(_) => Err(Error::invalid("internal search produced an invalid cycle")),
        None => Ok(None),
    }
}

/// Edge pattern `c1` under `ec` together with vertex pattern `c2` under `vc`.
pub fn find_combined(
    g: &Graph,
    ec: &EdgeColoring,
    c1: &ColorPattern,
    vc: &VertexColoring,
    c2: &ColorPattern,
    mode: SearchMode,
    seed: u64,
) -> Result<Option<PatternMatch>> {
    let prob = PatternProblem::new(g.clone())
        .with_edge_pattern(ec.clone(), c1.clone())?
        .with_vertex_pattern(vc.clone(), c2.clone())?;
    find_patterned(&prob, mode, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::color_edges;
    use crate::graph::{gen_gnp, Edge};

    fn k3_coloring() -> EdgeColoring {
        EdgeColoring::new(
            2,
            vec![(Edge::new(1, 2), 1), (Edge::new(2, 3), 2), (Edge::new(1, 3), 1)],
        )
        .unwrap()
    }

    fn both_modes(prob: &PatternProblem) -> [Option<PatternMatch>; 2] {
        [
            find_patterned(prob, SearchMode::Exact, 0).unwrap(),
            find_patterned(prob, SearchMode::Heuristic { node_budget: 100_000 }, 0).unwrap(),
        ]
    }

    #[test]
    fn single_color_triangle() {
        let g = Graph::complete(3);
        let ec = EdgeColoring::from_fn(&g, 1, |_| 1).unwrap();
        let prob = PatternProblem::new(g).with_edge_pattern(ec, ColorPattern::constant(3, 1)).unwrap();
        for m in both_modes(&prob) {
            assert_eq!(m.unwrap().cycle.len(), 3);
        }
    }

    #[test]
    fn two_color_triangle() {
        let g = Graph::complete(3);
        let prob = PatternProblem::new(g.clone())
            .with_edge_pattern(k3_coloring(), ColorPattern::new(vec![1, 2, 1]).unwrap())
            .unwrap();
        for m in both_modes(&prob) {
            let m = m.unwrap();
            let colors: Vec<_> = (0..3)
                .map(|i| k3_coloring().color(m.aligned[i], m.aligned[(i + 1) % 3]).unwrap())
                .collect();
            assert_eq!(colors, vec![1, 2, 1]);
        }
        let prob = PatternProblem::new(g)
            .with_edge_pattern(k3_coloring(), ColorPattern::constant(3, 2))
            .unwrap();
        assert_eq!(both_modes(&prob), [None, None]);
    }

    #[test]
    fn alternating_vertex_classes() {
        let vc = VertexColoring::block(4, &[2, 2]).unwrap();
        let prob = PatternProblem::new(Graph::complete(4))
            .with_vertex_pattern(vc, ColorPattern::new(vec![1, 2, 1, 2]).unwrap())
            .unwrap();
        for m in both_modes(&prob) {
            let m = m.unwrap();
            assert!(prob.is_satisfied_by(&m.aligned));
            assert_eq!(m.cycle.as_slice()[0], 1);
        }
    }

    #[test]
    fn exact_cap() {
        let g = Graph::complete(15);
        let ec = EdgeColoring::from_fn(&g, 1, |_| 1).unwrap();
        let prob = PatternProblem::new(g).with_edge_pattern(ec, ColorPattern::constant(15, 1)).unwrap();
        assert!(matches!(
            find_patterned(&prob, SearchMode::Exact, 0),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn heuristic_budget_is_reported() {
        // Dense enough to need a few nodes, but the budget is one.
        let g = Graph::complete(9);
        let ec = color_edges(&g, &[0.5, 0.5], 3).unwrap();
        let prob = PatternProblem::new(g)
            .with_edge_pattern(ec, ColorPattern::random(9, 2, 4))
            .unwrap();
        assert!(matches!(
            find_patterned(&prob, SearchMode::Heuristic { node_budget: 1 }, 0),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn heuristic_solves_a_moderate_instance() {
        let g = gen_gnp(60, 0.5, 11).unwrap();
        let ec = color_edges(&g, &[0.5, 0.5], 11).unwrap();
        let prob = PatternProblem::new(g)
            .with_edge_pattern(ec, ColorPattern::random(60, 2, 11))
            .unwrap();
        let m = find_patterned(&prob, SearchMode::Heuristic { node_budget: DEFAULT_NODE_BUDGET }, 1)
            .unwrap()
            .unwrap();
        assert!(prob.is_satisfied_by(&m.aligned));
    }

    #[test]
    fn rainbow_search() {
        let g = Graph::complete(5);
        let distinct = EdgeColoring::from_fn(&g, 10, |e| e.lex_index(5) as Color).unwrap();
        let prob = PatternProblem::new(g.clone()).with_rainbow(distinct).unwrap();
        assert!(both_modes(&prob).iter().all(Option::is_some));
        let few = EdgeColoring::from_fn(&g, 4, |e| e.lo()).unwrap();
        let prob = PatternProblem::new(g).with_rainbow(few).unwrap();
        // only four colors for five edges
        assert_eq!(both_modes(&prob), [None, None]);
    }
}
