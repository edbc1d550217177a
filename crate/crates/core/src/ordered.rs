//! Hamilton cycles that visit a prescribed vertex list in order.
//!
//! The pipeline works on four independent layers `Gamma_1..Gamma_4`.
//! Low-degree vertices are classified first. Every listed vertex is then
//! wrapped in a short anchor path and the anchors are joined by connector
//! paths through a pruned `Gamma_1` core. The resulting super-path is
//! contracted to a single protected edge, and extension-rotation on
//! `G_1 ∪ Gamma_3` with `Gamma_4` as boosters completes the cycle.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::graph::{split_layers, Edge, Graph, LayeredGraph, Vertex};
use crate::ham::{is_permutation, posa_solve, validate_cycle, HamCycle, PosaFailure, RotationParams};
use crate::rng::{derive_seed, stream};

#[derive(Clone, Debug, PartialEq)]
pub struct OrderedParams {
    /// The `omega` in `p = (ln n + ln ln n + omega) / n`; sets `p_3 = p_4 = omega / 4n`.
    pub omega: f64,
    /// SMALL threshold on `G_1`-degree; `None` means `0.5 n p_1`.
    pub theta_small: Option<f64>,
    /// TINY threshold on `Gamma_1`-degree; `None` means `0.125 n p_1`.
    pub theta_tiny: Option<f64>,
    /// The core may not shrink below this fraction of `n`.
    pub core_floor: f64,
    /// Longest connector allowed; `None` means `max(3, ceil(4 ln n / ln ln ln n))`.
    pub diameter_budget: Option<usize>,
    /// Neighbors tried per anchor endpoint before giving up.
    pub anchor_trials: usize,
    pub rotation: RotationParams,
    /// Edge probability used to split a plain graph into layers; `None`
    /// means the edge density.
    pub p: Option<f64>,
}

impl Default for OrderedParams {
    fn default() -> Self {
        OrderedParams {
            omega: 2.0,
            theta_small: None,
            theta_tiny: None,
            core_floor: 0.4,
            diameter_budget: None,
            anchor_trials: 10,
            rotation: RotationParams::default(),
            p: None,
        }
    }
}

impl OrderedParams {
    pub fn theta_small(&self, n: usize, p1: f64) -> f64 {
        self.theta_small.unwrap_or(0.5 * n as f64 * p1)
    }

    pub fn theta_tiny(&self, n: usize, p1: f64) -> f64 {
        self.theta_tiny.unwrap_or(0.125 * n as f64 * p1)
    }

    pub fn diameter_budget(&self, n: usize) -> usize {
        self.diameter_budget.unwrap_or_else(|| {
            let lll = (n as f64).ln().ln().ln();
            if lll <= 0.0 {
                n
            } else {
                ((4.0 * (n as f64).ln() / lll).ceil() as usize).max(3)
            }
        })
    }
}

/// `[p_1, p_2, p_3, p_4]` with `p_3 = p_4 = min(omega / 4n, p / 4)`,
/// `p_1 = p_2` and `1 - p = prod (1 - p_i)`.
pub fn ordered_layer_probs(n: usize, p: f64, omega: f64) -> Result<[f64; 4]> {
    if !(0.0..1.0).contains(&p) || n == 0 || omega < 0.0 {
        return Err(Error::invalid("need 0 <= p < 1, n >= 1 and omega >= 0"));
    }
    let p3 = (omega / (4.0 * n as f64)).min(p / 4.0);
    let p1 = 1.0 - ((1.0 - p) / ((1.0 - p3) * (1.0 - p3))).sqrt();
    Ok([p1, p1, p3, p3])
}

/// Outcome of the structural checks on SMALL, computed on the sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureReport {
    /// `|SMALL| <= n^(1/3)`.
    pub small_bounded: bool,
    /// Distinct SMALL vertices are at distance at least 5.
    pub small_separated: bool,
    /// No cycle of length 3 or 4 passes through a SMALL vertex.
    pub small_no_short_cycle: bool,
}

impl StructureReport {
    pub fn all(&self) -> bool {
        self.small_bounded && self.small_separated && self.small_no_short_cycle
    }
}

/// SMALL, TINY and AVOID = SMALL ∪ N(SMALL) ∪ TINY, with neighborhoods
/// taken in the union of all layers. TINY only grows.
#[derive(Clone, Debug)]
pub struct VertexClassification {
    pub theta_small: f64,
    pub theta_tiny: f64,
    pub structure: StructureReport,
    tiny0: Vec<Vertex>,
    small: Vec<bool>,
    near_small: Vec<bool>,
    tiny: Vec<bool>,
}

impl VertexClassification {
    pub fn n(&self) -> usize {
        self.small.len() - 1
    }

    pub fn is_small(&self, v: Vertex) -> bool {
        self.small[v as usize]
    }

    pub fn is_tiny(&self, v: Vertex) -> bool {
        self.tiny[v as usize]
    }

    pub fn is_avoid(&self, v: Vertex) -> bool {
        let i = v as usize;
        self.small[i] || self.near_small[i] || self.tiny[i]
    }

    fn members(flags: &[bool]) -> Vec<Vertex> {
        (1..flags.len()).filter(|&i| flags[i]).map(|i| i as Vertex).collect()
    }

    pub fn small(&self) -> Vec<Vertex> {
        Self::members(&self.small)
    }

    pub fn tiny0(&self) -> &[Vertex] {
        &self.tiny0
    }

    pub fn tiny(&self) -> Vec<Vertex> {
        Self::members(&self.tiny)
    }

    pub fn avoid(&self) -> Vec<Vertex> {
        (1..=self.n() as Vertex).filter(|&v| self.is_avoid(v)).collect()
    }

    pub fn tiny_len(&self) -> usize {
        self.tiny.iter().filter(|&&t| t).count()
    }

    pub fn avoid_len(&self) -> usize {
        (1..=self.n() as Vertex).filter(|&v| self.is_avoid(v)).count()
    }

    /// Moves `v` into TINY, which also puts it in AVOID.
    pub fn add_tiny(&mut self, v: Vertex) {
        self.tiny[v as usize] = true;
    }
}

/// Classifies the vertices of `lg`, whose first two layers play the roles
/// of `Gamma_1` and `Gamma_2`.
pub fn classify(lg: &LayeredGraph, params: &OrderedParams) -> Result<VertexClassification> {
    if lg.layers().len() < 2 {
        return Err(Error::invalid("classification needs at least two layers"));
    }
    let n = lg.n();
    let p1 = lg.layer_probs()[0];
    let theta_small = params.theta_small(n, p1);
    let theta_tiny = params.theta_tiny(n, p1);
    let gamma1 = lg.layer(0);
    let g1 = lg.union_of(&[0, 1]);
    let g = lg.union();
    let mut small = vec![false; n + 1];
    let mut tiny = vec![false; n + 1];
    for v in g.vertices() {
        small[v as usize] = g1.degree(v) as f64 <= theta_small;
        tiny[v as usize] = gamma1.degree(v) as f64 <= theta_tiny;
    }
    let mut near_small = vec![false; n + 1];
    for v in g.vertices().filter(|&v| small[v as usize]) {
        for &w in g.neighbors(v) {
            near_small[w as usize] |= !small[w as usize];
        }
    }
    let small_list: Vec<Vertex> = VertexClassification::members(&small);
    let structure = StructureReport {
        small_bounded: small_list.len() as f64 <= (n as f64).cbrt(),
        small_separated: small_list.iter().all(|&v| {
            let d = g.distances_from(v);
            small_list.iter().all(|&w| w == v || d[w as usize] >= 5)
        }),
        small_no_short_cycle: small_list.iter().all(|&v| !on_short_cycle(&g, v)),
    };
    Ok(VertexClassification {
        theta_small,
        theta_tiny,
        structure,
        tiny0: VertexClassification::members(&tiny),
        small,
        near_small,
        tiny,
    })
}

// A triangle or 4-cycle through v exists iff two neighbors of v are
// adjacent or share a neighbor other than v.
fn on_short_cycle(g: &Graph, v: Vertex) -> bool {
    let nb = g.neighbors(v);
    let mut seen = vec![false; g.n() + 1];
    for &a in nb {
        for &w in g.neighbors(a) {
            if w == v {
                continue;
            }
            if nb.binary_search(&w).is_ok() || seen[w as usize] {
                return true;
            }
        }
        for &w in g.neighbors(a) {
            seen[w as usize] = w != v;
        }
    }
    false
}

/// Anchor paths `P_v` and connectors `Q_v` alternating as
/// `P_1, Q_1, P_2, ..., Q_{s-1}, P_s`. Connector `Q_v` runs from the last
/// vertex of `P_v` to the first vertex of `P_{v+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPath {
    anchors: Vec<Vec<Vertex>>,
    connectors: Vec<Vec<Vertex>>,
}

impl SuperPath {
    pub fn new(anchors: Vec<Vec<Vertex>>, connectors: Vec<Vec<Vertex>>) -> Result<SuperPath> {
        if anchors.is_empty() || anchors.iter().any(|a| a.is_empty()) {
            return Err(Error::invalid("a super-path needs nonempty anchor paths"));
        }
        if connectors.len() + 1 != anchors.len() {
            return Err(Error::invalid("need exactly one connector between consecutive anchors"));
        }
        for (i, q) in connectors.iter().enumerate() {
            let (from, to) = (*anchors[i].last().unwrap(), anchors[i + 1][0]);
            if q.len() < 2 || q[0] != from || *q.last().unwrap() != to {
                return Err(Error::invalid(format!("connector {} does not join {from} to {to}", i + 1)));
            }
        }
        let sp = SuperPath { anchors, connectors };
        let path = sp.path();
        let mut sorted = path.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) || sorted[0] == 0 {
            return Err(Error::invalid("super-path pieces are not vertex-disjoint"));
        }
        Ok(sp)
    }

    pub fn anchors(&self) -> &[Vec<Vertex>] {
        &self.anchors
    }

    pub fn connectors(&self) -> &[Vec<Vertex>] {
        &self.connectors
    }

    /// The concatenation `P*`.
    pub fn path(&self) -> Vec<Vertex> {
        let mut out = self.anchors[0].clone();
        for (q, a) in self.connectors.iter().zip(&self.anchors[1..]) {
            out.extend_from_slice(&q[1..q.len() - 1]);
            out.extend_from_slice(a);
        }
        out
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.anchors[0][0], *self.anchors.last().unwrap().last().unwrap())
    }

    /// Number of vertices of `P*`.
    pub fn len(&self) -> usize {
        self.anchors.iter().map(Vec::len).sum::<usize>()
            + self.connectors.iter().map(|q| q.len() - 2).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stage {
    Input,
    Anchor(Vertex),
    Connector(usize),
    CoreFloor,
    Completion,
    Validation,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Input => write!(f, "input"),
            Stage::Anchor(v) => write!(f, "anchor:{v}"),
            Stage::Connector(i) => write!(f, "connector:{i}"),
            Stage::CoreFloor => write!(f, "core-floor"),
            Stage::Completion => write!(f, "completion"),
            Stage::Validation => write!(f, "validation"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageError {
    pub stage: Stage,
    pub detail: String,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.stage, self.detail)
    }
}

impl std::error::Error for StageError {}

fn stage_err<T>(stage: Stage, detail: impl Into<String>) -> Result<T, StageError> {
    Err(StageError {
        stage,
        detail: detail.into(),
    })
}

struct Forbidden {
    flags: Vec<bool>,
}

impl Forbidden {
    fn new(n: usize) -> Forbidden {
        Forbidden {
            flags: vec![false; n + 1],
        }
    }

    fn has(&self, v: Vertex) -> bool {
        self.flags[v as usize]
    }

    fn set(&mut self, v: Vertex) {
        self.flags[v as usize] = true;
    }
}

/// Builds `P_v` for each `v` of `s0_order`. A vertex outside TINY is its
/// own anchor. A TINY vertex gets two arms of at most three edges: the
/// first edge is any `G_1` edge at `v`, later edges are `Gamma_2` edges,
/// and each arm ends outside AVOID. Arms avoid other listed vertices,
/// earlier anchors and, from the second anchor on, `N(x_1)`.
pub fn build_anchor_paths(
    lg: &LayeredGraph,
    cls: &VertexClassification,
    s0_order: &[Vertex],
    trials: usize,
) -> Result<Vec<Vec<Vertex>>, StageError> {
    let n = lg.n();
    if let Err(e) = check_order(n, s0_order) {
        return stage_err(Stage::Input, e.to_string());
    }
    let gamma2 = lg.layer(1);
    let g1 = lg.union_of(&[0, 1]);
    let mut used = Forbidden::new(n);
    for &v in s0_order {
        used.set(v);
    }
    let mut near_x1 = Forbidden::new(n);
    let mut anchors: Vec<Vec<Vertex>> = Vec::with_capacity(s0_order.len());
    for (k, &v) in s0_order.iter().enumerate() {
        if !cls.is_tiny(v) {
            anchors.push(vec![v]);
        } else {
            let ends_ok = |w: Vertex, used: &Forbidden| !used.has(w) && !near_x1.has(w) && !cls.is_avoid(w);
            let mids_ok = |w: Vertex, used: &Forbidden, first_hop: bool| {
                !used.has(w)
                    && !near_x1.has(w)
                    && !cls.is_tiny(w)
                    && (!cls.is_avoid(w) || (first_hop && cls.is_small(v) && !cls.is_small(w)))
            };
            let mut arms = Vec::with_capacity(2);
            for _ in 0..2 {
                let arm = grow_arm(v, &g1, gamma2, &used, trials, ends_ok, mids_ok);
                match arm {
                    Some(arm) => {
                        for &w in &arm[1..] {
                            used.set(w);
                        }
                        arms.push(arm);
                    }
                    None => {
                        return stage_err(
                            Stage::Anchor(v),
                            format!("no arm to a vertex outside AVOID within {trials} trials"),
                        )
                    }
                }
            }
            let mut path: Vec<Vertex> = arms[0].iter().rev().copied().collect();
            path.extend_from_slice(&arms[1][1..]);
            anchors.push(path);
        }
        if k == 0 {
            let x1 = anchors[0][0];
            for &w in g1.neighbors(x1) {
                near_x1.set(w);
            }
        }
    }
    Ok(anchors)
}

// Arm (v, a, [b,] x) found by scanning G_1-neighbors a of v in order.
fn grow_arm(
    v: Vertex,
    g1: &Graph,
    gamma2: &Graph,
    used: &Forbidden,
    trials: usize,
    ends_ok: impl Fn(Vertex, &Forbidden) -> bool,
    mids_ok: impl Fn(Vertex, &Forbidden, bool) -> bool,
) -> Option<Vec<Vertex>> {
    let mut tried = 0;
    for &a in g1.neighbors(v) {
        if used.has(a) {
            continue;
        }
        if tried == trials {
            break;
        }
        tried += 1;
        if ends_ok(a, used) {
            return Some(vec![v, a]);
        }
        if !mids_ok(a, used, true) {
            continue;
        }
        if let Some(&x) = gamma2.neighbors(a).iter().find(|&&x| x != v && ends_ok(x, used)) {
            return Some(vec![v, a, x]);
        }
        for &b in gamma2.neighbors(a) {
            if b == v || !mids_ok(b, used, false) {
                continue;
            }
            if let Some(&x) = gamma2
                .neighbors(b)
                .iter()
                .find(|&&x| x != v && x != a && ends_ok(x, used))
            {
                return Some(vec![v, a, b, x]);
            }
        }
    }
    None
}

/// A connector with its split into an entry hop, a `Gamma_1` core walk and
/// an exit hop. Hops are the end edges that are not `Gamma_1` edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connector {
    pub path: Vec<Vertex>,
    pub segments: [usize; 3],
}

/// Connector transcript: the paths and the pruning history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectReport {
    pub connectors: Vec<Connector>,
    /// Core size after the initial pruning and after each connector.
    pub core_sizes: Vec<usize>,
    /// `|TINY|` at the same moments.
    pub tiny_sizes: Vec<usize>,
}

/// Joins consecutive anchors by shortest paths whose interiors are
/// `Gamma_1` core vertices linked by `Gamma_1` edges; the end edges may be
/// any `G_1` edges. The core starts as the vertices outside AVOID, the
/// listed vertices and the anchors, and is pruned to `Gamma_1`-degree
/// above `theta_tiny` before the first connector and after each one; pruned
/// vertices join TINY.
pub fn connect_paths(
    lg: &LayeredGraph,
    cls: &mut VertexClassification,
    s0_order: &[Vertex],
    anchors: &[Vec<Vertex>],
    params: &OrderedParams,
) -> Result<ConnectReport, StageError> {
    let n = lg.n();
    let gamma1 = lg.layer(0);
    let g1 = lg.union_of(&[0, 1]);
    let floor = (params.core_floor * n as f64).ceil() as usize;
    let budget = params.diameter_budget(n);
    let mut in_core = vec![false; n + 1];
    let mut blocked = vec![false; n + 1];
    for &v in s0_order {
        blocked[v as usize] = true;
    }
    for a in anchors {
        for &v in a {
            blocked[v as usize] = true;
        }
    }
    for v in 1..=n as Vertex {
        in_core[v as usize] = !blocked[v as usize] && !cls.is_avoid(v);
    }
    let mut report = ConnectReport {
        connectors: Vec::new(),
        core_sizes: Vec::new(),
        tiny_sizes: Vec::new(),
    };
    let mut core_size = prune_core(gamma1, cls, &mut in_core);
    report.core_sizes.push(core_size);
    report.tiny_sizes.push(cls.tiny_len());
    if core_size < floor {
        return stage_err(Stage::CoreFloor, format!("core has {core_size} vertices, floor is {floor}"));
    }
    let mut parent = vec![0 as Vertex; n + 1];
    for i in 0..anchors.len().saturating_sub(1) {
        let from = *anchors[i].last().unwrap();
        let to = anchors[i + 1][0];
        let path = match core_bfs(gamma1, &g1, &in_core, from, to, &mut parent) {
            Some(p) => p,
            None => return stage_err(Stage::Connector(i + 1), format!("no route from {from} to {to}")),
        };
        let len = path.len() - 1;
        if len > budget {
            return stage_err(
                Stage::Connector(i + 1),
                format!("shortest route {from} -> {to} has length {len}, budget {budget}"),
            );
        }
        let entry = usize::from(!gamma1.has_edge(path[0], path[1]));
        let exit = if len >= 2 {
            usize::from(!gamma1.has_edge(path[len - 1], path[len]))
        } else {
            0
        };
        for &v in &path[1..len] {
            in_core[v as usize] = false;
        }
        report.connectors.push(Connector {
            segments: [entry, len - entry - exit, exit],
            path,
        });
        core_size = prune_core(gamma1, cls, &mut in_core);
        report.core_sizes.push(core_size);
        report.tiny_sizes.push(cls.tiny_len());
        if core_size < floor {
            return stage_err(Stage::CoreFloor, format!("core has {core_size} vertices, floor is {floor}"));
        }
    }
    Ok(report)
}

// Iteratively removes core vertices of low core degree into TINY.
fn prune_core(gamma1: &Graph, cls: &mut VertexClassification, in_core: &mut [bool]) -> usize {
    let n = gamma1.n();
    let mut deg = vec![0usize; n + 1];
    let mut queue = VecDeque::new();
    for v in 1..=n as Vertex {
        if in_core[v as usize] {
            deg[v as usize] = gamma1.neighbors(v).iter().filter(|&&w| in_core[w as usize]).count();
            if deg[v as usize] as f64 <= cls.theta_tiny {
                queue.push_back(v);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        if !in_core[v as usize] {
            continue;
        }
        in_core[v as usize] = false;
        cls.add_tiny(v);
        for &w in gamma1.neighbors(v) {
            if in_core[w as usize] {
                deg[w as usize] -= 1;
                if deg[w as usize] as f64 <= cls.theta_tiny {
                    queue.push_back(w);
                }
            }
        }
    }
    in_core.iter().filter(|&&c| c).count()
}

// Shortest route whose end edges are G_1 edges and whose interior is a
// Gamma_1 walk through core vertices.
fn core_bfs(
    gamma1: &Graph,
    g1: &Graph,
    in_core: &[bool],
    from: Vertex,
    to: Vertex,
    parent: &mut [Vertex],
) -> Option<Vec<Vertex>> {
    parent.fill(0);
    parent[from as usize] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if g1.has_edge(u, to) {
            let mut path = vec![to, u];
            let mut x = u;
            while x != from {
                x = parent[x as usize];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        let nbrs = if u == from { g1.neighbors(u) } else { gamma1.neighbors(u) };
        for &w in nbrs {
            if parent[w as usize] == 0 && in_core[w as usize] {
                parent[w as usize] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// `g` with the interior of `P*` removed and `e* = {x*, y*}` added,
/// relabeled to `1..=n'` in increasing old-label order.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// `None` when `P*` is a single vertex.
    pub e_star: Option<Edge>,
    old_label: Vec<Vertex>,
    new_label: Vec<Vertex>,
    path: Vec<Vertex>,
}

impl Contraction {
    pub fn old_label(&self, v: Vertex) -> Vertex {
        self.old_label[v as usize]
    }

    /// New label of an old vertex, or `None` for interior vertices of `P*`.
    pub fn new_label(&self, v: Vertex) -> Option<Vertex> {
        Some(self.new_label[v as usize]).filter(|&x| x != 0)
    }

    /// Another graph on the old vertex set, induced on the kept vertices
    /// and relabeled the same way (without `e*`).
    pub fn restrict(&self, h: &Graph) -> Graph {
        h.induced(&self.old_label[1..]).0
    }

    /// Maps a Hamilton cycle of the contracted graph that uses `e*` back to
    /// a Hamilton cycle of the original graph containing `P*` as a subpath.
    pub fn expand(&self, cycle: &[Vertex]) -> Result<HamCycle> {
        let k = cycle.len();
        let mut seq: Vec<Vertex> = cycle.iter().map(|&v| self.old_label(v)).collect();
        if let Some(e) = self.e_star {
            let (x, y) = (self.old_label(e.lo()), self.old_label(e.hi()));
            let (a, b) = (self.path[0], *self.path.last().unwrap());
            let pos = (0..k)
                .find(|&i| Edge::try_new(seq[i], seq[(i + 1) % k]) == Some(Edge::new(x, y)))
                .ok_or_else(|| Error::invalid("the cycle does not use the contracted edge"))?;
            seq.rotate_left(pos + 1);
            // now seq ends at one end of e* and starts at the other
            let last = *seq.last().unwrap();
            let interior = &self.path[1..self.path.len() - 1];
            if last == a && seq[0] == b {
                seq.extend_from_slice(interior);
            } else {
                seq.extend(interior.iter().rev());
            }
        }
        HamCycle::rooted(&seq)
    }
}

/// Contracts `P*` in `g`. Edges at interior vertices disappear and `e*`
/// joins the endpoints; a single-vertex `P*` leaves `g` unchanged.
pub fn contract_superpath(g: &Graph, sp: &SuperPath) -> Result<Contraction> {
    let path = sp.path();
    let n = g.n();
    if path.iter().any(|&v| v == 0 || v as usize > n) {
        return Err(Error::invalid("super-path vertex out of range"));
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::invalid(format!("super-path uses the non-edge {{{}, {}}}", w[0], w[1])));
    }
    let mut interior = vec![false; n + 1];
    if path.len() > 2 {
        for &v in &path[1..path.len() - 1] {
            interior[v as usize] = true;
        }
    }
    let keep: Vec<Vertex> = (1..=n as Vertex).filter(|&v| !interior[v as usize]).collect();
    let (h, back) = g.induced(&keep);
    let mut new_label = vec![0 as Vertex; n + 1];
    for (i, &v) in back.iter().enumerate().skip(1) {
        new_label[v as usize] = i as Vertex;
    }
    let (x, y) = sp.endpoints();
    let e_star = (x != y).then(|| Edge::new(new_label[x as usize], new_label[y as usize]));
    let graph = match e_star {
        Some(e) => h.with_extra_edges([e]),
        None => h,
    };
    Ok(Contraction {
        graph,
        e_star,
        old_label: back,
        new_label,
        path,
    })
}

/// Pipeline transcript, serializable as key-value text.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OrderedReport {
    pub n: usize,
    pub s0: usize,
    /// `done` or the failing stage.
    pub stage: String,
    pub small: usize,
    pub tiny0: usize,
    pub tiny_final: usize,
    pub avoid_final: usize,
    pub structure_ok: Option<bool>,
    pub anchor_lengths: Vec<usize>,
    pub connector_lengths: Vec<usize>,
    pub connector_segments: Vec<[usize; 3]>,
    pub core_sizes: Vec<usize>,
    pub tiny_sizes: Vec<usize>,
    pub core_floor: usize,
    pub diameter_budget: usize,
    /// Vertices of `P*`.
    pub p_star: usize,
    pub contracted_n: usize,
    pub boosters_available: usize,
    pub boosters_used: usize,
    pub detail: String,
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl OrderedReport {
    pub fn to_key_value(&self) -> String {
        let segs: Vec<String> = self
            .connector_segments
            .iter()
            .map(|s| format!("{}+{}+{}", s[0], s[1], s[2]))
            .collect();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        kv("n", self.n.to_string());
        kv("s0", self.s0.to_string());
        kv("stage", self.stage.clone());
        kv("small", self.small.to_string());
        kv("tiny0", self.tiny0.to_string());
        kv("tiny_final", self.tiny_final.to_string());
        kv("avoid_final", self.avoid_final.to_string());
        kv(
            "structure_ok",
            self.structure_ok.map_or("unchecked".into(), |b| b.to_string()),
        );
        kv("anchor_lengths", join(&self.anchor_lengths));
        kv("connector_lengths", join(&self.connector_lengths));
        kv("connector_segments", segs.join(","));
        kv("core_sizes", join(&self.core_sizes));
        kv("tiny_sizes", join(&self.tiny_sizes));
        kv("core_floor", self.core_floor.to_string());
        kv("diameter_budget", self.diameter_budget.to_string());
        kv("p_star", self.p_star.to_string());
        kv("contracted_n", self.contracted_n.to_string());
        kv("boosters_available", self.boosters_available.to_string());
        kv("boosters_used", self.boosters_used.to_string());
        kv("detail", self.detail.replace('\n', " "));
        out
    }
}

#[derive(Clone, Debug)]
pub struct OrderedSolution {
    pub cycle: HamCycle,
    pub superpath: Option<SuperPath>,
    pub report: OrderedReport,
}

#[derive(Clone, Debug)]
pub struct OrderedFailure {
    pub error: StageError,
    pub report: OrderedReport,
}

impl fmt::Display for OrderedFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for OrderedFailure {}

fn check_order(n: usize, s0: &[Vertex]) -> Result<()> {
    let mut seen = vec![false; n + 1];
    for &v in s0 {
        if v == 0 || v as usize > n {
            return Err(Error::invalid(format!("vertex {v} outside 1..={n}")));
        }
        if seen[v as usize] {
            return Err(Error::invalid(format!("vertex {v} listed twice")));
        }
        seen[v as usize] = true;
    }
    Ok(())
}

/// Searches for a Hamilton cycle of the union of `lg` that visits
/// `s0_order` in cyclic order, either direction. Layers beyond the first
/// two play `Gamma_3` (extra edges) and `Gamma_4` (boosters); missing ones
/// are empty.
///
/// With fewer than three listed vertices every Hamilton cycle qualifies and
/// the search is `posa_solve` on the union with the same seed.
pub fn solve_ordered(
    lg: &LayeredGraph,
    s0_order: &[Vertex],
    params: &OrderedParams,
    seed: u64,
) -> Result<OrderedSolution, OrderedFailure> {
    let n = lg.n();
    let g = lg.union();
    let mut report = OrderedReport {
        n,
        s0: s0_order.len(),
        core_floor: (params.core_floor * n as f64).ceil() as usize,
        diameter_budget: params.diameter_budget(n),
        ..Default::default()
    };
    let fail = |mut report: OrderedReport, error: StageError| {
        report.stage = error.stage.to_string();
        report.detail = error.detail.clone();
        Err(OrderedFailure { error, report })
    };
    if let Err(e) = check_order(n, s0_order) {
        return fail(report, StageError { stage: Stage::Input, detail: e.to_string() });
    }
    if s0_order.len() < 3 {
        return match posa_solve(&g, &[], None, &params.rotation, seed) {
            Ok(sol) => finish(&g, s0_order, sol.cycle, None, report, 0),
            Err(e) => fail(report, completion_error(e)),
        };
    }
    if lg.layers().len() < 2 {
        return fail(
            report,
            StageError { stage: Stage::Input, detail: "need at least two layers".into() },
        );
    }
    let mut cls = classify(lg, params).expect("two layers present");
    report.small = cls.small().len();
    report.tiny0 = cls.tiny0().len();
    report.structure_ok = Some(cls.structure.all());
    let snapshot = |report: &mut OrderedReport, cls: &VertexClassification| {
        report.tiny_final = cls.tiny_len();
        report.avoid_final = cls.avoid_len();
    };
    snapshot(&mut report, &cls);

    let anchors = match build_anchor_paths(lg, &cls, s0_order, params.anchor_trials) {
        Ok(a) => a,
        Err(e) => return fail(report, e),
    };
    report.anchor_lengths = anchors.iter().map(|a| a.len() - 1).collect();
    let connect = connect_paths(lg, &mut cls, s0_order, &anchors, params);
    snapshot(&mut report, &cls);
    let connect = match connect {
        Ok(c) => c,
        Err(e) => return fail(report, e),
    };
    report.connector_lengths = connect.connectors.iter().map(|c| c.path.len() - 1).collect();
    report.connector_segments = connect.connectors.iter().map(|c| c.segments).collect();
    report.core_sizes = connect.core_sizes;
    report.tiny_sizes = connect.tiny_sizes;
    let sp = SuperPath::new(anchors, connect.connectors.into_iter().map(|c| c.path).collect())
        .expect("pipeline pieces are disjoint and chained");
    report.p_star = sp.len();

    let layers = lg.layers();
    let empty = Graph::empty(n);
    let g3 = Graph::union([&layers[0], &layers[1], layers.get(2).unwrap_or(&empty)]).expect("same n");
    let contraction = match contract_superpath(&g3, &sp) {
        Ok(c) => c,
        Err(e) => return fail(report, StageError { stage: Stage::Completion, detail: e.to_string() }),
    };
    report.contracted_n = contraction.graph.n();
    let mut boosters: Vec<Edge> = contraction.restrict(layers.get(3).unwrap_or(&empty)).edges().collect();
    boosters.shuffle(&mut stream(seed, "ordered-boosters", 0));
    report.boosters_available = boosters.len();
    let sol = match posa_solve(
        &contraction.graph,
        &boosters,
        contraction.e_star,
        &params.rotation,
        derive_seed(seed, "ordered-completion", 0),
    ) {
        Ok(sol) => sol,
        Err(e) => return fail(report, completion_error(e)),
    };
    let used = sol.used_boosters.len();
    let cycle = match contraction.expand(sol.cycle.as_slice()) {
        Ok(c) => c,
        Err(e) => return fail(report, StageError { stage: Stage::Validation, detail: e.to_string() }),
    };
    finish(&g, s0_order, cycle, Some(sp), report, used)
}

fn completion_error(e: PosaFailure) -> StageError {
    StageError {
        stage: Stage::Completion,
        detail: e.to_string(),
    }
}

fn finish(
    g: &Graph,
    s0_order: &[Vertex],
    cycle: HamCycle,
    superpath: Option<SuperPath>,
    mut report: OrderedReport,
    boosters_used: usize,
) -> Result<OrderedSolution, OrderedFailure> {
    report.boosters_used = boosters_used;
    if !validate_cycle(g, cycle.as_slice(), None) || !validate_order(&cycle, s0_order) {
        report.stage = Stage::Validation.to_string();
        report.detail = "expanded cycle failed validation".into();
        return Err(OrderedFailure {
            error: StageError {
                stage: Stage::Validation,
                detail: report.detail.clone(),
            },
            report,
        });
    }
    report.stage = "done".into();
    Ok(OrderedSolution {
        cycle,
        superpath,
        report,
    })
}

/// Splits `g` into four layers (see [`ordered_layer_probs`]) and runs
/// [`solve_ordered`]. The split draws from the `split-layers` stream of a
/// seed derived from `seed`.
pub fn solve_ordered_graph(
    g: &Graph,
    s0_order: &[Vertex],
    params: &OrderedParams,
    seed: u64,
) -> Result<OrderedSolution, OrderedFailure> {
    let n = g.n();
    let pairs = (n * n.saturating_sub(1) / 2).max(1);
    let p = params.p.unwrap_or(g.edge_count() as f64 / pairs as f64).min(0.999);
    let split = ordered_layer_probs(n, p, params.omega)
        .and_then(|probs| split_layers(g, &probs, derive_seed(seed, "ordered-split", 0)));
    match split {
        Ok(lg) => solve_ordered(&lg, s0_order, params, seed),
        Err(e) => Err(OrderedFailure {
            error: StageError {
                stage: Stage::Input,
                detail: e.to_string(),
            },
            report: OrderedReport {
                n,
                s0: s0_order.len(),
                stage: Stage::Input.to_string(),
                detail: e.to_string(),
                ..Default::default()
            },
        }),
    }
}

/// True iff `h` restricted to `s0_order`'s vertices, read in some rotation
/// and either direction, equals `s0_order`. Vertices are not required to be
/// consecutive on `h`.
pub fn validate_order(h: &HamCycle, s0_order: &[Vertex]) -> bool {
    order_matches(h, s0_order, false)
}

/// Like [`validate_order`] but only the traversal direction of `h` counts.
pub fn validate_order_strict(h: &HamCycle, s0_order: &[Vertex]) -> bool {
    order_matches(h, s0_order, true)
}

fn order_matches(h: &HamCycle, s0: &[Vertex], strict: bool) -> bool {
    let n = h.len();
    if !is_permutation(h.as_slice()) || check_order(n, s0).is_err() {
        return false;
    }
    let k = s0.len();
    if k == 0 {
        return true;
    }
    let mut rank = vec![usize::MAX; n + 1];
    for (i, &v) in s0.iter().enumerate() {
        rank[v as usize] = i;
    }
    let seen: Vec<usize> = h
        .as_slice()
        .iter()
        .map(|&v| rank[v as usize])
        .filter(|&r| r != usize::MAX)
        .collect();
    let forward = (0..k).all(|i| seen[(i + 1) % k] == (seen[i] + 1) % k);
    let backward = (0..k).all(|i| seen[(i + 1) % k] == (seen[i] + k - 1) % k);
    forward || (!strict && backward)
}
