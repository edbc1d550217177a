//! Restricted Pósa rotations.
//!
//! For a path `(x_1, ..., x_k)` with fixed endpoint `x_1` and an edge
//! `{x_k, x_i}` with `1 < i < k-1`, the rotation produces
//! `(x_1, ..., x_i, x_k, x_{k-1}, ..., x_{i+1})`, removing the edge
//! `{x_i, x_{i+1}}`. A rotation is restricted when that removed edge is not
//! the protected edge.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotationError {
    #[error("not a simple path of the graph: {0}")]
    InvalidPath(String),
    #[error("pivot {0} is not an edge of the graph")]
    NotAnEdge(Edge),
    #[error("pivot {0} does not touch the free endpoint")]
    NotAtEndpoint(Edge),
    #[error("pivot {0} would not produce a rotation (needs 1 < i < k-1)")]
    PivotOutOfRange(Edge),
    #[error("rotation would remove the protected edge {0}")]
    WouldBreakProtected(Edge),
}

/// One applied rotation: the pivot vertex `x_i`, and the endpoints before
/// and after.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rotation {
    pub pivot: Vertex,
    pub old_end: Vertex,
    pub new_end: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationState {
    path: Vec<Vertex>,
    protected: Option<Edge>,
    end: BTreeSet<Vertex>,
    transcript: Vec<Rotation>,
}

fn check_path(g: &Graph, path: &[Vertex]) -> Result<(), RotationError> {
    if path.is_empty() {
        return Err(RotationError::InvalidPath("empty path".into()));
    }
    let mut seen = HashSet::with_capacity(path.len());
    for &v in path {
        if v == 0 || v as usize > g.n() || !seen.insert(v) {
            return Err(RotationError::InvalidPath(format!("bad or repeated vertex {v}")));
        }
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(RotationError::InvalidPath(format!("{}-{} is not an edge", w[0], w[1])));
    }
    Ok(())
}

fn path_has_edge(path: &[Vertex], e: Edge) -> bool {
    path.windows(2).any(|w| Edge::try_new(w[0], w[1]) == Some(e))
}

impl RotationState {
    pub fn new(g: &Graph, path: Vec<Vertex>, protected: Option<Edge>) -> Result<Self, RotationError> {
        check_path(g, &path)?;
        if let Some(e) = protected {
            if !path_has_edge(&path, e) {
                return Err(RotationError::InvalidPath(format!("protected edge {e} is not on the path")));
            }
        }
        let end = BTreeSet::from([*path.last().unwrap()]);
        Ok(RotationState {
            path,
            protected,
            end,
            transcript: Vec::new(),
        })
    }

    pub fn path(&self) -> &[Vertex] {
        &self.path
    }

    pub fn fixed_endpoint(&self) -> Vertex {
        self.path[0]
    }

    pub fn free_endpoint(&self) -> Vertex {
        *self.path.last().unwrap()
    }

    pub fn protected_edge(&self) -> Option<Edge> {
        self.protected
    }

    /// Endpoints reached so far along this state's history.
    pub fn end(&self) -> &BTreeSet<Vertex> {
        &self.end
    }

    pub fn transcript(&self) -> &[Rotation] {
        &self.transcript
    }
}

pub fn restricted_rotate(
    g: &Graph,
    st: &RotationState,
    pivot_edge: Edge,
) -> Result<RotationState, RotationError> {
    let k = st.path.len();
    let z = st.free_endpoint();
    let x = pivot_edge
        .other(z)
        .ok_or(RotationError::NotAtEndpoint(pivot_edge))?;
    if !g.contains_edge(pivot_edge) {
        return Err(RotationError::NotAnEdge(pivot_edge));
    }
    let i = st
        .path
        .iter()
        .position(|&v| v == x)
        .ok_or(RotationError::PivotOutOfRange(pivot_edge))?;
    // 1 < i < k-1 in 1-based positions
    if i < 1 || i + 3 > k {
        return Err(RotationError::PivotOutOfRange(pivot_edge));
    }
    let broken = Edge::new(st.path[i], st.path[i + 1]);
    if st.protected == Some(broken) {
        return Err(RotationError::WouldBreakProtected(broken));
    }
    let mut path = st.path.clone();
    path[i + 1..].reverse();
    let new_end = path[k - 1];
    let mut end = st.end.clone();
    end.insert(new_end);
    let mut transcript = st.transcript.clone();
    transcript.push(Rotation {
        pivot: x,
        old_end: z,
        new_end,
    });
    Ok(RotationState {
        path,
        protected: st.protected,
        end,
        transcript,
    })
}

/// Result of [`end_set_closure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndClosure {
    /// Endpoints of all paths reached by restricted rotations.
    pub end: BTreeSet<Vertex>,
    /// Number of distinct paths visited.
    pub states: usize,
    /// False when the state budget ran out before the closure was exhausted.
    pub complete: bool,
}

/// Breadth-first closure of `p0` under restricted rotations with `p0[0]`
/// fixed. Distinct paths are the states, so the result is the exact END set
/// whenever `complete` is true. Pivots are tried in ascending label order.
pub fn end_set_closure(
    g: &Graph,
    p0: &[Vertex],
    e_star: Option<Edge>,
    budget: Option<usize>,
) -> Result<EndClosure, RotationError> {
    check_path(g, p0)?;
    if let Some(e) = e_star {
        if !path_has_edge(p0, e) {
            return Err(RotationError::InvalidPath(format!("protected edge {e} is not on the path")));
        }
    }
    let budget = budget.unwrap_or(50 * g.n() * g.n()).max(1);
    let k = p0.len();
    let mut end = BTreeSet::from([*p0.last().unwrap()]);
    let mut seen: HashSet<Vec<Vertex>> = HashSet::from([p0.to_vec()]);
    let mut queue = VecDeque::from([p0.to_vec()]);
    let mut pos = vec![usize::MAX; g.n() + 1];
    while let Some(path) = queue.pop_front() {
        for (i, &v) in path.iter().enumerate() {
            pos[v as usize] = i;
        }
        let z = path[k - 1];
        for &x in g.neighbors(z) {
            let i = pos[x as usize];
            if i == usize::MAX || i < 1 || i + 3 > k {
                continue;
            }
            if e_star == Some(Edge::new(path[i], path[i + 1])) {
                continue;
            }
            let mut next = path.clone();
            next[i + 1..].reverse();
            if seen.contains(&next) {
                continue;
            }
            if seen.len() >= budget {
                return Ok(EndClosure {
                    end,
                    states: seen.len(),
                    complete: false,
                });
            }
            end.insert(next[k - 1]);
            seen.insert(next.clone());
            queue.push_back(next);
        }
        for &v in &path {
            pos[v as usize] = usize::MAX;
        }
    }
    Ok(EndClosure {
        end,
        states: seen.len(),
        complete: true,
    })
}

/// Vertices outside `set` with a neighbor in `set`.
pub fn neighborhood(g: &Graph, set: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
    set.iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|w| !set.contains(w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(g: &Graph, path: &[Vertex], e: Option<Edge>) -> RotationState {
        RotationState::new(g, path.to_vec(), e).unwrap()
    }

    #[test]
    fn rotate_five_path() {
        let g = Graph::complete(5);
        let st = state(&g, &[1, 2, 3, 4, 5], Some(Edge::new(1, 2)));
        let r = restricted_rotate(&g, &st, Edge::new(5, 2)).unwrap();
        assert_eq!(r.path(), &[1, 2, 5, 4, 3]);
        assert_eq!(r.fixed_endpoint(), 1);
        assert_eq!(r.protected_edge(), Some(Edge::new(1, 2)));
        assert_eq!(r.end().iter().copied().collect::<Vec<_>>(), vec![3, 5]);
        assert_eq!(
            r.transcript(),
            &[Rotation {
                pivot: 2,
                old_end: 5,
                new_end: 3
            }]
        );
    }

    #[test]
    fn rotation_is_an_involution() {
        let g = Graph::complete(5);
        let st = state(&g, &[1, 2, 3, 4, 5], None);
        let once = restricted_rotate(&g, &st, Edge::new(5, 2)).unwrap();
        // the removed edge {2,3} is the pivot edge that undoes the rotation
        let twice = restricted_rotate(&g, &once, Edge::new(3, 2)).unwrap();
        assert_eq!(twice.path(), st.path());
    }

    #[test]
    fn protected_edge_blocks_rotation() {
        let g = Graph::complete(5);
        let st = state(&g, &[1, 2, 3, 4, 5], Some(Edge::new(2, 3)));
        assert_eq!(
            restricted_rotate(&g, &st, Edge::new(5, 2)),
            Err(RotationError::WouldBreakProtected(Edge::new(2, 3)))
        );
    }

    #[test]
    fn invalid_pivots() {
        let g = Graph::path(5).with_extra_edges([Edge::new(1, 5)]);
        let st = state(&g, &[1, 2, 3, 4, 5], None);
        assert_eq!(
            restricted_rotate(&g, &st, Edge::new(5, 3)),
            Err(RotationError::NotAnEdge(Edge::new(5, 3)))
        );
        assert_eq!(
            restricted_rotate(&g, &st, Edge::new(1, 3)),
            Err(RotationError::NotAtEndpoint(Edge::new(1, 3)))
        );
        // i = 1 is the fixed endpoint, i = k-1 is the endpoint's own neighbor
        assert!(matches!(
            restricted_rotate(&g, &st, Edge::new(5, 1)),
            Err(RotationError::PivotOutOfRange(_))
        ));
        assert!(matches!(
            restricted_rotate(&g, &st, Edge::new(5, 4)),
            Err(RotationError::PivotOutOfRange(_))
        ));
    }

    #[test]
    fn tree_path_has_no_rotations() {
        let g = Graph::path(6);
        let c = end_set_closure(&g, &[1, 2, 3, 4, 5, 6], None, None).unwrap();
        assert_eq!(c.end, BTreeSet::from([6]));
        assert!(c.complete);
    }

    #[test]
    fn single_vertex_path() {
        let g = Graph::complete(3);
        let c = end_set_closure(&g, &[2], None, None).unwrap();
        assert_eq!(c.end, BTreeSet::from([2]));
    }

    #[test]
    fn k5_closure_obeys_expansion_bound() {
        let g = Graph::complete(5);
        let e = Edge::new(1, 2);
        let c = end_set_closure(&g, &[1, 2, 3, 4, 5], Some(e), None).unwrap();
        // 1 is fixed and 2 sits behind the protected edge, so 3, 4, 5 are reachable
        assert_eq!(c.end, BTreeSet::from([3, 4, 5]));
        let nb = neighborhood(&g, &c.end);
        assert!(nb.len() <= 2 * c.end.len() + 1);
    }

    #[test]
    fn budget_is_reported() {
        let g = Graph::complete(7);
        let c = end_set_closure(&g, &[1, 2, 3, 4, 5, 6, 7], None, Some(2)).unwrap();
        assert!(!c.complete);
    }
}
