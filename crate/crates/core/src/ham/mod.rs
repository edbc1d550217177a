//! Hamilton cycles: the cycle type, an exhaustive oracle for small graphs,
//! restricted rotations and the extension-rotation solver.

mod brute;
mod posa;
mod rotation;

use std::fmt;

pub use brute::{
    brute_hamilton, brute_hamilton_capped, enumerate_hamilton, longest_path_through, BRUTE_CAP,
    ENUMERATE_CAP,
};
pub use posa::{posa_solve, FailReason, PosaFailure, PosaSolution, PosaStats, RotationParams};
pub use rotation::{
    end_set_closure, neighborhood, restricted_rotate, EndClosure, Rotation, RotationError,
    RotationState,
};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

/// A Hamilton cycle as the vertex sequence `(1, i_2, ..., i_n)`, read
/// cyclically. Only the permutation structure is enforced here; whether
/// the consecutive pairs are edges is a question for [`validate_cycle`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HamCycle(Vec<Vertex>);

impl HamCycle {
    /// Requires a permutation of `1..=n` that starts at 1.
    pub fn new(seq: Vec<Vertex>) -> Result<HamCycle> {
        if !is_permutation(&seq) {
            return Err(Error::invalid("cycle is not a permutation of 1..=n"));
        }
        if seq.first() != Some(&1) {
            return Err(Error::invalid("cycle must start at vertex 1"));
        }
        Ok(HamCycle(seq))
    }

    /// Rotates a cyclic permutation so that it starts at 1, keeping the
    /// direction of traversal.
    pub fn rooted(seq: &[Vertex]) -> Result<HamCycle> {
        let at = seq
            .iter()
            .position(|&v| v == 1)
            .ok_or_else(|| Error::invalid("cycle does not contain vertex 1"))?;
        let mut out = Vec::with_capacity(seq.len());
        out.extend_from_slice(&seq[at..]);
        out.extend_from_slice(&seq[..at]);
        HamCycle::new(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    /// The same cycle traversed the other way: `(1, i_n, ..., i_2)`.
    pub fn reversed(&self) -> HamCycle {
        let mut v = Vec::with_capacity(self.0.len());
        v.push(self.0[0]);
        v.extend(self.0[1..].iter().rev());
        HamCycle(v)
    }

    /// The `n` cyclically consecutive pairs, in traversal order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|(u, v)| Edge::try_new(u, v) == Some(e))
    }
}

impl fmt::Display for HamCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

pub(crate) fn is_permutation(seq: &[Vertex]) -> bool {
    let n = seq.len();
    let mut seen = vec![false; n + 1];
    for &v in seq {
        if v == 0 || v as usize > n || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    true
}

/// True iff `seq` is a permutation of the vertices of `g` starting at 1,
/// every cyclic consecutive pair is an edge of `g`, and `required` (if any)
/// is one of those pairs. Graphs with fewer than 3 vertices have no
/// Hamilton cycle.
pub fn validate_cycle(g: &Graph, seq: &[Vertex], required: Option<Edge>) -> bool {
    let n = g.n();
    if n < 3 || seq.len() != n || seq[0] != 1 || !is_permutation(seq) {
        return false;
    }
    let mut has_required = required.is_none();
    for i in 0..n {
        let (u, v) = (seq[i], seq[(i + 1) % n]);
        if !g.has_edge(u, v) {
            return false;
        }
        if let Some(e) = required {
            has_required |= Edge::try_new(u, v) == Some(e);
        }
    }
    has_required
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        let k4 = Graph::complete(4);
        assert!(validate_cycle(&k4, &[1, 2, 3, 4], None));
        let c4 = Graph::from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        assert!(!validate_cycle(&c4, &[1, 3, 2, 4], None));
        assert!(!validate_cycle(&k4, &[1, 2, 3, 4], Some(Edge::new(1, 3))));
        assert!(validate_cycle(&k4, &[1, 2, 3, 4], Some(Edge::new(4, 1))));
    }

    #[test]
    fn validate_rejects_non_permutations() {
        let k4 = Graph::complete(4);
        assert!(!validate_cycle(&k4, &[1, 2, 2, 4], None));
        assert!(!validate_cycle(&k4, &[2, 1, 3, 4], None));
        assert!(!validate_cycle(&k4, &[1, 2, 3], None));
        assert!(!validate_cycle(&Graph::complete(2), &[1, 2], None));
    }

    #[test]
    fn rooted_and_reversed() {
        let h = HamCycle::rooted(&[3, 4, 1, 2]).unwrap();
        assert_eq!(h.as_slice(), &[1, 2, 3, 4]);
        assert_eq!(h.reversed().as_slice(), &[1, 4, 3, 2]);
        assert_eq!(h.to_string(), "1 2 3 4");
        assert!(HamCycle::new(vec![2, 1, 3]).is_err());
        assert!(HamCycle::new(vec![1, 1, 3]).is_err());
    }
}
