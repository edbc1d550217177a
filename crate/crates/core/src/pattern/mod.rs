//! Color-patterned Hamilton cycles: problem definition, exact and
//! heuristic search, rainbow checks, spread enumeration and the coupling
//! experiment.

mod coupling;
mod search;
mod spread;

pub use coupling::{coupling_monotonicity, CouplingParams};
pub use search::{find_combined, find_patterned, PatternMatch, SearchMode, DEFAULT_NODE_BUDGET, PATTERN_EXACT_CAP};
pub use spread::{automorphism_count, spread_ratio, SpreadReport, SPREAD_CAP};

use crate::coloring::{ColorPattern, EdgeColoring, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::ham::{is_permutation, HamCycle};

/// A graph with optional edge and vertex patterns. A vertex sequence
/// `(x_1, ..., x_n)` satisfies the problem when it is a Hamilton cycle read
/// cyclically, edge `{x_i, x_{i+1}}` has color `c1[i]`, vertex `x_i` has
/// color `c2[i]`, and (if rainbow) all `n` edge colors differ.
#[derive(Clone, Debug)]
pub struct PatternProblem {
    graph: Graph,
    edge_coloring: Option<EdgeColoring>,
    vertex_coloring: Option<VertexColoring>,
    edge_pattern: Option<ColorPattern>,
    vertex_pattern: Option<ColorPattern>,
    rainbow: bool,
}

impl PatternProblem {
    pub fn new(graph: Graph) -> PatternProblem {
        PatternProblem {
            graph,
            edge_coloring: None,
            vertex_coloring: None,
            edge_pattern: None,
            vertex_pattern: None,
            rainbow: false,
        }
    }

    fn set_edge_coloring(&mut self, ec: EdgeColoring) -> Result<()> {
        if !ec.covers(&self.graph) {
            return Err(Error::invalid("the edge coloring must color exactly the graph's edges"));
        }
        match &self.edge_coloring {
            Some(old) if *old != ec => Err(Error::invalid("a different edge coloring is already set")),
            _ => {
                self.edge_coloring = Some(ec);
                Ok(())
            }
        }
    }

    pub fn with_edge_pattern(mut self, ec: EdgeColoring, c1: ColorPattern) -> Result<PatternProblem> {
        if c1.len() != self.graph.n() {
            return Err(Error::invalid(format!(
                "edge pattern has length {}, graph has {} vertices",
                c1.len(),
                self.graph.n()
            )));
        }
        self.set_edge_coloring(ec)?;
        self.edge_pattern = Some(c1);
        Ok(self)
    }

    /// Rejects patterns whose color counts differ from the class sizes,
    /// since no Hamilton cycle can then follow the pattern.
    pub fn with_vertex_pattern(mut self, vc: VertexColoring, c2: ColorPattern) -> Result<PatternProblem> {
        let n = self.graph.n();
        if vc.n() != n || c2.len() != n {
            return Err(Error::invalid("vertex coloring and pattern must both have length n"));
        }
        let mut want = c2.counts().to_vec();
        let mut have = vc.class_sizes().to_vec();
        let len = want.len().max(have.len());
        want.resize(len, 0);
        have.resize(len, 0);
        if want != have {
            return Err(Error::invalid(format!(
                "infeasible vertex pattern: color counts {want:?} differ from class sizes {have:?}"
            )));
        }
        self.vertex_coloring = Some(vc);
        self.vertex_pattern = Some(c2);
        Ok(self)
    }

    pub fn with_rainbow(mut self, ec: EdgeColoring) -> Result<PatternProblem> {
        self.set_edge_coloring(ec)?;
        self.rainbow = true;
        Ok(self)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edge_coloring(&self) -> Option<&EdgeColoring> {
        self.edge_coloring.as_ref()
    }

    pub fn vertex_coloring(&self) -> Option<&VertexColoring> {
        self.vertex_coloring.as_ref()
    }

    pub fn edge_pattern(&self) -> Option<&ColorPattern> {
        self.edge_pattern.as_ref()
    }

    pub fn vertex_pattern(&self) -> Option<&ColorPattern> {
        self.vertex_pattern.as_ref()
    }

    pub fn rainbow(&self) -> bool {
        self.rainbow
    }

    /// Checks a presentation `(x_1, ..., x_n)` directly against the graph
    /// and colorings.
    pub fn is_satisfied_by(&self, seq: &[Vertex]) -> bool {
        let n = self.n();
        if n < 3 || seq.len() != n || !is_permutation(seq) {
            return false;
        }
        let mut seen_colors = Vec::new();
        for i in 0..n {
            let (u, v) = (seq[i], seq[(i + 1) % n]);
            if !self.graph.has_edge(u, v) {
                return false;
            }
            if let (Some(vc), Some(c2)) = (&self.vertex_coloring, &self.vertex_pattern) {
                if vc.color(u) != c2.get(i) {
                    return false;
                }
            }
            if let Some(ec) = &self.edge_coloring {
                let c = ec.color(u, v).expect("coloring covers the graph");
                if self.edge_pattern.as_ref().is_some_and(|c1| c1.get(i) != c) {
                    return false;
                }
                seen_colors.push(c);
            }
        }
        if self.rainbow {
            seen_colors.sort_unstable();
            if seen_colors.windows(2).any(|w| w[0] == w[1]) {
                return false;
            }
        }
        true
    }

    /// A presentation of `h` (any rotation, either direction) that
    /// satisfies the problem.
    pub fn alignment_of(&self, h: &[Vertex]) -> Option<Vec<Vertex>> {
        let n = h.len();
        let reversed: Vec<Vertex> = h.iter().rev().copied().collect();
        for base in [h, &reversed[..]] {
            for r in 0..n {
                let seq: Vec<Vertex> = base[r..].iter().chain(&base[..r]).copied().collect();
                if self.is_satisfied_by(&seq) {
                    return Some(seq);
                }
            }
        }
        None
    }
}

/// True iff the `n` edges of `h` carry `n` distinct colors.
pub fn check_rainbow(h: &HamCycle, ec: &EdgeColoring) -> bool {
    let mut colors = Vec::with_capacity(h.len());
    for (u, v) in h.edges() {
        match ec.color(u, v) {
            Some(c) => colors.push(c),
            None => return false,
        }
    }
    colors.sort_unstable();
    h.len() >= 3 && colors.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    #[test]
    fn rainbow_examples() {
        let g = Graph::complete(3);
        let h = HamCycle::new(vec![1, 2, 3]).unwrap();
        let ec = EdgeColoring::new(
            3,
            vec![(Edge::new(1, 2), 1), (Edge::new(2, 3), 2), (Edge::new(1, 3), 3)],
        )
        .unwrap();
        assert!(check_rainbow(&h, &ec));
        let ec = EdgeColoring::new(
            2,
            vec![(Edge::new(1, 2), 1), (Edge::new(2, 3), 1), (Edge::new(1, 3), 2)],
        )
        .unwrap();
        assert!(!check_rainbow(&h, &ec));
        let one = EdgeColoring::from_fn(&g, 1, |_| 1).unwrap();
        assert!(!check_rainbow(&h, &one));
    }

    #[test]
    fn infeasible_vertex_pattern_is_rejected() {
        let vc = VertexColoring::block(4, &[2, 2]).unwrap();
        let c2 = ColorPattern::new(vec![1, 1, 1, 2]).unwrap();
        assert!(PatternProblem::new(Graph::complete(4)).with_vertex_pattern(vc, c2).is_err());
    }

    #[test]
    fn alignment_searches_rotations_and_reflections() {
        let g = Graph::complete(4);
        let vc = VertexColoring::block(4, &[2, 2]).unwrap();
        let c2 = ColorPattern::new(vec![2, 1, 2, 1]).unwrap();
        let prob = PatternProblem::new(g).with_vertex_pattern(vc, c2).unwrap();
        assert!(!prob.is_satisfied_by(&[1, 3, 2, 4]));
        assert_eq!(prob.alignment_of(&[1, 3, 2, 4]), Some(vec![3, 2, 4, 1]));
        assert_eq!(prob.alignment_of(&[1, 2, 3, 4]), None);
    }
}
