use super::HamCycle;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

/// Largest n accepted by [`brute_hamilton`].
pub const BRUTE_CAP: usize = 12;
/// Largest n accepted by [`enumerate_hamilton`].
pub const ENUMERATE_CAP: usize = 10;

// Bit (v-1) set for every neighbor v.
fn adjacency_masks(g: &Graph) -> Vec<u64> {
    let mut masks = vec![0u64; g.n() + 1];
    for v in g.vertices() {
        for &u in g.neighbors(v) {
            masks[v as usize] |= 1 << (u - 1);
        }
    }
    masks
}

// Visits every Hamilton sequence starting at 1; stops when `visit` returns true.
fn each_hamilton_sequence(g: &Graph, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    let masks = adjacency_masks(g);
    let mut seq = Vec::with_capacity(n);
    seq.push(1 as Vertex);
    fn go(
        masks: &[u64],
        n: usize,
        seq: &mut Vec<Vertex>,
        visited: u64,
        visit: &mut dyn FnMut(&[Vertex]) -> bool,
    ) -> bool {
        let last = *seq.last().unwrap() as usize;
        if seq.len() == n {
            return masks[last] & 1 != 0 && visit(seq);
        }
        let mut cand = masks[last] & !visited;
        while cand != 0 {
            let bit = cand.trailing_zeros();
            cand &= cand - 1;
            seq.push(bit + 1);
            if go(masks, n, seq, visited | (1 << bit), visit) {
                return true;
            }
            seq.pop();
        }
        false
    }
    go(&masks, n, &mut seq, 1, visit)
}

/// Exhaustive search for a Hamilton cycle satisfying `constraint`, which is
/// called on sequences `(1, i_2, ..., i_n)`; both directions of each cycle
/// are offered. Returns `None` exactly when no Hamilton sequence satisfies
/// the constraint.
pub fn brute_hamilton<F>(g: &Graph, constraint: F) -> Result<Option<HamCycle>>
where
    F: FnMut(&[Vertex]) -> bool,
{
    brute_hamilton_capped(g, BRUTE_CAP, constraint)
}

pub fn brute_hamilton_capped<F>(g: &Graph, cap: usize, mut constraint: F) -> Result<Option<HamCycle>>
where
    F: FnMut(&[Vertex]) -> bool,
{
    if g.n() > cap.min(64) {
        return Err(Error::CapExceeded {
            what: "brute_hamilton",
            n: g.n(),
            cap,
        });
    }
    let mut found = None;
    each_hamilton_sequence(g, &mut |seq| {
        if constraint(seq) {
            found = Some(HamCycle(seq.to_vec()));
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Every Hamilton sequence starting at 1; each geometric cycle appears once
/// per direction.
pub fn enumerate_hamilton(g: &Graph) -> Result<Vec<HamCycle>> {
    if g.n() > ENUMERATE_CAP {
        return Err(Error::CapExceeded {
            what: "enumerate_hamilton",
            n: g.n(),
            cap: ENUMERATE_CAP,
        });
    }
    let mut all = Vec::new();
    each_hamilton_sequence(g, &mut |seq| {
        all.push(HamCycle(seq.to_vec()));
        false
    });
    Ok(all)
}

/// A longest simple path of `g` that uses edge `e`, found exhaustively.
/// Ties go to the first path met when starting vertices are tried in
/// ascending order and neighbors are extended in ascending order.
pub fn longest_path_through(g: &Graph, e: Edge, cap: usize) -> Result<Option<Vec<Vertex>>> {
    if g.n() > cap.min(64) {
        return Err(Error::CapExceeded {
            what: "longest_path_through",
            n: g.n(),
            cap,
        });
    }
    if !g.contains_edge(e) {
        return Ok(None);
    }
    let masks = adjacency_masks(g);
    let n = g.n();
    let mut best: Vec<Vertex> = Vec::new();
    struct Search<'a> {
        masks: &'a [u64],
        n: usize,
        e: Edge,
        best: &'a mut Vec<Vertex>,
    }
    impl Search<'_> {
        // Returns true once a Hamilton path through e is known.
        fn go(&mut self, path: &mut Vec<Vertex>, visited: u64, has_e: bool) -> bool {
            if has_e && path.len() > self.best.len() {
                self.best.clone_from(path);
                if path.len() == self.n {
                    return true;
                }
            }
            let last = *path.last().unwrap();
            let mut cand = self.masks[last as usize] & !visited;
            while cand != 0 {
                let bit = cand.trailing_zeros();
                cand &= cand - 1;
                let v = bit + 1;
                let uses_e = has_e || Edge::try_new(last, v) == Some(self.e);
                path.push(v);
                if self.go(path, visited | (1 << bit), uses_e) {
                    return true;
                }
                path.pop();
            }
            false
        }
    }
    let mut search = Search {
        masks: &masks,
        n,
        e,
        best: &mut best,
    };
    for s in 1..=n as Vertex {
        let mut path = vec![s];
        if search.go(&mut path, 1 << (s - 1), false) {
            break;
        }
    }
    Ok(Some(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ham::validate_cycle;

    #[test]
    fn k4_has_a_cycle() {
        let h = brute_hamilton(&Graph::complete(4), |_| true).unwrap().unwrap();
        assert_eq!(h.as_slice(), &[1, 2, 3, 4]);
    }

    #[test]
    fn path_graph_has_none() {
        assert!(brute_hamilton(&Graph::path(4), |_| true).unwrap().is_none());
    }

    #[test]
    fn five_cycle_is_its_own_only_cycle() {
        let c5 = Graph::cycle(5);
        let all = enumerate_hamilton(&c5).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].as_slice(), &[1, 2, 3, 4, 5]);
        assert_eq!(all[1], all[0].reversed());
    }

    #[test]
    fn enumeration_counts() {
        // (n-1)!/2 geometric cycles, two directions each
        assert_eq!(enumerate_hamilton(&Graph::complete(4)).unwrap().len(), 6);
        assert_eq!(enumerate_hamilton(&Graph::complete(3)).unwrap().len(), 2);
        assert_eq!(enumerate_hamilton(&Graph::complete(6)).unwrap().len(), 120);
        assert!(enumerate_hamilton(&Graph::empty(5)).unwrap().is_empty());
        for h in enumerate_hamilton(&Graph::complete(5)).unwrap() {
            assert!(validate_cycle(&Graph::complete(5), h.as_slice(), None));
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(brute_hamilton(&Graph::complete(13), |_| true).is_err());
        assert!(enumerate_hamilton(&Graph::complete(11)).is_err());
    }

    #[test]
    fn constraint_filters() {
        // Only sequences whose second vertex is 3.
        let h = brute_hamilton(&Graph::complete(5), |s| s[1] == 3).unwrap().unwrap();
        assert_eq!(h.as_slice()[1], 3);
        assert!(brute_hamilton(&Graph::complete(5), |_| false).unwrap().is_none());
    }

    #[test]
    fn longest_path_in_a_tree() {
        // star with center 1 plus a tail 2-5
        let g = Graph::from_edges(5, [(1, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let p = longest_path_through(&g, Edge::new(1, 3), 9).unwrap().unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.windows(2).any(|w| Edge::new(w[0], w[1]) == Edge::new(1, 3)));
    }
}
