//! Exact spread of the hypergraph whose edges are the edge sets of
//! vertex-patterned Hamilton cycles of `K_n`.

use std::collections::{HashMap, HashSet};

use crate::coloring::{ColorPattern, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{Edge, Vertex};

/// Largest n accepted by [`spread_ratio`].
pub const SPREAD_CAP: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct SpreadReport {
    pub n: usize,
    /// `|H|`, by enumeration.
    pub h_size: u64,
    /// Rotations and reflections of the cycle that preserve the pattern.
    pub automorphisms: usize,
    /// `prod_j n_j! / automorphisms`.
    pub h_size_formula: u64,
    /// `min over S of (|H| / phi(S))^(1/|S|)` over nonempty `S` with `phi(S) > 0`.
    pub kappa_hat: f64,
    pub worst_set: Vec<Edge>,
    pub worst_phi: u64,
    /// Smallest class size divided by n.
    pub alpha_min: f64,
    /// `alpha_min n / (2e)`.
    pub kappa_reference: f64,
    /// Number of distinct nonempty sets `S` examined.
    pub sets_checked: usize,
    /// True when `phi(S) <= (2e)^s |H| / (n alpha_min)^s` for every examined `S`.
    pub bound_check: bool,
}

/// Dihedral symmetries `i -> r ± i (mod n)` that fix the pattern.
pub fn automorphism_count(pattern: &[u32]) -> usize {
    let n = pattern.len();
    let mut h = 0;
    for r in 0..n {
        for reflect in [false, true] {
            let ok = (0..n).all(|i| {
                let j = if reflect { (r + n - i) % n } else { (r + i) % n };
                pattern[i] == pattern[j]
            });
            h += ok as usize;
        }
    }
    h
}

fn pair_bit(u: Vertex, v: Vertex, n: usize) -> u64 {
    1u64 << (Edge::new(u, v).lex_index(n) - 1)
}

// Edge masks of every cycle whose i-th vertex has color pattern[i].
fn hyperedges(vc: &VertexColoring, pattern: &[u32]) -> HashSet<u64> {
    let n = pattern.len();
    let mut out = HashSet::new();
    let mut seq: Vec<Vertex> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    fn go(
        vc: &VertexColoring,
        pattern: &[u32],
        seq: &mut Vec<Vertex>,
        used: &mut [bool],
        out: &mut HashSet<u64>,
    ) {
        let n = pattern.len();
        let k = seq.len();
        if k == n {
            let mask = (0..n).fold(0, |m, i| m | pair_bit(seq[i], seq[(i + 1) % n], n));
            out.insert(mask);
            return;
        }
        for v in 1..=n as Vertex {
            if !used[v as usize] && vc.color(v) == pattern[k] {
                used[v as usize] = true;
                seq.push(v);
                go(vc, pattern, seq, used, out);
                seq.pop();
                used[v as usize] = false;
            }
        }
    }
    go(vc, pattern, &mut seq, &mut used, &mut out);
    out
}

/// Enumerates `H` and `phi(S) = |{H in H : S ⊆ H}|` for every nonempty `S`
/// contained in some member of `H` (all other `S` have `phi(S) = 0`).
pub fn spread_ratio(vc: &VertexColoring, pattern: &ColorPattern, cap: usize) -> Result<SpreadReport> {
    let n = vc.n();
    if n > cap.min(SPREAD_CAP) {
        return Err(Error::CapExceeded {
            what: "spread_ratio",
            n,
            cap: cap.min(SPREAD_CAP),
        });
    }
    if n < 3 || pattern.len() != n {
        return Err(Error::invalid("need n >= 3 and a pattern of length n"));
    }
    let mut want = pattern.counts().to_vec();
    want.resize(vc.class_sizes().len().max(want.len()), 0);
    if want != vc.class_sizes() {
        return Err(Error::invalid("pattern color counts differ from class sizes"));
    }
    let seq = pattern.seq();
    let family = hyperedges(vc, seq);
    let h_size = family.len() as u64;
    let automorphisms = automorphism_count(seq);
    let product: u64 = vc
        .class_sizes()
        .iter()
        .map(|&s| (1..=s as u64).product::<u64>())
        .product();
    let h_size_formula = product / automorphisms as u64;

    let mut phi: HashMap<u64, u64> = HashMap::new();
    let mut bits = Vec::with_capacity(n);
    for &mask in &family {
        bits.clear();
        bits.extend((0..64).filter(|b| mask >> b & 1 == 1));
        for sub in 1u64..(1 << bits.len()) {
            let s = bits
                .iter()
                .enumerate()
                .filter(|(i, _)| sub >> i & 1 == 1)
                .fold(0u64, |m, (_, &b)| m | 1 << b);
            *phi.entry(s).or_insert(0) += 1;
        }
    }

    let min_class = *vc.class_sizes().iter().min().expect("nonempty palette");
    let alpha_min = min_class as f64 / n as f64;
    let ln_h = (h_size as f64).ln();
    let ln_step = (2.0 * std::f64::consts::E).ln() - (min_class as f64).ln();
    let mut best: Option<(f64, u64, u64)> = None;
    let mut bound_check = true;
    for (&s_mask, &count) in &phi {
        let s = s_mask.count_ones() as f64;
        let ln_kappa = (ln_h - (count as f64).ln()) / s;
        let cand = (ln_kappa, s_mask, count);
        best = match best {
            Some(b) if (b.0, b.1) <= (cand.0, cand.1) => Some(b),
            _ => Some(cand),
        };
        if (count as f64).ln() > ln_h + s * ln_step + 1e-9 {
            bound_check = false;
        }
    }
    let (ln_kappa, worst_mask, worst_phi) = best.expect("a nonempty family has subsets");
    let edges: Vec<Edge> = (1..=n as Vertex)
        .flat_map(|u| (u + 1..=n as Vertex).map(move |v| Edge::new(u, v)))
        .collect();
    let worst_set = edges
        .iter()
        .copied()
        .filter(|e| worst_mask & pair_bit(e.lo(), e.hi(), n) != 0)
        .collect();
    Ok(SpreadReport {
        n,
        h_size,
        automorphisms,
        h_size_formula,
        kappa_hat: ln_kappa.exp(),
        worst_set,
        worst_phi,
        alpha_min,
        kappa_reference: alpha_min * n as f64 / (2.0 * std::f64::consts::E),
        sets_checked: phi.len(),
        bound_check,
    })
}
