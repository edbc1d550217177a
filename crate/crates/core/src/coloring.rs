//! Edge colorings, vertex colorings and color patterns. Colors are `1..=k`.

use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::rng::stream;

pub type Color = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    palette: u32,
    // sorted by edge
    colors: Vec<(Edge, Color)>,
}

impl EdgeColoring {
    pub fn new(palette: u32, mut colors: Vec<(Edge, Color)>) -> Result<EdgeColoring> {
        colors.sort_unstable_by_key(|&(e, _)| e);
        if colors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::invalid("an edge is colored twice"));
        }
        if let Some(&(e, c)) = colors.iter().find(|&&(_, c)| c == 0 || c > palette) {
            return Err(Error::invalid(format!("edge {e} has color {c} outside 1..={palette}")));
        }
        Ok(EdgeColoring { palette, colors })
    }

    /// Colors every edge of `g` with `f(edge)`.
    pub fn from_fn(g: &Graph, palette: u32, mut f: impl FnMut(Edge) -> Color) -> Result<EdgeColoring> {
        EdgeColoring::new(palette, g.edges().map(|e| (e, f(e))).collect())
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn color(&self, u: Vertex, v: Vertex) -> Option<Color> {
        let e = Edge::try_new(u, v)?;
        self.colors
            .binary_search_by_key(&e, |&(f, _)| f)
            .ok()
            .map(|i| self.colors[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, Color)> + '_ {
        self.colors.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// True when exactly the edges of `g` are colored.
    pub fn covers(&self, g: &Graph) -> bool {
        self.colors.len() == g.edge_count() && self.colors.iter().all(|&(e, _)| g.contains_edge(e))
    }

    /// Number of edges per color, indexed `color - 1`.
    pub fn color_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.palette as usize];
        for &(_, c) in &self.colors {
            counts[c as usize - 1] += 1;
        }
        counts
    }
}

fn check_distribution(alpha: &[f64]) -> Result<()> {
    if alpha.is_empty() {
        return Err(Error::invalid("empty color distribution"));
    }
    if alpha.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::invalid("color probabilities must be positive"));
    }
    let total: f64 = alpha.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("color probabilities sum to {total}, not 1")));
    }
    Ok(())
}

/// I.i.d. edge colors with `P(color = i) = alpha[i-1]`.
pub fn color_edges(g: &Graph, alpha: &[f64], seed: u64) -> Result<EdgeColoring> {
    check_distribution(alpha)?;
    let dist = WeightedIndex::new(alpha).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = stream(seed, "edge-color", 0);
    EdgeColoring::from_fn(g, alpha.len() as u32, |_| dist.sample(&mut rng) as Color + 1)
}

/// I.i.d. uniform edge colors from `1..=q`.
pub fn rainbow_color_edges(g: &Graph, q: u32, seed: u64) -> Result<EdgeColoring> {
    if q == 0 {
        return Err(Error::invalid("q must be at least 1"));
    }
    let mut rng = stream(seed, "rainbow-color", 0);
    EdgeColoring::from_fn(g, q, |_| rng.random_range(1..=q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    palette: u32,
    // colors[0] unused
    colors: Vec<Color>,
    class_sizes: Vec<usize>,
}

impl VertexColoring {
    /// `colors[i]` is the color of vertex `i + 1`.
    pub fn from_colors(colors: &[Color]) -> Result<VertexColoring> {
        let palette = colors.iter().copied().max().unwrap_or(0);
        if colors.contains(&0) {
            return Err(Error::invalid("color 0 is not a color"));
        }
        let mut class_sizes = vec![0; palette as usize];
        for &c in colors {
            class_sizes[c as usize - 1] += 1;
        }
        let mut stored = Vec::with_capacity(colors.len() + 1);
        stored.push(0);
        stored.extend_from_slice(colors);
        Ok(VertexColoring {
            palette,
            colors: stored,
            class_sizes,
        })
    }

    /// Vertices `1..=s_1` get color 1, the next `s_2` get color 2, and so on.
    pub fn block(n: usize, class_sizes: &[usize]) -> Result<VertexColoring> {
        if class_sizes.iter().any(|&s| s == 0) {
            return Err(Error::invalid("class sizes must be positive"));
        }
        let total: usize = class_sizes.iter().sum();
        if total != n {
            return Err(Error::invalid(format!("class sizes sum to {total}, not n = {n}")));
        }
        let colors: Vec<Color> = class_sizes
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| std::iter::repeat_n(i as Color + 1, s))
            .collect();
        VertexColoring::from_colors(&colors)
    }

    pub fn n(&self) -> usize {
        self.colors.len() - 1
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v as usize]
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class(&self, c: Color) -> Vec<Vertex> {
        (1..=self.n() as Vertex).filter(|&v| self.color(v) == c).collect()
    }
}

pub fn color_vertices_block(n: usize, class_sizes: &[usize]) -> Result<VertexColoring> {
    VertexColoring::block(n, class_sizes)
}

/// Target color sequence `c_1, ..., c_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorPattern {
    seq: Vec<Color>,
    counts: Vec<usize>,
}

impl ColorPattern {
    pub fn new(seq: Vec<Color>) -> Result<ColorPattern> {
        if seq.contains(&0) {
            return Err(Error::invalid("color 0 is not a color"));
        }
        let palette = seq.iter().copied().max().unwrap_or(0) as usize;
        let mut counts = vec![0; palette];
        for &c in &seq {
            counts[c as usize - 1] += 1;
        }
        Ok(ColorPattern { seq, counts })
    }

    pub fn constant(n: usize, c: Color) -> ColorPattern {
        ColorPattern::new(vec![c; n]).expect("positive color")
    }

    /// Uniform random pattern over `1..=k`.
    pub fn random(n: usize, k: u32, seed: u64) -> ColorPattern {
        let mut rng = stream(seed, "pattern", 0);
        ColorPattern::new((0..n).map(|_| rng.random_range(1..=k)).collect()).expect("colors >= 1")
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn seq(&self) -> &[Color] {
        &self.seq
    }

    pub fn get(&self, i: usize) -> Color {
        self.seq[i]
    }

    /// Occurrences per color, indexed `color - 1`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_color_palette() {
        let g = Graph::complete(6);
        let ec = color_edges(&g, &[1.0], 3).unwrap();
        assert!(ec.iter().all(|(_, c)| c == 1));
        assert!(ec.covers(&g));
    }

    #[test]
    fn edge_colors_reproducible() {
        let g = Graph::complete(4);
        assert_eq!(
            color_edges(&g, &[0.5, 0.5], 21).unwrap(),
            color_edges(&g, &[0.5, 0.5], 21).unwrap()
        );
        assert_eq!(
            rainbow_color_edges(&g, 9, 2).unwrap(),
            rainbow_color_edges(&g, 9, 2).unwrap()
        );
    }

    #[test]
    fn alpha_validation() {
        let g = Graph::complete(3);
        assert!(color_edges(&g, &[0.5, 0.4], 1).is_err());
        assert!(color_edges(&g, &[1.0, 0.0], 1).is_err());
        assert!(color_edges(&g, &[], 1).is_err());
        assert!(rainbow_color_edges(&g, 0, 1).is_err());
    }

    #[test]
    fn block_colorings() {
        let col = |n, s: &[usize]| {
            let vc = color_vertices_block(n, s).unwrap();
            (1..=n as Vertex).map(|v| vc.color(v)).collect::<Vec<_>>()
        };
        assert_eq!(col(4, &[2, 2]), vec![1, 1, 2, 2]);
        assert_eq!(col(3, &[3]), vec![1, 1, 1]);
        assert_eq!(col(6, &[1, 2, 3]), vec![1, 2, 2, 3, 3, 3]);
        assert!(color_vertices_block(5, &[2, 2]).is_err());
        assert!(color_vertices_block(4, &[4, 0]).is_err());
    }

    #[test]
    fn pattern_counts() {
        let p = ColorPattern::new(vec![1, 2, 1, 3]).unwrap();
        assert_eq!(p.counts(), &[2, 1, 1]);
        assert!(ColorPattern::new(vec![1, 0]).is_err());
    }
}
