//! Plain-text file formats. All labels are 1-indexed ASCII integers.
//!
//! * graph: first line `n m`, then `m` lines `u v`, or `u v c` when the edges
//!   are colored;
//! * vertex coloring: `n` lines `v c`;
//! * color pattern, vertex order, cycle: one line of space-separated integers.

use std::fs;
use std::path::Path;

use crate::coloring::{Color, ColorPattern, EdgeColoring, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};

fn parse_ints<T: std::str::FromStr>(line: &str, lineno: usize) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| Error::parse(lineno, format!("not an integer: {tok:?}")))
        })
        .collect()
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses a graph, with its edge coloring when every edge line has a color.
pub fn parse_colored_graph(text: &str) -> Result<(Graph, Option<EdgeColoring>)> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let header: Vec<usize> = parse_ints(header, hline)?;
    let [n, m] = header[..] else {
        return Err(Error::parse(hline, "header must be `n m`"));
    };
    let mut pairs = Vec::with_capacity(m);
    let mut colors = Vec::new();
    let mut colored = None;
    for (lineno, line) in lines.by_ref().take(m) {
        let vals: Vec<u32> = parse_ints(line, lineno)?;
        let has_color = match vals.len() {
            2 => false,
            3 => true,
            _ => return Err(Error::parse(lineno, "edge line must be `u v` or `u v c`")),
        };
        if *colored.get_or_insert(has_color) != has_color {
            return Err(Error::parse(lineno, "mixed colored and uncolored edge lines"));
        }
        let (u, v) = (vals[0], vals[1]);
        for x in [u, v] {
            if x == 0 || x as usize > n {
                return Err(Error::parse(lineno, format!("vertex {x} outside 1..={n}")));
            }
        }
        if u == v {
            return Err(Error::parse(lineno, format!("self-loop at vertex {u}")));
        }
        pairs.push((u, v));
        if has_color {
            if vals[2] == 0 {
                return Err(Error::parse(lineno, "color 0 is not a color"));
            }
            colors.push((Edge::new(u, v), vals[2] as Color));
        }
    }
    if pairs.len() != m {
        return Err(Error::parse(hline, format!("header announces {m} edges, found {}", pairs.len())));
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(Error::parse(lineno, "trailing content after the edge list"));
    }
    let mut sorted: Vec<Edge> = pairs.iter().map(|&(u, v)| Edge::new(u, v)).collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::parse(hline, format!("duplicate edge {}", w[0])));
    }
    let g = Graph::from_edges(n, pairs)?;
    let ec = if colored == Some(true) {
        let palette = colors.iter().map(|&(_, c)| c).max().unwrap_or(1);
        Some(EdgeColoring::new(palette, colors)?)
    } else {
        None
    };
    Ok((g, ec))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    parse_colored_graph(text).map(|(g, _)| g)
}

pub fn format_graph(g: &Graph, coloring: Option<&EdgeColoring>) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        match coloring.and_then(|ec| ec.color(e.lo(), e.hi())) {
            Some(c) => out.push_str(&format!("{} {} {}\n", e.lo(), e.hi(), c)),
            None => out.push_str(&format!("{} {}\n", e.lo(), e.hi())),
        }
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn read_colored_graph(path: impl AsRef<Path>) -> Result<(Graph, Option<EdgeColoring>)> {
    parse_colored_graph(&fs::read_to_string(path)?)
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graph(g, None))?;
    Ok(())
}

pub fn write_colored_graph(g: &Graph, ec: &EdgeColoring, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_graph(g, Some(ec)))?;
    Ok(())
}

pub fn parse_vertex_coloring(text: &str) -> Result<VertexColoring> {
    let mut entries: Vec<(usize, Vertex, Color)> = Vec::new();
    for (lineno, line) in content_lines(text) {
        let vals: Vec<u32> = parse_ints(line, lineno)?;
        let [v, c] = vals[..] else {
            return Err(Error::parse(lineno, "vertex coloring line must be `v c`"));
        };
        entries.push((lineno, v, c));
    }
    let n = entries.len();
    let mut colors = vec![0 as Color; n];
    for (lineno, v, c) in entries {
        if v == 0 || v as usize > n {
            return Err(Error::parse(lineno, format!("vertex {v} outside 1..={n}")));
        }
        if colors[v as usize - 1] != 0 {
            return Err(Error::parse(lineno, format!("vertex {v} colored twice")));
        }
        if c == 0 {
            return Err(Error::parse(lineno, "color 0 is not a color"));
        }
        colors[v as usize - 1] = c;
    }
    VertexColoring::from_colors(&colors)
}

pub fn format_vertex_coloring(vc: &VertexColoring) -> String {
    (1..=vc.n() as Vertex)
        .map(|v| format!("{} {}\n", v, vc.color(v)))
        .collect()
}

/// One line of integers; further non-empty lines are an error.
pub fn parse_int_line(text: &str) -> Result<Vec<u32>> {
    let mut lines = content_lines(text);
    let (lineno, line) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let vals = parse_ints(line, lineno)?;
    if let Some((extra, _)) = lines.next() {
        return Err(Error::parse(extra, "expected a single line"));
    }
    Ok(vals)
}

pub fn parse_pattern(text: &str) -> Result<ColorPattern> {
    ColorPattern::new(parse_int_line(text)?)
}

pub fn format_int_line(vals: &[u32]) -> String {
    let mut out = vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_file() {
        let g = parse_graph("3 3\n1 2\n2 3\n1 3\n").unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_graph("3 1\n1 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_graph("3 1\n1 4\n").is_err());
        assert!(parse_graph("3 2\n1 2\n2 1\n").is_err());
        assert!(parse_graph("3 2\n1 2\n").is_err());
        assert!(parse_graph("3 1\n1 x\n").is_err());
        assert!(parse_graph("3 1\n1 2 3 4\n").is_err());
        assert!(parse_graph("3 2\n1 2 1\n2 3\n").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn colored_roundtrip() {
        let text = "4 3\n1 2 1\n1 3 2\n3 4 2\n";
        let (g, ec) = parse_colored_graph(text).unwrap();
        let ec = ec.unwrap();
        assert_eq!(ec.color(3, 1), Some(2));
        assert_eq!(format_graph(&g, Some(&ec)), text);
    }

    #[test]
    fn vertex_coloring_file() {
        let vc = parse_vertex_coloring("2 1\n1 1\n3 2\n").unwrap();
        assert_eq!(vc.class_sizes(), &[2, 1]);
        assert_eq!(format_vertex_coloring(&vc), "1 1\n2 1\n3 2\n");
        assert!(parse_vertex_coloring("1 1\n1 2\n").is_err());
    }

    #[test]
    fn pattern_line() {
        let p = parse_pattern("1 2 1 2\n").unwrap();
        assert_eq!(p.seq(), &[1, 2, 1, 2]);
        assert!(parse_pattern("1 2\n3\n").is_err());
    }
}
