use seqham::coloring::{color_edges, ColorPattern, VertexColoring};
use seqham::graph::gen_gnp;
use seqham::io::{
    format_graph, format_int_line, format_vertex_coloring, parse_colored_graph, parse_graph, parse_int_line,
    parse_pattern, parse_vertex_coloring, read_colored_graph, write_colored_graph,
};
use seqham::Error;

#[test]
fn graph_text_roundtrip() {
    for seed in 0..20 {
        let g = gen_gnp(15, 0.3, seed).unwrap();
        let text = format_graph(&g, None);
        assert_eq!(parse_graph(&text).unwrap(), g);
        let ec = color_edges(&g, &[0.2, 0.3, 0.5], seed).unwrap();
        let (g2, ec2) = parse_colored_graph(&format_graph(&g, Some(&ec))).unwrap();
        assert_eq!(g2, g);
        assert_eq!(ec2.unwrap().iter().collect::<Vec<_>>(), ec.iter().collect::<Vec<_>>());
    }
}

#[test]
fn colored_graph_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let g = gen_gnp(10, 0.5, 4).unwrap();
    let ec = color_edges(&g, &[0.5, 0.5], 4).unwrap();
    write_colored_graph(&g, &ec, &path).unwrap();
    let (g2, ec2) = read_colored_graph(&path).unwrap();
    assert_eq!(g2, g);
    assert!(ec2.unwrap().covers(&g));
}

#[test]
fn vertex_coloring_and_pattern_roundtrip() {
    let vc = VertexColoring::block(7, &[3, 4]).unwrap();
    let vc2 = parse_vertex_coloring(&format_vertex_coloring(&vc)).unwrap();
    assert_eq!((1..=7).map(|v| vc2.color(v)).collect::<Vec<_>>(), vec![1, 1, 1, 2, 2, 2, 2]);
    let pat = ColorPattern::new(vec![2, 1, 2, 2, 1]).unwrap();
    assert_eq!(parse_pattern(&format_int_line(pat.seq())).unwrap(), pat);
    assert_eq!(parse_int_line(" 4 2   9 \n").unwrap(), vec![4, 2, 9]);
}

#[test]
fn malformed_graphs_report_lines() {
    let cases = [
        ("3 1\n1 4\n", 2),
        ("3 2\n1 2\n2 2\n", 3),
        ("3 2\n1 2 1\n2 3\n", 3),
        ("3\n", 1),
        ("3 1\n1 x\n", 2),
    ];
    for (text, line) in cases {
        match parse_colored_graph(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?} gave {other:?}"),
        }
    }
}
