use std::ffi::CStr;
use std::ptr;

use seqham_ffi::*;
use SeqhamStatus::*;

fn last_error() -> Option<String> {
    let p = seqham_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn is_cycle_of(edges: &[u32], n: usize, cycle: &[u32]) -> bool {
    let has = |u: u32, v: u32| edges.chunks(2).any(|e| (e[0], e[1]) == (u, v) || (e[0], e[1]) == (v, u));
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted == (1..=n as u32).collect::<Vec<_>>() && (0..n).all(|i| has(cycle[i], cycle[(i + 1) % n]))
}

#[test]
fn gnp_handle_lifecycle() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(seqham_graph_gnp(40, 0.5, 3, &mut g), SEQHAM_OK);
        assert_eq!(seqham_graph_n(g), 40);
        assert!(seqham_graph_edge_count(g) > 0);
        let mut buf = vec![0u32; 40];
        assert_eq!(seqham_posa_solve(g, 1, buf.as_mut_ptr(), buf.len()), SEQHAM_OK);
        assert_eq!(buf[0], 1);
        let mut short = vec![0u32; 10];
        assert_eq!(seqham_posa_solve(g, 1, short.as_mut_ptr(), short.len()), SEQHAM_BUFFER_TOO_SMALL);
        assert!(last_error().unwrap().contains("buffer"));
        seqham_graph_free(g);
        seqham_graph_free(ptr::null_mut());
    }
}

#[test]
fn explicit_graphs_and_solvers() {
    // 6-cycle plus chord 1-4
    let edges = [1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 1, 1, 4];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(seqham_graph_from_edges(6, edges.as_ptr(), 7, &mut g), SEQHAM_OK);
        let mut buf = [0u32; 6];
        assert_eq!(seqham_brute_solve(g, buf.as_mut_ptr(), 6), SEQHAM_OK);
        assert!(is_cycle_of(&edges, 6, &buf));
        assert!(last_error().is_none());
        seqham_graph_free(g);

        let path = [1, 2, 2, 3, 3, 4];
        assert_eq!(seqham_graph_from_edges(4, path.as_ptr(), 3, &mut g), SEQHAM_OK);
        assert_eq!(seqham_brute_solve(g, buf.as_mut_ptr(), 6), SEQHAM_NOT_FOUND);
        seqham_graph_free(g);
    }
}

#[test]
fn ordered_cycle_through_listed_vertices() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(seqham_graph_gnp(200, 0.2, 11, &mut g), SEQHAM_OK);
        let s0 = [9u32, 150, 33, 71];
        let mut buf = vec![0u32; 200];
        let status = seqham_ordered_solve(g, s0.as_ptr(), s0.len(), 11, buf.as_mut_ptr(), buf.len());
        assert_eq!(status, SEQHAM_OK, "{:?}", last_error());
        let pos: Vec<usize> = s0.iter().map(|v| buf.iter().position(|x| x == v).unwrap()).collect();
        let rotations = |p: &[usize]| (0..p.len()).any(|r| (0..p.len() - 1).all(|i| p[(r + i) % p.len()] < p[(r + i + 1) % p.len()]));
        let rev: Vec<usize> = pos.iter().rev().copied().collect();
        assert!(rotations(&pos) || rotations(&rev));
        seqham_graph_free(g);
    }
}

#[test]
fn invalid_input_sets_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(seqham_graph_gnp(10, 1.5, 0, &mut g), SEQHAM_INVALID_ARGUMENT);
        assert!(last_error().is_some());
        assert_eq!(seqham_graph_gnp(10, 0.5, 0, ptr::null_mut()), SEQHAM_NULL_POINTER);
        let loops = [1u32, 1];
        assert_eq!(seqham_graph_from_edges(3, loops.as_ptr(), 1, &mut g), SEQHAM_INVALID_ARGUMENT);
        let mut buf = [0u32; 4];
        assert_eq!(seqham_posa_solve(ptr::null(), 0, buf.as_mut_ptr(), 4), SEQHAM_NULL_POINTER);

        let mut big = ptr::null_mut();
        assert_eq!(seqham_graph_gnp(40, 0.5, 0, &mut big), SEQHAM_OK);
        let mut out = vec![0u32; 40];
        assert_eq!(seqham_brute_solve(big, out.as_mut_ptr(), 40), SEQHAM_CAP_EXCEEDED);
        seqham_graph_free(big);
    }
}

#[test]
fn inversion_helpers() {
    let mut inv = 0u64;
    unsafe {
        let seq = [3u32, 1, 2, 5, 4];
        assert_eq!(seqham_count_inversions(seq.as_ptr(), 5, &mut inv), SEQHAM_OK);
        assert_eq!(inv, 3);
        let bad = [1u32, 1];
        assert_eq!(seqham_count_inversions(bad.as_ptr(), 2, &mut inv), SEQHAM_INVALID_ARGUMENT);
    }
    let b = seqham_first_moment_bound(8, 8, 0.2);
    assert!(b > 0.0 && b.is_finite());
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/seqham.h");
    for name in [
        "seqham_last_error",
        "seqham_graph_gnp",
        "seqham_graph_from_edges",
        "seqham_graph_free",
        "seqham_graph_n",
        "seqham_graph_edge_count",
        "seqham_posa_solve",
        "seqham_brute_solve",
        "seqham_ordered_solve",
        "seqham_count_inversions",
        "seqham_first_moment_bound",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
