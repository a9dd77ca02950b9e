use std::collections::HashMap;

use super::{MatchGraph, Side, VertexId};
use crate::lattice::{Color, Region, Shape};

/// The dual graph of a region: one vertex per cell, one unit edge per pair
/// of cells sharing an edge.
///
/// Vertices are numbered strip by strip from the top, left to right within a
/// strip.  A vertex sits at `(offset, strip index)`; white cells are in class
/// `V1`, black cells in `V2`.  Boundary lists: `top` and `bottom` (first and
/// last strip), `ell_above`/`ell_below` (the triangles on either side of
/// `ℓ`) and, for asymmetric regions, `ell_prime_above`/`ell_prime_below`.
pub fn dual_graph(r: &Region) -> MatchGraph {
    let mut g = MatchGraph::new();
    let mut ids: Vec<HashMap<i64, VertexId>> = Vec::with_capacity(r.strips().len());
    for (i, s) in r.strips().iter().enumerate() {
        let class = match s.color {
            Color::White => Side::V1,
            Color::Black => Side::V2,
        };
        let row: HashMap<i64, VertexId> = s
            .offsets()
            .map(|off| (off, g.add_vertex(Some(class), Some((off, i as i64)))))
            .collect();
        ids.push(row);
    }
    let strips = r.strips();
    for i in 0..strips.len().saturating_sub(1) {
        let (s, t) = (&strips[i], &strips[i + 1]);
        let vertical =
            s.shape == Shape::TriangleUp && t.shape == Shape::TriangleDown && s.row == t.row;
        for off in s.offsets() {
            let u = ids[i][&off];
            let targets: &[i64] = if vertical { &[0] } else { &[-1, 1] };
            for &dx in targets {
                if let Some(&v) = ids[i + 1].get(&(off + dx)) {
                    g.add_unit_edge(u, v)
                        .expect("dual edges join opposite colours");
                }
            }
        }
    }

    let list = |i: usize| -> Vec<VertexId> { strips[i].offsets().map(|o| ids[i][&o]).collect() };
    g.set_boundary("top", list(0)).expect("valid list");
    g.set_boundary("bottom", list(strips.len() - 1))
        .expect("valid list");
    let named = [
        ("ell_above", r.ell(), Shape::TriangleUp),
        ("ell_below", r.ell(), Shape::TriangleDown),
    ];
    for (name, row, shape) in named {
        if let Some(i) = r.strip_index(row, shape) {
            g.set_boundary(name, list(i)).expect("valid list");
        }
    }
    if r.ell_prime() != r.ell() {
        for (name, shape) in [
            ("ell_prime_above", Shape::TriangleUp),
            ("ell_prime_below", Shape::TriangleDown),
        ] {
            if let Some(i) = r.strip_index(r.ell_prime(), shape) {
                g.set_boundary(name, list(i)).expect("valid list");
            }
        }
    }
    g
}
