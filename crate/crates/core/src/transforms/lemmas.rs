use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::template::{opposite, replace_block, Template};
use super::{Locus, Multiplier, RewriteStep, TransformTrace};
use crate::error::{Error, Result};
use crate::families::{
    ar_board, board_graph, comb, l_board, trimmed_board, Board, CombSide, LKind, Trim,
};
use crate::graph::{MatchGraph, VertexId, Weight};

/// Splits `v` into `v' - x - v''`: `v'` keeps the id of `v` and the
/// neighbours in `h`, `v''` takes the others.  `μ = 1`.
pub fn vertex_split(g: &MatchGraph, v: VertexId, h: &BTreeSet<VertexId>) -> Result<RewriteStep> {
    vertex_split_placed(g, v, h, None, None)
}

/// [`vertex_split`] with positions for the two new vertices.
pub fn vertex_split_placed(
    g: &MatchGraph,
    v: VertexId,
    h: &BTreeSet<VertexId>,
    x_pos: Option<(i64, i64)>,
    v2_pos: Option<(i64, i64)>,
) -> Result<RewriteStep> {
    if !g.contains(v) {
        return Err(Error::BadLocus(format!("no vertex {v} to split")));
    }
    if let Some(u) = h.iter().find(|&&u| !g.has_edge(v, u)) {
        return Err(Error::BadLocus(format!("{u} is not a neighbour of {v}")));
    }
    let mut out = g.clone();
    let x = out.add_vertex(opposite(g, v), x_pos);
    let v2 = out.add_vertex(g.class(v), v2_pos);
    let moved: Vec<(VertexId, Weight)> = g
        .neighbors(v)
        .filter(|(u, _)| !h.contains(u))
        .map(|(u, w)| (u, w.clone()))
        .collect();
    for (u, w) in &moved {
        out.remove_edge(v, *u);
        out.add_edge(v2, *u, w.clone())?;
    }
    out.add_unit_edge(v, x)?;
    out.add_unit_edge(x, v2)?;
    let mut edges: Vec<(VertexId, VertexId)> =
        moved.iter().map(|(u, _)| (v.min(*u), v.max(*u))).collect();
    edges.sort();
    Ok(RewriteStep {
        name: "vertex-split".into(),
        before: g.clone(),
        after: out,
        multiplier: Multiplier::one(),
        locus: Locus {
            vertices: vec![v],
            edges,
            replacement: vec![v, x, v2],
        },
    })
}

/// Multiplies the weights of all edges at `v` by `t`.  `μ = 1/t`.
pub fn star_scale(g: &MatchGraph, v: VertexId, t: &BigRational) -> Result<RewriteStep> {
    if !g.contains(v) {
        return Err(Error::BadLocus(format!("no vertex {v} to scale")));
    }
    if !t.is_positive() {
        return Err(Error::InvalidParams(format!(
            "star scale factor must be positive, got {t}"
        )));
    }
    let mut out = g.clone();
    let mut edges = Vec::new();
    for (u, w) in g.neighbors(v) {
        out.set_weight(v, u, w * t)?;
        edges.push((v.min(u), v.max(u)));
    }
    edges.sort();
    Ok(RewriteStep {
        name: "star".into(),
        before: g.clone(),
        after: out,
        multiplier: Multiplier::from_rational(&t.recip())?,
        locus: Locus {
            vertices: vec![v],
            edges,
            replacement: vec![v],
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpiderKind {
    /// Locus `[A, B, C, D, p, q, r, s]`: unit spokes `A-p`, `B-q`, `C-r`,
    /// `D-s` and a 4-cycle `p-q-r-s` with weights `x, y, z, t`.
    A,
    /// Locus `[A, B, C, p, q, r]`: unit spokes and a path `p-q-r` with
    /// weights `x, y`.
    B,
    /// Locus `[A, B, p, q]`: unit spokes and one edge `p-q` of weight `x`.
    C,
}

/// The spider (urban renewal) rewrites.  Inner weights are read from the
/// graph.
pub fn spider(g: &MatchGraph, kind: SpiderKind, locus: &[VertexId]) -> Result<RewriteStep> {
    let arms = match kind {
        SpiderKind::A => 4,
        SpiderKind::B => 3,
        SpiderKind::C => 2,
    };
    if locus.len() != 2 * arms {
        return Err(Error::BadLocus(format!(
            "spider {kind:?} needs {} locus vertices",
            2 * arms
        )));
    }
    let distinct: BTreeSet<_> = locus.iter().collect();
    if distinct.len() != locus.len() || locus.iter().any(|&v| !g.contains(v)) {
        return Err(Error::BadLocus(
            "spider locus must be distinct graph vertices".into(),
        ));
    }
    let (outer, inner) = locus.split_at(arms);
    let inner_edges: Vec<(usize, usize)> = match kind {
        SpiderKind::A => vec![(0, 1), (1, 2), (2, 3), (3, 0)],
        SpiderKind::B => vec![(0, 1), (1, 2)],
        SpiderKind::C => vec![(0, 1)],
    };
    let mut w = Vec::new();
    for &(i, j) in &inner_edges {
        let wt = g.weight(inner[i], inner[j]).ok_or_else(|| {
            Error::PatternMismatch(format!("missing inner edge {}-{}", inner[i], inner[j]))
        })?;
        w.push(wt.clone());
    }
    let one = Weight::one();
    for (k, (&o, &p)) in outer.iter().zip(inner).enumerate() {
        if g.weight(o, p) != Some(&one) {
            return Err(Error::PatternMismatch(format!(
                "spoke {o}-{p} must be a unit edge"
            )));
        }
        let expected = 1 + inner_edges
            .iter()
            .filter(|&&(i, j)| i == k || j == k)
            .count();
        if g.degree(p) != expected {
            return Err(Error::PatternMismatch(format!(
                "inner vertex {p} has neighbours outside the spider"
            )));
        }
    }

    let mut out = g.clone();
    let mut edges = Vec::new();
    for (k, &p) in inner.iter().enumerate() {
        edges.push((p.min(outer[k]), p.max(outer[k])));
        out.remove_vertex(p);
    }
    for &(i, j) in &inner_edges {
        edges.push((inner[i].min(inner[j]), inner[i].max(inner[j])));
    }
    edges.sort();
    let half = BigRational::new(1.into(), 2.into());
    let (multiplier, replacement) = match kind {
        SpiderKind::A => {
            let (x, y, z, t) = (&w[0], &w[1], &w[2], &w[3]);
            let delta = x * z + y * t;
            let (a, b, c, d) = (outer[0], outer[1], outer[2], outer[3]);
            out.merge_edge(a, b, z / &delta)?;
            out.merge_edge(b, c, t / &delta)?;
            out.merge_edge(c, d, x / &delta)?;
            out.merge_edge(d, a, y / &delta)?;
            (Multiplier::from_rational(&delta)?, outer.to_vec())
        }
        SpiderKind::B => {
            let (x, y) = (&w[0], &w[1]);
            let (a, b, c) = (outer[0], outer[1], outer[2]);
            let d = out.add_vertex(opposite(g, a), g.pos(inner[1]));
            out.add_edge(a, d, y * &half)?;
            out.add_edge(d, c, x * &half)?;
            out.merge_edge(a, b, (x * BigRational::from_integer(2.into())).recip())?;
            out.merge_edge(b, c, (y * BigRational::from_integer(2.into())).recip())?;
            (Multiplier::pow2(1), vec![a, b, c, d])
        }
        SpiderKind::C => {
            let x = &w[0];
            let (a, b) = (outer[0], outer[1]);
            let c = out.add_vertex(g.class(a), g.pos(inner[1]));
            let d = out.add_vertex(g.class(b), g.pos(inner[0]));
            out.merge_edge(a, b, (x * BigRational::from_integer(2.into())).recip())?;
            out.add_edge(b, c, half.clone())?;
            out.add_edge(c, d, x * &half)?;
            out.add_edge(d, a, half.clone())?;
            (Multiplier::pow2(1), vec![a, b, c, d])
        }
    };
    Ok(RewriteStep {
        name: format!("spider-{}", format!("{kind:?}").to_lowercase()),
        before: g.clone(),
        after: out,
        multiplier,
        locus: Locus {
            vertices: locus.to_vec(),
            edges,
            replacement,
        },
    })
}

fn positive(name: &str, v: u32) -> Result<i64> {
    if v == 0 {
        Err(Error::InvalidParams(format!(
            "parameter {name} must be positive"
        )))
    } else {
        Ok(v as i64)
    }
}

fn combed(board: &Board) -> Result<MatchGraph> {
    comb(&board_graph(board), "bottom", CombSide::Bottom)
}

/// Board minus its last row, with a comb below the new last row.
fn combed_without_bottom(board: &Board, bottom: i64) -> Result<MatchGraph> {
    let trimmed: Board = board
        .iter()
        .copied()
        .filter(|&(r, _)| r != bottom)
        .collect();
    combed(&trimmed)
}

/// Before and after blocks of the first Aztec rectangle transformation:
/// the combed `AR_{p,q}` (attached by its comb tips) and the baseless
/// `AR_{p-1/2,q-1}` (attached by its bottom row).
pub fn t1_templates(p: u32, q: u32) -> Result<(Template, Template)> {
    let (p, q) = (positive("p", p)?, positive("q", q)?);
    let before = Template::with_boundary(combed(&ar_board(p, q, false))?, "bottom")?;
    let after = Template::with_boundary(board_graph(&ar_board(p, q - 1, true)), "bottom")?;
    Ok((before, after))
}

/// Combed baseless `AR_{p-1/2,q}` and `AR_{p,q+1}`.
pub fn t2_templates(p: u32, q: u32) -> Result<(Template, Template)> {
    let (p, q) = (positive("p", p)?, positive("q", q)?);
    let before = Template::with_boundary(combed(&ar_board(p, q, true))?, "bottom")?;
    let after = Template::with_boundary(board_graph(&ar_board(p, q + 1, false)), "bottom")?;
    Ok((before, after))
}

/// `LR_{m,n}` combed on top, attached by its tips and then its bottom row;
/// `RR_{m,n}` combed below, attached by its top row and then its tips.
pub fn t3_templates(m: u32, n: u32) -> Result<(Template, Template)> {
    let (m, n) = (positive("m", m)?, positive("n", n)?);
    let lr = comb(
        &board_graph(&trimmed_board(m, n, Trim::LR)),
        "top",
        CombSide::Top,
    )?;
    let rr = comb(
        &board_graph(&trimmed_board(m, n, Trim::RR)),
        "bottom",
        CombSide::Bottom,
    )?;
    Ok((
        Template::with_boundaries(lr, &["top", "bottom"])?,
        Template::with_boundaries(rr, &["top", "bottom"])?,
    ))
}

/// Which of the three L-shaped block transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LKindStep {
    /// `L^{a,b}_{c,d}` to the combed `(L^{a+1,b+1}_{c,d})_bot`.
    A,
    /// `L̄^{a,b}_{c,d}` to the combed `(L̄^{a-1,b-1}_{c+1,d})_bot`, `a > 1`.
    B,
    /// `L̄^{1,b}_{c,d}` to the combed `(L^{1,d-b}_{c,d})_bot`, `b < d`.
    C,
}

/// Blocks and multiplier of an L-transformation.  Both blocks are attached
/// along their bottommost vertices, left to right.
pub fn l_templates(
    kind: LKindStep,
    a: u32,
    b: u32,
    c: u32,
    d: u32,
) -> Result<(Template, Template, Multiplier)> {
    let (a, b, c, d) = (
        positive("a", a)?,
        positive("b", b)?,
        positive("c", c)?,
        positive("d", d)?,
    );
    let (before_kind, after_params, after_kind, mu) = match kind {
        LKindStep::A => (LKind::L, (a + 1, b + 1, c), LKind::L, Multiplier::pow2(-a)),
        LKindStep::B => {
            if a <= 1 {
                return Err(Error::PreconditionFailed(format!(
                    "L-transformation (b) needs a > 1, got a={a}"
                )));
            }
            (
                LKind::Lbar,
                (a - 1, b - 1, c + 1),
                LKind::Lbar,
                Multiplier::pow2(a - 1),
            )
        }
        LKindStep::C => {
            if a != 1 || b >= d {
                return Err(Error::PreconditionFailed(format!(
                    "L-transformation (c) needs a = 1 and b < d, got a={a}, b={b}, d={d}"
                )));
            }
            (LKind::Lbar, (1, d - b, c), LKind::L, Multiplier::one())
        }
    };
    let (board, _) = l_board(a, b, c, d, before_kind);
    let before = Template::with_boundary(board_graph(&board), "bottom")?;
    let (ta, tb, tc) = after_params;
    let (board, bottom) = l_board(ta, tb, tc, d, after_kind);
    let after = Template::with_boundary(combed_without_bottom(&board, bottom)?, "bottom")?;
    Ok((before, after, mu))
}

/// Replaces a combed `AR_{p,q}` by `AR_{p-1/2,q-1}`.  `μ = 2^p`.
pub fn t1(g: &MatchGraph, p: u32, q: u32, locus: &[VertexId]) -> Result<RewriteStep> {
    let (before, after) = t1_templates(p, q)?;
    replace_block(g, "t1", &before, &after, locus, Multiplier::pow2(p as i64))
}

/// [`t1`] in two stages: first to the baseless rectangle with all edge
/// weights `1/2` (`μ = 2^{pq}`), then one star scaling by 2 at each vertex
/// of its even rows (`μ = 1/2` each).
pub fn t1_staged(g: &MatchGraph, p: u32, q: u32, locus: &[VertexId]) -> Result<TransformTrace> {
    let (before, after) = t1_templates(p, q)?;
    let half = Weight::new(1.into(), 2.into());
    let weighted = Template::new(
        after.graph.with_uniform_weight(&half)?,
        after.attach.clone(),
    )?;
    let mu = Multiplier::pow2(p as i64 * q as i64);
    let first = replace_block(g, "t1-half-weights", &before, &weighted, locus, mu)?;
    let two = BigRational::from_integer(2.into());
    let even_rows: Vec<VertexId> = after
        .graph
        .vertex_ids()
        .zip(&first.locus.replacement)
        .filter(|(t, _)| after.graph.pos(*t).is_some_and(|(_, row)| row % 2 == 0))
        .map(|(_, &v)| v)
        .collect();
    let mut trace = TransformTrace::new(g.clone());
    trace.push(first)?;
    for v in even_rows {
        let step = star_scale(trace.terminal(), v, &two)?;
        trace.push(step)?;
    }
    Ok(trace)
}

/// Replaces a combed baseless `AR_{p-1/2,q}` by `AR_{p,q+1}`.  `μ = 2^{-p}`.
pub fn t2(g: &MatchGraph, p: u32, q: u32, locus: &[VertexId]) -> Result<RewriteStep> {
    let (before, after) = t2_templates(p, q)?;
    replace_block(
        g,
        "t2",
        &before,
        &after,
        locus,
        Multiplier::pow2(-(p as i64)),
    )
}

/// Replaces a top-combed `LR_{m,n}` by a bottom-combed `RR_{m,n}`.  `μ = 1`.
pub fn t3(g: &MatchGraph, m: u32, n: u32, locus: &[VertexId]) -> Result<RewriteStep> {
    let (before, after) = t3_templates(m, n)?;
    replace_block(g, "t3", &before, &after, locus, Multiplier::one())
}

pub fn l_transform(
    g: &MatchGraph,
    kind: LKindStep,
    (a, b, c, d): (u32, u32, u32, u32),
    locus: &[VertexId],
) -> Result<RewriteStep> {
    let (before, after, mu) = l_templates(kind, a, b, c, d)?;
    let name = format!("l-transform-{}", format!("{kind:?}").to_lowercase());
    replace_block(g, &name, &before, &after, locus, mu)
}
