use serde::{Deserialize, Serialize};

use super::lemmas::{t1, t1_templates, t2, t2_templates};
use super::template::{check_block, locate, Template};
use super::{RewriteStep, TransformTrace};
use crate::error::{Error, Result};
use crate::families::{ar_board, board_graph};
use crate::graph::{MatchGraph, VertexId};
use crate::lattice::{Region, RegionKind};

/// The part of a region whose layers are peeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    /// Everything above `ℓ`, peeled from the top.
    Upper,
    /// Everything below `ℓ'` (or `ℓ`), peeled from the bottom.
    Lower,
}

/// The Aztec rectangle block left after peeling: the board
/// `ar_board(m, n, baseless)`, i.e. `AR_{m,n}` or `AR_{m-1/2,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminal {
    pub m: u32,
    pub n: u32,
    pub baseless: bool,
    /// Block vertices in board order.
    pub vertices: Vec<VertexId>,
    /// The block's row nearest the marked diagonal, left to right in the
    /// peeling frame.
    pub base_row: Vec<VertexId>,
}

/// Peels the layers of one part of a region's dual graph with the two
/// Aztec rectangle transformations, top layer first.
///
/// `g` must contain the dual graph of the part at the positions produced by
/// [`crate::graph::dual_graph`].
pub fn composite(g: &MatchGraph, region: &Region, part: Part) -> Result<TransformTrace> {
    composite_with_terminal(g, region, part).map(|(t, _)| t)
}

/// [`composite`], also reporting the remaining block.
pub fn composite_with_terminal(
    g: &MatchGraph,
    region: &Region,
    part: Part,
) -> Result<(TransformTrace, Terminal)> {
    let diagonals = region.diagonals();
    let strips = region.strips();
    let (mut ds, mut width, mut top, frame) = match part {
        Part::Upper => {
            let upto: Vec<i64> = diagonals
                .iter()
                .copied()
                .filter(|&r| r <= region.ell())
                .collect();
            let ds: Vec<i64> = upto.windows(2).map(|w| w[1] - w[0]).collect();
            (ds, strips[0].width(), 0i64, Frame::Identity)
        }
        Part::Lower => {
            if region.kind() == RegionKind::Douglas {
                return Err(Error::PreconditionFailed(
                    "a Douglas region has no lower part".into(),
                ));
            }
            let from: Vec<i64> = diagonals
                .iter()
                .copied()
                .filter(|&r| r >= region.ell_prime())
                .collect();
            let ds: Vec<i64> = from.windows(2).rev().map(|w| w[1] - w[0]).collect();
            let last = strips.len() as i64 - 1;
            (ds, strips[last as usize].width(), -last, Frame::HalfTurn)
        }
    };
    if ds.is_empty() {
        return Err(Error::PreconditionFailed("the part has no layers".into()));
    }

    let mut work = frame.apply(g);
    let mut trace = TransformTrace::new(g.clone());
    while ds.len() > 1 {
        let d1 = ds[0];
        let a = width as u32;
        let corner = top_left(&work, top)?;
        let step = if d1 % 2 == 0 {
            let p = (d1 / 2) as u32;
            let (before, _) = t1_templates(p, a)?;
            let locus = locate(&work, &before, anchor(&before)?, corner)?;
            let step = t1(&work, p, a, &locus)?;
            ds = std::iter::once(d1 + ds[1] - 1)
                .chain(ds[2..].iter().copied())
                .collect();
            width -= 1;
            top += 2;
            step
        } else {
            let p = ((d1 + 1) / 2) as u32;
            let (before, _) = t2_templates(p, a)?;
            let locus = locate(&work, &before, anchor(&before)?, corner)?;
            let step = t2(&work, p, a, &locus)?;
            ds = std::iter::once(d1 + ds[1] + 1)
                .chain(ds[2..].iter().copied())
                .collect();
            width += 1;
            step
        };
        work = step.after.clone();
        trace.push(frame.undo_step(step))?;
    }

    let d1 = ds[0];
    let (m, n, baseless) = if d1 % 2 == 0 {
        (d1 / 2, width, false)
    } else {
        ((d1 + 1) / 2, width, true)
    };
    let board = ar_board(m, n, baseless);
    let block = Template::with_boundary(board_graph(&board), "bottom")?;
    let corner = top_left(&work, top)?;
    let locus = locate(&work, &block, anchor(&block)?, corner)?;
    let matched = check_block(&work, "terminal block", &block, &locus)?;
    let base_row = block.attach.iter().map(|t| matched.image[t]).collect();
    let terminal = Terminal {
        m: m as u32,
        n: n as u32,
        baseless,
        vertices: locus,
        base_row,
    };
    Ok((trace, terminal))
}

/// Template vertex at board position `(1, 0)`: the leftmost vertex of the
/// top row.
fn anchor(t: &Template) -> Result<VertexId> {
    t.at((1, 0))
        .ok_or_else(|| Error::PatternMismatch("block template has an empty top row".into()))
}

fn top_left(g: &MatchGraph, row: i64) -> Result<(i64, i64)> {
    g.vertices()
        .filter_map(|(_, v)| v.pos)
        .filter(|&(_, y)| y == row)
        .min()
        .ok_or_else(|| Error::PatternMismatch(format!("no vertices in row {row}")))
}

/// Coordinate frame used while peeling: the lower part is handled upside
/// down, by a half turn of all positions.
#[derive(Clone, Copy)]
enum Frame {
    Identity,
    HalfTurn,
}

impl Frame {
    fn apply(self, g: &MatchGraph) -> MatchGraph {
        match self {
            Frame::Identity => g.clone(),
            Frame::HalfTurn => half_turn(g),
        }
    }

    fn undo_step(self, mut step: RewriteStep) -> RewriteStep {
        if let Frame::HalfTurn = self {
            step.before = half_turn(&step.before);
            step.after = half_turn(&step.after);
        }
        step
    }
}

pub(crate) fn half_turn(g: &MatchGraph) -> MatchGraph {
    let mut out = g.clone();
    out.flip_vertical();
    let ids: Vec<VertexId> = out.vertex_ids().collect();
    for v in ids {
        let vertex = out.vertex_mut(v).expect("listed vertex");
        vertex.pos = vertex.pos.map(|(x, y)| (-x, y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::pow2;
    use crate::graph::{count_matchings, dual_graph, Oracle};
    use crate::lattice::{build, region_stats, Color, RegionParams};
    use crate::transforms::Multiplier;

    fn douglas(a: u32, d: &[u32]) -> Region {
        build(&RegionParams::douglas(a, d)).unwrap()
    }

    #[test]
    fn single_layer_is_already_terminal() {
        let r = douglas(2, &[2]);
        let g = dual_graph(&r);
        let (trace, term) = composite_with_terminal(&g, &r, Part::Upper).unwrap();
        assert!(trace.steps.is_empty());
        assert!(trace.cumulative().is_one());
        assert_eq!((term.m, term.n, term.baseless), (1, 2, false));
    }

    #[test]
    fn first_even_layer_is_peeled_by_t1() {
        let r = douglas(7, &[4, 2, 5, 4]);
        let g = dual_graph(&r);
        let trace = composite(&g, &r, Part::Upper).unwrap();
        assert_eq!(trace.steps[0].name, "t1");
        let expected = dual_graph(&douglas(6, &[5, 5, 4]));
        let (got, _) = trace.steps[0].after.compacted_by_position();
        let (want, _) = expected.compacted_by_position();
        assert!(got.same_up_to_translation(&want));
        assert_eq!(trace.steps[1].name, "t2");
        let (got, _) = trace.steps[1].after.compacted_by_position();
        let (want, _) = dual_graph(&douglas(7, &[11, 4])).compacted_by_position();
        assert!(got.same_up_to_translation(&want));
    }

    #[test]
    fn cumulative_multiplier_matches_the_closed_form() {
        for (a, d) in [
            (2u32, vec![2u32, 2]),
            (3, vec![1, 2]),
            (2, vec![3, 1, 2]),
            (3, vec![2, 3]),
            (1, vec![1, 1, 1]),
        ] {
            let r = douglas(a, &d);
            let stats = region_stats(&r);
            let g = dual_graph(&r);
            let (trace, term) = composite_with_terminal(&g, &r, Part::Upper).unwrap();
            let (h, q, c) = (stats.h, stats.q, stats.c_upper);
            let e = match stats.bottom_row_color {
                Color::White => c - h * (q + 1),
                Color::Black => c - h * q,
            };
            assert_eq!(trace.cumulative(), Multiplier::pow2(e), "D_{a}({d:?})");
            assert_eq!(term.baseless, stats.bottom_row_color == Color::Black);
            let lhs = count_matchings(&g).unwrap();
            let rhs = count_matchings(trace.terminal()).unwrap();
            assert_eq!(lhs.value(), &(pow2(e) * rhs.value()));
            for s in &trace.steps {
                assert!(s.check_with_oracle(&Oracle::with_max_vertices(64)).unwrap());
            }
        }
    }

    #[test]
    fn lower_part_of_the_worked_example() {
        let r = build(&RegionParams::symmetric(3, &[3, 3], &[3, 3])).unwrap();
        let g = dual_graph(&r);
        let up = composite(&g, &r, Part::Upper).unwrap();
        let low = composite(up.terminal(), &r, Part::Lower).unwrap();
        let total = &up.cumulative() * &low.cumulative();
        let lhs = count_matchings(&g).unwrap();
        let rhs = count_matchings(low.terminal()).unwrap();
        assert_eq!(lhs.value(), &(total.value() * rhs.value()));
    }
}
