use std::fmt;
use std::str::FromStr;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::composite::{composite, composite_with_terminal, half_turn, Part, Terminal};
use super::lemmas::{
    l_transform, t1, t1_templates, t2, t2_templates, t3, t3_templates, vertex_split_placed,
    LKindStep,
};
use super::template::{locate, replace_block, Template};
use super::{Closing, Locus, Multiplier, RewriteStep, SplitRecord, TransformTrace};
use crate::error::{Error, Result};
use crate::exact::ExactCount;
use crate::families::{
    aztec_rectangle, connected_sum, gamma, half_honeycomb, l_shaped, ArVariant, LKind,
};
use crate::formulas::{aztec_diamond, gamma_count, macmahon};
use crate::graph::{
    count_matchings, dual_graph, isomorphism, split_verdict, MatchGraph, SplitVerdict, VertexId,
};
use crate::lattice::{build, Color, Region, RegionKind, RegionParams, Shape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Symmetric,
    Douglas,
    AsymmetricOdd,
}

impl FromStr for Pipeline {
    type Err = Error;

    /// Also accepts the short aliases `thm21`, `thm23` and `thm61-stages`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" | "thm21" => Ok(Pipeline::Symmetric),
            "douglas" | "thm23" => Ok(Pipeline::Douglas),
            "asymmetric-odd" | "thm61-stages" => Ok(Pipeline::AsymmetricOdd),
            other => Err(Error::InvalidParams(format!("unknown pipeline `{other}`"))),
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Symmetric => "symmetric",
            Pipeline::Douglas => "douglas",
            Pipeline::AsymmetricOdd => "asymmetric-odd",
        })
    }
}

pub fn replay(region: &Region, pipeline: Pipeline) -> Result<TransformTrace> {
    match pipeline {
        Pipeline::Symmetric => peel_symmetric(region),
        Pipeline::Douglas => peel_douglas(region),
        Pipeline::AsymmetricOdd => peel_asymmetric_odd(region),
    }
}

/// Douglas regions: peel every layer, then read off the Aztec rectangle
/// that is left.
pub fn peel_douglas(region: &Region) -> Result<TransformTrace> {
    if region.kind() != RegionKind::Douglas {
        return Err(Error::InvalidParams(
            "this pipeline takes a Douglas region".into(),
        ));
    }
    let g = dual_graph(region);
    let (mut trace, term) = composite_with_terminal(&g, region, Part::Upper)?;
    if !term.baseless && term.m == term.n {
        trace.closing = Some(Closing {
            description: format!("Aztec diamond of order {}", term.m),
            value: ExactCount::from_integer(aztec_diamond(term.m as u64)),
        });
        return Ok(trace);
    }
    close_with_zero(&mut trace, "unbalanced rectangle")?;
    Ok(trace)
}

/// Symmetric regions: peel both parts down to two baseless Aztec
/// rectangles glued along the marked diagonal, then close with a honeycomb,
/// a factorisation or a vanishing argument.
pub fn peel_symmetric(region: &Region) -> Result<TransformTrace> {
    if region.kind() != RegionKind::Symmetric {
        return Err(Error::InvalidParams(
            "this pipeline takes a symmetric region".into(),
        ));
    }
    if region.bottom_row_color() != Color::Black {
        return Err(Error::PreconditionFailed(
            "the pipeline needs a black bottom row".into(),
        ));
    }
    let g = dual_graph(region);
    let (mut trace, up) = composite_with_terminal(&g, region, Part::Upper)?;
    let (lower, low) = composite_with_terminal(trace.terminal(), region, Part::Lower)?;
    trace.extend(lower)?;
    let glued = glue_baseless(&mut trace, &up, &low)?;
    close_glued(&mut trace, &glued)
}

/// Two baseless Aztec rectangles `AR_{h-1/2,q-1}` and `AR_{h'-1/2,q-1}`
/// whose base rows are joined by vertical edges.
#[derive(Clone, Debug)]
struct Glued {
    h: i64,
    h_prime: i64,
    q: i64,
    /// Row of the upper base row; the lower base row is the next one.
    junction: i64,
}

fn glue_baseless(trace: &mut TransformTrace, up: &Terminal, low: &Terminal) -> Result<Glued> {
    let g = trace.terminal().clone();
    let row_of = |v: VertexId| {
        g.pos(v)
            .map(|p| p.1)
            .ok_or_else(|| Error::BadLocus(format!("{v} has no position")))
    };
    match (up.baseless, low.baseless) {
        (true, true) => Ok(Glued {
            h: up.m as i64,
            h_prime: low.m as i64,
            q: up.n as i64 + 1,
            junction: row_of(up.base_row[0])?,
        }),
        (false, false) => {
            let y = row_of(up.base_row[0])?;
            trace.push(shift_rows(&g, y, 2))?;
            for &v in &up.base_row {
                let g = trace.terminal();
                let x = g.pos(v).expect("positioned").0;
                let above: BTreeSet<VertexId> = g
                    .neighbors(v)
                    .map(|(u, _)| u)
                    .filter(|&u| g.pos(u).is_some_and(|p| p.1 < y))
                    .collect();
                let step = vertex_split_placed(g, v, &above, Some((x, y + 1)), Some((x, y + 2)))?;
                trace.push(step)?;
            }
            let step = peel_top_block(trace.terminal(), up.m, up.n)?;
            trace.push(step)?;
            let turned = half_turn(trace.terminal());
            let mut step = peel_top_block(&turned, low.m, low.n)?;
            step.before = half_turn(&step.before);
            step.after = half_turn(&step.after);
            trace.push(step)?;
            Ok(Glued {
                h: up.m as i64,
                h_prime: low.m as i64,
                q: up.n as i64,
                junction: y + 1,
            })
        }
        _ => Err(Error::PreconditionFailed(
            "the two peeled blocks do not meet as two baseless rectangles".into(),
        )),
    }
}

/// Applies the first Aztec rectangle transformation to the combed `AR_{m,n}`
/// occupying the top rows of `g`.
fn peel_top_block(g: &MatchGraph, m: u32, n: u32) -> Result<RewriteStep> {
    let (before, _) = t1_templates(m, n)?;
    let anchor = before
        .at((1, 0))
        .ok_or_else(|| Error::PatternMismatch("block template has an empty top row".into()))?;
    let locus = locate(g, &before, anchor, top_left(g)?)?;
    t1(g, m, n, &locus)
}

fn top_left(g: &MatchGraph) -> Result<(i64, i64)> {
    g.vertices()
        .filter_map(|(_, v)| v.pos.map(|(x, y)| (y, x)))
        .min()
        .map(|(y, x)| (x, y))
        .ok_or_else(|| Error::PatternMismatch("graph has no positioned vertices".into()))
}

/// Moves every vertex strictly below row `y` down by `dy` rows.  `μ = 1`.
fn shift_rows(g: &MatchGraph, y: i64, dy: i64) -> RewriteStep {
    let mut out = g.clone();
    let moved: Vec<VertexId> = g
        .vertices()
        .filter(|(_, v)| v.pos.is_some_and(|p| p.1 > y))
        .map(|(id, _)| id)
        .collect();
    for &v in &moved {
        let vertex = out.vertex_mut(v).expect("listed vertex");
        vertex.pos = vertex.pos.map(|(x, r)| (x, r + dy));
    }
    RewriteStep {
        name: "relabel".into(),
        before: g.clone(),
        after: out,
        multiplier: Multiplier::one(),
        locus: Locus {
            vertices: moved.clone(),
            edges: Vec::new(),
            replacement: moved,
        },
    }
}

fn close_glued(trace: &mut TransformTrace, glued: &Glued) -> Result<TransformTrace> {
    let Glued {
        h,
        h_prime,
        q,
        junction,
    } = *glued;
    if h != h_prime {
        close_with_zero(trace, "unequal block heights")?;
        return Ok(std::mem::take(trace));
    }
    let g = trace.terminal().clone();
    let rows = |keep: &dyn Fn(i64) -> bool| -> BTreeSet<VertexId> {
        g.vertices()
            .filter(|(_, v)| v.pos.is_some_and(|p| keep(p.1)))
            .map(|(id, _)| id)
            .collect()
    };
    let upper = rows(&|y| y < junction);
    let lower = rows(&|y| y > junction + 1);
    match q.cmp(&h) {
        std::cmp::Ordering::Greater => {
            let (step, value) = honeycomb_step(&g, q - h, h)?;
            trace.push(step)?;
            trace.closing = Some(Closing {
                description: format!("hexagon with sides {}, {h}, {h}", q - h),
                value: ExactCount::from_integer(value),
            });
        }
        std::cmp::Ordering::Equal => {
            for (name, part) in [("split-upper", upper), ("split-lower", lower)] {
                let (step, record) = split_off(trace.terminal(), name, &part)?;
                trace.push(step)?;
                trace.splits.push(record);
            }
            trace.closing = Some(Closing {
                description: format!("{h} disjoint edges"),
                value: count_matchings(trace.terminal())?,
            });
        }
        std::cmp::Ordering::Less => {
            let verdict = split_verdict(&g, &upper)?;
            trace.splits.push(SplitRecord {
                name: "upper-block".into(),
                subgraph: upper.into_iter().collect(),
                verdict,
            });
            if verdict != SplitVerdict::Zero {
                return Err(Error::PreconditionFailed(format!(
                    "expected a vanishing split, got {verdict:?}"
                )));
            }
            trace.closing = Some(Closing {
                description: "no perfect matchings".into(),
                value: ExactCount::zero(),
            });
        }
    }
    Ok(std::mem::take(trace))
}

/// Replaces the glued pair of rectangles by the dual of the hexagon with
/// sides `a, h, h`, whose own peeling ends at the same graph.
fn honeycomb_step(g: &MatchGraph, a: i64, h: i64) -> Result<(RewriteStep, num_bigint::BigInt)> {
    let ones = vec![1u32; h as usize];
    let hex = build(&RegionParams::symmetric(a as u32, &ones, &ones))?;
    Ok((
        hexagon_step(g, &hex)?,
        macmahon(a as u64, h as u64, h as u64).into(),
    ))
}

/// Removes an induced subgraph that factors off.  `μ = M(H)`.
fn split_off(
    g: &MatchGraph,
    name: &str,
    part: &BTreeSet<VertexId>,
) -> Result<(RewriteStep, SplitRecord)> {
    let verdict = split_verdict(g, part)?;
    let record = SplitRecord {
        name: name.into(),
        subgraph: part.iter().copied().collect(),
        verdict,
    };
    if verdict != SplitVerdict::Factor {
        return Err(Error::PreconditionFailed(format!(
            "`{name}` does not factor off ({verdict:?})"
        )));
    }
    let inside = count_matchings(&g.induced(part))?;
    let rest: BTreeSet<VertexId> = g.vertex_ids().filter(|v| !part.contains(v)).collect();
    let after = g.induced(&rest);
    let multiplier = Multiplier::from_rational(inside.value())?;
    let step = RewriteStep {
        name: name.into(),
        before: g.clone(),
        after,
        multiplier,
        locus: Locus {
            vertices: record.subgraph.clone(),
            edges: Vec::new(),
            replacement: Vec::new(),
        },
    };
    Ok((step, record))
}

/// Records the vanishing split of the whole current graph.
fn close_with_zero(trace: &mut TransformTrace, why: &str) -> Result<()> {
    let g = trace.terminal();
    let all: BTreeSet<VertexId> = g.vertex_ids().collect();
    let verdict = split_verdict(g, &all)?;
    trace.splits.push(SplitRecord {
        name: why.into(),
        subgraph: all.into_iter().collect(),
        verdict,
    });
    if verdict != SplitVerdict::Zero {
        return Err(Error::PreconditionFailed(format!(
            "{why}: expected a vanishing split, got {verdict:?}"
        )));
    }
    trace.closing = Some(Closing {
        description: "no perfect matchings".into(),
        value: ExactCount::zero(),
    });
    Ok(())
}

/// Asymmetric regions with all distances odd, in four stages: merge the
/// middle layers, turn the two parts into an Aztec rectangle and a half
/// honeycomb, then move the missing corner of the rectangle with the
/// L-transformations until a `Γ` graph is left.
pub fn peel_asymmetric_odd(region: &Region) -> Result<TransformTrace> {
    if region.kind() != RegionKind::Asymmetric {
        return Err(Error::InvalidParams(
            "this pipeline takes an asymmetric region".into(),
        ));
    }
    let p = region.params();
    if p.d.iter().chain(&p.c).chain(&p.dprime).any(|x| x % 2 == 0) {
        return Err(Error::PreconditionFailed(
            "the staged pipeline needs all distances odd".into(),
        ));
    }
    let g = dual_graph(region);
    let (mut trace, up) = composite_with_terminal(&g, region, Part::Upper)?;
    let (lower, low) = composite_with_terminal(trace.terminal(), region, Part::Lower)?;
    trace.extend(lower)?;
    if !(up.baseless && low.baseless) {
        return Err(Error::PreconditionFailed(
            "peeling did not end in two baseless rectangles".into(),
        ));
    }
    let (h, q) = (up.m as i64, up.n as i64 + 1);
    let t = p.c.len() as i64;
    let h0: i64 = p.c.iter().map(|&x| (x as i64 - 1) / 2).sum();
    if h != low.m as i64 {
        close_with_zero(&mut trace, "unequal block heights")?;
        return Ok(trace);
    }
    let row_of = |v: VertexId| trace.terminal().pos(v).map(|p| p.1).expect("positioned");
    let (top_base, bottom_base) = (row_of(up.base_row[0]), row_of(low.base_row[0]));
    if q <= h {
        let g = trace.terminal().clone();
        let rows = |keep: &dyn Fn(i64) -> bool| -> BTreeSet<VertexId> {
            g.vertices()
                .filter(|(_, v)| v.pos.is_some_and(|p| keep(p.1)))
                .map(|(id, _)| id)
                .collect()
        };
        let upper = rows(&|y| y < top_base);
        if q < h {
            let verdict = split_verdict(&g, &upper)?;
            trace.splits.push(SplitRecord {
                name: "upper-block".into(),
                subgraph: upper.into_iter().collect(),
                verdict,
            });
            if verdict != SplitVerdict::Zero {
                return Err(Error::PreconditionFailed(format!(
                    "expected a vanishing split, got {verdict:?}"
                )));
            }
            trace.closing = Some(Closing {
                description: "no perfect matchings".into(),
                value: ExactCount::zero(),
            });
            return Ok(trace);
        }
        let lower = rows(&|y| y > bottom_base);
        for (name, part) in [("split-upper", upper), ("split-lower", lower)] {
            let (step, record) = split_off(trace.terminal(), name, &part)?;
            trace.push(step)?;
            trace.splits.push(record);
        }
        trace.closing = Some(Closing {
            description: "remaining middle part".into(),
            value: count_matchings(trace.terminal())?,
        });
        return Ok(trace);
    }

    if h0 == 0 {
        let ones = |n: i64| vec![1u32; n as usize];
        let hex = build(&RegionParams::asymmetric(
            (q - h) as u32,
            &ones(h),
            &ones(t),
            &ones(h),
        ))?;
        let step = hexagon_step(trace.terminal(), &hex)?;
        trace.push(step)?;
        trace.closing = Some(Closing {
            description: format!("hexagon with sides {h}, {}, {}", q - h, h + t),
            value: ExactCount::from_integer(macmahon(h as u64, (q - h) as u64, (h + t) as u64)),
        });
        return Ok(trace);
    }

    merge_middle_layers(&mut trace, region)?;
    let (h, q, t, h0) = (h as u32, q as u32, t as u32, h0 as u32);
    let step = t2_on_top(trace.terminal(), h, q - 1)?;
    trace.push(step)?;
    let step = honeycomb_below(trace.terminal(), h, q)?;
    trace.push(step)?;

    let (ha, hc) = (q - h, h);
    let mut current = lbar_sum(h + 1, q, h0, q, ha, h + t, hc)?;
    trace.push(isomorphism_step(trace.terminal(), &current)?)?;
    for i in 0..h {
        let (a, b) = (h + 1 - i, q - i);
        let step = l_transform(&current.graph, LKindStep::B, (a, b, h0, q), &current.locus)?;
        trace.push(step)?;
        current = lbar_sum(a - 1, b - 1, h0, q, ha, h + t + i + 1, hc)?;
        trace.push(isomorphism_step(trace.terminal(), &current)?)?;
    }
    let step = l_transform(
        &current.graph,
        LKindStep::C,
        (1, q - h, h0, q),
        &current.locus,
    )?;
    trace.push(step)?;
    for i in 1..h0 {
        current = l_sum(i, h + i - 1, h0 - i, q, ha, 2 * h + t + i, hc)?;
        trace.push(isomorphism_step(trace.terminal(), &current)?)?;
        let step = l_transform(
            &current.graph,
            LKindStep::A,
            (i, h + i - 1, h0 - i, q),
            &current.locus,
        )?;
        trace.push(step)?;
    }
    let last = gamma(ha, h0 + 2 * h + t, hc, h0, h0 + h - 1)?;
    trace.push(isomorphism_step(
        trace.terminal(),
        &Canonical {
            locus: Vec::new(),
            graph: last,
        },
    )?)?;
    trace.closing = Some(Closing {
        description: format!("Γ^{{{h0},{}}}_{{{ha},{},{hc}}}", h0 + h - 1, h0 + 2 * h + t),
        value: ExactCount::from_integer(gamma_count(ha, h0 + 2 * h + t, hc, h0, h0 + h - 1)?),
    });
    Ok(trace)
}

/// A canonical L-shaped graph glued to a half honeycomb, with the vertices
/// of the L-shaped summand in board order.
struct Canonical {
    graph: MatchGraph,
    locus: Vec<VertexId>,
}

fn lbar_sum(a: u32, b: u32, c: u32, d: u32, ha: u32, hb: u32, hc: u32) -> Result<Canonical> {
    l_sum_of(LKind::Lbar, a, b, c, d, ha, hb, hc)
}

fn l_sum(a: u32, b: u32, c: u32, d: u32, ha: u32, hb: u32, hc: u32) -> Result<Canonical> {
    l_sum_of(LKind::L, a, b, c, d, ha, hb, hc)
}

#[allow(clippy::too_many_arguments)]
fn l_sum_of(
    kind: LKind,
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    ha: u32,
    hb: u32,
    hc: u32,
) -> Result<Canonical> {
    let l = l_shaped(a, b, c, d, kind)?;
    let graph = connected_sum(&l, &half_honeycomb(ha, hb, hc)?, "bottom", "top")?;
    Ok(Canonical {
        locus: l.vertex_ids().collect(),
        graph,
    })
}

/// A relabelling onto a canonical graph, found by isomorphism search.
fn isomorphism_step(g: &MatchGraph, target: &Canonical) -> Result<RewriteStep> {
    let map = isomorphism(g, &target.graph).ok_or_else(|| {
        Error::PatternMismatch("the graph is not isomorphic to the expected canonical form".into())
    })?;
    let (vertices, replacement) = map.into_iter().unzip();
    Ok(RewriteStep {
        name: "isomorphism".into(),
        before: g.clone(),
        after: target.graph.clone(),
        multiplier: Multiplier::one(),
        locus: Locus {
            vertices,
            edges: Vec::new(),
            replacement,
        },
    })
}

/// Merges the middle layers from the bottom up with the third Aztec
/// rectangle transformation, until only the first one is thicker than 1.
fn merge_middle_layers(trace: &mut TransformTrace, region: &Region) -> Result<()> {
    let mut c: Vec<i64> = region.params().c.iter().map(|&x| x as i64).collect();
    let mut tops = vec![region.ell()];
    for &x in &c {
        tops.push(tops.last().expect("non-empty") + x);
    }
    for idx in (1..c.len()).rev() {
        if c[idx] > 1 {
            let y = region
                .strip_index(tops[idx], Shape::TriangleUp)
                .ok_or_else(|| {
                    Error::PatternMismatch(format!("no up-pointing strip on row {}", tops[idx]))
                })? as i64;
            let g = trace.terminal();
            let row: Vec<(i64, VertexId)> = g
                .vertices()
                .filter_map(|(id, v)| v.pos.filter(|p| p.1 == y).map(|p| (p.0, id)))
                .collect();
            let left = row
                .iter()
                .min()
                .ok_or_else(|| Error::PatternMismatch(format!("row {y} is empty")))?
                .0;
            let (m, n) = (((c[idx] - 1) / 2) as u32, row.len() as u32);
            let (before, _) = t3_templates(m, n)?;
            let anchor = before
                .at((1, -1))
                .ok_or_else(|| Error::PatternMismatch("layer template has no first tip".into()))?;
            let locus = locate(g, &before, anchor, (left, y))?;
            let step = t3(g, m, n, &locus)?;
            trace.push(step)?;
            c[idx - 1] += c[idx] - 1;
            c[idx] = 1;
        }
    }
    Ok(())
}

/// The second Aztec rectangle transformation on the block in the top rows.
fn t2_on_top(g: &MatchGraph, p: u32, q: u32) -> Result<RewriteStep> {
    let (before, _) = t2_templates(p, q)?;
    let anchor = before
        .at((1, 0))
        .ok_or_else(|| Error::PatternMismatch("block template has an empty top row".into()))?;
    let locus = locate(g, &before, anchor, top_left(g)?)?;
    t2(g, p, q, &locus)
}

/// Replaces the baseless rectangle `AR_{h-1/2,q-1}` in the bottom rows by
/// the part of a honeycomb whose peeling produces it.
fn honeycomb_below(g: &MatchGraph, h: u32, q: u32) -> Result<RewriteStep> {
    let turned = half_turn(g);
    let before =
        Template::with_boundary(aztec_rectangle(h, q - 1, ArVariant::Baseless)?, "bottom")?;
    let ones = vec![1u32; h as usize];
    let douglas = build(&RegionParams::douglas(q - h, &ones))?;
    let dg = dual_graph(&douglas);
    let mu = composite(&dg, &douglas, Part::Upper)?.cumulative().inv();
    let after = Template::with_boundary(dg, "bottom")?;
    let anchor = before
        .at((1, 0))
        .ok_or_else(|| Error::PatternMismatch("block template has an empty top row".into()))?;
    let locus = locate(&turned, &before, anchor, top_left(&turned)?)?;
    let mut step = replace_block(&turned, "honeycomb-below", &before, &after, &locus, mu)?;
    step.before = half_turn(&step.before);
    step.after = half_turn(&step.after);
    Ok(step)
}

/// Replaces the current graph by the dual of a hexagon-shaped region whose
/// peeling ends at the same graph.
fn hexagon_step(g: &MatchGraph, hex: &Region) -> Result<RewriteStep> {
    let hg = dual_graph(hex);
    let (mut peeled, _) = composite_with_terminal(&hg, hex, Part::Upper)?;
    let (lower, _) = composite_with_terminal(peeled.terminal(), hex, Part::Lower)?;
    peeled.extend(lower)?;
    let (mine, _) = g.compacted_by_position();
    let (theirs, _) = peeled.terminal().compacted_by_position();
    if !mine.same_up_to_translation(&theirs) && isomorphism(&mine, &theirs).is_none() {
        return Err(Error::PatternMismatch(
            "the peeled hexagon does not match the current graph".into(),
        ));
    }
    Ok(RewriteStep {
        name: "honeycomb".into(),
        before: g.clone(),
        after: hg.clone(),
        multiplier: peeled.cumulative().inv(),
        locus: Locus {
            vertices: g.vertex_ids().collect(),
            edges: Vec::new(),
            replacement: hg.vertex_ids().collect(),
        },
    })
}
