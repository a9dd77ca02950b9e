//! Block templates and the generic replace-a-block rewrite.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::graph::{MatchGraph, Side, VertexId};

use super::{Locus, Multiplier, RewriteStep};

/// A block graph with an ordered list of attachment vertices.  Attachments
/// are shared with the surrounding graph; all other vertices are interior
/// and may only be adjacent to block vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    pub graph: MatchGraph,
    pub attach: Vec<VertexId>,
}

impl Template {
    pub fn new(graph: MatchGraph, attach: Vec<VertexId>) -> Result<Self> {
        let distinct: BTreeSet<_> = attach.iter().collect();
        if distinct.len() != attach.len() || attach.iter().any(|&v| !graph.contains(v)) {
            return Err(Error::InvalidParams(
                "template attachments must be distinct block vertices".into(),
            ));
        }
        Ok(Template { graph, attach })
    }

    /// Template whose attachments are one of the graph's boundary lists.
    pub fn with_boundary(graph: MatchGraph, list: &str) -> Result<Self> {
        let attach = graph.boundary(list)?.to_vec();
        Template::new(graph, attach)
    }

    /// Template whose attachments are several boundary lists, concatenated.
    pub fn with_boundaries(graph: MatchGraph, lists: &[&str]) -> Result<Self> {
        let mut attach = Vec::new();
        for l in lists {
            attach.extend_from_slice(graph.boundary(l)?);
        }
        Template::new(graph, attach)
    }

    pub fn len(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Block vertices in template order.
    pub fn order(&self) -> Vec<VertexId> {
        self.graph.vertex_ids().collect()
    }

    /// Vertex of the template at a template position.
    pub fn at(&self, pos: (i64, i64)) -> Option<VertexId> {
        self.graph.find_at(pos)
    }
}

/// Finds the locus of `template` in `g` by positions: the template is
/// translated so that its vertex `anchor` lands on `at`, and each template
/// vertex must then sit on a vertex of `g`.
pub fn locate(
    g: &MatchGraph,
    template: &Template,
    anchor: VertexId,
    at: (i64, i64),
) -> Result<Vec<VertexId>> {
    let base = template
        .graph
        .pos(anchor)
        .ok_or_else(|| Error::BadLocus(format!("template anchor {anchor} has no position")))?;
    let (dx, dy) = (at.0 - base.0, at.1 - base.1);
    let index: HashMap<(i64, i64), VertexId> = g
        .vertices()
        .filter_map(|(id, v)| v.pos.map(|p| (p, id)))
        .collect();
    template
        .graph
        .vertex_ids()
        .map(|t| {
            let (x, y) = template
                .graph
                .pos(t)
                .ok_or_else(|| Error::BadLocus(format!("template vertex {t} has no position")))?;
            index.get(&(x + dx, y + dy)).copied().ok_or_else(|| {
                Error::PatternMismatch(format!(
                    "no vertex at ({}, {}) for template vertex {t}",
                    x + dx,
                    y + dy
                ))
            })
        })
        .collect()
}

/// Replaces the block matched by `locus` with `after`.
///
/// Attachment `i` of `after` is identified with the image of attachment `i`
/// of `before`.  Interior vertices of the match must have exactly the
/// template's neighbourhoods and weights; template edges between two
/// attachments must be present and are removed.  New vertices are placed so
/// that the first attachments of the two templates coincide, and get
/// classes consistent with the attachments.  Edges of `after` that land on
/// an existing edge add their weights to it.
pub fn replace_block(
    g: &MatchGraph,
    name: &str,
    before: &Template,
    after: &Template,
    locus: &[VertexId],
    multiplier: Multiplier,
) -> Result<RewriteStep> {
    if after.attach.len() != before.attach.len() {
        return Err(Error::LengthMismatch {
            left: before.attach.len(),
            right: after.attach.len(),
        });
    }
    let matched = check_block(g, name, before, locus)?;
    let (order, image, attach, touched) =
        (before.order(), matched.image, matched.attach, matched.edges);
    let mut out = g.clone();
    for &t in &order {
        let v = image[&t];
        if !attach.contains(&v) {
            out.remove_vertex(v);
        }
    }
    for &(u, v) in &touched {
        out.remove_edge(u, v);
    }

    let mut place: BTreeMap<VertexId, VertexId> = after
        .attach
        .iter()
        .zip(&before.attach)
        .map(|(&ta, tb)| (ta, image[tb]))
        .collect();
    let first = after.attach.first().map(|&ta| (ta, place[&ta]));
    let shift = first.and_then(|(ta, v)| match (after.graph.pos(ta), g.pos(v)) {
        (Some(p), Some(q)) => Some((q.0 - p.0, q.1 - p.1)),
        _ => None,
    });
    let swap = class_swap(g, after, &place)?;
    for (t, vertex) in after.graph.vertices() {
        if place.contains_key(&t) {
            continue;
        }
        let class = match swap {
            Some(s) => vertex.class.map(|c| if s { c.other() } else { c }),
            None => None,
        };
        let pos = match (shift, vertex.pos) {
            (Some((dx, dy)), Some((x, y))) => Some((x + dx, y + dy)),
            _ => None,
        };
        place.insert(t, out.add_vertex(class, pos));
    }
    for (tu, tv, w) in after.graph.edges() {
        out.merge_edge(place[&tu], place[&tv], w.clone())?;
    }
    let replacement = after.graph.vertex_ids().map(|t| place[&t]).collect();
    Ok(RewriteStep {
        name: name.to_string(),
        before: g.clone(),
        after: out,
        multiplier,
        locus: Locus {
            vertices: locus.to_vec(),
            edges: touched,
            replacement,
        },
    })
}

/// Result of matching a template against a locus.
#[derive(Clone, Debug)]
pub struct BlockMatch {
    /// Template vertex to graph vertex.
    pub image: BTreeMap<VertexId, VertexId>,
    /// Graph vertices playing the attachment roles.
    pub attach: BTreeSet<VertexId>,
    /// Block edges, as graph vertex pairs `(u, v)` with `u < v`.
    pub edges: Vec<(VertexId, VertexId)>,
}

/// Checks that `locus` carries a copy of `block` whose interior vertices
/// have no neighbours outside the block.
pub fn check_block(
    g: &MatchGraph,
    name: &str,
    block: &Template,
    locus: &[VertexId],
) -> Result<BlockMatch> {
    let order = block.order();
    if locus.len() != order.len() {
        return Err(Error::BadLocus(format!(
            "`{name}` needs {} locus vertices, got {}",
            order.len(),
            locus.len()
        )));
    }
    let image: BTreeMap<VertexId, VertexId> =
        order.iter().copied().zip(locus.iter().copied()).collect();
    let distinct: BTreeSet<_> = locus.iter().collect();
    if distinct.len() != locus.len() {
        return Err(Error::BadLocus(format!("`{name}` locus repeats a vertex")));
    }
    for &v in locus {
        if !g.contains(v) {
            return Err(Error::BadLocus(format!(
                "`{name}` locus vertex {v} is not in the graph"
            )));
        }
    }

    let attach: BTreeSet<VertexId> = block.attach.iter().map(|t| image[t]).collect();
    let mut touched = Vec::new();
    for &t in &order {
        let v = image[&t];
        let interior = !attach.contains(&v);
        if interior && g.degree(v) != block.graph.degree(t) {
            return Err(Error::PatternMismatch(format!(
                "`{name}`: vertex {v} has degree {} where the block needs {}",
                g.degree(v),
                block.graph.degree(t)
            )));
        }
        for (tu, w) in block.graph.neighbors(t) {
            let u = image[&tu];
            match g.weight(v, u) {
                Some(gw) if gw == w => {}
                Some(gw) => {
                    return Err(Error::PatternMismatch(format!(
                        "`{name}`: edge {v}-{u} has weight {gw}, expected {w}"
                    )));
                }
                None => {
                    return Err(Error::PatternMismatch(format!(
                        "`{name}`: missing edge {v}-{u}"
                    )))
                }
            }
            if v < u {
                touched.push((v, u));
            }
        }
    }

    Ok(BlockMatch {
        image,
        attach,
        edges: touched,
    })
}

/// Whether the classes of `after` must be swapped to agree with the graph
/// on the attachments.  `None` when classes are not tracked.
fn class_swap(
    g: &MatchGraph,
    after: &Template,
    place: &BTreeMap<VertexId, VertexId>,
) -> Result<Option<bool>> {
    if !g.has_declared_classes() || !after.graph.has_declared_classes() {
        return Ok(None);
    }
    let mut swap = None;
    for (&t, &v) in place {
        let want = g.class(v).expect("declared");
        let have = after.graph.class(t).expect("declared");
        let s = want != have;
        if *swap.get_or_insert(s) != s {
            return Err(Error::NotBipartite(
                "replacement block disagrees with the graph's classes".into(),
            ));
        }
    }
    Ok(Some(swap.unwrap_or(false)))
}

/// The class a new vertex adjacent to `v` must take, if classes are tracked.
pub(crate) fn opposite(g: &MatchGraph, v: VertexId) -> Option<Side> {
    g.class(v).map(Side::other)
}
