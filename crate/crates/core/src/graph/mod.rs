//! Weighted matching graphs.
//!
//! A [`MatchGraph`] keeps stable vertex identifiers, exact rational edge
//! weights, optional planar positions and bipartition classes, and named
//! ordered boundary lists used by connected sums and rewrites.

mod count;
mod dual;
mod iso;
mod oracle;
mod split;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational};

pub use count::{count_matchings, Counter, CounterStats};
pub use dual::dual_graph;
pub use iso::isomorphism;
pub use oracle::{count_matchings_oracle, Oracle, DEFAULT_ORACLE_MAX_VERTICES};
pub use split::{split_verdict, SplitVerdict};

pub type Weight = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Bipartition class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    V1,
    V2,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::V1 => Side::V2,
            Side::V2 => Side::V1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vertex {
    pub class: Option<Side>,
    pub pos: Option<(i64, i64)>,
}

/// Exact-weight graph with stable vertex ids.
///
/// Iteration over vertices and neighbours is always in increasing id order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphDoc", try_from = "GraphDoc")]
pub struct MatchGraph {
    vertices: BTreeMap<VertexId, Vertex>,
    adj: BTreeMap<VertexId, BTreeMap<VertexId, Weight>>,
    boundaries: BTreeMap<String, Vec<VertexId>>,
    next_id: u32,
}

impl MatchGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, class: Option<Side>, pos: Option<(i64, i64)>) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.vertices.insert(id, Vertex { class, pos });
        self.adj.insert(id, BTreeMap::new());
        id
    }

    /// Inserts a vertex with a caller-chosen id.
    pub fn insert_vertex(
        &mut self,
        id: VertexId,
        class: Option<Side>,
        pos: Option<(i64, i64)>,
    ) -> Result<()> {
        if self.vertices.contains_key(&id) {
            return Err(Error::InvalidParams(format!("duplicate vertex {id}")));
        }
        self.vertices.insert(id, Vertex { class, pos });
        self.adj.insert(id, BTreeMap::new());
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<()> {
        if u == v {
            return Err(Error::InvalidParams(format!("self-loop at {u}")));
        }
        if !w.is_positive() {
            return Err(Error::InvalidParams(format!(
                "edge {u}-{v} has nonpositive weight {w}"
            )));
        }
        self.require(u)?;
        self.require(v)?;
        if self.adj[&u].contains_key(&v) {
            return Err(Error::InvalidParams(format!("duplicate edge {u}-{v}")));
        }
        if let (Some(a), Some(b)) = (self.vertices[&u].class, self.vertices[&v].class) {
            if a == b {
                return Err(Error::NotBipartite(format!(
                    "edge {u}-{v} joins two {a:?} vertices"
                )));
            }
        }
        self.adj.get_mut(&u).expect("checked").insert(v, w.clone());
        self.adj.get_mut(&v).expect("checked").insert(u, w);
        Ok(())
    }

    pub fn add_unit_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.add_edge(u, v, Weight::one())
    }

    /// Adds `w` to the weight of edge `u-v`, creating it if absent.
    pub fn merge_edge(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<()> {
        match self.weight(u, v).cloned() {
            Some(old) => self.set_weight(u, v, old + w),
            None => self.add_edge(u, v, w),
        }
    }

    pub fn set_weight(&mut self, u: VertexId, v: VertexId, w: Weight) -> Result<()> {
        if !w.is_positive() {
            return Err(Error::InvalidParams(format!(
                "edge {u}-{v} has nonpositive weight {w}"
            )));
        }
        if self.weight(u, v).is_none() {
            return Err(Error::BadLocus(format!("no edge {u}-{v}")));
        }
        self.adj
            .get_mut(&u)
            .expect("edge exists")
            .insert(v, w.clone());
        self.adj.get_mut(&v).expect("edge exists").insert(u, w);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Option<Weight> {
        let w = self.adj.get_mut(&u)?.remove(&v)?;
        self.adj.get_mut(&v).expect("symmetric").remove(&u);
        Some(w)
    }

    /// Removes a vertex, its edges, and its occurrences in boundary lists.
    pub fn remove_vertex(&mut self, v: VertexId) -> Option<Vertex> {
        let vertex = self.vertices.remove(&v)?;
        for u in self.adj.remove(&v).unwrap_or_default().into_keys() {
            self.adj.get_mut(&u).expect("symmetric").remove(&v);
        }
        for list in self.boundaries.values_mut() {
            list.retain(|&x| x != v);
        }
        Some(vertex)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Vertex> {
        self.vertices.get(&v)
    }

    pub fn vertex_mut(&mut self, v: VertexId) -> Option<&mut Vertex> {
        self.vertices.get_mut(&v)
    }

    pub fn class(&self, v: VertexId) -> Option<Side> {
        self.vertices.get(&v).and_then(|x| x.class)
    }

    pub fn pos(&self, v: VertexId) -> Option<(i64, i64)> {
        self.vertices.get(&v).and_then(|x| x.pos)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &Vertex)> + '_ {
        self.vertices.iter().map(|(&id, v)| (id, v))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges as `(u, v, weight)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, &Weight)> + '_ {
        self.adj.iter().flat_map(|(&u, nbrs)| {
            nbrs.iter()
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, w)| (u, v, w))
        })
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, &Weight)> + '_ {
        self.adj
            .get(&v)
            .into_iter()
            .flat_map(|m| m.iter().map(|(&u, w)| (u, w)))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeMap::len)
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<&Weight> {
        self.adj.get(&u)?.get(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.weight(u, v).is_some()
    }

    /// True when every edge has weight one.
    pub fn is_unit_weighted(&self) -> bool {
        self.edges().all(|(_, _, w)| w.is_one())
    }

    /// Replaces every edge weight by `w`.
    pub fn with_uniform_weight(&self, w: &Weight) -> Result<MatchGraph> {
        if !w.is_positive() {
            return Err(Error::InvalidParams("weights must be positive".into()));
        }
        let mut g = self.clone();
        for nbrs in g.adj.values_mut() {
            for x in nbrs.values_mut() {
                *x = w.clone();
            }
        }
        Ok(g)
    }

    /// Vertex with the given position, lowest id first.
    pub fn find_at(&self, pos: (i64, i64)) -> Option<VertexId> {
        self.vertices
            .iter()
            .find(|(_, v)| v.pos == Some(pos))
            .map(|(&id, _)| id)
    }

    pub fn set_boundary(&mut self, name: impl Into<String>, list: Vec<VertexId>) -> Result<()> {
        let name = name.into();
        let mut seen = BTreeSet::new();
        for &v in &list {
            self.require(v)?;
            if !seen.insert(v) {
                return Err(Error::InvalidParams(format!(
                    "boundary list `{name}` repeats {v}"
                )));
            }
        }
        self.boundaries.insert(name, list);
        Ok(())
    }

    pub fn boundary(&self, name: &str) -> Result<&[VertexId]> {
        self.boundaries
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownBoundary(name.to_string()))
    }

    pub fn boundaries(&self) -> &BTreeMap<String, Vec<VertexId>> {
        &self.boundaries
    }

    pub fn remove_boundary(&mut self, name: &str) -> Option<Vec<VertexId>> {
        self.boundaries.remove(name)
    }

    pub fn clear_boundaries(&mut self) {
        self.boundaries.clear();
    }

    /// Next id that [`add_vertex`](Self::add_vertex) would hand out.
    pub fn next_id(&self) -> u32 {
        self.next_id
    }

    /// Shifts every position by `(dx, dy)`.
    pub fn translate(&mut self, dx: i64, dy: i64) {
        for v in self.vertices.values_mut() {
            if let Some((x, y)) = v.pos {
                v.pos = Some((x + dx, y + dy));
            }
        }
    }

    /// Mirrors positions top to bottom (`y -> -y`).
    pub fn flip_vertical(&mut self) {
        for v in self.vertices.values_mut() {
            if let Some((x, y)) = v.pos {
                v.pos = Some((x, -y));
            }
        }
    }

    /// Swaps the two bipartition classes.
    pub fn swap_classes(&mut self) {
        for v in self.vertices.values_mut() {
            v.class = v.class.map(Side::other);
        }
    }

    pub fn clear_classes(&mut self) {
        for v in self.vertices.values_mut() {
            v.class = None;
        }
    }

    /// Whether every vertex carries a class.
    pub fn has_declared_classes(&self) -> bool {
        !self.vertices.is_empty() && self.vertices.values().all(|v| v.class.is_some())
    }

    /// A proper 2-colouring if one exists: the declared classes when every
    /// vertex has one, otherwise a BFS colouring starting each component at
    /// its lowest id with `V1`.
    pub fn bipartition(&self) -> Result<BTreeMap<VertexId, Side>> {
        if self.has_declared_classes() {
            return Ok(self
                .vertices
                .iter()
                .map(|(&id, v)| (id, v.class.expect("declared")))
                .collect());
        }
        let mut side = BTreeMap::new();
        for &start in self.vertices.keys() {
            if side.contains_key(&start) {
                continue;
            }
            side.insert(start, Side::V1);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let sv = side[&v];
                for (u, _) in self.neighbors(v) {
                    match side.get(&u) {
                        Some(&su) if su == sv => {
                            return Err(Error::NotBipartite(format!(
                                "odd cycle through {u} and {v}"
                            )));
                        }
                        Some(_) => {}
                        None => {
                            side.insert(u, sv.other());
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        Ok(side)
    }

    /// Connected components, each sorted, ordered by their lowest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.vertices.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for (u, _) in self.neighbors(v) {
                    if seen.insert(u) {
                        comp.push(u);
                        queue.push_back(u);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// The subgraph induced by `keep`; boundary lists are restricted to it.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> MatchGraph {
        let mut g = self.clone();
        let drop: Vec<VertexId> = g.vertex_ids().filter(|v| !keep.contains(v)).collect();
        for v in drop {
            g.remove_vertex(v);
        }
        g
    }

    /// Copy with ids renumbered `0..n` in the current id order.  Returns the
    /// old-to-new map as well.
    pub fn compacted(&self) -> (MatchGraph, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<VertexId, VertexId> = self
            .vertices
            .keys()
            .enumerate()
            .map(|(i, &v)| (v, VertexId(i as u32)))
            .collect();
        (self.relabeled(&map), map)
    }

    /// Copy with ids renumbered so that vertices are ordered by position
    /// (row `y` first, then `x`), unpositioned vertices last by old id.
    pub fn compacted_by_position(&self) -> (MatchGraph, BTreeMap<VertexId, VertexId>) {
        let mut order: Vec<(Option<(i64, i64)>, VertexId)> = self
            .vertices
            .iter()
            .map(|(&id, v)| (v.pos.map(|(x, y)| (y, x)), id))
            .collect();
        order.sort_by(|a, b| match (a.0, b.0) {
            (Some(p), Some(q)) => p.cmp(&q).then(a.1.cmp(&b.1)),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => a.1.cmp(&b.1),
        });
        let map: BTreeMap<VertexId, VertexId> = order
            .into_iter()
            .enumerate()
            .map(|(i, (_, v))| (v, VertexId(i as u32)))
            .collect();
        (self.relabeled(&map), map)
    }

    fn relabeled(&self, map: &BTreeMap<VertexId, VertexId>) -> MatchGraph {
        let mut g = MatchGraph::new();
        let mut inverse: Vec<(VertexId, VertexId)> = map.iter().map(|(&o, &n)| (n, o)).collect();
        inverse.sort();
        for (new, old) in inverse {
            let v = &self.vertices[&old];
            g.insert_vertex(new, v.class, v.pos).expect("fresh ids");
        }
        for (u, v, w) in self.edges() {
            g.add_edge(map[&u], map[&v], w.clone()).expect("valid edge");
        }
        for (name, list) in &self.boundaries {
            g.boundaries
                .insert(name.clone(), list.iter().map(|v| map[v]).collect());
        }
        g
    }

    /// Two graphs are equal as labelled structures up to a translation of
    /// positions: same ids, classes, edges and weights, and positions that
    /// differ by one common offset.
    pub fn same_up_to_translation(&self, other: &MatchGraph) -> bool {
        if self.vertices.len() != other.vertices.len() || self.adj != other.adj {
            return false;
        }
        let mut shift = None;
        for ((a, va), (b, vb)) in self.vertices.iter().zip(other.vertices.iter()) {
            if a != b || va.class != vb.class {
                return false;
            }
            match (va.pos, vb.pos) {
                (Some(p), Some(q)) => {
                    let d = (q.0 - p.0, q.1 - p.1);
                    if *shift.get_or_insert(d) != d {
                        return false;
                    }
                }
                (None, None) => {}
                _ => return false,
            }
        }
        true
    }

    fn require(&self, v: VertexId) -> Result<()> {
        if self.vertices.contains_key(&v) {
            Ok(())
        } else {
            Err(Error::BadLocus(format!("no vertex {v}")))
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GraphDoc::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<MatchGraph> {
        let doc: GraphDoc = serde_json::from_str(s)?;
        MatchGraph::try_from(doc)
    }
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    class: Option<Side>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: u32,
    v: u32,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    #[serde(default)]
    boundaries: BTreeMap<String, Vec<u32>>,
}

impl From<&MatchGraph> for GraphDoc {
    fn from(g: &MatchGraph) -> Self {
        GraphDoc {
            vertices: g
                .vertices
                .iter()
                .map(|(id, v)| VertexDoc {
                    id: id.0,
                    class: v.class,
                    x: v.pos.map(|p| p.0),
                    y: v.pos.map(|p| p.1),
                })
                .collect(),
            edges: g
                .edges()
                .map(|(u, v, w)| EdgeDoc {
                    u: u.0,
                    v: v.0,
                    weight: format_rational(w),
                })
                .collect(),
            boundaries: g
                .boundaries
                .iter()
                .map(|(k, list)| (k.clone(), list.iter().map(|v| v.0).collect()))
                .collect(),
        }
    }
}

impl From<MatchGraph> for GraphDoc {
    fn from(g: MatchGraph) -> Self {
        GraphDoc::from(&g)
    }
}

impl TryFrom<GraphDoc> for MatchGraph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        let mut g = MatchGraph::new();
        for v in doc.vertices {
            let pos = match (v.x, v.y) {
                (Some(x), Some(y)) => Some((x, y)),
                (None, None) => None,
                _ => {
                    return Err(Error::Parse(format!(
                        "vertex {} has only one coordinate",
                        v.id
                    )))
                }
            };
            g.insert_vertex(VertexId(v.id), v.class, pos)?;
        }
        for e in doc.edges {
            let w = parse_rational(&e.weight)?;
            if w.is_zero() {
                return Err(Error::Parse(format!(
                    "edge {}-{} has zero weight",
                    e.u, e.v
                )));
            }
            g.add_edge(VertexId(e.u), VertexId(e.v), w)?;
        }
        for (name, list) in doc.boundaries {
            g.set_boundary(name, list.into_iter().map(VertexId).collect())?;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Weight {
        Weight::new(1.into(), 2.into())
    }

    #[test]
    fn rejects_loops_duplicates_and_class_clashes() {
        let mut g = MatchGraph::new();
        let a = g.add_vertex(Some(Side::V1), None);
        let b = g.add_vertex(Some(Side::V2), None);
        let c = g.add_vertex(Some(Side::V1), None);
        assert!(g.add_unit_edge(a, a).is_err());
        g.add_unit_edge(a, b).unwrap();
        assert!(g.add_unit_edge(b, a).is_err());
        assert!(matches!(g.add_unit_edge(a, c), Err(Error::NotBipartite(_))));
        assert!(g.add_edge(b, c, Weight::zero()).is_err());
    }

    #[test]
    fn removing_a_vertex_cleans_boundaries() {
        let mut g = MatchGraph::new();
        let a = g.add_vertex(None, None);
        let b = g.add_vertex(None, None);
        g.add_unit_edge(a, b).unwrap();
        g.set_boundary("top", vec![a, b]).unwrap();
        g.remove_vertex(a);
        assert_eq!(g.boundary("top").unwrap(), &[b]);
        assert_eq!(g.edge_count(), 0);
        assert!(matches!(g.boundary("none"), Err(Error::UnknownBoundary(_))));
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        let mut g = MatchGraph::new();
        let v: Vec<_> = (0..3).map(|_| g.add_vertex(None, None)).collect();
        g.add_unit_edge(v[0], v[1]).unwrap();
        g.add_unit_edge(v[1], v[2]).unwrap();
        assert_eq!(g.bipartition().unwrap()[&v[2]], Side::V1);
        g.add_unit_edge(v[2], v[0]).unwrap();
        assert!(g.bipartition().is_err());
    }

    #[test]
    fn json_round_trip_keeps_weights_and_lists() {
        let mut g = MatchGraph::new();
        let a = g.add_vertex(Some(Side::V1), Some((0, 0)));
        let b = g.add_vertex(Some(Side::V2), Some((1, 1)));
        g.add_edge(a, b, half()).unwrap();
        g.set_boundary("bottom", vec![b]).unwrap();
        let json = g.to_json().unwrap();
        assert!(json.contains("\"1/2\""));
        assert_eq!(MatchGraph::from_json(&json).unwrap(), g);
    }

    #[test]
    fn compaction_by_position_orders_rows() {
        let mut g = MatchGraph::new();
        let a = g.add_vertex(None, Some((5, 1)));
        let b = g.add_vertex(None, Some((0, 0)));
        g.add_unit_edge(a, b).unwrap();
        let (h, map) = g.compacted_by_position();
        assert_eq!(map[&b], VertexId(0));
        assert_eq!(h.pos(VertexId(1)), Some((5, 1)));
    }
}
