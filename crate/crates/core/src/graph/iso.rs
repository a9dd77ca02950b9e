//! Weighted graph isomorphism by colour refinement and backtracking.

use std::collections::{BTreeMap, HashMap};

use super::{MatchGraph, VertexId};

/// A vertex colour with the sorted (colour, weight class) pairs of its neighbours.
type Signature = (u32, Vec<(u32, u32)>);

/// An isomorphism `g -> h` preserving edge weights, if one exists.
///
/// Positions, classes and boundary lists are ignored.
pub fn isomorphism(g: &MatchGraph, h: &MatchGraph) -> Option<BTreeMap<VertexId, VertexId>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut palette: BTreeMap<String, u32> = BTreeMap::new();
    for (_, _, w) in g.edges().chain(h.edges()) {
        let next = palette.len() as u32;
        palette.entry(w.to_string()).or_insert(next);
    }
    let ig = Indexed::new(g, &palette);
    let ih = Indexed::new(h, &palette);
    let n = ig.ids.len();
    // Joint colouring of the disjoint union keeps colours comparable.
    let mut colors: Vec<u32> = vec![0; 2 * n];
    let mut search = Search { g: &ig, h: &ih, n };
    if !search.refine(&mut colors) {
        return None;
    }
    let mapping = search.solve(colors)?;
    Some(
        mapping
            .into_iter()
            .enumerate()
            .map(|(i, j)| (ig.ids[i], ih.ids[j]))
            .collect(),
    )
}

struct Indexed {
    ids: Vec<VertexId>,
    adj: Vec<Vec<(usize, u32)>>,
}

impl Indexed {
    fn new(g: &MatchGraph, weights: &BTreeMap<String, u32>) -> Self {
        let ids: Vec<VertexId> = g.vertex_ids().collect();
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| {
                g.neighbors(v)
                    .map(|(u, w)| (index[&u], weights[&w.to_string()]))
                    .collect()
            })
            .collect();
        Indexed { ids, adj }
    }
}

struct Search<'a> {
    g: &'a Indexed,
    h: &'a Indexed,
    n: usize,
}

impl Search<'_> {
    fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let (graph, offset, local) = if v < self.n {
            (self.g, 0, v)
        } else {
            (self.h, self.n, v - self.n)
        };
        graph.adj[local].iter().map(move |&(u, w)| (u + offset, w))
    }

    /// Refines the joint colouring to a stable one.  Returns false when the
    /// two halves end up with different colour histograms.
    fn refine(&self, colors: &mut [u32]) -> bool {
        loop {
            let signatures: Vec<Signature> = (0..2 * self.n)
                .map(|v| {
                    let mut s: Vec<(u32, u32)> =
                        self.neighbors(v).map(|(u, w)| (colors[u], w)).collect();
                    s.sort_unstable();
                    (colors[v], s)
                })
                .collect();
            let mut palette: BTreeMap<&Signature, u32> = BTreeMap::new();
            for s in &signatures {
                let next = palette.len() as u32;
                palette.entry(s).or_insert(next);
            }
            let before = count_distinct(colors);
            for (v, s) in signatures.iter().enumerate() {
                colors[v] = palette[s];
            }
            if !self.balanced(colors) {
                return false;
            }
            if count_distinct(colors) == before {
                return true;
            }
        }
    }

    fn balanced(&self, colors: &[u32]) -> bool {
        let mut hist: HashMap<u32, i64> = HashMap::new();
        for (v, &c) in colors.iter().enumerate() {
            *hist.entry(c).or_default() += if v < self.n { 1 } else { -1 };
        }
        hist.values().all(|&x| x == 0)
    }

    fn solve(&mut self, colors: Vec<u32>) -> Option<Vec<usize>> {
        let mut classes: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            let e = classes.entry(c).or_default();
            if v < self.n {
                e.0.push(v);
            } else {
                e.1.push(v - self.n);
            }
        }
        let target = classes
            .values()
            .filter(|(a, _)| a.len() > 1)
            .min_by_key(|(a, _)| a.len());
        let Some((left, right)) = target.cloned() else {
            let mut map = vec![0; self.n];
            for (a, b) in classes.values() {
                map[a[0]] = b[0];
            }
            return self.verify(&map).then_some(map);
        };
        let v = left[0];
        let fresh = colors.iter().max().copied().unwrap_or(0) + 1;
        for &u in &right {
            let mut trial = colors.clone();
            trial[v] = fresh;
            trial[u + self.n] = fresh;
            if self.refine(&mut trial) {
                if let Some(map) = self.solve(trial) {
                    return Some(map);
                }
            }
        }
        None
    }

    fn verify(&self, map: &[usize]) -> bool {
        (0..self.n).all(|v| {
            let mut mine: Vec<(usize, u32)> =
                self.g.adj[v].iter().map(|&(u, w)| (map[u], w)).collect();
            let mut theirs = self.h.adj[map[v]].clone();
            mine.sort_unstable();
            theirs.sort_unstable();
            mine == theirs
        })
    }
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}
