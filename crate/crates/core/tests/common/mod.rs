#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use quasihex::graph::{MatchGraph, Side, VertexId, Weight};
use quasihex::transforms::template::Template;
use quasihex::transforms::{
    l_templates, l_transform, spider, star_scale, t1, t1_templates, t2, t2_templates, t3,
    t3_templates, vertex_split, LKindStep, RewriteStep, SpiderKind,
};

/// Every local rewrite exercised by the randomized fixture suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    VertexSplit,
    Star,
    SpiderA,
    SpiderB,
    SpiderC,
    T1,
    T2,
    T3,
    LA,
    LB,
    LC,
}

pub const LEMMAS: [Lemma; 11] = [
    Lemma::VertexSplit,
    Lemma::Star,
    Lemma::SpiderA,
    Lemma::SpiderB,
    Lemma::SpiderC,
    Lemma::T1,
    Lemma::T2,
    Lemma::T3,
    Lemma::LA,
    Lemma::LB,
    Lemma::LC,
];

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::VertexSplit => "vertex-split",
            Lemma::Star => "star",
            Lemma::SpiderA => "spider-a",
            Lemma::SpiderB => "spider-b",
            Lemma::SpiderC => "spider-c",
            Lemma::T1 => "t1",
            Lemma::T2 => "t2",
            Lemma::T3 => "t3",
            Lemma::LA => "l-transform-a",
            Lemma::LB => "l-transform-b",
            Lemma::LC => "l-transform-c",
        }
    }
}

pub fn random_weight(rng: &mut StdRng) -> Weight {
    let choices = [(1, 1), (1, 2), (2, 1), (3, 1)];
    let (p, q) = choices[rng.gen_range(0..choices.len())];
    BigRational::new(p.into(), q.into())
}

/// A random bipartite graph on `n` vertices with declared classes.
pub fn random_bipartite(rng: &mut StdRng, n: usize, density: f64) -> MatchGraph {
    let mut g = MatchGraph::new();
    let ids: Vec<VertexId> = (0..n)
        .map(|i| g.add_vertex(Some(if i % 2 == 0 { Side::V1 } else { Side::V2 }), None))
        .collect();
    for i in 0..n {
        for j in (i + 1..n).step_by(2) {
            if rng.gen_bool(density) {
                g.add_edge(ids[i], ids[j], random_weight(rng)).unwrap();
            }
        }
    }
    g
}

/// Glues a random host graph onto the attachment vertices of `block`.
/// Returns the whole graph and the locus of the block in template order.
pub fn host(rng: &mut StdRng, block: &Template) -> (MatchGraph, Vec<VertexId>) {
    let mut g = block.graph.clone();
    g.clear_boundaries();
    let locus = block.order();
    let extras: Vec<VertexId> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let class = if rng.gen_bool(0.5) {
                Side::V1
            } else {
                Side::V2
            };
            g.add_vertex(Some(class), None)
        })
        .collect();
    let opposite = |g: &MatchGraph, v: VertexId, pool: &[VertexId]| -> Vec<VertexId> {
        pool.iter()
            .copied()
            .filter(|&u| u != v && g.class(u) != g.class(v))
            .collect()
    };
    for &a in &block.attach {
        let candidates = opposite(&g, a, &extras);
        for &u in &candidates {
            if rng.gen_bool(0.6) {
                g.add_edge(a, u, random_weight(rng)).unwrap();
            }
        }
    }
    for (i, &u) in extras.iter().enumerate() {
        for &v in &extras[i + 1..] {
            if g.class(u) != g.class(v) && rng.gen_bool(0.5) {
                g.add_edge(u, v, random_weight(rng)).unwrap();
            }
        }
    }
    balance(rng, &mut g, &block.attach, &extras);
    (g, locus)
}

/// Adds vertices of the smaller class, each joined to attachments or
/// extras of the other class, until both classes have the same size.
fn balance(rng: &mut StdRng, g: &mut MatchGraph, attach: &[VertexId], extras: &[VertexId]) {
    let count = |g: &MatchGraph, s: Side| g.vertex_ids().filter(|&v| g.class(v) == Some(s)).count();
    let pool: Vec<VertexId> = attach.iter().chain(extras).copied().collect();
    loop {
        let (v1, v2) = (count(g, Side::V1), count(g, Side::V2));
        if v1 == v2 {
            return;
        }
        let need = if v1 < v2 { Side::V1 } else { Side::V2 };
        let targets: Vec<VertexId> = pool
            .iter()
            .copied()
            .filter(|&u| g.class(u) == Some(need.other()))
            .collect();
        let v = g.add_vertex(Some(need), None);
        for &u in targets.choose_multiple(rng, 2) {
            g.add_edge(v, u, random_weight(rng)).unwrap();
        }
    }
}

/// A block with unit spokes to outer vertices, inner edges with random
/// weights, and a random graph on the outer vertices and a few extras.
fn spider_fixture(rng: &mut StdRng, kind: SpiderKind) -> RewriteStep {
    let arms = match kind {
        SpiderKind::A => 4,
        SpiderKind::B => 3,
        SpiderKind::C => 2,
    };
    let mut g = MatchGraph::new();
    let outer: Vec<VertexId> = (0..arms).map(|_| g.add_vertex(None, None)).collect();
    let inner: Vec<VertexId> = (0..arms).map(|_| g.add_vertex(None, None)).collect();
    for (&o, &i) in outer.iter().zip(&inner) {
        g.add_unit_edge(o, i).unwrap();
    }
    for k in 0..arms - 1 {
        g.add_edge(inner[k], inner[k + 1], random_weight(rng))
            .unwrap();
    }
    if kind == SpiderKind::A {
        g.add_edge(inner[3], inner[0], random_weight(rng)).unwrap();
    }
    let extras: Vec<VertexId> = (0..rng.gen_range(arms..=arms + 4))
        .map(|_| g.add_vertex(None, None))
        .collect();
    let pool: Vec<VertexId> = outer.iter().chain(&extras).copied().collect();
    for (i, &u) in pool.iter().enumerate() {
        for &v in &pool[i + 1..] {
            if rng.gen_bool(0.35) {
                g.add_edge(u, v, random_weight(rng)).unwrap();
            }
        }
    }
    let locus: Vec<VertexId> = outer.iter().chain(&inner).copied().collect();
    spider(&g, kind, &locus).unwrap()
}

fn template_fixture(
    rng: &mut StdRng,
    block: impl Fn(&mut StdRng) -> Option<Template>,
    apply: impl Fn(&MatchGraph, &[VertexId]) -> RewriteStep,
) -> RewriteStep {
    loop {
        if let Some(t) = block(rng) {
            let (g, locus) = host(rng, &t);
            return apply(&g, &locus);
        }
    }
}

/// One random instance of `lemma`, small enough for the oracle.
pub fn fixture(lemma: Lemma, rng: &mut StdRng) -> RewriteStep {
    match lemma {
        Lemma::VertexSplit => loop {
            let n = rng.gen_range(4..=14);
            let g = random_bipartite(rng, n, 0.45);
            let v = VertexId(rng.gen_range(0..n as u32));
            let nbrs: Vec<VertexId> = g.neighbors(v).map(|(u, _)| u).collect();
            if nbrs.is_empty() {
                continue;
            }
            let h: BTreeSet<VertexId> = nbrs.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            return vertex_split(&g, v, &h).unwrap();
        },
        Lemma::Star => {
            let n = rng.gen_range(4..=14);
            let g = random_bipartite(rng, n, 0.45);
            let v = VertexId(rng.gen_range(0..n as u32));
            let t = random_weight(rng)
                * BigRational::new(rng.gen_range(1..=5).into(), rng.gen_range(1..=5).into());
            star_scale(&g, v, &t).unwrap()
        }
        Lemma::SpiderA => spider_fixture(rng, SpiderKind::A),
        Lemma::SpiderB => spider_fixture(rng, SpiderKind::B),
        Lemma::SpiderC => spider_fixture(rng, SpiderKind::C),
        Lemma::T1 => {
            let (p, q) = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)][rng.gen_range(0..5)];
            template_fixture(
                rng,
                |_| t1_templates(p, q).ok().map(|t| t.0),
                |g, l| t1(g, p, q, l).unwrap(),
            )
        }
        Lemma::T2 => {
            let (p, q) = [(1, 1), (1, 2), (2, 1), (2, 2)][rng.gen_range(0..4)];
            template_fixture(
                rng,
                |_| t2_templates(p, q).ok().map(|t| t.0),
                |g, l| t2(g, p, q, l).unwrap(),
            )
        }
        Lemma::T3 => {
            let (m, n) = [(1, 1), (1, 2), (2, 1), (2, 2)][rng.gen_range(0..4)];
            template_fixture(
                rng,
                |_| t3_templates(m, n).ok().map(|t| t.0),
                |g, l| t3(g, m, n, l).unwrap(),
            )
        }
        Lemma::LA | Lemma::LB | Lemma::LC => {
            let kind = match lemma {
                Lemma::LA => LKindStep::A,
                Lemma::LB => LKindStep::B,
                _ => LKindStep::C,
            };
            let params = |rng: &mut StdRng| -> (u32, u32, u32, u32) {
                match kind {
                    LKindStep::A => (
                        rng.gen_range(1..=2),
                        rng.gen_range(1..=2),
                        rng.gen_range(1..=2),
                        rng.gen_range(1..=2),
                    ),
                    LKindStep::B => (
                        2,
                        rng.gen_range(1..=2),
                        rng.gen_range(1..=2),
                        rng.gen_range(1..=2),
                    ),
                    LKindStep::C => {
                        let d = rng.gen_range(2..=3);
                        (1, rng.gen_range(1..d), rng.gen_range(1..=2), d)
                    }
                }
            };
            loop {
                let p = params(rng);
                let Ok((before, _, _)) = l_templates(kind, p.0, p.1, p.2, p.3) else {
                    continue;
                };
                if before.len() > 26 {
                    continue;
                }
                let (g, locus) = host(rng, &before);
                return l_transform(&g, kind, p, &locus).unwrap();
            }
        }
    }
}
