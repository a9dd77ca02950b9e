//! Exact matching counter: forced-edge reduction, component factoring and
//! memoised branching on a minimum-degree vertex.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MatchGraph, Side, VertexId};
use crate::error::{Error, Result};
use crate::exact::ExactCount;

/// Budgets and bookkeeping for [`Counter`].
#[derive(Clone, Debug)]
pub struct Counter {
    pub max_vertices: usize,
    pub max_branches: u64,
}

/// Work done by one counting call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CounterStats {
    pub branches: u64,
    pub memo_entries: usize,
}

impl Default for Counter {
    fn default() -> Self {
        Counter {
            max_vertices: 4096,
            max_branches: 50_000_000,
        }
    }
}

/// Counts perfect matchings with the default budgets.
pub fn count_matchings(g: &MatchGraph) -> Result<ExactCount> {
    Counter::default().count(g)
}

impl Counter {
    pub fn new(max_vertices: usize, max_branches: u64) -> Self {
        Counter {
            max_vertices,
            max_branches,
        }
    }

    pub fn count(&self, g: &MatchGraph) -> Result<ExactCount> {
        self.count_with_stats(g).map(|(c, _)| c)
    }

    pub fn count_with_stats(&self, g: &MatchGraph) -> Result<(ExactCount, CounterStats)> {
        let n = g.vertex_count();
        if n > self.max_vertices {
            return Err(Error::ResourceLimit(format!(
                "graph has {n} vertices, counter limit is {}",
                self.max_vertices
            )));
        }
        if g.is_unit_weighted() {
            let (v, stats) = self.run::<BigUint>(g, |_| BigUint::one())?;
            Ok((ExactCount::from(v), stats))
        } else {
            let (v, stats) = self.run::<BigRational>(g, |w| w.clone())?;
            Ok((ExactCount(v), stats))
        }
    }

    fn run<T>(&self, g: &MatchGraph, conv: impl Fn(&BigRational) -> T) -> Result<(T, CounterStats)>
    where
        T: Clone + Zero + One + for<'a> Mul<&'a T, Output = T> + for<'a> Add<&'a T, Output = T>,
    {
        let ids: Vec<VertexId> = g.vertex_ids().collect();
        let index: HashMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<(usize, T)>> = ids
            .iter()
            .map(|&v| g.neighbors(v).map(|(u, w)| (index[&u], conv(w))).collect())
            .collect();
        let class: Option<Vec<bool>> = g
            .has_declared_classes()
            .then(|| ids.iter().map(|&v| g.class(v) == Some(Side::V1)).collect());
        let mut engine = Engine {
            adj,
            class,
            memo: HashMap::new(),
            branches: 0,
            max_branches: self.max_branches,
        };
        let full = BitSet::full(ids.len());
        let value = engine.count(full)?;
        let stats = CounterStats {
            branches: engine.branches,
            memo_entries: engine.memo.len(),
        };
        Ok((value, stats))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct BitSet(Box<[u64]>);

impl BitSet {
    fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            *words.last_mut().expect("non-empty") = (1u64 << (n % 64)) - 1;
        }
        BitSet(words.into_boxed_slice())
    }

    fn empty_like(&self) -> Self {
        BitSet(vec![0; self.0.len()].into_boxed_slice())
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

struct Engine<T> {
    adj: Vec<Vec<(usize, T)>>,
    class: Option<Vec<bool>>,
    memo: HashMap<BitSet, T>,
    branches: u64,
    max_branches: u64,
}

impl<T> Engine<T>
where
    T: Clone + Zero + One + for<'a> Mul<&'a T, Output = T> + for<'a> Add<&'a T, Output = T>,
{
    fn live_degree(&self, set: &BitSet, v: usize) -> usize {
        self.adj[v].iter().filter(|(u, _)| set.contains(*u)).count()
    }

    fn count(&mut self, mut set: BitSet) -> Result<T> {
        // Reductions: isolated vertices kill the count, pendant vertices force
        // their only edge.
        let mut factor = T::one();
        loop {
            if set.is_empty() {
                return Ok(factor);
            }
            let mut progressed = false;
            let live: Vec<usize> = set.iter().collect();
            for v in live {
                if !set.contains(v) {
                    continue;
                }
                let mut only = None;
                let mut deg = 0;
                for (u, w) in &self.adj[v] {
                    if set.contains(*u) {
                        deg += 1;
                        if deg > 1 {
                            break;
                        }
                        only = Some((*u, w));
                    }
                }
                match deg {
                    0 => return Ok(T::zero()),
                    1 => {
                        let (u, w) = only.expect("degree one");
                        factor = factor * w;
                        set.remove(u);
                        set.remove(v);
                        progressed = true;
                    }
                    _ => {}
                }
            }
            if !progressed {
                break;
            }
        }

        if set.len() % 2 == 1 {
            return Ok(T::zero());
        }
        if let Some(class) = &self.class {
            let v1 = set.iter().filter(|&v| class[v]).count();
            if 2 * v1 != set.len() {
                return Ok(T::zero());
            }
        }

        let components = self.components(&set);
        if components.len() > 1 {
            for comp in components {
                let c = self.count_component(comp)?;
                if c.is_zero() {
                    return Ok(T::zero());
                }
                factor = factor * &c;
            }
            return Ok(factor);
        }
        let c = self.count_component(set)?;
        Ok(factor * &c)
    }

    fn count_component(&mut self, set: BitSet) -> Result<T> {
        if let Some(v) = self.memo.get(&set) {
            return Ok(v.clone());
        }
        let pivot = set
            .iter()
            .min_by_key(|&v| (self.live_degree(&set, v), v))
            .expect("non-empty component");
        let mut total = T::zero();
        let options: Vec<(usize, T)> = self.adj[pivot]
            .iter()
            .filter(|(u, _)| set.contains(*u))
            .cloned()
            .collect();
        for (u, w) in options {
            self.branches += 1;
            if self.branches > self.max_branches {
                return Err(Error::ResourceLimit(format!(
                    "counter exceeded its budget of {} branches",
                    self.max_branches
                )));
            }
            let mut rest = set.clone();
            rest.remove(pivot);
            rest.remove(u);
            let sub = self.count(rest)?;
            if !sub.is_zero() {
                total = total + &(w * &sub);
            }
        }
        self.memo.insert(set, total.clone());
        Ok(total)
    }

    fn components(&self, set: &BitSet) -> Vec<BitSet> {
        let mut seen = set.empty_like();
        let mut out = Vec::new();
        for start in set.iter() {
            if seen.contains(start) {
                continue;
            }
            let mut comp = set.empty_like();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                comp.insert(v);
                for (u, _) in &self.adj[v] {
                    if set.contains(*u) && !seen.contains(*u) {
                        seen.insert(*u);
                        stack.push(*u);
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Weight;

    fn path(n: usize) -> MatchGraph {
        let mut g = MatchGraph::new();
        let v: Vec<_> = (0..n).map(|_| g.add_vertex(None, None)).collect();
        for w in v.windows(2) {
            g.add_unit_edge(w[0], w[1]).unwrap();
        }
        g
    }

    #[test]
    fn trivial_graphs() {
        assert_eq!(
            count_matchings(&MatchGraph::new()).unwrap(),
            ExactCount::one()
        );
        assert_eq!(count_matchings(&path(2)).unwrap(), ExactCount::one());
        assert_eq!(count_matchings(&path(3)).unwrap(), ExactCount::zero());
        assert_eq!(count_matchings(&path(6)).unwrap(), ExactCount::one());
    }

    #[test]
    fn cycle_counts() {
        for n in [4usize, 6, 8, 10] {
            let mut g = path(n);
            g.add_unit_edge(VertexId(0), VertexId(n as u32 - 1))
                .unwrap();
            assert_eq!(
                count_matchings(&g).unwrap(),
                ExactCount::from(2u64),
                "C_{n}"
            );
        }
    }

    #[test]
    fn weighted_square() {
        let mut g = path(4);
        g.set_weight(VertexId(0), VertexId(1), Weight::from_integer(3.into()))
            .unwrap();
        g.add_edge(VertexId(3), VertexId(0), Weight::new(1.into(), 2.into()))
            .unwrap();
        // matchings {01,23} weight 3 and {12,30} weight 1/2
        assert_eq!(count_matchings(&g).unwrap().to_string(), "7/2");
    }

    #[test]
    fn budget_is_enforced() {
        let mut g = path(8);
        g.add_unit_edge(VertexId(0), VertexId(7)).unwrap();
        let tight = Counter::new(100, 1);
        assert!(matches!(tight.count(&g), Err(Error::ResourceLimit(_))));
        assert!(matches!(
            Counter::new(4, 10).count(&g),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn unbalanced_declared_classes_give_zero() {
        let mut g = MatchGraph::new();
        let a = g.add_vertex(Some(Side::V1), None);
        let b = g.add_vertex(Some(Side::V2), None);
        let c = g.add_vertex(Some(Side::V1), None);
        let d = g.add_vertex(Some(Side::V1), None);
        g.add_unit_edge(a, b).unwrap();
        g.add_unit_edge(c, b).unwrap();
        g.add_unit_edge(d, b).unwrap();
        assert!(count_matchings(&g).unwrap().is_zero());
    }
}
