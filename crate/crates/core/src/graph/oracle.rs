//! Brute-force reference counter used to cross-check everything else.
//!
//! It enumerates matchings directly: take the lowest unmatched vertex, try
//! every unmatched neighbour, recurse.  No reductions, no memo, no
//! factoring.

use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{MatchGraph, VertexId};
use crate::error::{Error, Result};
use crate::exact::ExactCount;

pub const DEFAULT_ORACLE_MAX_VERTICES: usize = 40;

/// Hard cap imposed by the 128-bit vertex masks.
const MASK_BITS: usize = 128;

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub max_vertices: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_vertices: DEFAULT_ORACLE_MAX_VERTICES,
        }
    }
}

pub fn count_matchings_oracle(g: &MatchGraph) -> Result<ExactCount> {
    Oracle::default().count(g)
}

impl Oracle {
    pub fn with_max_vertices(max_vertices: usize) -> Self {
        Oracle { max_vertices }
    }

    pub fn count(&self, g: &MatchGraph) -> Result<ExactCount> {
        let n = g.vertex_count();
        let cap = self.max_vertices.min(MASK_BITS);
        if n > cap {
            return Err(Error::ResourceLimit(format!(
                "oracle accepts at most {cap} vertices, graph has {n}"
            )));
        }
        let ids: Vec<VertexId> = g.vertex_ids().collect();
        let pos = |v: VertexId| ids.binary_search(&v).expect("vertex exists");
        if g.is_unit_weighted() {
            let adj: Vec<Vec<(usize, BigUint)>> = ids
                .iter()
                .map(|&v| {
                    g.neighbors(v)
                        .map(|(u, _)| (pos(u), BigUint::one()))
                        .collect()
                })
                .collect();
            Ok(ExactCount::from(enumerate(&adj, full_mask(n))))
        } else {
            let adj: Vec<Vec<(usize, BigRational)>> = ids
                .iter()
                .map(|&v| g.neighbors(v).map(|(u, w)| (pos(u), w.clone())).collect())
                .collect();
            Ok(ExactCount(enumerate(&adj, full_mask(n))))
        }
    }
}

fn full_mask(n: usize) -> u128 {
    if n == MASK_BITS {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn enumerate<T>(adj: &[Vec<(usize, T)>], free: u128) -> T
where
    T: Clone + Zero + One + for<'a> Mul<&'a T, Output = T> + for<'a> Add<&'a T, Output = T>,
{
    if free == 0 {
        return T::one();
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1u128 << v);
    let mut total = T::zero();
    for (u, w) in &adj[v] {
        if rest >> u & 1 == 1 {
            let sub = enumerate(adj, rest & !(1u128 << u));
            if !sub.is_zero() {
                total = total + &(w.clone() * &sub);
            }
        }
    }
    total
}
