use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{MatchGraph, Side, VertexId};
use crate::error::{Error, Result};

/// Outcome of the graph splitting test for an induced subgraph `H` of `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitVerdict {
    /// `M(G) = M(H) · M(G - H)`.
    Factor,
    /// `M(G) = 0`.
    Zero,
    Inapplicable,
}

/// Decides whether `H` separates `G` in the sense that one bipartition class
/// of `H` has no neighbours outside `H`.
///
/// Both labellings of the classes are tried, since the statement is
/// symmetric in them.  Classes are taken from the graph when declared and
/// computed otherwise.
pub fn split_verdict(g: &MatchGraph, h: &BTreeSet<VertexId>) -> Result<SplitVerdict> {
    let side = g.bipartition()?;
    for &v in h {
        if !g.contains(v) {
            return Err(Error::BadLocus(format!(
                "subgraph vertex {v} is not in the graph"
            )));
        }
    }
    let in_class = |c: Side| h.iter().filter(|v| side[v] == c).count();
    let separates = |c: Side| {
        h.iter()
            .filter(|v| side[v] == c)
            .all(|&v| g.neighbors(v).all(|(u, _)| h.contains(&u)))
    };
    for class in [Side::V1, Side::V2] {
        if separates(class) {
            let (inside, other) = (in_class(class), in_class(class.other()));
            if inside == other {
                return Ok(SplitVerdict::Factor);
            }
            if inside > other {
                return Ok(SplitVerdict::Zero);
            }
        }
    }
    Ok(SplitVerdict::Inapplicable)
}
