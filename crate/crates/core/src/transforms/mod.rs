//! Local graph rewrites with exact multipliers.
//!
//! Every rewrite produces a [`RewriteStep`] whose contract is
//! `M(before) = μ · M(after)`.  Steps are collected into a
//! [`TransformTrace`], whose cumulative multiplier is the product of the
//! step multipliers.  Blocks are addressed by an explicit locus: the list of
//! graph vertices playing the roles of the template vertices, in template
//! order.  Helpers in [`template`] find such lists from planar positions.

mod composite;
mod lemmas;
mod pipelines;
pub mod template;

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{pow2, split_pow2, ExactCount};
use crate::graph::{Counter, MatchGraph, Oracle, SplitVerdict, VertexId};

pub use composite::{composite, composite_with_terminal, Part, Terminal};
pub use lemmas::{
    l_templates, l_transform, spider, star_scale, t1, t1_staged, t1_templates, t2, t2_templates,
    t3, t3_templates, vertex_split, vertex_split_placed, LKindStep, SpiderKind,
};
pub use pipelines::{peel_asymmetric_odd, peel_douglas, peel_symmetric, replay, Pipeline};

/// An exact multiplier kept as `2^pow2 · rest` with `rest` free of factors
/// of two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplier {
    pub pow2: i64,
    pub rest: ExactCount,
}

impl Multiplier {
    pub fn one() -> Self {
        Multiplier {
            pow2: 0,
            rest: ExactCount::one(),
        }
    }

    pub fn pow2(e: i64) -> Self {
        Multiplier {
            pow2: e,
            rest: ExactCount::one(),
        }
    }

    /// Splits a nonzero rational into its power of two and the rest.
    pub fn from_rational(v: &BigRational) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::InvalidParams("a multiplier must be nonzero".into()));
        }
        let (e, rest) = split_pow2(v);
        Ok(Multiplier {
            pow2: e,
            rest: ExactCount(rest),
        })
    }

    pub fn value(&self) -> BigRational {
        pow2(self.pow2) * self.rest.value()
    }

    pub fn inv(&self) -> Multiplier {
        Multiplier {
            pow2: -self.pow2,
            rest: ExactCount(self.rest.value().recip()),
        }
    }

    pub fn is_one(&self) -> bool {
        self.pow2 == 0 && self.rest.value().is_one()
    }
}

impl Default for Multiplier {
    fn default() -> Self {
        Multiplier::one()
    }
}

impl Mul<&Multiplier> for &Multiplier {
    type Output = Multiplier;

    fn mul(self, rhs: &Multiplier) -> Multiplier {
        Multiplier {
            pow2: self.pow2 + rhs.pow2,
            rest: ExactCount(self.rest.value() * rhs.rest.value()),
        }
    }
}

impl fmt::Display for Multiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.pow2, self.rest.value().is_one()) {
            (0, _) => write!(f, "{}", self.rest),
            (e, true) => write!(f, "2^{e}"),
            (e, false) => write!(f, "2^{e}*{}", self.rest),
        }
    }
}

/// Vertices and edges touched by a rewrite.
///
/// `vertices` lists the matched block in template order; `replacement`
/// lists where the vertices of the replacing block ended up, also in
/// template order.  Attachment vertices appear in both.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Locus {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    pub replacement: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub name: String,
    pub before: MatchGraph,
    pub after: MatchGraph,
    pub multiplier: Multiplier,
    pub locus: Locus,
}

impl RewriteStep {
    /// Checks `M(before) = μ · M(after)` with the brute-force enumerator.
    pub fn check_with_oracle(&self, oracle: &Oracle) -> Result<bool> {
        let lhs = oracle.count(&self.before)?;
        let rhs = oracle.count(&self.after)?;
        Ok(lhs.value() == &(self.multiplier.value() * rhs.value()))
    }

    /// Same check with the main counter, for graphs beyond the oracle.
    pub fn check_with_counter(&self, counter: &Counter) -> Result<bool> {
        let lhs = counter.count(&self.before)?;
        let rhs = counter.count(&self.after)?;
        Ok(lhs.value() == &(self.multiplier.value() * rhs.value()))
    }

    /// The oracle when both graphs fit under its bound, the counter otherwise.
    pub fn check(&self, oracle: &Oracle, counter: &Counter) -> Result<bool> {
        if self.before.vertex_count().max(self.after.vertex_count()) <= oracle.max_vertices {
            self.check_with_oracle(oracle)
        } else {
            self.check_with_counter(counter)
        }
    }
}

/// A graph-splitting argument recorded along a pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub name: String,
    pub subgraph: Vec<VertexId>,
    pub verdict: SplitVerdict,
}

/// The last graph of a pipeline together with its known matching count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Closing {
    pub description: String,
    pub value: ExactCount,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformTrace {
    pub initial: MatchGraph,
    pub steps: Vec<RewriteStep>,
    #[serde(default)]
    pub splits: Vec<SplitRecord>,
    #[serde(default)]
    pub closing: Option<Closing>,
}

impl TransformTrace {
    pub fn new(initial: MatchGraph) -> Self {
        TransformTrace {
            initial,
            ..Default::default()
        }
    }

    pub fn cumulative(&self) -> Multiplier {
        self.steps
            .iter()
            .fold(Multiplier::one(), |acc, s| &acc * &s.multiplier)
    }

    /// The current graph: the result of the last step, or the initial graph.
    pub fn terminal(&self) -> &MatchGraph {
        self.steps.last().map_or(&self.initial, |s| &s.after)
    }

    /// Appends a step, insisting that it starts where the trace ends.
    pub fn push(&mut self, step: RewriteStep) -> Result<()> {
        if &step.before != self.terminal() {
            return Err(Error::PatternMismatch(format!(
                "step `{}` does not start from the current graph of the trace",
                step.name
            )));
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn extend(&mut self, other: TransformTrace) -> Result<()> {
        for s in other.steps {
            self.push(s)?;
        }
        self.splits.extend(other.splits);
        Ok(())
    }

    /// `μ · M(terminal)` when the pipeline closed with a known count.
    pub fn predicted_count(&self) -> Option<BigRational> {
        self.closing
            .as_ref()
            .map(|c| self.cumulative().value() * c.value.value())
    }

    /// Integer form of [`TransformTrace::predicted_count`].
    pub fn predicted_integer(&self) -> Option<BigInt> {
        self.predicted_count()
            .filter(|v| v.is_integer())
            .map(|v| v.to_integer())
    }

    /// Compact JSON summary: step names, multipliers and sizes, without the
    /// full graphs.
    pub fn summary(&self) -> TraceSummary {
        let mut running = Multiplier::one();
        let steps = self
            .steps
            .iter()
            .map(|s| {
                running = &running * &s.multiplier;
                StepSummary {
                    name: s.name.clone(),
                    multiplier: s.multiplier.clone(),
                    cumulative: running.clone(),
                    vertices_before: s.before.vertex_count(),
                    vertices_after: s.after.vertex_count(),
                    locus: s.locus.vertices.clone(),
                }
            })
            .collect();
        TraceSummary {
            steps,
            cumulative: self.cumulative(),
            splits: self.splits.clone(),
            closing: self.closing.clone(),
            predicted: self.predicted_count().map(ExactCount),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSummary {
    pub name: String,
    pub multiplier: Multiplier,
    pub cumulative: Multiplier,
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub locus: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub steps: Vec<StepSummary>,
    pub cumulative: Multiplier,
    pub splits: Vec<SplitRecord>,
    pub closing: Option<Closing>,
    pub predicted: Option<ExactCount>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplier_arithmetic() {
        let m = Multiplier::from_rational(&BigRational::new(12.into(), 5.into())).unwrap();
        assert_eq!(m.pow2, 2);
        assert_eq!(m.rest.to_string(), "3/5");
        assert_eq!(m.to_string(), "2^2*3/5");
        let p = &m * &m.inv();
        assert!(p.is_one());
        assert_eq!(
            Multiplier::pow2(-3).value(),
            BigRational::new(1.into(), 8.into())
        );
        assert!(Multiplier::from_rational(&BigRational::zero()).is_err());
    }

    #[test]
    fn empty_trace_is_identity() {
        let t = TransformTrace::new(MatchGraph::new());
        assert!(t.cumulative().is_one());
        assert_eq!(t.terminal(), &MatchGraph::new());
        assert!(t.predicted_count().is_none());
    }
}
