//! Parameter sweeps that compare closed forms with exact matching counts.
//!
//! Each case builds a graph, evaluates the corresponding formula and counts
//! the graph with the brute-force oracle.  Cases whose graph is larger than
//! the oracle bound are recorded as skipped.  Cases run in parallel; the
//! report is sorted before it is returned.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, ExactCount};
use crate::families::{
    aztec_rectangle, delete_labels, gamma, grid, half_honeycomb, hexagon_dual, ArVariant,
};
use crate::formulas;
use crate::graph::{dual_graph, Counter, MatchGraph, Oracle, Weight};
use crate::lattice::{build, region_stats, RegionParams};

/// The families of closed forms a sweep can exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Symmetric,
    OddSymmetric,
    Douglas,
    AsymmetricOdd,
    Asymmetric,
    Gamma,
    AztecDent,
    HalfHexagonDent,
    Macmahon,
    Kasteleyn,
    AztecDiamond,
    /// Random weighted graphs, main counter against the oracle.
    Counter,
}

impl Check {
    pub const ALL: [Check; 12] = [
        Check::Symmetric,
        Check::OddSymmetric,
        Check::Douglas,
        Check::AsymmetricOdd,
        Check::Asymmetric,
        Check::Gamma,
        Check::AztecDent,
        Check::HalfHexagonDent,
        Check::Macmahon,
        Check::Kasteleyn,
        Check::AztecDiamond,
        Check::Counter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Symmetric => "symmetric",
            Check::OddSymmetric => "odd-symmetric",
            Check::Douglas => "douglas",
            Check::AsymmetricOdd => "asymmetric-odd",
            Check::Asymmetric => "asymmetric",
            Check::Gamma => "gamma",
            Check::AztecDent => "aztec-dent",
            Check::HalfHexagonDent => "half-hexagon-dent",
            Check::Macmahon => "macmahon",
            Check::Kasteleyn => "kasteleyn",
            Check::AztecDiamond => "aztec-diamond",
            Check::Counter => "counter",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown check `{s}`")))
    }
}

/// Bounds of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub checks: Vec<Check>,
    /// Largest side parameter (`a`, `m`, `n`, ...).
    pub max_side: u32,
    /// Largest distance between consecutive drawn diagonals.
    pub max_distance: u32,
    /// Longest distance list on each side of a region.
    pub max_layers: usize,
    pub max_oracle_vertices: usize,
    /// Number of random graphs for [`Check::Counter`].
    pub random_graphs: usize,
    pub seed: u64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            checks: Check::ALL.to_vec(),
            max_side: 3,
            max_distance: 3,
            max_layers: 2,
            max_oracle_vertices: 40,
            random_graphs: 100,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseStatus {
    Match,
    Mismatch,
    Skipped,
    /// The formula or the count failed; counted as a mismatch.
    Error,
}

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub check: Check,
    pub params: String,
    pub formula: Option<String>,
    pub oracle: Option<String>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub status: CaseStatus,
    pub vertices: usize,
    pub runtime_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub skipped: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn from_cases(mut cases: Vec<CaseRecord>) -> Self {
        cases.sort_by(|a, b| (a.check, &a.params).cmp(&(b.check, &b.params)));
        let mut summary = Summary {
            total: cases.len(),
            ..Summary::default()
        };
        for c in &cases {
            match c.status {
                CaseStatus::Match => summary.matched += 1,
                CaseStatus::Mismatch => summary.mismatched += 1,
                CaseStatus::Skipped => summary.skipped += 1,
                CaseStatus::Error => summary.errors += 1,
            }
        }
        VerificationReport { cases, summary }
    }

    /// True when no case disagreed or failed.
    pub fn all_match(&self) -> bool {
        self.summary.mismatched == 0 && self.summary.errors == 0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "check",
            "params",
            "formula",
            "oracle",
            "match",
            "status",
            "vertices",
            "runtime_ms",
            "note",
        ])
        .map_err(csv_error)?;
        for c in &self.cases {
            let status = serde_json::to_value(c.status)?;
            w.write_record([
                c.check.name(),
                &c.params,
                c.formula.as_deref().unwrap_or(""),
                c.oracle.as_deref().unwrap_or(""),
                if c.matched { "true" } else { "false" },
                status.as_str().unwrap_or(""),
                &c.vertices.to_string(),
                &format!("{:.3}", c.runtime_ms),
                c.note.as_deref().unwrap_or(""),
            ])
            .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in self
            .cases
            .iter()
            .filter(|c| c.status != CaseStatus::Skipped)
        {
            out.push_str(&format!(
                "{:<18} {:<32} formula={:<14} oracle={:<14} {:?}\n",
                c.check.name(),
                c.params,
                c.formula.as_deref().unwrap_or("-"),
                c.oracle.as_deref().unwrap_or("-"),
                c.status
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "total {} matched {} mismatched {} skipped {} errors {}\n",
            s.total, s.matched, s.mismatched, s.skipped, s.errors
        ));
        out
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// A case waiting to be evaluated: the expected value and the graph to
/// count, built lazily.
struct Case {
    check: Check,
    params: String,
    run: Box<dyn Fn() -> Result<(BigRational, MatchGraph)> + Send + Sync>,
    /// Random-graph cases compare with the main counter instead of a formula.
    counter: bool,
}

impl Case {
    fn new(
        check: Check,
        params: String,
        run: impl Fn() -> Result<(BigRational, MatchGraph)> + Send + Sync + 'static,
    ) -> Self {
        Case {
            check,
            params,
            run: Box::new(run),
            counter: false,
        }
    }
}

/// Runs a sweep.
pub fn run_sweep(sweep: &SweepSpec) -> VerificationReport {
    let cases: Vec<Case> = sweep
        .checks
        .iter()
        .flat_map(|&c| cases_for(c, sweep))
        .collect();
    let oracle = Oracle::with_max_vertices(sweep.max_oracle_vertices);
    let records: Vec<CaseRecord> = cases.par_iter().map(|c| evaluate(c, &oracle)).collect();
    VerificationReport::from_cases(records)
}

fn evaluate(case: &Case, oracle: &Oracle) -> CaseRecord {
    let start = Instant::now();
    let mut record = CaseRecord {
        check: case.check,
        params: case.params.clone(),
        formula: None,
        oracle: None,
        matched: false,
        status: CaseStatus::Error,
        vertices: 0,
        runtime_ms: 0.0,
        note: None,
    };
    let outcome = (case.run)().and_then(|(expected, g)| {
        record.vertices = g.vertex_count();
        let expected = if case.counter {
            Counter::default().count(&g)?.0
        } else {
            expected
        };
        record.formula = Some(format_rational(&expected));
        if g.vertex_count() > oracle.max_vertices {
            return Ok(None);
        }
        let counted = oracle.count(&g)?;
        record.oracle = Some(counted.to_string());
        Ok(Some(&expected == counted.value()))
    });
    match outcome {
        Ok(Some(true)) => {
            record.matched = true;
            record.status = CaseStatus::Match;
        }
        Ok(Some(false)) => record.status = CaseStatus::Mismatch,
        Ok(None) => {
            record.status = CaseStatus::Skipped;
            record.note = Some(format!(
                "{} vertices exceed the oracle bound",
                record.vertices
            ));
        }
        Err(e) => record.note = Some(e.to_string()),
    }
    record.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    record
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// All lists of length `1..=max_len` with entries in `1..=max`, optionally
/// odd entries only.
pub fn distance_lists(max_len: usize, max: u32, odd_only: bool) -> Vec<Vec<u32>> {
    let values: Vec<u32> = (1..=max).filter(|x| !odd_only || x % 2 == 1).collect();
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|l| {
                values
                    .iter()
                    .map(move |&x| l.iter().copied().chain([x]).collect::<Vec<_>>())
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn fmt_list(l: &[u32]) -> String {
    l.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn region_case(check: Check, params: RegionParams) -> Option<Case> {
    let region = build(&params).ok()?;
    let label = match check {
        Check::Douglas => format!("a={} d={}", params.a, fmt_list(&params.d)),
        Check::Symmetric | Check::OddSymmetric => {
            format!(
                "a={} d={} dp={}",
                params.a,
                fmt_list(&params.d),
                fmt_list(&params.dprime)
            )
        }
        _ => format!(
            "a={} d={} c={} dp={}",
            params.a,
            fmt_list(&params.d),
            fmt_list(&params.c),
            fmt_list(&params.dprime)
        ),
    };
    Some(Case::new(check, label, move || {
        let stats = region_stats(&region);
        let p = region.params();
        let value = match check {
            Check::Symmetric => formulas::count_symmetric(&stats)?,
            Check::OddSymmetric => formulas::count_odd_symmetric(p.a, &p.d, &p.dprime)?,
            Check::Douglas => formulas::count_douglas(&stats)?,
            Check::AsymmetricOdd => formulas::count_asym_odd(p.a, &p.d, &p.c, &p.dprime)?,
            _ => formulas::count_asym_general(&stats)?,
        };
        Ok((int(value.value), dual_graph(&region)))
    }))
}

fn cases_for(check: Check, sweep: &SweepSpec) -> Vec<Case> {
    let sides = 1..=sweep.max_side;
    let any = distance_lists(sweep.max_layers, sweep.max_distance, false);
    let odd = distance_lists(sweep.max_layers, sweep.max_distance, true);
    let mut out = Vec::new();
    match check {
        Check::Douglas => {
            let longer = distance_lists(sweep.max_layers + 1, sweep.max_distance, false);
            for a in sides {
                for d in &longer {
                    out.extend(region_case(check, RegionParams::douglas(a, d)));
                }
            }
        }
        Check::Symmetric | Check::OddSymmetric => {
            let lists = if check == Check::Symmetric {
                &any
            } else {
                &odd
            };
            for a in sides {
                for d in lists {
                    for dp in lists {
                        out.extend(region_case(check, RegionParams::symmetric(a, d, dp)));
                    }
                }
            }
        }
        Check::AsymmetricOdd | Check::Asymmetric => {
            let lists = if check == Check::Asymmetric {
                &any
            } else {
                &odd
            };
            for a in sides {
                for d in lists {
                    for c in lists {
                        for dp in lists {
                            out.extend(region_case(check, RegionParams::asymmetric(a, d, c, dp)));
                        }
                    }
                }
            }
        }
        Check::Gamma => {
            let m = sweep.max_side;
            for a in 1..=m {
                for c in 1..=m {
                    for b in c..=c + 2 {
                        for d in 1..=m {
                            for e in [c + d - 1, c + d] {
                                out.push(Case::new(
                                    check,
                                    format!("a={a} b={b} c={c} d={d} e={e}"),
                                    move || {
                                        let value = formulas::gamma_count(a, b, c, d, e)?;
                                        Ok((int(value), gamma(a, b, c, d, e)?))
                                    },
                                ));
                            }
                        }
                    }
                }
            }
        }
        Check::AztecDent => {
            for m in 1..=sweep.max_side as usize {
                for n in 1..=sweep.max_side as usize {
                    for t in subsets(n + 1, m) {
                        out.push(Case::new(
                            check,
                            format!("m={m} n={n} t={}", fmt_labels(&t)),
                            move || {
                                let value = formulas::aztec_dent(m, n, &t)?;
                                let g = aztec_rectangle(m as u32, n as u32, ArVariant::Baseless)?;
                                Ok((int(value), delete_labels(&g, "bottom", &labels(&t))?))
                            },
                        ));
                    }
                }
            }
        }
        Check::HalfHexagonDent => {
            for a in 1..=sweep.max_side as usize {
                for b in 1..=sweep.max_side as usize {
                    for r in subsets(a + b, a) {
                        out.push(Case::new(
                            check,
                            format!("a={a} b={b} r={}", fmt_labels(&r)),
                            move || {
                                let value = formulas::v_product(a, b, &r)?;
                                let g = half_honeycomb(b as u32, a as u32, a as u32)?;
                                Ok((int(value), delete_labels(&g, "top", &labels(&r))?))
                            },
                        ));
                    }
                }
            }
        }
        Check::Macmahon => {
            for a in sides.clone() {
                for b in sides.clone() {
                    for c in sides.clone() {
                        out.push(Case::new(check, format!("a={a} b={b} c={c}"), move || {
                            let value = formulas::macmahon(a as u64, b as u64, c as u64);
                            Ok((int(value), hexagon_dual(a, b, c)?))
                        }));
                    }
                }
            }
        }
        Check::Kasteleyn => {
            for m in sides.clone() {
                for n in sides.clone() {
                    out.push(Case::new(check, format!("m={m} n={n}"), move || {
                        let value = formulas::kasteleyn_rectangle(m, n)?;
                        Ok((int(value), grid(2 * m, 2 * n)?))
                    }));
                }
            }
        }
        Check::AztecDiamond => {
            for n in sides {
                out.push(Case::new(check, format!("n={n}"), move || {
                    let value = formulas::aztec_diamond(n as u64);
                    Ok((int(value), aztec_rectangle(n, n, ArVariant::Plain)?))
                }));
            }
        }
        Check::Counter => {
            let mut rng = StdRng::seed_from_u64(sweep.seed);
            for i in 0..sweep.random_graphs {
                let g = random_graph(&mut rng, 20);
                let mut case =
                    Case::new(check, format!("seed={} #{i:04}", sweep.seed), move || {
                        Ok((int(0), g.clone()))
                    });
                case.counter = true;
                out.push(case);
            }
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: i64, n: i64, k: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n as i64, k, &mut cur, &mut out);
    out
}

fn labels(t: &[i64]) -> Vec<usize> {
    t.iter().map(|&x| x as usize).collect()
}

fn fmt_labels(t: &[i64]) -> String {
    t.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// A random graph on at most `max_vertices` vertices with edge weights drawn
/// from `{1, 1/2, 2, 3}`.
pub fn random_graph(rng: &mut impl Rng, max_vertices: usize) -> MatchGraph {
    let weights = [(1, 1), (1, 2), (2, 1), (3, 1)];
    let n = rng.gen_range(2..=max_vertices);
    let density = rng.gen_range(0.1..0.4);
    let mut g = MatchGraph::new();
    let ids: Vec<_> = (0..n).map(|_| g.add_vertex(None, None)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                let (p, q) = weights[rng.gen_range(0..weights.len())];
                g.add_edge(ids[i], ids[j], Weight::new(p.into(), q.into()))
                    .expect("fresh edge");
            }
        }
    }
    g
}

/// Convenience for callers that only need the counted value.
pub fn oracle_value(g: &MatchGraph, max_vertices: usize) -> Result<ExactCount> {
    Oracle::with_max_vertices(max_vertices).count(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(checks: &[Check]) -> SweepSpec {
        SweepSpec {
            checks: checks.to_vec(),
            max_side: 2,
            max_distance: 2,
            max_layers: 1,
            random_graphs: 20,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn small_sweep_matches_everywhere() {
        let report = run_sweep(&small(&Check::ALL));
        assert!(report.all_match(), "{}", report.to_text());
        assert!(report.summary.matched > 50);
        let checks: std::collections::BTreeSet<Check> =
            report.cases.iter().map(|c| c.check).collect();
        assert_eq!(checks.len(), Check::ALL.len());
    }

    #[test]
    fn zero_rows_are_present_and_matching() {
        let report = run_sweep(&small(&[Check::Symmetric, Check::Douglas]));
        assert!(report
            .cases
            .iter()
            .any(|c| c.formula.as_deref() == Some("0") && c.matched));
    }

    #[test]
    fn oversized_cases_are_skipped_not_failed() {
        let sweep = SweepSpec {
            max_oracle_vertices: 6,
            ..small(&[Check::Macmahon])
        };
        let report = run_sweep(&sweep);
        assert!(report.summary.skipped > 0);
        assert!(report.all_match());
        assert!(report
            .cases
            .iter()
            .filter(|c| c.status == CaseStatus::Skipped)
            .all(|c| c.note.is_some()));
    }

    #[test]
    fn rows_are_sorted_and_serialise() {
        let report = run_sweep(&small(&[Check::Kasteleyn, Check::AztecDiamond]));
        let keys: Vec<(Check, String)> = report
            .cases
            .iter()
            .map(|c| (c.check, c.params.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        let back: VerificationReport = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(back.summary, report.summary);
        let csv = report.to_csv().unwrap();
        assert_eq!(csv.lines().count(), report.cases.len() + 1);
        assert!(csv.starts_with("check,params,formula,oracle,match"));
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
        }
        assert!("nope".parse::<Check>().is_err());
    }
}
