//! End-to-end acceptance checks.  Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line with its timing.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;

use quasihex::exact::pow2;
use quasihex::families::{
    aztec_rectangle, delete_labels, gamma, grid, half_honeycomb, hexagon_dual, ArVariant,
};
use quasihex::formulas::{self, count_region};
use quasihex::graph::{dual_graph, Counter, MatchGraph, Oracle};
use quasihex::lattice::{build, region_stats, Color, Region, RegionParams};
use quasihex::transforms::{composite_with_terminal, peel_douglas, Multiplier, Part};
use quasihex::verify::{distance_lists, random_graph};

use common::{fixture, LEMMAS};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn oracle_count(g: &MatchGraph, cap: usize) -> Result<BigRational, String> {
    Oracle::with_max_vertices(cap)
        .count(g)
        .map(|c| c.value().clone())
        .map_err(|e| e.to_string())
}

fn propp_worked_value() -> Outcome {
    let region = build(&RegionParams::symmetric(3, &[3, 3], &[3, 3])).map_err(|e| e.to_string())?;
    let g = dual_graph(&region);
    let expected = int(17920);
    ensure(expected == int(BigInt::from(2).pow(9) * 5 * 7), || {
        "2^9 * 5 * 7 is not 17920".into()
    })?;
    let formula = int(count_region(&region).map_err(|e| e.to_string())?.value);
    let counter = Counter::default()
        .count(&g)
        .map_err(|e| e.to_string())?
        .value()
        .clone();
    let oracle = oracle_count(&g, 128)?;
    ensure(
        formula == expected && counter == expected && oracle == expected,
        || format!("formula {formula}, counter {counter}, oracle {oracle}"),
    )?;
    Ok(format!(
        "formula = counter = oracle = 17920 on {} vertices",
        g.vertex_count()
    ))
}

fn macmahon_boxes() -> Outcome {
    let mut n = 0;
    for a in 1..=3u32 {
        for b in 1..=3u32 {
            for c in 1..=3u32 {
                let g = hexagon_dual(a, b, c).map_err(|e| e.to_string())?;
                let f = int(formulas::macmahon(a as u64, b as u64, c as u64));
                let o = oracle_count(&g, 64)?;
                ensure(f == o, || format!("({a},{b},{c}): formula {f}, oracle {o}"))?;
                n += 1;
            }
        }
    }
    let f = formulas::macmahon(4, 1, 4);
    let o = oracle_count(&hexagon_dual(4, 1, 4).map_err(|e| e.to_string())?, 64)?;
    ensure(f == 70u32.into() && o == int(70), || {
        format!("(4,1,4): formula {f}, oracle {o}")
    })?;
    Ok(format!("{n} boxes plus (4,1,4) = 70"))
}

fn aztec_diamonds() -> Outcome {
    for n in 1..=4u32 {
        let g = aztec_rectangle(n, n, ArVariant::Plain).map_err(|e| e.to_string())?;
        let c = Counter::default()
            .count(&g)
            .map_err(|e| e.to_string())?
            .value()
            .clone();
        let expected = pow2((n * (n + 1) / 2) as i64);
        ensure(c == expected, || {
            format!("n={n}: counter {c}, expected {expected}")
        })?;
        ensure(int(formulas::aztec_diamond(n as u64)) == expected, || {
            format!("n={n}: closed form disagrees")
        })?;
    }
    Ok("n = 1..4".into())
}

fn kasteleyn_product(m: u32, n: u32) -> f64 {
    let mut p = 1.0;
    for j in 1..=m {
        for k in 1..=n {
            let x = (PI * j as f64 / (2 * m + 1) as f64).cos();
            let y = (PI * k as f64 / (2 * n + 1) as f64).cos();
            p *= 4.0 * (x * x + y * y);
        }
    }
    p
}

fn kasteleyn_grids() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=2 {
        for n in 1..=2 {
            let f = formulas::kasteleyn_rectangle(m, n).map_err(|e| e.to_string())?;
            let o = oracle_count(&grid(2 * m, 2 * n).map_err(|e| e.to_string())?, 64)?;
            ensure(int(f.clone()) == o, || {
                format!("{m}x{n}: formula {f}, oracle {o}")
            })?;
            let exact = f.to_f64().unwrap_or(f64::NAN);
            let rel = ((kasteleyn_product(m, n) - exact) / exact).abs();
            worst = worst.max(rel);
            ensure(rel < 1e-6, || {
                format!("{m}x{n}: relative rounding error {rel:e}")
            })?;
        }
    }
    Ok(format!("m, n <= 2, worst relative error {worst:.1e}"))
}

fn lemma_suite() -> Outcome {
    let oracle = Oracle::with_max_vertices(64);
    let mut parts = Vec::new();
    for (k, lemma) in LEMMAS.into_iter().enumerate() {
        let mut rng = StdRng::seed_from_u64(1000 + k as u64);
        let mut nonzero = 0;
        for i in 0..200 {
            let step = fixture(lemma, &mut rng);
            let before = oracle
                .count(&step.before)
                .map_err(|e| format!("{}: {e}", lemma.name()))?;
            let after = oracle
                .count(&step.after)
                .map_err(|e| format!("{}: {e}", lemma.name()))?;
            let rhs = step.multiplier.value() * after.value();
            ensure(before.value() == &rhs, || {
                format!(
                    "{} fixture {i}: M(before) = {before}, mu * M(after) = {rhs}",
                    lemma.name()
                )
            })?;
            if !before.is_zero() {
                nonzero += 1;
            }
        }
        parts.push(format!("{} {nonzero}/200", lemma.name()));
    }
    Ok(format!("nonzero fixtures: {}", parts.join(", ")))
}

fn small_regions(params: impl Iterator<Item = RegionParams>, max_vertices: usize) -> Vec<Region> {
    params
        .filter_map(|p| build(&p).ok())
        .filter(|r| dual_graph(r).vertex_count() <= max_vertices)
        .collect()
}

fn douglas_composite() -> Outcome {
    let lists = distance_lists(3, 4, false);
    let params = (1..=5).flat_map(|a| lists.iter().map(move |d| RegionParams::douglas(a, d)));
    let regions = small_regions(params, 40);
    let (mut white, mut black) = (0, 0);
    for r in &regions {
        let label = format!("D_{}({:?})", r.params().a, r.params().d);
        let stats = region_stats(r);
        let g = dual_graph(r);
        let (trace, term) =
            composite_with_terminal(&g, r, Part::Upper).map_err(|e| format!("{label}: {e}"))?;
        let (h, q, c) = (stats.h, stats.q, stats.c_upper);
        let (e, width) = match stats.bottom_row_color {
            Color::White => {
                white += 1;
                (c - h * (q + 1), q)
            }
            Color::Black => {
                black += 1;
                (c - h * q, q - 1)
            }
        };
        ensure(trace.cumulative() == Multiplier::pow2(e), || {
            format!(
                "{label}: cumulative {} but the closed form needs 2^{e}",
                trace.cumulative()
            )
        })?;
        ensure(
            term.baseless == (stats.bottom_row_color == Color::Black),
            || format!("{label}: wrong terminal shape"),
        )?;
        ensure(term.m as i64 == h && term.n as i64 == width, || {
            format!(
                "{label}: terminal AR_({},{}) but h = {h}, q = {q}",
                term.m, term.n
            )
        })?;
        let oracle = oracle_count(&g, 40)?;
        let via_terminal = pow2(e) * oracle_count(trace.terminal(), 64)?;
        ensure(oracle == via_terminal, || {
            format!("{label}: oracle {oracle}, via terminal {via_terminal}")
        })?;
        let formula = int(count_region(r).map_err(|e| format!("{label}: {e}"))?.value);
        ensure(formula == oracle, || {
            format!("{label}: formula {formula}, oracle {oracle}")
        })?;
        let predicted = peel_douglas(r)
            .map_err(|e| format!("{label}: {e}"))?
            .predicted_count();
        ensure(predicted.as_ref() == Some(&oracle), || {
            format!("{label}: replay predicts {predicted:?}")
        })?;
    }
    ensure(white > 0 && black > 0, || {
        format!("only {white} white-bottom and {black} black-bottom regions")
    })?;
    Ok(format!(
        "{} regions ({white} white bottom, {black} black bottom)",
        regions.len()
    ))
}

fn asymmetric_odd() -> Outcome {
    let lists = distance_lists(2, 3, true);
    let mut params = Vec::new();
    for a in 1..=3 {
        for d in &lists {
            for c in &lists {
                for dp in &lists {
                    params.push(RegionParams::asymmetric(a, d, c, dp));
                }
            }
        }
    }
    let regions = small_regions(params.into_iter(), 40);
    let (mut unequal_heights, mut short, mut white, mut nonzero) = (0, 0, 0, 0);
    for r in &regions {
        let p = r.params();
        let label = format!("H_{}({:?};{:?};{:?})", p.a, p.d, p.c, p.dprime);
        let stats = region_stats(r);
        let odd = formulas::count_asym_odd(p.a, &p.d, &p.c, &p.dprime)
            .map_err(|e| format!("{label}: {e}"))?;
        let general = formulas::count_asym_general(&stats).map_err(|e| format!("{label}: {e}"))?;
        let oracle = oracle_count(&dual_graph(r), 40)?;
        ensure(
            int(odd.value.clone()) == oracle && int(general.value.clone()) == oracle,
            || {
                format!(
                    "{label}: all-odd {}, general {}, oracle {oracle}",
                    odd.value, general.value
                )
            },
        )?;
        let zero_branch = if stats.bottom_row_color == Color::White {
            white += 1;
            true
        } else if stats.h != stats.h_prime {
            unequal_heights += 1;
            true
        } else if stats.q < stats.h {
            short += 1;
            true
        } else {
            false
        };
        if zero_branch {
            ensure(odd.value.is_zero() && oracle.is_zero(), || {
                format!("{label}: zero branch gave {}", odd.value)
            })?;
        } else if !oracle.is_zero() {
            nonzero += 1;
        }
    }
    let lists = distance_lists(2, 2, false);
    let mut mixed = Vec::new();
    for a in 1..=2 {
        for d in &lists {
            for c in &lists {
                for dp in &lists {
                    mixed.push(RegionParams::asymmetric(a, d, c, dp));
                }
            }
        }
    }
    for r in small_regions(mixed.into_iter(), 40)
        .iter()
        .filter(|r| r.bottom_row_color() == Color::White)
    {
        let p = r.params();
        let general = formulas::count_asym_general(&region_stats(r)).map_err(|e| e.to_string())?;
        let oracle = oracle_count(&dual_graph(r), 40)?;
        ensure(general.value.is_zero() && oracle.is_zero(), || {
            format!(
                "white-bottom H_{}({:?};{:?};{:?}): general {}, oracle {oracle}",
                p.a, p.d, p.c, p.dprime, general.value
            )
        })?;
        white += 1;
    }
    ensure(unequal_heights > 0 && short > 0 && white > 0, || {
        format!("zero branches not all seen: h != h' {unequal_heights}, q < h {short}, white bottom {white}")
    })?;
    Ok(format!(
        "{} regions, {nonzero} nonzero; zero branches h != h' {unequal_heights}, q < h {short}, white bottom {white}",
        regions.len()
    ))
}

fn gamma_graphs() -> Outcome {
    let (mut checked, mut overlap, mut unbalanced) = (0, 0, 0);
    for a in 1..=4 {
        for c in 1..=4 {
            for b in c..=c + 4 {
                for d in 1..=4 {
                    let Ok(g) = gamma(a, b, c, d, c + d - 1) else {
                        continue;
                    };
                    if g.vertex_count() > 40 {
                        continue;
                    }
                    let label = format!("gamma({a},{b},{c},{d},{})", c + d - 1);
                    let f = formulas::gamma_count(a, b, c, d, c + d - 1)
                        .map_err(|e| format!("{label}: {e}"))?;
                    let o = oracle_count(&g, 40)?;
                    ensure(int(f.clone()) == o, || {
                        format!("{label}: formula {f}, oracle {o}")
                    })?;
                    checked += 1;
                    if d == a {
                        let small =
                            formulas::gamma_count_small_d(a, b, c, d).map_err(|e| e.to_string())?;
                        let large =
                            formulas::gamma_count_large_d(a, b, c, d).map_err(|e| e.to_string())?;
                        ensure(small == large && small == f, || {
                            format!("{label}: parts give {small} and {large}")
                        })?;
                        overlap += 1;
                    }
                    for e in [c + d, c + d + 1] {
                        let Ok(g) = gamma(a, b, c, d, e) else {
                            continue;
                        };
                        if g.vertex_count() > 40 {
                            continue;
                        }
                        let f = formulas::gamma_count(a, b, c, d, e).map_err(|e| e.to_string())?;
                        let o = oracle_count(&g, 40)?;
                        ensure(f.is_zero() && o.is_zero(), || {
                            format!("gamma({a},{b},{c},{d},{e}): {f} / {o}")
                        })?;
                        unbalanced += 1;
                    }
                }
            }
        }
    }
    ensure(checked > 0 && overlap > 0 && unbalanced > 0, || {
        "empty parameter grid".into()
    })?;
    Ok(format!(
        "{checked} balanced tuples, {overlap} on the overlap, {unbalanced} unbalanced give 0"
    ))
}

fn subsets(n: i64, k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    (1..=n)
        .flat_map(|last| {
            subsets(last - 1, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

fn dented_graphs() -> Outcome {
    let mut count = 0;
    for m in 1..=3usize {
        for n in 1..=3usize {
            let base = aztec_rectangle(m as u32, n as u32, ArVariant::Baseless)
                .map_err(|e| e.to_string())?;
            for t in subsets(n as i64 + 1, m) {
                let f = formulas::aztec_dent(m, n, &t).map_err(|e| e.to_string())?;
                let labels: Vec<usize> = t.iter().map(|&x| x as usize).collect();
                let g = delete_labels(&base, "bottom", &labels).map_err(|e| e.to_string())?;
                let o = oracle_count(&g, 64)?;
                ensure(int(f.clone()) == o, || {
                    format!("aztec dent m={m} n={n} t={t:?}: {f} vs {o}")
                })?;
                count += 1;
            }
        }
    }
    for a in 1..=3usize {
        for b in 1..=3usize {
            let base = half_honeycomb(b as u32, a as u32, a as u32).map_err(|e| e.to_string())?;
            for r in subsets((a + b) as i64, a) {
                let f = formulas::v_product(a, b, &r).map_err(|e| e.to_string())?;
                let labels: Vec<usize> = r.iter().map(|&x| x as usize).collect();
                let g = delete_labels(&base, "top", &labels).map_err(|e| e.to_string())?;
                let o = oracle_count(&g, 64)?;
                ensure(int(f.clone()) == o, || {
                    format!("half-hexagon dent a={a} b={b} r={r:?}: {f} vs {o}")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} label subsets"))
}

fn counter_cross_validation() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let counter = Counter::default();
    let oracle = Oracle::with_max_vertices(20);
    let mut nonzero = 0;
    for i in 0..500 {
        let g = random_graph(&mut rng, 20);
        let c = counter.count(&g).map_err(|e| format!("graph {i}: {e}"))?;
        let o = oracle.count(&g).map_err(|e| format!("graph {i}: {e}"))?;
        ensure(c == o, || format!("graph {i}: counter {c}, oracle {o}"))?;
        if !o.is_zero() {
            nonzero += 1;
        }
    }
    Ok(format!("500 graphs, {nonzero} with matchings"))
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "worked value 17920",
        budget: Duration::from_secs(10),
        run: propp_worked_value,
    },
    Criterion {
        id: 2,
        title: "boxed plane partitions",
        budget: Duration::from_secs(30),
        run: macmahon_boxes,
    },
    Criterion {
        id: 3,
        title: "Aztec diamonds",
        budget: Duration::from_secs(10),
        run: aztec_diamonds,
    },
    Criterion {
        id: 4,
        title: "domino grids",
        budget: Duration::from_secs(5),
        run: kasteleyn_grids,
    },
    Criterion {
        id: 5,
        title: "local rewrites",
        budget: Duration::from_secs(120),
        run: lemma_suite,
    },
    Criterion {
        id: 6,
        title: "Douglas peeling",
        budget: Duration::from_secs(120),
        run: douglas_composite,
    },
    Criterion {
        id: 7,
        title: "asymmetric all-odd",
        budget: Duration::from_secs(180),
        run: asymmetric_odd,
    },
    Criterion {
        id: 8,
        title: "gamma graphs",
        budget: Duration::from_secs(120),
        run: gamma_graphs,
    },
    Criterion {
        id: 9,
        title: "dented graphs",
        budget: Duration::from_secs(60),
        run: dented_graphs,
    },
    Criterion {
        id: 10,
        title: "counter vs oracle",
        budget: Duration::from_secs(60),
        run: counter_cross_validation,
    },
];

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for c in CRITERIA
        .iter()
        .filter(|c| wanted.is_empty() || wanted.contains(&c.id))
    {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => (
                "FAIL",
                format!(
                    "{d}; took {:.1}s, budget {}s",
                    elapsed.as_secs_f64(),
                    c.budget.as_secs()
                ),
            ),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} [{:>7.2}s] {}: {detail}",
            c.id,
            elapsed.as_secs_f64(),
            c.title
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
