//! Closed-form tiling counts, evaluated exactly.

use std::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::pow2;
use crate::lattice::{self, Color, RegionParams, RegionStats, SlopeRule};

/// An exact nonnegative integer, optionally with its `2^E · rest`
/// decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaResult {
    #[serde(with = "bigint_string")]
    pub value: BigInt,
    pub exponent: Option<i64>,
    #[serde(with = "opt_rational_string")]
    pub rest: Option<BigRational>,
}

impl FormulaResult {
    pub fn zero() -> Self {
        FormulaResult {
            value: BigInt::zero(),
            exponent: None,
            rest: None,
        }
    }

    pub fn plain(value: BigInt) -> Self {
        FormulaResult {
            value,
            exponent: None,
            rest: None,
        }
    }

    /// `2^e · rest`, which must be a nonnegative integer.
    pub fn with_ledger(e: i64, rest: BigRational) -> Result<Self> {
        let v = pow2(e) * &rest;
        if !v.is_integer() || v.is_negative() {
            return Err(Error::PreconditionFailed(format!(
                "2^{e} · {rest} is not a nonnegative integer"
            )));
        }
        Ok(FormulaResult {
            value: v.to_integer(),
            exponent: Some(e),
            rest: Some(rest),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

mod opt_rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `∏_{k<n} k!`
fn superfactorial(n: u64) -> BigUint {
    (0..n).fold(BigUint::one(), |acc, k| acc * factorial(k))
}

/// Lozenge tilings of the hexagon with sides `a, b, c, a, b, c`
/// (plane partitions in an `a x b x c` box).
pub fn macmahon(a: u64, b: u64, c: u64) -> BigUint {
    let num = superfactorial(a) * superfactorial(b) * superfactorial(c) * superfactorial(a + b + c);
    let den = superfactorial(a + b) * superfactorial(b + c) * superfactorial(c + a);
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "MacMahon product is integral");
    q
}

/// Largest value the floating-point product can round unambiguously.
const KASTELEYN_EXACT_LIMIT: f64 = (1u64 << 50) as f64;

/// Domino tilings of a `2m x 2n` board from the trigonometric product.
///
/// Fails with [`Error::PrecisionLoss`] when the value is too large to be
/// recovered from a double, or when the product is not within `1e-6`
/// (relative) of an integer.
pub fn kasteleyn_rectangle(m: u32, n: u32) -> Result<BigUint> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParams("board sides must be positive".into()));
    }
    let mut v = 1.0f64;
    for j in 1..=m {
        let cj = (j as f64 * PI / (2 * m + 1) as f64).cos();
        for k in 1..=n {
            let ck = (k as f64 * PI / (2 * n + 1) as f64).cos();
            v *= 4.0 * (cj * cj + ck * ck);
        }
    }
    if !v.is_finite() || v >= KASTELEYN_EXACT_LIMIT {
        return Err(Error::PrecisionLoss(format!(
            "product {v:e} exceeds the exactly representable range"
        )));
    }
    let rounded = v.round();
    if (v - rounded).abs() > 1e-6 * rounded.abs().max(1.0) {
        return Err(Error::PrecisionLoss(format!(
            "product {v} is not close to an integer"
        )));
    }
    Ok(BigUint::from(rounded as u64))
}

/// `2^{n(n+1)/2}`
pub fn aztec_diamond(n: u64) -> BigUint {
    BigUint::one() << (n * (n + 1) / 2)
}

fn nat(v: i64) -> u64 {
    u64::try_from(v).expect("nonnegative by the branch conditions")
}

/// Symmetric quasi-hexagons.
pub fn count_symmetric(stats: &RegionStats) -> Result<FormulaResult> {
    let h = stats.h;
    if stats.h_prime != h || stats.bottom_row_color == Color::White || stats.q < h {
        return Ok(FormulaResult::zero());
    }
    let q = stats.q;
    let e = stats.c_upper + stats.c_lower - h * (2 * q - h + 1);
    let mac = macmahon(nat(h), nat(q - h), nat(h));
    FormulaResult::with_ledger(e, BigRational::from_integer(mac.into()))
}

/// Symmetric quasi-hexagons whose distances are all odd.
pub fn count_odd_symmetric(a: u32, d: &[u32], dprime: &[u32]) -> Result<FormulaResult> {
    if d.iter().chain(dprime).any(|x| x % 2 == 0) {
        return Err(Error::InvalidParams("all distances must be odd".into()));
    }
    let k = d.len() as i64;
    let upper = k + d.iter().map(|&x| x as i64).sum::<i64>();
    let lower = dprime.len() as i64 + dprime.iter().map(|&x| x as i64).sum::<i64>();
    if upper != lower {
        return Ok(FormulaResult::zero());
    }
    let h = upper / 2;
    let a = a as i64;
    if a + k < h {
        return Ok(FormulaResult::zero());
    }
    let region = lattice::build(&RegionParams::symmetric(a as u32, d, dprime))?;
    let s = lattice::region_stats(&region);
    let e = s.c_upper + s.c_lower - h * (2 * a + 2 * k - h + 1);
    let mac = macmahon(nat(h), nat(a + k - h), nat(h));
    FormulaResult::with_ledger(e, BigRational::from_integer(mac.into()))
}

/// Douglas regions.
pub fn count_douglas(stats: &RegionStats) -> Result<FormulaResult> {
    let h = stats.h;
    if stats.bottom_row_color == Color::Black || h != stats.q {
        return Ok(FormulaResult::zero());
    }
    FormulaResult::with_ledger(stats.c_upper - h * (h + 1) / 2, BigRational::one())
}

fn check_labels(labels: &[i64], len: usize, max: i64) -> Result<()> {
    if labels.len() != len {
        return Err(Error::InvalidLabels(format!(
            "expected {len} labels, got {}",
            labels.len()
        )));
    }
    if labels.iter().any(|&r| r < 1 || r > max) {
        return Err(Error::InvalidLabels(format!(
            "labels must lie in 1..={max}"
        )));
    }
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidLabels(
            "labels must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn vandermonde_ratio(labels: &[i64]) -> BigRational {
    let mut v = BigRational::one();
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            v *= BigRational::new((labels[j] - labels[i]).into(), ((j - i) as i64).into());
        }
    }
    v
}

/// `V_{a,b}(r) = ∏_{i<j} (r_j - r_i)/(j - i)` for `1 ≤ r_1 < … < r_a ≤ a + b`.
pub fn v_product(a: usize, b: usize, r: &[i64]) -> Result<BigInt> {
    check_labels(r, a, (a + b) as i64)?;
    let v = vandermonde_ratio(r);
    if !v.is_integer() {
        return Err(Error::InvalidLabels(format!("product {v} is not integral")));
    }
    Ok(v.to_integer())
}

/// Matchings of the baseless rectangle `AR_{m-1/2,n}` with the bottom
/// vertices labelled `t` removed.
pub fn aztec_dent(m: usize, n: usize, t: &[i64]) -> Result<BigInt> {
    check_labels(t, m, (n + 1) as i64)?;
    let v = pow2((m * m.saturating_sub(1) / 2) as i64) * vandermonde_ratio(t);
    if !v.is_integer() {
        return Err(Error::InvalidLabels(format!("value {v} is not integral")));
    }
    Ok(v.to_integer())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binom2(d: i64) -> i64 {
    d * (d - 1) / 2
}

/// Sum over the labels of the glued vertices taken by the rectangle
/// (`B`, of size `taken`) out of `1..=pool`; the rest (`A`) is taken by the
/// half-honeycomb.  `extra_ar` is appended to `B` before evaluating the
/// rectangle factor.
fn gamma_sum(
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    pool: i64,
    taken: i64,
    extra_ar: &[i64],
) -> BigRational {
    let mut total = BigRational::zero();
    let tail: Vec<i64> = (a + c + 1..=a + b).collect();
    for pick in combinations(pool as usize, taken as usize) {
        let bset: Vec<i64> = pick.iter().map(|&i| i as i64 + 1).collect();
        let mut aset: Vec<i64> = (1..=pool).filter(|x| !bset.contains(x)).collect();
        aset.extend_from_slice(&tail);
        let mut bfull = bset.clone();
        bfull.extend_from_slice(extra_ar);
        debug_assert_eq!(aset.len() as i64, b);
        debug_assert_eq!(bfull.len() as i64, d);
        total += vandermonde_ratio(&aset) * vandermonde_ratio(&bfull);
    }
    pow2(binom2(d)) * total
}

/// Matchings of `Γ^{d,c+d-1}_{a,b,c}` as a sum over the split of the glued
/// vertices, valid when `d ≤ a`.
pub fn gamma_count_small_d(a: u32, b: u32, c: u32, d: u32) -> Result<BigInt> {
    let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
    if d > a || b < c {
        return Err(Error::InvalidParams(
            "this sum requires d <= a and b >= c".into(),
        ));
    }
    integral(gamma_sum(a, b, c, d, c + d, d, &[]))
}

/// The same count for `d ≥ a`: labels beyond `c + a` all go to the
/// rectangle.
pub fn gamma_count_large_d(a: u32, b: u32, c: u32, d: u32) -> Result<BigInt> {
    let (a, b, c, d) = (a as i64, b as i64, c as i64, d as i64);
    if d < a || b < c {
        return Err(Error::InvalidParams(
            "this sum requires d >= a and b >= c".into(),
        ));
    }
    let extra: Vec<i64> = (c + a + 1..=c + d).collect();
    integral(gamma_sum(a, b, c, d, c + a, a, &extra))
}

fn integral(v: BigRational) -> Result<BigInt> {
    if !v.is_integer() {
        return Err(Error::PreconditionFailed(format!(
            "sum {v} is not integral"
        )));
    }
    Ok(v.to_integer())
}

/// Matchings of `Γ^{d,e}_{a,b,c}`.
pub fn gamma_count(a: u32, b: u32, c: u32, d: u32, e: u32) -> Result<BigInt> {
    if [a, b, c, d, e].contains(&0) || b < c {
        return Err(Error::InvalidParams(
            "Γ parameters must be positive with b >= c".into(),
        ));
    }
    if e as i64 != c as i64 + d as i64 - 1 {
        return Ok(BigInt::zero());
    }
    match d.cmp(&a) {
        std::cmp::Ordering::Less => gamma_count_small_d(a, b, c, d),
        std::cmp::Ordering::Greater => gamma_count_large_d(a, b, c, d),
        std::cmp::Ordering::Equal => {
            let x = gamma_count_small_d(a, b, c, d)?;
            let y = gamma_count_large_d(a, b, c, d)?;
            if x != y {
                return Err(Error::PreconditionFailed(format!(
                    "sum formulas disagree at d = a: {x} vs {y}"
                )));
            }
            Ok(x)
        }
    }
}

/// Asymmetric quasi-hexagons with all distances odd.
pub fn count_asym_odd(a: u32, d: &[u32], c: &[u32], dprime: &[u32]) -> Result<FormulaResult> {
    if d.iter().chain(c).chain(dprime).any(|x| x % 2 == 0) {
        return Err(Error::InvalidParams("all distances must be odd".into()));
    }
    let region = lattice::build(&RegionParams::asymmetric(a, d, c, dprime))?;
    let s = lattice::region_stats(&region);
    let (h, k, t) = (s.h, d.len() as i64, c.len() as i64);
    if h != s.h_prime {
        return Ok(FormulaResult::zero());
    }
    let a = a as i64;
    let q = a + k;
    if q < h {
        return Ok(FormulaResult::zero());
    }
    let e = s.c_upper + s.c_lower - h * (2 * a + 2 * k - h + 1);
    if q == h {
        return FormulaResult::with_ledger(e, BigRational::one());
    }
    let h0: i64 = c.iter().map(|&x| (x as i64 - 1) / 2).sum();
    if h0 == 0 {
        let mac = macmahon(nat(h), nat(q - h), nat(h + t));
        return FormulaResult::with_ledger(e, BigRational::from_integer(mac.into()));
    }
    let g = gamma_count(
        (q - h) as u32,
        (h0 + 2 * h + t) as u32,
        h as u32,
        h0 as u32,
        (h0 + h - 1) as u32,
    )?;
    let (k2, rest) = crate::exact::split_pow2(&BigRational::from_integer(g));
    FormulaResult::with_ledger(e - binom2(h0) + k2, rest)
}

/// Asymmetric quasi-hexagons in general, using the default slope rule.
pub fn count_asym_general(stats: &RegionStats) -> Result<FormulaResult> {
    count_asym_general_with(stats, SlopeRule::ZeroForEven)
}

/// Asymmetric quasi-hexagons in general under a chosen slope rule.
pub fn count_asym_general_with(stats: &RegionStats, rule: SlopeRule) -> Result<FormulaResult> {
    let h = stats.h;
    if h != stats.h_prime || stats.bottom_row_color == Color::White {
        return Ok(FormulaResult::zero());
    }
    let t = stats.middle_layers.len() as i64;
    if t == 0 {
        return Err(Error::InvalidParams(
            "statistics do not come from an asymmetric region".into(),
        ));
    }
    let (phi, h0) = stats.slope_with(rule);
    let h0 = h0.ok_or_else(|| {
        Error::PreconditionFailed(
            "the middle height is not an integer under this slope rule".into(),
        )
    })?;
    let q = stats.q;
    if q < h {
        return Ok(FormulaResult::zero());
    }
    let e = stats.c_upper + stats.c_lower - h * (2 * q - h + 1);
    if q == h {
        return FormulaResult::with_ledger(e, BigRational::one());
    }
    if h0 == 0 {
        let mac = macmahon(nat(h), nat(q - h), nat(h + t));
        return FormulaResult::with_ledger(e, BigRational::from_integer(mac.into()));
    }
    let b = h0 + phi + 2 * h;
    if b < h || h0 < 0 {
        return Err(Error::PreconditionFailed(format!(
            "Γ parameters out of range (b = {b}, h0 = {h0})"
        )));
    }
    let g = gamma_count(
        (q - h) as u32,
        b as u32,
        h as u32,
        h0 as u32,
        (h0 + h - 1) as u32,
    )?;
    let (k2, rest) = crate::exact::split_pow2(&BigRational::from_integer(g));
    FormulaResult::with_ledger(e - binom2(h0) + k2, rest)
}

/// The closed form that applies to a constructed region: the symmetric or
/// Douglas formula by kind, and for asymmetric regions the all-odd formula
/// when every distance is odd, the general one otherwise.
pub fn count_region(region: &lattice::Region) -> Result<FormulaResult> {
    let p = region.params();
    let stats = lattice::region_stats(region);
    match p.kind {
        lattice::RegionKind::Symmetric => count_symmetric(&stats),
        lattice::RegionKind::Douglas => count_douglas(&stats),
        lattice::RegionKind::Asymmetric => {
            if p.d.iter().chain(&p.c).chain(&p.dprime).all(|x| x % 2 == 1) {
                count_asym_odd(p.a, &p.d, &p.c, &p.dprime)
            } else {
                count_asym_general(&stats)
            }
        }
    }
}

/// Convenience: value of a formula result as `u64` when it fits.
pub fn small_value(r: &FormulaResult) -> Option<u64> {
    r.value.to_u64()
}
