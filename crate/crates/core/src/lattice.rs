//! Quasi-hexagonal and Douglas regions on the square lattice.
//!
//! Regions are described in a frame rotated by 45 degrees: the drawn
//! diagonals become horizontal *rows* indexed by `row` (increasing downward),
//! and positions along a row are measured by `pos = x + y`.  A lattice point
//! `(row, pos)` always has `row ≡ pos (mod 2)`.
//!
//! Between two consecutive lattice diagonals lies a horizontal *strip* of
//! cells.  On a drawn diagonal the unit squares it crosses are cut into a
//! strip of up-pointing triangles (above the diagonal) and a strip of
//! down-pointing triangles (below it); on an undrawn diagonal the squares
//! stay whole.  Every cell of a strip is centred at an odd offset from the
//! strip's left boundary, so the cells of a strip are listed by `offset`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Symmetric,
    Douglas,
    Asymmetric,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::Symmetric => "symmetric",
            RegionKind::Douglas => "douglas",
            RegionKind::Asymmetric => "asymmetric",
        })
    }
}

impl std::str::FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "symmetric" | "sym" => Ok(RegionKind::Symmetric),
            "douglas" => Ok(RegionKind::Douglas),
            "asymmetric" | "asym" => Ok(RegionKind::Asymmetric),
            other => Err(Error::InvalidParams(format!(
                "unknown region kind `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::White => "white",
        })
    }
}

/// Cell shapes.  `TriangleUp` cells rest on a drawn diagonal from above and
/// point up; `TriangleDown` cells hang below a drawn diagonal and point down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    TriangleUp,
    Square,
    TriangleDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: i64,
    pub offset: i64,
    pub shape: Shape,
    pub color: Color,
}

impl Cell {
    fn sort_key(&self) -> (i64, Shape, i64) {
        (self.row, self.shape, self.offset)
    }
}

/// A horizontal run of cells of one shape and one color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strip {
    pub row: i64,
    pub shape: Shape,
    pub color: Color,
    /// Position of the southwestern boundary on this strip's row.
    pub left: i64,
    /// Position of the northeastern boundary on this strip's row.
    pub right: i64,
}

impl Strip {
    pub fn width(&self) -> i64 {
        (self.right - self.left) / 2
    }

    pub fn offsets(&self) -> impl Iterator<Item = i64> {
        (self.left + 1..self.right).step_by(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub row: i64,
    pub pos: i64,
}

impl LatticePoint {
    /// Standard lattice coordinates `(x, y)` with `row = x - y`, `pos = x + y`.
    pub fn xy(&self) -> (i64, i64) {
        ((self.pos + self.row) / 2, (self.pos - self.row) / 2)
    }
}

/// The six corners of a quasi-hexagon.  For a Douglas region `C = B` and
/// `D = E`, both lying on the bottom diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corners {
    pub a: LatticePoint,
    pub b: LatticePoint,
    pub c: LatticePoint,
    pub d: LatticePoint,
    pub e: LatticePoint,
    pub f: LatticePoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionParams {
    pub kind: RegionKind,
    pub a: u32,
    pub d: Vec<u32>,
    #[serde(default)]
    pub c: Vec<u32>,
    #[serde(default)]
    pub dprime: Vec<u32>,
}

impl RegionParams {
    pub fn symmetric(a: u32, d: &[u32], dprime: &[u32]) -> Self {
        RegionParams {
            kind: RegionKind::Symmetric,
            a,
            d: d.to_vec(),
            c: vec![],
            dprime: dprime.to_vec(),
        }
    }

    pub fn douglas(a: u32, d: &[u32]) -> Self {
        RegionParams {
            kind: RegionKind::Douglas,
            a,
            d: d.to_vec(),
            c: vec![],
            dprime: vec![],
        }
    }

    pub fn asymmetric(a: u32, d: &[u32], c: &[u32], dprime: &[u32]) -> Self {
        RegionParams {
            kind: RegionKind::Asymmetric,
            a,
            d: d.to_vec(),
            c: c.to_vec(),
            dprime: dprime.to_vec(),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.a == 0 {
            return bad("side length a must be at least 1");
        }
        if self.d.is_empty() {
            return bad("at least one distance above the marked diagonal is required");
        }
        if self
            .d
            .iter()
            .chain(&self.c)
            .chain(&self.dprime)
            .any(|&x| x == 0)
        {
            return bad("all distances must be positive");
        }
        match self.kind {
            RegionKind::Symmetric => {
                if !self.c.is_empty() {
                    return bad("symmetric regions take no middle distances");
                }
                if self.dprime.is_empty() {
                    return bad("at least one distance below the marked diagonal is required");
                }
            }
            RegionKind::Douglas => {
                if !self.c.is_empty() || !self.dprime.is_empty() {
                    return bad(
                        "Douglas regions take only the distances above the marked diagonal",
                    );
                }
            }
            RegionKind::Asymmetric => {
                if self.c.is_empty() {
                    return bad("asymmetric regions need at least one middle distance");
                }
                if self.dprime.is_empty() {
                    return bad(
                        "at least one distance below the lower marked diagonal is required",
                    );
                }
            }
        }
        Ok(())
    }
}

/// A constructed region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    params: RegionParams,
    strips: Vec<Strip>,
    cells: Vec<Cell>,
    diagonals: Vec<i64>,
    ell: i64,
    ell_prime: i64,
    corners: Corners,
}

impl Region {
    pub fn params(&self) -> &RegionParams {
        &self.params
    }

    pub fn kind(&self) -> RegionKind {
        self.params.kind
    }

    /// Strips from top to bottom.
    pub fn strips(&self) -> &[Strip] {
        &self.strips
    }

    /// Cells sorted by row, then shape (up-pointing, square, down-pointing),
    /// then offset.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Row indices of the drawn diagonals, top to bottom.
    pub fn diagonals(&self) -> &[i64] {
        &self.diagonals
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    /// The lower marked diagonal; equals `ell` unless the region is asymmetric.
    pub fn ell_prime(&self) -> i64 {
        self.ell_prime
    }

    pub fn corners(&self) -> &Corners {
        &self.corners
    }

    pub fn bottom_row(&self) -> i64 {
        *self
            .diagonals
            .last()
            .expect("regions have at least two diagonals")
    }

    /// Number of cells, which is also the number of vertices of the dual graph.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Whether a cell lies above the marked diagonal `ℓ` (including the
    /// triangles resting on it from above).
    pub fn is_above_ell(&self, cell: &Cell) -> bool {
        cell.row < self.ell || (cell.row == self.ell && cell.shape == Shape::TriangleUp)
    }

    /// Whether a cell lies below the lower marked diagonal (including the
    /// triangles hanging from it).
    pub fn is_below_ell_prime(&self, cell: &Cell) -> bool {
        self.params.kind != RegionKind::Douglas
            && (cell.row > self.ell_prime
                || (cell.row == self.ell_prime && cell.shape == Shape::TriangleDown))
    }

    /// Squares are always regular; triangles are regular when they point away
    /// from the nearest marked diagonal.
    pub fn is_regular(&self, cell: &Cell) -> bool {
        match cell.shape {
            Shape::Square => true,
            Shape::TriangleUp => self.is_above_ell(cell),
            Shape::TriangleDown => !self.is_above_ell(cell),
        }
    }

    /// Colour of the last row of cells.
    pub fn bottom_row_color(&self) -> Color {
        self.strips.last().expect("non-empty region").color
    }

    /// Index of the strip containing a cell.
    pub fn strip_index(&self, row: i64, shape: Shape) -> Option<usize> {
        self.strips
            .iter()
            .position(|s| s.row == row && s.shape == shape)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&RegionDoc::from(self))?)
    }

    /// Rebuilds a region from its JSON form, checking that the stored cells
    /// agree with the stored parameters.
    pub fn from_json(s: &str) -> Result<Region> {
        let doc: RegionDoc = serde_json::from_str(s)?;
        let params = RegionParams {
            kind: doc.kind,
            a: doc.a,
            d: doc.d,
            c: doc.c,
            dprime: doc.dprime,
        };
        let region = build(&params)?;
        if let Some(cells) = doc.cells {
            let mut cells = cells;
            cells.sort_by_key(Cell::sort_key);
            if cells != region.cells {
                return Err(Error::Parse(
                    "stored cells do not match the region parameters".into(),
                ));
            }
        }
        Ok(region)
    }
}

#[derive(Serialize, Deserialize)]
struct RegionDoc {
    kind: RegionKind,
    a: u32,
    d: Vec<u32>,
    #[serde(default)]
    c: Vec<u32>,
    #[serde(default)]
    dprime: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cells: Option<Vec<Cell>>,
    #[serde(default)]
    diagonals: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ell: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ell_prime: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    corners: Option<Corners>,
}

impl From<&Region> for RegionDoc {
    fn from(r: &Region) -> Self {
        RegionDoc {
            kind: r.params.kind,
            a: r.params.a,
            d: r.params.d.clone(),
            c: r.params.c.clone(),
            dprime: r.params.dprime.clone(),
            cells: Some(r.cells.clone()),
            diagonals: r.diagonals.clone(),
            ell: Some(r.ell),
            ell_prime: (r.params.kind == RegionKind::Asymmetric).then_some(r.ell_prime),
            corners: Some(r.corners),
        }
    }
}

pub fn build_symmetric(params: &RegionParams) -> Result<Region> {
    expect_kind(params, RegionKind::Symmetric)?;
    build(params)
}

pub fn build_douglas(params: &RegionParams) -> Result<Region> {
    expect_kind(params, RegionKind::Douglas)?;
    build(params)
}

pub fn build_asymmetric(params: &RegionParams) -> Result<Region> {
    expect_kind(params, RegionKind::Asymmetric)?;
    build(params)
}

fn expect_kind(params: &RegionParams, kind: RegionKind) -> Result<()> {
    if params.kind != kind {
        return Err(Error::InvalidParams(format!(
            "expected a {kind} region, got {}",
            params.kind
        )));
    }
    Ok(())
}

/// Builds a region of any kind.
pub fn build(params: &RegionParams) -> Result<Region> {
    params.validate()?;

    let mut diagonals = vec![0i64];
    let mut row = 0i64;
    for &x in &params.d {
        row += x as i64;
        diagonals.push(row);
    }
    let ell = row;
    for &x in &params.c {
        row += x as i64;
        diagonals.push(row);
    }
    let ell_prime = row;
    for &x in params.dprime.iter().rev() {
        row += x as i64;
        diagonals.push(row);
    }
    let last = row;
    let drawn: BTreeSet<i64> = diagonals.iter().copied().collect();
    let douglas = params.kind == RegionKind::Douglas;

    // Strip skeleton with alternating colours, starting from white.
    let mut skeleton: Vec<(i64, Shape)> = Vec::new();
    for r in 0..=last {
        if drawn.contains(&r) {
            if r > 0 {
                skeleton.push((r, Shape::TriangleUp));
            }
            if r < last {
                skeleton.push((r, Shape::TriangleDown));
            }
        } else {
            skeleton.push((r, Shape::Square));
        }
    }
    let color_at = |i: usize| {
        if i.is_multiple_of(2) {
            Color::White
        } else {
            Color::Black
        }
    };
    let lower_color = |r: i64| -> Color {
        let shape = if drawn.contains(&r) {
            Shape::TriangleDown
        } else {
            Shape::Square
        };
        let i = skeleton
            .iter()
            .position(|&(rr, s)| rr == r && s == shape)
            .expect("strip exists");
        color_at(i)
    };

    // Boundary walk. Each band between rows r and r+1 moves each boundary
    // one unit east (+1) or west (-1), decided by the colour of the cells
    // just below row r.
    let ne_switch = if params.kind == RegionKind::Asymmetric {
        ell_prime
    } else {
        ell
    };
    let mut left = vec![0i64; (last + 1) as usize];
    let mut right = vec![0i64; (last + 1) as usize];
    right[0] = 2 * params.a as i64;
    for r in 0..last {
        let black = lower_color(r) == Color::Black;
        let sw_east = if r < ell { black } else { !black };
        let ne_east = if r < ne_switch { !black } else { black };
        let i = r as usize;
        left[i + 1] = left[i] + if sw_east { 1 } else { -1 };
        right[i + 1] = right[i] + if ne_east { 1 } else { -1 };
        if right[i + 1] - left[i + 1] < 2 {
            return Err(Error::BoundaryIntersection { row: r + 1 });
        }
    }

    let mut strips = Vec::new();
    for (i, &(r, shape)) in skeleton.iter().enumerate() {
        if douglas && (r > ell || (r == ell && shape != Shape::TriangleUp)) {
            break;
        }
        strips.push(Strip {
            row: r,
            shape,
            color: color_at(i),
            left: left[r as usize],
            right: right[r as usize],
        });
    }
    let mut cells: Vec<Cell> = strips
        .iter()
        .flat_map(|s| {
            s.offsets().map(move |offset| Cell {
                row: s.row,
                offset,
                shape: s.shape,
                color: s.color,
            })
        })
        .collect();
    cells.sort_by_key(Cell::sort_key);

    let bottom = if douglas { ell } else { last };
    if douglas {
        diagonals.truncate(params.d.len() + 1);
    }
    let point = |r: i64, pos: i64| LatticePoint { row: r, pos };
    let corners = Corners {
        a: point(0, 0),
        b: point(ell, left[ell as usize]),
        c: point(bottom, left[bottom as usize]),
        d: point(bottom, right[bottom as usize]),
        e: point(ne_switch.min(bottom), right[ne_switch.min(bottom) as usize]),
        f: point(0, right[0]),
    };

    Ok(Region {
        params: params.clone(),
        strips,
        cells,
        diagonals,
        ell,
        ell_prime: if douglas { ell } else { ell_prime },
        corners,
    })
}

/// How the slope contribution of an even middle layer is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeRule {
    /// Even layers contribute 0; odd layers contribute +1 or -1.
    #[default]
    ZeroForEven,
    /// Even layers contribute +1, as do odd layers drifting east.
    Literal,
}

/// A layer between the two marked diagonals of an asymmetric region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleLayer {
    pub top_row: i64,
    pub distance: u32,
    /// Colour of the down-pointing triangles just below the layer's top diagonal.
    pub first_color: Color,
    pub width: i64,
}

impl MiddleLayer {
    pub fn slope(&self, rule: SlopeRule) -> i64 {
        let drift = if self.first_color == Color::White {
            1
        } else {
            -1
        };
        if self.distance % 2 == 1 {
            drift
        } else {
            match rule {
                SlopeRule::ZeroForEven => 0,
                SlopeRule::Literal => 1,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionStats {
    /// Rows of regular black cells above `ℓ`.
    pub h: i64,
    /// Rows of regular white cells below `ℓ` (or `ℓ'`).
    pub h_prime: i64,
    /// Rows of black up-pointing triangles above `ℓ`.
    pub m: i64,
    /// Rows of black down-pointing triangles above `ℓ`.
    pub n: i64,
    /// Regular black cells above `ℓ`.
    pub c_upper: i64,
    /// Regular white cells below `ℓ` (or `ℓ'`).
    pub c_lower: i64,
    /// `a + m - n`.
    pub q: i64,
    /// The same balance computed from the bottom side: `a' + m' - n'`.
    pub q_lower: Option<i64>,
    pub bottom_row_color: Color,
    pub layer_widths: Vec<i64>,
    pub middle_layers: Vec<MiddleLayer>,
    /// Sum of the middle-layer slopes (asymmetric regions only).
    pub slope: Option<i64>,
    /// `Σ (c_j - φ_j) / 2` (asymmetric regions only).
    pub h0: Option<i64>,
}

impl RegionStats {
    /// Slope and middle height under an alternative slope rule.  The middle
    /// height is `None` when it is not an integer under that rule.
    pub fn slope_with(&self, rule: SlopeRule) -> (i64, Option<i64>) {
        let phi: i64 = self.middle_layers.iter().map(|l| l.slope(rule)).sum();
        let twice: i64 = self
            .middle_layers
            .iter()
            .map(|l| l.distance as i64 - l.slope(rule))
            .sum();
        (phi, (twice % 2 == 0).then_some(twice / 2))
    }
}

/// Computes every statistic by scanning the strips of the region.
pub fn region_stats(r: &Region) -> RegionStats {
    let mut h = 0;
    let mut h_prime = 0;
    let mut m = 0;
    let mut n = 0;
    let mut c_upper = 0;
    let mut c_lower = 0;
    let mut m_low = 0;
    let mut n_low = 0;
    for s in &r.strips {
        let probe = Cell {
            row: s.row,
            offset: s.left + 1,
            shape: s.shape,
            color: s.color,
        };
        if r.is_above_ell(&probe) && s.color == Color::Black {
            match s.shape {
                Shape::TriangleUp => m += 1,
                Shape::TriangleDown => n += 1,
                Shape::Square => {}
            }
            if r.is_regular(&probe) {
                h += 1;
                c_upper += s.width();
            }
        }
        if r.is_below_ell_prime(&probe) && s.color == Color::White {
            match s.shape {
                Shape::TriangleDown => m_low += 1,
                Shape::TriangleUp => n_low += 1,
                Shape::Square => {}
            }
            if r.is_regular(&probe) {
                h_prime += 1;
                c_lower += s.width();
            }
        }
    }
    let a = r.params.a as i64;
    let q_lower = (r.params.kind != RegionKind::Douglas).then(|| {
        let bottom = r.strips.last().expect("non-empty");
        bottom.width() + m_low - n_low
    });

    let mut layer_widths = Vec::new();
    for w in r.diagonals.windows(2) {
        let (top, bot) = (w[0], w[1]);
        let width = r
            .strips
            .iter()
            .filter(|s| s.color == Color::Black)
            .find(|s| {
                (s.row == top && s.shape == Shape::TriangleDown)
                    || (s.row > top && s.row < bot)
                    || (s.row == bot && s.shape == Shape::TriangleUp)
            })
            .map(|s| s.width() - 1)
            .unwrap_or(0);
        layer_widths.push(width);
    }

    let mut middle_layers = Vec::new();
    if r.params.kind == RegionKind::Asymmetric {
        let mut top = r.ell;
        for (j, &cj) in r.params.c.iter().enumerate() {
            let s = r.strips[r
                .strip_index(top, Shape::TriangleDown)
                .expect("middle layer strip")];
            middle_layers.push(MiddleLayer {
                top_row: top,
                distance: cj,
                first_color: s.color,
                width: layer_widths[r.params.d.len() + j],
            });
            top += cj as i64;
        }
    }

    let mut stats = RegionStats {
        h,
        h_prime,
        m,
        n,
        c_upper,
        c_lower,
        q: a + m - n,
        q_lower,
        bottom_row_color: r.bottom_row_color(),
        layer_widths,
        middle_layers,
        slope: None,
        h0: None,
    };
    if r.params.kind == RegionKind::Asymmetric {
        let (phi, h0) = stats.slope_with(SlopeRule::ZeroForEven);
        stats.slope = Some(phi);
        stats.h0 = h0;
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(a: u32, d: &[u32], dp: &[u32]) -> Region {
        build_symmetric(&RegionParams::symmetric(a, d, dp)).unwrap()
    }

    #[test]
    fn figure_four_region_has_equal_heights() {
        let r = sym(6, &[4, 4, 3], &[5, 5]);
        let s = region_stats(&r);
        assert_eq!((s.h, s.h_prime), (6, 6));
        assert_eq!(r.diagonals(), &[0, 4, 8, 11, 16, 21]);
    }

    #[test]
    fn propp_region_has_sides_three_two_two() {
        let r = sym(3, &[3, 3], &[3, 3]);
        let c = r.corners();
        assert_eq!(c.f.pos - c.a.pos, 6);
        assert_eq!(c.d.pos - c.c.pos, 6);
        assert_eq!((c.b.row, c.c.row), (6, 12));
        assert_eq!(r.len(), 64);
        let s = region_stats(&r);
        assert_eq!(s.h, 4);
        assert_eq!(s.bottom_row_color, Color::Black);
    }

    #[test]
    fn smallest_symmetric_region_builds() {
        let r = sym(1, &[1], &[1]);
        assert!(!r.is_empty());
    }

    #[test]
    fn douglas_single_layer_is_top_part() {
        let r = build_douglas(&RegionParams::douglas(2, &[2])).unwrap();
        assert_eq!(r.len(), 7);
        assert_eq!(r.strips().last().unwrap().shape, Shape::TriangleUp);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(matches!(
            build(&RegionParams::symmetric(0, &[1], &[1])),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            build(&RegionParams::symmetric(2, &[0], &[1])),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            build(&RegionParams::asymmetric(2, &[1], &[], &[1])),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            build_douglas(&RegionParams::symmetric(2, &[1], &[1])),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn narrow_regions_hit_the_boundary_check() {
        let err = build(&RegionParams::symmetric(1, &[2, 1], &[1])).unwrap_err();
        assert!(matches!(err, Error::BoundaryIntersection { .. }));
    }

    #[test]
    fn middle_height_for_single_odd_layer() {
        let r = build_asymmetric(&RegionParams::asymmetric(3, &[3], &[3], &[3])).unwrap();
        let s = region_stats(&r);
        assert_eq!(s.h0, Some(1));
        assert_eq!(s.slope, Some(1));
    }

    #[test]
    fn json_round_trip() {
        let r = sym(2, &[2, 1], &[3]);
        let json = r.to_json().unwrap();
        assert_eq!(Region::from_json(&json).unwrap(), r);
        let tampered = json.replacen("\"black\"", "\"white\"", 1);
        assert!(Region::from_json(&tampered).is_err());
    }

    #[test]
    fn literal_slope_rule_breaks_integrality_for_even_layers() {
        let r = build_asymmetric(&RegionParams::asymmetric(3, &[2], &[2], &[2])).unwrap();
        let s = region_stats(&r);
        assert_eq!(s.slope_with(SlopeRule::ZeroForEven), (0, Some(1)));
        assert_eq!(s.slope_with(SlopeRule::Literal).1, None);
    }
}
