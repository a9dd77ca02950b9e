//! Constructors for the named graph families and the two gluing operators.
//!
//! Aztec-rectangle-like graphs are built on a board: cell `(row, col)` with
//! `row + col` odd, edges to `(row + 1, col ± 1)`.  A vertex sits at
//! `(x, y) = (col, row)`; even rows are class `V1`.  Honeycomb graphs use
//! the strip coordinates of [`crate::lattice`]: `x` is the cell offset and
//! `y` counts triangle strips from the top.
//!
//! Every constructor exports the boundary lists `top` and `bottom`, ordered
//! left to right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MatchGraph, Side, VertexId, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArVariant {
    Plain,
    Baseless,
    Combed,
    CombedBaseless,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trim {
    /// Leftmost column removed.
    LR,
    /// Rightmost column removed.
    RR,
    /// Leftmost column and top row removed.
    TLR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LKind {
    L,
    Lbar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CombSide {
    Bottom,
    Top,
}

/// A family member described by name and integer parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    Ar {
        m: u32,
        n: u32,
        variant: ArVariant,
    },
    Trimmed {
        m: u32,
        n: u32,
        kind: Trim,
    },
    LShaped {
        a: u32,
        b: u32,
        c: u32,
        d: u32,
        kind: LKind,
    },
    HalfHoneycomb {
        a: u32,
        b: u32,
        c: u32,
    },
    HexagonDual {
        a: u32,
        b: u32,
        c: u32,
    },
    Gamma {
        a: u32,
        b: u32,
        c: u32,
        d: u32,
        e: u32,
    },
    Grid {
        rows: u32,
        cols: u32,
    },
}

impl FamilySpec {
    /// Parses a family name and comma-separated parameters, e.g.
    /// `("gamma", &[3, 7, 3, 3, 4])`.
    pub fn parse(family: &str, params: &[u32]) -> Result<FamilySpec> {
        let want = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!(
                    "family `{family}` takes {k} parameters, got {}",
                    params.len()
                )))
            }
        };
        let p = params;
        let spec = match family.to_ascii_lowercase().as_str() {
            "ar" | "ar-baseless" | "ar-combed" | "ar-combed-baseless" => {
                want(2)?;
                let variant = match family.to_ascii_lowercase().as_str() {
                    "ar" => ArVariant::Plain,
                    "ar-baseless" => ArVariant::Baseless,
                    "ar-combed" => ArVariant::Combed,
                    _ => ArVariant::CombedBaseless,
                };
                FamilySpec::Ar {
                    m: p[0],
                    n: p[1],
                    variant,
                }
            }
            "lr" | "rr" | "tlr" => {
                want(2)?;
                let kind = match family.to_ascii_lowercase().as_str() {
                    "lr" => Trim::LR,
                    "rr" => Trim::RR,
                    _ => Trim::TLR,
                };
                FamilySpec::Trimmed {
                    m: p[0],
                    n: p[1],
                    kind,
                }
            }
            "l" | "lbar" => {
                want(4)?;
                let kind = if family.eq_ignore_ascii_case("l") {
                    LKind::L
                } else {
                    LKind::Lbar
                };
                FamilySpec::LShaped {
                    a: p[0],
                    b: p[1],
                    c: p[2],
                    d: p[3],
                    kind,
                }
            }
            "halfhoneycomb" | "half-honeycomb" => {
                want(3)?;
                FamilySpec::HalfHoneycomb {
                    a: p[0],
                    b: p[1],
                    c: p[2],
                }
            }
            "hexagondual" | "hexagon-dual" | "hexagon" => {
                want(3)?;
                FamilySpec::HexagonDual {
                    a: p[0],
                    b: p[1],
                    c: p[2],
                }
            }
            "gamma" => {
                want(5)?;
                FamilySpec::Gamma {
                    a: p[0],
                    b: p[1],
                    c: p[2],
                    d: p[3],
                    e: p[4],
                }
            }
            "grid" => {
                want(2)?;
                FamilySpec::Grid {
                    rows: p[0],
                    cols: p[1],
                }
            }
            other => return Err(Error::InvalidParams(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }

    pub fn build(&self) -> Result<MatchGraph> {
        match *self {
            FamilySpec::Ar { m, n, variant } => aztec_rectangle(m, n, variant),
            FamilySpec::Trimmed { m, n, kind } => side_trimmed(m, n, kind),
            FamilySpec::LShaped { a, b, c, d, kind } => l_shaped(a, b, c, d, kind),
            FamilySpec::HalfHoneycomb { a, b, c } => half_honeycomb(a, b, c),
            FamilySpec::HexagonDual { a, b, c } => hexagon_dual(a, b, c),
            FamilySpec::Gamma { a, b, c, d, e } => gamma(a, b, c, d, e),
            FamilySpec::Grid { rows, cols } => grid(rows, cols),
        }
    }

    /// Builds the graph and replaces every weight by `w`.
    pub fn build_weighted(&self, w: &Weight) -> Result<MatchGraph> {
        self.build()?.with_uniform_weight(w)
    }
}

impl fmt::Display for Trim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Trim::LR => "LR",
            Trim::RR => "RR",
            Trim::TLR => "TLR",
        })
    }
}

impl FromStr for ArVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(ArVariant::Plain),
            "baseless" => Ok(ArVariant::Baseless),
            "combed" => Ok(ArVariant::Combed),
            "combed-baseless" | "combed_baseless" => Ok(ArVariant::CombedBaseless),
            other => Err(Error::InvalidParams(format!(
                "unknown Aztec rectangle variant `{other}`"
            ))),
        }
    }
}

fn positive(name: &str, v: u32) -> Result<i64> {
    if v == 0 {
        Err(Error::InvalidParams(format!(
            "parameter {name} must be positive"
        )))
    } else {
        Ok(v as i64)
    }
}

pub(crate) type Board = BTreeSet<(i64, i64)>;

/// Cells of the `(2m+1) x (2n+1)` board (or its first `2m` rows when
/// `baseless`) that carry vertices.  `n` may be zero.
pub(crate) fn ar_board(m: i64, n: i64, baseless: bool) -> Board {
    let rows = if baseless { 2 * m } else { 2 * m + 1 };
    (0..rows)
        .flat_map(|i| (0..=2 * n).map(move |j| (i, j)))
        .filter(|(i, j)| (i + j) % 2 == 1)
        .collect()
}

/// Builds the graph of a board.  Vertex ids follow `(row, col)` order.
pub(crate) fn board_graph(cells: &Board) -> MatchGraph {
    let mut g = MatchGraph::new();
    let mut ids = BTreeMap::new();
    for &(r, c) in cells {
        let class = if r.rem_euclid(2) == 0 {
            Side::V1
        } else {
            Side::V2
        };
        ids.insert((r, c), g.add_vertex(Some(class), Some((c, r))));
    }
    for (&(r, c), &u) in &ids {
        for dc in [-1, 1] {
            if let Some(&v) = ids.get(&(r + 1, c + dc)) {
                g.add_unit_edge(u, v).expect("board edges are valid");
            }
        }
    }
    if let (Some(&(top, _)), Some(&(bottom, _))) = (cells.first(), cells.last()) {
        let row = |k: i64| {
            ids.iter()
                .filter(|((r, _), _)| *r == k)
                .map(|(_, &v)| v)
                .collect::<Vec<_>>()
        };
        g.set_boundary("top", row(top)).expect("valid list");
        g.set_boundary("bottom", row(bottom)).expect("valid list");
    }
    g
}

/// Aztec rectangle `AR_{m,n}` and its baseless and combed variants.
///
/// The baseless variant `AR_{m-1/2,n}` drops the last board row; its bottom
/// row has `n + 1` vertices.  Combed variants hang a pendant edge below each
/// bottom vertex; their `bottom` list is the list of pendant tips and
/// `bottom_base` keeps the original bottom row.
pub fn aztec_rectangle(m: u32, n: u32, variant: ArVariant) -> Result<MatchGraph> {
    let (m, n) = (positive("m", m)?, positive("n", n)?);
    let baseless = matches!(variant, ArVariant::Baseless | ArVariant::CombedBaseless);
    let g = board_graph(&ar_board(m, n, baseless));
    match variant {
        ArVariant::Combed | ArVariant::CombedBaseless => comb(&g, "bottom", CombSide::Bottom),
        _ => Ok(g),
    }
}

/// `LR_{m,n}`, `RR_{m,n}` and `TLR_{m,n}`.
pub fn side_trimmed(m: u32, n: u32, kind: Trim) -> Result<MatchGraph> {
    let (m, n) = (positive("m", m)?, positive("n", n)?);
    Ok(board_graph(&trimmed_board(m, n, kind)))
}

pub(crate) fn trimmed_board(m: i64, n: i64, kind: Trim) -> Board {
    ar_board(m, n, false)
        .into_iter()
        .filter(|&(i, j)| match kind {
            Trim::LR => j != 0,
            Trim::RR => j != 2 * n,
            Trim::TLR => j != 0 && i != 0,
        })
        .collect()
}

/// Board of `L^{a,b}_{c,d}` or `L̄^{a,b}_{c,d}`; `b` may be zero.  Returns
/// the cells and the index of the bottom row.
pub(crate) fn l_board(a: i64, b: i64, c: i64, d: i64, kind: LKind) -> (Board, i64) {
    let mut top = ar_board(a, b, true);
    let glue = 2 * a - 1;
    match kind {
        LKind::L => {
            if b + 1 > d {
                top.retain(|&(i, j)| !(i == glue && j > 2 * d - 2));
            }
            let lower = trimmed_board(c, d, Trim::LR)
                .into_iter()
                .map(|(i, j)| (i + glue, j - 1));
            top.extend(lower);
            (top, glue + 2 * c)
        }
        LKind::Lbar => {
            if b + 1 > d {
                top.retain(|&(i, j)| !(i == glue && j < 2 * (b + 1 - d)));
            }
            let lower = trimmed_board(c, d, Trim::TLR)
                .into_iter()
                .map(|(i, j)| (i + glue - 1, j + 2 * b - 2 * d));
            top.extend(lower);
            (top, glue - 1 + 2 * c)
        }
    }
}

/// L-shaped graphs.  `L` glues `LR_{c,d}` below the baseless rectangle
/// `AR_{a-1/2,b}` aligned on the left; `L̄` glues `TLR_{c,d}` aligned on the
/// right.  When `b + 1 > d` the unmatched bottom vertices of the rectangle
/// are removed first (rightmost ones for `L`, leftmost ones for `L̄`).
pub fn l_shaped(a: u32, b: u32, c: u32, d: u32, kind: LKind) -> Result<MatchGraph> {
    let (a, b, c, d) = (
        positive("a", a)?,
        positive("b", b)?,
        positive("c", c)?,
        positive("d", d)?,
    );
    Ok(board_graph(&l_board(a, b, c, d, kind).0))
}

/// Cells of a honeycomb strip model: rows `0..=rows`, every row drawn, the
/// left boundary moving by `left_step(band)` and the right one by
/// `right_step(band)` across each band.  Strips with index below
/// `first_strip` are dropped.
fn honeycomb(
    a: i64,
    rows: i64,
    left_step: impl Fn(i64) -> i64,
    right_step: impl Fn(i64) -> i64,
    first_row: i64,
) -> MatchGraph {
    let mut left = vec![0i64];
    let mut right = vec![2 * a];
    for r in 0..rows {
        left.push(left[r as usize] + left_step(r));
        right.push(right[r as usize] + right_step(r));
    }
    // strips: Low(r) for r < rows (white), Up(r) for r > 0 (black)
    let mut g = MatchGraph::new();
    let mut strips: Vec<Vec<(i64, VertexId)>> = Vec::new();
    let mut y = 0i64;
    for r in first_row..=rows {
        for low in [false, true] {
            if (low && r == rows) || (!low && (r == 0 || r == first_row)) {
                continue;
            }
            let class = if low { Side::V1 } else { Side::V2 };
            let (l, rt) = (left[r as usize], right[r as usize]);
            let strip = (l + 1..rt)
                .step_by(2)
                .map(|s| {
                    (
                        s - left[first_row as usize] - 1,
                        g.add_vertex(Some(class), Some((s - left[first_row as usize] - 1, y))),
                    )
                })
                .collect();
            strips.push(strip);
            y += 1;
        }
    }
    for k in 0..strips.len().saturating_sub(1) {
        let low_first = k % 2 == 0;
        for &(x, u) in &strips[k] {
            for &(x2, v) in &strips[k + 1] {
                let adjacent = if low_first {
                    (x2 - x).abs() == 1
                } else {
                    x2 == x
                };
                if adjacent {
                    g.add_unit_edge(u, v).expect("honeycomb edges are valid");
                }
            }
        }
    }
    let ids = |k: usize| strips[k].iter().map(|&(_, v)| v).collect::<Vec<_>>();
    g.set_boundary("top", ids(0)).expect("valid list");
    g.set_boundary("bottom", ids(strips.len() - 1))
        .expect("valid list");
    g
}

/// Honeycomb dual of the lozenge hexagon with sides `a, b, c, a, b, c`
/// (clockwise from the top).
pub fn hexagon_dual(a: u32, b: u32, c: u32) -> Result<MatchGraph> {
    let (a, b, c) = (positive("a", a)?, positive("b", b)?, positive("c", c)?);
    Ok(honeycomb(
        a,
        b + c,
        |r| if r < c { -1 } else { 1 },
        |r| if r < b { 1 } else { -1 },
        0,
    ))
}

/// `B_{a,b,c}`: the part of the honeycomb dual of the hexagon with sides
/// `a, 2b-c, c, a, 2b-c, c` on or below its horizontal axis.  The `top`
/// list has `a + c` vertices.
pub fn half_honeycomb(a: u32, b: u32, c: u32) -> Result<MatchGraph> {
    let (a, b, c) = (positive("a", a)?, positive("b", b)?, positive("c", c)?);
    if b < c {
        return Err(Error::InvalidParams(format!(
            "half honeycomb needs b >= c, got b={b}, c={c}"
        )));
    }
    let long = 2 * b - c;
    Ok(honeycomb(
        a,
        2 * b,
        |r| if r < c { -1 } else { 1 },
        |r| if r < long { 1 } else { -1 },
        b,
    ))
}

/// `Γ^{d,e}_{a,b,c}`: the baseless rectangle `AR_{d-1/2,e}` glued on top of
/// `B_{a,b,c}`, bottom labels `1..` matched with top labels `1..` from the
/// left.  If `B` has fewer top vertices than the rectangle has bottom
/// vertices, the surplus rectangle vertices are removed first.
pub fn gamma(a: u32, b: u32, c: u32, d: u32, e: u32) -> Result<MatchGraph> {
    let (dd, ee) = (positive("d", d)?, positive("e", e)?);
    let mut hb = half_honeycomb(a, b, c)?;
    let mut ar = board_graph(&ar_board(dd, ee, true));
    hb.translate(0, 2 * dd - 1);
    let top = hb.boundary("top")?.to_vec();
    let bottom = ar.boundary("bottom")?.to_vec();
    let k = top.len().min(bottom.len());
    for &v in &bottom[k..] {
        ar.remove_vertex(v);
    }
    hb.set_boundary("glue", top[..k].to_vec())?;
    ar.set_boundary("glue", bottom[..k].to_vec())?;
    let (mut g, _) = connected_sum_mapped(&ar, &hb, "glue", "glue")?;
    g.remove_boundary("glue");
    g.remove_boundary("glue'");
    let hb_bottom = g.boundary("bottom'")?.to_vec();
    g.remove_boundary("bottom'");
    g.remove_boundary("top'");
    g.set_boundary("bottom", hb_bottom)?;
    Ok(g)
}

/// The `rows x cols` square grid, whose perfect matchings are the domino
/// tilings of a `rows x cols` board.
pub fn grid(rows: u32, cols: u32) -> Result<MatchGraph> {
    let (rows, cols) = (positive("rows", rows)?, positive("cols", cols)?);
    let mut g = MatchGraph::new();
    let mut ids = BTreeMap::new();
    for r in 0..rows {
        for c in 0..cols {
            let class = if (r + c) % 2 == 0 { Side::V1 } else { Side::V2 };
            ids.insert((r, c), g.add_vertex(Some(class), Some((c, r))));
        }
    }
    for (&(r, c), &u) in &ids {
        for next in [(r + 1, c), (r, c + 1)] {
            if let Some(&v) = ids.get(&next) {
                g.add_unit_edge(u, v).expect("grid edges are valid");
            }
        }
    }
    let row = |k: i64| (0..cols).map(|c| ids[&(k, c)]).collect::<Vec<_>>();
    g.set_boundary("top", row(0))?;
    g.set_boundary("bottom", row(rows - 1))?;
    Ok(g)
}

/// Vertex correspondence produced by a connected sum.
#[derive(Clone, Debug, Default)]
pub struct SumMap {
    pub left: BTreeMap<VertexId, VertexId>,
    pub right: BTreeMap<VertexId, VertexId>,
}

/// `G # G'`: the disjoint union with `list'[i]` identified with `list[i]`.
pub fn connected_sum(
    g: &MatchGraph,
    h: &MatchGraph,
    list: &str,
    list_h: &str,
) -> Result<MatchGraph> {
    connected_sum_mapped(g, h, list, list_h).map(|(s, _)| s)
}

/// As [`connected_sum`], also returning where each vertex went.
///
/// Vertices of `g` keep their ids and positions; the other vertices of `h`
/// get fresh ids in their original order.  Boundary lists of `g` are kept;
/// those of `h` are carried over, with a `'` appended to names that clash.
/// Classes survive when both sides declare them and the identified
/// vertices can be made to agree (swapping the classes of `h` if needed).
pub fn connected_sum_mapped(
    g: &MatchGraph,
    h: &MatchGraph,
    list: &str,
    list_h: &str,
) -> Result<(MatchGraph, SumMap)> {
    let lg = g.boundary(list)?;
    let lh = h.boundary(list_h)?;
    if lg.len() != lh.len() {
        return Err(Error::LengthMismatch {
            left: lg.len(),
            right: lh.len(),
        });
    }
    let ident: BTreeMap<VertexId, VertexId> = lh.iter().copied().zip(lg.iter().copied()).collect();

    let both_declared = g.has_declared_classes() && h.has_declared_classes();
    let mut swap = false;
    let mut keep_classes = both_declared;
    if both_declared {
        if let Some((&vh, &vg)) = ident.iter().next() {
            swap = g.class(vg) != h.class(vh);
        }
        keep_classes = ident.iter().all(|(&vh, &vg)| {
            let c = h.class(vh).map(|c| if swap { c.other() } else { c });
            c == g.class(vg)
        });
    }

    let mut out = g.clone();
    if !keep_classes {
        out.clear_classes();
    }
    let mut map = SumMap {
        left: g.vertex_ids().map(|v| (v, v)).collect(),
        right: BTreeMap::new(),
    };
    for (id, vertex) in h.vertices() {
        if let Some(&target) = ident.get(&id) {
            map.right.insert(id, target);
        } else {
            let class = if keep_classes {
                vertex.class.map(|c| if swap { c.other() } else { c })
            } else {
                None
            };
            map.right.insert(id, out.add_vertex(class, vertex.pos));
        }
    }
    for (u, v, w) in h.edges() {
        let (a, b) = (map.right[&u], map.right[&v]);
        if out.has_edge(a, b) {
            return Err(Error::InvalidParams(format!(
                "connected sum would duplicate edge {a}-{b}"
            )));
        }
        out.add_edge(a, b, w.clone())?;
    }
    for (name, ids) in h.boundaries() {
        let mut name = name.clone();
        while out.boundaries().contains_key(&name) {
            name.push('\'');
        }
        out.set_boundary(name, ids.iter().map(|v| map.right[v]).collect())?;
    }
    Ok((out, map))
}

/// Hangs one pendant unit edge off every vertex of `list`.  The list is
/// replaced by the pendant tips (same order) and the original vertices are
/// kept under `<list>_base`.  Tips sit one unit below (or above) their base.
pub fn comb(g: &MatchGraph, list: &str, side: CombSide) -> Result<MatchGraph> {
    let base = g.boundary(list)?.to_vec();
    let mut out = g.clone();
    let dy = match side {
        CombSide::Bottom => 1,
        CombSide::Top => -1,
    };
    let mut tips = Vec::with_capacity(base.len());
    for &v in &base {
        let class = g.class(v).map(Side::other);
        let pos = g.pos(v).map(|(x, y)| (x, y + dy));
        let t = out.add_vertex(class, pos);
        out.add_edge(v, t, Weight::one())?;
        tips.push(t);
    }
    out.set_boundary(format!("{list}_base"), base)?;
    out.set_boundary(list, tips)?;
    Ok(out)
}

/// Removes the listed positions (1-based, left to right) from a boundary
/// list.  Used for dented graphs.
pub fn delete_labels(g: &MatchGraph, list: &str, labels: &[usize]) -> Result<MatchGraph> {
    let ids = g.boundary(list)?.to_vec();
    let mut out = g.clone();
    for &t in labels {
        if t == 0 || t > ids.len() {
            return Err(Error::InvalidLabels(format!(
                "label {t} outside 1..={}",
                ids.len()
            )));
        }
        out.remove_vertex(ids[t - 1]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_matchings, count_matchings_oracle};

    fn m(g: &MatchGraph) -> String {
        count_matchings(g).unwrap().to_string()
    }

    #[test]
    fn aztec_rectangle_sizes() {
        let g = aztec_rectangle(3, 4, ArVariant::Plain).unwrap();
        assert_eq!(g.vertex_count(), 4 * 4 + 3 * 5);
        assert_eq!(g.boundary("bottom").unwrap().len(), 4);
        let b = aztec_rectangle(3, 4, ArVariant::Baseless).unwrap();
        assert_eq!(b.boundary("bottom").unwrap().len(), 5);
        assert_eq!(m(&b), "0");
        let c = aztec_rectangle(3, 4, ArVariant::Combed).unwrap();
        assert_eq!(c.vertex_count(), 31 + 4);
        assert_eq!(c.boundary("bottom").unwrap().len(), 4);
        assert!(aztec_rectangle(0, 1, ArVariant::Plain).is_err());
    }

    #[test]
    fn aztec_diamonds() {
        for (n, v) in [(1u32, "2"), (2, "8"), (3, "64")] {
            assert_eq!(m(&aztec_rectangle(n, n, ArVariant::Plain).unwrap()), v);
        }
    }

    #[test]
    fn grids_count_domino_tilings() {
        assert_eq!(m(&grid(2, 2).unwrap()), "2");
        assert_eq!(m(&grid(2, 3).unwrap()), "3");
        assert_eq!(m(&grid(4, 4).unwrap()), "36");
        assert_eq!(m(&grid(3, 3).unwrap()), "0");
        assert_eq!(
            FamilySpec::parse("grid", &[2, 4]).unwrap(),
            FamilySpec::Grid { rows: 2, cols: 4 }
        );
    }

    #[test]
    fn trimmed_rectangles() {
        let rr = side_trimmed(1, 1, Trim::RR).unwrap();
        assert_eq!(rr.vertex_count(), 3);
        assert_eq!(
            count_matchings_oracle(&rr).unwrap(),
            count_matchings(&rr).unwrap()
        );
        let tlr = side_trimmed(1, 2, Trim::TLR).unwrap();
        let lr = side_trimmed(1, 2, Trim::LR).unwrap();
        assert_eq!(lr.vertex_count() - tlr.vertex_count(), 2);
        assert_eq!(lr.vertex_count(), 7 - 1);
    }

    #[test]
    fn l_shapes_match_figure_sizes() {
        let l = l_shaped(3, 3, 2, 6, LKind::L).unwrap();
        // AR_{5/2,3}: 3*3 + 3*4 = 21, LR_{2,6}: 3*6 + 2*7 - 2 = 30, glued along 4
        assert_eq!(l.vertex_count(), 21 + 30 - 4);
        assert_eq!(l.boundary("bottom").unwrap().len(), 6);
        let l2 = l_shaped(3, 5, 2, 4, LKind::L).unwrap();
        assert_eq!(l2.boundary("bottom").unwrap().len(), 4);
        let lb = l_shaped(4, 6, 2, 4, LKind::Lbar).unwrap();
        assert_eq!(lb.boundary("bottom").unwrap().len(), 4);
    }

    #[test]
    fn hexagons() {
        assert_eq!(m(&hexagon_dual(1, 1, 1).unwrap()), "2");
        assert_eq!(m(&hexagon_dual(2, 2, 2).unwrap()), "20");
        assert_eq!(m(&hexagon_dual(4, 1, 4).unwrap()), "70");
    }

    #[test]
    fn half_honeycomb_top_has_a_plus_c() {
        let hb = half_honeycomb(3, 7, 3).unwrap();
        assert_eq!(hb.boundary("top").unwrap().len(), 6);
        assert!(half_honeycomb(1, 1, 2).is_err());
    }

    #[test]
    fn consecutive_dents_leave_one_matching() {
        // sides (b, a, a) = (2, 2, 2): B_{2,2,2}, four top vertices
        let hb = half_honeycomb(2, 2, 2).unwrap();
        assert_eq!(m(&delete_labels(&hb, "top", &[1, 2]).unwrap()), "1");
        assert_eq!(m(&delete_labels(&hb, "top", &[2, 4]).unwrap()), "2");
    }

    #[test]
    fn gamma_balance() {
        for (a, b, c, d, e) in [(1, 1, 1, 1, 1), (2, 2, 1, 1, 1), (1, 2, 2, 2, 3)] {
            let g = gamma(a, b, c, d, e).unwrap();
            let classes = g.bipartition().unwrap();
            let v1 = classes.values().filter(|&&s| s == Side::V1).count();
            assert_eq!(
                2 * v1 == g.vertex_count(),
                e == c + d - 1,
                "{a} {b} {c} {d} {e}"
            );
        }
    }

    #[test]
    fn connected_sum_of_two_edges_is_a_path() {
        let mut k2 = MatchGraph::new();
        let a = k2.add_vertex(None, None);
        let b = k2.add_vertex(None, None);
        k2.add_unit_edge(a, b).unwrap();
        k2.set_boundary("end", vec![b]).unwrap();
        let mut other = k2.clone();
        other.set_boundary("end", vec![a]).unwrap();
        let p = connected_sum(&k2, &other, "end", "end").unwrap();
        assert_eq!(p.vertex_count(), 3);
        assert_eq!(m(&p), "0");
        let mut short = k2.clone();
        short.set_boundary("end", vec![]).unwrap();
        assert!(matches!(
            connected_sum(&k2, &short, "end", "end"),
            Err(Error::LengthMismatch { .. })
        ));
        let disjoint = connected_sum(&short, &short, "end", "end").unwrap();
        assert_eq!(disjoint.vertex_count(), 4);
        assert_eq!(m(&disjoint), "1");
    }

    #[test]
    fn comb_of_empty_list_is_identity() {
        let mut g = aztec_rectangle(1, 1, ArVariant::Plain).unwrap();
        g.set_boundary("none", vec![]).unwrap();
        let c = comb(&g, "none", CombSide::Top).unwrap();
        assert_eq!(c.vertex_count(), g.vertex_count());
        assert_eq!(c.edge_count(), g.edge_count());
    }

    #[test]
    fn family_spec_parsing() {
        let s = FamilySpec::parse("gamma", &[3, 7, 3, 3, 4]).unwrap();
        assert!(matches!(s, FamilySpec::Gamma { e: 4, .. }));
        assert!(FamilySpec::parse("gamma", &[1, 2]).is_err());
        assert!(FamilySpec::parse("nope", &[]).is_err());
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<FamilySpec>(&json).unwrap(), s);
    }
}
