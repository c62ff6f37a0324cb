//! Binary covering matrices and the four polyhedra built from them:
//!
//! * `Q(A)    = {x : A x >= 1, x >= 0}`, the linear relaxation;
//! * `Qbar(A) = Q(A) ∩ [0,1]^n`;
//! * `Q*(A)`, the convex hull of the non-negative integer covers (the dominant
//!   of the covering polytope), generated by the minimal covers plus the
//!   non-negative orthant;
//! * `Qbar*(A)`, the convex hull of the binary covers.
//!
//! Also the lifting map `lift(I, x)`, which sets the coordinates in `I` to one.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{QVector, Rational};
use crate::polyhedron::{v_to_h, HRep, Representation, VRep};

/// Largest column count accepted by cover enumeration.
pub const MAX_COVER_COLUMNS: usize = 20;

/// Validated `m x n` 0/1 matrix with no zero rows and no duplicate rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoveringMatrix {
    n: usize,
    rows: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ParseWarning {
    /// 1-based row numbers in the input.
    DuplicateRow { row: usize, duplicate_of: usize },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::DuplicateRow { row, duplicate_of } => {
                write!(f, "row {row} duplicates row {duplicate_of} and was dropped")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedMatrix {
    pub matrix: CoveringMatrix,
    pub warnings: Vec<ParseWarning>,
}

impl CoveringMatrix {
    /// Validates and deduplicates rows (first occurrence wins).
    #[allow(clippy::new_ret_no_self)]
    pub fn new(n: usize, rows: Vec<Vec<bool>>) -> Result<ParsedMatrix> {
        if n == 0 {
            return Err(Error::Format {
                line: 1,
                message: "matrix needs at least one column".into(),
            });
        }
        let mut kept: Vec<Vec<bool>> = Vec::new();
        let mut first_seen: Vec<usize> = Vec::new();
        let mut warnings = Vec::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            if !row.iter().any(|&b| b) {
                return Err(Error::InfeasibleRow(i + 1));
            }
            match kept.iter().position(|k| *k == row) {
                Some(j) => warnings.push(ParseWarning::DuplicateRow {
                    row: i + 1,
                    duplicate_of: first_seen[j],
                }),
                None => {
                    kept.push(row);
                    first_seen.push(i + 1);
                }
            }
        }
        Ok(ParsedMatrix {
            matrix: CoveringMatrix { n, rows: kept },
            warnings,
        })
    }

    /// Convenience constructor from 0/1 integers; panics on invalid input.
    pub fn from_rows(rows: &[&[u8]]) -> CoveringMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&b| b == 1).collect())
            .collect();
        CoveringMatrix::new(n, rows)
            .expect("valid covering matrix")
            .matrix
    }

    /// The 3x3 circulant with rows 110, 011, 101.
    pub fn circulant3() -> CoveringMatrix {
        CoveringMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn row_support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| j)
    }

    /// Whether the 0/1 vector given by its support covers every row.
    pub fn covers(&self, support: &[bool]) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().zip(support).any(|(&a, &s)| a && s))
    }

    /// Rows rendered as `"110"`-style strings.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }

    /// Text form accepted by [`parse_matrix`].
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.m(), self.n);
        for r in &self.rows {
            let line: Vec<&str> = r.iter().map(|&b| if b { "1" } else { "0" }).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for CoveringMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.row_strings().join("/"))
    }
}

/// Parses the matrix text format: a header line `"m n"`, then `m` lines of
/// `n` whitespace-separated 0/1 tokens. Lines starting with `#` and blank
/// lines are ignored.
pub fn parse_matrix(text: &str) -> Result<ParsedMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Format {
        line: 1,
        message: "missing header".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Format {
            line: hline,
            message: format!("bad header {header:?}"),
        })?;
    let [m, n] = dims[..] else {
        return Err(Error::Format {
            line: hline,
            message: "header must be \"m n\"".into(),
        });
    };
    let mut rows = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if rows.len() == m {
            return Err(Error::Format {
                line: lineno,
                message: format!("more than {m} rows"),
            });
        }
        let row = line
            .split_whitespace()
            .map(|t| match t {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::Format {
                    line: lineno,
                    message: format!("non-binary entry {other:?}"),
                }),
            })
            .collect::<Result<Vec<bool>>>()?;
        if row.len() != n {
            return Err(Error::Format {
                line: lineno,
                message: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(Error::Format {
            line: hline,
            message: format!("expected {m} rows, found {}", rows.len()),
        });
    }
    CoveringMatrix::new(n, rows)
}

impl FromStr for CoveringMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_matrix(s).map(|p| p.matrix)
    }
}

/// The four covering polyhedra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyhedronKind {
    /// `{x : A x >= 1, x >= 0}`
    Q,
    /// `Q(A) ∩ [0,1]^n`
    QBar,
    /// integer hull of `Q(A)`
    QStar,
    /// binary hull: convex hull of the 0/1 covers
    QStarBar,
}

impl PolyhedronKind {
    pub const ALL: [PolyhedronKind; 4] = [
        PolyhedronKind::Q,
        PolyhedronKind::QBar,
        PolyhedronKind::QStar,
        PolyhedronKind::QStarBar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolyhedronKind::Q => "q",
            PolyhedronKind::QBar => "qbar",
            PolyhedronKind::QStar => "qstar",
            PolyhedronKind::QStarBar => "qstarbar",
        }
    }
}

impl FromStr for PolyhedronKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolyhedronKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Format {
                line: 1,
                message: format!("unknown polyhedron kind {s:?}"),
            })
    }
}

impl fmt::Display for PolyhedronKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn binary_vector(support: &[bool]) -> QVector {
    support
        .iter()
        .map(|&b| if b { Rational::one() } else { Rational::zero() })
        .collect()
}

/// All inclusion-minimal binary covers in lexicographic order.
///
/// Depth-first search over column sets in increasing index order. A branch is
/// cut as soon as some chosen column no longer covers a row on its own (it
/// can never become essential again), or when an uncovered row has no
/// column left to choose from.
pub fn minimal_covers(a: &CoveringMatrix) -> Result<Vec<QVector>> {
    let n = a.n();
    if n > MAX_COVER_COLUMNS {
        return Err(Error::CapExceeded {
            what: "columns",
            value: n,
            cap: MAX_COVER_COLUMNS,
        });
    }
    let m = a.m();
    // for each row, the last column index that covers it
    let last_col: Vec<usize> = (0..m)
        .map(|i| a.row_support(i).last().expect("no zero rows"))
        .collect();

    struct Search<'a> {
        a: &'a CoveringMatrix,
        last_col: Vec<usize>,
        chosen: Vec<bool>,
        cover_count: Vec<u32>,
        out: Vec<Vec<bool>>,
    }

    impl Search<'_> {
        fn all_essential(&self) -> bool {
            self.chosen
                .iter()
                .enumerate()
                .filter(|(_, &c)| c)
                .all(|(j, _)| {
                    (0..self.a.m()).any(|i| self.a.rows()[i][j] && self.cover_count[i] == 1)
                })
        }

        fn toggle(&mut self, j: usize, on: bool) {
            self.chosen[j] = on;
            for i in 0..self.a.m() {
                if self.a.rows()[i][j] {
                    if on {
                        self.cover_count[i] += 1;
                    } else {
                        self.cover_count[i] -= 1;
                    }
                }
            }
        }

        fn go(&mut self, next: usize) {
            if !self.all_essential() {
                return;
            }
            if self.cover_count.iter().all(|&c| c > 0) {
                self.out.push(self.chosen.clone());
                return;
            }
            let n = self.a.n();
            let dead = (0..self.a.m())
                .any(|i| self.cover_count[i] == 0 && (next >= n || self.last_col[i] < next));
            if dead {
                return;
            }
            for j in next..n {
                self.toggle(j, true);
                self.go(j + 1);
                self.toggle(j, false);
            }
        }
    }

    let mut s = Search {
        a,
        last_col,
        chosen: vec![false; n],
        cover_count: vec![0; m],
        out: Vec::new(),
    };
    s.go(0);
    let mut covers: Vec<QVector> = s.out.iter().map(|c| binary_vector(c)).collect();
    covers.sort();
    Ok(covers)
}

/// A subset `I` of coordinates (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LiftMask(BTreeSet<usize>);

impl LiftMask {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        LiftMask(indices.into_iter().collect())
    }

    pub fn empty() -> Self {
        LiftMask::default()
    }

    /// Mask from the low `n` bits of `bits`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        LiftMask((0..n).filter(|&i| bits >> i & 1 == 1).collect())
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    /// Every subset of `{0, .., n-1}`.
    pub fn all(n: usize) -> impl Iterator<Item = LiftMask> {
        (0..1u64 << n).map(move |bits| LiftMask::from_bits(bits, n))
    }
}

/// Sets the coordinates in `mask` to one and copies the others.
pub fn lift(mask: &LiftMask, x: &QVector) -> Result<QVector> {
    if let Some(bad) = mask.indices().find(|&i| i >= x.dim()) {
        return Err(Error::Dimension {
            expected: x.dim(),
            found: bad + 1,
        });
    }
    Ok(x.iter()
        .enumerate()
        .map(|(i, v)| {
            if mask.contains(i) {
                Rational::one()
            } else {
                v.clone()
            }
        })
        .collect())
}

/// `{lift(I, z) : I ⊆ [n], z in vertices}`, sorted and deduplicated. Inputs
/// must be binary.
pub fn lift_closure(vertices: &[QVector]) -> Result<Vec<QVector>> {
    let Some(first) = vertices.first() else {
        return Ok(Vec::new());
    };
    let n = first.dim();
    if n > MAX_COVER_COLUMNS {
        return Err(Error::CapExceeded {
            what: "columns",
            value: n,
            cap: MAX_COVER_COLUMNS,
        });
    }
    if let Some(bad) = vertices.iter().find(|v| !v.is_binary()) {
        return Err(Error::NonBinaryVertex {
            point: bad.to_string(),
        });
    }
    let mut out = BTreeSet::new();
    for z in vertices {
        if z.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: z.dim(),
            });
        }
        for mask in LiftMask::all(n) {
            out.insert(lift(&mask, z)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// `{x : A x >= 1, x >= 0}`: covering rows first, then the non-negativity rows.
pub fn relaxation(a: &CoveringMatrix) -> HRep {
    let n = a.n();
    let cover = a.rows().iter().map(|r| (binary_vector(r), Rational::one()));
    let nonneg = (0..n).map(|i| (QVector::unit(n, i), Rational::zero()));
    HRep::from_pairs(n, cover.chain(nonneg)).expect("rows have n columns")
}

/// Minimal covers plus the canonical basis as rays.
pub fn dominant(a: &CoveringMatrix) -> Result<VRep> {
    VRep::up_monotone_hull(a.n(), minimal_covers(a)?)
}

/// Convex hull of all binary covers, as the lift closure of the minimal covers.
pub fn binary_hull(a: &CoveringMatrix) -> Result<VRep> {
    VRep::new(a.n(), lift_closure(&minimal_covers(a)?)?, Vec::new())
}

/// `Q*(A) ∩ [0,1]^n` in inequality form: the facets of the dominant, truncated.
pub fn dominant_truncated(a: &CoveringMatrix) -> Result<HRep> {
    Ok(v_to_h(&dominant(a)?)?.truncate_hypercube())
}

/// The polyhedron of the given kind in its natural representation:
/// `Q`, `QBar` as inequalities; `QStar`, `QStarBar` as generators.
pub fn build(a: &CoveringMatrix, kind: PolyhedronKind) -> Result<Representation> {
    Ok(match kind {
        PolyhedronKind::Q => Representation::H(relaxation(a)),
        PolyhedronKind::QBar => Representation::H(relaxation(a).truncate_hypercube()),
        PolyhedronKind::QStar => Representation::V(dominant(a)?),
        PolyhedronKind::QStarBar => Representation::V(binary_hull(a)?),
    })
}
