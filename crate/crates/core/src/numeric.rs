//! Exact rational scalars, vectors and matrices.
//!
//! Every quantity in the crate is a [`Rational`] in canonical reduced form
//! (positive denominator, coprime parts), so equality is structural. Rank,
//! inversion and null spaces go through a fraction-free (Bareiss) elimination
//! on integer-scaled rows.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, Index};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept reduced with a positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"p"`. Zero denominators and stray whitespace inside the
/// token are rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() || s.contains(char::is_whitespace) {
        return None;
    }
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p = BigInt::from_str(p).ok()?;
            let q = BigInt::from_str(q).ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
    }
}

/// Prints `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Result of comparing two vectors under the componentwise partial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentOrder {
    Eq,
    /// `>` in every coordinate.
    Gt,
    /// `>=` in every coordinate, distinct, but not `>` everywhere.
    Ge,
    Lt,
    Le,
    Incomparable,
}

/// Dense vector of exact rationals. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        QVector(vec![Rational::zero(); n])
    }

    pub fn ones(n: usize) -> Self {
        QVector(vec![Rational::one(); n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        QVector(values.iter().map(|&v| int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|x| x.is_zero() || x.is_one())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    fn check_dim(&self, other: &QVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn dot(&self, other: &QVector) -> Result<Rational> {
        self.check_dim(other)?;
        Ok(dot_unchecked(&self.0, &other.0))
    }

    pub fn add(&self, other: &QVector) -> Result<QVector> {
        self.check_dim(other)?;
        Ok(QVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &QVector) -> Result<QVector> {
        self.check_dim(other)?;
        Ok(QVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn compare(&self, other: &QVector) -> Result<ComponentOrder> {
        self.check_dim(other)?;
        let (mut gt, mut lt) = (0usize, 0usize);
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Greater => gt += 1,
                Ordering::Less => lt += 1,
                Ordering::Equal => {}
            }
        }
        let n = self.dim();
        Ok(match (gt, lt) {
            (0, 0) => ComponentOrder::Eq,
            (_, 0) if gt == n => ComponentOrder::Gt,
            (_, 0) => ComponentOrder::Ge,
            (0, _) if lt == n => ComponentOrder::Lt,
            (0, _) => ComponentOrder::Le,
            _ => ComponentOrder::Incomparable,
        })
    }

    /// `self >= other` componentwise.
    pub fn dominates(&self, other: &QVector) -> Result<bool> {
        Ok(matches!(
            self.compare(other)?,
            ComponentOrder::Eq | ComponentOrder::Ge | ComponentOrder::Gt
        ))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Option<QVector> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Option<Vec<_>>>()
            .map(QVector)
    }

    /// Smallest integer vector with the same direction (coprime entries).
    pub fn primitive_direction(&self) -> Vec<BigInt> {
        primitive_integer_row(&self.0)
    }
}

impl Deref for QVector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(v: Vec<Rational>) -> Self {
        QVector(v)
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Comma-separated rationals, optionally wrapped in parentheses:
/// `"1,1,0"`, `"(1/2,1/2,1/2)"`.
impl FromStr for QVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        if body.trim().is_empty() {
            return Err(Error::Format {
                line: 1,
                message: "empty vector".into(),
            });
        }
        body.split(',')
            .map(|tok| {
                parse_rational(tok).ok_or_else(|| Error::Format {
                    line: 1,
                    message: format!("bad rational {tok:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(QVector)
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items = Vec::<String>::deserialize(deserializer)?;
        QVector::from_strings(&items)
            .ok_or_else(|| serde::de::Error::custom("expected rational strings \"p/q\""))
    }
}

pub(crate) fn dot_unchecked(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Rectangular matrix of rationals, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: Vec<QVector>,
    cols: usize,
}

impl QMatrix {
    pub fn new(rows: Vec<QVector>) -> Result<Self> {
        let cols = rows.first().map_or(0, QVector::dim);
        Self::with_cols(rows, cols)
    }

    /// Like [`QMatrix::new`] but fixes the column count, so an empty matrix
    /// still knows its width.
    pub fn with_cols(rows: Vec<QVector>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::Dimension {
                expected: cols,
                found: bad.dim(),
            });
        }
        Ok(QMatrix { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: (0..n).map(|i| QVector::unit(n, i)).collect(),
            cols: n,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn push_row(&mut self, row: QVector) -> Result<()> {
        if row.dim() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: row.dim(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// Sub-matrix formed by the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> QMatrix {
        QMatrix {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: self.cols,
        }
    }

    pub fn transpose(&self) -> QMatrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        QMatrix {
            rows,
            cols: self.rows.len(),
        }
    }

    pub fn mul_vec(&self, v: &QVector) -> Result<QVector> {
        if v.dim() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: v.dim(),
            });
        }
        Ok(self.rows.iter().map(|r| dot_unchecked(r, v)).collect())
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Exact inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        let aug: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = primitive_scaling(r);
                row.extend((0..n).map(|j| BigInt::from((i == j) as u8)));
                row
            })
            .collect();
        // each row was scaled by its own factor; undo that on the right block
        let scales: Vec<Rational> = self.rows.iter().map(|r| row_scale_factor(r)).collect();
        let ech = bareiss(aug, n, true);
        if ech.pivots.len() < n {
            return None;
        }
        let d = Rational::from_integer(ech.last_pivot.clone());
        // left block is d * P where P is a permutation of the identity
        let mut inv = vec![QVector::zeros(n); n];
        for (r, &pc) in ech.pivots.iter().enumerate() {
            let row: QVector = ech.rows[r][n..]
                .iter()
                .enumerate()
                .map(|(j, x)| Rational::from_integer(x.clone()) * &scales[j] / &d)
                .collect();
            inv[pc] = row;
        }
        Some(QMatrix { rows: inv, cols: n })
    }

    /// Basis of `{x : M x = 0}`, as integer-valued rational vectors.
    pub fn nullspace(&self) -> Vec<QVector> {
        let cols = self.cols;
        let rows: Vec<Vec<BigInt>> = self.rows.iter().map(|r| primitive_scaling(r)).collect();
        let ech = bareiss(rows, cols, true);
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; cols];
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let d = &ech.last_pivot;
        (0..cols)
            .filter(|&f| pivot_set[f].is_none())
            .map(|f| {
                let mut x = vec![Rational::zero(); cols];
                x[f] = Rational::from_integer(d.clone());
                for (r, &pc) in ech.pivots.iter().enumerate() {
                    x[pc] = -Rational::from_integer(ech.rows[r][f].clone());
                }
                QVector(x)
            })
            .collect()
    }
}

impl Index<usize> for QMatrix {
    type Output = QVector;
    fn index(&self, i: usize) -> &QVector {
        &self.rows[i]
    }
}

/// Rank over the rationals by fraction-free elimination. An empty matrix has rank 0.
pub fn rank(m: &QMatrix) -> usize {
    let rows: Vec<Vec<BigInt>> = m.rows.iter().map(|r| primitive_scaling(r)).collect();
    bareiss(rows, m.cols, false).pivots.len()
}

pub fn rank_of_rows(rows: &[&QVector], cols: usize) -> usize {
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive_scaling(r)).collect();
    bareiss(rows, cols, false).pivots.len()
}

pub(crate) struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    /// pivot column of each leading row, in row order
    pub pivots: Vec<usize>,
    pub last_pivot: BigInt,
}

/// Fraction-free elimination restricted to pivots in the first `pivot_cols`
/// columns. With `jordan`, entries above each pivot are cleared too and all
/// pivot entries end up equal to `last_pivot`.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>, pivot_cols: usize, jordan: bool) -> Echelon {
    let nrows = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..pivot_cols.min(width) {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let pivot = a[r][col].clone();
        let (head, tail) = a.split_at_mut(r);
        let (prow, below) = tail.split_first_mut().expect("pivot row");
        let above: &mut [Vec<BigInt>] = if jordan { head } else { &mut [] };
        for row in below.iter_mut().chain(above.iter_mut()) {
            let factor = row[col].clone();
            for j in 0..width {
                if j == col {
                    continue;
                }
                let num = &pivot * &row[j] - &factor * &prow[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "bareiss division must be exact");
                row[j] = q;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(col);
        r += 1;
    }
    if jordan {
        for (i, &c) in pivots.iter().enumerate() {
            debug_assert_eq!(a[i][c], prev, "gauss-jordan pivots must coincide");
        }
    }
    Echelon {
        rows: a,
        pivots,
        last_pivot: prev,
    }
}

/// Lowest common multiple of the denominators of `row`.
fn row_scale_factor(row: &[Rational]) -> Rational {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    Rational::from_integer(l)
}

/// `row` multiplied by the lcm of its denominators (integer, not reduced by gcd).
fn primitive_scaling(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

/// Integer vector with coprime entries positively proportional to `row`.
pub fn primitive_integer_row(row: &[Rational]) -> Vec<BigInt> {
    let mut v = primitive_scaling(row);
    normalize_integer_row(&mut v);
    v
}

/// Divides an integer vector by the gcd of its entries (no-op on zero vectors).
pub fn normalize_integer_row(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

pub fn to_rational_vector(v: &[BigInt]) -> QVector {
    v.iter().cloned().map(Rational::from_integer).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::new(rows.iter().map(|r| QVector::from_ints(r)).collect()).unwrap()
    }

    /// Plain Gaussian elimination over the rationals, used as the rank oracle.
    fn naive_rank(m: &QMatrix) -> usize {
        let mut a: Vec<Vec<Rational>> = m.rows().iter().map(|r| r.to_vec()).collect();
        let mut r = 0;
        for c in 0..m.ncols() {
            if let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) {
                a.swap(p, r);
                for i in 0..a.len() {
                    if i != r && !a[i][c].is_zero() {
                        let f = &a[i][c] / &a[r][c];
                        let pivot = a[r].clone();
                        for (x, p) in a[i].iter_mut().zip(&pivot) {
                            *x -= &f * p;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(rank(&m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]])), 3);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&QMatrix::with_cols(vec![], 4).unwrap()), 0);
        assert_eq!(rank(&m(&[&[0, 0, 1], &[0, 0, 2], &[0, 1, 0]])), 2);
    }

    #[test]
    fn dot_examples() {
        let a = QVector::from_ints(&[1, 1, 0]);
        let b = QVector::from_ints(&[0, 1, 1]);
        assert_eq!(a.dot(&b).unwrap(), int(1));
        let half = QVector::new(vec![ratio(1, 2); 3]);
        assert_eq!(half.dot(&QVector::ones(3)).unwrap(), ratio(3, 2));
        assert_eq!(a.dot(&QVector::zeros(3)).unwrap(), int(0));
        assert!(matches!(
            a.dot(&QVector::zeros(2)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn componentwise_order() {
        let v = |x: &[i64]| QVector::from_ints(x);
        assert_eq!(
            v(&[1, 1, 0]).compare(&v(&[1, 1, 0])).unwrap(),
            ComponentOrder::Eq
        );
        assert_eq!(
            v(&[1, 1, 1]).compare(&v(&[1, 1, 0])).unwrap(),
            ComponentOrder::Ge
        );
        assert_eq!(
            v(&[2, 2, 1]).compare(&v(&[1, 1, 0])).unwrap(),
            ComponentOrder::Gt
        );
        assert_eq!(
            v(&[1, 1, 0]).compare(&v(&[1, 1, 1])).unwrap(),
            ComponentOrder::Le
        );
        assert_eq!(v(&[0, 0]).compare(&v(&[1, 1])).unwrap(), ComponentOrder::Lt);
        assert_eq!(
            v(&[1, 0, 1]).compare(&v(&[0, 1, 1])).unwrap(),
            ComponentOrder::Incomparable
        );
        assert!(v(&[1]).compare(&v(&[1, 2])).is_err());
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(format_rational(&ratio(2, 4)), "1/2");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-3, 6)), "-1/2");
        assert_eq!(parse_rational("-1/2"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("6/4"), Some(ratio(3, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1 /2"), None);
        assert_eq!(parse_rational("x"), None);
        let v: QVector = "(1/2,1/2,1/2)".parse().unwrap();
        assert_eq!(v.to_string(), "(1/2,1/2,1/2)");
        let w: QVector = "1,1,0".parse().unwrap();
        assert_eq!(w, QVector::from_ints(&[1, 1, 0]));
    }

    #[test]
    fn inverse_and_nullspace() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        let inv = a.inverse().unwrap();
        for i in 0..3 {
            let col: QVector = (0..3).map(|r| inv[r][i].clone()).collect();
            assert_eq!(a.mul_vec(&col).unwrap(), QVector::unit(3, i));
        }
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let ns = m(&[&[1, 2, 3]]).nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m(&[&[1, 2, 3]]).mul_vec(v).unwrap().is_zero());
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(small_rational(), c), r).prop_map(
                |rows| QMatrix::new(rows.into_iter().map(QVector::new).collect()).unwrap(),
            )
        })
    }

    proptest! {
        #[test]
        fn arithmetic_is_exact(a in small_rational(), b in small_rational()) {
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a);
            }
        }

        #[test]
        fn rational_text_round_trips(a in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&a)), Some(a));
        }

        #[test]
        fn rank_matches_naive_and_transpose(mat in small_matrix()) {
            let r = rank(&mat);
            prop_assert_eq!(r, naive_rank(&mat));
            prop_assert_eq!(r, rank(&mat.transpose()));
            prop_assert!(r <= mat.nrows().min(mat.ncols()));
        }

        #[test]
        fn rank_invariant_under_row_ops(mat in small_matrix(), s in small_rational(), k in 0usize..5) {
            let r = rank(&mat);
            let mut rows = mat.rows().to_vec();
            rows.reverse();
            prop_assert_eq!(rank(&QMatrix::new(rows.clone()).unwrap()), r);
            if !s.is_zero() {
                let k = k % rows.len();
                rows[k] = rows[k].scale(&s);
                prop_assert_eq!(rank(&QMatrix::new(rows).unwrap()), r);
            }
        }

        #[test]
        fn inverse_is_exact(mat in small_matrix()) {
            if mat.nrows() == mat.ncols() {
                match mat.inverse() {
                    Some(inv) => {
                        for i in 0..mat.ncols() {
                            let col: QVector = (0..mat.nrows()).map(|r| inv[r][i].clone()).collect();
                            prop_assert_eq!(mat.mul_vec(&col).unwrap(), QVector::unit(mat.ncols(), i));
                        }
                    }
                    None => prop_assert!(rank(&mat) < mat.ncols()),
                }
            }
        }

        #[test]
        fn nullspace_dimension(mat in small_matrix()) {
            let ns = mat.nullspace();
            prop_assert_eq!(ns.len() + rank(&mat), mat.ncols());
            for v in &ns {
                prop_assert!(mat.mul_vec(v).unwrap().is_zero());
            }
            if !ns.is_empty() {
                let basis = QMatrix::new(ns.clone()).unwrap();
                prop_assert_eq!(rank(&basis), ns.len());
            }
        }
    }
}
