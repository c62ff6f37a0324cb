//! Rational polyhedra in inequality form ([`HRep`], `{x : A x >= b}`) and
//! generator form ([`VRep`], `conv(V) + cone(R)`), exact conversion between
//! the two, truncation by the unit hypercube, and rank-based adjacency.

mod dd;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, Constraint, Relation};
use crate::numeric::{
    dot_unchecked, normalize_integer_row, primitive_integer_row, rank, rank_of_rows,
    to_rational_vector, QMatrix, QVector, Rational,
};

/// `{x : rows * x >= rhs}`. Identical `(row, rhs)` pairs are merged on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HRep {
    rows: QMatrix,
    rhs: Vec<Rational>,
}

impl HRep {
    pub fn new(rows: QMatrix, rhs: Vec<Rational>) -> Result<Self> {
        if rows.nrows() != rhs.len() {
            return Err(Error::Dimension {
                expected: rows.nrows(),
                found: rhs.len(),
            });
        }
        let dim = rows.ncols();
        Self::from_pairs(dim, rows.rows().iter().cloned().zip(rhs))
    }

    /// Builds from `(row, rhs)` pairs, keeping the first of any identical pairs.
    pub fn from_pairs(
        dim: usize,
        pairs: impl IntoIterator<Item = (QVector, Rational)>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut rows = QMatrix::with_cols(Vec::new(), dim)?;
        let mut rhs = Vec::new();
        for (a, b) in pairs {
            if seen.insert((a.clone(), b.clone())) {
                rows.push_row(a)?;
                rhs.push(b);
            }
        }
        Ok(HRep { rows, rhs })
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn rows(&self) -> &QMatrix {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn constraints(&self) -> impl Iterator<Item = (&QVector, &Rational)> {
        self.rows.rows().iter().zip(&self.rhs)
    }

    fn check_point(&self, x: &QVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// Index of the first violated constraint, if any.
    pub fn first_violated(&self, x: &QVector) -> Result<Option<usize>> {
        self.check_point(x)?;
        Ok(self
            .constraints()
            .position(|(a, b)| dot_unchecked(a, x) < *b))
    }

    pub fn contains(&self, x: &QVector) -> Result<bool> {
        Ok(self.first_violated(x)?.is_none())
    }

    /// Indices of the constraints satisfied with equality at `x`.
    pub fn tight_rows(&self, x: &QVector) -> Result<Vec<usize>> {
        if let Some(row) = self.first_violated(x)? {
            return Err(Error::NotMember {
                point: x.to_string(),
                row,
            });
        }
        Ok(self
            .constraints()
            .enumerate()
            .filter(|(_, (a, b))| dot_unchecked(a, x) == **b)
            .map(|(i, _)| i)
            .collect())
    }

    fn rank_of(&self, idx: &[usize]) -> usize {
        let rows: Vec<&QVector> = idx.iter().map(|&i| self.rows.row(i)).collect();
        rank_of_rows(&rows, self.dim())
    }

    /// A member point is a vertex iff its tight rows have rank `n`.
    pub fn is_vertex(&self, x: &QVector) -> Result<bool> {
        match self.tight_rows(x) {
            Ok(t) => Ok(self.rank_of(&t) == self.dim()),
            Err(Error::NotMember { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    fn vertex_tight_rows(&self, x: &QVector) -> Result<Vec<usize>> {
        let t = self.tight_rows(x).map_err(|e| match e {
            Error::NotMember { point, .. } => Error::NotVertex { point },
            other => other,
        })?;
        if self.rank_of(&t) != self.dim() {
            return Err(Error::NotVertex {
                point: x.to_string(),
            });
        }
        Ok(t)
    }

    /// Two distinct vertices are adjacent iff their common tight rows have rank `n - 1`.
    pub fn adjacent_rank(&self, xi: &QVector, eta: &QVector) -> Result<bool> {
        self.check_point(xi)?;
        self.check_point(eta)?;
        if xi == eta {
            return Err(Error::SamePoint {
                point: xi.to_string(),
            });
        }
        let a = self.vertex_tight_rows(xi)?;
        let b: BTreeSet<usize> = self.vertex_tight_rows(eta)?.into_iter().collect();
        let common: Vec<usize> = a.into_iter().filter(|i| b.contains(i)).collect();
        Ok(self.rank_of(&common) + 1 == self.dim())
    }

    /// Whether `{xi + t*ray : t >= 0}` is an edge (unbounded 1-face).
    pub fn is_unbounded_edge(&self, xi: &QVector, ray: &QVector) -> Result<bool> {
        self.check_point(ray)?;
        let tight = self.vertex_tight_rows(xi)?;
        if self
            .rows
            .rows()
            .iter()
            .any(|a| dot_unchecked(a, ray).is_negative())
            || ray.is_zero()
        {
            return Ok(false);
        }
        let along: Vec<usize> = tight
            .into_iter()
            .filter(|&i| dot_unchecked(self.rows.row(i), ray).is_zero())
            .collect();
        Ok(self.rank_of(&along) + 1 == self.dim())
    }

    /// Intersection with `[0,1]^n`: appends `x_i >= 0` and `-x_i >= -1`.
    pub fn truncate_hypercube(&self) -> HRep {
        let n = self.dim();
        let extra = (0..n)
            .map(|i| (QVector::unit(n, i), Rational::zero()))
            .chain((0..n).map(|i| {
                (
                    QVector::unit(n, i).scale(&-Rational::one()),
                    -Rational::one(),
                )
            }));
        let pairs: Vec<(QVector, Rational)> = self
            .constraints()
            .map(|(a, b)| (a.clone(), b.clone()))
            .chain(extra)
            .collect();
        HRep::from_pairs(n, pairs).expect("rows share the dimension")
    }

    fn as_lp_constraints(&self) -> Vec<Constraint> {
        self.constraints()
            .map(|(a, b)| Constraint::new(a.clone(), Relation::Ge, b.clone()))
            .collect()
    }
}

pub fn truncate_hypercube(h: &HRep) -> HRep {
    h.truncate_hypercube()
}

/// `conv(vertices) + cone(rays)`, kept canonical: vertices sorted and
/// distinct, rays scaled to coprime integers, non-zero, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VRep {
    dim: usize,
    vertices: Vec<QVector>,
    rays: Vec<QVector>,
}

/// Whether every canonical direction `e_i` lies in the recession cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpMonotoneWitness {
    pub holds: bool,
    /// First coordinate `i` with `e_i` outside the recession cone.
    pub violating_ray_index: Option<usize>,
}

impl VRep {
    pub fn new(dim: usize, vertices: Vec<QVector>, rays: Vec<QVector>) -> Result<Self> {
        for v in vertices.iter().chain(&rays) {
            if v.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        let vertices: BTreeSet<QVector> = vertices.into_iter().collect();
        let rays: BTreeSet<QVector> = rays
            .into_iter()
            .filter(|r| !r.is_zero())
            .map(|r| to_rational_vector(&r.primitive_direction()))
            .collect();
        Ok(VRep {
            dim,
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
        })
    }

    pub fn empty(dim: usize) -> Self {
        VRep {
            dim,
            vertices: Vec::new(),
            rays: Vec::new(),
        }
    }

    /// Vertices plus the canonical basis as rays.
    pub fn up_monotone_hull(dim: usize, vertices: Vec<QVector>) -> Result<Self> {
        Self::new(
            dim,
            vertices,
            (0..dim).map(|i| QVector::unit(dim, i)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn rays(&self) -> &[QVector] {
        &self.rays
    }

    /// An empty polyhedron has no vertices (a non-empty pointed one has at least one).
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn vertex_index(&self, x: &QVector) -> Option<usize> {
        self.vertices.binary_search(x).ok()
    }

    pub fn up_monotone(&self) -> Result<UpMonotoneWitness> {
        let n = self.dim;
        for i in 0..n {
            let target = QVector::unit(n, i);
            if self.rays.contains(&target) {
                continue;
            }
            // e_i = sum nu_j r_j with nu >= 0
            let k = self.rays.len();
            let cons: Vec<Constraint> = (0..n)
                .map(|c| {
                    let row: QVector = self.rays.iter().map(|r| r[c].clone()).collect();
                    Constraint::new(row, Relation::Eq, target[c].clone())
                })
                .collect();
            let inside =
                k > 0 && lp::feasible_point(&cons, &vec![Some(Rational::zero()); k])?.is_some();
            if !inside {
                return Ok(UpMonotoneWitness {
                    holds: false,
                    violating_ray_index: Some(i),
                });
            }
        }
        Ok(UpMonotoneWitness {
            holds: !self.is_empty(),
            violating_ray_index: None,
        })
    }
}

/// Either representation of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    H(HRep),
    V(VRep),
}

impl Representation {
    pub fn dim(&self) -> usize {
        match self {
            Representation::H(h) => h.dim(),
            Representation::V(v) => v.dim(),
        }
    }

    pub fn to_vrep(&self) -> Result<VRep> {
        match self {
            Representation::H(h) => h_to_v(h),
            Representation::V(v) => Ok(v.clone()),
        }
    }

    pub fn to_hrep(&self) -> Result<HRep> {
        match self {
            Representation::H(h) => Ok(h.clone()),
            Representation::V(v) => v_to_h(v),
        }
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    primitive_integer_row(row)
}

/// Vertices and extreme rays of `{x : A x >= b}` by double description on the
/// homogenised cone `{(t, x) : t >= 0, A x - b t >= 0}`.
///
/// An empty polyhedron yields an empty [`VRep`]. Inputs containing a line are
/// rejected with [`Error::NotPointed`].
pub fn h_to_v(h: &HRep) -> Result<VRep> {
    let n = h.dim();
    let r = rank(h.rows());
    if r < n {
        let feasible = lp::feasible_point(&h.as_lp_constraints(), &vec![None; n])?.is_some();
        if feasible {
            return Err(Error::NotPointed { rank: r, dim: n });
        }
        return Ok(VRep::empty(n));
    }
    let mut cone: Vec<Vec<BigInt>> = Vec::with_capacity(h.len() + 1);
    let mut lead = vec![BigInt::zero(); n + 1];
    lead[0] = BigInt::one();
    cone.push(lead);
    for (a, b) in h.constraints() {
        let mut row = Vec::with_capacity(n + 1);
        row.push(-b.clone());
        row.extend(a.iter().cloned());
        cone.push(integer_row(&row));
    }
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for ray in dd::extreme_rays(&cone) {
        let t = Rational::from_integer(ray[0].clone());
        let x: QVector = ray[1..]
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        if t.is_zero() {
            rays.push(x);
        } else {
            vertices.push(x.scale(&t.recip()));
        }
    }
    if vertices.is_empty() {
        return Ok(VRep::empty(n));
    }
    VRep::new(n, vertices, rays)
}

/// Irredundant inequality description of `conv(vertices) + cone(rays)`.
///
/// Facets come from the extreme rays of the polar cone restricted to the row
/// space of the generator matrix; its lineality contributes equations, each
/// emitted as a pair of opposite inequalities. Output rows are primitive
/// integer vectors in sorted order.
pub fn v_to_h(v: &VRep) -> Result<HRep> {
    let n = v.dim();
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    let gens: Vec<QVector> = v
        .vertices()
        .iter()
        .map(|x| {
            std::iter::once(Rational::one())
                .chain(x.iter().cloned())
                .collect()
        })
        .chain(v.rays().iter().map(|r| {
            std::iter::once(Rational::zero())
                .chain(r.iter().cloned())
                .collect()
        }))
        .collect();
    let g = QMatrix::new(gens.clone())?;

    let mut basis: Vec<usize> = Vec::new();
    for i in 0..gens.len() {
        let mut trial: Vec<&QVector> = basis.iter().map(|&b| &gens[b]).collect();
        trial.push(&gens[i]);
        if rank_of_rows(&trial, n + 1) == trial.len() {
            basis.push(i);
        }
    }
    let g_int: Vec<Vec<BigInt>> = gens.iter().map(|r| integer_row(r)).collect();
    let cone: Vec<Vec<BigInt>> = g_int
        .iter()
        .map(|gi| {
            basis
                .iter()
                .map(|&b| {
                    gi.iter()
                        .zip(&g_int[b])
                        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
                })
                .collect()
        })
        .collect();

    let mut pairs: BTreeSet<(QVector, Rational)> = BTreeSet::new();
    let vertex_rows = v.vertices().len();
    for z in dd::extreme_rays(&cone) {
        let mut y = vec![BigInt::zero(); n + 1];
        for (zj, &b) in z.iter().zip(&basis) {
            for (yc, gc) in y.iter_mut().zip(&g_int[b]) {
                *yc += zj * gc;
            }
        }
        normalize_integer_row(&mut y);
        let touches_vertex = g_int[..vertex_rows].iter().any(|gi| {
            gi.iter()
                .zip(&y)
                .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
                .is_zero()
        });
        if !touches_vertex {
            // the face at infinity, not a facet of the polyhedron
            continue;
        }
        let a = to_rational_vector(&y[1..]);
        let b = -Rational::from_integer(y[0].clone());
        pairs.insert((a, b));
    }
    for l in g.nullspace() {
        let mut li = integer_row(&l);
        normalize_integer_row(&mut li);
        let a = to_rational_vector(&li[1..]);
        let b = -Rational::from_integer(li[0].clone());
        pairs.insert((a.scale(&-Rational::one()), -b.clone()));
        pairs.insert((a, b));
    }
    HRep::from_pairs(n, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, ratio};

    fn q(x: &[i64]) -> QVector {
        QVector::from_ints(x)
    }

    fn hrep(rows: &[(&[i64], i64)]) -> HRep {
        let n = rows[0].0.len();
        HRep::from_pairs(n, rows.iter().map(|(a, b)| (q(a), int(*b)))).unwrap()
    }

    fn circulant_q() -> HRep {
        hrep(&[
            (&[1, 1, 0], 1),
            (&[0, 1, 1], 1),
            (&[1, 0, 1], 1),
            (&[1, 0, 0], 0),
            (&[0, 1, 0], 0),
            (&[0, 0, 1], 0),
        ])
    }

    fn half3() -> QVector {
        QVector::new(vec![ratio(1, 2); 3])
    }

    #[test]
    fn orthant_vertices() {
        let v = h_to_v(&hrep(&[(&[1, 0], 0), (&[0, 1], 0)])).unwrap();
        assert_eq!(v.vertices(), &[q(&[0, 0])]);
        assert_eq!(v.rays(), &[q(&[0, 1]), q(&[1, 0])]);
    }

    #[test]
    fn circulant_relaxation_vertices() {
        let v = h_to_v(&circulant_q()).unwrap();
        let mut expect = vec![q(&[1, 1, 0]), q(&[0, 1, 1]), q(&[1, 0, 1]), half3()];
        expect.sort();
        assert_eq!(v.vertices(), expect.as_slice());
        assert_eq!(v.rays(), &[q(&[0, 0, 1]), q(&[0, 1, 0]), q(&[1, 0, 0])]);
    }

    #[test]
    fn circulant_truncated_vertices() {
        let v = h_to_v(&circulant_q().truncate_hypercube()).unwrap();
        let mut expect = vec![
            q(&[1, 1, 0]),
            q(&[0, 1, 1]),
            q(&[1, 0, 1]),
            q(&[1, 1, 1]),
            half3(),
        ];
        expect.sort();
        assert_eq!(v.vertices(), expect.as_slice());
        assert!(v.is_bounded());
    }

    #[test]
    fn truncation_is_idempotent_and_can_empty() {
        let h = circulant_q();
        let once = h.truncate_hypercube();
        assert_eq!(once.truncate_hypercube(), once);
        let shifted = hrep(&[(&[1, 0], 2), (&[0, 1], 2)]).truncate_hypercube();
        let v = h_to_v(&shifted).unwrap();
        assert!(v.is_empty());
        assert!(v.rays().is_empty());
    }

    #[test]
    fn containment_and_tight_rows() {
        let h = circulant_q();
        assert!(h.contains(&half3()).unwrap());
        assert!(!h.contains(&q(&[1, 0, 0])).unwrap());
        assert_eq!(h.first_violated(&q(&[1, 0, 0])).unwrap(), Some(1));
        let hb = h.truncate_hypercube();
        assert_eq!(hb.tight_rows(&half3()).unwrap(), vec![0, 1, 2]);
        // duplicate lower bounds are merged, so the upper bounds are rows 6, 7, 8
        assert_eq!(hb.tight_rows(&q(&[1, 1, 1])).unwrap(), vec![6, 7, 8]);
        // covering rows (0,1,1) and (1,0,1), x3 >= 0, x1 <= 1, x2 <= 1
        assert_eq!(hb.tight_rows(&q(&[1, 1, 0])).unwrap(), vec![1, 2, 5, 6, 7]);
        assert!(matches!(
            hb.tight_rows(&q(&[0, 0, 0])),
            Err(Error::NotMember { .. })
        ));
        assert!(matches!(
            h.contains(&q(&[1, 1])),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn rank_adjacency_on_circulant() {
        let h = circulant_q();
        let (xi, eta) = (q(&[1, 1, 0]), q(&[0, 1, 1]));
        assert!(!h.adjacent_rank(&xi, &eta).unwrap());
        assert!(h.truncate_hypercube().adjacent_rank(&xi, &eta).unwrap());
        assert_eq!(
            h.adjacent_rank(&eta, &xi).unwrap(),
            h.adjacent_rank(&xi, &eta).unwrap()
        );
        assert!(matches!(
            h.adjacent_rank(&xi, &xi),
            Err(Error::SamePoint { .. })
        ));
        assert!(matches!(
            h.adjacent_rank(&xi, &q(&[1, 1, 1])),
            Err(Error::NotVertex { .. })
        ));
        assert!(h.adjacent_rank(&xi, &half3()).unwrap());
    }

    #[test]
    fn unbounded_edges_of_orthant_shift() {
        let h = hrep(&[(&[1, 1], 1), (&[1, 0], 0), (&[0, 1], 0)]);
        assert!(h.is_unbounded_edge(&q(&[1, 0]), &q(&[1, 0])).unwrap());
        assert!(!h.is_unbounded_edge(&q(&[1, 0]), &q(&[0, 1])).unwrap());
    }

    #[test]
    fn not_pointed_is_rejected() {
        let h = hrep(&[(&[1, 0], 0)]);
        assert!(matches!(h_to_v(&h), Err(Error::NotPointed { .. })));
        // a line-containing description that is empty anyway
        let e = hrep(&[(&[1, 0], 1), (&[-1, 0], 0)]);
        assert!(h_to_v(&e).unwrap().is_empty());
    }

    #[test]
    fn orthant_facets() {
        let v = VRep::new(2, vec![q(&[0, 0])], vec![q(&[1, 0]), q(&[0, 1])]).unwrap();
        let h = v_to_h(&v).unwrap();
        assert_eq!(h, hrep(&[(&[0, 1], 0), (&[1, 0], 0)]));
    }

    #[test]
    fn point_polytope_facets() {
        let v = VRep::new(2, vec![q(&[1, 1])], vec![]).unwrap();
        let h = v_to_h(&v).unwrap();
        assert_eq!(h_to_v(&h).unwrap(), v);
        assert!(h.contains(&q(&[1, 1])).unwrap());
        assert!(!h.contains(&q(&[1, 2])).unwrap());
        assert!(!h.contains(&q(&[0, 1])).unwrap());
        assert!(matches!(v_to_h(&VRep::empty(2)), Err(Error::EmptyInput)));
    }

    #[test]
    fn dominant_round_trip() {
        let v =
            VRep::up_monotone_hull(3, vec![q(&[1, 1, 0]), q(&[0, 1, 1]), q(&[1, 0, 1])]).unwrap();
        let h = v_to_h(&v).unwrap();
        assert_eq!(h_to_v(&h).unwrap(), v);
        let w = v.up_monotone().unwrap();
        assert!(w.holds);
    }

    #[test]
    fn up_monotone_witness() {
        let v = VRep::new(2, vec![q(&[0, 0])], vec![q(&[1, 1]), q(&[0, 1])]).unwrap();
        let w = v.up_monotone().unwrap();
        assert!(!w.holds);
        assert_eq!(w.violating_ray_index, Some(0));
        let u = VRep::new(2, vec![q(&[0, 0])], vec![q(&[1, -1]), q(&[0, 1])]).unwrap();
        assert!(u.up_monotone().unwrap().holds);
    }

    #[test]
    fn rays_are_canonical() {
        let v = VRep::new(
            2,
            vec![q(&[0, 0])],
            vec![q(&[2, 4]), q(&[1, 2]), q(&[0, 0])],
        )
        .unwrap();
        assert_eq!(v.rays(), &[q(&[1, 2])]);
    }
}
