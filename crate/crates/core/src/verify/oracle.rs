//! Brute-force oracles. These share no algorithm with the library paths they
//! check: plain Gaussian elimination over the rationals instead of Bareiss,
//! basic-solution enumeration instead of double description, and `2^n`
//! enumeration instead of the cover DFS.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::covering::CoveringMatrix;
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use crate::numeric::{QVector, Rational};
use crate::polyhedron::{HRep, VRep};

/// Largest dimension accepted by [`basic_vertices`].
pub const MAX_BASIS_DIM: usize = 7;

/// Row echelon form by textbook elimination; returns the reduced rows and
/// the pivot columns.
fn eliminate(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..rows[i].len() {
                    let d = &f * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (rows, pivots)
}

pub fn rank(rows: &[&QVector], cols: usize) -> usize {
    eliminate(rows.iter().map(|r| r.to_vec()).collect(), cols)
        .1
        .len()
}

/// Unique solution of the square system `rows * x = rhs`, if it exists.
pub fn solve_square(rows: &[&QVector], rhs: &[Rational]) -> Option<QVector> {
    let n = rows.len();
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            r.iter()
                .cloned()
                .chain(std::iter::once(b.clone()))
                .collect()
        })
        .collect();
    let (red, pivots) = eliminate(aug, n);
    (pivots.len() == n).then(|| red.iter().map(|r| r[n].clone()).collect())
}

fn subsets(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=m - (k - cur.len()) {
            cur.push(i);
            go(i + 1, m, k, cur, f);
            cur.pop();
        }
    }
    if k <= m {
        go(0, m, k, &mut Vec::with_capacity(k), &mut f);
    }
}

/// Vertices of `{x : A x >= b}` as the feasible basic solutions: every
/// non-singular choice of `n` rows, solved as equalities.
pub fn basic_vertices(h: &HRep) -> Result<Vec<QVector>> {
    let n = h.dim();
    if n > MAX_BASIS_DIM {
        return Err(Error::CapExceeded {
            what: "dimension for basic-solution enumeration",
            value: n,
            cap: MAX_BASIS_DIM,
        });
    }
    let rows: Vec<&QVector> = h.rows().rows().iter().collect();
    let mut out = BTreeSet::new();
    subsets(rows.len(), n, |idx| {
        let sel: Vec<&QVector> = idx.iter().map(|&i| rows[i]).collect();
        let rhs: Vec<Rational> = idx.iter().map(|&i| h.rhs()[i].clone()).collect();
        if let Some(x) = solve_square(&sel, &rhs) {
            if h.constraints().all(|(a, b)| {
                a.iter()
                    .zip(x.iter())
                    .fold(Rational::zero(), |s, (p, q)| s + p * q)
                    >= *b
            }) {
                out.insert(x);
            }
        }
    });
    Ok(out.into_iter().collect())
}

fn tight(h: &HRep, x: &QVector) -> Vec<usize> {
    h.constraints()
        .enumerate()
        .filter(|(_, (a, b))| {
            a.iter()
                .zip(x.iter())
                .fold(Rational::zero(), |s, (p, q)| s + p * q)
                == **b
        })
        .map(|(i, _)| i)
        .collect()
}

/// Adjacency of two vertices of `h` by the rank of their common tight rows,
/// with the rank taken by [`rank`].
pub fn rank_adjacent(h: &HRep, xi: &QVector, eta: &QVector) -> bool {
    let b: BTreeSet<usize> = tight(h, eta).into_iter().collect();
    let common: Vec<&QVector> = tight(h, xi)
        .into_iter()
        .filter(|i| b.contains(i))
        .map(|i| h.rows().row(i))
        .collect();
    rank(&common, h.dim()) + 1 == h.dim()
}

/// All binary covers, in lexicographic order.
pub fn binary_covers(a: &CoveringMatrix) -> Vec<QVector> {
    let n = a.n();
    let mut out: Vec<QVector> = (0..1u64 << n)
        .map(|bits| {
            (0..n)
                .map(|i| bits >> (n - 1 - i) & 1 == 1)
                .collect::<Vec<bool>>()
        })
        .filter(|s| a.covers(s))
        .map(|s| {
            s.iter()
                .map(|&b| if b { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// Binary covers from which no single one can be removed.
pub fn brute_minimal_covers(a: &CoveringMatrix) -> Vec<QVector> {
    binary_covers(a)
        .into_iter()
        .filter(|x| {
            (0..x.dim()).filter(|&i| x[i].is_one()).all(|i| {
                let s: Vec<bool> = (0..x.dim()).map(|j| j != i && x[j].is_one()).collect();
                !a.covers(&s)
            })
        })
        .collect()
}

/// Adjacency in a polytope given by its complete vertex list: `xi` and `eta`
/// are adjacent iff no convex combination of the vertices that equals the
/// midpoint of `[xi, eta]` puts positive weight on a third vertex.
pub fn brute_adjacent(p: &VRep, xi: &QVector, eta: &QVector) -> Result<bool> {
    for x in [xi, eta] {
        if p.vertex_index(x).is_none() {
            return Err(Error::NotVertex {
                point: x.to_string(),
            });
        }
    }
    if xi == eta {
        return Err(Error::SamePoint {
            point: xi.to_string(),
        });
    }
    if !p.is_bounded() {
        return Err(Error::InvalidSpec(
            "brute_adjacent needs a bounded polytope".into(),
        ));
    }
    let verts = p.vertices();
    let r = verts.len();
    let objective: QVector = verts
        .iter()
        .map(|z| {
            if z == xi || z == eta {
                Rational::zero()
            } else {
                Rational::one()
            }
        })
        .collect();
    let mut prog = LinearProgram::new(Sense::Max, objective);
    prog.nonnegative(0..r);
    prog.constrain(QVector::ones(r), Relation::Eq, Rational::one());
    let half = Rational::new(1.into(), 2.into());
    for i in 0..p.dim() {
        let row: QVector = verts.iter().map(|z| z[i].clone()).collect();
        prog.constrain(row, Relation::Eq, (&xi[i] + &eta[i]) * &half);
    }
    match lp::solve(&prog)? {
        LpOutcome::Optimal(s) => Ok(s.value.is_zero()),
        other => unreachable!("midpoint is a convex combination: {:?}", other.status()),
    }
}

/// Membership in `conv(generators) + orthant` by an LP feasibility check.
pub fn in_dominant(generators: &[QVector], x: &QVector) -> Result<bool> {
    let r = generators.len();
    let n = x.dim();
    let mut cons = vec![lp::Constraint::new(
        (0..r + n)
            .map(|k| {
                if k < r {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect(),
        Relation::Eq,
        Rational::one(),
    )];
    for i in 0..n {
        let row: QVector = generators
            .iter()
            .map(|z| z[i].clone())
            .chain((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }))
            .collect();
        cons.push(lp::Constraint::new(row, Relation::Eq, x[i].clone()));
    }
    Ok(lp::feasible_point(&cons, &vec![Some(Rational::zero()); r + n])?.is_some())
}
