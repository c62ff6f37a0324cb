//! Double description: extreme rays of a pointed cone `{z : M z >= 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::numeric::{normalize_integer_row, rank_of_rows, to_rational_vector, QMatrix, QVector};

#[derive(Clone, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(len: usize) -> Self {
        ZeroSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_superset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: ZeroSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Extreme rays of `{z : rows z >= 0}` as primitive integer vectors.
///
/// `rows` must have full column rank (the cone is then pointed). The initial
/// simplicial cone uses the first independent rows in input order; the
/// remaining rows are added one at a time, in input order, and new rays are
/// only formed from pairs that are adjacent in the current cone (no third
/// ray's zero set contains the pair's common zero set).
pub(crate) fn extreme_rays(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let d = rows.first().map_or(0, Vec::len);
    if d == 0 {
        return Vec::new();
    }
    let as_q: Vec<QVector> = rows.iter().map(|r| to_rational_vector(r)).collect();

    let mut basis: Vec<usize> = Vec::with_capacity(d);
    for i in 0..rows.len() {
        if basis.len() == d {
            break;
        }
        let mut trial: Vec<&QVector> = basis.iter().map(|&b| &as_q[b]).collect();
        trial.push(&as_q[i]);
        if rank_of_rows(&trial, d) == trial.len() {
            basis.push(i);
        }
    }
    assert_eq!(
        basis.len(),
        d,
        "constraint matrix must have full column rank"
    );

    let inv = QMatrix::new(basis.iter().map(|&b| as_q[b].clone()).collect())
        .expect("rectangular basis")
        .inverse()
        .expect("independent rows are invertible");
    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let col: QVector = (0..d).map(|r| inv[r][k].clone()).collect();
            let v = col.primitive_direction();
            let mut zeros = ZeroSet::new(rows.len());
            for (j, &b) in basis.iter().enumerate() {
                if j != k {
                    zeros.insert(b);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    let in_basis = {
        let mut flags = vec![false; rows.len()];
        for &b in &basis {
            flags[b] = true;
        }
        flags
    };

    for (h, row) in rows.iter().enumerate() {
        if in_basis[h] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if neg.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.zeros.insert(h);
                }
            }
            continue;
        }

        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !r.zeros.is_superset_of(&common));
                if !adjacent {
                    continue;
                }
                let sp = &values[p];
                let sq = -&values[q];
                let mut v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| sp * a + &sq * b)
                    .collect();
                normalize_integer_row(&mut v);
                let mut zeros = common;
                zeros.insert(h);
                created.push(Ray { v, zeros });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (mut r, val) in rays.into_iter().zip(values) {
            if val.is_negative() {
                continue;
            }
            if val.is_zero() {
                r.zeros.insert(h);
            }
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }

    rays.into_iter().map(|r| r.v).collect()
}
