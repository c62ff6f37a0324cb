//! Seeded random covering matrices.
//!
//! Generator `coverpoly-rng-v1`: ChaCha8 seeded with `seed_from_u64(seed)`
//! (the `rand_chacha` 0.3 stream). A matrix entry costs one 32-bit draw `u`
//! and is one iff `u * den < num * 2^32` for density `num/den`. Rows are drawn
//! in order, each redrawn whole until it is non-zero; duplicate rows are then
//! dropped, first occurrence kept. Graph edges take two draws, each mapped to
//! a node by `(u * n) >> 32`; loops and repeated edges are redrawn.

use num_traits::{Signed, ToPrimitive};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covering::CoveringMatrix;
use crate::error::{Error, Result};
use crate::numeric::{format_rational, ratio, Rational};

pub const GENERATOR: &str = "coverpoly-rng-v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub density: Rational,
}

impl Serialize for InstanceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            seed: u64,
            n: usize,
            m: usize,
            density: &'a str,
        }
        Repr {
            seed: self.seed,
            n: self.n,
            m: self.m,
            density: &format_rational(&self.density),
        }
        .serialize(s)
    }
}

impl InstanceSpec {
    pub fn new(seed: u64, n: usize, m: usize, density: Rational) -> Self {
        InstanceSpec {
            seed,
            n,
            m,
            density,
        }
    }

    /// The standard sweep: `n = 3 + seed % 4`, `m = 3 + (seed / 4) % 6`,
    /// density 1/2. Seeds 1..=100 cover every `n` in 3..=6 and `m` in 3..=8.
    pub fn sweep(seed: u64) -> Self {
        InstanceSpec {
            seed,
            n: 3 + (seed % 4) as usize,
            m: 3 + ((seed / 4) % 6) as usize,
            density: ratio(1, 2),
        }
    }

    /// Parses `seed,n,m,density`, e.g. `7,5,6,1/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [seed, n, m, d] = parts[..] else {
            return Err(Error::InvalidSpec(format!(
                "expected seed,n,m,density, got {s:?}"
            )));
        };
        let bad = |what: &str| Error::InvalidSpec(format!("bad {what} in {s:?}"));
        let spec = InstanceSpec {
            seed: seed.parse().map_err(|_| bad("seed"))?,
            n: n.parse().map_err(|_| bad("n"))?,
            m: m.parse().map_err(|_| bad("m"))?,
            density: crate::numeric::parse_rational(d).ok_or_else(|| bad("density"))?,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::InvalidSpec("n and m must be at least 1".into()));
        }
        if !self.density.is_positive() || self.density >= Rational::from_integer(1.into()) {
            return Err(Error::InvalidSpec(format!(
                "density {} is not in (0,1)",
                format_rational(&self.density)
            )));
        }
        Ok(())
    }
}

fn threshold_parts(d: &Rational) -> Result<(u128, u128)> {
    let num = d
        .numer()
        .to_u64()
        .ok_or_else(|| Error::InvalidSpec("density numerator too large".into()))?;
    let den = d
        .denom()
        .to_u64()
        .ok_or_else(|| Error::InvalidSpec("density denominator too large".into()))?;
    Ok((num as u128, den as u128))
}

/// Reproducible matrix for `spec`; may have fewer than `m` rows after
/// duplicate removal.
pub fn random_instance(spec: &InstanceSpec) -> Result<CoveringMatrix> {
    spec.validate()?;
    let (num, den) = threshold_parts(&spec.density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut rows = Vec::with_capacity(spec.m);
    for _ in 0..spec.m {
        loop {
            let row: Vec<bool> = (0..spec.n)
                .map(|_| (rng.next_u32() as u128) * den < num << 32)
                .collect();
            if row.iter().any(|&b| b) {
                rows.push(row);
                break;
            }
        }
    }
    Ok(CoveringMatrix::new(spec.n, rows)?.matrix)
}

/// Edge-node incidence matrix of a random simple graph with `nodes` nodes and
/// `edges` distinct edges, one row per edge in the order drawn.
pub fn random_graph_instance(seed: u64, nodes: usize, edges: usize) -> Result<CoveringMatrix> {
    let max = nodes * nodes.saturating_sub(1) / 2;
    if nodes < 2 || edges == 0 || edges > max {
        return Err(Error::InvalidSpec(format!(
            "cannot place {edges} edges on {nodes} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || ((rng.next_u32() as u64 * nodes as u64) >> 32) as usize;
    let mut seen = std::collections::BTreeSet::new();
    let mut rows = Vec::with_capacity(edges);
    while rows.len() < edges {
        let (u, v) = (draw(), draw());
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        let mut row = vec![false; nodes];
        row[u] = true;
        row[v] = true;
        rows.push(row);
    }
    Ok(CoveringMatrix::new(nodes, rows)?.matrix)
}

/// Graph sweep: `nodes = 3 + seed % 5` (so 3..=7) and between 2 and
/// `nodes choose 2` edges.
pub fn graph_sweep(seed: u64) -> (usize, usize) {
    let nodes = 3 + (seed % 5) as usize;
    let max = nodes * (nodes - 1) / 2;
    (nodes, 2 + ((seed / 5) as usize) % (max - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        let spec = InstanceSpec::new(1, 3, 3, ratio(1, 2));
        assert_eq!(
            random_instance(&spec).unwrap(),
            random_instance(&spec).unwrap()
        );
    }

    #[test]
    fn sweep_covers_the_grid() {
        let mut seen = std::collections::BTreeSet::new();
        for s in 1..=100 {
            let spec = InstanceSpec::sweep(s);
            seen.insert((spec.n, spec.m));
        }
        assert_eq!(seen.len(), 4 * 6);
    }

    #[test]
    fn invalid_specs() {
        assert!(random_instance(&InstanceSpec::new(1, 0, 3, ratio(1, 2))).is_err());
        assert!(random_instance(&InstanceSpec::new(1, 3, 3, ratio(1, 1))).is_err());
        assert!(random_instance(&InstanceSpec::new(1, 3, 3, ratio(0, 1))).is_err());
        assert!(InstanceSpec::parse("1,3,3").is_err());
        assert_eq!(
            InstanceSpec::parse("7, 5,6,1/2").unwrap(),
            InstanceSpec::new(7, 5, 6, ratio(1, 2))
        );
    }

    #[test]
    fn graphs_have_row_sum_two() {
        for seed in 1..=30 {
            let (n, m) = graph_sweep(seed);
            let a = random_graph_instance(seed, n, m).unwrap();
            assert_eq!(a.m(), m);
            assert!(a
                .rows()
                .iter()
                .all(|r| r.iter().filter(|&&b| b).count() == 2));
        }
        assert!(random_graph_instance(1, 3, 4).is_err());
    }

    #[test]
    fn density_extremes_bias_the_matrix() {
        let dense = random_instance(&InstanceSpec::new(3, 8, 20, ratio(15, 16))).unwrap();
        let ones: usize = dense
            .rows()
            .iter()
            .map(|r| r.iter().filter(|&&b| b).count())
            .sum();
        assert!(ones * 2 > dense.m() * dense.n());
    }
}
