//! Vertex adjacency and 1-skeletons.
//!
//! Three independent tests decide whether two vertices `xi`, `eta` span an
//! edge:
//!
//! * **rank**: on an inequality description, the constraints tight at both
//!   vertices have rank `n - 1`;
//! * **decomposition LP** (up-monotone generator descriptions only): maximise
//!   the weight a convex combination of vertices can put outside `{xi, eta}`
//!   while, after adding a non-negative slack, it lands on the segment
//!   `[xi, eta]`. The pair is adjacent iff that maximum is zero; otherwise the
//!   optimal combination is returned as a witness of non-adjacency;
//! * **certificate LP** (same inputs): search for a strictly positive `c`
//!   and `b` with `c.xi = c.eta = b` and `c.z >= b + 1` at every other vertex
//!   `z`. Strictness is normalised to `c_i >= 1` and a unit gap, which is
//!   legitimate because the system is finite and positively homogeneous.
//!
//! Node–node edges are always bounded segments; unbounded edges (vertex plus
//! ray) are only recorded in the graph's provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use crate::numeric::{QVector, Rational};
use crate::polyhedron::{h_to_v, v_to_h, HRep, Representation, VRep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AdjacencyTest {
    #[serde(rename = "rank")]
    Rank,
    #[serde(rename = "decomposition-lp")]
    Decomposition,
    #[serde(rename = "certificate-lp")]
    Certificate,
}

impl AdjacencyTest {
    pub fn name(self) -> &'static str {
        match self {
            AdjacencyTest::Rank => "rank",
            AdjacencyTest::Decomposition => "decomposition-lp",
            AdjacencyTest::Certificate => "certificate-lp",
        }
    }
}

/// Which tests [`build_skeleton`] runs. `VrepLp` runs both LP tests; `Both`
/// runs those and the rank test, and every test must agree on every pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Rank,
    VrepLp,
    Both,
}

impl Method {
    fn tests(self) -> &'static [AdjacencyTest] {
        match self {
            Method::Rank => &[AdjacencyTest::Rank],
            Method::VrepLp => &[AdjacencyTest::Decomposition, AdjacencyTest::Certificate],
            Method::Both => &[
                AdjacencyTest::Rank,
                AdjacencyTest::Decomposition,
                AdjacencyTest::Certificate,
            ],
        }
    }
}

/// `c > 0` and `b` with `c.xi = c.eta = b < c.z` for every other vertex `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub c: QVector,
    pub b: Rational,
}

impl Certificate {
    /// Substitution check of the normalised conditions.
    pub fn verify(&self, v: &VRep, xi: &QVector, eta: &QVector) -> bool {
        let one = Rational::one();
        let n = v.dim();
        if self.c.dim() != n || self.c.iter().any(|ci| *ci < one) {
            return false;
        }
        let at = |x: &QVector| self.c.dot(x).expect("dimension checked");
        at(xi) == self.b
            && at(eta) == self.b
            && v.vertices()
                .iter()
                .filter(|z| *z != xi && *z != eta)
                .all(|z| at(z) >= &self.b + &one)
    }
}

/// Convex weights `lambda` on the vertices, slack `mu >= 0` and a segment
/// parameter `t` with `sum lambda_k z_k + mu = t xi + (1 - t) eta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyWitness {
    pub lambda: Vec<Rational>,
    pub mu: QVector,
    pub t: Rational,
}

impl AdjacencyWitness {
    pub fn verify(&self, v: &VRep, xi: &QVector, eta: &QVector) -> bool {
        let n = v.dim();
        if self.lambda.len() != v.vertices().len() || self.mu.dim() != n {
            return false;
        }
        let nonneg = self.lambda.iter().all(|l| !l.is_negative()) && self.mu.is_nonnegative();
        let t_ok = !self.t.is_negative() && self.t <= Rational::one();
        let sum = self.lambda.iter().fold(Rational::zero(), |a, l| a + l);
        let lhs = (0..n).all(|i| {
            let combo = self
                .lambda
                .iter()
                .zip(v.vertices())
                .fold(Rational::zero(), |a, (l, z)| a + l * &z[i])
                + &self.mu[i];
            let seg = &self.t * &xi[i] + (Rational::one() - &self.t) * &eta[i];
            combo == seg
        });
        nonneg && t_ok && sum.is_one() && lhs
    }

    /// Total weight on vertices other than `xi` and `eta`.
    pub fn outside_weight(&self, v: &VRep, xi: &QVector, eta: &QVector) -> Rational {
        self.lambda
            .iter()
            .zip(v.vertices())
            .filter(|(_, z)| *z != xi && *z != eta)
            .fold(Rational::zero(), |a, (l, _)| a + l)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Adjacent,
    /// The optimal decomposition, with positive weight outside the pair.
    NotAdjacent(AdjacencyWitness),
}

impl Decomposition {
    pub fn is_adjacent(&self) -> bool {
        matches!(self, Decomposition::Adjacent)
    }
}

/// Rejects generator descriptions whose recession cone is not exactly the
/// non-negative orthant.
pub fn require_orthant_recession(v: &VRep) -> Result<()> {
    if v.rays().iter().any(|r| !r.is_nonnegative()) {
        return Err(Error::NotUpMonotone {
            detail: "a ray has a negative coordinate".into(),
        });
    }
    let w = v.up_monotone()?;
    if !w.holds {
        let detail = match w.violating_ray_index {
            Some(i) => format!("e_{} is not a recession direction", i + 1),
            None => "empty polyhedron".into(),
        };
        return Err(Error::NotUpMonotone { detail });
    }
    Ok(())
}

fn check_pair(v: &VRep, xi: &QVector, eta: &QVector) -> Result<()> {
    for x in [xi, eta] {
        if x.dim() != v.dim() {
            return Err(Error::Dimension {
                expected: v.dim(),
                found: x.dim(),
            });
        }
        if v.vertex_index(x).is_none() {
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
    Ok(())
}

/// Decomposition-LP adjacency test on an up-monotone generator description.
pub fn adjacent_vrep(v: &VRep, xi: &QVector, eta: &QVector) -> Result<Decomposition> {
    require_orthant_recession(v)?;
    check_pair(v, xi, eta)?;
    decomposition_unchecked(v, xi, eta)
}

fn decomposition_unchecked(v: &VRep, xi: &QVector, eta: &QVector) -> Result<Decomposition> {
    let n = v.dim();
    let r = v.vertices().len();
    let nvars = r + n + 1;
    let t_col = r + n;
    let mut objective = QVector::zeros(nvars).into_entries();
    for (k, z) in v.vertices().iter().enumerate() {
        if z != xi && z != eta {
            objective[k] = Rational::one();
        }
    }
    let mut lp = LinearProgram::new(Sense::Max, QVector::new(objective));
    lp.nonnegative(0..nvars);
    let mut sum = QVector::zeros(nvars).into_entries();
    sum[..r].iter_mut().for_each(|x| *x = Rational::one());
    lp.constrain(QVector::new(sum), Relation::Eq, Rational::one());
    for i in 0..n {
        let mut row = QVector::zeros(nvars).into_entries();
        for (k, z) in v.vertices().iter().enumerate() {
            row[k] = z[i].clone();
        }
        row[r + i] = Rational::one();
        row[t_col] = &eta[i] - &xi[i];
        lp.constrain(QVector::new(row), Relation::Eq, eta[i].clone());
    }
    lp.constrain(QVector::unit(nvars, t_col), Relation::Le, Rational::one());

    let outcome = lp::solve(&lp)?;
    let sol = match outcome {
        LpOutcome::Optimal(s) => s,
        // lambda on xi with t = 1 is always feasible, and the objective is at most 1
        other => unreachable!(
            "decomposition LP is feasible and bounded, got {:?}",
            other.status()
        ),
    };
    if sol.value.is_zero() {
        return Ok(Decomposition::Adjacent);
    }
    let x = sol.point.into_entries();
    let witness = AdjacencyWitness {
        lambda: x[..r].to_vec(),
        mu: QVector::new(x[r..r + n].to_vec()),
        t: x[t_col].clone(),
    };
    debug_assert!(witness.verify(v, xi, eta));
    Ok(Decomposition::NotAdjacent(witness))
}

/// Certificate-LP adjacency test: a verified separating functional, or `None`.
pub fn certificate_search(v: &VRep, xi: &QVector, eta: &QVector) -> Result<Option<Certificate>> {
    require_orthant_recession(v)?;
    check_pair(v, xi, eta)?;
    certificate_unchecked(v, xi, eta)
}

fn certificate_unchecked(v: &VRep, xi: &QVector, eta: &QVector) -> Result<Option<Certificate>> {
    let n = v.dim();
    // variables: c_1..c_n, b
    let mut objective = QVector::ones(n + 1).into_entries();
    objective[n] = Rational::zero();
    let mut lp = LinearProgram::new(Sense::Min, QVector::new(objective));
    for i in 0..n {
        lp.lower_bound(i, Rational::one());
    }
    let row = |x: &QVector| -> QVector {
        x.iter()
            .cloned()
            .chain(std::iter::once(-Rational::one()))
            .collect()
    };
    lp.constrain(row(xi), Relation::Eq, Rational::zero());
    lp.constrain(row(eta), Relation::Eq, Rational::zero());
    for z in v.vertices().iter().filter(|z| *z != xi && *z != eta) {
        lp.constrain(row(z), Relation::Ge, Rational::one());
    }
    match lp::solve(&lp)? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("sum of c is bounded below by n"),
        LpOutcome::Optimal(sol) => {
            let mut x = sol.point.into_entries();
            let b = x.pop().expect("n + 1 variables");
            let cert = Certificate {
                c: QVector::new(x),
                b,
            };
            if !cert.verify(v, xi, eta) {
                return Err(Error::BadCertificate(format!(
                    "c = {}, b = {}",
                    cert.c, cert.b
                )));
            }
            Ok(Some(cert))
        }
    }
}

/// Verdict of each test that was run on one pair.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairVerdict {
    pub rank: Option<bool>,
    pub decomposition: Option<bool>,
    pub certificate: Option<bool>,
}

impl PairVerdict {
    pub fn results(&self) -> impl Iterator<Item = (AdjacencyTest, bool)> + '_ {
        [
            (AdjacencyTest::Rank, self.rank),
            (AdjacencyTest::Decomposition, self.decomposition),
            (AdjacencyTest::Certificate, self.certificate),
        ]
        .into_iter()
        .filter_map(|(t, r)| r.map(|r| (t, r)))
    }

    /// The common verdict, or `None` when the tests disagree.
    pub fn agreed(&self) -> Option<bool> {
        let mut it = self.results().map(|(_, r)| r);
        let first = it.next()?;
        it.all(|r| r == first).then_some(first)
    }

    fn describe(&self) -> String {
        self.results()
            .map(|(t, r)| format!("{}={}", t.name(), r))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Runs the requested tests on one pair. `h` must describe the same
/// polyhedron as `v` when the rank test is requested.
pub fn pair_verdict(
    v: &VRep,
    h: Option<&HRep>,
    xi: &QVector,
    eta: &QVector,
    tests: &[AdjacencyTest],
) -> Result<PairVerdict> {
    let mut out = PairVerdict::default();
    for t in tests {
        match t {
            AdjacencyTest::Rank => {
                let h = h.expect("rank test needs an inequality description");
                out.rank = Some(h.adjacent_rank(xi, eta)?);
            }
            AdjacencyTest::Decomposition => {
                out.decomposition = Some(decomposition_unchecked(v, xi, eta)?.is_adjacent());
            }
            AdjacencyTest::Certificate => {
                out.certificate = Some(certificate_unchecked(v, xi, eta)?.is_some());
            }
        }
    }
    Ok(out)
}

/// Vertex set and bounded edges of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkeletonGraph {
    /// Sorted lexicographically.
    pub nodes: Vec<QVector>,
    /// Pairs `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
    /// Tests that confirmed each edge.
    pub provenance: BTreeMap<(usize, usize), BTreeSet<AdjacencyTest>>,
    /// Unbounded edges `(node, ray)`, when an inequality description was used.
    pub unbounded_edges: Vec<(usize, QVector)>,
}

impl SkeletonGraph {
    pub fn node_index(&self, x: &QVector) -> Option<usize> {
        self.nodes.binary_search(x).ok()
    }

    pub fn has_edge(&self, u: &QVector, v: &QVector) -> bool {
        match (self.node_index(u), self.node_index(v)) {
            (Some(i), Some(j)) if i != j => self.edges.contains(&(i.min(j), i.max(j))),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph skeleton {\n");
        for (i, x) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{x}\"];");
        }
        for (i, j) in &self.edges {
            let _ = writeln!(s, "  n{i} -- n{j};");
        }
        for (k, (i, r)) in self.unbounded_edges.iter().enumerate() {
            let _ = writeln!(s, "  r{k} [shape=point, label=\"\"];");
            let _ = writeln!(s, "  n{i} -- r{k} [style=dashed, label=\"{r}\"];");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Unbounded {
            node: usize,
            ray: QVector,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            nodes: &'a [QVector],
            edges: Vec<[usize; 2]>,
            provenance: BTreeMap<String, Vec<&'static str>>,
            unbounded_edges: Vec<Unbounded>,
        }
        let doc = Doc {
            nodes: &self.nodes,
            edges: self.edges.iter().map(|&(i, j)| [i, j]).collect(),
            provenance: self
                .provenance
                .iter()
                .map(|((i, j), tests)| {
                    (format!("{i}-{j}"), tests.iter().map(|t| t.name()).collect())
                })
                .collect(),
            unbounded_edges: self
                .unbounded_edges
                .iter()
                .map(|(i, r)| Unbounded {
                    node: *i,
                    ray: r.clone(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("skeleton serialises")
    }
}

/// 1-skeleton of `p` using the tests selected by `method`.
///
/// LP tests need an up-monotone generator description (converted from `p`
/// when necessary). With more than one test, any disagreement aborts with
/// [`Error::MethodDisagreement`] naming the first offending pair.
pub fn build_skeleton(p: &Representation, method: Method) -> Result<SkeletonGraph> {
    // a V input may carry redundant generators; reduce it to the minimal ones
    let v = match p {
        Representation::H(h) => h_to_v(h)?,
        Representation::V(v) if v.is_empty() => v.clone(),
        Representation::V(v) => h_to_v(&v_to_h(v)?)?,
    };
    if v.is_empty() {
        return Ok(SkeletonGraph::default());
    }
    let tests = method.tests();
    let needs_rank = tests.contains(&AdjacencyTest::Rank);
    let h = if needs_rank { Some(p.to_hrep()?) } else { None };
    if tests.iter().any(|t| *t != AdjacencyTest::Rank) {
        require_orthant_recession(&v)?;
    }

    let nodes = v.vertices().to_vec();
    let pairs: Vec<(usize, usize)> = (0..nodes.len())
        .flat_map(|i| (i + 1..nodes.len()).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<PairVerdict> = pairs
        .par_iter()
        .map(|&(i, j)| pair_verdict(&v, h.as_ref(), &nodes[i], &nodes[j], tests))
        .collect::<Result<Vec<_>>>()?;

    let mut graph = SkeletonGraph {
        nodes,
        ..Default::default()
    };
    for (&(i, j), verdict) in pairs.iter().zip(&verdicts) {
        match verdict.agreed() {
            None => {
                return Err(Error::MethodDisagreement {
                    u: graph.nodes[i].to_string(),
                    v: graph.nodes[j].to_string(),
                    detail: verdict.describe(),
                })
            }
            Some(true) => {
                graph.edges.insert((i, j));
                graph
                    .provenance
                    .insert((i, j), verdict.results().map(|(t, _)| t).collect());
            }
            Some(false) => {}
        }
    }
    if let Some(h) = &h {
        for (i, x) in graph.nodes.iter().enumerate() {
            for r in v.rays() {
                if h.is_unbounded_edge(x, r)? {
                    graph.unbounded_edges.push((i, r.clone()));
                }
            }
        }
    }
    Ok(graph)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairMismatch {
    pub u: QVector,
    pub v: QVector,
    pub in_sub: bool,
    pub in_super: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrubinVerdict {
    Holds,
    Fails {
        missing_nodes: Vec<QVector>,
        mismatched: Vec<PairMismatch>,
    },
}

impl TrubinVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, TrubinVerdict::Holds)
    }
}

/// Whether `sub` is an induced subgraph of `sup`: every node of `sub` is a
/// node of `sup`, and among those nodes edges coincide.
pub fn trubin_check(sub: &SkeletonGraph, sup: &SkeletonGraph) -> TrubinVerdict {
    let missing_nodes: Vec<QVector> = sub
        .nodes
        .iter()
        .filter(|x| sup.node_index(x).is_none())
        .cloned()
        .collect();
    let mut mismatched = Vec::new();
    for i in 0..sub.nodes.len() {
        for j in i + 1..sub.nodes.len() {
            let (u, v) = (&sub.nodes[i], &sub.nodes[j]);
            if sup.node_index(u).is_none() || sup.node_index(v).is_none() {
                continue;
            }
            let in_sub = sub.edges.contains(&(i, j));
            let in_super = sup.has_edge(u, v);
            if in_sub != in_super {
                mismatched.push(PairMismatch {
                    u: u.clone(),
                    v: v.clone(),
                    in_sub,
                    in_super,
                });
            }
        }
    }
    if missing_nodes.is_empty() && mismatched.is_empty() {
        TrubinVerdict::Holds
    } else {
        TrubinVerdict::Fails {
            missing_nodes,
            mismatched,
        }
    }
}
