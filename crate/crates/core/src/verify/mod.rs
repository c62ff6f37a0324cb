//! Statement checks on covering instances.
//!
//! Each checker computes both sides of a statement by separate code paths
//! (geometry by double description versus lifting and cover enumeration;
//! LP tests on generators versus rank on inequalities) and returns a
//! [`CheckReport`]. A `VIOLATED` report carries a payload that
//! [`recheck_violation`] can test again with the brute-force oracles.
//!
//! Reports are written as JSON lines with the fields `statement`,
//! `instance` (`seed`, `n`, `rows`), `verdict`, `facts` (`claim`, `holds`)
//! and `violation` (`null`, or an object tagged by `kind`).

pub mod oracle;
pub mod random;

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::covering::{
    binary_hull, dominant, dominant_truncated, lift, lift_closure, minimal_covers, relaxation,
    CoveringMatrix, LiftMask, PolyhedronKind,
};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpOutcome, Relation, Sense};
use crate::numeric::{QVector, Rational};
use crate::polyhedron::{h_to_v, v_to_h, HRep, Representation, VRep};
use crate::skeleton::{
    build_skeleton, pair_verdict, require_orthant_recession, trubin_check, AdjacencyTest, Method,
    PairMismatch, PairVerdict, SkeletonGraph, TrubinVerdict,
};

pub use random::{graph_sweep, random_graph_instance, random_instance, InstanceSpec, GENERATOR};

/// Column cap for checks that enumerate covers or masks.
pub const MAX_ENUM_COLUMNS: usize = 10;
/// Column cap for checks that run a full double description.
pub const MAX_DD_COLUMNS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StatementId {
    /// A vertex of an up-monotone polyhedron dominates no other point of it.
    Lem21,
    /// Rank, decomposition-LP and certificate-LP adjacency agree.
    Prop22,
    /// Vertices and edges of `T` that lie in `S ⊆ T` stay vertices and edges of `S`.
    Lem31,
    /// Every vertex of `Qbar(A)` is a lift of a vertex of `Q(A)`.
    Thm34,
    /// `V(Qbar*(A))` equals the lift closure of the minimal covers.
    Cor35,
    /// `V(Qbar*(A))` is binary, and every binary cover is a vertex.
    Cor36,
    /// `Q*(A)` and its hypercube truncation agree on adjacency.
    Thm37,
    /// `Q*(A)` and the binary hull `Qbar*(A)` agree on adjacency.
    Claim1,
    /// The circulant instance where the relaxation loses the property.
    TrubinFailRelax,
    /// Edge-node incidence matrices: `Qbar(A)` has the property w.r.t. `Qbar*(A)`.
    TrubinGraphCase,
}

impl StatementId {
    /// The statements that apply to every covering matrix.
    pub const PER_MATRIX: [StatementId; 8] = [
        StatementId::Lem21,
        StatementId::Prop22,
        StatementId::Lem31,
        StatementId::Thm34,
        StatementId::Cor35,
        StatementId::Cor36,
        StatementId::Thm37,
        StatementId::Claim1,
    ];

    pub const ALL: [StatementId; 10] = [
        StatementId::Lem21,
        StatementId::Prop22,
        StatementId::Lem31,
        StatementId::Thm34,
        StatementId::Cor35,
        StatementId::Cor36,
        StatementId::Thm37,
        StatementId::Claim1,
        StatementId::TrubinFailRelax,
        StatementId::TrubinGraphCase,
    ];

    pub fn id(self) -> &'static str {
        match self {
            StatementId::Lem21 => "LEM21",
            StatementId::Prop22 => "PROP22",
            StatementId::Lem31 => "LEM31",
            StatementId::Thm34 => "THM34",
            StatementId::Cor35 => "COR35",
            StatementId::Cor36 => "COR36",
            StatementId::Thm37 => "THM37",
            StatementId::Claim1 => "CLAIM1",
            StatementId::TrubinFailRelax => "TRUBIN_FAIL_RELAX",
            StatementId::TrubinGraphCase => "TRUBIN_GRAPH_CASE",
        }
    }

    /// Lower-case name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            StatementId::Lem21 => "lem21",
            StatementId::Prop22 => "prop22",
            StatementId::Lem31 => "lem31",
            StatementId::Thm34 => "thm34",
            StatementId::Cor35 => "cor35",
            StatementId::Cor36 => "cor36",
            StatementId::Thm37 => "thm37",
            StatementId::Claim1 => "claim1",
            StatementId::TrubinFailRelax => "relax-counterexample",
            StatementId::TrubinGraphCase => "graph-case",
        }
    }

    pub fn from_cli_name(s: &str) -> Option<StatementId> {
        StatementId::ALL.into_iter().find(|id| id.cli_name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    Violated,
}

/// The matrix a report was computed on, with the generator seed if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub seed: Option<u64>,
    pub n: usize,
    pub rows: Vec<String>,
}

impl Instance {
    pub fn of(a: &CoveringMatrix, seed: Option<u64>) -> Instance {
        Instance {
            seed,
            n: a.n(),
            rows: a.row_strings(),
        }
    }

    pub fn matrix(&self) -> Result<CoveringMatrix> {
        let rows: Vec<Vec<bool>> = self
            .rows
            .iter()
            .map(|r| r.chars().map(|c| c == '1').collect())
            .collect();
        Ok(CoveringMatrix::new(self.n, rows)?.matrix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub claim: String,
    pub holds: bool,
}

impl Fact {
    fn new(claim: impl Into<String>, holds: bool) -> Fact {
        Fact {
            claim: claim.into(),
            holds,
        }
    }
}

/// Counterexample data. Every variant names the polyhedra and points
/// involved so it can be checked again from the matrix alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `below <= vertex`, `below != vertex`, both in the polyhedron.
    DominatedVertex {
        polyhedron: PolyhedronKind,
        vertex: QVector,
        below: QVector,
    },
    MethodDisagreement {
        polyhedron: PolyhedronKind,
        u: QVector,
        v: QVector,
        rank: bool,
        decomposition: bool,
        certificate: bool,
    },
    /// A vertex of `outer` lying in `inner` that is not a vertex of `inner`.
    VertexLost {
        outer: PolyhedronKind,
        inner: PolyhedronKind,
        vertex: QVector,
    },
    /// Adjacent in `outer`, both vertices of `inner`, not adjacent there.
    EdgeLost {
        outer: PolyhedronKind,
        inner: PolyhedronKind,
        u: QVector,
        v: QVector,
    },
    /// A vertex of `Qbar(A)` that is no lift of a vertex of `Q(A)`.
    UnliftedVertex {
        vertex: QVector,
    },
    /// Difference between geometric `V(Qbar*(A))` and the lift closure.
    VertexSetMismatch {
        only_geometric: Vec<QVector>,
        only_lifted: Vec<QVector>,
    },
    FractionalVertex {
        vertex: QVector,
    },
    /// A binary cover that is not a vertex of `Qbar*(A)`.
    BinaryPointNotVertex {
        point: QVector,
    },
    /// `sub` is not an induced subgraph of `sup`.
    InducedSubgraph {
        sub: PolyhedronKind,
        sup: PolyhedronKind,
        missing_nodes: Vec<QVector>,
        mismatched: Vec<PairMismatch>,
    },
    /// Claims of the fixed circulant instance that did not hold.
    Facts {
        failed: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub statement: StatementId,
    pub instance: Instance,
    pub verdict: Verdict,
    pub facts: Vec<Fact>,
    pub violation: Option<Violation>,
}

impl CheckReport {
    fn new(
        statement: StatementId,
        a: &CoveringMatrix,
        facts: Vec<Fact>,
        violation: Option<Violation>,
    ) -> Self {
        let verdict = if violation.is_none() {
            Verdict::Confirmed
        } else {
            Verdict::Violated
        };
        CheckReport {
            statement,
            instance: Instance::of(a, None),
            verdict,
            facts,
            violation,
        }
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.instance.seed = seed;
        self
    }

    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
    }

    /// One line of the JSON-lines report stream, without the newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }
}

fn require_columns(a: &CoveringMatrix, cap: usize, what: &'static str) -> Result<()> {
    if a.n() > cap {
        return Err(Error::CapExceeded {
            what,
            value: a.n(),
            cap,
        });
    }
    Ok(())
}

fn require_dd(a: &CoveringMatrix) -> Result<()> {
    require_columns(a, MAX_DD_COLUMNS, "columns for double description")
}

fn require_enum(a: &CoveringMatrix) -> Result<()> {
    require_columns(a, MAX_ENUM_COLUMNS, "columns for cover enumeration")
}

fn list(points: &[QVector]) -> String {
    let s: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", s.join(", "))
}

fn vertices_of(h: &HRep) -> Result<Vec<QVector>> {
    Ok(h_to_v(h)?.vertices().to_vec())
}

/// Generator form of `Q(A)` or `Q*(A)` together with an inequality form.
fn up_monotone_pair(a: &CoveringMatrix, kind: PolyhedronKind) -> Result<(VRep, HRep)> {
    match kind {
        PolyhedronKind::Q => {
            let h = relaxation(a);
            Ok((h_to_v(&h)?, h))
        }
        PolyhedronKind::QStar => {
            let v = dominant(a)?;
            let h = v_to_h(&v)?;
            Ok((v, h))
        }
        other => Err(Error::InvalidSpec(format!(
            "{} is not up-monotone",
            other.name()
        ))),
    }
}

/// Vertices are minimal on `Q(A)` and `Q*(A)`: minimising `1.x` over the polyhedron
/// intersected with `{x <= xi}` returns `xi` itself, so nothing else lies below
/// a vertex; in particular the vertices form an antichain.
pub fn check_lem21(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let n = a.n();
    let mut facts = Vec::new();
    let mut violation = None;
    for kind in [PolyhedronKind::Q, PolyhedronKind::QStar] {
        let (v, h) = up_monotone_pair(a, kind)?;
        let verts = v.vertices();
        let antichain = verts.iter().all(|x| {
            verts
                .iter()
                .all(|y| x == y || !x.dominates(y).expect("same dim"))
        });
        facts.push(Fact::new(
            format!(
                "{}: the {} vertices form an antichain",
                kind.name(),
                verts.len()
            ),
            antichain,
        ));
        let mut all_minimal = true;
        for xi in verts {
            let mut prog = LinearProgram::new(Sense::Min, QVector::ones(n));
            for (row, b) in h.constraints() {
                prog.constrain(row.clone(), Relation::Ge, b.clone());
            }
            for i in 0..n {
                prog.constrain(QVector::unit(n, i), Relation::Le, xi[i].clone());
            }
            let LpOutcome::Optimal(sol) = lp::solve(&prog)? else {
                unreachable!("xi is feasible and the objective is bounded below on the orthant")
            };
            if sol.point != *xi && violation.is_none() {
                all_minimal = false;
                violation = Some(Violation::DominatedVertex {
                    polyhedron: kind,
                    vertex: xi.clone(),
                    below: sol.point,
                });
            }
        }
        facts.push(Fact::new(
            format!("{}: no point lies below a vertex", kind.name()),
            all_minimal,
        ));
    }
    Ok(CheckReport::new(StatementId::Lem21, a, facts, violation))
}

/// Outcome of running all three adjacency tests on every vertex pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub pairs: usize,
    pub edges: usize,
    pub disagreements: Vec<(QVector, QVector, PairVerdict)>,
}

/// Runs rank, decomposition LP and certificate LP on every vertex pair of
/// `Q(A)` or `Q*(A)` without stopping at the first disagreement.
pub fn three_way_agreement(a: &CoveringMatrix, kind: PolyhedronKind) -> Result<Agreement> {
    let (v, h) = up_monotone_pair(a, kind)?;
    require_orthant_recession(&v)?;
    let nodes = v.vertices();
    let pairs: Vec<(usize, usize)> = (0..nodes.len())
        .flat_map(|i| (i + 1..nodes.len()).map(move |j| (i, j)))
        .collect();
    let tests = [
        AdjacencyTest::Rank,
        AdjacencyTest::Decomposition,
        AdjacencyTest::Certificate,
    ];
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| pair_verdict(&v, Some(&h), &nodes[i], &nodes[j], &tests))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Agreement {
        pairs: pairs.len(),
        edges: 0,
        disagreements: Vec::new(),
    };
    for (&(i, j), verdict) in pairs.iter().zip(verdicts) {
        match verdict.agreed() {
            Some(true) => out.edges += 1,
            Some(false) => {}
            None => out
                .disagreements
                .push((nodes[i].clone(), nodes[j].clone(), verdict)),
        }
    }
    Ok(out)
}

pub fn check_prop22(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let mut facts = Vec::new();
    let mut violation = None;
    for kind in [PolyhedronKind::QStar, PolyhedronKind::Q] {
        let agr = three_way_agreement(a, kind)?;
        facts.push(Fact::new(
            format!(
                "{}: rank, decomposition-lp and certificate-lp agree on {} of {} pairs ({} edges)",
                kind.name(),
                agr.pairs - agr.disagreements.len(),
                agr.pairs,
                agr.edges
            ),
            agr.disagreements.is_empty(),
        ));
        if let (None, Some((u, v, pv))) = (&violation, agr.disagreements.first()) {
            violation = Some(Violation::MethodDisagreement {
                polyhedron: kind,
                u: u.clone(),
                v: v.clone(),
                rank: pv.rank.unwrap_or_default(),
                decomposition: pv.decomposition.unwrap_or_default(),
                certificate: pv.certificate.unwrap_or_default(),
            });
        }
    }
    Ok(CheckReport::new(StatementId::Prop22, a, facts, violation))
}

/// Skeleton of one of the four polyhedra, each built from its own natural
/// description.
fn skeleton_of(a: &CoveringMatrix, kind: PolyhedronKind, method: Method) -> Result<SkeletonGraph> {
    let rep = match kind {
        PolyhedronKind::Q => Representation::H(relaxation(a)),
        PolyhedronKind::QBar => Representation::H(relaxation(a).truncate_hypercube()),
        PolyhedronKind::QStar => Representation::V(dominant(a)?),
        PolyhedronKind::QStarBar => Representation::H(dominant_truncated(a)?),
    };
    build_skeleton(&rep, method)
}

fn in_unit_cube(x: &QVector) -> bool {
    x.iter()
        .all(|v| !(*v < Rational::zero()) && *v <= Rational::one())
}

/// Vertices of `R` inside `P ⊆ R` are vertices of `P`, and edges of `R`
/// between such vertices are edges of `P`; for `Qbar(A) ⊆ Q(A)` and
/// `Qbar*(A) ⊆ Q*(A)`.
pub fn check_lem31(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let mut facts = Vec::new();
    let mut violation = None;
    for (outer, inner) in [
        (PolyhedronKind::Q, PolyhedronKind::QBar),
        (PolyhedronKind::QStar, PolyhedronKind::QStarBar),
    ] {
        let t = skeleton_of(a, outer, Method::Rank)?;
        let s = skeleton_of(a, inner, Method::Rank)?;
        let shared: Vec<&QVector> = t.nodes.iter().filter(|x| in_unit_cube(x)).collect();
        let lost: Vec<&QVector> = shared
            .iter()
            .copied()
            .filter(|x| s.node_index(x).is_none())
            .collect();
        facts.push(Fact::new(
            format!(
                "{} of the {} vertices of {} lie in {} and are vertices there",
                shared.len(),
                t.nodes.len(),
                outer.name(),
                inner.name()
            ),
            lost.is_empty(),
        ));
        if let (None, Some(x)) = (&violation, lost.first()) {
            violation = Some(Violation::VertexLost {
                outer,
                inner,
                vertex: (*x).clone(),
            });
        }
        let mut kept = 0;
        let mut dropped = None;
        for &(i, j) in &t.edges {
            let (u, v) = (&t.nodes[i], &t.nodes[j]);
            if in_unit_cube(u) && in_unit_cube(v) {
                if s.has_edge(u, v) {
                    kept += 1;
                } else if dropped.is_none() {
                    dropped = Some((u.clone(), v.clone()));
                }
            }
        }
        facts.push(Fact::new(
            format!(
                "{kept} edges of {} between such vertices are edges of {}",
                outer.name(),
                inner.name()
            ),
            dropped.is_none(),
        ));
        if let (None, Some((u, v))) = (&violation, dropped) {
            violation = Some(Violation::EdgeLost { outer, inner, u, v });
        }
    }
    Ok(CheckReport::new(StatementId::Lem31, a, facts, violation))
}

fn mask_text(mask: &LiftMask) -> String {
    let s: Vec<String> = mask.indices().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", s.join(","))
}

/// A vertex `zeta` of `Q(A)` and mask `I` with `lift(I, zeta) = x`, taking the
/// first `zeta` in lexicographic order and the smallest such `I`.
fn lift_preimage(x: &QVector, base: &[QVector]) -> Result<Option<(LiftMask, QVector)>> {
    for zeta in base {
        let mask = LiftMask::new((0..x.dim()).filter(|&i| x[i] != zeta[i]));
        if lift(&mask, zeta)? == *x {
            return Ok(Some((mask, zeta.clone())));
        }
    }
    Ok(None)
}

/// Lift statement on `R = Q(A)`, `P = Qbar(A)`, without the binary hypothesis:
/// every vertex of `P` is `lift(I, zeta)` for some `I` and vertex `zeta` of `R`.
pub fn check_thm34(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    let base = vertices_of(&relaxation(a))?;
    let verts = vertices_of(&relaxation(a).truncate_hypercube())?;
    let mut facts = Vec::new();
    let mut violation = None;
    for x in &verts {
        match lift_preimage(x, &base)? {
            Some((mask, zeta)) => facts.push(Fact::new(
                format!("{x} = lift({}, {zeta})", mask_text(&mask)),
                true,
            )),
            None => {
                facts.push(Fact::new(format!("{x} is a lift of a vertex of q"), false));
                violation.get_or_insert(Violation::UnliftedVertex { vertex: x.clone() });
            }
        }
    }
    Ok(CheckReport::new(StatementId::Thm34, a, facts, violation))
}

fn set_difference(a: &[QVector], b: &[QVector]) -> Vec<QVector> {
    let b: BTreeSet<&QVector> = b.iter().collect();
    a.iter().filter(|x| !b.contains(x)).cloned().collect()
}

/// Geometric `V(Qbar*(A))` (double description on the facets
/// of `Q*(A)` cut by the hypercube) equals `lift_closure(minimal_covers(A))`.
pub fn check_cor35(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let geometric = vertices_of(&dominant_truncated(a)?)?;
    let lifted = lift_closure(&minimal_covers(a)?)?;
    let only_geometric = set_difference(&geometric, &lifted);
    let only_lifted = set_difference(&lifted, &geometric);
    let equal = only_geometric.is_empty() && only_lifted.is_empty();
    let facts = vec![
        Fact::new(format!("{} geometric vertices", geometric.len()), true),
        Fact::new(format!("{} lifts of minimal covers", lifted.len()), true),
        Fact::new("the two vertex sets are equal", equal),
    ];
    let violation = (!equal).then_some(Violation::VertexSetMismatch {
        only_geometric,
        only_lifted,
    });
    Ok(CheckReport::new(StatementId::Cor35, a, facts, violation))
}

/// Integrality of `Qbar*(A)`: every geometric vertex of `Qbar*(A)` is
/// binary, and every binary cover is one of them.
pub fn check_cor36(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let h = dominant_truncated(a)?;
    let verts = vertices_of(&h)?;
    let fractional: Vec<&QVector> = verts.iter().filter(|x| !x.is_binary()).collect();
    let covers = oracle::binary_covers(a);
    let mut not_vertex = None;
    for x in &covers {
        if !h.is_vertex(x)? {
            not_vertex = Some(x.clone());
            break;
        }
    }
    let facts = vec![
        Fact::new(
            format!("all {} vertices are binary", verts.len()),
            fractional.is_empty(),
        ),
        Fact::new(
            format!("all {} binary covers are vertices", covers.len()),
            not_vertex.is_none(),
        ),
    ];
    let violation = match (fractional.first(), not_vertex) {
        (Some(x), _) => Some(Violation::FractionalVertex {
            vertex: (*x).clone(),
        }),
        (None, Some(p)) => Some(Violation::BinaryPointNotVertex { point: p }),
        (None, None) => None,
    };
    Ok(CheckReport::new(StatementId::Cor36, a, facts, violation))
}

fn trubin_facts(
    sub_kind: PolyhedronKind,
    sub: &SkeletonGraph,
    sup_kind: PolyhedronKind,
    sup: &SkeletonGraph,
    facts: &mut Vec<Fact>,
) -> Option<Violation> {
    facts.push(Fact::new(
        format!(
            "{}: {} vertices, {} edges",
            sub_kind.name(),
            sub.nodes.len(),
            sub.edge_count()
        ),
        true,
    ));
    facts.push(Fact::new(
        format!(
            "{}: {} vertices, {} edges",
            sup_kind.name(),
            sup.nodes.len(),
            sup.edge_count()
        ),
        true,
    ));
    match trubin_check(sub, sup) {
        TrubinVerdict::Holds => {
            facts.push(Fact::new(
                format!(
                    "{} is an induced subgraph of {}",
                    sub_kind.name(),
                    sup_kind.name()
                ),
                true,
            ));
            None
        }
        TrubinVerdict::Fails {
            missing_nodes,
            mismatched,
        } => {
            facts.push(Fact::new(
                format!(
                    "{} is an induced subgraph of {}",
                    sub_kind.name(),
                    sup_kind.name()
                ),
                false,
            ));
            Some(Violation::InducedSubgraph {
                sub: sub_kind,
                sup: sup_kind,
                missing_nodes,
                mismatched,
            })
        }
    }
}

/// Trubin property with `R = Q*(A)` and `P = R ∩ [0,1]^n` given by the facets of
/// `R` plus the cube. The skeleton of `R` uses all three tests; that of `P`
/// the rank test on its inequalities.
pub fn check_thm37(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let sub = skeleton_of(a, PolyhedronKind::QStar, Method::Both)?;
    let sup = skeleton_of(a, PolyhedronKind::QStarBar, Method::Rank)?;
    let mut facts = vec![Fact::new(
        "every vertex of qstar is binary",
        sub.nodes.iter().all(|x| x.is_binary()),
    )];
    let violation = trubin_facts(
        PolyhedronKind::QStar,
        &sub,
        PolyhedronKind::QStarBar,
        &sup,
        &mut facts,
    );
    Ok(CheckReport::new(StatementId::Thm37, a, facts, violation))
}

/// Trubin property with `Qbar*(A)` taken as the convex hull of the binary covers,
/// plus the identity `Qbar*(A) = Q*(A) ∩ [0,1]^n` on vertex sets.
pub fn check_claim1(a: &CoveringMatrix) -> Result<CheckReport> {
    require_dd(a)?;
    require_enum(a)?;
    let sub = skeleton_of(a, PolyhedronKind::QStar, Method::Both)?;
    let sup = build_skeleton(&Representation::V(binary_hull(a)?), Method::Rank)?;
    let truncated = vertices_of(&dominant_truncated(a)?)?;
    let only_geometric = set_difference(&truncated, &sup.nodes);
    let only_lifted = set_difference(&sup.nodes, &truncated);
    let identity = only_geometric.is_empty() && only_lifted.is_empty();
    let mut facts = vec![Fact::new(
        "the binary hull and the truncated dominant have the same vertices",
        identity,
    )];
    let trubin = trubin_facts(
        PolyhedronKind::QStar,
        &sub,
        PolyhedronKind::QStarBar,
        &sup,
        &mut facts,
    );
    let violation = if identity {
        trubin
    } else {
        Some(Violation::VertexSetMismatch {
            only_geometric,
            only_lifted,
        })
    };
    Ok(CheckReport::new(StatementId::Claim1, a, facts, violation))
}

/// The circulant instance: `V(Qbar(A))` is the five listed points, and
/// `(1,1,0)`, `(0,1,1)` are adjacent in `Qbar(A)` and `Q*(A)` but not in
/// `Q(A)`, so the skeleton of `Q*(A)` is not induced in that of `Q(A)`.
pub fn check_relaxation_counterexample() -> Result<CheckReport> {
    let a = CoveringMatrix::circulant3();
    let half = Rational::new(1.into(), 2.into());
    let mut expected: Vec<QVector> = ["0,1,1", "1,0,1", "1,1,0", "1,1,1"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .chain(std::iter::once(QVector::new(vec![half; 3])))
        .collect();
    expected.sort();
    let (xi, eta): (QVector, QVector) = (
        "1,1,0".parse().expect("literal"),
        "0,1,1".parse().expect("literal"),
    );

    let qbar = skeleton_of(&a, PolyhedronKind::QBar, Method::Rank)?;
    let q = skeleton_of(&a, PolyhedronKind::Q, Method::Rank)?;
    let qstar = skeleton_of(&a, PolyhedronKind::QStar, Method::Both)?;
    let fails_on_pair = match trubin_check(&qstar, &q) {
        TrubinVerdict::Fails { mismatched, .. } => mismatched
            .iter()
            .any(|m| [&m.u, &m.v] == [&eta, &xi] || [&m.u, &m.v] == [&xi, &eta]),
        TrubinVerdict::Holds => false,
    };
    let facts = vec![
        Fact::new(
            format!("V(qbar) = {}", list(&expected)),
            qbar.nodes == expected,
        ),
        Fact::new(
            format!("{xi} and {eta} are adjacent in qbar"),
            qbar.has_edge(&xi, &eta),
        ),
        Fact::new(
            format!("{xi} and {eta} are not adjacent in q"),
            q.node_index(&xi).is_some() && !q.has_edge(&xi, &eta),
        ),
        Fact::new(
            format!("{xi} and {eta} are adjacent in qstar"),
            qstar.has_edge(&xi, &eta),
        ),
        Fact::new(
            format!("qstar is not an induced subgraph of q, failing on {xi} -- {eta}"),
            fails_on_pair,
        ),
    ];
    let failed: Vec<String> = facts
        .iter()
        .filter(|f| !f.holds)
        .map(|f| f.claim.clone())
        .collect();
    let violation = (!failed.is_empty()).then_some(Violation::Facts { failed });
    Ok(CheckReport::new(
        StatementId::TrubinFailRelax,
        &a,
        facts,
        violation,
    ))
}

/// Edge-node incidence matrices: the skeleton of `Qbar*(A)` is an induced
/// subgraph of that of `Qbar(A)`.
pub fn check_graph_case(a: &CoveringMatrix) -> Result<CheckReport> {
    if let Some(i) = a
        .rows()
        .iter()
        .position(|r| r.iter().filter(|&&b| b).count() != 2)
    {
        return Err(Error::RowSumNotTwo(i + 1));
    }
    require_dd(a)?;
    require_enum(a)?;
    let sub = build_skeleton(&Representation::V(binary_hull(a)?), Method::Rank)?;
    let sup = skeleton_of(a, PolyhedronKind::QBar, Method::Rank)?;
    let mut facts = Vec::new();
    let violation = trubin_facts(
        PolyhedronKind::QStarBar,
        &sub,
        PolyhedronKind::QBar,
        &sup,
        &mut facts,
    );
    Ok(CheckReport::new(
        StatementId::TrubinGraphCase,
        a,
        facts,
        violation,
    ))
}

/// Runs one statement on `a`. [`StatementId::TrubinFailRelax`] ignores `a`
/// and always uses the circulant instance.
pub fn run_statement(id: StatementId, a: &CoveringMatrix) -> Result<CheckReport> {
    match id {
        StatementId::Lem21 => check_lem21(a),
        StatementId::Prop22 => check_prop22(a),
        StatementId::Lem31 => check_lem31(a),
        StatementId::Thm34 => check_thm34(a),
        StatementId::Cor35 => check_cor35(a),
        StatementId::Cor36 => check_cor36(a),
        StatementId::Thm37 => check_thm37(a),
        StatementId::Claim1 => check_claim1(a),
        StatementId::TrubinFailRelax => check_relaxation_counterexample(),
        StatementId::TrubinGraphCase => check_graph_case(a),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub statement: StatementId,
    pub matrix: CoveringMatrix,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobResult {
    pub statement: StatementId,
    pub instance: Instance,
    pub outcome: Result<CheckReport>,
}

/// Runs `jobs` on a pool of `threads` workers (`0` picks the default) and
/// returns the results ordered by statement, then seed, then matrix.
pub fn run_batch(jobs: &[Job], threads: usize) -> Vec<JobResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let mut out: Vec<JobResult> = pool.install(|| {
        jobs.par_iter()
            .map(|j| JobResult {
                statement: j.statement,
                instance: Instance::of(&j.matrix, j.seed),
                outcome: run_statement(j.statement, &j.matrix).map(|r| r.with_seed(j.seed)),
            })
            .collect()
    });
    out.sort_by(|x, y| {
        (x.statement, x.instance.seed, &x.instance.rows).cmp(&(
            y.statement,
            y.instance.seed,
            &y.instance.rows,
        ))
    });
    out
}

/// Inequality description used by the oracles for each polyhedron.
fn oracle_hrep(a: &CoveringMatrix, kind: PolyhedronKind) -> Result<HRep> {
    Ok(match kind {
        PolyhedronKind::Q => relaxation(a),
        PolyhedronKind::QBar => relaxation(a).truncate_hypercube(),
        PolyhedronKind::QStar => v_to_h(&dominant(a)?)?,
        PolyhedronKind::QStarBar => v_to_h(&dominant(a)?)?.truncate_hypercube(),
    })
}

/// Vertices by the oracles: minimal covers by `2^n` enumeration for `Q*(A)`,
/// basic solutions for the rest.
fn oracle_vertices(a: &CoveringMatrix, kind: PolyhedronKind) -> Result<Vec<QVector>> {
    match kind {
        PolyhedronKind::QStar => Ok(oracle::brute_minimal_covers(a)),
        k => oracle::basic_vertices(&oracle_hrep(a, k)?),
    }
}

/// Re-tests the payload of a `VIOLATED` report with the oracles. Returns
/// true when the discrepancy is reproduced, false when it is not (or when
/// the report is `CONFIRMED`).
pub fn recheck_violation(report: &CheckReport) -> Result<bool> {
    let Some(violation) = &report.violation else {
        return Ok(false);
    };
    let a = report.instance.matrix()?;
    match violation {
        Violation::DominatedVertex {
            polyhedron,
            vertex,
            below,
        } => {
            let member = match polyhedron {
                PolyhedronKind::QStar => {
                    oracle::in_dominant(&oracle::brute_minimal_covers(&a), below)?
                }
                k => oracle_hrep(&a, *k)?.contains(below)?,
            };
            Ok(oracle_vertices(&a, *polyhedron)?.contains(vertex)
                && member
                && vertex != below
                && vertex.dominates(below)?)
        }
        Violation::MethodDisagreement {
            polyhedron, u, v, ..
        } => {
            let (vrep, h) = up_monotone_pair(&a, *polyhedron)?;
            let tests = [
                AdjacencyTest::Rank,
                AdjacencyTest::Decomposition,
                AdjacencyTest::Certificate,
            ];
            Ok(pair_verdict(&vrep, Some(&h), u, v, &tests)?
                .agreed()
                .is_none())
        }
        Violation::VertexLost {
            outer,
            inner,
            vertex,
        } => Ok(oracle_vertices(&a, *outer)?.contains(vertex)
            && oracle_hrep(&a, *inner)?.contains(vertex)?
            && !oracle_vertices(&a, *inner)?.contains(vertex)),
        Violation::EdgeLost { outer, inner, u, v } => {
            let (ov, iv) = (oracle_vertices(&a, *outer)?, oracle_vertices(&a, *inner)?);
            let present = [u, v].iter().all(|x| ov.contains(x) && iv.contains(x));
            Ok(present
                && oracle::rank_adjacent(&oracle_hrep(&a, *outer)?, u, v)
                && !oracle::rank_adjacent(&oracle_hrep(&a, *inner)?, u, v))
        }
        Violation::UnliftedVertex { vertex } => {
            if !oracle_vertices(&a, PolyhedronKind::QBar)?.contains(vertex) {
                return Ok(false);
            }
            let base = oracle_vertices(&a, PolyhedronKind::Q)?;
            for zeta in &base {
                for mask in LiftMask::all(a.n()) {
                    if lift(&mask, zeta)? == *vertex {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Violation::VertexSetMismatch {
            only_geometric,
            only_lifted,
        } => {
            let geometric = oracle_vertices(&a, PolyhedronKind::QStarBar)?;
            let lifted = lift_closure(&oracle::brute_minimal_covers(&a))?;
            Ok(set_difference(&geometric, &lifted) == *only_geometric
                && set_difference(&lifted, &geometric) == *only_lifted
                && !(only_geometric.is_empty() && only_lifted.is_empty()))
        }
        Violation::FractionalVertex { vertex } => {
            Ok(!vertex.is_binary()
                && oracle_vertices(&a, PolyhedronKind::QStarBar)?.contains(vertex))
        }
        Violation::BinaryPointNotVertex { point } => {
            let support: Vec<bool> = point.iter().map(|x| x.is_one()).collect();
            Ok(point.is_binary()
                && a.covers(&support)
                && !oracle_vertices(&a, PolyhedronKind::QStarBar)?.contains(point))
        }
        Violation::InducedSubgraph {
            sub,
            sup,
            missing_nodes,
            mismatched,
        } => {
            let (sv, pv) = (oracle_vertices(&a, *sub)?, oracle_vertices(&a, *sup)?);
            let (sh, ph) = (oracle_hrep(&a, *sub)?, oracle_hrep(&a, *sup)?);
            let missing_ok = missing_nodes
                .iter()
                .all(|x| sv.contains(x) && !pv.contains(x));
            let pairs_ok = mismatched.iter().all(|m| {
                m.in_sub != m.in_super
                    && [&m.u, &m.v]
                        .iter()
                        .all(|x| sv.contains(x) && pv.contains(x))
                    && oracle::rank_adjacent(&sh, &m.u, &m.v) == m.in_sub
                    && oracle::rank_adjacent(&ph, &m.u, &m.v) == m.in_super
            });
            Ok(!(missing_nodes.is_empty() && mismatched.is_empty()) && missing_ok && pairs_ok)
        }
        Violation::Facts { failed } => Ok(match check_relaxation_counterexample()?.violation {
            Some(Violation::Facts { failed: again }) => again == *failed,
            _ => false,
        }),
    }
}
