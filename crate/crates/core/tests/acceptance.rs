//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use coverpoly::covering::{build, minimal_covers, relaxation, CoveringMatrix, PolyhedronKind};
use coverpoly::numeric::{ratio, QVector};
use coverpoly::polyhedron::{h_to_v, v_to_h};
use coverpoly::skeleton::{build_skeleton, trubin_check, Method, TrubinVerdict};
use coverpoly::verify::{
    check_relaxation_counterexample, graph_sweep, oracle, random_graph_instance, random_instance,
    run_batch, three_way_agreement, InstanceSpec, Job, JobResult, StatementId,
};

struct Outcome {
    passed: bool,
    detail: String,
    /// JSON-lines output, kept for the determinism criterion.
    lines: Vec<String>,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
        lines: Vec::new(),
    }
}

fn suite() -> Vec<(Option<u64>, CoveringMatrix)> {
    let mut v = vec![(None, CoveringMatrix::circulant3())];
    v.extend((1..=100).map(|s| {
        (
            Some(s),
            random_instance(&InstanceSpec::sweep(s)).expect("valid sweep spec"),
        )
    }));
    v
}

fn graphs() -> Vec<(Option<u64>, CoveringMatrix)> {
    (1..=20)
        .map(|s| {
            let (nodes, edges) = graph_sweep(s);
            (
                Some(s),
                random_graph_instance(s, nodes, edges).expect("valid graph spec"),
            )
        })
        .collect()
}

fn jobs(instances: &[(Option<u64>, CoveringMatrix)], statements: &[StatementId]) -> Vec<Job> {
    statements
        .iter()
        .flat_map(|&statement| {
            instances.iter().map(move |(seed, m)| Job {
                statement,
                matrix: m.clone(),
                seed: *seed,
            })
        })
        .collect()
}

/// All reports CONFIRMED and no errors; returns the JSON lines.
fn summarise(results: &[JobResult]) -> Outcome {
    let mut lines = Vec::new();
    let mut bad = Vec::new();
    for r in results {
        match &r.outcome {
            Ok(rep) => {
                lines.push(rep.to_json_line());
                if !rep.confirmed() {
                    bad.push(format!(
                        "{} seed {:?} VIOLATED",
                        r.statement.id(),
                        r.instance.seed
                    ));
                }
            }
            Err(e) => bad.push(format!(
                "{} seed {:?}: {e}",
                r.statement.id(),
                r.instance.seed
            )),
        }
    }
    let detail = if bad.is_empty() {
        format!("{} reports CONFIRMED", results.len())
    } else {
        format!(
            "{} of {} failed, first: {}",
            bad.len(),
            results.len(),
            bad[0]
        )
    };
    Outcome {
        passed: bad.is_empty(),
        detail,
        lines,
    }
}

fn q(s: &str) -> QVector {
    s.parse().expect("literal point")
}

fn criterion_1() -> Outcome {
    let a = CoveringMatrix::circulant3();
    let half = ratio(1, 2);
    let mut expected = vec![
        q("1,1,0"),
        q("0,1,1"),
        q("1,0,1"),
        q("1,1,1"),
        QVector::new(vec![half; 3]),
    ];
    expected.sort();
    let (xi, eta) = (q("1,1,0"), q("0,1,1"));
    let run = || -> coverpoly::Result<Vec<(String, bool)>> {
        let qbar_v = h_to_v(&relaxation(&a).truncate_hypercube())?;
        let qbar = build_skeleton(&build(&a, PolyhedronKind::QBar)?, Method::Rank)?;
        let qrel = build_skeleton(&build(&a, PolyhedronKind::Q)?, Method::Both)?;
        let qstar = build_skeleton(&build(&a, PolyhedronKind::QStar)?, Method::Both)?;
        let names_pair = match trubin_check(&qstar, &qrel) {
            TrubinVerdict::Fails { mismatched, .. } => mismatched
                .iter()
                .any(|m| (m.u == xi && m.v == eta) || (m.u == eta && m.v == xi)),
            TrubinVerdict::Holds => false,
        };
        Ok(vec![
            (
                "V(Qbar) is the five listed points".into(),
                qbar_v.vertices() == expected.as_slice(),
            ),
            ("adjacent in Qbar".into(), qbar.has_edge(&xi, &eta)),
            (
                "not adjacent in Q".into(),
                qrel.node_index(&xi).is_some() && !qrel.has_edge(&xi, &eta),
            ),
            ("adjacent in Q*".into(), qstar.has_edge(&xi, &eta)),
            ("trubin(Q*, Q) fails on the pair".into(), names_pair),
        ])
    };
    match (run(), check_relaxation_counterexample()) {
        (Ok(facts), Ok(report)) => {
            let failed: Vec<&str> = facts
                .iter()
                .filter(|(_, ok)| !ok)
                .map(|(s, _)| s.as_str())
                .collect();
            let passed = failed.is_empty() && report.confirmed();
            let detail = if passed {
                "5 vertices, pair (1,1,0)-(0,1,1) edge/non-edge/edge".to_string()
            } else {
                format!("failed: {failed:?}")
            };
            Outcome {
                passed,
                detail,
                lines: vec![report.to_json_line()],
            }
        }
        (Err(e), _) | (_, Err(e)) => outcome(false, format!("error: {e}")),
    }
}

fn criterion_2() -> Outcome {
    let statements = [StatementId::Thm34, StatementId::Cor35, StatementId::Cor36];
    summarise(&run_batch(&jobs(&suite(), &statements), 0))
}

fn criterion_3() -> Outcome {
    let statements = [StatementId::Thm37, StatementId::Claim1];
    summarise(&run_batch(&jobs(&suite(), &statements), 0))
}

fn criterion_4() -> Outcome {
    let (mut pairs, mut disagreements) = (0, 0);
    for (seed, a) in suite() {
        match three_way_agreement(&a, PolyhedronKind::QStar) {
            Ok(agr) => {
                pairs += agr.pairs;
                disagreements += agr.disagreements.len();
            }
            Err(e) => return outcome(false, format!("seed {seed:?}: {e}")),
        }
    }
    outcome(
        disagreements == 0,
        format!("{pairs} vertex pairs of Q*, {disagreements} disagreements"),
    )
}

fn criterion_5() -> Outcome {
    let (mut covers_checked, mut hv_checked) = (0, 0);
    for (seed, a) in suite() {
        if a.n() <= 8 {
            match minimal_covers(&a) {
                Ok(c) if c == oracle::brute_minimal_covers(&a) => covers_checked += 1,
                Ok(_) => {
                    return outcome(
                        false,
                        format!("seed {seed:?}: minimal covers differ from brute force"),
                    )
                }
                Err(e) => return outcome(false, format!("seed {seed:?}: {e}")),
            }
        }
        if a.n() <= 5 {
            let star = match build(&a, PolyhedronKind::QStar)
                .and_then(|r| r.to_vrep())
                .and_then(|v| v_to_h(&v))
            {
                Ok(h) => h,
                Err(e) => return outcome(false, format!("seed {seed:?}: {e}")),
            };
            for h in [
                relaxation(&a),
                relaxation(&a).truncate_hypercube(),
                star.truncate_hypercube(),
            ] {
                let dd = h_to_v(&h).map(|v| v.vertices().to_vec());
                let basic = oracle::basic_vertices(&h);
                match (dd, basic) {
                    (Ok(x), Ok(y)) if x == y => hv_checked += 1,
                    (Ok(_), Ok(_)) => {
                        return outcome(
                            false,
                            format!("seed {seed:?}: h_to_v differs from basic solutions"),
                        )
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        return outcome(false, format!("seed {seed:?}: {e}"))
                    }
                }
            }
        }
    }
    outcome(true, format!("{covers_checked} cover enumerations, {hv_checked} vertex enumerations match the oracles"))
}

fn criterion_6() -> Outcome {
    summarise(&run_batch(
        &jobs(&graphs(), &[StatementId::TrubinGraphCase]),
        0,
    ))
}

fn criterion_7(first: &[(usize, Vec<String>)]) -> Outcome {
    // rerun on a single worker: same seeds, same bytes regardless of scheduling
    let again = |c: usize| -> Vec<String> {
        match c {
            1 => vec![check_relaxation_counterexample()
                .expect("circulant check")
                .to_json_line()],
            2 => {
                summarise(&run_batch(
                    &jobs(
                        &suite(),
                        &[StatementId::Thm34, StatementId::Cor35, StatementId::Cor36],
                    ),
                    1,
                ))
                .lines
            }
            3 => {
                summarise(&run_batch(
                    &jobs(&suite(), &[StatementId::Thm37, StatementId::Claim1]),
                    1,
                ))
                .lines
            }
            6 => {
                summarise(&run_batch(
                    &jobs(&graphs(), &[StatementId::TrubinGraphCase]),
                    1,
                ))
                .lines
            }
            _ => unreachable!(),
        }
    };
    let mut compared = 0;
    for (c, lines) in first {
        if lines.is_empty() || again(*c) != *lines {
            return outcome(false, format!("criterion {c} output changed on rerun"));
        }
        compared += lines.len();
    }
    outcome(
        true,
        format!("{compared} JSON lines byte-identical on rerun"),
    )
}

/// Number, name, runtime limit and body.
type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        (
            1,
            "circulant reproduction",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            2,
            "lift and integrality suite",
            Duration::from_secs(300),
            criterion_2,
        ),
        (
            3,
            "Trubin property suite",
            Duration::from_secs(600),
            criterion_3,
        ),
        (
            4,
            "three adjacency methods agree",
            Duration::from_secs(600),
            criterion_4,
        ),
        (
            5,
            "oracle equivalence",
            Duration::from_secs(600),
            criterion_5,
        ),
        (
            6,
            "graph incidence case",
            Duration::from_secs(300),
            criterion_6,
        ),
    ];
    let mut all_passed = true;
    let mut kept = Vec::new();
    let mut report = |id: usize, name: &str, o: &Outcome, elapsed: Duration, limit: Duration| {
        let passed = o.passed && elapsed <= limit;
        all_passed &= passed;
        let timing = if elapsed <= limit {
            String::new()
        } else {
            format!("; over the {limit:?} limit")
        };
        println!(
            "acceptance criterion {id} ({name}): {} [{:.2?}] {}{timing}",
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            o.detail
        );
    };
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let o = f();
        report(id, name, &o, start.elapsed(), limit);
        if !o.lines.is_empty() {
            kept.push((id, o.lines));
        }
    }
    let start = Instant::now();
    let o = criterion_7(&kept);
    report(
        7,
        "determinism",
        &o,
        start.elapsed(),
        Duration::from_secs(900),
    );
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
