//! Command-line front end. [`run`] takes the argument list and output
//! streams and returns the exit code, so it can be driven from tests.
//!
//! Exit codes: 0 on success or `CONFIRMED`/`HOLDS`, 1 on `VIOLATED`/`FAILS`
//! (and on disagreeing adjacency tests), 2 on usage, input or format errors.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::covering::{build, parse_matrix, CoveringMatrix, PolyhedronKind};
use crate::error::Error;
use crate::numeric::QVector;
use crate::polyhedron::{h_to_v, v_to_h, Representation, VRep};
use crate::skeleton::{
    adjacent_vrep, build_skeleton, certificate_search, trubin_check, AdjacencyTest, Decomposition,
    Method, SkeletonGraph, TrubinVerdict,
};
use crate::verify::{
    check_relaxation_counterexample, graph_sweep, random_graph_instance, random_instance,
    run_batch, CheckReport, InstanceSpec, Job, StatementId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Q,
    Qbar,
    Qstar,
    Qstarbar,
}

impl From<KindArg> for PolyhedronKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Q => PolyhedronKind::Q,
            KindArg::Qbar => PolyhedronKind::QBar,
            KindArg::Qstar => PolyhedronKind::QStar,
            KindArg::Qstarbar => PolyhedronKind::QStarBar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Rank,
    VrepLp,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rank => Method::Rank,
            MethodArg::VrepLp => Method::VrepLp,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatementArg {
    All,
    Lem21,
    Prop22,
    Lem31,
    Thm34,
    Cor35,
    Cor36,
    Thm37,
    Claim1,
    GraphCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DemoName {
    Circulant3,
}

/// Covering polyhedra: vertices, skeletons and statement checks in exact arithmetic.
#[derive(Debug, Parser)]
#[command(name = "coverpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the vertices (and rays) of one of the covering polyhedra.
    Vertices {
        /// Matrix file, or rows inline such as 110/011/101.
        matrix: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compute the 1-skeleton.
    Skeleton {
        matrix: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "rank")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide whether two vertices are adjacent.
    Adjacent {
        matrix: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// First vertex, comma separated, e.g. 1,1,0 or 1/2,1/2,1/2.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, value_enum, default_value = "rank")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check that the skeleton of --sub is an induced subgraph of that of --super.
    Trubin {
        matrix: String,
        #[arg(long = "sub", value_enum)]
        sub: KindArg,
        #[arg(long = "super", value_enum)]
        sup: KindArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run statement checks and print one JSON report per line.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        statement: StatementArg,
        /// Matrix file, or rows inline.
        #[arg(long, group = "input")]
        matrix: Option<String>,
        /// One random instance: seed,n,m,density.
        #[arg(long, group = "input")]
        random: Option<String>,
        /// The standard random sweep over seeds 1..=COUNT.
        #[arg(long, group = "input", value_name = "COUNT")]
        sweep: Option<u64>,
        /// Random graph incidence matrices for seeds 1..=COUNT.
        #[arg(long, group = "input", value_name = "COUNT")]
        graph_sweep: Option<u64>,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Reproduce a worked example.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

const SYNOPSIS: &str =
    "usage: coverpoly <vertices|skeleton|adjacent|trubin|verify|demo> [ARGS] (see --help)";

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::MethodDisagreement { .. }) {
            1
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

type CliResult = Result<i32, Failure>;

fn is_inline(s: &str) -> bool {
    !s.is_empty()
        && s.split('/')
            .all(|r| !r.is_empty() && r.chars().all(|c| c == '0' || c == '1'))
}

/// Reads a matrix from a file, or from inline rows when no such file exists.
fn load_matrix(arg: &str, err: &mut dyn Write) -> Result<CoveringMatrix, Failure> {
    let parsed = if !Path::new(arg).exists() && is_inline(arg) {
        let rows: Vec<Vec<bool>> = arg
            .split('/')
            .map(|r| r.chars().map(|c| c == '1').collect())
            .collect();
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Failure {
                code: 2,
                message: format!("inline rows of unequal length: {arg}"),
            });
        }
        CoveringMatrix::new(n, rows)?
    } else {
        let text = std::fs::read_to_string(arg).map_err(|e| Failure {
            code: 2,
            message: format!("{arg}: {e}"),
        })?;
        parse_matrix(&text)?
    };
    for w in &parsed.warnings {
        writeln!(err, "warning: {w}")?;
    }
    Ok(parsed.matrix)
}

fn parse_point(s: &str) -> Result<QVector, Failure> {
    s.parse::<QVector>().map_err(|_| Failure {
        code: 2,
        message: format!("cannot parse point {s:?}"),
    })
}

fn vertices_json(kind: PolyhedronKind, v: &VRep) -> serde_json::Value {
    json!({ "kind": kind.name(), "vertices": v.vertices(), "rays": v.rays() })
}

/// Serialises a skeleton: DOT, pretty JSON, or a plain listing.
pub fn emit_skeleton(graph: &SkeletonGraph, format: Format) -> String {
    match format {
        Format::Dot => graph.to_dot(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&graph.to_json()).expect("json");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} vertices, {} edges\n",
                graph.nodes.len(),
                graph.edge_count()
            );
            for (i, x) in graph.nodes.iter().enumerate() {
                s.push_str(&format!("  {i}: {x}\n"));
            }
            for &(i, j) in &graph.edges {
                s.push_str(&format!("  {} -- {}\n", graph.nodes[i], graph.nodes[j]));
            }
            for (i, r) in &graph.unbounded_edges {
                s.push_str(&format!("  {} -- ray {r}\n", graph.nodes[*i]));
            }
            s
        }
    }
}

fn reduced_vrep(rep: &Representation) -> crate::Result<VRep> {
    match rep {
        Representation::H(h) => h_to_v(h),
        Representation::V(v) => h_to_v(&v_to_h(v)?),
    }
}

fn cmd_vertices(
    matrix: &str,
    kind: KindArg,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let a = load_matrix(matrix, err)?;
    let kind = PolyhedronKind::from(kind);
    let v = build(&a, kind)?.to_vrep()?;
    match format {
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&vertices_json(kind, &v)).expect("json")
        )?,
        Format::Text => {
            writeln!(out, "{} vertices", v.vertices().len())?;
            for x in v.vertices() {
                writeln!(out, "  {x}")?;
            }
            if !v.rays().is_empty() {
                writeln!(out, "{} rays", v.rays().len())?;
                for r in v.rays() {
                    writeln!(out, "  {r}")?;
                }
            }
        }
        Format::Dot => {
            return Err(Failure {
                code: 2,
                message: "vertices has no dot format".into(),
            })
        }
    }
    Ok(0)
}

fn cmd_skeleton(
    matrix: &str,
    kind: KindArg,
    method: MethodArg,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let a = load_matrix(matrix, err)?;
    let graph = build_skeleton(&build(&a, kind.into())?, method.into())?;
    out.write_all(emit_skeleton(&graph, format).as_bytes())?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_adjacent(
    matrix: &str,
    kind: KindArg,
    u: &str,
    v: &str,
    method: MethodArg,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let a = load_matrix(matrix, err)?;
    let (xi, eta) = (parse_point(u)?, parse_point(v)?);
    let rep = build(&a, kind.into())?;
    let tests: &[AdjacencyTest] = match method {
        MethodArg::Rank => &[AdjacencyTest::Rank],
        MethodArg::VrepLp => &[AdjacencyTest::Decomposition, AdjacencyTest::Certificate],
        MethodArg::Both => &[
            AdjacencyTest::Rank,
            AdjacencyTest::Decomposition,
            AdjacencyTest::Certificate,
        ],
    };
    let mut results = serde_json::Map::new();
    let mut verdicts = Vec::new();
    let mut evidence = serde_json::Map::new();
    let vrep = if tests.len() > 1 || tests[0] != AdjacencyTest::Rank {
        Some(reduced_vrep(&rep)?)
    } else {
        None
    };
    for t in tests {
        let adj = match t {
            AdjacencyTest::Rank => rep.to_hrep()?.adjacent_rank(&xi, &eta)?,
            AdjacencyTest::Decomposition => {
                match adjacent_vrep(vrep.as_ref().expect("vrep"), &xi, &eta)? {
                    Decomposition::Adjacent => true,
                    Decomposition::NotAdjacent(w) => {
                        evidence.insert(
                        "decomposition".into(),
                        json!({
                            "lambda": w.lambda.iter().map(crate::numeric::format_rational).collect::<Vec<_>>(),
                            "mu": w.mu,
                            "t": crate::numeric::format_rational(&w.t),
                        }),
                    );
                        false
                    }
                }
            }
            AdjacencyTest::Certificate => {
                match certificate_search(vrep.as_ref().expect("vrep"), &xi, &eta)? {
                    Some(c) => {
                        evidence.insert(
                            "certificate".into(),
                            json!({ "c": c.c, "b": crate::numeric::format_rational(&c.b) }),
                        );
                        true
                    }
                    None => false,
                }
            }
        };
        results.insert(t.name().into(), json!(adj));
        verdicts.push(adj);
    }
    if verdicts.iter().any(|&x| x != verdicts[0]) {
        let detail = results
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(Error::MethodDisagreement {
            u: xi.to_string(),
            v: eta.to_string(),
            detail,
        }
        .into());
    }
    let adjacent = verdicts[0];
    match format {
        Format::Text => writeln!(
            out,
            "{}",
            if adjacent { "adjacent" } else { "not adjacent" }
        )?,
        Format::Json => {
            let doc = json!({ "u": xi, "v": eta, "adjacent": adjacent, "tests": results, "evidence": evidence });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        Format::Dot => {
            return Err(Failure {
                code: 2,
                message: "adjacent has no dot format".into(),
            })
        }
    }
    Ok(0)
}

fn cmd_trubin(
    matrix: &str,
    sub: KindArg,
    sup: KindArg,
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let a = load_matrix(matrix, err)?;
    let gs = build_skeleton(&build(&a, sub.into())?, Method::Rank)?;
    let gp = build_skeleton(&build(&a, sup.into())?, Method::Rank)?;
    let verdict = trubin_check(&gs, &gp);
    match (&verdict, format) {
        (TrubinVerdict::Holds, Format::Text) => writeln!(out, "HOLDS")?,
        (
            TrubinVerdict::Fails {
                missing_nodes,
                mismatched,
            },
            Format::Text,
        ) => {
            writeln!(out, "FAILS")?;
            for x in missing_nodes {
                writeln!(out, "  missing vertex {x}")?;
            }
            for m in mismatched {
                let side = |b: bool| if b { "edge" } else { "non-edge" };
                writeln!(
                    out,
                    "  {} -- {}: {} in sub, {} in super",
                    m.u,
                    m.v,
                    side(m.in_sub),
                    side(m.in_super)
                )?;
            }
        }
        (_, Format::Json) => {
            let doc = match &verdict {
                TrubinVerdict::Holds => json!({ "verdict": "HOLDS" }),
                TrubinVerdict::Fails {
                    missing_nodes,
                    mismatched,
                } => {
                    json!({ "verdict": "FAILS", "missing_nodes": missing_nodes, "mismatched": mismatched })
                }
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
        (_, Format::Dot) => {
            return Err(Failure {
                code: 2,
                message: "trubin has no dot format".into(),
            })
        }
    }
    Ok(if verdict.holds() { 0 } else { 1 })
}

fn statements_for(choice: StatementArg, a: &CoveringMatrix) -> Vec<StatementId> {
    let graph = a
        .rows()
        .iter()
        .all(|r| r.iter().filter(|&&b| b).count() == 2);
    match choice {
        StatementArg::All => {
            let mut s = StatementId::PER_MATRIX.to_vec();
            if graph {
                s.push(StatementId::TrubinGraphCase);
            }
            s
        }
        StatementArg::Lem21 => vec![StatementId::Lem21],
        StatementArg::Prop22 => vec![StatementId::Prop22],
        StatementArg::Lem31 => vec![StatementId::Lem31],
        StatementArg::Thm34 => vec![StatementId::Thm34],
        StatementArg::Cor35 => vec![StatementId::Cor35],
        StatementArg::Cor36 => vec![StatementId::Cor36],
        StatementArg::Thm37 => vec![StatementId::Thm37],
        StatementArg::Claim1 => vec![StatementId::Claim1],
        StatementArg::GraphCase => vec![StatementId::TrubinGraphCase],
    }
}

/// Writes the reports as JSON lines; errors go to `err`. Returns the exit code.
pub fn emit_reports(
    results: &[crate::verify::JobResult],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut code = 0;
    for r in results {
        match &r.outcome {
            Ok(report) => {
                writeln!(out, "{}", report.to_json_line())?;
                if !report.confirmed() {
                    code = code.max(1);
                }
            }
            Err(e) => {
                let seed = r
                    .instance
                    .seed
                    .map_or(String::new(), |s| format!(" (seed {s})"));
                writeln!(
                    err,
                    "error: {} on {}{seed}: {e}",
                    r.statement.id(),
                    r.instance.rows.join("/")
                )?;
                code = code.max(if matches!(e, Error::MethodDisagreement { .. }) {
                    1
                } else {
                    2
                });
            }
        }
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    statement: StatementArg,
    matrix: Option<&str>,
    random: Option<&str>,
    sweep: Option<u64>,
    graphs: Option<u64>,
    jobs: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult {
    let mut instances: Vec<(CoveringMatrix, Option<u64>)> = Vec::new();
    if let Some(path) = matrix {
        instances.push((load_matrix(path, err)?, None));
    } else if let Some(spec) = random {
        let spec = InstanceSpec::parse(spec)?;
        instances.push((random_instance(&spec)?, Some(spec.seed)));
    } else if let Some(count) = sweep {
        for seed in 1..=count {
            instances.push((random_instance(&InstanceSpec::sweep(seed))?, Some(seed)));
        }
    } else if let Some(count) = graphs {
        for seed in 1..=count {
            let (nodes, edges) = graph_sweep(seed);
            instances.push((random_graph_instance(seed, nodes, edges)?, Some(seed)));
        }
    } else {
        return Err(Failure {
            code: 2,
            message: "verify needs --matrix, --random, --sweep or --graph-sweep".into(),
        });
    }
    let jobs_list: Vec<Job> = instances
        .iter()
        .flat_map(|(m, seed)| {
            statements_for(statement, m).into_iter().map(|s| Job {
                statement: s,
                matrix: m.clone(),
                seed: *seed,
            })
        })
        .collect();
    let results = run_batch(&jobs_list, jobs);
    Ok(emit_reports(&results, out, err)?)
}

fn narrative(report: &CheckReport) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "Covering matrix A with rows {}\n",
        report.instance.rows.join(" ")
    ));
    s.push_str(
        "Q(A) = {x : Ax >= 1, x >= 0}, Qbar(A) = Q(A) cut by [0,1]^3, Q*(A) its integer hull.\n",
    );
    for f in &report.facts {
        s.push_str(&format!(
            "  [{}] {}\n",
            if f.holds { "ok" } else { "FAILED" },
            f.claim
        ));
    }
    let verdict = if report.confirmed() {
        "CONFIRMED"
    } else {
        "VIOLATED"
    };
    s.push_str(&format!(
        "{verdict}: the relaxation Q(A) does not have the Trubin property with respect to Q*(A), \
         while its truncation Qbar(A) keeps the pair adjacent.\n"
    ));
    s
}

fn cmd_demo(_name: DemoName, format: Format, out: &mut dyn Write) -> CliResult {
    let report = check_relaxation_counterexample()?;
    match format {
        Format::Json => writeln!(out, "{}", report.to_json_line())?,
        _ => out.write_all(narrative(&report).as_bytes())?,
    }
    Ok(if report.confirmed() { 0 } else { 1 })
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Vertices {
            matrix,
            kind,
            format,
        } => cmd_vertices(&matrix, kind, format, out, err),
        Command::Skeleton {
            matrix,
            kind,
            method,
            format,
        } => cmd_skeleton(&matrix, kind, method, format, out, err),
        Command::Adjacent {
            matrix,
            kind,
            u,
            v,
            method,
            format,
        } => cmd_adjacent(&matrix, kind, &u, &v, method, format, out, err),
        Command::Trubin {
            matrix,
            sub,
            sup,
            format,
        } => cmd_trubin(&matrix, sub, sup, format, out, err),
        Command::Verify {
            statement,
            matrix,
            random,
            sweep,
            graph_sweep,
            jobs,
        } => cmd_verify(
            statement,
            matrix.as_deref(),
            random.as_deref(),
            sweep,
            graph_sweep,
            jobs,
            out,
            err,
        ),
        Command::Demo { name, format } => cmd_demo(name, format, out),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    let _ = writeln!(err, "{SYNOPSIS}");
                    2
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if f.code == 2 {
                let _ = writeln!(err, "{SYNOPSIS}");
            }
            f.code
        }
    }
}
