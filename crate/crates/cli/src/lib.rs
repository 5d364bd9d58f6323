//! Argument parsing and dispatch for the `spectheta` binary.
//!
//! [`run`] takes its streams as parameters so the whole front end can be
//! driven in-process by tests.

use std::io::{BufRead, Write};
use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use spectheta::enumerate::{enumerate_with, extremal_search, extremal_table, EnumOptions, SearchOptions};
use spectheta::family::Family;
use spectheta::graph6::{from_graph6, read_graph6_lines, to_graph6};
use spectheta::spectral::{spectral_radius, SpectralResult};
use spectheta::theta::{contains_theta, is_theta_free, ThetaSpec};
use spectheta::verify::verify_with_spec;
use spectheta::{check_nosal, EnumerateError, Graph};

pub const EXIT_OK: i32 = 0;
/// The checked property does not hold.
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
/// Numerical failure inside the eigensolver.
pub const EXIT_INTERNAL: i32 = 4;

pub const BUDGET_ENV: &str = "SPECTHETA_EDGE_BUDGET";

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "spectheta",
    version,
    about = "Spectral radius, theta-graph detection and exhaustive search over theta-free graphs",
    after_help = "Graphs are read as a graph6 argument or, when absent, one per line from stdin.\n\
                  Exit codes: 0 ok, 1 property does not hold, 2 usage or input error,\n\
                  3 enumeration budget exceeded, 4 eigensolver failure."
)]
pub struct Cli {
    /// Worker threads for enumeration and search (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Largest edge count the enumerator will accept.
    #[arg(long, global = true, env = BUDGET_ENV, default_value_t = spectheta::enumerate::DEFAULT_EDGE_BUDGET)]
    pub limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Spectral radius and final eigen-residual.
    Radius {
        graph: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Exit 0 if the graph is θ-free, else print a witness and exit 1.
    Free {
        #[arg(long, value_parser = parse_spec)]
        spec: ThetaSpec,
        graph: Option<String>,
    },
    /// Stream one graph6 line per isomorphism class with the given edge count.
    Enumerate {
        #[arg(long)]
        edges: usize,
        #[arg(long)]
        connected: bool,
        /// Keep only graphs free of this theta graph.
        #[arg(long, value_parser = parse_spec)]
        free: Option<ThetaSpec>,
    },
    /// Largest spectral radius among θ-free graphs with the given edge count.
    Search {
        #[arg(long)]
        edges: usize,
        #[arg(long, value_parser = parse_spec)]
        spec: ThetaSpec,
        /// Include disconnected graphs.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
    },
    /// One search row per edge count in A..B.
    Table {
        #[arg(long, value_parser = parse_range)]
        edges: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_spec)]
        spec: ThetaSpec,
        #[arg(long)]
        json: bool,
    },
    /// Print a named graph as graph6.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Full certificate: freeness, radius against the bound, decomposition, structural checks.
    Verify {
        graph: Option<String>,
        #[arg(long, value_parser = parse_spec, default_value = "2,2,3")]
        spec: ThetaSpec,
        #[arg(long)]
        json: bool,
    },
    /// λ ≤ √m for triangle-free graphs, with equality only for complete bipartite graphs.
    Nosal {
        graph: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Subcommand)]
pub enum FamilyCommand {
    Book(K),
    Star(N),
    StarPlusEdge(N),
    Complete(N),
    CompleteMinusEdge(N),
    CompleteBipartite(St),
    Path(N),
    Cycle(N),
}

#[derive(Debug, Clone, Copy, PartialEq, Args)]
pub struct K {
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Args)]
pub struct N {
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Args)]
pub struct St {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub t: usize,
}

impl FamilyCommand {
    pub fn family(self) -> Family {
        match self {
            FamilyCommand::Book(K { k }) => Family::Book { k },
            FamilyCommand::Star(N { n }) => Family::Star { n },
            FamilyCommand::StarPlusEdge(N { n }) => Family::StarPlusEdge { n },
            FamilyCommand::Complete(N { n }) => Family::Complete { n },
            FamilyCommand::CompleteMinusEdge(N { n }) => Family::CompleteMinusEdge { n },
            FamilyCommand::CompleteBipartite(St { s, t }) => Family::CompleteBipartite { s, t },
            FamilyCommand::Path(N { n }) => Family::Path { n },
            FamilyCommand::Cycle(N { n }) => Family::Cycle { n },
        }
    }

    fn to_args(self) -> Vec<String> {
        let name = match self {
            FamilyCommand::Book(_) => "book",
            FamilyCommand::Star(_) => "star",
            FamilyCommand::StarPlusEdge(_) => "star-plus-edge",
            FamilyCommand::Complete(_) => "complete",
            FamilyCommand::CompleteMinusEdge(_) => "complete-minus-edge",
            FamilyCommand::CompleteBipartite(_) => "complete-bipartite",
            FamilyCommand::Path(_) => "path",
            FamilyCommand::Cycle(_) => "cycle",
        };
        let mut out = vec![name.to_string()];
        match self {
            FamilyCommand::Book(K { k }) => out.extend(["--k".into(), k.to_string()]),
            FamilyCommand::CompleteBipartite(St { s, t }) => {
                out.extend(["--s".into(), s.to_string(), "--t".into(), t.to_string()])
            }
            FamilyCommand::Star(N { n })
            | FamilyCommand::StarPlusEdge(N { n })
            | FamilyCommand::Complete(N { n })
            | FamilyCommand::CompleteMinusEdge(N { n })
            | FamilyCommand::Path(N { n })
            | FamilyCommand::Cycle(N { n }) => out.extend(["--n".into(), n.to_string()]),
        }
        out
    }
}

fn parse_spec(s: &str) -> Result<ThetaSpec, String> {
    s.parse().map_err(|e: spectheta::theta::ThetaSpecError| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected A..B or a single edge count, got `{s}`");
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let (a, b): (usize, usize) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

impl Cli {
    /// Argument vector (without the program name) that parses back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = vec![
            "--threads".to_string(),
            self.threads.to_string(),
            "--limit".to_string(),
            self.limit.to_string(),
        ];
        let flag = |out: &mut Vec<String>, on: bool, name: &str| {
            if on {
                out.push(name.to_string());
            }
        };
        match &self.command {
            Command::Radius { graph, json } => {
                out.push("radius".into());
                flag(&mut out, *json, "--json");
                out.extend(graph.clone());
            }
            Command::Free { spec, graph } => {
                out.extend(["free".into(), "--spec".into(), spec.to_string()]);
                out.extend(graph.clone());
            }
            Command::Enumerate { edges, connected, free } => {
                out.extend(["enumerate".into(), "--edges".into(), edges.to_string()]);
                flag(&mut out, *connected, "--connected");
                if let Some(spec) = free {
                    out.extend(["--free".into(), spec.to_string()]);
                }
            }
            Command::Search { edges, spec, all, json } => {
                out.extend(["search".into(), "--edges".into(), edges.to_string()]);
                out.extend(["--spec".into(), spec.to_string()]);
                flag(&mut out, *all, "--all");
                flag(&mut out, *json, "--json");
            }
            Command::Table { edges, spec, json } => {
                out.extend([
                    "table".into(),
                    "--edges".into(),
                    format!("{}..{}", edges.start(), edges.end()),
                ]);
                out.extend(["--spec".into(), spec.to_string()]);
                flag(&mut out, *json, "--json");
            }
            Command::Family(f) => {
                out.push("family".into());
                out.extend(f.to_args());
            }
            Command::Verify { graph, spec, json } => {
                out.extend(["verify".into(), "--spec".into(), spec.to_string()]);
                flag(&mut out, *json, "--json");
                out.extend(graph.clone());
            }
            Command::Nosal { graph, json } => {
                out.push("nosal".into());
                flag(&mut out, *json, "--json");
                out.extend(graph.clone());
            }
        }
        out
    }
}

enum Failure {
    Usage(String),
    Budget(String),
    Internal(String),
}

impl From<EnumerateError> for Failure {
    fn from(e: EnumerateError) -> Self {
        match e {
            EnumerateError::EdgeBudget { .. } | EnumerateError::OrderBudget { .. } => {
                Failure::Budget(format!("{e}; raise it with --limit or {BUDGET_ENV}"))
            }
            EnumerateError::Spectral(_) => Failure::Internal(e.to_string()),
            EnumerateError::NoEdges | EnumerateError::EmptyClass { .. } => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn internal(e: impl std::fmt::Display) -> Failure {
    Failure::Internal(e.to_string())
}

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(&cli, stdin, stdout) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_BUDGET
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INTERNAL
        }
    }
}

/// The positional graph, or every graph6 line on stdin.
fn input_graphs(graph: &Option<String>, stdin: &mut dyn BufRead) -> Result<Vec<Graph>, Failure> {
    match graph {
        Some(s) => Ok(vec![from_graph6(s).map_err(|e| Failure::Usage(format!("{s}: {e}")))?]),
        None => read_graph6_lines(stdin)
            .map(|line| line?.map_err(|e| Failure::Usage(e.to_string())))
            .collect(),
    }
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, value).map_err(internal)?;
    writeln!(out)?;
    Ok(())
}

/// Radius of a possibly disconnected graph: the component with the largest λ.
fn radius(g: &Graph) -> Result<Option<SpectralResult>, Failure> {
    if g.m() == 0 {
        return Ok(None);
    }
    if g.is_connected() {
        return spectral_radius(g).map(Some).map_err(internal);
    }
    let mut best: Option<SpectralResult> = None;
    for c in g.components().into_iter().filter(|c| c.len() > 1) {
        let h = g.induced(c).map_err(internal)?;
        let res = spectral_radius(&h).map_err(internal)?;
        if best.as_ref().is_none_or(|b| res.lambda > b.lambda) {
            best = Some(res);
        }
    }
    Ok(best)
}

#[derive(Serialize)]
struct RadiusLine {
    graph6: String,
    #[serde(serialize_with = "spectheta::json::sig17")]
    lambda: f64,
    #[serde(serialize_with = "spectheta::json::sig17")]
    residual: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct FreeLine<'a> {
    graph6: String,
    spec: ThetaSpec,
    free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<&'a spectheta::ThetaWitness>,
}

fn execute(cli: &Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<i32, Failure> {
    let search_opts = |connected_only| SearchOptions {
        connected_only,
        edge_budget: cli.limit,
        threads: cli.threads,
    };
    let mut code = EXIT_OK;
    match &cli.command {
        Command::Radius { graph, json } => {
            for g in input_graphs(graph, stdin)? {
                let (lambda, residual, iterations) = match radius(&g)? {
                    Some(r) => (r.lambda, r.residual, r.iterations),
                    None => (0.0, 0.0, 0),
                };
                if *json {
                    json_line(
                        out,
                        &RadiusLine {
                            graph6: to_graph6(&g),
                            lambda,
                            residual,
                            iterations,
                        },
                    )?;
                } else {
                    writeln!(out, "{lambda:.9}\t{residual:.9e}")?;
                }
            }
        }
        Command::Free { spec, graph } => {
            for g in input_graphs(graph, stdin)? {
                let witness = contains_theta(&g, *spec);
                if witness.is_some() {
                    code = EXIT_PROPERTY;
                }
                json_line(
                    out,
                    &FreeLine {
                        graph6: to_graph6(&g),
                        spec: *spec,
                        free: witness.is_none(),
                        witness: witness.as_ref(),
                    },
                )?;
            }
        }
        Command::Enumerate { edges, connected, free } => {
            let opts = EnumOptions {
                connected_only: *connected,
                edge_budget: cli.limit,
                threads: cli.threads,
                ..Default::default()
            };
            for g in enumerate_with(*edges, &opts)? {
                if free.is_none_or(|spec| is_theta_free(&g, spec)) {
                    writeln!(out, "{}", to_graph6(&g))?;
                }
            }
        }
        Command::Search { edges, spec, all, json } => {
            let rec = extremal_search(*edges, *spec, &search_opts(!all))?;
            if *json {
                json_line(out, &rec)?;
            } else {
                writeln!(out, "m\t{}", rec.m)?;
                writeln!(out, "spec\t{}", rec.spec)?;
                writeln!(out, "best_lambda\t{:.9}", rec.best_lambda)?;
                writeln!(out, "best_graph\t{}", to_graph6(&rec.best_graph))?;
                writeln!(out, "best_n\t{}", rec.best_n)?;
                writeln!(out, "candidates\t{}", rec.num_candidates)?;
                writeln!(out, "free\t{}", rec.num_free)?;
                for r in &rec.runner_ups {
                    writeln!(out, "runner_up\t{:.9}\t{}", r.lambda, to_graph6(&r.graph))?;
                }
            }
        }
        Command::Table { edges, spec, json } => {
            let rows = extremal_table(edges.clone(), *spec, &search_opts(true))?;
            if *json {
                json_line(out, &rows)?;
            } else {
                writeln!(out, "m\tbest_lambda\tbound\tgap\tbest_graph")?;
                for r in rows {
                    // keep a rounding-level negative gap from printing as -0.000000000
                    let gap = if r.gap.abs() < 5e-10 { 0.0 } else { r.gap };
                    writeln!(
                        out,
                        "{}\t{:.9}\t{:.9}\t{:.9}\t{}",
                        r.m, r.best_lambda, r.bound, gap, r.best_graph6
                    )?;
                }
            }
        }
        Command::Family(f) => {
            let g = f.family().build().map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out, "{}", to_graph6(&g))?;
        }
        Command::Verify { graph, spec, json } => {
            for g in input_graphs(graph, stdin)? {
                let cert = verify_with_spec(&g, *spec).map_err(internal)?;
                if !cert.conforms() {
                    code = EXIT_PROPERTY;
                }
                if *json {
                    json_line(out, &cert)?;
                    continue;
                }
                writeln!(out, "graph6\t{}", cert.graph6)?;
                writeln!(out, "m\t{}", cert.m)?;
                writeln!(out, "theta_free\t{}", cert.theta_free)?;
                if let Some(lambda) = cert.lambda {
                    writeln!(out, "lambda\t{lambda:.9}")?;
                }
                if let Some(bound) = cert.bound {
                    writeln!(out, "bound\t{bound:.9}")?;
                }
                if let Some(within) = cert.within_bound {
                    writeln!(out, "within_bound\t{within}")?;
                }
                if let Some(eq) = cert.equality_case {
                    writeln!(out, "equality\t{}\tbook\t{}", eq.claimed, eq.iso_to_book)?;
                }
                if let Some(ustar) = cert.ustar {
                    writeln!(out, "ustar\t{ustar}")?;
                }
                for e in &cert.lemmas {
                    let status = match (e.holds, e.informational) {
                        (true, _) => "holds",
                        (false, true) => "fails (informational)",
                        (false, false) => "fails",
                    };
                    writeln!(out, "check\t{}\t{status}", e.id)?;
                }
                if let Some(ineq) = cert.inequality1.and_then(|i| i.slack) {
                    writeln!(out, "slack\t{ineq:.9}")?;
                }
                writeln!(out, "conforms\t{}", cert.conforms())?;
            }
        }
        Command::Nosal { graph, json } => {
            for g in input_graphs(graph, stdin)? {
                let report = check_nosal(&g).map_err(internal)?;
                if !report.satisfied {
                    code = EXIT_PROPERTY;
                }
                if *json {
                    json_line(out, &report)?;
                } else {
                    let eq = match report.equality_structure {
                        Some((s, t)) => format!("K{s},{t}"),
                        None => "-".into(),
                    };
                    writeln!(
                        out,
                        "{}\t{:.9}\t{:.9}\t{}\t{}",
                        report.triangle_free, report.lambda, report.sqrt_m, report.satisfied, eq
                    )?;
                }
            }
        }
    }
    Ok(code)
}
