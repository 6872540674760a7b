use std::io::Write;
use std::path::{Path, PathBuf};

use pkn_core::argumentation::{deliberate, explain, Stance, Verdict};
use pkn_core::model::KnowledgeGraph;
use pkn_core::parser::{parse_condition, parse_items, parse_query, Item, ParseError};
use pkn_core::query::{run_query, QueryError, QueryResult};
use pkn_core::rdf::to_turtle;
use thiserror::Error;

use crate::config::{ConfigError, EngineConfig};

/// Stable process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const IO: i32 = 2;
    pub const OPPOSED: i32 = 3;
    pub const UNDECIDED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{}", .diagnostics.join("\n"))]
    Parse { diagnostics: Vec<String> },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Query(#[from] QueryError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::IO,
            _ => exit::USAGE,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Outcome of reading one file: statements asserted, and one message per
/// problem.
struct Scan {
    statements: usize,
    diagnostics: Vec<String>,
}

fn scan_into(graph: &mut KnowledgeGraph, origin: &str, text: &str, keep_queries: bool) -> Scan {
    let (items, errors) = parse_items(text);
    let mut scan = Scan {
        statements: 0,
        diagnostics: errors.iter().map(|e| format!("{origin}:{e}")).collect(),
    };
    for item in items {
        match item.value {
            Item::Statement(s) => match graph.add_statement(s) {
                Ok(_) => scan.statements += 1,
                Err(e) => scan
                    .diagnostics
                    .push(format!("{origin}:{}:{}: {e}", item.line, item.column)),
            },
            Item::Query(_) if keep_queries => scan.statements += 1,
            Item::Query(_) => {}
        }
    }
    scan
}

/// Loads every file into one graph. Any parse or IO problem aborts.
pub fn load(files: &[PathBuf]) -> Result<KnowledgeGraph, CliError> {
    let mut graph = KnowledgeGraph::new();
    let mut diagnostics = Vec::new();
    for path in files {
        let text = read(path)?;
        diagnostics
            .extend(scan_into(&mut graph, &path.display().to_string(), &text, false).diagnostics);
    }
    if diagnostics.is_empty() {
        Ok(graph)
    } else {
        Err(CliError::Parse { diagnostics })
    }
}

fn report(err: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(err, "{e}");
    e.exit_code()
}

fn positioned(origin: &str, e: &ParseError) -> CliError {
    CliError::Parse {
        diagnostics: vec![format!("{origin}:{e}")],
    }
}

/// Parses every file, printing each problem with its position, then a
/// `N statements, M errors` summary. Queries count as statements.
pub fn check(files: &[PathBuf], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut statements = 0;
    let mut errors = 0;
    let mut io_failed = false;
    for path in files {
        let text = match read(path) {
            Ok(t) => t,
            Err(e) => {
                report(err, &e);
                io_failed = true;
                continue;
            }
        };
        // each file is checked on its own, so duplicates across files are fine
        let mut graph = KnowledgeGraph::new();
        let scan = scan_into(&mut graph, &path.display().to_string(), &text, true);
        for d in &scan.diagnostics {
            let _ = writeln!(out, "{d}");
        }
        statements += scan.statements;
        errors += scan.diagnostics.len();
    }
    let _ = writeln!(out, "{statements} statements, {errors} errors");
    if io_failed {
        exit::IO
    } else if errors > 0 {
        exit::USAGE
    } else {
        exit::OK
    }
}

pub fn render_result(result: &QueryResult) -> String {
    match result {
        QueryResult::Bindings(terms) => terms.iter().map(|t| format!("{t}\n")).collect(),
        QueryResult::Count(n) => format!("{n}\n"),
        QueryResult::Verdict {
            holds,
            where_count,
            from_count,
            ratio,
        } => format!("{holds} ({where_count}/{from_count}, {ratio:.2})\n"),
    }
}

pub fn evaluate_query(
    graph: &KnowledgeGraph,
    text: &str,
    config: &EngineConfig,
    reason: bool,
) -> Result<String, CliError> {
    let query = parse_query(text).map_err(|e| positioned("query", &e))?;
    let result = run_query(graph, &query, &config.query_options(reason))?;
    Ok(render_result(&result))
}

pub fn query(
    files: &[PathBuf],
    text: &str,
    config: &EngineConfig,
    reason: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match load(files).and_then(|g| evaluate_query(&g, text, config, reason)) {
        Ok(rendered) => {
            let _ = out.write_all(rendered.as_bytes());
            exit::OK
        }
        Err(e) => report(err, &e),
    }
}

pub fn verdict_code(verdict: &Verdict) -> i32 {
    match verdict.stance {
        Stance::Supported => exit::OK,
        Stance::Opposed => exit::OPPOSED,
        Stance::Undecided => exit::UNDECIDED,
    }
}

/// `stance (certainty)`, followed by the explanation when asked for.
pub fn evaluate_ask(
    graph: &KnowledgeGraph,
    text: &str,
    config: &EngineConfig,
    with_explanation: bool,
) -> Result<(Verdict, String), CliError> {
    let supposition = parse_condition(text).map_err(|e| positioned("supposition", &e))?;
    let verdict = deliberate(
        graph,
        &supposition,
        &config.proof_params(),
        config.undecided_band,
    );
    let mut rendered = format!("{} ({})\n", verdict.stance, verdict.net_certainty);
    if with_explanation {
        rendered.push_str(&explain(graph, &verdict));
    }
    Ok((verdict, rendered))
}

pub fn ask(
    files: &[PathBuf],
    text: &str,
    config: &EngineConfig,
    with_explanation: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match load(files).and_then(|g| evaluate_ask(&g, text, config, with_explanation)) {
        Ok((verdict, rendered)) => {
            let _ = out.write_all(rendered.as_bytes());
            verdict_code(&verdict)
        }
        Err(e) => report(err, &e),
    }
}

/// Turtle for all files; nothing is written unless every file loads.
pub fn export(files: &[PathBuf], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match load(files) {
        Ok(g) => {
            let _ = out.write_all(to_turtle(&g).as_bytes());
            exit::OK
        }
        Err(e) => report(err, &e),
    }
}
