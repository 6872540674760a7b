use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pkn_cli::commands::{self, exit};
use pkn_cli::{EngineConfig, Repl};

#[derive(Parser)]
#[command(
    name = "pkn",
    version,
    about = "Plausible reasoning over PKN knowledge graphs"
)]
struct Cli {
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

/// Overrides applied after the config file and `PKN_*` variables.
#[derive(Args)]
struct Settings {
    /// Config file of `key = value` lines (default: $PKN_CONFIG)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Longest chain of inference steps
    #[arg(long, global = true)]
    depth: Option<String>,
    /// Drop inference steps weaker than this anchor
    #[arg(long, global = true)]
    min_certainty: Option<String>,
    /// Membership needed for a fuzzy condition to hold
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Largest ratio for which `few` holds
    #[arg(long, global = true)]
    few: Option<String>,
    /// Smallest ratio for which `many` holds
    #[arg(long, global = true)]
    many: Option<String>,
    /// Smallest ratio for which `most` holds
    #[arg(long, global = true)]
    most: Option<String>,
    /// Set any engine setting, e.g. `--set weight.analogy=0.5`
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse files and report every problem
    Check { files: Vec<PathBuf> },
    /// Run a which/count/few/many/most query
    Query {
        query: String,
        files: Vec<PathBuf>,
        /// Let conditions hold when plausibly provable, not only when stored
        #[arg(long)]
        reason: bool,
    },
    /// Weigh arguments for and against a supposition
    Ask {
        supposition: String,
        files: Vec<PathBuf>,
        /// Print the argument trees
        #[arg(long)]
        explain: bool,
    },
    /// Write the graph as Turtle
    Export { files: Vec<PathBuf> },
    /// Interactive session reading from stdin
    Repl { files: Vec<PathBuf> },
}

fn configure(s: &Settings) -> Result<EngineConfig, pkn_cli::ConfigError> {
    let mut config = EngineConfig::default();
    let file = s
        .config
        .clone()
        .or_else(|| std::env::var_os("PKN_CONFIG").map(PathBuf::from));
    if let Some(path) = file {
        config.apply_file(&path)?;
    }
    config.apply_env(std::env::vars())?;
    let flags = [
        ("depth", &s.depth),
        ("min-certainty", &s.min_certainty),
        ("alpha", &s.alpha),
        ("few", &s.few),
        ("many", &s.many),
        ("most", &s.most),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    for pair in &s.set {
        let (k, v) = pair.split_once('=').unwrap_or((pair, ""));
        config.set(k, v)?;
    }
    Ok(config)
}

fn run(cli: Cli) -> i32 {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let config = match configure(&cli.settings) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "pkn: {e}");
            return exit::USAGE;
        }
    };
    match cli.command {
        Command::Check { files } => commands::check(&files, &mut out, &mut err),
        Command::Query {
            query,
            files,
            reason,
        } => commands::query(&files, &query, &config, reason, &mut out, &mut err),
        Command::Ask {
            supposition,
            files,
            explain,
        } => commands::ask(&files, &supposition, &config, explain, &mut out, &mut err),
        Command::Export { files } => commands::export(&files, &mut out, &mut err),
        Command::Repl { files } => {
            let graph = match commands::load(&files) {
                Ok(g) => g,
                Err(e) => {
                    let _ = writeln!(err, "{e}");
                    return e.exit_code();
                }
            };
            match Repl::new(graph, config).run(io::stdin().lock(), &mut out) {
                Ok(()) => exit::OK,
                Err(e) => {
                    let _ = writeln!(err, "pkn: {e}");
                    exit::IO
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(run(cli) as u8)
}
