//! Line-oriented session over a stack of graph snapshots. Input comes from
//! any reader and output goes to any writer, without prompts, so sessions
//! can be scripted.

use std::io::{self, BufRead, Write};

use pkn_core::model::KnowledgeGraph;
use pkn_core::parser::{parse_items, Item};
use pkn_core::query::run_query;

use crate::commands::{evaluate_ask, render_result, CliError};
use crate::config::EngineConfig;

const HELP: &str = "\
<statement>          assert a statement
<query>              run a which/count/few/many/most query
ask <condition>      weigh the arguments for and against a supposition
explain on|off       show argument trees after ask
list                 show the current statements
undo                 drop the last assertion
quit                 leave the session
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Quit,
}

pub struct Repl {
    config: EngineConfig,
    /// Never empty; the last entry is the working snapshot.
    history: Vec<KnowledgeGraph>,
    explain: bool,
}

impl Repl {
    pub fn new(graph: KnowledgeGraph, config: EngineConfig) -> Self {
        Self {
            config,
            history: vec![graph],
            explain: false,
        }
    }

    pub fn graph(&self) -> &KnowledgeGraph {
        self.history.last().expect("history is never empty")
    }

    /// Handles one input line and returns the text to print.
    pub fn handle(&mut self, line: &str) -> (String, Flow) {
        let line = line.trim();
        let out = match line {
            "" => String::new(),
            _ if line.starts_with('#') => String::new(),
            "quit" | "exit" => return (String::new(), Flow::Quit),
            "help" => HELP.to_string(),
            "explain on" | "explain off" => {
                self.explain = line.ends_with("on");
                format!("{line}\n")
            }
            "list" => self
                .graph()
                .iter()
                .map(|(id, s)| format!("{id}: {s}\n"))
                .collect(),
            "undo" => self.undo(),
            _ => match line.strip_prefix("ask ") {
                Some(rest) => self.ask(rest),
                None => self.statement_or_query(line),
            },
        };
        (out, Flow::Continue)
    }

    fn undo(&mut self) -> String {
        if self.history.len() == 1 {
            return "nothing to undo\n".into();
        }
        let dropped = self.history.pop().expect("checked length");
        let id = pkn_core::model::StatementId(dropped.len() - 1);
        match dropped.get(id) {
            Some(s) => format!("retracted {id}: {s}\n"),
            None => "retracted\n".into(),
        }
    }

    fn ask(&self, text: &str) -> String {
        match evaluate_ask(self.graph(), text, &self.config, self.explain) {
            Ok((_, rendered)) => rendered,
            Err(e) => error(&e),
        }
    }

    fn statement_or_query(&mut self, line: &str) -> String {
        let (items, errors) = parse_items(line);
        if let Some(e) = errors.first() {
            return format!("error: {e}\n");
        }
        let mut out = String::new();
        for item in items {
            match item.value {
                Item::Query(q) => {
                    match run_query(self.graph(), &q, &self.config.query_options(false)) {
                        Ok(r) => out.push_str(&render_result(&r)),
                        Err(e) => out.push_str(&error(&CliError::from(e))),
                    }
                }
                Item::Statement(s) => match self.graph().with_statement(s) {
                    Ok((next, id)) if next.len() == self.graph().len() => {
                        out.push_str(&format!("already known {id}\n"));
                    }
                    Ok((next, id)) => {
                        self.history.push(next);
                        out.push_str(&format!("asserted {id}\n"));
                    }
                    Err(e) => out.push_str(&format!("error: {e}\n")),
                },
            }
        }
        out
    }

    /// Reads lines until `quit` or end of input.
    pub fn run(&mut self, input: impl BufRead, out: &mut dyn Write) -> io::Result<()> {
        for line in input.lines() {
            let (text, flow) = self.handle(&line?);
            out.write_all(text.as_bytes())?;
            out.flush()?;
            if flow == Flow::Quit {
                break;
            }
        }
        Ok(())
    }
}

fn error(e: &CliError) -> String {
    format!("error: {e}\n")
}
