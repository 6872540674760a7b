//! Python bindings: a mutable `Graph` plus a few module-level helpers.

use pkn_core::argumentation::{deliberate, explain, Verdict as CoreVerdict};
use pkn_core::model::{KnowledgeGraph, Qualitative, Term};
use pkn_core::parser::{parse_condition, parse_items, parse_query, serialize_document, Item};
use pkn_core::query::{run_query, QueryOptions, QueryResult, ReasoningOptions};
use pkn_core::rdf::to_turtle;
use pkn_core::reasoner::{complete_analogy, ProofParams};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyList;

create_exception!(
    pkn,
    PknError,
    PyException,
    "Raised for unparsable or invalid PKN input."
);

fn fail(e: impl std::fmt::Display) -> PyErr {
    PknError::new_err(e.to_string())
}

/// Result of weighing the arguments about a supposition.
#[pyclass(module = "pkn", frozen, get_all)]
pub struct Verdict {
    /// `supported`, `opposed` or `undecided`.
    stance: String,
    /// Qualitative level of the margin, e.g. `high`.
    certainty: String,
    support: f64,
    oppose: f64,
    arguments: usize,
    explanation: String,
}

#[pymethods]
impl Verdict {
    fn __repr__(&self) -> String {
        format!("Verdict({} ({}))", self.stance, self.certainty)
    }
}

impl Verdict {
    fn new(graph: &KnowledgeGraph, v: &CoreVerdict) -> Self {
        Self {
            stance: v.stance.to_string(),
            certainty: v.net_certainty.to_string(),
            support: v.support,
            oppose: v.oppose,
            arguments: v.arguments.len(),
            explanation: explain(graph, v),
        }
    }
}

#[pyclass(module = "pkn")]
#[derive(Default)]
pub struct Graph {
    inner: KnowledgeGraph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (text = ""))]
    fn new(text: &str) -> PyResult<Self> {
        let mut g = Self::default();
        g.add(text)?;
        Ok(g)
    }

    /// Asserts every statement in `text` and returns their ids. Nothing is
    /// added if any line fails to parse.
    fn add(&mut self, text: &str) -> PyResult<Vec<usize>> {
        let (items, errors) = parse_items(text);
        if !errors.is_empty() {
            let lines: Vec<String> = errors.iter().map(ToString::to_string).collect();
            return Err(fail(lines.join("\n")));
        }
        let mut next = self.inner.clone();
        let mut ids = Vec::new();
        for item in items {
            match item.value {
                Item::Statement(s) => ids.push(next.add_statement(s).map_err(fail)?.0),
                Item::Query(_) => {
                    return Err(fail(format!(
                        "{}:{}: queries cannot be asserted",
                        item.line, item.column
                    )))
                }
            }
        }
        self.inner = next;
        Ok(ids)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        serialize_document(self.inner.statements())
    }

    fn __repr__(&self) -> String {
        format!("Graph({} statements)", self.inner.len())
    }

    fn statements(&self) -> Vec<String> {
        self.inner
            .statements()
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    /// `which` gives a list of terms, `count` an int, and `few`, `many` or
    /// `most` a tuple `(holds, matching, total, ratio)`.
    #[pyo3(signature = (text, reason = false))]
    fn query<'py>(&self, py: Python<'py>, text: &str, reason: bool) -> PyResult<Bound<'py, PyAny>> {
        let q = parse_query(text).map_err(fail)?;
        let options = QueryOptions {
            reasoning: reason.then(ReasoningOptions::default),
            ..QueryOptions::default()
        };
        Ok(match run_query(&self.inner, &q, &options).map_err(fail)? {
            QueryResult::Bindings(terms) => {
                PyList::new(py, terms.iter().map(Term::to_string))?.into_any()
            }
            QueryResult::Count(n) => n.into_pyobject(py)?.into_any(),
            QueryResult::Verdict {
                holds,
                where_count,
                from_count,
                ratio,
            } => (holds, where_count, from_count, ratio)
                .into_pyobject(py)?
                .into_any(),
        })
    }

    #[pyo3(signature = (supposition, depth = None))]
    fn ask(&self, supposition: &str, depth: Option<usize>) -> PyResult<Verdict> {
        let s = parse_condition(supposition).map_err(fail)?;
        let mut params = ProofParams::default();
        if let Some(d) = depth {
            params = params.with_depth(d.max(1));
        }
        Ok(Verdict::new(
            &self.inner,
            &deliberate(&self.inner, &s, &params, 0.1),
        ))
    }

    /// Ranked `(term, certainty)` completions of `a:b::c:?`.
    fn complete_analogy(&self, a: &str, b: &str, c: &str) -> Vec<(String, String)> {
        let weight = ProofParams::default().weights.analogy;
        complete_analogy(
            &self.inner,
            &Term::name(a),
            &Term::name(b),
            &Term::name(c),
            weight,
        )
        .candidates
        .into_iter()
        .map(|k| (k.term.to_string(), k.certainty.to_string()))
        .collect()
    }

    fn to_turtle(&self) -> String {
        to_turtle(&self.inner)
    }
}

/// Positioned diagnostics for `text`; empty when it parses cleanly.
#[pyfunction]
fn check(text: &str) -> Vec<String> {
    let (items, errors) = parse_items(text);
    let mut out: Vec<String> = errors.iter().map(ToString::to_string).collect();
    for item in items {
        if let Item::Statement(s) = item.value {
            if let Err(e) = s.validate() {
                out.push(format!("{}:{}: {e}", item.line, item.column));
            }
        }
    }
    out
}

/// Nearest qualitative level for a number in [0, 1].
#[pyfunction]
fn quantize(value: f64) -> String {
    Qualitative::quantize(value).to_string()
}

#[pymodule]
fn pkn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Verdict>()?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(quantize, m)?)?;
    m.add("PknError", m.py().get_type::<PknError>())?;
    Ok(())
}
