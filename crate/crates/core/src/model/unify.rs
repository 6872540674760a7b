//! Pattern matching between statements that may contain variables.
//!
//! At most one side of a match is expected to contain variables; the
//! functions are symmetric so either side can be the pattern.

use super::statement::{Condition, Statement};
use super::term::{Bindings, Term};

/// Unifies two terms, extending `bindings`. The anonymous variable matches
/// anything and never binds.
pub fn unify_terms(a: &Term, b: &Term, bindings: &mut Bindings) -> bool {
    match (a, b) {
        (Term::Variable(x), _) if x.is_empty() => true,
        (_, Term::Variable(y)) if y.is_empty() => true,
        (Term::Variable(x), Term::Variable(y)) if x == y => true,
        (Term::Variable(x), other) | (other, Term::Variable(x)) => {
            if let Some(bound) = bindings.get(x).cloned() {
                return unify_terms(&bound, other, bindings);
            }
            if let Term::Variable(y) = other {
                if let Some(bound) = bindings.get(y).cloned() {
                    bindings.insert(x.clone(), bound);
                    return true;
                }
            }
            bindings.insert(x.clone(), other.clone());
            true
        }
        (Term::SubGraph(xs), Term::SubGraph(ys)) => {
            xs.len() == ys.len()
                && xs
                    .iter()
                    .zip(ys)
                    .all(|(x, y)| unify_statements(x, y, bindings))
        }
        _ => a == b,
    }
}

fn unify_lists(xs: &[Term], ys: &[Term], bindings: &mut Bindings) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_terms(x, y, bindings))
}

/// Positional unification of whole statements, metadata included.
pub fn unify_statements(a: &Statement, b: &Statement, bindings: &mut Bindings) -> bool {
    match (a, b) {
        (Statement::Property(x), Statement::Property(y)) => {
            x.operator == y.operator
                && x.metadata == y.metadata
                && unify_terms(&x.descriptor, &y.descriptor, bindings)
                && unify_terms(&x.argument, &y.argument, bindings)
                && unify_lists(&x.referents, &y.referents, bindings)
                && unify_lists(&x.scope, &y.scope, bindings)
        }
        (Statement::Relation(x), Statement::Relation(y)) => {
            x.relationship == y.relationship
                && x.metadata == y.metadata
                && unify_terms(&x.subject, &y.subject, bindings)
                && unify_terms(&x.object, &y.object, bindings)
                && unify_lists(&x.scope, &y.scope, bindings)
        }
        (Statement::Implication(x), Statement::Implication(y)) => {
            x.metadata == y.metadata
                && x.antecedents.len() == y.antecedents.len()
                && x.consequents.len() == y.consequents.len()
                && x.antecedents
                    .iter()
                    .zip(&y.antecedents)
                    .chain(x.consequents.iter().zip(&y.consequents))
                    .all(|(p, q)| {
                        unify_statements(
                            &Statement::from(p.clone()),
                            &Statement::from(q.clone()),
                            bindings,
                        )
                    })
        }
        (Statement::Analogy(x), Statement::Analogy(y)) => x
            .terms()
            .iter()
            .zip(y.terms())
            .all(|(p, q)| unify_terms(p, q, bindings)),
        _ => false,
    }
}

/// Context-free statements apply everywhere; otherwise two scopes must
/// share at least one name.
pub fn scopes_compatible(a: &[Term], b: &[Term]) -> bool {
    a.is_empty() || b.is_empty() || a.iter().any(|t| b.contains(t))
}

/// All ways in which `general` covers `specific`, starting from `bindings`.
///
/// Descriptor, argument, operator, subject, relationship and object must
/// unify. Referents of set-valued operators (`includes`, `excludes`) match
/// when every referent of `specific` unifies with some referent of
/// `general`; other operators match referents positionally. Metadata is
/// ignored.
pub fn covers(general: &Condition, specific: &Condition, bindings: &Bindings) -> Vec<Bindings> {
    if !scopes_compatible(general.scope(), specific.scope()) {
        return Vec::new();
    }
    match (general, specific) {
        (Condition::Property(g), Condition::Property(s)) => {
            if g.operator != s.operator {
                return Vec::new();
            }
            let mut b = bindings.clone();
            if !unify_terms(&g.descriptor, &s.descriptor, &mut b)
                || !unify_terms(&g.argument, &s.argument, &mut b)
            {
                return Vec::new();
            }
            if g.is_set_valued() {
                let mut out = Vec::new();
                assign_subset(&s.referents, &g.referents, b, &mut out);
                dedup(out)
            } else if unify_lists(&g.referents, &s.referents, &mut b) {
                vec![b]
            } else {
                Vec::new()
            }
        }
        (Condition::Relation(g), Condition::Relation(s)) => {
            let mut b = bindings.clone();
            if g.relationship == s.relationship
                && unify_terms(&g.subject, &s.subject, &mut b)
                && unify_terms(&g.object, &s.object, &mut b)
            {
                vec![b]
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    }
}

fn assign_subset(wanted: &[Term], available: &[Term], bindings: Bindings, out: &mut Vec<Bindings>) {
    let Some((first, rest)) = wanted.split_first() else {
        out.push(bindings);
        return;
    };
    for candidate in available {
        let mut b = bindings.clone();
        if unify_terms(first, candidate, &mut b) {
            assign_subset(rest, available, b, out);
        }
    }
}

fn dedup(v: Vec<Bindings>) -> Vec<Bindings> {
    let mut out: Vec<Bindings> = Vec::with_capacity(v.len());
    for b in v {
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}
