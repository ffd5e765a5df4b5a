use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::{Formula, Term, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("formula is not a sentence; free variables: {}", list(.0))]
    FreeVariables(Vec<Term>),
    #[error("coordinate variable `{0}` in a formula over lines")]
    CoordinateVariable(Term),
}

fn list(ts: &[Term]) -> String {
    ts.iter()
        .map(Term::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Rename bound variables so the variable bound at quantifier depth `d`
/// has index `d`. Display names are kept.
pub fn canonicalize(f: &Formula) -> Result<Formula, CanonError> {
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(CanonError::FreeVariables(free.into_iter().collect()));
    }
    let mut scope: Vec<(Variable, Variable)> = Vec::new();
    rename(f, &mut scope)
}

fn rename(f: &Formula, scope: &mut Vec<(Variable, Variable)>) -> Result<Formula, CanonError> {
    let look = |t: &Term, scope: &[(Variable, Variable)]| -> Result<Term, CanonError> {
        let v = t
            .as_var()
            .ok_or_else(|| CanonError::CoordinateVariable(t.clone()))?;
        let (_, new) = scope
            .iter()
            .rev()
            .find(|(old, _)| old == v)
            .expect("sentence has no free variables");
        Ok(Term::Var(new.clone()))
    };
    Ok(match f {
        Formula::Perp(a, b) => Formula::Perp(look(a, scope)?, look(b, scope)?),
        Formula::Eq(a, b) => Formula::Eq(look(a, scope)?, look(b, scope)?),
        Formula::Not(g) => Formula::not(rename(g, scope)?),
        Formula::And(a, b) => Formula::and(rename(a, scope)?, rename(b, scope)?),
        Formula::Exists(v, g) => {
            let old = v
                .as_var()
                .ok_or_else(|| CanonError::CoordinateVariable(v.clone()))?
                .clone();
            let new = old.with_index(scope.len() as u32 + 1);
            scope.push((old, new.clone()));
            let body = rename(g, scope);
            scope.pop();
            Formula::exists(new, body?)
        }
    })
}

/// True when `f` is a sentence over plain variables whose bound variables
/// are numbered by quantifier depth.
pub fn is_canonical(f: &Formula) -> bool {
    fn walk(f: &Formula, depth: u32) -> bool {
        let ok = |t: &Term| matches!(t, Term::Var(v) if v.index() <= depth);
        match f {
            Formula::Perp(a, b) | Formula::Eq(a, b) => ok(a) && ok(b),
            Formula::Not(g) => walk(g, depth),
            Formula::And(a, b) => walk(a, depth) && walk(b, depth),
            Formula::Exists(v, g) => {
                matches!(v, Term::Var(v) if v.index() == depth + 1) && walk(g, depth + 1)
            }
        }
    }
    walk(f, 0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    pub quantifier_count: usize,
    pub quantifier_rank: usize,
    pub free_variables: BTreeSet<Term>,
}

pub fn metrics(f: &Formula) -> Metrics {
    Metrics {
        quantifier_count: f.quantifier_count(),
        quantifier_rank: f.quantifier_rank(),
        free_variables: f.free_variables(),
    }
}
