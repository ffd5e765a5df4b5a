//! Checks that parallelism and convergence are first-order definable from
//! perpendicularity, by evaluating the defining formulas over a finite
//! witness domain.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::line::{converge, parallel, Line};
use super::sample::witness_closure;
use super::structure::{eval_finite, to_structure, FiniteStructure, Valuation};
use crate::formula::{parse, Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Predicate {
    /// Parallel: distinct lines with a common perpendicular.
    P,
    /// Convergent: some perpendicular of `x` is not perpendicular to `y`.
    C,
}

impl Predicate {
    pub fn defining_text(self) -> &'static str {
        match self {
            Predicate::P => "x != y & exists z. (O(x,z) & O(y,z))",
            Predicate::C => "exists z. (O(x,z) & !O(y,z))",
        }
    }

    pub fn defining_formula(self) -> Formula {
        parse(self.defining_text()).expect("defining formulas parse")
    }

    pub fn holds(self, a: &Line, b: &Line) -> bool {
        match self {
            Predicate::P => parallel(a, b),
            Predicate::C => converge(a, b),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::P => f.write_str("P"),
            Predicate::C => f.write_str("C"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub a: usize,
    pub b: usize,
    pub geometric: bool,
    pub formula: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinabilityReport {
    pub predicate: Predicate,
    pub pairs_checked: usize,
    pub witness_domain: usize,
    pub disagreements: Vec<Disagreement>,
}

/// Compare `pred` against its defining formula on every ordered pair of
/// `lines`, with quantifiers ranging over the witness closure of `lines`.
pub fn check_definability(pred: Predicate, lines: &[Line]) -> DefinabilityReport {
    let domain = witness_closure(lines);
    let m = to_structure(&domain).expect("witness closure has no duplicates");
    let f = pred.defining_formula();
    let position = |l: &Line| {
        domain
            .iter()
            .position(|d| d == l)
            .expect("input is in closure")
    };
    let mut disagreements = Vec::new();
    for (i, a) in lines.iter().enumerate() {
        for (j, b) in lines.iter().enumerate() {
            let geometric = pred.holds(a, b);
            let formula = holds_at(&f, &m, position(a), position(b));
            if geometric != formula {
                disagreements.push(Disagreement {
                    a: i,
                    b: j,
                    geometric,
                    formula,
                });
            }
        }
    }
    DefinabilityReport {
        predicate: pred,
        pairs_checked: lines.len() * lines.len(),
        witness_domain: domain.len(),
        disagreements,
    }
}

fn holds_at(f: &Formula, m: &FiniteStructure, x: usize, y: usize) -> bool {
    // Free variables of the defining formulas are x (index 1) and y (index 2).
    let v: Valuation = [(Term::var(1), x), (Term::var(2), y)].into_iter().collect();
    eval_finite(f, m, &v).expect("valuation covers x and y")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SwapError {
    #[error("line {0} is not in the set")]
    NotInSet(Line),
    #[error("lines {0} and {1} are not parallel")]
    NotParallel(Line, Line),
}

/// Whether exchanging the parallel lines `a` and `b` is an automorphism of
/// the perpendicularity structure on `lines`.
pub fn swap_preserves_o(lines: &[Line], a: &Line, b: &Line) -> Result<bool, SwapError> {
    let find = |l: &Line| {
        lines
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| SwapError::NotInSet(l.clone()))
    };
    let (ia, ib) = (find(a)?, find(b)?);
    if a != b && !parallel(a, b) {
        return Err(SwapError::NotParallel(a.clone(), b.clone()));
    }
    let mut unique: Vec<Line> = Vec::with_capacity(lines.len());
    for l in lines {
        if !unique.contains(l) {
            unique.push(l.clone());
        }
    }
    let m = to_structure(&unique).expect("deduplicated");
    let (ia, ib) = (
        unique.iter().position(|x| x == &lines[ia]).unwrap_or(ia),
        unique.iter().position(|x| x == &lines[ib]).unwrap_or(ib),
    );
    let h = |i: usize| {
        if i == ia {
            ib
        } else if i == ib {
            ia
        } else {
            i
        }
    };
    let n = m.size();
    Ok((0..n).all(|i| (0..n).all(|j| m.perp(i, j) == m.perp(h(i), h(j)))))
}
