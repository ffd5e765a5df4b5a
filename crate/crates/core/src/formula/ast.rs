use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A first-order variable.
///
/// Identity is the index alone; the display name is carried along for
/// printing and diagnostics and never affects equality.
#[derive(Clone, Debug)]
pub struct Variable {
    index: u32,
    name: Option<Arc<str>>,
}

impl Variable {
    pub fn new(index: u32) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Variable { index, name: None }
    }

    pub fn named(index: u32, name: impl Into<Arc<str>>) -> Self {
        assert!(index >= 1, "variable indices start at 1");
        Variable {
            index,
            name: Some(name.into()),
        }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub(crate) fn with_index(&self, index: u32) -> Self {
        Variable {
            index,
            name: self.name.clone(),
        }
    }

    pub(crate) fn without_name(&self) -> Self {
        Variable::new(self.index)
    }
}

impl PartialEq for Variable {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for Variable {}

impl Hash for Variable {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index.cmp(&other.index)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.name {
            Some(name) => f.write_str(name),
            None => write!(f, "x{}", self.index),
        }
    }
}

/// One of the three coordinates of a line in the translated language:
/// slope, negative reciprocal slope, intercept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Slope = 1,
    CoSlope = 2,
    Intercept = 3,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::Slope, Coord::CoSlope, Coord::Intercept];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn from_number(n: u8) -> Option<Coord> {
        match n {
            1 => Some(Coord::Slope),
            2 => Some(Coord::CoSlope),
            3 => Some(Coord::Intercept),
            _ => None,
        }
    }
}

/// Coordinate `coord` of the line denoted by `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordVariable {
    pub base: Variable,
    pub coord: Coord,
}

impl CoordVariable {
    pub fn new(base: Variable, coord: Coord) -> Self {
        CoordVariable { base, coord }
    }
}

/// A variable occurrence: either a plain line variable or a coordinate
/// variable of the pure-equality language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Variable),
    Coord(CoordVariable),
}

impl Term {
    pub fn var(index: u32) -> Term {
        Term::Var(Variable::new(index))
    }

    pub fn coord(index: u32, coord: Coord) -> Term {
        Term::Coord(CoordVariable::new(Variable::new(index), coord))
    }

    pub fn as_var(&self) -> Option<&Variable> {
        match self {
            Term::Var(v) => Some(v),
            Term::Coord(_) => None,
        }
    }

    pub(crate) fn without_name(&self) -> Term {
        match self {
            Term::Var(v) => Term::Var(v.without_name()),
            Term::Coord(c) => Term::Coord(CoordVariable::new(c.base.without_name(), c.coord)),
        }
    }
}

impl From<Variable> for Term {
    fn from(v: Variable) -> Self {
        Term::Var(v)
    }
}

impl From<CoordVariable> for Term {
    fn from(c: CoordVariable) -> Self {
        Term::Coord(c)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::Coord(c) => write!(f, "{}_{}", c.base, c.coord.number()),
        }
    }
}

/// The two object languages: lines with perpendicularity, and pure equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Language {
    Perp,
    PureEquality,
}

/// Formula over the core connectives. Disjunction, implication,
/// biconditional and universal quantification are built from these.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Perp(Term, Term),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(Term, Box<Formula>),
}

impl Formula {
    pub fn perp(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::Perp(a.into(), b.into())
    }

    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::Eq(a.into(), b.into())
    }

    pub fn neq(a: impl Into<Term>, b: impl Into<Term>) -> Formula {
        Formula::not(Formula::eq(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<Term>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<Term>, body: Formula) -> Formula {
        Formula::not(Formula::exists(v, Formula::not(body)))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::and(a, Formula::not(b)))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Left-associated conjunction; `None` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn language(&self) -> Language {
        if self.contains_perp() {
            Language::Perp
        } else {
            Language::PureEquality
        }
    }

    pub fn contains_perp(&self) -> bool {
        match self {
            Formula::Perp(..) => true,
            Formula::Eq(..) => false,
            Formula::Not(f) | Formula::Exists(_, f) => f.contains_perp(),
            Formula::And(a, b) => a.contains_perp() || b.contains_perp(),
        }
    }

    pub fn contains_coord(&self) -> bool {
        let is_coord = |t: &Term| matches!(t, Term::Coord(_));
        match self {
            Formula::Perp(a, b) | Formula::Eq(a, b) => is_coord(a) || is_coord(b),
            Formula::Not(f) => f.contains_coord(),
            Formula::Exists(v, f) => is_coord(v) || f.contains_coord(),
            Formula::And(a, b) => a.contains_coord() || b.contains_coord(),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Term> {
        fn walk(f: &Formula, bound: &mut Vec<Term>, out: &mut BTreeSet<Term>) {
            let mut visit = |t: &Term, bound: &Vec<Term>| {
                if !bound.contains(t) {
                    out.insert(t.clone());
                }
            };
            match f {
                Formula::Perp(a, b) | Formula::Eq(a, b) => {
                    visit(a, bound);
                    visit(b, bound);
                }
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(g, h) => {
                    walk(g, bound, out);
                    walk(h, bound, out);
                }
                Formula::Exists(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Perp(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_count(),
            Formula::And(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Exists(_, f) => 1 + f.quantifier_count(),
        }
    }

    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Perp(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(a, b) => a.quantifier_rank().max(b.quantifier_rank()),
            Formula::Exists(_, f) => 1 + f.quantifier_rank(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Perp(..) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// True when `needle` occurs as a subtree of `self`.
    pub fn contains_subformula(&self, needle: &Formula) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Formula::Perp(..) | Formula::Eq(..) => false,
            Formula::Not(f) | Formula::Exists(_, f) => f.contains_subformula(needle),
            Formula::And(a, b) => a.contains_subformula(needle) || b.contains_subformula(needle),
        }
    }

    /// The sequence of node kinds in pre-order, ignoring variables.
    pub fn shape(&self) -> Vec<NodeKind> {
        let mut out = Vec::with_capacity(self.size());
        self.shape_into(&mut out);
        out
    }

    fn shape_into(&self, out: &mut Vec<NodeKind>) {
        match self {
            Formula::Perp(..) => out.push(NodeKind::Perp),
            Formula::Eq(..) => out.push(NodeKind::Eq),
            Formula::Not(f) => {
                out.push(NodeKind::Not);
                f.shape_into(out);
            }
            Formula::And(a, b) => {
                out.push(NodeKind::And);
                a.shape_into(out);
                b.shape_into(out);
            }
            Formula::Exists(_, f) => {
                out.push(NodeKind::Exists);
                f.shape_into(out);
            }
        }
    }

    /// Copy of the formula with every display name dropped.
    pub fn strip_names(&self) -> Formula {
        match self {
            Formula::Perp(a, b) => Formula::Perp(a.without_name(), b.without_name()),
            Formula::Eq(a, b) => Formula::Eq(a.without_name(), b.without_name()),
            Formula::Not(f) => Formula::not(f.strip_names()),
            Formula::And(a, b) => Formula::and(a.strip_names(), b.strip_names()),
            Formula::Exists(v, f) => Formula::exists(v.without_name(), f.strip_names()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Perp,
    Eq,
    Not,
    And,
    Exists,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_do_not_affect_identity() {
        assert_eq!(Variable::named(1, "a"), Variable::named(1, "b"));
        assert_ne!(Variable::named(1, "a"), Variable::named(2, "a"));
    }

    #[test]
    fn free_variables_respect_scope() {
        let x = Term::var(1);
        let y = Term::var(2);
        let f = Formula::and(
            Formula::exists(x.clone(), Formula::perp(x.clone(), y.clone())),
            Formula::eq(x.clone(), x.clone()),
        );
        let free: Vec<_> = f.free_variables().into_iter().collect();
        assert_eq!(free, vec![x, y]);
    }

    #[test]
    #[should_panic]
    fn zero_index_rejected() {
        Variable::new(0);
    }
}
