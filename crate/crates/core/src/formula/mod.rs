//! Formulas over `{O, =}` and the pure-equality sublanguage.

mod ast;
mod axioms;
mod canon;
mod parse;
mod print;

pub use ast::{Coord, CoordVariable, Formula, Language, NodeKind, Term, Variable};
pub use axioms::{axiom, axiom_text, AxiomError, AxiomName};
pub use canon::{canonicalize, is_canonical, metrics, CanonError, Metrics};
pub use parse::{parse, ParseError};
pub use print::print;
