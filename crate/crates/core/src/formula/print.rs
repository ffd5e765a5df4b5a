use std::fmt::Write;

use super::ast::{Formula, Term};
use super::parse::parse;

/// Render a formula in the concrete syntax.
///
/// Conjunctions are always parenthesized (so a chain prints left-associated)
/// and a quantifier below the top level is wrapped in parentheses. Display
/// names are used when the result parses back to the same formula; otherwise
/// every variable is printed by index (`x3`, or `x3_1` for a coordinate).
pub fn print(f: &Formula) -> String {
    if !f.contains_coord() {
        let named = render(f, true);
        if parse(&named).as_ref() == Ok(f) {
            return named;
        }
    }
    render(f, false)
}

fn render(f: &Formula, named: bool) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, named, true);
    out
}

fn term(t: &Term, named: bool) -> String {
    if named {
        t.to_string()
    } else {
        t.without_name().to_string()
    }
}

fn write_formula(out: &mut String, f: &Formula, named: bool, top: bool) {
    match f {
        Formula::Perp(a, b) => {
            let _ = write!(out, "O({},{})", term(a, named), term(b, named));
        }
        Formula::Eq(a, b) => {
            let _ = write!(out, "{}={}", term(a, named), term(b, named));
        }
        Formula::Not(g) => match g.as_ref() {
            Formula::Eq(a, b) => {
                let _ = write!(out, "{}!={}", term(a, named), term(b, named));
            }
            _ => {
                out.push('!');
                write_formula(out, g, named, false);
            }
        },
        Formula::And(a, b) => {
            out.push('(');
            write_formula(out, a, named, false);
            out.push_str(" & ");
            write_formula(out, b, named, false);
            out.push(')');
        }
        Formula::Exists(v, body) => {
            if !top {
                out.push('(');
            }
            let _ = write!(out, "exists {}. ", term(v, named));
            write_formula(out, body, named, false);
            if !top {
                out.push(')');
            }
        }
    }
}
