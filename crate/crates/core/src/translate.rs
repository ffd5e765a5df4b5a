//! Compilation of sentences over `{O, =}` into pure-equality sentences.
//!
//! A line `y = bx + c` with `b, c` nonzero is represented by three nonzero
//! reals `(b, -1/b, c)`. Perpendicularity of `x_i` and `x_j` becomes
//! `x_i_1 = x_j_2`, equality of lines becomes agreement on the first and
//! third coordinate, and every quantifier is replaced by a block of three,
//! guarded by the side condition [`kappa`] that forces the first two
//! coordinates to behave like a slope and its negative reciprocal.

use thiserror::Error;

use crate::formula::{is_canonical, Coord, Formula, Term};
use crate::geometry::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("kappa is defined for n >= 1")]
    KappaIndex,
    #[error("input is not a sentence")]
    NotSentence,
    #[error("input is not canonical (bound variables must be numbered by depth)")]
    NotCanonical,
}

fn cv(i: u32, c: Coord) -> Term {
    Term::coord(i, c)
}

/// The side condition attached to the `n`-th quantifier block:
///
/// `x_n_1 != x_n_2 & AND_{i<n} (x_i_1 = x_n_1 <-> x_i_2 = x_n_2)
///                 & AND_{i<n} (x_i_1 = x_n_2 <-> x_i_2 = x_n_1)`
pub fn kappa(n: u32) -> Result<Formula, TranslateError> {
    if n < 1 {
        return Err(TranslateError::KappaIndex);
    }
    use Coord::{CoSlope, Slope};
    let mut parts = vec![Formula::neq(cv(n, Slope), cv(n, CoSlope))];
    parts.extend((1..n).map(|i| {
        Formula::iff(
            Formula::eq(cv(i, Slope), cv(n, Slope)),
            Formula::eq(cv(i, CoSlope), cv(n, CoSlope)),
        )
    }));
    parts.extend((1..n).map(|i| {
        Formula::iff(
            Formula::eq(cv(i, Slope), cv(n, CoSlope)),
            Formula::eq(cv(i, CoSlope), cv(n, Slope)),
        )
    }));
    Ok(Formula::conjunction(parts).expect("at least one conjunct"))
}

/// Translate a canonical sentence over `{O, =}`.
///
/// The output has exactly three times as many quantifiers as the input and
/// is not simplified in any way.
pub fn translate(f: &Formula) -> Result<Formula, TranslateError> {
    if !f.is_sentence() {
        return Err(TranslateError::NotSentence);
    }
    if !is_canonical(f) {
        return Err(TranslateError::NotCanonical);
    }
    Ok(hat(f))
}

fn index(t: &Term) -> u32 {
    t.as_var()
        .expect("canonical formulas use plain variables")
        .index()
}

fn hat(f: &Formula) -> Formula {
    use Coord::{CoSlope, Intercept, Slope};
    match f {
        Formula::Perp(a, b) => Formula::eq(cv(index(a), Slope), cv(index(b), CoSlope)),
        Formula::Eq(a, b) => {
            let (i, j) = (index(a), index(b));
            Formula::and(
                Formula::eq(cv(i, Slope), cv(j, Slope)),
                Formula::eq(cv(i, Intercept), cv(j, Intercept)),
            )
        }
        Formula::Not(g) => Formula::not(hat(g)),
        Formula::And(a, b) => Formula::and(hat(a), hat(b)),
        Formula::Exists(v, body) => {
            let n = index(v);
            let inner = Formula::and(hat(body), kappa(n).expect("indices start at 1"));
            Formula::exists(
                cv(n, Slope),
                Formula::exists(cv(n, CoSlope), Formula::exists(cv(n, Intercept), inner)),
            )
        }
    }
}

/// A sequence of coordinate triples `(a1, a2, a3)`, one per bound line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordTuple {
    pub entries: Vec<[Rational; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("tuples have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("reference tuple violates kappa at position {index}")]
    Inadmissible { index: usize },
    #[error("reference tuple has a zero component at position {index}")]
    ZeroComponent { index: usize },
}

impl CoordTuple {
    pub fn new(entries: Vec<[Rational; 3]>) -> Self {
        CoordTuple { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Position (1-based) of the first entry at which kappa fails.
    pub fn first_inadmissible(&self) -> Option<usize> {
        (1..=self.len()).find(|&i| !self.kappa_holds(i))
    }

    /// Whether kappa_i holds of the first `2i` slope components.
    pub fn kappa_holds(&self, i: usize) -> bool {
        let e = &self.entries;
        let n = i - 1;
        if e[n][0] == e[n][1] {
            return false;
        }
        (0..n).all(|k| {
            ((e[k][0] == e[n][0]) == (e[k][1] == e[n][1]))
                && ((e[k][0] == e[n][1]) == (e[k][1] == e[n][0]))
        })
    }

    /// The sub-tuple at the given (0-based, non-decreasing) positions.
    pub fn select(&self, positions: &[usize]) -> CoordTuple {
        CoordTuple::new(positions.iter().map(|&p| self.entries[p].clone()).collect())
    }
}

/// Whether `b` corresponds to the admissible reference tuple `a`.
pub fn is_corresponding(b: &CoordTuple, a: &CoordTuple) -> Result<bool, CorrespondenceError> {
    if a.len() != b.len() {
        return Err(CorrespondenceError::LengthMismatch {
            left: b.len(),
            right: a.len(),
        });
    }
    if let Some(index) = a
        .entries
        .iter()
        .position(|t| t.iter().any(Rational::is_zero))
    {
        return Err(CorrespondenceError::ZeroComponent { index: index + 1 });
    }
    if let Some(index) = a.first_inadmissible() {
        return Err(CorrespondenceError::Inadmissible { index });
    }
    let (a, b) = (&a.entries, &b.entries);
    for i in 0..a.len() {
        if b[i].iter().any(Rational::is_zero) {
            return Ok(false);
        }
        let a_fresh = (0..i).all(|k| a[i][0] != a[k][0] && a[i][0] != a[k][1]);
        let b_fresh = (0..i).all(|k| b[i][0] != b[k][0] && b[i][0] != b[k][1]);
        if a_fresh && !b_fresh {
            return Ok(false);
        }
        for k in 0..i {
            if a[i][0] == a[k][0] && b[i][0] != b[k][0] {
                return Ok(false);
            }
            if a[i][0] == a[k][1] && b[i][0] != b[k][1] {
                return Ok(false);
            }
        }
        if b[i][1] != b[i][0].neg_recip() {
            return Ok(false);
        }
        if b[i][2] != a[i][2] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest positive integer that is not among `used`, their negatives, or
/// their reciprocals.
pub fn fresh_value(used: &[Rational]) -> Rational {
    let taken = |c: &Rational| {
        used.iter()
            .any(|u| u == c || &-u == c || (!u.is_zero() && &u.recip() == c))
    };
    (1..)
        .map(Rational::integer)
        .find(|c| !taken(c))
        .expect("finitely many values are taken")
}

/// Build a tuple corresponding to the admissible tuple `a`, choosing fresh
/// slopes with `fresh` (which receives the slope components already used).
pub fn corresponding_with(
    a: &CoordTuple,
    mut fresh: impl FnMut(&[Rational]) -> Rational,
) -> Result<CoordTuple, CorrespondenceError> {
    if let Some(index) = a.first_inadmissible() {
        return Err(CorrespondenceError::Inadmissible { index });
    }
    let mut out: Vec<[Rational; 3]> = Vec::with_capacity(a.len());
    for (i, entry) in a.entries.iter().enumerate() {
        let earlier = &a.entries[..i];
        let slope = if let Some(k) = earlier.iter().position(|e| e[0] == entry[0]) {
            out[k][0].clone()
        } else if let Some(k) = earlier.iter().position(|e| e[1] == entry[0]) {
            out[k][1].clone()
        } else {
            let used: Vec<Rational> = out
                .iter()
                .flat_map(|e| [e[0].clone(), e[1].clone()])
                .collect();
            fresh(&used)
        };
        let co = slope.neg_recip();
        out.push([slope, co, entry[2].clone()]);
    }
    Ok(CoordTuple::new(out))
}

/// [`corresponding_with`] using [`fresh_value`].
pub fn corresponding(a: &CoordTuple) -> Result<CoordTuple, CorrespondenceError> {
    corresponding_with(a, fresh_value)
}
