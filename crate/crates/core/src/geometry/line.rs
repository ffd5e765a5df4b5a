use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Rational;

/// A line in the rational plane: `x = c` or `y = slope * x + intercept`.
///
/// Both forms are unique for a given point set, so structural equality is
/// geometric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Line {
    Vertical {
        x: Rational,
    },
    Slanted {
        slope: Rational,
        intercept: Rational,
    },
}

/// Direction of a line: its slope, or vertical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Vertical,
    Slope(Rational),
}

impl Direction {
    /// The unique direction perpendicular to this one.
    pub fn perpendicular(&self) -> Direction {
        match self {
            Direction::Vertical => Direction::Slope(Rational::zero()),
            Direction::Slope(m) if m.is_zero() => Direction::Vertical,
            Direction::Slope(m) => Direction::Slope(m.neg_recip()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {0} is not in A* (it is horizontal, vertical, or passes through the origin)")]
pub struct NotInAStar(pub Line);

impl Line {
    pub fn slanted(slope: impl Into<Rational>, intercept: impl Into<Rational>) -> Line {
        Line::Slanted {
            slope: slope.into(),
            intercept: intercept.into(),
        }
    }

    pub fn vertical(x: impl Into<Rational>) -> Line {
        Line::Vertical { x: x.into() }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Line::Vertical { .. } => Direction::Vertical,
            Line::Slanted { slope, .. } => Direction::Slope(slope.clone()),
        }
    }

    /// Whether the line survives the removal of horizontal lines, vertical
    /// lines and lines through the origin.
    pub fn in_a_star(&self) -> bool {
        matches!(self, Line::Slanted { slope, intercept } if !slope.is_zero() && !intercept.is_zero())
    }

    /// `(slope, -1/slope, intercept)` for a line in A*.
    pub fn coords(&self) -> Result<[Rational; 3], NotInAStar> {
        match self {
            Line::Slanted { slope, intercept } if self.in_a_star() => {
                Ok([slope.clone(), slope.neg_recip(), intercept.clone()])
            }
            _ => Err(NotInAStar(self.clone())),
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Vertical { x } => write!(f, "x = {x}"),
            Line::Slanted { slope, intercept } => write!(f, "y = {slope}*x + {intercept}"),
        }
    }
}

pub fn perp(a: &Line, b: &Line) -> bool {
    match (a, b) {
        (Line::Vertical { .. }, Line::Slanted { slope, .. })
        | (Line::Slanted { slope, .. }, Line::Vertical { .. }) => slope.is_zero(),
        (Line::Slanted { slope: m, .. }, Line::Slanted { slope: n, .. }) => {
            (m * n) == Rational::integer(-1)
        }
        (Line::Vertical { .. }, Line::Vertical { .. }) => false,
    }
}

/// Distinct lines with the same direction.
pub fn parallel(a: &Line, b: &Line) -> bool {
    a != b && a.direction() == b.direction()
}

/// Lines with different directions (they meet in exactly one point).
pub fn converge(a: &Line, b: &Line) -> bool {
    a.direction() != b.direction()
}
