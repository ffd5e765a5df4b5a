//! Generators for the axiom schemas of the theory of perpendicular lines.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::ast::Formula;
use super::parse::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomName {
    /// For any `n` lines perpendicular to `s` there is one more.
    Lambda1,
    /// For any `n` lines there is a line perpendicular to none of them.
    Lambda2,
    /// Irreflexivity.
    Lambda3,
    /// Symmetry.
    Lambda4,
    /// Every line has a perpendicular.
    Lambda5,
    /// Perpendicularity only depends on direction.
    Lambda6,
}

impl AxiomName {
    pub const ALL: [AxiomName; 6] = [
        AxiomName::Lambda1,
        AxiomName::Lambda2,
        AxiomName::Lambda3,
        AxiomName::Lambda4,
        AxiomName::Lambda5,
        AxiomName::Lambda6,
    ];

    /// Smallest admissible schema parameter, or `None` for a single axiom.
    pub fn min_n(self) -> Option<usize> {
        match self {
            AxiomName::Lambda1 => Some(1),
            // The schema starts at two; n = 1 is not part of the axiom list.
            AxiomName::Lambda2 => Some(2),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AxiomName::Lambda1 => "lambda1",
            AxiomName::Lambda2 => "lambda2",
            AxiomName::Lambda3 => "lambda3",
            AxiomName::Lambda4 => "lambda4",
            AxiomName::Lambda5 => "lambda5",
            AxiomName::Lambda6 => "lambda6",
        }
    }
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AxiomName {
    type Err = AxiomError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomName::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| AxiomError::UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("unknown axiom `{0}` (expected lambda1..lambda6)")]
    UnknownName(String),
    #[error("{0} is a schema and needs a parameter n")]
    MissingParameter(AxiomName),
    #[error("{0} takes no parameter")]
    UnexpectedParameter(AxiomName),
    #[error("{name}: n must be >= {min}, got {n}")]
    OutOfRange {
        name: AxiomName,
        n: usize,
        min: usize,
    },
}

/// Concrete text of an axiom instance.
pub fn axiom_text(name: AxiomName, n: Option<usize>) -> Result<String, AxiomError> {
    match (name.min_n(), n) {
        (Some(_), None) => return Err(AxiomError::MissingParameter(name)),
        (None, Some(_)) => return Err(AxiomError::UnexpectedParameter(name)),
        (Some(min), Some(n)) if n < min => return Err(AxiomError::OutOfRange { name, n, min }),
        _ => {}
    }
    let n = n.unwrap_or(0);
    let ys: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    let prefix: String = ys.iter().map(|y| format!("forall {y}. ")).collect();
    let join = |parts: Vec<String>| -> String {
        if parts.len() == 1 {
            parts.into_iter().next().unwrap_or_default()
        } else {
            format!("({})", parts.join(" & "))
        }
    };
    Ok(match name {
        AxiomName::Lambda1 => {
            let hyp = join(ys.iter().map(|y| format!("O(s,{y})")).collect());
            let mut concl: Vec<String> = ys.iter().map(|y| format!("t != {y}")).collect();
            concl.push("O(s,t)".into());
            format!(
                "{prefix}forall s. ({hyp} -> exists t. ({}))",
                concl.join(" & ")
            )
        }
        AxiomName::Lambda2 => {
            let body = join(ys.iter().map(|y| format!("!O(s,{y})")).collect());
            format!("{prefix}exists s. {body}")
        }
        AxiomName::Lambda3 => "forall x. !O(x,x)".into(),
        AxiomName::Lambda4 => "forall x. forall y. (O(x,y) -> O(y,x))".into(),
        AxiomName::Lambda5 => "forall x. exists y. O(x,y)".into(),
        AxiomName::Lambda6 => {
            "forall x. forall y. forall z. forall t. ((O(x,z) & O(y,z) & O(x,t)) -> O(y,t))".into()
        }
    })
}

/// The axiom instance as a canonical sentence.
pub fn axiom(name: AxiomName, n: Option<usize>) -> Result<Formula, AxiomError> {
    let text = axiom_text(name, n)?;
    Ok(parse(&text).expect("axiom texts are well formed"))
}
