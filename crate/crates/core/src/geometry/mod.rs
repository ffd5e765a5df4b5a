//! Lines in the rational plane and finite perpendicularity structures.

mod definability;
mod line;
mod rational;
mod sample;
mod structure;

use thiserror::Error;

pub use definability::{
    check_definability, swap_preserves_o, DefinabilityReport, Disagreement, Predicate, SwapError,
};
pub use line::{converge, parallel, perp, Direction, Line, NotInAStar};
pub use rational::{Rational, RationalError};
pub use sample::{sample_fq, witness_closure};
pub use structure::{
    eval_finite, is_fixed_point_free_involution, r1_classes, r1_relation, r2_pairs, to_structure,
    EvalError, FiniteStructure, Normalization, R1Error, StructureError, Valuation,
};

#[derive(Debug, Error)]
#[error("line-set record {line}: {source}")]
pub struct LineSetError {
    pub line: usize,
    #[source]
    pub source: serde_json::Error,
}

/// Read a line-set file: one JSON record per non-blank line.
pub fn read_line_set(text: &str) -> Result<Vec<Line>, LineSetError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|source| LineSetError {
                line: i + 1,
                source,
            })
        })
        .collect()
}

pub fn write_line_set(lines: &[Line]) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(&serde_json::to_string(l).expect("lines serialize"));
        out.push('\n');
    }
    out
}
