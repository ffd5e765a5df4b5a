//! Decision procedures for the complete first-order theory of perpendicular
//! lines in the Euclidean plane.

// Errors that name a line carry it by value; they only occur on bad input.
#![allow(clippy::result_large_err)]

pub mod checks;
pub mod cli;
pub mod corpus;
pub mod decider;
pub mod efgame;
pub mod eq_decider;
pub mod formula;
pub mod geometry;
pub mod translate;
