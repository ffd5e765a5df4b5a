//! Ehrenfeucht–Fraïssé games between finite `{O, =}` structures.
//!
//! The search is exhaustive minimax with two reductions. Elements with the
//! same neighbourhood (for line structures: parallel lines) can be permuted
//! freely by an automorphism, so each player only tries one unpicked
//! element per such class. A position is then determined up to isomorphism
//! by the multiset of class pairs of its picks, which is the memo key.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    to_structure, FiniteStructure, Line, Normalization, Rational, StructureError,
};

pub const DEFAULT_MAX_ROUNDS: usize = 4;
pub const DEFAULT_MAX_DOMAIN: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EfError {
    #[error("{rounds} rounds requested, above the cap of {cap}")]
    RoundCap { rounds: usize, cap: usize },
    #[error("structure has {size} elements, above the cap of {cap}")]
    DomainCap { size: usize, cap: usize },
    #[error("structures must be nonempty")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfLimits {
    pub max_rounds: usize,
    pub max_domain: usize,
}

impl Default for EfLimits {
    fn default() -> Self {
        EfLimits {
            max_rounds: DEFAULT_MAX_ROUNDS,
            max_domain: DEFAULT_MAX_DOMAIN,
        }
    }
}

/// Elements picked so far in each structure, in order, and the rounds that
/// remain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameState {
    pub picks_a: Vec<usize>,
    pub picks_b: Vec<usize>,
    pub rounds_left: usize,
}

impl GameState {
    pub fn new(rounds: usize) -> Self {
        GameState {
            picks_a: Vec::new(),
            picks_b: Vec::new(),
            rounds_left: rounds,
        }
    }

    /// Whether the picks define a partial isomorphism for `O` and `=`.
    pub fn is_partial_isomorphism(&self, a: &FiniteStructure, b: &FiniteStructure) -> bool {
        let (pa, pb) = (&self.picks_a, &self.picks_b);
        pa.len() == pb.len()
            && (0..pa.len()).all(|i| {
                (0..pa.len()).all(|j| {
                    (pa[i] == pa[j]) == (pb[i] == pb[j])
                        && a.perp(pa[i], pa[j]) == b.perp(pb[i], pb[j])
                })
            })
    }
}

/// Class id per element: elements with equal neighbourhoods share a class.
fn twin_classes(m: &FiniteStructure) -> Vec<u32> {
    let mut seen: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
    (0..m.size())
        .map(|i| {
            let key: Vec<usize> = m.neighbours(i).collect();
            let next = seen.len() as u32;
            *seen.entry(key).or_insert(next)
        })
        .collect()
}

struct Side<'s> {
    m: &'s FiniteStructure,
    class: Vec<u32>,
    /// One entry per class, listing its members in increasing order.
    members: Vec<Vec<usize>>,
}

impl<'s> Side<'s> {
    fn new(m: &'s FiniteStructure) -> Self {
        let class = twin_classes(m);
        let count = class.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut members = vec![Vec::new(); count];
        for (i, &c) in class.iter().enumerate() {
            members[c as usize].push(i);
        }
        Side { m, class, members }
    }

    /// Picked elements, then the least unpicked element of every class.
    fn moves(&self, picked: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &p in picked {
            if !out.contains(&p) {
                out.push(p);
            }
        }
        for members in &self.members {
            if let Some(&e) = members.iter().find(|e| !picked.contains(e)) {
                out.push(e);
            }
        }
        out
    }
}

struct Game<'s> {
    a: Side<'s>,
    b: Side<'s>,
    memo: HashMap<(usize, Vec<(u32, u32)>), bool>,
}

impl Game<'_> {
    fn key(&self, s: &GameState) -> (usize, Vec<(u32, u32)>) {
        let mut pairs: Vec<(usize, usize)> = s
            .picks_a
            .iter()
            .copied()
            .zip(s.picks_b.iter().copied())
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mut classes: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(x, y)| (self.a.class[x], self.b.class[y]))
            .collect();
        classes.sort_unstable();
        (s.rounds_left, classes)
    }

    /// Whether adding `(x, y)` keeps the picks a partial isomorphism.
    fn extends(&self, s: &GameState, x: usize, y: usize) -> bool {
        s.picks_a.iter().zip(&s.picks_b).all(|(&px, &py)| {
            (px == x) == (py == y) && self.a.m.perp(px, x) == self.b.m.perp(py, y)
        })
    }

    fn duplicator_wins(&mut self, s: &mut GameState) -> bool {
        if s.rounds_left == 0 {
            return true;
        }
        let key = self.key(s);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let verdict = self.spoiler_fails(s, true) && self.spoiler_fails(s, false);
        self.memo.insert(key, verdict);
        verdict
    }

    /// Whether every spoiler move in one structure has a winning answer.
    fn spoiler_fails(&mut self, s: &mut GameState, spoiler_in_a: bool) -> bool {
        let (attacks, answers) = if spoiler_in_a {
            (self.a.moves(&s.picks_a), self.b.moves(&s.picks_b))
        } else {
            (self.b.moves(&s.picks_b), self.a.moves(&s.picks_a))
        };
        attacks.into_iter().all(|x| {
            answers.iter().any(|&y| {
                let (pa, pb) = if spoiler_in_a { (x, y) } else { (y, x) };
                if !self.extends(s, pa, pb) {
                    return false;
                }
                s.picks_a.push(pa);
                s.picks_b.push(pb);
                s.rounds_left -= 1;
                let win = self.duplicator_wins(s);
                s.rounds_left += 1;
                s.picks_a.pop();
                s.picks_b.pop();
                win
            })
        })
    }
}

fn check_limits(
    limits: &EfLimits,
    a: &FiniteStructure,
    b: &FiniteStructure,
    k: usize,
) -> Result<(), EfError> {
    if a.size() == 0 || b.size() == 0 {
        return Err(EfError::Empty);
    }
    if k > limits.max_rounds {
        return Err(EfError::RoundCap {
            rounds: k,
            cap: limits.max_rounds,
        });
    }
    for m in [a, b] {
        if m.size() > limits.max_domain {
            return Err(EfError::DomainCap {
                size: m.size(),
                cap: limits.max_domain,
            });
        }
    }
    Ok(())
}

/// Whether the duplicator wins the `k`-round game on `a` and `b`, i.e. the
/// structures agree on all sentences of quantifier rank at most `k`.
pub fn ef_equivalent_with(
    limits: &EfLimits,
    a: &FiniteStructure,
    b: &FiniteStructure,
    k: usize,
) -> Result<bool, EfError> {
    check_limits(limits, a, b, k)?;
    let mut game = Game {
        a: Side::new(a),
        b: Side::new(b),
        memo: HashMap::new(),
    };
    Ok(game.duplicator_wins(&mut GameState::new(k)))
}

pub fn ef_equivalent(a: &FiniteStructure, b: &FiniteStructure, k: usize) -> Result<bool, EfError> {
    ef_equivalent_with(&EfLimits::default(), a, b, k)
}

/// Least `k <= max_k` for which the structures are not `k`-equivalent.
pub fn distinguishing_rank_with(
    limits: &EfLimits,
    a: &FiniteStructure,
    b: &FiniteStructure,
    max_k: usize,
) -> Result<Option<usize>, EfError> {
    // Equivalence is monotone in k, so the first failure is the answer.
    for k in 0..=max_k {
        if !ef_equivalent_with(limits, a, b, k)? {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

pub fn distinguishing_rank(
    a: &FiniteStructure,
    b: &FiniteStructure,
    max_k: usize,
) -> Result<Option<usize>, EfError> {
    distinguishing_rank_with(&EfLimits::default(), a, b, max_k)
}

/// Lines `y = ax + b` with `a` in `{1..k, -1, -1/2, .., -1/k}` and `b` in
/// `{1..k}`: a model of every axiom except the `k`-th instance of the
/// "one more perpendicular" schema.
pub fn gen_s_lines(k: usize) -> Vec<Line> {
    assert!(k >= 1, "k must be positive");
    let k = k as i64;
    let slopes = (1..=k)
        .map(Rational::integer)
        .chain((1..=k).map(|d| Rational::new(-1, d)));
    slopes
        .flat_map(|a| (1..=k).map(move |b| Line::slanted(a.clone(), b)))
        .collect()
}

pub fn gen_s(k: usize) -> FiniteStructure {
    to_structure(&gen_s_lines(k)).expect("distinct lines")
}

/// `n` elements with no perpendicular pairs.
pub fn pure_equality(n: usize) -> FiniteStructure {
    FiniteStructure::empty(n)
}

#[derive(Serialize, Deserialize)]
struct StructureFile {
    domain: usize,
    #[serde(rename = "O")]
    o: Vec<[usize; 2]>,
}

#[derive(Debug, Error)]
pub enum StructureFileError {
    #[error("malformed structure file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Parse `{"domain": n, "O": [[i, j], ...]}`. The relation is symmetrized
/// and loops are dropped; the returned [`Normalization`] says what changed.
pub fn read_structure(text: &str) -> Result<(FiniteStructure, Normalization), StructureFileError> {
    let file: StructureFile = serde_json::from_str(text)?;
    let pairs: Vec<(usize, usize)> = file.o.iter().map(|&[i, j]| (i, j)).collect();
    Ok(FiniteStructure::normalized(file.domain, &pairs)?)
}

/// Serialize with both orientations of every pair, so the output loads back
/// without normalization.
pub fn write_structure(m: &FiniteStructure) -> String {
    let mut o: Vec<[usize; 2]> = Vec::new();
    for (i, j) in m.pairs() {
        o.push([i, j]);
        o.push([j, i]);
    }
    o.sort_unstable();
    let file = StructureFile {
        domain: m.size(),
        o,
    };
    serde_json::to_string(&file).expect("structure serializes")
}
