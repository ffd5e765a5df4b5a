//! Validity of sentences over `{O, =}`.
//!
//! Two independent engines:
//!
//! * [`decide`] evaluates the sentence in the countable model: infinitely
//!   many directions, grouped into perpendicular pairs, each carrying
//!   infinitely many parallel lines. A quantifier only needs to try one
//!   representative of each orbit of the automorphism group fixing the
//!   lines already chosen: a chosen line, a new line in a chosen direction,
//!   a new line in the partner of a chosen direction, or a new line in a
//!   new direction.
//! * [`decide_via_translation`] canonicalizes, translates into pure equality
//!   and decides the result over infinite domains.
//!
//! The theory is complete, so validity is truth in that model and exactly
//! one of `f` and `!f` is valid.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::eq_decider::{EqDecider, EqError, EqStats};
use crate::formula::{canonicalize, CanonError, Formula, Term};
use crate::translate::{translate, TranslateError};

pub const DEFAULT_DIRECT_CAP: usize = 8;
pub const DEFAULT_TRANSLATION_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Valid,
    Invalid,
}

impl Verdict {
    pub fn from_truth(holds: bool) -> Verdict {
        if holds {
            Verdict::Valid
        } else {
            Verdict::Invalid
        }
    }

    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }

    pub fn negate(self) -> Verdict {
        Verdict::from_truth(!self.is_valid())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "Valid",
            Verdict::Invalid => "Invalid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error("sentence has {count} quantifiers, above the {engine} cap of {cap}")]
    QuantifierCap {
        engine: &'static str,
        count: usize,
        cap: usize,
    },
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Eq(#[from] EqError),
}

/// An abstract line: a direction id and a line id within that direction.
/// Directions `2p` and `2p + 1` are perpendicular to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct AbstractLine {
    direction: u32,
    line: u32,
}

fn partner(direction: u32) -> u32 {
    direction ^ 1
}

type NodeId = usize;

#[derive(Debug, Clone)]
enum Node {
    Perp(usize, usize),
    Eq(usize, usize),
    Not(NodeId),
    And(NodeId, NodeId),
    Exists(usize, NodeId),
}

/// Canonical sentence with variables resolved to slots (slot `d - 1` for
/// the variable bound at depth `d`).
struct Program {
    nodes: Vec<Node>,
    free_slots: Vec<Vec<usize>>,
    root: NodeId,
    depth: usize,
}

impl Program {
    fn compile(f: &Formula) -> Program {
        let mut p = Program {
            nodes: Vec::new(),
            free_slots: Vec::new(),
            root: 0,
            depth: f.quantifier_rank(),
        };
        p.root = p.add(f);
        p
    }

    fn slot(t: &Term) -> usize {
        t.as_var().expect("canonical sentence").index() as usize - 1
    }

    fn push(&mut self, node: Node, mut free: Vec<usize>) -> NodeId {
        free.sort_unstable();
        free.dedup();
        self.nodes.push(node);
        self.free_slots.push(free);
        self.nodes.len() - 1
    }

    fn add(&mut self, f: &Formula) -> NodeId {
        match f {
            Formula::Perp(a, b) => {
                let (i, j) = (Self::slot(a), Self::slot(b));
                self.push(Node::Perp(i, j), vec![i, j])
            }
            Formula::Eq(a, b) => {
                let (i, j) = (Self::slot(a), Self::slot(b));
                self.push(Node::Eq(i, j), vec![i, j])
            }
            Formula::Not(g) => {
                let g = self.add(g);
                let free = self.free_slots[g].clone();
                self.push(Node::Not(g), free)
            }
            Formula::And(a, b) => {
                let swap = b.quantifier_count() < a.quantifier_count();
                let (a, b) = (self.add(a), self.add(b));
                let mut free = self.free_slots[a].clone();
                free.extend_from_slice(&self.free_slots[b]);
                let node = if swap {
                    Node::And(b, a)
                } else {
                    Node::And(a, b)
                };
                self.push(node, free)
            }
            Formula::Exists(v, g) => {
                let s = Self::slot(v);
                let body = self.add(g);
                let free = self.free_slots[body]
                    .iter()
                    .copied()
                    .filter(|&x| x != s)
                    .collect();
                self.push(Node::Exists(s, body), free)
            }
        }
    }
}

/// Counters collected by the direct engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DirectStats {
    pub branches: u64,
    pub memo_entries: usize,
}

/// Evaluator over the countable model.
#[derive(Debug, Clone, Copy)]
pub struct DirectDecider {
    pub quantifier_cap: usize,
    /// Try a line in a brand-new direction at each quantifier. Always on in
    /// normal use; switching it off (new directions are then only tried when
    /// nothing relevant is bound yet) gives a deliberately incomplete engine
    /// for testing that the branching is not narrowed.
    pub fresh_direction: bool,
}

impl Default for DirectDecider {
    fn default() -> Self {
        DirectDecider {
            quantifier_cap: DEFAULT_DIRECT_CAP,
            fresh_direction: true,
        }
    }
}

impl DirectDecider {
    pub fn new(quantifier_cap: usize) -> Self {
        DirectDecider {
            quantifier_cap,
            ..DirectDecider::default()
        }
    }

    pub fn decide(&self, f: &Formula) -> Result<Verdict, DecideError> {
        self.decide_with_stats(f).map(|(v, _)| v)
    }

    pub fn decide_with_stats(&self, f: &Formula) -> Result<(Verdict, DirectStats), DecideError> {
        let canonical = canonicalize(f)?;
        let count = canonical.quantifier_count();
        if count > self.quantifier_cap {
            return Err(DecideError::QuantifierCap {
                engine: "direct",
                count,
                cap: self.quantifier_cap,
            });
        }
        let program = Program::compile(&canonical);
        let mut search = Search {
            program: &program,
            fresh_direction: self.fresh_direction,
            memo: HashMap::new(),
            stats: DirectStats::default(),
        };
        let mut vals = vec![None; program.depth];
        let holds = search.eval(program.root, &mut vals);
        search.stats.memo_entries = search.memo.len();
        Ok((Verdict::from_truth(holds), search.stats))
    }
}

struct Search<'p> {
    program: &'p Program,
    fresh_direction: bool,
    memo: HashMap<(NodeId, Vec<(u8, u8)>), bool>,
    stats: DirectStats,
}

/// Relabel directions and lines by first appearance. A direction pair is
/// numbered when either member is first seen, and that member gets the even
/// label, so swapping the two members of a pair does not change the key.
fn canonical_key(values: impl Iterator<Item = AbstractLine>) -> Vec<(u8, u8)> {
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    let mut lines: Vec<AbstractLine> = Vec::new();
    values
        .map(|v| {
            let pair = v.direction / 2;
            let label = match pairs.iter().position(|&(p, _)| p == pair) {
                Some(i) => 2 * i as u32 + u32::from(pairs[i].1 != v.direction),
                None => {
                    pairs.push((pair, v.direction));
                    2 * (pairs.len() as u32 - 1)
                }
            };
            let line = match lines.iter().position(|&l| l == v) {
                Some(i) => i,
                None => {
                    lines.push(v);
                    lines.len() - 1
                }
            };
            (label as u8, line as u8)
        })
        .collect()
}

impl Search<'_> {
    fn candidates(&self, free: &[usize], vals: &[Option<AbstractLine>]) -> Vec<AbstractLine> {
        let bound: Vec<AbstractLine> = free.iter().map(|&s| vals[s].expect("bound")).collect();
        let all: Vec<AbstractLine> = vals.iter().flatten().copied().collect();
        let fresh_in = |d: u32| AbstractLine {
            direction: d,
            line: all
                .iter()
                .filter(|l| l.direction == d)
                .map(|l| l.line + 1)
                .max()
                .unwrap_or(0),
        };
        let mut out: Vec<AbstractLine> = Vec::new();
        let add = |l: AbstractLine, out: &mut Vec<AbstractLine>| {
            if !out.contains(&l) {
                out.push(l);
            }
        };
        for &l in &bound {
            add(l, &mut out);
        }
        let mut directions: Vec<u32> = Vec::new();
        for l in &bound {
            if !directions.contains(&l.direction) {
                directions.push(l.direction);
            }
        }
        for &d in &directions {
            add(fresh_in(d), &mut out);
        }
        for &d in &directions {
            if !directions.contains(&partner(d)) {
                add(fresh_in(partner(d)), &mut out);
            }
        }
        if self.fresh_direction || bound.is_empty() {
            let next_pair = all.iter().map(|l| l.direction / 2 + 1).max().unwrap_or(0);
            add(
                AbstractLine {
                    direction: 2 * next_pair,
                    line: 0,
                },
                &mut out,
            );
        }
        out
    }

    fn eval(&mut self, node: NodeId, vals: &mut Vec<Option<AbstractLine>>) -> bool {
        let get = |vals: &Vec<Option<AbstractLine>>, s: usize| vals[s].expect("slot bound");
        match self.program.nodes[node] {
            Node::Perp(i, j) => partner(get(vals, i).direction) == get(vals, j).direction,
            Node::Eq(i, j) => get(vals, i) == get(vals, j),
            Node::Not(g) => !self.eval(g, vals),
            Node::And(a, b) => self.eval(a, vals) && self.eval(b, vals),
            Node::Exists(slot, body) => {
                let free = &self.program.free_slots[node];
                let key = (node, canonical_key(free.iter().map(|&s| get(vals, s))));
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let candidates = self.candidates(free, vals);
                let saved = vals[slot];
                let mut verdict = false;
                for c in candidates {
                    self.stats.branches += 1;
                    vals[slot] = Some(c);
                    if self.eval(body, vals) {
                        verdict = true;
                        break;
                    }
                }
                vals[slot] = saved;
                self.memo.insert(key, verdict);
                verdict
            }
        }
    }
}

/// Validity by evaluation in the countable model, with the default cap.
pub fn decide(f: &Formula) -> Result<Verdict, DecideError> {
    DirectDecider::default().decide(f)
}

/// Pipeline through the pure-equality translation.
#[derive(Debug, Clone, Copy)]
pub struct TranslationDecider {
    /// Cap on quantifiers of the original sentence; the translated sentence
    /// may have three times as many.
    pub quantifier_cap: usize,
}

impl Default for TranslationDecider {
    fn default() -> Self {
        TranslationDecider {
            quantifier_cap: DEFAULT_TRANSLATION_CAP,
        }
    }
}

/// Intermediate results of the translation pipeline.
#[derive(Debug, Clone)]
pub struct TranslationRun {
    pub canonical: Formula,
    pub translated: Formula,
    pub verdict: Verdict,
    pub stats: EqStats,
}

impl TranslationDecider {
    pub fn new(quantifier_cap: usize) -> Self {
        TranslationDecider { quantifier_cap }
    }

    pub fn decide(&self, f: &Formula) -> Result<Verdict, DecideError> {
        self.run(f).map(|r| r.verdict)
    }

    pub fn run(&self, f: &Formula) -> Result<TranslationRun, DecideError> {
        let canonical = canonicalize(f)?;
        let count = canonical.quantifier_count();
        if count > self.quantifier_cap {
            return Err(DecideError::QuantifierCap {
                engine: "translation",
                count,
                cap: self.quantifier_cap,
            });
        }
        let translated = translate(&canonical)?;
        let eq = EqDecider::new(3 * self.quantifier_cap);
        let (holds, stats) = eq.decide_with_stats(&translated)?;
        Ok(TranslationRun {
            canonical,
            translated,
            verdict: Verdict::from_truth(holds),
            stats,
        })
    }
}

/// Validity through translation into pure equality, with the default cap.
pub fn decide_via_translation(f: &Formula) -> Result<Verdict, DecideError> {
    TranslationDecider::default().decide(f)
}

/// Everything both engines computed for one sentence.
#[derive(Debug, Clone)]
pub struct Explanation {
    pub canonical: Formula,
    pub direct: Verdict,
    pub direct_stats: DirectStats,
    /// Absent when the sentence exceeds the translation cap.
    pub translation: Option<TranslationRun>,
}

impl Explanation {
    pub fn translated_quantifiers(&self) -> Option<usize> {
        self.translation
            .as_ref()
            .map(|t| t.translated.quantifier_count())
    }

    /// Whether the engines agree (trivially true without a translation run).
    pub fn engines_agree(&self) -> bool {
        self.translation
            .as_ref()
            .is_none_or(|t| t.verdict == self.direct)
    }
}

pub fn explain_with(
    direct: &DirectDecider,
    translation: &TranslationDecider,
    f: &Formula,
) -> Result<Explanation, DecideError> {
    let canonical = canonicalize(f)?;
    let (verdict, direct_stats) = direct.decide_with_stats(&canonical)?;
    let translation = match translation.run(&canonical) {
        Ok(run) => Some(run),
        Err(DecideError::QuantifierCap { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Explanation {
        canonical,
        direct: verdict,
        direct_stats,
        translation,
    })
}

/// [`explain_with`] using default caps.
pub fn explain(f: &Formula) -> Result<Explanation, DecideError> {
    explain_with(&DirectDecider::default(), &TranslationDecider::default(), f)
}
