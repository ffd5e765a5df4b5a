//! Truth of pure-equality sentences in infinite structures.
//!
//! All infinite structures of the empty signature are elementarily
//! equivalent, so a sentence is evaluated over an abstract infinite domain:
//! at a quantifier with `k` distinct values in scope, the candidates are
//! those `k` values plus one fresh value. Results are memoized on the
//! equality pattern of the variables free at the quantifier.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::formula::{Formula, Term};

pub const DEFAULT_QUANTIFIER_CAP: usize = 14;

/// Largest domain accepted by the brute-force evaluator.
pub const MAX_FINITE_DOMAIN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqError {
    #[error("formula uses the perpendicularity predicate; expected pure equality")]
    WrongLanguage,
    #[error("formula has {count} quantifiers, above the cap of {cap}")]
    QuantifierCap { count: usize, cap: usize },
    #[error("variable `{0}` is not bound")]
    Unbound(Term),
    #[error("domain size must be between 1 and {MAX_FINITE_DOMAIN}, got {0}")]
    DomainSize(usize),
    #[error("formula contains quantifiers")]
    Quantified,
}

/// Assignment of abstract element ids to variables. Only the equality
/// pattern between ids is meaningful.
pub type EqValuation = BTreeMap<Term, u32>;

type NodeId = usize;

#[derive(Debug, Clone)]
enum Node {
    Eq(usize, usize),
    Not(NodeId),
    /// Children ordered so the one with fewer quantifiers runs first.
    And(NodeId, NodeId),
    Exists(usize, NodeId),
}

/// A formula with variables resolved to slot numbers. Slots `0..free` hold
/// the free variables; a quantifier at depth `d` binds slot `free + d`.
#[derive(Debug, Clone)]
struct Program {
    nodes: Vec<Node>,
    /// Slots read anywhere below each node, minus the ones it binds.
    free_slots: Vec<Vec<usize>>,
    root: NodeId,
    slots: usize,
}

impl Program {
    fn compile(f: &Formula, free: &[Term]) -> Result<Program, EqError> {
        let mut p = Program {
            nodes: Vec::new(),
            free_slots: Vec::new(),
            root: 0,
            slots: free.len(),
        };
        let mut scope: Vec<Term> = free.to_vec();
        p.root = p.add(f, &mut scope)?;
        Ok(p)
    }

    fn push(&mut self, node: Node, free: Vec<usize>) -> NodeId {
        self.nodes.push(node);
        self.free_slots.push(free);
        self.nodes.len() - 1
    }

    fn add(&mut self, f: &Formula, scope: &mut Vec<Term>) -> Result<NodeId, EqError> {
        let slot = |t: &Term, scope: &[Term]| {
            scope
                .iter()
                .rposition(|s| s == t)
                .ok_or_else(|| EqError::Unbound(t.clone()))
        };
        match f {
            Formula::Perp(..) => Err(EqError::WrongLanguage),
            Formula::Eq(a, b) => {
                let (i, j) = (slot(a, scope)?, slot(b, scope)?);
                let mut free = vec![i, j];
                free.sort_unstable();
                free.dedup();
                Ok(self.push(Node::Eq(i, j), free))
            }
            Formula::Not(g) => {
                let g = self.add(g, scope)?;
                let free = self.free_slots[g].clone();
                Ok(self.push(Node::Not(g), free))
            }
            Formula::And(a, b) => {
                let (qa, qb) = (a.quantifier_count(), b.quantifier_count());
                let a = self.add(a, scope)?;
                let b = self.add(b, scope)?;
                let mut free = self.free_slots[a].clone();
                free.extend_from_slice(&self.free_slots[b]);
                free.sort_unstable();
                free.dedup();
                let node = if qb < qa {
                    Node::And(b, a)
                } else {
                    Node::And(a, b)
                };
                Ok(self.push(node, free))
            }
            Formula::Exists(v, g) => {
                let s = scope.len();
                scope.push(v.clone());
                self.slots = self.slots.max(scope.len());
                let body = self.add(g, scope);
                scope.pop();
                let body = body?;
                let free = self.free_slots[body]
                    .iter()
                    .copied()
                    .filter(|&x| x != s)
                    .collect();
                Ok(self.push(Node::Exists(s, body), free))
            }
        }
    }
}

fn guard(f: &Formula, cap: usize) -> Result<(), EqError> {
    if f.contains_perp() {
        return Err(EqError::WrongLanguage);
    }
    let count = f.quantifier_count();
    if count > cap {
        return Err(EqError::QuantifierCap { count, cap });
    }
    Ok(())
}

/// Counters collected during one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EqStats {
    /// Candidate values tried at quantifiers.
    pub branches: u64,
    /// Entries in the memo table when evaluation finished.
    pub memo_entries: usize,
}

/// Evaluator over an infinite domain with a configurable quantifier cap.
#[derive(Debug, Clone, Copy)]
pub struct EqDecider {
    pub quantifier_cap: usize,
}

impl Default for EqDecider {
    fn default() -> Self {
        EqDecider {
            quantifier_cap: DEFAULT_QUANTIFIER_CAP,
        }
    }
}

impl EqDecider {
    pub fn new(quantifier_cap: usize) -> Self {
        EqDecider { quantifier_cap }
    }

    /// Whether the sentence holds in every infinite structure.
    pub fn decide(&self, f: &Formula) -> Result<bool, EqError> {
        self.decide_with_stats(f).map(|(v, _)| v)
    }

    pub fn decide_with_stats(&self, f: &Formula) -> Result<(bool, EqStats), EqError> {
        self.eval_open_with_stats(f, &EqValuation::new())
    }

    /// Truth of `f` in an infinite structure under `valuation`, which must
    /// bind every free variable of `f`.
    pub fn eval_open(&self, f: &Formula, valuation: &EqValuation) -> Result<bool, EqError> {
        self.eval_open_with_stats(f, valuation).map(|(v, _)| v)
    }

    fn eval_open_with_stats(
        &self,
        f: &Formula,
        valuation: &EqValuation,
    ) -> Result<(bool, EqStats), EqError> {
        guard(f, self.quantifier_cap)?;
        let free: Vec<Term> = valuation.keys().cloned().collect();
        let program = Program::compile(f, &free)?;
        let mut vals: Vec<Option<u32>> = vec![None; program.slots];
        for (i, id) in valuation.values().enumerate() {
            vals[i] = Some(*id);
        }
        let mut search = Search {
            program: &program,
            memo: HashMap::new(),
            stats: EqStats::default(),
        };
        let verdict = search.eval(program.root, &mut vals);
        search.stats.memo_entries = search.memo.len();
        Ok((verdict, search.stats))
    }
}

/// [`EqDecider::decide`] with the default cap.
pub fn decide_eq_infinity(f: &Formula) -> Result<bool, EqError> {
    EqDecider::default().decide(f)
}

struct Search<'p> {
    program: &'p Program,
    memo: HashMap<(NodeId, Vec<u8>), bool>,
    stats: EqStats,
}

/// Relabel values by order of first appearance.
fn pattern(values: impl Iterator<Item = u32>) -> Vec<u8> {
    let mut seen: Vec<u32> = Vec::new();
    values
        .map(|v| match seen.iter().position(|&s| s == v) {
            Some(i) => i as u8,
            None => {
                seen.push(v);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

impl Search<'_> {
    fn eval(&mut self, node: NodeId, vals: &mut Vec<Option<u32>>) -> bool {
        match self.program.nodes[node] {
            Node::Eq(i, j) => vals[i] == vals[j],
            Node::Not(g) => !self.eval(g, vals),
            Node::And(a, b) => self.eval(a, vals) && self.eval(b, vals),
            Node::Exists(slot, body) => {
                let free = &self.program.free_slots[node];
                let key = (
                    node,
                    pattern(free.iter().map(|&s| vals[s].expect("free slot is bound"))),
                );
                if let Some(&v) = self.memo.get(&key) {
                    return v;
                }
                let mut candidates: Vec<u32> = Vec::with_capacity(free.len() + 1);
                for &s in free {
                    let v = vals[s].expect("free slot is bound");
                    if !candidates.contains(&v) {
                        candidates.push(v);
                    }
                }
                let fresh = vals.iter().flatten().max().map_or(0, |m| m + 1);
                candidates.push(fresh);
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

/// Brute-force truth of a pure-equality sentence over a bare set of
/// `domain_size` elements.
pub fn eval_finite_eq(f: &Formula, domain_size: usize) -> Result<bool, EqError> {
    eval_finite_eq_open(f, domain_size, &EqValuation::new())
}

/// [`eval_finite_eq`] for a formula whose free variables are bound by
/// `valuation` (ids must be below `domain_size`).
pub fn eval_finite_eq_open(
    f: &Formula,
    domain_size: usize,
    valuation: &EqValuation,
) -> Result<bool, EqError> {
    if domain_size == 0 || domain_size > MAX_FINITE_DOMAIN {
        return Err(EqError::DomainSize(domain_size));
    }
    guard(f, DEFAULT_QUANTIFIER_CAP)?;
    let free: Vec<Term> = valuation.keys().cloned().collect();
    let program = Program::compile(f, &free)?;
    let mut vals: Vec<u32> = vec![0; program.slots];
    for (i, id) in valuation.values().enumerate() {
        if *id as usize >= domain_size {
            return Err(EqError::DomainSize(domain_size));
        }
        vals[i] = *id;
    }
    fn go(p: &Program, node: NodeId, vals: &mut [u32], n: u32) -> bool {
        match p.nodes[node] {
            Node::Eq(i, j) => vals[i] == vals[j],
            Node::Not(g) => !go(p, g, vals, n),
            Node::And(a, b) => go(p, a, vals, n) && go(p, b, vals, n),
            Node::Exists(slot, body) => {
                let saved = vals[slot];
                let verdict = (0..n).any(|c| {
                    vals[slot] = c;
                    go(p, body, vals, n)
                });
                vals[slot] = saved;
                verdict
            }
        }
    }
    Ok(go(&program, program.root, &mut vals, domain_size as u32))
}

/// Truth of a quantifier-free pure-equality formula when each variable is
/// given a concrete value by `lookup`.
pub fn eval_quantifier_free<T: PartialEq>(
    f: &Formula,
    lookup: &impl Fn(&Term) -> Option<T>,
) -> Result<bool, EqError> {
    let get = |t: &Term| lookup(t).ok_or_else(|| EqError::Unbound(t.clone()));
    Ok(match f {
        Formula::Perp(..) => return Err(EqError::WrongLanguage),
        Formula::Eq(a, b) => get(a)? == get(b)?,
        Formula::Not(g) => !eval_quantifier_free(g, lookup)?,
        Formula::And(a, b) => eval_quantifier_free(a, lookup)? && eval_quantifier_free(b, lookup)?,
        Formula::Exists(..) => return Err(EqError::Quantified),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn two_distinct_elements() {
        let f = p("exists x. exists y. x != y");
        assert_eq!(decide_eq_infinity(&f), Ok(true));
        assert_eq!(eval_finite_eq(&f, 1), Ok(false));
        assert_eq!(eval_finite_eq(&f, 2), Ok(true));
    }

    #[test]
    fn no_singleton_universe() {
        let f = p("exists x. forall y. y = x");
        assert_eq!(decide_eq_infinity(&f), Ok(false));
        assert_eq!(eval_finite_eq(&f, 1), Ok(true));
        assert_eq!(eval_finite_eq(&f, 2), Ok(false));
    }

    #[test]
    fn pairwise_distinct_chains() {
        for n in 1..=6 {
            let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
            let mut text: String = names.iter().map(|v| format!("exists {v}. ")).collect();
            let mut conj = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    conj.push(format!("{} != {}", names[i], names[j]));
                }
            }
            if conj.is_empty() {
                text.push_str("v1 = v1");
            } else {
                text.push_str(&format!("({})", conj.join(" & ")));
            }
            assert_eq!(decide_eq_infinity(&p(&text)), Ok(true), "{text}");
            assert_eq!(
                eval_finite_eq(&p(&text), n - 1 + usize::from(n == 1)),
                Ok(n == 1)
            );
        }
    }

    #[test]
    fn guards() {
        assert_eq!(
            decide_eq_infinity(&p("exists x. O(x,x)")),
            Err(EqError::WrongLanguage)
        );
        let deep: String = (0..15)
            .map(|i| format!("exists v{i}. "))
            .collect::<String>()
            + "v0 = v0";
        assert_eq!(
            decide_eq_infinity(&p(&deep)),
            Err(EqError::QuantifierCap { count: 15, cap: 14 })
        );
        assert_eq!(eval_finite_eq(&p("x = x"), 0), Err(EqError::DomainSize(0)));
        assert!(matches!(
            decide_eq_infinity(&p("x = y")),
            Err(EqError::Unbound(_))
        ));
    }

    #[test]
    fn open_formula_valuation() {
        let f = p("exists z. (z != x & z != y)");
        let x = Term::var(1);
        let y = Term::var(2);
        let v: EqValuation = [(x, 4), (y, 9)].into_iter().collect();
        assert_eq!(EqDecider::default().eval_open(&f, &v), Ok(true));
        assert_eq!(
            eval_finite_eq_open(
                &f,
                2,
                &[(Term::var(1), 0), (Term::var(2), 1)].into_iter().collect()
            ),
            Ok(false)
        );
    }

    #[test]
    fn stats_are_reported() {
        let (v, stats) = EqDecider::default()
            .decide_with_stats(&p("forall x. forall y. exists z. (z != x & z != y)"))
            .unwrap();
        assert!(v);
        assert!(stats.branches > 0);
        assert!(stats.memo_entries > 0);
    }

    #[test]
    fn quantifier_free_with_values() {
        let f = p("a = b & !(a = c)");
        let vals = |t: &Term| match t.as_var().map(|v| v.index()) {
            Some(1) | Some(2) => Some(7),
            Some(3) => Some(8),
            _ => None,
        };
        assert_eq!(eval_quantifier_free(&f, &vals), Ok(true));
        assert_eq!(
            eval_quantifier_free(&p("exists a. a = a"), &vals),
            Err(EqError::Quantified)
        );
    }
}
