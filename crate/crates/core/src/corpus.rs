//! Sentence and structure corpora for cross-checking the engines.
//!
//! Every generator is deterministic: the template corpora are fixed lists
//! and the random ones are driven by a seeded ChaCha stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Formula, Term};
use crate::geometry::FiniteStructure;

fn x(i: u32) -> Term {
    Term::var(i)
}

fn literals(atoms: &[Formula]) -> Vec<Formula> {
    atoms
        .iter()
        .flat_map(|a| [a.clone(), Formula::not(a.clone())])
        .collect()
}

/// Literals, then conjunctions and disjunctions of two literals over
/// distinct atoms.
fn matrices(atoms: &[Formula]) -> Vec<Formula> {
    let mut out = literals(atoms);
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            for a in literals(&atoms[i..=i]) {
                for b in literals(&atoms[j..=j]) {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b));
                }
            }
        }
    }
    out
}

fn quantify(exists: bool, var: u32, body: Formula) -> Formula {
    if exists {
        Formula::exists(x(var), body)
    } else {
        Formula::forall(x(var), body)
    }
}

fn atoms_one() -> Vec<Formula> {
    vec![Formula::perp(x(1), x(1)), Formula::eq(x(1), x(1))]
}

fn atoms_two() -> Vec<Formula> {
    vec![
        Formula::perp(x(1), x(1)),
        Formula::perp(x(1), x(2)),
        Formula::perp(x(2), x(1)),
        Formula::perp(x(2), x(2)),
        Formula::eq(x(1), x(2)),
    ]
}

/// Every L-sentence of the following shapes, for both quantifiers at each
/// position:
///
/// * `Q1 x1. M(x1)`
/// * `Q1 x1. Q2 x2. M(x1, x2)`
/// * `Q1 x1. (L(x1) op Q2 x2. L'(x1, x2))` with `op` in `{&, |}`
///
/// where `M` is a literal or a binary `&`/`|` of literals over distinct
/// atoms, and `L`, `L'` are literals.
pub fn template_corpus() -> Vec<Formula> {
    let mut out = Vec::new();
    let one = matrices(&atoms_one());
    let two = matrices(&atoms_two());
    for q1 in [true, false] {
        for m in &one {
            out.push(quantify(q1, 1, m.clone()));
        }
    }
    for q1 in [true, false] {
        for q2 in [true, false] {
            for m in &two {
                out.push(quantify(q1, 1, quantify(q2, 2, m.clone())));
            }
        }
    }
    for q1 in [true, false] {
        for q2 in [true, false] {
            for l in literals(&atoms_one()) {
                for l2 in literals(&atoms_two()) {
                    let inner = quantify(q2, 2, l2);
                    out.push(quantify(q1, 1, Formula::and(l.clone(), inner.clone())));
                    out.push(quantify(q1, 1, Formula::or(l.clone(), inner)));
                }
            }
        }
    }
    out
}

/// Atom vocabulary for random generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vocabulary {
    /// `O` and `=`.
    Perp,
    /// `=` only.
    Equality,
}

struct Generator<'r> {
    rng: &'r mut ChaCha8Rng,
    vocabulary: Vocabulary,
    quantifiers_left: usize,
}

impl Generator<'_> {
    fn atom(&mut self, depth: u32) -> Formula {
        let a = x(self.rng.gen_range(1..=depth));
        let b = x(self.rng.gen_range(1..=depth));
        if self.vocabulary == Vocabulary::Perp && self.rng.gen_bool(0.6) {
            Formula::perp(a, b)
        } else {
            Formula::eq(a, b)
        }
    }

    fn quantified(&mut self, depth: u32, size: u32) -> Formula {
        self.quantifiers_left -= 1;
        let body = self.formula(depth + 1, size.saturating_sub(1));
        quantify(self.rng.gen_bool(0.5), depth + 1, body)
    }

    /// A formula whose free variables are among `x1..x{depth}`.
    fn formula(&mut self, depth: u32, size: u32) -> Formula {
        if depth == 0 {
            return self.quantified(0, size);
        }
        if size == 0 {
            return self.atom(depth);
        }
        let can_quantify = self.quantifiers_left > 0;
        match self.rng.gen_range(0..10) {
            0..=1 => self.atom(depth),
            2 => Formula::not(self.formula(depth, size - 1)),
            3..=4 => {
                let a = self.formula(depth, size / 2);
                let b = self.formula(depth, size / 2);
                Formula::and(a, b)
            }
            5 => {
                let a = self.formula(depth, size / 2);
                let b = self.formula(depth, size / 2);
                Formula::or(a, b)
            }
            6 => {
                let a = self.formula(depth, size / 2);
                let b = self.formula(depth, size / 2);
                Formula::implies(a, b)
            }
            _ if can_quantify => self.quantified(depth, size),
            _ => self.atom(depth),
        }
    }
}

/// A random sentence with between 1 and `max_quantifiers` quantifiers.
pub fn random_sentence(
    rng: &mut ChaCha8Rng,
    vocabulary: Vocabulary,
    max_quantifiers: usize,
) -> Formula {
    assert!(max_quantifiers >= 1, "a sentence needs a quantifier");
    let mut g = Generator {
        rng,
        vocabulary,
        quantifiers_left: max_quantifiers,
    };
    g.formula(0, (2 * max_quantifiers as u32).max(6))
}

pub fn random_corpus(
    seed: u64,
    count: usize,
    vocabulary: Vocabulary,
    max_quantifiers: usize,
) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_sentence(&mut rng, vocabulary, max_quantifiers))
        .collect()
}

fn all_pairs(q: u32) -> impl Iterator<Item = (u32, u32)> {
    (1..=q).flat_map(move |i| (i + 1..=q).map(move |j| (i, j)))
}

/// Equality-only matrices over `x1..xq`, for `q >= 1`.
fn eq_matrices(q: u32) -> Vec<Formula> {
    let distinct = Formula::conjunction(all_pairs(q).map(|(i, j)| Formula::neq(x(i), x(j))));
    let some_equal = all_pairs(q)
        .map(|(i, j)| Formula::eq(x(i), x(j)))
        .reduce(Formula::or);
    let last_repeats = (1..q).map(|i| Formula::eq(x(i), x(q))).reduce(Formula::or);
    let last_new = Formula::conjunction((1..q).map(|i| Formula::neq(x(i), x(q))));
    let mut out = vec![Formula::eq(x(1), x(q))];
    out.extend(
        [distinct, some_equal, last_repeats, last_new]
            .into_iter()
            .flatten(),
    );
    out
}

/// Pure-equality sentences: every quantifier prefix of length `1..=max_q`
/// over a fixed family of counting matrices (all distinct, some pair
/// equal, last variable new or repeated, first equals last).
pub fn eq_template_corpus(max_q: u32) -> Vec<Formula> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        for m in eq_matrices(q) {
            for prefix in 0..1u32 << q {
                let mut f = m.clone();
                for v in (1..=q).rev() {
                    f = quantify(prefix >> (v - 1) & 1 == 1, v, f);
                }
                out.push(f);
            }
        }
    }
    out
}

/// A random structure on `size` elements, each pair perpendicular with
/// probability `density`.
pub fn random_structure(rng: &mut ChaCha8Rng, size: usize, density: f64) -> FiniteStructure {
    let mut pairs = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    let (m, _) = FiniteStructure::normalized(size, &pairs).expect("indices in range");
    m
}
