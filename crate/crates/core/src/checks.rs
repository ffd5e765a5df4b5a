//! Self-check suites: each runs a batch of cross-checks between the engines,
//! the finite evaluators and the generators, and reports per item.
//!
//! Reports contain no timings, so a run is a pure function of the suite and
//! the seed.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{self, Vocabulary};
use crate::decider::{DecideError, DirectDecider, TranslationDecider, Verdict};
use crate::efgame::{ef_equivalent, gen_s, pure_equality};
use crate::eq_decider::{decide_eq_infinity, eval_finite_eq};
use crate::formula::{axiom, print, AxiomName, Formula};
use crate::geometry::{
    check_definability, eval_finite, sample_fq, FiniteStructure, Predicate, Rational, Valuation,
};
use crate::translate::{is_corresponding, kappa, translate, CoordTuple};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Agreement,
    Completeness,
    Saturation,
    Definability,
    Witness,
    Ef,
    Translation,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Axioms,
        Suite::Agreement,
        Suite::Completeness,
        Suite::Saturation,
        Suite::Definability,
        Suite::Witness,
        Suite::Ef,
        Suite::Translation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Agreement => "agreement",
            Suite::Completeness => "completeness",
            Suite::Saturation => "saturation",
            Suite::Definability => "definability",
            Suite::Witness => "witness",
            Suite::Ef => "ef",
            Suite::Translation => "translation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown suite `{}`", self.0)
    }
}

impl std::error::Error for UnknownSuite {}

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub items: Vec<CheckItem>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let items = match suite {
        Suite::Axioms => axioms(),
        Suite::Agreement => agreement(seed),
        Suite::Completeness => completeness(seed),
        Suite::Saturation => saturation(seed),
        Suite::Definability => definability(seed),
        Suite::Witness => witness(),
        Suite::Ef => ef(seed),
        Suite::Translation => translation(seed),
    };
    SuiteReport { suite, seed, items }
}

/// Plain-text rendering, one line per item plus a summary per suite.
pub fn render(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "suite {} (seed {})", r.suite, r.seed);
        for item in &r.items {
            let tag = if item.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "  {tag} {}: {}", item.name, item.detail);
        }
        let ok = r.items.iter().filter(|i| i.passed).count();
        let _ = writeln!(out, "  {ok}/{} passed", r.items.len());
    }
    out
}

/// The sentences with at most two and at most three quantifiers that the
/// engine cross-checks run over.
pub fn sentence_corpus(seed: u64) -> (Vec<Formula>, Vec<Formula>) {
    (
        corpus::template_corpus(),
        corpus::random_corpus(seed, 200, Vocabulary::Perp, 3),
    )
}

fn verdict_text(v: &Result<Verdict, DecideError>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => format!("error ({e})"),
    }
}

/// Names an example failure, if any, after a count.
fn summarize(checked: usize, failures: &[String]) -> String {
    match failures.first() {
        None => format!("{checked} checked, 0 failures"),
        Some(first) => format!(
            "{checked} checked, {} failures, first: {first}",
            failures.len()
        ),
    }
}

pub fn axiom_instances() -> Vec<(String, Formula)> {
    let mut out = Vec::new();
    for name in [
        AxiomName::Lambda3,
        AxiomName::Lambda4,
        AxiomName::Lambda5,
        AxiomName::Lambda6,
    ] {
        out.push((name.to_string(), axiom(name, None).expect("fixed axiom")));
    }
    for n in 1..=4 {
        out.push((
            format!("lambda1_{n}"),
            axiom(AxiomName::Lambda1, Some(n)).expect("n >= 1"),
        ));
    }
    for n in 2..=4 {
        out.push((
            format!("lambda2_{n}"),
            axiom(AxiomName::Lambda2, Some(n)).expect("n >= 2"),
        ));
    }
    out
}

fn axioms() -> Vec<CheckItem> {
    let direct = DirectDecider::default();
    let translation = TranslationDecider::default();
    axiom_instances()
        .into_iter()
        .map(|(name, f)| {
            let d = direct.decide(&f);
            let mut passed = d == Ok(Verdict::Valid);
            let mut detail = format!("direct={}", verdict_text(&d));
            if f.quantifier_count() <= translation.quantifier_cap {
                let t = translation.decide(&f);
                passed &= t == Ok(Verdict::Valid);
                let _ = write!(detail, " translation={}", verdict_text(&t));
            }
            CheckItem::new(name, passed, detail)
        })
        .collect()
}

fn agreement_over(label: &str, sentences: &[Formula]) -> CheckItem {
    let direct = DirectDecider::default();
    let translation = TranslationDecider::default();
    let mut failures = Vec::new();
    for f in sentences {
        let (d, t) = (direct.decide(f), translation.decide(f));
        if d.is_err() || d != t {
            failures.push(format!(
                "{} direct={} translation={}",
                print(f),
                verdict_text(&d),
                verdict_text(&t)
            ));
        }
    }
    CheckItem::new(
        label,
        failures.is_empty(),
        summarize(sentences.len(), &failures),
    )
}

fn agreement(seed: u64) -> Vec<CheckItem> {
    let (templates, random) = sentence_corpus(seed);
    vec![
        agreement_over("templates", &templates),
        agreement_over("random", &random),
    ]
}

fn xor_over(
    label: &str,
    sentences: &[Formula],
    decide: impl Fn(&Formula) -> Result<Verdict, DecideError>,
) -> CheckItem {
    let mut failures = Vec::new();
    for f in sentences {
        let pos = decide(f);
        let neg = decide(&Formula::not(f.clone()));
        let exactly_one = matches!((&pos, &neg), (Ok(a), Ok(b)) if a.is_valid() != b.is_valid());
        if !exactly_one {
            failures.push(format!(
                "{} f={} not f={}",
                print(f),
                verdict_text(&pos),
                verdict_text(&neg)
            ));
        }
    }
    CheckItem::new(
        label,
        failures.is_empty(),
        summarize(sentences.len(), &failures),
    )
}

fn completeness(seed: u64) -> Vec<CheckItem> {
    let (mut all, random) = sentence_corpus(seed);
    all.extend(random);
    let direct = DirectDecider::default();
    let translation = TranslationDecider::default();
    vec![
        xor_over("direct", &all, |f| direct.decide(f)),
        xor_over("translation", &all, |f| translation.decide(f)),
    ]
}

/// Pure-equality sentences for the saturation check: counting templates,
/// translations of the one-quantifier L templates, and random sentences.
pub fn eq_corpus(seed: u64) -> Vec<Formula> {
    let mut out = corpus::eq_template_corpus(6);
    out.extend(
        corpus::template_corpus()
            .iter()
            .filter(|f| f.quantifier_count() == 1)
            .map(|f| translate(f).expect("templates are canonical sentences")),
    );
    out.extend(corpus::random_corpus(seed, 100, Vocabulary::Equality, 6));
    out
}

fn saturation(seed: u64) -> Vec<CheckItem> {
    let sentences = eq_corpus(seed);
    let mut failures = Vec::new();
    for f in &sentences {
        let q = f.quantifier_count();
        let infinite = decide_eq_infinity(f);
        for size in q..=q + 2 {
            let finite = eval_finite_eq(f, size);
            if infinite.is_err() || finite != infinite {
                failures.push(format!(
                    "{} at size {size}: {finite:?} vs {infinite:?}",
                    print(f)
                ));
            }
        }
    }
    vec![CheckItem::new(
        "sizes q..q+2",
        failures.is_empty(),
        summarize(sentences.len(), &failures),
    )]
}

fn definability(seed: u64) -> Vec<CheckItem> {
    let mut items = Vec::new();
    for s in seed..seed + 5 {
        let lines = sample_fq(s, 12);
        for pred in [Predicate::P, Predicate::C] {
            let r = check_definability(pred, &lines);
            items.push(CheckItem::new(
                format!("{pred} sample {s}"),
                r.disagreements.is_empty() && r.pairs_checked == 144,
                format!(
                    "{} pairs over {} lines, {} disagreements",
                    r.pairs_checked,
                    r.witness_domain,
                    r.disagreements.len()
                ),
            ));
        }
    }
    items
}

fn holds_on(f: &Formula, m: &FiniteStructure) -> Option<bool> {
    eval_finite(f, m, &Valuation::new()).ok()
}

fn witness() -> Vec<CheckItem> {
    let mut items = Vec::new();
    for k in 2..=4 {
        let s = gen_s(k);
        for n in 1..=k {
            let f = axiom(AxiomName::Lambda1, Some(n)).expect("n >= 1");
            let got = holds_on(&f, &s);
            let want = n < k;
            items.push(CheckItem::new(
                format!("S_{k} lambda1_{n}"),
                got == Some(want),
                format!("expected {want}, got {got:?}"),
            ));
        }
        for name in [AxiomName::Lambda3, AxiomName::Lambda4, AxiomName::Lambda6] {
            let got = holds_on(&axiom(name, None).expect("fixed axiom"), &s);
            items.push(CheckItem::new(
                format!("S_{k} {name}"),
                got == Some(true),
                format!("expected true, got {got:?}"),
            ));
        }
    }
    items
}

/// Random structure pairs of sizes 2..=6; every fifth pair is an
/// isomorphic relabelling, so that equivalent pairs are well represented.
pub fn structure_pairs(seed: u64, count: usize) -> Vec<(FiniteStructure, FiniteStructure)> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let na = rng.gen_range(2..=6);
            let a = corpus::random_structure(&mut rng, na, 0.4);
            let b = if i % 5 == 0 {
                let mut perm: Vec<usize> = (0..na).collect();
                perm.shuffle(&mut rng);
                let pairs: Vec<_> = a
                    .pairs()
                    .into_iter()
                    .map(|(x, y)| (perm[x], perm[y]))
                    .collect();
                FiniteStructure::normalized(na, &pairs).expect("in range").0
            } else {
                let nb = rng.gen_range(2..=6);
                corpus::random_structure(&mut rng, nb, 0.4)
            };
            (a, b)
        })
        .collect()
}

fn ef(seed: u64) -> Vec<CheckItem> {
    let mut items = Vec::new();

    let pairs = structure_pairs(seed, 50);
    let mut failures = Vec::new();
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let verdicts: Vec<bool> = (0..=3)
            .map(|k| ef_equivalent(a, b, k).expect("within caps"))
            .collect();
        if verdicts.windows(2).any(|w| w[1] && !w[0]) {
            failures.push(format!("pair {idx}: {verdicts:?}"));
        }
    }
    items.push(CheckItem::new(
        "monotone",
        failures.is_empty(),
        summarize(pairs.len(), &failures),
    ));

    let (a, b) = (pure_equality(3), pure_equality(5));
    let (k3, k4) = (ef_equivalent(&a, &b, 3), ef_equivalent(&a, &b, 4));
    items.push(CheckItem::new(
        "sizes 3 and 5",
        k3 == Ok(true) && k4 == Ok(false),
        format!("k=3 {k3:?}, k=4 {k4:?}"),
    ));

    // Transfer: 2-equivalent structures agree on every rank-2 sentence.
    let mut extra = vec![
        (gen_s(3), gen_s(4)),
        (pure_equality(2), pure_equality(3)),
        (gen_s(2), gen_s(2)),
    ];
    extra.extend(pairs);
    let templates = corpus::template_corpus();
    let mut equivalent = 0;
    let mut failures = Vec::new();
    for (idx, (a, b)) in extra.iter().enumerate() {
        if !ef_equivalent(a, b, 2).expect("within caps") {
            continue;
        }
        equivalent += 1;
        for f in &templates {
            if holds_on(f, a) != holds_on(f, b) {
                failures.push(format!("pair {idx}: {}", print(f)));
            }
        }
    }
    items.push(CheckItem::new(
        "rank-2 transfer",
        failures.is_empty() && equivalent > 0,
        format!(
            "{equivalent} equivalent pairs; {}",
            summarize(templates.len() * equivalent, &failures)
        ),
    ));
    items
}

/// The tuples of the three worked correspondence examples and the expected
/// answers.
pub fn correspondence_examples() -> Vec<(CoordTuple, CoordTuple, bool)> {
    let t = |slope: i64, intercept: i64| {
        CoordTuple::new(vec![[
            Rational::integer(slope),
            Rational::new(-1, slope),
            Rational::integer(intercept),
        ]])
    };
    vec![
        (t(2, 5), t(2, 5), true),
        (t(3, 5), t(2, 5), true),
        (t(3, 7), t(2, 5), false),
    ]
}

fn translation(seed: u64) -> Vec<CheckItem> {
    let mut items = Vec::new();
    let sentences = corpus::random_corpus(seed, 100, Vocabulary::Perp, 4);
    let mut failures = Vec::new();
    for f in &sentences {
        match translate(f) {
            Ok(g) if g.quantifier_count() == 3 * f.quantifier_count() => {}
            Ok(g) => failures.push(format!(
                "{}: {} quantifiers",
                print(f),
                g.quantifier_count()
            )),
            Err(e) => failures.push(format!("{}: {e}", print(f))),
        }
    }
    items.push(CheckItem::new(
        "tripled quantifiers",
        failures.is_empty(),
        summarize(sentences.len(), &failures),
    ));

    let l3 = translate(&axiom(AxiomName::Lambda3, None).expect("fixed axiom")).expect("canonical");
    let k1 = kappa(1).expect("n >= 1");
    items.push(CheckItem::new(
        "kappa(1) in lambda3",
        l3.contains_subformula(&k1),
        print(&k1),
    ));

    for (i, (b, a, want)) in correspondence_examples().into_iter().enumerate() {
        let got = is_corresponding(&b, &a);
        items.push(CheckItem::new(
            format!("correspondence example {}", i + 1),
            got == Ok(want),
            format!("expected {want}, got {got:?}"),
        ));
    }
    items
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>(), Ok(s));
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in [Suite::Translation, Suite::Definability] {
            let r = run_suite(s, DEFAULT_SEED);
            assert!(r.passed(), "{}", render(&[r]));
        }
    }

    #[test]
    fn render_shape() {
        let r = SuiteReport {
            suite: Suite::Ef,
            seed: 3,
            items: vec![
                CheckItem::new("a", true, "ok"),
                CheckItem::new("b", false, "bad"),
            ],
        };
        assert_eq!(
            render(&[r]),
            "suite ef (seed 3)\n  PASS a: ok\n  FAIL b: bad\n  1/2 passed\n"
        );
    }
}
