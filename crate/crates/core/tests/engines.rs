mod common;

use proptest::prelude::*;

use common::{holds_in_size, naive_eval};
use sapp::corpus::{random_corpus, Vocabulary};
use sapp::decider::{decide, decide_via_translation, explain, Verdict};
use sapp::eq_decider::{decide_eq_infinity, eval_finite_eq, EqDecider, EqValuation};
use sapp::formula::{parse, print, Formula, Term};

#[test]
fn fresh_element_soundness_on_deep_random_sentences() {
    let corpus = random_corpus(99, 60, Vocabulary::Equality, 9);
    assert!(corpus.iter().any(|f| f.quantifier_count() >= 7));
    for f in &corpus {
        let q = f.quantifier_count();
        let inf = decide_eq_infinity(f).unwrap();
        for size in [q, q + 1] {
            assert_eq!(
                eval_finite_eq(f, size).unwrap(),
                inf,
                "{} at {size}",
                print(f)
            );
        }
    }
}

#[test]
fn negation_completeness() {
    for f in random_corpus(3, 200, Vocabulary::Equality, 6) {
        let neg = Formula::not(f.clone());
        assert_ne!(
            decide_eq_infinity(&f).unwrap(),
            decide_eq_infinity(&neg).unwrap()
        );
    }
}

/// Open pure-equality formulas over free x1..x3, binding x4 and x5.
fn open_formula() -> impl Strategy<Value = Formula> {
    let atom = (1u32..=3, 1u32..=3).prop_map(|(a, b)| Formula::eq(Term::var(a), Term::var(b)));
    atom.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (4u32..=5, inner.clone(), 1u32..=3).prop_map(|(v, body, w)| {
                // Mention the bound variable so the quantifier matters.
                let body = Formula::or(body, Formula::eq(Term::var(v), Term::var(w)));
                Formula::exists(Term::var(v), body)
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn isomorphism_invariance(
        f in open_formula(),
        ids in prop::collection::vec(0u32..4, 3),
        perm in Just((0u32..8).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let eq = EqDecider::default();
        let val: EqValuation = (1..=3).map(|i| (Term::var(i), ids[i as usize - 1])).collect();
        let permuted: EqValuation = val.iter().map(|(t, v)| (t.clone(), perm[*v as usize])).collect();
        let base = eq.eval_open(&f, &val).unwrap();
        prop_assert_eq!(base, eq.eval_open(&f, &permuted).unwrap());

        // Oracle: a finite domain with room for every free value plus one
        // new element per quantifier.
        let size = 4 + f.quantifier_count();
        let mut env: Vec<(Term, usize)> = val.iter().map(|(t, v)| (t.clone(), *v as usize)).collect();
        prop_assert_eq!(base, naive_eval(&f, size, &|_, _| unreachable!(), &mut env));
    }
}

#[test]
fn equality_examples() {
    assert!(decide_eq_infinity(&parse("exists x. exists y. x != y").unwrap()).unwrap());
    assert!(!decide_eq_infinity(&parse("exists x. forall y. y = x").unwrap()).unwrap());
    for n in 1..=6 {
        let vars: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut body: Vec<String> = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                body.push(format!("{} != {}", vars[i], vars[j]));
            }
        }
        let matrix = if body.is_empty() {
            "v1 = v1".to_string()
        } else {
            body.join(" & ")
        };
        let prefix: String = vars.iter().map(|v| format!("exists {v}. ")).collect();
        let f = parse(&format!("{prefix}({matrix})")).unwrap();
        assert!(decide_eq_infinity(&f).unwrap(), "n = {n}");
        assert!(!holds_in_size(&f, n - 1) || n == 1);
    }
}

#[test]
fn known_theorems() {
    let symmetric =
        parse("forall x. forall y. forall z. forall t. ((O(x,t) & O(y,t) & O(y,z)) -> O(x,z))")
            .unwrap();
    assert_eq!(decide(&symmetric), Ok(Verdict::Valid));
    assert_eq!(decide_via_translation(&symmetric), Ok(Verdict::Valid));

    let parallels = parse("exists x. exists y. (x != y & !O(x,y))").unwrap();
    assert_eq!(decide_via_translation(&parallels), Ok(Verdict::Valid));
    assert_eq!(decide(&parallels), Ok(Verdict::Valid));

    // Every line has a perpendicular, and perpendiculars of one line are parallel.
    for src in [
        "forall x. exists y. O(x,y)",
        "forall x. forall y. forall z. ((O(x,y) & O(x,z)) -> !O(y,z))",
        "forall x. forall y. (O(x,y) -> x != y)",
    ] {
        let f = parse(src).unwrap();
        assert_eq!(decide(&f), Ok(Verdict::Valid), "{src}");
        assert_eq!(decide_via_translation(&f), Ok(Verdict::Valid), "{src}");
    }
    let f = parse("forall x. forall y. O(x,y)").unwrap();
    assert_eq!(decide(&f), Ok(Verdict::Invalid));
}

#[test]
fn explanations_agree_on_random_sentences() {
    for f in random_corpus(41, 100, Vocabulary::Perp, 3) {
        let e = explain(&f).unwrap();
        assert!(e.engines_agree(), "{}", print(&f));
        assert_eq!(e.translated_quantifiers(), Some(3 * f.quantifier_count()));
    }
}
