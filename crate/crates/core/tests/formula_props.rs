use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sapp::corpus::{random_sentence, Vocabulary};
use sapp::formula::{
    axiom, canonicalize, metrics, parse, print, AxiomName, Formula, Term, Variable,
};

const NAMES: [&str; 4] = ["x", "y", "z", "t"];

fn leaf() -> impl Strategy<Value = String> {
    let name = || prop::sample::select(&NAMES[..]);
    prop_oneof![
        (name(), name()).prop_map(|(a, b)| format!("O({a},{b})")),
        (name(), name()).prop_map(|(a, b)| format!("{a} = {b}")),
        (name(), name()).prop_map(|(a, b)| format!("{a} != {b}")),
    ]
}

fn text() -> impl Strategy<Value = String> {
    leaf().prop_recursive(5, 40, 2, |inner| {
        let name = prop::sample::select(&NAMES[..]);
        prop_oneof![
            inner.clone().prop_map(|f| format!("!{f}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} & {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} | {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} -> {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} <-> {b})")),
            (name.clone(), inner.clone()).prop_map(|(v, f)| format!("(exists {v}. {f})")),
            (name, inner).prop_map(|(v, f)| format!("(forall {v}. {f})")),
        ]
    })
}

/// Renumber every variable through `map`, leaving the structure alone.
fn relabel(f: &Formula, map: &dyn Fn(u32) -> u32) -> Formula {
    let t = |t: &Term| match t {
        Term::Var(v) => Term::Var(Variable::new(map(v.index()))),
        other => other.clone(),
    };
    match f {
        Formula::Perp(a, b) => Formula::Perp(t(a), t(b)),
        Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
        Formula::Not(g) => Formula::not(relabel(g, map)),
        Formula::And(g, h) => Formula::and(relabel(g, map), relabel(h, map)),
        Formula::Exists(v, g) => Formula::Exists(t(v), Box::new(relabel(g, map))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn print_parse_round_trip(src in text()) {
        let f = parse(&src).unwrap();
        let printed = print(&f);
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&back, &f, "printed as {}", printed);
        prop_assert_eq!(print(&back), printed);
    }

    #[test]
    fn generated_sentences_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_sentence(&mut rng, Vocabulary::Perp, 4);
        prop_assert_eq!(parse(&print(&f)).unwrap(), f);
    }

    #[test]
    fn canonicalization_keeps_shape(seed in any::<u64>(), offset in 5u32..50, stride in 1u32..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_sentence(&mut rng, Vocabulary::Perp, 4);
        let scrambled = relabel(&f, &|i| offset + stride * (9 - i));
        let c = canonicalize(&scrambled).unwrap();
        prop_assert_eq!(c.shape(), scrambled.shape());
        prop_assert_eq!(c, f);
    }

    #[test]
    fn closed_texts_canonicalize(src in text()) {
        let closed = format!("forall x. forall y. forall z. forall t. {src}");
        let f = parse(&closed).unwrap();
        let c = canonicalize(&f).unwrap();
        prop_assert_eq!(c.shape(), f.shape());
        prop_assert_eq!(metrics(&c), metrics(&f));
    }
}

#[test]
fn desugaring() {
    let pairs = [
        ("O(x,y) -> x = y", "!(O(x,y) & !x = y)"),
        ("forall x. O(x,x)", "!(exists x. !O(x,x))"),
        ("O(x,y) | x = y", "!(!O(x,y) & !x = y)"),
        ("x != y", "!x = y"),
        (
            "O(x,y) <-> O(y,x)",
            "(O(x,y) -> O(y,x)) & (O(y,x) -> O(x,y))",
        ),
    ];
    for (sugar, core) in pairs {
        assert_eq!(parse(sugar).unwrap(), parse(core).unwrap(), "{sugar}");
    }
}

#[test]
fn implication_is_right_associative() {
    assert_eq!(
        parse("O(x,y) -> O(y,z) -> O(z,x)").unwrap(),
        parse("O(x,y) -> (O(y,z) -> O(z,x))").unwrap()
    );
}

#[test]
fn axiom_quantifier_counts() {
    for n in 1..=8 {
        let f = axiom(AxiomName::Lambda1, Some(n)).unwrap();
        assert_eq!(metrics(&f).quantifier_count, n + 2);
    }
    for n in 2..=8 {
        let f = axiom(AxiomName::Lambda2, Some(n)).unwrap();
        assert_eq!(metrics(&f).quantifier_count, n + 1);
    }
}
