//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! fails. Runs without the libtest harness so the lines always reach the
//! output.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{holds_in, holds_in_size, naive_ef, naive_eval, s_slopes};
use sapp::checks::{self, Suite};
use sapp::corpus::{self, Vocabulary};
use sapp::decider::{decide, DirectDecider, TranslationDecider, Verdict};
use sapp::efgame::{ef_equivalent, gen_s, pure_equality};
use sapp::eq_decider::{decide_eq_infinity, eval_finite_eq};
use sapp::formula::{axiom, print, AxiomName, Formula};
use sapp::geometry::{
    check_definability, sample_fq, to_structure, witness_closure, Direction, Predicate, Rational,
};
use sapp::translate::{is_corresponding, kappa, translate, CoordTuple};

const SEED: u64 = checks::DEFAULT_SEED;

/// Per-verdict and whole-suite budgets for criterion 1.
const DIRECT_VERDICT_BUDGET: Duration = Duration::from_secs(1);
const AXIOM_SUITE_BUDGET: Duration = Duration::from_secs(300);
/// Budget for criterion 6.
const WITNESS_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn axiom_validity() -> Outcome {
    let started = Instant::now();
    let direct = DirectDecider::default();
    let translation = TranslationDecider::default();
    let mut slowest = Duration::ZERO;
    let mut translated = 0;
    for (name, f) in checks::axiom_instances() {
        let t = Instant::now();
        let d = direct.decide(&f);
        let took = t.elapsed();
        slowest = slowest.max(took);
        ensure(d == Ok(Verdict::Valid), || format!("{name}: direct {d:?}"))?;
        ensure(took < DIRECT_VERDICT_BUDGET, || {
            format!("{name}: direct took {took:?}")
        })?;
        if 3 * f.quantifier_count() <= 12 {
            let v = translation.decide(&f);
            ensure(v == Ok(Verdict::Valid), || {
                format!("{name}: translation {v:?}")
            })?;
            translated += 1;
        }
    }
    let total = started.elapsed();
    ensure(total < AXIOM_SUITE_BUDGET, || {
        format!("suite took {total:?}")
    })?;
    Ok(format!(
        "11 axioms Valid, {translated} also via translation; slowest direct {slowest:.2?}, total {total:.2?}"
    ))
}

fn corpora() -> (Vec<Formula>, Vec<Formula>) {
    let templates = corpus::template_corpus();
    let random = corpus::random_corpus(SEED, 200, Vocabulary::Perp, 3);
    (templates, random)
}

fn engine_agreement() -> Outcome {
    let (templates, random) = corpora();
    ensure(random.iter().all(|f| f.quantifier_count() <= 3), || {
        "random corpus too deep".into()
    })?;
    ensure(templates.iter().all(|f| f.quantifier_count() <= 2), || {
        "template corpus too deep".into()
    })?;
    let translation = TranslationDecider::default();
    let mut checked = 0;
    for f in templates.iter().chain(&random) {
        let d = decide(f);
        let t = translation.decide(f);
        ensure(d.is_ok() && d == t, || {
            format!("{}: direct {d:?}, translation {t:?}", print(f))
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} sentences ({} templates, {} random), 0 disagreements",
        templates.len(),
        random.len()
    ))
}

fn completeness_xor() -> Outcome {
    let (templates, random) = corpora();
    let translation = TranslationDecider::default();
    let mut valid = 0;
    let all: Vec<_> = templates.into_iter().chain(random).collect();
    for f in &all {
        let neg = Formula::not(f.clone());
        for (engine, p, n) in [
            ("direct", decide(f), decide(&neg)),
            (
                "translation",
                translation.decide(f),
                translation.decide(&neg),
            ),
        ] {
            let (p, n) = (p.map_err(|e| e.to_string())?, n.map_err(|e| e.to_string())?);
            ensure(p.is_valid() != n.is_valid(), || {
                format!("{engine}: {} and its negation are both {p}", print(f))
            })?;
        }
        valid += usize::from(decide(f).map_err(|e| e.to_string())?.is_valid());
    }
    Ok(format!(
        "{} sentences, exactly one of f, !f Valid each ({valid} f Valid), 0 violations",
        all.len()
    ))
}

fn saturation() -> Outcome {
    let sentences = checks::eq_corpus(SEED);
    let mut checked = 0;
    for f in &sentences {
        let q = f.quantifier_count();
        if q > 6 {
            continue;
        }
        let inf = decide_eq_infinity(f).map_err(|e| e.to_string())?;
        for size in q..=q + 2 {
            let lib = eval_finite_eq(f, size).map_err(|e| e.to_string())?;
            let oracle = holds_in_size(f, size);
            ensure(lib == oracle, || {
                format!("{}: finite evaluators differ at {size}", print(f))
            })?;
            ensure(inf == oracle, || {
                format!("{}: EQ-inf says {inf}, size {size} says {oracle}", print(f))
            })?;
        }
        checked += 1;
    }
    ensure(checked >= 500, || {
        format!("only {checked} sentences with q <= 6")
    })?;
    Ok(format!(
        "{checked} sentences with q <= 6, sizes q..q+2, 0 disagreements"
    ))
}

fn definability() -> Outcome {
    for seed in SEED..SEED + 5 {
        let lines = sample_fq(seed, 12);
        for pred in [Predicate::P, Predicate::C] {
            let r = check_definability(pred, &lines);
            ensure(r.pairs_checked == 144, || {
                format!("seed {seed}: {} pairs", r.pairs_checked)
            })?;
            ensure(r.disagreements.is_empty(), || {
                format!("seed {seed} {pred}: {:?}", r.disagreements)
            })?;
        }
        // Independent replay: parallelism from directions, the formula by
        // naive evaluation over the witness closure.
        let domain = witness_closure(&lines);
        let m = to_structure(&domain).map_err(|e| e.to_string())?;
        let f = Predicate::P.defining_formula();
        let free: Vec<_> = f.free_variables().into_iter().collect();
        for (i, a) in lines.iter().enumerate() {
            for (j, b) in lines.iter().enumerate() {
                let geometric = i != j && a.direction() == b.direction();
                let ia = domain.iter().position(|d| d == a).unwrap();
                let ib = domain.iter().position(|d| d == b).unwrap();
                let mut env = vec![(free[0].clone(), ia), (free[1].clone(), ib)];
                let formula = naive_eval(&f, m.size(), &|x, y| m.perp(x, y), &mut env);
                ensure(geometric == formula, || {
                    format!("seed {seed}: P({i},{j}) oracle mismatch")
                })?;
            }
        }
    }
    Ok("5 seeds x 12 lines, P and C: 144 pairs each, 0 disagreements".into())
}

fn witness() -> Outcome {
    let started = Instant::now();
    for k in 2..=4usize {
        let s = gen_s(k);
        ensure(s.size() == 2 * k * k, || {
            format!("S_{k} has {} lines", s.size())
        })?;
        // O on S_k agrees with slope products recomputed from scratch.
        let slopes = s_slopes(k as i64);
        let minus_one = common::q(-1, 1);
        for i in 0..s.size() {
            for j in 0..s.size() {
                let expect = &slopes[i] * &slopes[j] == minus_one;
                ensure(s.perp(i, j) == expect, || {
                    format!("S_{k}: O({i},{j}) wrong")
                })?;
            }
        }
        for n in 1..=k {
            let f = axiom(AxiomName::Lambda1, Some(n)).map_err(|e| e.to_string())?;
            let got = holds_in(&f, &s);
            ensure(got == (n < k), || {
                format!("S_{k} lambda1_{n} evaluated {got}")
            })?;
        }
        for name in [AxiomName::Lambda3, AxiomName::Lambda4, AxiomName::Lambda6] {
            let f = axiom(name, None).map_err(|e| e.to_string())?;
            ensure(holds_in(&f, &s), || format!("S_{k} fails {name}"))?;
        }
    }
    let took = started.elapsed();
    ensure(took < WITNESS_BUDGET, || format!("took {took:?}"))?;
    Ok(format!(
        "k=2,3,4: lambda1_n holds for n<k and fails at n=k; lambda3/4/6 hold ({took:.2?})"
    ))
}

fn ef_soundness() -> Outcome {
    let pairs = checks::structure_pairs(SEED, 50);
    for (idx, (a, b)) in pairs.iter().enumerate() {
        let mut prev = true;
        for k in 0..=3 {
            let eq = ef_equivalent(a, b, k).map_err(|e| e.to_string())?;
            ensure(prev || !eq, || {
                format!("pair {idx}: equivalent at {k} but not {}", k - 1)
            })?;
            if k <= 2 {
                let oracle = naive_ef(a, b, k);
                ensure(eq == oracle, || {
                    format!("pair {idx} k={k}: engine {eq}, brute force {oracle}")
                })?;
            }
            prev = eq;
        }
    }

    let (three, five) = (pure_equality(3), pure_equality(5));
    ensure(ef_equivalent(&three, &five, 3) == Ok(true), || {
        "sizes 3,5 at k=3".into()
    })?;
    ensure(ef_equivalent(&three, &five, 4) == Ok(false), || {
        "sizes 3,5 at k=4".into()
    })?;
    ensure(
        naive_ef(&three, &five, 3) && !naive_ef(&three, &five, 4),
        || "brute force on 3,5".into(),
    )?;

    let (s3, s4) = (gen_s(3), gen_s(4));
    let engine = ef_equivalent(&s3, &s4, 2).map_err(|e| e.to_string())?;
    ensure(engine == naive_ef(&s3, &s4, 2), || {
        "S_3 vs S_4 at k=2 disagrees with brute force".into()
    })?;

    let templates = corpus::template_corpus();
    let mut equivalent = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut candidates = pairs;
    candidates.push((s3, s4));
    for _ in 0..20 {
        let a = corpus::random_structure(&mut rng, 4, 0.3);
        let b = corpus::random_structure(&mut rng, 5, 0.3);
        candidates.push((a, b));
    }
    for (idx, (a, b)) in candidates.iter().enumerate() {
        if !ef_equivalent(a, b, 2).map_err(|e| e.to_string())? {
            continue;
        }
        equivalent += 1;
        for f in &templates {
            ensure(holds_in(f, a) == holds_in(f, b), || {
                format!("pair {idx} is 2-equivalent but differs on {}", print(f))
            })?;
        }
    }
    ensure(equivalent >= 10, || {
        format!("only {equivalent} 2-equivalent pairs")
    })?;
    Ok(format!(
        "50 pairs monotone and match brute force; sizes 3/5 split at k=4; {equivalent} 2-equivalent pairs agree on {} rank-2 sentences",
        templates.len()
    ))
}

fn translation_shape() -> Outcome {
    let sentences = corpus::random_corpus(SEED ^ 0x5eed, 100, Vocabulary::Perp, 4);
    for f in &sentences {
        let t = translate(f).map_err(|e| e.to_string())?;
        ensure(t.quantifier_count() == 3 * f.quantifier_count(), || {
            format!(
                "{}: {} -> {}",
                print(f),
                f.quantifier_count(),
                t.quantifier_count()
            )
        })?;
    }
    let l3 = translate(&axiom(AxiomName::Lambda3, None).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let k1 = kappa(1).map_err(|e| e.to_string())?;
    ensure(l3.contains_subformula(&k1), || {
        "kappa(1) missing from translated lambda3".into()
    })?;
    ensure(print(&k1) == "x1_1!=x1_2", || {
        format!("kappa(1) printed as {}", print(&k1))
    })?;

    let tuple = |slope: i64, intercept: i64| {
        CoordTuple::new(vec![[
            Rational::integer(slope),
            Rational::new(-1, slope),
            Rational::integer(intercept),
        ]])
    };
    let a = tuple(2, 5);
    ensure(is_corresponding(&a, &a) == Ok(true), || {
        "a with itself".into()
    })?;
    ensure(is_corresponding(&tuple(3, 5), &a) == Ok(true), || {
        "fresh slope, same intercept".into()
    })?;
    ensure(is_corresponding(&tuple(3, 7), &a) == Ok(false), || {
        "different intercept".into()
    })?;
    // The perpendicular direction pairs slopes 2 and -1/2, as in the tuple.
    ensure(
        Direction::Slope(Rational::integer(2)).perpendicular()
            == Direction::Slope(Rational::new(-1, 2)),
        || "perpendicular slope".into(),
    )?;
    Ok("100 random sentences triple their quantifiers; kappa(1) in translated lambda3; 3 correspondence examples".into())
}

fn determinism() -> Outcome {
    let args = ["sapp", "check", "all", "--seed", "7"];
    let first = sapp::cli::run(args);
    let second = sapp::cli::run(args);
    ensure(first.code == 0, || {
        format!("check exited {}: {}", first.code, first.stdout)
    })?;
    ensure(first == second, || "in-process reports differ".into())?;
    let reports: Vec<_> = Suite::ALL
        .iter()
        .map(|s| checks::run_suite(*s, 7))
        .collect();
    ensure(checks::render(&reports) == first.stdout, || {
        "report differs from library rendering".into()
    })?;

    let bin = env!("CARGO_BIN_EXE_sapp");
    let run = || std::process::Command::new(bin).args(&args[1..]).output();
    let (p, r) = (
        run().map_err(|e| e.to_string())?,
        run().map_err(|e| e.to_string())?,
    );
    ensure(p.stdout == r.stdout && p.status == r.status, || {
        "binary runs differ".into()
    })?;
    ensure(p.stdout == first.stdout.as_bytes(), || {
        "binary and in-process output differ".into()
    })?;
    Ok(format!(
        "check all --seed 7: {} identical bytes across 4 runs",
        first.stdout.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("axiom validity", axiom_validity),
        ("engine agreement", engine_agreement),
        ("completeness xor", completeness_xor),
        ("eq-infinity saturation", saturation),
        ("definability of P and C", definability),
        ("non-finite-axiomatizability witness", witness),
        ("ef engine soundness", ef_soundness),
        ("translation shape", translation_shape),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} [{took:.2?}] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name} [{took:.2?}] {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
