//! Brute-force reference implementations shared by the integration tests.
//! They share no code with the library beyond the AST types.

#![allow(dead_code)]

use num_rational::BigRational;
use sapp::formula::{Formula, Term};
use sapp::geometry::FiniteStructure;

/// Naive evaluation over `0..size` with `rel` as `O`; later bindings in
/// `env` shadow earlier ones.
pub fn naive_eval(
    f: &Formula,
    size: usize,
    rel: &dyn Fn(usize, usize) -> bool,
    env: &mut Vec<(Term, usize)>,
) -> bool {
    let look = |env: &Vec<(Term, usize)>, t: &Term| {
        env.iter()
            .rev()
            .find(|(u, _)| u == t)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("unbound {t}"))
    };
    match f {
        Formula::Perp(a, b) => rel(look(env, a), look(env, b)),
        Formula::Eq(a, b) => look(env, a) == look(env, b),
        Formula::Not(g) => !naive_eval(g, size, rel, env),
        Formula::And(g, h) => naive_eval(g, size, rel, env) && naive_eval(h, size, rel, env),
        Formula::Exists(t, g) => (0..size).any(|v| {
            env.push((t.clone(), v));
            let r = naive_eval(g, size, rel, env);
            env.pop();
            r
        }),
    }
}

pub fn holds_in(f: &Formula, m: &FiniteStructure) -> bool {
    naive_eval(f, m.size(), &|i, j| m.perp(i, j), &mut Vec::new())
}

/// Truth of a pure-equality sentence in a domain of `size` elements.
pub fn holds_in_size(f: &Formula, size: usize) -> bool {
    naive_eval(
        f,
        size,
        &|_, _| panic!("O in a pure-equality sentence"),
        &mut Vec::new(),
    )
}

/// The k-round game by plain minimax over all moves, with no memo.
pub fn naive_ef(a: &FiniteStructure, b: &FiniteStructure, k: usize) -> bool {
    fn partial_iso(a: &FiniteStructure, b: &FiniteStructure, pa: &[usize], pb: &[usize]) -> bool {
        (0..pa.len()).all(|i| {
            (0..pa.len()).all(|j| {
                (pa[i] == pa[j]) == (pb[i] == pb[j]) && a.perp(pa[i], pa[j]) == b.perp(pb[i], pb[j])
            })
        })
    }
    fn go(
        a: &FiniteStructure,
        b: &FiniteStructure,
        pa: &mut Vec<usize>,
        pb: &mut Vec<usize>,
        k: usize,
    ) -> bool {
        if !partial_iso(a, b, pa, pb) {
            return false;
        }
        if k == 0 {
            return true;
        }
        let answer = |pa: &mut Vec<usize>, pb: &mut Vec<usize>, x: usize, y: usize| {
            pa.push(x);
            pb.push(y);
            let r = go(a, b, pa, pb, k - 1);
            pa.pop();
            pb.pop();
            r
        };
        (0..a.size()).all(|x| (0..b.size()).any(|y| answer(pa, pb, x, y)))
            && (0..b.size()).all(|y| (0..a.size()).any(|x| answer(pa, pb, x, y)))
    }
    go(a, b, &mut Vec::new(), &mut Vec::new(), k)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Slopes of the lines of S_k in generation order, recomputed from the
/// definition: a in {1..k, -1, -1/2, .., -1/k}, each with k intercepts.
pub fn s_slopes(k: i64) -> Vec<BigRational> {
    let slopes: Vec<BigRational> = (1..=k)
        .map(|a| q(a, 1))
        .chain((1..=k).map(|d| q(-1, d)))
        .collect();
    slopes
        .iter()
        .flat_map(|a| std::iter::repeat_n(a.clone(), k as usize))
        .collect()
}
