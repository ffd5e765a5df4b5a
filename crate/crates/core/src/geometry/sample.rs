use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::line::{Direction, Line};
use super::Rational;

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// `n` distinct lines with small rational parameters, determined by `seed`.
///
/// The first three lines are two parallels and a line perpendicular to
/// both, so any sample with `n >= 4` has a parallel pair and a
/// perpendicular pair.
pub fn sample_fq(seed: u64, n: usize) -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Line> = Vec::with_capacity(n);
    let slope = nonzero_rational(&mut rng);
    let c1 = small_rational(&mut rng);
    let c2 = loop {
        let c = small_rational(&mut rng);
        if c != c1 {
            break c;
        }
    };
    let c3 = small_rational(&mut rng);
    let seeded = [
        Line::slanted(slope.clone(), c1),
        Line::slanted(slope.clone(), c2),
        Line::slanted(slope.neg_recip(), c3),
    ];
    out.extend(seeded.into_iter().take(n));
    while out.len() < n {
        let line = if rng.gen_ratio(1, 8) {
            Line::vertical(small_rational(&mut rng))
        } else {
            Line::slanted(small_rational(&mut rng), small_rational(&mut rng))
        };
        if !out.contains(&line) {
            out.push(line);
        }
    }
    out
}

/// One line through `(0, 1)` (or `x = 1`) perpendicular to `d`.
fn canonical_perpendicular(d: &Direction) -> Line {
    match d.perpendicular() {
        Direction::Vertical => Line::vertical(1),
        Direction::Slope(m) => Line::slanted(m, 1),
    }
}

/// `lines` plus, for every represented direction whose perpendicular
/// direction is missing, one canonical line in that perpendicular
/// direction. Duplicate input lines are dropped.
pub fn witness_closure(lines: &[Line]) -> Vec<Line> {
    let mut out: Vec<Line> = Vec::with_capacity(lines.len() * 2);
    for l in lines {
        if !out.contains(l) {
            out.push(l.clone());
        }
    }
    let mut directions: Vec<Direction> = Vec::new();
    for l in &out {
        let d = l.direction();
        if !directions.contains(&d) {
            directions.push(d);
        }
    }
    for d in &directions {
        if !directions.contains(&d.perpendicular()) {
            let w = canonical_perpendicular(d);
            if !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}
