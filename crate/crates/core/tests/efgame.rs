mod common;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{holds_in, naive_ef};
use sapp::corpus::random_structure;
use sapp::efgame::{
    distinguishing_rank, ef_equivalent, ef_equivalent_with, gen_s, pure_equality, read_structure,
    write_structure, EfError, EfLimits,
};
use sapp::formula::{axiom, AxiomName};
use sapp::geometry::{r1_classes, r2_pairs, FiniteStructure};

fn permuted(m: &FiniteStructure, rng: &mut ChaCha8Rng) -> FiniteStructure {
    let mut perm: Vec<usize> = (0..m.size()).collect();
    perm.shuffle(rng);
    let pairs: Vec<_> = m
        .pairs()
        .into_iter()
        .map(|(a, b)| (perm[a], perm[b]))
        .collect();
    FiniteStructure::normalized(m.size(), &pairs).unwrap().0
}

#[test]
fn isomorphic_structures_are_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = random_structure(&mut rng, 7, 0.35);
        let b = permuted(&a, &mut rng);
        for k in 0..=4 {
            assert_eq!(ef_equivalent(&a, &b, k), Ok(true));
        }
        assert_eq!(distinguishing_rank(&a, &b, 4), Ok(None));
    }
}

#[test]
fn engine_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..40 {
        let a = random_structure(&mut rng, 4, 0.4);
        let b = random_structure(&mut rng, 5, 0.4);
        for k in 0..=3 {
            assert_eq!(
                ef_equivalent(&a, &b, k).unwrap(),
                naive_ef(&a, &b, k),
                "k = {k}"
            );
        }
    }
    let (s3, s4) = (gen_s(3), gen_s(4));
    assert_eq!(ef_equivalent(&s3, &s4, 2).unwrap(), naive_ef(&s3, &s4, 2));
}

#[test]
fn gen_s_distinguished_by_its_missing_axiom() {
    // S_2 fails lambda1_2 (rank 4) while S_3 satisfies it, so they are not
    // 4-equivalent; at rank 1 every nonempty irreflexive pair looks alike.
    let (s2, s3) = (gen_s(2), gen_s(3));
    let f = axiom(AxiomName::Lambda1, Some(2)).unwrap();
    assert!(!holds_in(&f, &s2) && holds_in(&f, &s3));
    assert_eq!(ef_equivalent(&s2, &s3, 1), Ok(true));
    assert_eq!(ef_equivalent(&s2, &s3, 4), Ok(false));
    let rank = distinguishing_rank(&s2, &s3, 4).unwrap().unwrap();
    assert!((2..=4).contains(&rank));
}

#[test]
fn gen_s_classes() {
    let s = gen_s(3);
    assert_eq!(s.size(), 18);
    let classes = r1_classes(&s).unwrap();
    assert_eq!(classes.len(), 6);
    assert!(classes.iter().all(|c| c.len() == 3));
    let partner = r2_pairs(&s).unwrap();
    // Slope order is 1, 2, 3, -1, -1/2, -1/3.
    for (i, j) in [(0, 3), (1, 4), (2, 5)] {
        assert_eq!(partner[i], Some(j));
        assert_eq!(partner[j], Some(i));
    }
}

#[test]
fn lambda1_replay() {
    for k in 2..=4 {
        let s = gen_s(k);
        for n in 1..=k {
            let f = axiom(AxiomName::Lambda1, Some(n)).unwrap();
            assert_eq!(holds_in(&f, &s), n < k, "S_{k}, n = {n}");
        }
    }
}

#[test]
fn custom_limits() {
    let limits = EfLimits {
        max_rounds: 6,
        max_domain: 8,
    };
    let (a, b) = (pure_equality(5), pure_equality(6));
    assert_eq!(ef_equivalent_with(&limits, &a, &b, 5), Ok(true));
    assert_eq!(ef_equivalent_with(&limits, &a, &b, 6), Ok(false));
    assert_eq!(
        ef_equivalent_with(&limits, &a, &pure_equality(9), 1),
        Err(EfError::DomainCap { size: 9, cap: 8 })
    );
}

#[test]
fn structure_files() {
    let m = gen_s(2).forget_lines();
    let (back, fix) = read_structure(&write_structure(&m)).unwrap();
    assert!(fix.is_clean());
    assert_eq!(back, m);
    let (m, fix) =
        read_structure(r#"{"domain": 4, "O": [[0, 1], [1, 0], [2, 3], [3, 3]]}"#).unwrap();
    assert_eq!(m.pairs(), vec![(0, 1), (2, 3)]);
    assert_eq!(fix.added_symmetric, vec![(3, 2)]);
    assert_eq!(fix.removed_reflexive, vec![3]);
}
