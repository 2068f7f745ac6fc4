//! Cross-checks against independent brute-force computations.

use std::collections::BTreeSet;

use nottingham::characters::{characters_of_type, enumerate_reduced_forms, validate_type};
use nottingham::equivalence::{
    bound_b, count_classes, count_orbits, strict_equiv_search, weak_equiv_search, CountMethod,
};
use nottingham::{Character, NottinghamElt, Prime, Relation, SearchConfig, TypeLM, UnitSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pr(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// Every character with coefficients at `p`-coprime indices `<= m`.
fn all_characters(p: Prime, m: usize) -> Vec<Character> {
    let idx: Vec<usize> = (1..=m).filter(|&j| !p.divides(j as u32)).collect();
    let q = p.square() as usize;
    let total = q.pow(idx.len() as u32);
    (0..total)
        .map(|mut n| {
            let pairs: Vec<(usize, i64)> = idx
                .iter()
                .map(|&j| {
                    let v = (n % q) as i64;
                    n /= q;
                    (j, v)
                })
                .collect();
            Character::new(p, pairs).unwrap()
        })
        .collect()
}

#[test]
fn type_enumeration_matches_filtered_brute_force() {
    for (p, m) in [(2, 7), (3, 5), (5, 4)] {
        let p = pr(p);
        let all = all_characters(p, m);
        for l in 1..=m {
            for mm in 1..=m {
                if !validate_type(p, l, mm) {
                    continue;
                }
                let want: BTreeSet<Character> = all
                    .iter()
                    .filter(|c| c.break_sequence().ok() == Some(TypeLM { l, m: mm }))
                    .cloned()
                    .collect();
                let got: Vec<Character> = characters_of_type(p, l, mm).unwrap().collect();
                assert!(got.windows(2).all(|w| w[0] < w[1]), "sorted, p={p} <{l},{mm}>");
                assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), want, "p={p} <{l},{mm}>");

                let reduced: BTreeSet<Character> =
                    want.iter().filter(|c| c.is_reduced()).cloned().collect();
                let forms: BTreeSet<Character> = enumerate_reduced_forms(p, l, mm)
                    .unwrap()
                    .iter()
                    .map(|f| f.to_character())
                    .collect();
                // at p = 2, m = 2l the overlap index carries x_l + 2 b_l, so
                // forms and characters coincide only as sets of values
                assert_eq!(forms, reduced, "p={p} <{l},{mm}>");
                assert_eq!(forms.len() as u64, bound_b(p, l, mm).unwrap().value);
            }
        }
    }
}

/// The action by its definition: `c'_j = χ(E_j ∘ u)`.
fn act_by_definition(chi: &Character, u: &NottinghamElt) -> Character {
    let p = chi.prime();
    let m = chi.bound();
    let pairs: Vec<(usize, i64)> = (1..=m)
        .filter(|&j| !p.divides(j as u32))
        .map(|j| {
            let image = UnitSeries::basis(p, j, m).subst(u).unwrap();
            (j, chi.eval(&image).unwrap() as i64)
        })
        .collect();
    Character::new(p, pairs).unwrap()
}

#[test]
fn action_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let p = pr([2, 3, 5][rng.gen_range(0..3)]);
        let m = rng.gen_range(2..=14);
        let pairs: Vec<(usize, i64)> = (1..=m)
            .filter(|&j| !p.divides(j as u32))
            .map(|j| (j, rng.gen_range(0..p.square() as i64)))
            .collect();
        let chi = Character::new(p, pairs).unwrap();
        let tail: Vec<i64> = (0..chi.bound()).map(|_| rng.gen_range(0..p.get() as i64)).collect();
        let u = NottinghamElt::from_coeffs(p, &tail);
        assert_eq!(chi.act(&u).unwrap(), act_by_definition(&chi, &u), "{chi} {u}");
    }
}

#[test]
fn pruned_and_exhaustive_searches_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let base = SearchConfig::default();
    for _ in 0..60 {
        let (p, l, m) = [(2, 1, 5), (2, 3, 7), (2, 3, 6), (3, 1, 5), (3, 2, 7), (3, 1, 4)]
            [rng.gen_range(0..6)];
        let p = pr(p);
        let chars: Vec<Character> = characters_of_type(p, l, m).unwrap().collect();
        let chi = &chars[rng.gen_range(0..chars.len())];
        // half the time pick a guaranteed-equivalent target
        let psi = if rng.gen_bool(0.5) {
            chars[rng.gen_range(0..chars.len())].clone()
        } else {
            let tail: Vec<i64> = (0..m).map(|_| rng.gen_range(0..p.get() as i64)).collect();
            chi.act(&NottinghamElt::from_coeffs(p, &tail)).unwrap()
        };
        for parallel in [false, true] {
            let pruned = SearchConfig { parallel, ..base };
            let flat = SearchConfig { parallel, ..base }.exhaustive();
            assert_eq!(
                strict_equiv_search(chi, &psi, &pruned).unwrap(),
                strict_equiv_search(chi, &psi, &flat).unwrap(),
                "{chi} {psi}"
            );
            assert_eq!(
                weak_equiv_search(chi, &psi, &pruned).unwrap(),
                weak_equiv_search(chi, &psi, &flat).unwrap(),
                "{chi} {psi}"
            );
        }
    }
}

/// Classes over all characters agree with classes among reduced forms,
/// including types with `l >= p`.
#[test]
fn orbit_counts_match_partition() {
    let cfg = SearchConfig::default();
    for (p, l, m) in [
        (2, 1, 2),
        (2, 1, 5),
        (2, 3, 6),
        (2, 3, 7),
        (2, 3, 9),
        (2, 5, 10),
        (2, 5, 11),
        (3, 1, 4),
        (3, 2, 6),
        (3, 2, 7),
    ] {
        let p = pr(p);
        let orbits = count_orbits(p, l, m, Relation::Strict, &cfg).unwrap();
        let partition = count_classes(p, l, m, CountMethod::OraclePartition, &cfg).unwrap();
        assert_eq!(orbits, partition, "p={p} <{l},{m}>");
    }
}

#[test]
fn witnesses_compose_along_chains() {
    let cfg = SearchConfig::default();
    let p = pr(3);
    let chars: Vec<Character> = characters_of_type(p, 1, 5).unwrap().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut chains = 0;
    while chains < 20 {
        let a = &chars[rng.gen_range(0..chars.len())];
        let b = &chars[rng.gen_range(0..chars.len())];
        let c = &chars[rng.gen_range(0..chars.len())];
        let (Some(ab), Some(bc)) = (
            strict_equiv_search(a, b, &cfg).unwrap(),
            strict_equiv_search(b, c, &cfg).unwrap(),
        ) else {
            continue;
        };
        let ac = ab.then(&bc, p).unwrap();
        assert!(nottingham::verify_witness(a, c, &ac.u).is_valid());
        // symmetry
        assert!(strict_equiv_search(c, a, &cfg).unwrap().is_some());
        chains += 1;
    }
}
