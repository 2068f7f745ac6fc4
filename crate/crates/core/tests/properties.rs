use nottingham::characters::validate_type;
use nottingham::parse::{parse_element, parse_unit};
use nottingham::reduction::reduce;
use nottingham::{Character, NottinghamElt, Prime, TypeLM, UnitSeries};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(|p| Prime::new(p).unwrap())
}

fn unit_with(p: Prime, n: usize) -> impl Strategy<Value = UnitSeries> {
    prop::collection::vec(0..p.get() as i64, n).prop_map(move |t| UnitSeries::from_coeffs(p, &t))
}

fn units(count: usize) -> impl Strategy<Value = (Prime, Vec<UnitSeries>)> {
    (prime(), 1usize..=16).prop_flat_map(move |(p, n)| {
        prop::collection::vec(unit_with(p, n), count).prop_map(move |v| (p, v))
    })
}

fn typed_character() -> impl Strategy<Value = Character> {
    (prime(), 1usize..=6, 1usize..=15)
        .prop_filter("valid type", |(p, l, m)| validate_type(*p, *l, *m))
        .prop_flat_map(|(p, l, m)| {
            let q = p.get() as i64;
            // (residue mod p^2, nonzero digit) per index, shaped by the type rules
            prop::collection::vec((0..q * q, 1..q), m + 1).prop_map(move |d| {
                let pairs = (1..=m).filter(|&j| j as i64 % q != 0).map(|j| {
                    let (a, b) = d[j];
                    let v = if j < l {
                        a
                    } else if j == l {
                        a / q * q + b
                    } else if j < m {
                        a / q * q
                    } else {
                        b * q
                    };
                    (j, v)
                });
                Character::new(p, pairs).unwrap()
            })
        })
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_associative((_, v) in units(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
        prop_assert_eq!(a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
        prop_assert!(a.mul(&a.inverse()).unwrap().is_one());
    }

    #[test]
    fn pow_matches_repeated_multiplication((p, v) in units(1), e in 0i64..30) {
        let f = &v[0];
        let mut acc = UnitSeries::one(p, f.precision());
        for _ in 0..e {
            acc = acc.mul(f).unwrap();
        }
        prop_assert_eq!(f.pow(e), acc.clone());
        prop_assert_eq!(f.pow(-e), acc.inverse());
    }

    #[test]
    fn substitution_is_multiplicative((p, v) in units(3)) {
        let u = NottinghamElt::from_unit(v[2].clone());
        let lhs = v[0].mul(&v[1]).unwrap().subst(&u).unwrap();
        let rhs = v[0].subst(&u).unwrap().mul(&v[1].subst(&u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let _ = p;
    }

    #[test]
    fn decomposition_ignores_higher_coefficients((p, v) in units(2), cut in 0usize..16) {
        let (f, g) = (&v[0], &v[1]);
        let m = cut.min(f.precision());
        // g agrees with f through degree m
        let mut tail: Vec<i64> = f.tail().iter().map(|&c| c as i64).collect();
        for (k, c) in g.tail().iter().enumerate().skip(m) {
            tail[k] = *c as i64;
        }
        let h = UnitSeries::from_coeffs(p, &tail);
        prop_assert_eq!(f.decompose(m).unwrap(), h.decompose(m).unwrap());
    }

    #[test]
    fn literals_round_trip((p, v) in units(1)) {
        let f = &v[0];
        let n = f.precision();
        prop_assert_eq!(parse_unit(&f.to_string(), p, n).unwrap(), f.clone());
        let u = NottinghamElt::from_unit(f.clone());
        prop_assert_eq!(parse_element(&u.product_form(), p, n).unwrap(), u.clone());
        prop_assert_eq!(parse_element(&u.expanded_form(), p, n).unwrap(), u);
    }

    #[test]
    fn character_formats_round_trip(chi in typed_character()) {
        let p = chi.prime();
        prop_assert_eq!(Character::parse_literal(&chi.literal(), p).unwrap(), chi.clone());
        prop_assert_eq!(chi.to_string().parse::<Character>().unwrap(), chi.clone());
        let json = serde_json::to_string(&chi).unwrap();
        prop_assert_eq!(serde_json::from_str::<Character>(&json).unwrap(), chi);
    }

    #[test]
    fn reduction_preserves_type_and_lands_in_window(chi in typed_character()) {
        let ty: TypeLM = chi.break_sequence().unwrap();
        let (form, w) = reduce(&chi).unwrap();
        prop_assert_eq!(form.ty(), ty);
        prop_assert_eq!(w.kernel_value % chi.prime().get(), 0);
        let target = form.to_character();
        for (j, _) in target.support() {
            prop_assert!(j == ty.l || j + ty.l >= ty.m, "{} outside window", j);
        }
    }
}

