use coverhom::covering::{lift_class, Cover, PermutationRep};
use coverhom::curves::{class_matches_type, sample_curves, TopType};
use coverhom::nilcert::{nil_inv, nil_mul, nil_pow, phi, NilElement, NilParams};
use coverhom::surface::{base_class, base_omega, Gen, Letter, SurfaceType, Word};
use coverhom::twist::{check_twist_matrix, lifted_twist_data, twist_matrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn letter(genus: usize) -> impl Strategy<Value = Letter> {
    (1..=genus, any::<bool>(), any::<bool>()).prop_map(|(i, is_a, inv)| {
        let g = if is_a { Gen::A(i) } else { Gen::B(i) };
        if inv {
            Letter::neg(g)
        } else {
            Letter::pos(g)
        }
    })
}

fn word(genus: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(genus), 0..max).prop_map(Word::new)
}

fn a_word(n: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=n, any::<bool>()), 0..max).prop_map(|v| {
        Word::new(
            v.into_iter()
                .map(|(i, inv)| {
                    if inv {
                        Letter::neg(Gen::A(i))
                    } else {
                        Letter::pos(Gen::A(i))
                    }
                })
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn reduce_is_idempotent(w in word(3, 40)) {
        let r = w.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r);
        prop_assert!(w.concat(&w.inverse()).reduce().is_empty());
    }

    #[test]
    fn word_round_trips_through_text(w in word(3, 30)) {
        let text = w.to_string();
        let back: Word = text.parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn base_class_is_a_homomorphism(u in word(3, 30), v in word(3, 30)) {
        let st = SurfaceType::closed(3);
        prop_assert_eq!(base_class(&st, &u.concat(&v)), base_class(&st, &u).add(&base_class(&st, &v)));
        prop_assert!(base_class(&st, &u.concat(&u.inverse())).is_zero());
    }

    #[test]
    fn base_omega_is_skew(u in word(2, 20), v in word(2, 20)) {
        let st = SurfaceType::closed(2);
        let (x, y) = (base_class(&st, &u), base_class(&st, &v));
        prop_assert_eq!(base_omega(&x, &y), -base_omega(&y, &x));
        prop_assert_eq!(base_omega(&x, &x), 0);
    }

    #[test]
    fn nil_group_axioms(u in a_word(3, 12), v in a_word(3, 12), w in a_word(3, 12), ell in 3u64..8) {
        let p = NilParams::new(3, ell).unwrap();
        let (x, y, z) = (phi(&p, &u).unwrap(), phi(&p, &v).unwrap(), phi(&p, &w).unwrap());
        prop_assert_eq!(phi(&p, &u.concat(&v)).unwrap(), nil_mul(&p, &x, &y));
        prop_assert_eq!(nil_mul(&p, &nil_mul(&p, &x, &y), &z), nil_mul(&p, &x, &nil_mul(&p, &y, &z)));
        prop_assert!(nil_mul(&p, &x, &nil_inv(&p, &x)).is_identity());
        prop_assert_eq!(phi(&p, &u.inverse()).unwrap(), nil_inv(&p, &x));
    }

    #[test]
    fn ell_th_powers_are_central_and_multiplicative(u in a_word(4, 10), v in a_word(4, 10), ell in 3u64..9) {
        let p = NilParams::new(4, ell).unwrap();
        let (x, y) = (phi(&p, &u).unwrap(), phi(&p, &v).unwrap());
        let xl = nil_pow(&p, &x, ell);
        prop_assert_eq!(nil_mul(&p, &xl, &y), nil_mul(&p, &y, &xl));
        prop_assert_eq!(nil_pow(&p, &nil_mul(&p, &x, &y), ell), nil_mul(&p, &xl, &nil_pow(&p, &y, ell)));
    }

    #[test]
    fn commutators_are_central(u in a_word(3, 10), v in a_word(3, 10), w in a_word(3, 10)) {
        let p = NilParams::new(3, 5).unwrap();
        let c = phi(&p, &Word::commutator(&u, &v)).unwrap();
        prop_assert!(c.a.iter().all(|&x| x == 0));
        let z = phi(&p, &w).unwrap();
        prop_assert_eq!(nil_mul(&p, &c, &z), nil_mul(&p, &z, &c));
        prop_assert_eq!(c.clone(), NilElement { a: vec![0; 3], c: c.c.clone() });
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_covers_satisfy_riemann_hurwitz(genus in 1usize..=3, degree in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = PermutationRep::random_branched(genus, degree, &mut rng).unwrap();
        let cover = Cover::new(rep).unwrap();
        let cx = &cover.complex;
        prop_assert_eq!(cx.euler_characteristic(), cx.riemann_hurwitz_prediction());
        prop_assert_eq!(cover.lattice.rank() as i64, 2 - cx.euler_characteristic());
        let gram = cover.lattice.gram();
        prop_assert!(gram.is_skew());
        prop_assert_eq!(num_traits::Signed::abs(&gram.det()), num_bigint::BigInt::from(1));
    }

    #[test]
    fn lifts_add_on_closed_loops(u in word(2, 12), v in word(2, 12), seed in any::<u64>()) {
        prop_assume!(!u.is_empty() && !v.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = Cover::new(PermutationRep::random_branched(2, 4, &mut rng).unwrap()).unwrap();
        let (cx, lat) = (&cover.complex, &cover.lattice);
        let (m, cu) = lift_class(cx, lat, &u, 0).unwrap();
        let (k, cv) = lift_class(cx, lat, &v, 0).unwrap();
        let uv = u.pow(m).concat(&v.pow(k));
        let (one, cuv) = lift_class(cx, lat, &uv, 0).unwrap();
        prop_assert_eq!(one, 1);
        prop_assert_eq!(cuv, cu.add(&cv));
        let (_, back) = lift_class(cx, lat, &u.pow(m).concat(&u.pow(m).inverse()), 0).unwrap();
        prop_assert!(back.is_zero());
    }

    #[test]
    fn lifted_twists_are_symplectic_transvection_products(seed in any::<u64>(), ttype in prop_oneof![Just(TopType::Nonseparating), Just(TopType::Separating(1))]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = Cover::new(PermutationRep::random_branched(2, 5, &mut rng).unwrap()).unwrap();
        let st = SurfaceType::closed(2);
        for c in sample_curves(&st, &ttype, 6, seed).unwrap() {
            prop_assert!(class_matches_type(&st, &c));
            let d = lifted_twist_data(&cover, &c).unwrap();
            d.verify(&cover.lattice, 5).unwrap();
            let m = twist_matrix(&cover.lattice, &d);
            prop_assert!(check_twist_matrix(&cover.lattice, &d, &m).all());
        }
    }
}
