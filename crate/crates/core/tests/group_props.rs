use proptest::prelude::*;

use kodaira_core::exactalg::{rat, Rat};
use kodaira_core::group::{affine_to_word, collect, verify_relations, word_to_affine, GroupWord, KodairaParams, NormalWord};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn params() -> impl Strategy<Value = KodairaParams> {
    (1i64..=6, small_rat(), small_rat(), small_rat(), small_rat(), small_rat(), small_rat()).prop_filter_map(
        "delta1 is nonzero",
        |(m, d1, e1, d3, e3, d4, e4)| KodairaParams::new(m, d1, e1, d3, e3, d4, e4).ok(),
    )
}

fn word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((1u8..=4, -3i64..=3), 0..10).prop_map(GroupWord)
}

fn normal_word() -> impl Strategy<Value = NormalWord> {
    (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5).prop_map(|(b, a, l, t)| NormalWord::new(b, a, l, t))
}

proptest! {
    #[test]
    fn collection_matches_composition(p in params(), w in word()) {
        prop_assert_eq!(word_to_affine(&collect(&w, p.m), &p), w.to_affine(&p));
    }

    #[test]
    fn collection_is_a_homomorphism(m in 1i64..=6, u in word(), v in word()) {
        prop_assert_eq!(collect(&u.concat(&v), m), collect(&u, m).mul(&collect(&v, m), m));
        prop_assert!(collect(&u.concat(&u.inverse()), m).is_identity());
    }

    #[test]
    fn normal_words_form_a_group(m in 1i64..=6, x in normal_word(), y in normal_word(), z in normal_word()) {
        prop_assert_eq!(x.mul(&y, m).mul(&z, m), x.mul(&y.mul(&z, m), m));
        prop_assert!(x.mul(&x.inv(m), m).is_identity());
        prop_assert!(x.commutator(&y, m).is_central());
    }

    #[test]
    fn powers_agree_with_repeated_products(m in 1i64..=6, x in normal_word(), n in -6i64..=6) {
        let mut acc = NormalWord::IDENTITY;
        let step = if n < 0 { x.inv(m) } else { x };
        for _ in 0..n.abs() {
            acc = acc.mul(&step, m);
        }
        prop_assert_eq!(x.pow(n, m), acc);
    }

    #[test]
    fn affine_round_trip(p in params(), x in normal_word()) {
        prop_assert_eq!(affine_to_word(&word_to_affine(&x, &p), &p).unwrap(), x);
    }

    #[test]
    fn relations_hold(p in params()) {
        prop_assert!(verify_relations(&p));
    }
}

#[test]
fn non_members_are_rejected() {
    let p = KodairaParams::new(2, rat(1, 1), rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 2), rat(0, 1)).unwrap();
    let mut f = word_to_affine(&NormalWord::new(1, 2, 3, 4), &p);
    f.translation[3] += rat(1, 3);
    assert!(affine_to_word(&f, &p).is_err());
}
