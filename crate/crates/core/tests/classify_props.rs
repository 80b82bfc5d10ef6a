use proptest::prelude::*;

use kodaira_core::classify::{
    classify, extension_of, reduce, replay, splitting_witness, CaseLabel, Move,
};
use kodaira_core::exactalg::int;
use kodaira_core::group::{KodairaParams, NormalWord};
use kodaira_core::reallocus::orbit_count;
use kodaira_core::realstruct::{Lifting, LinearCase, RealStructure};

fn label_and_m() -> impl Strategy<Value = (CaseLabel, i64)> {
    (0usize..18, 1i64..=6).prop_filter_map("case occurs for m", |(i, m)| {
        let l = CaseLabel::ALL[i];
        l.occurs(m).then_some((l, m))
    })
}

fn moves() -> impl Strategy<Value = Vec<Move>> {
    let mv = prop_oneof![
        (-3i64..=3).prop_map(|t| Move::ChangeG1 { t }),
        // an odd shift of g3 by g1 swaps the ' and '' cases of 1A2
        (-1i64..=1, -3i64..=3).prop_map(|(l, t)| Move::ChangeG3 { l: 2 * l, t }),
        (-3i64..=3, -3i64..=3).prop_map(|(r, s)| Move::ChangeG4 { r, s }),
        (-2i64..=2, -2i64..=2).prop_map(|(l, t)| Move::LiftingChange { z: NormalWord::new(0, 0, l, t) }),
    ];
    prop::collection::vec(mv, 0..5)
}

/// Also non-central changes of lifting, which may move between catalog cases.
fn any_moves() -> impl Strategy<Value = Vec<Move>> {
    let mv = prop_oneof![
        moves().prop_map(|v| v.into_iter().next().unwrap_or(Move::ChangeG1 { t: 0 })),
        (-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2)
            .prop_map(|(b, a, l, t)| Move::LiftingChange { z: NormalWord::new(b, a, l, t) }),
    ];
    prop::collection::vec(mv, 0..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn label_is_invariant_under_moves((label, m) in label_and_m(), ms in moves()) {
        let mut e = extension_of(&label.representative(m));
        for mv in &ms {
            e = e.apply(mv);
        }
        prop_assert!(e.consistency_error().is_none());
        let r = reduce(&e).unwrap();
        prop_assert_eq!(r.label, label);
        prop_assert_eq!(&replay(&e, &r.log).conj, &r.reduced.conj);
        prop_assert_eq!(r.reduced.square, replay(&e, &r.log).square);
    }

    #[test]
    fn splitting_witnesses_are_involutions((label, m) in label_and_m(), ms in any_moves()) {
        let mut e = extension_of(&label.representative(m));
        for mv in &ms {
            e = e.apply(mv);
        }
        if let Some(g) = splitting_witness(&e).unwrap() {
            prop_assert!(e.square_of(&g).is_identity());
        }
    }
}

#[test]
fn component_count_survives_lifting_changes() {
    for m in 1..=4 {
        for l in CaseLabel::for_m(m) {
            let e = extension_of(&l.representative(m));
            let n = orbit_count(&e, 1, 3);
            for z in [NormalWord::g(1), NormalWord::g(3), NormalWord::g(4), NormalWord::new(1, 1, 0, 0)] {
                let moved = e.apply(&Move::LiftingChange { z });
                assert_eq!(orbit_count(&moved, 1, 6), n, "m={m} {l} z={z}");
                assert_eq!(orbit_count(&reduce(&moved).unwrap().reduced, 1, 3), n);
            }
        }
    }
}

#[test]
fn odd_g3_shift_swaps_a2_pairs() {
    use CaseLabel::*;
    for m in [2, 4] {
        for (a, b) in [(A2aip, A2aipp), (A2aiip, A2aiipp)] {
            let e = extension_of(&a.representative(m)).apply(&Move::ChangeG3 { l: 1, t: 0 });
            assert_eq!(reduce(&e).unwrap().label, b);
        }
    }
}

#[test]
fn lifting_by_g4_relates_catalog_cases() {
    use CaseLabel::*;
    let moved = |l: CaseLabel, m: i64| {
        let e = extension_of(&l.representative(m)).apply(&Move::LiftingChange { z: NormalWord::g(4) });
        reduce(&e).unwrap().label
    };
    for m in [1, 3, 5] {
        assert_eq!(moved(A1aip, m), A1bip);
        assert_eq!(moved(A1aiip, m), A1biipp);
        assert_eq!(moved(A1aiipp, m), A1biip);
    }
    for m in [2, 4, 6] {
        assert_eq!(moved(A1aip, m), A1aip);
        assert_eq!(moved(A1aiip, m), A1aiipp);
        assert_eq!(moved(A1biip, m), A1biipp);
    }
}

#[test]
fn reduction_is_idempotent_on_representatives() {
    for m in 1..=6 {
        for l in CaseLabel::for_m(m) {
            let r = classify(&l.representative(m)).unwrap();
            assert_eq!(r.label, l);
            assert!(r.log.is_empty(), "{l} at m={m}: {:?}", r.log);
        }
    }
}

#[test]
fn case_b_needs_f1_equal_minus_f2() {
    let p = KodairaParams::new(2, int(1), int(0), int(1), int(0), int(1), int(0)).unwrap();
    let l = Lifting::new(LinearCase::B, int(1), int(0), int(0), int(0));
    assert!(RealStructure::new(p, l).is_err());
}
