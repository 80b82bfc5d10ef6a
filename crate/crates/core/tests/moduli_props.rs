use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use kodaira_core::exactalg::{int, rat};
use kodaira_core::moduli::{
    borcea_act, eta, pullback, random_point, random_sample, real, reality_conditions, sample_lifting, to_halfplanes,
    ActionMatrix,
};
use kodaira_core::realstruct::LinearCase;

proptest! {
    #[test]
    fn action_composes(seed in any::<u64>(), m in 1i64..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = random_point(&mut rng);
        let a1 = ActionMatrix::random(&mut rng, 3);
        let a2 = ActionMatrix::random(&mut rng, 3);
        prop_assert_eq!(borcea_act(&a1, m, &borcea_act(&a2, m, &p)), borcea_act(&a1.compose(&a2), m, &p));
        prop_assert!(borcea_act(&a1, m, &p).validate().is_ok());
    }

    #[test]
    fn half_plane_signs_agree(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (x, y) = to_halfplanes(&random_point(&mut rng)).unwrap();
        prop_assert_eq!(x.im > int(0), y.im > int(0));
    }

    #[test]
    fn reality_is_scale_invariant(seed in any::<u64>(), n in 1i64..=7, d in 1i64..=5, b in any::<bool>(), f2_zero in any::<bool>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let case = if b { LinearCase::A } else { LinearCase::B };
        let l = sample_lifting(case, f2_zero);
        let (x, y) = random_sample(&mut rng, case, f2_zero);
        if let Ok(p) = kodaira_core::moduli::PeriodPoint::from_halfplanes(&x, &y) {
            let q = p.scale(&real(rat(-n, d)));
            prop_assert_eq!(reality_conditions(&l, &p), reality_conditions(&l, &q));
        }
    }

    #[test]
    fn pullback_is_linear(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (p, q) = (random_point(&mut rng), random_point(&mut rng));
        let l = sample_lifting(LinearCase::A, false);
        let (ep, eq) = (eta(&p), eta(&q));
        let sum = ep.re.clone() + eq.re.clone();
        prop_assert_eq!(pullback(&l, &sum), pullback(&l, &ep.re) + pullback(&l, &eq.re));
    }
}

#[test]
fn identity_action_fixes_points() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..20 {
        let p = random_point(&mut rng);
        assert_eq!(borcea_act(&ActionMatrix::identity(), 3, &p), p);
    }
    assert!(ActionMatrix::new(2, 0, 0, 1, 0).is_err());
}
