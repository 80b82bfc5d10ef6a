use num_bigint::BigInt;
use proptest::prelude::*;

use kodaira_core::exactalg::dioph::in_lattice;
use kodaira_core::exactalg::{fixed_locus, int, rat, DiophSolution, DiophSystem, Poly, Rat, RatAffine, Var};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn affine() -> impl Strategy<Value = RatAffine> {
    (prop::collection::vec(small_rat(), 16), prop::collection::vec(small_rat(), 4)).prop_map(|(l, t)| {
        RatAffine::new(
            std::array::from_fn(|i| std::array::from_fn(|j| l[4 * i + j].clone())),
            std::array::from_fn(|i| t[i].clone()),
        )
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0usize..3, 0u32..3, -4i64..=4), 0..5).prop_map(|terms| {
        let vars = [Var::X1, Var::Y1, Var::Delta1];
        terms
            .into_iter()
            .fold(Poly::int(0), |acc, (v, e, c)| &acc + &(&Poly::var(vars[v]).pow(e) * &Poly::int(c)))
    })
}

proptest! {
    #[test]
    fn inverse_composes_to_identity(f in affine()) {
        if let Ok(g) = f.inverse() {
            prop_assert!(f.compose(&g).is_identity());
            prop_assert!(g.compose(&f).is_identity());
        }
    }

    #[test]
    fn fixed_points_are_fixed(f in affine()) {
        if let Some(s) = fixed_locus(&f) {
            for p in s.sample_points() {
                let x: [Rat; 4] = std::array::from_fn(|i| p[i].clone());
                prop_assert_eq!(f.apply(&x), x);
            }
        }
    }

    #[test]
    fn polynomial_ring_laws(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        let at = |v: Var| Some(match v { Var::X1 => rat(1, 2), Var::Y1 => int(-3), _ => rat(2, 3) });
        prop_assert_eq!((&p * &q).eval(&at).unwrap(), p.eval(&at).unwrap() * q.eval(&at).unwrap());
    }

    #[test]
    fn diophantine_solutions_match_search(
        rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..3),
        rhs in prop::collection::vec(-5i64..=5, 2),
    ) {
        let rhs = &rhs[..rows.len()];
        let sys = DiophSystem::from_i64(&rows, rhs, &["x", "y", "z"]).unwrap();
        let found = sys.brute_force(4);
        match sys.solve() {
            DiophSolution::NoSolution => prop_assert!(found.is_empty()),
            DiophSolution::Solvable { particular, kernel } => {
                prop_assert!(sys.satisfied_by(&particular));
                for k in &kernel {
                    let shifted: Vec<BigInt> = particular.iter().zip(k).map(|(a, b)| a + b).collect();
                    prop_assert!(sys.satisfied_by(&shifted));
                }
                for x in &found {
                    let d: Vec<BigInt> = x.iter().zip(&particular).map(|(a, b)| a - b).collect();
                    prop_assert!(in_lattice(&d, &kernel));
                }
            }
        }
    }
}
