use num_complex::Complex64;
use permagic::cyclo::parse_with;
use permagic::{Cyclotomic, Sign};
use proptest::prelude::*;

const CONDUCTORS: [u32; 7] = [1, 3, 4, 5, 7, 8, 12];

/// Σ c_k ζ_n^{e_k} with small rational coefficients.
fn cyclotomic() -> impl Strategy<Value = Cyclotomic> {
    prop::collection::vec((prop::sample::select(&CONDUCTORS[..]), 0i64..12, -6i64..=6, 1i64..=4), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(n, e, num, den)| Cyclotomic::root_of_unity(n, e) * Cyclotomic::from_frac(num, den))
            .sum()
    })
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-9 * (1.0 + a.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in cyclotomic(), b in cyclotomic(), c in cyclotomic()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses(a in cyclotomic()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * a.inv().unwrap()).is_one());
    }

    #[test]
    fn conjugation(a in cyclotomic(), b in cyclotomic()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
        prop_assert!(a.norm_sqr().is_real());
        prop_assert!(close(a.conj().to_c64(), a.to_c64().conj()));
    }

    #[test]
    fn roots_of_unity_have_their_order(n in 1u32..40, k in -50i64..50) {
        let z = Cyclotomic::root_of_unity(n, k);
        prop_assert!(z.pow(n as i64).is_one());
        prop_assert!(close(z.to_c64(), Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)));
    }

    #[test]
    fn float_value_is_homomorphic(a in cyclotomic(), b in cyclotomic()) {
        prop_assert!(close((&a * &b).to_c64(), a.to_c64() * b.to_c64()));
        prop_assert!(close((&a + &b).to_c64(), a.to_c64() + b.to_c64()));
    }

    #[test]
    fn balls_enclose_the_float_value(a in cyclotomic()) {
        // the f64 value carries its own rounding error, hence the slack
        let ball = a.to_complex(96);
        let z = a.to_c64();
        prop_assert!((ball.re.mid_f64() - z.re).abs() <= ball.re.radius_f64() + 1e-12);
        prop_assert!((ball.im.mid_f64() - z.im).abs() <= ball.im.radius_f64() + 1e-12);
        prop_assert!(ball.re.radius_f64() < 1e-20);
    }

    #[test]
    fn norms_are_positive(a in cyclotomic()) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(a.norm_sqr().real_sign().unwrap(), Sign::Positive);
    }

    #[test]
    fn display_round_trips(a in cyclotomic()) {
        let shown = a.to_string();
        prop_assert_eq!(parse_with(&shown, &Default::default()).unwrap(), a, "{}", shown);
    }
}
