//! Algebraic properties of linear forms and conditions.

use posetrep::{Condition, LinearForm, Rational, Var, Weight};
use proptest::prelude::*;

const SHAPE: [usize; 3] = [2, 1, 3];

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn var_strategy() -> impl Strategy<Value = Var> {
    prop_oneof![
        Just(Var::Gamma),
        (0..SHAPE.len())
            .prop_flat_map(|j| (Just(j), 0..SHAPE[j]))
            .prop_map(|(j, i)| Var::alpha(j, i)),
    ]
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn form() -> impl Strategy<Value = LinearForm> {
    prop::collection::vec((var_strategy(), rational()), 0..6).prop_map(LinearForm::from_terms)
}

fn weight() -> impl Strategy<Value = Weight> {
    let pos = || (1i64..=30, 1i64..=5).prop_map(|(n, d)| q(n, d));
    (
        prop::collection::vec(pos(), SHAPE[0]),
        prop::collection::vec(pos(), SHAPE[1]),
        prop::collection::vec(pos(), SHAPE[2]),
        pos(),
    )
        .prop_map(|(a, b, c, g)| Weight::new(vec![a, b, c], g).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn evaluation_is_linear(f in form(), g in form(), c in rational(), w in weight()) {
        prop_assert_eq!((&f + &g).eval(&w), f.eval(&w) + g.eval(&w));
        prop_assert_eq!(f.scale(&c).eval(&w), &c * f.eval(&w));
        prop_assert_eq!((&f - &f).eval(&w), Rational::from_integer(0.into()));
    }

    #[test]
    fn canonical_form_keeps_truth_values(f in form(), w in weight(), k in 1i64..=9) {
        for c in [Condition::lt_zero(f.clone()), Condition::eq_zero(f.clone())] {
            let canon = c.canonical();
            prop_assert_eq!(canon.holds(&w), c.holds(&w));
            prop_assert!(canon.form.integer_coeffs());
            prop_assert_eq!(canon.canonical(), canon.clone());
            // positive rescaling does not change the canonical representative
            let scaled = Condition { form: f.scale(&q(k, 1)), rel: c.rel };
            prop_assert_eq!(scaled.canonical(), canon);
        }
    }

    #[test]
    fn json_round_trip(f in form()) {
        let text = serde_json::to_string(&f).unwrap();
        let back: LinearForm = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}
