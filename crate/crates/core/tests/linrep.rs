//! Exact representations: endomorphisms, isomorphism classes and the
//! one-parameter families on the extended Dynkin posets.

use posetrep::linalg::QMatrix;
use posetrep::linrep::{
    are_isomorphic, direct_sum, end_dim, family_1111, family_222, family_332, family_521,
    from_quiver_rep, hom_space, is_brick, is_indecomposable, nonbrick_alpha, to_quiver_rep,
    SubspaceRep,
};
use posetrep::roots::is_finite_type;
use posetrep::{Error, PrimitivePoset, Rational, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Family = fn(&Rational) -> Result<SubspaceRep>;

const FAMILIES: [Family; 4] = [family_1111, family_222, family_332, family_521];
const LAMBDAS: [i64; 4] = [2, 3, 5, 7];

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..n)
            .map(|_| (0..n).map(|_| q(rng.gen_range(-3..=3))).collect())
            .collect();
        let m = QMatrix::from_rows(rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

#[test]
fn nonbrick_example() {
    let r = nonbrick_alpha(&q(1)).unwrap();
    assert_eq!(r.dim_vector().to_string(), "2;2;2;2;4");
    assert_eq!(end_dim(&r), 2);
    assert!(is_indecomposable(&r, 0));
    assert!(!is_brick(&r));
}

#[test]
fn families_live_on_infinite_type_posets() {
    for f in FAMILIES {
        let r = f(&q(2)).unwrap();
        assert!(!is_finite_type(r.poset()), "{}", r.poset());
        assert!(matches!(f(&q(1)), Err(Error::ForbiddenParameter(_))));
        assert!(matches!(f(&q(0)), Err(Error::ForbiddenParameter(_))));
    }
}

#[test]
fn families_are_indecomposable() {
    for f in FAMILIES {
        for l in LAMBDAS {
            let r = f(&q(l)).unwrap();
            assert!(is_indecomposable(&r, 3), "{} lambda={l}", r.poset());
            if is_brick(&r) {
                assert!(is_indecomposable(&r, 4));
            }
        }
    }
    assert_eq!(end_dim(&family_1111(&q(2)).unwrap()), 1);
}

#[test]
fn family_members_are_pairwise_non_isomorphic() {
    let mut checks = 0;
    for f in FAMILIES {
        for (i, &a) in LAMBDAS.iter().enumerate() {
            for &b in &LAMBDAS[i + 1..] {
                let (ra, rb) = (f(&q(a)).unwrap(), f(&q(b)).unwrap());
                assert!(
                    !are_isomorphic(&ra, &rb, 0).unwrap(),
                    "{} {a} {b}",
                    ra.poset()
                );
                checks += 1;
            }
        }
    }
    assert_eq!(checks, 24);
}

#[test]
fn base_change_preserves_class_and_hom_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for f in FAMILIES {
        let r = f(&q(3)).unwrap();
        let s = f(&q(5)).unwrap();
        let g = random_invertible(r.ambient(), &mut rng);
        let rg = r.transform(&g).unwrap();
        let sg = s.transform(&g).unwrap();
        assert!(are_isomorphic(&r, &rg, 1).unwrap());
        assert_eq!(
            hom_space(&r, &s).unwrap().len(),
            hom_space(&rg, &sg).unwrap().len()
        );
        assert_eq!(end_dim(&r), end_dim(&rg));
    }
}

#[test]
fn direct_sums_decompose() {
    let r = family_1111(&q(2)).unwrap();
    let rr = direct_sum(&r, &r).unwrap();
    assert!(!is_indecomposable(&rr, 0));
    assert_eq!(end_dim(&rr), 4);
    let s = family_1111(&q(3)).unwrap();
    let rs = direct_sum(&r, &s).unwrap();
    assert!(!is_indecomposable(&rs, 0));
    assert_eq!(end_dim(&rs), 2);
    assert!(!are_isomorphic(&rr, &rs, 0).unwrap());
    let other = family_222(&q(2)).unwrap();
    assert_eq!(direct_sum(&r, &other), Err(Error::PosetMismatch));
}

#[test]
fn quiver_round_trip_for_all_fixtures() {
    let mut reps = vec![nonbrick_alpha(&q(2)).unwrap()];
    for f in FAMILIES {
        reps.push(f(&q(7)).unwrap());
    }
    for r in reps {
        let qr = to_quiver_rep(&r);
        assert!(qr.is_monomorphic().iter().all(|&m| m));
        let back = from_quiver_rep(&qr).unwrap();
        assert!(are_isomorphic(&r, &back, 2).unwrap(), "{}", r.poset());
    }
}

#[test]
fn json_round_trip() {
    let r = family_521(&Rational::new(3.into(), 2.into())).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: SubspaceRep = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
}

#[test]
fn invalid_inputs() {
    let p = PrimitivePoset::new(vec![1, 1]).unwrap();
    let wrong_rows = SubspaceRep::new(
        p.clone(),
        2,
        vec![
            vec![QMatrix::from_int_cols(3, &[&[1, 0, 0]])],
            vec![QMatrix::from_int_cols(2, &[&[0, 1]])],
        ],
    );
    assert!(matches!(wrong_rows, Err(Error::ShapeMismatch(_))));
}
