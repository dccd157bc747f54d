//! Exact identities among the reflection transforms.

use posetrep::coxeter::{
    alpha_to_beta, beta_to_alpha, defect, fminus_dim, fminus_dim_closed, fplus_dim,
    fplus_dim_closed, phiminus_concrete, phiminus_weight, phiplus_concrete, phiplus_weight,
    rho_dim, sigma_dim,
};
use posetrep::notation::{parse_dim, parse_weight};
use posetrep::poset::classify_degeneracy;
use posetrep::roots::enumerate_indec_dims;
use posetrep::{DimVector, PrimitivePoset, Rational, SymbolicWeight, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn poset(b: &[usize]) -> PrimitivePoset {
    PrimitivePoset::new(b.to_vec()).unwrap()
}

fn finite_posets() -> Vec<PrimitivePoset> {
    [
        vec![1, 1, 1],
        vec![2, 1, 1],
        vec![2, 2, 1],
        vec![3, 2, 1],
        vec![4, 2, 1],
        vec![3, 1, 1],
        vec![2, 3],
    ]
    .iter()
    .map(|b| poset(b))
    .collect()
}

fn non_degenerate(p: &PrimitivePoset, d: &DimVector) -> bool {
    classify_degeneracy(p, d).unwrap().is_non_degenerate()
}

#[test]
fn fplus_and_fminus_are_mutually_inverse() {
    let mut checked = 0;
    for p in finite_posets() {
        for d in enumerate_indec_dims(&p).unwrap() {
            if !non_degenerate(&p, &d) {
                continue;
            }
            let down = fminus_dim(&p, &d).unwrap();
            assert_eq!(fplus_dim(&p, &down).unwrap(), d, "{p} {d}");
            let up = fplus_dim(&p, &d).unwrap();
            assert_eq!(fminus_dim(&p, &up).unwrap(), d, "{p} {d}");
            assert_eq!(down, fminus_dim_closed(&p, &d).unwrap());
            assert_eq!(up, fplus_dim_closed(&p, &d).unwrap());
            checked += 1;
        }
    }
    assert!(checked >= 10);
}

#[test]
fn sigma_and_rho_are_involutions() {
    for p in finite_posets() {
        for d in enumerate_indec_dims(&p).unwrap() {
            if let Ok(s) = sigma_dim(&p, &d) {
                assert_eq!(sigma_dim(&p, &s).unwrap(), d);
            }
            if let Ok(r) = rho_dim(&p, &d) {
                assert_eq!(rho_dim(&p, &r).unwrap(), d);
            }
        }
    }
}

#[test]
fn reference_example_of_fminus() {
    let p = poset(&[2, 2, 1]);
    let d = parse_dim("1,2;1,2;2;3").unwrap();
    assert_eq!(fminus_dim(&p, &d).unwrap().to_string(), "1,2;1,2;1;2");
}

#[test]
fn phi_transforms_are_inverse_symbolically() {
    for b in [
        vec![1, 1, 1],
        vec![3, 2, 1],
        vec![4, 2, 1],
        vec![2, 2, 2, 1],
    ] {
        let p = poset(&b);
        let id = SymbolicWeight::identity(&p);
        let down = phiminus_weight(&p, &id).unwrap();
        assert_eq!(phiplus_weight(&p, &down).unwrap(), id, "{b:?}");
        let up = phiplus_weight(&p, &id).unwrap();
        assert_eq!(phiminus_weight(&p, &up).unwrap(), id, "{b:?}");
    }
}

#[test]
fn concrete_phi_round_trip() {
    let p = poset(&[1, 1, 1]);
    let w = parse_weight("1;1;1;2").unwrap();
    let up = phiplus_concrete(&p, &w).unwrap();
    assert_eq!(phiminus_concrete(&p, &up).unwrap(), w);
}

#[test]
fn trace_defect_is_invariant_on_enumerated_dims() {
    for p in finite_posets() {
        let id = SymbolicWeight::identity(&p);
        let w = phiminus_weight(&p, &id).unwrap();
        for d in enumerate_indec_dims(&p).unwrap() {
            if non_degenerate(&p, &d) {
                let down = fminus_dim(&p, &d).unwrap();
                assert_eq!(defect(&down, &w), defect(&d, &id), "{p} {d}");
            }
        }
    }
}

/// Random chain-monotone, non-degenerate dims on random posets (finite type or
/// not) whose image under F- is valid.
#[test]
fn trace_defect_is_invariant_on_random_dims() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 1000 {
        let width = rng.gen_range(1..=5);
        let branches: Vec<usize> = (0..width).map(|_| rng.gen_range(1..=4)).collect();
        let p = PrimitivePoset::new(branches.clone()).unwrap();
        let d0 = rng.gen_range(2..=12);
        let mut dims = Vec::new();
        for &k in &branches {
            if k >= d0 {
                break;
            }
            let mut chain: Vec<usize> = rand::seq::index::sample(&mut rng, d0 - 1, k)
                .into_iter()
                .map(|x| x + 1)
                .collect();
            chain.sort_unstable();
            dims.push(chain);
        }
        if dims.len() != width {
            continue;
        }
        let d = DimVector::new(d0, dims);
        assert!(non_degenerate(&p, &d));
        let Ok(down) = fminus_dim(&p, &d) else {
            continue;
        };
        let id = SymbolicWeight::identity(&p);
        let w = phiminus_weight(&p, &id).unwrap();
        assert_eq!(defect(&down, &w), defect(&d, &id), "{p} {d}");
        checked += 1;
    }
}

#[test]
fn alpha_beta_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let branches: Vec<usize> = (0..rng.gen_range(1..=4))
            .map(|_| rng.gen_range(1..=5))
            .collect();
        let p = PrimitivePoset::new(branches.clone()).unwrap();
        let q = |n: i64, m: i64| Rational::new(n.into(), m.into());
        let alphas = branches
            .iter()
            .map(|&k| {
                (0..k)
                    .map(|_| q(rng.gen_range(1..50), rng.gen_range(1..9)))
                    .collect()
            })
            .collect();
        let w = Weight::new(alphas, q(rng.gen_range(1..50), 1)).unwrap();
        let beta = alpha_to_beta(&p, &w).unwrap();
        assert_eq!(beta_to_alpha(&p, &beta).unwrap(), w);
    }
}
