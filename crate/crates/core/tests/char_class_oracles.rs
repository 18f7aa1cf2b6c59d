use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spencer_core::char_class::{
    ch_sym, chern_character, chern_from_curvature, euler_srr, q, qi, srr_decomposition, todd_cy,
    todd_from_roots, ChernRoots, CohomologyClass, CYManifoldData, GradedRing, LambdaTag, Rational,
};

/// Coefficients of `x/(1 − e^{−x})` from Bernoulli numbers (`B_1 = +1/2`).
fn todd_coefficients_bernoulli(order: usize) -> Vec<Rational> {
    let binom = |n: usize, k: usize| -> i64 {
        let mut r = 1i64;
        for i in 0..k {
            r = r * (n - i) as i64 / (i + 1) as i64;
        }
        r
    };
    let mut b: Vec<Rational> = vec![qi(1)];
    for m in 1..=order {
        let s: Rational = (0..m).map(|j| qi(binom(m + 1, j)) * &b[j]).sum();
        b.push(-s / qi((m + 1) as i64));
    }
    b[1] = -b[1].clone();
    let mut fact = qi(1);
    b.iter()
        .enumerate()
        .map(|(j, bj)| {
            if j > 0 {
                fact *= qi(j as i64);
            }
            bj / &fact
        })
        .collect()
}

fn series_at(coeffs: &[Rational], x: &CohomologyClass) -> CohomologyClass {
    let mut out = CohomologyClass::zero(x.ring());
    for (j, c) in coeffs.iter().enumerate() {
        out = out.add(&x.pow(j as u32).unwrap().scale(c)).unwrap();
    }
    out
}

fn exp_direct(x: &CohomologyClass) -> CohomologyClass {
    let n = x.ring().n();
    let mut fact = qi(1);
    let mut out = CohomologyClass::one(x.ring());
    for j in 1..=n {
        fact *= qi(j as i64);
        out = out.add(&x.pow(j as u32).unwrap().scale(&(qi(1) / &fact))).unwrap();
    }
    out
}

#[test]
fn todd_cy_matches_roots_under_sum_zero() {
    for n in [2usize, 3, 4] {
        let roots = ChernRoots::formal(n, n, true).unwrap();
        let ring = roots.ring().clone();
        let coeffs = todd_coefficients_bernoulli(n);
        let mut oracle = CohomologyClass::one(&ring);
        for x in roots.roots() {
            oracle = oracle.mul(&series_at(&coeffs, x)).unwrap();
        }
        assert_eq!(todd_from_roots(&roots, n).unwrap(), oracle, "n = {n}");

        let cy = todd_cy(n).unwrap();
        let images: Vec<CohomologyClass> = [2, 3, 4].iter().map(|&j| roots.chern_class(j).unwrap()).collect();
        let substituted = cy.substitute(&images, &ring).unwrap();
        assert_eq!(substituted, oracle, "n = {n}");
        assert!(roots.chern_class(1).unwrap().is_zero());
    }
}

#[test]
fn opposite_roots_match_cy_formula() {
    let roots = ChernRoots::formal(2, 2, true).unwrap();
    let td = todd_from_roots(&roots, 2).unwrap();
    let expected = CohomologyClass::from_terms(roots.ring(), [("1", qi(1)), ("x1^2", q(-1, 12))]).unwrap();
    assert_eq!(td, expected);
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[test]
fn ch_sym_matches_monomial_sum() {
    for rank in 1..=3 {
        let roots = ChernRoots::formal(rank, 4, false).unwrap();
        for k in 0..=4 {
            let mut oracle = CohomologyClass::zero(roots.ring());
            for c in compositions(k, rank) {
                let mut arg = CohomologyClass::zero(roots.ring());
                for (i, x) in c.iter().zip(roots.roots()) {
                    arg = arg.add(&x.scale(&qi(*i as i64))).unwrap();
                }
                oracle = oracle.add(&exp_direct(&arg)).unwrap();
            }
            assert_eq!(ch_sym(&roots, k, 4).unwrap(), oracle, "rank {rank}, k {k}");
        }
    }
}

#[test]
fn ch_sym_rank_one_is_exp_kx() {
    let roots = ChernRoots::formal(1, 4, false).unwrap();
    let x = &roots.roots()[0];
    for k in 0..=4 {
        let expected = exp_direct(&x.scale(&qi(k as i64)));
        assert_eq!(ch_sym(&roots, k, 4).unwrap(), expected);
    }
}

#[test]
fn chern_character_additive() {
    let ring = GradedRing::new(3, &[("a", 1), ("b", 1), ("c", 2)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut random_root = |ring: &Arc<GradedRing>| {
        CohomologyClass::from_terms(
            ring,
            [
                ("a", qi(rng.random_range(-4..5))),
                ("b", q(rng.random_range(-4..5), 3)),
                ("c", qi(rng.random_range(-4..5))),
            ],
        )
        .unwrap()
    };
    for _ in 0..20 {
        let e = ChernRoots::from_classes(&ring, (0..2).map(|_| random_root(&ring)).collect()).unwrap();
        let f = ChernRoots::from_classes(&ring, (0..3).map(|_| random_root(&ring)).collect()).unwrap();
        let lhs = chern_character(&e.concat(&f).unwrap(), 3).unwrap();
        let rhs = chern_character(&e, 3).unwrap().add(&chern_character(&f, 3).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))
}

#[test]
fn curvature_densities_match_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for trial in 0..50 {
        let r = 2 + trial % 4;
        let mu: Vec<Complex64> = (0..r).map(|_| random_complex(&mut rng)).collect();
        // Diagonally dominant P keeps the conditioning mild.
        let p = DMatrix::from_fn(r, r, |i, j| {
            if i == j {
                Complex64::new(4.0, 0.0) + random_complex(&mut rng)
            } else {
                random_complex(&mut rng) * 0.5
            }
        });
        let p_inv = p.clone().try_inverse().expect("invertible");
        let f = &p * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(mu.clone())) * p_inv;
        let (c1, c2) = chern_from_curvature(&f).unwrap();
        let scaled: Vec<Complex64> = mu.iter().map(|m| m / two_pi_i).collect();
        let e1: Complex64 = scaled.iter().sum();
        let mut e2 = Complex64::new(0.0, 0.0);
        for i in 0..r {
            for j in i + 1..r {
                e2 += scaled[i] * scaled[j];
            }
        }
        assert!((c1 - e1).norm() <= 1e-10 * e1.norm().max(1.0), "trial {trial}");
        assert!((c2 - e2).norm() <= 1e-10 * e2.norm().max(1.0), "trial {trial}");
    }
}

#[test]
fn first_density_is_trace_over_two_pi_i() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let f = DMatrix::from_fn(3, 3, |_, _| random_complex(&mut rng));
        let (c1, _) = chern_from_curvature(&f).unwrap();
        let expected = f.trace() / Complex64::new(0.0, 2.0 * PI);
        assert!((c1 - expected).norm() < 1e-14);
    }
}

#[test]
fn cy_threefold_cross_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..25 {
        let mut numbers = BTreeMap::new();
        numbers.insert("h^3".to_string(), qi(rng.random_range(1..10)));
        numbers.insert("c2*h".to_string(), qi(rng.random_range(-60..60)));
        numbers.insert("c3".to_string(), qi(rng.random_range(-300..300)));
        let m = CYManifoldData::new(3, &[("h", 1)], numbers).unwrap();
        let chs: Vec<CohomologyClass> = (0..4)
            .map(|_| {
                CohomologyClass::from_terms(
                    m.ring(),
                    [
                        ("1", qi(rng.random_range(0..6))),
                        ("h", q(rng.random_range(-9..9), rng.random_range(1..5))),
                        ("h^2", q(rng.random_range(-9..9), rng.random_range(1..5))),
                        ("c2", q(rng.random_range(-9..9), rng.random_range(1..5))),
                        ("h^3", q(rng.random_range(-9..9), rng.random_range(1..7))),
                        ("c2*h", q(rng.random_range(-9..9), rng.random_range(1..7))),
                    ],
                )
                .unwrap()
            })
            .collect();
        let report = srr_decomposition(&m, &chs, LambdaTag::Plus).unwrap();
        assert_eq!(report.chi, &report.a0 + &report.a2 + &report.a3 + &report.a4);
        assert_eq!(euler_srr(&m, &chs).unwrap(), report.chi);
    }
}

fn ring4() -> Arc<GradedRing> {
    GradedRing::new(4, &[("a", 1), ("c2", 2), ("c3", 3)]).unwrap()
}

fn class_strategy() -> impl Strategy<Value = CohomologyClass> {
    let keys = ["1", "a", "a^2", "c2", "a^3", "a*c2", "c3", "a^4", "c2^2", "a*c3"];
    prop::collection::vec((-6i64..7, 1i64..5), keys.len()).prop_map(move |cs| {
        let ring = ring4();
        CohomologyClass::from_terms(&ring, keys.iter().zip(cs).map(|(k, (n, d))| (*k, q(n, d)))).unwrap()
    })
}

proptest! {
    #[test]
    fn ring_associative(x in class_strategy(), y in class_strategy(), z in class_strategy()) {
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn ring_commutative(x in class_strategy(), y in class_strategy()) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
    }

    #[test]
    fn ring_distributive(x in class_strategy(), y in class_strategy(), z in class_strategy()) {
        let lhs = x.mul(&y.add(&z).unwrap()).unwrap();
        let rhs = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_is_identity(x in class_strategy()) {
        let one = CohomologyClass::one(x.ring());
        prop_assert_eq!(one.mul(&x).unwrap(), x.clone());
        prop_assert!(x.sub(&x).unwrap().is_zero());
    }
}
