//! Fixtures shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use torres_core::coxring::{Monomial, Polynomial};
use torres_core::lattice::standard::*;
use torres_core::lattice::{DegreeClass, Fan};
use torres_core::linalg::rat;
use torres_core::polytopes::{is_ample, monomial_basis, polytope_of_divisor, TorusDivisor};
use torres_core::residue::check_condition3;

pub const XYZW: [&str; 4] = ["x", "y", "z", "w"];

pub fn fixture_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("P1", projective_space(1)),
        ("P2", projective_space(2)),
        ("P1xP1", p1_times_p1()),
        ("F1", hirzebruch(1)),
        ("P(1,2,1)", weighted_1_2_1()),
    ]
}

/// Random element of `S_alpha` with integer coefficients in `-5..=5`.
pub fn random_section(fan: &Fan, alpha: &DegreeClass, rng: &mut ChaCha8Rng) -> Polynomial {
    let basis = monomial_basis(fan, alpha).unwrap();
    Polynomial::from_terms(
        fan.num_rays(),
        basis
            .iter()
            .map(|e| (Monomial::from_exponents(e), rat(rng.gen_range(-5..=5)))),
    )
}

/// Random `f_0, ..., f_n` in `S_beta` without common zeros.
pub fn random_sequence(fan: &Fan, beta: &DegreeClass, rng: &mut ChaCha8Rng) -> Vec<Polynomial> {
    loop {
        let f: Vec<Polynomial> = (0..=fan.rank()).map(|_| random_section(fan, beta, rng)).collect();
        if check_condition3(fan, beta, &f).unwrap() {
            return f;
        }
    }
}

/// `k` distinct ample classes with small representatives, chosen at random.
pub fn random_ample_classes(fan: &Fan, k: usize, max_volume: i64, rng: &mut ChaCha8Rng) -> Vec<DegreeClass> {
    let r = fan.num_rays();
    let mut candidates: Vec<DegreeClass> = Vec::new();
    let total = 4usize.pow(r as u32);
    for code in 0..total {
        let a: Vec<i64> = (0..r).map(|i| ((code / 4usize.pow(i as u32)) % 4) as i64).collect();
        let d = TorusDivisor::new(a.clone());
        if !is_ample(fan, &d).unwrap() {
            continue;
        }
        if polytope_of_divisor(fan, &d).unwrap().normalized_volume > rat(max_volume) {
            continue;
        }
        let c = fan.degree_of(&a).unwrap();
        if !candidates.contains(&c) {
            candidates.push(c);
        }
    }
    assert!(candidates.len() >= k, "not enough ample classes");
    candidates.shuffle(rng);
    candidates.truncate(k);
    candidates
}

pub fn lambda_section(lambda: i64) -> Polynomial {
    Polynomial::parse(
        &format!("x^2*z^2 + x^2*w^2 + y^2*z^2 + y^2*w^2 + {lambda}*x*y*z*w"),
        &XYZW,
    )
    .unwrap()
}

/// `(f, x df/dx, z df/dz)` for the lambda family on `P^1 x P^1`.
pub fn lambda_sequence(lambda: i64) -> Vec<Polynomial> {
    let f = lambda_section(lambda);
    let x = Polynomial::var(4, 0);
    let z = Polynomial::var(4, 2);
    vec![f.clone(), x.mul(&f.partial(0)), z.mul(&f.partial(2))]
}

pub fn lambda_beta(fan: &Fan) -> DegreeClass {
    fan.degree_of(&[2, 0, 2, 0]).unwrap()
}
