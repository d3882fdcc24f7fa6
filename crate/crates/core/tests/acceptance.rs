//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torres_core::coxring::{Monomial, Polynomial};
use torres_core::differentials::{classical_jacobian, toric_jacobian};
use torres_core::lattice::standard::*;
use torres_core::lattice::Fan;
use torres_core::linalg::{rat, ratio, Rational};
use torres_core::numeric::{appendix_normalization, residue_integral, SamplerConfig};
use torres_core::polytopes::{polytope_of_divisor, TorusDivisor};
use torres_core::residue::*;

/// Monte Carlo agreement band, in standard errors.
const SIGMA_BAND: f64 = 3.0;
/// Relative tolerance for the one-dimensional normalization integral.
const APPENDIX_TOLERANCE: f64 = 0.01;
const NUMERIC_SAMPLES: usize = 1_000_000;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut cases = 0;
    for n in 1..=2usize {
        let fan = projective_space(n);
        for d in 1..=3i64 {
            let mut rep = vec![0; n + 1];
            rep[0] = d;
            let beta = fan.degree_of(&rep).unwrap();
            for _ in 0..5 {
                let f = random_sequence(&fan, &beta, &mut rng);
                let cert = toric_residue(&fan, &beta, &f, &classical_jacobian(&f)).map_err(|e| e.to_string())?;
                let expected = rat(d.pow(n as u32 + 1));
                ensure(cert.residue_value == expected, || {
                    format!("n={n}, d={d}: residue {} != {expected}", cert.residue_value)
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} sequences, residue of det(df_i/dx_j) = d^(n+1) exactly"))
}

fn closed_form_jacobian(lambda: i64) -> Polynomial {
    Polynomial::parse(
        &format!(
            "4*({lambda}*x^4*z^2*w^2 + 4*x^3*y*z*w^3 + 4*x^3*y*z^3*w + {lambda}*x^2*y^2*z^4 \
             + {lambda}*x^2*y^2*w^4 + 4*x*y^3*z^3*w + 4*x*y^3*z*w^3 + {lambda}*y^4*z^2*w^2)"
        ),
        &XYZW,
    )
    .unwrap()
}

fn criterion_2() -> Outcome {
    let fan = p1_times_p1();
    // documented global sign for rays x, y, z, w = (1,0), (-1,0), (0,1), (0,-1)
    let sign = rat(1);
    for lambda in [1, 7] {
        let j = toric_jacobian(&fan, &lambda_sequence(lambda)).map_err(|e| e.to_string())?.j;
        let expected = closed_form_jacobian(lambda).scale(&sign);
        ensure(j == expected, || {
            format!("lambda={lambda}: got {}", j.display(&XYZW))
        })?;
    }
    Ok("lambda in {1, 7}: all 8 coefficients match, global sign +1".into())
}

fn criterion_3() -> Outcome {
    let fan = p1_times_p1();
    let beta = lambda_beta(&fan);
    for (lambda, expected) in [(0, false), (4, false), (-4, false), (1, true), (2, true), (5, true)] {
        let report = is_nondegenerate(&fan, &beta, &lambda_section(lambda)).map_err(|e| e.to_string())?;
        ensure(report.nondegenerate == expected, || {
            format!("lambda={lambda}: verdict {}", report.nondegenerate)
        })?;
        ensure(report.generation_agrees, || format!("lambda={lambda}: generating sets differ"))?;
    }
    Ok("degenerate exactly for lambda in {0, 4, -4} among {0, 4, -4, 1, 2, 5}".into())
}

struct NormalizationCase {
    name: &'static str,
    residue: Rational,
    volume: Rational,
    quotient: usize,
}

fn normalization_cases() -> Result<Vec<NormalizationCase>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut out = Vec::new();
    for (name, fan) in fixture_fans() {
        for beta in random_ample_classes(&fan, 3, 18, &mut rng) {
            let volume = polytope_of_divisor(&fan, &TorusDivisor::from(&beta))
                .map_err(|e| e.to_string())?
                .normalized_volume;
            for _ in 0..3 {
                let f = random_sequence(&fan, &beta, &mut rng);
                let solver = ResidueSolver::new(&fan, &beta, &f).map_err(|e| format!("{name}: {e}"))?;
                let cert = solver.residue(&solver.jacobian.j).map_err(|e| format!("{name}: {e}"))?;
                let rho = fan.critical_degree(&beta).unwrap();
                out.push(NormalizationCase {
                    name,
                    residue: cert.residue_value,
                    volume: volume.clone(),
                    quotient: quotient_dimension(&fan, &beta, &f, &rho).map_err(|e| e.to_string())?,
                });
            }
        }
    }
    Ok(out)
}

fn criterion_4(cases: &[NormalizationCase]) -> Outcome {
    for c in cases {
        ensure(c.residue == c.volume, || {
            format!("{}: res(J) = {} but n! vol = {}", c.name, c.residue, c.volume)
        })?;
    }
    Ok(format!("{} cases over 5 fans: res(J) = n! vol(Delta) exactly", cases.len()))
}

fn criterion_5(cases: &[NormalizationCase]) -> Outcome {
    for c in cases {
        ensure(c.quotient == 1, || format!("{}: quotient dimension {}", c.name, c.quotient))?;
    }
    Ok(format!("{} cases: dim S_rho / <f>_rho = 1", cases.len()))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let fixtures = fixture_fans();
    let mut solvers = Vec::new();
    for (name, fan) in &fixtures {
        let beta = random_ample_classes(fan, 1, 6, &mut rng).remove(0);
        let f = random_sequence(fan, &beta, &mut rng);
        let solver = ResidueSolver::new(fan, &beta, &f).map_err(|e| format!("{name}: {e}"))?;
        solvers.push((name, fan, beta, solver));
    }
    let res = |s: &ResidueSolver, g: &Polynomial| s.residue(g).map(|c| c.residue_value).map_err(|e| e.to_string());

    for (name, fan, _, solver) in &solvers {
        let g1 = random_section(fan, &solver.rho, &mut rng);
        let g2 = random_section(fan, &solver.rho, &mut rng);
        let a = ratio(rng.gen_range(-9..10), rng.gen_range(1..7));
        let b = ratio(rng.gen_range(-9..10), rng.gen_range(1..7));
        let lhs = res(solver, &g1.scale(&a).add(&g2.scale(&b)))?;
        let rhs = &a * res(solver, &g1)? + &b * res(solver, &g2)?;
        ensure(lhs == rhs, || format!("{name}: linearity fails"))?;
    }
    for t in 0..20 {
        let (name, fan, beta, solver) = &solvers[t % solvers.len()];
        let k = solver.f_seq.len();
        let i = rng.gen_range(0..k);
        let j = (i + rng.gen_range(1..k)) % k;
        let g = random_section(fan, &solver.rho, &mut rng);
        let mut swapped = solver.f_seq.clone();
        swapped.swap(i, j);
        let before = res(solver, &g)?;
        let after = toric_residue(fan, beta, &swapped, &g).map_err(|e| e.to_string())?.residue_value;
        ensure(after == -before.clone(), || format!("{name}: swapping {i},{j} gave {after} vs {before}"))?;
    }
    for t in 0..20 {
        let (name, fan, beta, solver) = &solvers[t % solvers.len()];
        let low = fan.class_group().unwrap().combine(&[(1, &solver.rho), (-1, beta)]);
        let i = rng.gen_range(0..solver.f_seq.len());
        let h = random_section(fan, &low, &mut rng);
        let value = res(solver, &solver.f_seq[i].mul(&h))?;
        ensure(value.is_zero(), || format!("{name}: res(f_{i} h) = {value}"))?;
    }
    Ok("linearity on 5 fans, 20 transpositions negate, 20 ideal elements vanish".into())
}

fn all_fixture_fans() -> Vec<(&'static str, Fan)> {
    let mut fans = fixture_fans();
    fans.push(("F2", hirzebruch(2)));
    fans.push(("P3", projective_space(3)));
    fans.push(("P1xP2", product_of_projective_spaces(2, 3)));
    fans
}

fn criterion_7() -> Outcome {
    let mut subsets = 0;
    for (name, fan) in all_fixture_fans() {
        let det = fan.exact_sequence_determinant().map_err(|e| format!("{name}: {e}"))?;
        subsets += det.entries.len();
    }
    Ok(format!("identity holds on all {subsets} subsets of 8 fans"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut checks = 0;
    for (name, fan) in all_fixture_fans() {
        let basis = fan.euler_basis().map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let a: Vec<i64> = (0..fan.num_rays()).map(|_| rng.gen_range(0..3)).collect();
            let beta = fan.degree_of(&a).unwrap();
            let f = random_section(&fan, &beta, &mut rng);
            for theta in &basis {
                ensure(f.euler_apply(theta) == f.scale(&theta.pairing(&beta)), || {
                    format!("{name}: Euler formula fails for b = {:?}", theta.b)
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} identities theta(f) = theta(beta) f"))
}

fn criterion_9() -> Outcome {
    let mut count = 0;
    for n in 1..=2usize {
        let fan = projective_space(n);
        for d in 1..=3i64 {
            let mut rep = vec![0; n + 1];
            rep[0] = d;
            let beta = fan.degree_of(&rep).unwrap();
            let f: Vec<Polynomial> = (0..=n)
                .map(|i| {
                    let mut e = vec![0; n + 1];
                    e[i] = d;
                    Polynomial::monomial(&e)
                })
                .collect();
            let solver = ResidueSolver::new(&fan, &beta, &f).map_err(|e| e.to_string())?;
            let target = Monomial(vec![d as u32 - 1; n + 1]);
            for m in &solver.critical_basis().monomials {
                let g = Polynomial::term(m.clone(), rat(1));
                // coefficient extraction, independent of the solver
                let expected = if *m == target { rat(1) } else { rat(0) };
                let got = solver.residue(&g).map_err(|e| e.to_string())?.residue_value;
                ensure(got == expected, || format!("n={n}, d={d}, g={:?}: {got}", m.0))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} monomials agree with coefficient extraction"))
}

fn criterion_10() -> Outcome {
    let q = p1_times_p1();
    let lam = j1_isomorphism_check(&q, &lambda_beta(&q), &lambda_section(1)).map_err(|e| e.to_string())?;
    let p2 = projective_space(2);
    let cubic = Polynomial::parse("a^3 + b^3 + c^3", &["a", "b", "c"]).unwrap();
    let fermat = j1_isomorphism_check(&p2, &p2.beta0().unwrap(), &cubic).map_err(|e| e.to_string())?;
    for (name, r) in [("lambda=1", &lam), ("Fermat cubic", &fermat)] {
        ensure(r.isomorphism && r.quotient_j0 == 1 && r.quotient_j1 == 1, || {
            format!("{name}: {r:?}")
        })?;
    }
    Ok("lambda=1 and Fermat cubic: both quotients 1-dimensional, multiplication bijective".into())
}

fn criterion_11() -> Outcome {
    let config = SamplerConfig {
        sample_count: NUMERIC_SAMPLES,
        seed: 0x11,
        chart: 0,
    };
    let to_c = |r: &Rational| Complex64::new(r.to_f64().unwrap(), 0.0);

    let p1 = projective_space(1);
    let names = ["a", "b"];
    let beta = p1.degree_of(&[2, 0]).unwrap();
    let f = vec![
        Polynomial::parse("a^2", &names).unwrap(),
        Polynomial::parse("b^2", &names).unwrap(),
    ];
    let g = Polynomial::parse("a*b", &names).unwrap();
    let exact = toric_residue(&p1, &beta, &f, &g).map_err(|e| e.to_string())?.residue_value;
    let est = residue_integral(&p1, &beta, &f, &g, &config).map_err(|e| e.to_string())?;
    ensure(est.agrees_with(to_c(&exact), SIGMA_BAND), || format!("P1 job: {est:?} vs {exact}"))?;
    let first = format!("P1 {:.4}+-{:.4}", est.value.re, est.std_error);

    let q = p1_times_p1();
    let qb = lambda_beta(&q);
    let fs = lambda_sequence(1);
    let solver = ResidueSolver::new(&q, &qb, &fs).map_err(|e| e.to_string())?;
    let exact = solver.residue(&solver.jacobian.j).map_err(|e| e.to_string())?.residue_value;
    let est = residue_integral(&q, &qb, &fs, &solver.jacobian.j, &config).map_err(|e| e.to_string())?;
    ensure(est.agrees_with(to_c(&exact), SIGMA_BAND), || format!("lambda job: {est:?} vs {exact}"))?;
    let second = format!("lambda=1 {:.3}+-{:.3} (exact {exact})", est.value.re, est.std_error);

    let norm = appendix_normalization(1, &config).map_err(|e| e.to_string())?;
    let rel = (norm.value - Complex64::new(1.0, 0.0)).norm();
    ensure(rel <= APPENDIX_TOLERANCE, || format!("normalization {norm:?}"))?;
    Ok(format!("{first}; {second}; normalization {:.5}", norm.value.re))
}

fn run(number: usize, title: &str, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {number:>2} PASS  {title}: {detail} [{secs:.1}s]"),
        Err(detail) => println!("criterion {number:>2} FAIL  {title}: {detail} [{secs:.1}s]"),
    }
    outcome.is_ok()
}

fn main() {
    let mut ok = true;
    ok &= run(1, "projective residue law", criterion_1);
    ok &= run(2, "lambda-family toric Jacobian", criterion_2);
    ok &= run(3, "nondegeneracy boundary", criterion_3);
    let cases = normalization_cases();
    let cases_ref = &cases;
    ok &= run(4, "Jacobian residue equals normalized volume", || {
        criterion_4(cases_ref.as_ref().map_err(Clone::clone)?)
    });
    ok &= run(5, "one-dimensional critical quotient", || {
        criterion_5(cases_ref.as_ref().map_err(Clone::clone)?)
    });
    ok &= run(6, "linearity, antisymmetry, ideal vanishing", criterion_6);
    ok &= run(7, "exact-sequence determinant identity", criterion_7);
    ok &= run(8, "Euler formula", criterion_8);
    ok &= run(9, "coefficient-extraction oracle", criterion_9);
    ok &= run(10, "J1 quotient isomorphism", criterion_10);
    ok &= run(11, "Monte Carlo cross-check", criterion_11);
    if !ok {
        std::process::exit(1);
    }
}
