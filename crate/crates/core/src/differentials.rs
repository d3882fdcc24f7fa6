//! The toric form `Omega = sum_I det(n_I) x_hat_I dx_I` and the toric
//! Jacobian of `n + 1` sections of a common degree.
//!
//! For each `n`-subset `I = {rho_1 < ... < rho_n}` let `J(f_I)` be the
//! determinant of the `(n+1) x (n+1)` matrix whose first row is
//! `f_0, ..., f_n` and whose row `k` is `df_j/dx_{rho_k}`. The toric Jacobian
//! is the polynomial `J` with `J(f_I) = J det(n_I) x_hat_I` for every `I`.

use std::collections::HashMap;

use thiserror::Error;

use crate::coxring::{Monomial, Polynomial};
use crate::lattice::{DegreeClass, Fan, FanError};
use crate::linalg::rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DifferentialError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("expected {expected} sections, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("section {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("sections do not share a common degree (section {0} differs)")]
    DegreeMismatch(usize),
    #[error("all sections are zero")]
    AllZero,
    #[error("J(f_I) is not divisible by det(n_I) x_hat_I for I = {0:?}")]
    InexactDivision(Vec<usize>),
    #[error("J det(n_I) x_hat_I differs from J(f_I) for I = {0:?}")]
    CrossCheck(Vec<usize>),
    #[error("Jacobian has degree {got}, expected {expected}")]
    WrongDegree { expected: String, got: String },
}

/// One summand `det(n_I) x_hat_I dx_I` of `Omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaTerm {
    pub subset: Vec<usize>,
    pub det_n: i64,
    pub xhat: Monomial,
}

fn complement_monomial(num_rays: usize, subset: &[usize]) -> Monomial {
    Monomial((0..num_rays).map(|r| u32::from(!subset.contains(&r))).collect())
}

/// The non-zero summands of `Omega`, subsets in lexicographic order.
pub fn omega_terms(fan: &Fan) -> Result<Vec<OmegaTerm>, FanError> {
    fan.require_complete()?;
    let mut out = Vec::new();
    for subset in fan.ray_subsets() {
        let det_n = fan.det_n(&subset)?;
        if det_n != 0 {
            out.push(OmegaTerm {
                xhat: complement_monomial(fan.num_rays(), &subset),
                det_n,
                subset,
            });
        }
    }
    Ok(out)
}

/// Determinant of a square matrix of polynomials, expanded along rows with
/// memoised minors on column subsets.
pub fn polynomial_det(m: &[Vec<Polynomial>]) -> Polynomial {
    let k = m.len();
    assert!(k > 0 && m.iter().all(|r| r.len() == k), "square matrix");
    let nvars = m[0][0].nvars();
    // minors[mask] = det of the last popcount(mask) rows on columns `mask`
    let mut minors: HashMap<u32, Polynomial> = HashMap::new();
    minors.insert(0, Polynomial::constant(nvars, rat(1)));
    for size in 1..=k {
        let row = k - size;
        for mask in 0u32..(1 << k) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut acc = Polynomial::zero(nvars);
            let mut sign = 1;
            for col in 0..k {
                if mask & (1 << col) == 0 {
                    continue;
                }
                let entry = &m[row][col];
                if !entry.is_zero() {
                    let minor = &minors[&(mask & !(1 << col))];
                    if !minor.is_zero() {
                        let t = entry.mul(minor);
                        acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
                    }
                }
                sign = -sign;
            }
            minors.insert(mask, acc);
        }
    }
    minors.remove(&((1u32 << k) - 1)).expect("full minor")
}

/// `J(f_I)`: first row `f_j`, then the rows `df_j/dx_{rho}` for `rho in I`.
pub fn subset_determinant(f_seq: &[Polynomial], subset: &[usize]) -> Polynomial {
    let mut rows = vec![f_seq.to_vec()];
    for &r in subset {
        rows.push(f_seq.iter().map(|f| f.partial(r)).collect());
    }
    polynomial_det(&rows)
}

/// The toric Jacobian with the determinants it was checked against.
#[derive(Clone, Debug)]
pub struct JacobianResult {
    pub j: Polynomial,
    pub degree: DegreeClass,
    /// Subset used to divide out `det(n_I) x_hat_I`.
    pub chart: Vec<usize>,
    /// `(I, J(f_I))` for every `n`-subset.
    pub witnesses: Vec<(Vec<usize>, Polynomial)>,
}

/// The common degree of the sections (zero sections are compatible with
/// every degree).
pub fn common_degree(fan: &Fan, f_seq: &[Polynomial]) -> Result<DegreeClass, DifferentialError> {
    let mut alpha: Option<DegreeClass> = None;
    for (i, f) in f_seq.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let d = f
            .homogeneous_degree(fan)?
            .ok_or(DifferentialError::NotHomogeneous(i))?;
        match &alpha {
            Some(a) if *a != d => return Err(DifferentialError::DegreeMismatch(i)),
            Some(_) => {}
            None => alpha = Some(d),
        }
    }
    alpha.ok_or(DifferentialError::AllZero)
}

pub fn toric_jacobian(fan: &Fan, f_seq: &[Polynomial]) -> Result<JacobianResult, DifferentialError> {
    fan.require_complete()?;
    let n = fan.rank();
    if f_seq.len() != n + 1 {
        return Err(DifferentialError::WrongCount {
            expected: n + 1,
            got: f_seq.len(),
        });
    }
    let alpha = common_degree(fan, f_seq)?;
    let beta0 = fan.beta0()?;
    let cg = fan.class_group()?;
    let degree = cg.combine(&[(n as i64 + 1, &alpha), (-1, &beta0)]);

    let witnesses: Vec<(Vec<usize>, Polynomial)> = fan
        .ray_subsets()
        .into_iter()
        .map(|s| {
            let d = subset_determinant(f_seq, &s);
            (s, d)
        })
        .collect();
    let chart = fan
        .first_independent_subset()
        .expect("a complete fan has n independent rays");
    let det_chart = fan.det_n(&chart)?;
    let xhat = complement_monomial(fan.num_rays(), &chart);
    let top = &witnesses.iter().find(|(s, _)| *s == chart).expect("chart is a subset").1;
    let j = top
        .scale(&(rat(1) / rat(det_chart)))
        .div_monomial(&xhat)
        .ok_or_else(|| DifferentialError::InexactDivision(chart.clone()))?;

    if let Some(bad) = first_violation(fan, &witnesses, &j)? {
        return Err(DifferentialError::CrossCheck(bad));
    }
    if !j.is_zero() {
        let got = j
            .homogeneous_degree(fan)?
            .ok_or_else(|| DifferentialError::CrossCheck(chart.clone()))?;
        if got != degree {
            return Err(DifferentialError::WrongDegree {
                expected: degree.to_string(),
                got: got.to_string(),
            });
        }
    }
    Ok(JacobianResult {
        j,
        degree,
        chart,
        witnesses,
    })
}

fn first_violation(
    fan: &Fan,
    witnesses: &[(Vec<usize>, Polynomial)],
    j: &Polynomial,
) -> Result<Option<Vec<usize>>, FanError> {
    for (s, d) in witnesses {
        let det_n = fan.det_n(s)?;
        let expected = if det_n == 0 {
            Polynomial::zero(j.nvars())
        } else {
            j.mul_monomial(&complement_monomial(fan.num_rays(), s))
                .scale(&rat(det_n))
        };
        if expected != *d {
            return Ok(Some(s.clone()));
        }
    }
    Ok(None)
}

/// Outcome of checking `J(f_I) = J det(n_I) x_hat_I` on every subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    /// First subset where the identity fails, if any.
    pub offending: Option<Vec<usize>>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.offending.is_none()
    }
}

pub fn verify_defining_identity(
    fan: &Fan,
    f_seq: &[Polynomial],
    j: &Polynomial,
) -> Result<IdentityCheck, DifferentialError> {
    let n = fan.rank();
    if f_seq.len() != n + 1 {
        return Err(DifferentialError::WrongCount {
            expected: n + 1,
            got: f_seq.len(),
        });
    }
    let witnesses: Vec<(Vec<usize>, Polynomial)> = fan
        .ray_subsets()
        .into_iter()
        .map(|s| {
            let d = subset_determinant(f_seq, &s);
            (s, d)
        })
        .collect();
    Ok(IdentityCheck {
        offending: first_violation(fan, &witnesses, j)?,
    })
}

/// `det(df_i/dx_j)` for `n + 1` polynomials in `n + 1` variables.
pub fn classical_jacobian(f_seq: &[Polynomial]) -> Polynomial {
    let rows: Vec<Vec<Polynomial>> = f_seq
        .iter()
        .map(|f| (0..f_seq.len()).map(|j| f.partial(j)).collect())
        .collect();
    polynomial_det(&rows)
}
