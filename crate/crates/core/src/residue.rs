//! Toric residues by exact linear algebra in graded pieces of the Cox ring.
//!
//! For an ample class `beta` and sections `f_0, ..., f_n` of `S_beta` with
//! no common zero, `S_rho / <f>_rho` is one-dimensional at the critical
//! degree `rho = (n+1) beta - beta_0` and is spanned by the toric Jacobian
//! `J`, whose residue is the normalized volume of the polytope of `beta`.
//! Writing `g = c J + sum f_i h_i` therefore gives `res(g) = c * n! vol`.
//!
//! "No common zero" is decided by `S_{(n+2) beta} = <f>_{(n+2) beta}`: the
//! quotient ring vanishes in that degree exactly when the sections have no
//! common zero.

use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::coxring::{Monomial, Polynomial};
use crate::differentials::{toric_jacobian, DifferentialError, JacobianResult};
use crate::lattice::{DegreeClass, Fan, FanError};
use crate::linalg::{self, rat, Rational};
use crate::polytopes::{is_ample, monomial_basis, polytope_of_divisor, PolytopeError, TorusDivisor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Differential(#[from] DifferentialError),
    #[error("degree class {0} is not ample")]
    NotAmple(String),
    #[error("the sections share a zero on the toric variety (they must not vanish simultaneously)")]
    CommonZero,
    #[error("expected {expected} sections, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("section {index} is not a homogeneous element of degree {expected}")]
    SectionDegree { index: usize, expected: String },
    #[error("numerator must have the critical degree {expected}")]
    NumeratorDegree { expected: String },
    #[error("the fan is not simplicial")]
    NotSimplicial,
    #[error("the section is degenerate (it and its toric derivatives share a zero)")]
    Degenerate,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl ResidueError {
    /// Whether the error reports a failed mathematical precondition, as
    /// opposed to malformed input or a bug.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            ResidueError::NotAmple(_)
                | ResidueError::CommonZero
                | ResidueError::NotSimplicial
                | ResidueError::Degenerate
                | ResidueError::Fan(FanError::Incomplete(_))
        )
    }
}

/// Monomial basis of a graded piece `S_alpha`.
#[derive(Clone, Debug)]
pub struct GradedPieceBasis {
    pub degree: DegreeClass,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl GradedPieceBasis {
    pub fn new(fan: &Fan, degree: &DegreeClass) -> Result<Self, ResidueError> {
        let monomials: Vec<Monomial> = monomial_basis(fan, degree)?
            .iter()
            .map(|e| Monomial::from_exponents(e))
            .collect();
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(GradedPieceBasis {
            degree: degree.clone(),
            monomials,
            index,
        })
    }

    pub fn dimension(&self) -> usize {
        self.monomials.len()
    }

    /// Coordinates of `p` in this basis; `None` if `p` has a term outside it.
    pub fn coordinates(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.monomials.len()];
        for (m, c) in p.terms() {
            v[*self.index.get(m)?] = c.clone();
        }
        Some(v)
    }

    pub fn polynomial(&self, coords: &[Rational]) -> Polynomial {
        let nvars = self.degree.representative.len();
        Polynomial::from_terms(
            nvars,
            self.monomials.iter().cloned().zip(coords.iter().cloned()),
        )
    }
}

/// The piece `<gens>_gamma`, spanned by `g * m` for each generator `g` of
/// degree `delta` and each monomial `m` of `S_{gamma - delta}`.
#[derive(Clone, Debug)]
pub struct IdealPiece {
    pub basis: GradedPieceBasis,
    /// `(generator index, multiplier)` for each spanning vector.
    pub products: Vec<(usize, Monomial)>,
    /// Spanning vectors in the coordinates of `basis`.
    pub rows: Vec<Vec<Rational>>,
}

impl IdealPiece {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows, self.basis.dimension())
    }

    pub fn quotient_dimension(&self) -> usize {
        self.basis.dimension() - self.rank()
    }
}

fn difference(fan: &Fan, a: &DegreeClass, b: &DegreeClass) -> Result<DegreeClass, FanError> {
    Ok(fan.class_group()?.combine(&[(1, a), (-1, b)]))
}

/// `<generators>_gamma` for generators that all lie in `S_delta`.
pub fn ideal_graded_piece(
    fan: &Fan,
    generators: &[Polynomial],
    delta: &DegreeClass,
    gamma: &DegreeClass,
) -> Result<IdealPiece, ResidueError> {
    check_sections(fan, generators, delta)?;
    let basis = GradedPieceBasis::new(fan, gamma)?;
    let multipliers = GradedPieceBasis::new(fan, &difference(fan, gamma, delta)?)?;
    let mut products = Vec::new();
    let mut rows = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        for m in &multipliers.monomials {
            let row = basis
                .coordinates(&g.mul_monomial(m))
                .ok_or_else(|| ResidueError::Internal("product outside the graded piece".into()))?;
            products.push((i, m.clone()));
            rows.push(row);
        }
    }
    Ok(IdealPiece {
        basis,
        products,
        rows,
    })
}

fn check_sections(fan: &Fan, sections: &[Polynomial], beta: &DegreeClass) -> Result<(), ResidueError> {
    for (index, f) in sections.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        if f.homogeneous_degree(fan)?.as_ref() != Some(beta) {
            return Err(ResidueError::SectionDegree {
                index,
                expected: beta.to_string(),
            });
        }
    }
    Ok(())
}

fn require_ample(fan: &Fan, beta: &DegreeClass) -> Result<(), ResidueError> {
    if is_ample(fan, &TorusDivisor::from(beta))? {
        Ok(())
    } else {
        Err(ResidueError::NotAmple(beta.to_string()))
    }
}

fn require_count(fan: &Fan, f_seq: &[Polynomial]) -> Result<(), ResidueError> {
    if f_seq.len() != fan.rank() + 1 {
        return Err(ResidueError::WrongCount {
            expected: fan.rank() + 1,
            got: f_seq.len(),
        });
    }
    Ok(())
}

/// `dim S_gamma / <f>_gamma` for sections of degree `beta`.
pub fn quotient_dimension(
    fan: &Fan,
    beta: &DegreeClass,
    f_seq: &[Polynomial],
    gamma: &DegreeClass,
) -> Result<usize, ResidueError> {
    Ok(ideal_graded_piece(fan, f_seq, beta, gamma)?.quotient_dimension())
}

/// Whether `f_0, ..., f_n` in `S_beta` have no common zero on the variety.
pub fn check_condition3(fan: &Fan, beta: &DegreeClass, f_seq: &[Polynomial]) -> Result<bool, ResidueError> {
    require_ample(fan, beta)?;
    require_count(fan, f_seq)?;
    let top = fan
        .class_group()?
        .combine(&[(fan.rank() as i64 + 2, beta)]);
    Ok(quotient_dimension(fan, beta, f_seq, &top)? == 0)
}

/// `res(g) = c * deg_F` together with the decomposition it came from.
#[derive(Clone, Debug)]
pub struct ResidueCertificate {
    pub c: Rational,
    /// `h_i` with `g = c J + sum f_i h_i`.
    pub cofactors: Vec<Polynomial>,
    pub residue_value: Rational,
    /// `n! vol(Delta_beta)`.
    pub deg_f: Rational,
}

/// Precomputed data for residues of many numerators against one sequence.
#[derive(Clone, Debug)]
pub struct ResidueSolver {
    pub beta: DegreeClass,
    pub rho: DegreeClass,
    pub f_seq: Vec<Polynomial>,
    pub jacobian: JacobianResult,
    pub deg_f: Rational,
    ideal: IdealPiece,
    /// Columns: every spanning vector of `<f>_rho`, then `J`.
    columns: Vec<Vec<Rational>>,
}

impl ResidueSolver {
    pub fn new(fan: &Fan, beta: &DegreeClass, f_seq: &[Polynomial]) -> Result<Self, ResidueError> {
        if !check_condition3(fan, beta, f_seq)? {
            return Err(ResidueError::CommonZero);
        }
        let rho = fan.critical_degree(beta)?;
        let ideal = ideal_graded_piece(fan, f_seq, beta, &rho)?;
        let q = ideal.quotient_dimension();
        if q != 1 {
            return Err(ResidueError::Internal(format!(
                "quotient at the critical degree has dimension {q}, expected 1"
            )));
        }
        let jacobian = toric_jacobian(fan, f_seq)?;
        let j_coords = ideal
            .basis
            .coordinates(&jacobian.j)
            .ok_or_else(|| ResidueError::Internal("Jacobian outside the critical piece".into()))?;
        let mut columns = ideal.rows.clone();
        columns.push(j_coords);
        let deg_f = polytope_of_divisor(fan, &TorusDivisor::from(beta))?.normalized_volume;
        Ok(ResidueSolver {
            beta: beta.clone(),
            rho,
            f_seq: f_seq.to_vec(),
            jacobian,
            deg_f,
            ideal,
            columns,
        })
    }

    pub fn critical_basis(&self) -> &GradedPieceBasis {
        &self.ideal.basis
    }

    pub fn residue(&self, g: &Polynomial) -> Result<ResidueCertificate, ResidueError> {
        let b = self.ideal.basis.coordinates(g).ok_or_else(|| ResidueError::NumeratorDegree {
            expected: self.rho.to_string(),
        })?;
        let sol = linalg::solve_columns(&self.columns, &b)
            .ok_or_else(|| ResidueError::Internal("numerator not in span of ideal and Jacobian".into()))?;
        let j_col = self.columns.len() - 1;
        if !sol.pivots.contains(&j_col) {
            return Err(ResidueError::Internal("Jacobian lies in the ideal".into()));
        }
        let c = sol.x[j_col].clone();
        let nvars = g.nvars();
        let mut cofactors = vec![Polynomial::zero(nvars); self.f_seq.len()];
        for ((i, m), x) in self.ideal.products.iter().zip(&sol.x) {
            if !x.is_zero() {
                cofactors[*i] = cofactors[*i].add(&Polynomial::term(m.clone(), x.clone()));
            }
        }
        let mut rebuilt = self.jacobian.j.scale(&c);
        for (f, h) in self.f_seq.iter().zip(&cofactors) {
            rebuilt = rebuilt.add(&f.mul(h));
        }
        if rebuilt != *g {
            return Err(ResidueError::Internal("decomposition does not reproduce g".into()));
        }
        Ok(ResidueCertificate {
            residue_value: &c * &self.deg_f,
            c,
            cofactors,
            deg_f: self.deg_f.clone(),
        })
    }
}

pub fn toric_residue(
    fan: &Fan,
    beta: &DegreeClass,
    f_seq: &[Polynomial],
    g: &Polynomial,
) -> Result<ResidueCertificate, ResidueError> {
    ResidueSolver::new(fan, beta, f_seq)?.residue(g)
}

/// `x_rho df/dx_rho` for every ray.
pub fn j0_generators(f: &Polynomial) -> Vec<Polynomial> {
    (0..f.nvars())
        .map(|r| f.partial(r).mul(&Polynomial::var(f.nvars(), r)))
        .collect()
}

#[derive(Clone, Debug)]
pub struct NondegeneracyReport {
    pub nondegenerate: bool,
    /// `f, x_{rho_1} df/dx_{rho_1}, ..., x_{rho_n} df/dx_{rho_n}` for the
    /// first independent subset of rays.
    pub reduced: Vec<Polynomial>,
    /// Whether the reduced set and all `x_rho df/dx_rho` span the same
    /// piece at the critical degree.
    pub generation_agrees: bool,
}

pub fn is_nondegenerate(fan: &Fan, beta: &DegreeClass, f: &Polynomial) -> Result<NondegeneracyReport, ResidueError> {
    require_ample(fan, beta)?;
    check_sections(fan, std::slice::from_ref(f), beta)?;
    let subset = fan
        .first_independent_subset()
        .ok_or_else(|| ResidueError::Internal("no independent subset".into()))?;
    let derivatives = j0_generators(f);
    let mut reduced = vec![f.clone()];
    reduced.extend(subset.iter().map(|&r| derivatives[r].clone()));
    let nondegenerate = check_condition3(fan, beta, &reduced)?;

    let rho = fan.critical_degree(beta)?;
    let full = ideal_graded_piece(fan, &derivatives, beta, &rho)?;
    let small = ideal_graded_piece(fan, &reduced, beta, &rho)?;
    let mut union = full.rows.clone();
    union.extend(small.rows.iter().cloned());
    let dim = full.basis.dimension();
    let (r_full, r_small, r_union) = (full.rank(), small.rank(), linalg::rank(&union, dim));
    Ok(NondegeneracyReport {
        nondegenerate,
        reduced,
        generation_agrees: r_full == r_union && r_small == r_union,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct J1Report {
    /// `dim S_rho / J0_rho`.
    pub quotient_j0: usize,
    /// `dim S_{rho - beta_0} / J1_{rho - beta_0}`.
    pub quotient_j1: usize,
    /// Whether multiplication by `prod x_rho` is a bijection of the quotients.
    pub isomorphism: bool,
}

/// Compares `S_{rho - beta_0} / J1` with `S_rho / J0` where
/// `J1 = J0 : prod x_rho`.
pub fn j1_isomorphism_check(fan: &Fan, beta: &DegreeClass, f: &Polynomial) -> Result<J1Report, ResidueError> {
    if !fan.is_simplicial() {
        return Err(ResidueError::NotSimplicial);
    }
    if !is_nondegenerate(fan, beta, f)?.nondegenerate {
        return Err(ResidueError::Degenerate);
    }
    let rho = fan.critical_degree(beta)?;
    let beta0 = fan.beta0()?;
    let sigma = difference(fan, &rho, &beta0)?;
    let j0 = ideal_graded_piece(fan, &j0_generators(f), beta, &rho)?;
    let dim = j0.basis.dimension();
    let rank_j0 = j0.rank();
    let quotient_j0 = dim - rank_j0;

    // image of S_sigma under multiplication by prod x_rho, modulo J0
    let product = Monomial(vec![1; fan.num_rays()]);
    let source = GradedPieceBasis::new(fan, &sigma)?;
    let mut rows = j0.rows.clone();
    for m in &source.monomials {
        let p = Polynomial::term(m.clone(), rat(1)).mul_monomial(&product);
        rows.push(
            j0.basis
                .coordinates(&p)
                .ok_or_else(|| ResidueError::Internal("product outside the critical piece".into()))?,
        );
    }
    // J1 is the kernel of S_sigma -> S_rho / J0, so the quotient by J1 has
    // the dimension of the image
    let quotient_j1 = linalg::rank(&rows, dim) - rank_j0;
    Ok(J1Report {
        quotient_j0,
        quotient_j1,
        isomorphism: quotient_j0 == 1 && quotient_j1 == 1,
    })
}
