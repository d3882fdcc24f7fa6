//! Fans, the class group of a toric variety, Euler vector fields and the
//! determinant of the sequence `0 -> Lie(G) -> C^{rays} -> N_C -> 0`.
//!
//! Conventions used throughout the crate:
//! - the basis of `M` is the standard basis of `Z^n`, so `det(n_I)` is the
//!   determinant of the matrix whose columns are the ray vectors of `I`;
//! - subsets `I` of rays are always listed in increasing index order;
//! - ray order is fixed at construction and never changed.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::intmat::{self, IntMatrix};
use crate::linalg::{rat, Rational};

/// Directions sampled when checking that the cones cover `R^n`.
pub const COMPLETENESS_SAMPLES: usize = 1000;
const COMPLETENESS_SEED: u64 = 0x7011_c0de;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("malformed fan: {0}")]
    Malformed(String),
    #[error("fan is not complete: {0}")]
    Incomplete(String),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("expected a subset of {expected} rays, got {got}")]
    SubsetSize { expected: usize, got: usize },
    #[error("determinant identity violated for subset {subset:?} (implementation bug)")]
    IdentityViolation { subset: Vec<usize> },
}

/// A fan in `N_R = R^n` given by primitive ray generators and maximal cones.
#[derive(Debug)]
pub struct Fan {
    rank: usize,
    rays: IntMatrix,
    max_cones: Vec<Vec<usize>>,
    complete: bool,
    incompleteness: Option<String>,
    simplicial: bool,
    smooth: bool,
    class_group: OnceLock<ClassGroup>,
}

impl Clone for Fan {
    fn clone(&self) -> Self {
        Fan {
            rank: self.rank,
            rays: self.rays.clone(),
            max_cones: self.max_cones.clone(),
            complete: self.complete,
            incompleteness: self.incompleteness.clone(),
            simplicial: self.simplicial,
            smooth: self.smooth,
            class_group: OnceLock::new(),
        }
    }
}

/// Facet of a full-dimensional cone: rays on the facet and the inward normal.
#[derive(Clone, Debug)]
struct Facet {
    rays: Vec<usize>,
    normal: Vec<i64>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Fan {
    /// Builds a fan and computes its flags. Incomplete fans are accepted;
    /// use [`Fan::complete`] to require completeness.
    pub fn new(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        let Some(first) = rays.first() else {
            return Err(FanError::Malformed("no rays".into()));
        };
        let rank = first.len();
        if rank == 0 {
            return Err(FanError::Malformed("rays have dimension 0".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(FanError::Malformed(format!(
                    "ray {i} has {} entries, expected {rank}",
                    r.len()
                )));
            }
            match intmat::gcd_slice(r) {
                0 => return Err(FanError::Malformed(format!("ray {i} is zero"))),
                1 => {}
                g => {
                    return Err(FanError::Malformed(format!(
                        "ray {i} = {r:?} is not primitive (gcd {g})"
                    )))
                }
            }
            if rays[..i].contains(r) {
                return Err(FanError::Malformed(format!("ray {i} = {r:?} is repeated")));
            }
        }
        if max_cones.is_empty() {
            return Err(FanError::Malformed("no maximal cones".into()));
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        for (k, cone) in max_cones.into_iter().enumerate() {
            if cone.is_empty() {
                return Err(FanError::Malformed(format!("cone {k} is empty")));
            }
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cone.len() {
                return Err(FanError::Malformed(format!("cone {k} repeats a ray index")));
            }
            if let Some(&bad) = sorted.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::Malformed(format!(
                    "cone {k} refers to ray {bad}, but there are {} rays",
                    rays.len()
                )));
            }
            cones.push(sorted);
        }

        let mut fan = Fan {
            rank,
            rays,
            max_cones: cones,
            complete: false,
            incompleteness: None,
            simplicial: false,
            smooth: false,
            class_group: OnceLock::new(),
        };
        fan.simplicial = fan.max_cones.iter().all(|c| {
            c.len() == rank && fan.det_n_unchecked(c) != 0
        });
        fan.smooth = fan.simplicial
            && fan.max_cones.iter().all(|c| fan.det_n_unchecked(c).abs() == 1);
        match fan.check_completeness() {
            Ok(()) => fan.complete = true,
            Err(reason) => fan.incompleteness = Some(reason),
        }
        Ok(fan)
    }

    /// Builds a fan and fails with [`FanError::Incomplete`] unless it is complete.
    pub fn complete(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        let fan = Fan::new(rays, max_cones)?;
        fan.require_complete()?;
        Ok(fan)
    }

    pub fn require_complete(&self) -> Result<(), FanError> {
        match &self.incompleteness {
            None => Ok(()),
            Some(reason) => Err(FanError::Incomplete(reason.clone())),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth
    }

    fn det_n_unchecked(&self, subset: &[usize]) -> i64 {
        let m: IntMatrix = (0..self.rank)
            .map(|i| subset.iter().map(|&j| self.rays[j][i]).collect())
            .collect();
        intmat::det(&m)
    }

    /// `det(<m_i, n_{rho_j}>)` for the standard basis `m_i`, in the given
    /// order of `subset`.
    pub fn det_n(&self, subset: &[usize]) -> Result<i64, FanError> {
        if subset.len() != self.rank {
            return Err(FanError::SubsetSize {
                expected: self.rank,
                got: subset.len(),
            });
        }
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.rays.len()) {
            return Err(FanError::Malformed(format!("ray index {bad} out of range")));
        }
        Ok(self.det_n_unchecked(subset))
    }

    /// All `n`-subsets of rays in increasing lexicographic order.
    pub fn ray_subsets(&self) -> Vec<Vec<usize>> {
        subsets(self.rays.len(), self.rank)
    }

    /// First `n`-subset (in lexicographic order) with independent rays.
    pub fn first_independent_subset(&self) -> Option<Vec<usize>> {
        self.ray_subsets()
            .into_iter()
            .find(|s| self.det_n_unchecked(s) != 0)
    }

    fn cone_facets(&self, cone: &[usize]) -> Result<Vec<Facet>, String> {
        let vecs: Vec<&[i64]> = cone.iter().map(|&i| self.rays[i].as_slice()).collect();
        let as_rows: IntMatrix = vecs.iter().map(|v| v.to_vec()).collect();
        if intmat::rank(&as_rows, self.rank) != self.rank {
            return Err(format!("cone {cone:?} is not full-dimensional"));
        }
        let mut facets: BTreeMap<Vec<usize>, Vec<i64>> = BTreeMap::new();
        for sub in subsets(cone.len(), self.rank - 1) {
            let chosen: Vec<&[i64]> = sub.iter().map(|&k| vecs[k]).collect();
            let mut normal = intmat::cross_product(&chosen, self.rank);
            if normal.iter().all(|&x| x == 0) {
                continue;
            }
            let values: Vec<i64> = vecs.iter().map(|v| dot(&normal, v)).collect();
            if values.iter().all(|&x| x <= 0) {
                normal.iter_mut().for_each(|x| *x = -*x);
            } else if !values.iter().all(|&x| x >= 0) {
                continue;
            }
            let on: Vec<usize> = cone
                .iter()
                .zip(&values)
                .filter(|(_, &v)| v == 0)
                .map(|(&i, _)| i)
                .collect();
            let g = intmat::gcd_slice(&normal);
            facets
                .entry(on)
                .or_insert_with(|| normal.iter().map(|x| x / g).collect());
        }
        Ok(facets
            .into_iter()
            .map(|(rays, normal)| Facet { rays, normal })
            .collect())
    }

    fn check_completeness(&self) -> Result<(), String> {
        let facets: Vec<Vec<Facet>> = self
            .max_cones
            .iter()
            .map(|c| self.cone_facets(c))
            .collect::<Result<_, _>>()?;
        // every facet of a maximal cone is shared with exactly one other maximal cone
        let mut owners: BTreeMap<&[usize], usize> = BTreeMap::new();
        for list in &facets {
            for f in list {
                *owners.entry(f.rays.as_slice()).or_default() += 1;
            }
        }
        if let Some((rays, count)) = owners.iter().find(|(_, &c)| c != 2) {
            return Err(format!(
                "facet spanned by rays {rays:?} lies on {count} maximal cone(s), expected 2"
            ));
        }
        // random directions must land in some cone
        let mut rng = ChaCha8Rng::seed_from_u64(COMPLETENESS_SEED);
        for _ in 0..COMPLETENESS_SAMPLES {
            let v: Vec<i64> = (0..self.rank)
                .map(|_| rng.gen_range(-1_000_000..=1_000_000))
                .collect();
            let covered = facets
                .iter()
                .any(|list| list.iter().all(|f| dot(&f.normal, &v) >= 0));
            if !covered {
                return Err(format!("direction {v:?} lies in no maximal cone"));
            }
        }
        Ok(())
    }

    /// The class group `A_{n-1}(X)`, computed once and cached.
    pub fn class_group(&self) -> Result<&ClassGroup, FanError> {
        self.require_complete()?;
        Ok(self.class_group.get_or_init(|| ClassGroup::of_rays(&self.rays, self.rank)))
    }

    /// Degree of a monomial with the given exponent vector; the exponent
    /// vector itself is kept as the representative.
    pub fn degree_of(&self, exponents: &[i64]) -> Result<DegreeClass, FanError> {
        self.class_group()?.class_of(exponents)
    }

    /// `beta_0 = sum of deg(x_rho)`, represented by `(1, ..., 1)`.
    pub fn beta0(&self) -> Result<DegreeClass, FanError> {
        self.degree_of(&vec![1; self.num_rays()])
    }

    /// The critical degree `(n+1) beta - beta_0`.
    pub fn critical_degree(&self, beta: &DegreeClass) -> Result<DegreeClass, FanError> {
        let n1 = self.rank as i64 + 1;
        let rep: Vec<i64> = beta.representative.iter().map(|a| n1 * a - 1).collect();
        self.degree_of(&rep)
    }

    /// Integer basis of the Euler vector fields (relations among the rays),
    /// in Hermite normal form.
    pub fn euler_basis(&self) -> Result<Vec<EulerField>, FanError> {
        let cg = self.class_group()?;
        Ok(cg
            .free_projection
            .iter()
            .map(|row| EulerField {
                b: row.iter().map(|&x| rat(x)).collect(),
            })
            .collect())
    }

    /// The constant `c` with `c det(n_I) = (-1)^I det(b_hat_I)` for every
    /// `n`-subset `I`, checked on all subsets.
    pub fn exact_sequence_determinant(&self) -> Result<ExactSequenceDeterminant, FanError> {
        let basis = self.euler_basis()?;
        let all: Vec<usize> = (0..self.num_rays()).collect();
        let mut entries = Vec::new();
        for subset in self.ray_subsets() {
            let complement: Vec<usize> = all.iter().copied().filter(|i| !subset.contains(i)).collect();
            let minor: Vec<Vec<Rational>> = basis
                .iter()
                .map(|t| complement.iter().map(|&j| t.b[j].clone()).collect())
                .collect();
            let det_b = crate::linalg::det(&minor);
            let order: Vec<usize> = complement.iter().chain(&subset).copied().collect();
            entries.push(SubsetMinor {
                det_n: self.det_n_unchecked(&subset),
                det_b,
                sign: permutation_sign(&order),
                subset,
            });
        }
        let first = entries
            .iter()
            .find(|e| e.det_n != 0)
            .expect("a complete fan has an independent n-subset");
        let c = rat(first.sign) * &first.det_b / rat(first.det_n);
        for e in &entries {
            if &c * rat(e.det_n) != rat(e.sign) * &e.det_b {
                return Err(FanError::IdentityViolation {
                    subset: e.subset.clone(),
                });
            }
        }
        Ok(ExactSequenceDeterminant { c, entries })
    }
}

/// Sign of the permutation listing `0..len` in the given order.
pub fn permutation_sign(order: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Per-subset data behind [`Fan::exact_sequence_determinant`].
#[derive(Clone, Debug)]
pub struct SubsetMinor {
    pub subset: Vec<usize>,
    pub det_n: i64,
    pub det_b: Rational,
    /// Sign of the permutation moving `subset` to the end.
    pub sign: i64,
}

#[derive(Clone, Debug)]
pub struct ExactSequenceDeterminant {
    pub c: Rational,
    pub entries: Vec<SubsetMinor>,
}

/// `A_{n-1}(X) = Z^{rays} / M`, presented by a projection onto canonical
/// coordinates (free part, torsion residues).
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub free_rank: usize,
    pub torsion_invariants: Vec<i64>,
    /// Hermite basis of the integer relations among the rays; its rows are
    /// the free coordinates of a divisor.
    pub free_projection: IntMatrix,
    /// One row per torsion invariant, read modulo that invariant.
    pub torsion_projection: IntMatrix,
    num_rays: usize,
}

impl ClassGroup {
    fn of_rays(rays: &[Vec<i64>], rank: usize) -> ClassGroup {
        let snf = intmat::smith_normal_form(rays, rank);
        let r = snf.rank();
        let free_projection = intmat::hermite_normal_form(&snf.left[r..], rays.len());
        let (torsion_invariants, torsion_projection) = snf
            .invariant_factors
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 1)
            .map(|(i, &d)| (d, snf.left[i].clone()))
            .unzip();
        ClassGroup {
            free_rank: free_projection.len(),
            torsion_invariants,
            free_projection,
            torsion_projection,
            num_rays: rays.len(),
        }
    }

    pub fn num_rays(&self) -> usize {
        self.num_rays
    }

    pub fn class_of(&self, representative: &[i64]) -> Result<DegreeClass, FanError> {
        if representative.len() != self.num_rays {
            return Err(FanError::LengthMismatch {
                expected: self.num_rays,
                got: representative.len(),
            });
        }
        let free = intmat::mat_vec(&self.free_projection, representative);
        let torsion = intmat::mat_vec(&self.torsion_projection, representative)
            .into_iter()
            .zip(&self.torsion_invariants)
            .map(|(x, &d)| x.rem_euclid(d))
            .collect();
        Ok(DegreeClass {
            free,
            torsion,
            representative: representative.to_vec(),
        })
    }

    /// `sum k_i * alpha_i`, computed on representatives.
    pub fn combine(&self, terms: &[(i64, &DegreeClass)]) -> DegreeClass {
        let mut rep = vec![0i64; self.num_rays];
        for (k, c) in terms {
            for (r, a) in rep.iter_mut().zip(&c.representative) {
                *r += k * a;
            }
        }
        self.class_of(&rep).expect("representatives have matching length")
    }
}

/// An element of the class group together with a concrete divisor
/// `sum a_rho D_rho` representing it. Equality ignores the representative.
#[derive(Clone, Debug, Eq)]
pub struct DegreeClass {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
    pub representative: Vec<i64>,
}

impl PartialEq for DegreeClass {
    fn eq(&self, other: &Self) -> bool {
        self.free == other.free && self.torsion == other.torsion
    }
}

impl std::hash::Hash for DegreeClass {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.free.hash(state);
        self.torsion.hash(state);
    }
}

impl DegreeClass {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&x| x == 0) && self.torsion.iter().all(|&x| x == 0)
    }
}

impl std::fmt::Display for DegreeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.free.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        for (i, x) in self.torsion.iter().enumerate() {
            if i > 0 || !self.free.is_empty() {
                write!(f, "; ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `theta = sum b_rho x_rho d/dx_rho` with `sum b_rho n_rho = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerField {
    pub b: Vec<Rational>,
}

impl EulerField {
    /// Checks `sum b_rho n_rho = 0` against the fan's rays.
    pub fn is_relation_of(&self, fan: &Fan) -> bool {
        (0..fan.rank()).all(|i| {
            self.b
                .iter()
                .zip(fan.rays())
                .map(|(b, r)| b * rat(r[i]))
                .fold(Rational::zero(), |acc, x| acc + x)
                .is_zero()
        })
    }

    /// `theta(beta) = sum b_rho a_rho` for the representative of `beta`.
    pub fn pairing(&self, beta: &DegreeClass) -> Rational {
        self.b
            .iter()
            .zip(&beta.representative)
            .map(|(b, &a)| b * rat(a))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

pub fn euler_pairing(theta: &EulerField, beta: &DegreeClass) -> Rational {
    theta.pairing(beta)
}

/// Standard fans used as fixtures by the tests and the CLI examples.
pub mod standard {
    use super::Fan;

    /// `P^n` with `x_0 <-> -(e_1 + ... + e_n)` and `x_i <-> e_i`. With this
    /// ray order the toric form agrees with `sum (-1)^i x_i dx_0 ^ ... ^ dx_n`.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays = vec![vec![-1; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            rays.push(e);
        }
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&i| i != skip).collect())
            .collect();
        Fan::complete(rays, cones).expect("projective space fan")
    }

    /// `P^1 x P^1` with variables `x, y; z, w` on rays `(1,0), (-1,0), (0,1), (0,-1)`.
    pub fn p1_times_p1() -> Fan {
        Fan::complete(
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
        .expect("P1 x P1 fan")
    }

    /// `P^{m-1} x P^{p-1}`, variables `x_1..x_m` then `y_1..y_p`.
    pub fn product_of_projective_spaces(m: usize, p: usize) -> Fan {
        let (a, b) = (m - 1, p - 1);
        let n = a + b;
        let mut rays = Vec::new();
        // x_1 <-> -(sum e_i), x_{i+1} <-> e_i on the first factor
        let mut first = vec![0; n];
        first[..a].iter_mut().for_each(|x| *x = -1);
        rays.push(first);
        for i in 0..a {
            let mut e = vec![0; n];
            e[i] = 1;
            rays.push(e);
        }
        let mut second = vec![0; n];
        second[a..].iter_mut().for_each(|x| *x = -1);
        rays.push(second);
        for i in 0..b {
            let mut e = vec![0; n];
            e[a + i] = 1;
            rays.push(e);
        }
        let mut cones = Vec::new();
        for s in 0..m {
            for t in 0..p {
                let cone: Vec<usize> = (0..m)
                    .filter(|&i| i != s)
                    .chain((0..p).filter(|&j| j != t).map(|j| m + j))
                    .collect();
                cones.push(cone);
            }
        }
        Fan::complete(rays, cones).expect("product of projective spaces")
    }

    /// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (-1,a), (0,-1)`.
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::complete(
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .expect("Hirzebruch fan")
    }

    /// Weighted projective plane with ray degrees `(1, 2, 1)`:
    /// rays `(1,0), (0,1), (-1,-2)`.
    pub fn weighted_1_2_1() -> Fan {
        Fan::complete(
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .expect("weighted projective plane")
    }
}

/// Lexicographic `k`-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn p1_fan_flags() {
        let fan = Fan::new(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        assert!(fan.is_complete() && fan.is_simplicial() && fan.is_smooth());
    }

    #[test]
    fn p2_fan_smooth() {
        let fan = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        assert!(fan.is_complete() && fan.is_smooth());
    }

    #[test]
    fn weighted_fan_not_smooth() {
        let fan = weighted_1_2_1();
        assert!(fan.is_complete() && fan.is_simplicial() && !fan.is_smooth());
        assert_eq!(fan.det_n(&[1, 2]).unwrap().abs(), 1);
        assert_eq!(fan.det_n(&[0, 2]).unwrap().abs(), 2);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            Fan::new(vec![vec![2, 0]], vec![vec![0]]),
            Err(FanError::Malformed(_))
        ));
        assert!(matches!(
            Fan::new(vec![vec![1, 0]], vec![]),
            Err(FanError::Malformed(_))
        ));
        assert!(matches!(
            Fan::new(vec![vec![1, 0]], vec![vec![3]]),
            Err(FanError::Malformed(_))
        ));
        assert!(matches!(
            Fan::new(vec![vec![0, 0]], vec![vec![0]]),
            Err(FanError::Malformed(_))
        ));
    }

    #[test]
    fn incomplete_fan_reported_separately() {
        // the positive quadrant alone
        let err = Fan::complete(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]).unwrap_err();
        assert!(matches!(err, FanError::Incomplete(_)));
        // P2 missing one cone
        let fan = Fan::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        assert!(!fan.is_complete());
        assert!(matches!(fan.class_group(), Err(FanError::Incomplete(_))));
    }

    #[test]
    fn cube_face_fan_is_complete_but_not_simplicial() {
        // cones over the six faces of the cube [-1,1]^3
        let mut rays = Vec::new();
        for x in [-1, 1] {
            for y in [-1, 1] {
                for z in [-1, 1] {
                    rays.push(vec![x, y, z]);
                }
            }
        }
        let cones: Vec<Vec<usize>> = (0..3)
            .flat_map(|axis| [-1, 1].map(|s| (axis, s)))
            .map(|(axis, s)| (0..8).filter(|&i| rays[i][axis] == s).collect())
            .collect();
        let fan = Fan::new(rays, cones).unwrap();
        assert!(fan.is_complete());
        assert!(!fan.is_simplicial());
        let cg = fan.class_group().unwrap();
        assert_eq!(cg.free_rank, 5);
    }

    #[test]
    fn class_group_examples() {
        let fan = p1_times_p1();
        let cg = fan.class_group().unwrap();
        assert_eq!(cg.free_rank, 2);
        assert!(cg.torsion_invariants.is_empty());
        assert_eq!(fan.degree_of(&[2, 0, 2, 0]).unwrap().free, vec![2, 2]);
        assert_eq!(fan.degree_of(&[1, 2, 3, 4]).unwrap().free, vec![3, 7]);

        let fan = projective_space(2);
        assert_eq!(fan.class_group().unwrap().free_rank, 1);
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = 1;
            assert_eq!(fan.degree_of(&e).unwrap().free, vec![1]);
        }
        assert_eq!(fan.degree_of(&[1, 1, 1]).unwrap(), fan.beta0().unwrap());
        assert_eq!(fan.beta0().unwrap().free, vec![3]);

        let fan = weighted_1_2_1();
        let degs: Vec<i64> = (0..3)
            .map(|i| {
                let mut e = vec![0; 3];
                e[i] = 1;
                fan.degree_of(&e).unwrap().free[0]
            })
            .collect();
        assert_eq!(degs, vec![1, 2, 1]);
    }

    #[test]
    fn torsion_class_group() {
        // P2 / (Z/3): rays (1,0),(0,1),(-1,-1) scaled lattice -> use rays
        // (2,-1),(-1,2),(-1,-1); class group Z + Z/3
        let fan = Fan::complete(
            vec![vec![2, -1], vec![-1, 2], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let cg = fan.class_group().unwrap();
        assert_eq!(cg.free_rank, 1);
        assert_eq!(cg.torsion_invariants, vec![3]);
        // images of M are zero
        for m in [[1i64, 0], [0, 1]] {
            let a: Vec<i64> = fan.rays().iter().map(|r| dot(&m, r)).collect();
            assert!(fan.degree_of(&a).unwrap().is_zero());
        }
        // but a single ray divisor is not
        assert!(!fan.degree_of(&[1, 0, 0]).unwrap().is_zero());
    }

    #[test]
    fn zero_exponents_give_zero_class() {
        for fan in [p1_times_p1(), hirzebruch(1), weighted_1_2_1()] {
            assert!(fan.degree_of(&vec![0; fan.num_rays()]).unwrap().is_zero());
        }
        assert!(matches!(
            p1_times_p1().degree_of(&[1, 2]),
            Err(FanError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn det_n_examples() {
        let fan = p1_times_p1();
        assert_eq!(fan.det_n(&[0, 2]).unwrap(), 1);
        assert_eq!(fan.det_n(&[0, 1]).unwrap(), 0);
        assert_eq!(fan.det_n(&[2, 0]).unwrap(), -1);
        let p2 = Fan::complete(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(p2.det_n(&[1, 2]).unwrap(), 1);
        assert!(matches!(p2.det_n(&[1]), Err(FanError::SubsetSize { .. })));
    }

    #[test]
    fn euler_bases() {
        let b = |fan: &Fan| -> Vec<Vec<Rational>> {
            fan.euler_basis().unwrap().into_iter().map(|t| t.b).collect()
        };
        let r = |v: &[i64]| v.iter().map(|&x| rat(x)).collect::<Vec<_>>();
        let p1 = Fan::complete(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(b(&p1), vec![r(&[1, 1])]);
        assert_eq!(b(&p1_times_p1()), vec![r(&[1, 1, 0, 0]), r(&[0, 0, 1, 1])]);
        assert_eq!(b(&projective_space(2)), vec![r(&[1, 1, 1])]);
        for fan in [hirzebruch(1), weighted_1_2_1(), projective_space(3)] {
            for t in fan.euler_basis().unwrap() {
                assert!(t.is_relation_of(&fan));
            }
        }
    }

    #[test]
    fn euler_pairing_examples() {
        let fan = projective_space(2);
        let theta = &fan.euler_basis().unwrap()[0];
        let beta = fan.degree_of(&[5, 0, 0]).unwrap();
        assert_eq!(euler_pairing(theta, &beta), rat(5));
        let fan = p1_times_p1();
        let theta = &fan.euler_basis().unwrap()[0];
        assert_eq!(euler_pairing(theta, &fan.degree_of(&[2, 0, 2, 0]).unwrap()), rat(2));
        assert_eq!(euler_pairing(theta, &fan.degree_of(&[0; 4]).unwrap()), rat(0));
    }

    #[test]
    fn exact_sequence_p1() {
        let fan = projective_space(1);
        let es = fan.exact_sequence_determinant().unwrap();
        assert_eq!(es.entries.len(), 2);
        assert!(es.c == rat(1) || es.c == rat(-1));
        for e in &es.entries {
            assert_eq!(e.det_b, rat(1));
        }
    }

    #[test]
    fn exact_sequence_dependent_subsets_vanish() {
        let fan = p1_times_p1();
        let es = fan.exact_sequence_determinant().unwrap();
        assert_eq!(es.entries.len(), 6);
        for e in &es.entries {
            assert_eq!(e.det_n == 0, e.det_b == rat(0), "{:?}", e.subset);
        }
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets(2, 3).is_empty());
    }
}
