//! Polytopes of torus-invariant divisors.
//!
//! For `D = sum a_rho D_rho` the polytope is `{m : <m, n_rho> >= -a_rho}`.
//! Its lattice points index the monomials of the graded piece `S_[D]`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{subsets, DegreeClass, Fan, FanError};
use crate::linalg::{self, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("divisor has {got} coefficients, fan has {expected} rays")]
    LengthMismatch { expected: usize, got: usize },
}

/// `sum a_rho D_rho`, coefficients indexed by the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusDivisor {
    pub a: Vec<i64>,
}

impl TorusDivisor {
    pub fn new(a: Vec<i64>) -> Self {
        TorusDivisor { a }
    }

    pub fn scaled(&self, k: i64) -> Self {
        TorusDivisor {
            a: self.a.iter().map(|x| k * x).collect(),
        }
    }
}

impl From<&DegreeClass> for TorusDivisor {
    fn from(c: &DegreeClass) -> Self {
        TorusDivisor::new(c.representative.clone())
    }
}

/// `{m in R^n : <m, n_rho> >= -a_rho}` with its lattice points.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    pub normals: Vec<Vec<i64>>,
    pub offsets: Vec<i64>,
    /// Vertices in lexicographic order; they need not be lattice points.
    pub vertices: Vec<Vec<Rational>>,
    /// Lattice points in lexicographic order.
    pub lattice_points: Vec<Vec<i64>>,
    /// Affine dimension, `None` for the empty polytope.
    pub dimension: Option<usize>,
    /// `n!` times the Euclidean volume. Integral for lattice polytopes.
    pub normalized_volume: Rational,
}

impl LatticePolytope {
    pub fn contains(&self, m: &[i64]) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(n, a)| dot(n, m) >= -a)
    }

    pub fn is_empty(&self) -> bool {
        self.dimension.is_none()
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn rat_dot(n: &[i64], m: &[Rational]) -> Rational {
    n.iter()
        .zip(m)
        .fold(Rational::zero(), |acc, (&x, y)| acc + rat(x) * y)
}

/// Solves `<m, n_rho> = -a_rho` for the rays in `rows`; `None` if the rays
/// do not determine a unique point or the system is inconsistent.
fn solve_tight(normals: &[Vec<i64>], offsets: &[i64], rows: &[usize], n: usize) -> Option<Vec<Rational>> {
    let columns: Vec<Vec<Rational>> = (0..n)
        .map(|j| rows.iter().map(|&r| rat(normals[r][j])).collect())
        .collect();
    let b: Vec<Rational> = rows.iter().map(|&r| rat(-offsets[r])).collect();
    let sol = linalg::solve_columns(&columns, &b)?;
    (sol.pivots.len() == n).then_some(sol.x)
}

fn affine_dimension(points: &[&Vec<Rational>]) -> usize {
    let Some((first, rest)) = points.split_first() else {
        return 0;
    };
    let diffs: Vec<Vec<Rational>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(x, y)| x - y).collect())
        .collect();
    linalg::rank(&diffs, first.len())
}

struct Faces<'a> {
    vertices: &'a [Vec<Rational>],
    /// `tight[v]` = inequalities that are equalities at vertex `v`.
    tight: Vec<BTreeSet<usize>>,
    num_inequalities: usize,
}

impl Faces<'_> {
    fn dim(&self, face: &[usize]) -> usize {
        let pts: Vec<&Vec<Rational>> = face.iter().map(|&v| &self.vertices[v]).collect();
        affine_dimension(&pts)
    }

    /// Facets of a face of dimension `k >= 1`, as vertex sets.
    fn facets(&self, face: &[usize], k: usize) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for r in 0..self.num_inequalities {
            let sub: Vec<usize> = face
                .iter()
                .copied()
                .filter(|&v| self.tight[v].contains(&r))
                .collect();
            if sub.len() < face.len() && !sub.is_empty() && self.dim(&sub) + 1 == k {
                out.insert(sub);
            }
        }
        out.into_iter().collect()
    }

    /// Pulling triangulation: cone from the lexicographically least vertex
    /// over the facets that do not contain it.
    fn triangulate(&self, face: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
        let apex = face[0];
        if k == 0 {
            out.push(vec![apex]);
            return;
        }
        for facet in self.facets(face, k) {
            if facet.contains(&apex) {
                continue;
            }
            let mut sub = Vec::new();
            self.triangulate(&facet, k - 1, &mut sub);
            for mut s in sub {
                s.insert(0, apex);
                out.push(s);
            }
        }
    }
}

fn simplex_volume(vertices: &[Vec<Rational>], simplex: &[usize]) -> Rational {
    let v0 = &vertices[simplex[0]];
    let m: Vec<Vec<Rational>> = simplex[1..]
        .iter()
        .map(|&i| vertices[i].iter().zip(v0).map(|(x, y)| x - y).collect())
        .collect();
    linalg::det(&m).abs()
}

fn floor_i64(x: &Rational) -> i64 {
    x.floor().to_integer().to_i64().expect("coordinate fits in i64")
}

fn ceil_i64(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("coordinate fits in i64")
}

fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(lo.len())];
    for (&l, &h) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (l..=h).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// The polytope `P_D` of a torus-invariant divisor on a complete fan.
pub fn polytope_of_divisor(fan: &Fan, d: &TorusDivisor) -> Result<LatticePolytope, PolytopeError> {
    fan.require_complete()?;
    let n = fan.rank();
    if d.a.len() != fan.num_rays() {
        return Err(PolytopeError::LengthMismatch {
            expected: fan.num_rays(),
            got: d.a.len(),
        });
    }
    let normals = fan.rays().to_vec();
    let offsets = d.a.clone();
    let mut vertices: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for rows in subsets(normals.len(), n) {
        if let Some(m) = solve_tight(&normals, &offsets, &rows, n) {
            let feasible = normals
                .iter()
                .zip(&offsets)
                .all(|(nr, a)| rat_dot(nr, &m) >= rat(-a));
            if feasible {
                vertices.insert(m);
            }
        }
    }
    let vertices: Vec<Vec<Rational>> = vertices.into_iter().collect();
    let mut poly = LatticePolytope {
        normals,
        offsets,
        vertices,
        lattice_points: Vec::new(),
        dimension: None,
        normalized_volume: Rational::zero(),
    };
    if poly.vertices.is_empty() {
        return Ok(poly);
    }
    // A complete fan gives a bounded region, so the vertices span it; the
    // box scan below relies on that.
    let lo: Vec<i64> = (0..n)
        .map(|j| poly.vertices.iter().map(|v| ceil_i64(&v[j])).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|j| poly.vertices.iter().map(|v| floor_i64(&v[j])).max().unwrap())
        .collect();
    if lo.iter().zip(&hi).all(|(l, h)| l <= h) {
        poly.lattice_points = box_points(&lo, &hi)
            .into_iter()
            .filter(|m| poly.contains(m))
            .collect();
    }
    let all: Vec<&Vec<Rational>> = poly.vertices.iter().collect();
    let dim = affine_dimension(&all);
    poly.dimension = Some(dim);
    if dim == n {
        let faces = Faces {
            vertices: &poly.vertices,
            tight: poly
                .vertices
                .iter()
                .map(|v| {
                    (0..poly.normals.len())
                        .filter(|&r| rat_dot(&poly.normals[r], v) == rat(-poly.offsets[r]))
                        .collect()
                })
                .collect(),
            num_inequalities: poly.normals.len(),
        };
        let mut simplices = Vec::new();
        let face: Vec<usize> = (0..poly.vertices.len()).collect();
        faces.triangulate(&face, n, &mut simplices);
        poly.normalized_volume = simplices
            .iter()
            .map(|s| simplex_volume(&poly.vertices, s))
            .fold(Rational::zero(), |acc, v| acc + v);
    }
    Ok(poly)
}

/// Exponent vectors `(<m, n_rho> + a_rho)_rho` of the monomials spanning
/// `S_alpha`, for the lattice points `m` of `P_a`, in lexicographic order.
pub fn monomial_basis(fan: &Fan, alpha: &DegreeClass) -> Result<Vec<Vec<i64>>, PolytopeError> {
    let d = TorusDivisor::from(alpha);
    let poly = polytope_of_divisor(fan, &d)?;
    let mut out: Vec<Vec<i64>> = poly
        .lattice_points
        .iter()
        .map(|m| fan.rays().iter().zip(&d.a).map(|(r, a)| dot(m, r) + a).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// Per maximal cone, the `m_sigma` with `<m_sigma, n_rho> = -a_rho` on the
/// cone's rays, if one exists in `M_Q`.
fn local_data(fan: &Fan, d: &TorusDivisor) -> Result<Vec<Option<Vec<Rational>>>, PolytopeError> {
    fan.require_complete()?;
    if d.a.len() != fan.num_rays() {
        return Err(PolytopeError::LengthMismatch {
            expected: fan.num_rays(),
            got: d.a.len(),
        });
    }
    let normals = fan.rays().to_vec();
    Ok(fan
        .max_cones()
        .iter()
        .map(|cone| solve_tight(&normals, &d.a, cone, fan.rank()))
        .collect())
}

fn is_integral(m: &[Rational]) -> bool {
    m.iter().all(|x| x.denom().is_one())
}

/// Whether `D` is Cartier: every cone has an integral `m_sigma`.
pub fn is_cartier(fan: &Fan, d: &TorusDivisor) -> Result<bool, PolytopeError> {
    Ok(local_data(fan, d)?
        .iter()
        .all(|m| m.as_deref().is_some_and(is_integral)))
}

/// Whether `D` is ample: Cartier, and `<m_sigma, n_rho> > -a_rho` for every
/// ray outside each maximal cone.
pub fn is_ample(fan: &Fan, d: &TorusDivisor) -> Result<bool, PolytopeError> {
    let data = local_data(fan, d)?;
    for (cone, m) in fan.max_cones().iter().zip(&data) {
        let Some(m) = m.as_deref().filter(|m| is_integral(m)) else {
            return Ok(false);
        };
        for (r, (nr, a)) in fan.rays().iter().zip(&d.a).enumerate() {
            if !cone.contains(&r) && rat_dot(nr, m) <= rat(-a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
