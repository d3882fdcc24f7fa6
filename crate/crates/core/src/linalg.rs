//! Exact linear algebra over the rationals.
//!
//! Ranks are computed by fraction-free elimination on integer rows (each row
//! is scaled to a primitive integer vector first). Before the exact pass a
//! rank modulo a 61-bit prime is tried: `rank_p <= rank_Q <= min(rows, cols)`,
//! so when the modular rank is already maximal it is the exact answer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Scales a rational row to a primitive integer row with the same span.
fn primitive_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = row
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    make_primitive(ints)
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

fn to_mod(x: &Rational) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let den = x.denom().mod_floor(&p).to_u64()?;
    if den == 0 {
        return None;
    }
    let num = x.numer().mod_floor(&p).to_u64()?;
    Some(mul_mod(num, pow_mod(den, PRIME - 2)))
}

fn rank_mod_prime(rows: &[Vec<Rational>], cols: usize) -> Option<usize> {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(to_mod).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], PRIME - 2);
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv);
        }
        let pivot = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + PRIME - mul_mod(f, y)) % PRIME;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

/// Incremental row echelon basis over the integers.
///
/// Each stored row is primitive and its leading entry sits in a column no
/// other stored row leads in; rows are kept sorted by leading column.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|(c, _)| *c).collect()
    }

    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (c, p) in &self.rows {
            if v[*c].is_zero() {
                continue;
            }
            let g = v[*c].gcd(&p[*c]);
            let a = &p[*c] / &g;
            let b = &v[*c] / &g;
            for (x, y) in v.iter_mut().zip(p) {
                *x = &*x * &a - y * &b;
            }
            v = make_primitive(v);
        }
        v
    }

    /// Reduces `row` against the basis; returns true if it was independent.
    pub fn insert(&mut self, row: &[Rational]) -> bool {
        let v = self.reduce(primitive_row(row));
        match v.iter().position(|x| !x.is_zero()) {
            Some(lead) => {
                let v = if v[lead].is_negative() {
                    v.into_iter().map(|x| -x).collect()
                } else {
                    v
                };
                let at = self.rows.partition_point(|(c, _)| *c < lead);
                self.rows.insert(at, (lead, v));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, row: &[Rational]) -> bool {
        self.reduce(primitive_row(row)).iter().all(Zero::is_zero)
    }
}

/// Exact rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    let bound = rows.len().min(cols);
    if bound == 0 {
        return 0;
    }
    if rank_mod_prime(rows, cols) == Some(bound) {
        return bound;
    }
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert(r);
        if basis.rank() == bound {
            break;
        }
    }
    basis.rank()
}

/// Solution of `A x = b` by Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Solution {
    /// One particular solution, free variables set to zero.
    pub x: Vec<Rational>,
    /// Columns of `A` that carry a pivot.
    pub pivots: Vec<usize>,
}

/// Solves `A x = b` for `A` given column-by-column (`columns[j]` has one entry
/// per row). Returns `None` when the system is inconsistent.
pub fn solve_columns(columns: &[Vec<Rational>], b: &[Rational]) -> Option<Solution> {
    let nrows = b.len();
    let ncols = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..nrows)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][ncols].clone();
    }
    Some(Solution { x, pivots })
}

/// Determinant of a square rational matrix.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        acc *= &a[c][c];
        let pivot = a[c].clone();
        for row in a.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= &f * y;
            }
        }
    }
    acc
}
