//! Dense integer matrices: determinants, Smith and Hermite normal forms.
//!
//! Matrices are small (at most a few dozen rows), so entries are `i64` and
//! intermediate products go through `i128`. Overflow panics instead of
//! wrapping.

pub type IntMatrix = Vec<Vec<i64>>;

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer matrix entry overflowed i64")
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    assert!(m.iter().all(|r| r.len() == n), "det of a non-square matrix");
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    narrow(sign * a[n - 1][n - 1])
}

pub fn transpose(m: &[Vec<i64>], cols: usize) -> IntMatrix {
    (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|r| narrow(r.iter().zip(v).map(|(&a, &b)| a as i128 * b as i128).sum()))
        .collect()
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a as i128, b as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (old_r, old_s, old_t) = (-old_r, -old_s, -old_t);
    }
    (narrow(old_r), narrow(old_s), narrow(old_t))
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0, |g, &x| num_integer::gcd(g, x))
}

/// Smith normal form `U * A * V = D` of an `rows x cols` matrix.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Unimodular row transform `U`.
    pub left: IntMatrix,
    /// Unimodular column transform `V`.
    pub right: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub invariant_factors: Vec<i64>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

// Row/column operations applied to the working matrix and the transforms.
struct Smith {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl Smith {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut().chain(self.v.iter_mut()) {
            r.swap(i, j);
        }
    }

    /// rows (i, j) <- (s*ri + t*rj, p*ri + q*rj)
    fn combine_rows(&mut self, i: usize, j: usize, [s, t, p, q]: [i64; 4]) {
        for m in [&mut self.a, &mut self.u] {
            for c in 0..m[i].len() {
                let (x, y) = (m[i][c] as i128, m[j][c] as i128);
                m[i][c] = narrow(s as i128 * x + t as i128 * y);
                m[j][c] = narrow(p as i128 * x + q as i128 * y);
            }
        }
    }

    fn combine_cols(&mut self, i: usize, j: usize, [s, t, p, q]: [i64; 4]) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let (x, y) = (r[i] as i128, r[j] as i128);
                r[i] = narrow(s as i128 * x + t as i128 * y);
                r[j] = narrow(p as i128 * x + q as i128 * y);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Unimodular 2x2 transform taking `(a, b)` to `(gcd, 0)`; keeps `a` in
/// place when it already divides `b`.
fn elimination(a: i64, b: i64) -> [i64; 4] {
    if b % a == 0 {
        return [1, 0, -(b / a), 1];
    }
    let (g, s, t) = ext_gcd(a, b);
    [s, t, -b / g, a / g]
}

pub fn smith_normal_form(m: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = m.len();
    let mut w = Smith {
        a: m.to_vec(),
        u: identity(rows),
        v: identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the trailing block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| w.a[i][j] != 0)
            .min_by_key(|&(i, j)| w.a[i][j].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t] != 0 {
                    let (a, b) = (w.a[t][t], w.a[i][t]);
                    w.combine_rows(t, i, elimination(a, b));
                }
            }
            for j in t + 1..cols {
                if w.a[t][j] != 0 {
                    let (a, b) = (w.a[t][t], w.a[t][j]);
                    w.combine_cols(t, j, elimination(a, b));
                    dirty = true;
                }
            }
            if dirty && (t + 1..rows).any(|i| w.a[i][t] != 0) {
                continue;
            }
            // divisibility: fold a non-divisible entry into row t and retry
            let d = w.a[t][t];
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| w.a[i][j] % d != 0);
            match bad {
                Some((i, _)) => w.combine_rows(t, i, [1, 1, 0, 1]),
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..t).map(|i| w.a[i][i]).collect();
    SmithForm {
        left: w.u,
        right: w.v,
        invariant_factors,
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result is in echelon form with positive pivots and every entry above
/// a pivot reduced into `[0, pivot)`. Zero rows are dropped, so the output is
/// a basis of the row lattice and depends only on that lattice.
pub fn hermite_normal_form(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    let mut a = rows.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (x, y) = (a[r][c], a[i][c]);
            let (g, s, t) = ext_gcd(x, y);
            let (p, q) = (-y / g, x / g);
            for k in 0..cols {
                let (u, v) = (a[r][k] as i128, a[i][k] as i128);
                a[r][k] = narrow(s as i128 * u + t as i128 * v);
                a[i][k] = narrow(p as i128 * u + q as i128 * v);
            }
        }
        if a[r][c] == 0 {
            continue;
        }
        if a[r][c] < 0 {
            a[r].iter_mut().for_each(|x| *x = -*x);
        }
        let p = a[r][c];
        for i in 0..r {
            let q = a[i][c].div_euclid(p);
            if q != 0 {
                for k in 0..cols {
                    a[i][k] = narrow(a[i][k] as i128 - q as i128 * a[r][k] as i128);
                }
            }
        }
        r += 1;
    }
    a.truncate(r);
    a
}

/// Basis (Hermite form) of the integer left kernel `{y : y^T A = 0}` of an
/// `rows x cols` matrix. The kernel lattice is saturated.
pub fn left_kernel(m: &[Vec<i64>], cols: usize) -> IntMatrix {
    let snf = smith_normal_form(m, cols);
    let kernel: IntMatrix = snf.left[snf.rank()..].to_vec();
    hermite_normal_form(&kernel, m.len())
}

/// Generalized cross product of `k = dim - 1` vectors in `Z^dim`: a vector
/// orthogonal to all of them, nonzero iff they are independent.
pub fn cross_product(vectors: &[&[i64]], dim: usize) -> Vec<i64> {
    assert_eq!(vectors.len() + 1, dim);
    (0..dim)
        .map(|j| {
            let minor: IntMatrix = vectors
                .iter()
                .map(|v| (0..dim).filter(|&c| c != j).map(|c| v[c]).collect())
                .collect();
            let d = det(&minor);
            if (j + dim + 1) % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

pub fn rank(m: &[Vec<i64>], cols: usize) -> usize {
    smith_normal_form(m, cols).rank()
}
