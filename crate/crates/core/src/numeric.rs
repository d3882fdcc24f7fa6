//! Monte Carlo evaluation of the residue as an integral over the variety.
//!
//! On the chart of a smooth maximal cone `I` (where `x_rho = 1` for
//! `rho` outside `I`) the residue of `g Omega / (f_0 ... f_n)` equals
//!
//! ```text
//!   (-1)^{n(n-1)/2} n! / (2 pi i)^n  *  int  g conj(D) det(n_I) dubar ^ du / (sum |f_i|^2)^{n+1}
//! ```
//!
//! where `D = det [f_j ; df_j/du_k]` and `dubar ^ du = (-1)^{n(n-1)/2} (2i)^n dA`.
//! Each complex coordinate is sampled as `u = tan(theta) e^{i phi}`, which
//! maps `[0, pi/2) x [0, 2 pi)` onto `C` with `dA = tan(theta) sec^2(theta)
//! dtheta dphi`.
//!
//! Samples are split into fixed-size chunks; chunk `k` draws from stream `k`
//! of a ChaCha generator seeded with the configured seed, so estimates are
//! reproducible bit for bit regardless of the thread count.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::coxring::{dehomogenize, ChartError, ChartPolynomial, Polynomial};
use crate::lattice::{DegreeClass, Fan, FanError};
use crate::residue::{check_condition3, ResidueError};

/// Samples per parallel work unit.
pub const CHUNK: usize = 4096;
/// Minimum sample count for a reported estimate.
pub const MIN_SAMPLES: usize = 1000;
/// Points with some `|u_k|` beyond this radius are dropped; the integrand
/// decays at least like `|u|^{-4}` there, so the lost mass is below 1e-12.
pub const RADIUS_CUTOFF: f64 = 1e6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("numeric integration needs a smooth simplicial fan")]
    NotSmooth,
    #[error("numeric integration supports dimension 1 or 2, got {0}")]
    Dimension(usize),
    #[error("chart {chart} is out of range ({count} maximal cones)")]
    ChartOutOfRange { chart: usize, count: usize },
    #[error("at least {MIN_SAMPLES} samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("the sections share a zero on the toric variety (they must not vanish simultaneously)")]
    CommonZero,
    #[error("numerator must have the critical degree {0}")]
    NumeratorDegree(String),
    #[error("integrand is singular at a sample point (sections vanish simultaneously)")]
    Singular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub sample_count: usize,
    pub seed: u64,
    /// Index into the fan's maximal cones.
    pub chart: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            sample_count: 1_000_000,
            seed: 0x5eed,
            chart: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralEstimate {
    pub value: Complex64,
    pub std_error: f64,
    pub samples_used: usize,
}

impl IntegralEstimate {
    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, target: Complex64, k: f64) -> bool {
        (self.value - target).norm() <= k * self.std_error
    }
}

#[derive(Clone, Copy, Default)]
struct Moments {
    re: f64,
    im: f64,
    re2: f64,
    im2: f64,
}

impl Moments {
    fn push(&mut self, z: Complex64) {
        self.re += z.re;
        self.im += z.im;
        self.re2 += z.re * z.re;
        self.im2 += z.im * z.im;
    }

    fn merge(self, o: Moments) -> Moments {
        Moments {
            re: self.re + o.re,
            im: self.im + o.im,
            re2: self.re2 + o.re2,
            im2: self.im2 + o.im2,
        }
    }
}

/// Integrates `h` over `C^n` in the compactifying coordinates and returns
/// `scale * integral`. `h` returns `None` at singular points.
fn integrate<F>(n: usize, config: &SamplerConfig, scale: Complex64, h: F) -> Result<IntegralEstimate, NumericError>
where
    F: Fn(&[Complex64]) -> Option<Complex64> + Sync,
{
    if config.sample_count < MIN_SAMPLES {
        return Err(NumericError::TooFewSamples(config.sample_count));
    }
    let total = config.sample_count;
    let chunks = total.div_ceil(CHUNK);
    let per_chunk: Vec<Option<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(chunk as u64);
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut acc = Moments::default();
            let mut u = vec![Complex64::new(0.0, 0.0); n];
            for index in start..end {
                let mut weight = 1.0;
                let mut inside = true;
                for (k, uk) in u.iter_mut().enumerate() {
                    // first angle is stratified over the global sample index
                    let theta = if k == 0 {
                        FRAC_PI_2 * (index as f64 + rng.gen::<f64>()) / total as f64
                    } else {
                        FRAC_PI_2 * rng.gen::<f64>()
                    };
                    let phi = 2.0 * PI * rng.gen::<f64>();
                    let r = theta.tan();
                    let c = theta.cos();
                    weight *= r / (c * c);
                    inside &= r <= RADIUS_CUTOFF;
                    *uk = Complex64::from_polar(r, phi);
                }
                if !inside {
                    acc.push(Complex64::new(0.0, 0.0));
                    continue;
                }
                let value = h(&u)? * weight;
                if !value.re.is_finite() || !value.im.is_finite() {
                    return None;
                }
                acc.push(value);
            }
            Some(acc)
        })
        .collect();
    let mut sum = Moments::default();
    for m in per_chunk {
        sum = sum.merge(m.ok_or(NumericError::Singular)?);
    }
    let count = total as f64;
    let volume = PI.powi(2 * n as i32);
    let mean = Complex64::new(sum.re / count, sum.im / count);
    let var_re = (sum.re2 / count - mean.re * mean.re).max(0.0);
    let var_im = (sum.im2 / count - mean.im * mean.im).max(0.0);
    let factor = scale * volume;
    Ok(IntegralEstimate {
        value: mean * factor,
        std_error: ((var_re + var_im) / count).sqrt() * factor.norm(),
        samples_used: total,
    })
}

fn complex_det(m: &mut [Vec<Complex64>]) -> Complex64 {
    let k = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..k {
        let p = (c..k)
            .max_by(|&a, &b| m[a][c].norm().total_cmp(&m[b][c].norm()))
            .expect("non-empty");
        if m[p][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..k {
            let f = m[r][c] / m[c][c];
            for j in c..k {
                let v = m[c][j];
                m[r][j] -= f * v;
            }
        }
    }
    det
}

fn sign(e: usize) -> f64 {
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_dimension(n: usize) -> Result<(), NumericError> {
    if n == 0 || n > 2 {
        return Err(NumericError::Dimension(n));
    }
    Ok(())
}

/// Monte Carlo estimate of `res(g Omega / (f_0 ... f_n))` over one chart.
pub fn residue_integral(
    fan: &Fan,
    beta: &DegreeClass,
    f_seq: &[Polynomial],
    g: &Polynomial,
    config: &SamplerConfig,
) -> Result<IntegralEstimate, NumericError> {
    let n = fan.rank();
    check_dimension(n)?;
    if !fan.is_smooth() {
        return Err(NumericError::NotSmooth);
    }
    let cones = fan.max_cones();
    let chart = cones.get(config.chart).ok_or(NumericError::ChartOutOfRange {
        chart: config.chart,
        count: cones.len(),
    })?;
    if !check_condition3(fan, beta, f_seq)? {
        return Err(NumericError::CommonZero);
    }
    let rho = fan.critical_degree(beta)?;
    if !g.is_zero() && g.homogeneous_degree(fan)?.as_ref() != Some(&rho) {
        return Err(NumericError::NumeratorDegree(rho.to_string()));
    }
    let det_n = fan.det_n(chart)? as f64;
    let fs: Vec<ChartPolynomial> = f_seq
        .iter()
        .map(|f| dehomogenize(fan, f, chart))
        .collect::<Result<_, _>>()?;
    let dfs: Vec<Vec<ChartPolynomial>> = (0..n)
        .map(|k| fs.iter().map(|f| f.partial(k)).collect())
        .collect();
    let gc = dehomogenize(fan, g, chart)?;

    let i_n = Complex64::new(0.0, 1.0).powu(n as u32);
    let orientation = sign(n * (n - 1) / 2);
    // (-1)^{n(n-1)/2} n!/(2 pi i)^n * (-1)^{n(n-1)/2} (2i)^n det(n_I)
    let scale = Complex64::new(orientation * factorial(n), 0.0) / (i_n * (2.0 * PI).powi(n as i32))
        * (i_n * 2f64.powi(n as i32) * orientation * det_n);
    let power = n as i32 + 1;
    integrate(n, config, scale, |u| {
        let fv: Vec<Complex64> = fs.iter().map(|f| f.eval(u)).collect();
        let norm: f64 = fv.iter().map(|z| z.norm_sqr()).sum();
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        let mut m = vec![fv];
        for row in &dfs {
            m.push(row.iter().map(|f| f.eval(u)).collect());
        }
        let d = complex_det(&mut m);
        Some(gc.eval(u) * d.conj() / norm.powi(power))
    })
}

/// Monte Carlo estimate of `(-1/(2 pi i))^n int_{P^n} eta_1`, where
/// `eta_1 = (-1)^{n(n+1)/2} n! conj(Omega) ^ Omega / |x|^{2(n+1)}`; the
/// exact value is 1.
pub fn appendix_normalization(n: usize, config: &SamplerConfig) -> Result<IntegralEstimate, NumericError> {
    check_dimension(n)?;
    let i_n = Complex64::new(0.0, 1.0).powu(n as u32);
    let prefactor = Complex64::new(sign(n), 0.0) / (i_n * (2.0 * PI).powi(n as i32));
    let scale = prefactor
        * sign(n * (n + 1) / 2)
        * factorial(n)
        * (i_n * 2f64.powi(n as i32) * sign(n * (n - 1) / 2));
    let power = n as i32 + 1;
    integrate(n, config, scale, |u| {
        let r2: f64 = 1.0 + u.iter().map(|z| z.norm_sqr()).sum::<f64>();
        Some(Complex64::new(1.0 / r2.powi(power), 0.0))
    })
}

/// Composite Simpson value of `int_C dA / (1 + |u|^2)^2` (exactly `pi`)
/// in the coordinates `u = tan(theta) e^{i phi}`.
pub fn chart_integral_quadrature(panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = FRAC_PI_2 / panels as f64;
    // tan sec^2 / sec^4 = sin cos
    let f = |t: f64| t.sin() * t.cos();
    let mut s = f(0.0) + f(FRAC_PI_2);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(k as f64 * h);
    }
    2.0 * PI * s * h / 3.0
}
