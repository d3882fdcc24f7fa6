//! One function per subcommand, each producing a serializable report.

use clap::ValueEnum;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use torres_core::differentials::toric_jacobian;
use torres_core::linalg::Rational;
use torres_core::numeric::{residue_integral, SamplerConfig};
use torres_core::polytopes::{is_ample, is_cartier, monomial_basis, polytope_of_divisor, TorusDivisor};
use torres_core::residue::{check_condition3, is_nondegenerate, quotient_dimension, ResidueSolver};

use crate::error::CliError;
use crate::job::{fan_error, Job};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Class group, distinguished degrees, ampleness and graded-piece sizes.
    Info,
    /// Toric Jacobian of the f-sequence.
    Jacobian,
    /// Exact residue certificate of g (defaults to the Jacobian).
    Residue,
    /// Common-zero test and dimension of the critical quotient.
    Check,
    /// Nondegeneracy verdict for `section`.
    Nondeg,
    /// Normalized volume of the polytope of beta.
    Volume,
    /// Monte Carlo estimate of the residue integral.
    Numeric,
}

/// Flag values that override the job's sampler block.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub chart: Option<usize>,
    pub cofactors: bool,
}

fn q(r: &Rational) -> String {
    r.to_string()
}

pub fn run(command: Command, job: &Job, flags: &Overrides) -> Result<Value, CliError> {
    match command {
        Command::Info => info(job),
        Command::Jacobian => jacobian(job),
        Command::Residue => residue(job, flags.cofactors),
        Command::Check => check(job),
        Command::Nondeg => nondeg(job),
        Command::Volume => volume(job),
        Command::Numeric => numeric(job, flags),
    }
}

#[derive(Serialize)]
struct ClassGroupReport {
    free_rank: usize,
    torsion: Vec<i64>,
}

#[derive(Serialize)]
struct InfoReport {
    rank: usize,
    rays: usize,
    complete: bool,
    simplicial: bool,
    smooth: bool,
    class_group: ClassGroupReport,
    beta: String,
    beta0: String,
    rho: String,
    cartier: bool,
    ample: bool,
    dim_s_beta: usize,
    dim_s_rho: usize,
}

fn info(job: &Job) -> Result<Value, CliError> {
    let fan = &job.fan;
    let cg = fan.class_group().map_err(fan_error)?;
    let beta = job.beta()?;
    let rho = fan.critical_degree(&beta).map_err(fan_error)?;
    let divisor = TorusDivisor::new(job.beta_coefficients()?.to_vec());
    let report = InfoReport {
        rank: fan.rank(),
        rays: fan.num_rays(),
        complete: fan.is_complete(),
        simplicial: fan.is_simplicial(),
        smooth: fan.is_smooth(),
        class_group: ClassGroupReport {
            free_rank: cg.free_rank,
            torsion: cg.torsion_invariants.clone(),
        },
        beta: beta.to_string(),
        beta0: fan.beta0().map_err(fan_error)?.to_string(),
        rho: rho.to_string(),
        cartier: is_cartier(fan, &divisor)?,
        ample: is_ample(fan, &divisor)?,
        dim_s_beta: monomial_basis(fan, &beta)?.len(),
        dim_s_rho: monomial_basis(fan, &rho)?.len(),
    };
    Ok(serde_json::to_value(report).expect("report serializes"))
}

fn jacobian(job: &Job) -> Result<Value, CliError> {
    let result = toric_jacobian(&job.fan, &job.f_sequence()?)?;
    Ok(json!({
        "jacobian": job.render(&result.j),
        "degree": result.degree.to_string(),
    }))
}

#[derive(Serialize)]
struct ResidueReport {
    residue: String,
    #[serde(rename = "deg_F")]
    deg_f: Value,
    c: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    cofactors: Option<Vec<String>>,
}

fn rational_value(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(n) = r.to_integer().to_i64() {
            return json!(n);
        }
    }
    json!(q(r))
}

fn residue(job: &Job, with_cofactors: bool) -> Result<Value, CliError> {
    let solver = ResidueSolver::new(&job.fan, &job.beta()?, &job.f_sequence()?)?;
    let g = job.numerator().unwrap_or_else(|| solver.jacobian.j.clone());
    let cert = solver.residue(&g)?;
    let report = ResidueReport {
        residue: q(&cert.residue_value),
        deg_f: rational_value(&cert.deg_f),
        c: q(&cert.c),
        cofactors: with_cofactors.then(|| cert.cofactors.iter().map(|h| job.render(h)).collect()),
    };
    Ok(serde_json::to_value(report).expect("report serializes"))
}

fn check(job: &Job) -> Result<Value, CliError> {
    let fan = &job.fan;
    let beta = job.beta()?;
    let f = job.f_sequence()?;
    let rho = fan.critical_degree(&beta).map_err(fan_error)?;
    Ok(json!({
        "no_common_zero": check_condition3(fan, &beta, &f)?,
        "critical_degree": rho.to_string(),
        "quotient_dimension": quotient_dimension(fan, &beta, &f, &rho)?,
    }))
}

fn nondeg(job: &Job) -> Result<Value, CliError> {
    let report = is_nondegenerate(&job.fan, &job.beta()?, &job.section()?)?;
    Ok(json!({
        "nondegenerate": report.nondegenerate,
        "generation_agrees": report.generation_agrees,
    }))
}

fn volume(job: &Job) -> Result<Value, CliError> {
    let p = polytope_of_divisor(&job.fan, &TorusDivisor::new(job.beta_coefficients()?.to_vec()))?;
    Ok(json!({
        "normalized_volume": q(&p.normalized_volume),
        "dimension": p.dimension,
        "lattice_points": p.lattice_points.len(),
    }))
}

fn numeric(job: &Job, flags: &Overrides) -> Result<Value, CliError> {
    let defaults = SamplerConfig::default();
    let config = SamplerConfig {
        sample_count: flags.samples.or(job.sampler.samples).unwrap_or(defaults.sample_count),
        seed: flags.seed.or(job.sampler.seed).unwrap_or(defaults.seed),
        chart: flags.chart.or(job.sampler.chart).unwrap_or(defaults.chart),
    };
    let f = job.f_sequence()?;
    let g = match job.numerator() {
        Some(g) => g,
        None => toric_jacobian(&job.fan, &f)?.j,
    };
    let estimate = residue_integral(&job.fan, &job.beta()?, &f, &g, &config)?;
    Ok(json!({
        "value": {"re": estimate.value.re, "im": estimate.value.im},
        "std_error": estimate.std_error,
        "samples": estimate.samples_used,
        "seed": config.seed,
        "chart": config.chart,
    }))
}
