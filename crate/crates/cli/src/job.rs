//! Job documents: parsing, validation and resolution into core types.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use torres_core::coxring::Polynomial;
use torres_core::lattice::{DegreeClass, Fan, FanError};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub variable_names: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub chart: Option<usize>,
}

/// The document as written on disk.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDocument {
    pub fan: FanSpec,
    #[serde(default)]
    pub beta: Option<Vec<i64>>,
    #[serde(default)]
    pub polynomials: BTreeMap<String, String>,
    #[serde(default)]
    pub f_sequence: Option<Vec<String>>,
    #[serde(default)]
    pub section: Option<String>,
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default)]
    pub sampler: SamplerSpec,
}

/// A validated job with the fan built and every polynomial parsed.
pub struct Job {
    pub fan: Fan,
    pub names: Vec<String>,
    beta: Option<Vec<i64>>,
    polynomials: BTreeMap<String, Polynomial>,
    f_sequence: Option<Vec<String>>,
    section: Option<String>,
    g: Option<String>,
    pub sampler: SamplerSpec,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Job {
    pub fn load(path: &Path) -> Result<Job, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Malformed(format!("cannot read {}: {e}", path.display())))?;
        Job::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Job, CliError> {
        let doc: JobDocument =
            serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("invalid job document: {e}")))?;
        Job::from_document(doc)
    }

    pub fn from_document(doc: JobDocument) -> Result<Job, CliError> {
        let FanSpec {
            rays,
            max_cones,
            variable_names,
        } = doc.fan;
        if variable_names.len() != rays.len() {
            return Err(CliError::Malformed(format!(
                "fan.variable_names has {} entries but fan.rays has {}",
                variable_names.len(),
                rays.len()
            )));
        }
        for (i, name) in variable_names.iter().enumerate() {
            if !is_identifier(name) {
                return Err(CliError::Malformed(format!(
                    "fan.variable_names[{i}]: '{name}' is not an identifier"
                )));
            }
            if variable_names[..i].contains(name) {
                return Err(CliError::Malformed(format!("fan.variable_names[{i}]: duplicate name '{name}'")));
            }
        }
        let fan = Fan::new(rays, max_cones).map_err(|e| CliError::Malformed(format!("fan: {e}")))?;
        if let Some(beta) = &doc.beta {
            if beta.len() != fan.num_rays() {
                return Err(CliError::Malformed(format!(
                    "beta has {} coefficients but the fan has {} rays",
                    beta.len(),
                    fan.num_rays()
                )));
            }
        }
        let mut polynomials = BTreeMap::new();
        for (name, text) in &doc.polynomials {
            let p = Polynomial::parse(text, &variable_names)
                .map_err(|e| CliError::Malformed(format!("polynomials.{name}: {e}")))?;
            polynomials.insert(name.clone(), p);
        }
        let check_ref = |field: String, name: &String| {
            if polynomials.contains_key(name) {
                Ok(())
            } else {
                Err(CliError::Malformed(format!("{field}: unknown polynomial '{name}'")))
            }
        };
        if let Some(seq) = &doc.f_sequence {
            for (i, name) in seq.iter().enumerate() {
                check_ref(format!("f_sequence[{i}]"), name)?;
            }
        }
        if let Some(name) = &doc.section {
            check_ref("section".into(), name)?;
        }
        if let Some(name) = &doc.g {
            check_ref("g".into(), name)?;
        }
        Ok(Job {
            fan,
            names: variable_names,
            beta: doc.beta,
            polynomials,
            f_sequence: doc.f_sequence,
            section: doc.section,
            g: doc.g,
            sampler: doc.sampler,
        })
    }

    pub fn beta_coefficients(&self) -> Result<&[i64], CliError> {
        self.beta
            .as_deref()
            .ok_or_else(|| CliError::Malformed("missing field 'beta'".into()))
    }

    pub fn beta(&self) -> Result<DegreeClass, CliError> {
        let a = self.beta_coefficients()?;
        self.fan.degree_of(a).map_err(fan_error)
    }

    pub fn f_sequence(&self) -> Result<Vec<Polynomial>, CliError> {
        let seq = self
            .f_sequence
            .as_ref()
            .ok_or_else(|| CliError::Malformed("missing field 'f_sequence'".into()))?;
        Ok(seq.iter().map(|n| self.polynomials[n].clone()).collect())
    }

    pub fn section(&self) -> Result<Polynomial, CliError> {
        let name = self
            .section
            .as_ref()
            .ok_or_else(|| CliError::Malformed("missing field 'section'".into()))?;
        Ok(self.polynomials[name].clone())
    }

    /// The numerator, if the job names one.
    pub fn numerator(&self) -> Option<Polynomial> {
        self.g.as_ref().map(|n| self.polynomials[n].clone())
    }

    pub fn render(&self, p: &Polynomial) -> String {
        p.display(&self.names).to_string()
    }
}

pub fn fan_error(e: FanError) -> CliError {
    match e {
        FanError::Incomplete(_) => CliError::Precondition(e.to_string()),
        FanError::IdentityViolation { .. } => CliError::Internal(e.to_string()),
        _ => CliError::Malformed(e.to_string()),
    }
}
