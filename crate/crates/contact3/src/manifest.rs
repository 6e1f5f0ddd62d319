//! Manifold manifests: structured-text descriptions of a metric, a contact
//! form, and a chart domain, plus the properties the author expects the
//! engine to certify.
//!
//! Expected properties are claims to be *checked*, never assumed: loading a
//! manifest parses and validates every field but performs no evaluation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::contact::ContactStructure;
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::geometry::MetricField;
use crate::sample::Domain;
use crate::tol;

/// The structural property a manifest claims for its manifold.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExpectedKind {
    /// `kappa = 1`, `h = 0`.
    Sasakian,
    /// Vanishing curvature.
    Flat,
    /// Certified structure with pointwise-varying `kappa`, `mu`.
    GeneralizedKmu,
    /// Certified structure with constant `kappa`, `mu` (non-Sasakian).
    KmuConstant,
}

impl ExpectedKind {
    /// Manifest token for the kind.
    pub fn token(self) -> &'static str {
        match self {
            ExpectedKind::Sasakian => "sasakian",
            ExpectedKind::Flat => "flat",
            ExpectedKind::GeneralizedKmu => "generalized_kmu",
            ExpectedKind::KmuConstant => "kmu_constant",
        }
    }

    fn from_token(s: &str) -> Result<ExpectedKind> {
        match s {
            "sasakian" => Ok(ExpectedKind::Sasakian),
            "flat" => Ok(ExpectedKind::Flat),
            "generalized_kmu" => Ok(ExpectedKind::GeneralizedKmu),
            "kmu_constant" => Ok(ExpectedKind::KmuConstant),
            other => Err(Error::Manifest(format!(
                "unknown expected kind `{other}` (expected sasakian, flat, generalized_kmu, or kmu_constant)"
            ))),
        }
    }
}

/// Per-manifest tolerance overrides, falling back to the engine defaults.
#[derive(Copy, Clone, Debug)]
pub struct ToleranceProfile {
    /// Pointwise structure axioms.
    pub axiom: f64,
    /// Identities that rely on finite differencing.
    pub fd: f64,
    /// Curvature/Ricci closed-form reconstructions.
    pub reconstruction: f64,
    /// Pointwise scalar identities.
    pub scalar: f64,
}

impl Default for ToleranceProfile {
    fn default() -> ToleranceProfile {
        ToleranceProfile {
            axiom: tol::AXIOM,
            fd: tol::FD_IDENTITY,
            reconstruction: tol::RECONSTRUCTION,
            scalar: tol::SCALAR_IDENTITY,
        }
    }
}

/// A fully parsed and validated manifest.
#[derive(Clone, Debug)]
pub struct ManifoldManifest {
    pub name: String,
    /// Upper-triangle metric expressions `(g11, g12, g13, g22, g23, g33)`.
    pub metric_upper: [Expr; 6],
    /// Raw sources of the metric expressions, for reporting.
    pub metric_sources: [String; 6],
    /// Contact form components.
    pub eta: [Expr; 3],
    /// Raw sources of the contact form components.
    pub eta_sources: [String; 3],
    /// Chart domain.
    pub domain: Domain,
    /// Claimed structural property, to be checked.
    pub expected: Option<ExpectedKind>,
    /// Tolerance profile after applying overrides.
    pub tolerances: ToleranceProfile,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: String,
    metric: RawMetric,
    eta: RawEta,
    domain: RawDomain,
    expected: Option<RawExpected>,
    tolerances: Option<BTreeMap<String, f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetric {
    g11: String,
    g12: String,
    g13: String,
    g22: String,
    g23: String,
    g33: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEta {
    e1: String,
    e2: String,
    e3: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    x: [f64; 2],
    y: [f64; 2],
    z: [f64; 2],
    #[serde(default)]
    excluded: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    kind: String,
}

fn parse_named(src: &str, what: &str) -> Result<Expr> {
    parse(src).map_err(|e| match e {
        Error::Syntax { offset, message } => Error::Syntax {
            offset,
            message: format!("in {what}: {message}"),
        },
        Error::UnknownIdentifier { name, offset } => Error::UnknownIdentifier {
            name: format!("{name} (in {what})"),
            offset,
        },
        other => other,
    })
}

impl ManifoldManifest {
    /// Parse a manifest from manifest-format text.
    pub fn from_toml_str(text: &str) -> Result<ManifoldManifest> {
        let raw: RawManifest = toml::from_str(text)?;
        if raw.name.trim().is_empty() {
            return Err(Error::Manifest("manifest name must be nonempty".to_string()));
        }
        let metric_sources = [
            raw.metric.g11.clone(),
            raw.metric.g12.clone(),
            raw.metric.g13.clone(),
            raw.metric.g22.clone(),
            raw.metric.g23.clone(),
            raw.metric.g33.clone(),
        ];
        let labels = ["g11", "g12", "g13", "g22", "g23", "g33"];
        let mut metric_upper: Vec<Expr> = Vec::with_capacity(6);
        for (src, label) in metric_sources.iter().zip(labels) {
            metric_upper.push(parse_named(src, &format!("metric.{label}"))?);
        }
        let metric_upper: [Expr; 6] = metric_upper.try_into().expect("six components");
        let eta_sources = [raw.eta.e1.clone(), raw.eta.e2.clone(), raw.eta.e3.clone()];
        let eta = [
            parse_named(&eta_sources[0], "eta.e1")?,
            parse_named(&eta_sources[1], "eta.e2")?,
            parse_named(&eta_sources[2], "eta.e3")?,
        ];
        let mut excluded = Vec::with_capacity(raw.domain.excluded.len());
        for (i, src) in raw.domain.excluded.iter().enumerate() {
            excluded.push(parse_named(src, &format!("domain.excluded[{i}]"))?);
        }
        let domain = Domain {
            intervals: [raw.domain.x, raw.domain.y, raw.domain.z],
            excluded,
        };
        domain.validate()?;
        let expected = match raw.expected {
            Some(e) => Some(ExpectedKind::from_token(&e.kind)?),
            None => None,
        };
        let mut tolerances = ToleranceProfile::default();
        if let Some(map) = raw.tolerances {
            for (key, value) in map {
                if !(value.is_finite() && value > 0.0) {
                    return Err(Error::Manifest(format!(
                        "tolerance override `{key}` must be a positive finite number, got {value}"
                    )));
                }
                match key.as_str() {
                    "axiom" => tolerances.axiom = value,
                    "fd" => tolerances.fd = value,
                    "reconstruction" => tolerances.reconstruction = value,
                    "scalar" => tolerances.scalar = value,
                    other => {
                        return Err(Error::Manifest(format!(
                            "unknown tolerance override `{other}` (expected axiom, fd, reconstruction, or scalar)"
                        )))
                    }
                }
            }
        }
        Ok(ManifoldManifest {
            name: raw.name,
            metric_upper,
            metric_sources,
            eta,
            eta_sources,
            domain,
            expected,
            tolerances,
        })
    }

    /// Load and parse a manifest file.
    pub fn load(path: &Path) -> Result<ManifoldManifest> {
        let text = std::fs::read_to_string(path)?;
        ManifoldManifest::from_toml_str(&text)
    }

    /// The contact structure (metric field plus contact form) this manifest
    /// describes.
    pub fn contact_structure(&self) -> ContactStructure {
        let metric = MetricField::from_upper(self.metric_upper.clone());
        ContactStructure::new(metric, self.eta.clone())
    }
}
