//! Theorem-level classification: does a derivation condition hold on a
//! manifold, and if so, which branch of the classification explains it?
//!
//! A condition is *satisfied* at a point when the full derivation residual
//! falls below a scale-aware threshold.  A satisfied condition is then
//! attributed to exactly one branch, checked in a fixed order:
//!
//! 1. flat (curvature vanishes),
//! 2. vacuous — the assembled operator tensor is identically zero (the
//!    dimension-three degeneracy of the conformal coefficients),
//! 3. vacuous — the coefficients annihilate the condition for every
//!    `(kappa, mu)`,
//! 4. `mu = 0` (the Ricci operator commutes with `phi`),
//! 5. `(kappa, mu)` on the condition's scalar root locus, which is only
//!    consistent with constant `kappa`, `mu`.
//!
//! A satisfied condition that none of the branches explains — or a root-locus
//! branch with nonconstant `kappa`, `mu` — is a forbidden outcome: the
//! classification theorems exclude it, so reporting one signals an engine
//! defect rather than a geometric discovery.

use crate::contact::{degenerate_mu, extract_kappa_mu, ContactStructure, PointClass};
use crate::curvature::{
    derive_on_curvature, derive_on_ricci, preset_coefficients, w_tilde, Coefficients, Condition,
    CurvatureContext, DimensionReading, PresetName,
};
use crate::error::Result;
use crate::model::{honest_collapse, relative_spread, ModelPoint};
use crate::par;
use crate::tensor::{norm_inf_m, norm_inf_t4, norm_inf_t6, V3};
use crate::tol;

/// Which family member to classify with.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum PresetChoice {
    /// A named preset, resolved per point through the local scalar curvature.
    Named(PresetName),
    /// Explicit constant coefficients.
    Explicit(Coefficients),
}

impl PresetChoice {
    /// Label used in reports.
    pub fn label(&self) -> String {
        match self {
            PresetChoice::Named(name) => name.token().to_string(),
            PresetChoice::Explicit(c) => {
                format!("abc({}, {}, {})", c.alpha, c.beta, c.gamma)
            }
        }
    }
}

/// Why a satisfied condition carries no geometric information.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum VacuousReason {
    /// The assembled operator tensor is identically zero.
    ZeroTensor,
    /// The coefficients annihilate the condition for every `(kappa, mu)`.
    ZeroCollapse,
}

/// The branch of the classification that explains a genuinely satisfied
/// condition.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SatisfiedBranch {
    /// Curvature vanishes.
    Flat,
    /// `mu = 0`: the Ricci operator commutes with `phi`.
    MuZero,
    /// `(kappa, mu)` sit on the scalar root locus of the condition.
    ScalarRoot {
        /// Whether `kappa`, `mu` are constant across the samples, as the
        /// root-locus branch requires.
        kappa_mu_constant: bool,
    },
    /// No branch explains the outcome (forbidden; kept as a loud guard).
    Unexplained,
}

/// Classification verdict for one (manifold, preset, condition) run.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Verdict {
    /// The derivation residual exceeds the threshold somewhere.
    NotSatisfied,
    /// Residuals vanish, but for a reason that holds on *any* structure.
    SatisfiedVacuously(VacuousReason),
    /// Residuals vanish for a geometric reason.
    Satisfied(SatisfiedBranch),
}

/// Outcome of a classification run with its supporting measurements.
#[derive(Clone, Debug)]
pub struct Classification {
    pub condition: Condition,
    pub preset_label: String,
    pub verdict: Verdict,
    /// Max derivation residual over the samples.
    pub max_residual: f64,
    /// Scale-aware threshold at the worst point.
    pub threshold_at_worst: f64,
    /// Sample with the largest residual-to-threshold ratio.
    pub worst_point: V3,
    /// Range of extracted `kappa` over the samples.
    pub kappa_range: [f64; 2],
    /// Range of extracted (or effective) `mu` over the samples.
    pub mu_range: [f64; 2],
    /// Whether `kappa` and `mu` are constant across samples within the
    /// engine's spread tolerance.
    pub kappa_mu_constant: bool,
    /// Number of degenerate (`h = 0`) samples, where `mu` is the effective
    /// Ricci value rather than an eigenvalue extraction.
    pub degenerate_points: usize,
    /// Total number of samples.
    pub points: usize,
}

impl Classification {
    /// Whether the condition was satisfied (vacuously or not).
    pub fn satisfied(&self) -> bool {
        !matches!(self.verdict, Verdict::NotSatisfied)
    }

    /// A verdict that the classification theorems exclude: a genuinely
    /// satisfied condition whose branch requires constancy that the samples
    /// contradict, or one no branch explains.
    pub fn is_forbidden(&self) -> bool {
        match self.verdict {
            Verdict::Satisfied(SatisfiedBranch::ScalarRoot { kappa_mu_constant }) => {
                !kappa_mu_constant
            }
            Verdict::Satisfied(SatisfiedBranch::Unexplained) => true,
            _ => false,
        }
    }

    /// One-line human-readable verdict.
    pub fn verdict_text(&self) -> String {
        let head = format!(
            "{}/{}",
            self.condition.token(),
            self.preset_label
        );
        let body = match self.verdict {
            Verdict::NotSatisfied => format!(
                "condition not satisfied (max residual {:.3e}, threshold {:.3e})",
                self.max_residual, self.threshold_at_worst
            ),
            Verdict::SatisfiedVacuously(VacuousReason::ZeroTensor) => {
                "satisfied vacuously: the assembled operator tensor vanishes identically in dimension 3"
                    .to_string()
            }
            Verdict::SatisfiedVacuously(VacuousReason::ZeroCollapse) => {
                "satisfied vacuously: these coefficients annihilate the condition for every (kappa, mu)"
                    .to_string()
            }
            Verdict::Satisfied(SatisfiedBranch::Flat) => {
                "satisfied: flat (curvature vanishes, kappa = mu = 0)".to_string()
            }
            Verdict::Satisfied(SatisfiedBranch::MuZero) => {
                "satisfied: mu = 0 — the Ricci operator commutes with phi (Q phi = phi Q)"
                    .to_string()
            }
            Verdict::Satisfied(SatisfiedBranch::ScalarRoot {
                kappa_mu_constant: true,
            }) => "satisfied: (kappa, mu) lie on the condition's scalar root locus, constant across samples"
                .to_string(),
            Verdict::Satisfied(SatisfiedBranch::ScalarRoot {
                kappa_mu_constant: false,
            }) => "satisfied on the scalar root locus but kappa, mu vary across samples — forbidden by the constancy the condition forces"
                .to_string(),
            Verdict::Satisfied(SatisfiedBranch::Unexplained) => {
                "satisfied but not explained by any classification branch — forbidden outcome"
                    .to_string()
            }
        };
        let constancy = if self.kappa_mu_constant {
            "constant"
        } else {
            "nonconstant"
        };
        format!(
            "{head}: {body}; kappa in [{:.6}, {:.6}], mu in [{:.6}, {:.6}] ({constancy}); {} of {} samples degenerate",
            self.kappa_range[0],
            self.kappa_range[1],
            self.mu_range[0],
            self.mu_range[1],
            self.degenerate_points,
            self.points,
        )
    }
}

struct PointOutcome {
    kappa: f64,
    mu: f64,
    degenerate: bool,
    residual: f64,
    threshold: f64,
    w_norm: f64,
    riem_norm: f64,
    coeffs: Coefficients,
    collapse: f64,
    point: V3,
}

fn classify_point(
    cs: &ContactStructure,
    p: V3,
    choice: &PresetChoice,
    condition: Condition,
    reading: DimensionReading,
) -> Result<PointOutcome> {
    let fr = cs.frame(p)?;
    let class = extract_kappa_mu(&fr);
    let (kappa, mu, degenerate) = match class {
        PointClass::Generalized { kappa, mu, .. } => (kappa, mu, false),
        PointClass::Degenerate { kappa } => (kappa, degenerate_mu(&fr), true),
    };
    let ctx = CurvatureContext::from_frame(&fr);
    let coeffs = match choice {
        PresetChoice::Named(name) => preset_coefficients(*name, 1, reading, fr.scalar)?,
        PresetChoice::Explicit(c) => *c,
    };
    let w = w_tilde(&ctx, coeffs);
    let w_norm = norm_inf_t4(&w);
    let (residual, operand_norm) = match condition {
        Condition::WR => (
            norm_inf_t6(&derive_on_curvature(&w, &fr.riem, &fr.g)),
            norm_inf_t4(&fr.riem),
        ),
        Condition::WH => {
            let conh = preset_coefficients(PresetName::Conharmonic, 1, reading, fr.scalar)?;
            let gap = w_tilde(&ctx, conh);
            (
                norm_inf_t6(&derive_on_curvature(&w, &gap, &fr.g)),
                norm_inf_t4(&gap),
            )
        }
        Condition::WS => (
            norm_inf_t4(&derive_on_ricci(&w, &fr.ricci)),
            norm_inf_m(&fr.ricci),
        ),
    };
    let threshold = tol::CLASSIFY_REL * (w_norm * operand_norm).max(1.0) + tol::CLASSIFY_ABS;
    let collapse = honest_collapse(
        &ModelPoint {
            kappa,
            mu,
            alpha: coeffs.alpha,
            beta: coeffs.beta,
            gamma: coeffs.gamma,
        },
        condition,
    );
    Ok(PointOutcome {
        kappa,
        mu,
        degenerate,
        residual,
        threshold,
        w_norm,
        riem_norm: norm_inf_t4(&fr.riem),
        coeffs,
        collapse,
        point: p,
    })
}

/// Classify a condition over sample points of a contact structure.
pub fn classify_points(
    cs: &ContactStructure,
    points: &[V3],
    choice: &PresetChoice,
    condition: Condition,
    reading: DimensionReading,
) -> Result<Classification> {
    assert!(!points.is_empty(), "classification needs at least one point");
    let outcomes: Vec<Result<PointOutcome>> = par::map_points(points, |&p| {
        classify_point(cs, p, choice, condition, reading)
    });
    let mut collected = Vec::with_capacity(points.len());
    for o in outcomes {
        collected.push(o?);
    }
    let mut max_residual = 0.0_f64;
    let mut threshold_at_worst = f64::INFINITY;
    let mut worst_point = collected[0].point;
    let mut worst_ratio = -1.0_f64;
    let mut max_w_norm = 0.0_f64;
    let mut max_riem_norm = 0.0_f64;
    let mut max_abs_mu = 0.0_f64;
    let mut max_abs_kappa = 0.0_f64;
    let mut max_collapse = 0.0_f64;
    let mut degenerate_points = 0usize;
    let mut all_satisfied = true;
    let mut max_coeff_gap = [0.0_f64; 3];
    let kappas: Vec<f64> = collected.iter().map(|o| o.kappa).collect();
    let mus: Vec<f64> = collected.iter().map(|o| o.mu).collect();
    for o in &collected {
        let ratio = o.residual / o.threshold;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_point = o.point;
            threshold_at_worst = o.threshold;
        }
        max_residual = max_residual.max(o.residual);
        max_w_norm = max_w_norm.max(o.w_norm);
        max_riem_norm = max_riem_norm.max(o.riem_norm);
        max_abs_mu = max_abs_mu.max(o.mu.abs());
        max_abs_kappa = max_abs_kappa.max(o.kappa.abs());
        max_collapse = max_collapse.max(o.collapse.abs());
        degenerate_points += o.degenerate as usize;
        all_satisfied &= o.residual < o.threshold;
        max_coeff_gap[0] = max_coeff_gap[0].max((o.coeffs.alpha - o.coeffs.beta).abs());
        max_coeff_gap[1] = max_coeff_gap[1]
            .max((o.coeffs.alpha - o.coeffs.beta - 1.0).abs())
            .max((o.coeffs.alpha + o.coeffs.beta + 1.0).abs());
        max_coeff_gap[2] = max_coeff_gap[2].max(o.coeffs.gamma.abs());
    }
    let kappa_mu_constant = relative_spread(&kappas) < tol::CONSTANCY_SPREAD
        && relative_spread(&mus) < tol::CONSTANCY_SPREAD;
    let verdict = if !all_satisfied {
        Verdict::NotSatisfied
    } else if max_riem_norm < tol::FLAT_CURVATURE
        && max_abs_kappa < tol::MU_ZERO
        && max_abs_mu < tol::MU_ZERO
    {
        Verdict::Satisfied(SatisfiedBranch::Flat)
    } else if max_w_norm < tol::ZERO_TENSOR {
        Verdict::SatisfiedVacuously(VacuousReason::ZeroTensor)
    } else if coefficient_forced(condition, &max_coeff_gap) {
        Verdict::SatisfiedVacuously(VacuousReason::ZeroCollapse)
    } else if max_abs_mu < tol::MU_ZERO {
        Verdict::Satisfied(SatisfiedBranch::MuZero)
    } else if max_collapse < tol::ROOT {
        Verdict::Satisfied(SatisfiedBranch::ScalarRoot { kappa_mu_constant })
    } else {
        Verdict::Satisfied(SatisfiedBranch::Unexplained)
    };
    let range = |vals: &[f64]| -> [f64; 2] {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        [lo, hi]
    };
    Ok(Classification {
        condition,
        preset_label: choice.label(),
        verdict,
        max_residual,
        threshold_at_worst,
        worst_point,
        kappa_range: range(&kappas),
        mu_range: range(&mus),
        kappa_mu_constant,
        degenerate_points,
        points: points.len(),
    })
}

/// Do the coefficients annihilate the condition's collapse for every
/// `(kappa, mu)`?
fn coefficient_forced(condition: Condition, max_coeff_gap: &[f64; 3]) -> bool {
    match condition {
        // (alpha - beta) factors the whole collapse.
        Condition::WH => max_coeff_gap[0] < tol::COEFF_EPS,
        // all three polynomial coefficients must vanish identically
        Condition::WR => max_coeff_gap[1] < tol::COEFF_EPS && max_coeff_gap[2] < tol::COEFF_EPS,
        // the Ricci collapse has no coefficient-forced zero.
        Condition::WS => false,
    }
}
