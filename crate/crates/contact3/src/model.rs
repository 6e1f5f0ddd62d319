//! Manifold-free verification of the scalar collapse identities on a
//! synthetic eigenframe.
//!
//! A [`ModelPoint`] fixes `(kappa, mu, alpha, beta, gamma)` with `kappa < 1`
//! and builds the orthonormal frame `{xi, e, phi e}` in which `h` is
//! diagonal.  All curvature objects then come from their closed forms, so
//! the derivation conditions reduce to exact polynomial identities in the
//! five parameters — which this module states, evaluates numerically, and
//! fits against the traced tensor computation.
//!
//! The numeric trace and the polynomial forms agree to machine precision;
//! the separately recorded *target* polynomials (see [`stated_target`]) are
//! compared through a fitted proportionality constant stored in a versioned
//! fixture, and the fit residual is reported rather than assumed.

use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::curvature::{
    derive_on_curvature, derive_on_ricci, nullity_gap, preset_coefficients, w_tilde,
    w_tilde_closed_form, Coefficients, Condition, CurvatureContext, DimensionReading, PresetName,
};
use crate::error::{Error, Result};
use crate::tensor::{norm_inf_t4, M3, T4, T6, V3, IDENTITY};
use crate::tol;

/// Default seed for reproducible parameter draws.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// A synthetic evaluation point: structure scalars plus family coefficients.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ModelPoint {
    pub kappa: f64,
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ModelPoint {
    /// The family coefficients of this point.
    pub fn coefficients(&self) -> Coefficients {
        Coefficients {
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        }
    }
}

/// The synthetic eigenframe with all curvature objects assembled from the
/// closed forms.
///
/// Basis: `xi = e_1`, `e = e_2` (the `+theta` eigenvector of `h`), and
/// `phi e = e_3`.  The metric is the identity in this basis.
#[derive(Clone, Debug)]
pub struct ModelFrame {
    pub kappa: f64,
    pub mu: f64,
    pub theta: f64,
    pub g: M3,
    pub gi: M3,
    pub eta: V3,
    pub xi: V3,
    pub phi: M3,
    pub h: M3,
    /// Curvature tensor `[l][i][j][k]`, assembled from the closed form.
    pub riem: T4,
    /// Ricci tensor.
    pub ricci: M3,
    /// Ricci operator (equal to `ricci` since `g` is the identity).
    pub q: M3,
    /// Scalar curvature `2(kappa - mu)`.
    pub scalar: f64,
}

/// Build the synthetic frame at `(kappa, mu)`.  Requires `kappa < 1`: the
/// eigenvalue `theta = sqrt(1 - kappa)` degenerates at `kappa = 1` and the
/// trace normalization `tr h^2 = 2 theta^2` would vanish.
pub fn model_frame(kappa: f64, mu: f64) -> Result<ModelFrame> {
    if kappa >= 1.0 || kappa.is_nan() {
        return Err(Error::Model(format!(
            "the synthetic eigenframe requires kappa < 1 (theta = sqrt(1 - kappa) degenerates); got kappa = {kappa}"
        )));
    }
    let theta = (1.0 - kappa).sqrt();
    let g = IDENTITY;
    let gi = IDENTITY;
    let eta = [1.0, 0.0, 0.0];
    let xi = eta;
    let h = [[0.0, 0.0, 0.0], [0.0, theta, 0.0], [0.0, 0.0, -theta]];
    let phi = [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]];
    // The curvature of the structure is the family's closed form at zero
    // coefficients.
    let riem = w_tilde_closed_form(
        &g,
        &eta,
        &xi,
        &h,
        kappa,
        mu,
        Coefficients {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        },
    );
    let mut ricci = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            ricci[i][j] =
                -mu * g[i][j] + mu * h[i][j] + (2.0 * kappa + mu) * eta[i] * eta[j];
        }
    }
    let q = ricci;
    let scalar = q[0][0] + q[1][1] + q[2][2];
    Ok(ModelFrame {
        kappa,
        mu,
        theta,
        g,
        gi,
        eta,
        xi,
        phi,
        h,
        riem,
        ricci,
        q,
        scalar,
    })
}

impl ModelFrame {
    /// Curvature context for family assembly.
    pub fn context(&self) -> CurvatureContext {
        CurvatureContext {
            g: self.g,
            gi: self.gi,
            riem: self.riem,
            ricci: self.ricci,
            scalar: self.scalar,
        }
    }

    /// Assemble the family member at the given coefficients.
    pub fn w_tilde(&self, c: Coefficients) -> T4 {
        w_tilde(&self.context(), c)
    }

    /// The nullity-gap wedge of this frame.
    pub fn nullity_gap(&self) -> T4 {
        nullity_gap(&self.g, self.kappa, self.mu)
    }

    /// `tr h^2 = 2 theta^2`, the normalization of the trace collapse.
    pub fn trace_h_squared(&self) -> f64 {
        2.0 * self.theta * self.theta
    }
}

/// Contract a derivation-on-curvature residual down to the single scalar the
/// trace procedure produces: slice the first operator argument and the first
/// operand argument to `xi = e_1`, contract the last two slots with the
/// inverse metric, compose with `h`, take the trace, and normalize by
/// `tr h^2`.
fn collapse_curvature_derivation(mf: &ModelFrame, a: &T6) -> f64 {
    let mut d = [[0.0; 3]; 3];
    for m in 0..3 {
        for y in 0..3 {
            let mut acc = 0.0;
            for v in 0..3 {
                for z in 0..3 {
                    acc += mf.gi[v][z] * a[m][0][y][0][v][z];
                }
            }
            d[m][y] = acc;
        }
    }
    let mut tr = 0.0;
    for y in 0..3 {
        for l in 0..3 {
            tr += mf.h[y][l] * d[l][y];
        }
    }
    tr / mf.trace_h_squared()
}

/// Contract a derivation-on-Ricci residual the same way: slice the first
/// operator argument and the first operand argument to `xi`, raise the
/// remaining operand slot, compose with `h`, trace, normalize.
fn collapse_ricci_derivation(mf: &ModelFrame, a: &T4) -> f64 {
    let mut d = [[0.0; 3]; 3];
    for m in 0..3 {
        for y in 0..3 {
            let mut acc = 0.0;
            for v in 0..3 {
                acc += mf.gi[m][v] * a[0][y][0][v];
            }
            d[m][y] = acc;
        }
    }
    let mut tr = 0.0;
    for y in 0..3 {
        for l in 0..3 {
            tr += mf.h[y][l] * d[l][y];
        }
    }
    tr / mf.trace_h_squared()
}

/// Numeric scalar of the full-curvature condition at a model point: assemble
/// the family member, derive it on the curvature tensor, and trace-collapse.
pub fn wr_scalar(mf: &ModelFrame, w: &T4) -> f64 {
    let a = derive_on_curvature(w, &mf.riem, &mf.g);
    collapse_curvature_derivation(mf, &a)
}

/// Numeric scalar of the gap-wedge condition.
pub fn wh_scalar(mf: &ModelFrame, w: &T4) -> f64 {
    let gap = mf.nullity_gap();
    let a = derive_on_curvature(w, &gap, &mf.g);
    collapse_curvature_derivation(mf, &a)
}

/// Numeric scalar of the Ricci condition.
pub fn ws_scalar(mf: &ModelFrame, w: &T4) -> f64 {
    let a = derive_on_ricci(w, &mf.ricci);
    collapse_ricci_derivation(mf, &a)
}

/// Numeric condition scalar at a model point.
pub fn condition_scalar(mp: &ModelPoint, condition: Condition) -> Result<f64> {
    let mf = model_frame(mp.kappa, mp.mu)?;
    let w = mf.w_tilde(mp.coefficients());
    Ok(match condition {
        Condition::WR => wr_scalar(&mf, &w),
        Condition::WH => wh_scalar(&mf, &w),
        Condition::WS => ws_scalar(&mf, &w),
    })
}

/// Closed polynomial form of the full-curvature condition scalar:
/// `mu [ (alpha - beta - 1) kappa - (alpha + beta + 1) mu + gamma ]`.
pub fn collapse_wr(mp: &ModelPoint) -> f64 {
    mp.mu
        * ((mp.alpha - mp.beta - 1.0) * mp.kappa - (mp.alpha + mp.beta + 1.0) * mp.mu
            + mp.gamma)
}

/// Closed polynomial form of the gap-wedge condition scalar:
/// `(alpha - beta) mu (mu - kappa)`.
pub fn collapse_wh(mp: &ModelPoint) -> f64 {
    (mp.alpha - mp.beta) * mp.mu * (mp.mu - mp.kappa)
}

/// Closed polynomial form of the Ricci condition scalar:
/// `-mu [ (2 beta + 1) mu + kappa - gamma ]`.
pub fn collapse_ws(mp: &ModelPoint) -> f64 {
    -mp.mu * ((2.0 * mp.beta + 1.0) * mp.mu + mp.kappa - mp.gamma)
}

/// Closed polynomial collapse for the given condition.
pub fn honest_collapse(mp: &ModelPoint, condition: Condition) -> f64 {
    match condition {
        Condition::WR => collapse_wr(mp),
        Condition::WH => collapse_wh(mp),
        Condition::WS => collapse_ws(mp),
    }
}

/// Separately recorded target polynomial for the full-curvature condition:
/// `(beta + 1) mu (mu - 3 kappa)`.
pub fn stated_wr(mp: &ModelPoint) -> f64 {
    (mp.beta + 1.0) * mp.mu * (mp.mu - 3.0 * mp.kappa)
}

/// Separately recorded target polynomial for the gap-wedge condition:
/// `mu [ (alpha + beta + 2) mu - (alpha + 3 beta + 4) kappa ]`.
pub fn stated_wh(mp: &ModelPoint) -> f64 {
    mp.mu
        * ((mp.alpha + mp.beta + 2.0) * mp.mu - (mp.alpha + 3.0 * mp.beta + 4.0) * mp.kappa)
}

/// Separately recorded target polynomial for the Ricci condition:
/// `[ (2 beta + 1) mu + kappa - gamma ] mu`.
pub fn stated_ws(mp: &ModelPoint) -> f64 {
    ((2.0 * mp.beta + 1.0) * mp.mu + mp.kappa - mp.gamma) * mp.mu
}

/// Recorded target polynomial for the given condition.
pub fn stated_target(mp: &ModelPoint, condition: Condition) -> f64 {
    match condition {
        Condition::WR => stated_wr(mp),
        Condition::WH => stated_wh(mp),
        Condition::WS => stated_ws(mp),
    }
}

/// Draw `n` model points reproducibly: `kappa in [-2, 0.9)`,
/// `mu in [-3, 3)`, coefficients in `[-2, 2)`.
pub fn draw_model_points(n: usize, seed: u64) -> Vec<ModelPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| ModelPoint {
            kappa: rng.gen_range(-2.0..0.9),
            mu: rng.gen_range(-3.0..3.0),
            alpha: rng.gen_range(-2.0..2.0),
            beta: rng.gen_range(-2.0..2.0),
            gamma: rng.gen_range(-2.0..2.0),
        })
        .collect()
}

/// Result of a single-constant proportionality fit.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Fit {
    /// Least-squares proportionality constant.
    pub constant: f64,
    /// Max absolute residual `|lhs - constant * target|` over the sample.
    pub residual: f64,
}

/// Least-squares fit of `lhs ≈ c * target` over `(lhs, target)` pairs, with
/// ordered accumulation for determinism.
pub fn fit_proportionality(pairs: &[(f64, f64)]) -> Fit {
    let mut num = 0.0;
    let mut den = 0.0;
    for &(lhs, t) in pairs {
        num += lhs * t;
        den += t * t;
    }
    let constant = if den == 0.0 { 0.0 } else { num / den };
    let residual = pairs
        .iter()
        .map(|&(lhs, t)| (lhs - constant * t).abs())
        .fold(0.0, f64::max);
    Fit { constant, residual }
}

/// Frozen fit constants between the numeric condition scalars and the
/// recorded target polynomials, with their fit metadata.
#[derive(Clone, Debug, Deserialize)]
pub struct FitFixture {
    pub schema: u32,
    pub seed: u64,
    pub draws: usize,
    pub wr: FitEntry,
    pub wh: FitEntry,
    pub ws: FitEntry,
}

/// One frozen fit: the constant and the residual it was frozen with.
#[derive(Copy, Clone, Debug, Deserialize)]
pub struct FitEntry {
    pub constant: f64,
    pub residual: f64,
}

impl FitFixture {
    /// Entry for a condition.
    pub fn entry(&self, condition: Condition) -> FitEntry {
        match condition {
            Condition::WR => self.wr,
            Condition::WH => self.wh,
            Condition::WS => self.ws,
        }
    }
}

/// The fixture shipped with the crate (see `fixtures/fit_constants.toml`).
pub fn fitted_constants() -> &'static FitFixture {
    static FIXTURE: OnceLock<FitFixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        toml::from_str(include_str!("../fixtures/fit_constants.toml"))
            .expect("embedded fit fixture parses")
    })
}

/// Recompute the fixture contents from scratch: fit each condition's numeric
/// scalar against its recorded target polynomial over `draws` seeded points.
pub fn refit_constants(draws: usize, seed: u64) -> Result<FitFixture> {
    let points = draw_model_points(draws, seed);
    let mut fits = [Fit {
        constant: 0.0,
        residual: 0.0,
    }; 3];
    for (slot, condition) in [Condition::WR, Condition::WH, Condition::WS]
        .into_iter()
        .enumerate()
    {
        let pairs: Vec<(f64, f64)> = points
            .iter()
            .map(|mp| Ok((condition_scalar(mp, condition)?, stated_target(mp, condition))))
            .collect::<Result<_>>()?;
        fits[slot] = fit_proportionality(&pairs);
    }
    Ok(FitFixture {
        schema: 1,
        seed,
        draws,
        wr: FitEntry {
            constant: fits[0].constant,
            residual: fits[0].residual,
        },
        wh: FitEntry {
            constant: fits[1].constant,
            residual: fits[1].residual,
        },
        ws: FitEntry {
            constant: fits[2].constant,
            residual: fits[2].residual,
        },
    })
}

/// Full-curvature condition at a model point: `(numeric scalar, frozen
/// constant times the recorded target)`.
pub fn wr_condition(mp: &ModelPoint) -> Result<(f64, f64)> {
    let lhs = condition_scalar(mp, Condition::WR)?;
    Ok((lhs, fitted_constants().wr.constant * stated_wr(mp)))
}

/// Gap-wedge condition at a model point, same contract as [`wr_condition`].
pub fn wh_condition(mp: &ModelPoint) -> Result<(f64, f64)> {
    let lhs = condition_scalar(mp, Condition::WH)?;
    Ok((lhs, fitted_constants().wh.constant * stated_wh(mp)))
}

/// Ricci condition at a model point, same contract as [`wr_condition`].
pub fn ws_condition(mp: &ModelPoint) -> Result<(f64, f64)> {
    let lhs = condition_scalar(mp, Condition::WS)?;
    Ok((lhs, fitted_constants().ws.constant * stated_ws(mp)))
}

/// Honest collapse polynomial of a *preset* at `(kappa, mu)`, with the
/// scalar-curvature dependent coefficients resolved through
/// `r = 2 (kappa - mu)`.
pub fn preset_collapse(
    condition: Condition,
    name: PresetName,
    kappa: f64,
    mu: f64,
    reading: DimensionReading,
) -> Result<f64> {
    let r = 2.0 * (kappa - mu);
    let c = preset_coefficients(name, 1, reading, r)?;
    let mp = ModelPoint {
        kappa,
        mu,
        alpha: c.alpha,
        beta: c.beta,
        gamma: c.gamma,
    };
    Ok(honest_collapse(&mp, condition))
}

/// The eight operator/operand pairs obtained by letting each of the four
/// distinguished operators (full curvature, conformal, concircular,
/// conharmonic) act by derivation on either the gap wedge or the full
/// curvature.  Each pair is one equivalence class of derivation conditions.
pub fn derivation_condition_pairs() -> [(PresetName, Condition); 8] {
    [
        (PresetName::Riemann, Condition::WH),
        (PresetName::Conformal, Condition::WH),
        (PresetName::Concircular, Condition::WH),
        (PresetName::Conharmonic, Condition::WH),
        (PresetName::Riemann, Condition::WR),
        (PresetName::Conformal, Condition::WR),
        (PresetName::Concircular, Condition::WR),
        (PresetName::Conharmonic, Condition::WR),
    ]
}

/// Outcome of following a `(kappa, mu)` path through a condition.
#[derive(Clone, Debug, PartialEq)]
pub enum DichotomyOutcome {
    /// The condition scalar stays away from zero somewhere on the path.
    ConditionFails { max_scalar: f64 },
    /// Curvature vanishes along the whole path.
    Flat,
    /// The assembled operator tensor vanishes identically (the
    /// dimension-three degeneracy of the conformal coefficients).
    ZeroOperator,
    /// The collapse polynomial vanishes for these coefficients at *every*
    /// `(kappa, mu)` — the condition carries no geometric information.
    CoefficientForced,
    /// `mu = 0` along the path: the Ricci operator commutes with `phi`.
    MuZero,
    /// The scalar relation between `kappa` and `mu` holds along the path;
    /// the relation is only consistent with constant `kappa`, `mu`, so a
    /// nonconstant path is a contradiction.
    ScalarRelation { kappa_mu_constant: bool },
}

impl DichotomyOutcome {
    /// Human-readable branch description.
    pub fn describe(&self) -> String {
        match self {
            DichotomyOutcome::ConditionFails { max_scalar } => format!(
                "condition not satisfied along the path (max |scalar| = {max_scalar:.3e})"
            ),
            DichotomyOutcome::Flat => "flat: curvature vanishes along the path".to_string(),
            DichotomyOutcome::ZeroOperator => {
                "operator tensor vanishes identically in dimension 3: condition holds vacuously"
                    .to_string()
            }
            DichotomyOutcome::CoefficientForced => {
                "collapse polynomial vanishes for these coefficients at every (kappa, mu): condition carries no geometric information"
                    .to_string()
            }
            DichotomyOutcome::MuZero => {
                "mu = 0 along the path: the Ricci operator commutes with phi (Q phi = phi Q)"
                    .to_string()
            }
            DichotomyOutcome::ScalarRelation {
                kappa_mu_constant: true,
            } => "scalar relation holds with constant kappa, mu".to_string(),
            DichotomyOutcome::ScalarRelation {
                kappa_mu_constant: false,
            } => {
                "scalar relation holds but kappa, mu vary along the path: contradiction — the relation forces kappa, mu constant"
                    .to_string()
            }
        }
    }
}

/// Relative spread `(max - min) / max(1, |extremum|)` of a value list; zero
/// for an empty list.
pub fn relative_spread(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let scale = hi.abs().max(lo.abs()).max(1.0);
    (hi - lo) / scale
}

/// Follow a `(kappa, mu)` path through a preset's condition and report which
/// branch of the classification explains the outcome.
pub fn dichotomy_check(
    path: &[(f64, f64)],
    preset: PresetName,
    condition: Condition,
    reading: DimensionReading,
) -> Result<DichotomyOutcome> {
    if path.is_empty() {
        return Err(Error::Model("dichotomy path must be nonempty".to_string()));
    }
    let probe = ModelPoint {
        kappa: 0.37,
        mu: 1.71,
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    };
    let mut max_scalar = 0.0_f64;
    let mut max_w_norm = 0.0_f64;
    let mut max_probe = 0.0_f64;
    let mut max_abs_kappa = 0.0_f64;
    let mut max_abs_mu = 0.0_f64;
    let kappas: Vec<f64> = path.iter().map(|&(k, _)| k).collect();
    let mus: Vec<f64> = path.iter().map(|&(_, m)| m).collect();
    for &(kappa, mu) in path {
        let r = 2.0 * (kappa - mu);
        let c = preset_coefficients(preset, 1, reading, r)?;
        let mf = model_frame(kappa, mu)?;
        let w = mf.w_tilde(c);
        let scalar = match condition {
            Condition::WR => wr_scalar(&mf, &w),
            Condition::WH => wh_scalar(&mf, &w),
            Condition::WS => ws_scalar(&mf, &w),
        };
        max_scalar = max_scalar.max(scalar.abs());
        max_w_norm = max_w_norm.max(norm_inf_t4(&w));
        let probe_mp = ModelPoint {
            kappa: probe.kappa,
            mu: probe.mu,
            alpha: c.alpha,
            beta: c.beta,
            gamma: c.gamma,
        };
        max_probe = max_probe.max(honest_collapse(&probe_mp, condition).abs());
        max_abs_kappa = max_abs_kappa.max(kappa.abs());
        max_abs_mu = max_abs_mu.max(mu.abs());
    }
    if max_scalar > tol::ROOT {
        return Ok(DichotomyOutcome::ConditionFails { max_scalar });
    }
    if max_abs_kappa < tol::MU_ZERO && max_abs_mu < tol::MU_ZERO {
        return Ok(DichotomyOutcome::Flat);
    }
    if max_w_norm < tol::CLASSIFY_ABS {
        return Ok(DichotomyOutcome::ZeroOperator);
    }
    if max_probe < tol::ROOT {
        return Ok(DichotomyOutcome::CoefficientForced);
    }
    if max_abs_mu < tol::MU_ZERO {
        return Ok(DichotomyOutcome::MuZero);
    }
    let constant = relative_spread(&kappas) < tol::CONSTANCY_SPREAD
        && relative_spread(&mus) < tol::CONSTANCY_SPREAD;
    Ok(DichotomyOutcome::ScalarRelation {
        kappa_mu_constant: constant,
    })
}
