//! The three-parameter family of generalized curvature tensors, its named
//! presets, the closed form it takes on certified structures, and the
//! derivation operators used by the classification conditions.
//!
//! The family is
//!
//! ```text
//! W(U,V)Z = R(U,V)Z + alpha [S(V,Z) U - S(U,Z) V]
//!          + beta [g(V,Z) QU - g(U,Z) QV] + gamma [g(V,Z) U - g(U,Z) V]
//! ```
//!
//! with `S` the Ricci tensor and `Q` the Ricci operator.  Every named preset
//! is an `(alpha, beta, gamma)` triple, two of them with a scalar-curvature
//! dependent `gamma`.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tensor::{matmul, matvec, norm_inf_t4, M3, T4, T6, V3, ZERO_T4};

/// Classification condition: which operand the derivation `W(X,Y) . T` acts
/// on.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Full curvature operand.
    WR,
    /// Nullity-gap wedge operand.
    WH,
    /// Ricci operand.
    WS,
}

impl Condition {
    /// CLI token for the condition.
    pub fn token(self) -> &'static str {
        match self {
            Condition::WR => "wr",
            Condition::WH => "wh",
            Condition::WS => "ws",
        }
    }
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Condition> {
        match s {
            "wr" => Ok(Condition::WR),
            "wh" => Ok(Condition::WH),
            "ws" => Ok(Condition::WS),
            other => Err(Error::Preset(format!(
                "unknown condition `{other}` (expected wr, wh, or ws)"
            ))),
        }
    }
}

/// Named members of the curvature family.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PresetName {
    Riemann,
    Conharmonic,
    Conformal,
    Concircular,
    Projective,
    MProjective,
    W1,
    W2,
    W4,
}

/// All preset names, in the canonical report order.
pub const ALL_PRESETS: [PresetName; 9] = [
    PresetName::Riemann,
    PresetName::Conharmonic,
    PresetName::Conformal,
    PresetName::Concircular,
    PresetName::Projective,
    PresetName::MProjective,
    PresetName::W1,
    PresetName::W2,
    PresetName::W4,
];

impl PresetName {
    /// CLI token for the preset.
    pub fn token(self) -> &'static str {
        match self {
            PresetName::Riemann => "riemann",
            PresetName::Conharmonic => "conharmonic",
            PresetName::Conformal => "conformal",
            PresetName::Concircular => "concircular",
            PresetName::Projective => "projective",
            PresetName::MProjective => "m_projective",
            PresetName::W1 => "w1",
            PresetName::W2 => "w2",
            PresetName::W4 => "w4",
        }
    }
}

impl FromStr for PresetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<PresetName> {
        for p in ALL_PRESETS {
            if p.token() == s {
                return Ok(p);
            }
        }
        Err(Error::Preset(format!(
            "unknown preset `{s}` (expected one of riemann, conharmonic, conformal, concircular, projective, m_projective, w1, w2, w4)"
        )))
    }
}

/// How the dimension parameter entering preset denominators is read off the
/// contact dimension `2n + 1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum DimensionReading {
    /// Use the ambient odd dimension `m = 2n + 1` (default).
    #[default]
    Ambient,
    /// Use `n` itself.
    Literal,
}

/// Family coefficients.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Coefficients of a named preset for contact dimension `2n + 1`, given the
/// scalar curvature at the evaluation point (two presets have a
/// scalar-curvature dependent `gamma`).
pub fn preset_coefficients(
    name: PresetName,
    n: u32,
    reading: DimensionReading,
    scalar_curvature: f64,
) -> Result<Coefficients> {
    let d = match reading {
        DimensionReading::Ambient => (2 * n + 1) as f64,
        DimensionReading::Literal => n as f64,
    } ;
    let r = scalar_curvature;
    let dm1 = d - 1.0;
    let dm2 = d - 2.0;
    let denom = |v: f64, what: &str| -> Result<f64> {
        if v == 0.0 {
            Err(Error::Preset(format!(
                "preset `{}` is undefined under the {:?} dimension reading at n = {n}: division by zero in {what}",
                name.token(),
                reading,
            )))
        } else {
            Ok(v)
        }
    };
    Ok(match name {
        PresetName::Riemann => Coefficients {
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
        },
        PresetName::Conharmonic => {
            let q = denom(dm2, "1/(d-2)")?;
            Coefficients {
                alpha: -1.0 / q,
                beta: -1.0 / q,
                gamma: 0.0,
            }
        }
        PresetName::Conformal => {
            let q2 = denom(dm2, "1/(d-2)")?;
            let q1 = denom(dm1 * dm2, "1/((d-1)(d-2))")?;
            Coefficients {
                alpha: -1.0 / q2,
                beta: -1.0 / q2,
                gamma: r / q1,
            }
        }
        PresetName::Concircular => {
            let q = denom(d * dm1, "1/(d(d-1))")?;
            Coefficients {
                alpha: 0.0,
                beta: 0.0,
                gamma: -r / q,
            }
        }
        PresetName::Projective => {
            let q = denom(dm1, "1/(d-1)")?;
            Coefficients {
                alpha: -1.0 / q,
                beta: 0.0,
                gamma: 0.0,
            }
        }
        PresetName::MProjective => {
            let q = denom(2.0 * dm1, "1/(2(d-1))")?;
            Coefficients {
                alpha: -1.0 / q,
                beta: -1.0 / q,
                gamma: 0.0,
            }
        }
        PresetName::W1 => {
            let q = denom(dm1, "1/(d-1)")?;
            Coefficients {
                alpha: 1.0 / q,
                beta: 0.0,
                gamma: 0.0,
            }
        }
        PresetName::W2 => {
            let q = denom(dm1, "1/(d-1)")?;
            Coefficients {
                alpha: 0.0,
                beta: -1.0 / q,
                gamma: 0.0,
            }
        }
        PresetName::W4 => {
            let q = denom(dm1, "1/(d-1)")?;
            Coefficients {
                alpha: 0.0,
                beta: 0.0,
                gamma: -1.0 / q,
            }
        }
    })
}

/// Curvature context: the raw ingredients the family assembly needs.
#[derive(Clone, Debug)]
pub struct CurvatureContext {
    /// Metric.
    pub g: M3,
    /// Inverse metric.
    pub gi: M3,
    /// Riemann tensor `[l][i][j][k]`.
    pub riem: T4,
    /// Ricci tensor (0,2).
    pub ricci: M3,
    /// Scalar curvature.
    pub scalar: f64,
}

impl CurvatureContext {
    /// Build from a contact frame.
    pub fn from_frame(fr: &crate::contact::Frame) -> CurvatureContext {
        CurvatureContext {
            g: fr.g,
            gi: fr.gi,
            riem: fr.riem,
            ricci: fr.ricci,
            scalar: fr.scalar,
        }
    }

    /// Ricci operator `Q = g^{-1} S`.
    pub fn ricci_operator(&self) -> M3 {
        matmul(&self.gi, &self.ricci)
    }
}

/// Assemble the family member `W` with the given coefficients, in the same
/// `(1,3)` index layout as the Riemann tensor.  With zero coefficients the
/// result is bit-for-bit the input curvature.
pub fn w_tilde(ctx: &CurvatureContext, c: Coefficients) -> T4 {
    let mut w = ctx.riem;
    if c.alpha == 0.0 && c.beta == 0.0 && c.gamma == 0.0 {
        return w;
    }
    let q = ctx.ricci_operator();
    let (g, s) = (&ctx.g, &ctx.ricci);
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let di = if l == i { 1.0 } else { 0.0 };
                    let dj = if l == j { 1.0 } else { 0.0 };
                    w[l][i][j][k] += c.alpha * (s[j][k] * di - s[i][k] * dj)
                        + c.beta * (g[j][k] * q[l][i] - g[i][k] * q[l][j])
                        + c.gamma * (g[j][k] * di - g[i][k] * dj);
                }
            }
        }
    }
    w
}

/// Closed form of the family member on a certified structure with extracted
/// `(kappa, mu)`:
///
/// ```text
/// W(U,V)Z = P [g(V,Z)U - g(U,Z)V]
///         + (alpha+1) mu [g(hV,Z)U - g(hU,Z)V]
///         + (beta+1) mu [g(V,Z)hU - g(U,Z)hV]
///         + (alpha+1)(2kappa+mu) [eta(V)eta(Z)U - eta(U)eta(Z)V]
///         + (beta+1)(2kappa+mu) [g(V,Z)eta(U) - g(U,Z)eta(V)] xi
/// ```
///
/// with `P = -(alpha+beta+1) mu - kappa + gamma`.
pub fn w_tilde_closed_form(
    g: &M3,
    eta: &V3,
    xi: &V3,
    h: &M3,
    kappa: f64,
    mu: f64,
    c: Coefficients,
) -> T4 {
    let p = -(c.alpha + c.beta + 1.0) * mu - kappa + c.gamma;
    let a1 = (c.alpha + 1.0) * mu;
    let b1 = (c.beta + 1.0) * mu;
    let a2 = (c.alpha + 1.0) * (2.0 * kappa + mu);
    let b2 = (c.beta + 1.0) * (2.0 * kappa + mu);
    let gh = matmul(g, h);
    let mut w = ZERO_T4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let gvz = g[j][k];
                let guz = g[i][k];
                let ghvz = gh[k][j];
                let ghuz = gh[k][i];
                let (eu, ev, ez) = (eta[i], eta[j], eta[k]);
                for l in 0..3 {
                    let u = if l == i { 1.0 } else { 0.0 };
                    let v = if l == j { 1.0 } else { 0.0 };
                    let hu = h[l][i];
                    let hv = h[l][j];
                    w[l][i][j][k] = p * (gvz * u - guz * v)
                        + a1 * (ghvz * u - ghuz * v)
                        + b1 * (gvz * hu - guz * hv)
                        + a2 * (ev * ez * u - eu * ez * v)
                        + b2 * (gvz * eu - guz * ev) * xi[l];
                }
            }
        }
    }
    w
}

/// Reeb slice `W(xi, V) Z` of the closed form:
///
/// ```text
/// P [g(V,Z) xi - eta(Z) V] + (alpha+1) mu g(hV,Z) xi - (beta+1) mu eta(Z) hV
/// + (alpha+1)(2kappa+mu) [eta(V)eta(Z) xi - eta(Z) V]
/// + (beta+1)(2kappa+mu) [g(V,Z) - eta(Z)eta(V)] xi
/// ```
#[allow(clippy::too_many_arguments)]
pub fn w_tilde_xi_slice(
    g: &M3,
    eta: &V3,
    xi: &V3,
    h: &M3,
    kappa: f64,
    mu: f64,
    c: Coefficients,
    v: &V3,
    z: &V3,
) -> V3 {
    let p = -(c.alpha + c.beta + 1.0) * mu - kappa + c.gamma;
    let gv = matvec(g, v);
    let hv = matvec(h, v);
    let gvz = crate::tensor::dot(&gv, z);
    let ghvz = crate::tensor::dot(&matvec(g, &hv), z);
    let ev = crate::tensor::dot(eta, v);
    let ez = crate::tensor::dot(eta, z);
    let mut out = [0.0; 3];
    for l in 0..3 {
        out[l] = p * (gvz * xi[l] - ez * v[l])
            + (c.alpha + 1.0) * mu * ghvz * xi[l]
            - (c.beta + 1.0) * mu * ez * hv[l]
            + (c.alpha + 1.0) * (2.0 * kappa + mu) * (ev * ez * xi[l] - ez * v[l])
            + (c.beta + 1.0) * (2.0 * kappa + mu) * (gvz - ez * ev) * xi[l];
    }
    out
}

/// Double Reeb slice `W(xi, V) xi = E [eta(V) xi - V] - (beta+1) mu hV` with
/// `E = (2 alpha + 1) kappa - beta mu + gamma`.
pub fn w_tilde_xi_v_xi_slice(
    eta: &V3,
    xi: &V3,
    h: &M3,
    kappa: f64,
    mu: f64,
    c: Coefficients,
    v: &V3,
) -> V3 {
    let e = (2.0 * c.alpha + 1.0) * kappa - c.beta * mu + c.gamma;
    let ev = crate::tensor::dot(eta, v);
    let hv = matvec(h, v);
    let mut out = [0.0; 3];
    for l in 0..3 {
        out[l] = e * (ev * xi[l] - v[l]) - (c.beta + 1.0) * mu * hv[l];
    }
    out
}

/// The nullity-gap wedge `H(U,V)Z = (mu - kappa)[g(V,Z)U - g(U,Z)V]`.
pub fn nullity_gap(g: &M3, kappa: f64, mu: f64) -> T4 {
    let f = mu - kappa;
    let mut t = ZERO_T4;
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let di = if l == i { 1.0 } else { 0.0 };
                    let dj = if l == j { 1.0 } else { 0.0 };
                    t[l][i][j][k] = f * (g[j][k] * di - g[i][k] * dj);
                }
            }
        }
    }
    t
}

/// Reeb slice of the gap wedge: `H(xi, V) Z = (mu - kappa)[g(V,Z) xi - eta(Z) V]`.
pub fn nullity_gap_xi_slice(
    g: &M3,
    eta: &V3,
    xi: &V3,
    kappa: f64,
    mu: f64,
    v: &V3,
    z: &V3,
) -> V3 {
    let gvz = crate::tensor::dot(&matvec(g, v), z);
    let ez = crate::tensor::dot(eta, z);
    let mut out = [0.0; 3];
    for l in 0..3 {
        out[l] = (mu - kappa) * (gvz * xi[l] - ez * v[l]);
    }
    out
}

/// Derivation of a curvature-like operand `T2` by a curvature-like operator
/// `T1`, returned fully lowered (0,6):
///
/// ```text
/// (T1(X,Y) . T2)(U,V)Z = T1(X,Y) T2(U,V)Z - T2(T1(X,Y)U, V)Z
///                       - T2(U, T1(X,Y)V)Z - T2(U,V) T1(X,Y)Z
/// ```
///
/// Index layout of the result: `[m][x][y][u][v][z]` with the free slot `m`
/// lowered by `g`.
pub fn derive_on_curvature(t1: &T4, t2: &T4, g: &M3) -> Box<T6> {
    let mut up: Box<T6> = Box::new([[[[[[0.0; 3]; 3]; 3]; 3]; 3]; 3]);
    for x in 0..3 {
        for y in 0..3 {
            // A[m][l] = operator T1(e_x, e_y)
            let mut a = [[0.0; 3]; 3];
            for m in 0..3 {
                for l in 0..3 {
                    a[m][l] = t1[m][x][y][l];
                }
            }
            for u in 0..3 {
                for v in 0..3 {
                    for z in 0..3 {
                        for m in 0..3 {
                            let mut acc = 0.0;
                            for l in 0..3 {
                                acc += a[m][l] * t2[l][u][v][z];
                                acc -= t2[m][l][v][z] * a[l][u];
                                acc -= t2[m][u][l][z] * a[l][v];
                                acc -= t2[m][u][v][l] * a[l][z];
                            }
                            up[m][x][y][u][v][z] = acc;
                        }
                    }
                }
            }
        }
    }
    // lower the free slot
    let mut out: Box<T6> = Box::new([[[[[[0.0; 3]; 3]; 3]; 3]; 3]; 3]);
    for m in 0..3 {
        for x in 0..3 {
            for y in 0..3 {
                for u in 0..3 {
                    for v in 0..3 {
                        for z in 0..3 {
                            let mut acc = 0.0;
                            for l in 0..3 {
                                acc += g[m][l] * up[l][x][y][u][v][z];
                            }
                            out[m][x][y][u][v][z] = acc;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Derivation of a symmetric (0,2) operand by a curvature-like operator,
/// returned as (0,4):
///
/// ```text
/// (T1(X,Y) . S)(U,V) = -S(T1(X,Y)U, V) - S(U, T1(X,Y)V)
/// ```
///
/// Index layout `[x][y][u][v]`.
pub fn derive_on_ricci(t1: &T4, s: &M3) -> T4 {
    let mut out = ZERO_T4;
    for x in 0..3 {
        for y in 0..3 {
            for u in 0..3 {
                for v in 0..3 {
                    let mut acc = 0.0;
                    for l in 0..3 {
                        acc -= s[l][v] * t1[l][x][y][u];
                        acc -= s[u][l] * t1[l][x][y][v];
                    }
                    out[x][y][u][v] = acc;
                }
            }
        }
    }
    out
}

/// Max-norm of a derivation residual on a curvature operand.
pub fn derivation_norm_curvature(t1: &T4, t2: &T4, g: &M3) -> f64 {
    crate::tensor::norm_inf_t6(&derive_on_curvature(t1, t2, g))
}

/// Max-norm of a derivation residual on a Ricci operand.
pub fn derivation_norm_ricci(t1: &T4, s: &M3) -> f64 {
    norm_inf_t4(&derive_on_ricci(t1, s))
}
