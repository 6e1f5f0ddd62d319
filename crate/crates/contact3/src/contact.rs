//! Contact metric structures: the pointwise frame pipeline, the structure
//! axiom suite, the `(kappa, mu)` extraction, and the curvature/derivative
//! identities that certify a structure.
//!
//! A structure is given by a metric field `g` and a 1-form `eta`.  The
//! pipeline derives, per point: the 2-form `deta(X, Y) = (1/2)(d_i eta_j -
//! d_j eta_i) X^i Y^j`, the endomorphism `phi` with `g(X, phi Y) =
//! deta(X, Y)`, the Reeb field `xi = g^{-1} eta / |eta|_g^2`, the shape-like
//! operator `h` (half the Lie derivative of `phi` along `xi`), and the full
//! curvature stack.  Everything up to curvature is exact modulo floating
//! point (degree-3 jets); only derivatives of extracted scalars and of
//! `phi`/`h` fall back to central finite differences.

use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::geometry::{christoffel_jets, ricci_from_riemann, riemann_from_gamma, MetricField};
use crate::jet::{eval_jet, Jet3};
use crate::tensor::{
    add, cross, inner, matmul, matvec, norm_inf_m, norm_inf_t4, norm_inf_v, outer, scale,
    sub, trace, transpose, vadd, vscale, vsub, M3, T4, V3, ZERO_M3, ZERO_T4, IDENTITY,
};
use crate::tol;

/// A contact metric structure candidate on a chart: metric plus 1-form.
#[derive(Clone, Debug)]
pub struct ContactStructure {
    /// Metric tensor field.
    pub metric: MetricField,
    /// Components of the 1-form `eta`.
    pub eta: [Expr; 3],
}

/// Everything the pipeline produces at one chart point.
#[derive(Clone, Debug)]
pub struct Frame {
    /// Evaluation point.
    pub p: V3,
    /// Metric components.
    pub g: M3,
    /// Inverse metric.
    pub gi: M3,
    /// 1-form components.
    pub eta: V3,
    /// Reeb vector field.
    pub xi: V3,
    /// Normalized exterior derivative: `deta[i][j] = (1/2)(d_i eta_j - d_j eta_i)`.
    pub deta: M3,
    /// Structure endomorphism `phi^k_j`.
    pub phi: M3,
    /// Half Lie derivative of `phi` along `xi`.
    pub h: M3,
    /// Partials of the Reeb field: `dxi[l][k] = d_k xi^l`.
    pub dxi: M3,
    /// Christoffel symbols `gamma[k][i][j]`.
    pub gamma: [[[f64; 3]; 3]; 3],
    /// Riemann tensor `riem[l][i][j][k]`, i.e. `R(e_i, e_j) e_k = R^l e_l`.
    pub riem: T4,
    /// Ricci tensor (0,2).
    pub ricci: M3,
    /// Scalar curvature.
    pub scalar: f64,
    /// Jacobi-type operator `ell[l][i] = R^l_{i j k} xi^j xi^k` (`R(., xi) xi`).
    pub ell: M3,
}

impl ContactStructure {
    /// Assemble from parsed fields.
    pub fn new(metric: MetricField, eta: [Expr; 3]) -> ContactStructure {
        ContactStructure { metric, eta }
    }

    /// Parse metric upper triangle and 1-form component sources.
    pub fn parse(metric_srcs: [&str; 6], eta_srcs: [&str; 3]) -> Result<ContactStructure> {
        Ok(ContactStructure {
            metric: MetricField::parse_upper(metric_srcs)?,
            eta: [parse(eta_srcs[0])?, parse(eta_srcs[1])?, parse(eta_srcs[2])?],
        })
    }

    /// Run the full pointwise pipeline.
    pub fn frame(&self, p: V3) -> Result<Frame> {
        let gj = self.metric.jets(p)?;
        let ej = [
            eval_jet(&self.eta[0], p)?,
            eval_jet(&self.eta[1], p)?,
            eval_jet(&self.eta[2], p)?,
        ];
        let gij = crate::tensor::jet_inv3(&gj, p)?;

        // deta[i][j] = (1/2)(d_i eta_j - d_j eta_i)
        let mut deta_j = [[Jet3::constant(0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                deta_j[i][j] = (ej[j].derivative(i) - ej[i].derivative(j)) * 0.5;
            }
        }
        // phi^k_j = g^{ki} deta_{ij}
        let mut phi_j = [[Jet3::constant(0.0); 3]; 3];
        for k in 0..3 {
            for j in 0..3 {
                let mut acc = Jet3::constant(0.0);
                for i in 0..3 {
                    acc = acc + gij[k][i] * deta_j[i][j];
                }
                phi_j[k][j] = acc;
            }
        }
        // xi = g^{-1} eta normalized so that eta(xi) = 1
        let mut v_j = [Jet3::constant(0.0); 3];
        for k in 0..3 {
            let mut acc = Jet3::constant(0.0);
            for i in 0..3 {
                acc = acc + gij[k][i] * ej[i];
            }
            v_j[k] = acc;
        }
        let mut n_j = Jet3::constant(0.0);
        for i in 0..3 {
            n_j = n_j + ej[i] * v_j[i];
        }
        let n_inv = n_j.recip_checked().ok_or(Error::Domain {
            subexpr: "eta . g^{-1} eta".into(),
            message: "the 1-form is null with respect to the metric at a sample point".into(),
        })?;
        let xi_j = [v_j[0] * n_inv, v_j[1] * n_inv, v_j[2] * n_inv];

        // h = (1/2)(xi^k d_k phi - (d xi) phi + phi (d xi))
        let mut dxi = ZERO_M3; // dxi[l][k] = d_k xi^l
        for l in 0..3 {
            for k in 0..3 {
                dxi[l][k] = xi_j[l].derivative(k).value();
            }
        }
        let xi = [xi_j[0].value(), xi_j[1].value(), xi_j[2].value()];
        let mut phi = ZERO_M3;
        let mut dphi_dir = ZERO_M3;
        for l in 0..3 {
            for j in 0..3 {
                phi[l][j] = phi_j[l][j].value();
                for k in 0..3 {
                    dphi_dir[l][j] += xi[k] * phi_j[l][j].derivative(k).value();
                }
            }
        }
        let h = scale(
            &add(&sub(&dphi_dir, &matmul(&dxi, &phi)), &matmul(&phi, &dxi)),
            0.5,
        );

        // curvature stack
        let gamma_j = christoffel_jets(&gj, p)?;
        let riem = riemann_from_gamma(&gamma_j);
        let ricci = ricci_from_riemann(&riem);
        let mut gamma = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    gamma[k][i][j] = gamma_j[k][i][j].value();
                }
            }
        }
        let mut g = ZERO_M3;
        let mut gi = ZERO_M3;
        let mut eta = [0.0; 3];
        let mut deta = ZERO_M3;
        for i in 0..3 {
            eta[i] = ej[i].value();
            for j in 0..3 {
                g[i][j] = gj[i][j].value();
                gi[i][j] = gij[i][j].value();
                deta[i][j] = deta_j[i][j].value();
            }
        }
        let mut scalar = 0.0;
        for j in 0..3 {
            for k in 0..3 {
                scalar += gi[j][k] * ricci[j][k];
            }
        }
        let mut ell = ZERO_M3;
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        ell[l][i] += riem[l][i][j][k] * xi[j] * xi[k];
                    }
                }
            }
        }
        Ok(Frame {
            p,
            g,
            gi,
            eta,
            xi,
            deta,
            phi,
            h,
            dxi,
            gamma,
            riem,
            ricci,
            scalar,
            ell,
        })
    }
}

// ---------------------------------------------------------------------------
// axioms

/// Residuals of the structure axioms at one frame.  All quantities come from
/// the exact pipeline, so a well-formed structure scores near machine
/// precision on every line.
pub fn axiom_residuals(fr: &Frame) -> Vec<(&'static str, f64)> {
    let Frame {
        g,
        gi: _,
        eta,
        xi,
        deta,
        phi,
        h,
        dxi,
        gamma,
        ell,
        ..
    } = fr;
    let mut out = Vec::with_capacity(14);

    // phi^2 = -I + xi (x) eta
    let phi2 = matmul(phi, phi);
    let target = sub(&outer(xi, eta), &IDENTITY);
    out.push(("phi^2 = -identity + xi (x) eta", norm_inf_m(&sub(&phi2, &target))));

    out.push(("eta(xi) = 1", (crate::tensor::dot(eta, xi) - 1.0).abs()));

    // g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)
    let gphi = matmul(&transpose(phi), &matmul(g, phi));
    let tgt = sub(g, &outer(eta, eta));
    out.push(("g(phi., phi.) = g - eta (x) eta", norm_inf_m(&sub(&gphi, &tgt))));

    // deta(X, Y) = g(X, phi Y)
    out.push(("2-form = g(., phi.)", norm_inf_m(&sub(deta, &matmul(g, phi)))));

    out.push(("phi xi = 0", norm_inf_v(&matvec(phi, xi))));

    // eta compose phi = 0 (row covector times matrix)
    out.push(("eta . phi = 0", norm_inf_v(&crate::tensor::vecmat(eta, phi))));

    // deta(X, xi) = 0
    out.push(("2-form annihilates xi", norm_inf_v(&matvec(deta, xi))));

    // nabla_i xi = -phi - phi h, with (nabla_i xi)^l = d_i xi^l + gamma^l_{i m} xi^m
    let mut nx = *dxi;
    for l in 0..3 {
        for i in 0..3 {
            for m in 0..3 {
                nx[l][i] += gamma[l][i][m] * xi[m];
            }
        }
    }
    let rhs = scale(&add(phi, &matmul(phi, h)), -1.0);
    out.push(("nabla xi = -phi - phi h", norm_inf_m(&sub(&nx, &rhs))));

    out.push(("tr h = 0", trace(h).abs()));
    out.push(("tr(phi h) = 0", trace(&matmul(phi, h)).abs()));

    out.push((
        "phi h + h phi = 0",
        norm_inf_m(&add(&matmul(phi, h), &matmul(h, phi))),
    ));

    out.push(("h xi = 0", norm_inf_v(&matvec(h, xi))));

    let gh = matmul(g, h);
    out.push(("g h symmetric", norm_inf_m(&sub(&gh, &transpose(&gh)))));

    out.push(("jacobi operator annihilates xi", norm_inf_v(&matvec(ell, xi))));

    out
}

// ---------------------------------------------------------------------------
// (kappa, mu) extraction

/// Pointwise classification of a certified structure.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum PointClass {
    /// `h = 0` (the extracted `kappa` is 1 within the cutoff).
    Degenerate { kappa: f64 },
    /// Non-degenerate point with extracted nullity scalars.
    Generalized {
        kappa: f64,
        mu: f64,
        theta: f64,
        /// `g`-unit eigenvector of `h` for `+theta`, sign-fixed.
        eigvec: V3,
    },
}

impl PointClass {
    /// Extracted `kappa` regardless of branch.
    pub fn kappa(&self) -> f64 {
        match self {
            PointClass::Degenerate { kappa } => *kappa,
            PointClass::Generalized { kappa, .. } => *kappa,
        }
    }

    /// Extracted `mu` for non-degenerate points.
    pub fn mu(&self) -> Option<f64> {
        match self {
            PointClass::Degenerate { .. } => None,
            PointClass::Generalized { mu, .. } => Some(*mu),
        }
    }
}

/// Extract `kappa = tr(ell) / 2` and, away from the degenerate case, `mu`
/// from the action of `ell - kappa` on the positive eigenvector of `h`.
pub fn extract_kappa_mu(fr: &Frame) -> PointClass {
    let kappa = 0.5 * trace(&fr.ell);
    if 1.0 - kappa < tol::SASAKIAN_CUTOFF {
        return PointClass::Degenerate { kappa };
    }
    let theta = (1.0 - kappa).sqrt();
    // kernel of (h - theta I) via the largest cross product of row pairs
    let m = sub(&fr.h, &scale(&IDENTITY, theta));
    let cands = [
        cross(&m[0], &m[1]),
        cross(&m[0], &m[2]),
        cross(&m[1], &m[2]),
    ];
    let mut x = cands[0];
    let mut best = norm_inf_v(&cands[0]);
    for c in &cands[1..] {
        let n = norm_inf_v(c);
        if n > best {
            best = n;
            x = *c;
        }
    }
    let norm = inner(&fr.g, &x, &x).sqrt();
    let mut x = vscale(&x, 1.0 / norm);
    for comp in x {
        if comp.abs() > tol::SIGN_EPS {
            if comp < 0.0 {
                x = vscale(&x, -1.0);
            }
            break;
        }
    }
    let hx = matvec(&fr.h, &x);
    let lx = matvec(&fr.ell, &x);
    let mu = inner(&fr.g, &vsub(&lx, &vscale(&x, kappa)), &hx) / inner(&fr.g, &hx, &hx);
    PointClass::Generalized {
        kappa,
        mu,
        theta,
        eigvec: x,
    }
}

/// Effective `mu` at a degenerate (`h = 0`) point, read off the Ricci tensor
/// on a `phi`-projected probe vector.
pub fn degenerate_mu(fr: &Frame) -> f64 {
    let probe = [0.3, -0.7, 0.5];
    let v = matvec(&fr.phi, &probe);
    let num = inner(&fr.ricci, &v, &v);
    // note: `inner` computes v^T ricci v since ricci is (0,2) symmetric
    -num / inner(&fr.g, &v, &v)
}

/// Max residual of `R(X, Y) xi = (kappa I + mu h)(eta(Y) X - eta(X) Y)` over
/// `n` random pairs drawn from `rng`.
pub fn defining_relation_residual(
    fr: &Frame,
    kappa: f64,
    mu: f64,
    n: usize,
    rng: &mut impl Rng,
) -> f64 {
    let op = add(&scale(&IDENTITY, kappa), &scale(&fr.h, mu));
    let mut worst = 0.0f64;
    for _ in 0..n {
        let x: V3 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let y: V3 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let mut lhs = [0.0; 3];
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        lhs[l] += fr.riem[l][i][j][k] * x[i] * y[j] * fr.xi[k];
                    }
                }
            }
        }
        let ex = crate::tensor::dot(&fr.eta, &x);
        let ey = crate::tensor::dot(&fr.eta, &y);
        let rhs = matvec(&op, &vsub(&vscale(&x, ey), &vscale(&y, ex)));
        worst = worst.max(norm_inf_v(&vsub(&lhs, &rhs)));
    }
    worst
}

// ---------------------------------------------------------------------------
// closed forms

/// Full curvature closed form determined by `(kappa, mu)` on a certified
/// structure:
/// `R(U,V)Z = -(kappa+mu)[g(V,Z)U - g(U,Z)V]`
/// `        + (2kappa+mu)[g(V,Z)eta(U)xi - g(U,Z)eta(V)xi + eta(V)eta(Z)U - eta(U)eta(Z)V]`
/// `        + mu[g(V,Z)hU - g(U,Z)hV + g(hV,Z)U - g(hU,Z)V]`.
pub fn curvature_closed_form(g: &M3, eta: &V3, xi: &V3, h: &M3, kappa: f64, mu: f64) -> T4 {
    let gh = matmul(g, h); // (g hV)_k = gh[k][j] for V = e_j
    let mut r = ZERO_T4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let gvz = g[j][k];
                let guz = g[i][k];
                let (eu, ev, ez) = (eta[i], eta[j], eta[k]);
                for l in 0..3 {
                    let u = if l == i { 1.0 } else { 0.0 };
                    let v = if l == j { 1.0 } else { 0.0 };
                    let hu = h[l][i];
                    let hv = h[l][j];
                    r[l][i][j][k] = -(kappa + mu) * (gvz * u - guz * v)
                        + (2.0 * kappa + mu)
                            * (gvz * eu * xi[l] - guz * ev * xi[l] + ev * ez * u - eu * ez * v)
                        + mu * (gvz * hu - guz * hv + gh[k][j] * u - gh[k][i] * v);
                }
            }
        }
    }
    r
}

/// Ricci closed form `S = -mu g + mu g h + (2kappa + mu) eta (x) eta`.
pub fn ricci_closed_form(g: &M3, h: &M3, eta: &V3, kappa: f64, mu: f64) -> M3 {
    let mut s = scale(g, -mu);
    let gh = matmul(g, h);
    for i in 0..3 {
        for j in 0..3 {
            s[i][j] += mu * gh[i][j] + (2.0 * kappa + mu) * eta[i] * eta[j];
        }
    }
    s
}

/// Residuals of the curvature, Ricci, and scalar reconstructions at a frame.
pub fn reconstruction_residuals(fr: &Frame, kappa: f64, mu: f64) -> (f64, f64, f64) {
    let rm = curvature_closed_form(&fr.g, &fr.eta, &fr.xi, &fr.h, kappa, mu);
    let mut dr = 0.0f64;
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    dr = dr.max((rm[l][i][j][k] - fr.riem[l][i][j][k]).abs());
                }
            }
        }
    }
    let sm = ricci_closed_form(&fr.g, &fr.h, &fr.eta, kappa, mu);
    let ds = norm_inf_m(&sub(&sm, &fr.ricci));
    let dscalar = (fr.scalar - 2.0 * (kappa - mu)).abs();
    (dr, ds, dscalar)
}

/// First Bianchi identity residual: cyclic sum of `R^l_{ijk}` over the three
/// lower slots.
pub fn bianchi_residual(r: &T4) -> f64 {
    let mut worst = 0.0f64;
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let c = r[l][i][j][k] + r[l][j][k][i] + r[l][k][i][j];
                    worst = worst.max(c.abs());
                }
            }
        }
    }
    worst
}

/// Spectrum certificate for `h`: residual of `det(h - theta I)` together with
/// the square identity `h^2 = theta^2 (I - xi (x) eta)`.
pub fn h_spectrum_residual(fr: &Frame, theta: f64) -> f64 {
    let m = sub(&fr.h, &scale(&IDENTITY, theta));
    let dplus = crate::tensor::det3(&m).abs();
    let m2 = add(&fr.h, &scale(&IDENTITY, theta));
    let dminus = crate::tensor::det3(&m2).abs();
    let h2 = matmul(&fr.h, &fr.h);
    let tgt = scale(&sub(&IDENTITY, &outer(&fr.xi, &fr.eta)), theta * theta);
    dplus.max(dminus).max(norm_inf_m(&sub(&h2, &tgt)))
}

// ---------------------------------------------------------------------------
// finite-difference environment and derivative identities

/// Central finite differences of pipeline outputs around a point.
#[derive(Clone, Debug)]
pub struct FdData {
    /// `dphi[m]` = partial of `phi` along axis `m`.
    pub dphi: [M3; 3],
    /// Partial of `h`.
    pub dh: [M3; 3],
    /// Partial of `g`.
    pub dg: [M3; 3],
    /// Gradient (partials) of extracted `kappa`.
    pub dkappa: V3,
    /// Gradient of extracted `mu`.
    pub dmu: V3,
    /// Gradient of the scalar curvature.
    pub dscalar: V3,
    /// Whether the center point (and its FD neighbours) are degenerate.
    pub degenerate: bool,
}

/// Build the finite-difference environment at `p` (six auxiliary frames).
pub fn fd_environment(cs: &ContactStructure, p: V3) -> Result<FdData> {
    let step = tol::FD_STEP;
    let mut dphi = [ZERO_M3; 3];
    let mut dh = [ZERO_M3; 3];
    let mut dg = [ZERO_M3; 3];
    let mut dkappa = [0.0; 3];
    let mut dmu = [0.0; 3];
    let mut dscalar = [0.0; 3];
    let mut degenerate = false;
    for m in 0..3 {
        let mut pp = p;
        let mut pm = p;
        pp[m] += step;
        pm[m] -= step;
        let frp = cs.frame(pp)?;
        let frm = cs.frame(pm)?;
        dphi[m] = scale(&sub(&frp.phi, &frm.phi), 0.5 / step);
        dh[m] = scale(&sub(&frp.h, &frm.h), 0.5 / step);
        dg[m] = scale(&sub(&frp.g, &frm.g), 0.5 / step);
        dscalar[m] = (frp.scalar - frm.scalar) / (2.0 * step);
        let cp = extract_kappa_mu(&frp);
        let cm = extract_kappa_mu(&frm);
        match (cp, cm) {
            (
                PointClass::Generalized { kappa: kp, mu: mp, .. },
                PointClass::Generalized { kappa: km, mu: mm, .. },
            ) => {
                dkappa[m] = (kp - km) / (2.0 * step);
                dmu[m] = (mp - mm) / (2.0 * step);
            }
            _ => {
                degenerate = true;
            }
        }
    }
    Ok(FdData {
        dphi,
        dh,
        dg,
        dkappa,
        dmu,
        dscalar,
        degenerate,
    })
}

/// Covariant derivative of a (1,1) field from its raw partials:
/// `(nabla_i T)^l_j = d_i T^l_j + gamma^l_{im} T^m_j - gamma^m_{ij} T^l_m`.
fn nabla_11(gamma: &[[[f64; 3]; 3]; 3], t: &M3, dt: &[M3; 3]) -> [[[f64; 3]; 3]; 3] {
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for l in 0..3 {
            for j in 0..3 {
                let mut v = dt[i][l][j];
                for m in 0..3 {
                    v += gamma[l][i][m] * t[m][j] - gamma[m][i][j] * t[l][m];
                }
                out[i][l][j] = v;
            }
        }
    }
    out
}

/// Residuals of the covariant structure identities at a frame.
#[derive(Clone, Debug)]
pub struct DerivativeIdentities {
    /// `(nabla_X phi) Y = [g(X,Y) + g(X,hY)] xi - eta(Y)(X + hX)`.
    pub nabla_phi: f64,
    /// The h-derivative identity with the eigenvalue-gradient terms included
    /// (exact for variable `kappa`):
    /// `(nabla_X h)Y = [(1-kappa) g(X, phi Y) - g(X, phi h Y)] xi`
    /// `  - eta(Y)[(1-kappa) phi X + phi h X] - mu eta(X) phi h Y`
    /// `  + (1/theta)[g(hX, Y) grad theta + g(h phi X, Y) phi grad theta]`.
    pub nabla_h: f64,
    /// The same identity with the gradient terms dropped (the constant-
    /// coefficient shortcut, valid only where `kappa` is constant).
    pub nabla_h_constant_coeff: f64,
    /// `xi . grad kappa` (degenerate points: 0).
    pub xi_kappa: f64,
    /// `xi . grad r` for the scalar curvature.
    pub xi_scalar: f64,
    /// `h grad mu = grad kappa`.
    pub h_grad_mu: f64,
    /// `nabla g = 0` via the same FD partials.
    pub nabla_g: f64,
}

/// Evaluate the derivative identities at a frame using its FD environment.
/// Random probe pairs `(X, Y)` come from `rng`.
pub fn derivative_identities(
    fr: &Frame,
    fd: &FdData,
    class: &PointClass,
    n_probes: usize,
    rng: &mut impl Rng,
) -> DerivativeIdentities {
    let nphi = nabla_11(&fr.gamma, &fr.phi, &fd.dphi);
    let nh = nabla_11(&fr.gamma, &fr.h, &fd.dh);
    let (kappa, mu, theta) = match class {
        PointClass::Generalized { kappa, mu, theta, .. } => (*kappa, *mu, *theta),
        PointClass::Degenerate { .. } => (1.0, 0.0, 1.0),
    };
    let degenerate = matches!(class, PointClass::Degenerate { .. });
    // grad theta = g^{-1} d theta, with d theta = -d kappa / (2 theta)
    let grad_theta = if degenerate || fd.degenerate {
        [0.0; 3]
    } else {
        matvec(&fr.gi, &vscale(&fd.dkappa, -0.5 / theta))
    };
    let phi_grad_theta = matvec(&fr.phi, &grad_theta);

    let mut worst_phi = 0.0f64;
    let mut worst_h = 0.0f64;
    let mut worst_h_cc = 0.0f64;
    for _ in 0..n_probes {
        let x: V3 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let y: V3 = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let hx = matvec(&fr.h, &x);
        let hy = matvec(&fr.h, &y);
        let phix = matvec(&fr.phi, &x);
        let phiy = matvec(&fr.phi, &y);
        let phihx = matvec(&fr.phi, &hx);
        let phihy = matvec(&fr.phi, &hy);
        let ex = crate::tensor::dot(&fr.eta, &x);
        let ey = crate::tensor::dot(&fr.eta, &y);

        // (nabla_X phi) Y
        let mut lhs = [0.0; 3];
        for i in 0..3 {
            for l in 0..3 {
                for j in 0..3 {
                    lhs[l] += x[i] * nphi[i][l][j] * y[j];
                }
            }
        }
        let c1 = inner(&fr.g, &x, &y) + inner(&fr.g, &x, &hy);
        let rhs = vsub(&vscale(&fr.xi, c1), &vscale(&vadd(&x, &hx), ey));
        worst_phi = worst_phi.max(norm_inf_v(&vsub(&lhs, &rhs)));

        // (nabla_X h) Y
        let mut lhs = [0.0; 3];
        for i in 0..3 {
            for l in 0..3 {
                for j in 0..3 {
                    lhs[l] += x[i] * nh[i][l][j] * y[j];
                }
            }
        }
        let c2 = (1.0 - kappa) * inner(&fr.g, &x, &phiy) - inner(&fr.g, &x, &phihy);
        let mut rhs = vscale(&fr.xi, c2);
        rhs = vsub(
            &rhs,
            &vscale(&vadd(&vscale(&phix, 1.0 - kappa), &phihx), ey),
        );
        rhs = vsub(&rhs, &vscale(&phihy, mu * ex));
        worst_h_cc = worst_h_cc.max(norm_inf_v(&vsub(&lhs, &rhs)));

        let hphix = matvec(&fr.h, &phix);
        let corr = vscale(
            &vadd(
                &vscale(&grad_theta, inner(&fr.g, &hx, &y)),
                &vscale(&phi_grad_theta, inner(&fr.g, &hphix, &y)),
            ),
            1.0 / theta,
        );
        worst_h = worst_h.max(norm_inf_v(&vsub(&vsub(&lhs, &rhs), &corr)));
    }

    // scalar identities along xi
    let xi_kappa = if degenerate || fd.degenerate {
        0.0
    } else {
        crate::tensor::dot(&fr.xi, &fd.dkappa).abs()
    };
    let xi_scalar = crate::tensor::dot(&fr.xi, &fd.dscalar).abs();
    let h_grad_mu = if degenerate || fd.degenerate {
        0.0
    } else {
        let gk = matvec(&fr.gi, &fd.dkappa);
        let gm = matvec(&fr.gi, &fd.dmu);
        norm_inf_v(&vsub(&matvec(&fr.h, &gm), &gk))
    };

    // metric compatibility
    let mut nabla_g = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = fd.dg[i][j][k];
                for m in 0..3 {
                    v -= fr.gamma[m][i][j] * fr.g[m][k] + fr.gamma[m][i][k] * fr.g[j][m];
                }
                nabla_g = nabla_g.max(v.abs());
            }
        }
    }

    DerivativeIdentities {
        nabla_phi: worst_phi,
        nabla_h: worst_h,
        nabla_h_constant_coeff: worst_h_cc,
        xi_kappa,
        xi_scalar,
        h_grad_mu,
        nabla_g,
    }
}

/// Pointwise (non-FD) identity residuals for a certified frame.
#[derive(Clone, Debug)]
pub struct PointIdentities {
    /// `h^2 = (kappa - 1) phi^2`.
    pub h_squared: f64,
    /// `Q phi - phi Q = 2 mu h phi` for the Ricci operator `Q = g^{-1} S`.
    pub ricci_commutator: f64,
    /// `S(., xi) = 2 kappa eta`.
    pub ricci_xi: f64,
    /// `r = 2 (kappa - mu)`.
    pub scalar_relation: f64,
}

/// Evaluate the pointwise identities with the given `(kappa, mu)`.
pub fn point_identities(fr: &Frame, kappa: f64, mu: f64) -> PointIdentities {
    let h2 = matmul(&fr.h, &fr.h);
    let phi2 = matmul(&fr.phi, &fr.phi);
    let h_squared = norm_inf_m(&sub(&h2, &scale(&phi2, kappa - 1.0)));
    let q = matmul(&fr.gi, &fr.ricci);
    let comm = sub(&matmul(&q, &fr.phi), &matmul(&fr.phi, &q));
    let target = scale(&matmul(&fr.h, &fr.phi), 2.0 * mu);
    let ricci_commutator = norm_inf_m(&sub(&comm, &target));
    let sxi = matvec(&fr.ricci, &fr.xi);
    let ricci_xi = norm_inf_v(&vsub(&sxi, &vscale(&fr.eta, 2.0 * kappa)));
    let scalar_relation = (fr.scalar - 2.0 * (kappa - mu)).abs();
    PointIdentities {
        h_squared,
        ricci_commutator,
        ricci_xi,
        scalar_relation,
    }
}

/// Max-norm of the Riemann tensor; used by flatness checks.
pub fn riemann_norm(fr: &Frame) -> f64 {
    norm_inf_t4(&fr.riem)
}
