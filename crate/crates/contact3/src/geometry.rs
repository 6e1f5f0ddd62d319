//! Metric fields and the exact curvature pipeline.
//!
//! Metric components are closed-form expressions; their degree-3 jets carry
//! second derivatives through matrix inversion, Christoffel symbols, and the
//! Riemann tensor without finite differencing.  Covariant derivatives of
//! fields that are only available pointwise (callables) use central finite
//! differences with the step in [`crate::tol::FD_STEP`].

use crate::error::{Error, Result};
use crate::expr::{eval, parse, Expr};
use crate::jet::{eval_jet, Jet3};
use crate::tensor::{
    jet_inv3, tensor2, tensor4, Slot, TensorValue, M3, T4, V3, ZERO_M3, ZERO_T4,
};
use crate::tol;

/// Symmetric metric tensor field with expression components.
#[derive(Clone, Debug)]
pub struct MetricField {
    comps: [[Expr; 3]; 3],
}

impl MetricField {
    /// Build from the upper triangle `(g11, g12, g13, g22, g23, g33)`; the
    /// lower triangle is filled symmetrically.
    pub fn from_upper(upper: [Expr; 6]) -> MetricField {
        let [g11, g12, g13, g22, g23, g33] = upper;
        MetricField {
            comps: [
                [g11.clone(), g12.clone(), g13.clone()],
                [g12, g22.clone(), g23.clone()],
                [g13, g23, g33],
            ],
        }
    }

    /// Parse the six upper-triangle component sources.
    pub fn parse_upper(srcs: [&str; 6]) -> Result<MetricField> {
        Ok(MetricField::from_upper([
            parse(srcs[0])?,
            parse(srcs[1])?,
            parse(srcs[2])?,
            parse(srcs[3])?,
            parse(srcs[4])?,
            parse(srcs[5])?,
        ]))
    }

    /// Component expression at `(i, j)`.
    pub fn component(&self, i: usize, j: usize) -> &Expr {
        &self.comps[i][j]
    }

    /// Metric values at a point.
    pub fn value(&self, p: V3) -> Result<M3> {
        let mut g = ZERO_M3;
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = eval(&self.comps[i][j], p)?;
            }
        }
        Ok(g)
    }

    /// Degree-3 jets of the metric components at a point.
    pub fn jets(&self, p: V3) -> Result<[[Jet3; 3]; 3]> {
        let mut g = [[Jet3::constant(0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let jet = eval_jet(&self.comps[i][j], p)?;
                g[i][j] = jet;
                g[j][i] = jet;
            }
        }
        Ok(g)
    }
}

/// Jets of the Christoffel symbols `Gamma^k_{ij}` (index order `[k][i][j]`).
pub fn christoffel_jets(g: &[[Jet3; 3]; 3], p: V3) -> Result<[[[Jet3; 3]; 3]; 3]> {
    let gi = jet_inv3(g, p)?;
    // dg[i][j][l] = d_i g_{jl}
    let mut dg = [[[Jet3::constant(0.0); 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                dg[i][j][l] = g[j][l].derivative(i);
            }
        }
    }
    let mut gamma = [[[Jet3::constant(0.0); 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..=i {
                let mut acc = Jet3::constant(0.0);
                for l in 0..3 {
                    acc = acc + gi[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
                let half = acc * 0.5;
                gamma[k][i][j] = half;
                gamma[k][j][i] = half;
            }
        }
    }
    Ok(gamma)
}

/// Christoffel symbol values `Gamma^k_{ij}` at a point.
pub fn christoffel_values(m: &MetricField, p: V3) -> Result<[[[f64; 3]; 3]; 3]> {
    let gj = m.jets(p)?;
    let gamma = christoffel_jets(&gj, p)?;
    let mut out = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                out[k][i][j] = gamma[k][i][j].value();
            }
        }
    }
    Ok(out)
}

/// Christoffel symbols as a variance-tagged tensor value (upper, lower,
/// lower; component order `[k][i][j]`).
pub fn christoffel(m: &MetricField, p: V3) -> Result<TensorValue> {
    let g = christoffel_values(m, p)?;
    let mut comps = Vec::with_capacity(27);
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                comps.push(g[k][i][j]);
            }
        }
    }
    Ok(TensorValue::new(
        p,
        vec![Slot::Upper, Slot::Lower, Slot::Lower],
        comps,
    ))
}

/// Riemann tensor values `R^l_{ijk}` from Christoffel jets:
/// `R(e_i, e_j) e_k = R^l_{ijk} e_l` with
/// `R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
///             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}`.
pub fn riemann_from_gamma(gamma: &[[[Jet3; 3]; 3]; 3]) -> T4 {
    let mut r = ZERO_T4;
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut v = gamma[l][j][k].derivative(i).value()
                        - gamma[l][i][k].derivative(j).value();
                    for m in 0..3 {
                        v += gamma[l][i][m].value() * gamma[m][j][k].value()
                            - gamma[l][j][m].value() * gamma[m][i][k].value();
                    }
                    r[l][i][j][k] = v;
                }
            }
        }
    }
    r
}

/// Riemann tensor values at a point.
pub fn riemann_values(m: &MetricField, p: V3) -> Result<T4> {
    let gj = m.jets(p)?;
    let gamma = christoffel_jets(&gj, p)?;
    Ok(riemann_from_gamma(&gamma))
}

/// Riemann tensor as a variance-tagged tensor value (`[l][i][j][k]`, slots
/// upper, lower, lower, lower).
pub fn riemann(m: &MetricField, p: V3) -> Result<TensorValue> {
    let r = riemann_values(m, p)?;
    Ok(tensor4(
        p,
        [Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower],
        &r,
    ))
}

/// Ricci tensor `S_{jk} = R^i_{ijk}` from Riemann values.
pub fn ricci_from_riemann(r: &T4) -> M3 {
    let mut s = ZERO_M3;
    for j in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                s[j][k] += r[i][i][j][k];
            }
        }
    }
    s
}

/// Ricci tensor values at a point.
pub fn ricci(m: &MetricField, p: V3) -> Result<TensorValue> {
    let r = riemann_values(m, p)?;
    let s = ricci_from_riemann(&r);
    Ok(tensor2(p, [Slot::Lower, Slot::Lower], &s))
}

/// Scalar curvature `r = g^{jk} S_{jk}` at a point.
pub fn scalar_curvature(m: &MetricField, p: V3) -> Result<f64> {
    let g = m.value(p)?;
    let gi = crate::tensor::inv3(&g).ok_or(Error::SingularMetric { point: p })?;
    let r = riemann_values(m, p)?;
    let s = ricci_from_riemann(&r);
    let mut out = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            out += gi[j][k] * s[j][k];
        }
    }
    Ok(out)
}

/// Covariant derivative of a pointwise-evaluable (1,1) field:
/// `(nabla_i T)^l_j = d_i T^l_j + Gamma^l_{im} T^m_j - Gamma^m_{ij} T^l_m`,
/// with `d_i` by central finite differences.  Returns `[i][l][j]`.
pub fn covariant_derivative_11<F>(m: &MetricField, p: V3, field: F) -> Result<[[[f64; 3]; 3]; 3]>
where
    F: Fn(V3) -> Result<M3>,
{
    let gamma = christoffel_values(m, p)?;
    let t = field(p)?;
    let step = tol::FD_STEP;
    let mut out = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        let mut pp = p;
        let mut pm = p;
        pp[i] += step;
        pm[i] -= step;
        let tp = field(pp)?;
        let tm = field(pm)?;
        for l in 0..3 {
            for j in 0..3 {
                let mut v = (tp[l][j] - tm[l][j]) / (2.0 * step);
                for mm in 0..3 {
                    v += gamma[l][i][mm] * t[mm][j] - gamma[mm][i][j] * t[l][mm];
                }
                out[i][l][j] = v;
            }
        }
    }
    Ok(out)
}

/// Covariant derivative of a pointwise-evaluable scalar: the plain gradient,
/// by central finite differences.  Returns `[d_x f, d_y f, d_z f]`.
pub fn gradient_fd<F>(p: V3, f: F) -> Result<V3>
where
    F: Fn(V3) -> Result<f64>,
{
    let step = tol::FD_STEP;
    let mut out = [0.0; 3];
    for i in 0..3 {
        let mut pp = p;
        let mut pm = p;
        pp[i] += step;
        pm[i] -= step;
        out[i] = (f(pp)? - f(pm)?) / (2.0 * step);
    }
    Ok(out)
}
