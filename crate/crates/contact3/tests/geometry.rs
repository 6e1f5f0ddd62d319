//! Tests for the metric-to-curvature pipeline and slot-aware tensor values.

#![allow(clippy::needless_range_loop)] // index loops over fixed-size tensors

use contact3::geometry::{
    christoffel_values, ricci, riemann, riemann_values, scalar_curvature, MetricField,
};
use contact3::tensor::{inv3, tensor4, Slot, TensorValue};

const EXACT: f64 = 1e-12;
const SYM: f64 = 1e-9;

/// Diagonal metric `diag(1, 1, z^2)`: flat (a reparametrized product), with a
/// single nonzero Christoffel symbol family.
fn cylinder_like() -> MetricField {
    MetricField::parse_upper(["1", "0", "0", "1", "0", "z^2"]).unwrap()
}

#[test]
fn christoffel_of_diagonal_metric() {
    let m = cylinder_like();
    let p = [0.0, 0.0, 2.0];
    let gamma = christoffel_values(&m, p).unwrap();
    // Gamma^z_zz = (1/2) g^{zz} d_z g_zz = 1/z = 0.5; everything else vanishes
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let want = if (a, b, c) == (2, 2, 2) { 0.5 } else { 0.0 };
                assert!(
                    (gamma[a][b][c] - want).abs() < EXACT,
                    "Gamma^{a}_{b}{c} = {}",
                    gamma[a][b][c]
                );
            }
        }
    }
}

#[test]
fn flat_metric_has_zero_curvature() {
    let m = cylinder_like();
    for p in [[0.0, 0.0, 2.0], [1.0, -1.0, 0.5], [0.3, 0.7, 3.0]] {
        let r = riemann_values(&m, p).unwrap();
        let mut worst = 0.0f64;
        for l in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..3 {
                        worst = worst.max(r[l][i][j][k].abs());
                    }
                }
            }
        }
        assert!(worst < EXACT, "curvature {worst} at {p:?}");
        assert!(scalar_curvature(&m, p).unwrap().abs() < EXACT);
    }
}

/// A curved metric for symmetry checks: no zero components, no special
/// structure.
fn curved() -> MetricField {
    MetricField::parse_upper([
        "1 + x^2",
        "x*y/4",
        "0",
        "1 + sin(z)^2/2",
        "y/8",
        "2 + cos(x)",
    ])
    .unwrap()
}

#[test]
fn lowered_riemann_symmetries() {
    let m = curved();
    let p = [0.4, -0.3, 0.8];
    let g = m.value(p).unwrap();
    let up = riemann_values(&m, p).unwrap();
    // lower the first slot: R_{lijk} = g_{lm} R^m_{ijk}
    let mut low = [[[[0.0f64; 3]; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut acc = 0.0;
                    for mm in 0..3 {
                        acc += g[l][mm] * up[mm][i][j][k];
                    }
                    low[l][i][j][k] = acc;
                }
            }
        }
    }
    // with R(X, Y, Z, W) = g(R(X, Y) Z, W) = low[W][X][Y][Z]:
    let mut anti1 = 0.0f64; // antisymmetry in the arguments (X, Y)
    let mut anti2 = 0.0f64; // antisymmetry in (Z, W)
    let mut pair = 0.0f64; //  pair exchange (X, Y) <-> (Z, W)
    let mut bianchi = 0.0f64; // first Bianchi on lowered components
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    anti1 = anti1.max((low[l][i][j][k] + low[l][j][i][k]).abs());
                    anti2 = anti2.max((low[l][i][j][k] + low[k][i][j][l]).abs());
                    pair = pair.max((low[l][i][j][k] - low[j][k][l][i]).abs());
                    bianchi = bianchi
                        .max((low[l][i][j][k] + low[l][j][k][i] + low[l][k][i][j]).abs());
                }
            }
        }
    }
    assert!(anti1 < SYM, "argument antisymmetry {anti1}");
    assert!(anti2 < SYM, "value-pair antisymmetry {anti2}");
    assert!(pair < SYM, "pair-exchange symmetry {pair}");
    assert!(bianchi < SYM, "first Bianchi {bianchi}");
}

#[test]
fn ricci_is_symmetric() {
    let m = curved();
    let p = [0.1, 0.5, -0.6];
    let s = ricci(&m, p).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let a = s.get(&[i, j]);
            let b = s.get(&[j, i]);
            assert!((a - b).abs() < SYM, "S[{i}{j}] {a} vs {b}");
        }
    }
}

#[test]
fn raise_then_lower_is_identity() {
    let m = curved();
    let p = [0.4, -0.3, 0.8];
    let g = m.value(p).unwrap();
    let gi = inv3(&g).unwrap();
    let r: TensorValue = riemann(&m, p).unwrap();
    assert_eq!(
        r.slots,
        vec![Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower]
    );
    let lowered = r.lower(0, &g).unwrap();
    assert_eq!(lowered.slots[0], Slot::Lower);
    let back = lowered.raise(0, &gi).unwrap();
    for (a, b) in r.comps.iter().zip(back.comps.iter()) {
        assert!((a - b).abs() < SYM, "round trip {a} vs {b}");
    }
    // raising an already-upper slot is a slot error
    assert!(r.raise(0, &gi).is_err());
    assert!(lowered.lower(0, &g).is_err());
}

#[test]
fn contraction_matches_ricci() {
    let m = curved();
    let p = [0.2, 0.2, 0.9];
    let up = riemann_values(&m, p).unwrap();
    let r4 = tensor4(
        p,
        [Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower],
        &up,
    );
    // with riem[l][i][j][k] = (R(e_i, e_j) e_k)^l the Ricci tensor is the
    // trace over the value slot and the first argument: contract slots 0, 1
    let contracted = r4.contract(0, 1).unwrap();
    let s = ricci(&m, p).unwrap();
    for j in 0..3 {
        for k in 0..3 {
            let a = contracted.get(&[j, k]);
            let b = s.get(&[j, k]);
            assert!((a - b).abs() < SYM, "S[{j}{k}] {a} vs {b}");
        }
    }
    // contracting two lower slots is a slot error
    assert!(r4.contract(1, 2).is_err());
    // scalar curvature agrees with the double trace
    let gi = inv3(&m.value(p).unwrap()).unwrap();
    let mut dbl = 0.0;
    for j in 0..3 {
        for k in 0..3 {
            dbl += gi[j][k] * contracted.get(&[j, k]);
        }
    }
    let rs = scalar_curvature(&m, p).unwrap();
    assert!((dbl - rs).abs() < SYM, "scalar {dbl} vs {rs}");
}

#[test]
fn metric_compatibility_via_covariant_derivative() {
    let m = curved();
    let p = [0.4, -0.3, 0.8];
    // nabla g = 0, checked through the (0,2)-aware formula: here we verify
    // via the Christoffel definition d_i g_jk = Gamma^m_ij g_mk + Gamma^m_ik g_jm
    let gamma = christoffel_values(&m, p).unwrap();
    let g = m.value(p).unwrap();
    let step = 1e-4;
    for i in 0..3 {
        let mut pp = p;
        let mut pm = p;
        pp[i] += step;
        pm[i] -= step;
        let gp = m.value(pp).unwrap();
        let gm = m.value(pm).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let dg = (gp[j][k] - gm[j][k]) / (2.0 * step);
                let mut chris = 0.0;
                for mm in 0..3 {
                    chris += gamma[mm][i][j] * g[mm][k] + gamma[mm][i][k] * g[j][mm];
                }
                assert!(
                    (dg - chris).abs() < 1e-6,
                    "nabla g [{i}{j}{k}]: {dg} vs {chris}"
                );
            }
        }
    }
}

#[test]
fn singular_metric_is_rejected() {
    let m = MetricField::parse_upper(["1", "0", "0", "1", "0", "x"]).unwrap();
    // at x = 0 the metric is singular
    if m.value([0.0, 0.5, 0.5]).is_ok() {
        // value() may not check invertibility; the pipeline does
        assert!(christoffel_values(&m, [0.0, 0.5, 0.5]).is_err());
    }
}
