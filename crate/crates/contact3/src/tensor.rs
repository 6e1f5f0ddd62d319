//! Small dense tensor values on a 3-dimensional chart.
//!
//! Internally the engine works with fixed-size arrays (`[f64; 3]`,
//! `[[f64; 3]; 3]`, ...) for speed; [`TensorValue`] is the variance-tagged
//! public wrapper used by the API surface, supporting contraction and
//! index raising/lowering against a metric.

use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::tol;

/// Vector of components at a point.
pub type V3 = [f64; 3];
/// 3x3 matrix of components at a point.
pub type M3 = [[f64; 3]; 3];
/// Rank-4 component array (`[l][i][j][k]`).
pub type T4 = [[[[f64; 3]; 3]; 3]; 3];
/// Rank-6 component array.
pub type T6 = [[[[[[f64; 3]; 3]; 3]; 3]; 3]; 3];

pub const ZERO_M3: M3 = [[0.0; 3]; 3];
pub const ZERO_T4: T4 = [[[[0.0; 3]; 3]; 3]; 3];
pub const IDENTITY: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

// ---------------------------------------------------------------------------
// plain array helpers

#[inline]
pub fn matmul(a: &M3, b: &M3) -> M3 {
    let mut out = ZERO_M3;
    for i in 0..3 {
        for k in 0..3 {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..3 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

#[inline]
pub fn matvec(a: &M3, v: &V3) -> V3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

/// Row vector times matrix: `(v^T a)_j`.
#[inline]
pub fn vecmat(v: &V3, a: &M3) -> V3 {
    let mut out = [0.0; 3];
    for j in 0..3 {
        for i in 0..3 {
            out[j] += v[i] * a[i][j];
        }
    }
    out
}

#[inline]
pub fn dot(a: &V3, b: &V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Metric pairing `g(a, b)`.
#[inline]
pub fn inner(g: &M3, a: &V3, b: &V3) -> f64 {
    dot(&matvec(g, b), a)
}

#[inline]
pub fn cross(a: &V3, b: &V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn outer(a: &V3, b: &V3) -> M3 {
    let mut out = ZERO_M3;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i] * b[j];
        }
    }
    out
}

#[inline]
pub fn transpose(a: &M3) -> M3 {
    let mut out = ZERO_M3;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

#[inline]
pub fn trace(a: &M3) -> f64 {
    a[0][0] + a[1][1] + a[2][2]
}

#[inline]
pub fn scale(a: &M3, s: f64) -> M3 {
    let mut out = *a;
    for row in &mut out {
        for v in row {
            *v *= s;
        }
    }
    out
}

#[inline]
pub fn add(a: &M3, b: &M3) -> M3 {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] += b[i][j];
        }
    }
    out
}

#[inline]
pub fn sub(a: &M3, b: &M3) -> M3 {
    let mut out = *a;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

#[inline]
pub fn vadd(a: &V3, b: &V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn vsub(a: &V3, b: &V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn vscale(a: &V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn norm_inf_v(v: &V3) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[inline]
pub fn norm_inf_m(a: &M3) -> f64 {
    a.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn norm_inf_t4(t: &T4) -> f64 {
    let mut m = 0.0f64;
    for a in t.iter().flatten().flatten().flatten() {
        m = m.max(a.abs());
    }
    m
}

pub fn norm_inf_t6(t: &T6) -> f64 {
    let mut m = 0.0f64;
    for l1 in t.iter() {
        for l2 in l1.iter().flatten().flatten().flatten().flatten() {
            m = m.max(l2.abs());
        }
    }
    m
}

pub fn det3(a: &M3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Inverse via the adjugate; `None` when `|det|` is below the singularity
/// threshold.
pub fn inv3(a: &M3) -> Option<M3> {
    let d = det3(a);
    if d.abs() < tol::SINGULAR_DET {
        return None;
    }
    let id = 1.0 / d;
    let mut out = ZERO_M3;
    for i in 0..3 {
        for j in 0..3 {
            let i1 = (i + 1) % 3;
            let i2 = (i + 2) % 3;
            let j1 = (j + 1) % 3;
            let j2 = (j + 2) % 3;
            // adjugate: cofactor of (j, i)
            out[i][j] = (a[j1][i1] * a[j2][i2] - a[j1][i2] * a[j2][i1]) * id;
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// jet matrix inverse (adjugate over the truncated polynomial ring)

/// Invert a 3x3 matrix of jets; exact through the truncation degree.  Errors
/// with [`Error::SingularMetric`] when the determinant value is below the
/// singularity threshold.
pub fn jet_inv3(a: &[[Jet3; 3]; 3], point: V3) -> Result<[[Jet3; 3]; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.value().abs() < tol::SINGULAR_DET {
        return Err(Error::SingularMetric { point });
    }
    let inv_det = {
        let u = det.value();
        let iu = 1.0 / u;
        det.compose([iu, -iu * iu, iu * iu * iu, -iu * iu * iu * iu])
    };
    let mut out = [[Jet3::constant(0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let i1 = (i + 1) % 3;
            let i2 = (i + 2) % 3;
            let j1 = (j + 1) % 3;
            let j2 = (j + 2) % 3;
            let cof = a[j1][i1] * a[j2][i2] - a[j1][i2] * a[j2][i1];
            out[i][j] = cof * inv_det;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// variance-tagged tensor values

/// Variance of one tensor slot.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Contravariant (upper) index.
    Upper,
    /// Covariant (lower) index.
    Lower,
}

/// A tensor's components at a single chart point, tagged slot by slot with
/// variance.  Components are stored row-major: the last slot varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorValue {
    /// Evaluation point.
    pub point: V3,
    /// Variance of each slot, outermost first.
    pub slots: Vec<Slot>,
    /// `3^rank` components.
    pub comps: Vec<f64>,
}

impl TensorValue {
    /// Build from raw parts; panics if the component count is not `3^rank`.
    pub fn new(point: V3, slots: Vec<Slot>, comps: Vec<f64>) -> TensorValue {
        assert_eq!(comps.len(), 3usize.pow(slots.len() as u32));
        TensorValue { point, slots, comps }
    }

    /// Number of slots.
    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * 3 + i)
    }

    /// Component at a multi-index.
    pub fn get(&self, idx: &[usize]) -> f64 {
        self.comps[self.offset(idx)]
    }

    /// Largest absolute component.
    pub fn norm_inf(&self) -> f64 {
        self.comps.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Contract one upper slot against one lower slot, producing a tensor of
    /// rank two less.
    pub fn contract(&self, a: usize, b: usize) -> Result<TensorValue> {
        let rank = self.rank();
        if a >= rank || b >= rank || a == b {
            return Err(Error::Slot(format!(
                "contract slots ({a}, {b}) out of range for rank {rank}"
            )));
        }
        if self.slots[a] == self.slots[b] {
            return Err(Error::Slot(format!(
                "contract requires opposite variance; slots {a} and {b} are both {:?}",
                self.slots[a]
            )));
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut slots = self.slots.clone();
        slots.remove(hi);
        slots.remove(lo);
        let out_rank = rank - 2;
        let mut comps = vec![0.0; 3usize.pow(out_rank as u32)];
        let mut idx = vec![0usize; rank];
        let mut out_idx = vec![0usize; out_rank];
        for (flat, c) in comps.iter_mut().enumerate() {
            // decode flat output index
            let mut rem = flat;
            for pos in (0..out_rank).rev() {
                out_idx[pos] = rem % 3;
                rem /= 3;
            }
            let mut sum = 0.0;
            for d in 0..3 {
                let mut take = 0;
                for pos in 0..rank {
                    if pos == lo || pos == hi {
                        idx[pos] = d;
                    } else {
                        idx[pos] = out_idx[take];
                        take += 1;
                    }
                }
                sum += self.get(&idx);
            }
            *c = sum;
        }
        Ok(TensorValue { point: self.point, slots, comps })
    }

    /// Raise a lower slot with the inverse metric.
    pub fn raise(&self, slot: usize, g_inv: &M3) -> Result<TensorValue> {
        self.convert(slot, g_inv, Slot::Lower, Slot::Upper)
    }

    /// Lower an upper slot with the metric.
    pub fn lower(&self, slot: usize, g: &M3) -> Result<TensorValue> {
        self.convert(slot, g, Slot::Upper, Slot::Lower)
    }

    fn convert(&self, slot: usize, m: &M3, from: Slot, to: Slot) -> Result<TensorValue> {
        let rank = self.rank();
        if slot >= rank {
            return Err(Error::Slot(format!(
                "slot {slot} out of range for rank {rank}"
            )));
        }
        if self.slots[slot] != from {
            return Err(Error::Slot(format!(
                "slot {slot} is {:?}, expected {:?}",
                self.slots[slot], from
            )));
        }
        let mut slots = self.slots.clone();
        slots[slot] = to;
        let stride = 3usize.pow((rank - 1 - slot) as u32);
        let mut comps = vec![0.0; self.comps.len()];
        for (flat, c) in comps.iter_mut().enumerate() {
            let s = (flat / stride) % 3;
            let base = flat - s * stride;
            let mut sum = 0.0;
            for d in 0..3 {
                sum += m[s][d] * self.comps[base + d * stride];
            }
            *c = sum;
        }
        Ok(TensorValue { point: self.point, slots, comps })
    }
}

/// Wrap a rank-2 array as a TensorValue.
pub fn tensor2(point: V3, slots: [Slot; 2], m: &M3) -> TensorValue {
    let mut comps = Vec::with_capacity(9);
    for row in m {
        comps.extend_from_slice(row);
    }
    TensorValue::new(point, slots.to_vec(), comps)
}

/// Wrap a rank-4 array (`[l][i][j][k]`) as a TensorValue.
pub fn tensor4(point: V3, slots: [Slot; 4], t: &T4) -> TensorValue {
    let mut comps = Vec::with_capacity(81);
    for a in t {
        for b in a {
            for c in b {
                comps.extend_from_slice(c);
            }
        }
    }
    TensorValue::new(point, slots.to_vec(), comps)
}
