//! Deterministic low-discrepancy sampling of chart domains.
//!
//! Points come from the Halton sequence in bases (2, 3, 5), mapped affinely
//! into the domain box.  The seed offsets the sequence start index, so the
//! same `(domain, n, seed)` triple always yields the same points.  Candidate
//! points that land within a small margin of an excluded locus are rejected
//! and replaced by the next sequence element.

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::tol;

/// Halton bases for the three coordinates.
pub const HALTON_BASES: [u64; 3] = [2, 3, 5];

/// A chart domain: one closed interval per coordinate plus excluded loci
/// given as expressions whose zero sets are cut out of the domain.
#[derive(Clone, Debug)]
pub struct Domain {
    /// Inclusive `[lo, hi]` per coordinate, in `x, y, z` order.
    pub intervals: [[f64; 2]; 3],
    /// Expressions whose near-zeros are rejected during sampling.
    pub excluded: Vec<Expr>,
}

impl Domain {
    /// Validate the interval bounds.
    pub fn validate(&self) -> Result<()> {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        for (axis, iv) in self.intervals.iter().enumerate() {
            if !(iv[0].is_finite() && iv[1].is_finite()) {
                return Err(Error::Manifest(format!(
                    "domain interval for {} must be finite, got [{}, {}]",
                    NAMES[axis], iv[0], iv[1]
                )));
            }
            if iv[0] >= iv[1] {
                return Err(Error::Manifest(format!(
                    "domain interval for {} is empty: [{}, {}]",
                    NAMES[axis], iv[0], iv[1]
                )));
            }
        }
        Ok(())
    }
}

/// Radical inverse of `index` in `base`: the digits of `index` mirrored
/// around the radix point.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut factor = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * factor;
        index /= base;
        factor *= inv;
    }
    value
}

/// The raw Halton point at `index` in the unit cube.
pub fn halton(index: u64) -> [f64; 3] {
    [
        radical_inverse(index, HALTON_BASES[0]),
        radical_inverse(index, HALTON_BASES[1]),
        radical_inverse(index, HALTON_BASES[2]),
    ]
}

/// Deterministically sample `n` points of the domain, skipping points within
/// the exclusion margin of any excluded locus.
pub fn sample_points(domain: &Domain, n: usize, seed: u64) -> Result<Vec<[f64; 3]>> {
    domain.validate()?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let start = seed.wrapping_add(1).max(1);
    let budget = (n as u64).saturating_mul(100).max(1000);
    let mut out = Vec::with_capacity(n);
    let mut index = start;
    let mut attempts = 0u64;
    while out.len() < n && attempts < budget {
        let unit = halton(index);
        index = index.wrapping_add(1);
        attempts += 1;
        let mut p = [0.0; 3];
        for axis in 0..3 {
            let [lo, hi] = domain.intervals[axis];
            p[axis] = lo + unit[axis] * (hi - lo);
        }
        let mut rejected = false;
        for locus in &domain.excluded {
            let value = expr::eval(locus, p)?;
            if value.abs() < tol::EXCLUDED_LOCUS {
                rejected = true;
                break;
            }
        }
        if !rejected {
            out.push(p);
        }
    }
    if out.len() < n {
        return Err(Error::SamplingExhausted {
            placed: out.len(),
            requested: n,
        });
    }
    Ok(out)
}
