//! The built-in manifold gallery.
//!
//! Five shipped manifests cover the structural landscape the engine
//! certifies: a Sasakian entry, a flat entry, an entry with pointwise-varying
//! `(kappa, mu)`, a `(kappa, mu)`-constant entry, and a `mu = 0` entry.
//! Every entry's expected properties are validated by the check suite — the
//! gallery asserts nothing the axioms do not re-derive.

use crate::error::Result;
use crate::manifest::ManifoldManifest;

/// Raw manifest sources shipped with the crate, in canonical order.
pub const BUILTIN_SOURCES: [&str; 5] = [
    include_str!("../manifests/sasakian_heisenberg.toml"),
    include_str!("../manifests/flat_rotating.toml"),
    include_str!("../manifests/kmu_nonconstant.toml"),
    include_str!("../manifests/kmu_constant.toml"),
    include_str!("../manifests/kmu_mu_zero.toml"),
];

/// Parse every built-in manifest.
pub fn builtin_manifests() -> Result<Vec<ManifoldManifest>> {
    BUILTIN_SOURCES
        .iter()
        .map(|src| ManifoldManifest::from_toml_str(src))
        .collect()
}

/// Parse the built-in manifests whose names contain `filter` (all of them
/// when `filter` is `None`).
pub fn filtered_manifests(filter: Option<&str>) -> Result<Vec<ManifoldManifest>> {
    let all = builtin_manifests()?;
    Ok(match filter {
        None => all,
        Some(f) => all.into_iter().filter(|m| m.name.contains(f)).collect(),
    })
}
