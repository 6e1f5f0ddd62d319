//! Tests for contact metric structure assembly, certification, nullity
//! extraction, and the identity suite, pinned against the built-in gallery.

#![allow(clippy::needless_range_loop)] // index loops over fixed-size tensors

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use contact3::contact::{
    axiom_residuals, defining_relation_residual, degenerate_mu, derivative_identities,
    extract_kappa_mu, fd_environment, h_spectrum_residual, point_identities,
    reconstruction_residuals, ContactStructure, PointClass,
};
use contact3::gallery::builtin_manifests;
use contact3::manifest::ManifoldManifest;
use contact3::sample::sample_points;
use contact3::tensor::{matvec, norm_inf_m, norm_inf_v, trace, vsub};
use contact3::tol;

fn entry(name: &str) -> ManifoldManifest {
    builtin_manifests()
        .unwrap()
        .into_iter()
        .find(|m| m.name.contains(name))
        .unwrap_or_else(|| panic!("gallery entry containing `{name}`"))
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(7)
}

#[test]
fn axioms_hold_on_every_gallery_entry() {
    for man in builtin_manifests().unwrap() {
        let cs = man.contact_structure();
        let points = sample_points(&man.domain, 8, 1).unwrap();
        for p in points {
            let fr = cs.frame(p).unwrap();
            for (name, res) in axiom_residuals(&fr) {
                assert!(
                    res < tol::AXIOM,
                    "{}: axiom `{name}` residual {res:e} at {p:?}",
                    man.name
                );
            }
        }
    }
}

#[test]
fn nonconstant_entry_has_known_nullity_profile() {
    // kappa and mu depend only on z for this entry; closed forms are known
    let man = entry("nonconstant");
    let cs = man.contact_structure();
    for (point, want_kappa, want_mu) in [
        ([0.3, -0.4, 2.0], 15.0 / 16.0, 1.5),
        ([0.1, 0.2, 1.5], 65.0 / 81.0, 10.0 / 9.0),
        ([-0.9, 0.7, 2.0], 15.0 / 16.0, 1.5),
    ] {
        let fr = cs.frame(point).unwrap();
        match extract_kappa_mu(&fr) {
            PointClass::Generalized { kappa, mu, theta, .. } => {
                assert!((kappa - want_kappa).abs() < 1e-9, "kappa {kappa} at {point:?}");
                assert!((mu - want_mu).abs() < 1e-9, "mu {mu} at {point:?}");
                assert!((theta - (1.0 - want_kappa).sqrt()).abs() < 1e-9);
            }
            PointClass::Degenerate { .. } => panic!("unexpected degenerate point {point:?}"),
        }
    }
}

#[test]
fn sasakian_entry_is_degenerate_with_unit_kappa() {
    let man = entry("sasakian");
    let cs = man.contact_structure();
    let points = sample_points(&man.domain, 6, 3).unwrap();
    for p in points {
        let fr = cs.frame(p).unwrap();
        assert!(norm_inf_m(&fr.h) < 1e-10, "h vanishes, got {:e}", norm_inf_m(&fr.h));
        match extract_kappa_mu(&fr) {
            PointClass::Degenerate { kappa } => {
                assert!((kappa - 1.0).abs() < 1e-9, "kappa {kappa}");
            }
            PointClass::Generalized { theta, .. } => {
                panic!("expected degenerate point, extracted theta {theta}")
            }
        }
        // the Ricci probe still determines an effective mu, and the scalar
        // curvature matches r = 2 (kappa - mu)
        let mu = degenerate_mu(&fr);
        assert!((mu - 2.0).abs() < 1e-9, "effective mu {mu}");
        assert!((fr.scalar + 2.0).abs() < 1e-9, "scalar {}", fr.scalar);
        // closed-form reconstructions hold with (kappa, mu) = (1, 2)
        let (dr, ds, dscalar) = reconstruction_residuals(&fr, 1.0, mu);
        assert!(dr < 1e-9 && ds < 1e-9 && dscalar < 1e-9, "{dr:e} {ds:e} {dscalar:e}");
    }
}

#[test]
fn flat_entry_annihilates_the_jacobi_operator() {
    let man = entry("flat");
    let cs = man.contact_structure();
    let points = sample_points(&man.domain, 6, 5).unwrap();
    for p in points {
        let fr = cs.frame(p).unwrap();
        assert!(norm_inf_m(&fr.ell) < 1e-12, "l = R(., xi) xi vanishes");
        match extract_kappa_mu(&fr) {
            PointClass::Generalized { kappa, mu, theta, .. } => {
                assert!(kappa.abs() < 1e-10 && mu.abs() < 1e-10);
                assert!((theta - 1.0).abs() < 1e-10);
            }
            PointClass::Degenerate { .. } => panic!("flat entry has h != 0"),
        }
    }
}

#[test]
fn broken_structure_fails_certification() {
    // identity metric with a closed contact form: d eta = 0 forces phi = 0,
    // which cannot square to -identity + xi (x) eta
    let cs = ContactStructure::parse(
        ["1", "0", "0", "1", "0", "1"],
        ["0", "0", "1"],
    )
    .unwrap();
    let fr = cs.frame([0.2, 0.3, 0.4]).unwrap();
    let residuals = axiom_residuals(&fr);
    let squared = residuals
        .iter()
        .find(|(name, _)| name.starts_with("phi^2"))
        .unwrap();
    assert!(
        squared.1 > 0.5,
        "phi^2 axiom should fail loudly, got {:e}",
        squared.1
    );
}

#[test]
fn spectrum_and_defining_relation_certify() {
    let mut rng = rng();
    for name in ["nonconstant", "constant", "mu-zero"] {
        let man = entry(name);
        let cs = man.contact_structure();
        let points = sample_points(&man.domain, 5, 11).unwrap();
        for p in points {
            let fr = cs.frame(p).unwrap();
            match extract_kappa_mu(&fr) {
                PointClass::Generalized { kappa, mu, theta, .. } => {
                    assert!(h_spectrum_residual(&fr, theta) < 1e-9);
                    let d = defining_relation_residual(&fr, kappa, mu, 6, &mut rng);
                    assert!(d < 1e-9, "{name}: defining relation {d:e} at {p:?}");
                    let (dr, ds, dscalar) = reconstruction_residuals(&fr, kappa, mu);
                    assert!(dr < 1e-9 && ds < 1e-9 && dscalar < 1e-9);
                }
                PointClass::Degenerate { .. } => panic!("{name} must be nondegenerate"),
            }
        }
    }
}

#[test]
fn pointwise_identities_on_constant_entry() {
    let man = entry("kmu-constant");
    let cs = man.contact_structure();
    let fr = cs.frame([0.25, -0.5, 0.75]).unwrap();
    let class = extract_kappa_mu(&fr);
    let (kappa, mu) = match class {
        PointClass::Generalized { kappa, mu, .. } => (kappa, mu),
        _ => panic!("nondegenerate"),
    };
    assert!((kappa - 0.75).abs() < 1e-10, "kappa {kappa}");
    assert!((mu - 1.0).abs() < 1e-10, "mu {mu}");
    let ids = point_identities(&fr, kappa, mu);
    assert!(ids.h_squared < 1e-10);
    assert!(ids.ricci_commutator < 1e-10);
    assert!(ids.ricci_xi < 1e-10);
    assert!(ids.scalar_relation < 1e-10);
    // r = 2 (kappa - mu) = -0.5 for this entry
    assert!((fr.scalar + 0.5).abs() < 1e-10, "scalar {}", fr.scalar);
}

#[test]
fn gradient_form_of_h_identity_certifies_where_printed_form_breaks() {
    let man = entry("nonconstant");
    let cs = man.contact_structure();
    let mut rng = rng();
    let mut worst_gradient = 0.0f64;
    let mut worst_printed = 0.0f64;
    for p in [[0.3, -0.4, 2.0], [0.1, 0.2, 1.5], [-0.5, 0.6, 1.8]] {
        let fr = cs.frame(p).unwrap();
        let class = extract_kappa_mu(&fr);
        let fd = fd_environment(&cs, p).unwrap();
        let der = derivative_identities(&fr, &fd, &class, 8, &mut rng);
        worst_gradient = worst_gradient.max(der.nabla_h);
        worst_printed = worst_printed.max(der.nabla_h_constant_coeff);
        assert!(der.nabla_phi < tol::FD_IDENTITY, "nabla phi {:e}", der.nabla_phi);
        assert!(der.xi_kappa < tol::FD_IDENTITY);
        assert!(der.xi_scalar < tol::FD_IDENTITY);
        assert!(der.h_grad_mu < tol::FD_IDENTITY);
        assert!(der.nabla_g < tol::FD_IDENTITY);
    }
    // the gradient-corrected identity holds; the constant-coefficient form
    // genuinely does not when kappa varies across the chart
    assert!(
        worst_gradient < tol::FD_IDENTITY,
        "gradient form {worst_gradient:e}"
    );
    assert!(
        worst_printed > 0.1,
        "constant-coefficient form should fail here, got {worst_printed:e}"
    );
}

#[test]
fn both_h_identity_forms_agree_when_kappa_is_constant() {
    let man = entry("kmu-constant");
    let cs = man.contact_structure();
    let mut rng = rng();
    for p in [[0.25, -0.5, 0.75], [-0.8, 0.1, 0.3]] {
        let fr = cs.frame(p).unwrap();
        let class = extract_kappa_mu(&fr);
        let fd = fd_environment(&cs, p).unwrap();
        let der = derivative_identities(&fr, &fd, &class, 8, &mut rng);
        assert!(der.nabla_h < tol::FD_IDENTITY);
        assert!(
            der.nabla_h_constant_coeff < tol::FD_IDENTITY,
            "constant-coefficient form holds for constant kappa, got {:e}",
            der.nabla_h_constant_coeff
        );
    }
}

#[test]
fn sasakian_derivative_identities_reduce() {
    // with h = 0 the phi-derivative identity collapses to
    // (nabla_X phi) Y = g(X, Y) xi - eta(Y) X, and the h identity to 0 = 0
    let man = entry("sasakian");
    let cs = man.contact_structure();
    let mut rng = rng();
    let p = [0.4, -0.2, 0.6];
    let fr = cs.frame(p).unwrap();
    let class = extract_kappa_mu(&fr);
    assert!(matches!(class, PointClass::Degenerate { .. }));
    let fd = fd_environment(&cs, p).unwrap();
    let der = derivative_identities(&fr, &fd, &class, 8, &mut rng);
    assert!(der.nabla_phi < tol::FD_IDENTITY, "nabla phi {:e}", der.nabla_phi);
    assert!(der.nabla_h < tol::FD_IDENTITY);
    assert!(der.nabla_h_constant_coeff < tol::FD_IDENTITY);
}

#[test]
fn frame_fields_are_internally_consistent() {
    let man = entry("mu-zero");
    let cs = man.contact_structure();
    let p = [0.7, 0.1, -0.4];
    let fr = cs.frame(p).unwrap();
    // xi is the metric dual of eta, normalized so eta(xi) = 1
    let dual = matvec(&fr.gi, &fr.eta);
    let eta_dual = contact3::tensor::dot(&fr.eta, &dual);
    let xi_check = contact3::tensor::vscale(&dual, 1.0 / eta_dual);
    assert!(norm_inf_v(&vsub(&fr.xi, &xi_check)) < 1e-12);
    // the stored Jacobi-type operator matches its curvature contraction
    let mut ell = [[0.0f64; 3]; 3];
    for l in 0..3 {
        for j in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    ell[l][j] += fr.riem[l][j][a][b] * fr.xi[a] * fr.xi[b];
                }
            }
        }
    }
    let mut gap = 0.0f64;
    for l in 0..3 {
        for j in 0..3 {
            gap = gap.max((ell[l][j] - fr.ell[l][j]).abs());
        }
    }
    assert!(gap < 1e-12, "jacobi operator consistency {gap:e}");
    // kappa = tr(l) / 2
    let class = extract_kappa_mu(&fr);
    assert!((trace(&fr.ell) / 2.0 - class.kappa()).abs() < 1e-12);
    // this entry certifies with mu = 0
    match class {
        PointClass::Generalized { kappa, mu, .. } => {
            assert!((kappa - 0.64).abs() < 1e-9, "kappa {kappa}");
            assert!(mu.abs() < 1e-9, "mu {mu}");
        }
        PointClass::Degenerate { .. } => panic!("mu-zero entry is nondegenerate"),
    }
}

#[test]
fn excluded_locus_is_respected_while_sampling() {
    // a domain with an excluded plane z = 0 never yields points near it
    let man = entry("nonconstant");
    let points = sample_points(&man.domain, 64, 9).unwrap();
    for p in &points {
        assert!(p[2] >= 1.2 - 1e-12 && p[2] <= 2.5 + 1e-12);
    }
    assert_eq!(points.len(), 64);
}
