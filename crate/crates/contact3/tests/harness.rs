//! Manifest parsing, domain sampling, classification verdicts on the
//! built-in gallery, report serialization, and parallel/sequential
//! equivalence.

use contact3::classify::{
    classify_points, PresetChoice, SatisfiedBranch, VacuousReason, Verdict,
};
use contact3::curvature::{Coefficients, Condition, DimensionReading, PresetName};
use contact3::error::Error;
use contact3::gallery;
use contact3::manifest::{ExpectedKind, ManifoldManifest};
use contact3::model::DEFAULT_SEED;
use contact3::par;
use contact3::report::{CheckLine, Report};
use contact3::sample::{halton, radical_inverse, sample_points, Domain};
use contact3::{runner, tol};

/// A minimal valid manifest with substitutable pieces.
fn manifest_text(g33: &str, extra: &str) -> String {
    format!(
        r#"
name = "probe"

[metric]
g11 = "1"
g12 = "0"
g13 = "0"
g22 = "1"
g23 = "0"
g33 = "{g33}"

[eta]
e1 = "0"
e2 = "0"
e3 = "1"

[domain]
x = [0.0, 1.0]
y = [0.0, 1.0]
z = [0.5, 1.5]
{extra}
"#
    )
}

#[test]
fn manifest_parses_fields_and_defaults() {
    let text = manifest_text("1 + z^2", "");
    let man = ManifoldManifest::from_toml_str(&text).expect("valid manifest");
    assert_eq!(man.name, "probe");
    assert_eq!(man.metric_sources[5], "1 + z^2");
    assert_eq!(man.eta_sources, ["0", "0", "1"]);
    assert_eq!(man.domain.intervals, [[0.0, 1.0], [0.0, 1.0], [0.5, 1.5]]);
    assert!(man.domain.excluded.is_empty());
    assert!(man.expected.is_none());
    assert_eq!(man.tolerances.axiom, tol::AXIOM);
    assert_eq!(man.tolerances.fd, tol::FD_IDENTITY);
    assert_eq!(man.tolerances.reconstruction, tol::RECONSTRUCTION);
    assert_eq!(man.tolerances.scalar, tol::SCALAR_IDENTITY);
}

#[test]
fn manifest_applies_overrides_and_expected_kind() {
    let extra = r#"
[expected]
kind = "sasakian"

[tolerances]
fd = 1e-3
axiom = 1e-5
"#;
    let man = ManifoldManifest::from_toml_str(&manifest_text("1", extra)).unwrap();
    assert_eq!(man.expected, Some(ExpectedKind::Sasakian));
    assert_eq!(man.tolerances.fd, 1e-3);
    assert_eq!(man.tolerances.axiom, 1e-5);
    assert_eq!(man.tolerances.scalar, tol::SCALAR_IDENTITY);
}

#[test]
fn expected_kind_tokens_round_trip() {
    for kind in [
        ExpectedKind::Sasakian,
        ExpectedKind::Flat,
        ExpectedKind::GeneralizedKmu,
        ExpectedKind::KmuConstant,
    ] {
        let extra = format!("[expected]\nkind = \"{}\"\n", kind.token());
        let man = ManifoldManifest::from_toml_str(&manifest_text("1", &extra)).unwrap();
        assert_eq!(man.expected, Some(kind));
    }
    let extra = "[expected]\nkind = \"einstein\"\n";
    let err = ManifoldManifest::from_toml_str(&manifest_text("1", extra)).unwrap_err();
    assert!(matches!(err, Error::Manifest(ref m) if m.contains("einstein")));
}

#[test]
fn manifest_rejects_malformed_toml() {
    let err = ManifoldManifest::from_toml_str("name = ").unwrap_err();
    assert!(matches!(err, Error::Toml(_)));
}

#[test]
fn manifest_rejects_unknown_keys() {
    let text = manifest_text("1", "speed = 3\n");
    let err = ManifoldManifest::from_toml_str(&text).unwrap_err();
    assert!(matches!(err, Error::Toml(_)), "unexpected: {err}");
    assert!(err.to_string().contains("speed"));
}

#[test]
fn manifest_reports_expression_errors_with_location() {
    // Truncated expression in a metric slot: syntax error at the byte where
    // input ran out, tagged with the field that held it.
    let err = ManifoldManifest::from_toml_str(&manifest_text("1/", "")).unwrap_err();
    match err {
        Error::Syntax { offset, message } => {
            assert_eq!(offset, 2);
            assert!(message.contains("metric.g33"), "message: {message}");
        }
        other => panic!("expected syntax error, got {other}"),
    }

    // Unknown variable in a contact-form slot.
    let text = manifest_text("1", "").replace("e2 = \"0\"", "e2 = \"x + w\"");
    let err = ManifoldManifest::from_toml_str(&text).unwrap_err();
    match err {
        Error::UnknownIdentifier { name, offset } => {
            assert_eq!(offset, 4);
            assert!(name.contains('w') && name.contains("eta.e2"), "name: {name}");
        }
        other => panic!("expected unknown identifier, got {other}"),
    }

    // Broken excluded-locus expression.
    let text = manifest_text("1", "excluded = [\"z *\"]\n");
    let err = ManifoldManifest::from_toml_str(&text).unwrap_err();
    match err {
        Error::Syntax { message, .. } => {
            assert!(message.contains("domain.excluded[0]"), "message: {message}");
        }
        other => panic!("expected syntax error, got {other}"),
    }
}

#[test]
fn manifest_rejects_bad_domains_and_tolerances() {
    // Empty interval (lo == hi).
    let text = manifest_text("1", "").replace("y = [0.0, 1.0]", "y = [2.0, 2.0]");
    let err = ManifoldManifest::from_toml_str(&text).unwrap_err();
    assert!(matches!(err, Error::Manifest(ref m) if m.contains("interval for y is empty")));

    // Reversed interval.
    let text = manifest_text("1", "").replace("x = [0.0, 1.0]", "x = [1.0, 0.0]");
    assert!(ManifoldManifest::from_toml_str(&text).is_err());

    // Non-finite bound.
    let text = manifest_text("1", "").replace("z = [0.5, 1.5]", "z = [0.5, inf]");
    let err = ManifoldManifest::from_toml_str(&text).unwrap_err();
    assert!(matches!(err, Error::Manifest(ref m) if m.contains("finite")));

    // Unknown tolerance key.
    let err =
        ManifoldManifest::from_toml_str(&manifest_text("1", "[tolerances]\ncurvature = 1e-3\n"))
            .unwrap_err();
    assert!(matches!(err, Error::Manifest(ref m) if m.contains("curvature")));

    // Non-positive tolerance value.
    let err = ManifoldManifest::from_toml_str(&manifest_text("1", "[tolerances]\nfd = 0.0\n"))
        .unwrap_err();
    assert!(matches!(err, Error::Manifest(ref m) if m.contains("positive finite")));

    // Empty name.
    let text = manifest_text("1", "").replace("name = \"probe\"", "name = \"  \"");
    let err = ManifoldManifest::from_toml_str(&text).unwrap_err();
    assert!(matches!(err, Error::Manifest(ref m) if m.contains("nonempty")));
}

#[test]
fn manifest_load_missing_file_is_io_error() {
    let err = ManifoldManifest::load(std::path::Path::new("/no/such/manifest.toml")).unwrap_err();
    assert!(matches!(err, Error::Io(_)));
}

#[test]
fn builtin_gallery_has_five_named_entries() {
    let all = gallery::builtin_manifests().expect("built-ins parse");
    let names: Vec<&str> = all.iter().map(|m| m.name.as_str()).collect();
    assert_eq!(
        names,
        [
            "sasakian-heisenberg",
            "flat-rotating",
            "kmu-nonconstant",
            "kmu-constant",
            "kmu-mu-zero"
        ]
    );
    // Every entry declares the kind its checks must certify.
    assert!(all.iter().all(|m| m.expected.is_some()));

    let filtered = gallery::filtered_manifests(Some("kmu")).unwrap();
    assert_eq!(filtered.len(), 3);
    let none = gallery::filtered_manifests(Some("torus")).unwrap();
    assert!(none.is_empty());
}

#[test]
fn radical_inverse_and_halton_known_values() {
    assert_eq!(radical_inverse(0, 2), 0.0);
    assert_eq!(radical_inverse(1, 2), 0.5);
    assert_eq!(radical_inverse(2, 2), 0.25);
    assert_eq!(radical_inverse(3, 2), 0.75);
    assert_eq!(radical_inverse(4, 2), 0.125);
    assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
    assert!((radical_inverse(2, 3) - 2.0 / 3.0).abs() < 1e-15);
    let h1 = halton(1);
    assert_eq!(h1[0], 0.5);
    assert!((h1[1] - 1.0 / 3.0).abs() < 1e-15);
    assert!((h1[2] - 0.2).abs() < 1e-15);
}

fn unit_domain() -> Domain {
    Domain {
        intervals: [[0.0, 1.0], [-1.0, 1.0], [0.5, 1.5]],
        excluded: Vec::new(),
    }
}

#[test]
fn sampling_is_deterministic_and_in_bounds() {
    let d = unit_domain();
    let a = sample_points(&d, 64, 7).unwrap();
    let b = sample_points(&d, 64, 7).unwrap();
    assert_eq!(a, b, "same (domain, n, seed) must give identical points");
    assert_eq!(a.len(), 64);
    for p in &a {
        for axis in 0..3 {
            let [lo, hi] = d.intervals[axis];
            assert!(p[axis] >= lo && p[axis] <= hi, "point {p:?} out of bounds");
        }
    }
    let c = sample_points(&d, 64, 8).unwrap();
    assert_ne!(a, c, "different seeds must shift the sequence");
    // A longer run extends the shorter one: low-discrepancy streams are
    // prefixes of each other.
    let long = sample_points(&d, 128, 7).unwrap();
    assert_eq!(&long[..64], &a[..]);
    assert!(sample_points(&d, 0, 7).unwrap().is_empty());
}

#[test]
fn sampling_rejects_excluded_loci() {
    let src = manifest_text("1", "excluded = [\"z - 1\"]\n");
    let man = ManifoldManifest::from_toml_str(&src).unwrap();
    let pts = sample_points(&man.domain, 200, DEFAULT_SEED).unwrap();
    assert_eq!(pts.len(), 200);
    for p in &pts {
        assert!(
            (p[2] - 1.0).abs() >= tol::EXCLUDED_LOCUS,
            "point {p:?} violates the excluded locus"
        );
    }
}

#[test]
fn sampling_exhausts_when_exclusion_covers_domain() {
    // An expression that vanishes identically rejects every candidate.
    let src = manifest_text("1", "excluded = [\"0 * x\"]\n");
    let man = ManifoldManifest::from_toml_str(&src).unwrap();
    let err = sample_points(&man.domain, 10, DEFAULT_SEED).unwrap_err();
    match err {
        Error::SamplingExhausted { placed, requested } => {
            assert_eq!(placed, 0);
            assert_eq!(requested, 10);
        }
        other => panic!("expected sampling exhaustion, got {other}"),
    }
}

#[test]
fn invalid_domain_fails_validation_before_sampling() {
    let d = Domain {
        intervals: [[0.0, 1.0], [1.0, 1.0], [0.0, 1.0]],
        excluded: Vec::new(),
    };
    assert!(d.validate().is_err());
    assert!(sample_points(&d, 4, 0).is_err());
}

/// Classify one (entry, preset, condition) cell on a modest sample.
fn cell(entry: &str, preset: PresetName, condition: Condition) -> contact3::classify::Classification {
    let man = gallery::filtered_manifests(Some(entry))
        .unwrap()
        .into_iter()
        .next()
        .expect("entry exists");
    let cs = man.contact_structure();
    let pts = sample_points(&man.domain, 12, DEFAULT_SEED).unwrap();
    classify_points(
        &cs,
        &pts,
        &PresetChoice::Named(preset),
        condition,
        DimensionReading::Ambient,
    )
    .expect("classification runs")
}

#[test]
fn flat_entry_satisfies_every_condition_by_flatness() {
    for cond in [Condition::WR, Condition::WH, Condition::WS] {
        let c = cell("flat", PresetName::Riemann, cond);
        assert_eq!(c.verdict, Verdict::Satisfied(SatisfiedBranch::Flat));
        assert!(!c.is_forbidden());
        assert!(c.verdict_text().contains("satisfied: flat"));
    }
}

#[test]
fn conformal_member_is_vacuous_in_dimension_three() {
    for entry in ["sasakian", "nonconstant", "mu-zero"] {
        let c = cell(entry, PresetName::Conformal, Condition::WR);
        assert_eq!(
            c.verdict,
            Verdict::SatisfiedVacuously(VacuousReason::ZeroTensor)
        );
        assert!(c.verdict_text().contains("vanishes identically in dimension 3"));
    }
}

#[test]
fn equal_leading_coefficients_collapse_the_wedge_condition() {
    // alpha = beta annihilates the wedge-operand scalar for every (kappa, mu).
    for preset in [PresetName::Riemann, PresetName::Conharmonic, PresetName::MProjective] {
        let c = cell("kmu-constant", preset, Condition::WH);
        assert_eq!(
            c.verdict,
            Verdict::SatisfiedVacuously(VacuousReason::ZeroCollapse),
            "preset {}",
            preset.token()
        );
        assert!(c.verdict_text().contains("annihilate the condition"));
    }
}

#[test]
fn mu_zero_entry_satisfies_ricci_conditions_through_commutation() {
    // Only the w2 member annihilates the Ricci operand at mu = 0; the plain
    // curvature member does not.
    let c = cell("mu-zero", PresetName::W2, Condition::WS);
    assert_eq!(c.verdict, Verdict::Satisfied(SatisfiedBranch::MuZero));
    assert!(c.verdict_text().contains("mu = 0"));
    assert!(c.verdict_text().contains("Q phi = phi Q"));

    let plain = cell("mu-zero", PresetName::Riemann, Condition::WS);
    assert_eq!(plain.verdict, Verdict::NotSatisfied);
}

#[test]
fn nonconstant_entry_fails_the_full_curvature_condition() {
    let c = cell("nonconstant", PresetName::Riemann, Condition::WR);
    assert_eq!(c.verdict, Verdict::NotSatisfied);
    assert!(!c.satisfied());
    assert!(!c.is_forbidden());
    assert!(!c.kappa_mu_constant);
    assert!(c.max_residual > c.threshold_at_worst);
    let text = c.verdict_text();
    assert!(text.starts_with("wr/riemann: condition not satisfied"));
    assert!(text.contains("nonconstant"));
}

#[test]
fn gallery_verdict_matrix_has_no_forbidden_cells() {
    // The classification theorems rule out a genuinely-satisfied verdict with
    // nonconstant (kappa, mu); no built-in entry may produce one.
    for man in gallery::builtin_manifests().unwrap() {
        let cs = man.contact_structure();
        let pts = sample_points(&man.domain, 8, DEFAULT_SEED).unwrap();
        for preset in contact3::curvature::ALL_PRESETS {
            for cond in [Condition::WR, Condition::WH, Condition::WS] {
                let c = classify_points(
                    &cs,
                    &pts,
                    &PresetChoice::Named(preset),
                    cond,
                    DimensionReading::Ambient,
                )
                .unwrap();
                assert!(
                    !c.is_forbidden(),
                    "{} {} {} produced a theorem-forbidden verdict",
                    man.name,
                    preset.token(),
                    cond.token()
                );
            }
        }
    }
}

#[test]
fn explicit_coefficients_choice_labels_and_classifies() {
    let man = gallery::filtered_manifests(Some("kmu-constant"))
        .unwrap()
        .into_iter()
        .next()
        .unwrap();
    let cs = man.contact_structure();
    let pts = sample_points(&man.domain, 8, DEFAULT_SEED).unwrap();
    // Explicit zero coefficients reproduce the plain curvature member.
    let choice = PresetChoice::Explicit(Coefficients {
        alpha: 0.0,
        beta: 0.0,
        gamma: 0.0,
    });
    assert_eq!(choice.label(), "abc(0, 0, 0)");
    let c = classify_points(&cs, &pts, &choice, Condition::WR, DimensionReading::Ambient).unwrap();
    let named = classify_points(
        &cs,
        &pts,
        &PresetChoice::Named(PresetName::Riemann),
        Condition::WR,
        DimensionReading::Ambient,
    )
    .unwrap();
    assert_eq!(c.verdict, named.verdict);
    assert!((c.max_residual - named.max_residual).abs() < 1e-12);
}

#[test]
fn report_json_round_trips_and_is_stable() {
    let man = gallery::filtered_manifests(Some("kmu-constant"))
        .unwrap()
        .into_iter()
        .next()
        .unwrap();
    let opts = runner::RunOptions {
        points: 8,
        ..Default::default()
    };
    let report = runner::run_check(&man, &opts).unwrap();
    let again = runner::run_check(&man, &opts).unwrap();
    let json = report.to_json().unwrap();
    assert_eq!(
        json,
        again.to_json().unwrap(),
        "identical runs must serialize byte-identically"
    );
    assert!(json.ends_with('\n'));

    let parsed = Report::from_json(&json).unwrap();
    assert_eq!(parsed, report, "JSON round-trip must preserve the report");
    assert_eq!(parsed.schema, 1);
    assert_eq!(parsed.command, "check");
    assert_eq!(parsed.manifold.as_deref(), Some("kmu-constant"));
    assert_eq!(parsed.points, 8);
    assert!(parsed.pass);

    // Field order is part of the stable surface; schema leads.
    let schema_pos = json.find("\"schema\"").unwrap();
    let version_pos = json.find("\"engine_version\"").unwrap();
    let checks_pos = json.find("\"checks\"").unwrap();
    assert!(schema_pos < version_pos && version_pos < checks_pos);

    assert!(Report::from_json("{ not json").is_err());
}

#[test]
fn report_pass_flag_and_text_rendering() {
    let checks = vec![
        CheckLine::scalar("alpha check", 1e-9, 1e-6),
        CheckLine::new("beta check", 2.0, 1e-6, [0.1, 0.2, 0.3]),
    ];
    let report = Report::new("check", Some("probe".into()), 7, 4, checks, vec![
        "note text".to_string(),
    ]);
    assert!(!report.pass, "one failing line must fail the report");
    let text = report.to_text();
    assert!(text.contains("[PASS] alpha check"));
    assert!(text.contains("[FAIL] beta check"));
    assert!(text.contains("worst at (0.1000, 0.2000, 0.3000)"));
    assert!(text.contains("note: note text"));
    assert!(text.trim_end().ends_with("overall: FAIL"));

    let all_green = Report::new(
        "check",
        None,
        7,
        4,
        vec![CheckLine::scalar("alpha check", 0.0, 1.0)],
        Vec::new(),
    );
    assert!(all_green.pass);
    assert!(all_green.to_text().trim_end().ends_with("overall: PASS"));
}

#[test]
fn parallel_and_sequential_maps_agree_in_order() {
    let items: Vec<u64> = (0..257).collect();
    let f = |&x: &u64| -> f64 { radical_inverse(x, 3) * (x as f64 + 1.0) };
    assert_eq!(par::map_points(&items, f), par::map_points_seq(&items, f));

    // Same guarantee on the real per-point workload: extraction over a chart.
    let man = gallery::filtered_manifests(Some("nonconstant"))
        .unwrap()
        .into_iter()
        .next()
        .unwrap();
    let cs = man.contact_structure();
    let pts = sample_points(&man.domain, 24, DEFAULT_SEED).unwrap();
    let g = |&p: &[f64; 3]| {
        let fr = cs.frame(p).unwrap();
        let class = contact3::contact::extract_kappa_mu(&fr);
        (
            class.kappa().to_bits(),
            class.mu().map(f64::to_bits),
        )
    };
    assert_eq!(par::map_points(&pts, g), par::map_points_seq(&pts, g));
}
