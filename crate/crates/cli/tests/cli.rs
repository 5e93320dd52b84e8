use std::path::PathBuf;

use lseries_cli::{run, Generator, SpecFile, EXIT_ERROR, EXIT_PASS, EXIT_WITNESS};
use lseries_core::coefficients::BuiltinCharacter;
use lseries_core::fe::GammaFactorData;
use lseries_core::Complex64;
use proptest::prelude::*;

fn spec_path(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "specs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("lseries").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn summary_value<'a>(out: &'a str, key: &str) -> &'a str {
    let tail = out.split("[summary]\n").nth(1).expect("summary block");
    tail.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key} in summary"))
}

#[test]
fn invariants_of_zeta() {
    let (code, out, _) = call(&["invariants", &spec_path("zeta.spec")]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(summary_value(&out, "degree"), "1.0");
    assert_eq!(summary_value(&out, "b_invariant"), "1.0");
    let q: f64 = summary_value(&out, "conductor").parse().unwrap();
    assert!((q - 1.0).abs() < 1e-9);
}

#[test]
fn lifted_spec_feeds_invariants() {
    let dir = std::env::temp_dir().join(format!("lseries-cli-lift-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_spec = dir.join("chi4_k3.spec");
    let (code, _, err) = call(&["lift", &spec_path("chi4.spec"), "-k", "3", "-o", out_spec.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS, "{err}");
    let (code, out, _) = call(&["invariants", out_spec.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(summary_value(&out, "degree"), "3.0");
    assert_eq!(summary_value(&out, "sharp_admissible"), "true");
    let q: f64 = summary_value(&out, "conductor").parse().unwrap();
    assert!((q / 1728.0 - 1.0).abs() < 1e-9);
    let lifted = SpecFile::load(&out_spec).unwrap();
    assert_eq!(lifted.generator.lift_order(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lemma_scan_passes_and_is_deterministic() {
    let args = ["lemma-scan", "--trials", "200", "--grid", "2048"];
    let (code, first, _) = call(&args);
    assert_eq!(code, EXIT_PASS);
    let slack: f64 = summary_value(&first, "min_slack").parse().unwrap();
    assert!(slack >= 0.0);
    let (_, second, _) = call(&args);
    assert_eq!(first, second);
    let (_, other, _) = call(&["lemma-scan", "--trials", "200", "--seed", "7"]);
    assert_ne!(first, other);
}

#[test]
fn domination_exit_codes() {
    let chi = spec_path("chi4.spec");
    let (code, out, _) = call(&["dominate", &chi, &spec_path("zeta.spec"), "--m", "1000"]);
    assert_eq!(code, EXIT_WITNESS);
    assert!(out.lines().nth(1).unwrap().ends_with(",true"), "{out}");
    let (code, _, _) = call(&["dominate", &chi, &chi, "--m", "1000"]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn errors_exit_one() {
    let (code, _, err) = call(&["frobnicate"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("frobnicate"));

    let bad = std::env::temp_dir().join(format!("lseries-cli-bad-{}.spec", std::process::id()));
    std::fs::write(&bad, "[gamma]\nq = 1\nlambda = 0.5\nmu = x\n").unwrap();
    let (code, _, err) = call(&["invariants", bad.to_str().unwrap()]);
    std::fs::remove_file(&bad).unwrap();
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 4") && err.contains("mu[0]"), "{err}");

    let (code, _, err) = call(&["zeros", &spec_path("zeta.spec"), "--sigma", "0.6", "--tmax", "5000"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("window"), "{err}");
}

#[test]
fn csv_flag_moves_table_to_file() {
    let path = std::env::temp_dir().join(format!("lseries-cli-csv-{}.csv", std::process::id()));
    let (code, out, _) = call(&["--csv", path.to_str().unwrap(), "fe-check", &spec_path("chi3.spec"), "--samples", "5"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("[summary]"));
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn shipped_specs_parse() {
    for name in ["zeta", "chi3", "chi4", "chi5", "delta"] {
        let s = SpecFile::load(std::path::Path::new(&spec_path(&format!("{name}.spec")))).unwrap();
        assert!(s.generator.builtin().is_some());
    }
}

fn generator() -> impl Strategy<Value = Generator> {
    let character = prop::sample::select(BuiltinCharacter::ALL.to_vec());
    let base = prop_oneof![
        Just(Generator::Zeta),
        Just(Generator::Eigenform),
        character.prop_map(Generator::Dirichlet),
        (
            prop::collection::vec((-1e6f64..1e6, -1e-6f64..1e-6), 1..8),
            any::<bool>()
        )
            .prop_map(|(v, multiplicative)| Generator::Explicit {
                values: v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect(),
                multiplicative,
            }),
    ];
    (base, 1u32..6).prop_map(|(b, k)| b.lifted(k))
}

fn gamma() -> impl Strategy<Value = GammaFactorData> {
    (
        1e-3f64..1e3,
        prop::collection::vec((1e-3f64..5.0, -3.0f64..3.0, -50.0f64..50.0), 1..4),
        0.0f64..std::f64::consts::TAU,
        0u32..3,
    )
        .prop_map(|(q, f, arg, pole)| {
            GammaFactorData::new(
                q,
                f.iter().map(|x| x.0).collect(),
                f.iter().map(|x| Complex64::new(x.1, x.2)).collect(),
                Complex64::from_polar(1.0, arg),
                pole,
            )
            .unwrap()
        })
}

proptest! {
    #[test]
    fn spec_round_trip(
        gamma in gamma(),
        generator in generator(),
        eps in prop::option::of(1e-3f64..0.5),
        cutoff in prop::option::of(1.0f64..1e6),
        t3 in prop::option::of(2u64..100_000),
        budget in prop::option::of(1usize..10_000),
    ) {
        let mut spec = SpecFile::new(gamma, generator);
        spec.overrides.eps = eps;
        spec.overrides.cutoff = cutoff;
        spec.overrides.t3_cutoff = t3;
        spec.overrides.budget = budget;
        let text = spec.to_string();
        let back: SpecFile = text.parse().unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn parse_never_panics(text in "(\\[[a-z]{0,12}\\]\n|[a-z_]{0,10} ?= ?[-0-9. ,a-z]{0,20}\n|#.*\n){0,12}") {
        if let Err(e) = text.parse::<SpecFile>() {
            prop_assert!(e.line <= text.lines().count() + 1);
            prop_assert!(!e.field.is_empty());
        }
    }
}
