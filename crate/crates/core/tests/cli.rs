use std::path::Path;
use std::process::Command;

use clap::Parser;
use ribbon_moduli::cli::{run, Cli};

const CASES: &[(&str, &[&str])] = &[
    ("info_theta", &["info", "tests/fixtures/theta.rg"]),
    ("info_theta_machine", &["--format", "machine", "info", "tests/fixtures/theta.rg"]),
    ("info_semistable", &["info", "tests/fixtures/theta_semistable.rg"]),
    ("validate_tetrahedron", &["validate", "tests/fixtures/tetrahedron.rg"]),
    ("dual_theta", &["dual", "tests/fixtures/theta.rg"]),
    ("dual_dumbbell", &["dual", "tests/fixtures/dumbbell.rg"]),
    ("collapse_tripod", &["collapse", "tests/fixtures/tripod.rg", "--edges", "c1"]),
    ("sst_theta", &["sst", "tests/fixtures/theta.rg", "--edges", "h1,h3"]),
    ("sst_tetrahedron", &["sst", "tests/fixtures/tetrahedron.rg", "--edges", "xy,yz,zw,xw,yw"]),
    ("semistable_from_theta", &["semistable-from", "tests/fixtures/theta_staged.rg"]),
    ("semistable_from_flag", &["semistable-from", "tests/fixtures/theta.rg", "--stages", "h1,h3"]),
    ("primitive_from_theta", &["primitive-from", "tests/fixtures/theta_semistable.rg"]),
    ("perimeters_theta", &["perimeters", "tests/fixtures/theta_staged.rg"]),
    ("degenerate_theta", &["degenerate", "tests/fixtures/theta_staged.rg", "--t", "1/64"]),
    ("enumerate_1_1", &["enumerate", "--genus", "1", "--labels", "1", "--min-valence", "3"]),
    ("enumerate_0_4_compactified", &["enumerate", "--genus", "0", "--labels", "4", "--compactified"]),
    ("euler_char_1_1", &["euler-char", "--genus", "1", "--labels", "1", "--convention", "full"]),
    ("euler_char_1_1_edge", &["euler-char", "--genus", "1", "--labels", "1", "--convention", "edge-image"]),
    ("blowup_triangle", &["blowup-simplex", "--n", "3", "--subsets", "all"]),
    ("blowup_associahedron", &["blowup-simplex", "--n", "4", "--subsets", "2;3;1,2;2,3;3,4"]),
];

fn output(args: &[&str]) -> String {
    let cli = Cli::try_parse_from(std::iter::once("ribbon").chain(args.iter().copied())).unwrap();
    run(cli).unwrap_or_else(|f| panic!("{args:?}: {}", f.message))
}

#[test]
fn golden_outputs() {
    let bless = std::env::var_os("BLESS").is_some();
    for (name, args) in CASES {
        let got = output(args);
        assert_eq!(got, output(args), "{name} is not deterministic");
        let path = Path::new("tests/golden").join(format!("{name}.txt"));
        if bless {
            std::fs::write(&path, &got).unwrap();
        } else {
            let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(got, expected, "{name}");
        }
    }
}

#[test]
fn documented_examples() {
    assert_eq!(output(&["info", "tests/fixtures/theta.rg"]), "type (1,1), 1 cusp, aut 6/3\n");
    assert!(output(&["enumerate", "--genus", "1", "--labels", "1", "--min-valence", "3"]).starts_with("2 cells\n"));
    assert!(output(&["blowup-simplex", "--n", "3", "--subsets", "all"]).starts_with("f-vector: 6 6\n"));
}

#[test]
fn recover_inverts_degenerate() {
    let dir = std::env::temp_dir().join(format!("ribbon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let degenerate = dir.join("degenerate.rg");
    std::fs::write(&degenerate, output(&["degenerate", "tests/fixtures/theta_staged.rg", "--t", "1/64"])).unwrap();
    let recovered = output(&["recover", degenerate.to_str().unwrap(), "--theta", "1/8"]);
    let original = std::fs::read_to_string("tests/fixtures/theta_staged.rg").unwrap();
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(strip(&recovered), strip(&original));
    std::fs::remove_dir_all(dir).unwrap();
}

fn exit_code(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ribbon")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["validate", "tests/fixtures/theta.rg"]).0, 0);
    let (code, err) = exit_code(&["validate", "tests/fixtures/invalid/duplicate_vertex.rg"]);
    assert_eq!(code, 1);
    assert!(err.contains(":4:8: vertex-overlap"), "{err}");
    assert_eq!(exit_code(&["validate", "tests/fixtures/invalid/unlabeled_leaf.rg"]).0, 1);
    assert_eq!(exit_code(&["validate", "tests/fixtures/invalid/bad_version.rg"]).0, 2);
    assert_eq!(exit_code(&["enumerate", "--genus", "0", "--labels", "2"]).0, 3);
    assert_eq!(exit_code(&["recover", "tests/fixtures/theta.rg", "--theta", "x"]).0, 2);
}
