use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_ftsynth");

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/examples/lycoming_o320.ttl")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("FTSYNTH_NS")
        .output()
        .expect("binary runs")
}

fn run_on(args: &[&str], input: &Path) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.insert(1, input.to_str().unwrap());
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const HEADER: &str = "@prefix ft: <http://ftsynth.example/vocab#> .\n@prefix : <http://ex/> .\n";

/// `S` needs `r` from `A`, and `A` and `B` supply each other.
const CYCLIC: &str = "
:S a ft:Component ; ft:has :fs . :fs ft:consumes :r .
:A a ft:Component ; ft:partOf :S ; ft:has :fa , :ga . :fa ft:produces :r . :ga ft:consumes :q .
:B a ft:Component ; ft:partOf :S ; ft:has :fb . :fb ft:produces :q ; ft:consumes :r .
:r a ft:Resource . :q a ft:Resource .
:A ft:outputsTo :S . :A ft:outputsTo :B . :B ft:outputsTo :A .
";

#[test]
fn synth_matches_golden_json() {
    let out = run_on(&["synth", "--format", "json"], &fixture());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let golden = include_str!("golden/lycoming_synth.json");
    assert_eq!(stdout(&out), golden);
}

#[test]
fn warnings_go_to_stderr_only() {
    let out = run_on(&["synth"], &fixture());
    let err = stderr(&out);
    assert!(
        err.contains("IgnitionSystem1") && err.contains("IgnitionSystem2"),
        "{err}"
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("stdout is pure JSON");
    assert_eq!(json["top"], "LycomingO320.fails");
}

#[test]
fn mcs_prints_seven_sorted_lines() {
    let out = run_on(&["mcs"], &fixture());
    assert_eq!(code(&out), 0);
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    assert_eq!(
        lines,
        [
            "{Crankshaft.internal}",
            "{Cylinder.internal}",
            "{LycomingO320.internal}",
            "{Magnetto1.internal, Magnetto2.internal}",
            "{Magnetto1.internal, SparkPlug2.internal}",
            "{Magnetto2.internal, SparkPlug1.internal}",
            "{SparkPlug1.internal, SparkPlug2.internal}",
        ]
    );
}

#[test]
fn check_passes_on_fixture() {
    let out = run_on(&["check"], &fixture());
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("counterexamples: 0"));
}

#[test]
fn validate_reports() {
    let out = run_on(&["validate"], &fixture());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "0 error(s), 0 warning(s)\n");

    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.ttl", "");
    let out = run_on(&["validate"], &empty);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("no components"));

    let out = run_on(&["validate", "--format", "json"], &empty);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["errors"][0]["code"], "NO_COMPONENTS");
}

#[test]
fn downstream_commands_refuse_invalid_graphs() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.ttl", "");
    for cmd in ["deps", "redundancy", "synth", "mcs", "check"] {
        let out = run_on(&[cmd], &empty);
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(stdout(&out).is_empty(), "{cmd}");
    }
}

#[test]
fn parse_errors_exit_one_with_position() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad.ttl",
        "@prefix : <http://ex/> .\n:a :b \n  _:blank .\n",
    );
    let out = run_on(&["validate"], &bad);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("3:"), "{}", stderr(&out));

    let out = run(&["synth", "/definitely/not/here.ttl"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn cycles_exit_four_unless_broken() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "cyclic.ttl", &format!("{HEADER}{CYCLIC}"));
    let out = run_on(&["synth"], &p);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("cyclic"), "{}", stderr(&out));

    let out = run_on(&["synth", "--break-cycles"], &p);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("broke dependency cycle"));

    let out = run_on(&["check", "--break-cycles"], &p);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn ambiguous_system_needs_top() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "two.ttl",
        &format!("{HEADER}:X a ft:Component .\n:Y a ft:Component .\n"),
    );
    let out = run_on(&["synth"], &p);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("ambiguous"), "{}", stderr(&out));

    let out = run_on(&["synth", "--top", ":Y"], &p);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("\"top\": \"Y.fails\""));
    assert!(stderr(&out).contains("component X is not reachable"));

    let out = run_on(&["synth", "--top", "http://ex/X"], &p);
    assert_eq!(code(&out), 0);

    let out = run_on(&["synth", "--top", "Z"], &p);
    assert_eq!(code(&out), 5);
}

#[test]
fn bad_flags_exit_five() {
    let f = fixture();
    for args in [
        vec!["deps", "--format", "galileo"],
        vec!["synth", "--format", "turtle"],
        vec!["synth", "--default-prob", "0"],
        vec!["synth", "--default-prob", "1"],
        vec!["synth", "--default-prob", "x"],
        vec!["mcs", "--bogus"],
        vec!["synth", "--ns", "not an iri"],
    ] {
        let out = run_on(&args, &f);
        assert_eq!(code(&out), 5, "{args:?}: {}", stderr(&out));
    }
    assert_eq!(code(&run(&["frobnicate"])), 5);
    assert_eq!(code(&run(&[])), 5);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn galileo_uses_default_probability() {
    let out = run_on(
        &["synth", "--format", "galileo", "--default-prob", "0.01"],
        &fixture(),
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("toplevel \"LycomingO320.fails\";\n"));
    assert!(text
        .contains("\"Cylinder.Spark.redundant\" and \"SparkPlug1.fails\" \"SparkPlug2.fails\";"));
    assert_eq!(text.matches("prob=0.01;").count(), 7);
}

#[test]
fn deps_dot_marks_redundant_edges() {
    let out = run_on(&["deps"], &fixture());
    let dot = stdout(&out);
    assert_eq!(dot.matches(" -> ").count(), 7);
    assert_eq!(dot.matches(", color=red").count(), 2);
    assert!(dot.contains("\"Cylinder\" -> \"SparkPlug1\" [label=\"Spark\", color=red"));

    let out = run_on(&["deps", "--format", "json"], &fixture());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["edges"].as_array().unwrap().len(), 7);
    assert_eq!(json["components"].as_array().unwrap().len(), 9);
}

#[test]
fn redundancy_json() {
    let out = run_on(&["redundancy"], &fixture());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let groups = json.as_array().unwrap();
    assert_eq!(groups.len(), 1);
    assert_eq!(
        groups[0]["consumer"],
        "http://ftsynth.example/lycoming#Cylinder"
    );
    assert_eq!(groups[0]["producers"].as_array().unwrap().len(), 2);
}

#[test]
fn infer_output_is_closed_turtle() {
    let dir = TempDir::new().unwrap();
    let once = dir.path().join("once.ttl");
    let out = run_on(&["infer", "-o", once.to_str().unwrap()], &fixture());
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&once).unwrap();
    assert!(text.contains(":Magnetto1 ft:has :GenerateCurrent1 ;\n    ft:inputFrom :Crankshaft ;\n    ft:outputsTo :SparkPlug1 ;\n    ft:partOf :IgnitionSystem1, :LycomingO320 ;\n    a ft:Component ."), "{text}");
    let again = run_on(&["infer"], &once);
    assert_eq!(stdout(&again), text);
}

#[test]
fn namespace_from_flag_or_env() {
    let dir = TempDir::new().unwrap();
    let fixture = std::fs::read_to_string(fixture()).unwrap();
    let moved = fixture.replace("http://ftsynth.example/vocab#", "urn:other:vocab#");
    let p = write(&dir, "moved.ttl", &moved);

    assert_eq!(code(&run_on(&["synth"], &p)), 2);
    let out = run_on(&["mcs", "--ns", "urn:other:vocab#"], &p);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 7);

    let out = Command::new(BIN)
        .args(["mcs", p.to_str().unwrap()])
        .env("FTSYNTH_NS", "urn:other:vocab#")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 7);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let f = fixture();
    for args in [
        vec!["validate"],
        vec!["infer"],
        vec!["deps"],
        vec!["deps", "--format", "json"],
        vec!["redundancy"],
        vec!["synth", "--format", "json"],
        vec!["synth", "--format", "dot"],
        vec!["synth", "--format", "galileo"],
        vec!["mcs"],
        vec!["check"],
    ] {
        let a = run_on(&args, &f);
        let b = run_on(&args, &f);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
        assert!(!a.stdout.is_empty(), "{args:?}");
    }
}
