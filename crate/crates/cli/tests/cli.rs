use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use abmod::format;
use abmod::{ABMorphism, Scalar};
use serde_json::Value;

fn samples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples")
}

fn sample(name: &str) -> String {
    samples().join("valid").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abmod"))
        .args(args)
        .output()
        .expect("spawn abmod")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn valid_samples_validate() {
    for entry in fs::read_dir(samples().join("valid")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{path:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn invalid_samples_report_positions() {
    let mut seen = 0;
    for entry in fs::read_dir(samples().join("invalid")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&o), 2, "{path:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(
            err.starts_with("error:") && err.contains("line") && err.contains("column"),
            "{err}"
        );
        let j = json(&run(&["validate", path.to_str().unwrap(), "--json"]));
        assert_eq!(j["object"], "error");
        assert_eq!(j["status"], "error");
        seen += 1;
    }
    assert!(seen >= 5);
}

#[test]
fn golden_verdicts_and_exit_codes() {
    let o = run(&["hermitianize", &sample("rank4.ab")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("antihermitian"));

    let o = run(&["isomorphic", &sample("rank2.ab"), &sample("rank2-conj.ab")]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));

    let o = run(&["isomorphic", &sample("rank2.ab"), &sample("rank2.ab")]);
    assert_eq!(code(&o), 0);

    let j = json(&run(&["comp-series", &sample("r2.ab"), "--json"]));
    let exps: Vec<String> = j["result"]["exponents"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(exps, ["0", "1"]);

    assert_eq!(code(&run(&["regular", &sample("e32.ab")])), 0);
}

#[test]
fn report_envelope() {
    let j = json(&run(&["endos", &sample("r2.ab"), "--json", "--seed", "5"]));
    assert_eq!(j["format"], 1);
    assert_eq!(j["object"], "report");
    assert_eq!(j["command"], "endos");
    assert_eq!(j["status"], "ok");
    assert_eq!(j["seed"], 5);
    assert!(j["certified"].is_boolean());
    assert!(j["elapsed_ms"].is_u64());
}

#[test]
fn emitted_morphisms_reverify() {
    for (dom, cod) in [("rank4.ab", "rank4.ab"), ("r2.ab", "r2.ab"), ("e0.ab", "e0.ab")] {
        let j = json(&run(&["homs", &sample(dom), &sample(cod), "--json"]));
        let r = &j["result"];
        let p = r["precision"].as_u64().unwrap() as usize;
        let d = format::module_from_json(&r["domain"]).unwrap().truncate(p);
        let c = format::module_from_json(&r["codomain"]).unwrap().truncate(p);
        let gens = r["generators"].as_array().unwrap();
        assert_eq!(gens.len() as u64, r["dimension"].as_u64().unwrap());
        for g in gens {
            let m = format::matrix_from_json(g, p).unwrap();
            let f = ABMorphism::checked(d.clone(), c.clone(), m).unwrap();
            assert!(f.verify_by_evaluation());
        }
    }
}

#[test]
fn json_output_feeds_back_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let dual = dir.path().join("dual.json");
    let o = run(&["dual", &sample("rank4.ab"), "--json"]);
    assert_eq!(code(&o), 0);
    fs::write(&dual, &o.stdout).unwrap();
    let twice = json(&run(&["dual", dual.to_str().unwrap(), "--json"]));
    let original = json(&run(&["show", &sample("rank4.ab"), "--json"]));
    assert_eq!(twice["result"]["a"], original["result"]["a"]);
    assert_eq!(twice["result"]["precision"], original["result"]["precision"]);

    let tensor = json(&run(&["tensor", &sample("e32.ab"), dual.to_str().unwrap(), "--json"]));
    assert_eq!(tensor["result"]["labels"].as_array().unwrap().len(), 4);
}

#[test]
fn script_on_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_abmod"))
        .args(["show", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"basis v\na v = 2*b*v\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("a v = 2*b*v"), "{}", stdout(&o));
}

#[test]
fn precision_flag_overrides_scripts() {
    let j = json(&run(&["show", &sample("rank4.ab"), "--precision", "7", "--json"]));
    assert_eq!(j["result"]["precision"], 7);
}

#[test]
fn decompose_a_sum() {
    let dir = tempfile::tempdir().unwrap();
    let sum = dir.path().join("sum.json");
    let o = run(&["sum", &sample("e0.ab"), &sample("r2.ab"), &sample("e0.ab"), "--json"]);
    fs::write(&sum, &o.stdout).unwrap();
    let o = run(&["decompose", sum.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let j = json(&o);
    let factors = j["result"]["factors"].as_array().unwrap();
    let mut profile: Vec<(u64, u64)> = factors
        .iter()
        .map(|f| {
            (
                f["module"]["labels"].as_array().unwrap().len() as u64,
                f["multiplicity"].as_u64().unwrap(),
            )
        })
        .collect();
    profile.sort();
    assert_eq!(profile, [(1, 2), (2, 1)]);
}

#[test]
fn saito_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["e32.ab", "self-dual3.ab"] {
        let fam = dir.path().join(format!("{name}.json"));
        let o = run(&["saito-extract", &sample(name), "--delta", "3", "--json"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        fs::write(&fam, &o.stdout).unwrap();
        let f = fam.to_str().unwrap();
        assert_eq!(code(&run(&["saito-check", f])), 0);
        let o = run(&["saito-symmetrize", f, "--json"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    // a module with no duality into its 3-dual
    let o = run(&["saito-extract", &sample("e0.ab"), "--delta", "3"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn corrupted_family_fails_the_check() {
    let o = run(&["saito-extract", &sample("e32.ab"), "--delta", "3", "--json"]);
    let mut j = json(&o);
    let s = Scalar::from_int(5).to_string();
    j["result"]["S"][0][0] = serde_json::json!(["1", "0", "0", s]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, serde_json::to_vec(&j).unwrap()).unwrap();
    let o = run(&["saito-check", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["homs", &sample("e0.ab")])), 2);
    assert_eq!(code(&run(&["show", "/nonexistent/file.ab"])), 2);
}
