use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_spencer-mirror");

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(name);
    let value: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&value).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("SPENCER_MIRROR_OUT")
        .env_remove("SPENCER_MIRROR_INJECT_FAULT")
        .output()
        .unwrap()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn read_json(path: PathBuf) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn small_config(lambda: [f64; 3], mode: &str) -> Value {
    json!({"curve": {"a": -2, "b": 1, "R": 1.0, "N": 24}, "lambda": lambda, "mode": mode})
}

#[test]
fn reference_config_passes_with_zero_dimensions() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({
        "curve": {"a": -2, "b": 1, "R": 1.0, "N": 200},
        "algebra": "su2_epsilon",
        "lambda": [1, 0, 0],
        "mode": "simplified",
        "metric": "constraint",
        "q_max": 3,
        "tol": 1e-8,
        "output_dir": "reports"
    });
    assert_valid(&schema("config.v1.schema.json"), &cfg);
    let path = write_json(tmp.path(), "c.json", &cfg);
    let out = run(tmp.path(), &["verify-mirror", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(tmp.path().join("reports/verify_mirror.json"));
    assert_valid(&schema("report.v1.schema.json"), &report);
    for d in report["results"]["degrees"].as_array().unwrap() {
        assert_eq!(d["dim_plus"], 0);
        assert_eq!(d["dim_minus"], 0);
    }
    assert_eq!(report["config"]["lambda"], json!([1.0, 0.0, 0.0]));
    assert_valid(&schema("config.v1.schema.json"), &report["config"]);
}

#[test]
fn malformed_config_names_the_field() {
    let tmp = TempDir::new().unwrap();
    let path = write_json(tmp.path(), "c.json", &json!({"curve": {"a": -2, "b": 1, "R": 1.0, "N": 2}}));
    let out = run(tmp.path(), &["verify-mirror", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("curve.N"));

    let path = write_json(tmp.path(), "d.json", &json!({"mode": "fast"}));
    let out = run(tmp.path(), &["verify-mirror", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mode"));

    fs::write(tmp.path().join("e.json"), "{ not json").unwrap();
    let out = run(tmp.path(), &["verify-mirror", "--config", "e.json"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(tmp.path(), &["verify-mirror", "--config", "missing.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn injected_fault_is_detected() {
    let tmp = TempDir::new().unwrap();
    let path = write_json(tmp.path(), "c.json", &small_config([1.0, 0.0, 0.0], "simplified"));
    let out = Command::new(BIN)
        .args(["verify-mirror", "--config", path.to_str().unwrap(), "--out", "o"])
        .current_dir(tmp.path())
        .env("SPENCER_MIRROR_INJECT_FAULT", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(tmp.path().join("o/verify_mirror.json"));
    assert_eq!(report["results"]["passed"], false);
}

#[test]
fn empty_sweep_is_an_empty_table() {
    let tmp = TempDir::new().unwrap();
    let path = write_json(tmp.path(), "s.json", &json!({"configs": []}));
    let out = run(tmp.path(), &["sweep", "--config", path.to_str().unwrap(), "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(tmp.path().join("o/sweep.json"));
    assert_valid(&schema("report.v1.schema.json"), &report);
    assert_eq!(report["results"]["rows"], json!([]));
    let csv = fs::read_to_string(tmp.path().join("o/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    assert!(csv.starts_with("config_id,lambda_1"));
}

#[test]
fn small_sweep_writes_json_and_csv() {
    let tmp = TempDir::new().unwrap();
    let configs: Vec<Value> = [[1.0, 0.0, 0.0], [0.5, 0.5, 0.5], [2.0, 0.0, 0.0]]
        .iter()
        .map(|l| small_config(*l, "faithful"))
        .collect();
    let path = write_json(tmp.path(), "s.json", &json!({"configs": configs, "output_dir": "fromfile"}));
    let out = run(tmp.path(), &["sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(tmp.path().join("fromfile/sweep.json"));
    assert_valid(&schema("report.v1.schema.json"), &report);
    assert_eq!(report["results"]["summary"]["comparisons_passed"], 6);

    let mut reader = csv::Reader::from_path(tmp.path().join("fromfile/sweep.csv")).unwrap();
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[0], "config_id");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| &r[14] == "true"));
}

#[test]
fn default_sweep_passes_all_comparisons() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["sweep", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(tmp.path().join("o/sweep.json"));
    let summary = &report["results"]["summary"];
    assert_eq!(summary["comparisons"], 14);
    assert_eq!(summary["comparisons_passed"], 14);
    assert_eq!(summary["monotone"], true);
}

#[test]
fn environment_overrides_output_dir() {
    let tmp = TempDir::new().unwrap();
    let out = Command::new(BIN)
        .args(["riemann-roch", "--preset", "k3", "--out", "ignored"])
        .current_dir(tmp.path())
        .env("SPENCER_MIRROR_OUT", tmp.path().join("env"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(tmp.path().join("env/riemann_roch.json").exists());
    assert!(!tmp.path().join("ignored").exists());
}

#[test]
fn riemann_roch_preset_and_files() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["riemann-roch", "--preset", "k3", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(tmp.path().join("o/riemann_roch.json"));
    assert_valid(&schema("report.v1.schema.json"), &report);
    let results = &report["results"];
    assert_eq!(results["report"]["A0"], "72");
    assert_eq!(results["report"]["chi"], "74");
    assert_eq!(results["chi_equals_3a0"], false);
    assert_eq!(results["lambda_tag_invariant"], true);

    let zero = json!({"n": 2, "intersection_numbers": {"c2": 24}, "spencer_ch": [{}, {}, {}]});
    let path = write_json(tmp.path(), "zero.json", &zero);
    let out = run(tmp.path(), &["riemann-roch", "--config", path.to_str().unwrap(), "--out", "z"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_json(tmp.path().join("z/riemann_roch.json"))["results"]["report"]["chi"], "0");

    let cy3 = json!({
        "n": 3,
        "generators": [{"name": "h", "degree": 1}],
        "intersection_numbers": {"h^3": 5, "c2*h": 50, "c3": "-200"},
        "spencer_ch": [{"1": 1, "h": "1/3"}, {"h^2": "-7/4", "c2": "2/5"}, {"h^3": "3/7", "c2*h": "-1/6"}, {"1": 2}]
    });
    let path = write_json(tmp.path(), "cy3.json", &cy3);
    let out = run(tmp.path(), &["riemann-roch", "--config", path.to_str().unwrap(), "--out", "c"]);
    assert_eq!(out.status.code(), Some(0));
    let results = read_json(tmp.path().join("c/riemann_roch.json"))["results"].clone();
    assert_eq!(results["cross_path_agrees"], true);
    assert_eq!(results["euler_srr"], results["report"]["chi"]);

    let bad = json!({"n": 2, "intersection_numbers": {"c2": "abc"}, "spencer_ch": [{}, {}, {}]});
    let path = write_json(tmp.path(), "bad.json", &bad);
    let out = run(tmp.path(), &["riemann-roch", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("intersection_numbers.c2"));
    let out = run(tmp.path(), &["riemann-roch", "--preset", "enriques"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dumps_are_csv_with_headers() {
    let tmp = TempDir::new().unwrap();
    let path = write_json(tmp.path(), "c.json", &small_config([0.5, 0.5, 0.5], "faithful"));
    let out = run(tmp.path(), &["verify-mirror", "--config", path.to_str().unwrap(), "--out", "o", "--dump-matrices"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tmp.path().join("o/matrices");
    let mesh = fs::read_to_string(dir.join("mesh.csv")).unwrap();
    assert!(mesh.starts_with("index,t,x,y,h,edge_length\r\n"));
    assert_eq!(mesh.lines().count(), 25);
    let mut reader = csv::Reader::from_path(dir.join("delta_q0.csv")).unwrap();
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), vec!["monomial", "1"]);
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][1], "0.5");
    let mut reader = csv::Reader::from_path(dir.join("eigenvalues_k1.csv")).unwrap();
    assert_eq!(reader.records().count(), 24 * 4);
    for name in ["laplacian_k0_plus.csv", "laplacian_k1_minus.csv", "mass_k1.csv"] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        assert!(text.starts_with("row,col,value"), "{name}");
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timestamp");
            map.remove("timings_ms");
            map.remove("elapsed_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn reproduction_bundle_summary() {
    let tmp = TempDir::new().unwrap();
    let path = write_json(tmp.path(), "base.json", &json!({"curve": {"a": -2, "b": 1, "R": 1.0, "N": 16}}));
    let mut docs = Vec::new();
    for dir in ["p1", "p2"] {
        let out = run(tmp.path(), &["paper", "--config", path.to_str().unwrap(), "--out", dir]);
        // the spectral delta and K3 relation claims do not hold
        assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
        let doc = read_json(tmp.path().join(dir).join("paper_summary.json"));
        assert_valid(&schema("report.v1.schema.json"), &doc);
        docs.push(doc);
    }
    let results = &docs[0]["results"];
    assert_eq!(results["discriminant"]["value"], 80.0);
    assert_eq!(results["discriminant"]["reference_value"], 432.0);
    assert_eq!(results["cochain_defects"].as_array().unwrap().len(), 14);
    let claims = results["claims"].as_array().unwrap();
    let status = |id: &str| claims.iter().find(|c| c["id"] == id).unwrap()["passed"].clone();
    assert_eq!(status("mirror_dimension_equality"), true);
    assert_eq!(status("simplified_acyclic"), true);
    assert_eq!(status("eig_min_monotone"), true);
    assert_eq!(status("todd_root_identity"), true);
    assert_eq!(status("sym_character_identity"), true);
    assert_eq!(status("k3_tag_invariance"), true);
    assert_eq!(status("spectral_delta"), false);
    assert_eq!(status("k3_relation"), false);

    let (mut a, mut b) = (docs[0].clone(), docs[1].clone());
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
