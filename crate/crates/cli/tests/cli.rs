use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn nilcone(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nilcone"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let mut input = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            input.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "status {}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn form(c: &[i64]) -> Value {
    json!({ "degree": c.len() as i64 - 1, "coeffs": c })
}

fn worked_example() -> Value {
    json!({ "d": 0, "ell": 2, "p": form(&[0, 0, 0]), "q": form(&[1, 0, 0]), "r": form(&[0, 0, 0]) })
}

fn column(m: i64, entries: &[Value]) -> Value {
    json!({
        "source": { "twists": [m] },
        "target": { "twists": [0, 0] },
        "entries": entries.iter().map(|e| vec![e.clone()]).collect::<Vec<_>>(),
    })
}

#[test]
fn nilpotent_check_rejects_regular_semisimple() {
    let phi = json!({ "d": 0, "ell": 2, "p": form(&[0, 0, 0]), "q": form(&[1, 0, 0]), "r": form(&[0, 0, 1]) });
    let out = stdout_json(&nilcone(&["nilpotent-check", "--json", &phi.to_string()], None));
    assert_eq!(out["nilpotent"], json!(false));
    let out = stdout_json(&nilcone(&["nilpotent-check"], Some(&worked_example().to_string())));
    assert_eq!(out["nilpotent"], json!(true));
}

#[test]
fn canonical_form_kernel_irregularity() {
    let doc = worked_example().to_string();
    let c = stdout_json(&nilcone(&["canonical-form", "--json", &doc], None));
    assert_eq!(c["s"], json!({"degree": 0, "coeffs": ["1"]}));
    assert_eq!(c["h"], json!({"degree": 2, "coeffs": ["-1", "0", "0"]}));
    assert_eq!(c["k"], json!(0));
    let k = stdout_json(&nilcone(&["kernel", "--json", &doc], None));
    assert_eq!(k["source"], json!({"twists": [0]}));
    let irr = stdout_json(&nilcone(&["irregularity", "--json", &doc], None));
    assert_eq!(irr["divisor"], json!({"degree": 2, "coeffs": ["1", "0", "0"]}));
    assert_eq!(irr["globally_regular"], json!(false));
}

#[test]
fn fiber_range_and_strategies() {
    let doc = worked_example().to_string();
    let out = stdout_json(&nilcone(&["fiber", "--range", "-2:1", "--json", &doc], None));
    let sizes: Vec<usize> = out["fibers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["points"].as_array().unwrap().len())
        .collect();
    assert_eq!(sizes, vec![0, 1, 1, 0]);
    let brute = nilcone(&["fiber", "--m", "-1", "--strategy", "brute-force", "--json", &doc], None);
    let divisor = nilcone(&["fiber", "--m", "-1", "--json", &doc], None);
    assert_eq!(brute.stdout, divisor.stdout);
    let bad = nilcone(&["fiber", "--strategy", "nope", "--json", &doc], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn defect_normalize_quasimap() {
    let zz = column(-2, &[form(&[1, 0, 0]), form(&[0, 1, 0])]);
    let d = stdout_json(&nilcone(&["defect", "--json", &zz.to_string()], None));
    assert_eq!(d, json!({"degree": 1, "coeffs": ["1", "0"]}));
    let n = stdout_json(&nilcone(&["normalize", "--json", &zz.to_string()], None));
    assert_eq!(n, column(-1, &[json!({"degree": 1, "coeffs": ["1", "0"]}), json!({"degree": 1, "coeffs": ["0", "1"]})]));
    let same = column(-1, &[form(&[1, 0]), form(&[1, 0])]);
    let c = stdout_json(&nilcone(&["quasimap", "--json", &same.to_string()], None));
    assert_eq!(c, json!({"kind": "QuasiMapWithDefect", "defect": {"degree": 1, "coeffs": ["1", "0"]}}));
    let swap = column(-1, &[form(&[0, 1]), form(&[1, 0])]);
    let c = stdout_json(&nilcone(&["quasimap", "--json", &swap.to_string()], None));
    assert_eq!(c, json!({"kind": "GenuineMap"}));
}

#[test]
fn fitting_command() {
    let m = json!({ "b": 2, "a": 2, "entries": [[[0, 1], [0]], [[0], [-1, 1]]] });
    let out = stdout_json(&nilcone(&["fitting", "--json", &m.to_string()], None));
    assert_eq!(out["ideals"][0]["generator"], json!(["0", "-1", "1"]));
    assert_eq!(out["ideals"][1]["kind"], json!("unit"));
    assert_eq!(out["rank"], json!({"kind": "NoZeroIdeal"}));
    let h1 = stdout_json(&nilcone(&["fitting", "--h", "1", "--json", &m.to_string()], None));
    assert_eq!(h1["kind"], json!("unit"));
}

#[test]
fn census_commands() {
    let out = stdout_json(&nilcone(&["census", "--g", "0", "--degL", "4"], None));
    assert_eq!(out["dimension"], json!(3));
    let out = stdout_json(&nilcone(&["census", "--g", "2", "--degL", "4", "--d-range", "-2:0"], None));
    assert_eq!(out["dimension"], json!(5));
    assert_eq!(out["component_families"]["square_root_count"], json!(16));
    assert_eq!(out["components"].as_array().unwrap().len(), 3);
    let table = nilcone(&["census", "--g", "0", "--degL", "2", "--d-range", "-1:1", "--table"], None);
    assert!(table.status.success());
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.contains("square-root"));
    assert_eq!(nilcone(&["census", "--g", "0", "--degL", "3"], None).status.code(), Some(2));
    let out = stdout_json(&nilcone(&["stable-census", "--g", "2", "--degL", "2"], None));
    assert_eq!(out["components"], json!(2));
    assert_eq!(nilcone(&["stable-census", "--g", "1", "--degL", "2"], None).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let out = nilcone(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(nilcone(&["kernel", "--json", "{"], None).status.code(), Some(2));
    let bad_slot = json!({ "d": 0, "ell": 2, "p": form(&[0, 0, 0]), "q": form(&[1, 0]), "r": form(&[0, 0, 0]) });
    let out = nilcone(&["kernel", "--json", &bad_slot.to_string()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("slot q"));
    let zero = json!({ "d": 0, "ell": 0, "p": form(&[0]), "q": form(&[0]), "r": form(&[0]) });
    assert_eq!(nilcone(&["canonical-form", "--json", &zero.to_string()], None).status.code(), Some(2));
    assert_eq!(nilcone(&["kernel", "--input", "/nonexistent/file.json"], None).status.code(), Some(2));
}

#[test]
fn input_file_and_determinism() {
    let path = std::env::temp_dir().join(format!("nilcone-cli-{}.json", std::process::id()));
    std::fs::write(&path, worked_example().to_string()).unwrap();
    let p = path.to_str().unwrap();
    let a = nilcone(&["fiber", "--m", "0", "--input", p], None);
    let b = nilcone(&["fiber", "--m", "0", "--input", p], None);
    std::fs::remove_file(&path).unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // output is accepted back: the fiber document re-reads as its own Higgs field
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    let again = stdout_json(&nilcone(&["fiber", "--m", "0", "--json", &doc["higgs"].to_string()], None));
    assert_eq!(again, doc);
}
