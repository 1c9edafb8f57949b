//! Runs the example corpus through the built binary.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Deserialize;
use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_exploded-kernel");

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("corpus")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Example {
    pub name: String,
    pub command: String,
    pub input: Option<String>,
    #[serde(default)]
    pub args: Vec<String>,
    pub exit: i32,
    pub expect: Option<Value>,
}

pub fn manifest() -> Vec<Example> {
    let text = std::fs::read_to_string(corpus_dir().join("manifest.json")).expect("manifest");
    serde_json::from_str(&text).expect("manifest parses")
}

/// Exit code, stdout, and the SVG text when the command draws one.
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub svg: Option<String>,
}

pub fn run(ex: &Example, scratch: &Path) -> Outcome {
    let mut cmd = Command::new(BIN);
    cmd.arg(&ex.command);
    if let Some(input) = &ex.input {
        cmd.arg("--in").arg(corpus_dir().join(input));
    }
    cmd.args(&ex.args);
    let svg_path = scratch.join(format!("{}.svg", ex.name));
    let draws = matches!(ex.command.as_str(), "render" | "corner-locus");
    if draws {
        let _ = std::fs::remove_file(&svg_path);
        cmd.arg("--svg").arg(&svg_path);
    }
    let out = cmd.output().expect("binary runs");
    Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        svg: if draws { std::fs::read_to_string(&svg_path).ok() } else { None },
    }
}

pub fn scratch_dir(tag: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(tag);
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir
}

/// Subset match: objects need only the expected keys, arrays match
/// elementwise, numbers within 1e-9 relative. `{"$contains": [..]}` asks for
/// each listed item somewhere in an array; `$le`, `$ge` and
/// `{"$approx": [value, tol]}` bound a number.
pub fn mismatches(expect: &Value, got: &Value, path: &str) -> Vec<String> {
    match expect {
        Value::Object(map) if map.len() == 1 && map.keys().next().is_some_and(|k| k.starts_with('$')) => {
            let (op, arg) = map.iter().next().unwrap();
            if op == "$contains" {
                let (Some(want), Some(have)) = (arg.as_array(), got.as_array()) else {
                    return vec![format!("{path}: expected an array")];
                };
                return want
                    .iter()
                    .filter(|w| !have.iter().any(|h| mismatches(w, h, path).is_empty()))
                    .map(|w| format!("{path}: nothing matches {w}"))
                    .collect();
            }
            let Some(x) = got.as_f64() else { return vec![format!("{path}: {got} is not a number")] };
            let ok = match op.as_str() {
                "$le" => x <= arg.as_f64().unwrap(),
                "$ge" => x >= arg.as_f64().unwrap(),
                "$approx" => (x - arg[0].as_f64().unwrap()).abs() <= arg[1].as_f64().unwrap(),
                _ => false,
            };
            if ok { vec![] } else { vec![format!("{path}: {x} fails {op} {arg}")] }
        }
        Value::Object(map) => {
            let Some(have) = got.as_object() else { return vec![format!("{path}: expected an object, got {got}")] };
            map.iter()
                .flat_map(|(k, v)| match have.get(k) {
                    Some(h) => mismatches(v, h, &format!("{path}.{k}")),
                    None => vec![format!("{path}.{k} missing")],
                })
                .collect()
        }
        Value::Array(want) => match got.as_array() {
            Some(have) if have.len() == want.len() => {
                want.iter().zip(have).enumerate().flat_map(|(i, (w, h))| mismatches(w, h, &format!("{path}[{i}]"))).collect()
            }
            _ => vec![format!("{path}: expected {expect}, got {got}")],
        },
        Value::Number(n) if n.is_f64() || got.is_f64() => {
            let (w, h) = (n.as_f64().unwrap(), got.as_f64());
            match h {
                Some(h) if (w - h).abs() <= 1e-9 * w.abs().max(1.0) => vec![],
                _ => vec![format!("{path}: expected {w}, got {got}")],
            }
        }
        _ if expect == got => vec![],
        _ => vec![format!("{path}: expected {expect}, got {got}")],
    }
}

/// Problems with one example run, empty when it behaves as recorded.
pub fn check(ex: &Example, out: &Outcome) -> Vec<String> {
    let mut problems = Vec::new();
    if out.code != ex.exit {
        problems.push(format!("exit {} instead of {}", out.code, ex.exit));
    }
    let doc: Value = match serde_json::from_str(&out.stdout) {
        Ok(v) => v,
        Err(e) => return [problems, vec![format!("stdout is not JSON: {e}")]].concat(),
    };
    if doc["schema"] != "exploded-kernel/1" {
        problems.push("output lacks the schema tag".into());
    }
    if let Some(expect) = &ex.expect {
        problems.extend(mismatches(expect, &doc, "$"));
    }
    problems
}
