//! Request documents: loading, schema check and typed field access.

use std::fs;
use std::path::{Path, PathBuf};

use exploded_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "exploded-kernel/1";

pub struct Request {
    doc: Map<String, Value>,
    base_dir: PathBuf,
}

impl Request {
    pub fn load(path: Option<&Path>, inline: Option<&str>) -> Result<Self> {
        let (text, base_dir) = match (path, inline) {
            (Some(p), None) => {
                let text = fs::read_to_string(p).map_err(|e| Error::Usage(format!("cannot read {}: {e}", p.display())))?;
                (text, p.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            (None, Some(s)) => (s.to_string(), PathBuf::from(".")),
            (None, None) => return Err(Error::Usage("give the input with --in PATH or --json TEXT".into())),
            (Some(_), Some(_)) => return Err(Error::Usage("--in and --json are exclusive".into())),
        };
        let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("malformed JSON: {e}")))?;
        let Value::Object(doc) = value else {
            return Err(Error::Parse("request must be a JSON object".into()));
        };
        match doc.get("schema") {
            Some(Value::String(s)) if s == SCHEMA => {}
            Some(other) => return Err(Error::Validation(format!("unsupported schema {other}, expected {SCHEMA:?}"))),
            None => return Err(Error::Validation(format!("missing \"schema\": {SCHEMA:?}"))),
        }
        Ok(Request { doc, base_dir })
    }

    pub fn from_map(doc: Map<String, Value>) -> Self {
        Request { doc, base_dir: PathBuf::from(".") }
    }

    /// Rejects fields the command does not understand.
    pub fn allow(&self, fields: &[&str]) -> Result<()> {
        for k in self.doc.keys() {
            if k != "schema" && !fields.contains(&k.as_str()) {
                return Err(Error::Validation(format!("unknown field {k:?}; expected one of {fields:?}")));
            }
        }
        Ok(())
    }

    pub fn has(&self, name: &str) -> bool {
        self.doc.contains_key(name)
    }

    pub fn get<T: DeserializeOwned>(&self, name: &str) -> Result<T> {
        let v = self.doc.get(name).ok_or_else(|| Error::Validation(format!("missing field {name:?}")))?;
        decode(name, v)
    }

    pub fn opt<T: DeserializeOwned>(&self, name: &str) -> Result<Option<T>> {
        self.doc.get(name).map(|v| decode(name, v)).transpose()
    }

    /// Reads the file named by a field, relative to the input file.
    pub fn read_bytes(&self, name: &str) -> Result<Vec<u8>> {
        self.read_relative(&self.get::<String>(name)?)
    }

    pub fn read_relative(&self, rel: &str) -> Result<Vec<u8>> {
        let p = self.base_dir.join(rel);
        fs::read(&p).map_err(|e| Error::Data(format!("cannot read {}: {e}", p.display())))
    }
}

pub fn decode<T: DeserializeOwned>(name: &str, v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Validation(format!("field {name:?}: {e}")))
}

/// A rational given as a fraction string or a JSON number.
pub fn real(name: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| Error::Validation(format!("field {name:?} is not a number"))),
        Value::String(s) => Ok(exploded_core::rational::to_f64(&exploded_core::rational::parse_rational(s)?)),
        _ => Err(Error::Validation(format!("field {name:?} must be a number or a fraction string"))),
    }
}
