//! Output files and run manifests.
//!
//! Tables are CSV, reports JSON. Floats carry 12 significant digits and
//! exact rationals are `num/den` strings, so reruns are byte-identical.

use std::fs;
use std::path::Path;

use hypermatch::exact::fmt_sig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::CliError;

pub const MANIFEST: &str = "manifest.json";

/// One file of a run's output.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// 12 significant digits; empty for missing or non-finite values.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        fmt_sig(x)
    } else {
        String::new()
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

pub struct Csv {
    name: String,
    buf: String,
}

impl Csv {
    pub fn new(name: &str, header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Csv {
            name: name.to_string(),
            buf,
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        let line: Vec<&str> = fields.iter().map(AsRef::as_ref).collect();
        self.buf.push_str(&line.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> Artifact {
        Artifact {
            name: self.name,
            contents: self.buf,
        }
    }
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            *v = fmt_sig(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map(Value::Number)
                .unwrap_or(Value::Null);
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with floats rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn json<T: Serialize>(name: &str, value: &T) -> Result<Artifact, CliError> {
    Ok(Artifact {
        name: name.to_string(),
        contents: to_json(value)?,
    })
}

/// Everything needed to rerun and audit a run. The worker count is left
/// out on purpose: it never changes results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(config: &ExperimentConfig, artifacts: &[Artifact]) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            outputs: artifacts.iter().map(|a| a.name.clone()).collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let m: Manifest = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if m.tool != env!("CARGO_PKG_NAME") {
            return Err(CliError::Config(format!("manifest written by {:?}", m.tool)));
        }
        m.config.validate()?;
        Ok(m)
    }
}

/// Write every artifact and the manifest into `dir`.
pub fn write_run(dir: &Path, config: &ExperimentConfig, artifacts: &[Artifact]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for a in artifacts {
        fs::write(dir.join(&a.name), &a.contents).map_err(io)?;
    }
    let manifest = to_json(&Manifest::new(config, artifacts))?;
    fs::write(dir.join(MANIFEST), manifest).map_err(io)?;
    Ok(())
}
