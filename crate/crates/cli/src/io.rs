use std::fmt;
use std::io::Read;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Number, Value};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Library(polydisc::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<polydisc::Error> for CliError {
    fn from(e: polydisc::Error) -> Self {
        CliError::Library(e)
    }
}

fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

/// Reads JSON from a file or standard input. Errors name the offending field.
pub fn parse_input<T: DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let text = read_text(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let field = if field == "." { "(document)".to_string() } else { format!("`{field}`") };
        CliError::Input(format!("field {field}: {}", e.inner()))
    })
}

/// Parses "re" or "re,im".
pub fn parse_complex(field: &str, s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Input(format!("field `{field}`: expected \"re\" or \"re,im\", got {s:?}"));
    let mut parts = s.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

/// Rounds every float in the document to 15 significant digits.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
            Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

pub fn emit<C: Serialize>(command: &str, config: &C, result: Value) {
    let doc = json!({ "command": command, "config": config, "result": result });
    let text = serde_json::to_string_pretty(&round_floats(doc)).expect("JSON values serialize");
    println!("{text}");
}
