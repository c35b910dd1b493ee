use std::ffi::OsString;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

/// Nine significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

/// Rounds every float in `v` to nine significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                let r: f64 = sci(x).parse().unwrap_or(x);
                *v = Value::from(r);
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Report {
    /// Human-readable lines for stdout.
    pub summary: String,
    pub csv: String,
    pub json: Value,
}

impl Report {
    pub fn json_text(&self) -> String {
        let mut v = self.json.clone();
        round_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("json values always serialise");
        s.push('\n');
        s
    }

    /// Writes `OUT.csv` and `OUT.json`; returns their paths.
    pub fn write(&self, out: &Path) -> Result<(PathBuf, PathBuf), CliError> {
        let with = |ext: &str| {
            let mut s: OsString = out.as_os_str().to_owned();
            s.push(ext);
            PathBuf::from(s)
        };
        let (csv, json) = (with(".csv"), with(".json"));
        if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&csv, &self.csv)?;
        std::fs::write(&json, self.json_text())?;
        Ok((csv, json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_keep_nine_digits() {
        let mut v = json!({"a": 0.1234567891234, "b": [1.0, 2], "c": {"d": -3.14159265358979e-12}});
        round_floats(&mut v);
        assert_eq!(v["a"], json!(0.123456789));
        assert_eq!(v["b"], json!([1.0, 2]));
        assert_eq!(v["c"]["d"], json!(-3.14159265e-12));
        assert_eq!(sci(1.0), "1.00000000e0");
    }
}
