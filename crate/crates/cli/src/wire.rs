//! On-disk system documents and the JSON shapes of exact values.

use micromacro::{Checks, Error, LogValue, RawSystem, Rational, System};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub const SYSTEM_FORMAT: &str = "micromacro-system";
pub const SYSTEM_VERSION: u32 = 1;

/// A system as stored on disk. Rationals are strings such as `"3/4"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub alpha: Vec<usize>,
    pub labels: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reversion: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl SystemFile {
    pub fn from_system(s: &System) -> Self {
        let raw = s.to_raw();
        SystemFile {
            format: SYSTEM_FORMAT.into(),
            version: SYSTEM_VERSION,
            n: s.n(),
            alpha: raw.alpha,
            labels: raw.labels,
            reversion: raw.reversion,
            values: raw.values.map(|v| v.iter().map(|r| r.to_string()).collect()),
            names: raw.names,
        }
    }

    pub fn to_system(&self) -> Result<System, Error> {
        if self.format != SYSTEM_FORMAT || self.version != SYSTEM_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported document {} version {}",
                self.format, self.version
            )));
        }
        if self.alpha.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "alpha",
                expected: self.n,
                got: self.alpha.len(),
            });
        }
        let values = self
            .values
            .as_ref()
            .map(|v| v.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        RawSystem {
            alpha: self.alpha.clone(),
            labels: self.labels.clone(),
            reversion: self.reversion.clone(),
            values,
            names: self.names.clone(),
        }
        .validate()
    }
}

pub fn parse_system(text: &str) -> Result<System, Error> {
    let file: SystemFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed system document: {e}")))?;
    file.to_system()
}

pub fn emit_system(s: &System) -> String {
    serde_json::to_string_pretty(&SystemFile::from_system(s)).expect("system documents serialize")
}

pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let t = text.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a rational number: {t:?}")))?;
    Ok(r)
}

/// Fifteen significant digits.
pub fn float_text(x: f64) -> String {
    format!("{x:.14e}")
}

pub fn rational(r: &Rational) -> Value {
    json!({
        "numerator": r.numer().to_string(),
        "denominator": r.denom().to_string(),
        "float": float_text(r.to_f64().unwrap_or(f64::NAN)),
    })
}

pub fn rationals<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rational).collect())
}

/// `{"ln": {prime: coefficient}, "float": ...}` for `Σ c_p ln p`.
pub fn log_value(v: &LogValue) -> Value {
    let ln: Map<String, Value> = v
        .coeffs()
        .iter()
        .map(|(p, c)| (p.to_string(), Value::String(c.to_string())))
        .collect();
    json!({ "ln": ln, "float": float_text(v.to_f64()) })
}

pub fn log_values<'a>(vs: impl IntoIterator<Item = &'a LogValue>) -> Value {
    Value::Array(vs.into_iter().map(log_value).collect())
}

pub fn checks(c: &Checks) -> Value {
    Value::Array(c.iter().map(|k| json!({ "name": k.name, "holds": k.holds })).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use micromacro::ratio;

    #[test]
    fn round_trip_with_tables() {
        let s = System::with_reversion(vec![1, 2, 3, 0], vec![0, 1, 2, 1], vec![0, 3, 2, 1])
            .unwrap()
            .with_tables(Some(vec![ratio(-1, 2), ratio(0, 1), ratio(7, 3)]), Some(vec!["a".into(), "b".into(), "c".into()]))
            .unwrap();
        assert_eq!(parse_system(&emit_system(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(parse_system("{}").is_err());
        let text = r#"{"format":"micromacro-system","version":1,"n":2,"alpha":[0,0],"labels":[0,0]}"#;
        assert!(matches!(parse_system(text), Err(Error::NotAPermutation { .. })));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn exact_shapes() {
        let v = rational(&ratio(2, 3));
        assert_eq!(v["numerator"], "2");
        assert_eq!(v["denominator"], "3");
        let l = log_value(&LogValue::ln_usize(12));
        assert_eq!(l["ln"]["2"], "2");
        assert_eq!(l["ln"]["3"], "1");
    }
}
