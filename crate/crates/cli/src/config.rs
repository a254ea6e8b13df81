//! Resolution of command parameters from a config file and flags.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::{CliError, Context};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Merges the config file (if any) with the flags that were given and
/// deserializes the result. Unknown keys are rejected by the target type.
pub fn resolve<T: DeserializeOwned>(
    ctx: &Context,
    flags: &impl Serialize,
    fixup: impl Fn(&mut Map<String, Value>) -> Result<(), CliError>,
) -> Result<T, CliError> {
    let mut map = match &ctx.config {
        Some(path) => match serde_json::from_str(&read_text(path)?) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(usage("config file must hold a JSON object")),
            Err(e) => return Err(usage(format!("config file: {e}"))),
        },
        None => Map::new(),
    };
    let Value::Object(given) = serde_json::to_value(flags).expect("flags serialize") else {
        unreachable!("flag structs serialize to objects")
    };
    for (k, v) in given {
        if !v.is_null() {
            map.insert(k, v);
        }
    }
    fixup(&mut map)?;
    serde_json::from_value(Value::Object(map)).map_err(|e| usage(e.to_string()))
}

/// A region given as inline JSON or `@path` is replaced by the parsed document.
pub fn load_region(map: &mut Map<String, Value>) -> Result<(), CliError> {
    if let Some(Value::String(s)) = map.get("region") {
        let text = match s.strip_prefix('@') {
            Some(path) => read_text(Path::new(path))?,
            None => s.clone(),
        };
        let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("region: {e}")))?;
        map.insert("region".into(), v);
    }
    Ok(())
}

/// Replaces a string-valued key by the result of `parse`.
pub fn parse_key(
    map: &mut Map<String, Value>,
    key: &str,
    parse: impl Fn(&str) -> Result<Value, CliError>,
) -> Result<(), CliError> {
    if let Some(Value::String(s)) = map.get(key) {
        let v = parse(s)?;
        map.insert(key.into(), v);
    }
    Ok(())
}

pub fn json_value(s: &str) -> Result<Value, CliError> {
    serde_json::from_str(s).map_err(|e| usage(format!("`{s}`: {e}")))
}

fn number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    if let Some(e) = s.strip_prefix("2^") {
        let k: i32 = e
            .parse()
            .map_err(|_| usage(format!("bad exponent in `{s}`")))?;
        return Ok(2f64.powi(k));
    }
    s.parse()
        .map_err(|_| usage(format!("`{s}` is not a number")))
}

/// Comma-separated numbers; an item may be `2^k` or a range `2^a..2^b`
/// stepping the exponent by one.
pub fn number_list(s: &str) -> Result<Value, CliError> {
    let mut out = Vec::new();
    for item in s.split(',') {
        match item.split_once("..") {
            Some((a, b)) => {
                let exp = |t: &str| -> Result<i32, CliError> {
                    t.trim()
                        .strip_prefix("2^")
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| usage(format!("range `{item}` must read 2^a..2^b")))
                };
                let (a, b) = (exp(a)?, exp(b)?);
                let step = if b >= a { 1 } else { -1 };
                let mut k = a;
                loop {
                    out.push(2f64.powi(k));
                    if k == b {
                        break;
                    }
                    k += step;
                }
            }
            None => out.push(number(item)?),
        }
    }
    Ok(Value::from(out))
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn scale_list(s: &str) -> Result<Value, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, h] => {
            let (a, b, h) = (number(a)?, number(b)?, number(h)?);
            if !(h > 0.0 && b >= a) {
                return Err(usage(format!(
                    "scale range `{s}` must have start ≤ stop and a positive step"
                )));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            Ok(Value::from(
                (0..=n).map(|i| a + i as f64 * h).collect::<Vec<_>>(),
            ))
        }
        [_] => number_list(s),
        _ => Err(usage(format!("scale list `{s}` not understood"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(
            number_list("0,0.5,2^-2").unwrap(),
            serde_json::json!([0.0, 0.5, 0.25])
        );
        assert_eq!(
            number_list("2^-1..2^-3").unwrap(),
            serde_json::json!([0.5, 0.25, 0.125])
        );
        assert_eq!(
            scale_list("10:14:2").unwrap(),
            serde_json::json!([10.0, 12.0, 14.0])
        );
        assert_eq!(scale_list("3,5").unwrap(), serde_json::json!([3.0, 5.0]));
        assert!(scale_list("4:2:1").is_err());
        assert!(number_list("x").is_err());
    }
}
