use std::fs;
use std::io::Read;

use abmod::format;
use abmod::saito::PairingFamily;
use abmod::script::parse_module;
use abmod::{ABModule, Error, Result};
use serde_json::Value;

use crate::{GlobalOpts, DEFAULT_PRECISION};

fn read(path: &str) -> Result<String> {
    let mut s = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::Format(format!("{path}: {e}")))?;
    Ok(s)
}

fn looks_like_json(path: &str, text: &str) -> bool {
    path.ends_with(".json") || text.trim_start().starts_with('{')
}

/// Parses a JSON document; a report produced with `--json` is unwrapped to its result.
pub fn json_document(path: &str) -> Result<Value> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Format(format!("{path}: {e}")))?;
    if format::object_kind(&v)? == "report" {
        return v
            .get("result")
            .cloned()
            .ok_or_else(|| Error::Format(format!("{path}: report without a result")));
    }
    Ok(v)
}

/// A module from a `.ab` script or a JSON module document.
pub fn module(path: &str, opts: &GlobalOpts) -> Result<ABModule> {
    let text = read(path)?;
    if looks_like_json(path, &text) {
        let v = json_document(path)?;
        let e = format::module_from_json(&v)?;
        return Ok(match opts.precision {
            Some(p) if p < e.precision() => e.truncate(p),
            _ => e,
        });
    }
    parse_module(&text, DEFAULT_PRECISION, opts.precision)
}

/// A pairing family with the module it lives on.
pub fn family(path: &str, module_path: Option<&str>, opts: &GlobalOpts) -> Result<(PairingFamily, ABModule)> {
    let v = json_document(path)?;
    let (f, embedded) = format::family_from_json(&v)?;
    let e = match (module_path, embedded) {
        (Some(p), _) => module(p, opts)?,
        (None, Some(e)) => e,
        (None, None) => return Err(Error::Format("the family has no embedded module; pass --module".into())),
    };
    if e.rank() != f.rank() {
        return Err(Error::DimensionMismatch(format!(
            "family of rank {} on a module of rank {}",
            f.rank(),
            e.rank()
        )));
    }
    Ok((f, e))
}
