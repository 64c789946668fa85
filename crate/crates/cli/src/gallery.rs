//! Model references: bundled examples (`gallery:...`) or JSON files.

use std::fs;
use std::str::FromStr;

use packlab_core::io::{model_from_json, parse_model_file};
use packlab_core::model::{make_cp2, make_ruled, make_s2xs2, CohomologyFunctional, IntersectionLattice, ManifoldModel, ModelFlags};
use packlab_core::{Error, Rational};

/// References listed by the `gallery` subcommand.
pub const ENTRIES: [&str; 6] = [
    "gallery:cp2",
    "gallery:s2xs2:1:1",
    "gallery:s2xs2:1:2",
    "gallery:ruled:1:3:2",
    "gallery:ruled:2:5:1",
    "gallery:k0",
];

/// Minimal manifold with `b⁺ = 1` and trivial canonical class, outside the
/// rational and ruled families.
pub fn minimal_k0() -> ManifoldModel {
    let flags = ModelFlags { in_class_c: true, minimal: true, rational_or_ruled: false, base_genus: None };
    ManifoldModel::new(
        "K0",
        IntersectionLattice::new(vec![vec![1, 0], vec![0, -1]], vec!["H".into(), "F".into()]).expect("square pairing"),
        CohomologyFunctional::from_ints(&[0, 0]),
        CohomologyFunctional::from_ints(&[2, 1]),
        flags,
    )
    .expect("valid model")
}

fn rational(s: &str) -> Result<Rational, Error> {
    Rational::from_str(s)
}

fn gallery(spec: &str) -> Result<ManifoldModel, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::InvalidArgument(format!("unknown gallery model `gallery:{spec}`"));
    match parts.as_slice() {
        ["cp2"] => make_cp2(Rational::one()),
        ["cp2", s] => make_cp2(rational(s)?),
        ["s2xs2", a, b] => make_s2xs2(rational(a)?, rational(b)?),
        ["ruled", g, b, a] => {
            let g: u32 = g.parse().map_err(|_| Error::InvalidArgument(format!("bad genus `{g}`")))?;
            make_ruled(g, rational(b)?, rational(a)?)
        }
        ["k0"] => Ok(minimal_k0()),
        _ => Err(bad()),
    }
}

/// Reads the model text of a file; output of `blowup` (`{"model": {...}, ...}`) is unwrapped.
fn file_text(path: &str) -> Result<String, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))?;
    if let Ok(serde_json::Value::Object(map)) = serde_json::from_str::<serde_json::Value>(&text) {
        if let Some(inner @ serde_json::Value::Object(_)) = map.get("model") {
            return Ok(inner.to_string());
        }
    }
    Ok(text)
}

/// Loads and validates a model.
pub fn load_model(reference: &str) -> Result<ManifoldModel, Error> {
    match reference.strip_prefix("gallery:") {
        Some(spec) => gallery(spec),
        None => model_from_json(&file_text(reference)?),
    }
}

/// Loads a model without validating it, for the `validate` subcommand.
pub fn load_model_unchecked(reference: &str) -> Result<ManifoldModel, Error> {
    match reference.strip_prefix("gallery:") {
        Some(spec) => gallery(spec),
        None => parse_model_file(&file_text(reference)?)?.into_model_unchecked(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use packlab_core::model::validate;

    #[test]
    fn gallery_refs() {
        assert_eq!(load_model("gallery:cp2").unwrap(), make_cp2(1.into()).unwrap());
        assert_eq!(load_model("gallery:s2xs2:1:2").unwrap(), make_s2xs2(1.into(), 2.into()).unwrap());
        assert_eq!(load_model("gallery:cp2:3/2").unwrap(), make_cp2(Rational::frac(3, 2)).unwrap());
        assert!(load_model("gallery:s2xs2:1").is_err());
        assert!(load_model("gallery:cp2:1/0").is_err());
    }

    #[test]
    fn gallery_models_validate_with_b_plus_one() {
        for entry in ENTRIES {
            let report = validate(&load_model(entry).unwrap());
            assert!(report.valid, "{entry}");
            assert_eq!(report.b_plus, Some(1), "{entry}");
        }
    }
}
