//! JSON model files.
//!
//! ```json
//! {"name": "CP2", "rank": 1, "pairing": [[1]], "c1": ["3"], "omega": ["1"],
//!  "flags": {"in_class_C": true, "minimal": true, "rational_or_ruled": true},
//!  "builtin": {"kind": "cp2", "scale": "1"}}
//! ```
//!
//! Rationals are `"p/q"` strings or bare integers. When `builtin` is present the
//! lattice data must match the family it names.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Builtin, CohomologyFunctional, IntersectionLattice, ManifoldModel, ModelFlags};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub rank: usize,
    pub pairing: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub c1: Vec<Rational>,
    pub omega: Vec<Rational>,
    #[serde(default)]
    pub flags: ModelFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
}

impl From<&ManifoldModel> for ModelFile {
    fn from(m: &ManifoldModel) -> Self {
        ModelFile {
            name: m.name.clone(),
            rank: m.rank(),
            pairing: m.lattice.pairing().to_vec(),
            labels: Some(m.lattice.labels().to_vec()),
            c1: m.c1.values().to_vec(),
            omega: m.omega.values().to_vec(),
            flags: m.flags.clone(),
            builtin: m.builtin.clone(),
        }
    }
}

impl ModelFile {
    /// Structural checks, then assembly without validation.
    pub fn into_model_unchecked(self) -> Result<ManifoldModel> {
        if self.pairing.len() != self.rank {
            return Err(Error::InvalidModel(format!(
                "pairing: has {} rows but rank is {}",
                self.pairing.len(),
                self.rank
            )));
        }
        for (field, len) in [("c1", self.c1.len()), ("omega", self.omega.len())] {
            if len != self.rank {
                return Err(Error::InvalidModel(format!(
                    "{field}: has {len} entries but rank is {}",
                    self.rank
                )));
            }
        }
        let lattice = match self.labels {
            Some(labels) => {
                if labels.len() != self.rank {
                    return Err(Error::InvalidModel(format!(
                        "labels: has {} entries but rank is {}",
                        labels.len(),
                        self.rank
                    )));
                }
                IntersectionLattice::new(self.pairing, labels)?
            }
            None => IntersectionLattice::unlabeled(self.pairing)?,
        };
        let mut model = ManifoldModel::new_unchecked(
            self.name,
            lattice,
            CohomologyFunctional(self.c1),
            CohomologyFunctional(self.omega),
            self.flags,
        )?;
        model.builtin = self.builtin;
        Ok(model)
    }

    /// Assembles and validates; a `builtin` tag must agree with the lattice data.
    pub fn into_model(self) -> Result<ManifoldModel> {
        let model = self.into_model_unchecked()?;
        model.ensure_valid()?;
        if let Some(tag) = &model.builtin {
            let expected = tag.build()?;
            if expected.lattice.pairing() != model.lattice.pairing()
                || expected.c1 != model.c1
                || expected.omega != model.omega
            {
                return Err(Error::InvalidModel(
                    "builtin: lattice data does not match the named family".into(),
                ));
            }
        }
        Ok(model)
    }
}

/// Parses a model file, reporting the JSON path of any schema violation.
pub fn model_from_json(text: &str) -> Result<ManifoldModel> {
    parse_model_file(text)?.into_model()
}

pub fn parse_model_file(text: &str) -> Result<ModelFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Error::InvalidModel(format!("{}: {}", e.path(), e.inner())))
}

pub fn model_to_json(model: &ManifoldModel) -> serde_json::Value {
    serde_json::to_value(ModelFile::from(model)).expect("model file serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::blow_up;
    use crate::model::{make_cp2, make_ruled};

    #[test]
    fn round_trip_builtin() {
        let m = make_ruled(2, Rational::frac(3, 2), 1.into()).unwrap();
        let text = model_to_json(&m).to_string();
        assert_eq!(model_from_json(&text).unwrap(), m);
    }

    #[test]
    fn round_trip_blowup() {
        let m = blow_up(&make_cp2(1.into()).unwrap(), 3).unwrap().model;
        let text = model_to_json(&m).to_string();
        assert_eq!(model_from_json(&text).unwrap(), m);
    }

    #[test]
    fn accepts_minimal_file() {
        let text = r#"{"name":"x","rank":2,"pairing":[[1,0],[0,-1]],"c1":[3,"1"],"omega":["1","1/3"]}"#;
        let m = model_from_json(text).unwrap();
        assert_eq!(m.omega.values()[1], Rational::frac(1, 3));
        assert!(!m.flags.in_class_c);
    }

    #[test]
    fn reports_field_paths() {
        let text = r#"{"name":"x","rank":1,"pairing":[[1]],"c1":["3"],"omega":["1/0"]}"#;
        let err = model_from_json(text).unwrap_err().to_string();
        assert!(err.contains("omega[0]"), "{err}");

        let text = r#"{"name":"x","rank":1,"pairing":[[1]],"c1":["3"]}"#;
        assert!(model_from_json(text).unwrap_err().to_string().contains("omega"));

        let text = r#"{"name":"x","rank":2,"pairing":[[1]],"c1":["3"],"omega":["1"]}"#;
        assert!(model_from_json(text).unwrap_err().to_string().contains("pairing"));
    }

    #[test]
    fn rejects_degenerate_and_mismatched_builtin() {
        let text = r#"{"name":"x","rank":2,"pairing":[[0,0],[0,1]],"c1":[0,0],"omega":[1,1]}"#;
        assert!(model_from_json(text).is_err());

        let text = r#"{"name":"x","rank":1,"pairing":[[1]],"c1":[3],"omega":[2],
                       "builtin":{"kind":"cp2","scale":"1"}}"#;
        assert!(model_from_json(text).unwrap_err().to_string().contains("builtin"));
    }
}
