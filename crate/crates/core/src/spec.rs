//! JSON model specifications.
//!
//! ```json
//! {
//!   "generator": {"family": "clayton", "params": {"a": 1.0, "b": 1.0}},
//!   "aging": [{"family": "linear", "params": {"c": 1.0}}],
//!   "structure": {"builtin": "aircraft4"},
//!   "grid": {"t_max": 10.0, "points": 1024, "slack": 1e-9}
//! }
//! ```
//!
//! `structure` is either `{"builtin": name, "n"?: .., "k"?: ..}` with
//! `name` one of `series`, `parallel`, `k_of_n`, `aircraft4`, or
//! `{"minimal_path_sets": [[1, 3], [2, 3]], "n"?: ..}` with 1-based indices.
//! When `n` is omitted it is 4 for `aircraft4` and the number of aging
//! entries otherwise. A single aging entry is shared by all `n` components.
//! Unknown fields are rejected everywhere.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::structure::Structure;
use crate::tte::{AgingFunction, TteModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl FamilySpec {
    pub fn new(family: &str, params: &[(&str, f64)]) -> Self {
        FamilySpec {
            family: family.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_path_sets: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub generator: FamilySpec,
    pub aging: Vec<FamilySpec>,
    pub structure: StructureSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec(format!("cannot read `{}`: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn component_count(&self) -> Result<usize> {
        let s = &self.structure;
        if let Some(n) = s.n {
            return Ok(n);
        }
        if s.builtin.as_deref() == Some("aircraft4") {
            return Ok(4);
        }
        if self.aging.is_empty() {
            return Err(Error::Spec("`aging` must list at least one entry".into()));
        }
        Ok(self.aging.len())
    }

    pub fn to_structure(&self) -> Result<Structure> {
        let n = self.component_count()?;
        let s = &self.structure;
        match (&s.builtin, &s.minimal_path_sets) {
            (Some(name), None) => Structure::builtin_named(name, n, s.k),
            (None, Some(sets)) => {
                if s.k.is_some() {
                    return Err(Error::Spec("`k` only applies to builtin structures".into()));
                }
                Structure::new(n, sets)
            }
            _ => Err(Error::Spec(
                "structure needs exactly one of `builtin` or `minimal_path_sets`".into(),
            )),
        }
    }

    pub fn to_model(&self) -> Result<TteModel> {
        let generator = Generator::make(&self.generator.family, &self.generator.params)?;
        let structure = self.to_structure()?;
        let mut aging = self
            .aging
            .iter()
            .map(|a| AgingFunction::make(&a.family, &a.params))
            .collect::<Result<Vec<_>>>()?;
        if aging.len() == 1 && structure.n() > 1 {
            aging = vec![aging[0].clone(); structure.n()];
        }
        TteModel::new(generator, aging, structure)
    }

    /// Canonical spec of `model`: explicit `n` and minimal path sets.
    pub fn from_model(model: &TteModel) -> Result<Self> {
        let g = model.generator();
        let aging = model
            .aging()
            .iter()
            .map(|r| match r {
                AgingFunction::FromMarginal(_) => Err(Error::Spec(
                    "aging functions built from a marginal have no JSON form".into(),
                )),
                _ => Ok(FamilySpec {
                    family: r.family().to_string(),
                    params: r.params(),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ModelSpec {
            generator: FamilySpec {
                family: g.family().to_string(),
                params: g.params(),
            },
            aging,
            structure: StructureSpec {
                n: Some(model.n()),
                minimal_path_sets: Some(model.structure().path_sets_one_based()),
                ..StructureSpec::default()
            },
            grid: None,
        })
    }
}
