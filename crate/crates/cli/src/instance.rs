//! Instance files: a poset, its cyclic factors and optional `π` parameters.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use poset_duality::group::{AmbientSpace, Caps};
use poset_duality::poset::Poset;
use poset_duality::ring::Ring;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub ground: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
    /// Cyclic orders per element; a missing element is rejected.
    pub groups: BTreeMap<String, Vec<u64>>,
    pub ring: Option<String>,
    pub tau: Option<ParamSpec>,
    pub eta: Option<ParamSpec>,
}

/// A parameter vector: a keyword, a list in ground order, or a map by element name.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ParamSpec {
    Keyword(String),
    List(Vec<Scalar>),
    ByName(BTreeMap<String, Scalar>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn text(&self) -> String {
        match self {
            Scalar::Int(v) => v.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }
}

impl ParamSpec {
    /// Parses a command-line value: a keyword or comma-separated values in ground order.
    pub fn from_flag(s: &str) -> ParamSpec {
        match s {
            "generic" | "sizes" | "tau-1" | "random" => ParamSpec::Keyword(s.to_owned()),
            _ => ParamSpec::List(s.split(',').map(|v| Scalar::Text(v.trim().to_owned())).collect()),
        }
    }
}

pub struct Instance {
    pub file: InstanceFile,
    pub poset: Poset,
    pub space: AmbientSpace,
}

impl Instance {
    pub fn load(path: &Path, caps: Caps) -> Result<Instance, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file: InstanceFile =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed instance {}: {e}", path.display())))?;
        Instance::build(file, caps)
    }

    pub fn build(file: InstanceFile, caps: Caps) -> Result<Instance, CliError> {
        let ground: Vec<&str> = file.ground.iter().map(String::as_str).collect();
        let relations: Vec<(&str, &str)> = file.relations.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let poset = Poset::new(&ground, &relations).map_err(CliError::invalid)?;
        if let Some(extra) = file.groups.keys().find(|k| poset.index_of(k).is_none()) {
            return Err(CliError::Usage(format!("groups names unknown element `{extra}`")));
        }
        let factors = poset
            .names()
            .iter()
            .map(|name| {
                file.groups.get(name).cloned().ok_or_else(|| CliError::Usage(format!("no group given for element `{name}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let space = AmbientSpace::with_caps(poset.clone(), factors, caps).map_err(CliError::invalid)?;
        Ok(Instance { file, poset, space })
    }

    /// Per-element values of `spec` in `ring`, in ground order. Keywords are
    /// resolved by the caller except `sizes`, which yields `h_i + offset`.
    pub fn values<R: Ring>(&self, ring: &R, spec: &ParamSpec, offset: i64) -> Result<Vec<R::El>, CliError> {
        let n = self.poset.size();
        let texts: Vec<String> = match spec {
            ParamSpec::Keyword(k) if k == "sizes" => {
                return Ok(self.space.sizes().iter().map(|&h| ring.from_i64(h as i64 + offset)).collect());
            }
            ParamSpec::Keyword(k) => return Err(CliError::Usage(format!("parameter keyword `{k}` is not valid here"))),
            ParamSpec::List(v) => {
                if v.len() != n {
                    return Err(CliError::Usage(format!("expected {n} parameter values, got {}", v.len())));
                }
                v.iter().map(Scalar::text).collect()
            }
            ParamSpec::ByName(m) => {
                if let Some(extra) = m.keys().find(|k| self.poset.index_of(k).is_none()) {
                    return Err(CliError::Usage(format!("parameter names unknown element `{extra}`")));
                }
                self.poset
                    .names()
                    .iter()
                    .map(|name| m.get(name).map(Scalar::text).ok_or_else(|| CliError::Usage(format!("no parameter for `{name}`"))))
                    .collect::<Result<_, _>>()?
            }
        };
        texts.iter().map(|t| ring.parse(t).map_err(CliError::invalid)).collect()
    }
}
