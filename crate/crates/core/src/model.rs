//! Factor/level models: the configurable parameters of a system under
//! study, their discrete settings, the interaction strength `t` and the
//! coverage multiplicity `lambda`.
//!
//! A model document is JSON with fields `strength`, `multiplicity`
//! (optional, defaults to 1) and an ordered `factors` array of
//! `{name, levels: [...]}`. Document order is contractual: factor and
//! level positions fix index assignment and all downstream tie-breaking,
//! so parse/serialize round-trips preserve it exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation and parse errors for model documents.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model document is not valid JSON: {0}")]
    Json(String),
    #[error("factor at position {position} has an empty name")]
    EmptyFactorName { position: usize },
    #[error("duplicate factor name `{name}`")]
    DuplicateFactor { name: String },
    #[error("factor `{factor}` has an empty level list")]
    EmptyLevels { factor: String },
    #[error("factor `{factor}` repeats level label `{label}`")]
    DuplicateLevel { factor: String, label: String },
    #[error("strength out of range: t > k (t = {strength}, k = {factors})")]
    StrengthTooLarge { strength: usize, factors: usize },
    #[error("strength out of range: t must be >= 1")]
    StrengthTooSmall,
    #[error("multiplicity out of range: lambda must be >= 1")]
    MultiplicityTooSmall,
}

/// One configurable parameter and its ordered, uniquely labeled levels.
///
/// The level index (position in the list) is the internal identity of a
/// level; labels appear only at I/O boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factor {
    name: String,
    levels: Vec<String>,
}

impl Factor {
    pub fn new(
        name: impl Into<String>,
        levels: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, ModelError> {
        let factor = Factor {
            name: name.into(),
            levels: levels.into_iter().map(Into::into).collect(),
        };
        factor.validate(0)?;
        Ok(factor)
    }

    fn validate(&self, position: usize) -> Result<(), ModelError> {
        if self.name.is_empty() {
            return Err(ModelError::EmptyFactorName { position });
        }
        if self.levels.is_empty() {
            return Err(ModelError::EmptyLevels {
                factor: self.name.clone(),
            });
        }
        for (i, label) in self.levels.iter().enumerate() {
            if self.levels[..i].contains(label) {
                return Err(ModelError::DuplicateLevel {
                    factor: self.name.clone(),
                    label: label.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    /// Number of levels (the symbol `v` for this factor).
    pub fn cardinality(&self) -> usize {
        self.levels.len()
    }

    pub fn level_index(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l == label)
    }

    pub fn level_label(&self, index: usize) -> &str {
        &self.levels[index]
    }
}

/// An ordered set of factors plus the coverage requirement (`t`, `lambda`).
///
/// Immutable after construction; invariants (`1 <= t <= k`, `lambda >= 1`,
/// unique factor names) are enforced by every constructor, so consumers may
/// rely on them without re-checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct FactorModel {
    strength: usize,
    multiplicity: u32,
    factors: Vec<Factor>,
}

#[derive(Deserialize)]
struct RawModel {
    strength: usize,
    #[serde(default = "default_multiplicity")]
    multiplicity: u32,
    factors: Vec<RawFactor>,
}

#[derive(Deserialize)]
struct RawFactor {
    name: String,
    levels: Vec<String>,
}

fn default_multiplicity() -> u32 {
    1
}

impl TryFrom<RawModel> for FactorModel {
    type Error = ModelError;

    fn try_from(raw: RawModel) -> Result<Self, ModelError> {
        let factors = raw
            .factors
            .into_iter()
            .map(|f| Factor {
                name: f.name,
                levels: f.levels,
            })
            .collect();
        FactorModel::new(factors, raw.strength, raw.multiplicity)
    }
}

impl FactorModel {
    pub fn new(
        factors: Vec<Factor>,
        strength: usize,
        multiplicity: u32,
    ) -> Result<Self, ModelError> {
        for (i, factor) in factors.iter().enumerate() {
            factor.validate(i)?;
            if factors[..i].iter().any(|f| f.name == factor.name) {
                return Err(ModelError::DuplicateFactor {
                    name: factor.name.clone(),
                });
            }
        }
        if strength < 1 {
            return Err(ModelError::StrengthTooSmall);
        }
        if strength > factors.len() {
            return Err(ModelError::StrengthTooLarge {
                strength,
                factors: factors.len(),
            });
        }
        if multiplicity < 1 {
            return Err(ModelError::MultiplicityTooSmall);
        }
        Ok(FactorModel {
            strength,
            multiplicity,
            factors,
        })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> &Factor {
        &self.factors[index]
    }

    /// Number of factors (the symbol `k`).
    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    /// Interaction strength `t`.
    pub fn strength(&self) -> usize {
        self.strength
    }

    /// Coverage multiplicity `lambda`.
    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.factors.iter().map(Factor::cardinality).collect()
    }

    pub fn factor_index(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name == name)
    }

    /// Same factors with a different strength (used by CLI overrides).
    pub fn with_strength(&self, strength: usize) -> Result<Self, ModelError> {
        FactorModel::new(self.factors.clone(), strength, self.multiplicity)
    }

    /// Same factors with a different multiplicity.
    pub fn with_multiplicity(&self, multiplicity: u32) -> Result<Self, ModelError> {
        FactorModel::new(self.factors.clone(), self.strength, multiplicity)
    }
}

/// Parses and validates a JSON model document.
pub fn parse_model(text: &str) -> Result<FactorModel, ModelError> {
    let raw: RawModel =
        serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
    FactorModel::try_from(raw)
}

/// Renders a model back to its document form.
///
/// `parse_model(serialize_model(m)) == m` for every valid model.
pub fn serialize_model(model: &FactorModel) -> String {
    let mut out = serde_json::to_string_pretty(model).expect("model serialization");
    out.push('\n');
    out
}

/// Size of the full factorial: the product of all factor cardinalities.
pub fn exhaustive_size(model: &FactorModel) -> u128 {
    model
        .factors
        .iter()
        .map(|f| f.cardinality() as u128)
        .product()
}

/// Minimum possible covering-array size for strength `t`:
/// `lambda` times the product of the `t` largest cardinalities.
///
/// The `t` columns with the largest alphabets must jointly display all
/// their level combinations, each at least `lambda` times, and each row
/// shows exactly one combination.
pub fn lower_bound(model: &FactorModel, strength: usize) -> Result<u128, ModelError> {
    if strength < 1 {
        return Err(ModelError::StrengthTooSmall);
    }
    if strength > model.factor_count() {
        return Err(ModelError::StrengthTooLarge {
            strength,
            factors: model.factor_count(),
        });
    }
    let mut cards = model.cardinalities();
    cards.sort_unstable_by(|a, b| b.cmp(a));
    let product: u128 = cards[..strength].iter().map(|&c| c as u128).product();
    Ok(product * model.multiplicity() as u128)
}
