//! Exhaustive sweep over labeled posets and cyclic size assignments, one row
//! of verdicts per instance.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{AmbientSpace, Caps, GroupError};
use crate::partition::{self, PartitionError};
use crate::pi::{Pi, PiError, PiParams};
use crate::poset::{default_names, labeled_posets, relation_key, Poset};
use crate::scheme::{self, SchemeError};
use crate::weight::{self, WeightError};

/// Largest poset size swept unless the caller raises it.
pub const DEFAULT_MAX_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurveyError {
    #[error("poset size {n} exceeds the sweep cap of {cap}")]
    TooManyElements { n: usize, cap: usize },
    #[error("size set is empty or contains 0")]
    BadSizes,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Pi(#[from] PiError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyConfig {
    /// Number of poset elements; every labeled poset on this many elements is swept.
    pub n: usize,
    pub sizes: Vec<u64>,
    pub caps: Caps,
    pub max_n: usize,
}

impl SurveyConfig {
    pub fn new(n: usize, sizes: Vec<u64>) -> Self {
        SurveyConfig { n, sizes, caps: Caps::default(), max_n: DEFAULT_MAX_N }
    }
}

/// Every `sizes^n` assignment in lexicographic order.
pub fn size_assignments(n: usize, sizes: &[u64]) -> Vec<Vec<u64>> {
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                sorted.iter().map(move |&s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Every `(poset, sizes)` pair of the sweep, in the order rows are reported.
pub fn instances(config: &SurveyConfig) -> Result<Vec<AmbientSpace>, SurveyError> {
    if config.n > config.max_n {
        return Err(SurveyError::TooManyElements { n: config.n, cap: config.max_n });
    }
    if config.sizes.is_empty() || config.sizes.contains(&0) {
        return Err(SurveyError::BadSizes);
    }
    let posets = labeled_posets(&default_names(config.n));
    let assignments = size_assignments(config.n, &config.sizes);
    let mut out = Vec::with_capacity(posets.len() * assignments.len());
    for p in &posets {
        for h in &assignments {
            let factors = h.iter().map(|&s| vec![s]).collect();
            let space = AmbientSpace::with_caps(p.clone(), factors, config.caps)?;
            space.check_size(config.caps.enumerate)?;
            out.push(space);
        }
    }
    out.sort_by_key(instance_key);
    Ok(out)
}

/// Stable report key: element count, sorted cover relations, factor orders.
pub fn instance_key(space: &AmbientSpace) -> String {
    format!("{}|{}|{}", space.poset().size(), relation_key(space.poset()), factor_label(space))
}

/// Factor orders per element, `x` between factors of one element.
pub fn factor_label(space: &AmbientSpace) -> String {
    space
        .factors()
        .iter()
        .map(|f| f.iter().map(u64::to_string).collect::<Vec<_>>().join("x"))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub key: String,
    pub relations: String,
    pub sizes: String,
    pub group_order: u128,
    pub hierarchical: bool,
    pub hierarchical_uniform: bool,
    pub reflexive: bool,
    pub weight_blocks: usize,
    pub lambda_blocks: usize,
    /// `Λ` computed from `F(α)` coincides with the dual partition of `Q(H, P)`.
    pub lambda_paths_agree: bool,
    /// Reflexivity, `Λ = Q(Ĥ, P̄)`, and hierarchical with level-constant sizes agree.
    pub reflexivity_consistent: bool,
    /// Number of distinct `π(Ω, M)` with `τ = h`, `η = h − 1`.
    pub theta_size: usize,
    /// `|Λ| = |Θ|`; only asserted when every `h ≥ 2`.
    pub lambda_equals_theta: bool,
    /// Absent when some `h = 1`.
    pub theta_consistent: Option<bool>,
    /// Absent above the scheme cap.
    pub scheme_agrees: Option<bool>,
    /// Absent on hierarchical posets or when some `h = 1`.
    pub witness_certifies: Option<bool>,
}

impl SurveyRow {
    fn sizes_at_least_two(&self) -> bool {
        self.theta_consistent.is_some()
    }

    pub fn consistent(&self) -> bool {
        self.lambda_paths_agree
            && self.reflexivity_consistent
            && self.theta_consistent.unwrap_or(true)
            && (!self.sizes_at_least_two() || self.lambda_equals_theta)
            && self.scheme_agrees.unwrap_or(true)
            && self.witness_certifies.unwrap_or(true)
    }
}

pub fn survey_row(space: &AmbientSpace) -> Result<SurveyRow, SurveyError> {
    let p: &Poset = space.poset();
    let q = partition::weight_partition(space)?;
    let lambda = partition::dual_partition(space, &q)?;
    let reflexive = partition::is_reflexive(space, &q)?.is_reflexive();
    let lambda_paths_agree = weight::lambda_via_f(space)? == lambda;
    let all_two = space.all_at_least_two();
    let reflexivity_consistent = if all_two {
        let c = weight::reflexivity_classification(space)?;
        c.agrees() && c.reflexive == reflexive
    } else {
        true
    };
    let pi = Pi::new(p.clone(), PiParams::from_sizes(&space.sizes()))?;
    let theta_size = pi.up_set_polys().into_iter().map(|(_, f)| f).collect::<BTreeSet<_>>().len();
    let theta = if all_two { Some(pi.theta_report()?) } else { None };
    let scheme_agrees = if space.size() <= u128::from(space.caps().scheme) {
        Some(scheme::weight_scheme_agreement(space)?.agrees())
    } else {
        None
    };
    let witness_certifies =
        (all_two && !p.is_hierarchical()).then(|| scheme::nonhierarchical_witness(space).map(|w| w.certifies())).transpose()?;
    Ok(SurveyRow {
        key: instance_key(space),
        relations: relation_key(p),
        sizes: factor_label(space),
        group_order: space.size(),
        hierarchical: p.is_hierarchical(),
        hierarchical_uniform: weight::hierarchical_with_uniform_levels(space),
        reflexive,
        weight_blocks: q.len(),
        lambda_blocks: lambda.len(),
        lambda_paths_agree,
        reflexivity_consistent,
        theta_size,
        lambda_equals_theta: lambda.len() == theta_size,
        theta_consistent: theta.as_ref().map(|t| t.agrees()),
        scheme_agrees,
        witness_certifies,
    })
}

/// Rows in instance-key order, computed in parallel.
pub fn run_survey(config: &SurveyConfig) -> Result<Vec<SurveyRow>, SurveyError> {
    let spaces = instances(config)?;
    spaces.par_iter().map(survey_row).collect()
}
