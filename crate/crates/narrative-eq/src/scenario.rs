//! Scenario files: the JSON configuration consumed by the CLI.

use crate::engine::DEFAULT_CLASS_CAP;
use crate::error::{Error, Result};
use crate::history::{History, DEFAULT_K_CAP};
use crate::model::Model;
use crate::rational::{parse_rat, Rat};
use crate::rules::{RuleKind, RuleSelector, DEFAULT_SMOOTH_TOLERANCE};
use crate::space::ModelSpace;
use crate::tiebreak::TiebreakPolicy;
use num_traits::Zero;
use serde::Deserialize;
use std::collections::BTreeMap;

/// Environment variable overriding the class cap of a scenario.
pub const CLASS_CAP_ENV: &str = "NARRATIVE_EQ_CAP";

/// A fully validated game instance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub k: u32,
    pub history: History,
    pub bias: Rat,
    pub rule: RuleSelector,
    pub tiebreak: TiebreakPolicy,
    pub exclude_empty_model: bool,
    pub class_cap: usize,
    pub worker_count: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    k: u32,
    history: Option<String>,
    h_sigma: Option<u32>,
    bias: String,
    rule: RuleFile,
    #[serde(default)]
    tiebreak: Option<TiebreakSpec>,
    #[serde(default)]
    exclude_empty_model: bool,
    #[serde(default)]
    class_cap: Option<usize>,
    #[serde(default)]
    k_cap: Option<u32>,
    #[serde(default)]
    worker_count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleFile {
    kind: String,
    #[serde(default)]
    weights: Option<BTreeMap<String, String>>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(default)]
    tolerance: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum TiebreakSpec {
    Name(String),
    Order(Vec<String>),
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))?;
        Scenario::from_file_struct(file)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_json(&text)
    }

    fn from_file_struct(file: ScenarioFile) -> Result<Self> {
        let k_cap = file.k_cap.unwrap_or(DEFAULT_K_CAP);
        if file.k == 0 {
            return Err(Error::Input("K must be >= 1".into()));
        }
        if file.k > k_cap {
            return Err(Error::Resource(format!(
                "K = {} exceeds the cap of {k_cap}",
                file.k
            )));
        }
        let history = match (&file.history, file.h_sigma) {
            (Some(bits), None) => {
                let h = History::parse(bits)?;
                if h.len() != file.k {
                    return Err(Error::Input(format!(
                        "history has {} outcomes but k = {}",
                        h.len(),
                        file.k
                    )));
                }
                h
            }
            (None, Some(sigma)) => History::canonical(file.k, sigma)?,
            (Some(_), Some(_)) => {
                return Err(Error::Input(
                    "give either history or h_sigma, not both".into(),
                ))
            }
            (None, None) => return Err(Error::Input("scenario needs history or h_sigma".into())),
        };
        let bias = parse_rat(&file.bias)?;
        if bias <= Rat::zero() {
            return Err(Error::Input("bias must be positive".into()));
        }
        let rule = parse_rule(&file.rule, file.k)?;
        let tiebreak = match file.tiebreak {
            None => TiebreakPolicy::default(),
            Some(TiebreakSpec::Name(name)) if name == "default" => TiebreakPolicy::default(),
            Some(TiebreakSpec::Name(name)) => {
                return Err(Error::Input(format!("unknown tiebreak policy {name:?}")))
            }
            Some(TiebreakSpec::Order(names)) => TiebreakPolicy::from_names(&names)?,
        };
        let class_cap = match std::env::var(CLASS_CAP_ENV) {
            Ok(v) => v
                .parse()
                .map_err(|_| Error::Input(format!("bad {CLASS_CAP_ENV} value {v:?}")))?,
            Err(_) => file.class_cap.unwrap_or(DEFAULT_CLASS_CAP),
        };
        let scenario = Scenario {
            k: file.k,
            history,
            bias,
            rule,
            tiebreak,
            exclude_empty_model: file.exclude_empty_model,
            class_cap,
            worker_count: file.worker_count.unwrap_or(1).max(1),
        };
        scenario.rule.validate()?;
        Ok(scenario)
    }

    /// Builds the bliss-class space for this scenario.
    pub fn space(&self) -> Result<ModelSpace> {
        ModelSpace::build(
            &self.history,
            self.tiebreak.clone(),
            !self.exclude_empty_model,
        )
    }
}

fn parse_rule(file: &RuleFile, k: u32) -> Result<RuleSelector> {
    let kind = match file.kind.to_ascii_lowercase().as_str() {
        "mleu" => RuleKind::Mleu,
        "meu" => RuleKind::Meu,
        "bayesian" => RuleKind::Bayesian,
        "smooth" => RuleKind::Smooth,
        other => return Err(Error::Input(format!("unknown rule {other:?}"))),
    };
    let weights = match &file.weights {
        None => None,
        Some(map) => {
            let mut out = BTreeMap::new();
            for (key, value) in map {
                let model = Model::parse(key, k)?;
                out.insert(model, parse_rat(value)?);
            }
            Some(out)
        }
    };
    Ok(RuleSelector {
        kind,
        weights,
        smooth_alpha: file.alpha,
        tolerance: file.tolerance.unwrap_or(DEFAULT_SMOOTH_TOLERANCE),
    })
}
