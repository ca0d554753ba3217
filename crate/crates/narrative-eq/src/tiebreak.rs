//! Strict orderings used to break likelihood ties.
//!
//! The maximum-likelihood rule needs a strict total order on models that
//! respects the likelihood of the observed history. The default order
//! prefers higher likelihood, then more relevant observations, then a higher
//! posterior mean, then the larger bitmask; it reproduces the tie-breaking
//! used in all of the worked scenarios this crate regression-tests against.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::posterior::PosteriorSummary;
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiebreakKey {
    /// Marginal likelihood of the history (must come first).
    Likelihood,
    /// Number of relevant observations `#m`.
    Size,
    /// Posterior mean.
    Mean,
    /// Bitmask order on the index set; the final, always-strict discriminator.
    Subset,
}

impl TiebreakKey {
    fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "likelihood" => Ok(TiebreakKey::Likelihood),
            "size" => Ok(TiebreakKey::Size),
            "mean" => Ok(TiebreakKey::Mean),
            "subset" | "lex" => Ok(TiebreakKey::Subset),
            other => Err(Error::Input(format!("unknown tiebreak key {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiebreakPolicy {
    keys: Vec<TiebreakKey>,
}

impl Default for TiebreakPolicy {
    fn default() -> Self {
        TiebreakPolicy {
            keys: vec![
                TiebreakKey::Likelihood,
                TiebreakKey::Size,
                TiebreakKey::Mean,
                TiebreakKey::Subset,
            ],
        }
    }
}

impl TiebreakPolicy {
    /// Builds a policy from key names. The order must start with
    /// `likelihood` (otherwise the maximum-likelihood rule would not respect
    /// fit) and `subset` may only appear last; it is appended when missing so
    /// the order is strict.
    pub fn from_names(names: &[String]) -> Result<Self> {
        if names.is_empty() {
            return Ok(TiebreakPolicy::default());
        }
        let mut keys: Vec<TiebreakKey> = names
            .iter()
            .map(|n| TiebreakKey::parse(n))
            .collect::<Result<_>>()?;
        if keys[0] != TiebreakKey::Likelihood {
            return Err(Error::Input(
                "tiebreak order must put likelihood first".into(),
            ));
        }
        if let Some(pos) = keys.iter().position(|&k| k == TiebreakKey::Subset) {
            if pos != keys.len() - 1 {
                return Err(Error::Input("subset tiebreak must come last".into()));
            }
        } else {
            keys.push(TiebreakKey::Subset);
        }
        let mut seen = Vec::new();
        for k in &keys {
            if seen.contains(k) {
                return Err(Error::Input("duplicate tiebreak key".into()));
            }
            seen.push(*k);
        }
        Ok(TiebreakPolicy { keys })
    }

    /// Compares two models sharing a history by their summary statistics
    /// only (all keys except the final bitmask). Models with equal
    /// `(successes, size)` compare equal here.
    pub fn compare_summaries(&self, a: &PosteriorSummary, b: &PosteriorSummary) -> Ordering {
        for key in &self.keys {
            let ord = match key {
                TiebreakKey::Likelihood => a.likelihood.cmp(&b.likelihood),
                TiebreakKey::Size => a.size.cmp(&b.size),
                TiebreakKey::Mean => a.mean.cmp(&b.mean),
                TiebreakKey::Subset => Ordering::Equal,
            };
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

    /// Full strict comparison: summary keys, then the bitmask.
    pub fn compare(
        &self,
        a: (Model, &PosteriorSummary),
        b: (Model, &PosteriorSummary),
    ) -> Ordering {
        self.compare_summaries(a.1, b.1)
            .then(a.0.mask().cmp(&b.0.mask()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.keys
            .iter()
            .map(|k| match k {
                TiebreakKey::Likelihood => "likelihood",
                TiebreakKey::Size => "size",
                TiebreakKey::Mean => "mean",
                TiebreakKey::Subset => "subset",
            })
            .collect()
    }

    pub fn is_default(&self) -> bool {
        self == &TiebreakPolicy::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::History;
    use crate::posterior::posterior_summary;

    #[test]
    fn default_prefers_more_relevant_observations_on_ties() {
        // One success / no failure vs. no relevant observations at all: the
        // likelihoods tie at 1/8 for K=3 and the larger model wins.
        let h = History::parse("101").unwrap();
        let single = Model::from_indices(&[1], 3).unwrap();
        let empty = Model::EMPTY;
        let ps = posterior_summary(single, &h);
        let pe = posterior_summary(empty, &h);
        assert_eq!(ps.likelihood, pe.likelihood);
        let policy = TiebreakPolicy::default();
        assert_eq!(
            policy.compare((single, &ps), (empty, &pe)),
            Ordering::Greater
        );
    }

    #[test]
    fn custom_orders_validate() {
        let ok = TiebreakPolicy::from_names(&["likelihood".into(), "mean".into()]).unwrap();
        assert_eq!(ok.names(), vec!["likelihood", "mean", "subset"]);
        assert!(TiebreakPolicy::from_names(&["mean".into()]).is_err());
        assert!(
            TiebreakPolicy::from_names(&["likelihood".into(), "subset".into(), "mean".into()])
                .is_err()
        );
        assert!(TiebreakPolicy::from_names(&["likelihood".into(), "likelihood".into()]).is_err());
    }
}
