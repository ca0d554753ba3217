//! Models (narratives) as subsets of observation indices.

use crate::error::{Error, Result};
use crate::history::History;
use std::fmt;

/// A model declares which observations are causally linked to the unknown
/// state; the rest are noise. Stored as a bitmask over indices `1..=K`.
/// The empty model (pure noise) is valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Model(u32);

impl Model {
    pub const EMPTY: Model = Model(0);

    pub fn from_mask(mask: u32, k: u32) -> Result<Self> {
        if k > 0 && mask >= (1u32 << k) {
            return Err(Error::Input(format!(
                "model mask {mask:#b} has indices outside 1..={k}"
            )));
        }
        Ok(Model(mask))
    }

    /// Builds a model from 1-based observation indices.
    pub fn from_indices(indices: &[u32], k: u32) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i == 0 || i > k {
                return Err(Error::Input(format!(
                    "observation index {i} outside 1..={k}"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(Model(mask))
    }

    /// Parses `"1,3"` (comma separated 1-based indices); `""` is the empty model.
    pub fn parse(s: &str, k: u32) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Model::EMPTY);
        }
        let indices: Result<Vec<u32>> = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid model spec {s:?}")))
            })
            .collect();
        Model::from_indices(&indices?, k)
    }

    pub fn mask(&self) -> u32 {
        self.0
    }

    /// `#m`, the number of relevant observations.
    pub fn size(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(&self, index: u32) -> bool {
        index >= 1 && self.0 & (1 << (index - 1)) != 0
    }

    /// Successes among the relevant observations of `history`.
    pub fn successes(&self, history: &History) -> u32 {
        (1..=history.len())
            .filter(|&i| self.contains(i) && history.outcome(i))
            .count() as u32
    }

    pub fn indices(&self) -> Vec<u32> {
        (1..=32).filter(|&i| self.contains(i)).collect()
    }

    /// All `2^K` models over `K` observations.
    pub fn all(k: u32) -> impl Iterator<Item = Model> {
        (0..(1u64 << k)).map(|mask| Model(mask as u32))
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx = self.indices();
        if idx.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(
                f,
                "{{{}}}",
                idx.iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }
}

/// Canonical string used as a JSON map key: `"1,3"`, empty string for the
/// empty model.
pub fn model_key(m: Model) -> String {
    m.indices()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_roundtrip() {
        let m = Model::from_indices(&[1, 3], 3).unwrap();
        assert_eq!(m.mask(), 0b101);
        assert_eq!(m.size(), 2);
        assert_eq!(m.indices(), vec![1, 3]);
        assert_eq!(model_key(m), "1,3");
        assert_eq!(Model::parse("1,3", 3).unwrap(), m);
        assert_eq!(Model::parse("", 3).unwrap(), Model::EMPTY);
    }

    #[test]
    fn successes_count_relevant_only() {
        let h = History::parse("101").unwrap();
        assert_eq!(Model::from_indices(&[1, 3], 3).unwrap().successes(&h), 2);
        assert_eq!(Model::from_indices(&[2], 3).unwrap().successes(&h), 0);
        assert_eq!(Model::EMPTY.successes(&h), 0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Model::from_indices(&[4], 3).is_err());
        assert!(Model::from_indices(&[0], 3).is_err());
        assert!(Model::parse("1,x", 3).is_err());
    }

    #[test]
    fn all_enumerates_subsets() {
        assert_eq!(Model::all(3).count(), 8);
        assert_eq!(Model::all(1).count(), 2);
    }
}
