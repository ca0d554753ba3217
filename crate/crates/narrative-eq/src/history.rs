//! Public histories of binary outcomes.

use crate::error::{Error, Result};

/// Maximum number of observations accepted by default. Factorials and the
/// subset enumeration grow quickly past this point.
pub const DEFAULT_K_CAP: u32 = 25;

/// A record of `K` binary outcomes (success / failure), observed by both
/// players before the game starts.
///
/// The success count is a sufficient statistic for everything the solver
/// computes, so histories with equal counts produce identical class
/// structures; only the labelling of concrete models differs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    bits: Vec<bool>,
}

impl History {
    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Input("history must have K >= 1 outcomes".into()));
        }
        Ok(History { bits })
    }

    /// Parses a bit string such as `"101"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits: Result<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("invalid history bit {other:?}"))),
            })
            .collect();
        History::from_bits(bits?)
    }

    /// Canonical representative of the sufficient statistic: `sigma` ones
    /// followed by zeros.
    pub fn canonical(k: u32, sigma: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("K must be >= 1".into()));
        }
        if sigma > k {
            return Err(Error::Input(format!("h_sigma {sigma} exceeds K {k}")));
        }
        Ok(History {
            bits: (0..k).map(|i| i < sigma).collect(),
        })
    }

    pub fn len(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        false // by construction K >= 1
    }

    /// Success count `h^Σ`.
    pub fn sigma(&self) -> u32 {
        self.bits.iter().filter(|&&b| b).count() as u32
    }

    /// Outcome at 1-based index.
    pub fn outcome(&self, index: u32) -> bool {
        self.bits[(index - 1) as usize]
    }

    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_is_ones_then_zeros() {
        let h = History::canonical(4, 2).unwrap();
        assert_eq!(h.bit_string(), "1100");
        assert_eq!(h.sigma(), 2);
    }

    #[test]
    fn parse_checks_digits() {
        assert!(History::parse("10x").is_err());
        assert!(History::parse("").is_err());
        assert_eq!(History::parse("101").unwrap().sigma(), 2);
    }

    #[test]
    fn sigma_bounds() {
        assert!(History::canonical(3, 4).is_err());
        assert!(History::canonical(0, 0).is_err());
    }
}
