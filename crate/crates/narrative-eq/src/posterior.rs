//! Beta-binomial posterior summaries under a uniform prior.
//!
//! A model marks a subset of observations as informative draws with success
//! probability equal to the unknown state; the rest are fair coin flips.
//! Conditional on a model with `s` successes among its `n` relevant
//! observations, the state posterior is `Beta(s+1, n-s+1)` and the marginal
//! likelihood of the history integrates in closed form.

use crate::history::History;
use crate::model::Model;
use crate::rational::{rat_int, Rat};
use num_bigint::BigInt;
use num_traits::One;

/// Exact posterior moments and marginal likelihood of a model given a history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorSummary {
    /// Successes among the relevant observations.
    pub successes: u32,
    /// Number of relevant observations `#m`.
    pub size: u32,
    /// Posterior mean `(s+1)/(#m+2)`; the receiver's bliss point.
    pub mean: Rat,
    /// Posterior variance `(s+1)(#m-s+1)/((#m+2)^2 (#m+3))`.
    pub variance: Rat,
    /// Marginal likelihood `(1/2)^(K-#m) * s!(#m-s)!/(#m+1)!`.
    pub likelihood: Rat,
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

/// Marginal likelihood of `history` under `m`: the beta integral over the
/// relevant observations times `(1/2)` per noise observation.
pub fn likelihood(m: Model, history: &History) -> Rat {
    let k = history.len();
    let n = m.size();
    let s = m.successes(history);
    let noise = BigInt::one() << (k - n) as usize;
    let num = factorial(s) * factorial(n - s);
    let den = factorial(n + 1) * noise;
    Rat::new(num, den)
}

/// Full posterior summary for `m` given `history`.
pub fn posterior_summary(m: Model, history: &History) -> PosteriorSummary {
    let n = m.size();
    let s = m.successes(history);
    let alpha = rat_int((s + 1) as i64);
    let beta = rat_int((n - s + 1) as i64);
    let total = rat_int((n + 2) as i64);
    let mean = alpha.clone() / total.clone();
    let variance = alpha * beta / (total.clone() * total * rat_int((n + 3) as i64));
    PosteriorSummary {
        successes: s,
        size: n,
        mean,
        variance,
        likelihood: likelihood(m, history),
    }
}

/// Sender's expected utility from action `a` under quadratic loss, given her
/// posterior `(mean, variance)` and bias `b`: `-(variance + (mean + b - a)^2)`.
pub fn expected_sender_utility(mean: &Rat, variance: &Rat, a: &Rat, b: &Rat) -> Rat {
    let miss = mean + b - a;
    -(variance + &miss * &miss)
}
