//! Bias thresholds for information transmission.
//!
//! For every partition the set of biases making it incentive compatible is
//! an interval: each binding constraint compares `mean + b` with a midpoint
//! of two induced actions and is linear in `b`. The module computes these
//! intervals exactly, unions them over all non-babbling partitions, and
//! reports the resulting thresholds:
//!
//! - `lower_bound`: the largest bias at which full revelation survives;
//! - `upper_bound`: the supremum of biases admitting any informative
//!   equilibrium, together with the exact feasible-bias set.

use crate::error::{Error, Result};
use crate::partition::{cells_from_cuts, PartitionProfile};
use crate::rational::{format_rat, rat, rat_int, Rat};
use crate::rules::{best_response, RuleKind, RuleSelector};
use crate::space::{ClassRange, ModelSpace};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

/// A (possibly unbounded) interval of biases `b > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasInterval {
    pub lower: Rat,
    pub lower_closed: bool,
    /// `None` means unbounded above.
    pub upper: Option<Rat>,
    pub upper_closed: bool,
}

impl BiasInterval {
    /// Canonical empty interval.
    pub fn empty() -> Self {
        BiasInterval {
            lower: Rat::zero(),
            lower_closed: false,
            upper: Some(Rat::zero()),
            upper_closed: false,
        }
    }

    /// The open-below half line `(0, +inf)`.
    pub fn positive_axis() -> Self {
        BiasInterval {
            lower: Rat::zero(),
            lower_closed: false,
            upper: None,
            upper_closed: false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.upper {
            None => false,
            Some(u) => {
                u < &self.lower || (u == &self.lower && !(self.lower_closed && self.upper_closed))
            }
        }
    }

    pub fn contains(&self, b: &Rat) -> bool {
        if self.is_empty() {
            return false;
        }
        let above = b > &self.lower || (b == &self.lower && self.lower_closed);
        let below = match &self.upper {
            None => true,
            Some(u) => b < u || (b == u && self.upper_closed),
        };
        above && below
    }

    pub fn render(&self) -> String {
        if self.is_empty() {
            return "{}".into();
        }
        let lo_brace = if self.lower_closed { '[' } else { '(' };
        let up = match &self.upper {
            None => "inf)".to_string(),
            Some(u) => format!(
                "{}{}",
                format_rat(u),
                if self.upper_closed { ']' } else { ')' }
            ),
        };
        format!("{lo_brace}{}, {up}", format_rat(&self.lower))
    }
}

/// Threshold report for one history and rule.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    /// Largest bias with a fully informative equilibrium.
    pub b_lower: Rat,
    /// Supremum of biases with any informative equilibrium.
    pub b_upper: Rat,
    /// Exact union of the feasible-bias intervals of all non-babbling
    /// partitions, merged and sorted.
    pub informative_set: Vec<BiasInterval>,
    /// Whether that union is the single down-closed interval `(0, b_upper]`.
    pub is_interval: bool,
}

/// Exact feasible-bias interval of one partition (cells given by `cuts`).
///
/// Only boundary classes bind: the top class of the left cell must not envy
/// the action above, the bottom class of the right cell must not envy the
/// action below, and every other constraint is implied. The babbling
/// partition is feasible for every positive bias.
pub fn feasible_bias_interval(
    space: &ModelSpace,
    rule: &RuleSelector,
    cuts: &[usize],
) -> Result<BiasInterval> {
    let cells = cells_from_cuts(cuts, space.class_count());
    let actions: Vec<Rat> = cells
        .iter()
        .map(|&c| best_response(space, c, rule))
        .collect::<Result<_>>()?;
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    for i in 0..cells.len().saturating_sub(1) {
        let midpoint = (&actions[i] + &actions[i + 1]) / rat_int(2);
        let ub = &midpoint - space.mean(cells[i].hi);
        let lb = &midpoint - space.mean(cells[i + 1].lo);
        if upper.as_ref().is_none_or(|u| &ub < u) {
            upper = Some(ub);
        }
        if lower.as_ref().is_none_or(|l| &lb > l) {
            lower = Some(lb);
        }
    }
    let interval = match (lower, upper) {
        (None, None) => BiasInterval::positive_axis(),
        (Some(lb), Some(ub)) => {
            if ub <= Rat::zero() || lb > ub {
                BiasInterval::empty()
            } else if lb > Rat::zero() {
                BiasInterval {
                    lower: lb,
                    lower_closed: true,
                    upper: Some(ub),
                    upper_closed: true,
                }
            } else {
                BiasInterval {
                    lower: Rat::zero(),
                    lower_closed: false,
                    upper: Some(ub),
                    upper_closed: true,
                }
            }
        }
        _ => unreachable!("bounds come in pairs"),
    };
    Ok(interval)
}

/// Same computation from an existing profile.
pub fn profile_bias_interval(
    space: &ModelSpace,
    rule: &RuleSelector,
    profile: &PartitionProfile,
) -> Result<BiasInterval> {
    feasible_bias_interval(space, rule, profile.cuts())
}

/// Largest bias at which the fully informative partition is incentive
/// compatible: half the minimum gap between adjacent bliss points. Both the
/// interval computation and the direct gap formula are evaluated and must
/// agree.
pub fn lower_bound(space: &ModelSpace, rule: &RuleSelector) -> Result<Rat> {
    let n = space.class_count();
    if n < 2 {
        return Err(Error::Degenerate(
            "a single bliss class leaves nothing to reveal".into(),
        ));
    }
    let finest: Vec<usize> = (1..n).collect();
    let interval = feasible_bias_interval(space, rule, &finest)?;
    let from_interval = interval.upper.clone().expect("finest partition is bounded");
    let min_gap = (1..n)
        .map(|i| space.mean(i) - space.mean(i - 1))
        .min()
        .unwrap();
    let from_gaps = min_gap / rat_int(2);
    assert_eq!(from_interval, from_gaps, "two lower-bound routes disagree");
    Ok(from_interval)
}

/// Unions the feasible intervals of every non-babbling partition.
///
/// The maximum-likelihood rule takes an integer fast path: all bliss points
/// share the denominator lcm(1..=K+2), so constraint breakpoints are exact
/// integers over twice that scale.
pub fn upper_bound(
    space: &ModelSpace,
    rule: &RuleSelector,
    class_cap: usize,
    worker_count: usize,
) -> Result<BoundsReport> {
    let n = space.class_count();
    if n < 2 {
        return Err(Error::Degenerate(
            "a single bliss class admits no informative partition".into(),
        ));
    }
    if n > class_cap {
        return Err(Error::Resource(format!(
            "{n} bliss classes exceed the cap of {class_cap} for partition enumeration"
        )));
    }
    let b_lower = lower_bound(space, rule)?;
    let informative_set = if rule.kind == RuleKind::Mleu {
        union_fast_mleu(space, worker_count)
    } else {
        union_generic(space, rule, worker_count)?
    };
    let b_upper = informative_set
        .iter()
        .filter_map(|iv| iv.upper.clone())
        .max()
        .expect("some informative partition is feasible");
    let is_interval = informative_set.len() == 1
        && informative_set[0].lower.is_zero()
        && !informative_set[0].lower_closed;
    assert!(b_lower <= b_upper);
    Ok(BoundsReport {
        b_lower,
        b_upper,
        informative_set,
        is_interval,
    })
}

/// Signed gain from pooling upward at `true_class`: the sender's expected
/// utility at the action induced by the classes strictly above, minus her
/// utility at the action induced by her own class and everything below.
/// Positive for every class means no two-step equilibrium survives at this
/// bias. The posterior variance cancels in the difference.
pub fn compute_v(
    space: &ModelSpace,
    rule: &RuleSelector,
    true_class: usize,
    bias: &Rat,
) -> Result<Rat> {
    let n = space.class_count();
    if true_class >= n {
        return Err(Error::Input(format!("class {true_class} out of range")));
    }
    if true_class + 1 == n {
        return Err(Error::Degenerate(
            "topmost class has no upward pool to compare against".into(),
        ));
    }
    let a_low = best_response(space, ClassRange::new(0, true_class), rule)?;
    let a_high = best_response(space, ClassRange::new(true_class + 1, n - 1), rule)?;
    let ideal = space.mean(true_class) + bias;
    let miss_low = &ideal - &a_low;
    let miss_high = &ideal - &a_high;
    Ok(&miss_low * &miss_low - &miss_high * &miss_high)
}

/// Checks that every class strictly gains from pooling upward at the given
/// bias. One exact evaluation certifies the regime of large conflicts for
/// all larger biases, because the gain is increasing in the bias.
pub fn certify_large_conflict(space: &ModelSpace, rule: &RuleSelector, bias: &Rat) -> Result<bool> {
    for c in 0..space.class_count() - 1 {
        if compute_v(space, rule, c, bias)? <= Rat::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed forms for the all-success and all-failure histories in the space
/// without the pure-noise model: `(K-1)/(6(K+2))` and `1/(2(K+1)(K+2))`.
pub fn closed_form_bounds(k: u32) -> Result<(Rat, Rat)> {
    if k < 3 {
        return Err(Error::Input("closed-form thresholds require K >= 3".into()));
    }
    let k = k as i64;
    Ok((rat(k - 1, 6 * (k + 2)), rat(1, 2 * (k + 1) * (k + 2))))
}

fn merge_rat_intervals(mut intervals: Vec<BiasInterval>) -> Vec<BiasInterval> {
    intervals.retain(|iv| !iv.is_empty());
    intervals.sort_by(|a, b| {
        a.lower
            .cmp(&b.lower)
            .then(a.lower_closed.cmp(&b.lower_closed).reverse())
    });
    let mut merged: Vec<BiasInterval> = Vec::new();
    for iv in intervals {
        match merged.last_mut() {
            Some(last) => {
                let last_upper = last
                    .upper
                    .clone()
                    .expect("informative intervals are bounded");
                let touches = iv.lower < last_upper
                    || (iv.lower == last_upper && (iv.lower_closed || last.upper_closed));
                if touches {
                    let iv_upper = iv.upper.expect("bounded");
                    if iv_upper > last_upper
                        || (iv_upper == last_upper && iv.upper_closed && !last.upper_closed)
                    {
                        last.upper = Some(iv_upper);
                        last.upper_closed = iv.upper_closed;
                    }
                } else {
                    merged.push(iv);
                }
            }
            None => merged.push(iv),
        }
    }
    merged
}

fn union_generic(
    space: &ModelSpace,
    rule: &RuleSelector,
    worker_count: usize,
) -> Result<Vec<BiasInterval>> {
    let n = space.class_count();
    let total: u64 = 1u64 << (n - 1);
    // Per-range actions once; the scan below only reads them.
    let mut actions: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for lo in 0..n {
        let mut row = Vec::with_capacity(n - lo);
        for hi in lo..n {
            row.push(best_response(space, ClassRange::new(lo, hi), rule)?);
        }
        actions.push(row);
    }
    let scan = |masks: std::ops::Range<u64>| -> Vec<BiasInterval> {
        let mut out = Vec::new();
        for mask in masks {
            if mask == 0 {
                continue; // babbling
            }
            let cuts: Vec<usize> = (1..n).filter(|&p| mask & (1u64 << (p - 1)) != 0).collect();
            let cells = cells_from_cuts(&cuts, n);
            let mut lower: Option<Rat> = None;
            let mut upper: Option<Rat> = None;
            for i in 0..cells.len() - 1 {
                let a_i = &actions[cells[i].lo][cells[i].hi - cells[i].lo];
                let a_j = &actions[cells[i + 1].lo][cells[i + 1].hi - cells[i + 1].lo];
                let midpoint = (a_i + a_j) / rat_int(2);
                let ub = &midpoint - space.mean(cells[i].hi);
                let lb = &midpoint - space.mean(cells[i + 1].lo);
                if upper.as_ref().is_none_or(|u| &ub < u) {
                    upper = Some(ub);
                }
                if lower.as_ref().is_none_or(|l| &lb > l) {
                    lower = Some(lb);
                }
            }
            let (lb, ub) = (lower.unwrap(), upper.unwrap());
            if ub <= Rat::zero() || lb > ub {
                continue;
            }
            out.push(if lb > Rat::zero() {
                BiasInterval {
                    lower: lb,
                    lower_closed: true,
                    upper: Some(ub),
                    upper_closed: true,
                }
            } else {
                BiasInterval {
                    lower: Rat::zero(),
                    lower_closed: false,
                    upper: Some(ub),
                    upper_closed: true,
                }
            });
        }
        out
    };

    let workers = worker_count.max(1).min(total as usize);
    let raw: Vec<BiasInterval> = if workers == 1 {
        scan(0..total)
    } else {
        let chunk = total.div_ceil(workers as u64);
        let mut parts = Vec::new();
        std::thread::scope(|scope| {
            let scan = &scan;
            let mut handles = Vec::new();
            for w in 0..workers as u64 {
                let lo = w * chunk;
                let hi = total.min(lo + chunk);
                handles.push(scope.spawn(move || scan(lo..hi)));
            }
            for h in handles {
                parts.push(h.join().expect("worker panicked"));
            }
        });
        parts.into_iter().flatten().collect()
    };
    Ok(merge_rat_intervals(raw))
}

/// Integer fast path for the maximum-likelihood rule. Bliss points scale to
/// integers over `L = lcm(1..=K+2)`; constraint breakpoints are integers
/// over `2L`. An interval is kept as `(lb, ub)` numerators, `lb <= 0`
/// standing for "open at zero".
fn union_fast_mleu(space: &ModelSpace, worker_count: usize) -> Vec<BiasInterval> {
    let n = space.class_count();
    let total: u64 = 1u64 << (n - 1);
    let scale: i64 = {
        let mut l = 1i64;
        for d in 2..=(space.k() as i64 + 2) {
            l = l.lcm(&d);
        }
        l
    };
    let to_scaled = |r: &Rat| -> i64 {
        let num = r.numer() * BigInt::from(scale) / r.denom();
        i64::try_from(&num).expect("scaled mean fits i64")
    };
    let means: Vec<i64> = (0..n).map(|c| to_scaled(space.mean(c))).collect();
    // winner[lo][hi-lo] = class index of the tiebreak-maximal member.
    let mut winner: Vec<Vec<usize>> = Vec::with_capacity(n);
    for lo in 0..n {
        let mut row = Vec::with_capacity(n - lo);
        for hi in lo..n {
            if hi == lo {
                row.push(lo);
            } else {
                let prev = row[hi - lo - 1];
                let (pm, ps) = space.classes()[prev].representative();
                let (cm, cs) = space.classes()[hi].representative();
                let keep =
                    space.tiebreak().compare((pm, ps), (cm, cs)) == std::cmp::Ordering::Greater;
                row.push(if keep { prev } else { hi });
            }
        }
        winner.push(row);
    }
    let action = |cell: ClassRange| -> i64 { means[winner[cell.lo][cell.hi - cell.lo]] };

    let scan = |masks: std::ops::Range<u64>| -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for mask in masks {
            if mask == 0 {
                continue;
            }
            let mut lb = i64::MIN;
            let mut ub = i64::MAX;
            let mut cell_lo = 0usize;
            let mut prev_cell: Option<ClassRange> = None;
            for p in 1..=n {
                let is_cut = p < n && mask & (1u64 << (p - 1)) != 0;
                if is_cut || p == n {
                    let cell = ClassRange::new(cell_lo, p - 1);
                    if let Some(left) = prev_cell {
                        let doubled_mid = action(left) + action(cell);
                        ub = ub.min(doubled_mid - 2 * means[left.hi]);
                        lb = lb.max(doubled_mid - 2 * means[cell.lo]);
                    }
                    prev_cell = Some(cell);
                    cell_lo = p;
                }
            }
            if ub > 0 && lb <= ub {
                out.push((lb, ub));
            }
        }
        out
    };

    let workers = worker_count.max(1).min(total as usize);
    let mut raw: Vec<(i64, i64)> = if workers == 1 {
        scan(0..total)
    } else {
        let chunk = total.div_ceil(workers as u64);
        let mut parts = Vec::new();
        std::thread::scope(|scope| {
            let scan = &scan;
            let mut handles = Vec::new();
            for w in 0..workers as u64 {
                let lo = w * chunk;
                let hi = total.min(lo + chunk);
                handles.push(scope.spawn(move || scan(lo..hi)));
            }
            for h in handles {
                parts.push(h.join().expect("worker panicked"));
            }
        });
        parts.into_iter().flatten().collect()
    };

    raw.sort_unstable();
    let mut merged: Vec<(i64, i64)> = Vec::new();
    for (lb, ub) in raw {
        match merged.last_mut() {
            Some((_, cur_ub)) if lb <= *cur_ub => {
                *cur_ub = (*cur_ub).max(ub);
            }
            _ => merged.push((lb, ub)),
        }
    }
    let denom = BigInt::from(2) * BigInt::from(scale);
    merged
        .into_iter()
        .map(|(lb, ub)| {
            let upper = Rat::new(BigInt::from(ub), denom.clone());
            if lb > 0 {
                BiasInterval {
                    lower: Rat::new(BigInt::from(lb), denom.clone()),
                    lower_closed: true,
                    upper: Some(upper),
                    upper_closed: true,
                }
            } else {
                BiasInterval {
                    lower: Rat::zero(),
                    lower_closed: false,
                    upper: Some(upper),
                    upper_closed: true,
                }
            }
        })
        .collect()
}
