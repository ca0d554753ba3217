//! The model space of a scenario, organized into bliss classes.
//!
//! Models sharing a posterior mean induce the same receiver bliss point and
//! are interchangeable for equilibrium purposes, so the space is stored as
//! the ordered list of distinct bliss points ("classes"). Models with equal
//! `(successes, size)` share all summary statistics and are kept as one
//! group with a combinatorial count; concrete bitmasks are only enumerated
//! on demand, which keeps large `K` cheap.

use crate::error::{Error, Result};
use crate::history::History;
use crate::model::Model;
use crate::posterior::{posterior_summary, PosteriorSummary};
use crate::rational::Rat;
use crate::tiebreak::TiebreakPolicy;
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// A group of models sharing `(successes, size)` and therefore every summary
/// statistic. `witness` is the tiebreak-maximal bitmask of the group.
#[derive(Debug, Clone)]
pub struct ModelGroup {
    pub summary: PosteriorSummary,
    pub count: u64,
    pub witness: Model,
}

/// All models inducing one receiver bliss point, with groups sorted so that
/// the first group contains the tiebreak-maximal member of the class.
#[derive(Debug, Clone)]
pub struct BlissClass {
    pub mean: Rat,
    pub groups: Vec<ModelGroup>,
}

impl BlissClass {
    /// The tiebreak-maximal member of the class and its summary.
    pub fn representative(&self) -> (Model, &PosteriorSummary) {
        (self.groups[0].witness, &self.groups[0].summary)
    }

    pub fn model_count(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }
}

/// Contiguous, nonempty range of class indices (inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassRange {
    pub lo: usize,
    pub hi: usize,
}

impl ClassRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi);
        ClassRange { lo, hi }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, class: usize) -> bool {
        self.lo <= class && class <= self.hi
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone)]
pub struct ModelSpace {
    k: u32,
    history: History,
    tiebreak: TiebreakPolicy,
    include_empty: bool,
    classes: Vec<BlissClass>,
}

impl ModelSpace {
    /// Builds the ordered bliss classes for `history`. Set `include_empty`
    /// to `false` to drop the pure-noise model from the space.
    pub fn build(history: &History, tiebreak: TiebreakPolicy, include_empty: bool) -> Result<Self> {
        let k = history.len();
        if k > 32 {
            return Err(Error::Input("histories beyond K=32 are unsupported".into()));
        }
        let sigma = history.sigma();
        let successes: Vec<u32> = (1..=k).filter(|&i| history.outcome(i)).collect();
        let failures: Vec<u32> = (1..=k).filter(|&i| !history.outcome(i)).collect();

        let mut by_mean: BTreeMap<Rat, Vec<ModelGroup>> = BTreeMap::new();
        for size in 0..=k {
            if size == 0 && !include_empty {
                continue;
            }
            let s_lo = size.saturating_sub(k - sigma);
            let s_hi = size.min(sigma);
            for s in s_lo..=s_hi {
                let witness = group_witness(&successes, &failures, s, size, k)?;
                let summary = posterior_summary(witness, history);
                debug_assert_eq!(summary.successes, s);
                debug_assert_eq!(summary.size, size);
                let count = binomial(sigma, s) * binomial(k - sigma, size - s);
                by_mean
                    .entry(summary.mean.clone())
                    .or_default()
                    .push(ModelGroup {
                        summary,
                        count,
                        witness,
                    });
            }
        }

        let classes = by_mean
            .into_iter()
            .map(|(mean, mut groups)| {
                groups.sort_by(|a, b| {
                    tiebreak
                        .compare_summaries(&b.summary, &a.summary)
                        .then(b.witness.mask().cmp(&a.witness.mask()))
                });
                BlissClass { mean, groups }
            })
            .collect();

        Ok(ModelSpace {
            k,
            history: history.clone(),
            tiebreak,
            include_empty,
            classes,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn history(&self) -> &History {
        &self.history
    }

    pub fn tiebreak(&self) -> &TiebreakPolicy {
        &self.tiebreak
    }

    pub fn includes_empty_model(&self) -> bool {
        self.include_empty
    }

    pub fn classes(&self) -> &[BlissClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn mean(&self, class: usize) -> &Rat {
        &self.classes[class].mean
    }

    pub fn full_range(&self) -> ClassRange {
        ClassRange::new(0, self.classes.len() - 1)
    }

    /// Class index of a model's bliss point.
    pub fn class_of(&self, m: Model) -> usize {
        let mean = posterior_summary(m, &self.history).mean;
        self.classes
            .iter()
            .position(|c| c.mean == mean)
            .expect("every model belongs to a class")
    }

    /// All concrete models in a class, tiebreak-descending.
    pub fn class_models(&self, class: usize) -> Vec<(Model, &PosteriorSummary)> {
        let mut out = Vec::new();
        for group in &self.classes[class].groups {
            let mut masks =
                enumerate_group(&self.history, group.summary.successes, group.summary.size);
            masks.sort_by_key(|m| std::cmp::Reverse(m.mask()));
            for m in masks {
                out.push((m, &group.summary));
            }
        }
        out
    }

    /// All models in the space, in class order (ascending bliss point).
    pub fn all_models(&self) -> Vec<(Model, &PosteriorSummary)> {
        (0..self.class_count())
            .flat_map(|c| self.class_models(c))
            .collect()
    }

    /// The tiebreak-maximal member over a contiguous range of classes; this
    /// is what the maximum-likelihood receiver conditions on.
    pub fn range_representative(&self, range: ClassRange) -> (usize, Model, &PosteriorSummary) {
        let mut best: Option<(usize, Model, &PosteriorSummary)> = None;
        for c in range.indices() {
            let (model, summary) = self.classes[c].representative();
            let better = match &best {
                None => true,
                Some((_, bm, bs)) => {
                    self.tiebreak.compare((model, summary), (*bm, bs)) == Ordering::Greater
                }
            };
            if better {
                best = Some((c, model, summary));
            }
        }
        best.expect("range is nonempty")
    }
}

fn binomial(n: u32, r: u32) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u64;
    for i in 0..r as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc
}

/// Tiebreak-maximal bitmask with `s` successes and `size - s` failures:
/// the highest-index positions of each kind.
fn group_witness(successes: &[u32], failures: &[u32], s: u32, size: u32, k: u32) -> Result<Model> {
    let mut indices: Vec<u32> = Vec::new();
    indices.extend(successes.iter().rev().take(s as usize));
    indices.extend(failures.iter().rev().take((size - s) as usize));
    Model::from_indices(&indices, k)
}

/// Every bitmask with exactly `s` successes and `size - s` failures.
fn enumerate_group(history: &History, s: u32, size: u32) -> Vec<Model> {
    let k = history.len();
    let successes: Vec<u32> = (1..=k).filter(|&i| history.outcome(i)).collect();
    let failures: Vec<u32> = (1..=k).filter(|&i| !history.outcome(i)).collect();
    let mut out = Vec::new();
    let success_picks = combinations(&successes, s as usize);
    let failure_picks = combinations(&failures, (size - s) as usize);
    for sp in &success_picks {
        for fp in &failure_picks {
            let mut idx = sp.clone();
            idx.extend_from_slice(fp);
            out.push(Model::from_indices(&idx, k).expect("indices in range"));
        }
    }
    out
}

fn combinations(items: &[u32], r: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if r > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        if chosen.len() == r {
            out.push(chosen);
            continue;
        }
        for i in (start..items.len()).rev() {
            let mut next = chosen.clone();
            next.push(items[i]);
            stack.push((i + 1, next));
        }
    }
    out
}

/// Dempster-Shafer update of the vacuous prior belief after a message whose
/// indicative meaning is "the true model lies in `preimage`". The posterior
/// puts mass one on the preimage, which therefore is the minimal feasible
/// set. The preimage must be a nonempty contiguous run of class indices.
pub fn ds_update(space: &ModelSpace, preimage: &[usize]) -> Result<ClassRange> {
    if preimage.is_empty() {
        return Err(Error::Contract("message preimage is empty".into()));
    }
    let mut sorted = preimage.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let lo = sorted[0];
    let hi = *sorted.last().unwrap();
    if hi >= space.class_count() {
        return Err(Error::Contract(format!(
            "class index {hi} outside space of {} classes",
            space.class_count()
        )));
    }
    if sorted.len() != hi - lo + 1 {
        return Err(Error::Contract("message preimage is not contiguous".into()));
    }
    Ok(ClassRange::new(lo, hi))
}
