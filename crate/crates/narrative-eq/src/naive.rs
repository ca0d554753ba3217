//! Benchmark against a naive receiver.
//!
//! The naive receiver takes a proposed narrative at face value and adopts it
//! whenever it fits the observed history at least as well as the true model
//! (which doubles as his default), ignoring the sender's incentives. The
//! module computes, model by model, what the sender gains against such a
//! receiver versus what she gains in a given equilibrium, and the two
//! persuasion sets those gains induce.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::partition::PartitionProfile;
use crate::posterior::posterior_summary;
use crate::rational::Rat;
use crate::rules::{RuleKind, RuleSelector};
use crate::space::ModelSpace;
use num_traits::Zero;

/// Practical guard: persuasion scans are quadratic in the number of models.
const MAX_K_FOR_MODEL_SCANS: u32 = 12;

/// Which model a naive receiver ends up believing: the proposal if it fits
/// weakly better than the truth, otherwise the truth.
pub fn naive_response(space: &ModelSpace, true_model: Model, proposal: Model) -> Model {
    let t = posterior_summary(true_model, space.history());
    let p = posterior_summary(proposal, space.history());
    if p.likelihood >= t.likelihood {
        proposal
    } else {
        true_model
    }
}

/// The sender's best credible proposal to a naive receiver, and her gain
/// over the truthful action. The true model itself is always credible, so
/// the gain is nonnegative; ties go to the tiebreak-maximal proposal.
pub fn naive_best_proposal(space: &ModelSpace, true_model: Model, bias: &Rat) -> (Model, Rat) {
    let candidates: Vec<(Model, crate::posterior::PosteriorSummary)> = space
        .all_models()
        .into_iter()
        .map(|(m, s)| (m, s.clone()))
        .collect();
    best_proposal_from(space, &candidates, true_model, bias)
}

fn best_proposal_from(
    space: &ModelSpace,
    candidates: &[(Model, crate::posterior::PosteriorSummary)],
    true_model: Model,
    bias: &Rat,
) -> (Model, Rat) {
    let truth = posterior_summary(true_model, space.history());
    let ideal = &truth.mean + bias;
    let miss = |mean: &Rat| {
        let d = &ideal - mean;
        &d * &d
    };
    let own_miss = miss(&truth.mean);
    let mut best: Option<(Model, &crate::posterior::PosteriorSummary, Rat)> = None;
    for (candidate, summary) in candidates {
        if summary.likelihood < truth.likelihood {
            continue;
        }
        let m = miss(&summary.mean);
        let better = match &best {
            None => true,
            Some((bm, bs, bmiss)) => {
                m < *bmiss
                    || (m == *bmiss
                        && space.tiebreak().compare((*candidate, summary), (*bm, bs))
                            == std::cmp::Ordering::Greater)
            }
        };
        if better {
            best = Some((*candidate, summary, m));
        }
    }
    let (proposal, _, best_miss) = best.expect("the true model is always credible");
    (proposal, own_miss - best_miss)
}

/// Receiver expected utility from `action` when the true model is
/// `true_model`: `-(variance + (mean - action)^2)`.
pub fn receiver_utility(space: &ModelSpace, true_model: Model, action: &Rat) -> Rat {
    let t = posterior_summary(true_model, space.history());
    let miss = &t.mean - action;
    -(&t.variance + &miss * &miss)
}

/// Per-model comparison of equilibrium play with the naive benchmark.
#[derive(Debug, Clone)]
pub struct ModelGain {
    pub model: Model,
    pub class: usize,
    pub equilibrium_action: Rat,
    /// Sender gain of the equilibrium action over the truthful action.
    pub equilibrium_gain: Rat,
    pub naive_proposal: Model,
    pub naive_action: Rat,
    /// Sender gain of the best naive proposal over the truthful action.
    pub naive_gain: Rat,
}

/// The two persuasion sets of one equilibrium.
#[derive(Debug, Clone)]
pub struct PersuasionReport {
    /// Models whose sender strictly gains against the naive receiver.
    pub naive_set: Vec<Model>,
    /// Models whose equilibrium action strictly beats the truthful action.
    pub equilibrium_set: Vec<Model>,
    pub naive_classes: Vec<usize>,
    pub equilibrium_classes: Vec<usize>,
    pub subset_ok: bool,
    pub strict: bool,
    /// The subset guarantee only holds in general for the maximum-likelihood
    /// rule; reports under other rules carry `mleu_rule = false`.
    pub mleu_rule: bool,
    pub per_model: Vec<ModelGain>,
}

/// Computes both persuasion sets for a verified equilibrium profile.
pub fn persuasion_sets(
    space: &ModelSpace,
    rule: &RuleSelector,
    profile: &PartitionProfile,
    bias: &Rat,
) -> Result<PersuasionReport> {
    if space.k() > MAX_K_FOR_MODEL_SCANS {
        return Err(Error::Resource(format!(
            "persuasion scans enumerate all 2^K models; K={} exceeds {}",
            space.k(),
            MAX_K_FOR_MODEL_SCANS
        )));
    }
    let candidates: Vec<(Model, crate::posterior::PosteriorSummary)> = space
        .all_models()
        .into_iter()
        .map(|(m, s)| (m, s.clone()))
        .collect();
    let mut per_model = Vec::new();
    let mut naive_set = Vec::new();
    let mut equilibrium_set = Vec::new();
    for class in 0..space.class_count() {
        let cell = profile.cell_of(class);
        let action = profile.actions()[cell].clone();
        for (model, summary) in space.class_models(class) {
            let ideal = &summary.mean + bias;
            let own = &ideal - &summary.mean;
            let eq_miss = &ideal - &action;
            let equilibrium_gain = &own * &own - &eq_miss * &eq_miss;
            let (proposal, naive_gain) = best_proposal_from(space, &candidates, model, bias);
            if equilibrium_gain > Rat::zero() {
                equilibrium_set.push(model);
            }
            if naive_gain > Rat::zero() {
                naive_set.push(model);
            }
            per_model.push(ModelGain {
                model,
                class,
                equilibrium_action: action.clone(),
                equilibrium_gain,
                naive_action: posterior_summary(proposal, space.history()).mean,
                naive_proposal: proposal,
                naive_gain,
            });
        }
    }
    naive_set.sort_by_key(|m| m.mask());
    equilibrium_set.sort_by_key(|m| m.mask());
    per_model.sort_by_key(|g| g.model.mask());
    let subset_ok = equilibrium_set.iter().all(|m| naive_set.contains(m));
    let strict = subset_ok && equilibrium_set.len() < naive_set.len();
    let classes = |models: &[Model]| {
        let mut cs: Vec<usize> = models.iter().map(|&m| space.class_of(m)).collect();
        cs.sort_unstable();
        cs.dedup();
        cs
    };
    Ok(PersuasionReport {
        naive_classes: classes(&naive_set),
        equilibrium_classes: classes(&equilibrium_set),
        naive_set,
        equilibrium_set,
        subset_ok,
        strict,
        mleu_rule: rule.kind == RuleKind::Mleu,
        per_model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Engine, DEFAULT_CLASS_CAP};
    use crate::history::History;
    use crate::rational::{format_rat, rat};
    use crate::tiebreak::TiebreakPolicy;

    fn space32() -> ModelSpace {
        let h = History::canonical(3, 2).unwrap();
        ModelSpace::build(&h, TiebreakPolicy::default(), true).unwrap()
    }

    fn class_means(space: &ModelSpace, classes: &[usize]) -> Vec<String> {
        classes.iter().map(|&c| format_rat(space.mean(c))).collect()
    }

    #[test]
    fn naive_adoption_is_weak_likelihood_order() {
        let s = space32();
        // h = 110: {1,2} has two successes (likelihood 1/6), {1} one success
        // (1/8), {1,3} one success one failure (1/12).
        let two = Model::from_indices(&[1, 2], 3).unwrap();
        let one = Model::from_indices(&[1], 3).unwrap();
        assert_eq!(naive_response(&s, one, two), two);
        assert_eq!(naive_response(&s, two, one), two);
        assert_eq!(naive_response(&s, one, one), one);
    }

    #[test]
    fn best_proposal_examples() {
        let s = space32();
        let b = rat(7, 100);
        // True model at mean 3/5: every model is credible, and the sender
        // prefers inducing 2/3 over 3/4.
        let full = Model::from_indices(&[1, 2, 3], 3).unwrap();
        let (proposal, gain) = naive_best_proposal(&s, full, &b);
        assert_eq!(posterior_summary(proposal, s.history()).mean, rat(2, 3));
        assert!(gain > rat(0, 1));
        // True model at mean 1/2 with the low likelihood 1/12 can reach 3/5.
        let pair = Model::from_indices(&[1, 3], 3).unwrap();
        assert_eq!(posterior_summary(pair, s.history()).mean, rat(1, 2));
        let (proposal, gain) = naive_best_proposal(&s, pair, &b);
        assert_eq!(posterior_summary(proposal, s.history()).mean, rat(3, 5));
        assert!(gain > rat(0, 1));
        // A sender already at the top has nothing to gain.
        let top = Model::from_indices(&[1, 2], 3).unwrap();
        let (proposal, gain) = naive_best_proposal(&s, top, &b);
        assert_eq!(proposal, top);
        assert_eq!(gain, rat(0, 1));
    }

    #[test]
    fn persuasion_sets_at_seven_hundredths() {
        let s = space32();
        let rule = RuleSelector::mleu();
        let engine = Engine::new(&s, &rule).unwrap();
        let b = rat(7, 100);
        let top = engine.most_informative(&b, DEFAULT_CLASS_CAP, 1).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].profile.cuts(), &[1, 2]);
        let report = persuasion_sets(&s, &rule, &top[0].profile, &b).unwrap();
        assert!(report.mleu_rule);
        assert!(report.subset_ok);
        assert!(report.strict);
        assert_eq!(
            class_means(&s, &report.naive_classes),
            ["1/2", "3/5", "2/3"]
        );
        // Only the classes pooled below the top action and close enough to
        // it strictly gain in equilibrium; at 7/100 that is the class at
        // 2/3 alone. The class at 3/5 is pooled up to 3/4, which overshoots
        // its sender ideal 0.67 by more than the truthful action undershoots
        // it, so its equilibrium gain is negative.
        assert_eq!(class_means(&s, &report.equilibrium_classes), ["2/3"]);
        let full = Model::from_indices(&[1, 2, 3], 3).unwrap();
        let gain = &report
            .per_model
            .iter()
            .find(|g| g.model == full)
            .unwrap()
            .equilibrium_gain;
        assert_eq!(gain.clone(), rat(-3, 2000));
    }

    /// At biases strictly between 3/40 and 1/12 the same three-step
    /// equilibrium diverts two classes: the ones at 3/5 and 2/3
    /// both strictly gain in equilibrium, and the naive receiver is
    /// additionally exploitable at 1/2.
    #[test]
    fn persuasion_sets_at_two_twenty_fifths() {
        let s = space32();
        let rule = RuleSelector::mleu();
        let engine = Engine::new(&s, &rule).unwrap();
        let b = rat(2, 25);
        let top = engine.most_informative(&b, DEFAULT_CLASS_CAP, 1).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].profile.cuts(), &[1, 2]);
        let report = persuasion_sets(&s, &rule, &top[0].profile, &b).unwrap();
        assert_eq!(
            class_means(&s, &report.naive_classes),
            ["1/2", "3/5", "2/3"]
        );
        assert_eq!(class_means(&s, &report.equilibrium_classes), ["3/5", "2/3"]);
        assert!(report.subset_ok && report.strict);
    }

    #[test]
    fn below_full_information_threshold_no_one_gains() {
        let s = space32();
        let rule = RuleSelector::mleu();
        let engine = Engine::new(&s, &rule).unwrap();
        for b in [rat(1, 1000), rat(1, 30)] {
            let top = engine.most_informative(&b, DEFAULT_CLASS_CAP, 1).unwrap();
            let report = persuasion_sets(&s, &rule, &top[0].profile, &b).unwrap();
            assert!(report.naive_set.is_empty(), "b = {}", format_rat(&b));
            assert!(report.equilibrium_set.is_empty());
        }
    }

    #[test]
    fn gain_dominance_on_equilibrium_set() {
        let s = space32();
        let rule = RuleSelector::mleu();
        let engine = Engine::new(&s, &rule).unwrap();
        for num in 1..=20 {
            let b = rat(num, 100);
            for eq in engine.enumerate(&b, DEFAULT_CLASS_CAP, 1).unwrap() {
                let report = persuasion_sets(&s, &rule, &eq.profile, &b).unwrap();
                assert!(report.subset_ok);
                for g in &report.per_model {
                    if g.equilibrium_gain > rat(0, 1) {
                        assert!(g.naive_gain >= g.equilibrium_gain);
                    }
                }
            }
        }
    }

    #[test]
    fn welfare_can_point_either_way() {
        let s = space32();
        let b = rat(7, 100);
        // True mean 3/5: naive play reaches 2/3, equilibrium forces 3/4.
        let full = Model::from_indices(&[1, 2, 3], 3).unwrap();
        let (proposal, _) = naive_best_proposal(&s, full, &b);
        let naive_action = posterior_summary(proposal, s.history()).mean;
        assert_eq!(naive_action, rat(2, 3));
        let naive_u = receiver_utility(&s, full, &naive_action);
        let eq_u = receiver_utility(&s, full, &rat(3, 4));
        assert!(naive_u > eq_u);
        // True mean 1/2 (low-likelihood member): naive play drifts to 3/5,
        // equilibrium reveals the class truthfully.
        let pair = Model::from_indices(&[1, 3], 3).unwrap();
        let (proposal, _) = naive_best_proposal(&s, pair, &b);
        let naive_action = posterior_summary(proposal, s.history()).mean;
        assert_eq!(naive_action, rat(3, 5));
        let naive_u = receiver_utility(&s, pair, &naive_action);
        let eq_u = receiver_utility(&s, pair, &rat(1, 2));
        assert!(naive_u < eq_u);
    }
}
