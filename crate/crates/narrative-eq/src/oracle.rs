//! Deliberately simple brute-force re-implementations used as cross-checks.
//!
//! Nothing here shares search logic with the main engine: equilibria are
//! sought over raw model sequences with per-model incentive loops, and the
//! bias thresholds are recovered by point-testing every constraint
//! breakpoint instead of interval algebra. Slow by design; capped to small
//! instances.

use crate::bounds::BiasInterval;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::partition::{cells_from_cuts, PartitionProfile};
use crate::posterior::PosteriorSummary;
use crate::rational::{rat_int, Rat};
use crate::rules::{RuleKind, RuleSelector};
use crate::space::{ClassRange, ModelSpace};
use num_traits::Zero;

const MAX_K_FOR_MODEL_SEARCH: u32 = 4;
const MAX_CLASSES_FOR_POINT_TESTS: usize = 12;

/// Receiver action for an explicit set of models, recomputed from scratch.
fn set_action(
    space: &ModelSpace,
    members: &[(Model, PosteriorSummary)],
    rule: &RuleSelector,
) -> Result<Rat> {
    match rule.kind {
        RuleKind::Mleu => {
            let mut best = &members[0];
            for m in &members[1..] {
                if space.tiebreak().compare((m.0, &m.1), (best.0, &best.1))
                    == std::cmp::Ordering::Greater
                {
                    best = m;
                }
            }
            Ok(best.1.mean.clone())
        }
        RuleKind::Bayesian => {
            let mut total = Rat::zero();
            let mut acc = Rat::zero();
            for (model, summary) in members {
                let w = match &rule.weights {
                    None => rat_int(1),
                    Some(map) => map
                        .get(model)
                        .cloned()
                        .ok_or_else(|| Error::Input(format!("missing weight for {model}")))?,
                };
                acc += &w * &summary.mean;
                total += w;
            }
            if total.is_zero() {
                return Err(Error::Input("zero total weight".into()));
            }
            Ok(acc / total)
        }
        RuleKind::Meu => {
            let value = |a: &Rat| -> Rat {
                members
                    .iter()
                    .map(|(_, s)| {
                        let miss = &s.mean - a;
                        -(&s.variance + &miss * &miss)
                    })
                    .min()
                    .unwrap()
            };
            let lo = members.iter().map(|(_, s)| s.mean.clone()).min().unwrap();
            let hi = members.iter().map(|(_, s)| s.mean.clone()).max().unwrap();
            let mut candidates: Vec<Rat> = members.iter().map(|(_, s)| s.mean.clone()).collect();
            for i in 0..members.len() {
                for j in (i + 1)..members.len() {
                    let (mi, vi) = (&members[i].1.mean, &members[i].1.variance);
                    let (mj, vj) = (&members[j].1.mean, &members[j].1.variance);
                    if mi == mj {
                        continue;
                    }
                    let cross = (mi + mj) / rat_int(2) + (vj - vi) / ((mj - mi) * rat_int(2));
                    if cross >= lo && cross <= hi {
                        candidates.push(cross);
                    }
                }
            }
            candidates.sort();
            candidates.dedup();
            Ok(candidates
                .into_iter()
                .max_by(|a, b| value(a).cmp(&value(b)))
                .unwrap())
        }
        RuleKind::Smooth => Err(Error::Input(
            "the brute-force search only covers exact rules".into(),
        )),
    }
}

/// Every equilibrium found by scanning interval partitions of the raw model
/// sequence (models ordered by bliss point, classes allowed to split) with
/// per-model incentive loops over all cells. Profiles that merely duplicate
/// an action across adjacent cells are folded together; the survivors never
/// split a bliss class and are returned as class-level profiles.
pub fn brute_force_equilibria(
    space: &ModelSpace,
    rule: &RuleSelector,
    bias: &Rat,
) -> Result<Vec<PartitionProfile>> {
    if space.k() > MAX_K_FOR_MODEL_SEARCH {
        return Err(Error::Resource(format!(
            "brute-force model search is capped at K={MAX_K_FOR_MODEL_SEARCH}"
        )));
    }
    let models: Vec<(Model, PosteriorSummary)> = space
        .all_models()
        .into_iter()
        .map(|(m, s)| (m, s.clone()))
        .collect();
    let ideals: Vec<Rat> = models.iter().map(|(_, s)| &s.mean + bias).collect();
    let n = models.len();
    let mut found: Vec<Vec<usize>> = Vec::new();

    'mask: for mask in 0u64..(1u64 << (n - 1)) {
        // Cell boundaries over the model sequence.
        let mut cells: Vec<(usize, usize)> = Vec::new();
        let mut lo = 0usize;
        for p in 1..n {
            if mask & (1u64 << (p - 1)) != 0 {
                cells.push((lo, p - 1));
                lo = p;
            }
        }
        cells.push((lo, n - 1));
        let mut actions = Vec::with_capacity(cells.len());
        for &(a, b) in &cells {
            actions.push(set_action(space, &models[a..=b], rule)?);
        }
        // Raw incentive check: every model against every induced action.
        for (ci, &(a, b)) in cells.iter().enumerate() {
            for ideal in ideals.iter().take(b + 1).skip(a) {
                let own = abs(&(ideal - &actions[ci]));
                for action in &actions {
                    if abs(&(ideal - action)) < own {
                        continue 'mask;
                    }
                }
            }
        }
        // Fold adjacent cells with identical actions (payoff-equivalent
        // profiles) before mapping to class boundaries.
        let mut folded: Vec<(usize, usize)> = Vec::new();
        for (ci, &cell) in cells.iter().enumerate() {
            if ci > 0 && actions[ci] == actions[ci - 1] {
                folded.last_mut().unwrap().1 = cell.1;
            } else {
                folded.push(cell);
            }
        }
        let mut class_cuts = Vec::new();
        let mut aligned = true;
        for (fi, &(_, hi)) in folded.iter().take(folded.len() - 1).enumerate() {
            let this_class = space.class_of(models[hi].0);
            let next_class = space.class_of(models[hi + 1].0);
            if this_class == next_class {
                // A class straddling two distinct actions survives the raw
                // check only when its members are exactly indifferent, which
                // happens at isolated breakpoint biases. Such profiles are
                // payoff-equivalent shuffles of indifferent types, not extra
                // equilibria; verify the indifference and drop them.
                let a_left = folded_action(&cells, &actions, folded[fi]);
                let a_right = folded_action(&cells, &actions, folded[fi + 1]);
                let ideal = &models[hi].1.mean + bias;
                assert_eq!(
                    abs(&(&ideal - &a_left)),
                    abs(&(&ideal - &a_right)),
                    "a bliss class split without indifference"
                );
                aligned = false;
                break;
            }
            class_cuts.push(next_class);
        }
        if aligned && !found.contains(&class_cuts) {
            found.push(class_cuts);
        }
    }

    found.sort_by_key(|cuts| (cuts.len(), cuts.clone()));
    found
        .into_iter()
        .map(|cuts| {
            let cells = cells_from_cuts(&cuts, space.class_count());
            let actions: Vec<Rat> = cells
                .iter()
                .map(|c| {
                    let members: Vec<(Model, PosteriorSummary)> = c
                        .indices()
                        .flat_map(|cl| space.class_models(cl))
                        .map(|(m, s)| (m, s.clone()))
                        .collect();
                    set_action(space, &members, rule)
                })
                .collect::<Result<_>>()?;
            PartitionProfile::new(space, cuts, actions)
        })
        .collect()
}

fn abs(r: &Rat) -> Rat {
    if r < &Rat::zero() {
        -r.clone()
    } else {
        r.clone()
    }
}

/// Action of a folded cell: the shared action of the original cells it
/// covers.
fn folded_action(cells: &[(usize, usize)], actions: &[Rat], folded: (usize, usize)) -> Rat {
    let idx = cells
        .iter()
        .position(|&(lo, _)| lo == folded.0)
        .expect("folded cells start at original boundaries");
    actions[idx].clone()
}

/// Bias thresholds recovered by point-testing.
#[derive(Debug, Clone)]
pub struct BruteBounds {
    pub b_lower: Rat,
    pub b_upper: Rat,
    pub informative_set: Vec<BiasInterval>,
}

/// Collects every incentive breakpoint of every partition, then decides
/// feasibility segment by segment by direct testing. Exact because
/// feasibility can only flip at a breakpoint.
pub fn brute_force_bounds(space: &ModelSpace, rule: &RuleSelector) -> Result<BruteBounds> {
    let n = space.class_count();
    if n > MAX_CLASSES_FOR_POINT_TESTS {
        return Err(Error::Resource(format!(
            "brute-force bounds are capped at {MAX_CLASSES_FOR_POINT_TESTS} classes"
        )));
    }
    if n < 2 {
        return Err(Error::Degenerate("single-class space".into()));
    }
    let masks: Vec<u64> = (1u64..(1u64 << (n - 1))).collect();
    let mut partitions: Vec<(Vec<ClassRange>, Vec<Rat>)> = Vec::new();
    for &mask in &masks {
        let cuts: Vec<usize> = (1..n).filter(|&p| mask & (1u64 << (p - 1)) != 0).collect();
        let cells = cells_from_cuts(&cuts, n);
        let actions: Vec<Rat> = cells
            .iter()
            .map(|&c| {
                let members: Vec<(Model, PosteriorSummary)> = c
                    .indices()
                    .flat_map(|cl| space.class_models(cl))
                    .map(|(m, s)| (m, s.clone()))
                    .collect();
                set_action(space, &members, rule)
            })
            .collect::<Result<_>>()?;
        partitions.push((cells, actions));
    }

    // All positive breakpoints (a_i + a_j)/2 - mean_c over partitions,
    // classes and action pairs.
    let mut breakpoints: Vec<Rat> = Vec::new();
    for (cells, actions) in &partitions {
        for cell in cells {
            for class in cell.indices() {
                for i in 0..actions.len() {
                    for j in 0..actions.len() {
                        if i == j {
                            continue;
                        }
                        let bp = (&actions[i] + &actions[j]) / rat_int(2) - space.mean(class);
                        if bp > Rat::zero() && !breakpoints.contains(&bp) {
                            breakpoints.push(bp);
                        }
                    }
                }
            }
        }
    }
    breakpoints.sort();

    let ic_at = |cells: &[ClassRange], actions: &[Rat], b: &Rat| -> bool {
        for (ci, cell) in cells.iter().enumerate() {
            for class in cell.indices() {
                let ideal = space.mean(class) + b;
                let own = abs(&(&ideal - &actions[ci]));
                for action in actions {
                    if abs(&(&ideal - action)) < own {
                        return false;
                    }
                }
            }
        }
        true
    };
    let informative_at = |b: &Rat| -> bool {
        partitions
            .iter()
            .any(|(cells, actions)| ic_at(cells, actions, b))
    };
    let finest_at = |b: &Rat| -> bool {
        let (cells, actions) = partitions
            .iter()
            .find(|(cells, _)| cells.len() == n)
            .expect("finest partition present");
        ic_at(cells, actions, b)
    };

    // Segment the positive axis by the breakpoints and test once per piece.
    let mut segments: Vec<(BiasInterval, Rat)> = Vec::new(); // (segment, probe)
    let first = &breakpoints[0];
    segments.push((
        BiasInterval {
            lower: Rat::zero(),
            lower_closed: false,
            upper: Some(first.clone()),
            upper_closed: false,
        },
        first / rat_int(2),
    ));
    for (i, bp) in breakpoints.iter().enumerate() {
        segments.push((
            BiasInterval {
                lower: bp.clone(),
                lower_closed: true,
                upper: Some(bp.clone()),
                upper_closed: true,
            },
            bp.clone(),
        ));
        if let Some(next) = breakpoints.get(i + 1) {
            segments.push((
                BiasInterval {
                    lower: bp.clone(),
                    lower_closed: false,
                    upper: Some(next.clone()),
                    upper_closed: false,
                },
                (bp + next) / rat_int(2),
            ));
        }
    }
    let beyond = breakpoints.last().unwrap() + rat_int(1);
    assert!(
        !informative_at(&beyond),
        "informative play survived past every breakpoint"
    );

    let mut informative_set: Vec<BiasInterval> = Vec::new();
    for (segment, probe) in &segments {
        if informative_at(probe) {
            match informative_set.last_mut() {
                Some(last) if last.upper.as_ref() == Some(&segment.lower) => {
                    last.upper = segment.upper.clone();
                    last.upper_closed = segment.upper_closed;
                }
                _ => informative_set.push(segment.clone()),
            }
        }
    }
    let b_upper = breakpoints
        .iter()
        .rev()
        .find(|bp| informative_at(bp))
        .expect("some informative bias exists")
        .clone();
    let b_lower = breakpoints
        .iter()
        .rev()
        .find(|bp| finest_at(bp))
        .expect("tiny biases sustain full revelation")
        .clone();
    Ok(BruteBounds {
        b_lower,
        b_upper,
        informative_set,
    })
}

/// Grid maximization of a rule's objective over the hull of member means;
/// validates the exact maximizers of the max-min and smooth rules.
pub fn numeric_action_oracle(
    space: &ModelSpace,
    set: ClassRange,
    rule: &RuleSelector,
    grid_size: usize,
) -> Result<f64> {
    use crate::rational::rat_to_f64;
    if grid_size < 10_000 {
        return Err(Error::Input("grid must have at least 10^4 points".into()));
    }
    let mut members: Vec<(f64, f64, f64)> = Vec::new(); // (weight, mean, var)
    for c in set.indices() {
        for g in &space.classes()[c].groups {
            let w = match &rule.weights {
                None => g.count as f64,
                Some(_) => {
                    // Explicit weights need per-model granularity.
                    let mut total = 0.0;
                    for (model, _) in space.class_models(c) {
                        let ms = crate::posterior::posterior_summary(model, space.history());
                        if ms.successes == g.summary.successes && ms.size == g.summary.size {
                            total +=
                                rat_to_f64(rule.weights.as_ref().unwrap().get(&model).ok_or_else(
                                    || Error::Input(format!("missing weight for {model}")),
                                )?);
                        }
                    }
                    total
                }
            };
            members.push((
                w,
                rat_to_f64(&g.summary.mean),
                rat_to_f64(&g.summary.variance),
            ));
        }
    }
    let total_w: f64 = members.iter().map(|(w, _, _)| w).sum();
    let lo = members
        .iter()
        .map(|(_, m, _)| *m)
        .fold(f64::INFINITY, f64::min);
    let hi = members
        .iter()
        .map(|(_, m, _)| *m)
        .fold(f64::NEG_INFINITY, f64::max);
    let alpha = rule.smooth_alpha.unwrap_or(1.0);
    let (_, _, best_fit) = space.range_representative(set);
    let mleu_member = (rat_to_f64(&best_fit.mean), rat_to_f64(&best_fit.variance));
    let objective = |a: f64| -> f64 {
        match rule.kind {
            RuleKind::Meu => members
                .iter()
                .map(|(_, m, v)| -(v + (m - a) * (m - a)))
                .fold(f64::INFINITY, f64::min),
            RuleKind::Bayesian => members
                .iter()
                .map(|(w, m, v)| w / total_w * -(v + (m - a) * (m - a)))
                .sum(),
            RuleKind::Smooth => members
                .iter()
                .map(|(w, m, v)| w / total_w * (-(-alpha * -(v + (m - a) * (m - a))).exp() / alpha))
                .sum(),
            RuleKind::Mleu => {
                let (m, v) = mleu_member;
                -(v + (m - a) * (m - a))
            }
        }
    };
    if lo == hi {
        return Ok(lo);
    }
    // Full grid pass, then two zoom passes. The objective is concave, so
    // the true maximizer stays within one grid step of the per-pass argmax
    // and the bracket shrinks geometrically.
    let mut bracket = (lo, hi);
    let mut best = (lo, objective(lo));
    for pass in 0..3 {
        let points = if pass == 0 {
            grid_size
        } else {
            grid_size.min(10_000)
        };
        let (lo, hi) = bracket;
        let step = (hi - lo) / points as f64;
        best = (lo, objective(lo));
        for i in 1..=points {
            let a = lo + (hi - lo) * i as f64 / points as f64;
            let v = objective(a);
            if v > best.1 {
                best = (a, v);
            }
        }
        bracket = ((best.0 - step).max(lo), (best.0 + step).min(hi));
        if step == 0.0 {
            break;
        }
    }
    Ok(best.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Engine, DEFAULT_CLASS_CAP};
    use crate::history::History;
    use crate::rational::{rat, rat_to_f64};
    use crate::tiebreak::TiebreakPolicy;

    fn space(k: u32, sigma: u32) -> ModelSpace {
        let h = History::canonical(k, sigma).unwrap();
        ModelSpace::build(&h, TiebreakPolicy::default(), true).unwrap()
    }

    #[test]
    fn matches_engine_on_small_scenarios() {
        let rule = RuleSelector::mleu();
        for k in 1..=3u32 {
            for sigma in 0..=k {
                let s = space(k, sigma);
                for num in [1i64, 3, 5, 9, 20, 45] {
                    let b = rat(num, 120);
                    let engine = Engine::new(&s, &rule).unwrap();
                    let fast = engine.enumerate(&b, DEFAULT_CLASS_CAP, 1).unwrap();
                    let slow = brute_force_equilibria(&s, &rule, &b).unwrap();
                    assert_eq!(fast.len(), slow.len(), "K={k} sigma={sigma} b={num}/120");
                    for (f, s_) in fast.iter().zip(&slow) {
                        assert_eq!(f.profile.cuts(), s_.cuts());
                        assert_eq!(f.profile.actions(), s_.actions());
                    }
                }
            }
        }
    }

    #[test]
    fn babbling_always_found() {
        let s = space(3, 1);
        let found = brute_force_equilibria(&s, &RuleSelector::mleu(), &rat(5, 1)).unwrap();
        assert!(found.iter().any(|p| p.is_babbling()));
    }

    #[test]
    fn finds_the_three_step_showcase_profile() {
        let s = space(3, 2);
        let found = brute_force_equilibria(&s, &RuleSelector::mleu(), &rat(1, 30)).unwrap();
        assert!(found
            .iter()
            .any(|p| p.cuts() == [1, 4] && p.actions() == [rat(1, 3), rat(2, 3), rat(3, 4)]));
    }

    #[test]
    fn bounds_examples() {
        let s = space(3, 2);
        let bb = brute_force_bounds(&s, &RuleSelector::mleu()).unwrap();
        assert_eq!(bb.b_lower, rat(1, 30));
        assert_eq!(bb.b_upper, rat(5, 24));
        let s = space(3, 0);
        let bb = brute_force_bounds(&s, &RuleSelector::mleu()).unwrap();
        assert_eq!(bb.b_lower, rat(1, 40));
        assert_eq!(bb.b_upper, rat(1, 40));
    }

    #[test]
    fn agrees_with_interval_bounds_up_to_k4() {
        let rule = RuleSelector::mleu();
        for k in 1..=4u32 {
            for sigma in 0..=k {
                let s = space(k, sigma);
                if s.class_count() < 2 {
                    continue;
                }
                let exact = crate::bounds::upper_bound(&s, &rule, DEFAULT_CLASS_CAP, 1).unwrap();
                let brute = brute_force_bounds(&s, &rule).unwrap();
                assert_eq!(exact.b_lower, brute.b_lower, "K={k} sigma={sigma}");
                assert_eq!(exact.b_upper, brute.b_upper, "K={k} sigma={sigma}");
                assert_eq!(
                    exact.informative_set, brute.informative_set,
                    "K={k} sigma={sigma}"
                );
            }
        }
    }

    #[test]
    fn numeric_oracle_basics() {
        let s = space(3, 2);
        // Bayesian over the pair {1/2, 3/4} with the member multiplicities
        // (three models at 1/2, one at 3/4): weighted mean (3*30+45)/240...
        // checked against the closed form instead of a hand value.
        let set = ClassRange::new(1, 1);
        let a = numeric_action_oracle(&s, set, &RuleSelector::meu(), 10_000).unwrap();
        assert!((a - 0.5).abs() < 1e-3);
        let pair = ClassRange::new(0, 3);
        let exact = crate::rules::meu_action(&s, pair);
        let grid = numeric_action_oracle(&s, pair, &RuleSelector::meu(), 1_000_000).unwrap();
        assert!((rat_to_f64(&exact) - grid).abs() < 1e-4);
        assert!(numeric_action_oracle(&s, set, &RuleSelector::meu(), 10).is_err());
    }

    /// The Bayesian closed form on an explicit member pair: weights (1, 3)
    /// on means (1/2, 3/4) average to 11/16.
    #[test]
    fn bayesian_weighted_pair_exact() {
        let h = History::canonical(2, 2).unwrap();
        let s = ModelSpace::build(&h, TiebreakPolicy::default(), true).unwrap();
        let empty = Model::EMPTY;
        let full = Model::from_indices(&[1, 2], 2).unwrap();
        let members = vec![
            (empty, crate::posterior::posterior_summary(empty, &h)),
            (full, crate::posterior::posterior_summary(full, &h)),
        ];
        assert_eq!(members[0].1.mean, rat(1, 2));
        assert_eq!(members[1].1.mean, rat(3, 4));
        let mut rule = RuleSelector::bayesian();
        let mut weights = std::collections::BTreeMap::new();
        weights.insert(empty, rat(1, 1));
        weights.insert(full, rat(3, 1));
        rule.weights = Some(weights);
        assert_eq!(set_action(&s, &members, &rule).unwrap(), rat(11, 16));
    }

    #[test]
    fn caps_are_enforced() {
        let s = space(5, 2);
        assert!(matches!(
            brute_force_equilibria(&s, &RuleSelector::mleu(), &rat(1, 30)),
            Err(Error::Resource(_))
        ));
    }
}
