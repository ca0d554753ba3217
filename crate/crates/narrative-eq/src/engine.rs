//! Equilibrium search over interval partitions, plus the step-reduction
//! algorithm that turns an (n+1)-step equilibrium into an n-step one.

use crate::error::{Error, Result};
use crate::partition::{cells_from_cuts, check_equilibrium, EquilibriumReport, PartitionProfile};
use crate::rational::{rat_int, Rat};
use crate::rules::{best_response, RuleSelector};
use crate::space::{ClassRange, ModelSpace};
use serde::Serialize;

/// Default ceiling on the number of classes the exhaustive search accepts;
/// the partition count is `2^(C-1)`.
pub const DEFAULT_CLASS_CAP: usize = 22;

/// Precomputed per-range receiver actions for one (space, rule) pair.
pub struct Engine<'a> {
    space: &'a ModelSpace,
    rule: &'a RuleSelector,
    // actions[lo][hi - lo] = best response to classes lo..=hi
    actions: Vec<Vec<Rat>>,
}

impl<'a> Engine<'a> {
    pub fn new(space: &'a ModelSpace, rule: &'a RuleSelector) -> Result<Self> {
        rule.validate()?;
        let n = space.class_count();
        let mut actions = Vec::with_capacity(n);
        for lo in 0..n {
            let mut row = Vec::with_capacity(n - lo);
            for hi in lo..n {
                row.push(best_response(space, ClassRange::new(lo, hi), rule)?);
            }
            actions.push(row);
        }
        Ok(Engine {
            space,
            rule,
            actions,
        })
    }

    pub fn space(&self) -> &ModelSpace {
        self.space
    }

    pub fn rule(&self) -> &RuleSelector {
        self.rule
    }

    pub fn action(&self, range: ClassRange) -> &Rat {
        &self.actions[range.lo][range.hi - range.lo]
    }

    /// Builds the profile induced by a set of cut positions.
    pub fn profile_from_cuts(&self, cuts: Vec<usize>) -> Result<PartitionProfile> {
        let cells = cells_from_cuts(&cuts, self.space.class_count());
        let actions = cells.iter().map(|&c| self.action(c).clone()).collect();
        PartitionProfile::new(self.space, cuts, actions)
    }

    pub fn check(&self, profile: &PartitionProfile, bias: &Rat) -> EquilibriumReport {
        check_equilibrium(self.space, profile, bias)
    }

    fn guard_cap(&self, class_cap: usize) -> Result<()> {
        let n = self.space.class_count();
        if n > class_cap {
            return Err(Error::Resource(format!(
                "{n} bliss classes exceed the cap of {class_cap}; raise the cap or use the \
                 threshold computations, which need no enumeration for the lower bound"
            )));
        }
        Ok(())
    }

    /// Fast incentive check for one cut mask.
    ///
    /// With actions increasing across cells, a class prefers its own action
    /// to every other exactly when it does not envy the two adjacent cells,
    /// and within a cell the binding classes are the first and last ones. So
    /// two midpoint comparisons per boundary decide the partition.
    fn mask_is_equilibrium(&self, mask: u64, two_bias: &Rat) -> bool {
        let n = self.space.class_count();
        let mut lo = 0usize;
        let mut prev: Option<(usize, ClassRange)> = None; // (cell start, range)
        let mut boundaries: Vec<(ClassRange, ClassRange)> = Vec::new();
        for p in 1..n {
            if mask & (1u64 << (p - 1)) != 0 {
                let cell = ClassRange::new(lo, p - 1);
                if let Some((_, prev_cell)) = prev {
                    boundaries.push((prev_cell, cell));
                }
                prev = Some((lo, cell));
                lo = p;
            }
        }
        let last = ClassRange::new(lo, n - 1);
        if let Some((_, prev_cell)) = prev {
            boundaries.push((prev_cell, last));
        }
        for (left, right) in boundaries {
            let a_left = self.action(left);
            let a_right = self.action(right);
            let midpoint_doubled = a_left + a_right;
            // Top class of the left cell must not envy the right action.
            let top = self.space.mean(left.hi) * rat_int(2) + two_bias;
            if top > midpoint_doubled {
                return false;
            }
            // Bottom class of the right cell must not envy the left action.
            let bottom = self.space.mean(right.lo) * rat_int(2) + two_bias;
            if bottom < midpoint_doubled {
                return false;
            }
        }
        true
    }

    fn cuts_from_mask(mask: u64, n: usize) -> Vec<usize> {
        (1..n).filter(|&p| mask & (1u64 << (p - 1)) != 0).collect()
    }

    /// All equilibria at `bias`, sorted by step count then lexicographic cut
    /// positions. The search over the `2^(C-1)` cut masks can be split over
    /// `worker_count` threads; results are identical for any worker count.
    pub fn enumerate(
        &self,
        bias: &Rat,
        class_cap: usize,
        worker_count: usize,
    ) -> Result<Vec<EquilibriumReport>> {
        self.guard_cap(class_cap)?;
        let n = self.space.class_count();
        let total: u64 = 1u64 << (n - 1);
        let two_bias = bias * rat_int(2);
        let workers = worker_count.max(1).min(total as usize);

        let mut hits: Vec<u64> = if workers == 1 {
            (0..total)
                .filter(|&m| self.mask_is_equilibrium(m, &two_bias))
                .collect()
        } else {
            let chunk = total.div_ceil(workers as u64);
            let mut parts: Vec<Vec<u64>> = Vec::new();
            std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for w in 0..workers as u64 {
                    let lo = w * chunk;
                    let hi = total.min(lo + chunk);
                    let two_bias = &two_bias;
                    handles.push(scope.spawn(move || {
                        (lo..hi)
                            .filter(|&m| self.mask_is_equilibrium(m, two_bias))
                            .collect::<Vec<u64>>()
                    }));
                }
                for h in handles {
                    parts.push(h.join().expect("worker panicked"));
                }
            });
            parts.into_iter().flatten().collect()
        };

        hits.sort_by_key(|&m| (m.count_ones(), Self::cuts_from_mask(m, n)));
        hits.into_iter()
            .map(|m| {
                let profile = self.profile_from_cuts(Self::cuts_from_mask(m, n))?;
                let report = self.check(&profile, bias);
                debug_assert!(report.ic_ok);
                Ok(report)
            })
            .collect()
    }

    /// Maximum number of induced actions over all equilibria. Also verifies
    /// the staircase property: an n-step equilibrium exists for every
    /// `1 <= n <= N`.
    pub fn max_steps(&self, bias: &Rat, class_cap: usize, worker_count: usize) -> Result<usize> {
        let all = self.enumerate(bias, class_cap, worker_count)?;
        let mut counts: Vec<usize> = all.iter().map(|r| r.steps).collect();
        counts.sort_unstable();
        counts.dedup();
        let max = *counts.last().expect("babbling always exists");
        if counts != (1..=max).collect::<Vec<_>>() {
            return Err(Error::Contract(format!(
                "step counts {counts:?} have gaps below the maximum {max}"
            )));
        }
        Ok(max)
    }

    /// Equilibria maximal in the informativeness order: no other equilibrium
    /// strictly refines their partition.
    pub fn most_informative(
        &self,
        bias: &Rat,
        class_cap: usize,
        worker_count: usize,
    ) -> Result<Vec<EquilibriumReport>> {
        let all = self.enumerate(bias, class_cap, worker_count)?;
        let masks: Vec<u64> = all.iter().map(|r| r.profile.cut_mask()).collect();
        Ok(all
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                !masks
                    .iter()
                    .any(|&other| other != masks[*i] && other & masks[*i] == masks[*i])
            })
            .map(|(_, r)| r.clone())
            .collect())
    }

    /// One pass of the step-reduction algorithm: merge the two rightmost
    /// cells, then, while the sender has a profitable deviation, move the
    /// leftmost class of the (rightmost) violating cell into the cell on its
    /// left, recomputing best responses after every move. Terminates at an
    /// equilibrium with exactly one step fewer than the input.
    pub fn reduce_step(
        &self,
        profile: &PartitionProfile,
        bias: &Rat,
    ) -> Result<(PartitionProfile, Vec<TraceStep>)> {
        let start = self.check(profile, bias);
        if !start.ic_ok {
            return Err(Error::Contract(format!(
                "reduce_step input is not an equilibrium; violations: {:?}",
                start.violations
            )));
        }
        if profile.steps() < 2 {
            return Err(Error::Contract(
                "reduce_step needs at least two cells".into(),
            ));
        }

        let mut trace = vec![TraceStep::new(profile, TraceNote::Start, true)];
        let mut cuts = profile.cuts().to_vec();
        cuts.pop(); // merge the two rightmost cells
        let mut note = TraceNote::MergeRightmost;

        let budget = self.space.class_count() * (profile.steps() + 1) + 2;
        for _ in 0..budget {
            let current = self.profile_from_cuts(cuts.clone())?;
            let report = self.check(&current, bias);
            trace.push(TraceStep::new(&current, note, report.ic_ok));
            if report.ic_ok {
                return Ok((current, trace));
            }
            // The deviation the algorithm acts on: the leftmost class of a
            // cell preferring the action below. Pick the rightmost such cell
            // when several qualify.
            let mut candidate: Option<(usize, usize)> = None; // (cell index, class)
            for &(class, preferred) in &report.violations {
                let cell = current.cell_of(class);
                if class == current.cells()[cell].lo
                    && preferred < cell
                    && candidate.is_none_or(|(c, _)| cell > c)
                {
                    candidate = Some((cell, class));
                }
            }
            let (cell, class) = candidate.ok_or_else(|| {
                Error::Contract(format!(
                    "no leftward boundary deviation among violations {:?}",
                    report.violations
                ))
            })?;
            // Move the class into the cell to the left: its cut shifts right.
            let cut_idx = cell - 1;
            cuts[cut_idx] += 1;
            if cut_idx + 1 < cuts.len() && cuts[cut_idx] >= cuts[cut_idx + 1] {
                return Err(Error::Contract(
                    "a message became void during reduction".into(),
                ));
            }
            note = TraceNote::MoveLeft { class };
        }
        Err(Error::Contract(
            "reduction failed to terminate within its move budget".into(),
        ))
    }
}

/// One intermediate profile of the reduction trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub cuts: Vec<usize>,
    pub cells: Vec<(usize, usize)>,
    pub actions: Vec<String>,
    pub note: TraceNote,
    pub equilibrium: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceNote {
    /// The verified input equilibrium.
    Start,
    /// The two rightmost cells were merged.
    MergeRightmost,
    /// The leftmost class of a violating cell moved one cell left.
    MoveLeft { class: usize },
}

impl TraceStep {
    fn new(profile: &PartitionProfile, note: TraceNote, equilibrium: bool) -> Self {
        TraceStep {
            cuts: profile.cuts().to_vec(),
            cells: profile.cells().iter().map(|c| (c.lo, c.hi)).collect(),
            actions: profile
                .actions()
                .iter()
                .map(crate::rational::format_rat)
                .collect(),
            note,
            equilibrium,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::History;
    use crate::rational::rat;
    use crate::tiebreak::TiebreakPolicy;

    fn space(k: u32, sigma: u32) -> ModelSpace {
        let h = History::canonical(k, sigma).unwrap();
        ModelSpace::build(&h, TiebreakPolicy::default(), true).unwrap()
    }

    fn mleu_engine(space: &ModelSpace) -> Engine<'_> {
        // Leaked selector keeps the test helper simple.
        let rule = Box::leak(Box::new(RuleSelector::mleu()));
        Engine::new(space, rule).unwrap()
    }

    #[test]
    fn large_bias_leaves_only_babbling() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let all = e.enumerate(&rat(1, 4), DEFAULT_CLASS_CAP, 1).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].profile.is_babbling());
    }

    #[test]
    fn small_bias_allows_full_information() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let all = e.enumerate(&rat(1, 30), DEFAULT_CLASS_CAP, 1).unwrap();
        assert!(all.iter().any(|r| r.steps == 5));
        assert_eq!(e.max_steps(&rat(1, 30), DEFAULT_CLASS_CAP, 1).unwrap(), 5);
    }

    #[test]
    fn k1_with_huge_bias() {
        let h = History::parse("1").unwrap();
        let s = ModelSpace::build(&h, TiebreakPolicy::default(), true).unwrap();
        let e = mleu_engine(&s);
        let all = e.enumerate(&rat(10, 1), DEFAULT_CLASS_CAP, 1).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].profile.is_babbling());
    }

    #[test]
    fn max_steps_examples() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        assert_eq!(e.max_steps(&rat(1, 25), DEFAULT_CLASS_CAP, 1).unwrap(), 4);
        assert_eq!(e.max_steps(&rat(1, 30), DEFAULT_CLASS_CAP, 1).unwrap(), 5);
        assert_eq!(e.max_steps(&rat(1, 2), DEFAULT_CLASS_CAP, 1).unwrap(), 1);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let s = space(4, 2);
        let e = mleu_engine(&s);
        let one = e.enumerate(&rat(1, 40), DEFAULT_CLASS_CAP, 1).unwrap();
        let four = e.enumerate(&rat(1, 40), DEFAULT_CLASS_CAP, 4).unwrap();
        let cuts = |v: &[EquilibriumReport]| {
            v.iter()
                .map(|r| r.profile.cuts().to_vec())
                .collect::<Vec<_>>()
        };
        assert_eq!(cuts(&one), cuts(&four));
    }

    #[test]
    fn most_informative_at_one_twenty_fifth() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let top = e
            .most_informative(&rat(1, 25), DEFAULT_CLASS_CAP, 1)
            .unwrap();
        let cut_sets: Vec<Vec<usize>> = top.iter().map(|r| r.profile.cuts().to_vec()).collect();
        assert_eq!(cut_sets, vec![vec![1, 2, 3], vec![1, 2, 4]]);
    }

    #[test]
    fn most_informative_edges() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let full = e
            .most_informative(&rat(1, 30), DEFAULT_CLASS_CAP, 1)
            .unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].steps, 5);
        let bab = e
            .most_informative(&rat(1, 2), DEFAULT_CLASS_CAP, 1)
            .unwrap();
        assert_eq!(bab.len(), 1);
        assert!(bab[0].profile.is_babbling());
    }

    #[test]
    fn reduction_reproduces_the_sketch() {
        // Start from the 3-step equilibrium {1/3 | 1/2,3/5,2/3 | 3/4} at
        // b = 1/30; merging the right cells leaves {1/3 | rest}, the class
        // at 1/2 defects to the left, and the 2-step {1/3,1/2 | rest}
        // closes the trace.
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let start = e.profile_from_cuts(vec![1, 4]).unwrap();
        let (reduced, trace) = e.reduce_step(&start, &rat(1, 30)).unwrap();
        assert_eq!(reduced.cuts(), &[2]);
        assert_eq!(reduced.actions(), &[rat(1, 3), rat(3, 4)]);
        let notes: Vec<TraceNote> = trace.iter().map(|t| t.note).collect();
        assert_eq!(
            notes,
            vec![
                TraceNote::Start,
                TraceNote::MergeRightmost,
                TraceNote::MoveLeft { class: 1 }
            ]
        );
        assert_eq!(trace[1].cuts, vec![1]);
        assert!(!trace[1].equilibrium);
        assert!(trace[2].equilibrium);
    }

    #[test]
    fn reducing_two_steps_gives_babbling() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let two = e.profile_from_cuts(vec![1]).unwrap();
        let (reduced, trace) = e.reduce_step(&two, &rat(1, 10)).unwrap();
        assert!(reduced.is_babbling());
        assert_eq!(trace.len(), 2);
    }

    #[test]
    fn reduce_rejects_non_equilibria() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        let p = e.profile_from_cuts(vec![1, 2, 3, 4]).unwrap();
        assert!(e.reduce_step(&p, &rat(1, 4)).is_err());
    }

    #[test]
    fn reduce_walks_down_from_full_information() {
        let s = space(4, 1);
        let e = mleu_engine(&s);
        let b = rat(1, 200);
        let mut profile = e.profile_from_cuts((1..s.class_count()).collect()).unwrap();
        assert!(e.check(&profile, &b).ic_ok);
        while profile.steps() > 1 {
            let (next, _) = e.reduce_step(&profile, &b).unwrap();
            assert_eq!(next.steps(), profile.steps() - 1);
            assert!(e.check(&next, &b).ic_ok);
            profile = next;
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s = space(3, 2);
        let e = mleu_engine(&s);
        assert!(matches!(
            e.enumerate(&rat(1, 30), 3, 1),
            Err(Error::Resource(_))
        ));
    }
}
