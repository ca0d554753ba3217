//! Interval partitions of the bliss classes, the canonical equilibrium
//! candidates, and the incentive-compatibility verifier.
//!
//! A sender strategy is identified with a partition of the ordered classes
//! into contiguous cells; every cell is one on-path message whose action is
//! the receiver's best response to the cell. The sender never splits a
//! class: models sharing a bliss point share all incentives.

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};
use crate::space::{ClassRange, ModelSpace};

/// A partition of `C` classes into cells plus the induced receiver actions.
///
/// `cuts` lists the boundary positions: a cut at `p` separates classes
/// `0..p` from `p..`. No cuts means babbling; all `C-1` cuts is the fully
/// informative profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionProfile {
    cuts: Vec<usize>,
    cells: Vec<ClassRange>,
    actions: Vec<Rat>,
}

impl PartitionProfile {
    /// Assembles a profile from cut positions and per-cell actions, checking
    /// the structural invariants: cells cover the classes in order and the
    /// actions are strictly increasing and stay inside each cell's hull.
    pub fn new(space: &ModelSpace, cuts: Vec<usize>, actions: Vec<Rat>) -> Result<Self> {
        let n = space.class_count();
        for w in cuts.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Contract("cuts must be strictly increasing".into()));
            }
        }
        if cuts.iter().any(|&p| p == 0 || p >= n) {
            return Err(Error::Contract(format!("cut positions must lie in 1..{n}")));
        }
        let cells = cells_from_cuts(&cuts, n);
        if actions.len() != cells.len() {
            return Err(Error::Contract("one action per cell required".into()));
        }
        for w in actions.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Contract(
                    "induced actions must be strictly increasing".into(),
                ));
            }
        }
        for (cell, action) in cells.iter().zip(&actions) {
            if action < space.mean(cell.lo) || action > space.mean(cell.hi) {
                return Err(Error::Contract(
                    "cell action outside the hull of its class means".into(),
                ));
            }
        }
        Ok(PartitionProfile {
            cuts,
            cells,
            actions,
        })
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    /// Cut set as a bitmask (bit `p-1` set when there is a cut at `p`);
    /// refinement of partitions is bitmask inclusion.
    pub fn cut_mask(&self) -> u64 {
        self.cuts.iter().map(|&p| 1u64 << (p - 1)).sum()
    }

    pub fn cells(&self) -> &[ClassRange] {
        &self.cells
    }

    pub fn actions(&self) -> &[Rat] {
        &self.actions
    }

    /// Number of induced actions.
    pub fn steps(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_of(&self, class: usize) -> usize {
        self.cells
            .iter()
            .position(|c| c.contains(class))
            .expect("cells cover all classes")
    }

    pub fn is_babbling(&self) -> bool {
        self.cells.len() == 1
    }
}

pub fn cells_from_cuts(cuts: &[usize], class_count: usize) -> Vec<ClassRange> {
    let mut cells = Vec::with_capacity(cuts.len() + 1);
    let mut lo = 0usize;
    for &p in cuts {
        cells.push(ClassRange::new(lo, p - 1));
        lo = p;
    }
    cells.push(ClassRange::new(lo, class_count - 1));
    cells
}

/// Outcome of an incentive-compatibility check.
#[derive(Debug, Clone)]
pub struct EquilibriumReport {
    pub profile: PartitionProfile,
    pub steps: usize,
    pub ic_ok: bool,
    /// `(class, preferred cell)` for each class that strictly prefers some
    /// other cell's action to its own.
    pub violations: Vec<(usize, usize)>,
}

/// Verifies sender incentive compatibility of a profile whose actions are
/// already the receiver's best responses.
///
/// Under quadratic loss a sender of class `c` weakly prefers action `x` to
/// `y` exactly when `mean_c + b` is weakly closer to `x`; ties count as
/// compatible. Off-path messages are ignored: the receiver would answer
/// them with an on-path action.
pub fn check_equilibrium(
    space: &ModelSpace,
    profile: &PartitionProfile,
    bias: &Rat,
) -> EquilibriumReport {
    let mut violations = Vec::new();
    for (i, cell) in profile.cells().iter().enumerate() {
        for class in cell.indices() {
            let ideal = space.mean(class) + bias;
            let own = distance(&ideal, &profile.actions()[i]);
            let mut best: Option<(usize, Rat)> = None;
            for (j, action) in profile.actions().iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = distance(&ideal, action);
                let better = match &best {
                    None => true,
                    Some((_, bd)) => d < *bd,
                };
                if better {
                    best = Some((j, d));
                }
            }
            if let Some((j, d)) = best {
                if d < own {
                    violations.push((class, j));
                }
            }
        }
    }
    EquilibriumReport {
        steps: profile.steps(),
        ic_ok: violations.is_empty(),
        violations,
        profile: profile.clone(),
    }
}

fn distance(ideal: &Rat, action: &Rat) -> Rat {
    let d = ideal - action;
    if d < rat_int(0) {
        -d
    } else {
        d
    }
}
