//! Cross-validates the interval-based engine against the brute-force
//! oracle on every small scenario.
//!
//!     cargo run --example oracle_check

use narrative_eq::bounds::upper_bound;
use narrative_eq::engine::{Engine, DEFAULT_CLASS_CAP};
use narrative_eq::history::History;
use narrative_eq::oracle::{brute_force_bounds, brute_force_equilibria};
use narrative_eq::rational::{format_rat, rat_int, Rat};
use narrative_eq::rules::RuleSelector;
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;

fn main() {
    let rule = RuleSelector::mleu();
    let mut bias_points = 0usize;
    for k in 1..=4u32 {
        for sigma in 0..=k {
            let h = History::canonical(k, sigma).unwrap();
            let space = ModelSpace::build(&h, TiebreakPolicy::default(), true).unwrap();
            if space.class_count() < 2 {
                continue;
            }
            let exact = upper_bound(&space, &rule, DEFAULT_CLASS_CAP, 1).unwrap();
            let brute = brute_force_bounds(&space, &rule).unwrap();
            assert_eq!(exact.b_lower, brute.b_lower);
            assert_eq!(exact.b_upper, brute.b_upper);
            assert_eq!(exact.informative_set, brute.informative_set);

            let engine = Engine::new(&space, &rule).unwrap();
            let biases: Vec<Rat> = vec![
                &exact.b_lower / rat_int(2),
                exact.b_lower.clone(),
                (&exact.b_lower + &exact.b_upper) / rat_int(2),
                exact.b_upper.clone(),
                &exact.b_upper + rat_int(1),
            ];
            for b in &biases {
                let fast = engine.enumerate(b, DEFAULT_CLASS_CAP, 1).unwrap();
                let slow = brute_force_equilibria(&space, &rule, b).unwrap();
                assert_eq!(fast.len(), slow.len());
                for (f, s) in fast.iter().zip(&slow) {
                    assert_eq!(f.profile.cuts(), s.cuts());
                    assert_eq!(f.profile.actions(), s.actions());
                }
                bias_points += 1;
            }
            println!(
                "K={k} sigma={sigma}: thresholds {} / {} confirmed, equilibria match at 5 biases",
                format_rat(&exact.b_lower),
                format_rat(&exact.b_upper)
            );
        }
    }
    println!("\nengine and oracle agree at {bias_points} bias points");
}
