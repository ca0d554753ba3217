//! Applies all four ambiguity rules to the same feasible set and prints the
//! receiver's optimal action under each.
//!
//!     cargo run --example ambiguity_rules

use narrative_eq::history::History;
use narrative_eq::rational::{format_rat, rat_to_f64};
use narrative_eq::rules::{best_response, RuleSelector};
use narrative_eq::space::{ClassRange, ModelSpace};
use narrative_eq::tiebreak::TiebreakPolicy;

fn main() {
    let history = History::canonical(3, 2).unwrap();
    let space = ModelSpace::build(&history, TiebreakPolicy::default(), true).unwrap();

    // The middle message of the showcase equilibrium: bliss points 1/2, 3/5
    // and 2/3 remain feasible.
    let set = ClassRange::new(1, 3);
    println!(
        "feasible bliss points: {}",
        set.indices()
            .map(|c| format_rat(space.mean(c)))
            .collect::<Vec<_>>()
            .join(", ")
    );

    let rules = [
        ("maximum likelihood", RuleSelector::mleu()),
        ("max-min", RuleSelector::meu()),
        ("Bayesian (uniform)", RuleSelector::bayesian()),
        ("smooth (alpha = 4)", RuleSelector::smooth(4.0)),
    ];
    for (label, rule) in rules {
        let action = best_response(&space, set, &rule).unwrap();
        if rule.kind.is_exact() {
            println!("{label:<22} -> {}", format_rat(&action));
        } else {
            println!("{label:<22} -> {:.9}", rat_to_f64(&action));
        }
    }

    // The smooth rule interpolates toward Bayesian averaging as ambiguity
    // aversion vanishes.
    for alpha in [8.0, 1.0, 1e-4] {
        let a = best_response(&space, set, &RuleSelector::smooth(alpha)).unwrap();
        println!("smooth alpha = {alpha:<8} -> {:.9}", rat_to_f64(&a));
    }
}
