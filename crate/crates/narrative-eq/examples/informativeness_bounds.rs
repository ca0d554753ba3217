//! Prints the bias thresholds for full and any information transmission,
//! plus the full-revelation curve whose dips make it non-quasi-concave.
//!
//!     cargo run --example informativeness_bounds

use narrative_eq::bounds::{closed_form_bounds, lower_bound, upper_bound};
use narrative_eq::engine::DEFAULT_CLASS_CAP;
use narrative_eq::history::History;
use narrative_eq::rational::format_rat;
use narrative_eq::rules::RuleSelector;
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;

fn space(k: u32, sigma: u32, include_empty: bool) -> ModelSpace {
    let h = History::canonical(k, sigma).unwrap();
    ModelSpace::build(&h, TiebreakPolicy::default(), include_empty).unwrap()
}

fn main() {
    let rule = RuleSelector::mleu();

    println!("thresholds under the maximum-likelihood rule (K = 3):");
    for sigma in 0..=3u32 {
        let report = upper_bound(&space(3, sigma, true), &rule, DEFAULT_CLASS_CAP, 1).unwrap();
        println!(
            "  {sigma} successes: full revelation up to {}, any information up to {} \
             (feasible biases {})",
            format_rat(&report.b_lower),
            format_rat(&report.b_upper),
            report
                .informative_set
                .iter()
                .map(|iv| iv.render())
                .collect::<Vec<_>>()
                .join(" u ")
        );
    }

    println!("\nfull-revelation curve for K = 20 (note the dip at 6 and 14):");
    let values: Vec<String> = (0..=20u32)
        .map(|sigma| format_rat(&lower_bound(&space(20, sigma, true), &rule).unwrap()))
        .collect();
    println!("  {}", values.join(" "));

    println!("\nclosed forms without the pure-noise model, all-success vs all-failure:");
    for k in [3u32, 4, 5, 8] {
        let (b_bar_k, b_bar_0) = closed_form_bounds(k).unwrap();
        let all_success = upper_bound(&space(k, k, false), &rule, DEFAULT_CLASS_CAP, 1).unwrap();
        let all_failure = upper_bound(&space(k, 0, false), &rule, DEFAULT_CLASS_CAP, 1).unwrap();
        println!(
            "  K={k}: computed {} and {}, closed forms {} and {}",
            format_rat(&all_success.b_upper),
            format_rat(&all_failure.b_upper),
            format_rat(&b_bar_k),
            format_rat(&b_bar_0),
        );
    }

    println!("\nwith the pure-noise model included the all-success threshold moves up:");
    for k in [3u32, 4, 5, 8] {
        let report = upper_bound(&space(k, k, true), &rule, DEFAULT_CLASS_CAP, 1).unwrap();
        println!(
            "  K={k}: {} (the cut separating pure noise from everything else binds at K/(4(K+2)))",
            format_rat(&report.b_upper)
        );
    }
}
