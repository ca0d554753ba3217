//! Contrasts equilibrium persuasion with the naive receiver who adopts any
//! narrative fitting at least as well as the truth.
//!
//!     cargo run --example naive_comparison

use narrative_eq::engine::{Engine, DEFAULT_CLASS_CAP};
use narrative_eq::history::History;
use narrative_eq::model::model_key;
use narrative_eq::naive::{naive_best_proposal, persuasion_sets, receiver_utility};
use narrative_eq::posterior::posterior_summary;
use narrative_eq::rational::{format_rat, rat};
use narrative_eq::rules::RuleSelector;
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;

fn main() {
    let history = History::canonical(3, 2).unwrap();
    let space = ModelSpace::build(&history, TiebreakPolicy::default(), true).unwrap();
    let rule = RuleSelector::mleu();
    let engine = Engine::new(&space, &rule).unwrap();
    let bias = rat(7, 100);

    let top = engine
        .most_informative(&bias, DEFAULT_CLASS_CAP, 1)
        .unwrap();
    let profile = &top[0].profile;
    println!(
        "history {}, bias {}, equilibrium cuts {:?}\n",
        history.bit_string(),
        format_rat(&bias),
        profile.cuts()
    );

    let report = persuasion_sets(&space, &rule, profile, &bias).unwrap();
    println!("per-model gains over the truthful action:");
    for g in &report.per_model {
        println!(
            "  {:<8} bliss {:<4} equilibrium action {:<4} gain {:<8} | naive proposal {:<8} action {:<4} gain {}",
            model_key(g.model),
            format_rat(space.mean(g.class)),
            format_rat(&g.equilibrium_action),
            format_rat(&g.equilibrium_gain),
            model_key(g.naive_proposal),
            format_rat(&g.naive_action),
            format_rat(&g.naive_gain),
        );
    }
    println!(
        "\nequilibrium persuasion classes: {:?}",
        report
            .equilibrium_classes
            .iter()
            .map(|&c| format_rat(space.mean(c)))
            .collect::<Vec<_>>()
    );
    println!(
        "naive persuasion classes:       {:?} (strict superset: {})",
        report
            .naive_classes
            .iter()
            .map(|&c| format_rat(space.mean(c)))
            .collect::<Vec<_>>(),
        report.strict
    );

    // The receiver himself may prefer either mode of reasoning.
    println!("\nreceiver welfare comparison:");
    for spec in [vec![1u32, 2, 3], vec![1, 3]] {
        let truth = narrative_eq::model::Model::from_indices(&spec, 3).unwrap();
        let truthful = posterior_summary(truth, space.history()).mean;
        let eq_action = &profile.actions()[profile.cell_of(space.class_of(truth))];
        let (proposal, _) = naive_best_proposal(&space, truth, &bias);
        let naive_action = posterior_summary(proposal, space.history()).mean;
        let eq_u = receiver_utility(&space, truth, eq_action);
        let naive_u = receiver_utility(&space, truth, &naive_action);
        println!(
            "  true model {} (bliss {}): equilibrium -> {} ({}), naive -> {} ({}); {} receiver",
            model_key(truth),
            format_rat(&truthful),
            format_rat(eq_action),
            format_rat(&eq_u),
            format_rat(&naive_action),
            format_rat(&naive_u),
            if naive_u > eq_u {
                "naivety helps the"
            } else {
                "equilibrium protects the"
            },
        );
    }
}
