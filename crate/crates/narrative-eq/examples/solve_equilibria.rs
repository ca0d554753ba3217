//! Enumerates every equilibrium of a scenario at two conflict levels and
//! shows the most informative ones.
//!
//!     cargo run --example solve_equilibria

use narrative_eq::engine::{Engine, DEFAULT_CLASS_CAP};
use narrative_eq::history::History;
use narrative_eq::partition::EquilibriumReport;
use narrative_eq::rational::{format_rat, rat};
use narrative_eq::rules::RuleSelector;
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;

fn render(space: &ModelSpace, report: &EquilibriumReport) -> String {
    let cells: Vec<String> = report
        .profile
        .cells()
        .iter()
        .map(|cell| {
            cell.indices()
                .map(|c| format_rat(space.mean(c)))
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let actions: Vec<String> = report.profile.actions().iter().map(format_rat).collect();
    format!(
        "{{{}}} -> actions ({})",
        cells.join(" | "),
        actions.join(", ")
    )
}

fn main() {
    let history = History::canonical(3, 2).unwrap();
    let space = ModelSpace::build(&history, TiebreakPolicy::default(), true).unwrap();
    let rule = RuleSelector::mleu();
    let engine = Engine::new(&space, &rule).unwrap();

    for bias in [rat(1, 30), rat(1, 25), rat(1, 4)] {
        let all = engine.enumerate(&bias, DEFAULT_CLASS_CAP, 1).unwrap();
        let n = engine.max_steps(&bias, DEFAULT_CLASS_CAP, 1).unwrap();
        println!(
            "bias {}: {} equilibria, up to {} induced actions",
            format_rat(&bias),
            all.len(),
            n
        );
        for report in engine
            .most_informative(&bias, DEFAULT_CLASS_CAP, 1)
            .unwrap()
        {
            println!("  most informative: {}", render(&space, &report));
        }
        println!();
    }
}
