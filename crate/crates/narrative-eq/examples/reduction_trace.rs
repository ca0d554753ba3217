//! Walks an equilibrium down one step: merge the two rightmost messages,
//! then shift boundaries until incentives hold again.
//!
//!     cargo run --example reduction_trace

use narrative_eq::engine::{Engine, TraceNote, DEFAULT_CLASS_CAP};
use narrative_eq::history::History;
use narrative_eq::rational::{format_rat, rat};
use narrative_eq::rules::RuleSelector;
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;

fn main() {
    let history = History::canonical(3, 2).unwrap();
    let space = ModelSpace::build(&history, TiebreakPolicy::default(), true).unwrap();
    let rule = RuleSelector::mleu();
    let engine = Engine::new(&space, &rule).unwrap();
    let bias = rat(1, 30);

    let mut profile = engine.profile_from_cuts(vec![1, 4]).unwrap();
    println!("reducing step by step at bias {}\n", format_rat(&bias));
    while profile.steps() > 1 {
        let (next, trace) = engine.reduce_step(&profile, &bias).unwrap();
        for step in &trace {
            let note = match step.note {
                TraceNote::Start => "start".to_string(),
                TraceNote::MergeRightmost => "merge rightmost cells".to_string(),
                TraceNote::MoveLeft { class } => {
                    format!(
                        "move class {} ({}) left",
                        class,
                        format_rat(space.mean(class))
                    )
                }
            };
            println!(
                "  [{}] cells {:?} actions ({}){}",
                note,
                step.cells,
                step.actions.join(", "),
                if step.equilibrium {
                    "  <- equilibrium"
                } else {
                    ""
                }
            );
        }
        println!();
        profile = next;
    }
    let _ = engine.check(&profile, &bias);
    assert!(engine.max_steps(&bias, DEFAULT_CLASS_CAP, 1).unwrap() >= 1);
    println!("reached the babbling profile; every step along the way verified");
}
