//! Builds the bliss-class space for a short history and prints every class
//! with its models, posterior summaries and likelihoods.
//!
//!     cargo run --example model_space

use narrative_eq::history::History;
use narrative_eq::rational::format_rat;
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;

fn main() {
    let history = History::parse("101").unwrap();
    let space = ModelSpace::build(&history, TiebreakPolicy::default(), true).unwrap();

    println!(
        "history {} ({} successes), {} models in {} bliss classes\n",
        history.bit_string(),
        history.sigma(),
        1u64 << history.len(),
        space.class_count()
    );
    for (i, class) in space.classes().iter().enumerate() {
        println!("class {i}: bliss point {}", format_rat(&class.mean));
        for (model, summary) in space.class_models(i) {
            println!(
                "    {model:<10} {} of {} relevant successes, likelihood {}, variance {}",
                summary.successes,
                summary.size,
                format_rat(&summary.likelihood),
                format_rat(&summary.variance),
            );
        }
    }
    let (model, summary) = space.classes()[space.class_count() - 1].representative();
    println!(
        "\nbest-fitting model overall: {model} with likelihood {}",
        format_rat(&summary.likelihood)
    );
}
