//! Command-line front end. Heavy lifting lives in the library; this binary
//! parses arguments, loads scenario files and prints reports.
//!
//! Exit codes: 0 success, 2 input/parse problem, 3 resource cap exceeded,
//! 4 contract violation (e.g. a profile that fails verification).

use clap::{Parser, Subcommand};
use narrative_eq::bounds::{lower_bound, upper_bound};
use narrative_eq::engine::{Engine, DEFAULT_CLASS_CAP};
use narrative_eq::error::{Error, Result};
use narrative_eq::history::History;
use narrative_eq::naive::persuasion_sets;
use narrative_eq::oracle::{brute_force_bounds, brute_force_equilibria};
use narrative_eq::rational::{format_rat, rat, rat_int, Rat};
use narrative_eq::report::{
    bounds_csv, bounds_svg, persuasion_json, solve_json, to_json_string, trace_json, BoundsRow,
};
use narrative_eq::rules::RuleSelector;
use narrative_eq::scenario::{Scenario, CLASS_CAP_ENV};
use narrative_eq::space::ModelSpace;
use narrative_eq::tiebreak::TiebreakPolicy;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "narrative-eq",
    about = "Exact equilibria, informativeness thresholds and naive-receiver \
             comparisons for cheap-talk games over narratives",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate equilibria of a scenario file as JSON.
    Solve {
        scenario: PathBuf,
        /// Report every equilibrium (default).
        #[arg(long, conflicts_with = "most_informative")]
        all: bool,
        /// Report only the most informative equilibria.
        #[arg(long)]
        most_informative: bool,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Threshold table (CSV) for one K under the maximum-likelihood rule.
    Bounds {
        #[arg(long)]
        k: u32,
        /// Single success count; omit with --all-hsigma for the full column.
        #[arg(long, conflicts_with = "all_hsigma")]
        h_sigma: Option<u32>,
        /// One row per success count 0..=K.
        #[arg(long)]
        all_hsigma: bool,
        /// Only the full-revelation threshold (no partition enumeration);
        /// required when the class count exceeds the cap.
        #[arg(long)]
        lower_only: bool,
        /// Drop the pure-noise model from the space.
        #[arg(long)]
        exclude_empty_model: bool,
        /// Also write an SVG polyline of the threshold curve.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Merge the two rightmost cells of an equilibrium and trace the repair
    /// moves until a coarser equilibrium is reached.
    Reduce {
        scenario: PathBuf,
        /// Cut positions of the starting equilibrium, e.g. "1,4".
        #[arg(long)]
        from: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Persuasion sets of an equilibrium vs. the naive-receiver benchmark.
    CompareNaive {
        scenario: PathBuf,
        /// Cut positions of the equilibrium to analyse; defaults to the
        /// most informative one.
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the engine against the brute-force oracle (small K).
    Verify {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        h_sigma: Option<u32>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
    }
}

fn parse_cuts(spec: &str) -> Result<Vec<usize>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad cut position {p:?}")))
        })
        .collect()
}

fn class_cap_from_env(default: usize) -> Result<usize> {
    match std::env::var(CLASS_CAP_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| Error::Input(format!("bad {CLASS_CAP_ENV} value {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            scenario,
            all: _,
            most_informative,
            out,
        } => {
            let sc = Scenario::from_path(&scenario)?;
            let space = sc.space()?;
            let engine = Engine::new(&space, &sc.rule)?;
            let reports = if most_informative {
                engine.most_informative(&sc.bias, sc.class_cap, sc.worker_count)?
            } else {
                engine.enumerate(&sc.bias, sc.class_cap, sc.worker_count)?
            };
            let max_steps = engine.max_steps(&sc.bias, sc.class_cap, sc.worker_count)?;
            let json = solve_json(&sc, &space, &reports, max_steps);
            emit(&format!("{}\n", to_json_string(&json)?), &out)
        }
        Command::Bounds {
            k,
            h_sigma,
            all_hsigma,
            lower_only,
            exclude_empty_model,
            svg,
            out,
        } => {
            if k == 0 {
                return Err(Error::Input("K must be >= 1".into()));
            }
            let cap = class_cap_from_env(DEFAULT_CLASS_CAP)?;
            let rule = RuleSelector::mleu();
            let sigmas: Vec<u32> = match (h_sigma, all_hsigma) {
                (Some(s), false) => vec![s],
                (None, _) => (0..=k).collect(),
                (Some(_), true) => unreachable!("clap forbids the combination"),
            };
            let mut rows = Vec::new();
            for sigma in sigmas {
                let history = History::canonical(k, sigma)?;
                let space =
                    ModelSpace::build(&history, TiebreakPolicy::default(), !exclude_empty_model)?;
                let b_lower = lower_bound(&space, &rule)?;
                let row = if lower_only {
                    BoundsRow {
                        k,
                        h_sigma: sigma,
                        b_lower,
                        b_upper: None,
                        informative_set: None,
                    }
                } else {
                    let report = upper_bound(&space, &rule, cap, 1).map_err(|e| match e {
                        Error::Resource(msg) => {
                            Error::Resource(format!("{msg}; rerun with --lower-only"))
                        }
                        other => other,
                    })?;
                    BoundsRow::from_report(k, sigma, &report)
                };
                rows.push(row);
            }
            if let Some(path) = svg {
                let plot = bounds_svg(&rows)?;
                std::fs::write(&path, plot)
                    .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            }
            emit(&bounds_csv(&rows), &out)
        }
        Command::Reduce {
            scenario,
            from,
            out,
        } => {
            let sc = Scenario::from_path(&scenario)?;
            let space = sc.space()?;
            let engine = Engine::new(&space, &sc.rule)?;
            let cuts = parse_cuts(&from)?;
            let profile = engine.profile_from_cuts(cuts)?;
            let report = engine.check(&profile, &sc.bias);
            if !report.ic_ok {
                return Err(Error::Contract(format!(
                    "starting profile is not an equilibrium; violations (class, preferred cell): {:?}",
                    report.violations
                )));
            }
            let (reduced, trace) = engine.reduce_step(&profile, &sc.bias)?;
            let json = trace_json(&sc, &trace, reduced.cuts(), reduced.actions());
            emit(&format!("{}\n", to_json_string(&json)?), &out)
        }
        Command::CompareNaive {
            scenario,
            from,
            out,
        } => {
            let sc = Scenario::from_path(&scenario)?;
            let space = sc.space()?;
            let engine = Engine::new(&space, &sc.rule)?;
            let profile = match from {
                Some(spec) => {
                    let profile = engine.profile_from_cuts(parse_cuts(&spec)?)?;
                    let report = engine.check(&profile, &sc.bias);
                    if !report.ic_ok {
                        return Err(Error::Contract(format!(
                            "profile is not an equilibrium; violations: {:?}",
                            report.violations
                        )));
                    }
                    profile
                }
                None => {
                    let top = engine.most_informative(&sc.bias, sc.class_cap, sc.worker_count)?;
                    top[0].profile.clone()
                }
            };
            if !sc.rule.kind.is_exact() {
                eprintln!("warning: smooth-rule comparison; subset guarantee not asserted");
            } else if sc.rule.kind != narrative_eq::rules::RuleKind::Mleu {
                eprintln!(
                    "warning: {} rule; the naive-set inclusion is only guaranteed under mleu",
                    sc.rule.kind.name()
                );
            }
            let report = persuasion_sets(&space, &sc.rule, &profile, &sc.bias)?;
            let json = persuasion_json(&sc, &space, profile.cuts(), &report);
            emit(&format!("{}\n", to_json_string(&json)?), &out)
        }
        Command::Verify { k, h_sigma } => {
            let rule = RuleSelector::mleu();
            let sigmas: Vec<u32> = match h_sigma {
                Some(s) => vec![s],
                None => (0..=k).collect(),
            };
            let mut checked = 0usize;
            for sigma in sigmas {
                let history = History::canonical(k, sigma)?;
                let space = ModelSpace::build(&history, TiebreakPolicy::default(), true)?;
                if space.class_count() < 2 {
                    continue;
                }
                let exact = upper_bound(&space, &rule, DEFAULT_CLASS_CAP, 1)?;
                let brute = brute_force_bounds(&space, &rule)?;
                if exact.b_lower != brute.b_lower
                    || exact.b_upper != brute.b_upper
                    || exact.informative_set != brute.informative_set
                {
                    return Err(Error::Contract(format!(
                        "threshold mismatch at K={k} sigma={sigma}"
                    )));
                }
                let engine = Engine::new(&space, &rule)?;
                let biases: Vec<Rat> = vec![
                    &exact.b_lower / rat_int(2),
                    exact.b_lower.clone(),
                    (&exact.b_lower + &exact.b_upper) / rat_int(2),
                    exact.b_upper.clone(),
                    &exact.b_upper + rat(1, 7),
                ];
                for b in biases {
                    let fast = engine.enumerate(&b, DEFAULT_CLASS_CAP, 1)?;
                    let slow = brute_force_equilibria(&space, &rule, &b)?;
                    let same = fast.len() == slow.len()
                        && fast
                            .iter()
                            .zip(&slow)
                            .all(|(f, s)| f.profile.cuts() == s.cuts());
                    if !same {
                        return Err(Error::Contract(format!(
                            "equilibrium mismatch at K={k} sigma={sigma} b={}",
                            format_rat(&b)
                        )));
                    }
                    checked += 1;
                }
                println!(
                    "ok K={k} sigma={sigma}: thresholds {} / {} and equilibria agree",
                    format_rat(&exact.b_lower),
                    format_rat(&exact.b_upper)
                );
            }
            println!("verified {checked} bias points against the oracle");
            Ok(())
        }
    }
}
