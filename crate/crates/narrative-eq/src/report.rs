//! Output formats: JSON reports, CSV threshold tables, minimal SVG plots.
//!
//! Exact values serialize as `"num/den"` strings; only smooth-rule actions
//! are decimal. Field order is fixed by the struct declarations, so output
//! is byte-identical across runs and worker counts.

use crate::bounds::{BiasInterval, BoundsReport};
use crate::engine::TraceStep;
use crate::error::{Error, Result};
use crate::model::{model_key, Model};
use crate::naive::PersuasionReport;
use crate::partition::EquilibriumReport;
use crate::rational::{format_rat, rat_to_decimal, rat_to_f64, Rat};
use crate::rules::RuleKind;
use crate::scenario::Scenario;
use crate::space::ModelSpace;
use serde::{Deserialize, Serialize};

/// One equilibrium in JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumJson {
    pub steps: usize,
    pub cuts: Vec<usize>,
    /// Inclusive class-index ranges, one per cell.
    pub cells: Vec<CellJson>,
    /// Induced actions; `"num/den"` strings for exact rules, decimals for
    /// the smooth rule.
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellJson {
    pub lo: usize,
    pub hi: usize,
    pub means: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveJson {
    pub k: u32,
    pub history: String,
    pub h_sigma: u32,
    pub bias: String,
    pub rule: String,
    pub tiebreak: Vec<String>,
    pub class_means: Vec<String>,
    pub max_steps: usize,
    pub equilibria: Vec<EquilibriumJson>,
}

fn action_string(action: &Rat, rule: RuleKind) -> String {
    if rule.is_exact() {
        format_rat(action)
    } else {
        format!("{:.12}", rat_to_f64(action))
    }
}

pub fn equilibrium_json(
    space: &ModelSpace,
    rule: RuleKind,
    report: &EquilibriumReport,
) -> EquilibriumJson {
    EquilibriumJson {
        steps: report.steps,
        cuts: report.profile.cuts().to_vec(),
        cells: report
            .profile
            .cells()
            .iter()
            .map(|c| CellJson {
                lo: c.lo,
                hi: c.hi,
                means: c.indices().map(|i| format_rat(space.mean(i))).collect(),
            })
            .collect(),
        actions: report
            .profile
            .actions()
            .iter()
            .map(|a| action_string(a, rule))
            .collect(),
    }
}

pub fn solve_json(
    scenario: &Scenario,
    space: &ModelSpace,
    reports: &[EquilibriumReport],
    max_steps: usize,
) -> SolveJson {
    SolveJson {
        k: scenario.k,
        history: scenario.history.bit_string(),
        h_sigma: scenario.history.sigma(),
        bias: format_rat(&scenario.bias),
        rule: scenario.rule.kind.name().to_string(),
        tiebreak: scenario
            .tiebreak
            .names()
            .iter()
            .map(|s| s.to_string())
            .collect(),
        class_means: space
            .classes()
            .iter()
            .map(|c| format_rat(&c.mean))
            .collect(),
        max_steps,
        equilibria: reports
            .iter()
            .map(|r| equilibrium_json(space, scenario.rule.kind, r))
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceJson {
    pub k: u32,
    pub history: String,
    pub bias: String,
    pub steps: Vec<TraceStep>,
    pub final_cuts: Vec<usize>,
    pub final_actions: Vec<String>,
}

pub fn trace_json(
    scenario: &Scenario,
    trace: &[TraceStep],
    final_cuts: &[usize],
    final_actions: &[Rat],
) -> TraceJson {
    TraceJson {
        k: scenario.k,
        history: scenario.history.bit_string(),
        bias: format_rat(&scenario.bias),
        steps: trace.to_vec(),
        final_cuts: final_cuts.to_vec(),
        final_actions: final_actions
            .iter()
            .map(|a| action_string(a, scenario.rule.kind))
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PersuasionJson {
    pub k: u32,
    pub history: String,
    pub bias: String,
    pub equilibrium_cuts: Vec<usize>,
    pub mleu_rule: bool,
    pub subset_ok: bool,
    pub strict_subset: bool,
    pub naive_set: Vec<String>,
    pub equilibrium_set: Vec<String>,
    pub naive_classes: Vec<String>,
    pub equilibrium_classes: Vec<String>,
    pub per_model: Vec<ModelGainJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelGainJson {
    pub model: String,
    pub class_mean: String,
    pub equilibrium_action: String,
    pub equilibrium_gain: String,
    pub naive_proposal: String,
    pub naive_action: String,
    pub naive_gain: String,
}

pub fn persuasion_json(
    scenario: &Scenario,
    space: &ModelSpace,
    cuts: &[usize],
    report: &PersuasionReport,
) -> PersuasionJson {
    let models = |set: &[Model]| set.iter().map(|&m| model_key(m)).collect();
    let classes = |set: &[usize]| {
        set.iter()
            .map(|&c| format_rat(space.mean(c)))
            .collect::<Vec<_>>()
    };
    PersuasionJson {
        k: scenario.k,
        history: scenario.history.bit_string(),
        bias: format_rat(&scenario.bias),
        equilibrium_cuts: cuts.to_vec(),
        mleu_rule: report.mleu_rule,
        subset_ok: report.subset_ok,
        strict_subset: report.strict,
        naive_set: models(&report.naive_set),
        equilibrium_set: models(&report.equilibrium_set),
        naive_classes: classes(&report.naive_classes),
        equilibrium_classes: classes(&report.equilibrium_classes),
        per_model: report
            .per_model
            .iter()
            .map(|g| ModelGainJson {
                model: model_key(g.model),
                class_mean: format_rat(space.mean(g.class)),
                equilibrium_action: format_rat(&g.equilibrium_action),
                equilibrium_gain: format_rat(&g.equilibrium_gain),
                naive_proposal: model_key(g.naive_proposal),
                naive_action: format_rat(&g.naive_action),
                naive_gain: format_rat(&g.naive_gain),
            })
            .collect(),
    }
}

/// One row of the threshold table.
#[derive(Debug, Clone)]
pub struct BoundsRow {
    pub k: u32,
    pub h_sigma: u32,
    pub b_lower: Rat,
    pub b_upper: Option<Rat>,
    pub informative_set: Option<Vec<BiasInterval>>,
}

impl BoundsRow {
    pub fn from_report(k: u32, h_sigma: u32, report: &BoundsReport) -> Self {
        BoundsRow {
            k,
            h_sigma,
            b_lower: report.b_lower.clone(),
            b_upper: Some(report.b_upper.clone()),
            informative_set: Some(report.informative_set.clone()),
        }
    }
}

/// Renders the CSV table. Fraction columns are the contract; the `_approx`
/// columns are decimals rounded to 12 places for convenience only.
pub fn bounds_csv(rows: &[BoundsRow]) -> String {
    let with_upper = rows.iter().all(|r| r.b_upper.is_some());
    let mut out = String::new();
    if with_upper {
        out.push_str(
            "k,h_sigma,b_lower_num,b_lower_den,b_upper_num,b_upper_den,b_lower_approx,b_upper_approx\n",
        );
    } else {
        out.push_str("k,h_sigma,b_lower_num,b_lower_den,b_lower_approx\n");
    }
    for row in rows {
        let lo = &row.b_lower;
        if with_upper {
            let hi = row.b_upper.as_ref().unwrap();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                row.k,
                row.h_sigma,
                lo.numer(),
                lo.denom(),
                hi.numer(),
                hi.denom(),
                rat_to_decimal(lo, 12),
                rat_to_decimal(hi, 12),
            ));
        } else {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.k,
                row.h_sigma,
                lo.numer(),
                lo.denom(),
                rat_to_decimal(lo, 12),
            ));
        }
    }
    out
}

/// Minimal SVG: axes plus the polyline of the full-revelation threshold
/// against the success count.
pub fn bounds_svg(rows: &[BoundsRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Input("no rows to plot".into()));
    }
    let width = 640.0;
    let height = 400.0;
    let margin = 50.0;
    let xs: Vec<f64> = rows.iter().map(|r| r.h_sigma as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| rat_to_f64(&r.b_lower)).collect();
    let x_max = xs.iter().cloned().fold(1.0, f64::max);
    let y_max = ys.iter().cloned().fold(f64::MIN, f64::max) * 1.15;
    let px = |x: f64| margin + x / x_max * (width - 2.0 * margin);
    let py = |y: f64| height - margin - y / y_max * (height - 2.0 * margin);
    let points: Vec<String> = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
        .collect();
    let k = rows[0].k;
    Ok(format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "  <line x1=\"{m}\" y1=\"{ybase}\" x2=\"{xend}\" y2=\"{ybase}\" stroke=\"black\"/>\n",
            "  <line x1=\"{m}\" y1=\"{ybase}\" x2=\"{m}\" y2=\"{m}\" stroke=\"black\"/>\n",
            "  <text x=\"{xend}\" y=\"{xlab}\" font-size=\"12\" text-anchor=\"end\">successes</text>\n",
            "  <text x=\"{m}\" y=\"{ylab}\" font-size=\"12\">full-revelation threshold, K={k}</text>\n",
            "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{pts}\"/>\n",
            "</svg>\n"
        ),
        w = width,
        h = height,
        m = margin,
        ybase = height - margin,
        xend = width - margin,
        xlab = height - margin + 30.0,
        ylab = margin - 15.0,
        k = k,
        pts = points.join(" "),
    ))
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(format!("serialize: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Engine, DEFAULT_CLASS_CAP};
    use crate::rational::rat;
    use crate::rules::RuleSelector;

    fn scenario() -> Scenario {
        Scenario::from_json(r#"{"k":3,"h_sigma":2,"bias":"1/30","rule":{"kind":"mleu"}}"#).unwrap()
    }

    #[test]
    fn solve_json_round_trips_and_reverifies() {
        let sc = scenario();
        let space = sc.space().unwrap();
        let rule = RuleSelector::mleu();
        let engine = Engine::new(&space, &rule).unwrap();
        let all = engine.enumerate(&sc.bias, DEFAULT_CLASS_CAP, 1).unwrap();
        let out = solve_json(&sc, &space, &all, 5);
        let text = to_json_string(&out).unwrap();
        let parsed: SolveJson = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.equilibria.len(), all.len());
        for eq in &parsed.equilibria {
            let profile = engine.profile_from_cuts(eq.cuts.clone()).unwrap();
            let report = engine.check(&profile, &sc.bias);
            assert!(report.ic_ok);
            let actions: Vec<String> = profile.actions().iter().map(format_rat).collect();
            assert_eq!(&actions, &eq.actions);
        }
    }

    #[test]
    fn csv_layouts() {
        let rows = vec![BoundsRow {
            k: 3,
            h_sigma: 2,
            b_lower: rat(1, 30),
            b_upper: Some(rat(5, 24)),
            informative_set: None,
        }];
        let csv = bounds_csv(&rows);
        assert!(csv.starts_with("k,h_sigma,b_lower_num,b_lower_den,b_upper_num,b_upper_den"));
        assert!(csv.contains("3,2,1,30,5,24,0.033333333333,0.208333333333"));
        let rows = vec![BoundsRow {
            k: 3,
            h_sigma: 2,
            b_lower: rat(1, 30),
            b_upper: None,
            informative_set: None,
        }];
        let csv = bounds_csv(&rows);
        assert!(csv.starts_with("k,h_sigma,b_lower_num,b_lower_den,b_lower_approx"));
    }

    #[test]
    fn svg_contains_polyline() {
        let rows: Vec<BoundsRow> = [
            (0u32, rat(1, 40)),
            (1, rat(1, 30)),
            (2, rat(1, 30)),
            (3, rat(1, 40)),
        ]
        .into_iter()
        .map(|(h_sigma, b_lower)| BoundsRow {
            k: 3,
            h_sigma,
            b_lower,
            b_upper: None,
            informative_set: None,
        })
        .collect();
        let svg = bounds_svg(&rows).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
    }
}
