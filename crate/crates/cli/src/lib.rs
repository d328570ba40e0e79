//! Command-line surface: tree evaluation, built-in scenarios, parameter
//! sweeps, bundled CSV datasets, and the inequality check suite.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use anticipated_surprise::analysis::{
    ellsberg_curve, preference, region_map, unit_gamble_surprise, Verdict,
};
use anticipated_surprise::io::{emit_csv, full_precision, parse_tree_file, Cell, CsvTable};
use anticipated_surprise::scenario::{
    allais_problem, birnbaum_problem, build_scenario, scenario_names, Scenario,
};
use anticipated_surprise::verify::{verify_claims, GridKind};
use anticipated_surprise::{annotate, surprise_tree, with_status_quo, Domain, SurpriseSpec};

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "surprise",
    about = "Values risky options by the surprise their outcome paths can trigger",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a JSON tree description
    Eval {
        /// Path to the tree file
        #[arg(long)]
        tree: PathBuf,
        /// Convexity exponent of the surprise magnitude
        #[arg(long)]
        r: f64,
        /// Loss amplification factor, at least 1
        #[arg(long)]
        k: f64,
        /// Reference point charged against the root expectation
        #[arg(long)]
        status_quo: Option<f64>,
    },
    /// Built-in decision scenarios
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// Compare two options of a scenario over a parameter grid, as CSV
    Sweep {
        /// Scenario name, as printed by `scenario list`
        #[arg(long)]
        scenario: String,
        /// Label of the first option
        #[arg(long)]
        option_a: String,
        /// Label of the second option
        #[arg(long)]
        option_b: String,
        #[arg(long)]
        r_min: f64,
        #[arg(long)]
        r_max: f64,
        /// Number of r grid points
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        r_steps: u32,
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        /// Number of k grid points
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k_steps: u32,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit a bundled reference dataset as CSV
    Figure {
        /// Dataset id
        #[arg(long, value_enum)]
        id: FigureId,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the inequality check suite and report pass/fail
    Verify {
        /// Grid density for the checks
        #[arg(long, value_enum, default_value_t = GridChoice::Coarse)]
        grid: GridChoice,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    /// Print the scenario names
    List,
    /// Evaluate a scenario's options and print the verdict
    Eval {
        /// Scenario name, as printed by `scenario list`
        #[arg(long)]
        name: String,
        /// Scenario parameter override, repeatable
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Convexity exponent of the surprise magnitude
        #[arg(long)]
        r: f64,
        /// Loss amplification factor, at least 1
        #[arg(long)]
        k: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FigureId {
    /// Long-shot gamble surprise curves over the win probability
    #[value(name = "fig1")]
    Fig1,
    /// Known-urn minus ambiguous-urn surprise over the exponent
    #[value(name = "fig5")]
    Fig5,
    /// Long-shot problem preference heatmaps, three panels
    #[value(name = "fig6b")]
    Fig6b,
    /// Split-outcome problem preference heatmaps, two panels
    #[value(name = "fig7b")]
    Fig7b,
    /// Grouped-minus-flat surprise heatmaps, two panels
    #[value(name = "figS1")]
    FigS1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GridChoice {
    Coarse,
    Fine,
}

/// Parses argv and runs one command, returning the process exit code.
pub fn run_cli(argv: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = err.print();
            return code;
        }
    };
    match cli.command {
        Command::Eval { tree, r, k, status_quo } => cmd_eval(&tree, r, k, status_quo),
        Command::Scenario { action } => match action {
            ScenarioAction::List => cmd_scenario_list(),
            ScenarioAction::Eval { name, params, r, k } => cmd_scenario_eval(&name, &params, r, k),
        },
        Command::Sweep {
            scenario,
            option_a,
            option_b,
            r_min,
            r_max,
            r_steps,
            k_min,
            k_max,
            k_steps,
            out,
        } => cmd_sweep(
            &scenario,
            (&option_a, &option_b),
            (r_min, r_max, r_steps),
            (k_min, k_max, k_steps),
            &out,
        ),
        Command::Figure { id, out } => cmd_figure(id, &out),
        Command::Verify { grid } => cmd_verify(grid),
    }
}

fn fail(message: impl Display) -> i32 {
    eprintln!("error: {message}");
    EXIT_INPUT
}

fn cmd_eval(tree: &Path, r: f64, k: f64, status_quo: Option<f64>) -> i32 {
    let tree = match parse_tree_file::<f64>(tree) {
        Ok(tree) => tree,
        Err(err) => return fail(err),
    };
    let spec = match SurpriseSpec::power(r, k) {
        Ok(spec) => spec,
        Err(err) => return fail(err),
    };
    let delta = match status_quo {
        Some(reference) => with_status_quo(&tree, &spec, reference),
        None => surprise_tree(&tree, &spec),
    };
    println!("{}", full_precision(delta));
    EXIT_OK
}

fn cmd_scenario_list() -> i32 {
    for name in scenario_names() {
        println!("{name}");
    }
    EXIT_OK
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>, String> {
    let mut params = BTreeMap::new();
    for item in raw {
        let Some((key, value)) = item.split_once('=') else {
            return Err(format!("parameter {item:?} is not of the form key=value"));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| format!("parameter {key:?} has non-numeric value {value:?}"))?;
        if params.insert(key.to_string(), value).is_some() {
            return Err(format!("parameter {key:?} given more than once"));
        }
    }
    Ok(params)
}

fn cmd_scenario_eval(name: &str, raw_params: &[String], r: f64, k: f64) -> i32 {
    let params = match parse_params(raw_params) {
        Ok(params) => params,
        Err(message) => return fail(message),
    };
    let scenario: Scenario<f64> = match build_scenario(name, &params) {
        Ok(scenario) => scenario,
        Err(err) => return fail(err),
    };
    let spec = match SurpriseSpec::power(r, k) {
        Ok(spec) => spec,
        Err(err) => return fail(err),
    };
    for (label, tree) in &scenario.options {
        println!(
            "{label}: delta = {}, expected = {}",
            full_precision(surprise_tree(tree, &spec)),
            full_precision(annotate(tree).expected_value())
        );
    }
    if let [(label_a, tree_a), (label_b, tree_b)] = scenario.options.as_slice() {
        let outcome = preference(tree_a, tree_b, &spec);
        let verdict = match outcome.verdict {
            Verdict::A => label_a.as_str(),
            Verdict::B => label_b.as_str(),
            Verdict::Indifferent => "indifferent",
        };
        println!("verdict: {verdict}");
    }
    EXIT_OK
}

fn linspace(name: &str, min: f64, max: f64, steps: u32) -> Result<Vec<f64>, String> {
    if !min.is_finite() || !max.is_finite() {
        return Err(format!("{name} bounds must be finite"));
    }
    if steps == 1 {
        if max < min {
            return Err(format!("{name}-max is below {name}-min"));
        }
        return Ok(vec![min]);
    }
    if !(max > min) {
        return Err(format!("{name}-max must exceed {name}-min when {name}-steps > 1"));
    }
    let span = max - min;
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| min + span * i as f64 / last).collect())
}

fn cmd_sweep(
    scenario: &str,
    options: (&str, &str),
    r_range: (f64, f64, u32),
    k_range: (f64, f64, u32),
    out: &Path,
) -> i32 {
    let r_grid = match linspace("r", r_range.0, r_range.1, r_range.2) {
        Ok(grid) => grid,
        Err(message) => return fail(message),
    };
    let k_grid = match linspace("k", k_range.0, k_range.1, k_range.2) {
        Ok(grid) => grid,
        Err(message) => return fail(message),
    };
    let scenario: Scenario<f64> = match build_scenario(scenario, &BTreeMap::new()) {
        Ok(scenario) => scenario,
        Err(err) => return fail(err),
    };
    let map = match region_map(&scenario, options, k_grid, r_grid) {
        Ok(map) => map,
        Err(err) => return fail(err),
    };
    let mut table = CsvTable::new(vec!["r", "k", "delta_a", "delta_b", "preferred"])
        .expect("fixed headers are valid");
    for (ir, &r) in map.r_grid.iter().enumerate() {
        for (ik, &k) in map.k_grid.iter().enumerate() {
            let cell = &map.cells[ik][ir];
            table
                .push_row(vec![
                    Cell::Num(r),
                    Cell::Num(k),
                    Cell::Num(cell.delta_a),
                    Cell::Num(cell.delta_b),
                    Cell::Str(cell.verdict.letter().to_string()),
                ])
                .expect("row width matches header");
        }
    }
    match emit_csv(&table, out) {
        Ok(()) => EXIT_OK,
        Err(err) => fail(format!("cannot write {}: {err}", out.display())),
    }
}

fn heatmap_k_grid() -> Vec<f64> {
    (0..100).map(|i| 1.0 + 3.0 * i as f64 / 99.0).collect()
}

fn heatmap_r_grid() -> Vec<f64> {
    (0..100).map(|j| 1.0 + 3.0 * (j + 1) as f64 / 100.0).collect()
}

fn preference_heatmap(panels: Vec<(&str, Scenario<f64>)>) -> CsvTable {
    let mut table = CsvTable::new(vec!["panel", "r", "k", "delta_a", "delta_b", "preferred"])
        .expect("fixed headers are valid");
    for (panel, scenario) in panels {
        let a = scenario.option("option-1").expect("built-in label");
        let b = scenario.option("option-2").expect("built-in label");
        for &r in &heatmap_r_grid() {
            for &k in &heatmap_k_grid() {
                let spec = SurpriseSpec::power(r, k).expect("grid parameters are valid");
                let cell = preference(a, b, &spec);
                table
                    .push_row(vec![
                        Cell::Str(panel.to_string()),
                        Cell::Num(r),
                        Cell::Num(k),
                        Cell::Num(cell.delta_a),
                        Cell::Num(cell.delta_b),
                        Cell::Str(cell.verdict.letter().to_string()),
                    ])
                    .expect("row width matches header");
            }
        }
    }
    table
}

fn grouping_heatmap() -> CsvTable {
    let allais_grouped = allais_problem::<f64>(2, true).expect("valid problem id");
    let allais_flat = allais_problem::<f64>(2, false).expect("valid problem id");
    let birnbaum_staged = birnbaum_problem::<f64>(1).expect("valid problem id");
    let birnbaum_flat = birnbaum_problem::<f64>(2).expect("valid problem id");
    let panels = [
        ("allais-problem-2-option-2", &allais_grouped, &allais_flat),
        ("birnbaum-problem-1-option-2", &birnbaum_staged, &birnbaum_flat),
    ];
    let mut table =
        CsvTable::new(vec!["panel", "r", "k", "delta_grouped", "delta_flat", "grouped_minus_flat"])
            .expect("fixed headers are valid");
    for (panel, grouped, flat) in panels {
        let grouped_tree = grouped.option("option-2").expect("built-in label");
        let flat_tree = flat.option("option-2").expect("built-in label");
        for &r in &heatmap_r_grid() {
            for &k in &heatmap_k_grid() {
                let spec = SurpriseSpec::power(r, k).expect("grid parameters are valid");
                let delta_grouped = surprise_tree(grouped_tree, &spec);
                let delta_flat = surprise_tree(flat_tree, &spec);
                table
                    .push_row(vec![
                        Cell::Str(panel.to_string()),
                        Cell::Num(r),
                        Cell::Num(k),
                        Cell::Num(delta_grouped),
                        Cell::Num(delta_flat),
                        Cell::Num(delta_grouped - delta_flat),
                    ])
                    .expect("row width matches header");
            }
        }
    }
    table
}

fn figure_table(id: FigureId) -> CsvTable {
    match id {
        FigureId::Fig1 => {
            let mut table = CsvTable::new(vec![
                "p",
                "delta_gain_k1",
                "delta_loss_k1",
                "delta_gain_k2.5",
                "delta_loss_k2.5",
            ])
            .expect("fixed headers are valid");
            let neutral = SurpriseSpec::power(1.5, 1.0).expect("valid parameters");
            let averse = SurpriseSpec::power(1.5, 2.5).expect("valid parameters");
            for i in 1..=1000 {
                let p = i as f64 / 1000.0;
                let value = |domain, spec| {
                    unit_gamble_surprise(p, domain, spec).expect("p grid stays in (0, 1]")
                };
                table
                    .push_row(vec![
                        Cell::Num(p),
                        Cell::Num(value(Domain::Gain, &neutral)),
                        Cell::Num(value(Domain::Loss, &neutral)),
                        Cell::Num(value(Domain::Gain, &averse)),
                        Cell::Num(value(Domain::Loss, &averse)),
                    ])
                    .expect("row width matches header");
            }
            table
        }
        FigureId::Fig5 => {
            let mut table = CsvTable::new(vec!["r", "delta_known_minus_ambiguous"])
                .expect("fixed headers are valid");
            let r_grid: Vec<f64> = (0..=100).map(|i| (100 + 5 * i) as f64 / 100.0).collect();
            let curve = ellsberg_curve(50, 2.0, &r_grid, None).expect("valid curve parameters");
            for (r, gap) in curve {
                table
                    .push_row(vec![Cell::Num(r), Cell::Num(gap)])
                    .expect("row width matches header");
            }
            table
        }
        FigureId::Fig6b => preference_heatmap(vec![
            ("problem-1", allais_problem(1, false).expect("valid problem id")),
            ("problem-2-flat", allais_problem(2, false).expect("valid problem id")),
            ("problem-2-grouped", allais_problem(2, true).expect("valid problem id")),
        ]),
        FigureId::Fig7b => preference_heatmap(vec![
            ("problem-1", birnbaum_problem(1).expect("valid problem id")),
            ("problem-2", birnbaum_problem(2).expect("valid problem id")),
        ]),
        FigureId::FigS1 => grouping_heatmap(),
    }
}

fn cmd_figure(id: FigureId, out: &Path) -> i32 {
    let table = figure_table(id);
    match emit_csv(&table, out) {
        Ok(()) => EXIT_OK,
        Err(err) => fail(format!("cannot write {}: {err}", out.display())),
    }
}

fn cmd_verify(grid: GridChoice) -> i32 {
    let kind = match grid {
        GridChoice::Coarse => GridKind::Coarse,
        GridChoice::Fine => GridKind::Fine,
    };
    let report = verify_claims::<f64>(kind);
    print!("{report}");
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
