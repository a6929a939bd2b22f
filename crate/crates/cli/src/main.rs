use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use shiftplan::instance::{self, Instance, OverlapMode};
use shiftplan::patterns::{generate_family, Family, PatternRuleSet, PatternSet};
use shiftplan::pipeline::{self, RhoChoice, RunObjective, RunOptions, RunReport};
use shiftplan::simgen::{self, Accounting, Mix, SimConfig, Size, WindowMode};

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "shiftplan", version, about = "Two-stage shift and task scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pattern family and write it as JSON.
    Patterns {
        /// FX260, FL15, FL135, FX29, DAY330 or CUSTOM (needs --rules).
        family: String,
        /// JSON array of rule sets replacing the family's own.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an instance (JSON, or a demand CSV) and list violations.
    Validate {
        instance: PathBuf,
        #[command(flatten)]
        csv: CsvArgs,
    },
    /// Run both stages and write the report and roster.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        csv: CsvArgs,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Workers)]
        objective: ObjectiveArg,
        /// `auto` or a splitting factor (1 solves directly).
        #[arg(long, default_value = "auto")]
        rho: String,
        /// Seconds per stage.
        #[arg(long, default_value_t = 300.0)]
        time_limit: f64,
        #[arg(long, value_enum)]
        overlap: Option<OverlapArg>,
        /// Constraint budget of the stage-two model.
        #[arg(long, default_value_t = shiftplan::stage2::DEFAULT_BUDGET)]
        budget: usize,
        /// Cap on the demand of every TP while placing tasks.
        #[arg(long)]
        coverage_cap: Option<u32>,
        /// Skip the peak-demand refinement of the worker bound.
        #[arg(long)]
        no_refine: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        roster: Option<PathBuf>,
    },
    /// Generate a simulated instance.
    Simulate {
        #[arg(long, default_value = "small")]
        size: String,
        /// Total demand in worker-hours; overrides --size.
        #[arg(long)]
        hours: Option<f64>,
        #[arg(long, default_value = "S1")]
        mix: String,
        /// Defaults to the mix's own mode (clustered for S1-S3).
        #[arg(long, value_enum)]
        window_mode: Option<WindowArg>,
        #[arg(long, value_enum, default_value_t = AccountingArg::Hours)]
        accounting: AccountingArg,
        /// Build an emergency-department-like instance at this scale instead.
        #[arg(long)]
        emergency: Option<f64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a report or plot demand, supply or the roster.
    Report {
        report: PathBuf,
        #[arg(long, value_enum)]
        plot: Option<PlotArg>,
        /// `.svg` or `.csv`; CSV goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct CsvArgs {
    /// TP length in minutes for CSV demand files.
    #[arg(long)]
    omega: Option<u32>,
    /// Pattern family for CSV demand files.
    #[arg(long, default_value = "FX29")]
    family: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Workers,
    Cost,
    Overcover,
}

#[derive(Clone, Copy, ValueEnum)]
enum OverlapArg {
    Cyclic,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowArg {
    Clustered,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum AccountingArg {
    Hours,
    Tasks,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum PlotArg {
    Demand,
    Supply,
    Gantt,
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn invalid(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        error: error.into(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Patterns { family, rules, out } => patterns(&family, rules.as_deref(), out.as_deref()),
        Command::Validate { instance, csv } => validate(&instance, &csv),
        Command::Solve {
            instance,
            csv,
            objective,
            rho,
            time_limit,
            overlap,
            budget,
            coverage_cap,
            no_refine,
            seed,
            out,
            roster,
        } => {
            let inst = load_instance(&instance, &csv)?;
            let rho = match rho.as_str() {
                "auto" => RhoChoice::Auto,
                n => RhoChoice::Fixed(
                    n.parse()
                        .ok()
                        .filter(|&r: &usize| r >= 1)
                        .ok_or_else(|| invalid(anyhow!("--rho must be `auto` or a positive integer")))?,
                ),
            };
            if !(time_limit > 0.0) {
                return Err(invalid(anyhow!("--time-limit must be positive")));
            }
            let limit = Duration::from_secs_f64(time_limit);
            let opts = RunOptions {
                objective: match objective {
                    ObjectiveArg::Workers => RunObjective::Workers,
                    ObjectiveArg::Cost => RunObjective::Cost,
                    ObjectiveArg::Overcover => RunObjective::Overcover,
                },
                rho,
                stage1_time: Some(limit),
                stage2_time: Some(limit),
                overlap: overlap.map(|o| match o {
                    OverlapArg::Cyclic => OverlapMode::Cyclic,
                    OverlapArg::Linear => OverlapMode::Linear,
                }),
                budget,
                refine_bound: !no_refine,
                coverage_cap,
                seed,
            };
            solve(&inst, &opts, out.as_deref(), roster.as_deref())
        }
        Command::Simulate {
            size,
            hours,
            mix,
            window_mode,
            accounting,
            emergency,
            seed,
            out,
        } => {
            let inst = if let Some(scale) = emergency {
                simgen::emergency_like_seeded(scale, seed).map_err(invalid)?
            } else {
                let size = Size::parse(&size).ok_or_else(|| invalid(anyhow!("unknown size `{size}`")))?;
                let (mix, default_mode): (Mix, WindowMode) =
                    Mix::named(&mix).ok_or_else(|| invalid(anyhow!("unknown mix `{mix}`")))?;
                let mode = window_mode.map_or(default_mode, |w| match w {
                    WindowArg::Clustered => WindowMode::Clustered,
                    WindowArg::Uniform => WindowMode::Uniform,
                });
                let mut cfg = SimConfig::new(size, mix, mode, seed);
                if let Some(h) = hours {
                    cfg.target_hours = h;
                }
                cfg.accounting = match accounting {
                    AccountingArg::Hours => Accounting::Hours,
                    AccountingArg::Tasks => Accounting::Tasks,
                };
                simgen::simulate(&cfg).map_err(invalid)?
            };
            write_or_print(out.as_deref(), &inst.to_json())
        }
        Command::Report { report, plot, out } => report_cmd(&report, plot, out.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(invalid)
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(invalid),
        None => {
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
            Ok(())
        }
    }
}

fn load_instance(path: &Path, csv: &CsvArgs) -> Result<Instance, Failure> {
    let text = read(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let inst = if is_csv {
        Instance::from_demand_csv(&text, csv.omega, &csv.family)
    } else {
        Instance::from_json(&text)
    };
    inst.with_context(|| format!("parsing {}", path.display())).map_err(invalid)
}

fn patterns(family: &str, rules: Option<&Path>, out: Option<&Path>) -> Result<(), Failure> {
    let fam = Family::parse(family).map_err(invalid)?;
    let rules: Option<Vec<PatternRuleSet>> = match rules {
        Some(p) => Some(serde_json::from_str(&read(p)?).context("parsing rules").map_err(invalid)?),
        None => None,
    };
    let set = match &rules {
        None if fam != Family::Custom => PatternSet::preset(fam).map_err(invalid)?,
        _ => {
            let list = generate_family(fam, rules.as_deref()).map_err(invalid)?;
            let first = rules.as_ref().and_then(|r| r.first());
            PatternSet {
                family: fam.id().into(),
                omega: first.map_or(fam.omega().unwrap_or(30), |r| r.omega),
                patterns: list,
                start_window: first.and_then(|r| r.start_window),
            }
        }
    };
    eprintln!("{} patterns", set.len());
    write_or_print(out, &set.to_json())
}

fn validate(path: &Path, csv: &CsvArgs) -> Result<(), Failure> {
    let inst = load_instance(path, csv)?;
    let violations = instance::validate(&inst);
    if violations.is_empty() {
        if let Err(e) = inst.pattern_set() {
            return Err(invalid(e));
        }
        println!("ok: T={} tasks={} demand {:.2} worker-hours", inst.horizon.periods, inst.tasks.len(), inst.total_demand_hours());
        return Ok(());
    }
    for v in &violations {
        println!("{v}");
    }
    Err(invalid(anyhow!("{} violation(s)", violations.len())))
}

fn solve(inst: &Instance, opts: &RunOptions, out: Option<&Path>, roster: Option<&Path>) -> Result<(), Failure> {
    let result = pipeline::run(inst, opts).map_err(|e| {
        let code = if e.is_infeasible() {
            EXIT_INFEASIBLE
        } else if e.is_invalid_input() {
            EXIT_INVALID
        } else {
            // too large, or no solution within the limits
            EXIT_BUDGET
        };
        Failure {
            code,
            error: e.into(),
        }
    })?;
    let r = &result.report;
    eprintln!(
        "{}: {} schedules (bound {}), {} workers (bound {}), mu {}",
        r.method,
        r.stage1.schedules,
        r.stage1.bound,
        r.stage2.workers,
        r.metrics.worker_lower_bound,
        r.metrics.mu.map_or("n/a".to_string(), |m| format!("{m:.1}")),
    );
    if let Some(p) = roster {
        write_or_print(Some(p), &r.roster.to_json())?;
    }
    write_or_print(out, &r.to_json())
}

fn report_cmd(path: &Path, plot: Option<PlotArg>, out: Option<&Path>) -> Result<(), Failure> {
    let report = RunReport::from_json(&read(path)?).context("parsing report").map_err(invalid)?;
    let Some(plot) = plot else {
        print_summary(&report);
        return Ok(());
    };
    let svg = out.is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")));
    let text = match (plot, svg) {
        (PlotArg::Gantt, true) => gantt_svg(&report),
        (PlotArg::Gantt, false) => gantt_csv(&report),
        (_, true) => series_svg(&report, plot),
        (_, false) => series_csv(&report, plot),
    };
    write_or_print(out, &text)
}

fn print_summary(r: &RunReport) {
    println!("method            {}", r.method);
    println!("horizon           T={} omega={} tasks={}", r.instance.periods, r.instance.omega, r.instance.tasks);
    println!("demand            {:.2} worker-hours", r.instance.demand_hours);
    println!("stage 1           {} schedules, objective {}, bound {}, {} in {:.1}s", r.stage1.schedules, r.stage1.objective, r.stage1.bound, r.stage1.status, r.stage1.seconds);
    if let Some(mu) = r.stage1.mu {
        println!("stage 1 mu        {mu:.1}");
    }
    println!("stage 2           {} workers, {} in {:.1}s", r.stage2.workers, r.stage2.status, r.stage2.seconds);
    println!("worker bound      {} ({})", r.metrics.worker_lower_bound, r.metrics.bound_source);
    if let Some(mu) = r.metrics.mu {
        println!("mu                {mu:.1}");
    }
    println!("utilization       {:.1}%", r.metrics.utilization);
    println!("total time        {:.1}s", r.total_seconds);
}

fn series<'a>(r: &'a RunReport, plot: PlotArg) -> &'a [f64] {
    if plot == PlotArg::Supply {
        &r.supply
    } else {
        &r.demand
    }
}

fn series_csv(r: &RunReport, _plot: PlotArg) -> String {
    let mut s = String::from("tp,demand,supply\n");
    for (j, (d, v)) in r.demand.iter().zip(&r.supply).enumerate() {
        s.push_str(&format!("{},{d},{v}\n", j + 1));
    }
    s
}

fn series_svg(r: &RunReport, plot: PlotArg) -> String {
    let (w, h, pad) = (1000.0, 300.0, 30.0);
    let data = series(r, plot);
    let top = r.demand.iter().chain(&r.supply).cloned().fold(1.0, f64::max);
    let n = data.len().max(1) as f64;
    let x = |j: f64| pad + j / n * (w - 2.0 * pad);
    let y = |v: f64| h - pad - v / top * (h - 2.0 * pad);
    let path = |vals: &[f64]| {
        let mut d = format!("M{:.1},{:.1}", x(0.0), y(vals.first().copied().unwrap_or(0.0)));
        for (j, v) in vals.iter().enumerate() {
            d.push_str(&format!(" L{:.1},{:.1} L{:.1},{:.1}", x(j as f64), y(*v), x(j as f64 + 1.0), y(*v)));
        }
        d
    };
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n");
    s.push_str(&format!("<text x=\"{pad}\" y=\"20\" font-size=\"14\">{} (max {top})</text>\n", if plot == PlotArg::Supply { "supply vs demand" } else { "demand" }));
    s.push_str(&format!("<path d=\"{}\" fill=\"none\" stroke=\"#c33\"/>\n", path(&r.demand)));
    if plot == PlotArg::Supply {
        s.push_str(&format!("<path d=\"{}\" fill=\"none\" stroke=\"#36c\"/>\n", path(&r.supply)));
    }
    s.push_str("</svg>\n");
    s
}

fn gantt_csv(r: &RunReport) -> String {
    let mut s = String::from("worker,pattern,start\n");
    for w in &r.roster.workers {
        for [p, start] in &w.schedules {
            s.push_str(&format!("{},{p},{start}\n", w.index));
        }
    }
    s
}

fn gantt_svg(r: &RunReport) -> String {
    let (w, row, pad) = (1000.0, 12.0, 30.0);
    let t = r.instance.periods.max(1) as f64;
    let h = pad * 2.0 + row * r.roster.workers.len() as f64;
    let x = |j: f64| pad + (j - 1.0) / t * (w - 2.0 * pad);
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n");
    for (i, wk) in r.roster.workers.iter().enumerate() {
        let y = pad + i as f64 * row;
        for [p, start] in &wk.schedules {
            s.push_str(&format!(
                "<rect x=\"{:.1}\" y=\"{y:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"#6a9\"><title>worker {} pattern {p} start {start}</title></rect>\n",
                x(*start as f64),
                r.pattern_lengths.get(p.wrapping_sub(1)).copied().unwrap_or(1) as f64 / t * (w - 2.0 * pad),
                row - 2.0,
                wk.index
            ));
        }
    }
    s.push_str("</svg>\n");
    s
}
