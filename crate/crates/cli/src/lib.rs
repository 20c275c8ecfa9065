//! Command-line front door for the weekly chemotherapy scheduler.
//!
//! Subcommands: `generate` (synthetic instances), `solve` (the staged
//! optimisation chain), `bound` (chair-count upper bounds),
//! `validate` (schedule audit), and `export-mps` (model files for
//! external solvers).  [`run`] parses arguments and returns the
//! process exit code: 0 success, 64 usage error, 65 invalid data,
//! 70 solver/backend failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use chemoplan::{
    brute_force_lexico, build_af1, build_af2, build_af3, build_f1_complete, disaggregate, emit,
    evaluate, generate, load, parse_schedule_json, procedure1, procedure2, procedure2_extended,
    save, stage1, trivial_bound, ub1_limited, ub1_model, ub2_limited, ub2_model,
    validate_instance, validate_schedule, Backend, BoundError, BoundResult, CompleteSchedule,
    EmitFormat, GeneratorParams, Instance, KOptParams, KOptRadii, LexicoError, MetricsRecord,
    MilpModel, SolveOptions, StageLimits, StageLog,
};

/// Exit code of a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for bad flags or inconsistent flag combinations.
pub const EXIT_USAGE: i32 = 64;
/// Exit code for unreadable, unparseable, or infeasible input data.
pub const EXIT_DATA: i32 = 65;
/// Exit code for solver or external-backend failures.
pub const EXIT_BACKEND: i32 = 70;

/// A command failure routed to one of the documented exit codes.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Backend(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Backend(_) => EXIT_BACKEND,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Backend(m) => m,
        }
    }
}

impl From<chemoplan::InstanceError> for CliError {
    fn from(e: chemoplan::InstanceError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<LexicoError> for CliError {
    fn from(e: LexicoError) -> Self {
        let mut message = e.to_string();
        for log in e.partial_logs() {
            message.push_str("\n  completed: ");
            message.push_str(&serde_json::to_string(log).expect("stage logs serialise"));
        }
        CliError::Backend(message)
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "chemoplan",
    version,
    about = "Weekly chemotherapy appointment scheduling",
    long_about = "Schedules linked visit/infusion appointments over a week, optimising \
                  lexicographically: most patients treated, then least total daily peak \
                  wait, then most infusions on chairs."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance file.
    Generate(GenerateArgs),
    /// Run the staged optimisation chain on an instance.
    Solve(SolveArgs),
    /// Compute chair-count upper bounds for an instance.
    Bound(BoundArgs),
    /// Audit a schedule file against an instance.
    Validate(ValidateArgs),
    /// Write a model as a fixed-format MPS file.
    ExportMps(ExportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Where to write the instance JSON.
    #[arg(long, default_value = "instance.json")]
    out: PathBuf,
    /// Generator seed; identical flags produce identical files.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of patients to draw.
    #[arg(long, default_value_t = GeneratorParams::default().total_patients)]
    patients: usize,
    /// Number of working days.
    #[arg(long, default_value_t = GeneratorParams::default().days)]
    days: usize,
    /// Slots per day.
    #[arg(long, default_value_t = GeneratorParams::default().slots_per_day)]
    slots: usize,
    /// Visit-start window length (prefix of the day).
    #[arg(long, default_value_t = GeneratorParams::default().visit_slots)]
    visit_slots: usize,
    /// Number of exam rooms.
    #[arg(long, default_value_t = GeneratorParams::default().rooms)]
    rooms: usize,
    /// Number of beds.
    #[arg(long, default_value_t = GeneratorParams::default().beds)]
    beds: usize,
    /// Number of chairs.
    #[arg(long, default_value_t = GeneratorParams::default().chairs)]
    chairs: usize,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON to schedule.
    #[arg(long)]
    instance: PathBuf,
    /// Directory for the output files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Engine: `internal`, `oracle`, or `external:<command>`.
    #[arg(long, default_value = "internal", value_parser = parse_backend)]
    backend: Backend,
    /// Per-stage time limits, e.g. `af1=300,af2day=60,p3all=600`.
    #[arg(long, default_value = "", value_parser = parse_limits)]
    limits: StageLimits,
    /// Improvement-search flip budgets: visits, critical beds,
    /// non-critical beds, chairs.
    #[arg(long, default_value = "20,20,20,20", value_parser = parse_radii)]
    kopt: KOptRadii,
    /// Stop after this stage: 1 treated count, 2 waits, 3 chairs.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    stage: u8,
    /// Seed forwarded to randomised engines (the internal one is
    /// deterministic and ignores it).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// After the improvement search, run one warm-started whole-week
    /// chair solve.
    #[arg(long)]
    final_solve: bool,
}

#[derive(Args)]
struct BoundArgs {
    /// Instance JSON to bound.
    #[arg(long)]
    instance: PathBuf,
    /// Directory for bounds.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Treated-count level the bounds condition on; derived by the
    /// scheduling chain when omitted.
    #[arg(long)]
    v1: Option<usize>,
    /// Per-day wait caps, comma separated; derived when omitted.
    #[arg(long, value_parser = parse_day_values)]
    v2: Option<DayValues>,
    /// Wall-clock budget per bound model, seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// Engine for the derivation chain when `--v1`/`--v2` are
    /// omitted: `internal` or `external:<command>`.
    #[arg(long, default_value = "internal", value_parser = parse_backend)]
    backend: Backend,
    /// Per-stage time limits of the derivation chain.
    #[arg(long, default_value = "", value_parser = parse_limits)]
    limits: StageLimits,
}

#[derive(Args)]
struct ValidateArgs {
    /// Instance the schedule belongs to.
    #[arg(long)]
    instance: PathBuf,
    /// Schedule JSON to audit.
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct ExportArgs {
    /// Instance to build the model from.
    #[arg(long)]
    instance: PathBuf,
    /// Which formulation to export.
    #[arg(long, value_parser = ["f1", "af1", "af2", "af3", "ub1", "ub2"])]
    model: String,
    /// Where to write the MPS file.
    #[arg(long, default_value = "model.mps")]
    out: PathBuf,
    /// Treated-count level for af2/af3/ub2; derived when omitted.
    #[arg(long)]
    v1: Option<usize>,
    /// Per-day wait caps for af3/ub2; derived when omitted.
    #[arg(long, value_parser = parse_day_values)]
    v2: Option<DayValues>,
    /// Per-stage time limits of the derivation chain.
    #[arg(long, default_value = "", value_parser = parse_limits)]
    limits: StageLimits,
}

/// Comma-separated per-day integers (newtype so clap treats the list
/// as one value).
#[derive(Debug, Clone)]
struct DayValues(Vec<usize>);

fn parse_day_values(s: &str) -> Result<DayValues, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad day value `{part}`: expected a non-negative integer"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(DayValues)
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    match s {
        "internal" => Ok(Backend::Internal),
        "oracle" => Ok(Backend::Oracle),
        other => match other.strip_prefix("external:") {
            Some(cmd) if !cmd.trim().is_empty() => Ok(Backend::External(cmd.to_owned())),
            Some(_) => Err("external backend needs a command: external:<cmd>".to_owned()),
            None => Err(format!(
                "unknown backend `{other}`; use internal, oracle, or external:<cmd>"
            )),
        },
    }
}

fn parse_limits(s: &str) -> Result<StageLimits, String> {
    let mut limits = StageLimits::default();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=seconds, got `{part}`"))?;
        let seconds: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("bad seconds in `{part}`"))?;
        if !seconds.is_finite() || seconds <= 0.0 {
            return Err(format!("limit `{}` must be a positive number", key.trim()));
        }
        match key.trim() {
            "af1" => limits.af1 = seconds,
            "af2day" => limits.af2_day = seconds,
            "af2warm" => limits.af2_warm = seconds,
            "p3day" => limits.p3_day = seconds,
            "kopt" => limits.kopt_iter = seconds,
            "p3all" => limits.p3_overall = seconds,
            other => {
                return Err(format!(
                    "unknown limit `{other}`; keys: af1, af2day, af2warm, p3day, kopt, p3all"
                ))
            }
        }
    }
    Ok(limits)
}

fn parse_radii(s: &str) -> Result<KOptRadii, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err("expected four comma-separated budgets: x,y,zbed,zchair".to_owned());
    }
    let mut budgets = [0usize; 4];
    for (slot, part) in budgets.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("bad flip budget `{part}`"))?;
    }
    Ok(KOptRadii {
        k_x: budgets[0],
        k_y: budgets[1],
        k_z_bed: budgets[2],
        k_z_chair: budgets[3],
    })
}

/// Parse arguments and run one command, returning the process exit
/// code. `--help` and `--version` print and return 0.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Solve(args) => cmd_solve(&args),
        Command::Bound(args) => cmd_bound(&args),
        Command::Validate(args) => cmd_validate(&args),
        Command::ExportMps(args) => cmd_export_mps(&args),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<(), CliError> {
    let params = GeneratorParams {
        seed: args.seed,
        total_patients: args.patients,
        days: args.days,
        slots_per_day: args.slots,
        visit_slots: args.visit_slots,
        rooms: args.rooms,
        beds: args.beds,
        chairs: args.chairs,
        ..GeneratorParams::default()
    };
    let inst = generate(&params).map_err(|e| CliError::Usage(e.to_string()))?;
    save(&inst, &args.out)?;
    println!("wrote {}", args.out.display());
    print_instance_summary(&inst);
    Ok(())
}

/// Per-pathology counts and mean durations, plus the critical share.
fn print_instance_summary(inst: &Instance) {
    let total = inst.patients.len();
    let critical = inst.patients.iter().filter(|p| p.critical).count();
    let percent = |part: usize, whole: usize| {
        if whole == 0 { 0.0 } else { 100.0 * part as f64 / whole as f64 }
    };
    println!(
        "{} patients over {} days ({} slots, visit window {}); {} rooms, {} chairs, {} beds",
        total, inst.days, inst.slots_per_day, inst.visit_slots, inst.rooms, inst.chairs, inst.beds
    );
    println!("critical: {} ({:.1}%)", critical, percent(critical, total));
    println!("{:<12} {:>6} {:>7} {:>10} {:>13}", "pathology", "count", "share%", "mean visit", "mean infusion");
    for name in &inst.pathologies {
        let group: Vec<_> = inst.patients.iter().filter(|p| &p.pathology == name).collect();
        if group.is_empty() {
            println!("{name:<12} {:>6} {:>7.1} {:>10} {:>13}", 0, 0.0, "-", "-");
            continue;
        }
        let mean = |f: fn(&&chemoplan::Patient) -> usize| {
            group.iter().map(f).sum::<usize>() as f64 / group.len() as f64
        };
        println!(
            "{name:<12} {:>6} {:>7.1} {:>10.2} {:>13.2}",
            group.len(),
            percent(group.len(), total),
            mean(|p| p.visit),
            mean(|p| p.infusion),
        );
    }
}

fn load_checked(path: &Path) -> Result<Instance, CliError> {
    let inst = load(path)?;
    let violations = validate_instance(&inst);
    if let Some(first) = violations.first() {
        return Err(CliError::Data(format!(
            "{}: {} violation(s), first: {first}",
            path.display(),
            violations.len()
        )));
    }
    Ok(inst)
}

fn solve_options(backend: &Backend, seed: u64) -> SolveOptions {
    SolveOptions {
        backend: backend.clone(),
        deterministic_seed: seed,
        ..SolveOptions::default()
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let inst = load_checked(&args.instance)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", args.out.display())))?;

    if args.backend == Backend::Oracle {
        return solve_with_oracle(args, &inst);
    }

    let opts = solve_options(&args.backend, args.seed);
    let limits = args.limits;
    match args.stage {
        1 => {
            let s1 = stage1(&inst, &SolveOptions { time_limit: limits.af1, ..opts })?;
            write_stage_logs(&args.out, &s1.logs)?;
            println!(
                "v1 = {} ({})",
                s1.v1,
                if s1.optimal { "optimal" } else { "time limit" }
            );
        }
        2 => {
            let p1 = procedure1(&inst, &limits, &opts)?;
            let schedule = disaggregate(&p1.schedule, &inst)
                .map_err(|e| CliError::Backend(e.to_string()))?;
            let metrics =
                evaluate(&schedule, &inst).map_err(|e| CliError::Backend(e.to_string()))?;
            write_stage_logs(&args.out, &p1.logs)?;
            write_schedule_files(&args.out, &inst, &schedule, &metrics)?;
            print_metrics_line(&metrics, inst.patients.len());
        }
        3 => {
            let kopt = KOptParams {
                radii: args.kopt,
                iteration_time_limit: limits.kopt_iter,
                overall_time_limit: limits.p3_overall,
            };
            let outcome = if args.final_solve {
                procedure2_extended(&inst, &limits, &kopt, &opts)?
            } else {
                procedure2(&inst, &limits, &kopt, &opts)?
            };
            write_stage_logs(&args.out, &outcome.stage_logs)?;
            let metrics = evaluate(&outcome.schedule, &inst)
                .map_err(|e| CliError::Backend(e.to_string()))?;
            write_schedule_files(&args.out, &inst, &outcome.schedule, &metrics)?;
            print_metrics_line(&metrics, inst.patients.len());
            report_bounds(&args.out, &inst, outcome.v1, &outcome.v2, Some(outcome.phi3), 60.0)?;
        }
        _ => unreachable!("clap restricts --stage to 1..=3"),
    }
    println!("outputs in {}", args.out.display());
    Ok(())
}

/// Exhaustive reference run for tiny instances: same output files,
/// no stage logs (the oracle is not the staged chain).
fn solve_with_oracle(args: &SolveArgs, inst: &Instance) -> Result<(), CliError> {
    let optimum = brute_force_lexico(inst).map_err(|e| CliError::Backend(e.to_string()))?;
    if args.stage == 1 {
        write_stage_logs(&args.out, &[])?;
        println!("v1 = {} (optimal)", optimum.v1);
        return Ok(());
    }
    let metrics =
        evaluate(&optimum.schedule, inst).map_err(|e| CliError::Backend(e.to_string()))?;
    write_stage_logs(&args.out, &[])?;
    write_schedule_files(&args.out, inst, &optimum.schedule, &metrics)?;
    print_metrics_line(&metrics, inst.patients.len());
    if args.stage == 3 {
        report_bounds(&args.out, inst, optimum.v1, &optimum.v2, Some(optimum.phi3), 60.0)?;
    }
    println!("outputs in {}", args.out.display());
    Ok(())
}

fn print_metrics_line(metrics: &MetricsRecord, total: usize) {
    println!(
        "treated {}/{}, wait sum {}, chairs {}",
        metrics.phi1, total, metrics.phi2_total, metrics.phi3
    );
}

fn write_stage_logs(dir: &Path, logs: &[StageLog]) -> Result<(), CliError> {
    let mut text = String::new();
    for log in logs {
        text.push_str(&serde_json::to_string(log).expect("stage logs serialise"));
        text.push('\n');
    }
    write_file(&dir.join("stages.jsonl"), &text)?;
    for log in logs {
        let day = log.day.map(|d| format!(" day {d}")).unwrap_or_default();
        let objective = log
            .objective
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_owned());
        println!(
            "[{}{}] {} objective {} in {:.2}s",
            log.stage, day, log.status, objective, log.runtime
        );
    }
    Ok(())
}

fn write_schedule_files(
    dir: &Path,
    inst: &Instance,
    schedule: &CompleteSchedule,
    metrics: &MetricsRecord,
) -> Result<(), CliError> {
    write_file(&dir.join("schedule.json"), &emit(schedule, metrics, inst, EmitFormat::Json))?;
    write_file(&dir.join("schedule.csv"), &emit(schedule, metrics, inst, EmitFormat::Csv))?;
    write_file(&dir.join("gantt.txt"), &emit(schedule, metrics, inst, EmitFormat::GanttText))?;
    let mut metrics_json =
        serde_json::to_string_pretty(metrics).expect("metrics serialise");
    metrics_json.push('\n');
    write_file(&dir.join("metrics.json"), &metrics_json)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

/// Compute trivial/UB1/UB2 for `(v1, v2)`, print the comparison row,
/// and write bounds.json. `phi3` adds the achieved value and its gap
/// to UB2.
fn report_bounds(
    dir: &Path,
    inst: &Instance,
    v1: usize,
    v2: &[usize],
    phi3: Option<usize>,
    time_limit: f64,
) -> Result<(), CliError> {
    let trivial = trivial_bound(inst);
    let u1 = ub1_limited(inst, time_limit);
    let u2 = match ub2_limited(inst, v1, v2, time_limit) {
        Ok(result) => Some(result),
        Err(BoundError::Inconsistent { .. }) if phi3.is_some() => None,
        Err(e) => return Err(e.into()),
    };

    let describe = |r: &BoundResult| {
        format!(
            "{} ({}, {:.2}s)",
            r.value,
            serde_json::to_value(r.status)
                .expect("status serialises")
                .as_str()
                .expect("status is a string")
                .to_owned(),
            r.runtime
        )
    };
    let ub2_text = u2
        .as_ref()
        .map(describe)
        .unwrap_or_else(|| "inconsistent".to_owned());
    println!("bounds: trivial {}, UB1 {}, UB2 {ub2_text}", trivial.value, describe(&u1));

    let gap = match (phi3, &u2) {
        (Some(chairs), Some(bound)) if bound.value > 0 => {
            Some(100.0 * (bound.value as f64 - chairs as f64) / bound.value as f64)
        }
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    if let (Some(chairs), Some(gap)) = (phi3, gap) {
        println!("chairs {chairs}, gap to UB2 {gap:.2}%");
    }

    let doc = serde_json::json!({
        "v1": v1,
        "v2": v2,
        "trivial": trivial,
        "ub1": u1,
        "ub2": u2,
        "phi3": phi3,
        "gap_to_ub2_percent": gap,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("bounds serialise");
    text.push('\n');
    write_file(&dir.join("bounds.json"), &text)
}

fn cmd_bound(args: &BoundArgs) -> Result<(), CliError> {
    if args.backend == Backend::Oracle {
        return Err(CliError::Usage(
            "the oracle backend applies to `solve` only; bounds use internal models".to_owned(),
        ));
    }
    if !(args.time_limit.is_finite() && args.time_limit > 0.0) {
        return Err(CliError::Usage("--time-limit must be positive".to_owned()));
    }
    let inst = load_checked(&args.instance)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", args.out.display())))?;

    let (v1, v2) = resolve_levels(
        &inst,
        args.v1,
        args.v2.as_ref(),
        &args.limits,
        &solve_options(&args.backend, 0),
    )?;
    report_bounds(&args.out, &inst, v1, &v2, None, args.time_limit)
}

/// Fill in missing `(v1, v2)` levels by running the scheduling chain;
/// explicitly given values win.
fn resolve_levels(
    inst: &Instance,
    v1: Option<usize>,
    v2: Option<&DayValues>,
    limits: &StageLimits,
    opts: &SolveOptions,
) -> Result<(usize, Vec<usize>), CliError> {
    if let Some(days) = v2 {
        if days.0.len() != inst.days {
            return Err(CliError::Usage(format!(
                "--v2 needs one value per day ({} given, {} days)",
                days.0.len(),
                inst.days
            )));
        }
    }
    match (v1, v2) {
        (Some(v1), Some(days)) => Ok((v1, days.0.clone())),
        (v1, v2) => {
            let p1 = procedure1(inst, limits, opts)?;
            Ok((
                v1.unwrap_or(p1.v1),
                v2.map(|d| d.0.clone()).unwrap_or(p1.v2),
            ))
        }
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let inst = load_checked(&args.instance)?;
    let text = fs::read_to_string(&args.schedule)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.schedule.display())))?;
    let schedule = parse_schedule_json(&text, &inst)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.schedule.display())))?;
    let violations = validate_schedule(&schedule, &inst);
    if violations.is_empty() {
        let metrics = evaluate(&schedule, &inst).expect("clean schedules evaluate");
        print_metrics_line(&metrics, inst.patients.len());
        println!("schedule is feasible");
        return Ok(());
    }
    let mut message = format!("{} violation(s):", violations.len());
    for v in &violations {
        message.push_str("\n  ");
        message.push_str(&v.to_string());
    }
    Err(CliError::Data(message))
}

fn cmd_export_mps(args: &ExportArgs) -> Result<(), CliError> {
    let inst = load_checked(&args.instance)?;
    let opts = SolveOptions::default();
    let model: MilpModel = match args.model.as_str() {
        "f1" => build_f1_complete(&inst).0,
        "af1" => build_af1(&inst).0,
        "ub1" => ub1_model(&inst).0,
        "af2" => {
            let v1 = match args.v1 {
                Some(v1) => v1,
                None => stage1(&inst, &SolveOptions { time_limit: args.limits.af1, ..opts })?.v1,
            };
            build_af2(&inst, v1).0
        }
        "af3" | "ub2" => {
            let (v1, v2) =
                resolve_levels(&inst, args.v1, args.v2.as_ref(), &args.limits, &opts)?;
            if args.model == "af3" {
                build_af3(&inst, v1, &v2).0
            } else {
                ub2_model(&inst, v1, &v2).0
            }
        }
        other => unreachable!("clap restricts --model, got {other}"),
    };
    chemoplan::write_model(&model, &args.out)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", args.out.display())))?;
    println!(
        "wrote {} ({} variables, {} constraints)",
        args.out.display(),
        model.kinds.len(),
        model.constraints.len()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_strings_override_only_named_keys() {
        let limits = parse_limits("af1=10,p3all=20").unwrap();
        assert_eq!(limits.af1, 10.0);
        assert_eq!(limits.p3_overall, 20.0);
        assert_eq!(limits.af2_day, StageLimits::default().af2_day);
        assert!(parse_limits("af9=10").is_err());
        assert!(parse_limits("af1=-3").is_err());
        assert!(parse_limits("af1").is_err());
        assert_eq!(parse_limits("").unwrap(), StageLimits::default());
    }

    #[test]
    fn radii_strings_need_exactly_four_budgets() {
        let radii = parse_radii("1,2,3,4").unwrap();
        assert_eq!((radii.k_x, radii.k_y, radii.k_z_bed, radii.k_z_chair), (1, 2, 3, 4));
        assert!(parse_radii("1,2,3").is_err());
        assert!(parse_radii("1,2,3,x").is_err());
    }

    #[test]
    fn backend_strings_cover_all_engines() {
        assert_eq!(parse_backend("internal").unwrap(), Backend::Internal);
        assert_eq!(parse_backend("oracle").unwrap(), Backend::Oracle);
        assert_eq!(
            parse_backend("external:cbc solve").unwrap(),
            Backend::External("cbc solve".to_owned())
        );
        assert!(parse_backend("external:").is_err());
        assert!(parse_backend("simplex").is_err());
    }
}
