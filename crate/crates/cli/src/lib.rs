//! `constdepth`: build, measure and verify constant-depth circuits, and run
//! the exact discrete-log pipeline.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use constdepth::circuit::{json, normalize_to_gadget_form};
use constdepth::dlp::{make_instance, solve_dlp, SolveMode};
use constdepth::verify::{
    exhaustive_verify, scaling_table, Family, Form, ScalingFamily, SimMode, TRule,
    VerificationReport,
};
use constdepth::Error;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "constdepth",
    version,
    about = "Constant-depth fan-out circuits: build, metrics, verify, dlp"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build one circuit and write it as JSON.
    Build(FamilyArgs),
    /// Size, depth and bound ratio for each n.
    Metrics(FamilyArgs),
    /// Exhaustively check every input (and branch) against brute force.
    Verify(FamilyArgs),
    /// Solve a discrete logarithm modulo a safe prime.
    Dlp(DlpArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Comma-separated modes: gate|gadget (form), branches|coherent
    /// (simulation), sample|all-branches (dlp).
    #[arg(long, value_delimiter = ',')]
    mode: Vec<Mode>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep measured elapsed_ms in verify output. Off by default so that
    /// identical command lines give identical bytes.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// or, and, or_exp, or_blocked, parity, exact, th, th_exactsum, count.
    #[arg(long)]
    family: String,
    /// Width: `6`, `1..6` (inclusive) or `4,8,16`.
    #[arg(long)]
    n: String,
    /// Threshold or exact weight: `5`, `n/2`, `3n/4`.
    #[arg(long)]
    t: Option<String>,
    /// Counting level (threshold and counting families).
    #[arg(long)]
    l: Option<usize>,
    /// Iteration count of the blocked OR.
    #[arg(long, default_value_t = 2)]
    c: usize,
    /// Parity input mask; all inputs when absent.
    #[arg(long)]
    mask: Option<u64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct DlpArgs {
    #[arg(long)]
    q: u64,
    /// Generator; the smallest one when absent.
    #[arg(long)]
    gq: Option<u64>,
    #[arg(long)]
    x: u64,
    /// Same as `--mode all-branches`.
    #[arg(long)]
    all_branches: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Gate,
    Gadget,
    Branches,
    Coherent,
    Sample,
    AllBranches,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// A failed command and its exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Invariant(_)) {
            1
        } else {
            2
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_n(s: &str) -> CliResult<Vec<usize>> {
    let bad = || usage(format!("invalid --n `{s}`: expected 6, 1..6 or 4,8,16"));
    let ns: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        );
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?
    };
    if ns.is_empty() {
        return Err(bad());
    }
    Ok(ns)
}

const FAMILIES: &str = "or, and, or_exp, or_blocked, parity, exact, th, th_exactsum, count";

impl FamilyArgs {
    fn t_rule(&self) -> CliResult<TRule> {
        let t = self
            .t
            .as_deref()
            .ok_or_else(|| usage(format!("--t is required for family {}", self.family)))?;
        TRule::parse(t).ok_or_else(|| usage(format!("invalid --t `{t}`")))
    }

    fn family(&self, n: usize) -> CliResult<Family> {
        Ok(match self.family.as_str() {
            "or" => Family::Or,
            "and" => Family::And,
            "or_exp" | "or-exp" => Family::OrExp,
            "or_blocked" | "or-blocked" => Family::OrBlocked { c: self.c },
            "parity" => Family::Parity { mask: self.mask },
            "exact" | "ex" => Family::Exact {
                t: self.t_rule()?.of(n),
            },
            "th" | "threshold" => Family::ThresholdCombined {
                t: self.t_rule()?.of(n),
                l: self.l,
            },
            "th_exactsum" | "th-exactsum" => Family::ThresholdExactsum {
                t: self.t_rule()?.of(n),
            },
            "count" | "counting" => Family::Counting { l: self.l },
            other => {
                return Err(usage(format!(
                    "unknown family `{other}`; expected one of: {FAMILIES}"
                )))
            }
        })
    }

    fn scaling_family(&self) -> CliResult<ScalingFamily> {
        Ok(match self.family.as_str() {
            "or" => ScalingFamily::Or,
            "and" => ScalingFamily::And,
            "or_exp" | "or-exp" => ScalingFamily::OrExp,
            "or_blocked" | "or-blocked" => ScalingFamily::OrBlocked { c: self.c },
            "parity" => ScalingFamily::Parity,
            "exact" | "ex" => ScalingFamily::Exact { t: self.t_rule()? },
            "th" | "threshold" if self.l.is_none() => {
                ScalingFamily::ThresholdCombined { t: self.t_rule()? }
            }
            "th" | "threshold" => {
                return Err(usage(
                    "metrics for th always use the chosen level; drop --l",
                ))
            }
            "th_exactsum" | "th-exactsum" => ScalingFamily::ThresholdExactsum { t: self.t_rule()? },
            "count" | "counting" if self.l.is_none() => ScalingFamily::Counting,
            "count" | "counting" => return Err(usage("metrics for count use every bit; drop --l")),
            other => {
                return Err(usage(format!(
                    "unknown family `{other}`; expected one of: {FAMILIES}"
                )))
            }
        })
    }
}

fn form(modes: &[Mode]) -> Form {
    if modes.contains(&Mode::Gate) {
        Form::Gate
    } else {
        Form::Gadget
    }
}

fn emit(common: &Common, data: &str) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, data).map_err(|e| usage(format!("cannot write {path}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| usage(e.to_string()))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn build(args: &FamilyArgs) -> CliResult<u8> {
    if args.common.format != Format::Json {
        return Err(usage("build writes circuits as JSON only"));
    }
    let ns = parse_n(&args.n)?;
    let [n] = ns[..] else {
        return Err(usage("build takes a single --n"));
    };
    let mut c = args.family(n)?.build(n)?;
    if form(&args.common.mode) == Form::Gadget {
        c = normalize_to_gadget_form(&c);
    }
    let mut text = json::to_json(&c);
    text.push('\n');
    emit(&args.common, &text)?;
    Ok(0)
}

fn metrics(args: &FamilyArgs) -> CliResult<u8> {
    let table = scaling_table(args.scaling_family()?, &parse_n(&args.n)?)?;
    if !table.depth_constant {
        eprintln!("note: depth varies across n");
    }
    if table.ratio_flag {
        eprintln!(
            "note: size/bound ratio spread {:.3} exceeds 2",
            table.ratio_spread
        );
    }
    let text = match args.common.format {
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Csv => table.to_csv()?,
    };
    emit(&args.common, &text)?;
    Ok(0)
}

fn verify(args: &FamilyArgs) -> CliResult<u8> {
    let modes = &args.common.mode;
    let sim = if modes.contains(&Mode::Branches) {
        SimMode::Branches
    } else {
        SimMode::Coherent
    };
    let mut reports: Vec<VerificationReport> = parse_n(&args.n)?
        .into_iter()
        .map(|n| Ok(exhaustive_verify(&args.family(n)?, n, form(modes), sim)?))
        .collect::<CliResult<_>>()?;
    for r in &reports {
        eprintln!(
            "{} n={} inputs={} branches={} {:.3}ms {}",
            r.family,
            r.n,
            r.inputs_tested,
            r.branches_tested,
            r.elapsed_ms,
            if r.passed() { "pass" } else { "FAIL" }
        );
    }
    if !args.common.timing {
        reports.iter_mut().for_each(|r| r.elapsed_ms = 0.0);
    }
    let (text, code) = render_reports(&reports, args.common.format)?;
    emit(&args.common, &text)?;
    Ok(code)
}

/// Serializes verification reports and returns the exit code: 1 when any
/// report has failures, else 0.
pub fn render_reports(
    reports: &[VerificationReport],
    format: Format,
) -> Result<(String, u8), Error> {
    let text = match format {
        Format::Json => pretty(&serde_json::to_value(reports).expect("reports serialize")),
        Format::Csv => {
            let mut s = String::new();
            for (i, r) in reports.iter().enumerate() {
                let csv = r.to_csv()?;
                // Keep a single header row.
                s.push_str(if i == 0 {
                    &csv
                } else {
                    csv.split_once('\n').map_or("", |x| x.1)
                });
            }
            s
        }
    };
    Ok((text, u8::from(reports.iter().any(|r| !r.passed()))))
}

fn dlp(args: &DlpArgs) -> CliResult<u8> {
    if args.common.format != Format::Json {
        return Err(usage("dlp writes JSON only"));
    }
    let all = args.all_branches || args.common.mode.contains(&Mode::AllBranches);
    let mode = if all {
        SolveMode::AllBranches
    } else {
        SolveMode::Sample
    };
    let inst = make_instance(args.q, args.gq)?;
    let out = solve_dlp(&inst, args.x, args.common.seed, mode)?;
    eprintln!("l_q={}", out.l_q);
    let branches: Vec<serde_json::Value> = out
        .branches
        .iter()
        .map(|b| json!({"s": b.s, "v": b.v, "probability": b.probability, "l_q": b.l_q}))
        .collect();
    let value = json!({
        "instance": inst,
        "x_q": args.x,
        "mode": if all { "all_branches" } else { "sample" },
        "seed": args.common.seed,
        "l_q": out.l_q,
        "branches": branches,
        "pruned_probability": out.pruned_probability,
    });
    emit(&args.common, &pretty(&value))?;
    Ok(0)
}

/// Runs one command line (program name first) and returns its exit code.
pub fn dispatch<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Build(a) => build(a),
        Command::Metrics(a) => metrics(a),
        Command::Verify(a) => verify(a),
        Command::Dlp(a) => dlp(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            if f.code == 2 {
                eprintln!("run `constdepth --help` for usage");
            }
            f.code
        }
    }
}
