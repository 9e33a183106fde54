mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use exscaf_core::oracle::{verify, OracleReport};
use exscaf_core::planner::{example_family, gms_verdict, independent_leads, plan};
use exscaf_core::ramification::{check_ram_inequalities, RamSequence, ShiftTables};
use exscaf_core::{Error, ExtRational, PlanMode, PlanReport, Rat, TowerParams, Variant};
use serde::Serialize;

use exscaf_core::report::{ConvertReport, Envelope, VerdictReport};
use report::Render;

#[derive(Parser, Debug)]
#[command(name = "exscaf", version, about = "Scaffold planning and tower verification for extraspecial p-extensions")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Working precision for series inverses in explicit towers.
    #[arg(long, global = true)]
    prec: Option<i64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the scaffold hypotheses for explicit tower parameters.
    Plan(PlanArgs),
    /// Module-structure verdict from a scaffold precision and u_1.
    Verdict(VerdictArgs),
    /// Plan the family with u_1 = .. = u_2n = u and u_N = t p^(2n) + u.
    Example(FamilyArgs),
    /// Ramification number conversions and shift tables.
    #[command(subcommand)]
    Ram(RamCommand),
    /// Build an explicit tower in characteristic p and measure it.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    /// Absolute ramification index: a positive integer, or inf.
    #[arg(long, default_value = "inf")]
    e0: ExtRational,
    /// u_1 = r, the pole order of c.
    #[arg(long)]
    r: i64,
    /// Pole orders m_1, .., m_N of the omega_i.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    m: Vec<i64>,
    /// Leading coefficients of the omega_i, e.g. 1,g,1.
    #[arg(long, value_delimiter = ',')]
    leads: Option<Vec<String>>,
    /// Residue field degree d, q = p^d (default 2n).
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, default_value = "full")]
    mode: PlanMode,
}

#[derive(Args, Debug)]
struct VerdictArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    /// Scaffold precision.
    #[arg(long)]
    c: i128,
    #[arg(long)]
    u1: i128,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    u: i64,
    #[arg(long)]
    t: i64,
    #[arg(long)]
    variant: Variant,
}

#[derive(Subcommand, Debug)]
enum RamCommand {
    /// Convert lower numbers to upper numbers or back.
    Convert {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', conflicts_with = "upper", required_unless_present = "upper")]
        lower: Option<Vec<Rat>>,
        #[arg(long, value_delimiter = ',')]
        upper: Option<Vec<Rat>>,
    },
    /// Tabulate b(s) and its shifted inverse a(t) on {0, .., p^n - 1}.
    Tables {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        b: Vec<i64>,
    },
}

#[derive(Subcommand, Debug)]
enum OracleCommand {
    /// Verify the family tower with u_1 = .. = u_2n = u and m_N = t, or a
    /// tower with explicit pole orders and leading coefficients.
    Verify(OracleArgs),
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    n: usize,
    /// u_1, the pole order of c.
    #[arg(long)]
    u: i64,
    /// m_N for the family tower.
    #[arg(long, required_unless_present = "m", conflicts_with = "m")]
    t: Option<i64>,
    /// Explicit pole orders m_1, .., m_N.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    m: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    leads: Option<Vec<String>>,
    #[arg(long)]
    d: Option<u32>,
}

/// Exit status for a library error: 1 for malformed input, 2 for a failed
/// hypothesis or cross-check, 3 for insufficient precision.
fn error_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 1,
        Error::Hypothesis(_) | Error::Consistency(_) => 2,
        Error::InsufficientPrecision(_) => 3,
    }
}

fn emit<T: Serialize + Render>(output: Output, command: &str, report: T) -> Result<(), Error> {
    match output {
        Output::Json => {
            let env = Envelope::new(command, report);
            println!("{}", serde_json::to_string_pretty(&env).expect("reports serialize"));
        }
        Output::Text => print!("{}", report.render()),
    }
    Ok(())
}

fn plan_code(r: &PlanReport) -> u8 {
    if r.certified() {
        0
    } else {
        2
    }
}

fn oracle_code(r: &OracleReport) -> u8 {
    if r.pass {
        0
    } else {
        2
    }
}

fn default_leads(p: u64, n: usize, leads: Option<Vec<String>>) -> Result<Vec<String>, Error> {
    match leads {
        Some(l) => Ok(l),
        None if n > 0 => independent_leads(p, n),
        None => Err(Error::InvalidInput("n must be at least 1".into())),
    }
}

fn oracle_params(a: OracleArgs) -> Result<TowerParams, Error> {
    let leads = default_leads(a.p, a.n, a.leads)?;
    let m = match (a.m, a.t) {
        (Some(m), _) => m,
        (None, Some(t)) => {
            let mut m = vec![0; 2 * a.n + 1];
            m[2 * a.n] = t;
            m
        }
        (None, None) => unreachable!("clap requires --t or --m"),
    };
    let d = a.d.unwrap_or(2 * a.n as u32);
    TowerParams::new(a.p, a.n, a.variant, ExtRational::Infinity, a.u, m, leads, d)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let out = cli.output;
    match cli.command {
        Command::Plan(a) => {
            let d = a.d.unwrap_or(2 * a.n as u32);
            let leads = default_leads(a.p, a.n, a.leads)?;
            let params = TowerParams::new(a.p, a.n, a.variant, a.e0, a.r, a.m, leads, d)?;
            let r = plan(&params, a.mode)?;
            let code = plan_code(&r);
            emit(out, "plan", r)?;
            Ok(code)
        }
        Command::Verdict(a) => {
            let verdict = gms_verdict(a.p, a.n, a.c, a.u1)?;
            emit(out, "verdict", VerdictReport { p: a.p, n: a.n, cfrak: a.c, u1: a.u1, verdict })?;
            Ok(0)
        }
        Command::Example(a) => {
            let r = example_family(a.p, a.n, a.u, a.t, a.variant)?;
            let code = plan_code(&r);
            emit(out, "example", r)?;
            Ok(code)
        }
        Command::Ram(RamCommand::Convert { p, lower, upper }) => {
            let sequence = match (lower, upper) {
                (Some(b), _) => RamSequence::from_lower(p, b)?,
                (None, Some(u)) => RamSequence::from_upper(p, u)?,
                (None, None) => unreachable!("clap requires one of the sequences"),
            };
            let checks = check_ram_inequalities(p, &sequence.lower, &sequence.upper)?;
            emit(out, "ram-convert", ConvertReport { sequence, checks })?;
            Ok(0)
        }
        Command::Ram(RamCommand::Tables { p, n, b }) => {
            let tables = ShiftTables::build(p, n, &b)?;
            emit(out, "ram-tables", tables)?;
            Ok(0)
        }
        Command::Oracle(OracleCommand::Verify(a)) => {
            let params = oracle_params(a)?;
            let r = verify(&params, cli.prec)?;
            let code = oracle_code(&r);
            emit(out, "oracle-verify", r)?;
            Ok(code)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(p) = cli.prec {
        if p <= 0 {
            eprintln!("error: --prec must be positive");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
