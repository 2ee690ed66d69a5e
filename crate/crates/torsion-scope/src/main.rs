use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use torsion_scope::commands::{self, parse_case, timed, CmArgs, Verdict};
use torsion_scope::{CliError, GroupSource, Limits, RunRecord, Theorem};
use torsion_scope_core::CaseFlag;

/// Degrees of closed points on X1(l^k) across an isogeny class, from l-adic
/// image generators.
///
/// Exit codes: 0 success, 1 verification failed, 2 usage or input error,
/// 3 closure or ambient cap exceeded. TORSION_SCOPE_CAP overrides the caps,
/// either as an element count or as "closure=N,ambient=M".
#[derive(Parser, Debug)]
#[command(name = "torsion-scope", version)]
struct Cli {
    /// Print a JSON run record (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Print aligned text instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GroupArgs {
    /// Level N = l^k of --gens, or the level to build a builtin at.
    #[arg(long)]
    level: Option<u64>,
    /// Generators "a,b,c,d;a,b,c,d" (row-major). Empty means the trivial group.
    #[arg(long, allow_hyphen_values = true)]
    gens: Option<String>,
    /// Catalog label or builtin name.
    #[arg(long)]
    label: Option<String>,
    /// JSON catalog to look labels up in.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

impl GroupArgs {
    fn source(&self) -> GroupSource {
        GroupSource {
            level: self.level,
            gens: self.gens.clone(),
            label: self.label.clone(),
            catalog: self.catalog.clone(),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, index, d, -I and level data of a group.
    GroupInfo {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "l")]
        ell: Option<u32>,
    },
    /// Closed point degrees on X1(N) for one curve with this image.
    Degrees {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "l")]
        ell: Option<u32>,
        /// Torsion order N, a power of l (defaults to the level).
        #[arg(long)]
        order: Option<u64>,
    },
    /// Degrees on X1(l^k) over curves l^r-isogenous to the image curve.
    Scan {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "l")]
        ell: Option<u32>,
        #[arg(long)]
        k: u32,
        /// Largest isogeny exponent r (default 2k + 4, clamped by the ambient cap).
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Check a divisibility table against a scan, or the CM table against
    /// class numbers.
    Verify {
        /// Table: 1.3 headline, 5.1 primes >= 5, 6.1 prime 3, 7.1 prime 2, 9 CM.
        #[arg(long, value_parser = |s: &str| s.parse::<Theorem>())]
        theorem: Theorem,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "l")]
        ell: Option<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        max_r: Option<u32>,
        /// generic, cyclic-25, no-cyclic-25, mod7-trivial, mod7-cubic,
        /// exceptional-j or image:LABEL.
        #[arg(long, value_parser = parse_case)]
        case: Option<CaseFlag>,
        #[arg(long, allow_hyphen_values = true)]
        delta_k: Option<i64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Class numbers and least CM torsion degrees.
    Cm {
        /// Fundamental discriminant, negative.
        #[arg(long, allow_hyphen_values = true)]
        delta_k: i64,
        /// Conductor of an order to report the class number of.
        #[arg(long)]
        cond: Option<u64>,
        #[arg(long = "l")]
        ell: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        /// Class number of the field, instead of counting reduced forms.
        #[arg(long)]
        h_k: Option<u64>,
    },
}

fn run(cli: &Cli, limits: &Limits) -> Result<(RunRecord, bool), CliError> {
    let plain = |r: Result<RunRecord, CliError>| r.map(|rec| (rec, true));
    match &cli.command {
        Command::GroupInfo { group, ell } => plain(timed(|| {
            commands::group_info(&group.source(), *ell, limits)
        })),
        Command::Degrees { group, ell, order } => plain(timed(|| {
            commands::degrees(&group.source(), *ell, *order, limits)
        })),
        Command::Scan {
            group,
            ell,
            k,
            max_r,
        } => plain(timed(|| {
            commands::scan(&group.source(), *ell, *k, *max_r, limits)
        })),
        Command::Verify {
            theorem,
            group,
            ell,
            k,
            max_r,
            case,
            delta_k,
            n,
        } => {
            let cm = CmArgs {
                delta_k: *delta_k,
                ell: ell.map(u64::from),
                n: *n,
                ..CmArgs::default()
            };
            let mut passed = false;
            let record = timed(|| {
                let Verdict { record, passed: p } = commands::verify(
                    *theorem,
                    &group.source(),
                    *ell,
                    *k,
                    *max_r,
                    case.clone(),
                    &cm,
                    limits,
                )?;
                passed = p;
                Ok(record)
            })?;
            Ok((record, passed))
        }
        Command::Cm {
            delta_k,
            cond,
            ell,
            n,
            h_k,
        } => plain(timed(|| {
            commands::cm(&CmArgs {
                delta_k: Some(*delta_k),
                cond: *cond,
                ell: *ell,
                n: *n,
                h_k: *h_k,
            })
        })),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = Limits::from_env().and_then(|limits| run(&cli, &limits));
    match outcome {
        Ok((record, passed)) => {
            let text = if cli.table {
                commands::render_table(&record)
            } else {
                let json = serde_json::to_string_pretty(&record).expect("run record serializes");
                json + "\n"
            };
            // A closed pipe (e.g. `| head`) is not an error worth a panic.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
