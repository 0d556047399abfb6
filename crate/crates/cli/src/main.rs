use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ffdioph::commands::{self, FamilyArgs, GoodArgs, Outcome};
use ffdioph::{CliError, Format};

#[derive(Parser)]
#[command(name = "ffdioph", version, about = "Diophantine approximation over F_q((1/T))")]
struct Cli {
    /// Output format: json or csv.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Comma separated modulus coefficients (low degree first) for q = p^r.
    #[arg(long)]
    modulus: Option<String>,
    /// Expansion floor for quotient literals.
    #[arg(long, default_value_t = -200, allow_hyphen_values = true)]
    floor: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fraction expansion of one series.
    Cfrac {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 50)]
        max_terms: usize,
    },
    /// Best-approximation profile and exponent estimate.
    Exponent {
        #[command(flatten)]
        field: FieldArgs,
        /// Matrix file, or rows separated by ';' with entries separated by '|'.
        #[arg(long = "Y")]
        y: String,
        /// Entries separated by ';'.
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        tau_max: u32,
    },
    /// Solve a weighted Dirichlet system (matrix file, shift = weights).
    Dirichlet {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Good constants of every coordinate of a map on a ball.
    Goodcheck {
        #[arg(long)]
        map: PathBuf,
        /// Exponent in units of ln q, as a/b.
        #[arg(long)]
        alpha: String,
        #[arg(short = 'N', long = "res")]
        res: u32,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        radius: i64,
        /// Report depths where the ratio exceeds this constant.
        #[arg(long)]
        c: Option<String>,
        #[arg(long, default_value_t = 0)]
        nonplanar_trials: u32,
    },
    /// Transference checks.
    Transfer {
        #[command(subcommand)]
        which: Transfer,
    },
    /// Monte Carlo extremality run from a key = value config.
    Extremal {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct Family {
    #[command(flatten)]
    field: FieldArgs,
    /// Map file; the Veronese curve when absent.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value = "0")]
    theta: String,
    #[arg(long, default_value = "2")]
    omega: String,
    #[arg(long)]
    t: u32,
    #[arg(short = 'N', long = "res")]
    res: u32,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    v_radius: i64,
    #[arg(long, default_value = "1")]
    c: String,
    #[arg(long, default_value = "1")]
    kappa: String,
}

#[derive(Subcommand)]
enum Transfer {
    /// omega(X, theta) against the transpose.
    Bz {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "Y")]
        y: String,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        tau_max: u32,
        #[arg(long, default_value = "0")]
        tolerance: String,
    },
    /// omega(y) = 1 iff omega(y^t) = 1.
    Dyson {
        #[command(flatten)]
        field: FieldArgs,
        /// Entries separated by ';'.
        #[arg(long)]
        y: String,
        #[arg(long)]
        tau_max: u32,
    },
    /// Exhaustive cell check of the intersection property.
    Intersection(Family),
    /// Ball collections and the contraction inequalities.
    Contraction(Family),
}

fn family_args(a: &Family) -> Result<FamilyArgs<'_>, CliError> {
    Ok(FamilyArgs {
        field: commands::field(a.field.q, a.field.modulus.as_deref())?,
        map: a.map.as_deref(),
        n: a.n,
        theta: &a.theta,
        omega: commands::rational(&a.omega)?,
        t: a.t,
        res: a.res,
        v_radius: a.v_radius,
        c: commands::rational(&a.c)?,
        kappa: commands::rational(&a.kappa)?,
    })
}

fn run(cli: &Cli) -> Result<(Outcome, Format), CliError> {
    let fmt = cli.format.unwrap_or(Format::Json);
    let fld = |a: &FieldArgs| commands::field(a.q, a.modulus.as_deref());
    let out = match &cli.cmd {
        Cmd::Cfrac { field, y, max_terms } => commands::cfrac(&fld(field)?, y, *max_terms, field.floor)?,
        Cmd::Exponent { field, y, theta, tau_max } => {
            commands::exponent(&fld(field)?, y, theta.as_deref(), *tau_max, field.floor)?
        }
        Cmd::Dirichlet { instance } => commands::dirichlet(instance)?,
        Cmd::Goodcheck { map, alpha, res, radius, c, nonplanar_trials } => commands::goodcheck(&GoodArgs {
            map,
            kappa: commands::rational(alpha)?,
            res: *res,
            radius: *radius,
            c: c.as_deref().map(commands::rational).transpose()?,
            trials: *nonplanar_trials,
            seed: cli.seed,
        })?,
        Cmd::Transfer { which } => match which {
            Transfer::Bz { field, y, theta, tau_max, tolerance } => {
                commands::bz(&fld(field)?, y, theta, *tau_max, &commands::rational(tolerance)?, field.floor)?
            }
            Transfer::Dyson { field, y, tau_max } => commands::dyson(&fld(field)?, y, *tau_max, field.floor)?,
            Transfer::Intersection(a) => commands::intersection(&family_args(a)?)?,
            Transfer::Contraction(a) => commands::contraction(&family_args(a)?)?,
        },
        Cmd::Extremal { config } => return commands::extremal(config, cli.seed, cli.format),
    };
    Ok((out, fmt))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, fmt)) => {
            print!("{}", out.render(fmt));
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("ffdioph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
