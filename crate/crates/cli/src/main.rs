use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kzb_cli::checks::Family;
use kzb_cli::config::{self, ConfigError, Experiment};
use kzb_cli::report::Status;

/// Numerical checks of Bethe ansatz norms, eigenfunctions and Weyl
/// symmetry for KZB-type Hamiltonians.
#[derive(Parser, Debug)]
#[command(name = "kzb", version)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Overrides the config seed for the Newton starts and samples.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Relative tolerance of floating comparisons (default 1e-8).
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Print the checks of the chosen command (all commands if none) and exit.
    #[arg(long, global = true)]
    list_checks: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Root system data and structural checks.
    Roots,
    /// Shapovalov determinant ratios over generic highest weights.
    Shapovalov,
    /// Critical points, Bethe vector norms and Hessians.
    Bethe,
    /// Eigenvector residuals and eigenvalues of the Hamiltonians.
    Eigen,
    /// Scattering matrices and Weyl invariance of the ξ-form.
    Weyl,
    /// Jack polynomials from eigenfunctions and their norms.
    Jack,
    /// Elliptic to trigonometric limits.
    Limits,
    /// Every family the config has inputs for.
    All,
}

impl Command {
    fn family(self) -> Option<Family> {
        match self {
            Command::Roots => Some(Family::Roots),
            Command::Shapovalov => Some(Family::Shapovalov),
            Command::Bethe => Some(Family::Bethe),
            Command::Eigen => Some(Family::Eigen),
            Command::Weyl => Some(Family::Weyl),
            Command::Jack => Some(Family::Jack),
            Command::Limits => Some(Family::Limits),
            Command::All => None,
        }
    }

    fn name(self) -> &'static str {
        self.family().map_or("all", Family::name)
    }
}

fn list_checks(only: Option<Family>) {
    for f in Family::ALL.into_iter().filter(|f| only.is_none_or(|o| o == *f)) {
        for (name, what) in f.checks() {
            println!("{name:<28} {what}");
        }
    }
}

fn load(cli: &Cli) -> Result<Experiment, ConfigError> {
    let path = cli.config.as_ref().ok_or_else(|| ConfigError("--config is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    let mut file = config::parse(&text)?;
    if let Some(s) = cli.seed {
        file.seed = s;
    }
    if let Some(t) = cli.tolerance {
        file.tolerance = Some(t);
    }
    Experiment::from_file(file)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        list_checks(cli.command.and_then(Command::family));
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a command is required (see --help)");
        return ExitCode::from(2);
    };
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: cannot start {n} threads");
            return ExitCode::from(2);
        }
    }
    let result = load(&cli).and_then(|ex| {
        let families = kzb_cli::select(&ex, command.family())?;
        let tol = ex.file.tolerance.unwrap_or(kzb_cli::DEFAULT_TOLERANCE);
        kzb_cli::run(&ex, command.name(), &families, tol)
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for c in &report.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        };
        let err = c.rel_err.map_or(String::new(), |e| format!(" rel_err {e:.2e}"));
        eprintln!("{tag:<12} {}{err}{}", c.name, if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) });
    }
    let s = &report.summary;
    eprintln!("{} pass, {} fail, {} inconclusive", s.pass, s.fail, s.inconclusive);
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, json + "\n") {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
