use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cnzn_cli::cache::Cache;
use cnzn_cli::commands::{self, ConfigError, IndexingKind, PolicyKind, RunConfig};
use cnzn_cli::report::{render, verified, Format};
use num_rational::BigRational;
use serde_json::{json, Value};

const OK: u8 = 0;
const VERIFICATION_FAILED: u8 = 1;
const CONFIG_ERROR: u8 = 2;

/// Exact genus-0 data, P-matrix tables, graph-sum potentials and anomaly-equation checks for [C^n/Z_n].
#[derive(Parser, Debug)]
#[command(name = "cnzn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Genus-zero series and their identity checks.
    Genus0(Common),
    /// P-matrix table and its checks.
    Pmatrix(Common),
    /// A potential F_{g,m} as a ring element.
    Potential(Common),
    /// The full identity suite short of the anomaly equation.
    VerifyIdentities(Common),
    /// The anomaly equation at genus g.
    VerifyHae(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Orbifold dimension, at least 3.
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    n: u32,
    /// Truncation order in x (default 10n).
    #[arg(long = "N")]
    big_n: Option<i64>,
    /// Genus.
    #[arg(long, default_value_t = 2)]
    g: u32,
    /// Depth of the P-matrix table (default 3g-2, at least 1).
    #[arg(long)]
    k_max: Option<usize>,
    /// How the integration constants are fixed.
    #[arg(long, value_enum, default_value_t = PolicyKind::Symplectic)]
    policy: PolicyKind,
    /// Comma-separated rationals: free odd constants (symplectic) or all constants (custom).
    #[arg(long, value_delimiter = ',')]
    constants: Vec<BigRational>,
    /// The constant P~^0_{0,j}.
    #[arg(long, default_value = "1")]
    normalization: BigRational,
    /// Which P-matrix level feeds the vertex translation terms.
    #[arg(long, value_enum, default_value_t = IndexingKind::Shifted)]
    indexing: IndexingKind,
    /// Comma-separated insertion indices for `potential`.
    #[arg(long, value_delimiter = ',')]
    insertions: Vec<u32>,
    /// Seed for randomized spot checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            n: self.n,
            big_n: self.big_n.unwrap_or(10 * self.n as i64),
            g: self.g,
            k_max: self.k_max.unwrap_or_else(|| (3 * self.g as usize).saturating_sub(2).max(1)),
            policy: self.policy,
            constants: self.constants.clone(),
            normalization: self.normalization.clone(),
            indexing: self.indexing,
            insertions: self.insertions.clone(),
            seed: self.seed,
        }
    }
}

fn exit_code_for(e: &cnzn::Error) -> u8 {
    match e {
        cnzn::Error::InvalidN(_) | cnzn::Error::InvalidGenus(_) | cnzn::Error::Precision { .. } => CONFIG_ERROR,
        _ => VERIFICATION_FAILED,
    }
}

fn run(command: &Command, cfg: &RunConfig, cache: Option<&Cache>) -> Result<Value, cnzn::Error> {
    let name = match command {
        Command::Genus0(_) => "genus0",
        Command::Pmatrix(_) => "pmatrix",
        Command::Potential(_) => "potential",
        Command::VerifyIdentities(_) => "verify-identities",
        Command::VerifyHae(_) => "verify-hae",
    };
    let key = json!({ "command": name, "config": cfg.to_json(), "version": env!("CARGO_PKG_VERSION") });
    if let Some(hit) = cache.and_then(|c| c.get("report", &key)) {
        return Ok(hit);
    }
    let (report, table) = match command {
        Command::Genus0(_) => (commands::genus0(cfg)?, None),
        Command::Pmatrix(_) => {
            let (r, t) = commands::pmatrix(cfg)?;
            (r, Some(t))
        }
        Command::Potential(_) => (commands::potential(cfg)?, None),
        Command::VerifyIdentities(_) => (commands::verify_identities(cfg)?, None),
        Command::VerifyHae(_) => (commands::verify_hae_cmd(cfg)?, None),
    };
    let value = report.to_json();
    if let Some(c) = cache {
        // A failed cache write only costs recomputation later.
        if let Err(e) = c.put("report", &key, &value) {
            eprintln!("warning: cache write to {} failed: {e}", c.dir().display());
        }
        if let Some(t) = table {
            if let Err(e) = c.put("table", &key, &t) {
                eprintln!("warning: cache write to {} failed: {e}", c.dir().display());
            }
        }
    }
    Ok(value)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Genus0(c) | Command::Pmatrix(c) | Command::Potential(c) | Command::VerifyIdentities(c) | Command::VerifyHae(c) => c,
    };
    let cfg = common.config();
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(CONFIG_ERROR);
    }
    if let Some(j) = common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {}", ConfigError::Other(e.to_string()));
            return ExitCode::from(CONFIG_ERROR);
        }
    }
    let cache = Cache::from_env();
    match run(&cli.command, &cfg, cache.as_ref()) {
        Ok(report) => {
            print!("{}", render(&report, common.format));
            ExitCode::from(if verified(&report) { OK } else { VERIFICATION_FAILED })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
