//! `keygraph` — connectivity thresholds and Monte Carlo experiments for
//! sensor networks secured by heterogeneous key predistribution.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use keygraph::montecarlo::{
    estimate, percolation_experiment, sweep_alpha, sweep_k1, trial_graphs, ExperimentConfig,
    SweepCell,
};
use keygraph::theory::{
    check_scaling, critical_k1, matched_alpha, matched_rho, verify_bounds, ChannelModel,
    NetworkProfile, RingRule,
};
use keygraph::Error;

use config::{parse_f64_list, parse_pair_list, parse_u64_list, FileConfig};
use report::{emit, fmt_prob, sweep_cell_rows, Manifest, SWEEP_HEADER};

const DEFAULT_TRIALS: u64 = 800;
const SEED_ENV: &str = "KEYGRAPH_SEED";

/// Ring pairs with mean 40 compared in the alpha sweep by default.
const EQUAL_MEAN_PAIRS: [(u64, u64); 4] = [(10, 70), (20, 60), (30, 50), (40, 40)];
/// Alternative set selectable with `--literal-pairs`; the (20, 50) entry has
/// mean 35, so the default set above keeps the means equal instead.
const LITERAL_PAIRS: [(u64, u64); 4] = [(10, 70), (20, 50), (30, 50), (40, 40)];

#[derive(Parser)]
#[command(
    name = "keygraph",
    version,
    about = "Secure-connectivity analysis of heterogeneous key predistribution networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed (precedence: flag, config file, KEYGRAPH_SEED, then 0)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Monte Carlo trials per cell (default 800)
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Worker threads for trial execution (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// JSON config file; explicit flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the first trial's secure graph as a sorted edge list (simulate)
    #[arg(long, global = true, value_name = "PATH")]
    dump_graph: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal smallest-ring-size k1 meeting the connectivity threshold
    Threshold(ThresholdArgs),
    /// Sweep k1 or alpha and estimate connectivity per cell (CSV)
    Sweep(SweepArgs),
    /// Edge-occupation experiment on fresh key graphs (CSV)
    Percolate(PercolateArgs),
    /// Scaling diagnostics and analytic bound checks for a profile
    Check(CheckArgs),
    /// Single connectivity estimate for one configuration (CSV)
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    pool: Option<u64>,
    /// Class mix, e.g. 0.5,0.5
    #[arg(long)]
    mu: Option<String>,
    /// Channel probability in (0, 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// Disk radius in (0, 0.5); converted via alpha = pi rho^2
    #[arg(long)]
    rho: Option<f64>,
    /// Ring rule k_i = k1 + offset_i, e.g. 0,5
    #[arg(long)]
    ring_offsets: Option<String>,
    /// Ring rule k_i = round(factor_i * k1), e.g. 1,1.5
    #[arg(long)]
    ring_factors: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep axis: k1 or alpha
    #[arg(long)]
    axis: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    pool: Option<u64>,
    #[arg(long)]
    mu: Option<String>,
    /// k1 grid: comma list or start:end:step (k1 axis)
    #[arg(long)]
    k1_values: Option<String>,
    /// Alpha grid: comma list or start:end:step
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    ring_offsets: Option<String>,
    #[arg(long)]
    ring_factors: Option<String>,
    /// Ring pairs k1:k2 per class pair, e.g. 10:70,40:40 (alpha axis)
    #[arg(long)]
    pairs: Option<String>,
    /// Use the literal pair set (10,70),(20,50),(30,50),(40,40)
    #[arg(long)]
    literal_pairs: bool,
    /// Also run the matched disk model against the same key graphs
    #[arg(long)]
    paired_disk: bool,
}

#[derive(Args)]
struct PercolateArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    pool: Option<u64>,
    #[arg(long)]
    mu: Option<String>,
    /// Explicit per-class ring sizes, e.g. 30 or 20,40
    #[arg(long)]
    rings: Option<String>,
    /// Edge-occupation probability grid
    #[arg(long)]
    alphas: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    pool: Option<u64>,
    #[arg(long)]
    mu: Option<String>,
    /// Explicit per-class ring sizes (misordered values are reported, not
    /// rejected)
    #[arg(long)]
    rings: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Pool growth requirement pool >= sigma * n (default 1)
    #[arg(long)]
    sigma: Option<f64>,
    /// Exponent for the combinatorial bound check (default 2)
    #[arg(long)]
    bound_exponent: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    pool: Option<u64>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    rings: Option<String>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    paired_disk: bool,
}

enum CliError {
    Usage(String),
    NoSolution(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        match error {
            Error::NoSolution => CliError::NoSolution(error.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(error: std::io::Error) -> Self {
        CliError::Io(error.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let code = error.exit_code();
            let _ = error.print();
            return ExitCode::from(code.clamp(0, 255) as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            eprintln!("usage: see 'keygraph --help' or 'keygraph <command> --help'");
            ExitCode::from(2)
        }
        Err(CliError::NoSolution(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
        Err(CliError::Io(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if let Some(threads) = cli.threads {
        // Ignore failure when a global pool already exists (tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(CliError::Usage)?,
        None => FileConfig::default(),
    };
    let seed = resolve_seed(cli.seed, &file)?;
    let trials = cli.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::Usage("trial count must be at least 1".into()));
    }

    let started = Instant::now();
    let (manifest, body, exit_code) = match &cli.command {
        Command::Threshold(args) => cmd_threshold(args, &file, seed)?,
        Command::Sweep(args) => cmd_sweep(args, &file, seed, trials)?,
        Command::Percolate(args) => cmd_percolate(args, &file, seed, trials)?,
        Command::Check(args) => cmd_check(args, &file, seed)?,
        Command::Simulate(args) => cmd_simulate(args, &file, seed, trials, cli.dump_graph.as_deref())?,
    };
    emit(cli.out.as_deref(), &manifest, started.elapsed(), &body)?;
    Ok(exit_code)
}

fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> Result<u64, CliError> {
    if let Some(seed) = flag.or(file.seed) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}='{text}' is not a valid seed"))),
        Err(_) => Ok(0),
    }
}

fn require<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing required value for {name} (flag or config file)")))
}

fn resolve_mu(flag: &Option<String>, file: &FileConfig) -> Result<Vec<f64>, CliError> {
    match flag {
        Some(text) => parse_f64_list(text, "--mu").map_err(CliError::Usage),
        None => require(file.mu.clone(), "--mu"),
    }
}

fn resolve_rings(flag: &Option<String>, file: &FileConfig) -> Result<Vec<u64>, CliError> {
    match flag {
        Some(text) => parse_u64_list(text, "--rings").map_err(CliError::Usage),
        None => require(file.rings.clone(), "--rings"),
    }
}

fn resolve_ring_rule(
    offsets: &Option<String>,
    factors: &Option<String>,
    file: &FileConfig,
) -> Result<RingRule, CliError> {
    if offsets.is_some() && factors.is_some() {
        return Err(CliError::Usage(
            "--ring-offsets and --ring-factors are mutually exclusive".into(),
        ));
    }
    if let Some(text) = offsets {
        return Ok(RingRule::offsets(parse_u64_list(text, "--ring-offsets").map_err(CliError::Usage)?)?);
    }
    if let Some(text) = factors {
        return Ok(RingRule::factors(parse_f64_list(text, "--ring-factors").map_err(CliError::Usage)?)?);
    }
    if let Some(values) = &file.ring_offsets {
        return Ok(RingRule::offsets(values.clone())?);
    }
    if let Some(values) = &file.ring_factors {
        return Ok(RingRule::factors(values.clone())?);
    }
    Err(CliError::Usage(
        "missing ring rule: pass --ring-offsets or --ring-factors (or config file equivalents)"
            .into(),
    ))
}

/// Resolves the channel probability from `--alpha` or `--rho` (or the config
/// file), returning `(alpha, rho_if_disk)`.
fn resolve_alpha_or_rho(
    alpha: Option<f64>,
    rho: Option<f64>,
    file: &FileConfig,
) -> Result<(f64, Option<f64>), CliError> {
    let alpha = alpha.or(file.alpha);
    let rho = rho.or(file.rho);
    match (alpha, rho) {
        (Some(_), Some(_)) => Err(CliError::Usage(
            "--alpha and --rho are mutually exclusive".into(),
        )),
        (Some(alpha), None) => Ok((alpha, None)),
        (None, Some(rho)) => {
            ChannelModel::disk(rho)?;
            Ok((matched_alpha(rho), Some(rho)))
        }
        (None, None) => Err(CliError::Usage(
            "missing channel: pass --alpha or --rho (or config file equivalents)".into(),
        )),
    }
}

fn warning_lines(profile: &NetworkProfile) -> String {
    profile
        .warnings()
        .iter()
        .map(|w| format!("# warning: {w}\n"))
        .collect()
}

fn cmd_threshold(
    args: &ThresholdArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<(Manifest, String, u8), CliError> {
    let n = require(args.n.or(file.n), "--n")?;
    let pool = require(args.pool.or(file.pool), "--pool")?;
    let mu = resolve_mu(&args.mu, file)?;
    let (alpha, rho) = resolve_alpha_or_rho(args.alpha, args.rho, file)?;
    let rule = resolve_ring_rule(&args.ring_offsets, &args.ring_factors, file)?;

    let found = critical_k1(n, alpha, pool, &mu, &rule)?;
    let c_n = alpha * found.lambda1 * n as f64 / (n as f64).ln();
    let alpha_hat = (n as f64).ln() / (n as f64 * found.lambda1);

    let mut body = String::new();
    if let Ok(profile) = NetworkProfile::new(mu.clone(), found.ring_sizes.clone(), pool) {
        body.push_str(&warning_lines(&profile));
    }
    body.push_str(&format!("critical_k1: {}\n", found.k1));
    body.push_str(&format!(
        "ring_sizes: {}\n",
        join_u64(&found.ring_sizes)
    ));
    body.push_str(&format!("lambda1: {}\n", fmt_prob(found.lambda1)));
    body.push_str(&format!("threshold: {}\n", fmt_prob(found.threshold)));
    body.push_str(&format!("c_n: {}\n", fmt_prob(c_n)));
    body.push_str(&format!("alpha_hat: {}\n", fmt_prob(alpha_hat)));

    let manifest = Manifest {
        command: "threshold",
        seed,
        config_echo: format!(
            "n={n} pool={pool} mu={} alpha={}{} rule={}",
            join_f64(&mu),
            fmt_prob(alpha),
            rho.map(|r| format!(" rho={}", fmt_prob(r))).unwrap_or_default(),
            describe_rule(&rule),
        ),
    };
    Ok((manifest, body, 0))
}

fn cmd_check(
    args: &CheckArgs,
    file: &FileConfig,
    seed: u64,
) -> Result<(Manifest, String, u8), CliError> {
    let n = require(args.n.or(file.n), "--n")?;
    let pool = require(args.pool.or(file.pool), "--pool")?;
    let mu = resolve_mu(&args.mu, file)?;
    let rings = resolve_rings(&args.rings, file)?;
    let alpha = require(args.alpha.or(file.alpha), "--alpha")?;
    let sigma = args.sigma.or(file.sigma).unwrap_or(1.0);
    let exponent = args.bound_exponent.or(file.bound_exponent).unwrap_or(2.0);

    let profile = NetworkProfile::new_lenient(mu.clone(), rings.clone(), pool)?;
    let report = check_scaling(n, &profile, alpha, sigma)?;

    let k_small = *rings.iter().min().expect("nonempty rings");
    let k_large = *rings.iter().max().expect("nonempty rings");
    let bounds = verify_bounds(k_small, k_large, pool, exponent)?;

    let mut body = String::new();
    body.push_str(&warning_lines(&profile));
    body.push_str(&format!("ordering_ok: {}\n", report.ordering_ok));
    body.push_str(&format!("pool_ok: {}\n", report.pool_ok));
    body.push_str(&format!("omega_ratio: {}\n", fmt_prob(report.omega_ratio)));
    body.push_str(&format!("c_n: {}\n", fmt_prob(report.c_n)));
    body.push_str(&format!(
        "bounds: k_i={k_small} k_j={k_large} a={}\n",
        fmt_prob(exponent)
    ));
    body.push_str(&format!("sandwich: {}\n", option_bool(bounds.sandwich)));
    body.push_str(&format!(
        "combinatorial: {}\n",
        option_bool(bounds.combinatorial)
    ));
    body.push_str(&format!(
        "exponential: {}\n",
        option_bool(bounds.exponential)
    ));
    body.push_str(&format!(
        "equivalence_ratio: {}\n",
        bounds
            .equivalence_ratio
            .map(fmt_prob)
            .unwrap_or_else(|| "unavailable".into())
    ));

    let exit_code = if report.ordering_ok && report.pool_ok { 0 } else { 4 };
    let manifest = Manifest {
        command: "check",
        seed,
        config_echo: format!(
            "n={n} pool={pool} mu={} rings={} alpha={} sigma={} bound_exponent={}",
            join_f64(&mu),
            join_u64(&rings),
            fmt_prob(alpha),
            fmt_prob(sigma),
            fmt_prob(exponent),
        ),
    };
    Ok((manifest, body, exit_code))
}

fn placeholder_profile(mu: &[f64], pool: u64) -> Result<NetworkProfile, CliError> {
    // Sweep bases only contribute mu and pool; cells build their own rings.
    Ok(NetworkProfile::new(mu.to_vec(), vec![1; mu.len()], pool)?)
}

fn cmd_sweep(
    args: &SweepArgs,
    file: &FileConfig,
    seed: u64,
    trials: u64,
) -> Result<(Manifest, String, u8), CliError> {
    let axis = args
        .axis
        .clone()
        .or_else(|| file.axis.clone())
        .ok_or_else(|| CliError::Usage("missing --axis (k1 or alpha)".into()))?;
    let n = require(args.n.or(file.n), "--n")?;
    let pool = require(args.pool.or(file.pool), "--pool")?;
    let mu = resolve_mu(&args.mu, file)?;
    let alphas = match &args.alphas {
        Some(text) => parse_f64_list(text, "--alphas").map_err(CliError::Usage)?,
        None => require(file.alphas.clone(), "--alphas")?,
    };
    let paired = args.paired_disk || file.paired_disk.unwrap_or(false);

    let base_profile = placeholder_profile(&mu, pool)?;
    // Carrier channel only; every cell swaps in its own alpha.
    let mut base = ExperimentConfig::new(
        n as usize,
        base_profile,
        ChannelModel::on_off(0.5).expect("valid carrier alpha"),
        trials,
        seed,
    )?;
    if paired {
        base = base.with_paired_disk()?;
    }

    let (cells, axis_echo) = match axis.as_str() {
        "k1" => {
            let k1_values = match &args.k1_values {
                Some(text) => parse_u64_list(text, "--k1-values").map_err(CliError::Usage)?,
                None => require(file.k1_values.clone(), "--k1-values")?,
            };
            let rule = resolve_ring_rule(&args.ring_offsets, &args.ring_factors, file)?;
            if rule.class_count() != mu.len() {
                return Err(CliError::Usage(format!(
                    "ring rule defines {} classes but mu defines {}",
                    rule.class_count(),
                    mu.len()
                )));
            }
            let cells = sweep_k1(&base, &k1_values, &alphas, &rule);
            let echo = format!(
                "axis=k1 k1_values={} rule={}",
                join_u64(&k1_values),
                describe_rule(&rule)
            );
            (cells, echo)
        }
        "alpha" => {
            if mu.len() != 2 {
                return Err(CliError::Usage(
                    "alpha sweeps compare (k1, k2) pairs and need a two-class mu".into(),
                ));
            }
            let pairs = match &args.pairs {
                Some(text) => parse_pair_list(text, "--pairs").map_err(CliError::Usage)?,
                None => match &file.pairs {
                    Some(pairs) => pairs.clone(),
                    None if args.literal_pairs || file.literal_pairs.unwrap_or(false) => {
                        LITERAL_PAIRS.to_vec()
                    }
                    None => EQUAL_MEAN_PAIRS.to_vec(),
                },
            };
            let cells = sweep_alpha(&base, &pairs, &alphas);
            let echo = format!(
                "axis=alpha pairs={}",
                pairs
                    .iter()
                    .map(|(a, b)| format!("{a}:{b}"))
                    .collect::<Vec<_>>()
                    .join(",")
            );
            (cells, echo)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown sweep axis '{other}' (use k1 or alpha)"
            )));
        }
    };

    let mut body = String::with_capacity(cells.len() * 96);
    body.push_str(SWEEP_HEADER);
    body.push('\n');
    for cell in &cells {
        for row in sweep_cell_rows(cell, "onoff") {
            body.push_str(&row);
            body.push('\n');
        }
    }

    let manifest = Manifest {
        command: "sweep",
        seed,
        config_echo: format!(
            "n={n} pool={pool} mu={} alphas={} trials={trials} paired_disk={paired} {axis_echo}",
            join_f64(&mu),
            join_f64(&alphas),
        ),
    };
    Ok((manifest, body, 0))
}

fn cmd_percolate(
    args: &PercolateArgs,
    file: &FileConfig,
    seed: u64,
    trials: u64,
) -> Result<(Manifest, String, u8), CliError> {
    let n = require(args.n.or(file.n), "--n")?;
    let pool = require(args.pool.or(file.pool), "--pool")?;
    let mu = resolve_mu(&args.mu, file)?;
    let rings = resolve_rings(&args.rings, file)?;
    let alphas = match &args.alphas {
        Some(text) => parse_f64_list(text, "--alphas").map_err(CliError::Usage)?,
        None => require(file.alphas.clone(), "--alphas")?,
    };

    let profile = NetworkProfile::new(mu.clone(), rings.clone(), pool)?;
    let table = percolation_experiment(&profile, n as usize, &alphas, trials, seed)?;

    let mut body = String::new();
    body.push_str(&warning_lines(&profile));
    body.push_str("alpha,mean_giant_fraction,p_connected,alpha_hat,at_threshold\n");
    for row in &table.rows {
        let at_threshold = (row.alpha - table.alpha_hat).abs() <= 1e-9;
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_prob(row.alpha),
            fmt_prob(row.estimate.mean_giant_fraction()),
            fmt_prob(row.estimate.p_connected()),
            fmt_prob(table.alpha_hat),
            at_threshold,
        ));
    }

    let manifest = Manifest {
        command: "percolate",
        seed,
        config_echo: format!(
            "n={n} pool={pool} mu={} rings={} alphas={} trials={trials}",
            join_f64(&mu),
            join_u64(&rings),
            join_f64(&alphas),
        ),
    };
    Ok((manifest, body, 0))
}

fn cmd_simulate(
    args: &SimulateArgs,
    file: &FileConfig,
    seed: u64,
    trials: u64,
    dump_graph: Option<&std::path::Path>,
) -> Result<(Manifest, String, u8), CliError> {
    let n = require(args.n.or(file.n), "--n")?;
    let pool = require(args.pool.or(file.pool), "--pool")?;
    let mu = resolve_mu(&args.mu, file)?;
    let rings = resolve_rings(&args.rings, file)?;
    let (alpha, rho) = resolve_alpha_or_rho(args.alpha, args.rho, file)?;
    let paired = args.paired_disk || file.paired_disk.unwrap_or(false);

    let profile = NetworkProfile::new(mu.clone(), rings.clone(), pool)?;
    let warnings = warning_lines(&profile);
    let channel = match rho {
        Some(rho) => ChannelModel::disk(rho)?,
        None => ChannelModel::on_off(alpha)?,
    };
    let primary_model = match channel {
        ChannelModel::OnOff { .. } => "onoff",
        ChannelModel::Disk { .. } => "disk",
    };
    let mut config = ExperimentConfig::new(n as usize, profile, channel, trials, seed)?;
    if paired {
        config = config.with_paired_disk()?;
    }

    let estimates = estimate(&config);
    let cell = SweepCell {
        k1: rings[0],
        ring_sizes: rings.clone(),
        alpha,
        rho: rho.or_else(|| paired.then(|| matched_rho(alpha).expect("validated"))),
        critical_k1: None,
        estimates: Some(estimates),
        error: None,
    };

    if let Some(path) = dump_graph {
        let (graph, _) = trial_graphs(&config, 0);
        let mut writer = std::io::BufWriter::new(std::fs::File::create(path)?);
        graph.write_edge_list(&mut writer)?;
    }

    let mut body = warnings;
    body.push_str(SWEEP_HEADER);
    body.push('\n');
    for row in sweep_cell_rows(&cell, primary_model) {
        body.push_str(&row);
        body.push('\n');
    }

    let manifest = Manifest {
        command: "simulate",
        seed,
        config_echo: format!(
            "n={n} pool={pool} mu={} rings={} alpha={}{} trials={trials} paired_disk={paired}",
            join_f64(&mu),
            join_u64(&rings),
            fmt_prob(alpha),
            rho.map(|r| format!(" rho={}", fmt_prob(r))).unwrap_or_default(),
        ),
    };
    Ok((manifest, body, 0))
}

fn option_bool(value: Option<bool>) -> String {
    value
        .map(|b| b.to_string())
        .unwrap_or_else(|| "unavailable".into())
}

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_f64(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn describe_rule(rule: &RingRule) -> String {
    match rule {
        RingRule::Offsets(offsets) => format!("offsets({})", join_u64(offsets)),
        RingRule::Factors(factors) => format!("factors({})", join_f64(factors)),
    }
}
