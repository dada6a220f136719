//! Seeded Monte Carlo trial engine, parameter sweeps, and the edge-occupation
//! (percolation) experiment.
//!
//! Every trial is a pure function of `(master_seed, trial_index)`: trials may
//! run on any number of worker threads and aggregation reduces integer counts,
//! so estimates are identical under any execution order or thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampler::{
    build_key_graph, derive_seed, sample_classes, sample_er, sample_key_rings, sample_rgg,
    RandomStream,
};
use crate::theory::{
    critical_k1, critical_transmissibility, derive, matched_rho, ChannelModel, NetworkProfile,
    RingRule,
};

// Substream labels within one trial. The paired disk twin reuses the class
// and ring substreams (same key graph) but draws its channel independently.
const LABEL_CLASSES: u64 = 0;
const LABEL_RINGS: u64 = 1;
const LABEL_ER: u64 = 2;
const LABEL_RGG: u64 = 3;

/// One experiment: network size, scheme profile, channel model, trial count,
/// and the master seed all realizations derive from.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    n: usize,
    profile: NetworkProfile,
    channel: ChannelModel,
    trials: u64,
    master_seed: u64,
    paired_disk: bool,
}

impl ExperimentConfig {
    pub fn new(
        n: usize,
        profile: NetworkProfile,
        channel: ChannelModel,
        trials: u64,
        master_seed: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::ZeroTrials);
        }
        Ok(ExperimentConfig {
            n,
            profile,
            channel,
            trials,
            master_seed,
            paired_disk: false,
        })
    }

    /// Also runs the matched disk model (`rho = sqrt(alpha / pi)`) against
    /// the same key graph in every trial. Requires an on/off channel with
    /// `alpha < pi/4` so the matched radius exists.
    pub fn with_paired_disk(mut self) -> Result<Self> {
        match self.channel {
            ChannelModel::OnOff { alpha } => {
                matched_rho(alpha)?;
            }
            ChannelModel::Disk { .. } => {
                return Err(Error::NoMatchingRadius(self.channel.alpha()));
            }
        }
        self.paired_disk = true;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> &NetworkProfile {
        &self.profile
    }

    pub fn channel(&self) -> &ChannelModel {
        &self.channel
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn paired_disk(&self) -> bool {
        self.paired_disk
    }
}

/// What one realization of one model looked like.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialObservation {
    pub isolated_count: usize,
    pub connected: bool,
    pub giant_size: usize,
    pub giant_fraction: f64,
}

/// Outcome of one trial: the configured channel model, plus the matched disk
/// twin when paired.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub primary: TrialObservation,
    pub disk_twin: Option<TrialObservation>,
}

/// Builds the secure-communication graph(s) of one trial: key graph
/// intersected with the sampled channel graph(s). Exposed so callers can dump
/// or inspect a realization; [`run_trial`] reduces this to observations.
pub fn trial_graphs(config: &ExperimentConfig, trial_index: u64) -> (Graph, Option<Graph>) {
    let trial = RandomStream::new(config.master_seed).substream(trial_index);
    let classes = sample_classes(
        config.n,
        config.profile.mu(),
        &trial.substream(LABEL_CLASSES),
    )
    .expect("validated profile");
    let assignment = sample_key_rings(&classes, &config.profile, &trial.substream(LABEL_RINGS))
        .expect("validated profile");
    let key_graph = build_key_graph(&assignment);

    match config.channel {
        ChannelModel::OnOff { alpha } => {
            let channel = sample_er(config.n, alpha, &trial.substream(LABEL_ER))
                .expect("alpha validated");
            let primary = key_graph.intersection(&channel).expect("same n");
            let twin = config.paired_disk.then(|| {
                let rho = matched_rho(alpha).expect("validated at construction");
                let disk = sample_rgg(config.n, rho, &trial.substream(LABEL_RGG))
                    .expect("rho validated");
                key_graph.intersection(&disk).expect("same n")
            });
            (primary, twin)
        }
        ChannelModel::Disk { rho } => {
            let channel = sample_rgg(config.n, rho, &trial.substream(LABEL_RGG))
                .expect("rho validated");
            (key_graph.intersection(&channel).expect("same n"), None)
        }
    }
}

fn observe(graph: &Graph) -> TrialObservation {
    let summary = graph.components();
    TrialObservation {
        isolated_count: summary.isolated_count,
        connected: summary.connected,
        giant_size: summary.giant_size(),
        giant_fraction: summary.giant_fraction,
    }
}

/// Runs one trial. Fully determined by `(config.master_seed, trial_index)`.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> TrialOutcome {
    let (primary, disk_twin) = trial_graphs(config, trial_index);
    TrialOutcome {
        primary: observe(&primary),
        disk_twin: disk_twin.as_ref().map(observe),
    }
}

/// Integer tallies over trials; all aggregation reduces through here so
/// results cannot depend on summation order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    connected: u64,
    no_isolated: u64,
    coincident: u64,
    giant_size_sum: u64,
}

impl Tally {
    fn record(&mut self, observation: &TrialObservation) {
        let no_isolated = observation.isolated_count == 0;
        self.connected += u64::from(observation.connected);
        self.no_isolated += u64::from(no_isolated);
        self.coincident += u64::from(observation.connected == no_isolated);
        self.giant_size_sum += observation.giant_size as u64;
    }

    fn merge(self, other: Tally) -> Tally {
        Tally {
            connected: self.connected + other.connected,
            no_isolated: self.no_isolated + other.no_isolated,
            coincident: self.coincident + other.coincident,
            giant_size_sum: self.giant_size_sum + other.giant_size_sum,
        }
    }
}

/// Aggregated empirical probabilities for one channel model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    trials: u64,
    n: usize,
    tally: Tally,
}

impl Estimate {
    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn connected_count(&self) -> u64 {
        self.tally.connected
    }

    pub fn no_isolated_count(&self) -> u64 {
        self.tally.no_isolated
    }

    pub fn p_connected(&self) -> f64 {
        self.tally.connected as f64 / self.trials as f64
    }

    pub fn p_no_isolated(&self) -> f64 {
        self.tally.no_isolated as f64 / self.trials as f64
    }

    /// Fraction of trials where the connectivity indicator and the
    /// no-isolated-node indicator agreed.
    pub fn coincidence_rate(&self) -> f64 {
        self.tally.coincident as f64 / self.trials as f64
    }

    pub fn mean_giant_fraction(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.tally.giant_size_sum as f64 / (self.trials as f64 * self.n as f64)
    }

    /// Half-width of the 95% Wilson score interval for `p_connected`.
    pub fn ci_half_width_95(&self) -> f64 {
        wilson_half_width(self.tally.connected, self.trials)
    }
}

/// 95% Wilson score half-width for a binomial proportion.
pub fn wilson_half_width(successes: u64, trials: u64) -> f64 {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z_squared = Z * Z;
    (Z / (1.0 + z_squared / n)) * (p * (1.0 - p) / n + z_squared / (4.0 * n * n)).sqrt()
}

/// Estimates for the configured channel, plus the disk twin when paired.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelEstimates {
    pub primary: Estimate,
    pub disk_twin: Option<Estimate>,
}

/// Runs all trials of `config` in parallel and aggregates.
pub fn estimate(config: &ExperimentConfig) -> ModelEstimates {
    let (primary, twin) = (0..config.trials)
        .into_par_iter()
        .map(|trial_index| {
            let outcome = run_trial(config, trial_index);
            let mut primary = Tally::default();
            primary.record(&outcome.primary);
            let mut twin = Tally::default();
            if let Some(observation) = &outcome.disk_twin {
                twin.record(observation);
            }
            (primary, twin)
        })
        .reduce(
            || (Tally::default(), Tally::default()),
            |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
        );

    ModelEstimates {
        primary: Estimate {
            trials: config.trials,
            n: config.n,
            tally: primary,
        },
        disk_twin: config.paired_disk.then_some(Estimate {
            trials: config.trials,
            n: config.n,
            tally: twin,
        }),
    }
}

/// One cell of a parameter sweep. Cells that fail to configure carry the
/// error instead of aborting the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub k1: u64,
    pub ring_sizes: Vec<u64>,
    pub alpha: f64,
    /// Matched disk radius, present when the cell also ran the disk model.
    pub rho: Option<f64>,
    /// Threshold marker: minimal k1 clearing the connectivity condition at
    /// this cell's alpha (per the sweep's ring rule), when one exists.
    pub critical_k1: Option<u64>,
    pub estimates: Option<ModelEstimates>,
    pub error: Option<String>,
}

fn run_cell(
    base: &ExperimentConfig,
    ring_sizes: Vec<u64>,
    k1: u64,
    alpha: f64,
    critical: Option<u64>,
    cell_index: u64,
) -> SweepCell {
    // Pairing applies where the matched radius exists (alpha < pi/4); other
    // cells still run the on/off model so the sweep stays complete.
    let rho = if base.paired_disk {
        matched_rho(alpha).ok()
    } else {
        None
    };
    let configured = (|| -> Result<(ExperimentConfig, Option<f64>)> {
        let profile = NetworkProfile::new(
            base.profile.mu().to_vec(),
            ring_sizes.clone(),
            base.profile.pool(),
        )?;
        let channel = ChannelModel::on_off(alpha)?;
        let mut config = ExperimentConfig::new(
            base.n,
            profile,
            channel,
            base.trials,
            derive_seed(base.master_seed, cell_index),
        )?;
        if rho.is_some() {
            config = config.with_paired_disk()?;
        }
        Ok((config, rho))
    })();

    match configured {
        Ok((config, rho)) => SweepCell {
            k1,
            ring_sizes,
            alpha,
            rho,
            critical_k1: critical,
            estimates: Some(estimate(&config)),
            error: None,
        },
        Err(error) => SweepCell {
            k1,
            ring_sizes,
            alpha,
            rho: None,
            critical_k1: critical,
            estimates: None,
            error: Some(error.to_string()),
        },
    }
}

/// Sweeps the smallest ring size over `k1_values` for every `alpha`,
/// emitting cells in ascending `k1` (then grid order in `alpha`). Each cell
/// also carries the theory-side critical k1 for its alpha. When the base
/// config is paired, cells with `alpha < pi/4` also run the matched disk
/// model; cells above that have no matched radius and run on/off only.
pub fn sweep_k1(
    base: &ExperimentConfig,
    k1_values: &[u64],
    alphas: &[f64],
    rule: &RingRule,
) -> Vec<SweepCell> {
    let mut k1s = k1_values.to_vec();
    k1s.sort_unstable();
    k1s.dedup();

    let criticals: Vec<Option<u64>> = alphas
        .iter()
        .map(|&alpha| {
            critical_k1(
                base.n as u64,
                alpha,
                base.profile.pool(),
                base.profile.mu(),
                rule,
            )
            .ok()
            .map(|found| found.k1)
        })
        .collect();

    let mut cells = Vec::with_capacity(k1s.len() * alphas.len());
    let mut cell_index = 0u64;
    for &k1 in &k1s {
        for (alpha_index, &alpha) in alphas.iter().enumerate() {
            cells.push(run_cell(
                base,
                rule.ring_sizes(k1),
                k1,
                alpha,
                criticals[alpha_index],
                cell_index,
            ));
            cell_index += 1;
        }
    }
    cells
}

/// Sweeps the channel probability over `alpha_grid` for each explicit
/// `(k1, k2)` ring pair. The base profile's class mix must have two classes.
pub fn sweep_alpha(
    base: &ExperimentConfig,
    k_pairs: &[(u64, u64)],
    alpha_grid: &[f64],
) -> Vec<SweepCell> {
    let mut alphas = alpha_grid.to_vec();
    alphas.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite alpha"));
    alphas.dedup();

    let mut cells = Vec::with_capacity(k_pairs.len() * alphas.len());
    let mut cell_index = 0u64;
    for &(k1, k2) in k_pairs {
        for &alpha in &alphas {
            cells.push(run_cell(
                base,
                vec![k1, k2],
                k1,
                alpha,
                None,
                cell_index,
            ));
            cell_index += 1;
        }
    }
    cells
}

/// Mean giant-component share and connectivity probability of key graphs
/// with every edge kept independently with probability `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct PercolationRow {
    pub alpha: f64,
    pub estimate: Estimate,
}

/// Output of [`percolation_experiment`], with the critical edge-occupation
/// probability `alpha_hat = log n / (n lambda_1)` for reference.
#[derive(Debug, Clone, PartialEq)]
pub struct PercolationTable {
    pub lambda1: f64,
    pub alpha_hat: f64,
    pub rows: Vec<PercolationRow>,
}

/// For each grid entry, samples fresh key graphs, keeps each edge with
/// probability `alpha`, and reports the connectivity and giant-component
/// statistics of the surviving graph.
pub fn percolation_experiment(
    profile: &NetworkProfile,
    n: usize,
    alpha_grid: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<PercolationTable> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if n < 2 {
        return Err(Error::TooFewNodes(n as u64));
    }
    for &alpha in alpha_grid {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::ProbabilityOutOfRange(alpha));
        }
    }

    let lambda1 = derive(profile, &ChannelModel::OnOff { alpha: 1.0 }).lambda()[0];
    let alpha_hat = critical_transmissibility(n as u64, lambda1)?;

    let rows = alpha_grid
        .iter()
        .enumerate()
        .map(|(cell_index, &alpha)| {
            let cell_seed = derive_seed(master_seed, cell_index as u64);
            let tally = (0..trials)
                .into_par_iter()
                .map(|trial_index| {
                    let trial = RandomStream::new(cell_seed).substream(trial_index);
                    let classes =
                        sample_classes(n, profile.mu(), &trial.substream(LABEL_CLASSES))
                            .expect("validated profile");
                    let assignment =
                        sample_key_rings(&classes, profile, &trial.substream(LABEL_RINGS))
                            .expect("validated profile");
                    let key_graph = build_key_graph(&assignment);
                    let kept = sample_er(n, alpha, &trial.substream(LABEL_ER))
                        .expect("alpha validated");
                    let surviving = key_graph.intersection(&kept).expect("same n");
                    let mut tally = Tally::default();
                    tally.record(&observe(&surviving));
                    tally
                })
                .reduce(Tally::default, Tally::merge);
            PercolationRow {
                alpha,
                estimate: Estimate { trials, n, tally },
            }
        })
        .collect();

    Ok(PercolationTable {
        lambda1,
        alpha_hat,
        rows,
    })
}
