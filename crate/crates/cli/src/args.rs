//! Command-line grammar. Every subcommand maps onto a [`Job`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, GraphSpec, Job, ScopeKind};
use crate::output::Manifest;
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "hypermatch", version, about = "Perfect matchings in random r-uniform hypergraphs")]
pub struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores). Never changes results.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "hypermatch-out")]
    pub out: PathBuf,
    /// Run the experiment described by a TOML file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Hypergraph file: header `n r`, then one edge of 1-based vertices per line.
    #[arg(long, conflicts_with_all = ["n", "m"])]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 3)]
    pub r: u32,
    /// Number of uniformly random edges; the complete graph when absent.
    #[arg(long)]
    pub m: Option<usize>,
}

impl GraphArgs {
    fn spec(&self) -> Result<GraphSpec, CliError> {
        if let Some(path) = &self.graph {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            return Ok(GraphSpec::Text { text });
        }
        let n = self
            .n
            .ok_or_else(|| CliError::Config("give --graph FILE or --n".into()))?;
        Ok(match self.m {
            Some(m) => GraphSpec::Random { n, r: self.r, m },
            None => GraphSpec::Complete { n, r: self.r },
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count perfect matchings.
    Count(GraphArgs),
    /// Weights w(Z) = Φ(H - Z) over edges or all r-sets.
    Weights {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = ScopeKind::Edges)]
        scope: ScopeKind,
    },
    /// Edge-deletion trace from the complete graph down to m edges.
    Trace {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long)]
        m: usize,
    },
    /// Hitting-time experiment over a list of n.
    Hitting {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long, default_value_t = 300)]
        trials: u64,
    },
    /// Label-coupling reduction checks.
    Reduce {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        /// Defaults to log log n.
        #[arg(long)]
        g: Option<f64>,
        #[arg(long, default_value_t = 500)]
        runs: u64,
    },
    /// Perfect-matching probability across an edge-count grid.
    Scan {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        r: u32,
        #[arg(long = "m-grid", value_delimiter = ',', required = true)]
        m_grid: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: u64,
    },
    /// Vertex entropies and the Shearer inequality.
    Entropy(GraphArgs),
    /// Per-(v, Y) statistics of the entropy decomposition.
    Tcuckler {
        #[command(flatten)]
        graph: GraphArgs,
        /// Sample this many matchings instead of enumerating.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Exhaustive random-ordering tables for K_n^(r).
    QsVerify {
        #[arg(long, default_value_t = 9)]
        n: u32,
        #[arg(long, default_value_t = 3)]
        r: u32,
    },
    /// Monte Carlo checks of the tail bounds and the moment grid.
    Tails {
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Run every exact lemma check on random instances.
    VerifyLemmas {
        #[arg(long, default_value_t = 100)]
        instances: u64,
    },
    /// Rerun the experiment recorded in a manifest.
    Replay { manifest: PathBuf },
}

impl Cli {
    /// The experiment to run, from `--config`, a manifest, or subcommand flags.
    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        if let Some(path) = &self.config {
            if self.command.is_some() {
                return Err(CliError::Config("--config cannot be combined with a subcommand".into()));
            }
            let mut cfg = ExperimentConfig::from_toml_file(path)?;
            if let Some(seed) = self.seed {
                cfg.seed = seed;
            }
            return Ok(cfg);
        }
        let command = self
            .command
            .as_ref()
            .ok_or_else(|| CliError::Config("no subcommand or --config given".into()))?;
        if let Command::Replay { manifest } = command {
            if self.seed.is_some() {
                return Err(CliError::Config("replay takes its seed from the manifest".into()));
            }
            return Ok(Manifest::load(manifest)?.config);
        }
        let job = match command {
            Command::Count(g) => Job::Count { graph: g.spec()? },
            Command::Weights { graph, scope } => Job::Weights {
                graph: graph.spec()?,
                scope: *scope,
            },
            Command::Trace { n, r, m } => Job::Trace { n: *n, r: *r, m: *m },
            Command::Hitting { n, r, trials } => Job::Hitting {
                n: n.clone(),
                r: *r,
                trials: *trials,
            },
            Command::Reduce { n, r, eps, g, runs } => Job::Reduce {
                n: *n,
                r: *r,
                eps: *eps,
                g: *g,
                runs: *runs,
            },
            Command::Scan {
                n,
                r,
                m_grid,
                trials,
            } => Job::Scan {
                n: n.clone(),
                r: *r,
                m_grid: m_grid.clone(),
                trials: *trials,
            },
            Command::Entropy(g) => Job::Entropy { graph: g.spec()? },
            Command::Tcuckler { graph, trials } => Job::Tcuckler {
                graph: graph.spec()?,
                trials: *trials,
            },
            Command::QsVerify { n, r } => Job::QsVerify { n: *n, r: *r },
            Command::Tails { trials } => Job::Tails { trials: *trials },
            Command::VerifyLemmas { instances } => Job::VerifyLemmas {
                instances: *instances,
            },
            Command::Replay { .. } => unreachable!("handled above"),
        };
        let cfg = ExperimentConfig::new(self.seed.unwrap_or(0), job);
        cfg.validate()?;
        Ok(cfg)
    }
}
