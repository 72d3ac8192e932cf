//! Experiment configuration: what to run, with which seed and tolerances.
//!
//! Configs are read from TOML (`--config`) or built from subcommand flags,
//! and are echoed verbatim into every run manifest.

use std::path::Path;

use hypermatch::processes::random_hypergraph;
use hypermatch::properties::ToleranceParams;
use hypermatch::rng::stream_rng;
use hypermatch::{Hypergraph, WeightScope};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub seed: u64,
    pub job: Job,
    #[serde(default)]
    pub tolerances: ToleranceParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Job {
    Count {
        graph: GraphSpec,
    },
    Weights {
        graph: GraphSpec,
        scope: ScopeKind,
    },
    Trace {
        n: u32,
        r: u32,
        m: usize,
    },
    Hitting {
        n: Vec<u32>,
        r: u32,
        trials: u64,
    },
    Reduce {
        n: u32,
        r: u32,
        eps: f64,
        /// Defaults to `log log n`.
        g: Option<f64>,
        runs: u64,
    },
    Scan {
        n: Vec<u32>,
        r: u32,
        m_grid: Vec<usize>,
        trials: u64,
    },
    Entropy {
        graph: GraphSpec,
    },
    Tcuckler {
        graph: GraphSpec,
        /// Monte Carlo sample count; exhaustive when absent.
        trials: Option<u64>,
    },
    QsVerify {
        n: u32,
        r: u32,
    },
    Tails {
        trials: u64,
    },
    VerifyLemmas {
        instances: u64,
    },
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Count { .. } => "count",
            Job::Weights { .. } => "weights",
            Job::Trace { .. } => "trace",
            Job::Hitting { .. } => "hitting",
            Job::Reduce { .. } => "reduce",
            Job::Scan { .. } => "scan",
            Job::Entropy { .. } => "entropy",
            Job::Tcuckler { .. } => "tcuckler",
            Job::QsVerify { .. } => "qs-verify",
            Job::Tails { .. } => "tails",
            Job::VerifyLemmas { .. } => "verify-lemmas",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeKind {
    Edges,
    All,
}

impl ScopeKind {
    pub fn scope(self) -> WeightScope {
        match self {
            ScopeKind::Edges => WeightScope::Edges,
            ScopeKind::All => WeightScope::AllRSets,
        }
    }
}

/// Where the input hypergraph comes from. File input is stored inline so a
/// manifest is self-contained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Complete { n: u32, r: u32 },
    /// `m` uniform edges, drawn from stream 0 of the run seed.
    Random { n: u32, r: u32, m: usize },
    Text { text: String },
}

impl GraphSpec {
    pub fn build(&self, seed: u64) -> Result<Hypergraph, CliError> {
        Ok(match self {
            GraphSpec::Complete { n, r } => Hypergraph::complete(*n, *r)?,
            GraphSpec::Random { n, r, m } => random_hypergraph(*n, *r, *m, &mut stream_rng(seed, 0))?,
            GraphSpec::Text { text } => Hypergraph::parse(text)?,
        })
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn new(seed: u64, job: Job) -> Self {
        ExperimentConfig {
            schema: SCHEMA_VERSION,
            seed,
            job,
            tolerances: ToleranceParams::default(),
        }
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Cheap structural checks, run before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(config_err(format!(
                "schema {} is not supported (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        self.tolerances.validate()?;
        let positive = |what: &str, v: u64| {
            if v == 0 {
                Err(config_err(format!("{what} must be positive")))
            } else {
                Ok(())
            }
        };
        match &self.job {
            Job::Hitting { n, trials, .. } => {
                if n.is_empty() {
                    return Err(config_err("n list is empty"));
                }
                positive("trials", *trials)?;
            }
            Job::Scan {
                n, m_grid, trials, ..
            } => {
                if n.is_empty() || m_grid.is_empty() {
                    return Err(config_err("n list and M grid must be non-empty"));
                }
                positive("trials", *trials)?;
            }
            Job::Reduce { eps, g, runs, .. } => {
                if !(*eps > 0.0 && *eps < 1.0) {
                    return Err(config_err("eps must lie in (0,1)"));
                }
                if let Some(g) = g {
                    if !(*g > 0.0) {
                        return Err(config_err("g must be positive"));
                    }
                }
                positive("runs", *runs)?;
            }
            Job::Tcuckler {
                trials: Some(t), ..
            } => positive("trials", *t)?,
            Job::Tails { trials } => {
                if *trials < 10_000 {
                    return Err(config_err("tails needs at least 10000 trials"));
                }
            }
            Job::VerifyLemmas { instances } => positive("instances", *instances)?,
            _ => {}
        }
        Ok(())
    }
}
