//! Chernoff-type tail bounds for binomial and hypergeometric variables, the
//! martingale exponential-moment bound, and a Monte Carlo harness that checks
//! empirical tails against them.
//!
//! Exponents are computed in log space; bounds are clamped to `[0, 1]` when
//! exponentiated.

use rand_distr::{Binomial, Distribution, Hypergeometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// `φ(x) = (1+x)log(1+x) - x` for `x > -1`, `φ(-1) = 1`.
pub fn phi(x: f64) -> f64 {
    if x == -1.0 {
        1.0
    } else {
        (1.0 + x) * (1.0 + x).ln() - x
    }
}

/// `exp(log_value)` clamped to `[0, 1]`.
fn clamp_exp(log_value: f64) -> f64 {
    if log_value >= 0.0 {
        1.0
    } else {
        log_value.exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffBounds {
    /// `exp[-μφ(t/μ)]`.
    pub upper_fine: f64,
    /// `exp[-t²/(2(μ + t/3))]`.
    pub upper_coarse: f64,
    /// `exp[-μφ(-t/μ)]`; zero when `t > μ` since the event is empty.
    pub lower_fine: f64,
    /// `exp[-t²/(2μ)]`.
    pub lower_coarse: f64,
}

/// Bounds on `P(ξ ≥ μ + t)` and `P(ξ ≤ μ - t)`.
pub fn chernoff_bounds(mu: f64, t: f64) -> Result<ChernoffBounds> {
    if !(mu > 0.0 && mu.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!(
            "need μ > 0 and t ≥ 0 (got μ = {mu}, t = {t})"
        )));
    }
    let lower_fine = if t > mu {
        0.0
    } else {
        clamp_exp(-mu * phi(-t / mu))
    };
    Ok(ChernoffBounds {
        upper_fine: clamp_exp(-mu * phi(t / mu)),
        upper_coarse: clamp_exp(-t * t / (2.0 * (mu + t / 3.0))),
        lower_fine,
        lower_coarse: clamp_exp(-t * t / (2.0 * mu)),
    })
}

/// Bound on `P(ξ > Kμ)`: `exp[-Kμ log(K/e)]`, at most 1.
pub fn cher_prime(mu: f64, k: f64) -> Result<f64> {
    if !(mu > 0.0 && k > 0.0 && mu.is_finite() && k.is_finite()) {
        return Err(Error::invalid("need μ > 0 and K > 0"));
    }
    Ok(clamp_exp(-k * mu * (k.ln() - 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AzumaBound {
    /// `J = Σ a_i b_i`.
    pub j: f64,
    pub theta: f64,
    /// `exp(Jθ² - θλ)`, at most 1.
    pub value: f64,
}

/// Bound on `P(Z > λ)` for a martingale whose increments are centred
/// variables in `[0, b_i]` with mean at most `a_i`. Uses
/// `θ = min(1/(2 max b), λ/(2J))`; in the second regime the value is
/// `exp[-λ²/(4J)]`.
pub fn azuma_bound(pairs: &[(f64, f64)], lambda: f64) -> Result<AzumaBound> {
    if pairs.is_empty() {
        return Err(Error::invalid("need at least one (a, b) pair"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("λ must be positive"));
    }
    if pairs
        .iter()
        .any(|&(a, b)| !(a > 0.0 && b >= a && b.is_finite()))
    {
        return Err(Error::invalid("pairs need 0 < a ≤ b"));
    }
    let j: f64 = pairs.iter().map(|(a, b)| a * b).sum();
    let max_b = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    let theta = (1.0 / (2.0 * max_b)).min(lambda / (2.0 * j));
    Ok(AzumaBound {
        j,
        theta,
        value: clamp_exp(j * theta * theta - theta * lambda),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EezRow {
    pub x: f64,
    pub p: f64,
    /// `e^{-xp}(1 - p + p e^x)`.
    pub lhs: f64,
    /// `e^{x²p}`.
    pub rhs: f64,
    pub slack: f64,
}

impl EezRow {
    pub fn ok(&self) -> bool {
        self.lhs <= self.rhs + self.slack
    }
}

pub const EEZ_SLACK: f64 = 1e-12;

/// The two-point moment inequality on `x ∈ [-1/2, 1/2]` (step `1e-3`) and
/// `p ∈ [0, 1]` (step `1e-2`).
pub fn eez_grid() -> Vec<EezRow> {
    (-500..=500)
        .flat_map(|i| {
            let x = i as f64 / 1000.0;
            (0..=100).map(move |j| {
                let p = j as f64 / 100.0;
                EezRow {
                    x,
                    p,
                    lhs: (-x * p).exp() * (1.0 - p + p * x.exp()),
                    rhs: (x * x * p).exp(),
                    slack: EEZ_SLACK,
                }
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TailDist {
    Binomial { n: u64, p: f64 },
    /// `|X ∩ A|` for a uniform `k`-subset `X` of an `s`-set, `|A| = a`.
    Hypergeometric { s: u64, a: u64, k: u64 },
}

impl TailDist {
    pub fn mean(&self) -> f64 {
        match *self {
            TailDist::Binomial { n, p } => n as f64 * p,
            TailDist::Hypergeometric { s, a, k } => k as f64 * a as f64 / s as f64,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TailDist::Binomial { n, p } => {
                if n == 0 || !(p > 0.0 && p < 1.0) {
                    return Err(Error::invalid("binomial needs n ≥ 1 and p ∈ (0,1)"));
                }
            }
            TailDist::Hypergeometric { s, a, k } => {
                if a == 0 || k == 0 || a > s || k > s {
                    return Err(Error::invalid("hypergeometric needs 1 ≤ a, k ≤ s"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tail", content = "value", rename_all = "kebab-case")]
pub enum Tail {
    /// `P(ξ ≥ x)`, bounded by the upper Chernoff form.
    AtLeast(f64),
    /// `P(ξ ≤ x)`, bounded by the lower Chernoff form.
    AtMost(f64),
    /// `P(ξ > Kμ)`, bounded by the large-deviation form.
    AboveMultiple(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailCheck {
    pub dist: TailDist,
    pub tail: Tail,
    pub mu: f64,
    pub trials: u64,
    pub hits: u64,
    pub empirical: f64,
    pub bound: f64,
    /// `3·sqrt(bound(1-bound)/trials) + 3/trials`.
    pub mc_slack: f64,
    pub ok: bool,
}

/// The bound that applies to a tail event.
pub fn tail_bound(dist: &TailDist, tail: &Tail) -> Result<f64> {
    let mu = dist.mean();
    Ok(match *tail {
        Tail::AtLeast(x) if x <= mu => 1.0,
        Tail::AtLeast(x) => chernoff_bounds(mu, x - mu)?.upper_fine,
        Tail::AtMost(x) if x >= mu => 1.0,
        Tail::AtMost(x) => chernoff_bounds(mu, mu - x)?.lower_fine,
        Tail::AboveMultiple(k) => cher_prime(mu, k)?,
    })
}

const TAIL_BATCH: u64 = 4096;

/// Draw `trials` samples and compare the empirical tail frequency with the
/// bound plus a one-sided Monte Carlo allowance.
pub fn mc_tail_check(dist: TailDist, tail: Tail, trials: u64, seed: u64) -> Result<TailCheck> {
    dist.validate()?;
    if trials < 10_000 {
        return Err(Error::invalid("tail checks need at least 10^4 trials"));
    }
    let mu = dist.mean();
    let bound = tail_bound(&dist, &tail)?;
    let hit = move |x: f64| match tail {
        Tail::AtLeast(t) => x >= t,
        Tail::AtMost(t) => x <= t,
        Tail::AboveMultiple(k) => x > k * mu,
    };
    let sampler: Box<dyn Fn(&mut crate::rng::Rng) -> u64 + Sync> = match dist {
        TailDist::Binomial { n, p } => {
            let d = Binomial::new(n, p).map_err(|e| Error::invalid(e.to_string()))?;
            Box::new(move |rng| d.sample(rng))
        }
        TailDist::Hypergeometric { s, a, k } => {
            let d = Hypergeometric::new(s, a, k).map_err(|e| Error::invalid(e.to_string()))?;
            Box::new(move |rng| d.sample(rng))
        }
    };
    let batches = trials.div_ceil(TAIL_BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b);
            let hi = ((b + 1) * TAIL_BATCH).min(trials);
            (b * TAIL_BATCH..hi)
                .filter(|_| hit(sampler(&mut rng) as f64))
                .count() as u64
        })
        .sum();
    let empirical = hits as f64 / trials as f64;
    let mc_slack = 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt() + 3.0 / trials as f64;
    Ok(TailCheck {
        dist,
        tail,
        mu,
        trials,
        hits,
        empirical,
        bound,
        mc_slack,
        ok: empirical <= bound + mc_slack,
    })
}

/// Ten (distribution, tail) cases: binomials and degree-like
/// hypergeometrics (`s = C(30,3)`, `a = C(29,2)`, `k = 300` edges, so
/// `μ = 30`), on both sides and in the large-deviation regime.
pub fn standard_tail_cases() -> Vec<(TailDist, Tail)> {
    let deg = TailDist::Hypergeometric {
        s: 4060,
        a: 406,
        k: 300,
    };
    vec![
        (TailDist::Binomial { n: 100, p: 0.1 }, Tail::AtLeast(20.0)),
        (TailDist::Binomial { n: 100, p: 0.1 }, Tail::AtMost(5.0)),
        (TailDist::Binomial { n: 1000, p: 0.01 }, Tail::AtLeast(15.0)),
        (TailDist::Binomial { n: 50, p: 0.5 }, Tail::AtMost(20.0)),
        (TailDist::Binomial { n: 200, p: 0.05 }, Tail::AboveMultiple(2.0)),
        (deg, Tail::AtMost(20.0)),
        (deg, Tail::AtLeast(40.0)),
        (deg, Tail::AtMost(0.0)),
        (deg, Tail::AboveMultiple(1.5)),
        (
            TailDist::Hypergeometric { s: 100, a: 50, k: 20 },
            Tail::AtLeast(14.0),
        ),
    ]
}
