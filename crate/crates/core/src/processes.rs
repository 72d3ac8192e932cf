//! Random processes on the complete r-graph `K`.
//!
//! - the *deletion trace*: remove the edges of `K` in uniform random order
//!   and follow `Φ_t`, the increments `ξ_t` and the martingale `X_t`;
//! - the *hitting-time* process: add edges in random order until every
//!   vertex is covered, then ask whether that hypergraph has a perfect
//!   matching;
//! - the *threshold scan*: PM probability of `H_{n,M}` over a grid of `M`;
//! - the *label coupling* used to reduce the hitting-time statement to a
//!   minimum-degree-conditioned one.
//!
//! Randomness follows [`crate::rng`]: trial `i` of a run uses stream `i`.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial_u64, fmt_ratio, int, ln_biguint, ratio, ratio_from_uint, Rational};
use crate::hypergraph::{bits, full_mask, rsets_of, Hypergraph, RSet};
use crate::pm::{maxr_of, BigCount, Engine, WeightScope, WeightSpectrum};
use crate::properties::{self, ToleranceParams};
use crate::rng::{stream_rng, with_workers};
use crate::stats::{mean, Proportion};

fn size_of_k(n: u32, r: u32) -> Result<usize> {
    if n == 0 || n > crate::hypergraph::MAX_VERTICES || r < 2 || r > n {
        return Err(Error::invalid(format!("invalid dimensions n={n}, r={r}")));
    }
    binomial_u64(n as u64, r as u64)
        .filter(|&k| k <= 50_000_000)
        .map(|k| k as usize)
        .ok_or_else(|| Error::ResourceLimit(format!("C({n},{r}) r-sets is too many to list")))
}

/// Uniform `m`-edge hypergraph on `n` vertices (`H_{n,m}`), edges in colex
/// order.
pub fn random_hypergraph(n: u32, r: u32, m: usize, rng: &mut impl RngCore) -> Result<Hypergraph> {
    let total = size_of_k(n, r)?;
    if m > total {
        return Err(Error::invalid(format!("m = {m} exceeds C({n},{r}) = {total}")));
    }
    let mut all = rsets_of(full_mask(n), r);
    let (chosen, _) = all.partial_shuffle(rng, m);
    let mut edges = chosen.to_vec();
    edges.sort();
    Ok(Hypergraph::from_parts(n, r, edges, full_mask(n)))
}

/// A uniformly random ordering of all r-sets of `[n]`.
///
/// When generated through [`sample_permutation`], every r-set carries an
/// independent uniform label in `[0, 1)` (stored as a 64-bit fixed-point
/// integer) and `order` lists the r-sets by increasing label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePermutation {
    pub n: u32,
    pub r: u32,
    pub seed: u64,
    pub order: Vec<RSet>,
    /// Label of `order[i]`, as `u / 2^64`; strictly increasing.
    pub labels: Option<Vec<u64>>,
}

impl EdgePermutation {
    /// Wrap an explicit order, checking that it is a bijection onto `K`.
    pub fn from_order(n: u32, r: u32, order: Vec<RSet>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort();
        if sorted != rsets_of(full_mask(n), r) {
            return Err(Error::invalid("order is not a permutation of all r-sets"));
        }
        Ok(EdgePermutation {
            n,
            r,
            seed: 0,
            order,
            labels: None,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn label(&self, i: usize) -> Option<f64> {
        self.labels
            .as_ref()
            .map(|l| l[i] as f64 / 18_446_744_073_709_551_616.0)
    }

    /// `{A_1, …, A_t}` as a hypergraph on all `n` vertices.
    pub fn prefix(&self, t: usize) -> Hypergraph {
        let mut edges = self.order[..t].to_vec();
        edges.sort();
        Hypergraph::from_parts(self.n, self.r, edges, full_mask(self.n))
    }

    /// `K \ {A_1, …, A_t}`.
    pub fn complement_of_prefix(&self, t: usize) -> Hypergraph {
        let mut edges = self.order[t..].to_vec();
        edges.sort();
        Hypergraph::from_parts(self.n, self.r, edges, full_mask(self.n))
    }
}

/// Label-coupled permutation for `seed`, drawn from stream 0.
pub fn sample_permutation(n: u32, r: u32, seed: u64) -> Result<EdgePermutation> {
    sample_permutation_from(n, r, seed, &mut stream_rng(seed, 0))
}

/// Label-coupled permutation from an explicit generator.
pub fn sample_permutation_from(
    n: u32,
    r: u32,
    seed: u64,
    rng: &mut impl RngCore,
) -> Result<EdgePermutation> {
    size_of_k(n, r)?;
    let all = rsets_of(full_mask(n), r);
    let mut labelled: Vec<(u64, RSet)> = all.iter().map(|&a| (rng.next_u64(), a)).collect();
    // Ties have probability ~|K|^2 / 2^64; redraw until distinct.
    loop {
        labelled.sort_unstable();
        let dup = labelled.windows(2).position(|w| w[0].0 == w[1].0);
        match dup {
            None => break,
            Some(i) => labelled[i + 1].0 = rng.next_u64(),
        }
    }
    let (labels, order) = labelled.into_iter().unzip();
    Ok(EdgePermutation {
        n,
        r,
        seed,
        order,
        labels: Some(labels),
    })
}

/// Outcome of one hitting-time run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingResult {
    /// First `t` with `A_1 ∪ … ∪ A_t = V`.
    pub t_hit: usize,
    pub has_pm: bool,
    #[serde(serialize_with = "ser_big")]
    pub phi_at_t: BigCount,
    /// `log Φ(H_T)` in nats, absent when `Φ = 0`.
    pub log_phi: Option<f64>,
    /// `(n/r)·log(e^{-(r-1)}·log n)`.
    pub benchmark: f64,
}

fn ser_big<S: serde::Serializer>(x: &BigCount, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `(n/r)·log(e^{-(r-1)} log n)`, the scale of `log Φ` at the hitting time.
pub fn hitting_benchmark(n: u32, r: u32) -> f64 {
    let n_f = n as f64;
    (n_f / r as f64) * (n_f.ln().ln() - (r as f64 - 1.0))
}

pub fn hitting_time(perm: &EdgePermutation, engine: &Engine) -> Result<HittingResult> {
    let full = full_mask(perm.n);
    let mut covered = 0u64;
    let mut t_hit = 0;
    for (i, a) in perm.order.iter().enumerate() {
        covered |= a.mask();
        if covered == full {
            t_hit = i + 1;
            break;
        }
    }
    debug_assert!(t_hit > 0, "a full permutation always covers V");
    let h = perm.prefix(t_hit);
    let phi = engine.count(&h)?;
    let log_phi = (!phi.is_zero()).then(|| ln_biguint(&phi));
    Ok(HittingResult {
        t_hit,
        has_pm: !phi.is_zero(),
        phi_at_t: phi,
        log_phi,
        benchmark: hitting_benchmark(perm.n, perm.r),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingSummary {
    pub n: u32,
    pub r: u32,
    pub trials: u64,
    pub seed: u64,
    pub has_pm: Proportion,
    /// Mean of `log Φ(H_T)` over trials with a perfect matching.
    pub mean_log_phi: Option<f64>,
    pub benchmark: f64,
    pub mean_t_hit: f64,
}

/// Independent hitting-time trials; trial `i` uses stream `i` of `seed`.
pub fn run_hitting_experiment(
    n: u32,
    r: u32,
    trials: u64,
    seed: u64,
    workers: usize,
    engine: &Engine,
) -> Result<(Vec<HittingResult>, HittingSummary)> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    size_of_k(n, r)?;
    let results = with_workers(workers, || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let perm = sample_permutation_from(n, r, seed, &mut stream_rng(seed, i))?;
                hitting_time(&perm, engine)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let successes = results.iter().filter(|h| h.has_pm).count() as u64;
    let logs: Vec<f64> = results.iter().filter_map(|h| h.log_phi).collect();
    let t_hits: Vec<f64> = results.iter().map(|h| h.t_hit as f64).collect();
    let summary = HittingSummary {
        n,
        r,
        trials,
        seed,
        has_pm: Proportion::new(successes, trials),
        mean_log_phi: mean(&logs),
        benchmark: hitting_benchmark(n, r),
        mean_t_hit: mean(&t_hits).unwrap_or(0.0),
    };
    Ok((results, summary))
}

/// One row of a threshold scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: u32,
    pub r: u32,
    pub m: usize,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_log_phi: Option<f64>,
    /// `(n/r)·log(e^{-(r-1)}·rM/n)`.
    pub benchmark: f64,
}

pub fn scan_benchmark(n: u32, r: u32, m: usize) -> f64 {
    let (n, r) = (n as f64, r as f64);
    (n / r) * ((r * m as f64 / n).ln() - (r - 1.0))
}

/// PM probability of `H_{n,M}` for every `M` in the grid.
///
/// Trial `i` draws one edge ordering (stream `i` of a per-`n` seed) and
/// reads `H_{n,M}` as its first `M` edges, so the estimates are coupled
/// across `M` and monotone in `M` sample by sample.
pub fn run_threshold_scan(
    n: u32,
    r: u32,
    m_grid: &[usize],
    trials: u64,
    seed: u64,
    workers: usize,
    engine: &Engine,
) -> Result<Vec<ScanRow>> {
    let k = size_of_k(n, r)?;
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if let Some(&bad) = m_grid.iter().find(|&&m| m > k) {
        return Err(Error::invalid(format!("M = {bad} exceeds C({n},{r}) = {k}")));
    }
    let n_seed = seed ^ ((n as u64) << 32 | r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let per_trial: Vec<Vec<Option<f64>>> = with_workers(workers, || {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let perm = sample_permutation_from(n, r, n_seed, &mut stream_rng(n_seed, i))?;
                m_grid
                    .iter()
                    .map(|&m| {
                        let phi = engine.count(&perm.prefix(m))?;
                        Ok((!phi.is_zero()).then(|| ln_biguint(&phi)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(m_grid
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            let logs: Vec<f64> = per_trial.iter().filter_map(|row| row[j]).collect();
            let p = Proportion::new(logs.len() as u64, trials);
            ScanRow {
                n,
                r,
                m,
                trials,
                successes: p.successes,
                p_hat: p.p_hat,
                wilson_lo: p.lo,
                wilson_hi: p.hi,
                mean_log_phi: mean(&logs),
                benchmark: scan_benchmark(n, r, m),
            }
        })
        .collect())
}

/// One deletion step `H_{i-1} → H_i = H_{i-1} - A_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: usize,
    pub edge: RSet,
    /// Fraction of perfect matchings of `H_{i-1}` that contain `A_i`.
    pub xi: Rational,
    /// `(n/r) / (C(n,r) - i + 1)`.
    pub gamma: Rational,
    pub phi: BigCount,
    /// Martingale difference, zeroed once some earlier `H_j` failed B.
    pub z: Rational,
    /// `X_i = Z_1 + … + Z_i`.
    pub x: Rational,
    pub flag_a: bool,
    pub flag_b: bool,
    pub flag_r: bool,
    /// `maxr w_{H_i}(H_i)`, when defined.
    pub maxr: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeletionTrace {
    pub n: u32,
    pub r: u32,
    pub m_final: usize,
    pub seed: u64,
    pub phi0: BigCount,
    /// B on `H_0 = K`.
    pub b0: bool,
    pub steps: Vec<TraceStep>,
    /// Step at which `Φ_{i-1} = 0` left `ξ_i` undefined.
    pub aborted_at: Option<usize>,
    pub params: ToleranceParams,
}

impl DeletionTrace {
    /// `Σ_{i ≤ t} γ_i`.
    pub fn gamma_sum(&self, t: usize) -> Rational {
        self.steps[..t]
            .iter()
            .fold(Rational::zero(), |acc, s| acc + &s.gamma)
    }

    /// `Φ_t` with `Φ_0` at `t = 0`.
    pub fn phi(&self, t: usize) -> &BigCount {
        if t == 0 {
            &self.phi0
        } else {
            &self.steps[t - 1].phi
        }
    }

    /// Checks `Φ_t / Φ_0 = Π_{i ≤ t} (1 - ξ_i)` exactly at every step.
    pub fn product_identity_holds(&self) -> bool {
        let mut prod = Rational::one();
        self.steps.iter().all(|s| {
            prod *= Rational::one() - &s.xi;
            prod == ratio_from_uint(&s.phi, &self.phi0)
        })
    }

    /// CSV with header
    /// `step,edge,xi_num,xi_den,gamma_num,gamma_den,phi_decimal,X_t,flagA,flagB,flagR`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("step,edge,xi_num,xi_den,gamma_num,gamma_den,phi_decimal,X_t,flagA,flagB,flagR\n");
        for s in &self.steps {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                s.step,
                s.edge.label(),
                s.xi.numer(),
                s.xi.denom(),
                s.gamma.numer(),
                s.gamma.denom(),
                s.phi,
                fmt_ratio(&s.x),
                s.flag_a as u8,
                s.flag_b as u8,
                s.flag_r as u8
            ));
        }
        out
    }
}

/// `γ_i = (n/r) / (C(n,r) - i + 1)`.
pub fn gamma(n: u32, r: u32, i: usize) -> Rational {
    let k = binomial_u64(n as u64, r as u64).expect("C(n,r) fits u64") as i64;
    ratio(n as i64, r as i64) / int(k - i as i64 + 1)
}

/// Exact conditional mean of `ξ` for the next deletion from `h`: the
/// average over `A ∈ h` of `w_h(A)/Φ(h)`.
pub fn conditional_xi_mean(h: &Hypergraph, engine: &Engine) -> Result<Rational> {
    let spec = engine.weight_table(h, &WeightScope::Edges)?;
    if spec.total.is_zero() {
        return Err(Error::NoPerfectMatching);
    }
    let sum = spec.sum();
    Ok(ratio_from_uint(&sum, &spec.total) / int(h.num_edges() as u64))
}

/// Deletion trace from `K` down to `m_final` edges along a permutation drawn
/// from `seed`.
pub fn run_deletion_trace(
    n: u32,
    r: u32,
    m_final: usize,
    seed: u64,
    params: &ToleranceParams,
    engine: &Engine,
) -> Result<DeletionTrace> {
    let perm = sample_permutation(n, r, seed)?;
    trace_along(&perm, m_final, params, engine)
}

/// Deletion trace along an explicit permutation: step `i` removes
/// `perm.order[i-1]`.
pub fn trace_along(
    perm: &EdgePermutation,
    m_final: usize,
    params: &ToleranceParams,
    engine: &Engine,
) -> Result<DeletionTrace> {
    let (n, r) = (perm.n, perm.r);
    let k = perm.len();
    if m_final > k {
        return Err(Error::invalid(format!("M = {m_final} exceeds C({n},{r}) = {k}")));
    }
    params.validate()?;
    let steps_total = k - m_final;
    let mut h = Hypergraph::complete(n, r)?;
    let mut spec = engine.weight_table(&h, &WeightScope::Edges)?;
    let phi0 = spec.total.clone();
    let b0 = b_flag(&spec, params);
    let mut all_b = b0;
    let mut gamma_sum = Rational::zero();
    let mut x = Rational::zero();
    let mut steps = Vec::with_capacity(steps_total);
    let mut aborted_at = None;

    for i in 1..=steps_total {
        let edge = perm.order[i - 1];
        let phi_prev = spec.total.clone();
        if phi_prev.is_zero() {
            aborted_at = Some(i);
            break;
        }
        let w = spec
            .entries
            .iter()
            .find(|(e, _)| *e == edge)
            .map(|(_, w)| w.clone())
            .expect("A_i is an edge of H_{i-1}");
        let xi = ratio_from_uint(&w, &phi_prev);
        let g = gamma(n, r, i);
        gamma_sum += &g;
        let z = if all_b { &xi - &g } else { Rational::zero() };
        x += &z;

        h = h.without_edges(&[edge]);
        spec = engine.weight_table(&h, &WeightScope::Edges)?;
        debug_assert_eq!(spec.total, &phi_prev - &w);
        let flag_b = b_flag(&spec, params);
        let flag_a = properties::a_holds(&spec.total, &phi0, &gamma_sum, params.slack_a);
        let flag_r = properties::r_check(&h, params).holds;
        all_b &= flag_b;
        steps.push(TraceStep {
            step: i,
            edge,
            xi,
            gamma: g,
            phi: spec.total.clone(),
            z,
            x: x.clone(),
            flag_a,
            flag_b,
            flag_r,
            maxr: maxr_of(&spec).ok(),
        });
    }
    Ok(DeletionTrace {
        n,
        r,
        m_final,
        seed: perm.seed,
        phi0,
        b0,
        steps,
        aborted_at,
        params: params.clone(),
    })
}

fn b_flag(spec: &WeightSpectrum, params: &ToleranceParams) -> bool {
    match maxr_of(spec) {
        Ok(m) => properties::b_holds(&m, params),
        Err(_) => false,
    }
}

/// Everything the label-coupling reduction constructs for one sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub n: u32,
    pub r: u32,
    pub eps: f64,
    pub g: f64,
    pub seed: u64,
    /// `(log n - g) / C(n-1, r-1)`.
    pub sigma: f64,
    /// `(log n + g) / C(n-1, r-1)`.
    pub beta: f64,
    /// `⌊ε log n⌋`.
    pub delta0: i64,
    /// Label at which `G_λ` first has no isolated vertex.
    pub lambda_stop: f64,
    pub t_hit: usize,
    /// Vertices with `d_σ(v) < δ₀` (1-based labels).
    pub w_sigma: Vec<u32>,
    /// `(x, A_x)`: first (colex) stopping-label edge at each `x ∈ W_σ`.
    pub a_x: Vec<(u32, String)>,
    pub u: Vec<u32>,
    pub w: Vec<u32>,
    pub n_prime: usize,
    /// `(x, δ_x)` for `x ∈ W`.
    pub delta_x: Vec<(u32, i64)>,
    /// Edges of `H* = G_σ[W]`.
    pub h_star_edges: usize,
    /// `ε log(e/ε)`, the exponent scale in check (a).
    pub alpha: f64,
    /// `|W_σ| < n^{2α}`.
    pub check_a: bool,
    /// `σ < Λ < β`.
    pub check_b: bool,
    /// No `β`-edge meets `W_σ` twice, and no `u ∉ W_σ` lies in two
    /// `β`-edges meeting `Y \ {u}`.
    pub check_c: bool,
    /// The `A_x` are distinct and pairwise disjoint.
    pub ax_disjoint: bool,
    /// No vertex of `W` lies in two `σ`-edges meeting `W_σ ∪ U`.
    pub whp2: bool,
    /// Every `δ_x ∈ {δ₀, δ₀ - 1}`.
    pub delta_in_range: bool,
    /// `d_{H*}(x) ≥ δ_x` for all `x ∈ W`.
    pub event_l: bool,
}

/// Label-coupling reduction for one sample.
pub fn run_reduction_sim(n: u32, r: u32, eps: f64, g: f64, seed: u64) -> Result<ReductionReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("ε = {eps} must lie in (0,1)")));
    }
    if !(g > 0.0 && g.is_finite()) {
        return Err(Error::invalid(format!("g = {g} must be positive")));
    }
    let perm = sample_permutation(n, r, seed)?;
    reduction_for(&perm, eps, g)
}

/// Reduction construction on a labelled permutation.
pub fn reduction_for(perm: &EdgePermutation, eps: f64, g: f64) -> Result<ReductionReport> {
    let (n, r) = (perm.n, perm.r);
    let ln_n = (n as f64).ln();
    let deg_k = binomial_u64(n as u64 - 1, r as u64 - 1).expect("fits") as f64;
    let sigma = (ln_n - g) / deg_k;
    let beta = (ln_n + g) / deg_k;
    let delta0 = (eps * ln_n).floor() as i64;
    let labels: Vec<f64> = (0..perm.len())
        .map(|i| perm.label(i))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::invalid("reduction needs a label-coupled permutation"))?;

    // Edges sorted by label; G_λ is a prefix of `order`.
    let prefix_len = |lambda: f64| labels.partition_point(|&l| l <= lambda);
    let g_sigma = &perm.order[..prefix_len(sigma)];
    let g_beta = &perm.order[..prefix_len(beta)];

    let full = full_mask(n);
    let mut covered = 0u64;
    let mut t_hit = 0;
    for (i, a) in perm.order.iter().enumerate() {
        covered |= a.mask();
        if covered == full {
            t_hit = i + 1;
            break;
        }
    }
    let lambda_stop = labels[t_hit - 1];
    let g_lambda = &perm.order[..t_hit];

    let deg_sigma = degrees(n, g_sigma);
    let w_sigma: u64 = (0..n)
        .filter(|&v| (deg_sigma[v as usize] as i64) < delta0)
        .fold(0, |m, v| m | 1 << v);

    // A_x: the colex-first Λ-edge through x.
    let mut a_x: Vec<(u32, RSet)> = Vec::new();
    for x in bits(w_sigma) {
        let first = g_lambda
            .iter()
            .filter(|a| a.contains(x))
            .min()
            .copied()
            .expect("G_Λ has no isolated vertex");
        a_x.push((x, first));
    }
    let ax_union = a_x.iter().fold(0u64, |m, (_, a)| m | a.mask());
    let ax_disjoint = {
        let total: u32 = a_x
            .iter()
            .map(|(_, a)| *a)
            .collect::<std::collections::BTreeSet<_>>()
            .iter()
            .map(|a| a.size())
            .sum();
        let distinct = a_x
            .iter()
            .map(|(_, a)| *a)
            .collect::<std::collections::BTreeSet<_>>()
            .len()
            == a_x.len();
        distinct && total == ax_union.count_ones()
    };
    let u = ax_union & !w_sigma;
    let w = full & !(w_sigma | u);
    let outside = w_sigma | u;

    // Check (c).
    let y = g_beta
        .iter()
        .filter(|a| a.mask() & w_sigma != 0)
        .fold(w_sigma, |m, a| m | a.mask());
    let c_first = g_beta.iter().all(|a| (a.mask() & w_sigma).count_ones() <= 1);
    let c_second = bits(full & !w_sigma).all(|v| {
        let y_minus = y & !(1u64 << v);
        g_beta
            .iter()
            .filter(|a| a.contains(v) && a.mask() & y_minus != 0)
            .count()
            <= 1
    });

    // δ_x and whp2.
    let mut delta_x = Vec::new();
    let mut whp2 = true;
    for x in bits(w) {
        let hits = g_sigma
            .iter()
            .filter(|a| a.contains(x) && a.mask() & outside != 0)
            .count() as i64;
        whp2 &= hits <= 1;
        delta_x.push((x + 1, delta0 - hits));
    }
    let delta_in_range = delta_x
        .iter()
        .all(|&(_, d)| d == delta0 || d == delta0 - 1);

    let h_star: Vec<RSet> = g_sigma
        .iter()
        .copied()
        .filter(|a| a.mask() & !w == 0)
        .collect();
    let deg_star = degrees(n, &h_star);
    let event_l = delta_x
        .iter()
        .all(|&(x, d)| deg_star[(x - 1) as usize] as i64 >= d);

    let alpha = eps * (std::f64::consts::E / eps).ln();
    Ok(ReductionReport {
        n,
        r,
        eps,
        g,
        seed: perm.seed,
        sigma,
        beta,
        delta0,
        lambda_stop,
        t_hit,
        w_sigma: bits(w_sigma).map(|v| v + 1).collect(),
        a_x: a_x.iter().map(|&(x, a)| (x + 1, a.label())).collect(),
        u: bits(u).map(|v| v + 1).collect(),
        w: bits(w).map(|v| v + 1).collect(),
        n_prime: w.count_ones() as usize,
        delta_x,
        h_star_edges: h_star.len(),
        alpha,
        check_a: (w_sigma.count_ones() as f64) < (n as f64).powf(2.0 * alpha),
        check_b: sigma < lambda_stop && lambda_stop < beta,
        check_c: c_first && c_second,
        ax_disjoint,
        whp2,
        delta_in_range,
        event_l,
    })
}

fn degrees(n: u32, edges: &[RSet]) -> Vec<u64> {
    let mut d = vec![0u64; n as usize];
    for e in edges {
        for v in e.vertices() {
            d[v as usize] += 1;
        }
    }
    d
}

/// Frequencies of the reduction checks over `seeds` consecutive seeds
/// starting at `seed`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionSummary {
    pub runs: u64,
    pub check_a: Proportion,
    pub check_b: Proportion,
    pub check_c: Proportion,
    pub whp2: Proportion,
    /// Runs where `Λ < β` and (c) held but some `δ_x` left `{δ₀, δ₀-1}`.
    pub delta_violations: u64,
    /// Runs where `L` failed on `H*`.
    pub event_l_violations: u64,
}

pub fn run_reduction_batch(
    n: u32,
    r: u32,
    eps: f64,
    g: f64,
    seed: u64,
    runs: u64,
    workers: usize,
) -> Result<(Vec<ReductionReport>, ReductionSummary)> {
    let reports = with_workers(workers, || {
        (0..runs)
            .into_par_iter()
            .map(|i| run_reduction_sim(n, r, eps, g, seed.wrapping_add(i)))
            .collect::<Result<Vec<_>>>()
    })?;
    let count = |f: &dyn Fn(&ReductionReport) -> bool| {
        Proportion::new(reports.iter().filter(|x| f(x)).count() as u64, runs)
    };
    let summary = ReductionSummary {
        runs,
        check_a: count(&|x| x.check_a),
        check_b: count(&|x| x.check_b),
        check_c: count(&|x| x.check_c),
        whp2: count(&|x| x.whp2),
        delta_violations: reports
            .iter()
            .filter(|x| x.lambda_stop < x.beta && x.check_c && !x.delta_in_range)
            .count() as u64,
        event_l_violations: reports.iter().filter(|x| !x.event_l).count() as u64,
    };
    Ok((reports, summary))
}
