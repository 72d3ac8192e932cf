//! Entropy of a uniformly random perfect matching.
//!
//! `h(v,H)` is the entropy of the edge containing `v`; Shearer's bound says
//! `log Φ(H) ≤ r^{-1}·Σ_v h(v,H)`. The sharper decomposition reported by
//! [`tcuckler_report`] subtracts `(r-1)n/r` at the price of an error driven
//! by `γ_v(Y)`, the probability that the `r-1` vertices of `Y` do not sit
//! in distinct other edges. [`ordering_histogram`] enumerates every vertex
//! ordering to expose the size distribution of the candidate set `Z`
//! behind that argument.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng as _;
use rand_distr::{Distribution, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    factorial, falling_factorial, fmt_ratio, int, ln_biguint, ratio, ratio_from_uint, to_f64,
    Rational,
};
use crate::hypergraph::{bits, full_mask, rsets_of, Hypergraph, RSet};
use crate::pm::{Engine, Matching, WeightScope};
use crate::rng::stream_rng;
use crate::stats::Proportion;

/// Probabilities summing to 1 within `1e-12`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(Error::invalid("probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(total));
        }
        Ok(FiniteDistribution { probs })
    }

    /// Exact probabilities; must sum to exactly 1.
    pub fn from_rationals(probs: &[Rational]) -> Result<Self> {
        let total: Rational = probs.iter().sum();
        if total != int(1) || probs.iter().any(|p| *p < int(0)) {
            return Err(Error::NotNormalized(to_f64(&total)));
        }
        Ok(FiniteDistribution {
            probs: probs.iter().map(to_f64).collect(),
        })
    }

    /// Uniform on `l` points.
    pub fn uniform(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::invalid("uniform distribution on zero points"));
        }
        Ok(FiniteDistribution {
            probs: vec![1.0 / l as f64; l],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Entropy in nats, with `0·log 0 = 0`.
pub fn entropy(d: &FiniteDistribution) -> f64 {
    -d.probs
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

/// `Σ_i |p_i - 1/l|`.
pub fn tv_uniform(d: &FiniteDistribution) -> f64 {
    let u = 1.0 / d.len() as f64;
    d.probs.iter().map(|p| (p - u).abs()).sum()
}

/// `-Σ (w/Φ)·log(w/Φ)` with logs of the big integers taken separately.
fn entropy_of_counts<'a>(ws: impl IntoIterator<Item = &'a BigUint>, phi: &BigUint) -> f64 {
    let ln_phi = ln_biguint(phi);
    let mut h = 0.0;
    for w in ws {
        if w.is_zero() {
            continue;
        }
        let p = to_f64(&ratio_from_uint(w, phi));
        h -= p * (ln_biguint(w) - ln_phi);
    }
    h
}

/// `p_v(Y) = w_H(Y ∪ v)/Φ(H)` for every edge through `v`, exactly.
pub fn vertex_distribution(
    h: &Hypergraph,
    v: u32,
    engine: &Engine,
) -> Result<Vec<(RSet, Rational)>> {
    if v >= h.n() || h.active() >> v & 1 == 0 {
        return Err(Error::NotActive {
            mask: 1 << v.min(63),
            active: h.active(),
        });
    }
    let through: Vec<RSet> = h.edges().iter().copied().filter(|e| e.contains(v)).collect();
    let spec = engine.weight_table(h, &WeightScope::Explicit(through))?;
    if spec.total.is_zero() {
        return Err(Error::NoPerfectMatching);
    }
    Ok(spec
        .entries
        .iter()
        .map(|(e, w)| (*e, ratio_from_uint(w, &spec.total)))
        .collect())
}

/// `h(v,H)` in nats.
pub fn vertex_entropy(h: &Hypergraph, v: u32, engine: &Engine) -> Result<f64> {
    vertex_entropies(h, engine)?[v as usize].ok_or(Error::NotActive {
        mask: 1 << v.min(63),
        active: h.active(),
    })
}

/// `h(v,H)` for every vertex (`None` for inactive ones), from one edge
/// weight table.
pub fn vertex_entropies(h: &Hypergraph, engine: &Engine) -> Result<Vec<Option<f64>>> {
    let spec = engine.weight_table(h, &WeightScope::Edges)?;
    if spec.total.is_zero() {
        return Err(Error::NoPerfectMatching);
    }
    let mut out = vec![None; h.n() as usize];
    for v in bits(h.active()) {
        let ws = spec
            .entries
            .iter()
            .filter(|(e, _)| e.contains(v))
            .map(|(_, w)| w);
        out[v as usize] = Some(entropy_of_counts(ws, &spec.total));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShearerGap {
    /// `log Φ(H)`.
    pub lhs: f64,
    /// `r^{-1}·Σ_v h(v,H)`.
    pub rhs: f64,
}

impl ShearerGap {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + 1e-9
    }
}

pub fn shearer_gap(h: &Hypergraph, engine: &Engine) -> Result<ShearerGap> {
    let hs = vertex_entropies(h, engine)?;
    let phi = engine.count(h)?;
    let sum: f64 = hs.iter().flatten().sum();
    Ok(ShearerGap {
        lhs: ln_biguint(&phi),
        rhs: sum / h.r() as f64,
    })
}

/// `τ(v,f,Y)`: edges of `f` other than `f_v` meeting `Y`.
pub fn tau(v: u32, f: &[RSet], y: u64) -> u32 {
    f.iter()
        .filter(|e| !e.contains(v) && e.mask() & y != 0)
        .count() as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauRow {
    /// 1-based vertex.
    pub v: u32,
    /// `Y` as a 1-based label.
    pub y: String,
    /// Exact `p_v(Y)`.
    pub p: String,
    pub gamma: f64,
    /// Exact in exhaustive mode.
    pub gamma_exact: Option<String>,
    /// 95% Wilson interval in Monte Carlo mode.
    pub gamma_ci: Option<(f64, f64)>,
    /// Matchings (or samples) by `τ = 0, 1, …, r-1`.
    pub tau_hist: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TCucklerReport {
    pub mode: String,
    pub n_active: u32,
    pub r: u32,
    pub samples: u64,
    /// `log Φ(H)`.
    pub lhs: f64,
    /// `r^{-1}·Σ_v h(v,H) - (r-1)n/r`.
    pub mainterm: f64,
    pub lambda_energy: f64,
    /// `Σ_v Σ_Y p_v(Y)·γ_v(Y)^{1/(r-1)}`.
    pub error_sum: f64,
    pub rows: Vec<TauRow>,
}

/// Trials per random stream in Monte Carlo mode.
const MC_BATCH: u64 = 256;

/// Both sides of the entropy decomposition; the inequality is reported, not
/// asserted.
pub fn tcuckler_report(
    h: &Hypergraph,
    sampling: Sampling,
    engine: &Engine,
) -> Result<TCucklerReport> {
    let r = h.r();
    if sampling == Sampling::Exhaustive && h.num_active() > engine.enumeration_limit {
        return Err(Error::GuardViolation {
            active: h.num_active(),
            limit: engine.enumeration_limit,
        });
    }
    let spec = engine.weight_table(h, &WeightScope::Edges)?;
    let phi = spec.total.clone();
    if phi.is_zero() {
        return Err(Error::NoPerfectMatching);
    }
    let pairs: Vec<(u32, u64, usize)> = spec
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, (e, _))| e.vertices().map(move |v| (v, e.mask() & !(1 << v), i)))
        .collect();
    let tally = |f: &Matching, hist: &mut [u64]| {
        for (j, &(v, y, _)) in pairs.iter().enumerate() {
            hist[j * r as usize + tau(v, f, y) as usize] += 1;
        }
    };
    let width = pairs.len() * r as usize;
    let (hist, samples, mode) = match sampling {
        Sampling::Exhaustive => {
            let pms = engine.enumerate(h)?;
            let hist = pms
                .par_iter()
                .fold(
                    || vec![0u64; width],
                    |mut acc, f| {
                        tally(f, &mut acc);
                        acc
                    },
                )
                .reduce(|| vec![0u64; width], add_vecs);
            (hist, pms.len() as u64, "exhaustive".to_string())
        }
        Sampling::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(Error::invalid("Monte Carlo mode needs at least one trial"));
            }
            let sampler = PmSampler::new(h, engine)?;
            let batches = trials.div_ceil(MC_BATCH);
            let hist = (0..batches)
                .into_par_iter()
                .map(|b| {
                    let mut rng = stream_rng(seed, b);
                    let mut acc = vec![0u64; width];
                    let hi = ((b + 1) * MC_BATCH).min(trials);
                    for _ in b * MC_BATCH..hi {
                        let f = sampler.sample(&mut rng);
                        tally(&f, &mut acc);
                    }
                    acc
                })
                .reduce(|| vec![0u64; width], add_vecs);
            (hist, trials, format!("monte-carlo(trials={trials}, seed={seed})"))
        }
    };

    let n_active = h.num_active();
    let lambda_energy = (r as f64 - 1.0) * n_active as f64 / r as f64;
    let hs = vertex_entropies(h, engine)?;
    let sum_h: f64 = hs.iter().flatten().sum();
    let mut rows = Vec::with_capacity(pairs.len());
    let mut error_sum = 0.0;
    for (j, &(v, y, i)) in pairs.iter().enumerate() {
        let th = hist[j * r as usize..(j + 1) * r as usize].to_vec();
        let generic = th[r as usize - 1];
        let non_generic = samples - generic;
        let p = ratio_from_uint(&spec.entries[i].1, &phi);
        let (gamma, gamma_exact, gamma_ci) = if sampling == Sampling::Exhaustive {
            let g = ratio(non_generic, samples);
            (to_f64(&g), Some(fmt_ratio(&g)), None)
        } else {
            let prop = Proportion::new(non_generic, samples);
            (prop.p_hat, None, Some((prop.lo, prop.hi)))
        };
        error_sum += to_f64(&p) * gamma.powf(1.0 / (r as f64 - 1.0));
        rows.push(TauRow {
            v: v + 1,
            y: bits(y).map(|u| (u + 1).to_string()).collect::<Vec<_>>().join("-"),
            p: fmt_ratio(&p),
            gamma,
            gamma_exact,
            gamma_ci,
            tau_hist: th,
        });
    }
    Ok(TCucklerReport {
        mode,
        n_active,
        r,
        samples,
        lhs: ln_biguint(&phi),
        mainterm: sum_h / r as f64 - lambda_energy,
        lambda_energy,
        error_sum,
        rows,
    })
}

fn add_vecs(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Uniform perfect matchings: by index into the full list when it is
/// enumerable, otherwise edge by edge from the dense subset table.
enum PmSampler<'a> {
    List(Vec<Matching>),
    Table(&'a Hypergraph, &'a Engine, crate::pm::SubsetTable),
}

impl<'a> PmSampler<'a> {
    fn new(h: &'a Hypergraph, engine: &'a Engine) -> Result<Self> {
        if h.num_active() <= engine.enumeration_limit {
            let pms = engine.enumerate(h)?;
            if pms.is_empty() {
                return Err(Error::NoPerfectMatching);
            }
            Ok(PmSampler::List(pms))
        } else {
            Ok(PmSampler::Table(h, engine, engine.subset_table(h)?))
        }
    }

    fn sample(&self, rng: &mut crate::rng::Rng) -> Matching {
        match self {
            PmSampler::List(pms) => pms[rng.random_range(0..pms.len())].clone(),
            PmSampler::Table(h, engine, table) => engine
                .sample_matching(h, table, rng)
                .expect("matchings exist"),
        }
    }
}

/// Largest `n` whose `n!` orderings are enumerated.
pub const MAX_ORDERING_N: u32 = 10;

/// Counts over all `n!` orderings of `V`, for one perfect matching `f` of
/// `K`: for each vertex `v` and each set `P` of `f`-edges, how many
/// orderings put `v` first in `f_v` with exactly the edges `P` started
/// before it. Under that event `Z = V \ {v} \ ∪P`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingHistogram {
    pub n: u32,
    pub r: u32,
    pub f: Vec<RSet>,
    /// `counts[v · 2^{n/r} + P]`.
    counts: Vec<u64>,
    pub orderings: u64,
}

fn check_ordering_dims(n: u32, r: u32) -> Result<()> {
    if n > MAX_ORDERING_N {
        return Err(Error::GuardViolation {
            active: n,
            limit: MAX_ORDERING_N,
        });
    }
    if r < 2 || !n.is_multiple_of(r) || n < 3 * r {
        // At n = 2r the falling factorial (n/r - 1)_{r-1} vanishes, the
        // closed form is 0/0, and no matching avoids Γ_v(Y).
        return Err(Error::invalid(format!(
            "ordering tables need r ≥ 2, r | n and n ≥ 3r (got n = {n}, r = {r})"
        )));
    }
    Ok(())
}

pub fn ordering_histogram(n: u32, r: u32, f: &[RSet]) -> Result<OrderingHistogram> {
    check_ordering_dims(n, r)?;
    let edges = (n / r) as usize;
    let mut edge_of = vec![usize::MAX; n as usize];
    if f.len() != edges {
        return Err(Error::invalid("f must have n/r edges"));
    }
    for (i, e) in f.iter().enumerate() {
        if e.size() != r {
            return Err(Error::MalformedEdge(format!("{e:?} is not an {r}-set")));
        }
        for v in e.vertices() {
            if v >= n || edge_of[v as usize] != usize::MAX {
                return Err(Error::invalid("f is not a perfect matching of K"));
            }
            edge_of[v as usize] = i;
        }
    }
    let mut counts = vec![0u64; n as usize * (1 << edges)];
    let mut record = |perm: &[u32]| {
        let mut started = 0usize;
        for &u in perm {
            let e = edge_of[u as usize];
            if started >> e & 1 == 0 {
                counts[(u as usize) << edges | started] += 1;
                started |= 1 << e;
            }
        }
    };
    // Heap's algorithm.
    let mut perm: Vec<u32> = (0..n).collect();
    let mut c = vec![0usize; n as usize];
    record(&perm);
    let mut orderings = 1u64;
    let mut i = 1;
    while i < n as usize {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            record(&perm);
            orderings += 1;
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(OrderingHistogram {
        n,
        r,
        f: f.to_vec(),
        counts,
        orderings,
    })
}

impl OrderingHistogram {
    fn edges(&self) -> usize {
        self.f.len()
    }

    /// `(Z, count)` over the prefix-edge sets for vertex `v`.
    fn z_counts(&self, v: u32) -> impl Iterator<Item = (u64, u64)> + '_ {
        let k = self.edges();
        let full = full_mask(self.n) & !(1 << v);
        (0..1usize << k).filter_map(move |p| {
            let c = self.counts[(v as usize) << k | p];
            (c > 0).then(|| {
                let covered = bits(p as u64).fold(0, |acc, i| acc | self.f[i as usize].mask());
                (full & !covered, c)
            })
        })
    }

    /// Raw counts behind `q_k(f)` for `k = 0..n`.
    fn q_counts(&self, v: u32) -> Vec<u64> {
        let mut out = vec![0u64; self.n as usize];
        for (z, c) in self.z_counts(v) {
            out[z.count_ones() as usize] += c;
        }
        out
    }

    /// Raw counts behind `s_k(f)` for `k = 0..n`.
    fn s_counts(&self, v: u32, y: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.n as usize];
        for (z, c) in self.z_counts(v) {
            if z & y == y {
                out[z.count_ones() as usize] += c;
            }
        }
        out
    }

    /// `q_k(f) = P(S, |Z| = k | f)` for `k = 0..n`.
    pub fn q(&self, v: u32) -> Vec<Rational> {
        self.q_counts(v)
            .into_iter()
            .map(|c| ratio(c, self.orderings))
            .collect()
    }

    /// `s_k(f) = P(S, |Z| = k, Z ⊇ Y | f)` for `k = 0..n`.
    pub fn s(&self, v: u32, y: u64) -> Vec<Rational> {
        self.s_counts(v, y)
            .into_iter()
            .map(|c| ratio(c, self.orderings))
            .collect()
    }
}

fn k_class(n: u32, r: u32, k: u32) -> Option<u32> {
    (k >= r - 1 && k < n && (k + 1).is_multiple_of(r)).then(|| (k + 1 - r) / r)
}

/// `1/n` on `k ∈ {r-1, 2r-1, …, n-1}`, else 0.
pub fn q_closed(n: u32, r: u32, k: u32) -> Rational {
    match k_class(n, r, k) {
        Some(_) => ratio(1, n),
        None => int(0),
    }
}

/// `(1/n)·(j)_τ/(n/r - 1)_τ` with `j = (k-r+1)/r` on the same support.
/// With `τ = r - 1` this is the generic value `s_k`.
pub fn s_closed(n: u32, r: u32, k: u32, tau: u32) -> Rational {
    match k_class(n, r, k) {
        Some(j) => {
            let num = falling_factorial(j as i64, tau as u64);
            let den = falling_factorial((n / r - 1) as i64, tau as u64);
            Rational::new(num, den) / int(n)
        }
        None => int(0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QsRow {
    pub k: u32,
    pub q: String,
    pub q_closed: String,
    pub s: String,
    /// Generic closed form (`τ = r-1`).
    pub s_closed: String,
    /// Closed form at the actual `τ`.
    pub s_tau: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QsTable {
    pub v: u32,
    pub y: String,
    pub tau: u32,
    /// `τ < r-1`.
    pub in_gamma: bool,
    pub q_ok: bool,
    /// Checked only when `f ∉ Γ_v(Y)`.
    pub s_ok: Option<bool>,
    pub s_tau_ok: bool,
    pub rows: Vec<QsRow>,
}

fn check_vy(n: u32, r: u32, v: u32, y: u64) -> Result<()> {
    if v >= n || y >> v & 1 == 1 || y & !full_mask(n) != 0 || y.count_ones() != r - 1 {
        return Err(Error::invalid("need v ∈ V and an (r-1)-set Y ⊆ V \\ {v}"));
    }
    Ok(())
}

/// The q/s table for one `(f, v, Y)` from a histogram.
pub fn qs_table(hist: &OrderingHistogram, v: u32, y: u64) -> Result<QsTable> {
    let (n, r) = (hist.n, hist.r);
    check_vy(n, r, v, y)?;
    let t = tau(v, &hist.f, y);
    let q = hist.q(v);
    let s = hist.s(v, y);
    let mut rows = Vec::with_capacity(n as usize);
    let (mut q_ok, mut s_ok, mut s_tau_ok) = (true, true, true);
    for k in 0..n {
        let qc = q_closed(n, r, k);
        let sc = s_closed(n, r, k, r - 1);
        let st = s_closed(n, r, k, t);
        q_ok &= q[k as usize] == qc;
        s_ok &= s[k as usize] == sc;
        s_tau_ok &= s[k as usize] == st;
        rows.push(QsRow {
            k,
            q: fmt_ratio(&q[k as usize]),
            q_closed: fmt_ratio(&qc),
            s: fmt_ratio(&s[k as usize]),
            s_closed: fmt_ratio(&sc),
            s_tau: fmt_ratio(&st),
        });
    }
    let in_gamma = t < r - 1;
    Ok(QsTable {
        v: v + 1,
        y: bits(y).map(|u| (u + 1).to_string()).collect::<Vec<_>>().join("-"),
        tau: t,
        in_gamma,
        q_ok,
        s_ok: (!in_gamma).then_some(s_ok),
        s_tau_ok,
        rows,
    })
}

/// Enumerate all `n!` orderings for `f` and tabulate `q_k(f)`, `s_k(f)`.
pub fn qk_sk_exhaustive(n: u32, r: u32, f: &[RSet], v: u32, y: u64) -> Result<QsTable> {
    check_vy(n, r, v, y)?;
    qs_table(&ordering_histogram(n, r, f)?, v, y)
}

/// `r_k ≤ γ·q_k + (1-γ)·s_k` for the uniform mixture over `ensemble`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixtureCheck {
    pub v: u32,
    pub y: String,
    pub gamma: String,
    /// `(k, r_k, bound)`.
    pub rows: Vec<(u32, String, String)>,
    pub holds: bool,
}

pub fn mixture_check(ensemble: &[OrderingHistogram], v: u32, y: u64) -> Result<MixtureCheck> {
    let first = ensemble
        .first()
        .ok_or_else(|| Error::invalid("empty ensemble"))?;
    let (n, r) = (first.n, first.r);
    check_vy(n, r, v, y)?;
    let size = ensemble.len() as u64;
    let mut sums = vec![0u64; n as usize];
    let mut in_gamma = 0u64;
    for hist in ensemble {
        if tau(v, &hist.f, y) < r - 1 {
            in_gamma += 1;
        }
        for (acc, c) in sums.iter_mut().zip(hist.s_counts(v, y)) {
            *acc += c;
        }
    }
    let gamma = ratio(in_gamma, size);
    let one = int(1);
    let mut holds = true;
    let mut rows = Vec::new();
    for k in 0..n {
        let rk = ratio(sums[k as usize], first.orderings * size);
        let bound = &gamma * q_closed(n, r, k) + (&one - &gamma) * s_closed(n, r, k, r - 1);
        holds &= rk <= bound;
        rows.push((k, fmt_ratio(&rk), fmt_ratio(&bound)));
    }
    Ok(MixtureCheck {
        v: v + 1,
        y: bits(y).map(|u| (u + 1).to_string()).collect::<Vec<_>>().join("-"),
        gamma: fmt_ratio(&gamma),
        rows,
        holds,
    })
}

/// Outcome of checking every `(f, v, Y)` on `K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QsSummary {
    pub n: u32,
    pub r: u32,
    pub matchings: u64,
    pub orderings: u64,
    pub triples: u64,
    pub q_failures: u64,
    /// Triples with `f ∉ Γ_v(Y)`, and failures among them.
    pub generic_triples: u64,
    pub s_failures: u64,
    pub s_tau_failures: u64,
    /// `(v, Y)` pairs whose uniform-over-`K` mixture bound was checked.
    pub mixture_pairs: u64,
    pub mixture_failures: u64,
}

impl QsSummary {
    pub fn passed(&self) -> bool {
        self.q_failures == 0
            && self.s_failures == 0
            && self.s_tau_failures == 0
            && self.mixture_failures == 0
    }
}

/// All perfect matchings of `K_n^{(r)}` in a fixed order.
pub fn complete_matchings(n: u32, r: u32, engine: &Engine) -> Result<Vec<Matching>> {
    engine.enumerate(&Hypergraph::complete(n, r)?)
}

/// Histograms for every perfect matching of `K`, in enumeration order.
pub fn all_histograms(n: u32, r: u32, engine: &Engine) -> Result<Vec<OrderingHistogram>> {
    check_ordering_dims(n, r)?;
    complete_matchings(n, r, engine)?
        .par_iter()
        .map(|f| ordering_histogram(n, r, f))
        .collect()
}

/// Check every perfect matching of `K` against every `(v, Y)`, and the
/// mixture bound for every `(v, Y)` over the uniform ensemble.
pub fn qs_verify_all(n: u32, r: u32, engine: &Engine) -> Result<QsSummary> {
    let hists = all_histograms(n, r, engine)?;
    let pairs: Vec<(u32, u64)> = (0..n)
        .flat_map(|v| {
            rsets_of(full_mask(n) & !(1 << v), r - 1)
                .into_iter()
                .map(move |y| (v, y.mask()))
        })
        .collect();
    let per_f: Vec<[u64; 5]> = hists
        .par_iter()
        .map(|hist| {
            let mut acc = [0u64; 5];
            for &(v, y) in &pairs {
                let t = qs_table(hist, v, y).expect("valid pair");
                acc[0] += 1;
                acc[1] += u64::from(!t.q_ok);
                if let Some(ok) = t.s_ok {
                    acc[2] += 1;
                    acc[3] += u64::from(!ok);
                }
                acc[4] += u64::from(!t.s_tau_ok);
            }
            acc
        })
        .collect();
    let tot = per_f.iter().fold([0u64; 5], |mut a, b| {
        for i in 0..5 {
            a[i] += b[i];
        }
        a
    });
    let mixture_failures = pairs
        .par_iter()
        .filter(|&&(v, y)| !mixture_check(&hists, v, y).expect("valid pair").holds)
        .count() as u64;
    Ok(QsSummary {
        n,
        r,
        matchings: hists.len() as u64,
        orderings: factorial(n as u64).to_u64().unwrap_or(u64::MAX),
        triples: tot[0],
        q_failures: tot[1],
        generic_triples: tot[2],
        s_failures: tot[3],
        s_tau_failures: tot[4],
        mixture_pairs: pairs.len() as u64,
        mixture_failures,
    })
}

/// Entropy gap versus total variation from uniform on random
/// distributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvSweep {
    pub l: usize,
    /// `(log l - H(p), ‖p - μ‖)` per sample.
    pub points: Vec<(f64, f64)>,
    /// `min gap / tv²` over samples with `tv > 0`: the empirical constant in
    /// `log l - H(p) ≥ c·‖p - μ‖²`.
    pub empirical_constant: f64,
    /// Every sample satisfies `‖p - μ‖ ≤ sqrt(2·gap)`.
    pub pinsker_ok: bool,
    /// Largest tv within each gap decile, by increasing gap.
    pub envelope: Vec<f64>,
}

/// Sweep `samples` random distributions on `l` points, from nearly uniform
/// to sharply peaked (`p_i ∝ u_i^a` with `a` spread over `[0, 8]`).
pub fn tv_entropy_sweep(l: usize, samples: usize, seed: u64) -> Result<TvSweep> {
    if l < 2 || samples == 0 {
        return Err(Error::invalid("sweep needs l ≥ 2 and at least one sample"));
    }
    let unit = Uniform::new(f64::MIN_POSITIVE, 1.0).expect("valid range");
    let mut points: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let a = 8.0 * i as f64 / samples as f64;
            let raw: Vec<f64> = (0..l).map(|_| unit.sample(&mut rng).powf(a)).collect();
            let total: f64 = raw.iter().sum();
            let mut probs: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let drift: f64 = 1.0 - probs.iter().sum::<f64>();
            probs[0] += drift;
            let d = FiniteDistribution {
                probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
            };
            ((l as f64).ln() - entropy(&d), tv_uniform(&d))
        })
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tol = 1e-12;
    let pinsker_ok = points
        .iter()
        .all(|&(gap, tv)| tv <= (2.0 * gap.max(0.0)).sqrt() + tol);
    let empirical_constant = points
        .iter()
        .filter(|p| p.1 > 1e-6)
        .map(|&(gap, tv)| gap / (tv * tv))
        .fold(f64::INFINITY, f64::min);
    let bins = 10.min(points.len());
    let envelope = (0..bins)
        .map(|b| {
            let lo = b * points.len() / bins;
            let hi = (b + 1) * points.len() / bins;
            points[lo..hi].iter().map(|p| p.1).fold(0.0, f64::max)
        })
        .collect();
    Ok(TvSweep {
        l,
        points,
        empirical_constant,
        pinsker_ok,
        envelope,
    })
}
