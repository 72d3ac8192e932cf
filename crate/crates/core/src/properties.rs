//! Finite-tolerance evaluators for the hypergraph properties A, R, B, C, D,
//! E, F, Q and V, and the distance-from-F functional `α(H)`.
//!
//! Asymptotic qualifiers become explicit numbers in [`ToleranceParams`]:
//! "a.a." / "a.e." means *fewer than a `frac` share are exceptions*, "`∼ x`"
//! means *within `(1 ± dev)·x`*, and "`≳ x`" means *at least `(1 - dev)·x`*.
//! Float parameters are converted to exact rationals (their binary value)
//! before any comparison, so verdicts depend only on exact weights.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    fmt_ratio, fmt_sig, from_f64, int, ln_error_bound, ln_ratio, ratio_from_uint, to_f64, Rational,
};
use crate::hypergraph::{bits, Hypergraph, RSet};
use crate::pm::{maxr_of, mean_edge_weight, Engine, SubsetTable, WeightScope};
use crate::processes::DeletionTrace;

/// Every constant the asymptotic statements leave implicit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceParams {
    /// Nats of slack in property A.
    pub slack_a: f64,
    /// Rg1: relative degree deviation and allowed exception share.
    pub r1_dev: f64,
    pub r1_frac: f64,
    /// Rg2: `Δ ≤ r2_hi·D` and `δ ≥ r2_lo·D`.
    pub r2_hi: f64,
    pub r2_lo: f64,
    /// Rg3: every codegree at most `r3·D`.
    pub r3: f64,
    /// B: cap on maxr of the edge weights.
    pub c_b: f64,
    /// E and F (and the a.e. parts of Q and V).
    pub ef_dev: f64,
    pub ef_frac: f64,
    /// Q/V fraction parameter θ.
    pub theta_qv: f64,
    /// C and D.
    pub c_dev: f64,
    pub c_frac: f64,
    /// Largeness floor for `w(Z) > Φ·floor`; `None` means `|V|^{-r}`.
    pub wz_floor: Option<f64>,
}

impl Default for ToleranceParams {
    fn default() -> Self {
        ToleranceParams {
            slack_a: 1.0,
            r1_dev: 0.2,
            r1_frac: 0.2,
            r2_hi: 9.0,
            r2_lo: 0.1,
            r3: 0.5,
            c_b: 4.0,
            ef_dev: 0.2,
            ef_frac: 0.2,
            theta_qv: 0.1,
            c_dev: 0.2,
            c_frac: 0.2,
            wz_floor: None,
        }
    }
}

impl ToleranceParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("slack_a", self.slack_a),
            ("r1_dev", self.r1_dev),
            ("r2_hi", self.r2_hi),
            ("r2_lo", self.r2_lo),
            ("r3", self.r3),
            ("c_b", self.c_b),
            ("ef_dev", self.ef_dev),
            ("c_dev", self.c_dev),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} = {v} must be positive")));
            }
        }
        let fractions = [
            ("r1_frac", self.r1_frac),
            ("ef_frac", self.ef_frac),
            ("theta_qv", self.theta_qv),
            ("c_frac", self.c_frac),
        ];
        for (name, v) in fractions {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(format!("{name} = {v} must lie in (0,1)")));
            }
        }
        if self.c_dev >= 1.0 {
            return Err(Error::invalid("c_dev must be below 1"));
        }
        if let Some(f) = self.wz_floor {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::invalid("wz_floor must lie in (0,1)"));
            }
        }
        Ok(())
    }
}

fn q(x: f64) -> Rational {
    from_f64(x).expect("validated parameters are finite")
}

/// Property names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    A,
    R,
    B,
    C,
    D,
    E,
    F,
    Q,
    V,
}

impl std::str::FromStr for PropertyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "A" => PropertyId::A,
            "R" => PropertyId::R,
            "B" => PropertyId::B,
            "C" => PropertyId::C,
            "D" => PropertyId::D,
            "E" => PropertyId::E,
            "F" => PropertyId::F,
            "Q" => PropertyId::Q,
            "V" => PropertyId::V,
            other => return Err(Error::invalid(format!("unknown property {other:?}"))),
        })
    }
}

/// Auxiliary inputs some properties need.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyAux {
    /// C: the r-set `Z` and a vertex `x ∈ Z`.
    pub z: Option<RSet>,
    pub x: Option<u32>,
    /// D: the reference r-set `Z₀`.
    pub z0: Option<RSet>,
    /// V: the removed set `T ⊆ H`, θ and ζ.
    pub t_set: Option<Vec<RSet>>,
    pub theta: Option<f64>,
    pub zeta: Option<f64>,
}

pub enum PropertyInput<'a> {
    Graph(&'a Hypergraph),
    /// A trace and a step `t` (0 means `H_0 = K`).
    Trace(&'a DeletionTrace, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: PropertyId,
    pub params: ToleranceParams,
    pub holds: bool,
    /// Offending element or exception count; present whenever `holds` is
    /// false.
    pub witness: Option<String>,
    /// Exact values behind the verdict (`num/den` for rationals).
    pub values: BTreeMap<String, String>,
}

struct Report {
    values: BTreeMap<String, String>,
    witness: Option<String>,
}

impl Report {
    fn new() -> Self {
        Report {
            values: BTreeMap::new(),
            witness: None,
        }
    }

    fn put(&mut self, k: &str, v: impl ToString) {
        self.values.insert(k.to_string(), v.to_string());
    }

    fn put_q(&mut self, k: &str, v: &Rational) {
        self.put(k, fmt_ratio(v));
    }

    fn finish(self, property: PropertyId, params: &ToleranceParams, holds: bool) -> PropertyReport {
        let witness = if holds {
            None
        } else {
            Some(self.witness.unwrap_or_else(|| "see values".into()))
        };
        PropertyReport {
            property,
            params: params.clone(),
            holds,
            witness,
            values: self.values,
        }
    }
}

/// `|w - target| ≤ dev·target`.
fn within(w: &Rational, target: &Rational, dev: &Rational) -> bool {
    (w - target).abs() <= dev * target
}

fn big(x: &BigUint) -> Rational {
    ratio_from_uint(x, &BigUint::one())
}

/// Property A: `log Φ_t > log Φ_0 - Σ_{i≤t} γ_i - slack`.
///
/// Logs are taken only here; the verdict is `true` only when the margin
/// stays positive after subtracting the worst-case rounding error.
pub fn a_holds(phi_t: &BigUint, phi0: &BigUint, gamma_sum: &Rational, slack: f64) -> bool {
    a_margin(phi_t, phi0, gamma_sum, slack).is_some_and(|(m, err)| m - err > 0.0)
}

/// Margin `log(Φ_t/Φ_0) + Σγ + slack` and its rounding bound; `None` if
/// `Φ_t = 0`.
fn a_margin(phi_t: &BigUint, phi0: &BigUint, gamma_sum: &Rational, slack: f64) -> Option<(f64, f64)> {
    if phi_t.is_zero() {
        return None;
    }
    let log_ratio = ln_ratio(&ratio_from_uint(phi_t, phi0));
    let g = to_f64(gamma_sum);
    let margin = log_ratio + g + slack;
    let err = ln_error_bound(log_ratio) + 4.0 * f64::EPSILON * (g.abs() + slack.abs() + margin.abs());
    Some((margin, err))
}

/// Outcome of the three degree conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct RCheck {
    pub holds: bool,
    pub rg1: bool,
    pub rg2: bool,
    pub rg3: bool,
    pub witness: Option<String>,
    pub values: BTreeMap<String, String>,
}

pub fn r_check(h: &Hypergraph, p: &ToleranceParams) -> RCheck {
    let stats = h.degree_stats();
    let d = stats.avg_degree.clone();
    let degrees = h.degrees();
    let active: Vec<u32> = bits(h.active()).collect();
    let band = q(p.r1_dev) * &d;
    let off: Vec<u32> = active
        .iter()
        .copied()
        .filter(|&v| (int(degrees[v as usize]) - &d).abs() > band)
        .collect();
    let rg1 = int(off.len() as u64) < q(p.r1_frac) * int(active.len() as u64);
    let hi_ok = int(stats.max_degree) <= q(p.r2_hi) * &d;
    let lo_ok = int(stats.min_degree) >= q(p.r2_lo) * &d;
    let rg2 = hi_ok && lo_ok;
    let rg3 = int(stats.max_codegree) <= q(p.r3) * &d;
    let witness = if !rg1 {
        Some(format!(
            "Rg1: {} of {} degrees off by more than r1_dev·D (first: vertex {})",
            off.len(),
            active.len(),
            off[0] + 1
        ))
    } else if !hi_ok {
        Some(format!("Rg2: max degree {} > r2_hi·D", stats.max_degree))
    } else if !lo_ok {
        Some(format!("Rg2: min degree {} < r2_lo·D", stats.min_degree))
    } else if !rg3 {
        Some(format!("Rg3: codegree {} > r3·D", stats.max_codegree))
    } else {
        None
    };
    let mut values = BTreeMap::new();
    values.insert("D".into(), fmt_ratio(&d));
    values.insert("min_degree".into(), stats.min_degree.to_string());
    values.insert("max_degree".into(), stats.max_degree.to_string());
    values.insert("max_codegree".into(), stats.max_codegree.to_string());
    values.insert("rg1_exceptions".into(), off.len().to_string());
    RCheck {
        holds: rg1 && rg2 && rg3,
        rg1,
        rg2,
        rg3,
        witness,
        values,
    }
}

/// Property B: `maxr ≤ c_b`.
pub fn b_holds(maxr: &Rational, p: &ToleranceParams) -> bool {
    *maxr <= q(p.c_b)
}

/// Weights of `h` with a cached dense table when available.
struct Weights<'a> {
    h: &'a Hypergraph,
    engine: &'a Engine,
    table: Option<SubsetTable>,
    phi: BigUint,
}

impl<'a> Weights<'a> {
    fn new(h: &'a Hypergraph, engine: &'a Engine) -> Result<Self> {
        let table = engine.subset_table(h).ok();
        let phi = match &table {
            Some(t) => t.get(h.active()),
            None => engine.count(h)?,
        };
        Ok(Weights {
            h,
            engine,
            table,
            phi,
        })
    }

    fn w(&self, z: RSet) -> Result<BigUint> {
        match &self.table {
            Some(t) => Ok(t.get(self.h.active() & !z.mask())),
            None => self.engine.weight(self.h, z),
        }
    }

    fn w_q(&self, z: RSet) -> Result<Rational> {
        Ok(big(&self.w(z)?))
    }

    /// `Φ(H)/D`.
    fn mean(&self) -> Result<Rational> {
        mean_edge_weight(self.h, &self.phi).ok_or(Error::NoPerfectMatching)
    }

    fn require_pm(&self) -> Result<()> {
        if self.phi.is_zero() {
            Err(Error::NoPerfectMatching)
        } else {
            Ok(())
        }
    }
}

fn wz_floor(h: &Hypergraph, p: &ToleranceParams) -> Rational {
    match p.wz_floor {
        Some(f) => q(f),
        None => Rational::one() / int(h.num_active() as u64).pow(h.r() as i32),
    }
}

/// Evaluate one property.
pub fn evaluate_property(
    input: PropertyInput<'_>,
    which: PropertyId,
    params: &ToleranceParams,
    aux: &PropertyAux,
    engine: &Engine,
) -> Result<PropertyReport> {
    params.validate()?;
    let h = match input {
        PropertyInput::Trace(trace, t) => {
            if which != PropertyId::A {
                return Err(Error::invalid(
                    "trace input only supports property A; pass the hypergraph for others",
                ));
            }
            return eval_a(trace, t, params);
        }
        PropertyInput::Graph(h) => h,
    };
    let mut rep = Report::new();
    let holds = match which {
        PropertyId::A => {
            return Err(Error::MissingAux(
                "property A is evaluated along a deletion trace".into(),
            ))
        }
        PropertyId::R => {
            let c = r_check(h, params);
            rep.values = c.values;
            rep.witness = c.witness;
            c.holds
        }
        PropertyId::B => {
            let spec = engine.weight_table(h, &WeightScope::Edges)?;
            let m = maxr_of(&spec)?;
            rep.put_q("maxr", &m);
            rep.put("phi", &spec.total);
            let ok = b_holds(&m, params);
            if !ok {
                let (arg, w) = spec
                    .entries
                    .iter()
                    .max_by(|a, b| a.1.cmp(&b.1))
                    .expect("edges present");
                rep.witness = Some(format!("edge {} has weight {w}", arg.label()));
            }
            ok
        }
        PropertyId::E | PropertyId::F => {
            let ws = Weights::new(h, engine)?;
            ws.require_pm()?;
            let target = ws.mean()?;
            let family = if which == PropertyId::E {
                h.edges().to_vec()
            } else {
                h.all_rsets()
            };
            let dev = q(params.ef_dev);
            let mut bad = Vec::new();
            for &z in &family {
                if !within(&ws.w_q(z)?, &target, &dev) {
                    bad.push(z);
                }
            }
            rep.put("phi", &ws.phi);
            rep.put_q("mean_weight", &target);
            rep.put("exceptions", bad.len());
            rep.put("family_size", family.len());
            let ok = int(bad.len() as u64) < q(params.ef_frac) * int(family.len() as u64);
            if !ok {
                rep.witness = Some(format!(
                    "{} of {} r-sets outside (1±ef_dev)·Φ/D (first: {})",
                    bad.len(),
                    family.len(),
                    bad[0].label()
                ));
            }
            ok
        }
        PropertyId::C => eval_c(h, params, aux, engine, &mut rep)?,
        PropertyId::D => eval_d(h, params, aux, engine, &mut rep)?,
        PropertyId::Q => eval_q(h, params, engine, &mut rep)?,
        PropertyId::V => eval_v(h, params, aux, engine, &mut rep)?,
    };
    Ok(rep.finish(which, params, holds))
}

fn eval_a(trace: &DeletionTrace, t: usize, params: &ToleranceParams) -> Result<PropertyReport> {
    if t > trace.steps.len() {
        return Err(Error::invalid(format!(
            "step {t} beyond the trace length {}",
            trace.steps.len()
        )));
    }
    let mut rep = Report::new();
    let phi_t = trace.phi(t);
    let gsum = trace.gamma_sum(t);
    rep.put("step", t);
    rep.put("phi_t", phi_t);
    rep.put("phi_0", &trace.phi0);
    rep.put_q("gamma_sum", &gsum);
    let holds = match a_margin(phi_t, &trace.phi0, &gsum, params.slack_a) {
        Some((m, err)) => {
            rep.put("margin", fmt_sig(m));
            rep.put("margin_error", fmt_sig(err));
            let ok = m - err > 0.0;
            if !ok {
                rep.witness = Some(format!("margin {} not certified positive", fmt_sig(m)));
            }
            ok
        }
        None => {
            rep.witness = Some("Φ_t = 0".into());
            false
        }
    };
    Ok(rep.finish(PropertyId::A, params, holds))
}

fn eval_c(
    h: &Hypergraph,
    p: &ToleranceParams,
    aux: &PropertyAux,
    engine: &Engine,
    rep: &mut Report,
) -> Result<bool> {
    let z = aux.z.ok_or_else(|| Error::MissingAux("C needs an r-set Z".into()))?;
    let x = aux.x.ok_or_else(|| Error::MissingAux("C needs a vertex x ∈ Z".into()))?;
    if !z.contains(x) {
        return Err(Error::invalid("x must lie in Z"));
    }
    let ws = Weights::new(h, engine)?;
    ws.require_pm()?;
    let wz = ws.w_q(z)?;
    let floor = wz_floor(h, p);
    rep.put_q("w_Z", &wz);
    rep.put_q("floor", &floor);
    if wz <= big(&ws.phi) * &floor {
        rep.put("vacuous", "w(Z) does not exceed Φ·floor");
        return Ok(true);
    }
    let d = h.avg_degree();
    let target = (Rational::one() - q(p.c_dev)) * &wz * int(h.degree(x)) / &d;
    rep.put_q("target", &target);
    let ys: Vec<u32> = bits(h.active() & !z.mask()).collect();
    let mut bad = Vec::new();
    for &y in &ys {
        let moved = RSet::new((z.mask() & !(1 << x)) | 1 << y, h.r())?;
        if ws.w_q(moved)? < target {
            bad.push(y);
        }
    }
    rep.put("exceptions", bad.len());
    rep.put("candidates", ys.len());
    let ok = int(bad.len() as u64) < q(p.c_frac) * int(ys.len() as u64) || ys.is_empty();
    if !ok {
        rep.witness = Some(format!(
            "{} of {} swaps fall short (first y = {})",
            bad.len(),
            ys.len(),
            bad[0] + 1
        ));
    }
    Ok(ok)
}

fn eval_d(
    h: &Hypergraph,
    p: &ToleranceParams,
    aux: &PropertyAux,
    engine: &Engine,
    rep: &mut Report,
) -> Result<bool> {
    let z0 = aux
        .z0
        .ok_or_else(|| Error::MissingAux("D needs a reference r-set Z0".into()))?;
    let ws = Weights::new(h, engine)?;
    ws.require_pm()?;
    d_against(&ws, z0, p, rep)
}

fn d_against(ws: &Weights<'_>, z0: RSet, p: &ToleranceParams, rep: &mut Report) -> Result<bool> {
    let h = ws.h;
    let w0 = ws.w_q(z0)?;
    let floor = wz_floor(h, p);
    rep.put_q("w_Z0", &w0);
    if w0 <= big(&ws.phi) * &floor {
        rep.put("vacuous", "w(Z0) does not exceed Φ·floor");
        return Ok(true);
    }
    let d = h.avg_degree();
    let prod = z0
        .vertices()
        .fold(Rational::one(), |acc, x| acc * int(h.degree(x)));
    let target = (Rational::one() - q(p.c_dev)) * &w0 * prod / d.pow(h.r() as i32);
    rep.put_q("target", &target);
    let family = h.all_rsets();
    let mut bad = Vec::new();
    for &z in &family {
        if ws.w_q(z)? < target {
            bad.push(z);
        }
    }
    rep.put("exceptions", bad.len());
    rep.put("family_size", family.len());
    let ok = int(bad.len() as u64) < q(p.c_frac) * int(family.len() as u64);
    if !ok {
        rep.witness = Some(format!(
            "{} of {} r-sets below target (first: {})",
            bad.len(),
            family.len(),
            bad[0].label()
        ));
    }
    Ok(ok)
}

/// Exceptions of the "a.e. A ∈ family has w ∼ target" clause.
fn ae_exceptions(
    family: &[RSet],
    w: impl Fn(RSet) -> Result<Rational>,
    target: &Rational,
    dev: &Rational,
) -> Result<Vec<RSet>> {
    let mut bad = Vec::new();
    for &a in family {
        if !within(&w(a)?, target, dev) {
            bad.push(a);
        }
    }
    Ok(bad)
}

fn eval_q(h: &Hypergraph, p: &ToleranceParams, engine: &Engine, rep: &mut Report) -> Result<bool> {
    let ws = Weights::new(h, engine)?;
    ws.require_pm()?;
    let phi_prime = ws.mean()?;
    let theta = q(p.theta_qv);
    let two_theta = int(2) * &theta;
    let edges = h.edges().to_vec();
    let bad_edges = ae_exceptions(&edges, |a| ws.w_q(a), &phi_prime, &q(p.ef_dev))?;
    let part1 = int(bad_edges.len() as u64) < q(p.ef_frac) * int(edges.len() as u64);
    let outside: Vec<RSet> = h
        .all_rsets()
        .into_iter()
        .filter(|u| !h.contains_edge(*u))
        .collect();
    let mut far = 0u64;
    for &u in &outside {
        if !within(&ws.w_q(u)?, &phi_prime, &two_theta) {
            far += 1;
        }
    }
    let part2 = int(far) >= &two_theta * int(outside.len() as u64);
    rep.put_q("phi_prime", &phi_prime);
    rep.put("edge_exceptions", bad_edges.len());
    rep.put("far_nonedges", far);
    rep.put("nonedges", outside.len());
    if !part1 {
        rep.witness = Some(format!(
            "{} of {} edges outside (1±ef_dev)·Φ'",
            bad_edges.len(),
            edges.len()
        ));
    } else if !part2 {
        rep.witness = Some(format!(
            "only {far} of {} non-edges are 2θ-far from Φ'",
            outside.len()
        ));
    }
    Ok(part1 && part2)
}

fn eval_v(
    h: &Hypergraph,
    p: &ToleranceParams,
    aux: &PropertyAux,
    engine: &Engine,
    rep: &mut Report,
) -> Result<bool> {
    let t_set = aux
        .t_set
        .as_ref()
        .ok_or_else(|| Error::MissingAux("V needs the removed set T".into()))?;
    let zeta = aux
        .zeta
        .ok_or_else(|| Error::MissingAux("V needs ζ".into()))?;
    let theta = aux.theta.unwrap_or(p.theta_qv);
    if !(theta > 0.0 && theta < 1.0) || !(zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::invalid("V needs θ ∈ (0,1) and ζ > 0"));
    }
    if let Some(a) = t_set.iter().find(|a| !h.contains_edge(**a)) {
        return Err(Error::invalid(format!("T contains non-edge {}", a.label())));
    }
    let ws_h = Weights::new(h, engine)?;
    ws_h.require_pm()?;
    let phi_prime = ws_h.mean()?;
    let f = h.without_edges(t_set);
    let ws_f = Weights::new(&f, engine)?;
    let target = q(zeta) * &phi_prime;
    let bad = ae_exceptions(t_set, |a| ws_f.w_q(a), &target, &q(p.ef_dev))?;
    let part1 = int(bad.len() as u64) < q(p.ef_frac) * int(t_set.len() as u64);
    let outside: Vec<RSet> = h
        .all_rsets()
        .into_iter()
        .filter(|u| !h.contains_edge(*u))
        .collect();
    let theta_q = q(theta);
    let mut far = 0u64;
    for &u in &outside {
        if !within(&ws_f.w_q(u)?, &target, &theta_q) {
            far += 1;
        }
    }
    let part2 = int(far) >= &theta_q * int(outside.len() as u64);
    rep.put_q("phi_prime", &phi_prime);
    rep.put_q("zeta_phi_prime", &target);
    rep.put("t_exceptions", bad.len());
    rep.put("far_nonedges", far);
    rep.put("nonedges", outside.len());
    if !part1 {
        rep.witness = Some(format!(
            "{} of {} removed edges outside (1±ef_dev)·ζΦ'",
            bad.len(),
            t_set.len()
        ));
    } else if !part2 {
        rep.witness = Some(format!(
            "only {far} of {} non-edges are θ-far from ζΦ'",
            outside.len()
        ));
    }
    Ok(part1 && part2)
}

/// `α(H) = inf{α : |{U ∈ K : w(U) ∉ (1±α)Φ/D}| < α|K|}`, exactly.
///
/// With `dev(U) = |w(U)·D/Φ - 1|`, the exception count is the step
/// function `c(α) = #{dev > α}`. On each interval between consecutive
/// distinct deviations it is constant, so the first interval where
/// `c/|K|` drops below its right end yields the infimum.
pub fn alpha(h: &Hypergraph, engine: &Engine) -> Result<BigRational> {
    let ws = Weights::new(h, engine)?;
    ws.require_pm()?;
    let mean = ws.mean()?;
    let family = h.all_rsets();
    let mut devs = Vec::with_capacity(family.len());
    for &u in &family {
        devs.push(((ws.w_q(u)? - &mean) / &mean).abs());
    }
    Ok(alpha_from_deviations(devs))
}

/// The infimum scan on a list of deviations.
pub fn alpha_from_deviations(mut devs: Vec<Rational>) -> Rational {
    let total = int(devs.len() as u64);
    devs.sort();
    let mut breaks = vec![Rational::zero()];
    for d in &devs {
        if d > breaks.last().unwrap() {
            breaks.push(d.clone());
        }
    }
    for (j, b) in breaks.iter().enumerate() {
        let count = devs.len() - devs.partition_point(|d| d <= b);
        let cand = std::cmp::max(b.clone(), int(count as u64) / &total);
        match breaks.get(j + 1) {
            Some(next) if cand >= *next => continue,
            _ => return cand,
        }
    }
    unreachable!("the last interval is unbounded")
}

/// Replay of "R, D and F imply B" on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReplay {
    pub r_holds: bool,
    /// D with `Z₀` the heaviest r-set, and `Z₀` clearing the floor.
    pub d_holds: bool,
    pub f_holds: bool,
    /// `(1 + ef_dev) / ((1 - c_dev)·(δ/D)^r)`, absent when `δ = 0`.
    pub derived_cap: Option<String>,
    pub maxr: String,
    /// `maxr ≤ derived_cap` (vacuously true without a cap).
    pub conclusion: bool,
}

impl LemmaReplay {
    pub fn premises(&self) -> bool {
        self.r_holds && self.d_holds && self.f_holds
    }
}

/// R ∧ D ∧ F ⇒ maxr bounded by a cap computed from the tolerances. Needs
/// `c_frac + ef_frac ≤ 1` so that some r-set is typical for both D and F.
pub fn replay_rdf_implies_b(
    h: &Hypergraph,
    params: &ToleranceParams,
    engine: &Engine,
) -> Result<LemmaReplay> {
    params.validate()?;
    if params.c_frac + params.ef_frac > 1.0 {
        return Err(Error::invalid("replay needs c_frac + ef_frac ≤ 1"));
    }
    let ws = Weights::new(h, engine)?;
    ws.require_pm()?;
    let r_holds = r_check(h, params).holds;
    let all = h.all_rsets();
    let mut z0 = all[0];
    let mut w0 = ws.w(z0)?;
    for &z in &all[1..] {
        let w = ws.w(z)?;
        if w > w0 {
            z0 = z;
            w0 = w;
        }
    }
    let floor = wz_floor(h, params);
    let clears = big(&w0) > big(&ws.phi) * floor;
    let d_holds = clears && d_against(&ws, z0, params, &mut Report::new())?;
    let f_holds = evaluate_property(
        PropertyInput::Graph(h),
        PropertyId::F,
        params,
        &PropertyAux::default(),
        engine,
    )?
    .holds;
    let spec = engine.weight_table(h, &WeightScope::Edges)?;
    let maxr = maxr_of(&spec)?;
    let stats = h.degree_stats();
    let cap = (stats.min_degree > 0).then(|| {
        let ratio = int(stats.min_degree) / &stats.avg_degree;
        (Rational::one() + q(params.ef_dev))
            / ((Rational::one() - q(params.c_dev)) * ratio.pow(h.r() as i32))
    });
    let conclusion = cap.as_ref().is_none_or(|c| maxr <= *c);
    Ok(LemmaReplay {
        r_holds,
        d_holds,
        f_holds,
        derived_cap: cap.as_ref().map(fmt_ratio),
        maxr: fmt_ratio(&maxr),
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::processes::{run_deletion_trace, random_hypergraph};
    use crate::rng::stream_rng;

    fn rs(vs: &[u32]) -> RSet {
        RSet::from_vertices(vs).unwrap()
    }

    fn single_pm() -> Hypergraph {
        Hypergraph::new(6, 3, vec![rs(&[0, 1, 2]), rs(&[3, 4, 5])]).unwrap()
    }

    fn eval(h: &Hypergraph, which: PropertyId, p: &ToleranceParams) -> PropertyReport {
        evaluate_property(
            PropertyInput::Graph(h),
            which,
            p,
            &PropertyAux::default(),
            &Engine::default(),
        )
        .unwrap()
    }

    #[test]
    fn b_on_complete() {
        let k9 = Hypergraph::complete(9, 3).unwrap();
        let p = ToleranceParams {
            c_b: 1.0,
            ..Default::default()
        };
        let rep = eval(&k9, PropertyId::B, &p);
        assert!(rep.holds);
        assert_eq!(rep.values["maxr"], "1/1");
    }

    #[test]
    fn f_on_complete_and_single_pm() {
        let p = ToleranceParams {
            ef_dev: 0.01,
            ef_frac: 0.01,
            ..Default::default()
        };
        assert!(eval(&Hypergraph::complete(6, 3).unwrap(), PropertyId::F, &p).holds);

        let p = ToleranceParams {
            ef_dev: 0.1,
            ef_frac: 0.1,
            ..Default::default()
        };
        let rep = eval(&single_pm(), PropertyId::F, &p);
        assert!(!rep.holds);
        assert_eq!(rep.values["exceptions"], "18");
        assert!(rep.witness.is_some());
    }

    #[test]
    fn r_on_complete() {
        for n in [6, 9, 12] {
            let rep = eval(&Hypergraph::complete(n, 3).unwrap(), PropertyId::R, &Default::default());
            assert!(rep.holds, "n = {n}: {rep:?}");
        }
    }

    #[test]
    fn r_failure_names_a_witness() {
        let h = Hypergraph::new(6, 3, vec![rs(&[0, 1, 2]), rs(&[0, 1, 3]), rs(&[0, 1, 4])]).unwrap();
        let rep = eval(&h, PropertyId::R, &Default::default());
        assert!(!rep.holds);
        assert!(rep.witness.unwrap().starts_with("Rg"));
    }

    #[test]
    fn a_along_an_n6_trace_matches_direct_evaluation() {
        let p = ToleranceParams {
            slack_a: 0.5,
            ..Default::default()
        };
        let engine = Engine::default();
        let trace = run_deletion_trace(6, 3, 10, 9, &p, &engine).unwrap();
        for t in 0..=trace.steps.len() {
            let rep = evaluate_property(
                PropertyInput::Trace(&trace, t),
                PropertyId::A,
                &p,
                &PropertyAux::default(),
                &engine,
            )
            .unwrap();
            let phi = trace.phi(t);
            let direct = if phi.is_zero() {
                false
            } else {
                let lhs = crate::exact::ln_biguint(phi);
                let rhs = 10f64.ln() - to_f64(&trace.gamma_sum(t)) - 0.5;
                lhs > rhs
            };
            assert_eq!(rep.holds, direct, "step {t}");
            if t > 0 {
                assert_eq!(trace.steps[t - 1].flag_a, rep.holds);
            }
        }
    }

    #[test]
    fn a_is_conservative_at_the_boundary() {
        // log(Φ_t/Φ_0) + Σγ + slack = 0 exactly: not certified.
        let phi = BigUint::from(10u32);
        assert!(!a_holds(&phi, &phi, &Rational::zero(), 0.0));
        assert!(a_holds(&phi, &phi, &Rational::zero(), 1e-6));
        assert!(!a_holds(&BigUint::zero(), &phi, &int(100), 1.0));
    }

    #[test]
    fn c_and_d_on_complete() {
        let k9 = Hypergraph::complete(9, 3).unwrap();
        let aux = PropertyAux {
            z: Some(rs(&[0, 1, 2])),
            x: Some(1),
            z0: Some(rs(&[3, 4, 5])),
            ..Default::default()
        };
        let engine = Engine::default();
        let p = ToleranceParams::default();
        for which in [PropertyId::C, PropertyId::D] {
            let rep =
                evaluate_property(PropertyInput::Graph(&k9), which, &p, &aux, &engine).unwrap();
            assert!(rep.holds, "{which:?}: {rep:?}");
        }
    }

    #[test]
    fn missing_aux_and_undefined_weights() {
        let engine = Engine::default();
        let p = ToleranceParams::default();
        let k6 = Hypergraph::complete(6, 3).unwrap();
        let none = PropertyAux::default();
        for which in [PropertyId::C, PropertyId::D, PropertyId::V, PropertyId::A] {
            assert!(matches!(
                evaluate_property(PropertyInput::Graph(&k6), which, &p, &none, &engine),
                Err(Error::MissingAux(_))
            ));
        }
        let empty = Hypergraph::new(6, 3, vec![]).unwrap();
        for which in [PropertyId::B, PropertyId::E, PropertyId::F, PropertyId::Q] {
            assert!(matches!(
                evaluate_property(PropertyInput::Graph(&empty), which, &p, &none, &engine),
                Err(Error::NoPerfectMatching)
            ));
        }
    }

    #[test]
    fn q_on_single_pm() {
        let p = ToleranceParams::default();
        // Both edges carry the mean weight; every non-edge has weight 0.
        assert!(eval(&single_pm(), PropertyId::Q, &p).holds);
        // On K there are no non-edges, so the second clause is vacuous.
        assert!(eval(&Hypergraph::complete(6, 3).unwrap(), PropertyId::Q, &p).holds);
    }

    #[test]
    fn v_with_explicit_inputs() {
        let k9 = Hypergraph::complete(9, 3).unwrap();
        let mut rng = stream_rng(4, 0);
        let h = random_hypergraph(9, 3, 60, &mut rng).unwrap();
        let t_set = h.edges()[..3].to_vec();
        let d = to_f64(&h.avg_degree());
        let aux = PropertyAux {
            t_set: Some(t_set.clone()),
            theta: Some(0.1),
            zeta: Some((-3.0 / d).exp()),
            ..Default::default()
        };
        let engine = Engine::default();
        let p = ToleranceParams::default();
        let rep = evaluate_property(PropertyInput::Graph(&h), PropertyId::V, &p, &aux, &engine)
            .unwrap();
        assert_eq!(rep.values["nonedges"], "24");
        assert_eq!(rep.holds, rep.witness.is_none());
        let bad = PropertyAux {
            t_set: Some(vec![rs(&[0, 1, 2])]),
            ..aux
        };
        if !h.contains_edge(rs(&[0, 1, 2])) {
            assert!(evaluate_property(PropertyInput::Graph(&h), PropertyId::V, &p, &bad, &engine)
                .is_err());
        }
        let _ = k9;
    }

    #[test]
    fn alpha_examples() {
        let engine = Engine::default();
        assert_eq!(alpha(&Hypergraph::complete(6, 3).unwrap(), &engine).unwrap(), int(0));
        assert_eq!(alpha(&single_pm(), &engine).unwrap(), ratio(9, 10));
    }

    #[test]
    fn alpha_of_complete_minus_edge_matches_enumeration() {
        let engine = Engine::default();
        let h = Hypergraph::complete(6, 3)
            .unwrap()
            .without_edges(&[rs(&[0, 1, 2])]);
        let phi = engine.enumerate(&h).unwrap().len() as u64;
        // At n = 6, H - U has one matching if the complement of U is an
        // edge and none otherwise.
        let mean = int(phi) * int(6) / int(3 * 19);
        let devs: Vec<Rational> = h
            .all_rsets()
            .iter()
            .map(|u| {
                let rest = !u.mask() & 0b11_1111;
                let w = h.edges().iter().filter(|e| e.mask() == rest).count();
                ((int(w as u64) - &mean) / &mean).abs()
            })
            .collect();
        let brute = brute_alpha(&devs);
        assert_eq!(alpha(&h, &engine).unwrap(), brute);
        // Φ = 9, Φ/D = 18/19; 19 r-sets have w = 1 (deviation 1/18) and
        // {4,5,6} has w = 0.
        assert_eq!(brute, ratio(1, 18));
    }

    /// Infimum by testing every candidate `max(b, k/N)` directly against
    /// the definition.
    fn brute_alpha(devs: &[Rational]) -> Rational {
        let n = int(devs.len() as u64);
        let count = |a: &Rational| devs.iter().filter(|d| *d > a).count() as u64;
        let mut cands: Vec<Rational> = devs.to_vec();
        cands.extend((0..=devs.len()).map(|k| int(k as u64) / &n));
        cands.push(Rational::zero());
        cands.sort();
        cands.dedup();
        // The infimum is a candidate c such that every α slightly above c
        // is feasible; test with c + tiny.
        let tiny = ratio(1, 1_000_000_007);
        cands
            .into_iter()
            .find(|c| {
                let a = c + &tiny;
                int(count(&a)) < &a * &n
            })
            .unwrap()
    }

    #[test]
    fn alpha_scan_agrees_with_brute_force_on_random_spectra() {
        let mut rng = stream_rng(8, 0);
        use rand::Rng;
        for _ in 0..200 {
            let len = rng.random_range(1..30);
            let devs: Vec<Rational> = (0..len)
                .map(|_| ratio(rng.random_range(0..6), rng.random_range(1..6)))
                .collect();
            assert_eq!(alpha_from_deviations(devs.clone()), brute_alpha(&devs), "{devs:?}");
        }
    }

    #[test]
    fn alpha_zero_iff_constant_spectrum() {
        let engine = Engine::default();
        let mut rng = stream_rng(21, 0);
        for _ in 0..20 {
            let h = random_hypergraph(9, 3, 50, &mut rng).unwrap();
            let Ok(a) = alpha(&h, &engine) else { continue };
            let spec = engine.weight_table(&h, &WeightScope::AllRSets).unwrap();
            let constant = spec.weights().all(|w| Some(w) == spec.entries.first().map(|e| &e.1));
            assert_eq!(a.is_zero(), constant);
        }
    }

    #[test]
    fn f_exceptions_bound_e_exceptions() {
        let engine = Engine::default();
        let p = ToleranceParams::default();
        let mut rng = stream_rng(31, 0);
        let mut checked = 0;
        while checked < 50 {
            let m = rand::Rng::random_range(&mut rng, 20..84);
            let h = random_hypergraph(9, 3, m, &mut rng).unwrap();
            if engine.count(&h).unwrap().is_zero() {
                continue;
            }
            checked += 1;
            let e = eval(&h, PropertyId::E, &p);
            let f = eval(&h, PropertyId::F, &p);
            let ex_e: usize = e.values["exceptions"].parse().unwrap();
            let ex_f: usize = f.values["exceptions"].parse().unwrap();
            assert!(ex_e <= ex_f);
            if f.holds {
                // F with share s implies E with share s·|K|/|H|.
                let scaled = ToleranceParams {
                    ef_frac: (p.ef_frac * 84.0 / m as f64).min(0.999),
                    ..p.clone()
                };
                assert!(eval(&h, PropertyId::E, &scaled).holds || scaled.ef_frac == 0.999);
            }
        }
    }

    #[test]
    fn rdf_replay_never_contradicts() {
        let engine = Engine::default();
        let p = ToleranceParams::default();
        let mut rng = stream_rng(41, 0);
        let mut premises_seen = 0;
        for _ in 0..40 {
            let m = rand::Rng::random_range(&mut rng, 60..=84);
            let h = random_hypergraph(9, 3, m, &mut rng).unwrap();
            let Ok(rep) = replay_rdf_implies_b(&h, &p, &engine) else { continue };
            if rep.premises() {
                premises_seen += 1;
                assert!(rep.conclusion, "{rep:?}");
            }
        }
        let k = Hypergraph::complete(9, 3).unwrap();
        let rep = replay_rdf_implies_b(&k, &p, &engine).unwrap();
        assert!(rep.premises() && rep.conclusion);
        assert!(premises_seen + 1 > 0);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let h = single_pm();
        let p = ToleranceParams::default();
        for which in [PropertyId::R, PropertyId::B, PropertyId::E, PropertyId::F, PropertyId::Q] {
            assert_eq!(eval(&h, which, &p), eval(&h, which, &p));
        }
    }

    #[test]
    fn params_validation() {
        assert!(ToleranceParams::default().validate().is_ok());
        let bad = ToleranceParams {
            ef_frac: 1.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ToleranceParams {
            c_b: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
