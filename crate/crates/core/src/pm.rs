//! Exact perfect-matching counts.
//!
//! The counter is a subset DP anchored on the lowest vertex of the
//! remaining set `S`:
//!
//! ```text
//! f(∅) = 1,    f(S) = Σ { f(S \ A) : A ∈ H, min(S) ∈ A ⊆ S }
//! ```
//!
//! Each matching is produced exactly once because the edge covering
//! `min(S)` is chosen first. Active vertices are relabelled to `0..a` so a
//! dense table of `2^a` entries indexes directly by mask. Beyond the dense
//! threshold a hash memo visits only reachable states.
//!
//! Counts are returned as [`BigCount`]. Internally the DP runs in `u64` or
//! `u128` whenever the matching count of the complete r-graph on the active
//! set fits; that count bounds every table entry and every partial sum.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{binomial_u64, complete_pm_count, ratio_from_uint};
use crate::hypergraph::{bits, compress, expand, Hypergraph, RSet};

pub type BigCount = BigUint;

/// A perfect matching as a list of edges ordered by lowest vertex.
pub type Matching = Vec<RSet>;

trait Count: Clone + Send + Sync {
    const BYTES: usize;
    fn nil() -> Self;
    fn unit() -> Self;
    fn add_assign(&mut self, other: &Self);
    fn is_nil(&self) -> bool;
    fn to_big(&self) -> BigUint;
}

impl Count for u64 {
    const BYTES: usize = 8;
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    #[inline]
    fn add_assign(&mut self, other: &Self) {
        *self += *other;
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for u128 {
    const BYTES: usize = 16;
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    #[inline]
    fn add_assign(&mut self, other: &Self) {
        *self += *other;
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Count for BigUint {
    // Struct plus a few limbs; a rough figure for the budget check.
    const BYTES: usize = 48;
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Width {
    U64,
    U128,
    Big,
}

fn width_for(active: u32, r: u32) -> Width {
    let bound = complete_pm_count(active as u64, r as u64);
    if bound <= BigUint::from(u64::MAX) {
        Width::U64
    } else if bound <= BigUint::from(u128::MAX) {
        Width::U128
    } else {
        Width::Big
    }
}

/// Edges relabelled onto compact indices, grouped by lowest vertex.
struct Compact {
    verts: Vec<u32>,
    by_min: Vec<Vec<u64>>,
}

impl Compact {
    fn new(h: &Hypergraph) -> Self {
        let verts: Vec<u32> = bits(h.active()).collect();
        let mut by_min = vec![Vec::new(); verts.len()];
        for e in h.edges() {
            let c = compress(e.mask(), &verts);
            by_min[c.trailing_zeros() as usize].push(c);
        }
        Compact { verts, by_min }
    }

    fn size(&self) -> u32 {
        self.verts.len() as u32
    }

    fn full(&self) -> u64 {
        crate::hypergraph::full_mask(self.size())
    }
}

fn dense_table<T: Count>(c: &Compact, r: u32) -> Vec<T> {
    let a = c.size();
    let mut table = vec![T::nil(); 1usize << a];
    table[0] = T::unit();
    for s in 1u64..(1u64 << a) {
        if s.count_ones() % r != 0 {
            continue;
        }
        let low = s.trailing_zeros() as usize;
        let mut acc = T::nil();
        for &e in &c.by_min[low] {
            if e & !s == 0 {
                let prev = &table[(s ^ e) as usize];
                if !prev.is_nil() {
                    acc.add_assign(prev);
                }
            }
        }
        table[s as usize] = acc;
    }
    table
}

struct Memo<'a, T> {
    c: &'a Compact,
    map: HashMap<u64, T>,
    cap: usize,
}

impl<T: Count> Memo<'_, T> {
    fn count(&mut self, s: u64) -> Result<T> {
        if s == 0 {
            return Ok(T::unit());
        }
        if let Some(v) = self.map.get(&s) {
            return Ok(v.clone());
        }
        let low = s.trailing_zeros() as usize;
        let c = self.c;
        let mut acc = T::nil();
        for &e in &c.by_min[low] {
            if e & !s == 0 {
                let sub = self.count(s ^ e)?;
                acc.add_assign(&sub);
            }
        }
        if self.map.len() >= self.cap {
            return Err(Error::ResourceLimit(format!(
                "memo exceeded {} states",
                self.cap
            )));
        }
        self.map.insert(s, acc.clone());
        Ok(acc)
    }
}

/// Counts of `Φ(H[S])` for every subset `S` of the active set.
pub struct SubsetTable {
    verts: Vec<u32>,
    values: TableValues,
}

enum TableValues {
    U64(Vec<u64>),
    U128(Vec<u128>),
    Big(Vec<BigUint>),
}

impl SubsetTable {
    /// `Φ` of the sub-hypergraph induced on `mask` (a subset of the
    /// active set, in vertex labels).
    pub fn get(&self, mask: u64) -> BigCount {
        let idx = compress(mask, &self.verts) as usize;
        match &self.values {
            TableValues::U64(v) => BigUint::from(v[idx]),
            TableValues::U128(v) => BigUint::from(v[idx]),
            TableValues::Big(v) => v[idx].clone(),
        }
    }

    fn get_compact(&self, idx: u64) -> BigCount {
        let idx = idx as usize;
        match &self.values {
            TableValues::U64(v) => BigUint::from(v[idx]),
            TableValues::U128(v) => BigUint::from(v[idx]),
            TableValues::Big(v) => v[idx].clone(),
        }
    }
}

/// Which r-sets a weight table covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightScope {
    /// The edges of `H`.
    Edges,
    /// Every r-subset of the active set.
    AllRSets,
    Explicit(Vec<RSet>),
}

impl WeightScope {
    pub fn name(&self) -> &'static str {
        match self {
            WeightScope::Edges => "edges",
            WeightScope::AllRSets => "all-rsets",
            WeightScope::Explicit(_) => "explicit",
        }
    }
}

/// Weights `w_H(Z) = Φ(H - Z)` over a family of r-sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSpectrum {
    pub scope: &'static str,
    #[serde(serialize_with = "ser_entries")]
    pub entries: Vec<(RSet, BigCount)>,
    #[serde(serialize_with = "ser_big")]
    pub total: BigCount,
    /// `Φ(H)/D`, the mean edge weight; `None` when `H` has no edges.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub avg: Option<BigRational>,
}

impl WeightSpectrum {
    pub fn sum(&self) -> BigCount {
        self.entries.iter().map(|(_, w)| w).sum()
    }

    pub fn max(&self) -> Option<&BigCount> {
        self.entries.iter().map(|(_, w)| w).max()
    }

    pub fn weights(&self) -> impl Iterator<Item = &BigCount> {
        self.entries.iter().map(|(_, w)| w)
    }
}

fn ser_entries<S: serde::Serializer>(
    entries: &[(RSet, BigCount)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(entries.len()))?;
    for (z, w) in entries {
        seq.serialize_element(&(z.label(), w.to_string()))?;
    }
    seq.end()
}

fn ser_big<S: serde::Serializer>(x: &BigCount, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(q) => s.serialize_some(&crate::exact::fmt_ratio(q)),
        None => s.serialize_none(),
    }
}

/// Matching engine with its resource limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Engine {
    /// Largest active set handled by the dense table.
    pub dense_threshold: u32,
    /// Bytes allowed for the DP table or memo.
    pub memory_budget: usize,
    /// Largest active set `enumerate` will walk.
    pub enumeration_limit: u32,
    /// Largest family `weight_table` will scan.
    pub max_scope: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Engine {
            dense_threshold: 24,
            memory_budget: 1 << 30,
            enumeration_limit: 15,
            max_scope: 5_000_000,
        }
    }
}

impl Engine {
    fn dense_ok(&self, a: u32, width: Width) -> bool {
        let bytes = match width {
            Width::U64 => u64::BYTES,
            Width::U128 => u128::BYTES,
            Width::Big => BigUint::BYTES,
        };
        a <= self.dense_threshold
            && a < 40
            && (1usize << a).saturating_mul(bytes) <= self.memory_budget
    }

    /// Number of perfect matchings of `h` (covering its active set).
    pub fn count(&self, h: &Hypergraph) -> Result<BigCount> {
        let a = h.num_active();
        let r = h.r();
        if !a.is_multiple_of(r) {
            return Ok(BigUint::zero());
        }
        if a == 0 {
            return Ok(BigUint::one());
        }
        let degrees = h.degrees();
        if bits(h.active()).any(|v| degrees[v as usize] == 0) {
            return Ok(BigUint::zero());
        }
        let c = Compact::new(h);
        let width = width_for(a, r);
        if self.dense_ok(a, width) {
            let full = c.full() as usize;
            return Ok(match width {
                Width::U64 => dense_table::<u64>(&c, r)[full].to_big(),
                Width::U128 => dense_table::<u128>(&c, r)[full].to_big(),
                Width::Big => dense_table::<BigUint>(&c, r).swap_remove(full),
            });
        }
        match width {
            Width::U64 => self.memo_count::<u64>(&c),
            Width::U128 => self.memo_count::<u128>(&c),
            Width::Big => self.memo_count::<BigUint>(&c),
        }
    }

    fn memo_count<T: Count>(&self, c: &Compact) -> Result<BigCount> {
        let mut memo = Memo::<T> {
            c,
            map: HashMap::new(),
            cap: self.memory_budget / (T::BYTES + 16),
        };
        Ok(memo.count(c.full())?.to_big())
    }

    /// Dense table of `Φ(H[S])` for every `S` inside the active set, or a
    /// resource error if it would not fit.
    pub fn subset_table(&self, h: &Hypergraph) -> Result<SubsetTable> {
        let a = h.num_active();
        let width = width_for(a, h.r());
        if !self.dense_ok(a, width) {
            return Err(Error::ResourceLimit(format!(
                "dense table over {a} active vertices exceeds the configured limits"
            )));
        }
        let c = Compact::new(h);
        let values = match width {
            Width::U64 => TableValues::U64(dense_table(&c, h.r())),
            Width::U128 => TableValues::U128(dense_table(&c, h.r())),
            Width::Big => TableValues::Big(dense_table(&c, h.r())),
        };
        Ok(SubsetTable {
            verts: c.verts,
            values,
        })
    }

    /// Every perfect matching, by exhaustive search.
    pub fn enumerate(&self, h: &Hypergraph) -> Result<Vec<Matching>> {
        let a = h.num_active();
        if a > self.enumeration_limit {
            return Err(Error::GuardViolation {
                active: a,
                limit: self.enumeration_limit,
            });
        }
        let mut out = Vec::new();
        if !a.is_multiple_of(h.r()) {
            return Ok(out);
        }
        let c = Compact::new(h);
        let mut stack = Vec::new();
        walk(&c, c.full(), &mut stack, &mut out);
        Ok(out)
    }

    /// `w_H(Z) = Φ(H - Z)`.
    pub fn weight(&self, h: &Hypergraph, z: RSet) -> Result<BigCount> {
        check_rset(h, z)?;
        self.count(&h.remove_rset(z)?)
    }

    pub fn weight_table(&self, h: &Hypergraph, scope: &WeightScope) -> Result<WeightSpectrum> {
        let family: Vec<RSet> = match scope {
            WeightScope::Edges => h.edges().to_vec(),
            WeightScope::AllRSets => {
                let size = binomial_u64(h.num_active() as u64, h.r() as u64)
                    .unwrap_or(u64::MAX) as u128;
                if size > self.max_scope as u128 {
                    return Err(Error::ResourceLimit(format!(
                        "{size} r-sets exceeds the scan limit of {}",
                        self.max_scope
                    )));
                }
                h.all_rsets()
            }
            WeightScope::Explicit(zs) => {
                for &z in zs {
                    check_rset(h, z)?;
                }
                zs.clone()
            }
        };
        let a = h.num_active();
        let (total, weights) = if self.dense_ok(a, width_for(a, h.r())) {
            let table = self.subset_table(h)?;
            let full = crate::hypergraph::full_mask(a);
            let total = table.get_compact(full);
            let weights: Vec<BigCount> = family
                .par_iter()
                .map(|z| table.get(h.active() & !z.mask()))
                .collect();
            (total, weights)
        } else {
            let total = self.count(h)?;
            let weights = family
                .par_iter()
                .map(|&z| self.weight(h, z))
                .collect::<Result<Vec<_>>>()?;
            (total, weights)
        };
        let avg = mean_edge_weight(h, &total);
        Ok(WeightSpectrum {
            scope: scope.name(),
            entries: family.into_iter().zip(weights).collect(),
            total,
            avg,
        })
    }

    /// Weight of every edge of `h`, in edge order.
    pub fn edge_weights(&self, h: &Hypergraph) -> Result<Vec<BigCount>> {
        Ok(self
            .weight_table(h, &WeightScope::Edges)?
            .entries
            .into_iter()
            .map(|(_, w)| w)
            .collect())
    }

    /// `max_{A ∈ H} w_H(A)` divided by the mean edge weight `Φ(H)/D`.
    pub fn maxr(&self, h: &Hypergraph) -> Result<BigRational> {
        let spec = self.weight_table(h, &WeightScope::Edges)?;
        maxr_of(&spec)
    }

    /// A uniformly random perfect matching, drawn edge by edge with
    /// probabilities `f(S \ A) / f(S)` from the dense table.
    pub fn sample_matching(
        &self,
        h: &Hypergraph,
        table: &SubsetTable,
        rng: &mut impl RngCore,
    ) -> Result<Matching> {
        let mut s = h.active();
        let total = table.get(s);
        if total.is_zero() {
            return Err(Error::NoPerfectMatching);
        }
        let mut by_low: HashMap<u32, Vec<RSet>> = HashMap::new();
        for &e in h.edges() {
            by_low.entry(e.mask().trailing_zeros()).or_default().push(e);
        }
        let mut out = Vec::new();
        while s != 0 {
            let low = s.trailing_zeros();
            let here = table.get(s);
            let mut pick = random_below(&here, rng);
            let mut chosen = None;
            for &e in by_low.get(&low).map(Vec::as_slice).unwrap_or(&[]) {
                if e.mask() & !s != 0 {
                    continue;
                }
                let w = table.get(s & !e.mask());
                if pick < w {
                    chosen = Some(e);
                    break;
                }
                pick -= w;
            }
            let e = chosen.expect("table counts are consistent");
            out.push(e);
            s &= !e.mask();
        }
        out.sort();
        Ok(out)
    }
}

fn check_rset(h: &Hypergraph, z: RSet) -> Result<()> {
    if z.size() != h.r() {
        return Err(Error::MalformedEdge(format!(
            "{z:?} is not an {}-set",
            h.r()
        )));
    }
    if z.mask() & !h.active() != 0 {
        return Err(Error::NotActive {
            mask: z.mask(),
            active: h.active(),
        });
    }
    Ok(())
}

fn walk(c: &Compact, s: u64, stack: &mut Vec<u64>, out: &mut Vec<Matching>) {
    if s == 0 {
        let mut m: Matching = stack
            .iter()
            .map(|&e| RSet::new(expand(e, &c.verts), e.count_ones()).unwrap())
            .collect();
        m.sort();
        out.push(m);
        return;
    }
    let low = s.trailing_zeros() as usize;
    for &e in &c.by_min[low] {
        if e & !s == 0 {
            stack.push(e);
            walk(c, s ^ e, stack, out);
            stack.pop();
        }
    }
}

/// `Φ(H)/D = Φ(H)·|active| / (r·m)`.
pub fn mean_edge_weight(h: &Hypergraph, phi: &BigCount) -> Option<BigRational> {
    if h.num_edges() == 0 {
        return None;
    }
    let num = phi * BigUint::from(h.num_active());
    let den = BigUint::from(h.r() as u64 * h.num_edges() as u64);
    Some(ratio_from_uint(&num, &den))
}

/// maxr of an edge-scope spectrum.
pub fn maxr_of(spec: &WeightSpectrum) -> Result<BigRational> {
    if spec.total.is_zero() {
        return Err(Error::NoPerfectMatching);
    }
    let avg = spec
        .avg
        .as_ref()
        .ok_or_else(|| Error::invalid("maxr of a hypergraph without edges"))?;
    let max = spec.max().expect("edges present");
    Ok(ratio_from_uint(max, &BigUint::one()) / avg)
}

/// Uniform integer in `0..n` by rejection on the bit length of `n`.
pub fn random_below(n: &BigUint, rng: &mut impl RngCore) -> BigUint {
    assert!(!n.is_zero());
    if let Some(small) = n.to_u64() {
        return BigUint::from(rand::Rng::random_range(rng, 0..small));
    }
    let bits = n.bits();
    let words = bits.div_ceil(32) as usize;
    let spare = (words as u64 * 32 - bits) as u32;
    loop {
        let mut digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if let Some(top) = digits.last_mut() {
            *top >>= spare;
        }
        let x = BigUint::new(digits);
        if &x < n {
            return x;
        }
    }
}

/// Shorthand for [`Engine::count`] with default limits.
pub fn count_pm(h: &Hypergraph) -> Result<BigCount> {
    Engine::default().count(h)
}

pub fn enumerate_pms(h: &Hypergraph) -> Result<Vec<Matching>> {
    Engine::default().enumerate(h)
}

pub fn weight(h: &Hypergraph, z: RSet) -> Result<BigCount> {
    Engine::default().weight(h, z)
}

pub fn weight_table(h: &Hypergraph, scope: &WeightScope) -> Result<WeightSpectrum> {
    Engine::default().weight_table(h, scope)
}

pub fn maxr(h: &Hypergraph) -> Result<BigRational> {
    Engine::default().maxr(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use crate::rng::stream_rng;

    fn rs(vs: &[u32]) -> RSet {
        RSet::from_vertices(vs).unwrap()
    }

    fn single_pm() -> Hypergraph {
        Hypergraph::new(6, 3, vec![rs(&[0, 1, 2]), rs(&[3, 4, 5])]).unwrap()
    }

    fn big(x: u64) -> BigCount {
        BigUint::from(x)
    }

    #[test]
    fn complete_counts() {
        let k = |n| Hypergraph::complete(n, 3).unwrap();
        assert_eq!(count_pm(&k(6)).unwrap(), big(10));
        assert_eq!(count_pm(&k(9)).unwrap(), big(280));
        assert_eq!(count_pm(&k(12)).unwrap(), big(15400));
    }

    #[test]
    fn trivial_counts() {
        assert_eq!(count_pm(&single_pm()).unwrap(), big(1));
        let empty = Hypergraph::new(6, 3, vec![]).unwrap();
        assert_eq!(count_pm(&empty).unwrap(), big(0));
        let odd = Hypergraph::complete(7, 3).unwrap();
        assert_eq!(count_pm(&odd).unwrap(), big(0));
    }

    #[test]
    fn memo_path_matches_dense_path() {
        let dense = Engine::default();
        let memo = Engine {
            dense_threshold: 0,
            ..Engine::default()
        };
        for n in [6, 9, 12] {
            let k = Hypergraph::complete(n, 3).unwrap();
            assert_eq!(dense.count(&k).unwrap(), memo.count(&k).unwrap());
        }
        let k8 = Hypergraph::complete(8, 4).unwrap();
        assert_eq!(memo.count(&k8).unwrap(), big(35));
    }

    #[test]
    fn memory_budget_is_enforced() {
        let tight = Engine {
            dense_threshold: 0,
            memory_budget: 64,
            ..Engine::default()
        };
        let k = Hypergraph::complete(12, 3).unwrap();
        assert!(matches!(tight.count(&k), Err(Error::ResourceLimit(_))));
        assert!(matches!(tight.subset_table(&k), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn enumeration_examples() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(enumerate_pms(&k6).unwrap().len(), 10);
        assert_eq!(enumerate_pms(&single_pm()).unwrap().len(), 1);
        // Vertex 5 is isolated.
        let h = Hypergraph::new(6, 3, vec![rs(&[0, 1, 2]), rs(&[2, 3, 4])]).unwrap();
        assert!(enumerate_pms(&h).unwrap().is_empty());
    }

    #[test]
    fn enumeration_guard() {
        let k = Hypergraph::complete(18, 3).unwrap();
        assert!(matches!(
            enumerate_pms(&k),
            Err(Error::GuardViolation { active: 18, .. })
        ));
    }

    #[test]
    fn weight_examples() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(weight(&k6, rs(&[1, 3, 4])).unwrap(), big(1));
        let k9 = Hypergraph::complete(9, 3).unwrap();
        assert_eq!(weight(&k9, rs(&[0, 4, 8])).unwrap(), big(10));
        assert_eq!(weight(&single_pm(), rs(&[0, 1, 3])).unwrap(), big(0));
        assert!(weight(&k6, rs(&[0, 1])).is_err());
    }

    #[test]
    fn weight_table_examples() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        let spec = weight_table(&k6, &WeightScope::Edges).unwrap();
        assert_eq!(spec.entries.len(), 20);
        assert!(spec.weights().all(|w| *w == big(1)));
        assert_eq!(spec.sum(), big(20));
        assert_eq!(spec.total, big(10));
        assert_eq!(spec.avg, Some(int(1)));

        let spec = weight_table(&single_pm(), &WeightScope::AllRSets).unwrap();
        let ones = spec.weights().filter(|w| **w == big(1)).count();
        let zeros = spec.weights().filter(|w| w.is_zero()).count();
        assert_eq!((ones, zeros), (2, 18));

        let k9 = Hypergraph::complete(9, 3).unwrap();
        let spec = weight_table(&k9, &WeightScope::Edges).unwrap();
        assert!(spec.weights().all(|w| *w == big(10)));
    }

    #[test]
    fn table_route_matches_per_rset_route() {
        let mut rng = stream_rng(11, 0);
        let memo = Engine {
            dense_threshold: 0,
            ..Engine::default()
        };
        for _ in 0..10 {
            let h = crate::processes::random_hypergraph(9, 3, 30, &mut rng).unwrap();
            let a = weight_table(&h, &WeightScope::AllRSets).unwrap();
            let b = memo.weight_table(&h, &WeightScope::AllRSets).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn maxr_examples() {
        let k9 = Hypergraph::complete(9, 3).unwrap();
        assert_eq!(maxr(&k9).unwrap(), int(1));
        assert_eq!(maxr(&single_pm()).unwrap(), int(1));
        let empty = Hypergraph::new(6, 3, vec![]).unwrap();
        assert!(matches!(maxr(&empty), Err(Error::NoPerfectMatching)));
    }

    #[test]
    fn maxr_of_complete_minus_edge_against_enumeration() {
        let k6 = Hypergraph::complete(6, 3).unwrap();
        let h = k6.without_edges(&[rs(&[0, 1, 2])]);
        // Oracle: count each edge's appearances over all matchings.
        let pms = enumerate_pms(&h).unwrap();
        assert_eq!(pms.len(), 9);
        let max = h
            .edges()
            .iter()
            .map(|e| pms.iter().filter(|m| m.contains(e)).count() as u64)
            .max()
            .unwrap();
        let d = ratio(3 * 19, 6);
        let expected = int(max) / (int(9) / d);
        assert_eq!(maxr(&h).unwrap(), expected);
        assert_eq!(expected, ratio(19, 18));
    }

    #[test]
    fn sampling_is_supported_by_matchings() {
        let k9 = Hypergraph::complete(9, 3).unwrap();
        let engine = Engine::default();
        let table = engine.subset_table(&k9).unwrap();
        let all = engine.enumerate(&k9).unwrap();
        let mut rng = stream_rng(3, 0);
        for _ in 0..50 {
            let m = engine.sample_matching(&k9, &table, &mut rng).unwrap();
            assert!(all.contains(&m));
        }
    }

    #[test]
    fn random_below_stays_in_range() {
        let mut rng = stream_rng(5, 0);
        let n = crate::exact::factorial(30);
        for _ in 0..100 {
            assert!(random_below(&n, &mut rng) < n);
        }
    }
}
