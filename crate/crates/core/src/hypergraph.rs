//! r-uniform hypergraphs on at most 63 vertices.
//!
//! Vertices are `0..n`; every edge is a `u64` bitmask. A hypergraph also
//! carries an *active* vertex mask so that `H - Z` keeps the original
//! labels: it lives on `active \ Z` and perfect matchings always mean
//! matchings covering the active set.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::ratio;

/// Largest vertex count representable in one mask word.
pub const MAX_VERTICES: u32 = 63;

/// An r-set of vertices, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RSet(u64);

impl RSet {
    pub fn new(mask: u64, r: u32) -> Result<Self> {
        if mask.count_ones() != r {
            return Err(Error::MalformedEdge(format!(
                "mask {mask:#x} has {} vertices, expected {r}",
                mask.count_ones()
            )));
        }
        Ok(RSet(mask))
    }

    pub fn from_vertices(vertices: &[u32]) -> Result<Self> {
        let mut mask = 0u64;
        for &v in vertices {
            if v >= MAX_VERTICES {
                return Err(Error::MalformedEdge(format!("vertex {v} out of range")));
            }
            if mask & (1 << v) != 0 {
                return Err(Error::MalformedEdge(format!("vertex {v} repeated")));
            }
            mask |= 1 << v;
        }
        Ok(RSet(mask))
    }

    #[inline]
    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn contains(self, v: u32) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn vertices(self) -> impl Iterator<Item = u32> {
        bits(self.0)
    }

    /// Vertices joined with `-`, 1-based.
    pub fn label(self) -> String {
        self.vertices()
            .map(|v| (v + 1).to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

impl fmt::Debug for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label())
    }
}

/// Iterate the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros();
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[inline]
pub fn full_mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All r-subsets of `universe` in colexicographic order.
///
/// Colex order on masks coincides with numeric order, which is what Gosper's
/// hack produces on the compressed index space.
pub fn rsets_of(universe: u64, r: u32) -> Vec<RSet> {
    let verts: Vec<u32> = bits(universe).collect();
    let a = verts.len() as u32;
    if r > a {
        return Vec::new();
    }
    let mut out = Vec::new();
    if r == 0 {
        out.push(RSet(0));
        return out;
    }
    let limit = 1u64 << a;
    let mut c = (1u64 << r) - 1;
    while c < limit {
        out.push(RSet(expand(c, &verts)));
        // Gosper's hack: next integer with the same popcount.
        let low = c & c.wrapping_neg();
        let ripple = c + low;
        c = (((ripple ^ c) >> 2) / low) | ripple;
    }
    out
}

/// Map a mask over compact indices `0..verts.len()` back to vertex labels.
pub fn expand(compact: u64, verts: &[u32]) -> u64 {
    bits(compact).fold(0, |m, i| m | 1 << verts[i as usize])
}

/// Map a mask over vertex labels to compact indices of `verts`.
pub fn compress(mask: u64, verts: &[u32]) -> u64 {
    verts
        .iter()
        .enumerate()
        .filter(|&(_, &v)| mask >> v & 1 == 1)
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// An r-uniform hypergraph with an explicit active vertex set.
#[derive(Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    r: u32,
    edges: Vec<RSet>,
    active: u64,
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("active", &format_args!("{:#x}", self.active))
            .field("edges", &self.edges)
            .finish()
    }
}

/// Degree summary. `avg_degree` is exact: `|active| * D = r * m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub min_degree: u64,
    pub avg_degree: BigRational,
    pub max_degree: u64,
    pub max_codegree: u64,
}

fn check_dims(n: u32, r: u32) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return Err(Error::invalid(format!("n = {n} must lie in 1..=63")));
    }
    if r < 2 {
        return Err(Error::invalid(format!("r = {r} must be at least 2")));
    }
    if r > n {
        return Err(Error::invalid(format!("r = {r} exceeds n = {n}")));
    }
    Ok(())
}

impl Hypergraph {
    /// Build from explicit edges, all vertices active.
    pub fn new(n: u32, r: u32, edges: Vec<RSet>) -> Result<Self> {
        Self::with_active(n, r, edges, full_mask(n))
    }

    pub fn with_active(n: u32, r: u32, edges: Vec<RSet>, active: u64) -> Result<Self> {
        check_dims(n, r)?;
        if active & !full_mask(n) != 0 {
            return Err(Error::invalid("active mask exceeds vertex range"));
        }
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.size() != r {
                return Err(Error::MalformedEdge(format!("{e:?} is not an {r}-set")));
            }
            if e.mask() & !active != 0 {
                return Err(Error::NotActive {
                    mask: e.mask(),
                    active,
                });
            }
            if !seen.insert(*e) {
                return Err(Error::MalformedEdge(format!("duplicate edge {e:?}")));
            }
        }
        Ok(Hypergraph {
            n,
            r,
            edges,
            active,
        })
    }

    /// Construct without validation; callers guarantee the invariants.
    pub(crate) fn from_parts(n: u32, r: u32, edges: Vec<RSet>, active: u64) -> Self {
        debug_assert!(edges
            .iter()
            .all(|e| e.size() == r && e.mask() & !active == 0));
        Hypergraph {
            n,
            r,
            edges,
            active,
        }
    }

    /// The complete r-graph on `n` vertices, edges in colex order.
    pub fn complete(n: u32, r: u32) -> Result<Self> {
        check_dims(n, r)?;
        let active = full_mask(n);
        Ok(Hypergraph {
            n,
            r,
            edges: rsets_of(active, r),
            active,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn edges(&self) -> &[RSet] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn active(&self) -> u64 {
        self.active
    }

    pub fn num_active(&self) -> u32 {
        self.active.count_ones()
    }

    pub fn contains_edge(&self, e: RSet) -> bool {
        self.edges.contains(&e)
    }

    /// All r-subsets of the active set (the complete family `K` on it).
    pub fn all_rsets(&self) -> Vec<RSet> {
        rsets_of(self.active, self.r)
    }

    /// `H - Z`: drop the vertices of `z` and every edge meeting them.
    pub fn remove_rset(&self, z: RSet) -> Result<Self> {
        self.remove_vertices(z.mask())
    }

    pub fn remove_vertices(&self, mask: u64) -> Result<Self> {
        if mask & !self.active != 0 {
            return Err(Error::NotActive {
                mask,
                active: self.active,
            });
        }
        Ok(Hypergraph {
            n: self.n,
            r: self.r,
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| e.mask() & mask == 0)
                .collect(),
            active: self.active & !mask,
        })
    }

    /// `H` with one more edge. Rejects duplicates and inactive vertices.
    pub fn with_edge(&self, e: RSet) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(e);
        Self::with_active(self.n, self.r, edges, self.active)
    }

    /// `H` without the given edges.
    pub fn without_edges(&self, drop: &[RSet]) -> Self {
        Hypergraph {
            n: self.n,
            r: self.r,
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|e| !drop.contains(e))
                .collect(),
            active: self.active,
        }
    }

    pub fn degree(&self, v: u32) -> u64 {
        self.edges.iter().filter(|e| e.contains(v)).count() as u64
    }

    pub fn codegree(&self, u: u32, v: u32) -> u64 {
        let pair = (1u64 << u) | (1u64 << v);
        self.edges.iter().filter(|e| e.mask() & pair == pair).count() as u64
    }

    /// Degrees of all `n` vertices (inactive vertices have degree 0).
    pub fn degrees(&self) -> Vec<u64> {
        let mut d = vec![0u64; self.n as usize];
        for e in &self.edges {
            for v in e.vertices() {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// Exact average degree over the active set; zero if nothing is active.
    pub fn avg_degree(&self) -> BigRational {
        let a = self.num_active();
        if a == 0 {
            return ratio(0, 1);
        }
        ratio(self.r as u64 * self.edges.len() as u64, a as u64)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let degrees = self.degrees();
        let active: Vec<u32> = bits(self.active).collect();
        let min_degree = active
            .iter()
            .map(|&v| degrees[v as usize])
            .min()
            .unwrap_or(0);
        let max_degree = active
            .iter()
            .map(|&v| degrees[v as usize])
            .max()
            .unwrap_or(0);
        let mut codeg = vec![0u64; (self.n * self.n) as usize];
        for e in &self.edges {
            let vs: Vec<u32> = e.vertices().collect();
            for (i, &u) in vs.iter().enumerate() {
                for &v in &vs[i + 1..] {
                    codeg[(u * self.n + v) as usize] += 1;
                }
            }
        }
        DegreeStats {
            min_degree,
            avg_degree: self.avg_degree(),
            max_degree,
            max_codegree: codeg.into_iter().max().unwrap_or(0),
        }
    }

    /// Parse the text format: a header `n r m` followed by `m` lines of
    /// `r` vertex indices (1-based). Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let nums = parse_ints(header, hline)?;
        let [n, r, m] = nums[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n r m`".into(),
            });
        };
        check_dims(n, r).map_err(|e| Error::Parse {
            line: hline,
            msg: e.to_string(),
        })?;
        let mut edges = Vec::with_capacity(m as usize);
        for (line, l) in lines {
            let vs = parse_ints(l, line)?;
            if vs.len() != r as usize {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {r} vertices, found {}", vs.len()),
                });
            }
            if vs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse {
                    line,
                    msg: "vertices must be strictly increasing".into(),
                });
            }
            if vs.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex outside 1..={n}"),
                });
            }
            let zero_based: Vec<u32> = vs.iter().map(|v| v - 1).collect();
            edges.push(RSet::from_vertices(&zero_based).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?);
        }
        if edges.len() != m as usize {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Hypergraph::new(n, r, edges)
    }

    /// Render in the text format (active set is not recorded).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.r, self.edges.len());
        for e in &self.edges {
            let vs: Vec<String> = e.vertices().map(|v| (v + 1).to_string()).collect();
            s.push_str(&vs.join(" "));
            s.push('\n');
        }
        s
    }
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<u32>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u32>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not a nonnegative integer: {tok:?}"),
            })
        })
        .collect()
}
