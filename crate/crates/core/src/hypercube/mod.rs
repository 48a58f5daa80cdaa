//! Exhaustive, symmetry-reduced search over induced subgraphs of small
//! hypercubes and hypercube prisms.
//!
//! Every host graph here has at most 64 vertices, so a vertex set is a `u64`
//! and neighbourhoods are computed with shifts. All hosts are bipartite.

pub mod canon;
pub mod certificate;
pub mod cycle;
pub mod eliminate;
pub mod search;

use serde::Serialize;

use crate::error::{Error, Result};

pub use canon::{canonical_form, CanonicalClass};
pub use cycle::{induced_cycle_classes, longest_induced_cycle};
pub use eliminate::{build_candidate_set_s, eliminate_iteration, eliminate_to_fixpoint, EliminationState};
pub use search::{enumerate_constrained, Constraints, Enumeration};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Low `bits` bits set.
pub(crate) fn low_bits(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// A bipartite graph on at most 64 vertices whose edges are unions of
/// shift matchings: `v ~ v + shift` for every `v` in `lo`.
#[derive(Debug, Clone)]
pub struct Host {
    size: u32,
    dirs: Vec<(u64, u32)>,
}

impl Host {
    /// The unit `m`-hypercube graph on words `0..2^m`.
    pub fn cube(m: u32) -> Result<Host> {
        check_dim(m)?;
        let all = low_bits(1 << m);
        let dirs = (0..m).map(|i| (axis_low(m, i) & all, 1u32 << i)).collect();
        Ok(Host { size: 1 << m, dirs })
    }

    /// `layers` stacked copies of `Q_m` joined in a path: vertex
    /// `layer * 2^m + w`.
    pub fn prism(layers: u32, m: u32) -> Result<Host> {
        check_dim(m)?;
        let block = 1u32 << m;
        if layers == 0 || layers * block > 64 {
            return Err(Error::InvalidParams(format!("{layers} layers of Q{m} exceed 64 vertices")));
        }
        let size = layers * block;
        let mut dirs: Vec<(u64, u32)> = (0..m)
            .map(|i| {
                let one = axis_low(m, i) & low_bits(block);
                let lo = (0..layers).fold(0u64, |acc, l| acc | one << (l * block));
                (lo, 1 << i)
            })
            .collect();
        if layers > 1 {
            dirs.push((low_bits((layers - 1) * block), block));
        }
        Ok(Host { size, dirs })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn all(&self) -> u64 {
        low_bits(self.size)
    }

    pub fn neighbors(&self, set: u64) -> u64 {
        self.dirs
            .iter()
            .fold(0, |acc, &(lo, s)| acc | (set & lo) << s | (set >> s) & lo)
    }

    pub fn nbr(&self, v: u32) -> u64 {
        self.neighbors(1 << v)
    }

    /// Vertices reached from `set` at least once, and at least twice (from
    /// distinct members of `set`).
    fn reach(&self, set: u64) -> (u64, u64) {
        let (mut once, mut twice) = (0u64, 0u64);
        for &(lo, s) in &self.dirs {
            for t in [(set & lo) << s, (set >> s) & lo] {
                twice |= once & t;
                once |= t;
            }
        }
        (once, twice)
    }

    pub fn edge_count(&self, mask: u64) -> u32 {
        self.dirs.iter().map(|&(lo, s)| (mask & lo & (mask >> s)).count_ones()).sum()
    }

    pub fn degree_in(&self, mask: u64, v: u32) -> u32 {
        (self.nbr(v) & mask).count_ones()
    }

    /// Length of the shortest cycle through `root` in the subgraph induced on
    /// `mask`, if it is at most `limit`. Exact when `mask` has no shorter
    /// cycle avoiding `root`; otherwise it may report a shorter cycle elsewhere.
    fn cycle_from(&self, mask: u64, root: u32, limit: u32) -> Option<u32> {
        let mut visited = 1u64 << root;
        let mut layer = visited;
        let mut depth = 0;
        while 2 * (depth + 1) <= limit && layer != 0 {
            let (once, twice) = self.reach(layer);
            let next = once & mask & !visited;
            if twice & next != 0 {
                return Some(2 * (depth + 1));
            }
            visited |= next;
            layer = next;
            depth += 1;
        }
        None
    }

    /// Whether the induced subgraph on `mask` has a cycle through `v` of
    /// length `< below`, assuming `mask - v` has none.
    pub fn short_cycle_through(&self, mask: u64, v: u32, below: u32) -> bool {
        below > 3 && self.cycle_from(mask, v, below - 1).is_some()
    }

    /// Girth of the induced subgraph on `mask`; `None` if acyclic.
    pub fn girth(&self, mask: u64) -> Option<u32> {
        let mut best: Option<u32> = None;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let limit = best.map_or(self.size, |b| b - 1);
            if let Some(g) = self.cycle_from(mask, v, limit) {
                best = Some(g);
            }
        }
        best
    }
}

fn check_dim(m: u32) -> Result<()> {
    if !(1..=6).contains(&m) {
        return Err(Error::InvalidParams(format!("cube dimension {m} outside 1..=6")));
    }
    Ok(())
}

/// Words of `Q_m` with bit `i` clear, as a mask over `2^m` vertices.
fn axis_low(m: u32, i: u32) -> u64 {
    (0..1u32 << m).filter(|w| w >> i & 1 == 0).fold(0, |acc, w| acc | 1 << w)
}

/// An induced subgraph of `Q_m` given by its vertex mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CubeSubgraph {
    pub m: u32,
    pub mask: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgraphStats {
    pub vertices: u32,
    pub edges: u32,
    /// `degree_counts[d]` vertices of degree `d`.
    pub degree_counts: Vec<u32>,
    /// `None` for a forest.
    pub girth: Option<u32>,
}

impl CubeSubgraph {
    pub fn new(m: u32, mask: u64) -> Result<Self> {
        check_dim(m)?;
        if mask & !low_bits(1 << m) != 0 {
            return Err(Error::InvalidParams(format!("mask {mask:#x} has bits outside Q{m}")));
        }
        Ok(CubeSubgraph { m, mask })
    }
}

pub fn subgraph_stats(s: CubeSubgraph) -> SubgraphStats {
    let host = Host::cube(s.m).expect("validated dimension");
    let mut degree_counts = vec![0; s.m as usize + 1];
    let mut rest = s.mask;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        degree_counts[host.degree_in(s.mask, v) as usize] += 1;
    }
    SubgraphStats {
        vertices: s.mask.count_ones(),
        edges: host.edge_count(s.mask),
        degree_counts,
        girth: host.girth(s.mask),
    }
}
