//! Induced cycles ("coils") of `Q_m` by backtracking path extension.
//!
//! The group is transitive on vertices and the stabiliser of a vertex is
//! transitive on its neighbours, so every coil has an image starting with
//! the edge `0 -> 1`.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use super::canon::canonical_form;
use super::Host;
use crate::error::{Error, Result};

struct Walk<'a> {
    host: &'a Host,
    nodes: &'a AtomicU64,
    budget: u64,
}

impl Walk<'_> {
    /// Extends the induced path ending at `last`; `path` is its vertex set,
    /// `closed(len, mask)` is called for every coil.
    fn extend(&self, path: u64, last: u32, len: u32, closed: &mut impl FnMut(u32, u64)) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded { nodes: self.budget });
        }
        let mut cand = self.host.nbr(last) & !path;
        while cand != 0 {
            let w = cand.trailing_zeros();
            cand &= cand - 1;
            let touching = self.host.nbr(w) & path;
            let closes = len >= 3 && touching == (1 << last) | 1;
            if closes {
                closed(len + 1, path | 1 << w);
            } else if touching == 1 << last {
                self.extend(path | 1 << w, w, len + 1, closed)?;
            }
        }
        Ok(())
    }
}

fn walk(m: u32, budget: u64, closed: &mut impl FnMut(u32, u64)) -> Result<u64> {
    let host = Host::cube(m)?;
    let nodes = AtomicU64::new(0);
    let w = Walk { host: &host, nodes: &nodes, budget };
    if m >= 2 {
        w.extend(0b11, 1, 2, closed)?;
    }
    Ok(nodes.load(Ordering::Relaxed))
}

/// Maximum length of an induced cycle of `Q_m` (0 if there is none).
pub fn longest_induced_cycle(m: u32, budget: u64) -> Result<u32> {
    let mut best = 0;
    walk(m, budget, &mut |len, _| best = best.max(len))?;
    Ok(best)
}

/// Canonical vertex masks of the induced cycles of `Q_m` with length `>= min_len`.
pub fn induced_cycle_classes(m: u32, min_len: u32, budget: u64) -> Result<Vec<(u32, u64)>> {
    let mut masks = BTreeSet::new();
    walk(m, budget, &mut |len, mask| {
        if len >= min_len {
            masks.insert((len, mask));
        }
    })?;
    let classes: BTreeSet<(u32, u64)> =
        masks.into_iter().map(|(len, mask)| (len, canonical_form(m, mask).canonical_mask)).collect();
    Ok(classes.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::{subgraph_stats, CubeSubgraph};

    /// Brute force: a vertex set induces a cycle iff it is connected and
    /// 2-regular.
    fn brute_longest(m: u32) -> u32 {
        let mut best = 0;
        for s in 1u64..1 << (1 << m) {
            let st = subgraph_stats(CubeSubgraph::new(m, s).unwrap());
            let two_regular = st.degree_counts[2] == st.vertices;
            if two_regular && st.girth == Some(st.vertices) {
                best = best.max(st.vertices);
            }
        }
        best
    }

    #[test]
    fn small_cubes() {
        assert_eq!(longest_induced_cycle(2, 1000).unwrap(), 4);
        assert_eq!(longest_induced_cycle(3, 1000).unwrap(), 6);
        assert_eq!(brute_longest(3), 6);
        assert_eq!(longest_induced_cycle(4, 1_000_000).unwrap(), 8);
        assert_eq!(brute_longest(4), 8);
    }

    #[test]
    fn coil_classes_are_cycles() {
        for (len, mask) in induced_cycle_classes(4, 4, 1_000_000).unwrap() {
            let st = subgraph_stats(CubeSubgraph::new(4, mask).unwrap());
            assert_eq!((st.vertices, st.edges, st.girth), (len, len, Some(len)));
        }
        assert!(matches!(longest_induced_cycle(5, 10), Err(Error::BudgetExceeded { .. })));
    }
}
