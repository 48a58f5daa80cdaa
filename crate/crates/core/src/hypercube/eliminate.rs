//! Elimination of candidate unit 5-cube intersections for 4-regular
//! subgraphs of `Z^5` with girth at least 12.
//!
//! A candidate `h` (edges = vertices, no cycle of length `<= 10`) survives a
//! round only if, along every axis, it extends to an induced subgraph of the
//! `4 x 2 x 2 x 2 x 2` box of girth `>= 12` whose two flanking unit cubes are
//! again current candidates. The box is stored as four `Q4` layers of 16 bits,
//! the chosen axis being the layer index.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::canon::{canonical_form, swap_axes};
use super::search::{enumerate_constrained, Budget, Constraints, Problem};
use super::Host;
use crate::error::Result;

pub const GIRTH: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationState {
    pub survivors: BTreeSet<u64>,
    pub iteration: u32,
    /// Survivor count after each completed round, starting with the initial set.
    pub history: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateSet {
    pub state: EliminationState,
    /// Classes with girth `>= 12` and more edges than vertices (expected none).
    pub denser_classes: Vec<u64>,
    /// Longest induced cycle of `Q5`; members of the set contain cycles of
    /// length 12 up to this value.
    pub longest_induced_cycle: u32,
    pub nodes: u64,
}

/// Induced subgraphs of `Q5` with as many edges as vertices and no cycle of
/// length `<= 10`, up to isometry.
pub fn build_candidate_set_s(budget: u64) -> Result<CandidateSet> {
    let longest = super::cycle::longest_induced_cycle(5, budget)?;
    let e = enumerate_constrained(5, &Constraints::girth(GIRTH).ratio(1, 1), budget)?;
    let host = Host::cube(5)?;
    let (equal, denser): (Vec<u64>, Vec<u64>) = e
        .classes
        .iter()
        .map(|c| c.canonical_mask)
        .partition(|&s| host.edge_count(s) == s.count_ones());
    let survivors: BTreeSet<u64> = equal.into_iter().collect();
    let n = survivors.len();
    Ok(CandidateSet {
        state: EliminationState { survivors, iteration: 0, history: vec![n] },
        denser_classes: denser,
        longest_induced_cycle: longest,
        nodes: e.nodes,
    })
}

fn is_candidate(host: &Host, flank: u64, survivors: &BTreeSet<u64>) -> bool {
    flank != 0 && host.edge_count(flank) == flank.count_ones() && survivors.contains(&canonical_form(5, flank).canonical_mask)
}

/// Outer layers that extend the two middle layers `(a, b)` to three layers
/// of girth `>= 12` whose outer cube is a candidate. Returns 16-bit layers.
fn flanks(a: u64, b: u64, survivors: &BTreeSet<u64>, budget: &Budget) -> Result<Vec<u64>> {
    let prism = Host::prism(3, 4)?;
    let cube = Host::cube(5)?;
    let problem = Problem { host: &prism, min_girth: GIRTH, degree: None, ratio: Some((1, 1, 0xffff_ffff)) };
    let fixed = a << 16 | b << 32;
    let fixed_out = !fixed & 0xffff_ffff_0000;
    let leaves = problem.search(fixed, fixed_out, budget, 0)?;
    Ok(leaves
        .into_iter()
        .filter(|&s| is_candidate(&cube, s & 0xffff_ffff, survivors))
        .map(|s| s & 0xffff)
        .collect())
}

/// Whether `h`, with axis `axis` as the layer axis, extends on both sides.
fn extends_along(h: u64, axis: u32, survivors: &BTreeSet<u64>, budget: &Budget) -> Result<bool> {
    let t = swap_axes(5, axis, 4, h);
    let (l1, l2) = (t & 0xffff, t >> 16);
    let left = flanks(l1, l2, survivors, budget)?;
    if left.is_empty() {
        return Ok(false);
    }
    // The right flank is the left flank of the mirror image.
    let right = flanks(l2, l1, survivors, budget)?;
    let boxed = Host::prism(4, 4)?;
    for &r in &right {
        for &l in &left {
            let whole = l | l1 << 16 | l2 << 32 | r << 48;
            if boxed.girth(whole).is_none_or(|g| g >= GIRTH) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Whether `h` survives against the candidate set `survivors`.
pub fn survives(h: u64, survivors: &BTreeSet<u64>, budget: u64) -> Result<bool> {
    let b = Budget::new(budget);
    for axis in 0..5 {
        if !extends_along(h, axis, survivors, &b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One round: every class is tested against the same survivor set.
pub fn eliminate_iteration(state: &EliminationState, budget: u64) -> Result<EliminationState> {
    let kept: Vec<(u64, bool)> = state
        .survivors
        .par_iter()
        .map(|&h| survives(h, &state.survivors, budget).map(|ok| (h, ok)))
        .collect::<Result<_>>()?;
    let survivors: BTreeSet<u64> = kept.into_iter().filter(|x| x.1).map(|x| x.0).collect();
    let mut history = state.history.clone();
    history.push(survivors.len());
    Ok(EliminationState { survivors, iteration: state.iteration + 1, history })
}

pub fn eliminate_to_fixpoint(mut state: EliminationState, budget: u64) -> Result<EliminationState> {
    loop {
        let next = eliminate_iteration(&state, budget)?;
        if next.survivors == state.survivors {
            return Ok(next);
        }
        state = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_extends_without_candidates() {
        // Against an empty survivor set nothing extends.
        let b = Budget::new(1_000_000);
        assert!(flanks(1, 0, &BTreeSet::new(), &b).unwrap().is_empty());
    }
}
