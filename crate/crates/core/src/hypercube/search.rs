//! Depth-first include/exclude search over vertex subsets of a [`Host`].
//!
//! Each node fixes a set `inc` of included and `exc` of excluded vertices.
//! Propagation excludes vertices whose inclusion would close a short cycle
//! or overload a degree, forces inclusions a degree bound needs, and prunes
//! with an upper bound on the final edge/vertex balance.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::canon::{canonical_form, CanonicalClass};
use super::cycle::induced_cycle_classes;
use super::Host;
use crate::error::{Error, Result};

pub(crate) struct Budget {
    used: AtomicU64,
    limit: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { used: AtomicU64::new(0), limit }
    }

    fn tick(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            return Err(Error::BudgetExceeded { nodes: self.limit });
        }
        Ok(())
    }

    pub(crate) fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.limit)
    }
}

/// Requirements on the included set.
pub(crate) struct Problem<'a> {
    pub host: &'a Host,
    /// No cycle shorter than this.
    pub min_girth: u32,
    /// Every included vertex has exactly this degree.
    pub degree: Option<u32>,
    /// `(p, q, region)`: `q · edges >= p · vertices` inside `region`.
    pub ratio: Option<(u32, u32, u64)>,
}

fn bits(mut x: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let v = x.trailing_zeros();
            x &= x - 1;
            v
        })
    })
}

impl Problem<'_> {
    fn closes_short_cycle(&self, inc: u64, v: u32) -> bool {
        self.host.short_cycle_through(inc | 1 << v, v, self.min_girth)
    }

    /// Propagates to a fixpoint; `None` if the node is infeasible.
    fn propagate(&self, mut inc: u64, mut exc: u64) -> Option<(u64, u64)> {
        let all = self.host.all();
        loop {
            let mut changed = false;
            if let Some(d) = self.degree {
                for u in bits(inc) {
                    let nb = self.host.nbr(u);
                    let und = nb & all & !inc & !exc;
                    let have = (nb & inc).count_ones();
                    let room = (nb & all & !exc).count_ones();
                    if have > d || room < d {
                        return None;
                    }
                    if und == 0 {
                        continue;
                    }
                    if have == d {
                        exc |= und;
                        changed = true;
                    } else if room == d {
                        for w in bits(und) {
                            if self.closes_short_cycle(inc, w) {
                                return None;
                            }
                            inc |= 1 << w;
                        }
                        changed = true;
                    }
                }
                for u in bits(all & !inc & !exc) {
                    if (self.host.nbr(u) & inc).count_ones() > d {
                        exc |= 1 << u;
                        changed = true;
                    }
                }
            }
            for u in bits(all & !inc & !exc) {
                if (self.host.nbr(u) & inc).count_ones() >= 2 && self.closes_short_cycle(inc, u) {
                    exc |= 1 << u;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (self.balance_bound(inc, exc) >= 0).then_some((inc, exc))
    }

    /// Upper bound on `q · Σ deg - 2 p · |V|` over the region for any completion.
    fn balance_bound(&self, inc: u64, exc: u64) -> i64 {
        let Some((p, q, region)) = self.ratio else { return 0 };
        let open = region & self.host.all() & !exc;
        let mut sum = 0i64;
        for u in bits(open) {
            let mut pdeg = (self.host.nbr(u) & open).count_ones();
            if let Some(d) = self.degree {
                pdeg = pdeg.min(d);
            }
            let c = i64::from(q) * i64::from(pdeg) - 2 * i64::from(p);
            sum += if inc >> u & 1 == 1 { c } else { c.max(0) };
        }
        sum
    }

    fn accepts(&self, inc: u64) -> bool {
        if self.host.girth(inc).is_some_and(|g| g < self.min_girth) {
            return false;
        }
        if let Some(d) = self.degree {
            if bits(inc).any(|u| self.host.degree_in(inc, u) != d) {
                return false;
            }
        }
        if let Some((p, q, region)) = self.ratio {
            let r = inc & region;
            if u64::from(q) * u64::from(self.host.edge_count(r)) < u64::from(p) * u64::from(r.count_ones()) {
                return false;
            }
        }
        true
    }

    /// All completions of `(inc, exc)` meeting the requirements.
    pub(crate) fn search(&self, inc: u64, exc: u64, budget: &Budget, par_depth: u32) -> Result<Vec<u64>> {
        budget.tick()?;
        let Some((inc, exc)) = self.propagate(inc, exc) else { return Ok(Vec::new()) };
        let und = self.host.all() & !inc & !exc;
        if und == 0 {
            return Ok(if self.accepts(inc) { vec![inc] } else { Vec::new() });
        }
        let v = bits(und)
            .max_by_key(|&u| ((self.host.nbr(u) & inc).count_ones(), std::cmp::Reverse(u)))
            .expect("undecided vertex");
        let include = || {
            if self.closes_short_cycle(inc, v) {
                Ok(Vec::new())
            } else {
                self.search(inc | 1 << v, exc, budget, par_depth.saturating_sub(1))
            }
        };
        let exclude = || self.search(inc, exc | 1 << v, budget, par_depth.saturating_sub(1));
        let (a, b) = if par_depth > 0 { rayon::join(include, exclude) } else { (include(), exclude()) };
        let mut out = a?;
        out.extend(b?);
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraints {
    pub min_girth: u32,
    pub regular_degree: Option<u32>,
    /// `(p, q)`: at least `p/q` as many edges as vertices.
    pub min_ratio: Option<(u32, u32)>,
    pub nonempty: bool,
    /// Keep only subgraphs with exactly as many edges as vertices.
    pub edges_equal_vertices: bool,
}

impl Constraints {
    pub fn girth(min_girth: u32) -> Self {
        Constraints { min_girth, regular_degree: None, min_ratio: None, nonempty: true, edges_equal_vertices: false }
    }

    pub fn regular(mut self, d: u32) -> Self {
        self.regular_degree = Some(d);
        self
    }

    pub fn ratio(mut self, p: u32, q: u32) -> Self {
        self.min_ratio = Some((p, q));
        self
    }

    /// Direct check of a single mask.
    pub fn admits(&self, m: u32, mask: u64) -> bool {
        let host = Host::cube(m).expect("valid dimension");
        let v = mask.count_ones();
        let e = host.edge_count(mask);
        (!self.nonempty || v > 0)
            && host.girth(mask).is_none_or(|g| g >= self.min_girth)
            && self.regular_degree.is_none_or(|d| bits(mask).all(|u| host.degree_in(mask, u) == d))
            && self.min_ratio.is_none_or(|(p, q)| u64::from(q) * u64::from(e) >= u64::from(p) * u64::from(v))
            && (!self.edges_equal_vertices || e == v)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub m: u32,
    pub constraints: Constraints,
    pub classes: Vec<CanonicalClass>,
    pub nodes: u64,
    pub seeds: usize,
}

/// Every isometry class of induced subgraphs of `Q_m` meeting `c`.
pub fn enumerate_constrained(m: u32, c: &Constraints, budget: u64) -> Result<Enumeration> {
    let host = Host::cube(m)?;
    let all = host.all();
    let problem = Problem {
        host: &host,
        min_girth: c.min_girth,
        degree: c.regular_degree,
        ratio: c.min_ratio.map(|(p, q)| (p, q, all)),
    };
    let unit = |i: u32| 1u64 << (1u32 << i);
    // Seeds cover every nonempty solution up to isometry.
    let seeds: Vec<(u64, u64)> = match (c.regular_degree, c.min_ratio) {
        (Some(d), _) if d > m => Vec::new(),
        (Some(d), _) => {
            let inc = (0..d).fold(1u64, |acc, i| acc | unit(i));
            let exc = (d..m).fold(0u64, |acc, i| acc | unit(i));
            vec![(inc, exc)]
        }
        // At least as many edges as vertices forces a cycle; its shortest
        // cycle is an induced cycle of the cube.
        (None, Some((p, q))) if p >= q && p > 0 => {
            induced_cycle_classes(m, c.min_girth.max(4), budget)?.into_iter().map(|(_, mask)| (mask, 0)).collect()
        }
        _ => vec![(1, 0)],
    };
    let counter = Budget::new(budget);
    let par = if seeds.len() > 8 { 2 } else { 8 };
    let leaves: Vec<Vec<u64>> =
        seeds.par_iter().map(|&(inc, exc)| problem.search(inc, exc, &counter, par)).collect::<Result<_>>()?;
    let mut masks: BTreeSet<u64> = leaves.into_iter().flatten().filter(|&s| c.admits(m, s)).collect();
    if !c.nonempty && c.admits(m, 0) {
        masks.insert(0);
    }
    let classes: BTreeSet<CanonicalClass> = masks.into_par_iter().map(|s| canonical_form(m, s)).collect::<Vec<_>>().into_iter().collect();
    Ok(Enumeration { m, constraints: c.clone(), classes: classes.into_iter().collect(), nodes: counter.used(), seeds: seeds.len() })
}
