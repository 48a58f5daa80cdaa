//! Exact graph metrics over periodic graph oracles.
//!
//! Infinite periodic graphs are handled through their representatives: a
//! breadth-first search from every representative sees, up to translation,
//! every vertex of the graph, so minima over representatives are minima
//! over all vertices.

use std::collections::{HashMap, HashSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Point};
use crate::rulegraph::{validate_spec, Coverage, PeriodicGraphSpec};

pub const DEFAULT_GIRTH_CAP: u32 = 40;

/// Anything that can list the neighbours of a vertex.
pub trait Adjacency: Sync {
    fn adjacent_vertices(&self, p: &Point) -> Vec<Point>;
}

impl Adjacency for PeriodicGraphSpec {
    fn adjacent_vertices(&self, p: &Point) -> Vec<Point> {
        self.neighbors_unchecked(p)
    }
}

/// An explicit finite graph on lattice points.
#[derive(Debug, Clone, Default)]
pub struct FiniteGraph {
    pub vertices: Vec<Point>,
    adj: HashMap<Point, Vec<Point>>,
}

impl FiniteGraph {
    /// The subgraph of `g` induced on `vertices` (edges taken from `g`).
    pub fn restrict(g: &impl Adjacency, vertices: Vec<Point>) -> Self {
        let set: HashSet<&Point> = vertices.iter().collect();
        let adj = vertices
            .iter()
            .map(|v| (v.clone(), g.adjacent_vertices(v).into_iter().filter(|w| set.contains(w)).collect()))
            .collect();
        FiniteGraph { vertices, adj }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(Vec::len).sum::<usize>() / 2
    }
}

impl Adjacency for FiniteGraph {
    fn adjacent_vertices(&self, p: &Point) -> Vec<Point> {
        self.adj.get(p).cloned().unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GirthValue {
    Exact(u32),
    /// No cycle of length `<= limit`.
    AboveBound(u32),
}

impl GirthValue {
    pub fn exact(&self) -> Option<u32> {
        match self {
            GirthValue::Exact(g) => Some(*g),
            GirthValue::AboveBound(_) => None,
        }
    }

    /// True if the girth is known to be at least `g`.
    pub fn at_least(&self, g: u32) -> bool {
        match *self {
            GirthValue::Exact(x) => x >= g,
            GirthValue::AboveBound(l) => l + 1 >= g,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GirthReport {
    pub girth: GirthValue,
    pub witness: Vec<Point>,
    /// Shortest cycle seen from each representative (`None` if above the cap).
    pub per_representative_min: Vec<(Point, Option<u32>)>,
}

struct Bfs {
    nodes: Vec<(Point, u32, usize)>,
    index: HashMap<Point, usize>,
}

impl Bfs {
    fn path_to_root(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![i];
        while self.nodes[i].2 != i {
            i = self.nodes[i].2;
            out.push(i);
        }
        out
    }

    /// The simple cycle closed by the non-tree edge `a`–`b`.
    fn cycle(&self, a: usize, b: usize) -> Vec<Point> {
        let pa = self.path_to_root(a);
        let pb = self.path_to_root(b);
        let on_a: HashSet<usize> = pa.iter().copied().collect();
        let lca_pos_b = pb.iter().position(|x| on_a.contains(x)).unwrap();
        let lca = pb[lca_pos_b];
        let lca_pos_a = pa.iter().position(|&x| x == lca).unwrap();
        let mut cyc: Vec<Point> = pa[..=lca_pos_a].iter().rev().map(|&i| self.nodes[i].0.clone()).collect();
        // cyc runs lca -> a; continue b -> (just below) lca
        cyc.extend(pb[..lca_pos_b].iter().map(|&i| self.nodes[i].0.clone()));
        cyc
    }
}

/// Shortest cycle detectable from `root` with length `<= cap`.
fn shortest_cycle_from(g: &impl Adjacency, root: &Point, cap: u32) -> Option<Vec<Point>> {
    let mut bfs = Bfs { nodes: vec![(root.clone(), 0, 0)], index: HashMap::from([(root.clone(), 0)]) };
    let mut best: Option<Vec<Point>> = None;
    let mut best_len = cap + 1;
    let max_depth = cap.div_ceil(2);
    let mut head = 0;
    while head < bfs.nodes.len() {
        let (u, du, parent) = bfs.nodes[head].clone();
        if 2 * du >= best_len {
            break;
        }
        for w in g.adjacent_vertices(&u) {
            match bfs.index.get(&w) {
                Some(&wi) => {
                    if wi == parent || bfs.nodes[wi].2 == head {
                        continue;
                    }
                    let dw = bfs.nodes[wi].1;
                    if du + dw + 1 < best_len {
                        let cyc = bfs.cycle(head, wi);
                        if (cyc.len() as u32) < best_len {
                            best_len = cyc.len() as u32;
                            best = Some(cyc);
                        }
                    }
                }
                None => {
                    if du < max_depth {
                        let i = bfs.nodes.len();
                        bfs.index.insert(w.clone(), i);
                        bfs.nodes.push((w, du + 1, head));
                    }
                }
            }
        }
        head += 1;
    }
    best
}

/// Girth from a set of roots that meets every shortest cycle (up to symmetry).
pub fn girth_from_roots(g: &impl Adjacency, roots: &[Point], max_girth: u32) -> GirthReport {
    let per: Vec<(Point, Option<Vec<Point>>)> = roots
        .par_iter()
        .map(|r| (r.clone(), shortest_cycle_from(g, r, max_girth)))
        .collect();
    let best = per
        .iter()
        .filter_map(|(_, c)| c.as_ref())
        .min_by_key(|c| c.len())
        .cloned();
    let per_representative_min = per.iter().map(|(r, c)| (r.clone(), c.as_ref().map(|c| c.len() as u32))).collect();
    match best {
        Some(c) => GirthReport { girth: GirthValue::Exact(c.len() as u32), witness: c, per_representative_min },
        None => GirthReport { girth: GirthValue::AboveBound(max_girth), witness: Vec::new(), per_representative_min },
    }
}

pub fn girth(spec: &PeriodicGraphSpec, max_girth: u32) -> Result<GirthReport> {
    if max_girth < 3 {
        return Err(Error::InvalidParams(format!("girth cap {max_girth} too small")));
    }
    Ok(girth_from_roots(spec, &spec.representatives, max_girth))
}

/// True if `cycle` is a closed walk of distinct vertices along edges of `g`.
pub fn is_valid_cycle(g: &impl Adjacency, cycle: &[Point]) -> bool {
    let n = cycle.len();
    if n < 3 {
        return false;
    }
    let distinct: HashSet<&Point> = cycle.iter().collect();
    distinct.len() == n && (0..n).all(|i| g.adjacent_vertices(&cycle[i]).contains(&cycle[(i + 1) % n]))
}

/// Number of vertices at exact distance `d` from `root`, for every `d <= depth`.
pub fn sphere_sizes(g: &impl Adjacency, root: &Point, depth: u32) -> Vec<u64> {
    let mut seen: HashSet<Point> = HashSet::from([root.clone()]);
    let mut frontier = vec![root.clone()];
    let mut sizes = vec![1u64];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in &frontier {
            for w in g.adjacent_vertices(u) {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        sizes.push(next.len() as u64);
        frontier = next;
    }
    sizes
}

#[derive(Debug, Clone, Serialize)]
pub struct SpreadProfile {
    pub depth: u32,
    pub counts: Vec<(Point, u64)>,
    pub spread: u64,
    /// False when representative coverage was only argued, making `spread`
    /// an upper bound rather than the exact minimum.
    pub coverage_exact: bool,
}

pub fn spread(spec: &PeriodicGraphSpec, depth: u32) -> Result<SpreadProfile> {
    if depth < 1 {
        return Err(Error::InvalidParams("spread depth must be >= 1".into()));
    }
    let counts: Vec<(Point, u64)> = spec
        .representatives
        .par_iter()
        .map(|r| (r.clone(), sphere_sizes(spec, r, depth)[depth as usize]))
        .collect();
    let spread = counts.iter().map(|c| c.1).min().unwrap_or(0);
    Ok(SpreadProfile { depth, counts, spread, coverage_exact: !matches!(spec.coverage, Coverage::Argued(_)) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Regularity {
    Regular(u32),
    NotRegular { witness: Point, degree: u32, expected: u32 },
}

pub fn regularity(spec: &PeriodicGraphSpec, window_radius: i64) -> Result<Regularity> {
    if window_radius < 2 {
        return Err(Error::InvalidParams("window radius must be >= 2".into()));
    }
    let mut pts = spec.representatives.clone();
    pts.extend(spec.window(window_radius));
    let mut first: Option<u32> = None;
    for p in pts {
        if !spec.is_vertex(&p)? {
            continue;
        }
        let d = spec.neighbors_unchecked(&p).len() as u32;
        match first {
            None => first = Some(d),
            Some(k) if k != d => return Ok(Regularity::NotRegular { witness: p, degree: d, expected: k }),
            _ => {}
        }
    }
    first.map(Regularity::Regular).ok_or_else(|| Error::InvalidSpec("no vertices in window".into()))
}

/// Lattice difference vectors with squared norm in `1..=max_sq`, grouped by norm.
fn difference_shells(lattice: LatticeSpec, radius: i64) -> Vec<(i64, Vec<Vec<i64>>)> {
    let mut by_norm: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    for p in crate::rulegraph::spec::window_points(lattice, radius) {
        let n: i64 = p.0.iter().map(|x| x * x).sum();
        if n > 0 {
            by_norm.entry(n).or_default().push(p.0);
        }
    }
    let mut shells: Vec<_> = by_norm.into_iter().collect();
    shells.sort_by_key(|s| s.0);
    shells
}

/// Minimum squared distance between distinct non-adjacent vertices.
///
/// Pairs are taken as `(r, r + d)` with `r` a representative and `d` in the
/// window of radius `window_radius`, which covers every pair up to
/// translation.
pub fn min_nonadjacent_distance(spec: &PeriodicGraphSpec, window_radius: i64) -> Result<i64> {
    if window_radius < 3 {
        return Err(Error::InvalidParams("window radius must be >= 3".into()));
    }
    for (norm, shell) in difference_shells(spec.lattice, window_radius) {
        for r in &spec.representatives {
            let ns = spec.neighbors_unchecked(r);
            for d in &shell {
                let q = r.offset(d);
                if spec.contains_vertex(&q) && !ns.contains(&q) {
                    return Ok(norm);
                }
            }
        }
    }
    Err(Error::InvalidSpec("every pair in the window is adjacent".into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub m: u32,
    #[serde(serialize_with = "ser_ratio")]
    pub per_cube_max: Ratio<i64>,
    /// Σ edges / Σ vertices over all cubes of one fundamental domain.
    #[serde(serialize_with = "ser_ratio")]
    pub per_cube_average: Ratio<i64>,
    pub cubes_examined: u64,
}

fn ser_ratio<S: serde::Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == m)
        .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

/// Edge/vertex counts of the subgraph inside every unit `m`-cube of one
/// fundamental domain.
pub fn hypercube_ratio(spec: &PeriodicGraphSpec, m: u32) -> Result<RatioReport> {
    let n = spec.dim();
    if !matches!(spec.lattice, LatticeSpec::Zn(_)) || !spec.is_induced() {
        return Err(Error::InvalidParams("cube ratios need an induced subgraph of Z^n".into()));
    }
    if m < 1 || m as usize > n {
        return Err(Error::InvalidParams(format!("cube dimension {m} outside 1..={n}")));
    }
    let domain = spec
        .fundamental_domain()
        .ok_or_else(|| Error::NoFundamentalDomain(format!("{} has no full-rank translation lattice", spec.name)))?;
    let m = m as usize;
    let axes = subsets(n, m);
    let (mut tot_e, mut tot_v, mut cubes) = (0i64, 0i64, 0u64);
    let mut best: Option<Ratio<i64>> = None;
    for x in &domain {
        for s in &axes {
            let mut inside = vec![false; 1 << m];
            for (b, slot) in inside.iter_mut().enumerate() {
                let mut p = x.clone();
                for (j, &ax) in s.iter().enumerate() {
                    p.0[ax] += (b >> j & 1) as i64;
                }
                *slot = spec.contains_vertex(&p);
            }
            let v = inside.iter().filter(|&&x| x).count() as i64;
            if v == 0 {
                continue;
            }
            let e = (0..1usize << m)
                .flat_map(|b| (0..m).map(move |j| (b, b | 1 << j)))
                .filter(|&(a, b)| a != b && inside[a] && inside[b])
                .count() as i64;
            cubes += 1;
            tot_e += e;
            tot_v += v;
            let r = Ratio::new(e, v);
            best = Some(best.map_or(r, |b: Ratio<i64>| b.max(r)));
        }
    }
    let per_cube_max = best.ok_or_else(|| Error::InvalidSpec("no cube meets the subgraph".into()))?;
    Ok(RatioReport { m: m as u32, per_cube_max, per_cube_average: Ratio::new(tot_e, tot_v), cubes_examined: cubes })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub degree: u32,
    pub depth: u32,
    pub girth_at_least_2d_plus_1: bool,
    pub spread: u64,
    pub tree_count: u64,
    pub consistent: bool,
}

/// Checks `g >= 2d + 1  <=>  s(G, d) = k(k-1)^(d-1)` with both sides computed.
pub fn spread_girth_consistency(spec: &PeriodicGraphSpec, d: u32) -> Result<ConsistencyReport> {
    if d < 1 {
        return Err(Error::InvalidParams("depth must be >= 1".into()));
    }
    let k = match spec.claimed_degree {
        Some(k) => k,
        None => match regularity(spec, 2)? {
            Regularity::Regular(k) => k,
            Regularity::NotRegular { .. } => return Err(Error::InvalidSpec("spec is not regular".into())),
        },
    };
    let report = validate_spec(spec, 2);
    if report.observed_degrees != vec![k] {
        return Err(Error::InvalidSpec(format!("{} is not {k}-regular in the window", spec.name)));
    }
    let g = girth(spec, 2 * d + 1)?;
    let lhs = g.girth.at_least(2 * d + 1);
    let s = spread(spec, d)?.spread;
    let tree = u64::from(k) * u64::from(k - 1).pow(d - 1);
    Ok(ConsistencyReport {
        degree: k,
        depth: d,
        girth_at_least_2d_plus_1: lhs,
        spread: s,
        tree_count: tree,
        consistent: lhs == (s == tree),
    })
}
