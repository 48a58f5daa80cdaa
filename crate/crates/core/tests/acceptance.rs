//! Acceptance suite: one PASS/FAIL line per criterion, exact tolerances.
//!
//! Run with `cargo test -p gridgirth --test acceptance -- --nocapture`.
//! The suite fails unless the set of failing criteria equals `KNOWN_FAILURES`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::json;

use gridgirth::bounds::{alpha_holds, delannoy, exact_girth_bound, min_alpha, tree_ball};
use gridgirth::gallery::{find_construction, list_constructions, ConstructionEntry};
use gridgirth::hypercube::canon::{coordinate_permutations, transform};
use gridgirth::hypercube::certificate::{check_certificate, elimination_certificate, enumeration_certificate, rounds_of};
use gridgirth::hypercube::{
    build_candidate_set_s, canonical_form, eliminate_iteration, eliminate_to_fixpoint, enumerate_constrained, longest_induced_cycle,
    subgraph_stats, CanonicalClass, Constraints, CubeSubgraph, DEFAULT_NODE_BUDGET,
};
use gridgirth::metrics::{
    girth_from_roots, hypercube_ratio, sphere_sizes, spread_girth_consistency, Adjacency, FiniteGraph,
};
use gridgirth::report::{verify_entry, Status, VerifyOptions};
use gridgirth::rulegraph::{EdgeSet, VertexSet};
use gridgirth::{LatticeSpec, PeriodicGraphSpec, Point};

/// The verbatim motif listing for `n5k3-motif` is not 3-regular; a one-sign
/// correction (`n5k3-motif-corrected`) meets the claim. `gamma4-2` and
/// `gamma4-3` agree in every depth-8 profile and local edge motif; they are
/// first separated at depth 9.
const KNOWN_FAILURES: &[&str] =
    &["golden n5k3-motif", "gamma4 variants pairwise distinct by depth-8 spread profile or edge motif"];

struct Suite {
    failed: BTreeSet<String>,
    count: usize,
}

impl Suite {
    fn check(&mut self, name: &str, f: impl FnOnce() -> Result<String, String>) {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        self.count += 1;
        match r {
            Ok(detail) => println!("PASS  {name}  [{detail}] ({secs:.2}s)"),
            Err(detail) => {
                println!("FAIL  {name}  [{detail}] ({secs:.2}s)");
                self.failed.insert(name.to_string());
            }
        }
    }
}

fn entry(id: &str) -> Result<&'static ConstructionEntry, String> {
    find_construction(id).map_err(|e| e.to_string())
}

/// Compares every verification record of `id` against its claims.
fn golden(id: &str) -> Result<String, String> {
    let e = entry(id)?;
    let recs = verify_entry(e, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    let shown: Vec<String> = recs.iter().map(|r| format!("{} {}={}", r.check, r.claimed, r.computed)).collect();
    if recs.iter().all(|r| r.status == Status::Pass) {
        Ok(shown.join(", "))
    } else {
        let bad: Vec<String> = recs
            .iter()
            .filter(|r| r.status != Status::Pass)
            .map(|r| format!("{} claimed {} computed {} {}", r.check, r.claimed, r.computed, r.detail.clone().unwrap_or_default()))
            .collect();
        Err(bad.join("; "))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn prop_result<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>, cases: u32) -> Result<String, String> {
    r.map(|_| format!("{cases} cases")).map_err(|e| e.to_string())
}

/// Vertices of `Q_6` (as words) that lie in the spec's vertex set.
fn parity_mask(spec: &PeriodicGraphSpec) -> u64 {
    (0..64u64)
        .filter(|w| spec.contains_vertex(&Point((0..6).map(|i| (w >> i & 1) as i64).collect())))
        .fold(0, |acc, w| acc | 1 << w)
}

fn full_grid(n: usize) -> PeriodicGraphSpec {
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    PeriodicGraphSpec::new(
        format!("Z{n}"),
        LatticeSpec::zn(n).unwrap(),
        VertexSet::AllLatticePoints,
        EdgeSet::Induced,
        Some(id),
        None,
        Some(2 * n as u32),
    )
    .unwrap()
}

/// Shortest cycle by enumerating every simple cycle (each from its least vertex).
fn oracle_girth(adj: &[Vec<usize>]) -> Option<u32> {
    fn dfs(adj: &[Vec<usize>], start: usize, u: usize, len: u32, on: &mut Vec<bool>, best: &mut Option<u32>) {
        for &w in &adj[u] {
            if w == start && len >= 3 {
                *best = Some(best.map_or(len, |b| b.min(len)));
            } else if w > start && !on[w] && best.is_none_or(|b| len + 1 < b) {
                on[w] = true;
                dfs(adj, start, w, len + 1, on, best);
                on[w] = false;
            }
        }
    }
    let mut best = None;
    for s in 0..adj.len() {
        let mut on = vec![false; adj.len()];
        on[s] = true;
        dfs(adj, s, s, 1, &mut on, &mut best);
    }
    best
}

fn bfs_layers(g: &impl Adjacency, root: &Point, depth: u32) -> Vec<Vec<Point>> {
    let mut seen: HashSet<Point> = HashSet::from([root.clone()]);
    let mut layers = vec![vec![root.clone()]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in layers.last().unwrap() {
            for w in g.adjacent_vertices(u) {
                if seen.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        layers.push(next);
    }
    layers
}

#[test]
fn acceptance() {
    let mut s = Suite { failed: BTreeSet::new(), count: 0 };

    // Golden claims.
    for id in [
        "G1", "G2", "G3", "G4", "thm1-n3", "thm1-n5", "thm1-n7", "n4-family-S1-S2", "gamma6", "slab-n3-k0",
        "slab-n5-k0", "slab-n7-k0", "n4k3-motif", "d4k3-motif", "n5k3-motif", "n5k3-motif-corrected", "n5k4-qr",
        "n5k4-mod3", "n6k4-motif", "gammaK2-k3", "gammaK2-k4", "gammaK2-k3-c3", "gamma3-noninduced", "gammaBCC",
        "gammaFCC", "gamma4-1", "gamma4-2", "gamma4-3",
    ] {
        s.check(&format!("golden {id}"), || golden(id));
    }

    let q6 = enumerate_constrained(6, &Constraints::girth(8).regular(3), DEFAULT_NODE_BUDGET);
    s.check("gamma6 mod-2 quotient has 40 classes and is the Q6 cubic girth-8 class", || {
        let e = entry("gamma6")?;
        let mask = parity_mask(&e.spec);
        ensure(mask.count_ones() == 40, format!("{} classes", mask.count_ones()))?;
        let q6 = q6.as_ref().map_err(|e| e.to_string())?;
        let c = canonical_form(6, mask);
        ensure(q6.classes == vec![c], format!("{c:?} vs {:?}", q6.classes))?;
        Ok(format!("40 classes, canonical {:#x}", c.canonical_mask))
    });

    // Weak distinctness: each pair must differ in its multiset of sphere-size
    // sequences to depth 8 or in its multiset of per-vertex edge directions.
    let gamma4 = ["gamma4-1", "gamma4-2", "gamma4-3"];
    let invariants = |id: &str, depth: u32| -> Result<(Vec<Vec<u64>>, Vec<Vec<usize>>), String> {
        let spec = &entry(id)?.spec;
        let mut spheres: Vec<Vec<u64>> = spec.representatives.iter().map(|r| sphere_sizes(spec, r, depth)).collect();
        spheres.sort();
        let mut motif: Vec<Vec<usize>> = spec
            .representatives
            .iter()
            .map(|r| {
                let mut axes: Vec<usize> =
                    spec.neighbors_unchecked(r).iter().map(|w| w.diff(r).iter().position(|x| *x != 0).unwrap()).collect();
                axes.sort_unstable();
                axes
            })
            .collect();
        motif.sort();
        Ok((spheres, motif))
    };
    s.check("gamma4 variants pairwise distinct by depth-8 spread profile or edge motif", || {
        let inv: Vec<_> = gamma4.iter().map(|id| invariants(id, 8)).collect::<Result<_, _>>()?;
        let mut same = Vec::new();
        for i in 0..3 {
            for j in i + 1..3 {
                if inv[i] == inv[j] {
                    same.push(format!("{} and {}", gamma4[i], gamma4[j]));
                }
            }
        }
        ensure(same.is_empty(), format!("indistinguishable: {}", same.join(", ")))?;
        Ok("all pairs separated".into())
    });
    s.check("gamma4 variants pairwise distinct by sphere sizes at depth 9", || {
        let inv: Vec<_> = gamma4.iter().map(|id| invariants(id, 9)).collect::<Result<_, _>>()?;
        let shown: Vec<String> = gamma4.iter().zip(&inv).map(|(id, x)| format!("{id}: {:?}", x.0[0][9])).collect();
        ensure(inv[0].0 != inv[1].0 && inv[0].0 != inv[2].0 && inv[1].0 != inv[2].0, shown.join(", "))?;
        Ok(shown.join(", "))
    });

    // Hypercube lab.
    s.check("longest induced cycle of Q4 is 8", || {
        let l = longest_induced_cycle(4, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(l == 8, format!("got {l}"))?;
        Ok("8".into())
    });

    s.check("Q6: one cubic class of girth >= 8 with 40 vertices, 60 edges, girth 8", || {
        let q6 = q6.as_ref().map_err(|e| e.to_string())?;
        ensure(q6.classes.len() == 1, format!("{} classes", q6.classes.len()))?;
        let st = subgraph_stats(CubeSubgraph::new(6, q6.classes[0].canonical_mask).unwrap());
        ensure((st.vertices, st.edges, st.girth) == (40, 60, Some(8)), format!("{st:?}"))?;
        check_certificate(&enumeration_certificate(q6)).map_err(|e| e.to_string())?;
        Ok(format!("{:#x}, {} nodes, certificate checked", q6.classes[0].canonical_mask, q6.nodes))
    });

    s.check("Q5: one nonempty class of girth >= 8 with ratio >= 5/4, degrees in {2,3}", || {
        let e = enumerate_constrained(5, &Constraints::girth(8).ratio(5, 4), DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(e.classes.len() == 1, format!("{} classes", e.classes.len()))?;
        let st = subgraph_stats(CubeSubgraph::new(5, e.classes[0].canonical_mask).unwrap());
        let other: u32 = st.degree_counts.iter().enumerate().filter(|(d, _)| *d != 2 && *d != 3).map(|x| x.1).sum();
        ensure(other == 0, format!("degree counts {:?}", st.degree_counts))?;
        check_certificate(&enumeration_certificate(&e)).map_err(|e| e.to_string())?;
        Ok(format!("{} vertices, {} edges, degree counts {:?}", st.vertices, st.edges, st.degree_counts))
    });

    s.check("elimination reaches the empty fixpoint", || {
        let c = build_candidate_set_s(DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(c.denser_classes.is_empty(), format!("{} classes with e > v", c.denser_classes.len()))?;
        let initial = c.state.survivors.clone();
        let mut states = Vec::new();
        let mut cur = c.state.clone();
        loop {
            let next = eliminate_iteration(&cur, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            let done = next.survivors == cur.survivors;
            states.push(next.clone());
            cur = next;
            if done {
                break;
            }
        }
        let end = eliminate_to_fixpoint(c.state, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
        ensure(end == cur, "stepwise and fixpoint elimination disagree")?;
        ensure(end.survivors.is_empty(), format!("{} survivors", end.survivors.len()))?;
        let rounds = rounds_of(&initial, &states);
        check_certificate(&elimination_certificate(&rounds)).map_err(|e| e.to_string())?;
        Ok(format!("|S0| = {}, survivor counts {:?}, {} rounds", initial.len(), end.history, end.iteration))
    });

    // Bounds.
    s.check("alpha values 4.87, 2.56, 1.84 satisfy the growth inequality", || {
        for (k, a) in [(3, Ratio::new(487, 100)), (4, Ratio::new(256, 100)), (5, Ratio::new(184, 100))] {
            ensure(alpha_holds(k, &a), format!("k = {k}, alpha = {a}"))?;
            let m = min_alpha(k, Ratio::new(1, 1000)).map_err(|e| e.to_string())?;
            ensure(m <= a, format!("k = {k}: minimum {m} above {a}"))?;
        }
        Ok("certified".into())
    });

    s.check("exact girth bound for n = 3, k = 3 is 16", || {
        let r = exact_girth_bound(3, 3, 40).map_err(|e| e.to_string())?;
        ensure(r.exact_bound == Some(16), format!("achieved {:?} (first failing radius {:?})", r.exact_bound, r.first_failing_radius))?;
        Ok(format!("16, corollary bound {}", r.corollary_bound))
    });

    s.check("tree_ball(k, r) > delannoy(n, r) for (3,3,15), (4,4,11), (5,5,10)", || {
        let mut shown = Vec::new();
        for (k, n, r) in [(3u32, 3u32, 15u32), (4, 4, 11), (5, 5, 10)] {
            let t: BigUint = tree_ball(k, r).map_err(|e| e.to_string())?;
            let d = delannoy(n, r);
            ensure(t > d, format!("({k},{n},{r}): {t} <= {d}"))?;
            shown.push(format!("{t} > {d}"));
        }
        Ok(shown.join(", "))
    });

    // Property suites.
    s.check("property: girth oracle on <= 24-vertex windows", || {
        let specs: Vec<PeriodicGraphSpec> = vec![
            full_grid(3),
            full_grid(4),
            entry("gamma3-noninduced")?.spec.clone(),
            entry("G3")?.spec.clone(),
            entry("gammaFCC")?.spec.clone(),
        ];
        let strat = (0..specs.len(), proptest::collection::vec(any::<bool>(), 40), 6usize..=24);
        let mut r = runner(200);
        let res = r.run(&strat, |(i, keep, size)| {
            let spec = &specs[i];
            let mut pool: Vec<Point> = spec.window(2).into_iter().filter(|p| spec.contains_vertex(p)).collect();
            pool.sort();
            let chosen: Vec<Point> = pool.iter().zip(keep.iter().cycle()).filter(|x| *x.1).map(|x| x.0.clone()).take(size).collect();
            let g = FiniteGraph::restrict(spec, chosen.clone());
            let idx: BTreeMap<&Point, usize> = chosen.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let adj: Vec<Vec<usize>> = chosen.iter().map(|p| g.adjacent_vertices(p).iter().map(|q| idx[q]).collect()).collect();
            let engine = girth_from_roots(&g, &chosen, 30);
            prop_assert_eq!(engine.girth.exact(), oracle_girth(&adj));
            Ok(())
        });
        prop_result(res, 200)
    });

    s.check("property: average unit-cube edge density is km/4n on induced Z^n entries", || {
        let mut checked = 0;
        for e in list_constructions() {
            let LatticeSpec::Zn(n) = e.spec.lattice else { continue };
            if !e.spec.is_induced() || e.spec.fundamental_domain().is_none() {
                continue;
            }
            let Some(k) = e.claimed.degree else { continue };
            if e.id == "n5k3-motif" {
                continue;
            }
            for m in 1..=n as u32 {
                let r = hypercube_ratio(&e.spec, m).map_err(|x| format!("{}: {x}", e.id))?;
                let want = Ratio::new(i64::from(k) * i64::from(m), 4 * n as i64);
                ensure(r.per_cube_average == want, format!("{} m = {m}: {} vs {want}", e.id, r.per_cube_average))?;
                checked += 1;
            }
        }
        Ok(format!("{checked} (entry, m) pairs"))
    });

    s.check("property: spread-girth equivalence at floor(g/2) and floor(g/2) - 1", || {
        let mut checked = 0;
        let mut skipped = Vec::new();
        for e in list_constructions() {
            let Some(g) = e.claimed.girth else { continue };
            let degrees = gridgirth::rulegraph::validate_spec(&e.spec, 2).observed_degrees;
            if degrees.len() != 1 {
                skipped.push(e.id.clone());
                continue;
            }
            for d in [g / 2, g / 2 - 1] {
                let r = spread_girth_consistency(&e.spec, d).map_err(|x| format!("{}: {x}", e.id))?;
                ensure(r.consistent, format!("{} d = {d}: {}", e.id, json!(r)))?;
                checked += 1;
            }
        }
        Ok(format!("{checked} checks; not regular, skipped: {skipped:?}"))
    });

    s.check("property: BFS parity in bipartite grids", || {
        let specs: Vec<&PeriodicGraphSpec> = list_constructions()
            .iter()
            .filter(|e| matches!(e.spec.lattice, LatticeSpec::Zn(_) | LatticeSpec::Bcc) && e.spec.dim() <= 9)
            .map(|e| &e.spec)
            .collect();
        let strat = (0..specs.len(), 0usize..64);
        let mut r = runner(64);
        let res = r.run(&strat, |(i, j)| {
            let spec = specs[i];
            let root = &spec.representatives[j % spec.representatives.len()];
            let parity = |p: &Point| p.coord_sum().rem_euclid(2);
            for (d, layer) in bfs_layers(spec, root, 5).iter().enumerate() {
                for p in layer {
                    prop_assert_eq!(parity(p), (parity(root) + d as i64) % 2);
                }
            }
            Ok(())
        });
        prop_result(res, 64)
    });

    s.check("property: canonical form invariant under 100 random group elements, m = 4, 5, 6", || {
        for m in [4u32, 5, 6] {
            let perms = coordinate_permutations(m);
            let full = if m == 6 { u64::MAX } else { (1u64 << (1 << m)) - 1 };
            let strat = (any::<u64>(), 0..perms.len(), 0u32..1 << m);
            let mut r = runner(100);
            let res = r.run(&strat, |(mask, p, flips)| {
                let mask = mask & full;
                let c: CanonicalClass = canonical_form(m, mask);
                prop_assert_eq!(canonical_form(m, transform(m, &perms[p], flips, mask)), c);
                Ok(())
            });
            prop_result(res, 100).map_err(|e| format!("m = {m}: {e}"))?;
        }
        Ok("300 cases".into())
    });

    s.check("property: Q6 class is invariant under the antipodal map", || {
        let q6 = q6.as_ref().map_err(|e| e.to_string())?;
        let c = q6.classes[0].canonical_mask;
        let anti = (0..64u32).filter(|w| c >> w & 1 == 1).fold(0u64, |acc, w| acc | 1 << (w ^ 63));
        ensure(anti == c, format!("{anti:#x} != {c:#x}"))?;
        Ok(format!("{c:#x}"))
    });

    s.check("property: enumeration agrees with brute force over all 2^16 masks of Q4", || {
        for c in [
            Constraints::girth(6),
            Constraints::girth(6).ratio(1, 1),
            Constraints::girth(4).regular(2),
            Constraints::girth(8).ratio(9, 8),
            Constraints::girth(4).regular(3),
        ] {
            let brute: BTreeSet<CanonicalClass> =
                (1u64..1 << 16).filter(|&m| c.admits(4, m)).map(|m| canonical_form(4, m)).collect();
            let e = enumerate_constrained(4, &c, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
            ensure(e.classes == brute.into_iter().collect::<Vec<_>>(), format!("{c:?}"))?;
        }
        Ok("5 constraint sets".into())
    });

    let known: BTreeSet<String> = KNOWN_FAILURES.iter().map(|s| s.to_string()).collect();
    println!("{} criteria, {} failed: {:?}", s.count, s.failed.len(), s.failed);
    assert_eq!(s.failed, known, "failing criteria differ from the recorded known failures");
}

#[test]
fn bfs_oracle_sanity() {
    // A 6-cycle and a 4-cycle sharing an edge: girth 4.
    let adj = vec![vec![1, 5, 3], vec![0, 2], vec![1, 3], vec![2, 4, 0], vec![3, 5], vec![4, 0]];
    assert_eq!(oracle_girth(&adj), Some(4));
    let path = vec![vec![1], vec![0, 2], vec![1]];
    assert_eq!(oracle_girth(&path), None);
}
