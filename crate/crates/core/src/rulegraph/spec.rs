//! Periodic subgraphs of lattice grids and their vertex/neighbour oracles.

use std::collections::HashSet;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use super::orbit::{build_orbit_edges, EdgeTable, OrbitSpec};
use super::rule::RuleExpr;
use crate::error::{Error, Result};
use crate::lattice::{neighbor_vectors, LatticeSpec, NeighborSet, Point};
use crate::zlattice::IntLattice;

/// Finite offsets repeated over a translation lattice.
#[derive(Debug, Clone)]
pub struct MotifSpec {
    pub offsets: Vec<Vec<i64>>,
    pub basis: IntLattice,
    /// Extra condition on the anchor `p - offset`.
    pub base_rule: Option<RuleExpr>,
}

impl MotifSpec {
    pub fn new(offsets: Vec<Vec<i64>>, basis: &[Vec<i64>], base_rule: Option<RuleExpr>) -> Result<Self> {
        let dim = offsets.first().map(Vec::len).ok_or_else(|| Error::InvalidSpec("empty motif".into()))?;
        let lat = IntLattice::from_generators(dim, basis)?;
        if lat.rank() != basis.len() {
            return Err(Error::InvalidSpec("motif basis vectors are linearly dependent".into()));
        }
        if let Some(o) = offsets.iter().find(|o| o.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: o.len() });
        }
        if let Some(r) = &base_rule {
            r.check(dim)?;
        }
        Ok(MotifSpec { offsets, basis: lat, base_rule })
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.offsets.iter().any(|o| {
            let anchor: Vec<i64> = p.iter().zip(o).map(|(a, b)| a - b).collect();
            self.basis.contains(&anchor) && self.base_rule.as_ref().map_or(true, |r| r.eval(&anchor))
        })
    }
}

/// Explicit edges for non-induced subgraphs: `(p, p + d)` is an edge iff `guard(p)`.
#[derive(Debug, Clone)]
pub struct EdgeRule {
    pub entries: Vec<(Vec<i64>, RuleExpr)>,
}

impl EdgeRule {
    /// A chain `h ~ h+d ~ ... ~ h+len·d` whenever `guard(h)`: one entry per
    /// position `j`, testing the guard at `p - j·d`.
    pub fn chain(direction: &[i64], len: usize, guard: &RuleExpr) -> Vec<(Vec<i64>, RuleExpr)> {
        (0..len as i64)
            .map(|j| {
                let back: Vec<i64> = direction.iter().map(|x| -j * x).collect();
                (direction.to_vec(), guard.translated(&back))
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum VertexSet {
    Rule(RuleExpr),
    Motif(MotifSpec),
    AllLatticePoints,
}

#[derive(Debug, Clone)]
pub enum EdgeSet {
    Induced,
    Explicit(EdgeRule),
    Orbit { spec: OrbitSpec, table: EdgeTable },
}

/// How representative completeness is established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    /// Representatives are the whole fundamental domain of a full-rank translation lattice.
    FundamentalDomain,
    /// Checked by sampling vertices against the declared translations.
    Sampled,
    /// Argued outside the code (e.g. half-space constructions); not sampled.
    Argued(String),
}

#[derive(Debug, Clone)]
pub struct PeriodicGraphSpec {
    pub name: String,
    pub lattice: LatticeSpec,
    pub vertices: VertexSet,
    pub edges: EdgeSet,
    pub representatives: Vec<Point>,
    pub claimed_degree: Option<u32>,
    /// Declared translation symmetries (possibly rank deficient).
    pub translations: Option<IntLattice>,
    pub coverage: Coverage,
    steps: NeighborSet,
}

impl PeriodicGraphSpec {
    /// Builds a spec. When `representatives` is `None`, they are derived as
    /// the vertices in the fundamental domain of the (full-rank) translations.
    pub fn new(
        name: impl Into<String>,
        lattice: LatticeSpec,
        vertices: VertexSet,
        edges: EdgeSet,
        translations: Option<Vec<Vec<i64>>>,
        representatives: Option<Vec<Point>>,
        claimed_degree: Option<u32>,
    ) -> Result<Self> {
        let name = name.into();
        let dim = lattice.ambient_dim();
        match &vertices {
            VertexSet::Rule(r) => r.check(dim)?,
            VertexSet::Motif(m) => {
                if m.basis.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: m.basis.dim() });
                }
            }
            VertexSet::AllLatticePoints => {}
        }
        let steps = neighbor_vectors(lattice);
        if let EdgeSet::Explicit(rule) = &edges {
            for (d, g) in &rule.entries {
                if !steps.contains(d) {
                    return Err(Error::InvalidSpec(format!("edge direction {d:?} is not a grid step")));
                }
                g.check(dim)?;
            }
        }
        let translations = match (translations, &edges) {
            (Some(t), _) => Some(IntLattice::from_generators(dim, &t)?),
            (None, EdgeSet::Orbit { table, .. }) => Some(table.translations().clone()),
            (None, _) => None,
        };
        let mut spec = PeriodicGraphSpec {
            name,
            lattice,
            vertices,
            edges,
            representatives: Vec::new(),
            claimed_degree,
            translations,
            coverage: Coverage::Sampled,
            steps,
        };
        match representatives {
            Some(reps) => {
                spec.representatives = reps;
            }
            None => {
                let dom = spec.fundamental_domain().ok_or_else(|| {
                    Error::InvalidSpec(format!("{}: representatives needed without full-rank translations", spec.name))
                })?;
                spec.representatives = dom.into_iter().filter(|p| spec.contains_vertex(p)).collect();
                spec.coverage = Coverage::FundamentalDomain;
            }
        }
        if spec.representatives.is_empty() {
            return Err(Error::InvalidSpec(format!("{}: no representatives", spec.name)));
        }
        for r in &spec.representatives {
            if r.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.dim() });
            }
            if !spec.contains_vertex(r) {
                return Err(Error::InvalidSpec(format!("{}: representative {r} is not a vertex", spec.name)));
            }
        }
        Ok(spec)
    }

    /// Convenience constructor for orbit-generated edge sets.
    pub fn orbit(
        name: impl Into<String>,
        lattice: LatticeSpec,
        orbit: OrbitSpec,
        claimed_degree: Option<u32>,
    ) -> Result<Self> {
        let table = build_orbit_edges(&orbit, lattice)?;
        PeriodicGraphSpec::new(
            name,
            lattice,
            VertexSet::AllLatticePoints,
            EdgeSet::Orbit { spec: orbit, table },
            None,
            None,
            claimed_degree,
        )
    }

    pub fn with_coverage(mut self, c: Coverage) -> Self {
        self.coverage = c;
        self
    }

    pub fn dim(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn steps(&self) -> &NeighborSet {
        &self.steps
    }

    pub fn is_induced(&self) -> bool {
        matches!(self.edges, EdgeSet::Induced)
    }

    /// Lattice points of the fundamental domain of the declared translations.
    pub fn fundamental_domain(&self) -> Option<Vec<Point>> {
        let dom = self.translations.as_ref()?.fundamental_domain()?;
        Some(dom.into_iter().filter(|p| self.lattice.contains(p)).map(Point).collect())
    }

    /// Membership test without the dimension check.
    pub fn contains_vertex(&self, p: &Point) -> bool {
        if !self.lattice.contains(&p.0) {
            return false;
        }
        match &self.vertices {
            VertexSet::Rule(r) => r.eval(&p.0),
            VertexSet::Motif(m) => m.contains(&p.0),
            VertexSet::AllLatticePoints => true,
        }
    }

    pub fn is_vertex(&self, p: &Point) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.dim() });
        }
        Ok(self.contains_vertex(p))
    }

    /// Neighbours of a vertex `p`, without re-checking that `p` is a vertex.
    pub fn neighbors_unchecked(&self, p: &Point) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        match &self.edges {
            EdgeSet::Induced => {
                for d in &self.steps.vectors {
                    let q = p.offset(d);
                    if self.contains_vertex(&q) {
                        out.push(q);
                    }
                }
            }
            EdgeSet::Explicit(rule) => {
                for (d, guard) in &rule.entries {
                    if guard.eval(&p.0) {
                        out.push(p.offset(d));
                    }
                    let q = p.offset_neg(d);
                    if guard.eval(&q.0) {
                        out.push(q);
                    }
                }
                out.retain(|q| self.contains_vertex(q));
                out.sort();
                out.dedup();
            }
            EdgeSet::Orbit { table, .. } => {
                out = table.neighbors(&p.0).into_iter().map(Point).collect();
                out.retain(|q| self.contains_vertex(q));
            }
        }
        out
    }

    pub fn neighbors(&self, p: &Point) -> Result<Vec<Point>> {
        if !self.is_vertex(p)? {
            return Err(Error::NotAVertex(p.to_string()));
        }
        Ok(self.neighbors_unchecked(p))
    }

    pub fn adjacent(&self, p: &Point, q: &Point) -> bool {
        match &self.edges {
            EdgeSet::Induced => {
                self.steps.contains(&q.diff(p)) && self.contains_vertex(p) && self.contains_vertex(q)
            }
            EdgeSet::Orbit { table, .. } => table.has_edge(&p.0, &q.0),
            EdgeSet::Explicit(_) => self.contains_vertex(p) && self.neighbors_unchecked(p).contains(q),
        }
    }

    /// Lattice points in the validation window of radius `r`: the L∞ box when
    /// it has at most `BOX_LIMIT` points, otherwise the L1 ball.
    pub fn window(&self, r: i64) -> Vec<Point> {
        window_points(self.lattice, r)
    }
}

const BOX_LIMIT: u64 = 600_000;

pub fn window_points(lattice: LatticeSpec, r: i64) -> Vec<Point> {
    fn rec(lattice: LatticeSpec, r: i64, budget: Option<i64>, cur: &mut Vec<i64>, n: usize, out: &mut Vec<Point>) {
        if cur.len() == n {
            if lattice.contains(cur) {
                out.push(Point(cur.clone()));
            }
            return;
        }
        let lim = budget.map_or(r, |b| b.min(r));
        for x in -lim..=lim {
            cur.push(x);
            rec(lattice, r, budget.map(|b| b - x.abs()), cur, n, out);
            cur.pop();
        }
    }
    let n = lattice.ambient_dim();
    let side = (2 * r + 1) as u64;
    let use_box = side.checked_pow(n as u32).is_some_and(|c| c <= BOX_LIMIT);
    let mut out = Vec::new();
    rec(lattice, r, if use_box { None } else { Some(r) }, &mut Vec::with_capacity(n), n, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub point: Point,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub spec: String,
    pub window_radius: i64,
    pub checked_vertices: usize,
    pub observed_degrees: Vec<u32>,
    pub coverage: Coverage,
    pub coverage_samples: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

const MAX_WITNESSES_PER_KIND: usize = 8;
const COVERAGE_SAMPLES: usize = 10_000;
const COVERAGE_RADIUS: i64 = 20;

/// Window checks of degree claims, edge symmetry, translation invariance and
/// representative coverage. Never fails; problems are listed as violations.
pub fn validate_spec(spec: &PeriodicGraphSpec, window_radius: i64) -> ValidationReport {
    let mut violations: Vec<Violation> = Vec::new();
    let mut push = |v: Violation| {
        if violations.iter().filter(|x| x.kind == v.kind).count() < MAX_WITNESSES_PER_KIND {
            violations.push(v);
        }
    };

    for r in &spec.representatives {
        if !spec.contains_vertex(r) {
            push(Violation { kind: "representative".into(), point: r.clone(), detail: "not a vertex".into() });
        }
    }

    let mut pts = spec.window(window_radius);
    pts.extend(spec.representatives.iter().cloned());
    let verts: Vec<Point> = pts.into_iter().filter(|p| spec.contains_vertex(p)).collect();
    let mut degrees: HashSet<u32> = HashSet::new();
    for p in &verts {
        let ns = spec.neighbors_unchecked(p);
        let deg = ns.len() as u32;
        degrees.insert(deg);
        if let Some(k) = spec.claimed_degree {
            if deg != k {
                push(Violation { kind: "degree".into(), point: p.clone(), detail: format!("degree {deg}, claimed {k}") });
            }
        }
        if deg == 0 {
            push(Violation { kind: "isolated".into(), point: p.clone(), detail: "vertex without edges".into() });
        }
        for q in &ns {
            if !spec.steps.contains(&q.diff(p)) {
                push(Violation { kind: "edge-length".into(), point: p.clone(), detail: format!("edge to {q} is not a grid step") });
            }
            if !spec.neighbors_unchecked(q).contains(p) {
                push(Violation { kind: "symmetry".into(), point: p.clone(), detail: format!("{q} does not list it back") });
            }
        }
        if spec.is_induced() {
            for d in &spec.steps.vectors {
                let q = p.offset(d);
                if spec.contains_vertex(&q) && !ns.contains(&q) {
                    push(Violation { kind: "induced".into(), point: p.clone(), detail: format!("missing edge to {q}") });
                }
            }
        }
    }

    // Translation invariance on a subsample of the window.
    if let Some(t) = &spec.translations {
        for p in verts.iter().step_by(7).take(2000) {
            for b in t.basis() {
                let q = p.offset(b);
                if !spec.contains_vertex(&q) {
                    push(Violation { kind: "translation".into(), point: p.clone(), detail: format!("translate by {b:?} is not a vertex") });
                    continue;
                }
                let mut moved: Vec<Point> = spec.neighbors_unchecked(p).iter().map(|x| x.offset(b)).collect();
                let mut there = spec.neighbors_unchecked(&q);
                moved.sort();
                there.sort();
                if moved != there {
                    push(Violation { kind: "translation".into(), point: p.clone(), detail: format!("neighbourhood not invariant under {b:?}") });
                }
            }
        }
    }

    let mut coverage_samples = 0;
    if spec.coverage == Coverage::Sampled {
        match &spec.translations {
            Some(t) => {
                let mut rng = StdRng::seed_from_u64(0x5eed);
                let dim = spec.dim();
                let reps: Vec<Vec<i64>> = spec.representatives.iter().map(|r| t.reduce(&r.0)).collect();
                let mut attempts = 0;
                while coverage_samples < COVERAGE_SAMPLES && attempts < 50 * COVERAGE_SAMPLES {
                    attempts += 1;
                    let p = Point((0..dim).map(|_| rng.gen_range(-COVERAGE_RADIUS..=COVERAGE_RADIUS)).collect());
                    if !spec.contains_vertex(&p) {
                        continue;
                    }
                    coverage_samples += 1;
                    let red = t.reduce(&p.0);
                    let covered = reps.contains(&red)
                        || spec.representatives.iter().any(|r| t.contains(&p.diff(r)));
                    if !covered {
                        push(Violation { kind: "coverage".into(), point: p, detail: "not a translate of any representative".into() });
                    }
                }
            }
            None => push(Violation {
                kind: "coverage".into(),
                point: spec.representatives[0].clone(),
                detail: "no translations declared to sample coverage against".into(),
            }),
        }
    }

    let mut observed_degrees: Vec<u32> = degrees.into_iter().collect();
    observed_degrees.sort();
    ValidationReport {
        spec: spec.name.clone(),
        window_radius,
        checked_vertices: verts.len(),
        observed_degrees,
        coverage: spec.coverage.clone(),
        coverage_samples,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulegraph::rule::{Condition, LinearForm};

    fn g3(claimed: u32) -> PeriodicGraphSpec {
        let rule = RuleExpr::leaf(Condition::congruence(LinearForm::homogeneous(vec![1, 2, 3]), 7, vec![0, 1, 2, 4]).unwrap());
        PeriodicGraphSpec::new(
            "G3",
            LatticeSpec::Zn(3),
            VertexSet::Rule(rule),
            EdgeSet::Induced,
            Some(vec![vec![7, 0, 0], vec![-2, 1, 0], vec![-3, 0, 1]]),
            None,
            Some(claimed),
        )
        .unwrap()
    }

    fn full(n: usize, k: u32) -> PeriodicGraphSpec {
        PeriodicGraphSpec::new(
            "full",
            LatticeSpec::Zn(n),
            VertexSet::AllLatticePoints,
            EdgeSet::Induced,
            Some(IntLattice::integer(n).basis().to_vec()),
            None,
            Some(k),
        )
        .unwrap()
    }

    #[test]
    fn g3_oracles() {
        let s = g3(3);
        assert_eq!(s.representatives.len(), 4);
        assert!(s.is_vertex(&Point::new(vec![0, 0, 0])).unwrap());
        assert!(!s.is_vertex(&Point::new(vec![3, 0, 0])).unwrap());
        assert!(s.is_vertex(&Point::new(vec![0, 0])).is_err());
        assert!(s.neighbors(&Point::new(vec![3, 0, 0])).is_err());
        assert!(validate_spec(&s, 4).is_valid());
        let bad = validate_spec(&g3(4), 4);
        assert!(!bad.is_valid());
        assert_eq!(bad.observed_degrees, vec![3]);
        assert!(bad.violations.iter().any(|v| v.kind == "degree"));
    }

    #[test]
    fn full_grid() {
        let s = full(2, 4);
        assert_eq!(s.neighbors(&Point::new(vec![0, 0])).unwrap().len(), 4);
        assert!(validate_spec(&full(3, 6), 3).is_valid());
    }

    #[test]
    fn explicit_edges_are_symmetric() {
        let form = |c: Vec<i64>| LinearForm::homogeneous(c);
        let rule = EdgeRule {
            entries: vec![
                (vec![1, 0, 0], RuleExpr::leaf(Condition::congruence(form(vec![0, 0, 1]), 2, vec![0]).unwrap())),
                (vec![0, 1, 0], RuleExpr::leaf(Condition::congruence(form(vec![0, 0, 1]), 2, vec![1]).unwrap())),
                (vec![0, 0, 1], RuleExpr::leaf(Condition::congruence(form(vec![2, 2, 3]), 6, vec![0, 1, 5]).unwrap())),
            ],
        };
        let s = PeriodicGraphSpec::new(
            "gamma3",
            LatticeSpec::Zn(3),
            VertexSet::AllLatticePoints,
            EdgeSet::Explicit(rule),
            Some(vec![vec![6, 0, 0], vec![0, 6, 0], vec![0, 0, 6]]),
            None,
            Some(3),
        )
        .unwrap();
        let ns = s.neighbors(&Point::new(vec![0, 0, 0])).unwrap();
        assert!(ns.contains(&Point::new(vec![1, 0, 0])));
        assert!(ns.contains(&Point::new(vec![0, 0, 1])));
        assert!(!ns.contains(&Point::new(vec![0, 0, -1])));
        assert!(validate_spec(&s, 3).is_valid());
    }

    #[test]
    fn chain_expands_to_shifted_guards() {
        let guard = RuleExpr::leaf(Condition::congruence(LinearForm::homogeneous(vec![0, 0, 1]), 8, vec![0]).unwrap());
        let entries = EdgeRule::chain(&[1, 1, 1], 3, &guard);
        assert_eq!(entries.len(), 3);
        // position 2 of a chain headed at z = 0 starts at z = 2
        assert!(entries[2].1.eval(&[2, 2, 2]));
        assert!(!entries[2].1.eval(&[0, 0, 0]));
    }

    #[test]
    fn motif_membership_matches_expansion() {
        let m = MotifSpec::new(
            vec![vec![0, 0], vec![1, 0]],
            &[vec![3, 1], vec![0, 2]],
            None,
        )
        .unwrap();
        let mut expanded = HashSet::new();
        for o in &m.offsets {
            for a in -5..=5i64 {
                for b in -5..=5i64 {
                    expanded.insert(vec![o[0] + 3 * a, o[1] + a + 2 * b]);
                }
            }
        }
        for x in -4..=4 {
            for y in -4..=4 {
                assert_eq!(m.contains(&[x, y]), expanded.contains(&vec![x, y]), "({x},{y})");
            }
        }
        assert!(MotifSpec::new(vec![vec![0, 0]], &[vec![1, 1], vec![2, 2]], None).is_err());
    }

    #[test]
    fn window_shapes() {
        assert_eq!(window_points(LatticeSpec::Zn(2), 1).len(), 9);
        assert_eq!(window_points(LatticeSpec::Bcc, 1).len(), 9);
        // Z^16 falls back to the L1 ball: 1 + 2·16 points at radius 1.
        assert_eq!(window_points(LatticeSpec::Zn(16), 1).len(), 33);
    }
}
