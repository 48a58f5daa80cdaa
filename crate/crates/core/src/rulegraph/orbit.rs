//! Edge sets generated as orbits of seed edges under a group of lattice isometries.
//!
//! The group is infinite (it contains translations), so the closure is kept
//! periodic: the linear parts form a finite point group, one coset
//! representative is kept per linear part, and the pure translations found
//! along the way (Schreier generators) span the translation lattice `T`.
//! The orbit of a seed edge is then `⋃_r r(e) + T`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{compose, neighbor_vectors, Isometry, LatticeSpec, Point};
use crate::zlattice::IntLattice;

pub const DEFAULT_WORD_DEPTH: usize = 32;
pub const DEFAULT_MOTIF_CAP: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct OrbitSpec {
    pub generators: Vec<Isometry>,
    pub seed_edges: Vec<(Point, Point)>,
    pub window_radius: i64,
}

/// A periodic edge set: an edge motif modulo a translation lattice.
#[derive(Debug, Clone)]
pub struct EdgeTable {
    translations: IntLattice,
    /// Reduced endpoint -> difference vectors of the edges leaving it.
    adjacency: HashMap<Vec<i64>, Vec<Vec<i64>>>,
    /// Canonical motif edges, each `(reduced endpoint, difference)`.
    motif: BTreeSet<(Vec<i64>, Vec<i64>)>,
}

impl EdgeTable {
    /// Builds the table for `edges + translations`.
    pub fn from_edges(translations: IntLattice, edges: &[(Vec<i64>, Vec<i64>)]) -> Self {
        let mut table = EdgeTable { translations, adjacency: HashMap::new(), motif: BTreeSet::new() };
        for (a, b) in edges {
            table.insert(a, b);
        }
        table
    }

    fn insert(&mut self, a: &[i64], b: &[i64]) -> bool {
        let d_ab: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        let d_ba: Vec<i64> = d_ab.iter().map(|x| -x).collect();
        let ra = self.translations.reduce(a);
        let rb = self.translations.reduce(b);
        let key = std::cmp::min((ra.clone(), d_ab.clone()), (rb.clone(), d_ba.clone()));
        if !self.motif.insert(key) {
            return false;
        }
        for (r, d) in [(ra, d_ab), (rb, d_ba)] {
            let list = self.adjacency.entry(r).or_default();
            if !list.contains(&d) {
                list.push(d);
            }
        }
        true
    }

    pub fn translations(&self) -> &IntLattice {
        &self.translations
    }

    pub fn motif_edges(&self) -> impl Iterator<Item = (&Vec<i64>, &Vec<i64>)> {
        self.motif.iter().map(|(p, d)| (p, d))
    }

    pub fn motif_size(&self) -> usize {
        self.motif.len()
    }

    pub fn neighbors(&self, p: &[i64]) -> Vec<Vec<i64>> {
        let r = self.translations.reduce(p);
        self.adjacency
            .get(&r)
            .map(|ds| ds.iter().map(|d| p.iter().zip(d).map(|(a, b)| a + b).collect()).collect())
            .unwrap_or_default()
    }

    pub fn has_edge(&self, a: &[i64], b: &[i64]) -> bool {
        let d: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        self.adjacency
            .get(&self.translations.reduce(a))
            .is_some_and(|ds| ds.contains(&d))
    }
}

/// Orbit closure of `spec.seed_edges` under the group generated by `spec.generators`.
pub fn build_orbit_edges(spec: &OrbitSpec, lattice: LatticeSpec) -> Result<EdgeTable> {
    build_orbit_edges_capped(spec, lattice, DEFAULT_WORD_DEPTH, DEFAULT_MOTIF_CAP)
}

pub fn build_orbit_edges_capped(
    spec: &OrbitSpec,
    lattice: LatticeSpec,
    max_word_depth: usize,
    motif_cap: usize,
) -> Result<EdgeTable> {
    let n = lattice.ambient_dim();
    let steps = neighbor_vectors(lattice);
    for (a, b) in &spec.seed_edges {
        if a.dim() != n || b.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a.dim().min(b.dim()) });
        }
        if !lattice.contains(&a.0) || !lattice.contains(&b.0) || !steps.contains(&b.diff(a)) {
            return Err(Error::InvalidSpec(format!("seed edge {a}-{b} is not a grid edge")));
        }
    }
    for g in &spec.generators {
        if g.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: g.dim() });
        }
    }

    let mut gens: Vec<Isometry> = Vec::new();
    for g in &spec.generators {
        gens.push(g.clone());
        gens.push(g.inverse());
    }

    // Coset representatives keyed by linear part; translations collected on collision.
    let mut reps: BTreeMap<Vec<Vec<i64>>, Isometry> = BTreeMap::new();
    let mut translation_gens: Vec<Vec<i64>> = Vec::new();
    let id = Isometry::identity(n);
    reps.insert(id.matrix().to_vec(), id.clone());
    let mut queue = VecDeque::from([(id, 0usize)]);
    while let Some((g, depth)) = queue.pop_front() {
        for s in &gens {
            for h in [compose(s, &g)?, compose(&g, s)?] {
                match reps.get(h.matrix()) {
                    Some(r) => {
                        if r.translation() != h.translation() {
                            translation_gens.push(h.translation().iter().zip(r.translation()).map(|(a, b)| a - b).collect());
                            let inner = compose(&r.inverse(), &h)?;
                            translation_gens.push(inner.translation().to_vec());
                        }
                    }
                    None => {
                        if depth + 1 > max_word_depth {
                            return Err(Error::OrbitCap(format!(
                                "point group not closed within word depth {max_word_depth}"
                            )));
                        }
                        reps.insert(h.matrix().to_vec(), h.clone());
                        queue.push_back((h, depth + 1));
                    }
                }
            }
        }
    }

    // Close the translation lattice under conjugation by the point group.
    let mut t = IntLattice::from_generators(n, &translation_gens)?;
    loop {
        let mut more = t.basis().to_vec();
        for r in reps.values() {
            for b in t.basis() {
                more.push(r.linear(b));
            }
        }
        let next = IntLattice::from_generators(n, &more)?;
        if next == t {
            break;
        }
        t = next;
    }

    let mut table = EdgeTable { translations: t, adjacency: HashMap::new(), motif: BTreeSet::new() };
    for r in reps.values() {
        for (a, b) in &spec.seed_edges {
            table.insert(&r.apply_coords(&a.0), &r.apply_coords(&b.0));
            if table.motif.len() > motif_cap {
                return Err(Error::OrbitCap(format!("edge motif exceeds {motif_cap} edges")));
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Point {
        Point::new(v.to_vec())
    }

    #[test]
    fn trivial_group() {
        let spec = OrbitSpec {
            generators: vec![Isometry::identity(4)],
            seed_edges: vec![(p(&[0, 0, 0, 0]), p(&[1, 0, 0, 0]))],
            window_radius: 3,
        };
        let t = build_orbit_edges(&spec, LatticeSpec::Zn(4)).unwrap();
        assert_eq!(t.motif_size(), 1);
        assert_eq!(t.translations().rank(), 0);
        assert!(t.has_edge(&[1, 0, 0, 0], &[0, 0, 0, 0]));
        assert!(!t.has_edge(&[1, 0, 0, 0], &[2, 0, 0, 0]));
    }

    #[test]
    fn single_translation() {
        let spec = OrbitSpec {
            generators: vec![Isometry::translation_by(vec![2, 0, 0, 0])],
            seed_edges: vec![(p(&[0, 0, 0, 0]), p(&[1, 0, 0, 0]))],
            window_radius: 3,
        };
        let t = build_orbit_edges(&spec, LatticeSpec::Zn(4)).unwrap();
        assert_eq!(t.translations().basis(), &[vec![2, 0, 0, 0]]);
        assert_eq!(t.motif_size(), 1);
        assert!(t.has_edge(&[4, 0, 0, 0], &[5, 0, 0, 0]));
        assert!(!t.has_edge(&[1, 0, 0, 0], &[2, 0, 0, 0]));
        assert_eq!(t.neighbors(&[-2, 0, 0, 0]), vec![vec![-1, 0, 0, 0]]);
    }

    #[test]
    fn rejects_bad_seed() {
        let spec = OrbitSpec {
            generators: vec![],
            seed_edges: vec![(p(&[0, 0, 0]), p(&[1, 1, 0]))],
            window_radius: 3,
        };
        assert!(build_orbit_edges(&spec, LatticeSpec::Zn(3)).is_err());
    }

    #[test]
    fn caps_are_reported() {
        let rot = Isometry::new(vec![vec![0, -1], vec![1, 0]], vec![0, 0], LatticeSpec::Zn(2)).unwrap();
        let spec = OrbitSpec {
            generators: vec![rot, Isometry::translation_by(vec![1, 0])],
            seed_edges: vec![(p(&[0, 0]), p(&[1, 0]))],
            window_radius: 2,
        };
        assert!(matches!(
            build_orbit_edges_capped(&spec, LatticeSpec::Zn(2), 1, 100),
            Err(Error::OrbitCap(_))
        ));
        let full = build_orbit_edges(&spec, LatticeSpec::Zn(2)).unwrap();
        // Rotations and unit translations generate every grid edge of Z^2.
        assert_eq!(full.translations().index(), Some(1));
        assert_eq!(full.neighbors(&[5, 5]).len(), 4);
    }
}
