//! Point lattices, their grids and affine lattice isometries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The point lattices whose minimum-distance graphs we work in.
///
/// All lattices live in ambient integer coordinates: BCC and FCC in `Z^3`,
/// `D4` in `Z^4`, each defined by a parity congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeSpec {
    /// `Z^n` with unit adjacency.
    Zn(usize),
    /// `x ≡ y ≡ z (mod 2)`, minimum distance √3.
    Bcc,
    /// `x + y + z ≡ 0 (mod 2)`, minimum distance √2.
    Fcc,
    /// `x1 + x2 + x3 + x4 ≡ 0 (mod 2)`, minimum distance √2.
    D4,
}

impl LatticeSpec {
    pub fn zn(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLattice(format!("Z^{n} needs n >= 2")));
        }
        Ok(LatticeSpec::Zn(n))
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            LatticeSpec::Zn(n) => n,
            LatticeSpec::Bcc | LatticeSpec::Fcc => 3,
            LatticeSpec::D4 => 4,
        }
    }

    pub fn contains(&self, coords: &[i64]) -> bool {
        if coords.len() != self.ambient_dim() {
            return false;
        }
        match self {
            LatticeSpec::Zn(_) => true,
            LatticeSpec::Bcc => {
                let p = coords[0].rem_euclid(2);
                coords.iter().all(|c| c.rem_euclid(2) == p)
            }
            LatticeSpec::Fcc | LatticeSpec::D4 => coords.iter().sum::<i64>().rem_euclid(2) == 0,
        }
    }

    /// Index of the lattice in `Z^dim`.
    pub fn index_in_integers(&self) -> u64 {
        match self {
            LatticeSpec::Zn(_) => 1,
            LatticeSpec::Bcc => 4,
            LatticeSpec::Fcc | LatticeSpec::D4 => 2,
        }
    }

    /// Generators of the lattice as a subgroup of `Z^dim`.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        let n = self.ambient_dim();
        let unit = |i: usize, s: i64| -> Vec<i64> { (0..n).map(|j| if i == j { s } else { 0 }).collect() };
        match self {
            LatticeSpec::Zn(_) => (0..n).map(|i| unit(i, 1)).collect(),
            LatticeSpec::Bcc => vec![vec![2, 0, 0], vec![0, 2, 0], vec![1, 1, 1]],
            LatticeSpec::Fcc | LatticeSpec::D4 => {
                let mut g: Vec<Vec<i64>> = (1..n)
                    .map(|i| {
                        let mut v = unit(0, 1);
                        v[i] = 1;
                        v
                    })
                    .collect();
                g.push(unit(0, 2));
                g
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            LatticeSpec::Zn(n) => format!("Z{n}"),
            LatticeSpec::Bcc => "BCC".into(),
            LatticeSpec::Fcc => "FCC".into(),
            LatticeSpec::D4 => "D4".into(),
        }
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A lattice point in ambient integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn offset(&self, d: &[i64]) -> Point {
        Point(self.0.iter().zip(d).map(|(a, b)| a + b).collect())
    }

    pub fn offset_neg(&self, d: &[i64]) -> Point {
        Point(self.0.iter().zip(d).map(|(a, b)| a - b).collect())
    }

    pub fn diff(&self, other: &Point) -> Vec<i64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn sq_dist(&self, other: &Point) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn coord_sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

/// The minimum-distance difference vectors of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSet {
    pub vectors: Vec<Vec<i64>>,
    pub squared_min_distance: i64,
}

impl NeighborSet {
    pub fn contains(&self, d: &[i64]) -> bool {
        self.vectors.iter().any(|v| v == d)
    }
}

fn sq_norm(v: &[i64]) -> i64 {
    v.iter().map(|x| x * x).sum()
}

/// All minimum-distance vectors of the grid of `lattice`.
pub fn neighbor_vectors(lattice: LatticeSpec) -> NeighborSet {
    let n = lattice.ambient_dim();
    let mut vectors: Vec<Vec<i64>> = match lattice {
        LatticeSpec::Zn(_) => (0..n)
            .flat_map(|i| {
                [1, -1].into_iter().map(move |s| (0..n).map(|j| if i == j { s } else { 0 }).collect())
            })
            .collect(),
        LatticeSpec::Bcc => (0..8)
            .map(|m| (0..3).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect())
            .collect(),
        LatticeSpec::Fcc | LatticeSpec::D4 => {
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    for si in [1, -1] {
                        for sj in [1, -1] {
                            let mut v = vec![0; n];
                            v[i] = si;
                            v[j] = sj;
                            out.push(v);
                        }
                    }
                }
            }
            out
        }
    };
    vectors.sort();
    let squared_min_distance = sq_norm(&vectors[0]);
    NeighborSet { vectors, squared_min_distance }
}

/// An affine map `x -> matrix·x + translation` preserving a lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    matrix: Vec<Vec<i64>>,
    translation: Vec<i64>,
}

impl Isometry {
    /// Validates orthogonality and that the map preserves `lattice`.
    pub fn new(matrix: Vec<Vec<i64>>, translation: Vec<i64>, lattice: LatticeSpec) -> Result<Self> {
        let n = lattice.ambient_dim();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidIsometry(format!("matrix must be {n}x{n}")));
        }
        if translation.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: translation.len() });
        }
        for i in 0..n {
            for j in 0..n {
                let dot: i64 = (0..n).map(|k| matrix[k][i] * matrix[k][j]).sum();
                if dot != i64::from(i == j) {
                    return Err(Error::InvalidIsometry("matrix is not orthogonal".into()));
                }
            }
        }
        let iso = Isometry { matrix, translation };
        if !lattice.contains(&iso.translation) {
            return Err(Error::InvalidIsometry("translation leaves the lattice".into()));
        }
        for g in lattice.generators() {
            if !lattice.contains(&iso.linear(&g)) {
                return Err(Error::InvalidIsometry("linear part does not preserve the lattice".into()));
            }
        }
        Ok(iso)
    }

    pub fn identity(dim: usize) -> Self {
        Isometry {
            matrix: (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect(),
            translation: vec![0; dim],
        }
    }

    pub fn translation_by(t: Vec<i64>) -> Self {
        let mut iso = Isometry::identity(t.len());
        iso.translation = t;
        iso
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[i64] {
        &self.translation
    }

    pub fn is_translation(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == i64::from(i == j)))
    }

    /// `matrix·v` without the translation.
    pub fn linear(&self, v: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_coords(&self, v: &[i64]) -> Vec<i64> {
        let mut out = self.linear(v);
        for (o, t) in out.iter_mut().zip(&self.translation) {
            *o += t;
        }
        out
    }

    /// Orthogonal integer matrices are signed permutations, so the inverse
    /// linear part is the transpose.
    pub fn inverse(&self) -> Isometry {
        let n = self.dim();
        let matrix: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| self.matrix[j][i]).collect()).collect();
        let inv = Isometry { matrix, translation: vec![0; n] };
        let t = inv.linear(&self.translation).into_iter().map(|x| -x).collect();
        Isometry { translation: t, ..inv }
    }
}

pub fn apply_isometry(iso: &Isometry, p: &Point) -> Result<Point> {
    if p.dim() != iso.dim() {
        return Err(Error::DimensionMismatch { expected: iso.dim(), got: p.dim() });
    }
    Ok(Point(iso.apply_coords(&p.0)))
}

/// The isometry "apply `b`, then `a`".
pub fn compose(a: &Isometry, b: &Isometry) -> Result<Isometry> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let n = a.dim();
    let matrix = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a.matrix[i][k] * b.matrix[k][j]).sum()).collect())
        .collect();
    let translation = a.apply_coords(&b.translation);
    Ok(Isometry { matrix, translation })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn iota1() -> Isometry {
        Isometry::new(
            vec![vec![0, 0, -1, 0], vec![0, -1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, -1]],
            vec![0, 1, 0, 0],
            LatticeSpec::Zn(4),
        )
        .unwrap()
    }

    fn iota2() -> Isometry {
        Isometry::new(
            vec![vec![0, 0, -1, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, -1], vec![0, -1, 0, 0]],
            vec![0, 0, 0, -1],
            LatticeSpec::Zn(4),
        )
        .unwrap()
    }

    /// Shortest nonzero lattice vectors by brute force over a box.
    fn brute_shortest(l: LatticeSpec, r: i64) -> (i64, Vec<Vec<i64>>) {
        let n = l.ambient_dim();
        let mut best = i64::MAX;
        let mut out = Vec::new();
        let side = (2 * r + 1) as usize;
        for idx in 0..side.pow(n as u32) {
            let mut k = idx;
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let c = (k % side) as i64 - r;
                    k /= side;
                    c
                })
                .collect();
            if v.iter().all(|&c| c == 0) || !l.contains(&v) {
                continue;
            }
            let s = sq_norm(&v);
            if s < best {
                best = s;
                out.clear();
            }
            if s == best {
                out.push(v);
            }
        }
        out.sort();
        (best, out)
    }

    #[test]
    fn neighbor_sets_match_brute_force() {
        for l in [LatticeSpec::Zn(2), LatticeSpec::Zn(3), LatticeSpec::Zn(4), LatticeSpec::Bcc, LatticeSpec::Fcc, LatticeSpec::D4] {
            let ns = neighbor_vectors(l);
            let (best, vs) = brute_shortest(l, if l.ambient_dim() == 4 { 2 } else { 3 });
            assert_eq!(ns.squared_min_distance, best, "{l}");
            assert_eq!(ns.vectors, vs, "{l}");
            for v in &ns.vectors {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                assert!(ns.contains(&neg));
            }
        }
        assert_eq!(neighbor_vectors(LatticeSpec::Zn(2)).vectors.len(), 4);
        assert_eq!(neighbor_vectors(LatticeSpec::Bcc).vectors.len(), 8);
        assert_eq!(neighbor_vectors(LatticeSpec::Bcc).squared_min_distance, 3);
        assert_eq!(neighbor_vectors(LatticeSpec::Fcc).vectors.len(), 12);
        let d4 = neighbor_vectors(LatticeSpec::D4);
        assert_eq!((d4.vectors.len(), d4.squared_min_distance), (24, 2));
    }

    #[test]
    fn d4_analogue_map() {
        for idx in 0..5i64.pow(4) {
            let mut k = idx;
            let v: Vec<i64> = (0..4)
                .map(|_| {
                    let c = k % 5 - 2;
                    k /= 5;
                    c
                })
                .collect();
            if !LatticeSpec::D4.contains(&v) {
                continue;
            }
            let w = [v[0] - v[1], v[0] + v[1], v[2] - v[3], v[2] + v[3]];
            let p = w[0].rem_euclid(2);
            assert!(w.iter().all(|c| c.rem_euclid(2) == p), "{v:?}");
        }
    }

    #[test]
    fn gallery_isometries() {
        let o = Point::origin(4);
        assert_eq!(apply_isometry(&iota1(), &o).unwrap(), Point::new(vec![0, 1, 0, 0]));
        assert_eq!(apply_isometry(&iota2(), &o).unwrap(), Point::new(vec![0, 0, 0, -1]));
        let id = Isometry::identity(4);
        let p = Point::new(vec![1, 2, 3, 4]);
        assert_eq!(apply_isometry(&id, &p).unwrap(), p);
        assert_eq!(compose(&id, &iota1()).unwrap(), iota1());
        let sq = compose(&iota1(), &iota1()).unwrap();
        let m = iota1();
        let expected_t: Vec<i64> = m.linear(&[0, 1, 0, 0]).iter().zip([0, 1, 0, 0]).map(|(a, b)| a + b).collect();
        assert_eq!(sq.translation(), &expected_t[..]);
        assert!(apply_isometry(&id, &Point::origin(3)).is_err());
        assert!(compose(&id, &Isometry::identity(3)).is_err());
    }

    #[test]
    fn rejects_non_isometries() {
        let bad = Isometry::new(vec![vec![1, 1], vec![0, 1]], vec![0, 0], LatticeSpec::Zn(2));
        assert!(bad.is_err());
        let off = Isometry::new(
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            vec![1, 0, 0],
            LatticeSpec::Fcc,
        );
        assert!(off.is_err());
        assert!(LatticeSpec::zn(1).is_err());
    }

    #[test]
    fn inverse_composes_to_identity_on_random_signed_permutations() {
        use rand::{rngs::StdRng, seq::SliceRandom, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(2..=6);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let matrix = (0..n)
                .map(|i| (0..n).map(|j| if perm[i] == j { if rng.gen() { 1 } else { -1 } } else { 0 }).collect())
                .collect();
            let t = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
            let a = Isometry::new(matrix, t, LatticeSpec::Zn(n)).unwrap();
            assert_eq!(compose(&a, &a.inverse()).unwrap(), Isometry::identity(n));
            assert_eq!(compose(&a.inverse(), &a).unwrap(), Isometry::identity(n));
        }
    }

    #[test]
    fn isometries_preserve_distance_and_compose_associatively() {
        let pts: Vec<Point> = (0..20)
            .map(|i| Point::new(vec![i % 3 - 1, i % 5 - 2, (i * 7) % 4 - 2, i % 2]))
            .collect();
        let gens = [iota1(), iota2(), compose(&iota2(), &iota1()).unwrap()];
        for g in &gens {
            for p in &pts {
                for q in &pts {
                    let gp = apply_isometry(g, p).unwrap();
                    let gq = apply_isometry(g, q).unwrap();
                    assert_eq!(gp.sq_dist(&gq), p.sq_dist(q));
                }
            }
        }
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    let l = compose(&compose(a, b).unwrap(), c).unwrap();
                    let r = compose(a, &compose(b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }
}
