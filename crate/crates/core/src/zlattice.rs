//! Integer sublattices of `Z^n` in row-echelon (Hermite) form.
//!
//! Every translation group, motif basis and congruence kernel in the crate is
//! stored as an [`IntLattice`]. The echelon basis gives a canonical reduction
//! of any vector modulo the lattice, which is what makes periodic quotients
//! (fundamental domains, edge motifs, orbit bookkeeping) exact.

use crate::error::{Error, Result};

/// A sublattice of `Z^dim`, possibly of deficient rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntLattice {
    dim: usize,
    /// Echelon rows: row `i` is zero before `pivots[i]`, positive at it,
    /// and pivots strictly increase.
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("lattice reduction"))
}

/// Row-reduce `rows` to echelon form, pivoting only in columns `< pivot_limit`.
/// Returns `(echelon rows, pivot columns, rows that vanished on the pivot columns)`.
fn echelon(
    mut rows: Vec<Vec<i128>>,
    pivot_limit: usize,
) -> Result<(Vec<Vec<i128>>, Vec<usize>, Vec<Vec<i128>>)> {
    let mut done: Vec<Vec<i128>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..pivot_limit {
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            let best = *nonzero.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            if nonzero.len() == 1 {
                let mut row = rows.swap_remove(best);
                if row[col] < 0 {
                    row.iter_mut().for_each(|x| *x = -*x);
                }
                done.push(row);
                pivots.push(col);
                break;
            }
            let pivot_row = rows[best].clone();
            for &r in &nonzero {
                if r == best {
                    continue;
                }
                let q = rows[r][col].div_euclid(pivot_row[col]);
                for (x, p) in rows[r].iter_mut().zip(&pivot_row) {
                    *x = x
                        .checked_sub(q.checked_mul(*p).ok_or(Error::Overflow("echelon"))?)
                        .ok_or(Error::Overflow("echelon"))?;
                }
            }
        }
    }
    // Reduce entries above each pivot into [0, pivot).
    for i in (0..done.len()).rev() {
        let c = pivots[i];
        let p = done[i][c];
        for j in 0..i {
            let q = done[j][c].div_euclid(p);
            if q != 0 {
                let src = done[i].clone();
                for (x, s) in done[j].iter_mut().zip(&src) {
                    *x -= q * s;
                }
            }
        }
    }
    let leftover = rows
        .into_iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect();
    Ok((done, pivots, leftover))
}

impl IntLattice {
    /// The lattice spanned by `generators` (any number, any rank).
    pub fn from_generators(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        for g in generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
        }
        let rows: Vec<Vec<i128>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        let (rows, pivots, _) = echelon(rows, dim)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(narrow).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(IntLattice { dim, rows, pivots })
    }

    /// The full lattice `Z^dim`.
    pub fn integer(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        IntLattice { dim, rows, pivots: (0..dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Index in `Z^dim` (the absolute determinant), when full rank.
    pub fn index(&self) -> Option<u64> {
        if !self.is_full_rank() {
            return None;
        }
        self.rows
            .iter()
            .zip(&self.pivots)
            .try_fold(1u64, |acc, (r, &c)| acc.checked_mul(r[c] as u64))
    }

    /// Canonical representative of `v` modulo the lattice: `0 <= v[c] < pivot`
    /// on every pivot column `c`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        debug_assert_eq!(v.len(), self.dim);
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = out[c].div_euclid(row[c]);
            if q != 0 {
                for (x, r) in out.iter_mut().zip(row) {
                    *x -= q * r;
                }
            }
        }
        out
    }

    /// Reduce `v` and also return the lattice vector subtracted (`v = reduced + shift`).
    pub fn reduce_with_shift(&self, v: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let r = self.reduce(v);
        let shift = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        (r, shift)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// All canonical representatives of `Z^dim / L` (full rank only).
    pub fn fundamental_domain(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_full_rank() {
            return None;
        }
        let bounds: Vec<i64> = self.rows.iter().zip(&self.pivots).map(|(r, &c)| r[c]).collect();
        let mut out = Vec::new();
        let mut cur = vec![0i64; self.dim];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.dim {
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// True if every vector of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.basis().iter().all(|b| self.contains(b))
    }
}

/// Basis of the integer kernel `{x in Z^n : rows · x = 0}`.
pub fn integer_kernel(n: usize, rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let r = rows.len();
    // Augmented rows [A^T | I_n]; rows that vanish on the first r columns carry kernel vectors.
    let aug: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row: Vec<i128> = rows.iter().map(|a| a[i] as i128).collect();
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    let (_, _, leftover) = echelon(aug, r)?;
    leftover
        .into_iter()
        .map(|row| row[r..].iter().map(|&x| narrow(x)).collect())
        .collect()
}

/// The lattice `{x in Z^n : forms · x ≡ 0 (mod modulus)}`.
pub fn congruence_kernel(n: usize, forms: &[Vec<i64>], modulus: i64) -> Result<IntLattice> {
    let r = forms.len();
    // Kernel of [F | m·I_r] projected onto the first n coordinates.
    let ext: Vec<Vec<i64>> = forms
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut row = f.clone();
            row.extend((0..r).map(|j| if i == j { modulus } else { 0 }));
            row
        })
        .collect();
    let ker = integer_kernel(n + r, &ext)?;
    let proj: Vec<Vec<i64>> = ker.into_iter().map(|v| v[..n].to_vec()).collect();
    IntLattice::from_generators(n, &proj)
}

/// Some integer `x` with `a · x = target`, if one exists.
pub fn solve_linear(a: &[i64], target: i64) -> Result<Option<Vec<i64>>> {
    let n = a.len();
    // Column operations on `a` tracked in a unimodular matrix: rows of `aug` are (a_i, e_i).
    let aug: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut row = vec![a[i] as i128];
            row.extend((0..n).map(|j| i128::from(i == j)));
            row
        })
        .collect();
    let (piv, _, _) = echelon(aug, 1)?;
    let Some(row) = piv.first() else {
        return Ok(if target == 0 { Some(vec![0; n]) } else { None });
    };
    let g = row[0];
    if (target as i128) % g != 0 {
        return Ok(None);
    }
    let q = target as i128 / g;
    row[1..].iter().map(|&u| narrow(u * q)).collect::<Result<Vec<_>>>().map(Some)
}

/// Determinant of a small square integer matrix (Bareiss, exact).
pub fn determinant(m: &[Vec<i64>]) -> Result<i64> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                    .ok_or(Error::Overflow("determinant"))?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    narrow(sign * a[n - 1][n - 1])
}
