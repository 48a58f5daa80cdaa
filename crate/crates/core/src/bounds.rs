//! Volume bounds on the girth of k-regular subgraphs of `Z^n`.
//!
//! A k-regular graph of girth `g` contains an embedded k-regular tree of
//! radius `⌊(g-1)/2⌋`, and in a subgraph of `Z^n` that tree sits inside an
//! L1 ball. Comparing exact counts bounds the girth.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Lattice points of `Z^n` within L1 distance `r` of the origin.
pub fn delannoy(n: u32, r: u32) -> BigUint {
    let (n, r) = (n as usize, r as usize);
    let mut row: Vec<BigUint> = vec![BigUint::one(); r + 1];
    for _ in 0..n {
        let mut next = vec![BigUint::one(); r + 1];
        for b in 1..=r {
            next[b] = &row[b] + &next[b - 1] + &row[b - 1];
        }
        row = next;
    }
    row.swap_remove(r)
}

/// Vertices within distance `r` of a vertex in the infinite k-regular tree.
pub fn tree_ball(k: u32, r: u32) -> Result<BigUint> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("tree degree {k} < 3")));
    }
    let num = BigUint::from(k) * BigUint::from(k - 1).pow(r) - 2u32;
    let (q, rem) = num.div_rem(&BigUint::from(k - 2));
    assert!(rem.is_zero(), "tree ball count not integral");
    Ok(q)
}

/// Vertices at exact depth `d` in the k-regular tree.
fn tree_sphere(k: u32, d: u32) -> BigUint {
    if d == 0 {
        BigUint::one()
    } else {
        BigUint::from(k) * BigUint::from(k - 1).pow(d - 1)
    }
}

/// Points of `Z^n` at exact L1 distance `d`, for `d <= r`.
fn lattice_spheres(n: u32, r: u32) -> Vec<BigUint> {
    let r = r as usize;
    let mut s = vec![BigUint::zero(); r + 1];
    s[0] = BigUint::one();
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); r + 1];
        for d in 0..=r {
            let mut acc = s[d].clone();
            for j in 1..=d {
                acc += &s[d - j] * 2u32;
            }
            next[d] = acc;
        }
        s = next;
    }
    s
}

/// Upper bound on e from the series with tail `1/(N! N)`.
fn e_upper() -> BigRational {
    const N: u32 = 24;
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for i in 0..=N {
        if i > 0 {
            fact *= i;
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    sum + BigRational::new(BigInt::one(), fact * N)
}

/// Certifies `(k-1)^(p/q) > e (2p/q + 1)` exactly, by raising both sides to
/// the power `q` and replacing e with an upper bound.
pub fn alpha_holds(k: u32, alpha: &Ratio<i64>) -> bool {
    if *alpha.numer() <= 0 {
        return false;
    }
    let p = *alpha.numer() as u32;
    let q = *alpha.denom() as u32;
    let lhs = BigRational::from_integer(BigInt::from(k - 1).pow(p));
    let a = BigRational::new(BigInt::from(*alpha.numer()), BigInt::from(*alpha.denom()));
    let base = e_upper() * (a * BigInt::from(2) + BigRational::one());
    lhs > num_traits::pow(base, q as usize)
}

/// The least `α` on the grid `(1/Q) Z`, `Q = ⌈1/tolerance⌉`, at which the
/// growth inequality is certified. The true root lies within `tolerance`
/// below the returned value.
pub fn min_alpha(k: u32, tolerance: Ratio<i64>) -> Result<Ratio<i64>> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("tree degree {k} < 3")));
    }
    if tolerance <= Ratio::zero() || tolerance > Ratio::one() {
        return Err(Error::InvalidParams("tolerance must lie in (0, 1]".into()));
    }
    let q = tolerance.recip().ceil().to_integer();
    let holds = |j: i64| alpha_holds(k, &Ratio::new(j, q));
    // The gap (k-1)^α - e(2α+1) is convex in α and negative at 0, so it has a
    // single positive root and holds everywhere beyond it.
    let mut hi = q;
    while !holds(hi) {
        hi *= 2;
    }
    let mut lo = 0;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Ratio::new(hi, q))
}

pub fn default_tolerance() -> Ratio<i64> {
    Ratio::new(1, 1000)
}

fn floor_even(x: Ratio<i64>) -> u32 {
    let f = x.floor().to_integer();
    (f - f.rem_euclid(2)).max(4) as u32
}

/// Largest even integer `<= 2 α n` for the given `α`, and at least 4.
pub fn corollary_bound_with(n: u32, alpha: Ratio<i64>) -> u32 {
    floor_even(alpha * 2 * i64::from(n))
}

pub fn corollary_bound(n: u32, k: u32) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("dimension {n} < 2")));
    }
    Ok(corollary_bound_with(n, min_alpha(k, default_tolerance())?))
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub k: u32,
    /// Certified upper bracket for the growth constant, as `p/q`.
    pub alpha: String,
    pub alpha_tolerance: String,
    pub corollary_bound: u32,
    /// `None` if no radius up to `r_max` is infeasible.
    pub exact_bound: Option<u32>,
    pub first_failing_radius: Option<u32>,
    pub r_max: u32,
}

/// First radius `r` at which the tree ball cannot fit: either parity class of
/// tree vertices at depth `<= r` outnumbers the lattice points of the matching
/// coordinate-sum parity within L1 distance `r`.
pub fn first_failing_radius(n: u32, k: u32, r_max: u32) -> Option<u32> {
    let spheres = lattice_spheres(n, r_max);
    let mut tree = [BigUint::zero(), BigUint::zero()];
    let mut grid = [BigUint::zero(), BigUint::zero()];
    for r in 0..=r_max {
        let par = (r % 2) as usize;
        tree[par] += tree_sphere(k, r);
        grid[par] += &spheres[r as usize];
        if tree[0] > grid[0] || tree[1] > grid[1] {
            return Some(r);
        }
    }
    None
}

pub fn exact_girth_bound(n: u32, k: u32, r_max: u32) -> Result<BoundReport> {
    if n < 2 || k < 3 {
        return Err(Error::InvalidParams(format!("need n >= 2 and k >= 3, got n = {n}, k = {k}")));
    }
    let tol = default_tolerance();
    let alpha = min_alpha(k, tol)?;
    let r = first_failing_radius(n, k, r_max);
    Ok(BoundReport {
        n,
        k,
        alpha: alpha.to_string(),
        alpha_tolerance: tol.to_string(),
        corollary_bound: corollary_bound_with(n, alpha),
        // Girth >= 2r + 1 would embed the radius-r tree; Z^n is bipartite,
        // so the bound 2r is already even.
        exact_bound: r.map(|r| 2 * r),
        first_failing_radius: r,
        r_max,
    })
}

/// `α` as a float, for display.
pub fn ratio_f64(r: &Ratio<i64>) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(delannoy(2, 2), BigUint::from(13u32));
        assert_eq!(delannoy(3, 0), BigUint::one());
        assert_eq!(delannoy(1, 5), BigUint::from(11u32));
        assert_eq!(tree_ball(3, 0).unwrap(), BigUint::one());
        assert_eq!(tree_ball(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(tree_ball(3, 2).unwrap(), BigUint::from(10u32));
        assert!(tree_ball(2, 2).is_err());
    }

    #[test]
    fn spheres_sum_to_delannoy() {
        for n in 1..6 {
            let s = lattice_spheres(n, 10);
            for r in 0..=10u32 {
                let total: BigUint = s[..=r as usize].iter().sum();
                assert_eq!(total, delannoy(n, r));
            }
        }
    }

    #[test]
    fn alpha_values() {
        let a3 = min_alpha(3, default_tolerance()).unwrap();
        assert!(a3 <= Ratio::new(487, 100));
        assert!(alpha_holds(3, &a3));
        assert!(!alpha_holds(3, &(a3 - default_tolerance())));
        assert!(alpha_holds(3, &Ratio::new(487, 100)));
        assert!(min_alpha(4, default_tolerance()).unwrap() <= Ratio::new(256, 100));
        assert!(min_alpha(5, default_tolerance()).unwrap() <= Ratio::new(184, 100));
        assert!(min_alpha(2, default_tolerance()).is_err());
    }

    #[test]
    fn cubic_in_three_dimensions() {
        let rep = exact_girth_bound(3, 3, 40).unwrap();
        assert_eq!(rep.first_failing_radius, Some(8));
        assert_eq!(rep.exact_bound, Some(16));
        assert_eq!(rep.corollary_bound, 28);
        assert_eq!(corollary_bound_with(3, Ratio::new(487, 100)), 28);
        assert_eq!(corollary_bound_with(2, Ratio::new(184, 100)), 6);
    }
}
