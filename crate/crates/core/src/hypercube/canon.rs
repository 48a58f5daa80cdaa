//! Canonical forms under the hyperoctahedral group of `Q_m`.
//!
//! The group has order `2^m m!`: a coordinate permutation followed by a set of
//! coordinate reflections. Permutations act through byte lookup tables;
//! reflections are visited in Gray-code order so each step is one swap.

use std::sync::OnceLock;

use serde::Serialize;

use super::low_bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CanonicalClass {
    pub canonical_mask: u64,
    pub orbit_size: u64,
}

struct Tables {
    perms: Vec<Vec<u32>>,
    /// `lookup[p][chunk][byte]`: image of `byte << 8*chunk` under permutation `p`.
    lookup: Vec<Vec<[u64; 256]>>,
}

fn permutations(m: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..m).collect();
    fn rec(k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Image of word `w` when coordinate `i` moves to position `perm[i]`.
fn permute_word(perm: &[u32], w: u32) -> u32 {
    perm.iter().enumerate().fold(0, |acc, (i, &p)| acc | (w >> i & 1) << p)
}

fn tables(m: u32) -> &'static Tables {
    static CACHE: [OnceLock<Tables>; 7] = [const { OnceLock::new() }; 7];
    CACHE[m as usize].get_or_init(|| {
        let perms = permutations(m);
        let chunks = (1usize << m).div_ceil(8);
        let lookup = perms
            .iter()
            .map(|p| {
                (0..chunks)
                    .map(|c| {
                        let mut t = [0u64; 256];
                        for (byte, slot) in t.iter_mut().enumerate() {
                            for b in 0..8 {
                                let w = (8 * c + b) as u32;
                                if byte >> b & 1 == 1 && w < 1 << m {
                                    *slot |= 1 << permute_word(p, w);
                                }
                            }
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        Tables { perms, lookup }
    })
}

fn apply_table(t: &[[u64; 256]], mask: u64) -> u64 {
    t.iter().enumerate().fold(0, |acc, (c, tab)| acc | tab[(mask >> (8 * c) & 0xff) as usize])
}

/// Reflection of coordinate `i`: swaps words `w` and `w ^ 2^i`.
pub fn reflect(m: u32, i: u32, mask: u64) -> u64 {
    let s = 1u32 << i;
    let lo = reflect_low(m, i);
    (mask & lo) << s | (mask >> s) & lo
}

fn reflect_low(m: u32, i: u32) -> u64 {
    static CACHE: OnceLock<[[u64; 6]; 7]> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut t = [[0u64; 6]; 7];
        for (m, row) in t.iter_mut().enumerate() {
            for (i, slot) in row.iter_mut().enumerate().take(m) {
                *slot = (0..1u32 << m).filter(|w| w >> i & 1 == 0).fold(0, |acc, w| acc | 1 << w);
            }
        }
        t
    })[m as usize][i as usize]
}

pub fn group_order(m: u32) -> u64 {
    (1..=u64::from(m)).product::<u64>() << m
}

/// Applies "reflect the coordinates in `flips`, then move coordinate `i` to
/// `perm[i]`".
pub fn transform(m: u32, perm: &[u32], flips: u32, mask: u64) -> u64 {
    let mut x = mask;
    for i in 0..m {
        if flips >> i & 1 == 1 {
            x = reflect(m, i, x);
        }
    }
    let mut out = 0;
    let mut rest = x;
    while rest != 0 {
        let w = rest.trailing_zeros();
        rest &= rest - 1;
        out |= 1 << permute_word(perm, w);
    }
    out
}

/// Exchanges coordinates `i` and `j`.
pub fn swap_axes(m: u32, i: u32, j: u32, mask: u64) -> u64 {
    let mut perm: Vec<u32> = (0..m).collect();
    perm.swap(i as usize, j as usize);
    transform(m, &perm, 0, mask)
}

/// Minimum mask over the full group, with the orbit size.
pub fn canonical_form(m: u32, mask: u64) -> CanonicalClass {
    assert!((1..=6).contains(&m), "cube dimension {m} outside 1..=6");
    debug_assert_eq!(mask & !low_bits(1 << m), 0);
    let t = tables(m);
    let mut best = u64::MAX;
    let mut stabilizer = 0u64;
    for look in &t.lookup {
        let mut x = apply_table(look, mask);
        for g in 0..1u32 << m {
            if g > 0 {
                x = reflect(m, g.trailing_zeros(), x);
            }
            if x == mask {
                stabilizer += 1;
            }
            best = best.min(x);
        }
    }
    CanonicalClass { canonical_mask: best, orbit_size: group_order(m) / stabilizer }
}

/// Every coordinate permutation of `Q_m`, in lexicographic order.
pub fn coordinate_permutations(m: u32) -> &'static [Vec<u32>] {
    &tables(m).perms
}
