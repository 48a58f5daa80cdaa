//! Text certificates for enumeration and elimination results, and an
//! independent checker that re-derives every listed property with plain
//! adjacency lists and explicit group elements.
//!
//! ```text
//! gridgirth-certificate 1
//! kind enumeration
//! m 6
//! constraints min_girth=8 regular_degree=3 min_ratio=- nonempty=1 edges_equal_vertices=0
//! nodes 53
//! classes 1
//! class 0x3ddae697e9675bbc orbit 192
//! end
//! ```
//!
//! Elimination certificates list `round i count N` followed by `N` class lines.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::eliminate::{EliminationState, GIRTH};
use super::search::{Constraints, Enumeration};
use crate::error::{Error, Result};

const MAGIC: &str = "gridgirth-certificate 1";

fn opt<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or("-".into(), |v| v.to_string())
}

pub fn enumeration_certificate(e: &Enumeration) -> String {
    let c = &e.constraints;
    let mut s = String::new();
    writeln!(s, "{MAGIC}").unwrap();
    writeln!(s, "kind enumeration").unwrap();
    writeln!(s, "m {}", e.m).unwrap();
    writeln!(
        s,
        "constraints min_girth={} regular_degree={} min_ratio={} nonempty={} edges_equal_vertices={}",
        c.min_girth,
        opt(c.regular_degree),
        opt(c.min_ratio.map(|(p, q)| format!("{p}/{q}"))),
        u8::from(c.nonempty),
        u8::from(c.edges_equal_vertices)
    )
    .unwrap();
    writeln!(s, "nodes {}", e.nodes).unwrap();
    writeln!(s, "classes {}", e.classes.len()).unwrap();
    for k in &e.classes {
        writeln!(s, "class {:#x} orbit {}", k.canonical_mask, k.orbit_size).unwrap();
    }
    s.push_str("end\n");
    s
}

/// `rounds[0]` is the initial candidate set.
pub fn elimination_certificate(rounds: &[BTreeSet<u64>]) -> String {
    let mut s = String::new();
    writeln!(s, "{MAGIC}").unwrap();
    writeln!(s, "kind elimination").unwrap();
    writeln!(s, "m 5").unwrap();
    writeln!(s, "constraints min_girth={GIRTH} edges_equal_vertices=1 nonempty=1").unwrap();
    for (i, r) in rounds.iter().enumerate() {
        writeln!(s, "round {i} count {}", r.len()).unwrap();
        for h in r {
            writeln!(s, "class {h:#x}").unwrap();
        }
    }
    s.push_str("end\n");
    s
}

/// Rounds recorded by repeated elimination, including the final fixpoint.
pub fn rounds_of(initial: &BTreeSet<u64>, states: &[EliminationState]) -> Vec<BTreeSet<u64>> {
    std::iter::once(initial.clone()).chain(states.iter().map(|s| s.survivors.clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateSummary {
    Enumeration { m: u32, classes: usize },
    Elimination { counts: Vec<usize> },
}

// Reference implementations, deliberately naive.

fn adjacency(m: u32, mask: u64) -> Vec<Vec<u32>> {
    (0..1u32 << m)
        .map(|v| {
            if mask >> v & 1 == 0 {
                return Vec::new();
            }
            (0..m).map(|i| v ^ 1 << i).filter(|&w| mask >> w & 1 == 1).collect()
        })
        .collect()
}

fn naive_girth(adj: &[Vec<u32>]) -> Option<u32> {
    let mut best: Option<u32> = None;
    for s in 0..adj.len() {
        if adj[s].is_empty() {
            continue;
        }
        let mut dist = vec![u32::MAX; adj.len()];
        let mut parent = vec![u32::MAX; adj.len()];
        dist[s] = 0;
        let mut q = VecDeque::from([s as u32]);
        while let Some(u) = q.pop_front() {
            for &w in &adj[u as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    parent[w as usize] = u;
                    q.push_back(w);
                } else if parent[u as usize] != w {
                    let len = dist[u as usize] + dist[w as usize] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

fn naive_canonical(m: u32, mask: u64) -> (u64, u64) {
    let mut perms: Vec<Vec<u32>> = vec![vec![]];
    for k in 0..m {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..=p.len()).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k);
                q
            }))
            .collect();
    }
    let mut best = u64::MAX;
    let mut stab = 0u64;
    for p in &perms {
        for flips in 0..1u32 << m {
            let mut img = 0u64;
            for v in 0..1u32 << m {
                if mask >> v & 1 == 1 {
                    let w = v ^ flips;
                    let pw = (0..m).fold(0u32, |acc, i| acc | (w >> i & 1) << p[i as usize]);
                    img |= 1 << pw;
                }
            }
            best = best.min(img);
            stab += u64::from(img == mask);
        }
    }
    let order = (perms.len() as u64) << m;
    (best, order / stab)
}

fn naive_counts(m: u32, mask: u64) -> (u32, u32, Vec<usize>, Option<u32>) {
    let adj = adjacency(m, mask);
    let v = mask.count_ones();
    let degs: Vec<usize> = (0..1u32 << m).filter(|&x| mask >> x & 1 == 1).map(|x| adj[x as usize].len()).collect();
    let e = degs.iter().sum::<usize>() as u32 / 2;
    (v, e, degs, naive_girth(&adj))
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::Certificate(format!("line {line}: {}", msg.into()))
}

fn parse_mask(line: usize, word: &str) -> Result<u64> {
    u64::from_str_radix(word.trim_start_matches("0x"), 16).map_err(|_| bad(line, format!("bad mask {word}")))
}

fn parse_constraints(line: usize, words: &[&str]) -> Result<Constraints> {
    let mut c = Constraints::girth(0);
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| bad(line, format!("bad constraint {w}")))?;
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad(line, format!("bad value in {w}")));
        match k {
            "min_girth" => c.min_girth = num(v)?,
            "regular_degree" => c.regular_degree = if v == "-" { None } else { Some(num(v)?) },
            "min_ratio" => {
                c.min_ratio = if v == "-" {
                    None
                } else {
                    let (p, q) = v.split_once('/').ok_or_else(|| bad(line, "ratio must be p/q"))?;
                    Some((num(p)?, num(q)?))
                }
            }
            "nonempty" => c.nonempty = v == "1",
            "edges_equal_vertices" => c.edges_equal_vertices = v == "1",
            _ => return Err(bad(line, format!("unknown constraint {k}"))),
        }
    }
    Ok(c)
}

fn naive_admits(m: u32, c: &Constraints, mask: u64) -> bool {
    let (v, e, degs, g) = naive_counts(m, mask);
    (!c.nonempty || v > 0)
        && g.is_none_or(|g| g >= c.min_girth)
        && c.regular_degree.is_none_or(|d| degs.iter().all(|&x| x == d as usize))
        && c.min_ratio.is_none_or(|(p, q)| q * e >= p * v)
        && (!c.edges_equal_vertices || e == v)
}

/// Re-checks a certificate: every class is canonical, meets the stated
/// constraints, has the stated orbit size, and round counts are consistent
/// and nested. Exhaustiveness is not re-proved.
pub fn check_certificate(text: &str) -> Result<CertificateSummary> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, w)| !w.is_empty())
        .collect();
    let mut it = lines.iter();
    let mut next = |what: &str| it.next().ok_or_else(|| Error::Certificate(format!("missing {what}")));
    let (l, w) = next("header")?;
    if w.join(" ") != MAGIC {
        return Err(bad(*l, "not a gridgirth certificate"));
    }
    let (l, w) = next("kind")?;
    let kind = match w.as_slice() {
        ["kind", k] => *k,
        _ => return Err(bad(*l, "expected kind")),
    };
    let (l, w) = next("m")?;
    let m: u32 = match w.as_slice() {
        ["m", x] => x.parse().map_err(|_| bad(*l, "bad m"))?,
        _ => return Err(bad(*l, "expected m")),
    };
    if !(1..=6).contains(&m) {
        return Err(bad(*l, "m outside 1..=6"));
    }
    let (l, w) = next("constraints")?;
    if w.first() != Some(&"constraints") {
        return Err(bad(*l, "expected constraints"));
    }
    let c = parse_constraints(*l, &w[1..])?;
    let check_class = |line: usize, mask: u64| -> Result<u64> {
        if m < 6 && mask >> (1u32 << m) != 0 {
            return Err(bad(line, "mask outside the cube"));
        }
        let (canon, orbit) = naive_canonical(m, mask);
        if canon != mask {
            return Err(bad(line, format!("{mask:#x} is not canonical")));
        }
        if !naive_admits(m, &c, mask) {
            return Err(bad(line, format!("{mask:#x} violates the constraints")));
        }
        Ok(orbit)
    };
    match kind {
        "enumeration" => {
            let (l, w) = next("nodes")?;
            if w.first() != Some(&"nodes") {
                return Err(bad(*l, "expected nodes"));
            }
            let (l, w) = next("classes")?;
            let count: usize = match w.as_slice() {
                ["classes", x] => x.parse().map_err(|_| bad(*l, "bad count"))?,
                _ => return Err(bad(*l, "expected classes")),
            };
            let mut seen = BTreeSet::new();
            for _ in 0..count {
                let (l, w) = next("class")?;
                let (mask, orbit) = match w.as_slice() {
                    ["class", x, "orbit", o] => (parse_mask(*l, x)?, o.parse::<u64>().map_err(|_| bad(*l, "bad orbit"))?),
                    _ => return Err(bad(*l, "expected class line")),
                };
                if check_class(*l, mask)? != orbit {
                    return Err(bad(*l, "orbit size mismatch"));
                }
                if !seen.insert(mask) {
                    return Err(bad(*l, "duplicate class"));
                }
            }
            let (l, w) = next("end")?;
            if w.as_slice() != ["end"] {
                return Err(bad(*l, "expected end"));
            }
            Ok(CertificateSummary::Enumeration { m, classes: count })
        }
        "elimination" => {
            let mut counts = Vec::new();
            let mut prev: Option<BTreeSet<u64>> = None;
            loop {
                let (l, w) = next("round or end")?;
                match w.as_slice() {
                    ["end"] => break,
                    ["round", i, "count", n] => {
                        if i.parse::<usize>().ok() != Some(counts.len()) {
                            return Err(bad(*l, "rounds out of order"));
                        }
                        let n: usize = n.parse().map_err(|_| bad(*l, "bad count"))?;
                        let mut cur = BTreeSet::new();
                        for _ in 0..n {
                            let (l, w) = next("class")?;
                            let mask = match w.as_slice() {
                                ["class", x] => parse_mask(*l, x)?,
                                _ => return Err(bad(*l, "expected class line")),
                            };
                            check_class(*l, mask)?;
                            cur.insert(mask);
                        }
                        if prev.as_ref().is_some_and(|p| !cur.is_subset(p)) {
                            return Err(bad(*l, "survivors are not a subset of the previous round"));
                        }
                        counts.push(cur.len());
                        prev = Some(cur);
                    }
                    _ => return Err(bad(*l, "expected round")),
                }
            }
            Ok(CertificateSummary::Elimination { counts })
        }
        other => Err(bad(*l, format!("unknown kind {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercube::enumerate_constrained;

    #[test]
    fn round_trip() {
        let e = enumerate_constrained(4, &Constraints::girth(6).ratio(1, 1), 1_000_000).unwrap();
        let text = enumeration_certificate(&e);
        assert_eq!(check_certificate(&text).unwrap(), CertificateSummary::Enumeration { m: 4, classes: e.classes.len() });
        let tampered = text.replace("girth=6", "girth=10");
        assert!(check_certificate(&tampered).is_err());
    }

    #[test]
    fn elimination_rounds_must_nest() {
        let a: BTreeSet<u64> = [0x1_u64].into_iter().collect();
        let text = elimination_certificate(&[a.clone(), BTreeSet::new()]).replace("min_girth=12 edges_equal_vertices=1", "min_girth=0");
        assert_eq!(check_certificate(&text).unwrap(), CertificateSummary::Elimination { counts: vec![1, 0] });
        let bad_text = elimination_certificate(&[BTreeSet::new(), a]).replace("min_girth=12 edges_equal_vertices=1", "min_girth=0");
        assert!(check_certificate(&bad_text).is_err());
    }
}
