//! Registry of the known constructions.
//!
//! Fixed constructions live as text files under `constructions/` and are
//! compiled in; the parametric families (the parity rule in odd dimension,
//! slabs, the `Z^4` family over parity sets and the level-set graphs over
//! `Z^{k^2}`) are built in code. The registry is built once and shared.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Point};
use crate::rulegraph::format::{parse_construction, Claims};
use crate::rulegraph::rule::{Condition, LinearForm, RuleExpr};
use crate::rulegraph::spec::{EdgeSet, PeriodicGraphSpec, VertexSet};
use crate::zlattice::{integer_kernel, solve_linear};

/// Bundled construction files, `(file name, text)`.
pub const CONSTRUCTION_FILES: &[(&str, &str)] = &[
    ("G1.grid", include_str!("../constructions/G1.grid")),
    ("G2.grid", include_str!("../constructions/G2.grid")),
    ("G3.grid", include_str!("../constructions/G3.grid")),
    ("G4.grid", include_str!("../constructions/G4.grid")),
    ("gamma6.grid", include_str!("../constructions/gamma6.grid")),
    ("n4k3-motif.grid", include_str!("../constructions/n4k3-motif.grid")),
    ("d4k3-motif.grid", include_str!("../constructions/d4k3-motif.grid")),
    ("n5k3-motif.grid", include_str!("../constructions/n5k3-motif.grid")),
    ("n5k3-motif-corrected.grid", include_str!("../constructions/n5k3-motif-corrected.grid")),
    ("n5k4-qr.grid", include_str!("../constructions/n5k4-qr.grid")),
    ("n5k4-mod3.grid", include_str!("../constructions/n5k4-mod3.grid")),
    ("n6k4-motif.grid", include_str!("../constructions/n6k4-motif.grid")),
    ("gamma3-noninduced.grid", include_str!("../constructions/gamma3-noninduced.grid")),
    ("gammaBCC.grid", include_str!("../constructions/gammaBCC.grid")),
    ("gammaFCC.grid", include_str!("../constructions/gammaFCC.grid")),
    ("gamma4-1.grid", include_str!("../constructions/gamma4-1.grid")),
    ("gamma4-2.grid", include_str!("../constructions/gamma4-2.grid")),
    ("gamma4-3.grid", include_str!("../constructions/gamma4-3.grid")),
];

#[derive(Debug, Clone)]
pub struct ConstructionEntry {
    pub id: String,
    pub spec: PeriodicGraphSpec,
    /// Stated values; oracles for verification, never computed.
    pub claimed: Claims,
    pub params: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaK2Params {
    pub k: usize,
    pub p: Vec<i64>,
}

impl GammaK2Params {
    /// `p_i = c · 2^(i-1)`.
    pub fn powers_of_two(k: usize, c: i64) -> Self {
        GammaK2Params { k, p: (0..2 * k as u32).map(|i| c << i).collect() }
    }
}

/// Named parity sets of `(x1, x2, x3)`: two coordinates with fixed parities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParitySet {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
}

impl ParitySet {
    pub const ALL: [ParitySet; 6] =
        [ParitySet::S1, ParitySet::S2, ParitySet::S3, ParitySet::S4, ParitySet::S5, ParitySet::S6];

    /// `[(coordinate, parity); 2]`, coordinates counted from 0.
    fn fixed(self) -> [(usize, i64); 2] {
        match self {
            ParitySet::S1 => [(0, 0), (1, 1)],
            ParitySet::S2 => [(0, 1), (1, 0)],
            ParitySet::S3 => [(0, 0), (2, 1)],
            ParitySet::S4 => [(0, 1), (2, 0)],
            ParitySet::S5 => [(1, 0), (2, 1)],
            ParitySet::S6 => [(1, 1), (2, 0)],
        }
    }

    /// Parity patterns `(x1, x2, x3) mod 2` in the set.
    pub fn patterns(self) -> BTreeSet<[i64; 3]> {
        let f = self.fixed();
        (0..8)
            .map(|b| [b & 1, b >> 1 & 1, b >> 2 & 1])
            .filter(|v| f.iter().all(|&(i, r)| v[i] == r))
            .collect()
    }

    pub fn parse(s: &str) -> Option<Self> {
        ParitySet::ALL.into_iter().find(|p| format!("{p:?}").eq_ignore_ascii_case(s))
    }
}

fn leaf(c: Condition) -> RuleExpr {
    RuleExpr::Leaf(c)
}

fn claims(degree: u32, girth: u32, notes: &str) -> Claims {
    Claims { degree: Some(degree), girth: Some(girth), notes: notes.into(), ..Claims::default() }
}

fn unit_translations(n: usize, scale: i64) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = scale;
            v
        })
        .collect()
}

fn level_point(n: usize, c: i64) -> Point {
    let mut v = vec![0; n];
    v[0] = c;
    Point(v)
}

/// Points of `Z^n`, `n` odd, with `Σ (-1)^{x_i} = ±1`: degree `n + 1`, girth 6.
pub fn thm1(n: usize) -> Result<ConstructionEntry> {
    if n < 3 || n % 2 == 0 || n > 15 {
        return Err(Error::InvalidParams(format!("thm1 needs odd n in 3..=15, got {n}")));
    }
    // Σ (-1)^{x_i} = n - 2w with w the number of odd coordinates.
    let offsets: Vec<Vec<i64>> = (0..1u32 << n)
        .filter(|b| {
            let w = b.count_ones() as usize;
            w == (n - 1) / 2 || w == (n + 1) / 2
        })
        .map(|b| (0..n).map(|i| i64::from(b >> i & 1)).collect())
        .collect();
    let forms = (0..n).map(|i| LinearForm::coordinate(n, i)).collect();
    let rule = leaf(Condition::ResidueVectorIn { forms, modulus: 2, offsets });
    let lattice = LatticeSpec::zn(n)?;
    let id = format!("thm1-n{n}");
    let spec = PeriodicGraphSpec::new(
        id.clone(),
        lattice,
        VertexSet::Rule(rule),
        EdgeSet::Induced,
        Some(unit_translations(n, 2)),
        None,
        Some(n as u32 + 1),
    )?;
    Ok(ConstructionEntry {
        id,
        spec,
        claimed: claims(n as u32 + 1, 6, "signed parity sum is ±1"),
        params: Some(serde_json::json!({ "n": n })),
    })
}

/// Union of the slabs `V_k = {x : Σ x_i ∈ {k, k+1}}` for `k` in `ks`. The slabs
/// must be at least 3 apart so that no grid edge joins two of them.
pub fn slab_union(n: usize, ks: &[i64]) -> Result<ConstructionEntry> {
    if n < 3 {
        return Err(Error::InvalidParams(format!("slabs need n >= 3, got {n}")));
    }
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() {
        return Err(Error::InvalidParams("no slab levels".into()));
    }
    if ks.windows(2).any(|w| w[1] - w[0] < 3) {
        return Err(Error::InvalidParams(format!("slab levels {ks:?} closer than 3")));
    }
    let levels: Vec<i64> = ks.iter().flat_map(|&k| [k, k + 1]).collect();
    let rule = leaf(Condition::ValueIn { form: LinearForm::homogeneous(vec![1; n]), values: levels.clone() });
    let translations = integer_kernel(n, &[vec![1; n]])?;
    let reps = levels.iter().map(|&c| level_point(n, c)).collect();
    let id = match ks.as_slice() {
        [k] => format!("slab-n{n}-k{k}"),
        _ => format!("slab-union-n{n}-k{}", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join("-")),
    };
    let spec = PeriodicGraphSpec::new(
        id.clone(),
        LatticeSpec::zn(n)?,
        VertexSet::Rule(rule),
        EdgeSet::Induced,
        Some(translations),
        Some(reps),
        Some(n as u32),
    )?;
    Ok(ConstructionEntry {
        id,
        spec,
        claimed: claims(n as u32, 6, "two adjacent levels of the coordinate sum"),
        params: Some(serde_json::json!({ "n": n, "k": ks })),
    })
}

/// `x1 ≡ x2 ≡ x3 (mod 2)` or `(x1, x2, x3) ∈ U_{x4}` with `U` periodic in `x4`.
/// Cyclically consecutive sets must be disjoint.
pub fn build_n4_family(seq: &[ParitySet]) -> Result<ConstructionEntry> {
    if seq.is_empty() {
        return Err(Error::InvalidParams("empty parity-set sequence".into()));
    }
    for (j, s) in seq.iter().enumerate() {
        let t = seq[(j + 1) % seq.len()];
        if !s.patterns().is_disjoint(&t.patterns()) {
            return Err(Error::InvalidParams(format!("{s:?} and {t:?} at positions {j}, {} intersect", j + 1)));
        }
    }
    let period = seq.len() as i64;
    let x = |i| LinearForm::coordinate(4, i);
    let diagonal = leaf(Condition::ResidueVectorIn {
        forms: vec![x(0), x(1), x(2)],
        modulus: 2,
        offsets: vec![vec![0, 0, 0], vec![1, 1, 1]],
    });
    let mut alts = vec![diagonal];
    for (j, s) in seq.iter().enumerate() {
        let mut conj = Vec::new();
        if period > 1 {
            conj.push(leaf(Condition::CongruenceIn { form: x(3), modulus: period, residues: vec![j as i64] }));
        }
        for (i, r) in s.fixed() {
            conj.push(leaf(Condition::CongruenceIn { form: x(i), modulus: 2, residues: vec![r] }));
        }
        alts.push(RuleExpr::And(conj));
    }
    let mut translations = unit_translations(4, 2);
    translations[3][3] = period;
    let names: Vec<String> = seq.iter().map(|s| format!("{s:?}")).collect();
    let id = format!("n4-family-{}", names.join("-"));
    let spec = PeriodicGraphSpec::new(
        id.clone(),
        LatticeSpec::zn(4)?,
        VertexSet::Rule(RuleExpr::Or(alts)),
        EdgeSet::Induced,
        Some(translations),
        None,
        Some(4),
    )?;
    Ok(ConstructionEntry {
        id,
        spec,
        claimed: claims(4, 8, "girth does not depend on the sequence"),
        params: Some(serde_json::json!({ "sequence": names })),
    })
}

/// Level-set graph over `Z^{k^2}`: `a · x ∈ {p_1, ..., p_2k}` with
/// `a_{k(i-1)+j} = |p_{2i} - p_{2j-1}|`. One representative per level; the
/// kernel of `a` acts transitively on each level.
pub fn build_gamma_k2(params: &GammaK2Params) -> Result<ConstructionEntry> {
    let GammaK2Params { k, p } = params;
    let k = *k;
    if !(3..=6).contains(&k) {
        return Err(Error::InvalidParams(format!("k must lie in 3..=6, got {k}")));
    }
    if p.len() != 2 * k || p.iter().any(|&v| v <= 0) {
        return Err(Error::InvalidParams(format!("need {} positive levels, got {p:?}", 2 * k)));
    }
    let mut diffs = BTreeSet::new();
    for (i, a) in p.iter().enumerate() {
        for (j, b) in p.iter().enumerate() {
            if i != j && !diffs.insert(a - b) {
                return Err(Error::InvalidParams(format!("difference {} occurs twice in {p:?}", a - b)));
            }
        }
    }
    let n = k * k;
    let mut a = vec![0i64; n];
    for i in 1..=k {
        for j in 1..=k {
            a[k * (i - 1) + j - 1] = (p[2 * i - 1] - p[2 * j - 2]).abs();
        }
    }
    let reps = p
        .iter()
        .map(|&c| {
            solve_linear(&a, c)?
                .map(Point)
                .ok_or_else(|| Error::InvalidParams(format!("level {c} has no lattice points")))
        })
        .collect::<Result<Vec<_>>>()?;
    let translations = integer_kernel(n, std::slice::from_ref(&a))?;
    let rule = leaf(Condition::ValueIn { form: LinearForm::homogeneous(a.clone()), values: p.clone() });
    let c = p[0];
    let id = if *params == GammaK2Params::powers_of_two(k, c) {
        if c == 1 { format!("gammaK2-k{k}") } else { format!("gammaK2-k{k}-c{c}") }
    } else {
        format!("gammaK2-k{k}-p{}", p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-"))
    };
    let spec = PeriodicGraphSpec::new(
        id.clone(),
        LatticeSpec::zn(n)?,
        VertexSet::Rule(rule),
        EdgeSet::Induced,
        Some(translations),
        Some(reps),
        Some(k as u32),
    )?;
    Ok(ConstructionEntry {
        id,
        spec,
        claimed: claims(k as u32, 12, "levels with pairwise distinct differences"),
        params: Some(serde_json::json!({ "k": k, "p": p, "a": a })),
    })
}

fn load() -> Result<Vec<ConstructionEntry>> {
    let mut out = Vec::new();
    for (file, text) in CONSTRUCTION_FILES {
        let c = parse_construction(file, text)?;
        out.push(ConstructionEntry { id: c.id, spec: c.spec, claimed: c.claims, params: None });
    }
    for n in [3, 5, 7] {
        out.push(thm1(n)?);
    }
    for n in [3, 5, 7] {
        out.push(slab_union(n, &[0])?);
    }
    out.push(slab_union(3, &[0, 3])?);
    out.push(build_n4_family(&[ParitySet::S1, ParitySet::S2])?);
    out.push(build_n4_family(&[ParitySet::S1, ParitySet::S2, ParitySet::S3, ParitySet::S4])?);
    out.push(build_gamma_k2(&GammaK2Params::powers_of_two(3, 1))?);
    out.push(build_gamma_k2(&GammaK2Params::powers_of_two(3, 3))?);
    out.push(build_gamma_k2(&GammaK2Params::powers_of_two(4, 1))?);
    let mut ids = BTreeSet::new();
    for e in &out {
        if !ids.insert(e.id.clone()) {
            return Err(Error::InvalidSpec(format!("duplicate construction id `{}`", e.id)));
        }
    }
    Ok(out)
}

/// Every registered construction, in a fixed order.
///
/// Panics if a bundled construction file fails to load; the message names
/// the file and line.
pub fn list_constructions() -> &'static [ConstructionEntry] {
    static REGISTRY: OnceLock<Vec<ConstructionEntry>> = OnceLock::new();
    REGISTRY.get_or_init(|| load().unwrap_or_else(|e| panic!("construction registry: {e}")))
}

pub fn find_construction(id: &str) -> Result<&'static ConstructionEntry> {
    list_constructions().iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownConstruction(id.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete() {
        let all = list_constructions();
        assert!(all.len() >= 18);
        let g1 = find_construction("G1").unwrap();
        assert_eq!(g1.claimed.girth, Some(10));
        assert_eq!(find_construction("gammaBCC").unwrap().claimed.spread, Some((6, 93)));
        assert!(matches!(find_construction("nope"), Err(Error::UnknownConstruction(_))));
    }

    #[test]
    fn gamma_k2_coefficients() {
        let e = build_gamma_k2(&GammaK2Params::powers_of_two(3, 1)).unwrap();
        // a_{k(i-1)+j} = |p_{2i} - p_{2j-1}| with p = 1, 2, 4, ..., 32.
        let a: Vec<i64> = serde_json::from_value(e.params.unwrap()["a"].clone()).unwrap();
        assert_eq!(a, vec![1, 2, 14, 7, 4, 8, 31, 28, 16]);
        assert_eq!(e.spec.representatives.len(), 6);
        let dup = GammaK2Params { k: 3, p: vec![1, 2, 3, 10, 20, 40] };
        assert!(matches!(build_gamma_k2(&dup), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn n4_family_intersections() {
        assert!(build_n4_family(&[ParitySet::S1, ParitySet::S2]).is_ok());
        assert!(build_n4_family(&[ParitySet::S1, ParitySet::S1]).is_err());
        assert!(build_n4_family(&[ParitySet::S1, ParitySet::S2, ParitySet::S3, ParitySet::S4]).is_ok());
        assert!(build_n4_family(&[ParitySet::S1, ParitySet::S3]).is_err());
    }

    #[test]
    fn slabs_must_not_touch() {
        assert!(slab_union(3, &[0, 2]).is_err());
        assert!(slab_union(3, &[0, 3]).is_ok());
    }
}
