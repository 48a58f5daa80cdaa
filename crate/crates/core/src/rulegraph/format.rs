//! Text format for construction files.
//!
//! A file is a sequence of records, one per line, `key value...`. A record
//! continues onto following lines while parentheses are open. `#` starts a
//! comment. Only integer tokens are accepted as numbers.
//!
//! Rules are S-expressions over linear forms written `[c1 c2 ... cn]` or
//! `[c1 ... cn | k]` (meaning `c·x + k`):
//!
//! ```text
//! (and R...)  (or R...)  (not R)
//! (mod FORM M (r1 r2 ...))          FORM mod M is one of the residues
//! (in FORM (v1 v2 ...))             FORM takes one of the values
//! (ge FORM b)  (le FORM b)          half-spaces
//! (resvec (FORM...) M ((o...)...))  reduced vector of forms is one of the offsets
//! ```
//!
//! For example, the cubic girth-10 graph `G1`:
//!
//! ```text
//! id G1
//! lattice Z3
//! vertices rule (or (mod [2 0 -1] 4 (0))
//!                   (mod [0 2 -1 | 1] 4 (0)))
//! edges induced
//! translation (4 0 0)
//! translation (0 4 0)
//! translation (1 1 2)
//! degree 3
//! girth 10
//! ```
//!
//! Other keys: `vertices motif` with `offset (..)`, `basis (..)` and an optional
//! `anchor-rule RULE`; `vertices all`; `edges explicit` with `edge (d) RULE`
//! and `chain (d) LEN RULE`; `edges orbit` with
//! `generator ((row)...) (translation)` and `seed (a) (b)`;
//! `edges induced-by-points` with `point (p)` lines, whose minimum-distance
//! pairs are repeated over the `translation` vectors; `rep (p)` for explicit
//! representatives; `coverage argued TEXT`; claims `degree`, `girth`,
//! `spread DEPTH VALUE`, `nonadjacent SQDIST`; free text `notes`.

use super::orbit::{build_orbit_edges, OrbitSpec};
use super::rule::{Condition, LinearForm, RuleExpr};
use super::spec::{Coverage, EdgeRule, EdgeSet, MotifSpec, PeriodicGraphSpec, VertexSet};
use crate::error::{Error, Result};
use crate::lattice::{neighbor_vectors, Isometry, LatticeSpec, Point};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Form(Vec<i64>, i64),
    Int(i64),
    Word(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Int(i64),
    Word(String),
    Form(LinearForm),
    List(Vec<Sexp>),
}

/// Claimed values attached to a construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct Claims {
    pub degree: Option<u32>,
    pub girth: Option<u32>,
    pub spread: Option<(u32, u64)>,
    pub nonadjacent_sq_dist: Option<i64>,
    pub notes: String,
}

#[derive(Debug, Clone)]
pub struct ConstructionFile {
    pub id: String,
    pub spec: PeriodicGraphSpec,
    pub claims: Claims,
}

struct Ctx<'a> {
    file: &'a str,
    line: usize,
}

impl Ctx<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { file: self.file.to_string(), line: self.line, msg: msg.into() }
    }
}

fn tokenize(ctx: &Ctx, text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            '[' => {
                chars.next();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some(']') => break,
                        Some(ch) => body.push(ch),
                        None => return Err(ctx.err("unterminated linear form")),
                    }
                }
                let (coef, konst) = match body.split_once('|') {
                    Some((a, b)) => (a, Some(b)),
                    None => (body.as_str(), None),
                };
                let ints = |s: &str| -> Result<Vec<i64>> {
                    s.split_whitespace()
                        .map(|t| t.parse::<i64>().map_err(|_| ctx.err(format!("bad integer `{t}` in form"))))
                        .collect()
                };
                let coefficients = ints(coef)?;
                let constant = match konst {
                    Some(k) => match ints(k)?.as_slice() {
                        [k] => *k,
                        _ => return Err(ctx.err("form constant must be a single integer")),
                    },
                    None => 0,
                };
                out.push(Tok::Form(coefficients, constant));
            }
            _ => {
                let mut word = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || "()[]".contains(ch) {
                        break;
                    }
                    word.push(ch);
                    chars.next();
                }
                let numeric = word.trim_start_matches(['-', '+']).starts_with(|c: char| c.is_ascii_digit());
                if numeric && word.parse::<i64>().is_err() {
                    return Err(ctx.err(format!("non-integer number `{word}`")));
                }
                match word.parse::<i64>() {
                    Ok(v) => out.push(Tok::Int(v)),
                    Err(_) => out.push(Tok::Word(word)),
                }
            }
        }
    }
    Ok(out)
}

fn parse_sexps(ctx: &Ctx, toks: &[Tok]) -> Result<Vec<Sexp>> {
    fn one(ctx: &Ctx, toks: &[Tok], i: &mut usize) -> Result<Sexp> {
        let t = toks.get(*i).ok_or_else(|| ctx.err("unexpected end of record"))?;
        *i += 1;
        Ok(match t {
            Tok::Int(v) => Sexp::Int(*v),
            Tok::Word(w) => Sexp::Word(w.clone()),
            Tok::Form(c, k) => Sexp::Form(LinearForm::new(c.clone(), *k)),
            Tok::Close => return Err(ctx.err("unbalanced `)`")),
            Tok::Open => {
                let mut items = Vec::new();
                loop {
                    match toks.get(*i) {
                        Some(Tok::Close) => {
                            *i += 1;
                            break;
                        }
                        Some(_) => items.push(one(ctx, toks, i)?),
                        None => return Err(ctx.err("unbalanced `(`")),
                    }
                }
                Sexp::List(items)
            }
        })
    }
    let mut i = 0;
    let mut out = Vec::new();
    while i < toks.len() {
        out.push(one(ctx, toks, &mut i)?);
    }
    Ok(out)
}

fn words(sx: &[Sexp]) -> String {
    sx.iter()
        .map(|s| match s {
            Sexp::Word(w) => w.clone(),
            Sexp::Int(v) => v.to_string(),
            other => format!("{other:?}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn int(ctx: &Ctx, s: &Sexp) -> Result<i64> {
    match s {
        Sexp::Int(v) => Ok(*v),
        other => Err(ctx.err(format!("expected integer, found {other:?}"))),
    }
}

fn int_list(ctx: &Ctx, s: &Sexp) -> Result<Vec<i64>> {
    match s {
        Sexp::List(xs) => xs.iter().map(|x| int(ctx, x)).collect(),
        other => Err(ctx.err(format!("expected integer list, found {other:?}"))),
    }
}

fn form(ctx: &Ctx, s: &Sexp, dim: usize) -> Result<LinearForm> {
    match s {
        Sexp::Form(f) if f.dim() == dim => Ok(f.clone()),
        Sexp::Form(f) => Err(ctx.err(format!("form {f} has {} coefficients, expected {dim}", f.dim()))),
        other => Err(ctx.err(format!("expected linear form, found {other:?}"))),
    }
}

fn rule(ctx: &Ctx, s: &Sexp, dim: usize) -> Result<RuleExpr> {
    let Sexp::List(items) = s else {
        return Err(ctx.err(format!("expected rule, found {s:?}")));
    };
    let Some(Sexp::Word(head)) = items.first() else {
        return Err(ctx.err("rule must start with an operator"));
    };
    let args = &items[1..];
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(ctx.err(format!("`{head}` takes {n} arguments, got {}", args.len())))
        }
    };
    let expr = match head.as_str() {
        "and" => RuleExpr::And(args.iter().map(|a| rule(ctx, a, dim)).collect::<Result<_>>()?),
        "or" => RuleExpr::Or(args.iter().map(|a| rule(ctx, a, dim)).collect::<Result<_>>()?),
        "not" => {
            arity(1)?;
            RuleExpr::Not(Box::new(rule(ctx, &args[0], dim)?))
        }
        "mod" => {
            arity(3)?;
            RuleExpr::Leaf(Condition::CongruenceIn {
                form: form(ctx, &args[0], dim)?,
                modulus: int(ctx, &args[1])?,
                residues: int_list(ctx, &args[2])?,
            })
        }
        "in" => {
            arity(2)?;
            RuleExpr::Leaf(Condition::ValueIn { form: form(ctx, &args[0], dim)?, values: int_list(ctx, &args[1])? })
        }
        "ge" => {
            arity(2)?;
            RuleExpr::Leaf(Condition::AtLeast { form: form(ctx, &args[0], dim)?, bound: int(ctx, &args[1])? })
        }
        "le" => {
            arity(2)?;
            RuleExpr::Leaf(Condition::AtMost { form: form(ctx, &args[0], dim)?, bound: int(ctx, &args[1])? })
        }
        "resvec" => {
            arity(3)?;
            let Sexp::List(fs) = &args[0] else {
                return Err(ctx.err("resvec expects a list of forms"));
            };
            let Sexp::List(os) = &args[2] else {
                return Err(ctx.err("resvec expects a list of offsets"));
            };
            RuleExpr::Leaf(Condition::ResidueVectorIn {
                forms: fs.iter().map(|f| form(ctx, f, dim)).collect::<Result<_>>()?,
                modulus: int(ctx, &args[1])?,
                offsets: os.iter().map(|o| int_list(ctx, o)).collect::<Result<_>>()?,
            })
        }
        other => return Err(ctx.err(format!("unknown rule operator `{other}`"))),
    };
    expr.check(dim).map_err(|e| ctx.err(e.to_string()))?;
    Ok(expr)
}

fn parse_lattice(ctx: &Ctx, w: &str) -> Result<LatticeSpec> {
    match w {
        "BCC" => Ok(LatticeSpec::Bcc),
        "FCC" => Ok(LatticeSpec::Fcc),
        "D4" => Ok(LatticeSpec::D4),
        _ => w
            .strip_prefix('Z')
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| ctx.err(format!("unknown lattice `{w}`")))
            .and_then(|n| LatticeSpec::zn(n).map_err(|e| ctx.err(e.to_string()))),
    }
}

/// Splits text into logical records `(line number, tokens)`.
fn records(file: &str, text: &str) -> Result<Vec<(usize, Vec<Tok>)>> {
    let mut out: Vec<(usize, Vec<Tok>)> = Vec::new();
    let mut depth = 0i64;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let ctx = Ctx { file, line: i + 1 };
        let toks = tokenize(&ctx, line)?;
        if toks.is_empty() {
            continue;
        }
        let delta: i64 = toks
            .iter()
            .map(|t| match t {
                Tok::Open => 1,
                Tok::Close => -1,
                _ => 0,
            })
            .sum();
        if depth > 0 {
            out.last_mut().unwrap().1.extend(toks);
        } else {
            out.push((i + 1, toks));
        }
        depth += delta;
        if depth < 0 {
            return Err(ctx.err("unbalanced `)`"));
        }
    }
    if depth != 0 {
        let line = out.last().map_or(0, |r| r.0);
        return Err(Error::Parse { file: file.to_string(), line, msg: "unbalanced `(` at end of file".into() });
    }
    Ok(out)
}

#[derive(Default)]
struct Draft {
    id: Option<String>,
    lattice: Option<LatticeSpec>,
    vertex_mode: Option<String>,
    vertex_rule: Option<RuleExpr>,
    offsets: Vec<Vec<i64>>,
    basis: Vec<Vec<i64>>,
    anchor_rule: Option<RuleExpr>,
    edge_mode: Option<String>,
    edge_entries: Vec<(Vec<i64>, RuleExpr)>,
    generators: Vec<Isometry>,
    seeds: Vec<(Point, Point)>,
    points: Vec<Vec<i64>>,
    translations: Vec<Vec<i64>>,
    reps: Vec<Point>,
    coverage: Option<String>,
    claims: Claims,
}

/// Parses one construction file. `file` is used in error messages.
pub fn parse_construction(file: &str, text: &str) -> Result<ConstructionFile> {
    let mut d = Draft::default();
    for (line, toks) in records(file, text)? {
        let ctx = Ctx { file, line };
        let mut sx = parse_sexps(&ctx, &toks)?;
        let Sexp::Word(key) = sx.remove(0) else {
            return Err(ctx.err("record must start with a key"));
        };
        let dim = || d.lattice.map(|l| l.ambient_dim()).ok_or_else(|| ctx.err("`lattice` must come first"));
        let single_int = |sx: &[Sexp]| -> Result<i64> {
            match sx {
                [s] => int(&ctx, s),
                _ => Err(ctx.err(format!("`{key}` takes one integer"))),
            }
        };
        let vector = |sx: &[Sexp], n: usize| -> Result<Vec<i64>> {
            match sx {
                [s] => {
                    let v = int_list(&ctx, s)?;
                    if v.len() != n {
                        return Err(ctx.err(format!("vector {v:?} has {} entries, expected {n}", v.len())));
                    }
                    Ok(v)
                }
                _ => Err(ctx.err(format!("`{key}` takes one vector"))),
            }
        };
        match key.as_str() {
            "id" => d.id = Some(words(&sx)),
            "lattice" => match sx.as_slice() {
                [Sexp::Word(w)] => d.lattice = Some(parse_lattice(&ctx, w)?),
                _ => return Err(ctx.err("`lattice` takes one name")),
            },
            "vertices" => {
                let n = dim()?;
                match sx.as_slice() {
                    [Sexp::Word(m)] if m == "motif" || m == "all" => d.vertex_mode = Some(m.clone()),
                    [Sexp::Word(m), r] if m == "rule" => {
                        d.vertex_mode = Some("rule".into());
                        d.vertex_rule = Some(rule(&ctx, r, n)?);
                    }
                    _ => return Err(ctx.err("expected `vertices rule R`, `vertices motif` or `vertices all`")),
                }
            }
            "offset" => d.offsets.push(vector(&sx, dim()?)?),
            "basis" => d.basis.push(vector(&sx, dim()?)?),
            "anchor-rule" => match sx.as_slice() {
                [r] => d.anchor_rule = Some(rule(&ctx, r, dim()?)?),
                _ => return Err(ctx.err("`anchor-rule` takes one rule")),
            },
            "edges" => match sx.as_slice() {
                [Sexp::Word(m)] if ["induced", "explicit", "orbit", "induced-by-points"].contains(&m.as_str()) => {
                    d.edge_mode = Some(m.clone())
                }
                _ => return Err(ctx.err("unknown edge mode")),
            },
            "edge" => {
                let n = dim()?;
                match sx.as_slice() {
                    [dir, r] => {
                        let dir = int_list(&ctx, dir)?;
                        if dir.len() != n {
                            return Err(ctx.err("edge direction has wrong dimension"));
                        }
                        d.edge_entries.push((dir, rule(&ctx, r, n)?));
                    }
                    _ => return Err(ctx.err("`edge` takes a direction and a rule")),
                }
            }
            "chain" => {
                let n = dim()?;
                match sx.as_slice() {
                    [dir, len, r] => {
                        let dir = int_list(&ctx, dir)?;
                        if dir.len() != n {
                            return Err(ctx.err("chain direction has wrong dimension"));
                        }
                        let len = int(&ctx, len)?;
                        if len < 1 {
                            return Err(ctx.err("chain length must be positive"));
                        }
                        d.edge_entries.extend(EdgeRule::chain(&dir, len as usize, &rule(&ctx, r, n)?));
                    }
                    _ => return Err(ctx.err("`chain` takes a direction, a length and a rule")),
                }
            }
            "generator" => {
                let lat = d.lattice.ok_or_else(|| ctx.err("`lattice` must come first"))?;
                match sx.as_slice() {
                    [Sexp::List(rows), t] => {
                        let m = rows.iter().map(|r| int_list(&ctx, r)).collect::<Result<Vec<_>>>()?;
                        let t = int_list(&ctx, t)?;
                        d.generators.push(Isometry::new(m, t, lat).map_err(|e| ctx.err(e.to_string()))?);
                    }
                    _ => return Err(ctx.err("`generator` takes a matrix and a translation")),
                }
            }
            "seed" => {
                let n = dim()?;
                match sx.as_slice() {
                    [a, b] => {
                        let (a, b) = (int_list(&ctx, a)?, int_list(&ctx, b)?);
                        if a.len() != n || b.len() != n {
                            return Err(ctx.err("seed endpoint has wrong dimension"));
                        }
                        d.seeds.push((Point(a), Point(b)));
                    }
                    _ => return Err(ctx.err("`seed` takes two points")),
                }
            }
            "point" => d.points.push(vector(&sx, dim()?)?),
            "translation" => d.translations.push(vector(&sx, dim()?)?),
            "rep" => d.reps.push(Point(vector(&sx, dim()?)?)),
            "coverage" => match sx.first() {
                Some(Sexp::Word(w)) if w == "argued" => {
                    sx.remove(0);
                    d.coverage = Some(words(&sx));
                }
                _ => return Err(ctx.err("expected `coverage argued TEXT`")),
            },
            "degree" => d.claims.degree = Some(single_int(&sx)? as u32),
            "girth" => d.claims.girth = Some(single_int(&sx)? as u32),
            "spread" => match sx.as_slice() {
                [a, b] => d.claims.spread = Some((int(&ctx, a)? as u32, int(&ctx, b)? as u64)),
                _ => return Err(ctx.err("`spread` takes a depth and a value")),
            },
            "nonadjacent" => d.claims.nonadjacent_sq_dist = Some(single_int(&sx)?),
            "notes" => {
                if !d.claims.notes.is_empty() {
                    d.claims.notes.push(' ');
                }
                d.claims.notes.push_str(&words(&sx));
            }
            other => return Err(ctx.err(format!("unknown key `{other}`"))),
        }
    }

    let top = Ctx { file, line: 0 };
    let id = d.id.ok_or_else(|| top.err("missing `id`"))?;
    let lattice = d.lattice.ok_or_else(|| top.err("missing `lattice`"))?;
    let wrap = |e: Error| top.err(format!("{id}: {e}"));

    let vertices = match d.vertex_mode.as_deref() {
        Some("rule") => VertexSet::Rule(d.vertex_rule.unwrap()),
        Some("motif") => VertexSet::Motif(MotifSpec::new(d.offsets, &d.basis, d.anchor_rule).map_err(wrap)?),
        Some("all") => VertexSet::AllLatticePoints,
        _ => return Err(top.err("missing `vertices`")),
    };
    let translations = if d.translations.is_empty() { None } else { Some(d.translations.clone()) };
    let reps = if d.reps.is_empty() { None } else { Some(d.reps) };
    let edges = match d.edge_mode.as_deref() {
        Some("induced") => EdgeSet::Induced,
        Some("explicit") => EdgeSet::Explicit(EdgeRule { entries: d.edge_entries }),
        Some("orbit") => {
            let orbit = OrbitSpec { generators: d.generators, seed_edges: d.seeds, window_radius: 4 };
            let table = build_orbit_edges(&orbit, lattice).map_err(wrap)?;
            EdgeSet::Orbit { spec: orbit, table }
        }
        Some("induced-by-points") => {
            let steps = neighbor_vectors(lattice);
            let mut seeds = Vec::new();
            for (i, a) in d.points.iter().enumerate() {
                for b in &d.points[i + 1..] {
                    let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                    if steps.contains(&diff) {
                        seeds.push((Point(a.clone()), Point(b.clone())));
                    }
                }
            }
            let generators = d.translations.iter().map(|t| Isometry::translation_by(t.clone())).collect();
            let orbit = OrbitSpec { generators, seed_edges: seeds, window_radius: 4 };
            let table = build_orbit_edges(&orbit, lattice).map_err(wrap)?;
            EdgeSet::Orbit { spec: orbit, table }
        }
        _ => return Err(top.err("missing `edges`")),
    };
    let mut spec = PeriodicGraphSpec::new(id.clone(), lattice, vertices, edges, translations, reps, d.claims.degree)
        .map_err(wrap)?;
    if let Some(note) = d.coverage {
        spec = spec.with_coverage(Coverage::Argued(note));
    }
    Ok(ConstructionFile { id, spec, claims: d.claims })
}

#[cfg(test)]
mod tests {
    use super::*;

    const G1: &str = "
        # worked example
        id G1
        lattice Z3
        vertices rule (or (mod [2 0 -1] 4 (0))
                          (mod [0 2 -1 | 1] 4 (0)))
        edges induced
        translation (4 0 0)
        translation (0 4 0)
        translation (1 1 2)
        degree 3
        girth 10
        notes first of the four classes
    ";

    #[test]
    fn parses_worked_example() {
        let c = parse_construction("g1.grid", G1).unwrap();
        assert_eq!(c.id, "G1");
        assert_eq!(c.claims.degree, Some(3));
        assert_eq!(c.claims.girth, Some(10));
        assert_eq!(c.claims.notes, "first of the four classes");
        let s = &c.spec;
        // 2x ≡ z (mod 4) or 2y ≡ z - 1 (mod 4)
        assert!(s.is_vertex(&Point::new(vec![0, 0, 0])).unwrap());
        assert!(s.is_vertex(&Point::new(vec![0, 0, 1])).unwrap());
        assert!(!s.is_vertex(&Point::new(vec![1, 0, 0])).unwrap());
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "id X\nlattice Z3\nvertices rule (mod [1 2] 4 (0))\n";
        match parse_construction("bad.grid", bad) {
            Err(Error::Parse { file, line, .. }) => {
                assert_eq!(file, "bad.grid");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let floaty = "id X\nlattice Z3\ndegree 3.5\n";
        assert!(parse_construction("f.grid", floaty).is_err());
        let unbalanced = "id X\nlattice Z3\nvertices rule (mod [1 2 3] 4 (0)\n";
        assert!(parse_construction("u.grid", unbalanced).is_err());
        assert!(parse_construction("k.grid", "id X\nlattice Z3\nfoo 1\n").is_err());
    }
}
