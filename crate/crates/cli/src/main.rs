//! `gridgirth`: verify constructions, rerun the hypercube searches, compute
//! girth bounds and export finite windows.
//!
//! Reports are JSON lines on stdout. Exit codes: 0 when every check passes,
//! 1 on a claim mismatch (or a non-empty elimination fixpoint), 2 on usage
//! errors, 3 on engine errors such as an exhausted search budget.
//! `GRIDGIRTH_THREADS` sets the worker count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gridgirth::bounds::exact_girth_bound;
use gridgirth::gallery::{find_construction, list_constructions, ConstructionEntry};
use gridgirth::hypercube::certificate::{elimination_certificate, enumeration_certificate, rounds_of};
use gridgirth::hypercube::{
    build_candidate_set_s, eliminate_iteration, enumerate_constrained, longest_induced_cycle, subgraph_stats,
    Constraints, CubeSubgraph, DEFAULT_NODE_BUDGET,
};
use gridgirth::metrics::{spread, DEFAULT_GIRTH_CAP};
use gridgirth::report::{all_pass, verify_entry, CheckRecord, ErrorRecord, Status, VerifyOptions};
use gridgirth::{Error, Point};

#[derive(Parser)]
#[command(name = "gridgirth", version, about = "High-girth regular subgraphs of lattice grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every registered construction with its claims.
    List,
    /// Check a construction's degree, girth and spread against its claims.
    Verify(VerifyArgs),
    /// Spread profile over all representatives.
    Spread {
        id: String,
        #[arg(long)]
        depth: u32,
    },
    /// Girth bounds for k-regular subgraphs of the n-dimensional grid.
    Bound {
        n: u32,
        k: u32,
        #[arg(long, default_value_t = 40)]
        rmax: u32,
    },
    /// Exhaustive search over induced subgraphs of the unit m-cube.
    Hypercube(HypercubeArgs),
    /// Eliminate candidate unit 5-cube intersections to a fixpoint.
    Eliminate {
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a finite window of a construction.
    Export(ExportArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Construction id; omit with --all.
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    id: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = DEFAULT_GIRTH_CAP)]
    girth_cap: u32,
    #[arg(long)]
    spread_depth: Option<u32>,
    /// Print a claims-vs-computed table instead of JSON lines.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["min_girth", "longest_cycle"]))]
struct HypercubeArgs {
    m: u32,
    #[arg(long, requires = "min_girth")]
    degree: Option<u32>,
    #[arg(long)]
    min_girth: Option<u32>,
    /// Minimum edge/vertex ratio `p/q`.
    #[arg(long, requires = "min_girth", value_parser = parse_ratio)]
    ratio: Option<(u32, u32)>,
    #[arg(long)]
    longest_cycle: bool,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Off,
    Csv,
}

#[derive(Args)]
struct ExportArgs {
    id: String,
    #[arg(long)]
    radius: i64,
    #[arg(long, value_enum)]
    format: Format,
    /// OFF only: add `shear · x4` to the first three coordinates before
    /// dropping `x4`.
    #[arg(long, default_value_t = 0)]
    shear: i64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_ratio(s: &str) -> Result<(u32, u32), String> {
    let (p, q) = s.split_once('/').ok_or("expected p/q")?;
    let p: u32 = p.trim().parse().map_err(|_| "bad numerator")?;
    let q: u32 = q.trim().parse().map_err(|_| "bad denominator")?;
    if q == 0 {
        return Err("zero denominator".into());
    }
    Ok((p, q))
}

/// Outcome of a subcommand: what to print and whether all checks passed.
struct Outcome {
    stdout: String,
    ok: bool,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, ok: true }
    }
}

fn line(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn write_or(out: &Option<PathBuf>, text: &str, summary: serde_json::Value) -> anyhow::Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(line(&summary))
        }
        None => Ok(text.to_string()),
    }
}

fn list() -> String {
    list_constructions()
        .iter()
        .map(|e| {
            line(&json!({
                "id": e.id,
                "lattice": e.spec.lattice.name(),
                "degree": e.claimed.degree,
                "girth": e.claimed.girth,
                "spread": e.claimed.spread,
                "nonadjacent_sq_dist": e.claimed.nonadjacent_sq_dist,
                "representatives": e.spec.representatives.len(),
                "params": e.params,
                "notes": e.claimed.notes,
            }))
        })
        .collect()
}

fn table(records: &[CheckRecord]) -> String {
    let mut s = format!("{:<24} {:<20} {:>10} {:>10}  {}\n", "construction", "check", "claimed", "computed", "status");
    for r in records {
        let show = |v: &serde_json::Value| match v {
            serde_json::Value::Null => "-".to_string(),
            serde_json::Value::String(x) => x.clone(),
            x => x.to_string(),
        };
        let status = match r.status {
            Status::Pass => "ok",
            Status::Fail => "MISMATCH",
            Status::Info => "info",
        };
        writeln!(s, "{:<24} {:<20} {:>10} {:>10}  {status}", r.construction, r.check, show(&r.claimed), show(&r.computed))
            .unwrap();
        if let (Status::Fail, Some(d)) = (r.status, &r.detail) {
            writeln!(s, "    {d}").unwrap();
        }
    }
    s
}

fn verify(a: &VerifyArgs) -> anyhow::Result<Outcome> {
    let entries: Vec<&ConstructionEntry> = match &a.id {
        Some(id) => vec![find_construction(id)?],
        None => list_constructions().iter().collect(),
    };
    let opts = VerifyOptions { girth_cap: a.girth_cap, spread_depth: a.spread_depth, ..VerifyOptions::default() };
    let mut records = Vec::new();
    for e in entries {
        records.extend(verify_entry(e, &opts)?);
    }
    let stdout = if a.table { table(&records) } else { records.iter().map(|r| r.to_json_line() + "\n").collect() };
    Ok(Outcome { stdout, ok: all_pass(&records) })
}

fn hypercube(a: &HypercubeArgs) -> anyhow::Result<Outcome> {
    if a.longest_cycle {
        let len = longest_induced_cycle(a.m, a.budget)?;
        return Ok(Outcome::ok(line(&json!({ "m": a.m, "longest_induced_cycle": len }))));
    }
    let mut c = Constraints::girth(a.min_girth.expect("required by the argument group"));
    if let Some(d) = a.degree {
        c = c.regular(d);
    }
    if let Some((p, q)) = a.ratio {
        c = c.ratio(p, q);
    }
    let e = enumerate_constrained(a.m, &c, a.budget)?;
    let classes: Vec<_> = e
        .classes
        .iter()
        .map(|k| {
            let st = subgraph_stats(CubeSubgraph::new(a.m, k.canonical_mask).expect("enumerated masks fit"));
            json!({
                "mask": format!("{:#x}", k.canonical_mask),
                "orbit": k.orbit_size,
                "vertices": st.vertices,
                "edges": st.edges,
                "girth": st.girth,
                "degree_counts": st.degree_counts,
            })
        })
        .collect();
    let summary = json!({ "m": a.m, "constraints": e.constraints, "nodes": e.nodes, "classes": classes });
    let cert = enumeration_certificate(&e);
    let text = match &a.out {
        Some(_) => write_or(&a.out, &cert, summary)?,
        None => line(&summary) + &cert,
    };
    Ok(Outcome::ok(text))
}

fn eliminate(budget: u64, out: &Option<PathBuf>) -> anyhow::Result<Outcome> {
    let s = build_candidate_set_s(budget)?;
    let initial = s.state.survivors.clone();
    let mut states = Vec::new();
    let mut cur = s.state;
    loop {
        let next = eliminate_iteration(&cur, budget)?;
        let done = next.survivors == cur.survivors;
        states.push(next.clone());
        cur = next;
        if done {
            break;
        }
    }
    let rounds = rounds_of(&initial, &states);
    let summary = json!({
        "initial_candidates": initial.len(),
        "denser_classes": s.denser_classes.len(),
        "longest_induced_cycle": s.longest_induced_cycle,
        "history": cur.history,
        "fixpoint_empty": cur.survivors.is_empty(),
    });
    let cert = elimination_certificate(&rounds);
    let text = match out {
        Some(_) => write_or(out, &cert, summary)?,
        None => line(&summary) + &cert,
    };
    Ok(Outcome { stdout: text, ok: cur.survivors.is_empty() && s.denser_classes.is_empty() })
}

fn coords(p: &Point) -> Vec<String> {
    p.coords().iter().map(|c| c.to_string()).collect()
}

fn export(a: &ExportArgs) -> anyhow::Result<Outcome> {
    let e = find_construction(&a.id)?;
    if a.radius < 0 {
        return Err(Error::InvalidParams("radius must be non-negative".into()).into());
    }
    let spec = &e.spec;
    let verts: Vec<Point> = spec.window(a.radius).into_iter().filter(|p| spec.contains_vertex(p)).collect();
    let index: BTreeMap<&Point, usize> = verts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, p) in verts.iter().enumerate() {
        for q in spec.neighbors_unchecked(p) {
            if let Some(&j) = index.get(&q) {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    let mut s = String::new();
    match a.format {
        Format::Dot => {
            writeln!(s, "graph \"{}\" {{", e.id).unwrap();
            for p in &verts {
                writeln!(s, "  \"{}\";", coords(p).join(",")).unwrap();
            }
            for &(i, j) in &edges {
                writeln!(s, "  \"{}\" -- \"{}\";", coords(&verts[i]).join(","), coords(&verts[j]).join(",")).unwrap();
            }
            s.push_str("}\n");
        }
        Format::Csv => {
            let n = spec.dim();
            let head: Vec<String> =
                ["a", "b"].iter().flat_map(|side| (1..=n).map(move |i| format!("{side}{i}"))).collect();
            writeln!(s, "{}", head.join(",")).unwrap();
            for &(i, j) in &edges {
                let mut row = coords(&verts[i]);
                row.extend(coords(&verts[j]));
                writeln!(s, "{}", row.join(",")).unwrap();
            }
        }
        Format::Off => {
            let n = spec.dim();
            if n > 4 {
                return Err(Error::InvalidParams(format!("OFF export supports up to 4 dimensions, got {n}")).into());
            }
            // Edges are written as two-vertex faces.
            writeln!(s, "OFF\n{} {} 0", verts.len(), edges.len()).unwrap();
            for p in &verts {
                let c = p.coords();
                let w = if n == 4 { c[3] } else { 0 };
                let xyz: Vec<String> =
                    (0..3).map(|i| (c.get(i).copied().unwrap_or(0) + a.shear * w).to_string()).collect();
                writeln!(s, "{}", xyz.join(" ")).unwrap();
            }
            for &(i, j) in &edges {
                writeln!(s, "2 {i} {j}").unwrap();
            }
        }
    }
    let summary = json!({ "id": e.id, "vertices": verts.len(), "edges": edges.len() });
    Ok(Outcome::ok(write_or(&a.out, &s, summary)?))
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::List => Ok(Outcome::ok(list())),
        Command::Verify(a) => verify(a),
        Command::Spread { id, depth } => {
            let e = find_construction(id)?;
            let s = spread(&e.spec, *depth)?;
            Ok(Outcome::ok(line(&json!({ "id": e.id, "profile": s }))))
        }
        Command::Bound { n, k, rmax } => Ok(Outcome::ok(line(&exact_girth_bound(*n, *k, *rmax)?))),
        Command::Hypercube(a) => hypercube(a),
        Command::Eliminate { budget, out } => eliminate(*budget, out),
        Command::Export(a) => export(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("GRIDGIRTH_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        Ok(o) => {
            let _ = stdout.write_all(o.stdout.as_bytes());
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let rec = match e.downcast_ref::<Error>() {
                Some(g) => ErrorRecord::new(g),
                None => ErrorRecord { error: "io".into(), message: e.to_string() },
            };
            let _ = writeln!(stdout, "{}", rec.to_json_line());
            let code = match e.downcast_ref::<Error>() {
                Some(Error::UnknownConstruction(_) | Error::InvalidParams(_) | Error::Parse { .. }) => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
