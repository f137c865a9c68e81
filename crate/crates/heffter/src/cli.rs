//! The `heffter` command line: construct, verify, tour, embed, sweep and
//! bound, with seeded and byte-reproducible output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::arrays::{grid_csv, ArrayDoc, Cell, Params};
use crate::constructors::{construct, regime_table, splitmix64, BuildError, BuildRequest};
use crate::groups::{build_group, subgroup_of_order, GroupSpec};
use crate::skeletons::{tile_catalog, Family};
use crate::tiles::{expected_zero_bound, tile_bound, BoundReport};
use crate::topology::{
    build_biembedding, compatible_orderings, embedding_report, knight_sequence, solve_knight_with_limit,
    CompatiblePair, TopologyError, KNIGHT_LIMIT,
};
use crate::verify_array;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_OPEN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "heffter", version, about = "Non-zero sum Heffter arrays over finite groups")]
pub struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the tiling plan (when one is used) to this path.
    #[arg(long, global = true)]
    pub dump_plan: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Group: z:N, e2:R, prod:AxB, cayley:PATH or table:r;r.
    #[arg(long)]
    pub group: String,
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long)]
    pub lambda: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    /// Defaults to n (totally filled).
    #[arg(long)]
    pub h: Option<usize>,
    /// Defaults to m (totally filled).
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build an array and write it as JSON.
    Construct {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Array JSON output path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Grid CSV output path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check an array file against all three conditions.
    Verify { file: PathBuf },
    /// Search row/column orientations solving the knight's tour.
    Tour {
        file: PathBuf,
        #[arg(long, default_value_t = KNIGHT_LIMIT)]
        limit: usize,
    },
    /// Trace the biembedding induced by compatible orderings.
    Embed { file: PathBuf },
    /// Run the dispatcher over a parameter region and write CSV.
    Sweep {
        /// Group specs; repeat the flag or separate with commas.
        #[arg(long, value_delimiter = ',')]
        group: Vec<String>,
        /// Restrict to these subgroup orders (default: every divisor).
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long, default_value_t = 120)]
        max_nk: usize,
        #[arg(long)]
        square_only: bool,
        #[arg(long)]
        totally_filled: bool,
        /// Also emit tuples with nk != mh (recorded as infeasible).
        #[arg(long)]
        all_shapes: bool,
        /// Add a wall-time column (breaks byte-reproducibility).
        #[arg(long)]
        timing: bool,
        /// Write each built array here as JSON.
        #[arg(long)]
        arrays_dir: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the dispatch table as JSON and exit.
        #[arg(long)]
        regimes: bool,
    },
    /// Print the expected-failure bound for an array or a tile.
    Bound {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    let res = match &cli.command {
        Command::Construct { shape, out: path, csv } => cmd_construct(&cli, shape, path.as_deref(), csv.as_deref(), out),
        Command::Verify { file } => cmd_verify(&cli, file, out),
        Command::Tour { file, limit } => cmd_tour(&cli, file, *limit, out),
        Command::Embed { file } => cmd_embed(&cli, file, out),
        Command::Sweep { .. } => cmd_sweep(&cli, out),
        Command::Bound { .. } => cmd_bound(&cli, out),
    };
    match res {
        Ok(code) => code,
        Err(CliError(code, msg)) => {
            let _ = writeln!(out, "error: {msg}");
            code
        }
    }
}

struct CliError(i32, String);

type CliResult = Result<i32, CliError>;

fn usage(msg: impl ToString) -> CliError {
    CliError(EXIT_USAGE, msg.to_string())
}

fn io_err(e: std::io::Error) -> CliError {
    CliError(EXIT_FAIL, e.to_string())
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    writeln!(out, "{text}").map_err(io_err)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_err)
}

#[derive(Serialize)]
struct ConstructOutput<'a> {
    status: &'static str,
    construction: Option<String>,
    reason: Option<String>,
    seed: u64,
    array: Option<&'a ArrayDoc>,
}

fn cmd_construct(
    cli: &Cli,
    s: &ShapeArgs,
    out_path: Option<&Path>,
    csv: Option<&Path>,
    out: &mut dyn Write,
) -> CliResult {
    let spec = GroupSpec::parse(&s.group).map_err(usage)?;
    let g = Arc::new(build_group(&spec).map_err(usage)?);
    let j = subgroup_of_order(&g, s.t).map_err(usage)?;
    let p = Params {
        m: s.m,
        n: s.n,
        h: s.h.unwrap_or(s.n),
        k: s.k.unwrap_or(s.m),
        lambda: s.lambda,
        t: s.t,
        v: g.order(),
    };
    let req = BuildRequest::new(g, j.clone(), p, cli.seed);
    let (code, status, reason) = match construct(&req) {
        Ok(r) => {
            let doc = ArrayDoc::from_array(&r.array, &j, &p);
            if let Some(path) = out_path {
                write_file(path, &doc.to_json())?;
            }
            if let Some(path) = csv {
                write_file(path, &grid_csv(&r.array))?;
            }
            if let (Some(path), Some(plan)) = (&cli.dump_plan, &r.plan) {
                write_file(path, &serde_json::to_string_pretty(plan).expect("plan serializes"))?;
            }
            if cli.json {
                let o = ConstructOutput {
                    status: "built",
                    construction: Some(r.construction.to_string()),
                    reason: None,
                    seed: cli.seed,
                    array: Some(&doc),
                };
                emit(out, &o)?;
            } else {
                writeln!(out, "built via {}", r.construction).map_err(io_err)?;
                write!(out, "{}", render_grid(&r.array)).map_err(io_err)?;
            }
            return Ok(EXIT_OK);
        }
        Err(BuildError::Infeasible(why)) => (EXIT_INFEASIBLE, "infeasible", why),
        Err(BuildError::Open(why)) => (EXIT_OPEN, "open", why),
        Err(e) => (EXIT_FAIL, "error", e.to_string()),
    };
    if cli.json {
        let o = ConstructOutput { status, construction: None, reason: Some(reason), seed: cli.seed, array: None };
        emit(out, &o)?;
    } else {
        writeln!(out, "{status}: {reason}").map_err(io_err)?;
    }
    Ok(code)
}

fn render_grid(a: &crate::PFArray) -> String {
    let width = a.entries().map(|(_, x)| x.to_string().len()).max().unwrap_or(1);
    let mut s = String::new();
    for i in 1..=a.rows() {
        let row: Vec<String> = (1..=a.cols())
            .map(|j| match a.get(Cell::new(i, j)) {
                Some(x) => format!("{x:>width$}"),
                None => format!("{:>width$}", "."),
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

fn load(file: &Path) -> Result<(crate::PFArray, crate::Subgroup, Params), CliError> {
    let text = fs::read_to_string(file).map_err(|e| CliError(EXIT_PARSE, e.to_string()))?;
    let doc = ArrayDoc::from_json(&text).map_err(|e| CliError(EXIT_PARSE, e.to_string()))?;
    doc.load().map_err(|e| CliError(EXIT_PARSE, e.to_string()))
}

fn cmd_verify(cli: &Cli, file: &Path, out: &mut dyn Write) -> CliResult {
    let (a, j, p) = load(file)?;
    let report = verify_array(&a, &j, &p);
    if cli.json {
        emit(out, &report)?;
    } else if report.passed() {
        writeln!(out, "pass").map_err(io_err)?;
    } else {
        for f in &report.failures {
            writeln!(out, "{f}").map_err(io_err)?;
        }
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct TourOutput {
    found: bool,
    rows: Option<Vec<i8>>,
    cols: Option<Vec<i8>>,
    cycle_length: usize,
    filled: usize,
}

fn cmd_tour(cli: &Cli, file: &Path, limit: usize, out: &mut dyn Write) -> CliResult {
    let (a, _, _) = load(file)?;
    let filled = a.filled_count();
    let found = match solve_knight_with_limit(&a, limit) {
        Ok(f) => f,
        Err(e) => {
            writeln!(out, "{e}").map_err(io_err)?;
            return Ok(EXIT_OPEN);
        }
    };
    let cycle_length = match &found {
        Some(o) => knight_sequence(&a, o, a.skeleton()[0]).cells.len(),
        None => 0,
    };
    let o = TourOutput {
        found: found.is_some(),
        rows: found.as_ref().map(|o| o.rows.clone()),
        cols: found.as_ref().map(|o| o.cols.clone()),
        cycle_length,
        filled,
    };
    if cli.json {
        emit(out, &o)?;
    } else if let (Some(r), Some(c)) = (&o.rows, &o.cols) {
        writeln!(out, "rows {r:?}\ncols {c:?}\ncycle {cycle_length} of {filled}").map_err(io_err)?;
    } else {
        writeln!(out, "none").map_err(io_err)?;
    }
    Ok(if o.found { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_embed(cli: &Cli, file: &Path, out: &mut dyn Write) -> CliResult {
    let (a, j, p) = load(file)?;
    if !verify_array(&a, &j, &p).passed() {
        return Err(CliError(EXIT_FAIL, "array does not verify".into()));
    }
    let pair: CompatiblePair = match compatible_orderings(&a, cli.seed) {
        Ok(pair) => pair,
        Err(e) => {
            writeln!(out, "{e}").map_err(io_err)?;
            return Ok(EXIT_OPEN);
        }
    };
    match build_biembedding(&a, &j, p.lambda, &pair) {
        Ok(e) => {
            let rep = embedding_report(&a, &e);
            if cli.json {
                emit(out, &rep)?;
            } else {
                writeln!(
                    out,
                    "V={} E={} F={} genus={} parts={}x{}\nrow faces {:?}\ncol faces {:?}",
                    rep.vertices,
                    rep.edges,
                    rep.faces,
                    rep.genus,
                    rep.parts,
                    rep.part_size,
                    rep.row_face_lengths,
                    rep.col_face_lengths
                )
                .map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Err(TopologyError::InvariantViolation(s)) => Err(CliError(EXIT_FAIL, s)),
        Err(e) => Err(CliError(EXIT_OPEN, e.to_string())),
    }
}

/// One parameter tuple of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepTuple {
    pub group: String,
    pub v: usize,
    pub t: usize,
    pub lambda: usize,
    pub m: usize,
    pub n: usize,
    pub h: usize,
    pub k: usize,
}

impl SweepTuple {
    /// Per-tuple seed folded from the master seed and every field.
    pub fn seed(&self, master: u64) -> u64 {
        let mut s = splitmix64(master);
        for b in self.group.bytes() {
            s = splitmix64(s ^ u64::from(b));
        }
        for x in [self.v, self.t, self.lambda, self.m, self.n, self.h, self.k] {
            s = splitmix64(s ^ x as u64);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    #[serde(flatten)]
    pub tuple: SweepTuple,
    pub outcome: String,
    pub construction: String,
    pub verify: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

/// Every `(m, n, h, k, λ)` over `v` and `t` with `h ≤ n`, `k ≤ m`,
/// `nk, mh ≤ max_nk` and `λ = 2nk/(v−t)` integral.
pub fn sweep_tuples(
    group: &str,
    v: usize,
    t: usize,
    max_nk: usize,
    square_only: bool,
    totally_filled: bool,
    all_shapes: bool,
) -> Vec<SweepTuple> {
    let mut out = Vec::new();
    if t >= v {
        return out;
    }
    for m in 1..=max_nk {
        for n in 1..=max_nk {
            if square_only && m != n {
                continue;
            }
            for k in 1..=m {
                if n * k > max_nk {
                    break;
                }
                for h in 1..=n {
                    if m * h > max_nk {
                        break;
                    }
                    if (n * k != m * h && !all_shapes) || (totally_filled && (h != n || k != m)) {
                        continue;
                    }
                    if (2 * n * k) % (v - t) != 0 {
                        continue;
                    }
                    let lambda = 2 * n * k / (v - t);
                    out.push(SweepTuple { group: group.to_string(), v, t, lambda, m, n, h, k });
                }
            }
        }
    }
    out
}

pub fn sweep_one(tuple: &SweepTuple, master: u64, timing: bool) -> (SweepRow, Option<ArrayDoc>) {
    let start = Instant::now();
    let spec = GroupSpec::parse(&tuple.group).expect("sweep groups are pre-validated");
    let g = Arc::new(build_group(&spec).expect("sweep groups are pre-validated"));
    let j = subgroup_of_order(&g, tuple.t).expect("sweep subgroups are pre-validated");
    let p = Params {
        m: tuple.m,
        n: tuple.n,
        h: tuple.h,
        k: tuple.k,
        lambda: tuple.lambda,
        t: tuple.t,
        v: tuple.v,
    };
    let req = BuildRequest::new(g, j.clone(), p, tuple.seed(master));
    let (outcome, construction, verify, doc) = match construct(&req) {
        Ok(r) => ("built", r.construction.to_string(), r.report.passed(), Some(ArrayDoc::from_array(&r.array, &j, &p))),
        Err(BuildError::Infeasible(_)) => ("infeasible", String::new(), false, None),
        Err(BuildError::Open(_)) => ("open", String::new(), false, None),
        Err(e) => ("error", e.to_string(), false, None),
    };
    let row = SweepRow {
        tuple: tuple.clone(),
        outcome: outcome.to_string(),
        construction,
        verify,
        wall_ms: timing.then(|| start.elapsed().as_millis()),
    };
    (row, doc)
}

/// Runs every tuple in parallel and returns rows in input order.
pub fn run_sweep(tuples: &[SweepTuple], master: u64, timing: bool) -> Vec<(SweepRow, Option<ArrayDoc>)> {
    tuples.par_iter().map(|t| sweep_one(t, master, timing)).collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let timing = rows.iter().any(|r| r.wall_ms.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["group", "v", "t", "lambda", "m", "n", "h", "k", "outcome", "construction", "verify"];
    if timing {
        header.push("wall_ms");
    }
    w.write_record(&header).expect("in-memory writer");
    for r in rows {
        let t = &r.tuple;
        let mut rec = vec![t.group.clone()];
        rec.extend([t.v, t.t, t.lambda, t.m, t.n, t.h, t.k].map(|x| x.to_string()));
        rec.extend([r.outcome.clone(), r.construction.clone(), r.verify.to_string()]);
        if timing {
            rec.push(r.wall_ms.unwrap_or(0).to_string());
        }
        w.write_record(&rec).expect("in-memory writer");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

fn cmd_sweep(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let Command::Sweep {
        group,
        t,
        max_nk,
        square_only,
        totally_filled,
        all_shapes,
        timing,
        arrays_dir,
        out: out_path,
        regimes,
    } = &cli.command
    else {
        unreachable!()
    };
    if *regimes {
        emit(out, &regime_table())?;
        return Ok(EXIT_OK);
    }
    if group.is_empty() {
        return Err(usage("sweep needs at least one --group"));
    }
    let mut tuples = Vec::new();
    for spec_text in group {
        let spec = GroupSpec::parse(spec_text).map_err(usage)?;
        let g = build_group(&spec).map_err(usage)?;
        let v = g.order();
        let ts: Vec<usize> = if t.is_empty() { (1..v).filter(|d| v % d == 0).collect() } else { t.clone() };
        for &tt in &ts {
            if subgroup_of_order(&g, tt).is_err() {
                continue;
            }
            tuples.extend(sweep_tuples(spec_text, v, tt, *max_nk, *square_only, *totally_filled, *all_shapes));
        }
    }
    let results = run_sweep(&tuples, cli.seed, *timing);
    if let Some(dir) = arrays_dir {
        fs::create_dir_all(dir).map_err(io_err)?;
        for (i, (_, doc)) in results.iter().enumerate() {
            if let Some(doc) = doc {
                write_file(&dir.join(format!("{i:06}.json")), &doc.to_json())?;
            }
        }
    }
    let rows: Vec<SweepRow> = results.into_iter().map(|(r, _)| r).collect();
    let text = sweep_csv(&rows);
    match out_path {
        Some(p) => write_file(p, &text)?,
        None => write!(out, "{text}").map_err(io_err)?,
    }
    let bad = rows.iter().any(|r| r.outcome == "error" || (r.outcome == "built" && !r.verify));
    Ok(if bad { EXIT_FAIL } else { EXIT_OK })
}

pub fn parse_family(s: &str) -> Option<Family> {
    Family::CERTIFIED.into_iter().chain([Family::FullQ]).find(|f| f.to_string() == s)
}

fn cmd_bound(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let Command::Bound { family, b, m, n, h, k, lambda } = &cli.command else { unreachable!() };
    let report: BoundReport = match family {
        Some(name) => {
            let fam = parse_family(name).ok_or_else(|| usage(format!("unknown family {name}")))?;
            let b = b.ok_or_else(|| usage("--b is required with --family"))?;
            let big = 4 * b + 8;
            let tile = tile_catalog(fam, b, Cell::new(1, 1), m.unwrap_or(big), n.unwrap_or(big))
                .map_err(usage)?;
            tile_bound(&tile)
        }
        None => {
            let need = |x: &Option<usize>, name: &str| x.ok_or_else(|| usage(format!("--{name} is required")));
            let (m, n) = (need(m, "m")?, need(n, "n")?);
            expected_zero_bound(m, n, h.unwrap_or(n), k.unwrap_or(m), *lambda)
        }
    };
    if cli.json {
        emit(out, &report)?;
    } else {
        writeln!(
            out,
            "rows {} + cols {} = {} ({})",
            report.ex_rows,
            report.ex_cols,
            report.total,
            if report.feasible { "< 1" } else { ">= 1" }
        )
        .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}
