//! Command-line surface for lineup fans, H-representations, realizable
//! tableaux, grid sweep comparisons, facet certification, brute-force
//! validation, and inequality lifting.
//!
//! Exit codes: 0 on success, 2 when a comparison this tool ran came out
//! unequal (validation failure), 1 on any other error. All outputs are
//! deterministic and end with a single trailing newline.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lineup_forge_core::config::{
    cyclic, from_json, grid, hypercube, product_of_simplices, PointConfiguration,
};
use lineup_forge_core::engine::{
    assemble_hrep, certify_ray, enumerate, enumerate_count, enumerate_with_checkpoint,
    extract_rays, fan_to_json, hrep_to_json, EngineOptions, HRep,
};
use lineup_forge_core::hypercube::{downarrow_rows, lift_inequality, DownarrowRow};
use lineup_forge_core::oracle::{cross_validate, oracle_lineups, report_to_json};
use lineup_forge_core::rational::{format_rational, parse_bigint, parse_rational};
use lineup_forge_core::tableaux::{
    count_realizable_syt, grid_sweep_count, realizable_tableaux, total_syt,
};
use lineup_forge_core::{Error, Rational, Result};
use num_bigint::BigInt;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "lineup-forge",
    version,
    about = "Exact sweep and lineup polytope computations"
)]
struct Cli {
    /// Worker thread count; the LINEUP_FORGE_THREADS environment variable
    /// overrides this flag (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the lineup fan of a configuration over its test cone
    Lineups(LineupsArgs),
    /// Assemble the H-representation of a lineup polytope
    Hrep(HrepArgs),
    /// Count or list the realizable standard Young tableaux of a rectangle
    Syt(SytArgs),
    /// Compare grid sweep counts: closed form, subdivision engine, brute force
    Grid(GridArgs),
    /// Decide whether a test-cone ray induces a facet
    Certify(CertifyArgs),
    /// Independent brute-force verification
    Oracle(OracleArgs),
    /// Lift a downarrow inequality to a cube with more coordinates
    Lift(LiftArgs),
}

#[derive(Args)]
struct LineupsArgs {
    /// Configuration: prod-simplices:d1,d2,... | cube:N | grid:n,m |
    /// cyclic:d:a1,a2,... | file:PATH
    #[arg(long)]
    config: String,
    /// Lineup length (default: all points)
    #[arg(long)]
    r: Option<usize>,
    /// Print only the number of lineup cones
    #[arg(long)]
    count: bool,
    /// Stream one JSON object per cone instead of a single document
    #[arg(long)]
    emit: bool,
    /// Write a resumable frontier checkpoint to this path after each level
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Resume from a frontier checkpoint written by --checkpoint
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Resource guard: `300s` (wall clock) or `100000` / `100000n`
    /// (extension steps)
    #[arg(long)]
    cap: Option<String>,
}

#[derive(Args)]
struct HrepArgs {
    /// Configuration: prod-simplices:d1,d2,... | cube:N | grid:n,m |
    /// cyclic:d:a1,a2,... | file:PATH
    #[arg(long)]
    config: String,
    /// Lineup length (default: all points)
    #[arg(long)]
    r: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Single JSON document
    Json,
    /// Comma-separated rows `y_1..y_d,s_1..s_r,c`; equalities as ± row pairs
    Csv,
    /// CSV of rows rewritten against abs-sorted coordinates (cubes only)
    Downarrow,
}

#[derive(Args)]
struct SytArgs {
    /// Rectangle shape as ROWS COLS
    #[arg(long, num_args = 2, value_names = ["ROWS", "COLS"])]
    shape: Vec<usize>,
    /// Print only the number of realizable tableaux
    #[arg(long)]
    count: bool,
    /// Stream one JSON array per tableau
    #[arg(long)]
    emit: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Grid rows
    #[arg(long)]
    n: usize,
    /// Grid columns
    #[arg(long)]
    m: usize,
}

#[derive(Args)]
struct CertifyArgs {
    /// Configuration: prod-simplices:d1,d2,... | cube:N | grid:n,m |
    /// cyclic:d:a1,a2,... | file:PATH
    #[arg(long)]
    config: String,
    /// Lineup length (default: all points)
    #[arg(long)]
    r: Option<usize>,
    /// Candidate ray as comma-separated integers
    #[arg(long)]
    ray: String,
}

#[derive(Args)]
struct OracleArgs {
    #[command(subcommand)]
    action: OracleAction,
}

#[derive(Subcommand)]
enum OracleAction {
    /// Run the engine and both brute-force routes, compare, and report
    CrossValidate {
        /// Configuration: prod-simplices:d1,d2,... | cube:N | grid:n,m |
        /// cyclic:d:a1,a2,... | file:PATH
        #[arg(long)]
        config: String,
        /// Lineup length (default: all points)
        #[arg(long)]
        r: Option<usize>,
    },
}

#[derive(Args)]
struct LiftArgs {
    /// Downarrow coefficients: comma-separated integers, weakly decreasing
    #[arg(long)]
    coeffs: String,
    /// Symbolic right-hand side: comma-separated rationals, one per weight
    #[arg(long)]
    s: String,
    /// Constant term
    #[arg(long, default_value = "0")]
    constant: String,
    /// Target coordinate count
    #[arg(long)]
    m: usize,
}

/// The payload a subcommand produced, plus whether a comparison it ran
/// failed (exit code 2).
struct Outcome {
    payload: String,
    failed: bool,
}

fn ok(payload: String) -> Result<Outcome> {
    Ok(Outcome {
        payload,
        failed: false,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    setup_threads(cli.threads);
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_payload(cli.out.as_deref(), &outcome.payload) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if outcome.failed { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn setup_threads(flag: Option<usize>) {
    let threads = std::env::var("LINEUP_FORGE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(flag);
    if let Some(k) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
}

fn write_payload(out: Option<&Path>, payload: &str) -> Result<()> {
    let mut text = payload.trim_end_matches('\n').to_string();
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Lineups(a) => lineups_cmd(a),
        Command::Hrep(a) => hrep_cmd(a),
        Command::Syt(a) => syt_cmd(a),
        Command::Grid(a) => grid_cmd(a),
        Command::Certify(a) => certify_cmd(a),
        Command::Oracle(a) => match &a.action {
            OracleAction::CrossValidate { config, r } => oracle_cmd(config, *r),
        },
        Command::Lift(a) => lift_cmd(a),
    }
}

fn parse_config(spec: &str) -> Result<PointConfiguration> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("config spec {spec:?} has no ':'")))?;
    match kind {
        "prod-simplices" => {
            let sizes = parse_usize_list(rest)?;
            if sizes.is_empty() || sizes.iter().any(|&s| s < 1) {
                return Err(Error::invalid("factor sizes must be positive"));
            }
            Ok(product_of_simplices(&sizes))
        }
        "cube" => {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::invalid(format!("bad cube size {rest:?}")))?;
            if !(1..=20).contains(&n) {
                return Err(Error::invalid("cube size out of range 1..=20"));
            }
            Ok(hypercube(n))
        }
        "grid" => {
            let dims = parse_usize_list(rest)?;
            if dims.len() != 2 || dims.iter().any(|&d| d < 2) {
                return Err(Error::invalid("grid spec is grid:n,m with n, m >= 2"));
            }
            Ok(grid(dims[0], dims[1]))
        }
        "cyclic" => {
            let (d_text, params_text) = rest
                .split_once(':')
                .ok_or_else(|| Error::invalid("cyclic spec is cyclic:d:a1,a2,..."))?;
            let d: usize = d_text
                .parse()
                .map_err(|_| Error::invalid(format!("bad dimension {d_text:?}")))?;
            let params = params_text
                .split(',')
                .map(|t| parse_rational(t.trim()))
                .collect::<Result<Vec<_>>>()?;
            cyclic(&params, d)
        }
        "file" => {
            let doc = std::fs::read_to_string(rest)?;
            from_json(&doc)
        }
        other => Err(Error::invalid(format!("unknown config kind {other:?}"))),
    }
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad integer {t:?}")))
        })
        .collect()
}

fn parse_cap(text: &str) -> Result<EngineOptions> {
    let mut opts = EngineOptions::default();
    if let Some(secs) = text.strip_suffix('s') {
        let secs: u64 = secs
            .parse()
            .map_err(|_| Error::invalid(format!("bad cap {text:?}")))?;
        opts.time_cap = Some(Duration::from_secs(secs));
    } else {
        let nodes: u64 = text
            .strip_suffix('n')
            .unwrap_or(text)
            .parse()
            .map_err(|_| Error::invalid(format!("bad cap {text:?}")))?;
        opts.node_cap = Some(nodes);
    }
    Ok(opts)
}

fn resolve_r(c: &PointConfiguration, r: Option<usize>) -> usize {
    r.unwrap_or_else(|| c.n())
}

fn lineups_cmd(a: &LineupsArgs) -> Result<Outcome> {
    let c = parse_config(&a.config)?;
    let r = resolve_r(&c, a.r);
    let opts = match &a.cap {
        Some(text) => parse_cap(text)?,
        None => EngineOptions::default(),
    };
    let with_frontier = a.checkpoint.is_some() || a.resume.is_some();
    if a.count && !with_frontier {
        let n = enumerate_count(&c, r, &opts)?;
        return ok(n.to_string());
    }
    let fan = if with_frontier {
        enumerate_with_checkpoint(&c, r, &opts, a.checkpoint.as_deref(), a.resume.as_deref())?
    } else {
        enumerate(&c, r, &opts)?
    };
    if a.count {
        return ok(fan.nodes.len().to_string());
    }
    let doc = fan_to_json(&c, &fan);
    if a.emit {
        let mut lines = vec![json!({
            "config": c.name,
            "r": fan.r,
            "count": fan.nodes.len(),
        })
        .to_string()];
        for node in doc["nodes"].as_array().into_iter().flatten() {
            lines.push(node.to_string());
        }
        return ok(lines.join("\n"));
    }
    ok(doc.to_string())
}

fn hrep_cmd(a: &HrepArgs) -> Result<Outcome> {
    let c = parse_config(&a.config)?;
    let r = resolve_r(&c, a.r);
    let fan = enumerate(&c, r, &EngineOptions::default())?;
    let rays = extract_rays(&c, &fan);
    let mut certified = Vec::new();
    for y in rays {
        if certify_ray(&y, &c, r)? {
            certified.push(y);
        }
    }
    let h = assemble_hrep(&c, r, &certified);
    match a.format {
        Format::Json => ok(hrep_to_json(&h).to_string()),
        Format::Csv => ok(hrep_csv(&h)),
        Format::Downarrow => {
            let rows = downarrow_rows(&h)?;
            ok(downarrow_csv(&rows, c.dim, r))
        }
    }
}

fn csv_header(d: usize, r: usize) -> String {
    let mut cols: Vec<String> = (1..=d).map(|i| format!("y_{i}")).collect();
    cols.extend((1..=r).map(|k| format!("s_{k}")));
    cols.push("c".to_string());
    cols.join(",")
}

fn csv_row(normal: &[BigInt], s: &[Rational], constant: &Rational) -> String {
    let mut cells: Vec<String> = normal.iter().map(|x| x.to_string()).collect();
    cells.extend(s.iter().map(format_rational));
    cells.push(format_rational(constant));
    cells.join(",")
}

fn hrep_csv(h: &HRep) -> String {
    let mut lines = vec![csv_header(h.ambient, h.r)];
    for row in &h.inequalities {
        lines.push(csv_row(&row.normal, &row.s, &row.constant));
    }
    for eq in &h.equalities {
        lines.push(csv_row(&eq.normal, &eq.s, &eq.constant));
        let neg_normal: Vec<BigInt> = eq.normal.iter().map(|x| -x).collect();
        let neg_s: Vec<Rational> = eq.s.iter().map(|x| -x).collect();
        lines.push(csv_row(&neg_normal, &neg_s, &-eq.constant.clone()));
    }
    lines.join("\n")
}

fn downarrow_csv(rows: &[DownarrowRow], d: usize, r: usize) -> String {
    let mut lines = vec![csv_header(d, r)];
    for row in rows {
        lines.push(csv_row(&row.coeffs, &row.s, &row.constant));
    }
    lines.join("\n")
}

fn syt_cmd(a: &SytArgs) -> Result<Outcome> {
    if a.shape.len() != 2 {
        return Err(Error::invalid("--shape needs ROWS COLS"));
    }
    let (rows, cols) = (a.shape[0], a.shape[1]);
    let opts = EngineOptions::default();
    if a.count {
        return ok(count_realizable_syt(rows, cols, &opts)?.to_string());
    }
    let tableaux = realizable_tableaux(rows, cols, &opts)?;
    if a.emit {
        let lines: Vec<String> = tableaux
            .iter()
            .map(|t| json!(t.cells).to_string())
            .collect();
        return ok(lines.join("\n"));
    }
    ok(json!({
        "shape": [rows, cols],
        "standard": total_syt(rows, cols).to_string(),
        "realizable": tableaux.len(),
        "tableaux": tableaux.iter().map(|t| json!(t.cells)).collect::<Vec<_>>(),
    })
    .to_string())
}

fn grid_cmd(a: &GridArgs) -> Result<Outcome> {
    if a.n < 2 || a.m < 2 {
        return Err(Error::invalid("grid comparison needs n, m >= 2"));
    }
    let c = grid(a.n, a.m);
    let formula = grid_sweep_count(a.n, a.m);
    let engine = enumerate_count(&c, c.n(), &EngineOptions::default())?;
    let oracle = oracle_lineups(&c, c.n())?.len() as u64;
    let agree = formula == engine && engine == oracle;
    let doc = json!({
        "n": a.n,
        "m": a.m,
        "formula": formula,
        "engine": engine,
        "oracle": oracle,
        "agree": agree,
    });
    Ok(Outcome {
        payload: doc.to_string(),
        failed: !agree,
    })
}

fn certify_cmd(a: &CertifyArgs) -> Result<Outcome> {
    let c = parse_config(&a.config)?;
    let r = resolve_r(&c, a.r);
    let ray = a
        .ray
        .split(',')
        .map(|t| parse_bigint(t.trim()))
        .collect::<Result<Vec<_>>>()?;
    if ray.len() != c.dim {
        return Err(Error::invalid(format!(
            "ray has {} coordinates, configuration lives in dimension {}",
            ray.len(),
            c.dim
        )));
    }
    let facet = certify_ray(&ray, &c, r)?;
    ok(json!({
        "config": c.name,
        "r": r,
        "ray": ray.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "facet": facet,
    })
    .to_string())
}

fn oracle_cmd(config: &str, r: Option<usize>) -> Result<Outcome> {
    let c = parse_config(config)?;
    let r = resolve_r(&c, r);
    let report = cross_validate(&c, r)?;
    Ok(Outcome {
        failed: !report.pass,
        payload: report_to_json(&report).to_string(),
    })
}

fn lift_cmd(a: &LiftArgs) -> Result<Outcome> {
    let coeffs = a
        .coeffs
        .split(',')
        .map(|t| parse_bigint(t.trim()))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::invalid("coefficients must be weakly decreasing"));
    }
    let s = a
        .s
        .split(',')
        .map(|t| parse_rational(t.trim()))
        .collect::<Result<Vec<_>>>()?;
    let constant = parse_rational(a.constant.trim())?;
    let row = DownarrowRow {
        r: s.len(),
        coeffs,
        s,
        constant,
    };
    let lifted = lift_inequality(&row, a.m)?;
    ok(json!({
        "coeffs": lifted.coeffs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "s": lifted.s.iter().map(format_rational).collect::<Vec<_>>(),
        "c": format_rational(&lifted.constant),
        "r": lifted.r,
    })
    .to_string())
}
