//! `secant`: catalog inspection, single computations and seeded campaigns.
//!
//! Exit codes: 0 success, 1 a mathematical FAIL record, 2 usage or parse
//! error, 3 resource cap, 4 data error (unknown curve, invalid curve,
//! missing catalog assertion, engine error inside a trial).

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use secant_core::conjecture::{run_campaign_with_jobs, ConjectureError, ExperimentConfig, ExperimentReport};
use secant_core::curve::catalog::{Catalog, CatalogError};
use secant_core::curve::divisor::DivisorSpecError;
use secant_core::curve::riemann_roch::{h1, rr_space};
use secant_core::curve::very_ample::{base_locus_degree, very_ample_probe_with, ProbeOptions};
use secant_core::curve::{rational_points, CurveError, Divisor, PlaneCurve};
use secant_core::koszul::np::property_np_with;
use secant_core::koszul::{BettiTable, KoszulError, Limits, DEFAULT_MAX_ENTRIES};

const SHIPPED_CATALOG_NAME: &str = "built-in catalog (crates/core/catalog/curves.toml)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "secant", version, about = "Koszul cohomology of line bundles on smooth plane curves over finite fields")]
struct Cli {
    /// Catalog curve name.
    #[arg(long, global = true, default_value = "fermat-quartic-101")]
    curve: String,
    /// Master seed [default: 0; for `check`, the config's seed].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for campaigns (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap on entries of a single Koszul matrix.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ENTRIES)]
    cap_entries: u64,
    /// Catalog file replacing the built-in one.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalog curves (or describe `--curve` with `--show`).
    Catalog {
        #[arg(long)]
        show: bool,
    },
    /// Rational points of the curve over GF(q^k).
    Points {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        extension: u32,
    },
    /// Riemann-Roch space of a divisor, e.g. `--D "2*H - P(1,0,3)"`.
    Rr {
        #[arg(long = "D")]
        d: String,
    },
    /// Table of dim K_{p,q}(C; B, L).
    Betti {
        #[arg(long = "L")]
        l: String,
        #[arg(long = "B", default_value = "0")]
        b: String,
        #[arg(long, default_value_t = 2)]
        pmax: usize,
        #[arg(long, default_value_t = 1)]
        qmin: i64,
        #[arg(long, default_value_t = 2)]
        qmax: i64,
    },
    /// Property (N_p) for a nonspecial L.
    Np {
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        p: i64,
    },
    /// k-very-ampleness probe.
    Probe {
        #[arg(long = "L")]
        l: String,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Clifford regime context c (deg L = 2g + k - c).
        #[arg(long)]
        clifford: Option<u32>,
        /// Field degrees to sample xi over (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "1")]
        extensions: Vec<u32>,
    },
    /// Run a campaign from a TOML config; exit 1 on any FAIL record.
    Check { config: PathBuf },
    /// Recompute the summary of a saved JSON report.
    Summarize { report: PathBuf },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure { code, msg: msg.into() }
    }
}

fn catalog_failure(e: CatalogError, source: &str) -> Failure {
    match e {
        CatalogError::Parse(_) | CatalogError::Serialize(_) | CatalogError::Duplicate(_) => {
            Failure::new(4, format!("{source}: {e}"))
        }
        _ => Failure::new(4, format!("{e} [catalog: {source}]")),
    }
}

fn curve_failure(e: CurveError) -> Failure {
    Failure::new(4, e.to_string())
}

fn koszul_failure(e: KoszulError) -> Failure {
    match e {
        KoszulError::SizeCapExceeded { .. } => Failure::new(3, e.to_string()),
        _ => Failure::new(4, e.to_string()),
    }
}

fn spec_failure(e: DivisorSpecError) -> Failure {
    match e {
        DivisorSpecError::Curve(c) => curve_failure(c),
        e => Failure::new(2, e.to_string()),
    }
}

struct Env {
    cli: Cli,
    catalog: Catalog,
    catalog_source: String,
}

impl Env {
    fn load(cli: Cli) -> Result<Env, Failure> {
        let (catalog, catalog_source) = match &cli.catalog {
            Some(path) => {
                let source = path.display().to_string();
                let text = fs::read_to_string(path).map_err(|e| Failure::new(4, format!("{source}: {e}")))?;
                (Catalog::from_toml(&text).map_err(|e| catalog_failure(e, &source))?, source)
            }
            None => (Catalog::shipped(), SHIPPED_CATALOG_NAME.to_string()),
        };
        Ok(Env { cli, catalog, catalog_source })
    }

    fn curve(&self) -> Result<PlaneCurve, Failure> {
        self.catalog.curve(&self.cli.curve).map_err(|e| catalog_failure(e, &self.catalog_source))
    }

    fn seed(&self) -> u64 {
        self.cli.seed.unwrap_or(0)
    }

    fn limits(&self) -> Limits {
        Limits { max_entries: self.cli.cap_entries, ..Limits::default() }
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.cli.out {
            Some(path) => fs::write(path, text).map_err(|e| Failure::new(4, format!("{}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                let tail = if text.ends_with('\n') { "" } else { "\n" };
                match write!(out, "{text}{tail}").and_then(|_| out.flush()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::new(4, e.to_string())),
                    _ => Ok(()),
                }
            }
        }
    }

    fn emit_json(&self, v: &serde_json::Value) -> Result<(), Failure> {
        self.emit(&serde_json::to_string_pretty(v).expect("json"))
    }
}

fn parse_divisor(curve: &PlaneCurve, text: &str) -> Result<Divisor, Failure> {
    Divisor::parse(curve, text).map_err(spec_failure)
}

fn cmd_catalog(env: &Env, show: bool) -> Result<(), Failure> {
    if show {
        let entry = env.catalog.get(&env.cli.curve).map_err(|e| catalog_failure(e, &env.catalog_source))?;
        let curve = entry.build().map_err(|e| catalog_failure(e, &env.catalog_source))?;
        let v = json!({
            "entry": entry,
            "equation": curve.form().display(),
            "points_over_base_field": curve.points(usize::MAX).len(),
        });
        return match env.cli.format {
            Format::Json => env.emit_json(&v),
            _ => env.emit(&format!(
                "{}\n  field: GF({}^{})\n  F = {}\n  degree {}, genus {}\n  clifford index: {}\n  non-bielliptic: {}\n  source: {}\n",
                entry.name,
                entry.characteristic,
                entry.extension_degree,
                curve.form().display(),
                entry.degree,
                entry.genus,
                entry.clifford_index.map_or("unasserted".into(), |c| c.to_string()),
                entry.non_bielliptic.map_or("unasserted".into(), |c| c.to_string()),
                entry.source,
            )),
        };
    }
    match env.cli.format {
        Format::Json => env.emit_json(&json!({ "hash": env.catalog.hash(), "curves": env.catalog.curves })),
        Format::Csv => {
            let mut out = String::from("name,characteristic,extension_degree,degree,genus,clifford_index,non_bielliptic\n");
            for e in &env.catalog.curves {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    e.name,
                    e.characteristic,
                    e.extension_degree,
                    e.degree,
                    e.genus,
                    e.clifford_index.map_or(String::new(), |c| c.to_string()),
                    e.non_bielliptic.map_or(String::new(), |c| c.to_string()),
                ));
            }
            env.emit(&out)
        }
        Format::Text => {
            let mut out = format!("catalog {} (sha256 {})\n", env.catalog_source, env.catalog.hash());
            for e in &env.catalog.curves {
                out.push_str(&format!(
                    "  {:<24} GF({}^{})  d={} g={}  cliff={}  non-bielliptic={}\n",
                    e.name,
                    e.characteristic,
                    e.extension_degree,
                    e.degree,
                    e.genus,
                    e.clifford_index.map_or("?".into(), |c| c.to_string()),
                    e.non_bielliptic.map_or("?".into(), |c| c.to_string()),
                ));
            }
            env.emit(&out)
        }
    }
}

fn cmd_points(env: &Env, count: usize, extension: u32) -> Result<(), Failure> {
    let curve = env.curve()?;
    let pts = rational_points(&curve, extension, count).map_err(curve_failure)?;
    let names: Vec<String> = pts.iter().map(|p| p.to_string()).collect();
    match env.cli.format {
        Format::Json => env.emit_json(&json!({ "curve": curve.name(), "extension": extension, "points": names })),
        _ => env.emit(&names.join("\n")),
    }
}

fn cmd_rr(env: &Env, spec: &str) -> Result<(), Failure> {
    let curve = env.curve()?;
    let d = parse_divisor(&curve, spec)?;
    let space = rr_space(&curve, &d).map_err(curve_failure)?;
    let h1 = h1(&curve, &d).map_err(curve_failure)?;
    let numerators: Vec<String> = space.numerators().iter().map(|g| g.display()).collect();
    let v = json!({
        "curve": curve.name(),
        "divisor": d.to_string(),
        "degree": d.degree(curve.degree()),
        "genus": curve.genus(),
        "h0": space.dim(),
        "h1": h1,
        "denominator": space.denominator().display(),
        "numerators": numerators,
    });
    match env.cli.format {
        Format::Json => env.emit_json(&v),
        _ => {
            let mut out = format!(
                "D = {d}\ndeg D = {}, g = {}\nh0(D) = {}, h1(D) = {h1}\ndenominator: {}\n",
                d.degree(curve.degree()),
                curve.genus(),
                space.dim(),
                space.denominator().display()
            );
            for (i, g) in numerators.iter().enumerate() {
                out.push_str(&format!("  s{i} = {g}\n"));
            }
            env.emit(&out)
        }
    }
}

/// Emits the table (partial if capped); exit 3 when any cell hit the size cap.
fn cmd_betti(env: &Env, l: &str, b: &str, pmax: usize, qmin: i64, qmax: i64) -> Result<u8, Failure> {
    if qmin > qmax {
        return Err(Failure::new(2, "--qmin must not exceed --qmax"));
    }
    let curve = env.curve()?;
    let l = parse_divisor(&curve, l)?;
    let b = parse_divisor(&curve, b)?;
    let table = BettiTable::compute(&curve, &b, &l, pmax, (qmin, qmax), env.limits(), env.seed())
        .map_err(koszul_failure)?;
    match env.cli.format {
        Format::Json => env.emit_json(&serde_json::to_value(&table).expect("json"))?,
        Format::Csv => env.emit(&table.to_csv())?,
        Format::Text => env.emit(&table.to_text())?,
    }
    for (p, q, why) in &table.skipped {
        eprintln!("skipped K_{{{p},{q}}}: {why}");
    }
    Ok(if table.skipped.is_empty() { 0 } else { 3 })
}

fn cmd_np(env: &Env, l: &str, p: i64) -> Result<(), Failure> {
    let curve = env.curve()?;
    let l = parse_divisor(&curve, l)?;
    let v = property_np_with(&curve, &l, p, env.limits()).map_err(koszul_failure)?;
    match env.cli.format {
        Format::Json => env.emit_json(&json!({ "curve": curve.name(), "L": l.to_string(), "verdict": v })),
        _ => {
            let mut out = format!("property N_{p} for L = {l}: {}\n", if v.holds { "HOLDS" } else { "FAILS" });
            for e in &v.entries {
                out.push_str(&format!("  dim K_{{{},{}}}(C; L, L) = {}\n", e.p, e.q, e.dim));
            }
            env.emit(&out)
        }
    }
}

fn cmd_probe(env: &Env, l: &str, k: u32, trials: usize, clifford: Option<u32>, ext: Vec<u32>) -> Result<(), Failure> {
    let curve = env.curve()?;
    let l = parse_divisor(&curve, l)?;
    let mut opts = ProbeOptions::new(k, trials, env.seed());
    opts.extension_degrees = ext;
    if let Some(c) = clifford {
        opts = opts.with_clifford(c);
    }
    let verdict = very_ample_probe_with(&curve, &l, &opts).map_err(curve_failure)?;
    let base = base_locus_degree(&curve, &l).map_err(curve_failure)?;
    match env.cli.format {
        Format::Json => env.emit_json(&json!({
            "curve": curve.name(),
            "L": l.to_string(),
            "k": k,
            "base_locus_degree": base,
            "verdict": verdict,
        })),
        _ => env.emit(&format!(
            "L = {l}\nbase locus degree: {}\n{k}-very ample probe: {}\n",
            base.map_or("(no sections)".into(), |b| b.to_string()),
            serde_json::to_string(&verdict).expect("json")
        )),
    }
}

fn report_text(r: &ExperimentReport) -> String {
    let mut out = format!(
        "campaign on {} (seed {}, catalog {}, engine {})\n",
        r.provenance.curve,
        r.provenance.seed,
        &r.provenance.catalog_hash[..12],
        r.provenance.engine_version
    );
    for (name, s) in &r.sections {
        out.push_str(&format!(
            "  {name:<20} pass={} implication_ok={} vacuous={} skipped={} fail={} error={}\n",
            s.pass, s.implication_ok, s.vacuous, s.skipped, s.fail, s.error
        ));
    }
    for w in &r.summary.failures {
        out.push_str(&format!("  FAIL {w}\n"));
    }
    out
}

fn cmd_check(env: &Env, path: &PathBuf) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_toml(&text).map_err(|e| Failure::new(2, e.to_string()))?;
    if let Some(seed) = env.cli.seed {
        cfg.seed = seed;
    }
    if env.cli.cap_entries != DEFAULT_MAX_ENTRIES {
        cfg.max_entries = env.cli.cap_entries;
    }
    let report = run_campaign_with_jobs(&cfg, &env.catalog, env.cli.jobs).map_err(|e| match e {
        ConjectureError::Config(m) => Failure::new(2, m),
        ConjectureError::Catalog(c) => catalog_failure(c, &env.catalog_source),
        e => Failure::new(4, e.to_string()),
    })?;
    match env.cli.format {
        Format::Text => {
            eprint!("{}", report_text(&report));
            env.emit(&report.to_json())?;
        }
        _ => env.emit(&report.to_json())?,
    }
    Ok(if report.summary.fail > 0 {
        1
    } else if report.summary.error > 0 {
        4
    } else {
        0
    })
}

fn cmd_summarize(env: &Env, path: &PathBuf) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let report = ExperimentReport::from_json(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let (summary, sections) = report.resummarize();
    let consistent = summary == report.summary && sections == report.sections;
    match env.cli.format {
        Format::Json => env.emit_json(&json!({ "consistent": consistent, "summary": summary, "sections": sections }))?,
        _ => {
            let mut out = report_text(&report);
            out.push_str(&format!("stored summary {}\n", if consistent { "matches records" } else { "DIFFERS from records" }));
            env.emit(&out)?;
        }
    }
    Ok(if summary.fail > 0 {
        1
    } else if !consistent {
        4
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let env = Env::load(cli)?;
    match &env.cli.command {
        Command::Catalog { show } => cmd_catalog(&env, *show).map(|_| 0),
        Command::Points { count, extension } => cmd_points(&env, *count, *extension).map(|_| 0),
        Command::Rr { d } => cmd_rr(&env, d).map(|_| 0),
        Command::Betti { l, b, pmax, qmin, qmax } => cmd_betti(&env, l, b, *pmax, *qmin, *qmax),
        Command::Np { l, p } => cmd_np(&env, l, *p).map(|_| 0),
        Command::Probe { l, k, trials, clifford, extensions } => {
            cmd_probe(&env, l, *k, *trials, *clifford, extensions.clone()).map(|_| 0)
        }
        Command::Check { config } => cmd_check(&env, config),
        Command::Summarize { report } => cmd_summarize(&env, report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
