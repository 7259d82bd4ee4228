use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use stabcover::classprod::{find_near_cover_pair, shift_cover_check, verify_three_class};
use stabcover::constructions::{
    build, fp_lemma_check, index_lemma_check, m0_lemma_check, named_group, BuiltGroup, GroupSpec,
};
use stabcover::covering::{
    covering_exists, gamma_exact, gamma_upper_greedy, lower_bound_counting, oracle_gamma_dfs, verify_certificate,
    CoveringCertificate, GammaResult, GammaStatus, SearchConfig, SearchStats, StabilizerSpec, Target, VerifyMode,
};
use stabcover::permcore::{read_gens_file, PermGroup};

use crate::catalog::{gens_spec, load_entry, problem_for, read_catalog, read_recipe};
use crate::certify::certify;
use crate::scan::{scan, write_csv};

#[derive(Debug, Parser)]
#[command(name = "stabcover", version, about = "Covering permutation groups by products of conjugate subgroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Covering number of G by conjugates of H.
    Gamma(GammaArgs),
    /// Build a covering certificate for a recipe.
    Certify(CertifyArgs),
    /// Check a certificate file.
    Verify(VerifyArgs),
    /// Class-product witnesses for simple groups.
    Lemma3(Lemma3Args),
    /// Run every lemma check over the catalog.
    Lemmas(LemmasArgs),
    /// Scan the catalog and report covering numbers.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GroupSource {
    /// A `.gens` file.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// A GroupSpec JSON file.
    #[arg(long)]
    pub recipe: Option<PathBuf>,
    /// A standard group name such as A5 or PSL(2,7).
    #[arg(long)]
    pub name: Option<String>,
}

impl GroupSource {
    fn spec(&self) -> Result<GroupSpec> {
        if let Some(g) = &self.group {
            return gens_spec(g);
        }
        if let Some(r) = &self.recipe {
            return read_recipe(r);
        }
        Ok(GroupSpec::Named { name: self.name.clone().expect("clap enforces one source") })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GammaMode {
    Exact,
    Greedy,
    Oracle,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Longest product to try.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub frontier_cap: Option<usize>,
    /// Work budget in set-element operations.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Disable dominance pruning.
    #[arg(long)]
    pub no_prune: bool,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        let mut c = SearchConfig { max_len: self.max_len, ..Default::default() };
        if let Some(f) = self.frontier_cap {
            c.frontier_cap = f;
        }
        if let Some(b) = self.budget {
            c.work_budget = b as u128;
        }
        c.prune = !self.no_prune;
        c
    }
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    #[command(flatten)]
    pub source: GroupSource,
    /// H is the stabilizer of this point (1-based).
    #[arg(long, conflicts_with = "stab")]
    pub point: Option<usize>,
    /// H is generated by the permutations in this `.gens` file.
    #[arg(long)]
    pub stab: Option<PathBuf>,
    /// Cover the socle rather than the whole group (recipes only).
    #[arg(long)]
    pub socle: bool,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: GammaMode,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub recipe: PathBuf,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Witnessed,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: PathBuf,
    /// Defaults to witnessed when the certificate carries witnesses.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Args)]
pub struct Lemma3Args {
    /// Standard group names.
    #[arg(long = "name")]
    pub names: Vec<String>,
    /// `.gens` files.
    #[arg(long = "group")]
    pub groups: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LemmasArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub fp_bound: u64,
    #[arg(long, default_value = "catalog")]
    pub catalog: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, default_value = "catalog")]
    pub catalog: PathBuf,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary output; stderr when absent.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub search: SearchArgs,
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Gamma(a) => cmd_gamma(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Lemma3(a) => cmd_lemma3(a),
        Command::Lemmas(a) => cmd_lemmas(a),
        Command::Scan(a) => cmd_scan(a),
    }
}

fn print_json(v: &impl Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Exit code for a gamma result: 0 exact or infinite, 2 bounds only.
pub fn gamma_exit_code(status: GammaStatus) -> u8 {
    match status {
        GammaStatus::Exact | GammaStatus::Infinite => 0,
        GammaStatus::BoundsOnly => 2,
    }
}

fn gamma_built(a: &GammaArgs) -> Result<BuiltGroup> {
    let mut built = build(&a.source.spec()?)?;
    if let Some(p) = a.point {
        let s = StabilizerSpec::Point { point: p };
        built.stabilizer = s.resolve(&built.group)?;
        built.stabilizer_spec = s;
    } else if let Some(f) = &a.stab {
        let (degree, gens) = read_gens_file(f)?;
        if degree != built.group.degree() {
            bail!("stabilizer file has degree {degree}, group has degree {}", built.group.degree());
        }
        let s = StabilizerSpec::Generators { generators: gens };
        built.stabilizer = s.resolve(&built.group).context("--stab")?;
        built.stabilizer_spec = s;
    }
    Ok(built)
}

pub fn gamma_result(a: &GammaArgs) -> Result<(GammaResult, Value)> {
    let built = gamma_built(a)?;
    let target = if a.socle { Target::Socle } else { Target::Group };
    let problem = problem_for(&built, target)?;
    let config = a.search.config();
    let start = std::time::Instant::now();
    let mut result = match a.mode {
        GammaMode::Exact => gamma_exact(&problem, &config)?,
        GammaMode::Greedy | GammaMode::Oracle if !covering_exists(&problem)? => GammaResult {
            status: GammaStatus::Infinite,
            value: None,
            lower: stabcover::covering::Bound::Infinite,
            upper: stabcover::covering::Bound::Infinite,
            conjugators: vec![],
            stats: SearchStats::default(),
            wall_time: Default::default(),
        },
        GammaMode::Greedy => {
            let max_len = config.resolved_max_len(problem.index());
            let lower = lower_bound_counting(problem.target_group().order(), problem.sub.order());
            let (upper, conjugators) = gamma_upper_greedy(&problem, max_len.max(problem.index() as usize))?;
            let exact = lower == Some(upper);
            GammaResult {
                status: if exact { GammaStatus::Exact } else { GammaStatus::BoundsOnly },
                value: exact.then_some(upper),
                lower: lower.into(),
                upper: Some(upper).into(),
                conjugators,
                stats: SearchStats::default(),
                wall_time: Default::default(),
            }
        }
        GammaMode::Oracle => {
            let v = oracle_gamma_dfs(&problem, config.resolved_max_len(problem.index()))?;
            GammaResult {
                status: GammaStatus::Exact,
                value: Some(v),
                lower: Some(v).into(),
                upper: Some(v).into(),
                conjugators: vec![],
                stats: SearchStats::default(),
                wall_time: Default::default(),
            }
        }
    };
    result.wall_time = start.elapsed();
    let mut v = serde_json::to_value(&result)?;
    let obj = v.as_object_mut().expect("object");
    obj.insert("mode".into(), json!(format!("{:?}", a.mode).to_lowercase()));
    obj.insert("target".into(), serde_json::to_value(problem.target)?);
    obj.insert("group_order".into(), json!(problem.group.order() as u64));
    obj.insert("sub_order".into(), json!(problem.sub.order() as u64));
    obj.insert("index".into(), json!(problem.index() as u64));
    Ok((result, v))
}

fn cmd_gamma(a: &GammaArgs) -> Result<u8> {
    let (result, v) = gamma_result(a)?;
    print_json(&v)?;
    Ok(gamma_exit_code(result.status))
}

fn cmd_certify(a: &CertifyArgs) -> Result<u8> {
    let spec = read_recipe(&a.recipe)?;
    let cert = certify(&spec, &a.search.config())?;
    let text = cert.to_json();
    match &a.out {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => println!("{text}"),
    }
    eprintln!("{}: {} conjugators ({})", spec.family(), cert.len(), cert.provenance);
    Ok(0)
}

pub fn verify_file(path: &Path, mode: Option<ModeArg>) -> Value {
    let cert = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
        .and_then(|t| Ok(CoveringCertificate::from_json(&t)?));
    let cert = match cert {
        Ok(c) => c,
        Err(e) => return json!({"passed": false, "failure": format!("{e:#}")}),
    };
    let mode = match mode {
        Some(ModeArg::Exhaustive) => VerifyMode::Exhaustive,
        Some(ModeArg::Witnessed) => VerifyMode::Witnessed,
        None if cert.witnesses.is_some() => VerifyMode::Witnessed,
        None => VerifyMode::Exhaustive,
    };
    match verify_certificate(&cert, mode) {
        Ok(r) => serde_json::to_value(r).expect("report serializes"),
        Err(e) => json!({"passed": false, "failure": e.to_string()}),
    }
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    let v = verify_file(&a.cert, a.mode);
    print_json(&v)?;
    Ok(if v["passed"] == json!(true) { 0 } else { 1 })
}

#[derive(Debug, Serialize)]
pub struct Lemma3Row {
    pub group: String,
    pub order: u64,
    pub witness: Option<stabcover::classprod::ClassProductWitness>,
    pub three_class: Option<stabcover::classprod::ThreeClassVerdict>,
    /// `α^T β^T {s₁, s₂} = T` for two fixed non-identity elements.
    pub shift_cover: Option<bool>,
    pub passed: bool,
}

pub fn lemma3_row(label: &str, t: &PermGroup) -> Result<Lemma3Row> {
    let mut row = Lemma3Row {
        group: label.into(),
        order: t.order() as u64,
        witness: None,
        three_class: None,
        shift_cover: None,
        passed: false,
    };
    let Some(w) = find_near_cover_pair(t)? else { return Ok(row) };
    let verdict = verify_three_class(t, &w)?;
    let e = t.enumeration()?;
    if e.order() >= 3 {
        row.shift_cover = Some(shift_cover_check(t, &w.alpha, &w.beta, &[e.element(1), e.element(2)])?);
    }
    row.passed = verdict.passed && row.shift_cover.unwrap_or(false);
    row.witness = Some(w);
    row.three_class = Some(verdict);
    Ok(row)
}

fn cmd_lemma3(a: &Lemma3Args) -> Result<u8> {
    let mut rows = Vec::new();
    for n in &a.names {
        rows.push(lemma3_row(n, &named_group(n)?)?);
    }
    for g in &a.groups {
        let (degree, gens) = read_gens_file(g)?;
        rows.push(lemma3_row(&g.display().to_string(), &PermGroup::new(degree, gens)?)?);
    }
    print_json(&rows)?;
    Ok(if rows.iter().all(|r| r.passed) { 0 } else { 1 })
}

#[derive(Debug, Serialize)]
pub struct LemmaEntry {
    pub name: String,
    pub index: stabcover::constructions::IndexLemmaReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m0: Option<stabcover::constructions::M0Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma3: Option<Lemma3Row>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct LemmasReport {
    pub fp: stabcover::constructions::FpReport,
    pub entries: Vec<LemmaEntry>,
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn lemmas_report(fp_bound: u64, catalog: &Path) -> Result<LemmasReport> {
    let fp = fp_lemma_check(fp_bound);
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for entry in read_catalog(catalog)? {
        let loaded = match load_entry(catalog, &entry) {
            Ok(l) => l,
            Err(e) => {
                failures.push(format!("{}: {e:#}", entry.name));
                continue;
            }
        };
        let g = &loaded.built.group;
        let index = index_lemma_check(g.order(), loaded.built.stabilizer.order());
        let m0 = match (entry.m0, loaded.simple_socle()?) {
            (true, Some(t)) => Some(m0_lemma_check(g, &t)?),
            _ => None,
        };
        let lemma3 = if entry.simple { Some(lemma3_row(&entry.name, g)?) } else { None };
        let passed = index.passed
            && m0.as_ref().is_none_or(|m| m.passed)
            && lemma3.as_ref().is_none_or(|l| l.passed);
        if !passed {
            failures.push(entry.name.clone());
        }
        entries.push(LemmaEntry { name: entry.name, index, m0, lemma3, passed });
    }
    let passed = fp.passed && failures.is_empty();
    Ok(LemmasReport { fp, entries, failures, passed })
}

fn cmd_lemmas(a: &LemmasArgs) -> Result<u8> {
    let r = lemmas_report(a.fp_bound, &a.catalog)?;
    eprintln!(
        "fp: {} primes ≤ {}, equality at {:?}: {}",
        r.fp.primes_checked,
        r.fp.bound,
        r.fp.equality_at,
        if r.fp.passed { "pass" } else { "FAIL" }
    );
    for e in &r.entries {
        let mut parts = vec![format!("index {}", if e.index.applicable { "checked" } else { "n/a" })];
        if let Some(m) = &e.m0 {
            parts.push(format!("m0 {} maximal", m.maximal.len()));
        }
        if e.lemma3.is_some() {
            parts.push("lemma3".into());
        }
        eprintln!("{:<28} {:<40} {}", e.name, parts.join(", "), if e.passed { "pass" } else { "FAIL" });
    }
    print_json(&r)?;
    Ok(if r.passed { 0 } else { 1 })
}

fn cmd_scan(a: &ScanArgs) -> Result<u8> {
    let report = scan(&a.catalog, &a.search.config())?;
    match &a.out {
        Some(p) => {
            let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            write_csv(&report.rows, f)?;
        }
        None => write_csv(&report.rows, std::io::stdout().lock())?,
    }
    let summary = serde_json::to_string_pretty(&report.summary)?;
    match &a.summary {
        Some(p) => std::fs::write(p, summary + "\n")?,
        None => eprintln!("{summary}"),
    }
    let ok = report.summary.failures.is_empty() && report.summary.inconsistent_rows.is_empty();
    Ok(if ok { 0 } else { 1 })
}
