//! TOML-configured DecidePAC runs.
//!
//! ```toml
//! system = "res-space"      # res-space | res-k-width | pc | pcr | cp
//! epsilon = "1/10"
//! gamma = "1/10"
//! delta = "1/20"
//! s = 1                     # res-space: s; res-k-width: k, w; pc/pcr: d; cp: w, L
//! kb = "kb.cnf"
//! query = "query.cnf"
//! dist = "d.dist"           # or: samples = "examples.pasgn"
//! mask = "fixed:01"
//! seed = 7
//! m = 150                   # optional, defaults to the Hoeffding sample size
//! ```
//!
//! Paths are relative to the config file's directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Deserialize;
use thiserror::Error;

use crate::cutting_planes::{decide_cp, encode_clause_cp, LinIneq, RestrictedIneq};
use crate::formats::{
    parse_cnf, parse_cp, parse_dist, parse_kdnf, parse_mask_spec, parse_pasgn, parse_poly,
    parse_rational, read_with, InputError,
};
use crate::formula::{PartialAssignment, Rational};
use crate::pac::{
    decide_pac, Cp, DecisionBackend, PacInstance, PacOptions, PacOutcome, PacParams, Pc, ResKWidth,
    ResSpace,
};
use crate::polycalc::{decide_pc, encode_clause_pcr, PcMode, Polynomial};
use crate::resk::{decide_resk_width, negate_query, KDnf, Term};
use crate::resolution::{search_space, Clause, Cnf};
use crate::sampling::draw_masked_examples;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
}

fn config_err<T>(msg: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError::Config(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemParams {
    ResSpace { s: usize },
    ResKWidth { k: usize, w: usize },
    Pc { d: usize },
    Pcr { d: usize },
    Cp { w: usize, l: u64 },
}

impl SystemParams {
    pub fn name(&self) -> &'static str {
        match self {
            SystemParams::ResSpace { .. } => "res-space",
            SystemParams::ResKWidth { .. } => "res-k-width",
            SystemParams::Pc { .. } => "pc",
            SystemParams::Pcr { .. } => "pcr",
            SystemParams::Cp { .. } => "cp",
        }
    }

    /// Builds the parameter set for a system name, requiring exactly the
    /// parameters that system takes.
    pub fn from_parts(
        system: &str,
        s: Option<usize>,
        k: Option<usize>,
        w: Option<usize>,
        d: Option<usize>,
        l: Option<u64>,
    ) -> Result<SystemParams, ScenarioError> {
        let given: Vec<&str> = [
            ("s", s.is_some()),
            ("k", k.is_some()),
            ("w", w.is_some()),
            ("d", d.is_some()),
            ("L", l.is_some()),
        ]
        .into_iter()
        .filter(|(_, present)| *present)
        .map(|(name, _)| name)
        .collect();
        let expected: &[&str] = match system {
            "res-space" => &["s"],
            "res-k-width" => &["k", "w"],
            "pc" | "pcr" => &["d"],
            "cp" => &["w", "L"],
            other => return config_err(format!("unknown system '{other}'")),
        };
        if given != expected {
            return config_err(format!(
                "system {system} takes parameters [{}], got [{}]",
                expected.join(", "),
                given.join(", ")
            ));
        }
        Ok(match system {
            "res-space" => SystemParams::ResSpace { s: s.unwrap() },
            "res-k-width" => SystemParams::ResKWidth { k: k.unwrap(), w: w.unwrap() },
            "pc" => SystemParams::Pc { d: d.unwrap() },
            "pcr" => SystemParams::Pcr { d: d.unwrap() },
            _ => SystemParams::Cp { w: w.unwrap(), l: l.unwrap() },
        })
    }

    fn describe(&self) -> String {
        match self {
            SystemParams::ResSpace { s } => format!("s={s}"),
            SystemParams::ResKWidth { k, w } => format!("k={k} w={w}"),
            SystemParams::Pc { d } | SystemParams::Pcr { d } => format!("d={d}"),
            SystemParams::Cp { w, l } => format!("w={w} L={l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleSource {
    File(PathBuf),
    Drawn { dist: PathBuf, mask: String, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioConfig {
    pub system: SystemParams,
    pub params: PacParams,
    pub kb: PathBuf,
    pub query: PathBuf,
    pub source: SampleSource,
    pub m: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RatValue {
    Text(String),
    Int(i64),
    Float(f64),
}

impl RatValue {
    fn get(&self, name: &str) -> Result<Rational, ScenarioError> {
        let text = match self {
            RatValue::Text(s) => s.clone(),
            RatValue::Int(i) => i.to_string(),
            // shortest round-trip decimal, read back exactly
            RatValue::Float(f) => f.to_string(),
        };
        parse_rational(&text).map_or_else(|| config_err(format!("{name}: bad rational '{text}'")), Ok)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: String,
    epsilon: RatValue,
    gamma: RatValue,
    delta: RatValue,
    s: Option<usize>,
    k: Option<usize>,
    w: Option<usize>,
    d: Option<usize>,
    #[serde(rename = "L")]
    l: Option<u64>,
    kb: PathBuf,
    query: PathBuf,
    samples: Option<PathBuf>,
    dist: Option<PathBuf>,
    mask: Option<String>,
    seed: Option<u64>,
    m: Option<usize>,
}

impl ScenarioConfig {
    /// Parses a config; relative paths are resolved against `base`.
    pub fn from_toml(text: &str, base: &Path) -> Result<ScenarioConfig, ScenarioError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ScenarioError::Config(e.to_string()))?;
        let system = SystemParams::from_parts(&raw.system, raw.s, raw.k, raw.w, raw.d, raw.l)?;
        let params = PacParams::new(
            raw.epsilon.get("epsilon")?,
            raw.gamma.get("gamma")?,
            raw.delta.get("delta")?,
        )?;
        let source = match (raw.samples, raw.dist, raw.mask, raw.seed) {
            (Some(p), None, None, None) => SampleSource::File(base.join(p)),
            (None, Some(dist), Some(mask), Some(seed)) => {
                let mask = match mask.strip_prefix("table:") {
                    Some(rest) => format!("table:{}", base.join(rest).display()),
                    None => mask,
                };
                SampleSource::Drawn { dist: base.join(dist), mask, seed }
            }
            _ => return config_err("give either samples, or all of dist, mask and seed"),
        };
        if raw.m == Some(0) {
            return config_err("m must be positive");
        }
        Ok(ScenarioConfig {
            system,
            params,
            kb: base.join(raw.kb),
            query: base.join(raw.query),
            source,
            m: raw.m,
        })
    }

    pub fn load(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| InputError::Io { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        ScenarioConfig::from_toml(&text, base)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub outcome: PacOutcome,
    pub examples: Vec<PartialAssignment>,
    /// Deterministic text report.
    pub report: String,
    pub elapsed: Duration,
}

/// Kind word of the `p <kind>` header, if any.
fn header_kind(text: &str) -> Option<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty() && !(l == &"c" || l.starts_with("c ")))
        .and_then(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some("p")).then(|| it.next().map(str::to_string)).flatten()
        })
}

fn read_text(path: &Path) -> Result<String, ScenarioError> {
    std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.to_path_buf(), source }.into())
}

fn single<T>(mut v: Vec<T>, path: &Path) -> Result<T, ScenarioError> {
    if v.len() != 1 {
        return config_err(format!("{}: query file must hold exactly one entry, found {}", path.display(), v.len()));
    }
    Ok(v.pop().unwrap())
}

fn load_cnf(path: &Path) -> Result<Cnf, ScenarioError> {
    Ok(read_with(path, parse_cnf)?)
}

fn query_clause(path: &Path) -> Result<(usize, Clause), ScenarioError> {
    let cnf = load_cnf(path)?;
    Ok((cnf.num_vars(), single(cnf.clauses().to_vec(), path)?))
}

fn check_n(what: &str, got: usize, n: usize) -> Result<(), ScenarioError> {
    if got != n {
        return config_err(format!("{what} has {got} variables, the knowledge base has {n}"));
    }
    Ok(())
}

fn load_examples(cfg: &ScenarioConfig, n: usize) -> Result<Vec<PartialAssignment>, ScenarioError> {
    match &cfg.source {
        SampleSource::File(path) => {
            let (sn, ex) = read_with(path, parse_pasgn)?;
            check_n("the sample file", sn, n)?;
            match cfg.m {
                Some(m) if m != ex.len() => {
                    config_err(format!("m = {m} but the sample file holds {} examples", ex.len()))
                }
                _ if ex.is_empty() => config_err("the sample file is empty"),
                _ => Ok(ex),
            }
        }
        SampleSource::Drawn { dist, mask, seed } => {
            let dist = read_with(dist, parse_dist)?;
            check_n("the distribution", dist.num_vars(), n)?;
            let mask = parse_mask_spec(mask, n, Path::new("."))?;
            let m = match cfg.m {
                Some(m) => m,
                None => cfg.params.sample_size()?,
            };
            Ok(draw_masked_examples(&dist, &mask, m, *seed)?)
        }
    }
}

fn run_backend<B: DecisionBackend>(
    backend: &B,
    inst: PacInstance<B::Query, B::Hyps>,
    cfg: &ScenarioConfig,
    opts: PacOptions,
) -> Result<(PacOutcome, Vec<PartialAssignment>), ScenarioError> {
    let examples = load_examples(cfg, inst.num_vars)?;
    let out = decide_pac(backend, &inst, &cfg.params, &examples, opts)?;
    Ok((out, examples))
}

fn kb_as_kdnfs(path: &Path, k: usize) -> Result<(usize, Vec<KDnf>), ScenarioError> {
    let text = read_text(path)?;
    if header_kind(&text).as_deref() == Some("kdnf") {
        let f = parse_kdnf(&text).map_err(|source| InputError::Parse { path: path.to_path_buf(), source })?;
        if f.k > k {
            return config_err(format!("{}: declares k = {}, above k = {k}", path.display(), f.k));
        }
        return Ok((f.n, f.formulas));
    }
    let cnf = parse_cnf(&text).map_err(|source| InputError::Parse { path: path.to_path_buf(), source })?;
    let dnfs = cnf
        .clauses()
        .iter()
        .map(|c| match c.literals() {
            None => KDnf::True,
            Some(lits) => KDnf::new(lits.iter().map(|&l| Term::unit(l))),
        })
        .filter(|f| !f.is_true())
        .collect();
    Ok((cnf.num_vars(), dnfs))
}

fn polys_or_clauses(path: &Path, pcr: bool) -> Result<(usize, Vec<Polynomial>), ScenarioError> {
    let text = read_text(path)?;
    let wrap = |source| InputError::Parse { path: path.to_path_buf(), source };
    if pcr && header_kind(&text).as_deref() == Some("cnf") {
        let cnf = parse_cnf(&text).map_err(wrap)?;
        let polys = cnf
            .clauses()
            .iter()
            .filter(|c| !c.is_tautology())
            .map(encode_clause_pcr)
            .collect::<crate::Result<Vec<_>>>()?;
        return Ok((cnf.num_vars(), polys));
    }
    Ok(parse_poly(&text).map_err(wrap)?)
}

fn ineqs_or_clauses(path: &Path) -> Result<(usize, Vec<LinIneq>), ScenarioError> {
    let text = read_text(path)?;
    let wrap = |source| InputError::Parse { path: path.to_path_buf(), source };
    if header_kind(&text).as_deref() == Some("cnf") {
        let cnf = parse_cnf(&text).map_err(wrap)?;
        let ineqs = cnf
            .clauses()
            .iter()
            .filter(|c| !c.is_tautology())
            .map(encode_clause_cp)
            .collect::<crate::Result<Vec<_>>>()?;
        return Ok((cnf.num_vars(), ineqs));
    }
    Ok(parse_cp(&text).map_err(wrap)?)
}

/// Knowledge base and query loaded for one proof system.
pub enum LoadedInstance {
    ResSpace(PacInstance<Clause, Cnf>),
    ResKWidth(PacInstance<Vec<Cnf>, Vec<KDnf>>),
    Pc(PacInstance<Polynomial, Vec<Polynomial>>),
    Cp(PacInstance<RestrictedIneq, Vec<LinIneq>>),
}

/// Reads the knowledge base and query for `system`. Res-space takes a CNF
/// and a one-clause query; res-k-width a CNF or k-DNF file and a k-CNF query;
/// pc a `poly` file and a one-polynomial query, pcr also accepting CNFs; cp a
/// `cp` file or a CNF, with a single-entry query.
pub fn load_instance(system: SystemParams, kb: &Path, query: &Path) -> Result<LoadedInstance, ScenarioError> {
    Ok(match system {
        SystemParams::ResSpace { .. } => {
            let kb = load_cnf(kb)?;
            let (qn, q) = query_clause(query)?;
            check_n("the query", qn, kb.num_vars())?;
            LoadedInstance::ResSpace(PacInstance { num_vars: kb.num_vars(), query: q, hyps: kb })
        }
        SystemParams::ResKWidth { k, .. } => {
            let (n, hyps) = kb_as_kdnfs(kb, k)?;
            let q = load_cnf(query)?;
            check_n("the query", q.num_vars(), n)?;
            negate_query(std::slice::from_ref(&q), k)?;
            LoadedInstance::ResKWidth(PacInstance { num_vars: n, query: vec![q], hyps })
        }
        SystemParams::Pc { d } | SystemParams::Pcr { d } => {
            let pcr = matches!(system, SystemParams::Pcr { .. });
            let (n, hyps) = polys_or_clauses(kb, pcr)?;
            let (qn, qs) = polys_or_clauses(query, pcr)?;
            check_n("the query", qn, n)?;
            let q = single(qs, query)?;
            for p in hyps.iter().chain([&q]) {
                if p.degree() > d {
                    return config_err(format!("polynomial {p} has degree above d = {d}"));
                }
                if !pcr && p.has_duals() {
                    return config_err(format!("polynomial {p} uses duals; use system pcr"));
                }
            }
            LoadedInstance::Pc(PacInstance { num_vars: n, query: q, hyps })
        }
        SystemParams::Cp { w, l } => {
            let (n, hyps) = ineqs_or_clauses(kb)?;
            let (qn, qs) = ineqs_or_clauses(query)?;
            check_n("the query", qn, n)?;
            let q = single(qs, query)?;
            if !q.within(w, &l.into()) {
                return config_err(format!("query {q} exceeds sparsity {w} or norm {l}"));
            }
            LoadedInstance::Cp(PacInstance { num_vars: n, query: RestrictedIneq::Ineq(q), hyps })
        }
    })
}

fn pc_mode(system: SystemParams) -> PcMode {
    if matches!(system, SystemParams::Pcr { .. }) {
        PcMode::Pcr
    } else {
        PcMode::Pc
    }
}

/// Loads the inputs, runs DecidePAC with the configured backend and renders
/// the report.
pub fn run_scenario(cfg: &ScenarioConfig, opts: PacOptions) -> Result<ScenarioRun, ScenarioError> {
    let start = Instant::now();
    let (outcome, examples) = match (cfg.system, load_instance(cfg.system, &cfg.kb, &cfg.query)?) {
        (SystemParams::ResSpace { s }, LoadedInstance::ResSpace(inst)) => {
            run_backend(&ResSpace { s }, inst, cfg, opts)?
        }
        (SystemParams::ResKWidth { k, w }, LoadedInstance::ResKWidth(inst)) => {
            run_backend(&ResKWidth { k, w }, inst, cfg, opts)?
        }
        (SystemParams::Pc { d } | SystemParams::Pcr { d }, LoadedInstance::Pc(inst)) => {
            run_backend(&Pc { d, mode: pc_mode(cfg.system) }, inst, cfg, opts)?
        }
        (SystemParams::Cp { w, l }, LoadedInstance::Cp(inst)) => {
            let n = inst.num_vars;
            run_backend(&Cp { num_vars: n, w, l }, inst, cfg, opts)?
        }
        _ => unreachable!("load_instance follows the system"),
    };
    let report = render_report(cfg, &outcome, &examples);
    Ok(ScenarioRun { outcome, examples, report, elapsed: start.elapsed() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProveOutcome {
    pub accepted: bool,
    /// Printable proof or derivation, for systems that produce one.
    pub certificate: Option<String>,
}

/// One backend call on the unrestricted instance.
pub fn prove(system: SystemParams, kb: &Path, query: &Path) -> Result<ProveOutcome, ScenarioError> {
    let (accepted, certificate) = match (system, load_instance(system, kb, query)?) {
        (SystemParams::ResSpace { s }, LoadedInstance::ResSpace(inst)) => {
            if inst.query.is_tautology() {
                (true, None)
            } else {
                let p = search_space(&inst.hyps, s, &inst.query);
                (p.is_some(), p.map(|p| format!("{p}\n")))
            }
        }
        (SystemParams::ResKWidth { k, w }, LoadedInstance::ResKWidth(inst)) => {
            let mut hyps = inst.hyps;
            hyps.extend(negate_query(&inst.query, k)?);
            let out = decide_resk_width(&hyps, &KDnf::falsum(), k, w)?;
            (out.accepted, out.trace.map(|t| t.to_string()))
        }
        (SystemParams::Pc { d } | SystemParams::Pcr { d }, LoadedInstance::Pc(inst)) => {
            (decide_pc(&inst.hyps, &inst.query, d, pc_mode(system))?, None)
        }
        (SystemParams::Cp { w, l }, LoadedInstance::Cp(inst)) => match &inst.query {
            RestrictedIneq::True => (true, None),
            RestrictedIneq::Ineq(q) => {
                let out = decide_cp(&inst.hyps, q, inst.num_vars, w, l)?;
                (out.accepted, out.trace.map(|t| t.to_string()))
            }
        },
        _ => unreachable!("load_instance follows the system"),
    };
    Ok(ProveOutcome { accepted, certificate })
}

fn render_report(cfg: &ScenarioConfig, out: &PacOutcome, examples: &[PartialAssignment]) -> String {
    let mut s = String::new();
    writeln!(s, "system: {} ({})", cfg.system.name(), cfg.system.describe()).unwrap();
    writeln!(
        s,
        "epsilon: {}  gamma: {}  delta: {}",
        cfg.params.epsilon(),
        cfg.params.gamma(),
        cfg.params.delta()
    )
    .unwrap();
    if let SampleSource::Drawn { seed, .. } = &cfg.source {
        writeln!(s, "seed: {seed}").unwrap();
    }
    writeln!(s, "m: {}", out.m).unwrap();
    writeln!(s, "budget: {}", out.budget).unwrap();
    writeln!(s, "failed: {}", out.failed_count).unwrap();
    writeln!(s, "checked: {}", out.examples_checked).unwrap();
    if let Some(v) = &out.per_example {
        for (i, (rho, ok)) in examples.iter().zip(v).enumerate() {
            writeln!(s, "example {}: {rho} {}", i + 1, if *ok { "accept" } else { "reject" }).unwrap();
        }
    }
    writeln!(s, "verdict: {}", out.verdict).unwrap();
    s
}
