//! Typed experiment configuration resolved from an INI file plus
//! command-line overrides.
//!
//! Every value the runner reads is recorded with its effective setting, in
//! read order, so the resolved configuration can be written back as a
//! comment header and parsed again.

use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use swarmlab::benchmarks::{Dtlz, DtlzKind, Function};
use swarmlab::ga::{GaConfig, RankScheme, Selection};
use swarmlab::moea::{Nsga2Config, PolyploidConfig};
use swarmlab::pso::{ClubParams, Inertia, PsoConfig, Topology};

use crate::error::ConfigError;
use crate::ini::Ini;

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Bench,
    Moo,
    Ident,
    Schema,
    Influence,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Bench,
        ExperimentKind::Moo,
        ExperimentKind::Ident,
        ExperimentKind::Schema,
        ExperimentKind::Influence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Bench => "bench",
            ExperimentKind::Moo => "moo",
            ExperimentKind::Ident => "ident",
            ExperimentKind::Schema => "schema",
            ExperimentKind::Influence => "influence",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s.to_ascii_lowercase())
    }
}

/// A single-objective optimizer with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum SingleOptimizer {
    Pso(PsoConfig),
    Ga(GaConfig),
    /// Axis steps as a fraction of each initialization width.
    Ls { step_fraction: f64 },
}

impl SingleOptimizer {
    /// Short label in the style of the result tables, e.g. `C-PSO(10)`.
    pub fn label(&self) -> String {
        match self {
            SingleOptimizer::Pso(c) => match c.topology {
                Topology::Gbest => "PSO-g".into(),
                Topology::LbestRing => "PSO-l".into(),
                Topology::Clubs(p) => format!("C-PSO({})", p.default_level),
            },
            SingleOptimizer::Ga(_) => "GA".into(),
            SingleOptimizer::Ls { .. } => "LS".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub function: Function,
    pub dims: usize,
    pub closeness: f64,
    pub vmax: Option<f64>,
    pub budget: u64,
    pub optimizer: SingleOptimizer,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MooAlgorithm {
    Polyploid(PolyploidConfig),
    Nsga2(Nsga2Config),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MooConfig {
    pub problem: Dtlz,
    pub budget: u64,
    /// Cells per axis for the diversity metric.
    pub cells: usize,
    pub algorithm: MooAlgorithm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentConfig {
    pub t_end: f64,
    pub samples: usize,
    /// Score the true parameters instead of running the optimizer.
    pub inject_truth: bool,
    pub budget: u64,
    pub optimizer: SingleOptimizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemaTableKind {
    FitnessRatio,
    DefiningLength,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemaConfig {
    pub table: SchemaTableKind,
    pub takeover: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceSetup {
    pub levels: Vec<usize>,
    pub dims: usize,
    pub iterations: usize,
    pub swarm_size: usize,
    pub n_clubs: usize,
    pub w: f64,
    pub phi: f64,
    pub init_lo: f64,
    pub init_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Bench(BenchConfig),
    Moo(MooConfig),
    Ident(IdentConfig),
    Schema(SchemaConfig),
    Influence(InfluenceSetup),
}

impl Experiment {
    pub fn kind(&self) -> ExperimentKind {
        match self {
            Experiment::Bench(_) => ExperimentKind::Bench,
            Experiment::Moo(_) => ExperimentKind::Moo,
            Experiment::Ident(_) => ExperimentKind::Ident,
            Experiment::Schema(_) => ExperimentKind::Schema,
            Experiment::Influence(_) => ExperimentKind::Influence,
        }
    }
}

/// Resolved `section -> [(key, value)]` pairs in read order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Resolved(pub Vec<(String, Vec<(String, String)>)>);

impl Resolved {
    pub fn to_ini(&self) -> String {
        let mut s = String::new();
        for (i, (sec, kvs)) in self.0.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            s.push_str(&format!("[{sec}]\n"));
            for (k, v) in kvs {
                s.push_str(&format!("{k} = {v}\n"));
            }
        }
        s
    }

    /// The configuration as a block of `# ` comment lines.
    pub fn header(&self) -> String {
        self.to_ini()
            .lines()
            .map(|l| if l.is_empty() { "#\n".to_string() } else { format!("# {l}\n") })
            .collect()
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub experiment: Option<String>,
    pub seed: Option<u64>,
    pub repeats: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub repeats: usize,
    /// Series rows are written once per this many evaluations.
    pub checkpoint: u64,
    /// Output directory. Not part of the resolved header, so identical
    /// experiments written to different places produce identical files.
    pub out: PathBuf,
    pub experiment: Experiment,
    pub resolved: Resolved,
}

/// The leading `#` lines of an output file with the comment markers removed.
fn header_body(file_text: &str) -> String {
    file_text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| {
            let l = l.strip_prefix('#').unwrap_or(l);
            format!("{}\n", l.strip_prefix(' ').unwrap_or(l))
        })
        .collect()
}

impl ExperimentConfig {
    pub fn parse(text: &str, overrides: &Overrides) -> Result<Self> {
        Self::from_ini(Ini::parse(text)?, overrides)
    }

    /// Rebuilds a configuration from the `#` header of an output file.
    pub fn from_header(file_text: &str) -> Result<Self> {
        Self::parse(&header_body(file_text), &Overrides::default())
    }

    /// Parses either a config file or an output file carrying a header.
    pub fn parse_any(text: &str, overrides: &Overrides) -> Result<Self> {
        if text.starts_with("# [experiment]") {
            Self::parse(&header_body(text), overrides)
        } else {
            Self::parse(text, overrides)
        }
    }

    pub fn from_ini(mut ini: Ini, o: &Overrides) -> Result<Self> {
        if let Some(e) = &o.experiment {
            ini.set(EXP, "kind", e.clone());
        }
        if let Some(s) = o.seed {
            ini.set(EXP, "seed", s.to_string());
        }
        if let Some(r) = o.repeats {
            ini.set(EXP, "repeats", r.to_string());
        }
        if let Some(p) = &o.out {
            ini.set(EXP, "out", p.display().to_string());
        }
        let mut r = Reader::new(ini);
        let kind_name: String = r.required(EXP, "kind")?;
        let Some(kind) = ExperimentKind::from_name(&kind_name) else {
            return Err(r.error(EXP, "kind", format!("unknown experiment kind `{kind_name}`")));
        };
        let name: String = r.get(EXP, "name", kind.name().to_string())?;
        if name.is_empty() || name.contains(['/', '\\']) {
            return Err(r.error(EXP, "name", "experiment name must be a plain file stem"));
        }
        let seed: u64 = r.get(EXP, "seed", 1)?;
        let repeats: usize = r.get(EXP, "repeats", 10)?;
        if repeats == 0 {
            return Err(r.error(EXP, "repeats", "repeats must be at least 1"));
        }
        let checkpoint: u64 = r.get(EXP, "checkpoint", 100)?;
        if checkpoint == 0 {
            return Err(r.error(EXP, "checkpoint", "checkpoint interval must be positive"));
        }
        let out = PathBuf::from(r.unrecorded(EXP, "out").unwrap_or_else(|| "results".into()));
        let experiment = match kind {
            ExperimentKind::Bench => Experiment::Bench(read_bench(&mut r)?),
            ExperimentKind::Moo => Experiment::Moo(read_moo(&mut r)?),
            ExperimentKind::Ident => Experiment::Ident(read_ident(&mut r)?),
            ExperimentKind::Schema => Experiment::Schema(read_schema(&mut r)?),
            ExperimentKind::Influence => Experiment::Influence(read_influence(&mut r)?),
        };
        let resolved = r.finish()?;
        Ok(Self { name, seed, repeats, checkpoint, out, experiment, resolved })
    }

    pub fn header(&self) -> String {
        self.resolved.header()
    }
}

const EXP: &str = "experiment";
const PROB: &str = "problem";
const OPT: &str = "optimizer";

fn budget(r: &mut Reader, default: u64) -> Result<u64> {
    let b: u64 = r.get(OPT, "budget", default)?;
    if b == 0 {
        return Err(r.error(OPT, "budget", "budget must be positive"));
    }
    Ok(b)
}

fn read_bench(r: &mut Reader) -> Result<BenchConfig> {
    let fname: String = r.get(PROB, "function", "sphere".to_string())?;
    let Some(function) = Function::from_name(&fname) else {
        return Err(r.error(PROB, "function", format!("unknown function `{fname}`")));
    };
    let s = function.settings();
    let dims: usize = r.get(PROB, "dims", s.dims)?;
    function.check_dims(dims).map_err(|e| r.error(PROB, "dims", e.to_string()))?;
    let closeness: f64 = r.get(PROB, "closeness", s.closeness)?;
    let vmax = r.get_opt(PROB, "vmax", Some(s.vmax))?;
    let algo = r.choice(OPT, "algorithm", "cpso", &["cpso", "pso-g", "pso-l", "ga", "ls"])?;
    let budget = budget(r, 200_000)?;
    let optimizer = match algo.as_str() {
        "ls" => read_ls(r, 0.001)?,
        "ga" => read_ga(r)?,
        a => read_pso(r, a, s.cpso_inertia, 5)?,
    };
    Ok(BenchConfig { function, dims, closeness, vmax, budget, optimizer })
}

fn read_ident(r: &mut Reader) -> Result<IdentConfig> {
    let t_end: f64 = r.get(PROB, "t_end", 1.0)?;
    if !(t_end > 0.0) {
        return Err(r.error(PROB, "t_end", "simulation time must be positive"));
    }
    let samples: usize = r.get(PROB, "samples", 1000)?;
    if samples == 0 {
        return Err(r.error(PROB, "samples", "need at least one sample"));
    }
    let inject_truth: bool = r.get(PROB, "inject_truth", false)?;
    let algo = r.choice(OPT, "algorithm", "cpso", &["cpso", "pso-g", "pso-l", "ga", "ls"])?;
    let budget = budget(r, 100_000)?;
    let optimizer = match algo.as_str() {
        "ls" => read_ls(r, 0.001)?,
        "ga" => read_ga(r)?,
        a => read_pso(r, a, 1.458, 4)?,
    };
    Ok(IdentConfig { t_end, samples, inject_truth, budget, optimizer })
}

fn read_ls(r: &mut Reader, default: f64) -> Result<SingleOptimizer> {
    let step_fraction: f64 = r.get(OPT, "step", default)?;
    if !(step_fraction > 0.0) {
        return Err(r.error(OPT, "step", "step fraction must be positive"));
    }
    Ok(SingleOptimizer::Ls { step_fraction })
}

fn read_pso(r: &mut Reader, algo: &str, clubs_w: f64, min_level: usize) -> Result<SingleOptimizer> {
    let swarm_size: usize = r.get(OPT, "swarm_size", 20)?;
    let w: f64 = r.get(OPT, "w", if algo == "cpso" { clubs_w } else { PsoConfig::STATIC_W })?;
    let chi: f64 = r.get(OPT, "chi", 1.0)?;
    let phi1: f64 = r.get(OPT, "phi1", PsoConfig::PHI)?;
    let phi2: f64 = r.get(OPT, "phi2", PsoConfig::PHI)?;
    let (inertia, topology) = match algo {
        "pso-g" => (Inertia::Static(w), Topology::Gbest),
        "pso-l" => (Inertia::Static(w), Topology::LbestRing),
        _ => {
            let p = ClubParams {
                n_clubs: r.get(OPT, "clubs", 100)?,
                default_level: r.get(OPT, "default_level", 10)?,
                min_level: r.get(OPT, "min_level", min_level)?,
                max_level: r.get(OPT, "max_level", 33)?,
                rr: r.get(OPT, "rr", 2)?,
                dynamic: true,
            };
            (Inertia::Random(w), Topology::Clubs(p))
        }
    };
    let cfg = PsoConfig { swarm_size, inertia, chi, phi1, phi2, topology };
    cfg.validate().map_err(|e| r.section_error(OPT, e.to_string()))?;
    Ok(SingleOptimizer::Pso(cfg))
}

fn read_ga(r: &mut Reader) -> Result<SingleOptimizer> {
    let d = GaConfig::default();
    let mut cfg = GaConfig {
        pop_size: r.get(OPT, "pop_size", d.pop_size)?,
        p_c: r.get(OPT, "p_c", d.p_c)?,
        eta_c: r.get(OPT, "eta_c", d.eta_c)?,
        p_m: r.get(OPT, "p_m", d.p_m)?,
        eta_m: r.get(OPT, "eta_m", d.eta_m)?,
        ts: d.ts,
        selection: d.selection,
    };
    let sel = r.choice(OPT, "selection", "tournament", &["tournament", "fps", "rank-linear", "rank-exponential"])?;
    cfg.selection = match sel.as_str() {
        "tournament" => {
            cfg.ts = r.get(OPT, "tournament", d.ts)?;
            Selection::Tournament
        }
        "fps" => Selection::Fps { sigma_scaling: r.get_opt(OPT, "sigma", None)? },
        "rank-linear" => Selection::Rank(RankScheme::Linear(r.get(OPT, "rank_s", 2.0)?)),
        _ => Selection::Rank(RankScheme::Exponential(r.get(OPT, "rank_s", 0.9)?)),
    };
    cfg.validate().map_err(|e| r.section_error(OPT, e.to_string()))?;
    Ok(SingleOptimizer::Ga(cfg))
}

fn read_moo(r: &mut Reader) -> Result<MooConfig> {
    let pname: String = r.get(PROB, "problem", "dtlz2".to_string())?;
    let Some(kind) = DtlzKind::from_name(&pname) else {
        return Err(r.error(PROB, "problem", format!("unknown problem `{pname}`")));
    };
    let kind = match kind {
        DtlzKind::Dtlz4 { alpha } => DtlzKind::Dtlz4 { alpha: r.get(PROB, "alpha", alpha)? },
        k => k,
    };
    let n_obj: usize = r.get(PROB, "objectives", 3)?;
    let n_vars: usize = r.get(PROB, "vars", kind.default_vars())?;
    let problem = Dtlz::new(kind, n_vars, n_obj).map_err(|e| r.section_error(PROB, e.to_string()))?;
    let algo = r.choice(OPT, "algorithm", "polyploid", &["polyploid", "nsga2"])?;
    let budget = budget(r, 50_000)?;
    let pop_size: usize = r.get(OPT, "pop_size", 100)?;
    let algorithm = if algo == "polyploid" {
        let d = PolyploidConfig::default();
        let cfg = PolyploidConfig {
            pop_size,
            ploidy: r.get(OPT, "ploidy", d.ploidy)?,
            p_c: r.get(OPT, "p_c", d.p_c)?,
            eta_c: r.get(OPT, "eta_c", d.eta_c)?,
            p_m: r.get_opt(OPT, "p_m", d.p_m)?,
            eta_m: r.get(OPT, "eta_m", d.eta_m)?,
        };
        cfg.validate().map_err(|e| r.section_error(OPT, e.to_string()))?;
        MooAlgorithm::Polyploid(cfg)
    } else {
        let d = Nsga2Config::default();
        if pop_size < 2 {
            return Err(r.error(OPT, "pop_size", "population size must be at least 2"));
        }
        MooAlgorithm::Nsga2(Nsga2Config {
            pop_size,
            p_c: r.get(OPT, "p_c", d.p_c)?,
            eta_c: r.get(OPT, "eta_c", d.eta_c)?,
            p_m: r.get_opt(OPT, "p_m", d.p_m)?,
            eta_m: r.get(OPT, "eta_m", d.eta_m)?,
        })
    };
    if budget < pop_size as u64 {
        return Err(r.error(OPT, "budget", "budget is smaller than the population"));
    }
    let cells: usize = r.get("metric", "cells", pop_size)?;
    if cells < 3 {
        return Err(r.error("metric", "cells", "the diversity metric needs at least 3 cells"));
    }
    Ok(MooConfig { problem, budget, cells, algorithm })
}

fn read_schema(r: &mut Reader) -> Result<SchemaConfig> {
    let t = r.choice(PROB, "table", "fitness_ratio", &["fitness_ratio", "defining_length"])?;
    let table = if t == "fitness_ratio" { SchemaTableKind::FitnessRatio } else { SchemaTableKind::DefiningLength };
    let takeover: f64 = r.get(PROB, "takeover", swarmlab::schema::DEFAULT_TAKEOVER)?;
    if !(takeover > 0.0) {
        return Err(r.error(PROB, "takeover", "takeover fraction must be positive"));
    }
    Ok(SchemaConfig { table, takeover })
}

fn read_influence(r: &mut Reader) -> Result<InfluenceSetup> {
    let levels: List<usize> = r.get(PROB, "levels", List(vec![5, 10, 20]))?;
    if levels.0.is_empty() {
        return Err(r.error(PROB, "levels", "need at least one membership level"));
    }
    let setup = InfluenceSetup {
        levels: levels.0,
        dims: r.get(PROB, "dims", 30)?,
        iterations: r.get(PROB, "iterations", 100)?,
        swarm_size: r.get(OPT, "swarm_size", 20)?,
        n_clubs: r.get(OPT, "clubs", 100)?,
        w: r.get(OPT, "w", 1.458)?,
        phi: r.get(OPT, "phi", PsoConfig::PHI)?,
        init_lo: r.get(PROB, "init_lo", 1000.0)?,
        init_hi: r.get(PROB, "init_hi", 2000.0)?,
    };
    if setup.levels.iter().any(|&m| m == 0 || m > setup.n_clubs) {
        return Err(r.error(PROB, "levels", "levels must lie in 1..=clubs"));
    }
    if !(setup.init_lo < setup.init_hi) {
        return Err(r.error(PROB, "init_hi", "init_hi must exceed init_lo"));
    }
    Ok(setup)
}

/// Comma-separated list value.
#[derive(Debug, Clone, PartialEq)]
struct List<T>(Vec<T>);

impl<T: FromStr> FromStr for List<T> {
    type Err = T::Err;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(T::from_str)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(List)
    }
}

impl<T: Display> Display for List<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

struct Reader {
    ini: Ini,
    used: Vec<Vec<bool>>,
    resolved: Resolved,
}

impl Reader {
    fn new(ini: Ini) -> Self {
        let used = ini.sections.iter().map(|s| vec![false; s.entries.len()]).collect();
        Self { ini, used, resolved: Resolved::default() }
    }

    fn lookup(&mut self, sec: &str, key: &str) -> Option<(String, usize)> {
        let si = self.ini.sections.iter().position(|s| s.name == sec)?;
        let ei = self.ini.sections[si].entries.iter().position(|e| e.key == key)?;
        self.used[si][ei] = true;
        let e = &self.ini.sections[si].entries[ei];
        Some((e.value.clone(), e.line))
    }

    fn line_of(&self, sec: &str, key: &str) -> usize {
        self.ini
            .section(sec)
            .and_then(|s| s.entries.iter().find(|e| e.key == key))
            .map_or(0, |e| e.line)
    }

    fn error(&self, sec: &str, key: &str, msg: impl Into<String>) -> ConfigError {
        let msg = format!("[{sec}] {key}: {}", msg.into());
        ConfigError::at(self.line_of(sec, key), msg)
    }

    fn section_error(&self, sec: &str, msg: impl Into<String>) -> ConfigError {
        let line = self.ini.section(sec).map_or(0, |s| s.line);
        ConfigError::at(line, format!("[{sec}]: {}", msg.into()))
    }

    fn record(&mut self, sec: &str, key: &str, value: String) {
        let secs = &mut self.resolved.0;
        let pos = match secs.iter().position(|(s, _)| s == sec) {
            Some(p) => p,
            None => {
                secs.push((sec.to_string(), Vec::new()));
                secs.len() - 1
            }
        };
        secs[pos].1.push((key.to_string(), value));
    }

    fn parse<T: FromStr>(&self, sec: &str, key: &str, v: &str, line: usize) -> Result<T> {
        v.parse()
            .map_err(|_| ConfigError::at(line, format!("[{sec}] {key}: cannot parse `{v}`")))
    }

    fn get<T: FromStr + Display>(&mut self, sec: &str, key: &str, default: T) -> Result<T> {
        let value = match self.lookup(sec, key) {
            Some((v, line)) => self.parse(sec, key, &v, line)?,
            None => default,
        };
        self.record(sec, key, value.to_string());
        Ok(value)
    }

    fn required<T: FromStr + Display>(&mut self, sec: &str, key: &str) -> Result<T> {
        let Some((v, line)) = self.lookup(sec, key) else {
            return Err(ConfigError::new(format!("missing required key `{key}` in [{sec}]")));
        };
        let value: T = self.parse(sec, key, &v, line)?;
        self.record(sec, key, value.to_string());
        Ok(value)
    }

    /// Optional value; the literal `none` (or `auto`) means unset.
    fn get_opt<T: FromStr + Display>(&mut self, sec: &str, key: &str, default: Option<T>) -> Result<Option<T>> {
        let value = match self.lookup(sec, key) {
            Some((v, _)) if matches!(v.to_ascii_lowercase().as_str(), "none" | "auto") => None,
            Some((v, line)) => Some(self.parse(sec, key, &v, line)?),
            None => default,
        };
        let shown = value.as_ref().map_or_else(|| "none".to_string(), |v| v.to_string());
        self.record(sec, key, shown);
        Ok(value)
    }

    fn choice(&mut self, sec: &str, key: &str, default: &str, allowed: &[&str]) -> Result<String> {
        let value = match self.lookup(sec, key) {
            Some((v, line)) => {
                let v = v.to_ascii_lowercase();
                if !allowed.contains(&v.as_str()) {
                    return Err(ConfigError::at(
                        line,
                        format!("[{sec}] {key}: `{v}` is not one of {}", allowed.join(", ")),
                    ));
                }
                v
            }
            None => default.to_string(),
        };
        self.record(sec, key, value.clone());
        Ok(value)
    }

    /// Reads a value that is deliberately kept out of the resolved header.
    fn unrecorded(&mut self, sec: &str, key: &str) -> Option<String> {
        self.lookup(sec, key).map(|(v, _)| v)
    }

    fn finish(self) -> Result<Resolved> {
        for (si, s) in self.ini.sections.iter().enumerate() {
            if let Some(ei) = self.used[si].iter().position(|u| !u) {
                let e = &s.entries[ei];
                let known = self.resolved.0.iter().any(|(name, _)| *name == s.name);
                let msg = if known {
                    format!("unknown key `{}` in [{}]", e.key, s.name)
                } else {
                    format!("unexpected section [{}]", s.name)
                };
                return Err(ConfigError::at(if known { e.line } else { s.line }, msg));
            }
        }
        Ok(self.resolved)
    }
}
