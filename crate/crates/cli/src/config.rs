//! Run configuration: `key = value` text files, flag overrides and validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qrad_core::arch::{ArchitectureGraph, GraphSpec};
use qrad_core::codes::{CodeSpec, Role, SurfaceCode};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepKind {
    Surface,
    Distance,
    Spread,
    Arch,
    DecodeDebug,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::Surface => "surface",
            SweepKind::Distance => "distance",
            SweepKind::Spread => "spread",
            SweepKind::Arch => "arch",
            SweepKind::DecodeDebug => "decode-debug",
        }
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "surface" => Ok(SweepKind::Surface),
            "distance" => Ok(SweepKind::Distance),
            "spread" => Ok(SweepKind::Spread),
            "arch" => Ok(SweepKind::Arch),
            "decode-debug" => Ok(SweepKind::DecodeDebug),
            _ => Err(format!("unknown sweep `{s}` (expected surface, distance, spread, arch, decode-debug)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectKind {
    X,
    Y,
    Z,
    Reset,
}

/// Code qubit addressed by role and index within that role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Data(usize),
    ZStab(usize),
    XStab(usize),
    Ancilla,
    Qubit(usize),
}

/// An error placed between the two syndrome rounds, written `x@data2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Injection {
    pub kind: InjectKind,
    pub target: Target,
}

impl Injection {
    /// Code qubit index of the target.
    pub fn qubit(&self, code: &SurfaceCode) -> Result<usize, String> {
        let nth = |role: Role, i: usize, name: &str| {
            let qs = code.qubits_with_role(role);
            qs.get(i).copied().ok_or_else(|| format!("{name}{i} does not exist ({} available)", qs.len()))
        };
        match self.target {
            Target::Data(i) => nth(Role::Data, i, "data"),
            Target::ZStab(i) => nth(Role::StabilizerZ, i, "zstab"),
            Target::XStab(i) => nth(Role::StabilizerX, i, "xstab"),
            Target::Ancilla => Ok(code.ancilla()),
            Target::Qubit(q) if q < code.num_qubits() => Ok(q),
            Target::Qubit(q) => Err(format!("q{q} does not exist ({} qubits)", code.num_qubits())),
        }
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            InjectKind::X => "x",
            InjectKind::Y => "y",
            InjectKind::Z => "z",
            InjectKind::Reset => "reset",
        };
        match self.target {
            Target::Data(i) => write!(f, "{kind}@data{i}"),
            Target::ZStab(i) => write!(f, "{kind}@zstab{i}"),
            Target::XStab(i) => write!(f, "{kind}@xstab{i}"),
            Target::Ancilla => write!(f, "{kind}@ancilla"),
            Target::Qubit(q) => write!(f, "{kind}@q{q}"),
        }
    }
}

impl FromStr for Injection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("`{s}`: expected KIND@TARGET, e.g. x@data2, z@xstab0, reset@ancilla, y@q5");
        let (kind, target) = s.trim().split_once('@').ok_or_else(bad)?;
        let kind = match kind.to_ascii_lowercase().as_str() {
            "x" => InjectKind::X,
            "y" => InjectKind::Y,
            "z" => InjectKind::Z,
            "reset" | "r" => InjectKind::Reset,
            _ => return Err(bad()),
        };
        let target = target.to_ascii_lowercase();
        let index = |prefix: &str| target.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
        let target = if target == "ancilla" {
            Target::Ancilla
        } else if let Some(i) = index("data") {
            Target::Data(i)
        } else if let Some(i) = index("zstab") {
            Target::ZStab(i)
        } else if let Some(i) = index("xstab") {
            Target::XStab(i)
        } else if let Some(i) = index("q") {
            Target::Qubit(i)
        } else {
            return Err(bad());
        };
        Ok(Self { kind, target })
    }
}

/// Everything a run needs. `None` fields take a sweep-dependent default.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sweep: SweepKind,
    /// Empty for the distance sweep means the default code list.
    pub codes: Vec<CodeSpec>,
    /// Empty means each code's default five-row mesh.
    pub archs: Vec<GraphSpec>,
    /// Physical error rate; the surface sweep spans a grid when unset, other sweeps use 1%.
    pub p: Option<f64>,
    /// Peak reset probability; the surface sweep spans a grid when unset, other sweeps use 1.
    pub peak: Option<f64>,
    pub gamma: f64,
    pub n_s: usize,
    /// Points per axis of the surface grid.
    pub grid: usize,
    /// Root code qubit of the surface sweep.
    pub root: usize,
    /// Erased-set sizes of the spread sweep; empty means 1 to the qubit count.
    pub ks: Vec<usize>,
    /// Erased sets sampled per size.
    pub samples: usize,
    pub shots: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub inject: Vec<Injection>,
}

pub const DEFAULT_P: f64 = 0.01;
pub const DEFAULT_OUT: &str = "qrad-out";

impl RunConfig {
    pub fn new(sweep: SweepKind) -> Self {
        Self {
            sweep,
            codes: Vec::new(),
            archs: Vec::new(),
            p: None,
            peak: None,
            gamma: 10.0,
            n_s: 10,
            grid: 8,
            root: 2,
            ks: Vec::new(),
            samples: 8,
            shots: 2000,
            seed: 0,
            threads: None,
            out: PathBuf::from(DEFAULT_OUT),
            inject: Vec::new(),
        }
    }

    pub fn phys_error_rate(&self) -> f64 {
        self.p.unwrap_or(DEFAULT_P)
    }

    /// Renders as config text that [`parse_config`] maps back to `self`.
    pub fn render(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Key/value pairs in render order; unset optional keys are omitted.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let join = |items: Vec<String>| items.join(" ");
        let mut out = vec![("sweep", self.sweep.as_str().to_string())];
        if !self.codes.is_empty() {
            out.push(("code", join(self.codes.iter().map(ToString::to_string).collect())));
        }
        if !self.archs.is_empty() {
            out.push(("arch", join(self.archs.iter().map(ToString::to_string).collect())));
        }
        if let Some(p) = self.p {
            out.push(("p", p.to_string()));
        }
        if let Some(peak) = self.peak {
            out.push(("peak", peak.to_string()));
        }
        out.push(("gamma", self.gamma.to_string()));
        out.push(("n_s", self.n_s.to_string()));
        out.push(("grid", self.grid.to_string()));
        out.push(("root", self.root.to_string()));
        if !self.ks.is_empty() {
            out.push(("k", join(self.ks.iter().map(ToString::to_string).collect())));
        }
        out.push(("samples", self.samples.to_string()));
        out.push(("shots", self.shots.to_string()));
        out.push(("seed", self.seed.to_string()));
        if let Some(t) = self.threads {
            out.push(("threads", t.to_string()));
        }
        out.push(("out", self.out.display().to_string()));
        if !self.inject.is_empty() {
            out.push(("inject", join(self.inject.iter().map(ToString::to_string).collect())));
        }
        out
    }

    /// Sets `key` from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn one<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse::<T>().map_err(|e| e.to_string())
        }
        fn many<T: FromStr>(v: &str) -> Result<Vec<T>, String>
        where
            T::Err: fmt::Display,
        {
            v.split_whitespace().map(one).collect()
        }
        match key {
            "sweep" => self.sweep = one(value)?,
            "code" => self.codes = many(value)?,
            "arch" => self.archs = many(value)?,
            "p" => self.p = Some(one(value)?),
            "peak" => self.peak = Some(one(value)?),
            "gamma" => self.gamma = one(value)?,
            "n_s" => self.n_s = one(value)?,
            "grid" => self.grid = one(value)?,
            "root" => self.root = one(value)?,
            "k" => self.ks = many(value)?,
            "samples" => self.samples = one(value)?,
            "shots" => self.shots = one(value)?,
            "seed" => self.seed = one(value)?,
            "threads" => self.threads = Some(one(value)?),
            "out" => self.out = PathBuf::from(value),
            "inject" => self.inject = many(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Checks every field against the sweep's requirements.
    pub fn validate(&self) -> Result<(), CliError> {
        let field = |name: &str, msg: String| CliError::Config(format!("{name}: {msg}"));
        let needs_code = self.sweep != SweepKind::Distance;
        if needs_code && self.codes.is_empty() {
            return Err(field("code", format!("required for the {} sweep", self.sweep.as_str())));
        }
        if self.sweep == SweepKind::DecodeDebug && self.codes.len() != 1 {
            return Err(field("code", "decode-debug takes exactly one code".into()));
        }
        if self.sweep == SweepKind::Arch && self.archs.is_empty() {
            return Err(field("arch", "the arch sweep needs at least one architecture".into()));
        }
        let mut built = Vec::new();
        for c in &self.codes {
            built.push(c.build().map_err(|e| field("code", e.to_string()))?);
        }
        let mut sizes = Vec::new();
        for a in &self.archs {
            sizes.push((a, ArchitectureGraph::build(a).map_err(|e| field("arch", e.to_string()))?.num_nodes()));
        }
        for code in &built {
            for &(a, n) in &sizes {
                if n < code.num_qubits() {
                    return Err(field("arch", format!("{a} has {n} nodes, {} needs {}", code.spec, code.num_qubits())));
                }
            }
        }
        for (name, v) in [("p", self.p), ("peak", self.peak)] {
            if let Some(v) = v {
                if !(0.0..=1.0).contains(&v) {
                    return Err(field(name, format!("{v} is not a probability")));
                }
            }
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(field("gamma", format!("{} must be positive", self.gamma)));
        }
        let positive = [("n_s", self.n_s), ("grid", self.grid), ("samples", self.samples), ("shots", self.shots)];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(field(name, "must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(field("threads", "must be at least 1".into()));
        }
        if self.sweep == SweepKind::Arch && self.shots < self.n_s {
            return Err(field("shots", format!("{} cannot be split over {} time bins", self.shots, self.n_s)));
        }
        for code in &built {
            if self.sweep == SweepKind::Surface && self.root >= code.num_qubits() {
                return Err(field("root", format!("{} has no qubit {}", code.spec, self.root)));
            }
            if self.sweep == SweepKind::Spread {
                if let Some(k) = self.ks.iter().find(|&&k| k == 0 || k > code.num_qubits()) {
                    return Err(field("k", format!("{k} not in 1..={} for {}", code.num_qubits(), code.spec)));
                }
            }
            if self.sweep == SweepKind::DecodeDebug {
                for inj in &self.inject {
                    inj.qubit(code).map_err(|e| field("inject", e))?;
                }
            }
        }
        Ok(())
    }
}

/// Parses `key = value` lines; `#` starts a comment. The sweep may come
/// from the text or from `sweep`; the text wins when both are given.
pub fn parse_config(text: &str, sweep: Option<SweepKind>) -> Result<RunConfig, CliError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Config(format!("line {}: {msg}", i + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if pairs.iter().any(|(k, _, _)| *k == key) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        pairs.push((key, value, i + 1));
    }
    let sweep = match pairs.iter().find(|(k, _, _)| *k == "sweep") {
        Some((_, v, line)) => v.parse().map_err(|e| CliError::Config(format!("line {line}: sweep: {e}")))?,
        None => sweep.ok_or_else(|| CliError::Config("sweep: not given".into()))?,
    };
    let mut config = RunConfig::new(sweep);
    for (key, value, line) in pairs {
        config.set(key, value).map_err(|e| CliError::Config(format!("line {line}: {key}: {e}")))?;
    }
    Ok(config)
}
