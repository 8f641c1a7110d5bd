//! Seeded Monte-Carlo fault-injection campaigns.
//!
//! A [`CampaignPoint`] fixes everything needed to reproduce one estimate:
//! code, architecture, intrinsic noise, fault and shot count. Its seed is a
//! hash of the master seed and the point's canonical encoding, and shot `i`
//! draws from stream `i` of a ChaCha8 generator, so results do not depend on
//! thread scheduling.

mod output;
mod subgraphs;
mod sweeps;

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::arch::{active_subcircuit, transpile, ArchitectureGraph, GraphSpec, Layout};
use crate::codes::{CodeSpec, SurfaceCode};
use crate::decode::{Decoder, ErrorRate};
use crate::error::{Error, Result};
use crate::noise::{
    erasure_profile, radiation_profile, step_temporal_decay, InstrumentedCircuit, IntrinsicNoiseConfig,
    RadiationFaultConfig,
};
use crate::sim::Circuit;

pub use output::{read_csv, write_csv, write_summary_csv, CsvRow, Manifest, CSV_HEADER};
pub use subgraphs::enumerate_connected_subgraphs;
pub use sweeps::{
    architecture_summary, default_codes, default_distance_arch, distance_summary, log_grid, median, plan_architecture,
    plan_distance, plan_spread, plan_surface, spread_summary, Summary, SweepParams,
};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// The fault injected at a campaign point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Spreading radiation fault rooted at the node hosting code qubit `root`.
    Radiation {
        root: usize,
    },
    /// Non-spreading reset of the node hosting code qubit `root`.
    RootErasure {
        root: usize,
    },
    /// Non-spreading reset of every listed architecture node.
    NodeErasure {
        nodes: Vec<usize>,
    },
}

impl Fault {
    pub fn root(&self) -> Option<usize> {
        match self {
            Fault::Radiation { root } | Fault::RootErasure { root } => Some(*root),
            _ => None,
        }
    }
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fault::None => write!(f, "none"),
            Fault::Radiation { root } => write!(f, "radiation@{root}"),
            Fault::RootErasure { root } => write!(f, "erasure@{root}"),
            Fault::NodeErasure { nodes } => write!(f, "erasure[{}]", join(nodes, ";")),
        }
    }
}

pub(crate) fn join(v: &[usize], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignPoint {
    pub code: CodeSpec,
    pub arch: GraphSpec,
    pub fault: Fault,
    pub phys_error_rate: f64,
    pub peak_prob: f64,
    pub gamma: f64,
    pub n_s: usize,
    pub time_bin: usize,
    pub shots: usize,
    pub seed: u64,
    pub routing_seed: u64,
}

impl CampaignPoint {
    /// A point with the paper's fault defaults (`gamma = 10`, `n_s = 10`),
    /// peak 1 at bin 0 and seeds derived from `master_seed`.
    pub fn new(
        code: CodeSpec,
        arch: GraphSpec,
        fault: Fault,
        phys_error_rate: f64,
        shots: usize,
        master_seed: u64,
    ) -> Self {
        let mut p = Self {
            code,
            arch,
            fault,
            phys_error_rate,
            peak_prob: 1.0,
            gamma: 10.0,
            n_s: 10,
            time_bin: 0,
            shots,
            seed: 0,
            routing_seed: 0,
        };
        p.reseed(master_seed);
        p
    }

    /// Recomputes both seeds after a field change.
    pub fn reseed(&mut self, master_seed: u64) {
        self.seed = derive_seed(master_seed, &self.canonical());
        self.routing_seed = derive_seed(master_seed, &format!("route|{}|{}", self.code, self.arch));
    }

    /// Stable text encoding of every field that affects the result.
    pub fn canonical(&self) -> String {
        format!(
            "{}|{}|{}|p={:e}|peak={:e}|gamma={:e}|n_s={}|k={}|shots={}",
            self.code,
            self.arch,
            self.fault,
            self.phys_error_rate,
            self.peak_prob,
            self.gamma,
            self.n_s,
            self.time_bin,
            self.shots
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::InvalidParameter { name: "shots", reason: "must be at least 1".into() });
        }
        IntrinsicNoiseConfig::new(self.phys_error_rate)?;
        self.fault_config(0)?.validate()?;
        if self.time_bin >= self.n_s {
            return Err(Error::InvalidParameter {
                name: "time_bin",
                reason: format!("{} not in 0..{}", self.time_bin, self.n_s),
            });
        }
        Ok(())
    }

    fn fault_config(&self, root_node: usize) -> Result<RadiationFaultConfig> {
        let cfg = RadiationFaultConfig {
            gamma: self.gamma,
            n_s: self.n_s,
            n_spatial: 1,
            root_qubit: root_node,
            peak_probability: self.peak_prob,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for CampaignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} seed={:016x}", self.canonical(), self.seed)
    }
}

/// First eight bytes (little endian) of SHA-256 over the master seed and the
/// canonical point text.
pub fn derive_seed(master_seed: u64, canonical: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update(canonical.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignResult {
    pub point: CampaignPoint,
    pub rate: ErrorRate,
    /// Architecture nodes reset by a non-spreading fault.
    pub erased_nodes: Vec<usize>,
    pub swaps: usize,
    pub wall_time: Duration,
    pub engine_version: &'static str,
}

/// A code routed onto an architecture and restricted to the nodes it uses.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub code: SurfaceCode,
    pub graph: ArchitectureGraph,
    pub layout: Layout,
    /// Routed circuit over the active nodes only.
    pub circuit: Circuit,
    /// Architecture node of each qubit of `circuit`.
    pub nodes: Vec<usize>,
    pub decoder: Decoder,
}

impl Prepared {
    pub fn new(code: &CodeSpec, arch: &GraphSpec, routing_seed: u64) -> Result<Self> {
        let code = code.build()?;
        let graph = ArchitectureGraph::build(arch)?;
        let (routed, layout) = transpile(&code.circuit, &graph, routing_seed)?;
        let (circuit, nodes) = active_subcircuit(&routed)?;
        let decoder = Decoder::new(&code);
        Ok(Self { code, graph, layout, circuit, nodes, decoder })
    }

    /// Node initially hosting code qubit `q`.
    pub fn node_of(&self, q: usize) -> Result<usize> {
        self.layout
            .initial()
            .get(q)
            .copied()
            .ok_or(Error::QubitOutOfRange { qubit: q, num_qubits: self.code.num_qubits() })
    }

    /// Per-qubit reset probability of `point`'s fault, and the erased nodes.
    pub fn reset_profile(&self, point: &CampaignPoint) -> Result<(Option<Vec<f64>>, Vec<usize>)> {
        let temporal = step_temporal_decay(point.time_bin, point.gamma, point.n_s)?;
        Ok(match &point.fault {
            Fault::None => (None, Vec::new()),
            Fault::Radiation { root } => {
                let cfg = point.fault_config(self.node_of(*root)?)?;
                (Some(radiation_profile(&cfg, &self.nodes, &self.graph, point.time_bin)?), Vec::new())
            }
            Fault::RootErasure { root } => {
                let node = vec![self.node_of(*root)?];
                (Some(erasure_profile(&node, point.peak_prob * temporal, &self.nodes)), node)
            }
            Fault::NodeErasure { nodes } => {
                if let Some(&bad) = nodes.iter().find(|&&v| !self.graph.contains(v)) {
                    return Err(Error::UnknownNode(bad));
                }
                (Some(erasure_profile(nodes, point.peak_prob * temporal, &self.nodes)), nodes.clone())
            }
        })
    }

    pub fn run(&self, point: &CampaignPoint) -> Result<CampaignResult> {
        point.validate()?;
        let start = Instant::now();
        let (profile, erased_nodes) = self.reset_profile(point)?;
        let intrinsic = IntrinsicNoiseConfig::new(point.phys_error_rate)?;
        let inst = InstrumentedCircuit::new(&self.circuit, &intrinsic, profile.as_deref())?;
        let errors = (0..point.shots as u64)
            .into_par_iter()
            .map(|shot| {
                let mut rng = ChaCha8Rng::seed_from_u64(point.seed);
                rng.set_stream(shot);
                let record = inst.run_shot(&mut rng);
                self.decoder.decode_logical(&record).map(|bit| usize::from(!bit))
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        Ok(CampaignResult {
            point: point.clone(),
            rate: ErrorRate::from_counts(errors, point.shots)?,
            erased_nodes,
            swaps: self.layout.swap_count(),
            wall_time: start.elapsed(),
            engine_version: ENGINE_VERSION,
        })
    }
}

/// Runs one point from scratch (build, route, instrument, sample, decode).
pub fn run_point(point: &CampaignPoint) -> Result<CampaignResult> {
    Prepared::new(&point.code, &point.arch, point.routing_seed)?.run(point)
}

/// Runs `points` in order, routing each distinct code/architecture pair once.
pub fn run_points(points: &[CampaignPoint]) -> Result<Vec<CampaignResult>> {
    let mut cache: HashMap<(CodeSpec, String, u64), Prepared> = HashMap::new();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        let key = (p.code, p.arch.to_string(), p.routing_seed);
        if !cache.contains_key(&key) {
            cache.insert(key.clone(), Prepared::new(&p.code, &p.arch, p.routing_seed)?);
        }
        out.push(cache[&key].run(p)?);
    }
    Ok(out)
}
