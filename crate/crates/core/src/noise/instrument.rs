use rand::Rng;

use super::model::{fault_intensity, sample_pauli, IntrinsicNoiseConfig, Pauli, RadiationFaultConfig};
use crate::arch::ArchitectureGraph;
use crate::error::{Error, Result};
use crate::sim::{Circuit, Gate, Tableau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Depolarize1,
    Depolarize2,
    ResetWithProb,
}

/// A stochastic error inserted right after gate `position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSite {
    pub position: usize,
    pub channel: Channel,
    pub probability: f64,
    qubits: [usize; 2],
}

impl ErrorSite {
    pub fn qubits(&self) -> &[usize] {
        match self.channel {
            Channel::Depolarize2 => &self.qubits,
            _ => &self.qubits[..1],
        }
    }
}

/// Circuit plus error sites, sampled independently on every shot.
#[derive(Debug, Clone)]
pub struct InstrumentedCircuit {
    circuit: Circuit,
    sites: Vec<ErrorSite>,
}

/// Per-qubit reset probability of a spreading radiation fault during bin `k`.
///
/// `layout[q]` is the architecture node hosting circuit qubit `q`.
pub fn radiation_profile(
    fault: &RadiationFaultConfig,
    layout: &[usize],
    arch: &ArchitectureGraph,
    k: usize,
) -> Result<Vec<f64>> {
    fault.validate()?;
    if !arch.contains(fault.root_qubit) {
        return Err(Error::UnknownNode(fault.root_qubit));
    }
    let dist = arch.distances_from(fault.root_qubit);
    layout
        .iter()
        .map(|&node| {
            if !arch.contains(node) {
                return Err(Error::UnknownNode(node));
            }
            fault_intensity(k, dist[node], fault)
        })
        .collect()
}

/// Non-spreading erasure: every circuit qubit hosted on a node of `nodes`
/// is reset with `probability` after each of its gates.
pub fn erasure_profile(nodes: &[usize], probability: f64, layout: &[usize]) -> Vec<f64> {
    layout.iter().map(|node| if nodes.contains(node) { probability } else { 0.0 }).collect()
}

/// Attaches intrinsic depolarizing sites and, when `fault` is given, radiation
/// reset sites evaluated on the physical node of each qubit.
pub fn instrument_circuit(
    circuit: &Circuit,
    intrinsic: &IntrinsicNoiseConfig,
    fault: Option<&RadiationFaultConfig>,
    layout: &[usize],
    arch: &ArchitectureGraph,
    k: usize,
) -> Result<InstrumentedCircuit> {
    if layout.len() < circuit.num_qubits() {
        return Err(Error::IncompleteLayout(layout.len()));
    }
    let profile = match fault {
        Some(f) => Some(radiation_profile(f, &layout[..circuit.num_qubits()], arch, k)?),
        None => None,
    };
    InstrumentedCircuit::new(circuit, intrinsic, profile.as_deref())
}

impl InstrumentedCircuit {
    /// `reset_profile[q]`, when present, is the reset probability after every gate on `q`.
    pub fn new(circuit: &Circuit, intrinsic: &IntrinsicNoiseConfig, reset_profile: Option<&[f64]>) -> Result<Self> {
        if let Some(profile) = reset_profile {
            if profile.len() < circuit.num_qubits() {
                return Err(Error::IncompleteLayout(profile.len()));
            }
            if let Some(bad) = profile.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidParameter { name: "reset_probability", reason: format!("{bad}") });
            }
        }
        let p = intrinsic.p();
        let mut sites = Vec::new();
        for (position, g) in circuit.gates().iter().enumerate() {
            let qs = g.qubits();
            if g.kind.is_unitary() {
                let (channel, qubits) = match qs {
                    [a] => (Channel::Depolarize1, [*a, *a]),
                    [a, b] => (Channel::Depolarize2, [*a, *b]),
                    _ => unreachable!(),
                };
                sites.push(ErrorSite { position, channel, probability: p, qubits });
            }
            if let Some(profile) = reset_profile {
                for &q in qs {
                    sites.push(ErrorSite {
                        position,
                        channel: Channel::ResetWithProb,
                        probability: profile[q],
                        qubits: [q, q],
                    });
                }
            }
        }
        Ok(Self { circuit: circuit.clone(), sites })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn sites(&self) -> &[ErrorSite] {
        &self.sites
    }

    /// Number of sites that can fire.
    pub fn active_sites(&self) -> usize {
        self.sites.iter().filter(|s| s.probability > 0.0).count()
    }

    fn fire<R: Rng + ?Sized>(site: &ErrorSite, rng: &mut R, mut emit: impl FnMut(Gate)) {
        match site.channel {
            Channel::Depolarize1 | Channel::Depolarize2 => {
                for &q in site.qubits() {
                    match sample_pauli(site.probability, rng) {
                        Pauli::I => {}
                        Pauli::X => emit(Gate::x(q)),
                        Pauli::Y => emit(Gate::y(q)),
                        Pauli::Z => emit(Gate::z(q)),
                    }
                }
            }
            Channel::ResetWithProb => {
                let hit = match site.probability {
                    p if p <= 0.0 => false,
                    p if p >= 1.0 => true,
                    p => rng.gen::<f64>() < p,
                };
                if hit {
                    emit(Gate::reset(site.qubits[0]));
                }
            }
        }
    }

    /// Samples every site once and returns the resulting concrete circuit.
    pub fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> Circuit {
        let mut gates = Vec::with_capacity(self.circuit.len());
        let mut cursor = 0;
        for (i, g) in self.circuit.gates().iter().enumerate() {
            gates.push(*g);
            while cursor < self.sites.len() && self.sites[cursor].position == i {
                Self::fire(&self.sites[cursor], rng, |e| gates.push(e));
                cursor += 1;
            }
        }
        Circuit::from_gates(self.circuit.num_qubits(), self.circuit.num_slots(), gates)
            .expect("inserted gates reuse valid operands")
    }

    /// Runs one noisy shot, sampling sites on the fly.
    pub fn run_shot<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        let mut record = vec![false; self.circuit.num_slots()];
        let mut t = Tableau::new(self.circuit.num_qubits().max(1));
        let mut cursor = 0;
        let mut pending = Vec::with_capacity(4);
        for (i, g) in self.circuit.gates().iter().enumerate() {
            if let Some(bit) = t.apply(g, rng).expect("validated circuit") {
                record[g.slot.expect("measurement carries a slot")] = bit;
            }
            while cursor < self.sites.len() && self.sites[cursor].position == i {
                Self::fire(&self.sites[cursor], rng, |e| pending.push(e));
                for e in pending.drain(..) {
                    t.apply(&e, rng).expect("validated circuit");
                }
                cursor += 1;
            }
        }
        record
    }
}
