//! Repetition and XXZZ surface-code circuits.
//!
//! Both code families share one layout: data qubits first, then Z-type
//! stabilizer qubits, then X-type stabilizer qubits, then a single readout
//! ancilla. Every circuit prepares logical `|0>`, runs a syndrome round,
//! applies a transversal logical X, runs a second syndrome round and reads
//! the logical Z operator into the ancilla. Noiselessly the ancilla reads 1.

mod repetition;
mod xxzz;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sim::{Circuit, Gate};

pub use repetition::build_repetition;
pub use xxzz::build_xxzz;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeClass {
    Repetition,
    Xxzz,
}

impl CodeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CodeClass::Repetition => "rep",
            CodeClass::Xxzz => "xxzz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Data,
    StabilizerZ,
    StabilizerX,
    Ancilla,
}

/// Pauli type of a stabilizer check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckBasis {
    /// Z-type checks, detecting bit flips.
    Z,
    /// X-type checks, detecting phase flips.
    X,
}

/// One stabilizer generator and the qubit that measures it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub basis: CheckBasis,
    pub qubit: usize,
    /// Data qubits in CNOT order.
    pub data: Vec<usize>,
    /// Face coordinates on the lattice, `(row, col)`.
    pub face: (usize, usize),
}

/// Code class and distance, e.g. `rep:5,1` or `xxzz:3,3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodeSpec {
    pub class: CodeClass,
    pub d_z: usize,
    pub d_x: usize,
}

impl CodeSpec {
    pub fn new(class: CodeClass, d_z: usize, d_x: usize) -> Self {
        Self { class, d_z, d_x }
    }

    pub fn build(&self) -> Result<SurfaceCode> {
        match self.class {
            CodeClass::Repetition => build_repetition(self.d_z, self.d_x),
            CodeClass::Xxzz => build_xxzz(self.d_z, self.d_x),
        }
    }

    /// Physical qubit count without building the circuit.
    pub fn num_qubits(&self) -> usize {
        match self.class {
            CodeClass::Repetition => 2 * self.d_z.max(self.d_x),
            CodeClass::Xxzz => 2 * self.d_z * self.d_x,
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{}", self.class.as_str(), self.d_z, self.d_x)
    }
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter { name: "code", reason: format!("`{s}`: expected CLASS:dZ,dX") };
        let (class, dist) = s.trim().split_once(':').ok_or_else(bad)?;
        let class = match class.to_ascii_lowercase().as_str() {
            "rep" | "repetition" => CodeClass::Repetition,
            "xxzz" => CodeClass::Xxzz,
            _ => return Err(bad()),
        };
        let (a, b) = dist.split_once(',').ok_or_else(bad)?;
        let d_z = a.trim().parse().map_err(|_| bad())?;
        let d_x = b.trim().parse().map_err(|_| bad())?;
        Ok(Self { class, d_z, d_x })
    }
}

/// A built code: circuit plus the metadata needed to inject and decode.
#[derive(Debug, Clone)]
pub struct SurfaceCode {
    pub spec: CodeSpec,
    pub circuit: Circuit,
    pub roles: Vec<Role>,
    pub checks: Vec<Check>,
    /// `(row, col)` of each data qubit, indexed like the data qubits.
    pub data_coords: Vec<(usize, usize)>,
    pub rounds: usize,
    /// `syndrome_slots[round][check]` is the classical slot of that measurement.
    pub syndrome_slots: Vec<Vec<usize>>,
    /// Slot of the ancilla readout.
    pub readout_slot: usize,
    /// Data qubits whose joint parity the ancilla reads.
    pub readout_data: Vec<usize>,
    /// Basis of the checks that protect the readout.
    pub readout_basis: CheckBasis,
    /// Whether round-0 outcomes of each basis are fixed by the state preparation.
    pub deterministic_first_round: [bool; 2],
    /// Gate index at which each syndrome round starts.
    pub round_starts: Vec<usize>,
}

pub(crate) fn basis_index(b: CheckBasis) -> usize {
    match b {
        CheckBasis::Z => 0,
        CheckBasis::X => 1,
    }
}

impl SurfaceCode {
    pub fn num_qubits(&self) -> usize {
        self.roles.len()
    }

    pub fn qubits_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.roles.len()).filter(|&q| self.roles[q] == role).collect()
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        self.qubits_with_role(Role::Data)
    }

    pub fn ancilla(&self) -> usize {
        self.roles.len() - 1
    }

    pub fn checks_of(&self, basis: CheckBasis) -> impl Iterator<Item = (usize, &Check)> {
        self.checks.iter().enumerate().filter(move |(_, c)| c.basis == basis)
    }

    /// Largest number of errors always corrected in the bit-flip and phase-flip
    /// basis respectively.
    pub fn correctable_weight_per_basis(&self) -> (usize, usize) {
        ((self.spec.d_z.max(1) - 1) / 2, (self.spec.d_x.max(1) - 1) / 2)
    }

    /// `floor((n-1)/2)` with `n = max(d_Z, d_X)` for repetition codes; the
    /// weaker of the two bases for XXZZ codes.
    pub fn correctable_weight(&self) -> usize {
        let (z, x) = self.correctable_weight_per_basis();
        match self.spec.class {
            CodeClass::Repetition => z.max(x),
            CodeClass::Xxzz => z.min(x),
        }
    }

    /// Gate index right after the logical X, before the second syndrome round.
    pub fn between_rounds(&self) -> usize {
        self.round_starts[1]
    }

    /// The code circuit with `gates` spliced in at gate index `position`.
    pub fn circuit_with_inserted(&self, position: usize, gates: &[Gate]) -> Result<Circuit> {
        let mut all = self.circuit.gates().to_vec();
        all.splice(position..position, gates.iter().copied());
        Circuit::from_gates(self.circuit.num_qubits(), self.circuit.num_slots(), all)
    }
}

pub fn correctable_weight(code: &SurfaceCode) -> usize {
    code.correctable_weight()
}

/// Incrementally records rounds and slots while a builder emits gates.
pub(crate) struct Emitter {
    pub circuit: Circuit,
    pub syndrome_slots: Vec<Vec<usize>>,
    pub round_starts: Vec<usize>,
}

impl Emitter {
    pub fn new(n: usize) -> Self {
        Self { circuit: Circuit::new(n), syndrome_slots: Vec::new(), round_starts: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        self.circuit.push(g).expect("builder emits valid gates");
    }

    /// One syndrome round over `checks`: reset all check qubits, then per
    /// check the CNOTs in data order (wrapped in H for X checks), then measure
    /// in check order.
    pub fn syndrome_round(&mut self, checks: &[Check]) {
        self.round_starts.push(self.circuit.len());
        for c in checks {
            self.push(Gate::reset(c.qubit));
        }
        for c in checks {
            if c.basis == CheckBasis::X {
                self.push(Gate::h(c.qubit));
            }
            for &d in &c.data {
                self.push(match c.basis {
                    CheckBasis::Z => Gate::cnot(d, c.qubit),
                    CheckBasis::X => Gate::cnot(c.qubit, d),
                });
            }
            if c.basis == CheckBasis::X {
                self.push(Gate::h(c.qubit));
            }
        }
        let slots = checks.iter().map(|c| self.circuit.measure(c.qubit).expect("valid qubit")).collect();
        self.syndrome_slots.push(slots);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        let s: CodeSpec = "xxzz:3,5".parse().unwrap();
        assert_eq!(s, CodeSpec::new(CodeClass::Xxzz, 3, 5));
        assert_eq!(s.to_string(), "xxzz:3,5");
        assert_eq!("rep:5,1".parse::<CodeSpec>().unwrap().num_qubits(), 10);
        assert!("surface:3".parse::<CodeSpec>().is_err());
    }
}
