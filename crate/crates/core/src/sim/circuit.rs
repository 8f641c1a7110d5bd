use std::fmt;

use crate::error::{Error, Result};

/// Gate kinds supported by the stabilizer engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Cnot,
    Swap,
    MeasureZ,
    Reset,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Unitary gates are everything except measurement and reset.
    pub fn is_unitary(self) -> bool {
        !matches!(self, GateKind::MeasureZ | GateKind::Reset)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::MeasureZ => "MEASURE_Z",
            GateKind::Reset => "RESET",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<Self> {
        Some(match s {
            "H" => GateKind::H,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "S" => GateKind::S,
            "CNOT" => GateKind::Cnot,
            "SWAP" => GateKind::Swap,
            "MEASURE_Z" => GateKind::MeasureZ,
            "RESET" => GateKind::Reset,
            _ => return None,
        })
    }
}

/// A single circuit instruction. For `Cnot` the first operand is the control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    operands: [usize; 2],
    pub slot: Option<usize>,
}

impl Gate {
    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }
    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }
    pub fn y(q: usize) -> Self {
        Self::single(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Self {
        Self::single(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Self {
        Self::single(GateKind::S, q)
    }
    pub fn reset(q: usize) -> Self {
        Self::single(GateKind::Reset, q)
    }
    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, operands: [control, target], slot: None }
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Self { kind: GateKind::Swap, operands: [a, b], slot: None }
    }
    pub fn measure(q: usize, slot: usize) -> Self {
        Self { kind: GateKind::MeasureZ, operands: [q, q], slot: Some(slot) }
    }

    /// Builds a single-qubit non-measurement gate.
    ///
    /// Panics if `kind` is two-qubit or a measurement.
    pub fn single(kind: GateKind, q: usize) -> Self {
        assert!(kind.arity() == 1 && kind != GateKind::MeasureZ, "{kind:?} is not a plain single-qubit gate");
        Self { kind, operands: [q, q], slot: None }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.operands[..self.kind.arity()]
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubits().contains(&q)
    }

    /// Returns the same gate acting on `f(q)` for every operand.
    pub fn map_qubits(&self, mut f: impl FnMut(usize) -> usize) -> Self {
        let mut g = *self;
        g.operands = [f(self.operands[0]), f(self.operands[1])];
        g
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.mnemonic(), self.operands[0])?;
        if self.kind.arity() == 2 {
            write!(f, ",{}", self.operands[1])?;
        }
        if let Some(slot) = self.slot {
            write!(f, "->{slot}")?;
        }
        Ok(())
    }
}

/// Ordered gate list over `num_qubits` qubits writing into `num_slots`
/// classical measurement slots.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    num_qubits: usize,
    num_slots: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, num_slots: 0, gates: Vec::new() }
    }

    /// Builds a circuit from parts, checking every invariant.
    pub fn from_gates(num_qubits: usize, num_slots: usize, gates: Vec<Gate>) -> Result<Self> {
        let c = Self { num_qubits, num_slots, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate. Measurements without a slot are not allowed; use [`Circuit::measure`].
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        self.check_gate(&gate)?;
        if let Some(slot) = gate.slot {
            if self.gates.iter().any(|g| g.slot == Some(slot)) {
                return Err(Error::InvalidCircuit(format!("slot {slot} written twice")));
            }
            self.num_slots = self.num_slots.max(slot + 1);
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a Z measurement into the next free slot and returns that slot.
    pub fn measure(&mut self, q: usize) -> Result<usize> {
        let slot = self.num_slots;
        self.push(Gate::measure(q, slot))?;
        Ok(slot)
    }

    fn check_gate(&self, gate: &Gate) -> Result<()> {
        for &q in gate.qubits() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
            }
        }
        if gate.kind.arity() == 2 && gate.qubits()[0] == gate.qubits()[1] {
            return Err(Error::InvalidCircuit(format!("{gate} acts twice on one qubit")));
        }
        match (gate.kind, gate.slot) {
            (GateKind::MeasureZ, None) => Err(Error::InvalidCircuit("measurement without slot".into())),
            (k, Some(_)) if k != GateKind::MeasureZ => {
                Err(Error::InvalidCircuit(format!("{k:?} cannot carry a classical slot")))
            }
            _ => Ok(()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut written = vec![false; self.num_slots];
        for g in &self.gates {
            self.check_gate(g)?;
            if let Some(slot) = g.slot {
                if slot >= self.num_slots {
                    return Err(Error::InvalidCircuit(format!("slot {slot} >= {}", self.num_slots)));
                }
                if std::mem::replace(&mut written[slot], true) {
                    return Err(Error::InvalidCircuit(format!("slot {slot} written twice")));
                }
            }
        }
        Ok(())
    }

    /// Number of gates acting on `q`.
    pub fn gate_count_on(&self, q: usize) -> usize {
        self.gates.iter().filter(|g| g.touches(q)).count()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.arity() == 2).count()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    /// Same gate list with qubits relabelled through `map`, over `num_qubits` qubits.
    pub fn remap(&self, num_qubits: usize, map: &[usize]) -> Result<Self> {
        let gates = self.gates.iter().map(|g| g.map_qubits(|q| map[q])).collect();
        Self::from_gates(num_qubits, self.num_slots, gates)
    }

    /// Textual dump, one gate per line: `KIND q[,q2][->slot]`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses the format produced by [`Circuit::dump`].
    pub fn parse_dump(num_qubits: usize, text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut num_slots = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::InvalidCircuit(format!("line {}: cannot parse `{line}`", lineno + 1));
            let (kind, rest) = line.split_once(' ').ok_or_else(bad)?;
            let kind = GateKind::from_mnemonic(kind).ok_or_else(bad)?;
            let (ops, slot) = match rest.split_once("->") {
                Some((ops, slot)) => (ops, Some(slot.trim().parse::<usize>().map_err(|_| bad())?)),
                None => (rest, None),
            };
            let qs = ops
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| bad())?;
            if qs.len() != kind.arity() {
                return Err(bad());
            }
            let gate = match (kind, slot) {
                (GateKind::MeasureZ, Some(s)) => {
                    num_slots = num_slots.max(s + 1);
                    Gate::measure(qs[0], s)
                }
                (GateKind::MeasureZ, None) | (_, Some(_)) => return Err(bad()),
                (GateKind::Cnot, None) => Gate::cnot(qs[0], qs[1]),
                (GateKind::Swap, None) => Gate::swap(qs[0], qs[1]),
                (k, None) => Gate::single(k, qs[0]),
            };
            gates.push(gate);
        }
        Self::from_gates(num_qubits, num_slots, gates)
    }
}
