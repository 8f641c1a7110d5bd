//! Exact stabilizer simulation of Clifford circuits with Z measurement and reset.

mod circuit;
mod tableau;

use std::collections::BTreeMap;

use rand::Rng;

pub use circuit::{Circuit, Gate, GateKind};
pub use tableau::{Measurement, Tableau};

use crate::error::Result;

/// Applies one gate to `tableau`; thin wrapper over [`Tableau::apply`].
pub fn apply_gate<R: Rng + ?Sized>(tableau: &mut Tableau, gate: &Gate, rng: &mut R) -> Result<Option<bool>> {
    tableau.apply(gate, rng)
}

pub fn verify_tableau(tableau: &Tableau) -> bool {
    tableau.verify()
}

/// Runs `circuit` once from `|0...0>` and returns the measurement record.
pub fn run_shot<R: Rng + ?Sized>(circuit: &Circuit, rng: &mut R) -> Result<Vec<bool>> {
    let mut record = vec![false; circuit.num_slots()];
    if circuit.num_qubits() == 0 {
        return Ok(record);
    }
    let mut t = Tableau::new(circuit.num_qubits());
    for g in circuit.gates() {
        if let Some(bit) = t.apply(g, rng)? {
            record[g.slot.expect("measurement carries a slot")] = bit;
        }
    }
    Ok(record)
}

/// Exact distribution of measurement records, obtained by branching on every
/// random measurement. Cost is exponential in the number of random outcomes.
pub fn exact_record_distribution(circuit: &Circuit) -> Result<BTreeMap<Vec<bool>, f64>> {
    let mut out = BTreeMap::new();
    let record = vec![false; circuit.num_slots()];
    if circuit.num_qubits() == 0 {
        out.insert(record, 1.0);
        return Ok(out);
    }
    branch(circuit, 0, Tableau::new(circuit.num_qubits()), record, 1.0, &mut out)?;
    Ok(out)
}

fn branch(
    circuit: &Circuit,
    start: usize,
    mut t: Tableau,
    mut record: Vec<bool>,
    weight: f64,
    out: &mut BTreeMap<Vec<bool>, f64>,
) -> Result<()> {
    for (i, g) in circuit.gates().iter().enumerate().skip(start) {
        if matches!(g.kind, GateKind::MeasureZ | GateKind::Reset) {
            let q = g.qubits()[0];
            let mut probe = t.clone();
            if probe.measure_with(q, || false).random {
                for bit in [false, true] {
                    let mut tb = t.clone();
                    let mut rb = record.clone();
                    if let Some(b) = tb.apply_with(g, || bit)? {
                        rb[g.slot.expect("measurement carries a slot")] = b;
                    }
                    branch(circuit, i + 1, tb, rb, weight / 2.0, out)?;
                }
                return Ok(());
            }
        }
        if let Some(bit) = t.apply_with(g, || unreachable!("deterministic branch"))? {
            record[g.slot.expect("measurement carries a slot")] = bit;
        }
    }
    *out.entry(record).or_insert(0.0) += weight;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn entangling_circuit_record() {
        let mut c = Circuit::new(2);
        c.push(Gate::x(0)).unwrap();
        c.push(Gate::cnot(0, 1)).unwrap();
        c.measure(0).unwrap();
        c.measure(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(run_shot(&c, &mut rng).unwrap(), vec![true, true]);
    }

    #[test]
    fn empty_circuit_gives_zero_record() {
        let c = Circuit::from_gates(3, 2, vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(run_shot(&c, &mut rng).unwrap(), vec![false, false]);
    }

    #[test]
    fn exact_distribution_of_ghz() {
        let mut c = Circuit::new(3);
        c.push(Gate::h(0)).unwrap();
        c.push(Gate::cnot(0, 1)).unwrap();
        c.push(Gate::cnot(1, 2)).unwrap();
        for q in 0..3 {
            c.measure(q).unwrap();
        }
        let d = exact_record_distribution(&c).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&vec![false; 3]], 0.5);
        assert_eq!(d[&vec![true; 3]], 0.5);
    }
}
