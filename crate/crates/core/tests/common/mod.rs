#![allow(dead_code)]

pub mod statevector;

use qrad_core::sim::{Circuit, Gate, GateKind};
use rand::Rng;

/// Random Clifford + measure + reset circuit with at most `max_meas` measurements.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize, max_meas: usize) -> Circuit {
    let mut c = Circuit::new(n);
    let kinds = [
        GateKind::H,
        GateKind::S,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Cnot,
        GateKind::Swap,
        GateKind::MeasureZ,
        GateKind::Reset,
    ];
    let mut meas = 0;
    for _ in 0..gates {
        let k = kinds[rng.gen_range(0..kinds.len())];
        let a = rng.gen_range(0..n);
        match k {
            GateKind::Cnot | GateKind::Swap if n >= 2 => {
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                c.push(if k == GateKind::Cnot { Gate::cnot(a, b) } else { Gate::swap(a, b) }).unwrap();
            }
            GateKind::Cnot | GateKind::Swap => c.push(Gate::h(a)).unwrap(),
            GateKind::MeasureZ if meas < max_meas => {
                c.measure(a).unwrap();
                meas += 1;
            }
            GateKind::MeasureZ => c.push(Gate::h(a)).unwrap(),
            k => c.push(Gate::single(k, a)).unwrap(),
        }
    }
    c
}
