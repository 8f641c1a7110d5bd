//! Fixtures shared by the benchmarks.

use qrad_core::sim::{Circuit, Gate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random H/S/CNOT circuit ending in a measurement of every qubit.
pub fn clifford_circuit(n: usize, gates: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..gates {
        let a = rng.gen_range(0..n);
        let g = match rng.gen_range(0..3) {
            0 => Gate::h(a),
            1 => Gate::s(a),
            _ => {
                let b = (a + rng.gen_range(1..n)) % n;
                Gate::cnot(a, b)
            }
        };
        c.push(g).expect("qubits in range");
    }
    for q in 0..n {
        c.measure(q).expect("qubit in range");
    }
    c
}

/// Complete graph on `n` nodes with random weights below 100.
pub fn matching_graph(n: usize, seed: u64) -> Vec<(usize, usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            edges.push((a, b, rng.gen_range(0..100)));
        }
    }
    edges
}
