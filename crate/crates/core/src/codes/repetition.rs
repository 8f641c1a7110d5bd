use super::{Check, CheckBasis, CodeClass, CodeSpec, Emitter, Role, SurfaceCode};
use crate::error::{Error, Result};
use crate::sim::Gate;

/// Repetition code of length `n = max(d_Z, d_X)`.
///
/// `(n, 1)` protects against bit flips with ZZ checks; `(1, n)` protects
/// against phase flips with XX checks and is the bit-flip circuit conjugated
/// by H on the data qubits. Qubits: `n` data, `n - 1` checks, one ancilla.
pub fn build_repetition(d_z: usize, d_x: usize) -> Result<SurfaceCode> {
    let invalid = |reason: &str| Error::InvalidDistance { d_z, d_x, reason: reason.into() };
    let (n, basis) = match (d_z, d_x) {
        (n, 1) if n != 1 => (n, CheckBasis::Z),
        (1, n) if n != 1 => (n, CheckBasis::X),
        _ => return Err(invalid("exactly one of d_Z, d_X must be 1")),
    };
    if n < 3 || n % 2 == 0 {
        return Err(invalid("distance must be odd and at least 3"));
    }

    let stab_role = match basis {
        CheckBasis::Z => Role::StabilizerZ,
        CheckBasis::X => Role::StabilizerX,
    };
    let mut roles = vec![Role::Data; n];
    roles.extend(std::iter::repeat_n(stab_role, n - 1));
    roles.push(Role::Ancilla);
    let ancilla = 2 * n - 1;

    let checks: Vec<Check> =
        (0..n - 1).map(|i| Check { basis, qubit: n + i, data: vec![i, i + 1], face: (i + 1, 0) }).collect();

    let mut e = Emitter::new(2 * n);
    if basis == CheckBasis::X {
        for d in 0..n {
            e.push(Gate::h(d));
        }
    }
    e.syndrome_round(&checks);
    for d in 0..n {
        e.push(match basis {
            CheckBasis::Z => Gate::x(d),
            CheckBasis::X => Gate::z(d),
        });
    }
    e.syndrome_round(&checks);

    e.push(Gate::reset(ancilla));
    match basis {
        CheckBasis::Z => e.push(Gate::cnot(0, ancilla)),
        CheckBasis::X => {
            e.push(Gate::h(ancilla));
            e.push(Gate::cnot(ancilla, 0));
            e.push(Gate::h(ancilla));
        }
    }
    let readout_slot = e.circuit.measure(ancilla)?;

    Ok(SurfaceCode {
        spec: CodeSpec::new(CodeClass::Repetition, d_z, d_x),
        circuit: e.circuit,
        roles,
        checks,
        data_coords: (0..n).map(|i| (i, 0)).collect(),
        rounds: 2,
        syndrome_slots: e.syndrome_slots,
        readout_slot,
        readout_data: vec![0],
        readout_basis: basis,
        deterministic_first_round: [true, true],
        round_starts: e.round_starts,
    })
}
