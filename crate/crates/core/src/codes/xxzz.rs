use super::{Check, CheckBasis, CodeClass, CodeSpec, Emitter, Role, SurfaceCode};
use crate::error::{Error, Result};
use crate::sim::Gate;

/// Rotated XXZZ surface code on a `d_Z x d_X` data mesh (`d_Z` rows).
///
/// Faces `(r, c)` with `0 <= r <= d_Z`, `0 <= c <= d_X` sit between data
/// qubits; a face is X-type when `r + c` is odd and Z-type otherwise.
/// Interior faces are weight four. Weight-two faces are kept on the top and
/// bottom edges when X-type and on the left and right edges when Z-type, so
/// logical X runs along a column (length `d_Z`) and logical Z along a row
/// (length `d_X`). Checks are emitted in row-major face order and each face
/// touches its data qubits clockwise from the top-left corner.
pub fn build_xxzz(d_z: usize, d_x: usize) -> Result<SurfaceCode> {
    let invalid = |reason: &str| Error::InvalidDistance { d_z, d_x, reason: reason.into() };
    if d_z.is_multiple_of(2) || d_x.is_multiple_of(2) {
        return Err(invalid("distances must be odd"));
    }
    if d_z == 1 && d_x == 1 {
        return Err(invalid("(1,1) encodes nothing"));
    }
    let (rows, cols) = (d_z, d_x);
    let n_data = rows * cols;
    let data_at = |r: isize, c: isize| -> Option<usize> {
        (r >= 0 && c >= 0 && (r as usize) < rows && (c as usize) < cols).then(|| r as usize * cols + c as usize)
    };

    let mut faces = Vec::new();
    for r in 0..=rows {
        for c in 0..=cols {
            let basis = if (r + c) % 2 == 1 { CheckBasis::X } else { CheckBasis::Z };
            let row_edge = r == 0 || r == rows;
            let col_edge = c == 0 || c == cols;
            let keep = match (row_edge, col_edge) {
                (false, false) => true,
                (true, false) => basis == CheckBasis::X,
                (false, true) => basis == CheckBasis::Z,
                (true, true) => false,
            };
            if !keep {
                continue;
            }
            let (ri, ci) = (r as isize, c as isize);
            let data: Vec<usize> = [(ri - 1, ci - 1), (ri - 1, ci), (ri, ci), (ri, ci - 1)]
                .into_iter()
                .filter_map(|(a, b)| data_at(a, b))
                .collect();
            faces.push((basis, (r, c), data));
        }
    }

    let n_z = faces.iter().filter(|f| f.0 == CheckBasis::Z).count();
    let n_x = faces.len() - n_z;
    let mut next_z = n_data;
    let mut next_x = n_data + n_z;
    let checks: Vec<Check> = faces
        .into_iter()
        .map(|(basis, face, data)| {
            let slot = match basis {
                CheckBasis::Z => &mut next_z,
                CheckBasis::X => &mut next_x,
            };
            *slot += 1;
            Check { basis, qubit: *slot - 1, data, face }
        })
        .collect();

    let total = n_data + n_z + n_x + 1;
    let ancilla = total - 1;
    let mut roles = vec![Role::Data; n_data];
    roles.extend(std::iter::repeat_n(Role::StabilizerZ, n_z));
    roles.extend(std::iter::repeat_n(Role::StabilizerX, n_x));
    roles.push(Role::Ancilla);

    let mut e = Emitter::new(total);
    e.syndrome_round(&checks);
    for d in 0..n_data {
        e.push(Gate::x(d));
    }
    e.syndrome_round(&checks);
    e.push(Gate::reset(ancilla));
    let readout_data: Vec<usize> = (0..cols).collect();
    for &d in &readout_data {
        e.push(Gate::cnot(d, ancilla));
    }
    let readout_slot = e.circuit.measure(ancilla)?;

    Ok(SurfaceCode {
        spec: CodeSpec::new(CodeClass::Xxzz, d_z, d_x),
        circuit: e.circuit,
        roles,
        checks,
        data_coords: (0..n_data).map(|i| (i / cols, i % cols)).collect(),
        rounds: 2,
        syndrome_slots: e.syndrome_slots,
        readout_slot,
        readout_data,
        readout_basis: CheckBasis::Z,
        deterministic_first_round: [true, false],
        round_starts: e.round_starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{exact_record_distribution, Tableau};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn distance_3_3_layout() {
        let c = build_xxzz(3, 3).unwrap();
        assert_eq!(c.num_qubits(), 18);
        assert_eq!(c.qubits_with_role(Role::Data).len(), 9);
        assert_eq!(c.qubits_with_role(Role::StabilizerZ).len(), 4);
        assert_eq!(c.qubits_with_role(Role::StabilizerX).len(), 4);
        assert_eq!(c.qubits_with_role(Role::Ancilla), vec![17]);
        assert_eq!(c.correctable_weight_per_basis(), (1, 1));
        // Clockwise from top-left on the interior face (1,1).
        let f = c.checks.iter().find(|ch| ch.face == (1, 1)).unwrap();
        assert_eq!(f.data, vec![0, 1, 4, 3]);
    }

    #[test]
    fn rectangular_sizes() {
        assert_eq!(build_xxzz(3, 5).unwrap().num_qubits(), 30);
        assert_eq!(build_xxzz(3, 1).unwrap().num_qubits(), 6);
        assert_eq!(build_xxzz(1, 3).unwrap().num_qubits(), 6);
        assert!(build_xxzz(2, 3).is_err());
        assert!(build_xxzz(1, 1).is_err());
    }

    #[test]
    fn checks_commute_and_are_independent() {
        for (z, x) in [(3, 3), (3, 5), (5, 3), (3, 1), (1, 3), (5, 5)] {
            let c = build_xxzz(z, x).unwrap();
            for a in &c.checks {
                for b in &c.checks {
                    if a.basis != b.basis {
                        let overlap = a.data.iter().filter(|d| b.data.contains(d)).count();
                        assert_eq!(overlap % 2, 0, "({z},{x}) {a:?} {b:?}");
                    }
                }
            }
            // Each data qubit lies in one or two checks of each present basis.
            for d in c.data_qubits() {
                for basis in [CheckBasis::Z, CheckBasis::X] {
                    if c.checks_of(basis).count() == 0 {
                        continue;
                    }
                    let k = c.checks_of(basis).filter(|(_, ch)| ch.data.contains(&d)).count();
                    assert!((1..=2).contains(&k), "({z},{x}) data {d} in {k} {basis:?} checks");
                }
            }
        }
    }

    #[test]
    fn noiseless_readout_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (z, x) in [(3, 3), (3, 1), (1, 3), (3, 5), (5, 3)] {
            let code = build_xxzz(z, x).unwrap();
            for _ in 0..50 {
                let rec = crate::sim::run_shot(&code.circuit, &mut rng).unwrap();
                assert!(rec[code.readout_slot]);
                for (i, ch) in code.checks.iter().enumerate() {
                    let (r0, r1) = (rec[code.syndrome_slots[0][i]], rec[code.syndrome_slots[1][i]]);
                    assert_eq!(r0, r1, "({z},{x}) check {i}");
                    if ch.basis == CheckBasis::Z {
                        assert!(!r0);
                    }
                }
            }
        }
        let _ = Tableau::new(1);
        let small = build_xxzz(3, 1).unwrap();
        assert!(exact_record_distribution(&small.circuit).unwrap().keys().all(|r| r[small.readout_slot]));
    }
}
