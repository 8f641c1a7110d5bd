//! Dense state-vector simulator used only as a test oracle for the tableau.

use std::collections::BTreeMap;

use qrad_core::sim::{Circuit, Gate, GateKind};

#[derive(Clone)]
pub struct StateVector {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

const EPS: f64 = 1e-12;

impl StateVector {
    pub fn new(n: usize) -> Self {
        let mut re = vec![0.0; 1 << n];
        re[0] = 1.0;
        Self { n, re, im: vec![0.0; 1 << n] }
    }

    fn h(&mut self, q: usize) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = 1 << q;
        for i in 0..(1 << self.n) {
            if i & m == 0 {
                let j = i | m;
                let (ar, ai, br, bi) = (self.re[i], self.im[i], self.re[j], self.im[j]);
                self.re[i] = s * (ar + br);
                self.im[i] = s * (ai + bi);
                self.re[j] = s * (ar - br);
                self.im[j] = s * (ai - bi);
            }
        }
    }

    fn x(&mut self, q: usize) {
        let m = 1 << q;
        for i in 0..(1 << self.n) {
            if i & m == 0 {
                self.re.swap(i, i | m);
                self.im.swap(i, i | m);
            }
        }
    }

    /// Multiplies amplitudes with bit q set by (c_re + i c_im).
    fn phase(&mut self, q: usize, c_re: f64, c_im: f64) {
        let m = 1 << q;
        for i in 0..(1 << self.n) {
            if i & m != 0 {
                let (r, im) = (self.re[i], self.im[i]);
                self.re[i] = r * c_re - im * c_im;
                self.im[i] = r * c_im + im * c_re;
            }
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        let (mc, mt) = (1 << c, 1 << t);
        for i in 0..(1 << self.n) {
            if i & mc != 0 && i & mt == 0 {
                self.re.swap(i, i | mt);
                self.im.swap(i, i | mt);
            }
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (ma, mb) = (1 << a, 1 << b);
        for i in 0..(1 << self.n) {
            if i & ma != 0 && i & mb == 0 {
                let j = (i & !ma) | mb;
                self.re.swap(i, j);
                self.im.swap(i, j);
            }
        }
    }

    fn prob_one(&self, q: usize) -> f64 {
        let m = 1 << q;
        (0..(1 << self.n)).filter(|i| i & m != 0).map(|i| self.re[i] * self.re[i] + self.im[i] * self.im[i]).sum()
    }

    fn collapse(&mut self, q: usize, bit: bool, prob: f64) {
        let m = 1 << q;
        let norm = prob.sqrt();
        for i in 0..(1 << self.n) {
            if (i & m != 0) == bit {
                self.re[i] /= norm;
                self.im[i] /= norm;
            } else {
                self.re[i] = 0.0;
                self.im[i] = 0.0;
            }
        }
    }

    fn unitary(&mut self, g: &Gate) {
        let q = g.qubits();
        match g.kind {
            GateKind::H => self.h(q[0]),
            GateKind::X => self.x(q[0]),
            GateKind::Y => {
                self.x(q[0]);
                // Equal to Y up to a global phase.
                self.phase(q[0], -1.0, 0.0);
            }
            GateKind::Z => self.phase(q[0], -1.0, 0.0),
            GateKind::S => self.phase(q[0], 0.0, 1.0),
            GateKind::Cnot => self.cnot(q[0], q[1]),
            GateKind::Swap => self.swap(q[0], q[1]),
            GateKind::MeasureZ | GateKind::Reset => unreachable!(),
        }
    }
}

/// Exact record distribution by branching on every measurement outcome.
pub fn record_distribution(circuit: &Circuit) -> BTreeMap<Vec<bool>, f64> {
    let mut out = BTreeMap::new();
    go(circuit, 0, StateVector::new(circuit.num_qubits()), vec![false; circuit.num_slots()], 1.0, &mut out);
    out
}

fn go(c: &Circuit, start: usize, mut sv: StateVector, mut rec: Vec<bool>, w: f64, out: &mut BTreeMap<Vec<bool>, f64>) {
    for (i, g) in c.gates().iter().enumerate().skip(start) {
        if g.kind.is_unitary() {
            sv.unitary(g);
            continue;
        }
        let q = g.qubits()[0];
        let p1 = sv.prob_one(q);
        let mut branches = Vec::new();
        if p1 > EPS {
            branches.push((true, p1));
        }
        if 1.0 - p1 > EPS {
            branches.push((false, 1.0 - p1));
        }
        if branches.len() == 1 {
            let (bit, p) = branches[0];
            sv.collapse(q, bit, p);
            finish_measure(g, q, bit, &mut sv, &mut rec);
            continue;
        }
        for (bit, p) in branches {
            let mut s2 = sv.clone();
            let mut r2 = rec.clone();
            s2.collapse(q, bit, p);
            finish_measure(g, q, bit, &mut s2, &mut r2);
            go(c, i + 1, s2, r2, w * p, out);
        }
        return;
    }
    *out.entry(rec).or_insert(0.0) += w;
}

fn finish_measure(g: &Gate, q: usize, bit: bool, sv: &mut StateVector, rec: &mut [bool]) {
    match g.kind {
        GateKind::MeasureZ => rec[g.slot.unwrap()] = bit,
        GateKind::Reset => {
            if bit {
                sv.x(q);
            }
        }
        _ => unreachable!(),
    }
}

pub fn total_variation(a: &BTreeMap<Vec<bool>, f64>, b: &BTreeMap<Vec<bool>, f64>) -> f64 {
    let mut keys: Vec<&Vec<bool>> = a.keys().chain(b.keys()).collect();
    keys.sort();
    keys.dedup();
    0.5 * keys.iter().map(|k| (a.get(*k).unwrap_or(&0.0) - b.get(*k).unwrap_or(&0.0)).abs()).sum::<f64>()
}
