use rand::Rng;

use super::circuit::{Gate, GateKind};
use crate::error::{Error, Result};

/// Outcome of a Z measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measurement {
    pub bit: bool,
    /// True when the outcome was not fixed by the state and had to be drawn.
    pub random: bool,
}

/// Destabilizer/stabilizer tableau over `n` qubits.
///
/// Rows `0..n` are destabilizers, rows `n..2n` stabilizers, row `2n` is
/// scratch space for deterministic measurements. Each row stores its X and
/// Z bits packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    words: usize,
    xs: Vec<u64>,
    zs: Vec<u64>,
    signs: Vec<bool>,
}

#[inline]
fn loc(q: usize) -> (usize, u64) {
    (q / 64, 1u64 << (q % 64))
}

impl Tableau {
    /// The all-zero state `|0...0>`.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "tableau needs at least one qubit");
        let words = n.div_ceil(64);
        let rows = 2 * n + 1;
        let mut t = Self { n, words, xs: vec![0; rows * words], zs: vec![0; rows * words], signs: vec![false; rows] };
        for q in 0..n {
            let (w, m) = loc(q);
            t.xs[q * words + w] |= m;
            t.zs[(q + n) * words + w] |= m;
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn x(&self, row: usize, q: usize) -> bool {
        let (w, m) = loc(q);
        self.xs[row * self.words + w] & m != 0
    }

    #[inline]
    fn z(&self, row: usize, q: usize) -> bool {
        let (w, m) = loc(q);
        self.zs[row * self.words + w] & m != 0
    }

    fn check(&self, q: usize) -> Result<()> {
        if q < self.n {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.n })
        }
    }

    pub fn h(&mut self, q: usize) {
        let (w, m) = loc(q);
        for row in 0..2 * self.n {
            let i = row * self.words + w;
            let (x, z) = (self.xs[i] & m, self.zs[i] & m);
            if x != 0 && z != 0 {
                self.signs[row] ^= true;
            }
            self.xs[i] = (self.xs[i] & !m) | z;
            self.zs[i] = (self.zs[i] & !m) | x;
        }
    }

    pub fn s(&mut self, q: usize) {
        let (w, m) = loc(q);
        for row in 0..2 * self.n {
            let i = row * self.words + w;
            let x = self.xs[i] & m;
            if x != 0 && self.zs[i] & m != 0 {
                self.signs[row] ^= true;
            }
            self.zs[i] ^= x;
        }
    }

    fn pauli(&mut self, q: usize, flip_on_x: bool, flip_on_z: bool) {
        let (w, m) = loc(q);
        for row in 0..2 * self.n {
            let i = row * self.words + w;
            let hit = (flip_on_x && self.xs[i] & m != 0) ^ (flip_on_z && self.zs[i] & m != 0);
            self.signs[row] ^= hit;
        }
    }

    pub fn x_gate(&mut self, q: usize) {
        self.pauli(q, false, true);
    }

    pub fn y_gate(&mut self, q: usize) {
        self.pauli(q, true, true);
    }

    pub fn z_gate(&mut self, q: usize) {
        self.pauli(q, true, false);
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        let (wc, mc) = loc(c);
        let (wt, mt) = loc(t);
        for row in 0..2 * self.n {
            let base = row * self.words;
            let xc = self.xs[base + wc] & mc != 0;
            let zc = self.zs[base + wc] & mc != 0;
            let xt = self.xs[base + wt] & mt != 0;
            let zt = self.zs[base + wt] & mt != 0;
            if xc && zt && (xt == zc) {
                self.signs[row] ^= true;
            }
            if xc {
                self.xs[base + wt] ^= mt;
            }
            if zt {
                self.zs[base + wc] ^= mc;
            }
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        let (wa, ma) = loc(a);
        let (wb, mb) = loc(b);
        for row in 0..2 * self.n {
            let base = row * self.words;
            for v in [&mut self.xs, &mut self.zs] {
                let ba = v[base + wa] & ma != 0;
                let bb = v[base + wb] & mb != 0;
                if ba != bb {
                    v[base + wa] ^= ma;
                    v[base + wb] ^= mb;
                }
            }
        }
    }

    /// Left-multiplies row `h` by row `i`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let mut phase: i64 = 2 * (self.signs[h] as i64 + self.signs[i] as i64);
        for k in 0..w {
            let (x1, z1) = (self.xs[i * w + k], self.zs[i * w + k]);
            let (x2, z2) = (self.xs[h * w + k], self.zs[h * w + k]);
            let (y1, xo1, zo1) = (x1 & z1, x1 & !z1, z1 & !x1);
            let (y2, xo2, zo2) = (x2 & z2, x2 & !z2, z2 & !x2);
            let pos = (y1 & zo2) | (xo1 & y2) | (zo1 & xo2);
            let neg = (y1 & xo2) | (xo1 & zo2) | (zo1 & y2);
            phase += pos.count_ones() as i64 - neg.count_ones() as i64;
            self.xs[h * w + k] = x1 ^ x2;
            self.zs[h * w + k] = z1 ^ z2;
        }
        self.signs[h] = phase.rem_euclid(4) == 2;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.xs.copy_within(src * w..(src + 1) * w, dst * w);
        self.zs.copy_within(src * w..(src + 1) * w, dst * w);
        self.signs[dst] = self.signs[src];
    }

    fn clear_row(&mut self, row: usize) {
        let w = self.words;
        self.xs[row * w..(row + 1) * w].fill(0);
        self.zs[row * w..(row + 1) * w].fill(0);
        self.signs[row] = false;
    }

    /// Measures qubit `q` in the Z basis. `draw` is called only when the
    /// outcome is not determined by the state.
    pub fn measure_with(&mut self, q: usize, draw: impl FnOnce() -> bool) -> Measurement {
        let n = self.n;
        let pivot = (n..2 * n).find(|&row| self.x(row, q));
        match pivot {
            Some(p) => {
                for row in 0..2 * n {
                    if row != p && self.x(row, q) {
                        self.rowsum(row, p);
                    }
                }
                self.copy_row(p - n, p);
                self.clear_row(p);
                let (w, m) = loc(q);
                self.zs[p * self.words + w] |= m;
                let bit = draw();
                self.signs[p] = bit;
                Measurement { bit, random: true }
            }
            None => {
                let scratch = 2 * n;
                self.clear_row(scratch);
                for row in 0..n {
                    if self.x(row, q) {
                        self.rowsum(scratch, row + n);
                    }
                }
                Measurement { bit: self.signs[scratch], random: false }
            }
        }
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Measurement {
        self.measure_with(q, || rng.gen())
    }

    /// Projects qubit `q` onto `|0>`.
    pub fn reset_with(&mut self, q: usize, draw: impl FnOnce() -> bool) {
        if self.measure_with(q, draw).bit {
            self.x_gate(q);
        }
    }

    pub fn reset<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) {
        self.reset_with(q, || rng.gen());
    }

    /// Applies `gate`, returning the measured bit for `MeasureZ`.
    pub fn apply<R: Rng + ?Sized>(&mut self, gate: &Gate, rng: &mut R) -> Result<Option<bool>> {
        self.apply_with(gate, || rng.gen())
    }

    pub fn apply_with(&mut self, gate: &Gate, draw: impl FnOnce() -> bool) -> Result<Option<bool>> {
        for &q in gate.qubits() {
            self.check(q)?;
        }
        let qs = gate.qubits();
        match gate.kind {
            GateKind::H => self.h(qs[0]),
            GateKind::S => self.s(qs[0]),
            GateKind::X => self.x_gate(qs[0]),
            GateKind::Y => self.y_gate(qs[0]),
            GateKind::Z => self.z_gate(qs[0]),
            GateKind::Cnot => self.cnot(qs[0], qs[1]),
            GateKind::Swap => self.swap(qs[0], qs[1]),
            GateKind::Reset => self.reset_with(qs[0], draw),
            GateKind::MeasureZ => return Ok(Some(self.measure_with(qs[0], draw).bit)),
        }
        Ok(None)
    }

    fn symplectic(&self, a: usize, b: usize) -> bool {
        let w = self.words;
        let mut acc = 0u32;
        for k in 0..w {
            acc ^= ((self.xs[a * w + k] & self.zs[b * w + k]) ^ (self.zs[a * w + k] & self.xs[b * w + k])).count_ones()
                & 1;
        }
        acc == 1
    }

    /// Checks the commutation structure of the tableau: stabilizers commute
    /// pairwise, destabilizer `i` anticommutes exactly with stabilizer `i`.
    pub fn verify(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                if self.symplectic(n + i, n + j) {
                    return false;
                }
            }
            for j in 0..n {
                if self.symplectic(i, n + j) != (i == j) {
                    return false;
                }
            }
        }
        true
    }

    /// Toggles the X bit of stabilizer `row` on qubit `q`. Breaks the
    /// tableau; exists for exercising [`Tableau::verify`].
    pub fn toggle_stabilizer_x(&mut self, row: usize, q: usize) {
        let (w, m) = loc(q);
        self.xs[(self.n + row) * self.words + w] ^= m;
    }

    /// Stabilizer generators in reduced row-echelon form, rendered as signed
    /// Pauli strings. Two tableaus describe the same state iff these agree.
    pub fn canonical_stabilizers(&self) -> Vec<String> {
        let mut t = self.clone();
        let n = t.n;
        let mut next = n;
        for pass_x in [true, false] {
            for q in 0..n {
                let hit = |t: &Tableau, r: usize| if pass_x { t.x(r, q) } else { t.z(r, q) && !t.x(r, q) };
                let Some(p) = (next..2 * n).find(|&r| hit(&t, r)) else { continue };
                t.swap_rows(p, next);
                for r in n..2 * n {
                    let clash = if pass_x { t.x(r, q) } else { t.z(r, q) };
                    if r != next && clash {
                        t.rowsum(r, next);
                    }
                }
                next += 1;
            }
        }
        (n..2 * n).map(|r| t.row_string(r)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words;
        for k in 0..w {
            self.xs.swap(a * w + k, b * w + k);
            self.zs.swap(a * w + k, b * w + k);
        }
        self.signs.swap(a, b);
    }

    fn row_string(&self, row: usize) -> String {
        let mut s = String::with_capacity(self.n + 1);
        s.push(if self.signs[row] { '-' } else { '+' });
        for q in 0..self.n {
            s.push(match (self.x(row, q), self.z(row, q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            });
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fresh_tableau_is_valid_and_zero() {
        let t = Tableau::new(3);
        assert!(t.verify());
        assert_eq!(t.canonical_stabilizers(), vec!["+ZII", "+IZI", "+IIZ"]);
    }

    #[test]
    fn hadamard_then_measure_is_balanced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trials = 10_000;
        let ones = (0..trials)
            .filter(|_| {
                let mut t = Tableau::new(1);
                t.h(0);
                t.measure(0, &mut rng).bit
            })
            .count() as f64;
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((ones - trials as f64 / 2.0).abs() < 3.0 * sigma, "{ones}");
    }

    #[test]
    fn x_then_measure_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut t = Tableau::new(1);
        t.x_gate(0);
        let m = t.measure(0, &mut rng);
        assert_eq!(m, Measurement { bit: true, random: false });
    }

    #[test]
    fn reset_after_one_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = Tableau::new(2);
        t.x_gate(1);
        assert!(t.measure(1, &mut rng).bit);
        t.reset(1, &mut rng);
        assert!(!t.measure(1, &mut rng).bit);
    }

    #[test]
    fn bell_pair_is_correlated() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let mut t = Tableau::new(2);
            t.h(0);
            t.cnot(0, 1);
            let a = t.measure(0, &mut rng);
            let b = t.measure(1, &mut rng);
            assert!(a.random && !b.random);
            assert_eq!(a.bit, b.bit);
        }
    }

    #[test]
    fn y_and_s_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // S^2 = Z, so H S S H = X.
        let mut t = Tableau::new(1);
        t.h(0);
        t.s(0);
        t.s(0);
        t.h(0);
        assert!(t.measure(0, &mut rng).bit);
        let mut t = Tableau::new(1);
        t.y_gate(0);
        assert!(t.measure(0, &mut rng).bit);
        // |+> is stabilized by +X; Z maps it to -X.
        let mut t = Tableau::new(1);
        t.h(0);
        t.z_gate(0);
        assert_eq!(t.canonical_stabilizers(), vec!["-X"]);
    }

    #[test]
    fn broken_row_fails_verification() {
        let mut t = Tableau::new(3);
        t.h(0);
        t.cnot(0, 1);
        assert!(t.verify());
        t.toggle_stabilizer_x(0, 2);
        assert!(!t.verify());
    }

    #[test]
    fn out_of_range_operand() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut t = Tableau::new(2);
        assert_eq!(t.apply(&Gate::x(2), &mut rng), Err(Error::QubitOutOfRange { qubit: 2, num_qubits: 2 }));
    }

    #[test]
    fn wide_tableau_crosses_word_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = Tableau::new(130);
        t.h(3);
        for q in [70, 129] {
            t.cnot(3, q);
        }
        assert!(t.verify());
        let a = t.measure(129, &mut rng).bit;
        assert_eq!(t.measure(70, &mut rng).bit, a);
        assert_eq!(t.measure(3, &mut rng).bit, a);
    }
}
