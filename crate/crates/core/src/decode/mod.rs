//! Detection events and minimum-weight perfect matching decoding.
//!
//! For each check basis the data qubits form the edges of a check graph: a
//! data qubit in two checks joins them, a data qubit in a single check joins
//! it to the boundary. Detection events are matched in space-time with weight
//! `hops + |round difference|`; each event also owns a boundary twin, and the
//! twins are joined to each other at weight zero so any subset of events can
//! go to the boundary. The logical bit is the raw ancilla readout flipped by
//! the parity of the readout data qubits crossed by the correction.

mod matching;

use std::collections::VecDeque;

use crate::codes::{basis_index, CheckBasis, SurfaceCode};
use crate::error::{Error, Result};

pub use matching::{max_weight_matching, min_weight_perfect_matching};

/// A syndrome change: check index (into `code.checks`) and round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DetectionEvent {
    pub round: usize,
    pub check: usize,
}

/// Detection events of one record, per basis, sorted by `(round, check)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DetectionEvents {
    pub z: Vec<DetectionEvent>,
    pub x: Vec<DetectionEvent>,
}

impl DetectionEvents {
    pub fn of(&self, basis: CheckBasis) -> &[DetectionEvent] {
        match basis {
            CheckBasis::Z => &self.z,
            CheckBasis::X => &self.x,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty() && self.x.is_empty()
    }

    pub fn len(&self) -> usize {
        self.z.len() + self.x.len()
    }
}

/// Per-record syndrome differences. Round 0 is compared against the all-zero
/// reference when the preparation fixes it; otherwise it only serves as the
/// reference for round 1.
pub fn extract_syndrome(record: &[bool], code: &SurfaceCode) -> Result<DetectionEvents> {
    if record.len() != code.circuit.num_slots() {
        return Err(Error::RecordMismatch { got: record.len(), expected: code.circuit.num_slots() });
    }
    let mut events = DetectionEvents::default();
    for (c, check) in code.checks.iter().enumerate() {
        let fixed = code.deterministic_first_round[basis_index(check.basis)];
        let out = match check.basis {
            CheckBasis::Z => &mut events.z,
            CheckBasis::X => &mut events.x,
        };
        let mut prev = false;
        for (round, slots) in code.syndrome_slots.iter().enumerate() {
            let bit = record[slots[c]];
            if (round > 0 || fixed) && bit != prev {
                out.push(DetectionEvent { round, check: c });
            }
            prev = bit;
        }
    }
    events.z.sort();
    events.x.sort();
    Ok(events)
}

/// Shortest correction paths between the checks of one basis.
#[derive(Debug, Clone)]
struct Lattice {
    /// `local[c]`: position of code check `c` within this basis, if it belongs.
    local: Vec<Option<usize>>,
    /// Data qubits on the shortest path between two local checks.
    paths: Vec<Vec<Vec<usize>>>,
    /// Data qubits on the shortest path from a local check to the boundary.
    boundary: Vec<Option<Vec<usize>>>,
}

impl Lattice {
    fn new(code: &SurfaceCode, basis: CheckBasis) -> Self {
        let members: Vec<usize> = code.checks_of(basis).map(|(i, _)| i).collect();
        let mut local = vec![None; code.checks.len()];
        for (l, &c) in members.iter().enumerate() {
            local[c] = Some(l);
        }
        let m = members.len();
        let bnode = m;
        // adjacency: (neighbour, data qubit), in data-qubit order
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + 1];
        for d in code.data_qubits() {
            let owners: Vec<usize> =
                members.iter().enumerate().filter(|(_, &c)| code.checks[c].data.contains(&d)).map(|(l, _)| l).collect();
            match owners[..] {
                [a] => {
                    adj[a].push((bnode, d));
                    adj[bnode].push((a, d));
                }
                [a, b] => {
                    adj[a].push((b, d));
                    adj[b].push((a, d));
                }
                _ => {}
            }
        }
        let mut paths = vec![vec![Vec::new(); m]; m];
        let mut boundary = vec![None; m];
        for s in 0..m {
            // BFS that does not pass through the boundary node.
            let mut parent: Vec<Option<(usize, usize)>> = vec![None; m + 1];
            let mut seen = vec![false; m + 1];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &(v, d) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = Some((u, d));
                        if v != bnode {
                            queue.push_back(v);
                        }
                    }
                }
            }
            let trace = |mut v: usize| {
                let mut path = Vec::new();
                while let Some((u, d)) = parent[v] {
                    path.push(d);
                    v = u;
                }
                path.reverse();
                path
            };
            for t in 0..m {
                if seen[t] {
                    paths[s][t] = trace(t);
                }
            }
            if seen[bnode] {
                boundary[s] = Some(trace(bnode));
            }
        }
        Self { local, paths, boundary }
    }
}

/// Matching graph over the events of one basis.
///
/// Nodes `0..m` are the events, `m..2m` their boundary twins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingGraph {
    pub basis: CheckBasis,
    pub events: Vec<DetectionEvent>,
    pub edges: Vec<(usize, usize, u64)>,
}

impl DecodingGraph {
    pub fn num_nodes(&self) -> usize {
        2 * self.events.len()
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        node >= self.events.len()
    }
}

/// One matched pair and the data qubits its correction flips.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedPair {
    pub a: DetectionEvent,
    /// `None` when `a` is matched to the boundary.
    pub b: Option<DetectionEvent>,
    pub correction: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisDecoding {
    pub basis: CheckBasis,
    pub pairs: Vec<MatchedPair>,
    /// Data qubits flipped an odd number of times by the correction, sorted.
    pub correction: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub events: DetectionEvents,
    pub z: BasisDecoding,
    pub x: BasisDecoding,
    pub raw_readout: bool,
    pub logical: bool,
}

/// Decoder for one code; precomputes correction paths once.
#[derive(Debug, Clone)]
pub struct Decoder {
    code: SurfaceCode,
    lattices: [Lattice; 2],
    readout_mask: Vec<bool>,
}

impl Decoder {
    pub fn new(code: &SurfaceCode) -> Self {
        let mut readout_mask = vec![false; code.num_qubits()];
        for &d in &code.readout_data {
            readout_mask[d] = true;
        }
        Self {
            lattices: [Lattice::new(code, CheckBasis::Z), Lattice::new(code, CheckBasis::X)],
            code: code.clone(),
            readout_mask,
        }
    }

    pub fn code(&self) -> &SurfaceCode {
        &self.code
    }

    fn lattice(&self, basis: CheckBasis) -> &Lattice {
        &self.lattices[basis_index(basis)]
    }

    fn path(&self, basis: CheckBasis, a: DetectionEvent, b: DetectionEvent) -> &[usize] {
        let lat = self.lattice(basis);
        let (la, lb) = (lat.local[a.check].expect("basis check"), lat.local[b.check].expect("basis check"));
        &lat.paths[la][lb]
    }

    fn boundary_path(&self, basis: CheckBasis, a: DetectionEvent) -> Option<&[usize]> {
        let lat = self.lattice(basis);
        lat.boundary[lat.local[a.check].expect("basis check")].as_deref()
    }

    /// Space-time matching graph for `events` of `basis`.
    pub fn graph(&self, basis: CheckBasis, events: &[DetectionEvent]) -> DecodingGraph {
        let m = events.len();
        let mut edges = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (events[i], events[j]);
                let hops = self.path(basis, a, b).len();
                let same = a.check == b.check;
                if hops > 0 || same {
                    edges.push((i, j, (hops + a.round.abs_diff(b.round)) as u64));
                }
            }
            if let Some(p) = self.boundary_path(basis, events[i]) {
                edges.push((i, m + i, p.len() as u64));
            }
            for j in i + 1..m {
                edges.push((m + i, m + j, 0));
            }
        }
        DecodingGraph { basis, events: events.to_vec(), edges }
    }

    fn decode_basis(&self, basis: CheckBasis, events: &[DetectionEvent]) -> Result<BasisDecoding> {
        let g = self.graph(basis, events);
        let m = events.len();
        let matching = min_weight_perfect_matching(g.num_nodes(), &g.edges)?;
        let mut flips = vec![false; self.code.num_qubits()];
        let mut pairs = Vec::new();
        for (u, v) in matching {
            if u >= m {
                continue;
            }
            let (b, correction) = if v == m + u {
                (None, self.boundary_path(basis, events[u]).expect("boundary edge exists").to_vec())
            } else {
                (Some(events[v]), self.path(basis, events[u], events[v]).to_vec())
            };
            for &d in &correction {
                flips[d] ^= true;
            }
            pairs.push(MatchedPair { a: events[u], b, correction });
        }
        let correction = (0..flips.len()).filter(|&q| flips[q]).collect();
        Ok(BasisDecoding { basis, pairs, correction })
    }

    fn readout_parity(&self, correction: &[usize]) -> bool {
        correction.iter().filter(|&&d| self.readout_mask[d]).count() % 2 == 1
    }

    /// Full decoding of both bases.
    pub fn decode(&self, record: &[bool]) -> Result<Decoded> {
        let events = extract_syndrome(record, &self.code)?;
        let z = self.decode_basis(CheckBasis::Z, &events.z)?;
        let x = self.decode_basis(CheckBasis::X, &events.x)?;
        let raw_readout = record[self.code.readout_slot];
        let used = match self.code.readout_basis {
            CheckBasis::Z => &z,
            CheckBasis::X => &x,
        };
        let logical = raw_readout ^ self.readout_parity(&used.correction);
        Ok(Decoded { events, z, x, raw_readout, logical })
    }

    /// Decoded logical bit; only the basis protecting the readout is matched.
    pub fn decode_logical(&self, record: &[bool]) -> Result<bool> {
        let events = extract_syndrome(record, &self.code)?;
        let basis = self.code.readout_basis;
        let raw = record[self.code.readout_slot];
        let evs = events.of(basis);
        if evs.is_empty() {
            return Ok(raw);
        }
        let d = self.decode_basis(basis, evs)?;
        Ok(raw ^ self.readout_parity(&d.correction))
    }
}

pub fn decode_logical(record: &[bool], code: &SurfaceCode) -> Result<bool> {
    Decoder::new(code).decode_logical(record)
}

/// Logical error rate with a Wilson 95% score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRate {
    pub shots: usize,
    pub errors: usize,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl ErrorRate {
    pub fn from_counts(errors: usize, shots: usize) -> Result<Self> {
        if shots == 0 {
            return Err(Error::EmptyInput);
        }
        let (ci_low, ci_high) = wilson_interval(errors, shots);
        Ok(Self { shots, errors, rate: errors as f64 / shots as f64, ci_low, ci_high })
    }

    /// Standard error of the rate estimate.
    pub fn std_err(&self) -> f64 {
        (self.rate * (1.0 - self.rate) / self.shots as f64).sqrt()
    }
}

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if k == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if k as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (low, high)
}

/// Fraction of records decoding to logical 0 (the prepared state is |1>).
pub fn logical_error_rate(records: &[Vec<bool>], code: &SurfaceCode) -> Result<ErrorRate> {
    let decoder = Decoder::new(code);
    let mut errors = 0;
    for r in records {
        if !decoder.decode_logical(r)? {
            errors += 1;
        }
    }
    ErrorRate::from_counts(errors, records.len())
}
