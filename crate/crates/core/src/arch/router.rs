//! SWAP insertion onto a connectivity graph.
//!
//! Initial placement walks the interaction graph breadth-first and puts each
//! qubit on the free node closest (weighted by interaction count) to its
//! placed partners. Several placements are tried, starting with the most
//! connected qubit on the most connected node, and the one needing the fewest
//! SWAPs wins. Routing is a lookahead heuristic in the style of SABRE: when no
//! front-layer gate is executable, the SWAP minimising the summed distance of
//! the front layer plus a discounted extended set is applied, with a decay
//! penalty against repeatedly swapping the same qubits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::graph::ArchitectureGraph;
use crate::codes::{Role, SurfaceCode};
use crate::error::{Error, Result};
use crate::sim::{Circuit, Gate, GateKind};

const EXTENDED_SET: usize = 20;
const EXTENDED_WEIGHT: f64 = 0.5;
const DECAY_STEP: f64 = 0.001;
const DECAY_RESET: usize = 5;

/// Qubit placement of a routed circuit.
///
/// Positions cover every node of the graph: circuit qubits come first, the
/// remaining entries are the empty nodes, so the map is a permutation at
/// every point of the routed circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    num_logical: usize,
    initial: Vec<usize>,
    final_: Vec<usize>,
    /// `(position in routed circuit, node a, node b)` of each inserted SWAP.
    swaps: Vec<(usize, usize, usize)>,
}

impl Layout {
    pub fn num_logical(&self) -> usize {
        self.num_logical
    }

    /// Node hosting each circuit qubit before the first gate.
    pub fn initial(&self) -> &[usize] {
        &self.initial[..self.num_logical]
    }

    /// Node hosting each circuit qubit after the last gate.
    pub fn final_layout(&self) -> &[usize] {
        &self.final_[..self.num_logical]
    }

    pub fn swap_count(&self) -> usize {
        self.swaps.len()
    }

    pub fn swaps(&self) -> &[(usize, usize, usize)] {
        &self.swaps
    }

    /// Full placement (including empty positions) just before routed gate
    /// `position`.
    pub fn placement_at(&self, position: usize) -> Vec<usize> {
        let mut l2p = self.initial.clone();
        let mut p2l = invert(&l2p);
        for &(pos, a, b) in &self.swaps {
            if pos >= position {
                break;
            }
            swap_nodes(&mut l2p, &mut p2l, a, b);
        }
        l2p
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

fn swap_nodes(l2p: &mut [usize], p2l: &mut [usize], a: usize, b: usize) {
    let (la, lb) = (p2l[a], p2l[b]);
    p2l.swap(a, b);
    l2p[la] = b;
    l2p[lb] = a;
}

/// A two-qubit gate that does not sit on a graph edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingViolation {
    pub position: usize,
    pub gate: Gate,
}

/// Gates of `circuit` that the graph cannot execute directly.
pub fn validate_routing(circuit: &Circuit, graph: &ArchitectureGraph) -> Vec<RoutingViolation> {
    circuit
        .gates()
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            let q = g.qubits();
            q.iter().any(|&v| !graph.contains(v)) || (q.len() == 2 && !graph.has_edge(q[0], q[1]))
        })
        .map(|(position, g)| RoutingViolation { position, gate: *g })
        .collect()
}

/// Routes `circuit` onto `graph`. The output acts on graph nodes and keeps
/// every classical slot; it equals the input up to the qubit permutation
/// recorded in the returned layout.
pub fn transpile(circuit: &Circuit, graph: &ArchitectureGraph, seed: u64) -> Result<(Circuit, Layout)> {
    let n_log = circuit.num_qubits();
    let n_phys = graph.num_nodes();
    if n_log > n_phys {
        return Err(Error::CircuitTooLarge { needed: n_log, available: n_phys });
    }
    let dist = graph.all_pairs_distances();
    let weights = interaction_weights(circuit);
    let mut best: Option<(Circuit, Layout)> = None;
    for (start_l, start_p) in placement_starts(&weights, graph) {
        let placed = place(&weights, graph, &dist, start_l, start_p);
        let routed = route(circuit, graph, &dist, placed, seed)?;
        let better = best.as_ref().is_none_or(|b| routed.1.swap_count() < b.1.swap_count());
        if better {
            let done = routed.1.swap_count() == 0;
            best = Some(routed);
            if done {
                break;
            }
        }
    }
    Ok(best.expect("at least one placement is tried"))
}

/// Symmetric count of two-qubit gates between each pair of circuit qubits.
fn interaction_weights(circuit: &Circuit) -> Vec<Vec<usize>> {
    let n = circuit.num_qubits();
    let mut w = vec![vec![0; n]; n];
    for g in circuit.gates() {
        if let [a, b] = *g.qubits() {
            w[a][b] += 1;
            w[b][a] += 1;
        }
    }
    w
}

fn placement_starts(weights: &[Vec<usize>], graph: &ArchitectureGraph) -> Vec<(usize, usize)> {
    let n = weights.len();
    if n == 0 {
        return vec![(0, 0)];
    }
    let degree = |q: usize| weights[q].iter().filter(|&&w| w > 0).count();
    let hub = (0..n).max_by_key(|&q| (degree(q), std::cmp::Reverse(q))).expect("non-empty");
    let leaf = (0..n).min_by_key(|&q| (degree(q).max(1), q)).expect("non-empty");
    let hub_node =
        (0..graph.num_nodes()).max_by_key(|&v| (graph.degree(v), std::cmp::Reverse(v))).expect("graph has nodes");

    let mut starts = vec![(hub, hub_node)];
    let mut logicals = vec![hub, leaf, 0];
    logicals.dedup();
    for &l in &logicals {
        for v in 0..graph.num_nodes() {
            if !starts.contains(&(l, v)) {
                starts.push((l, v));
            }
        }
    }
    starts
}

/// Breadth-first placement of the interaction graph from `start_l` on
/// `start_p`. Returns a full permutation (empty positions appended).
fn place(
    weights: &[Vec<usize>],
    graph: &ArchitectureGraph,
    dist: &[Vec<usize>],
    start_l: usize,
    start_p: usize,
) -> Vec<usize> {
    let n = weights.len();
    let n_phys = graph.num_nodes();
    let mut pos = vec![usize::MAX; n];
    let mut free = vec![true; n_phys];
    let mut order = Vec::with_capacity(n);
    let mut queued = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    let mut seeds: Vec<usize> = std::iter::once(start_l).chain(0..n).collect();
    seeds.reverse();
    while order.len() < n {
        if queue.is_empty() {
            while let Some(s) = seeds.pop() {
                if !queued[s] {
                    queued[s] = true;
                    queue.push_back(s);
                    break;
                }
            }
        }
        let Some(q) = queue.pop_front() else { break };
        order.push(q);
        let mut nbrs: Vec<usize> = (0..n).filter(|&r| weights[q][r] > 0 && !queued[r]).collect();
        nbrs.sort_by_key(|&r| (std::cmp::Reverse(weights[q][r]), r));
        for r in nbrs {
            queued[r] = true;
            queue.push_back(r);
        }
    }

    for &q in &order {
        let placed_nbrs: Vec<usize> = (0..n).filter(|&r| weights[q][r] > 0 && pos[r] != usize::MAX).collect();
        let unplaced = (0..n).filter(|&r| weights[q][r] > 0 && pos[r] == usize::MAX && r != q).count();
        let node = (0..n_phys)
            .filter(|&v| free[v])
            .min_by_key(|&v| {
                let cost: usize = if placed_nbrs.is_empty() {
                    dist[start_p][v]
                } else {
                    placed_nbrs.iter().map(|&r| weights[q][r] * dist[v][pos[r]]).sum()
                };
                let free_nbrs = graph.neighbors(v).iter().filter(|&&u| free[u]).count();
                (cost, unplaced.saturating_sub(free_nbrs), v)
            })
            .expect("enough nodes");
        pos[q] = node;
        free[node] = false;
    }
    pos.extend((0..n_phys).filter(|&v| free[v]));
    pos
}

fn route(
    circuit: &Circuit,
    graph: &ArchitectureGraph,
    dist: &[Vec<usize>],
    initial: Vec<usize>,
    seed: u64,
) -> Result<(Circuit, Layout)> {
    let gates = circuit.gates();
    let n_phys = graph.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Dependency DAG on shared qubits.
    let mut preds = vec![0usize; gates.len()];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    let mut last: Vec<Option<usize>> = vec![None; circuit.num_qubits()];
    for (i, g) in gates.iter().enumerate() {
        for &q in g.qubits() {
            if let Some(p) = last[q] {
                if !succs[p].contains(&i) {
                    succs[p].push(i);
                    preds[i] += 1;
                }
            }
            last[q] = Some(i);
        }
    }
    let mut front: Vec<usize> = (0..gates.len()).filter(|&i| preds[i] == 0).collect();

    let mut l2p = initial.clone();
    let mut p2l = invert(&l2p);
    let mut swaps = Vec::new();
    let mut decay = vec![1.0f64; n_phys];
    let mut swaps_since_progress = 0usize;
    let mut emitted = Vec::with_capacity(gates.len());

    while !front.is_empty() {
        let ready: Vec<usize> = front
            .iter()
            .copied()
            .filter(|&i| match *gates[i].qubits() {
                [a, b] => graph.has_edge(l2p[a], l2p[b]),
                _ => true,
            })
            .collect();
        if !ready.is_empty() {
            for &i in &ready {
                emitted.push(gates[i].map_qubits(|q| l2p[q]));
                for &s in &succs[i] {
                    preds[s] -= 1;
                    if preds[s] == 0 {
                        front.push(s);
                    }
                }
            }
            front.retain(|i| !ready.contains(i));
            front.sort_unstable();
            decay.iter_mut().for_each(|d| *d = 1.0);
            swaps_since_progress = 0;
            continue;
        }

        let mut apply = |a: usize, b: usize, l2p: &mut Vec<usize>, p2l: &mut Vec<usize>, emitted: &mut Vec<Gate>| {
            swaps.push((emitted.len(), a.min(b), a.max(b)));
            emitted.push(Gate::swap(a.min(b), a.max(b)));
            swap_nodes(l2p, p2l, a, b);
        };

        if swaps_since_progress > 2 * n_phys {
            // Release valve: walk the oldest blocked gate along a shortest path.
            let [a, b] = *gates[front[0]].qubits() else { unreachable!("only two-qubit gates block") };
            while !graph.has_edge(l2p[a], l2p[b]) {
                let (pa, pb) = (l2p[a], l2p[b]);
                let step = *graph
                    .neighbors(pa)
                    .iter()
                    .filter(|&&u| dist[u][pb] + 1 == dist[pa][pb])
                    .min()
                    .expect("connected graph");
                apply(pa, step, &mut l2p, &mut p2l, &mut emitted);
            }
            swaps_since_progress = 0;
            continue;
        }

        let blocked: Vec<[usize; 2]> = front.iter().filter_map(|&i| two_qubits(&gates[i])).collect();
        let extended = extended_set(&front, &succs, &preds, gates);
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        for pair in &blocked {
            for &q in pair {
                let p = l2p[q];
                for &u in graph.neighbors(p) {
                    let c = (p.min(u), p.max(u));
                    if !candidates.contains(&c) {
                        candidates.push(c);
                    }
                }
            }
        }
        candidates.sort_unstable();

        let mut best_score = f64::INFINITY;
        let mut best: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in &candidates {
            swap_nodes(&mut l2p, &mut p2l, a, b);
            let basic: usize = blocked.iter().map(|&[x, y]| dist[l2p[x]][l2p[y]]).sum();
            let mut score = basic as f64 / blocked.len() as f64;
            if !extended.is_empty() {
                let ext: usize = extended.iter().map(|&[x, y]| dist[l2p[x]][l2p[y]]).sum();
                score += EXTENDED_WEIGHT * ext as f64 / extended.len() as f64;
            }
            score *= decay[a].max(decay[b]);
            swap_nodes(&mut l2p, &mut p2l, a, b);
            if score < best_score - 1e-12 {
                best_score = score;
                best.clear();
                best.push((a, b));
            } else if (score - best_score).abs() <= 1e-12 {
                best.push((a, b));
            }
        }
        let &(a, b) = best.choose(&mut rng).expect("blocked gate has candidate swaps");
        apply(a, b, &mut l2p, &mut p2l, &mut emitted);
        decay[a] += DECAY_STEP;
        decay[b] += DECAY_STEP;
        swaps_since_progress += 1;
        if swaps_since_progress.is_multiple_of(DECAY_RESET) {
            decay.iter_mut().for_each(|d| *d = 1.0);
        }
    }

    let out = Circuit::from_gates(n_phys, circuit.num_slots(), emitted)?;
    let layout = Layout { num_logical: circuit.num_qubits(), initial, final_: l2p, swaps };
    Ok((out, layout))
}

fn two_qubits(g: &Gate) -> Option<[usize; 2]> {
    match *g.qubits() {
        [a, b] => Some([a, b]),
        _ => None,
    }
}

/// The next few two-qubit gates beyond the front layer, in topological order.
fn extended_set(front: &[usize], succs: &[Vec<usize>], preds: &[usize], gates: &[Gate]) -> Vec<[usize; 2]> {
    let mut remaining: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut queue: std::collections::VecDeque<usize> = front.iter().copied().collect();
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        for &s in &succs[i] {
            let left = remaining.entry(s).or_insert(preds[s]);
            *left -= 1;
            if *left == 0 {
                if let Some(pair) = two_qubits(&gates[s]) {
                    out.push(pair);
                    if out.len() >= EXTENDED_SET {
                        return out;
                    }
                }
                queue.push_back(s);
            }
        }
    }
    out
}

/// A stabilizer qubit sitting on a node with fewer neighbours than its check
/// has data qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeShortfall {
    pub qubit: usize,
    pub node: usize,
    pub degree: usize,
    pub required: usize,
}

/// Stabilizer qubits that cannot reach all their data qubits directly from
/// their initial node. Reported only; the router inserts SWAPs instead.
pub fn degree_shortfalls(code: &SurfaceCode, graph: &ArchitectureGraph, layout: &Layout) -> Vec<DegreeShortfall> {
    code.checks
        .iter()
        .filter(|c| matches!(code.roles[c.qubit], Role::StabilizerZ | Role::StabilizerX))
        .filter_map(|c| {
            let node = layout.initial()[c.qubit];
            let degree = graph.degree(node);
            (degree < c.data.len()).then_some(DegreeShortfall { qubit: c.qubit, node, degree, required: c.data.len() })
        })
        .collect()
}

/// Restricts a routed circuit to the nodes it touches. Returns the compacted
/// circuit and, for each of its qubits, the graph node it stands for.
pub fn active_subcircuit(routed: &Circuit) -> Result<(Circuit, Vec<usize>)> {
    let mut used = vec![false; routed.num_qubits()];
    for g in routed.gates() {
        for &q in g.qubits() {
            used[q] = true;
        }
    }
    let nodes: Vec<usize> = (0..used.len()).filter(|&v| used[v]).collect();
    let mut index = vec![usize::MAX; used.len()];
    for (i, &v) in nodes.iter().enumerate() {
        index[v] = i;
    }
    let compact = routed.remap(nodes.len(), &index)?;
    Ok((compact, nodes))
}

/// Number of inserted SWAPs in a routed circuit.
pub fn swap_count(circuit: &Circuit) -> usize {
    circuit.count_kind(GateKind::Swap)
}
