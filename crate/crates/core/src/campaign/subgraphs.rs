use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arch::ArchitectureGraph;
use crate::error::{Error, Result};

/// Connected node sets of size `k`, each sorted, the list sorted.
///
/// All of them when there are at most `max_samples`; otherwise `max_samples`
/// distinct sets grown from random seeds by adding a uniformly chosen
/// frontier node at each step.
pub fn enumerate_connected_subgraphs<R: Rng + ?Sized>(
    graph: &ArchitectureGraph,
    k: usize,
    max_samples: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>> {
    let n = graph.num_nodes();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter { name: "k", reason: format!("{k} not in 1..={n}") });
    }
    if max_samples == 0 {
        return Ok(Vec::new());
    }
    if let Some(all) = exhaustive(graph, k, max_samples) {
        return Ok(all);
    }

    let mut found = BTreeSet::new();
    let mut attempts = 0;
    let limit = 200 * max_samples;
    while found.len() < max_samples && attempts < limit {
        attempts += 1;
        if let Some(set) = grow(graph, k, rng) {
            found.insert(set);
        }
    }
    Ok(found.into_iter().collect())
}

/// ESU enumeration; gives up (None) once more than `cap` sets exist.
fn exhaustive(graph: &ArchitectureGraph, k: usize, cap: usize) -> Option<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for v in 0..graph.num_nodes() {
        let ext: Vec<usize> = graph.neighbors(v).iter().copied().filter(|&u| u > v).collect();
        if !extend(graph, k, cap, v, &mut vec![v], ext, &mut out) {
            return None;
        }
    }
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    Some(out)
}

fn extend(
    graph: &ArchitectureGraph,
    k: usize,
    cap: usize,
    root: usize,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> bool {
    if sub.len() == k {
        out.push(sub.clone());
        return out.len() <= cap;
    }
    while let Some(w) = ext.pop() {
        let mut next = ext.clone();
        for &u in graph.neighbors(w) {
            let exclusive = u > root
                && !sub.contains(&u)
                && u != w
                && !next.contains(&u)
                && !sub.iter().any(|&s| graph.has_edge(s, u));
            if exclusive {
                next.push(u);
            }
        }
        sub.push(w);
        let ok = extend(graph, k, cap, root, sub, next, out);
        sub.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn grow<R: Rng + ?Sized>(graph: &ArchitectureGraph, k: usize, rng: &mut R) -> Option<Vec<usize>> {
    let mut set = vec![rng.gen_range(0..graph.num_nodes())];
    while set.len() < k {
        let mut frontier: Vec<usize> =
            set.iter().flat_map(|&v| graph.neighbors(v).iter().copied()).filter(|u| !set.contains(u)).collect();
        frontier.sort_unstable();
        frontier.dedup();
        set.push(*frontier.choose(rng)?);
    }
    set.sort_unstable();
    Some(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(s: &str) -> ArchitectureGraph {
        ArchitectureGraph::build(&s.parse().unwrap()).unwrap()
    }

    fn count(g: &str, k: usize) -> usize {
        enumerate_connected_subgraphs(&graph(g), k, 100_000, &mut ChaCha8Rng::seed_from_u64(0)).unwrap().len()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count("linear:3", 2), 2);
        assert_eq!(count("linear:3", 3), 1);
        assert_eq!(count("mesh:2,2", 2), 4);
        assert_eq!(count("mesh:2,2", 3), 4);
        assert_eq!(count("complete:5", 3), 10);
        assert_eq!(count("linear:10", 4), 7);
    }

    /// Connected induced subgraphs counted by brute force over all subsets.
    #[test]
    fn exhaustive_matches_subset_scan() {
        for spec in ["mesh:3,3", "mesh:2,4", "cairo"] {
            let g = graph(spec);
            let n = g.num_nodes();
            for k in 1..=4.min(n) {
                let got = enumerate_connected_subgraphs(&g, k, 1_000_000, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
                if n <= 12 {
                    let mut want = Vec::new();
                    for mask in 0u32..(1 << n) {
                        if mask.count_ones() as usize != k {
                            continue;
                        }
                        let nodes: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
                        let sub = g.induced(&nodes).unwrap();
                        if sub.distances_from(0).iter().all(|&d| d != usize::MAX) {
                            want.push(nodes);
                        }
                    }
                    want.sort();
                    assert_eq!(got, want, "{spec} k={k}");
                }
                let unique: BTreeSet<_> = got.iter().collect();
                assert_eq!(unique.len(), got.len());
            }
        }
    }

    #[test]
    fn sampling_returns_distinct_connected_sets() {
        let g = graph("mesh:5,6");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let got = enumerate_connected_subgraphs(&g, 8, 25, &mut rng).unwrap();
        assert_eq!(got.len(), 25);
        for s in &got {
            assert_eq!(s.len(), 8);
            assert!(g.induced(s).unwrap().distances_from(0).iter().all(|&d| d != usize::MAX));
        }
        assert!(enumerate_connected_subgraphs(&g, 0, 5, &mut rng).is_err());
        assert!(enumerate_connected_subgraphs(&g, 31, 5, &mut rng).is_err());
    }
}
