use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const PRESETS: &[(&str, &str)] = &[
    ("almaden", include_str!("../../data/arch/almaden.adj")),
    ("brooklyn", include_str!("../../data/arch/brooklyn.adj")),
    ("cairo", include_str!("../../data/arch/cairo.adj")),
    ("cambridge", include_str!("../../data/arch/cambridge.adj")),
    ("johannesburg", include_str!("../../data/arch/johannesburg.adj")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// Requested topology.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphSpec {
    Linear(usize),
    Mesh(usize, usize),
    Complete(usize),
    Preset(String),
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Linear(n) => write!(f, "linear:{n}"),
            GraphSpec::Mesh(r, c) => write!(f, "mesh:{r},{c}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Preset(name) => write!(f, "{name}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    /// Accepts `linear:N`, `mesh:R,C`, `complete:N`, `preset:NAME` or a bare preset name.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |reason: &str| Error::InvalidParameter { name: "arch", reason: format!("`{s}`: {reason}") };
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<usize>> {
            params
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|_| bad("expected positive integers")))
                .collect()
        };
        let spec = match kind.to_ascii_lowercase().as_str() {
            "linear" => match nums()?[..] {
                [n] => GraphSpec::Linear(n),
                _ => return Err(bad("linear takes one size")),
            },
            "complete" => match nums()?[..] {
                [n] => GraphSpec::Complete(n),
                _ => return Err(bad("complete takes one size")),
            },
            "mesh" => match nums()?[..] {
                [r, c] => GraphSpec::Mesh(r, c),
                _ => return Err(bad("mesh takes ROWS,COLS")),
            },
            "preset" => GraphSpec::Preset(params.to_ascii_lowercase()),
            other if params.is_empty() => GraphSpec::Preset(other.to_string()),
            _ => return Err(bad("unknown kind")),
        };
        if let GraphSpec::Preset(name) = &spec {
            if !preset_names().contains(&name.as_str()) {
                return Err(Error::UnknownPreset { name: name.clone(), available: preset_names().join(", ") });
            }
        }
        Ok(spec)
    }
}

/// Undirected, unit-weight, connected qubit connectivity graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchitectureGraph {
    name: String,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl ArchitectureGraph {
    pub fn build(spec: &GraphSpec) -> Result<Self> {
        let positive = |v: usize| {
            if v == 0 {
                Err(Error::InvalidParameter { name: "arch", reason: format!("{spec}: sizes must be positive") })
            } else {
                Ok(v)
            }
        };
        match spec {
            GraphSpec::Linear(n) => {
                let n = positive(*n)?;
                Self::from_edges(format!("linear{n}"), n, (1..n).map(|i| (i - 1, i)))
            }
            GraphSpec::Mesh(r, c) => {
                let (r, c) = (positive(*r)?, positive(*c)?);
                let mut edges = Vec::new();
                for i in 0..r {
                    for j in 0..c {
                        let v = i * c + j;
                        if j + 1 < c {
                            edges.push((v, v + 1));
                        }
                        if i + 1 < r {
                            edges.push((v, v + c));
                        }
                    }
                }
                Self::from_edges(format!("mesh{r}x{c}"), r * c, edges)
            }
            GraphSpec::Complete(n) => {
                let n = positive(*n)?;
                Self::from_edges(format!("complete{n}"), n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
            }
            GraphSpec::Preset(name) => {
                let key = name.to_ascii_lowercase();
                let text = PRESETS
                    .iter()
                    .find(|(n, _)| *n == key)
                    .map(|(_, t)| *t)
                    .ok_or_else(|| Error::UnknownPreset { name: name.clone(), available: preset_names().join(", ") })?;
                Self::parse_adjacency(text)
            }
        }
    }

    /// Validates and builds a graph: no self-loops, no duplicate edges, connected.
    pub fn from_edges(
        name: impl Into<String>,
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let g = Self::from_edges_unchecked(name.into(), n, edges)?;
        if !g.is_connected() {
            return Err(Error::InvalidGraph(format!("{} is disconnected", g.name)));
        }
        Ok(g)
    }

    fn from_edges_unchecked(name: String, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no nodes".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) outside {n} nodes")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on {a}")));
            }
            if adj[a].contains(&b) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({a},{b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
            list.push((a.min(b), a.max(b)));
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        list.sort_unstable();
        Ok(Self { name, adj, edges: list })
    }

    /// Parses the adjacency-list format: header `name n_nodes`, then `u v` per line.
    pub fn parse_adjacency(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::InvalidGraph("empty adjacency file".into()))?;
        let mut it = header.split_whitespace();
        let (Some(name), Some(n), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::InvalidGraph(format!("line 1: bad header `{header}`")));
        };
        let n: usize = n.parse().map_err(|_| Error::InvalidGraph(format!("line 1: bad node count `{n}`")))?;
        let mut edges = Vec::new();
        for (i, line) in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidGraph(format!("line {}: bad edge `{line}`", i + 1)))?;
            match nums[..] {
                [u, v] => edges.push((u, v)),
                _ => return Err(Error::InvalidGraph(format!("line {}: bad edge `{line}`", i + 1))),
            }
        }
        Self::from_edges(name, n, edges)
    }

    pub fn to_adjacency(&self) -> String {
        let mut s = format!("{} {}\n", self.name, self.num_nodes());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.adj.len()
    }

    /// BFS hop counts from `src`; `usize::MAX` marks unreachable nodes.
    pub fn distances_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_nodes()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn all_pairs_distances(&self) -> Vec<Vec<usize>> {
        (0..self.num_nodes()).map(|v| self.distances_from(v)).collect()
    }

    pub fn shortest_distance(&self, a: usize, b: usize) -> Result<usize> {
        for v in [a, b] {
            if !self.contains(v) {
                return Err(Error::UnknownNode(v));
            }
        }
        match self.distances_from(a)[b] {
            usize::MAX => Err(Error::InvalidGraph(format!("{b} unreachable from {a}"))),
            d => Ok(d),
        }
    }

    fn is_connected(&self) -> bool {
        self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Subgraph induced by `nodes`, relabelled to `0..nodes.len()` in the given order.
    /// May be disconnected.
    pub fn induced(&self, nodes: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.num_nodes()];
        for (i, &v) in nodes.iter().enumerate() {
            if !self.contains(v) {
                return Err(Error::UnknownNode(v));
            }
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|(u, v)| (index[*u], index[*v]));
        Self::from_edges_unchecked(format!("{}-induced", self.name), nodes.len(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(s: &str) -> ArchitectureGraph {
        ArchitectureGraph::build(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn sizes() {
        let g = build("linear:5");
        assert_eq!((g.num_nodes(), g.num_edges()), (5, 4));
        let g = build("mesh:5,6");
        assert_eq!((g.num_nodes(), g.num_edges()), (30, 49));
        let g = build("complete:6");
        assert_eq!(g.num_edges(), 15);
        let g = build("cairo");
        assert_eq!(g.num_nodes(), 27);
    }

    #[test]
    fn every_preset_loads() {
        for name in preset_names() {
            let g = build(name);
            assert!(g.num_nodes() >= 20, "{name}");
            assert_eq!(ArchitectureGraph::parse_adjacency(&g.to_adjacency()).unwrap(), g);
        }
    }

    #[test]
    fn distances() {
        let g = build("mesh:5,6");
        assert_eq!(g.shortest_distance(0, 29).unwrap(), 9);
        assert_eq!(g.shortest_distance(7, 7).unwrap(), 0);
        let g = build("linear:5");
        assert_eq!(g.shortest_distance(0, 4).unwrap(), 4);
        assert!(matches!(g.shortest_distance(0, 5), Err(Error::UnknownNode(5))));
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(ArchitectureGraph::from_edges("x", 3, [(0, 1)]).is_err());
        assert!(ArchitectureGraph::from_edges("x", 2, [(0, 0)]).is_err());
        assert!(ArchitectureGraph::from_edges("x", 2, [(0, 1), (1, 0)]).is_err());
        assert!(ArchitectureGraph::build(&GraphSpec::Linear(0)).is_err());
        match "tokyo".parse::<GraphSpec>() {
            Err(Error::UnknownPreset { available, .. }) => assert!(available.contains("cairo")),
            other => panic!("{other:?}"),
        }
        assert!("mesh:5".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn spec_strings_roundtrip() {
        for s in ["linear:10", "mesh:5,4", "complete:18", "cambridge"] {
            assert_eq!(s.parse::<GraphSpec>().unwrap().to_string(), s);
        }
        assert_eq!("preset:Cairo".parse::<GraphSpec>().unwrap(), GraphSpec::Preset("cairo".into()));
    }
}
