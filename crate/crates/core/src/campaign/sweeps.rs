use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{derive_seed, enumerate_connected_subgraphs, CampaignPoint, CampaignResult, Fault, Prepared};
use crate::arch::GraphSpec;
use crate::codes::{CodeClass, CodeSpec};
use crate::error::{Error, Result};

/// Settings shared by all points of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepParams {
    pub master_seed: u64,
    pub shots: usize,
    pub phys_error_rate: f64,
    pub gamma: f64,
    pub n_s: usize,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self { master_seed: 0, shots: 2000, phys_error_rate: 0.01, gamma: 10.0, n_s: 10 }
    }
}

impl SweepParams {
    fn point(
        &self,
        code: CodeSpec,
        arch: &GraphSpec,
        fault: Fault,
        peak: f64,
        k: usize,
        shots: usize,
    ) -> CampaignPoint {
        let mut p = CampaignPoint::new(code, arch.clone(), fault, self.phys_error_rate, shots, self.master_seed);
        p.peak_prob = peak;
        p.gamma = self.gamma;
        p.n_s = self.n_s;
        p.time_bin = k;
        p.reseed(self.master_seed);
        p
    }
}

/// `n` values from `lo` to `hi` inclusive, evenly spaced in log10.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..n).map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)).collect()
        }
    }
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

/// Grid of spreading faults at bin 0 rooted at code qubit `root`: every
/// `(p, peak)` pair, `p` outermost.
pub fn plan_surface(
    code: CodeSpec,
    arch: &GraphSpec,
    p_grid: &[f64],
    peak_grid: &[f64],
    root: usize,
    params: &SweepParams,
) -> Vec<CampaignPoint> {
    let mut out = Vec::with_capacity(p_grid.len() * peak_grid.len());
    for &p in p_grid {
        for &peak in peak_grid {
            let sp = SweepParams { phys_error_rate: p, ..*params };
            out.push(sp.point(code, arch, Fault::Radiation { root }, peak, 0, params.shots));
        }
    }
    out
}

/// Codes of the distance sweep: bit-flip repetition codes of distance 3 to
/// 15 and five XXZZ shapes.
pub fn default_codes() -> Vec<CodeSpec> {
    let rep = (3..=15).step_by(2).map(|d| CodeSpec::new(CodeClass::Repetition, d, 1));
    let xxzz = [(3, 1), (1, 3), (3, 3), (5, 3), (3, 5)].map(|(z, x)| CodeSpec::new(CodeClass::Xxzz, z, x));
    rep.chain(xxzz).collect()
}

/// Five-row mesh just wide enough for the code.
pub fn default_distance_arch(code: &CodeSpec) -> GraphSpec {
    GraphSpec::Mesh(5, code.num_qubits().div_ceil(5).max(1))
}

/// Single non-spreading reset at bin 0 on every code qubit of every code,
/// on `arch` or else on each code's [`default_distance_arch`].
pub fn plan_distance(codes: &[CodeSpec], arch: Option<&GraphSpec>, params: &SweepParams) -> Vec<CampaignPoint> {
    let mut out = Vec::new();
    for &code in codes {
        let arch = arch.cloned().unwrap_or_else(|| default_distance_arch(&code));
        for root in 0..code.num_qubits() {
            out.push(params.point(code, &arch, Fault::RootErasure { root }, 1.0, 0, params.shots));
        }
    }
    out
}

/// Reference spreading faults at bin 0 (one per code qubit), followed by
/// certain resets of connected node sets of each size in `ks`, drawn from the
/// nodes the routed code occupies.
pub fn plan_spread(
    code: CodeSpec,
    arch: &GraphSpec,
    ks: &[usize],
    max_samples: usize,
    params: &SweepParams,
) -> Result<Vec<CampaignPoint>> {
    let mut out = Vec::new();
    for root in 0..code.num_qubits() {
        out.push(params.point(code, arch, Fault::Radiation { root }, 1.0, 0, params.shots));
    }
    let routing_seed = out.first().map(|p| p.routing_seed).ok_or(Error::EmptyInput)?;
    let prep = Prepared::new(&code, arch, routing_seed)?;
    let active = prep.graph.induced(&prep.nodes)?;
    for &k in ks {
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(params.master_seed, &format!("subgraphs|{code}|{arch}|{k}")));
        for set in enumerate_connected_subgraphs(&active, k, max_samples, &mut rng)? {
            let mut nodes: Vec<usize> = set.iter().map(|&i| prep.nodes[i]).collect();
            nodes.sort_unstable();
            out.push(params.point(code, arch, Fault::NodeErasure { nodes }, 1.0, 0, params.shots));
        }
    }
    Ok(out)
}

/// Full time evolution of a spreading fault on every code qubit of every
/// architecture; the shots are split over the `n_s` bins.
pub fn plan_architecture(code: CodeSpec, archs: &[GraphSpec], params: &SweepParams) -> Result<Vec<CampaignPoint>> {
    if params.shots < params.n_s {
        return Err(Error::InvalidParameter {
            name: "shots",
            reason: format!("{} cannot be split over {} time bins", params.shots, params.n_s),
        });
    }
    let mut out = Vec::new();
    for arch in archs {
        for root in 0..code.num_qubits() {
            for k in 0..params.n_s {
                let share = params.shots / params.n_s + usize::from(k < params.shots % params.n_s);
                out.push(params.point(code, arch, Fault::Radiation { root }, 1.0, k, share));
            }
        }
    }
    Ok(out)
}

/// Median rate of one group of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub code: CodeSpec,
    pub arch: String,
    /// Group key within the code/architecture, e.g. `root=3`, `k=5`, `reference`, `all`.
    pub key: String,
    pub median: f64,
    pub count: usize,
}

fn grouped(results: &[CampaignResult], key: impl Fn(&CampaignResult) -> String) -> Vec<Summary> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(CodeSpec, String, String), Vec<f64>> = BTreeMap::new();
    for r in results {
        let g = (r.point.code, r.point.arch.to_string(), key(r));
        if !groups.contains_key(&g) {
            order.push(g.clone());
        }
        groups.entry(g).or_default().push(r.rate.rate);
    }
    order
        .into_iter()
        .map(|g| {
            let v = &groups[&g];
            Summary { code: g.0, arch: g.1, key: g.2, median: median(v).expect("non-empty group"), count: v.len() }
        })
        .collect()
}

/// Per code: median over the erased root qubits.
pub fn distance_summary(results: &[CampaignResult]) -> Vec<Summary> {
    grouped(results, |_| "all".to_string())
}

/// Per code: the spreading reference and the median per erased-set size.
pub fn spread_summary(results: &[CampaignResult]) -> Vec<Summary> {
    grouped(results, |r| match &r.point.fault {
        Fault::NodeErasure { nodes } => format!("k={}", nodes.len()),
        _ => "reference".to_string(),
    })
}

/// Per architecture: median over bins for each root, then the median of
/// those per-root values under key `all`.
pub fn architecture_summary(results: &[CampaignResult]) -> Vec<Summary> {
    let per_root = grouped(results, |r| format!("root={}", r.point.fault.root().unwrap_or(usize::MAX)));
    let mut out = Vec::new();
    let mut i = 0;
    while i < per_root.len() {
        let (code, arch) = (per_root[i].code, per_root[i].arch.clone());
        let j = per_root[i..].iter().position(|s| s.code != code || s.arch != arch).map_or(per_root.len(), |p| i + p);
        let medians: Vec<f64> = per_root[i..j].iter().map(|s| s.median).collect();
        out.extend_from_slice(&per_root[i..j]);
        out.push(Summary {
            code,
            arch,
            key: "all".into(),
            median: median(&medians).expect("non-empty"),
            count: medians.len(),
        });
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1e-8, 1e-1, 8);
        assert_eq!(g.len(), 8);
        assert!((g[0] - 1e-8).abs() < 1e-20 && (g[7] - 0.1).abs() < 1e-15);
        assert!((g[1] / g[0] - 10.0).abs() < 1e-9);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn shot_split_preserves_total() {
        let code = CodeSpec::new(CodeClass::Repetition, 3, 1);
        for shots in [10, 11, 19, 2000, 2003] {
            let params = SweepParams { shots, ..Default::default() };
            let pts = plan_architecture(code, &[GraphSpec::Linear(6)], &params).unwrap();
            for root in 0..6 {
                let shares: Vec<usize> = pts[root * 10..(root + 1) * 10].iter().map(|p| p.shots).collect();
                assert_eq!(shares.iter().sum::<usize>(), shots);
                assert!(shares.iter().all(|&s| s == shots / 10 || s == shots.div_ceil(10)));
            }
        }
        let params = SweepParams { shots: 9, ..Default::default() };
        assert!(plan_architecture(code, &[GraphSpec::Linear(6)], &params).is_err());
    }

    #[test]
    fn surface_grid_size_and_distance_arch() {
        let code = CodeSpec::new(CodeClass::Xxzz, 3, 3);
        let g = log_grid(1e-8, 1e-1, 8);
        let pts = plan_surface(code, &GraphSpec::Mesh(5, 4), &g, &log_grid(1e-8, 1.0, 8), 2, &SweepParams::default());
        assert_eq!(pts.len(), 64);
        let seeds: std::collections::BTreeSet<u64> = pts.iter().map(|p| p.seed).collect();
        assert_eq!(seeds.len(), 64);
        assert_eq!(default_distance_arch(&code), GraphSpec::Mesh(5, 4));
        assert_eq!(default_distance_arch(&CodeSpec::new(CodeClass::Repetition, 15, 1)), GraphSpec::Mesh(5, 6));
        assert_eq!(plan_distance(&[code], None, &SweepParams::default()).len(), 18);
    }
}
