//! Acceptance suite. Each test prints one `criterion N: PASS|FAIL` line
//! (visible with `--nocapture`) and fails when its criterion does.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::statevector::{record_distribution, total_variation};
use qrad_core::arch::{transpile, validate_routing, ArchitectureGraph, GraphSpec};
use qrad_core::campaign::{
    architecture_summary, default_codes, default_distance_arch, distance_summary, log_grid, median, plan_architecture,
    plan_distance, plan_spread, plan_surface, run_point, run_points, spread_summary, CampaignPoint, CampaignResult,
    Fault, Summary, SweepParams,
};
use qrad_core::codes::{build_repetition, build_xxzz, CodeClass, CodeSpec, SurfaceCode};
use qrad_core::decode::{min_weight_perfect_matching, Decoder};
use qrad_core::noise::{fault_intensity, spatial_decay, temporal_decay, RadiationFaultConfig};
use qrad_core::sim::{exact_record_distribution, run_shot};
use qrad_core::{Error, Gate};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHOTS: usize = 2000;
const SEED: u64 = 2024;

fn report(n: usize, pass: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn rep(d: usize) -> CodeSpec {
    CodeSpec::new(CodeClass::Repetition, d, 1)
}

fn xxzz(d_z: usize, d_x: usize) -> CodeSpec {
    CodeSpec::new(CodeClass::Xxzz, d_z, d_x)
}

fn params() -> SweepParams {
    SweepParams { master_seed: SEED, shots: SHOTS, ..Default::default() }
}

fn binomial_se(rate: f64, shots: usize) -> f64 {
    (rate * (1.0 - rate) / shots as f64).sqrt()
}

/// `lo < hi` by more than twice the combined binomial standard error.
fn below_2sigma(lo: f64, hi: f64, shots: usize) -> bool {
    hi - lo > 2.0 * (binomial_se(lo, shots).powi(2) + binomial_se(hi, shots).powi(2)).sqrt()
}

fn find<'a>(summaries: &'a [Summary], code: CodeSpec, key: &str) -> &'a Summary {
    summaries.iter().find(|s| s.code == code && s.key == key).unwrap_or_else(|| panic!("no {key} group for {code}"))
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

#[test]
fn c1_tableau_matches_state_vector() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let shots = 10_000;
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let len = rng.gen_range(5..=30);
        let c = common::random_circuit(&mut rng, n, len, 6);
        let oracle = record_distribution(&c);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            *counts.entry(run_shot(&c, &mut rng).unwrap()).or_insert(0.0) += 1.0 / shots as f64;
        }
        worst = worst.max(total_variation(&oracle, &counts));
    }
    let elapsed = start.elapsed();
    let pass = worst < 0.05 && elapsed < Duration::from_secs(120);
    report(1, pass, &format!("500 circuits, worst TV {worst:.4} (< 0.05), {elapsed:.1?} (< 2 min)"));
}

/// Minimum perfect-matching cost over all pairings; `None` if none exists.
fn brute_force_matching(n: usize, edges: &[(usize, usize, u64)]) -> Option<u64> {
    let mut w = vec![vec![None::<u64>; n]; n];
    for &(a, b, c) in edges {
        let cur = w[a][b].map_or(c, |x: u64| x.min(c));
        w[a][b] = Some(cur);
        w[b][a] = Some(cur);
    }
    fn go(used: &mut [bool], w: &[Vec<Option<u64>>]) -> Option<u64> {
        let Some(i) = used.iter().position(|u| !u) else { return Some(0) };
        used[i] = true;
        let mut best: Option<u64> = None;
        for j in i + 1..used.len() {
            if let (false, Some(c)) = (used[j], w[i][j]) {
                used[j] = true;
                if let Some(rest) = go(used, w) {
                    best = Some(best.map_or(c + rest, |b| b.min(c + rest)));
                }
                used[j] = false;
            }
        }
        used[i] = false;
        best
    }
    go(&mut vec![false; n], &w)
}

#[test]
fn c2_mwpm_is_exact() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(0..=10);
        let density = rng.gen_range(0.2..=1.0);
        let max_w = [1u64, 5, 100][rng.gen_range(0..3)];
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(density) {
                    edges.push((a, b, rng.gen_range(0..=max_w)));
                }
            }
        }
        let want = brute_force_matching(n, &edges);
        let got = match min_weight_perfect_matching(n, &edges) {
            Ok(pairs) => {
                let mut seen = vec![false; n];
                let mut cost = 0;
                for &(a, b) in &pairs {
                    if seen[a] || seen[b] {
                        mismatches += 1;
                    }
                    seen[a] = true;
                    seen[b] = true;
                    cost += edges.iter().filter(|e| (e.0, e.1) == (a, b)).map(|e| e.2).min().unwrap_or(u64::MAX / 4);
                }
                seen.iter().all(|&s| s).then_some(cost)
            }
            Err(Error::InfeasibleMatching) => None,
            Err(e) => panic!("{e}"),
        };
        if got != want {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = mismatches == 0 && elapsed < Duration::from_secs(60);
    report(2, pass, &format!("10000 graphs, {mismatches} mismatches, {elapsed:.1?} (< 1 min)"));
}

fn decodes_to_one(code: &SurfaceCode, decoder: &Decoder, gates: &[Gate], seed: u64) -> bool {
    let c = code.circuit_with_inserted(code.between_rounds(), gates).unwrap();
    let record = run_shot(&c, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    decoder.decode_logical(&record).unwrap()
}

#[test]
fn c3_single_errors_are_corrected() {
    let mut failures = Vec::new();
    for d in [3, 5, 7] {
        let code = build_repetition(d, 1).unwrap();
        let dec = Decoder::new(&code);
        for q in code.data_qubits() {
            if !decodes_to_one(&code, &dec, &[Gate::x(q)], q as u64) {
                failures.push(format!("rep:{d},1 X{q}"));
            }
        }
    }
    let code = build_xxzz(3, 3).unwrap();
    let dec = Decoder::new(&code);
    let data = code.data_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..10_000 {
        let q = data[rng.gen_range(0..data.len())];
        let g = [Gate::x(q), Gate::y(q), Gate::z(q)][rng.gen_range(0..3)];
        if !decodes_to_one(&code, &dec, &[g], rng.gen()) {
            failures.push(format!("xxzz:3,3 {g}"));
        }
    }
    report(
        3,
        failures.is_empty(),
        &format!("{} undecoded patterns {:?}", failures.len(), &failures[..failures.len().min(5)]),
    );
}

#[test]
fn c4_noiseless_runs_never_fail() {
    let mut bad = Vec::new();
    for code in default_codes() {
        let point = CampaignPoint::new(code, default_distance_arch(&code), Fault::None, 0.0, 10_000, SEED);
        let r = run_point(&point).unwrap();
        if r.rate.errors != 0 {
            bad.push(format!("{code}: {}", r.rate.errors));
        }
    }
    report(4, bad.is_empty(), &format!("{} default codes at 10000 shots, failing: {bad:?}", default_codes().len()));
}

#[test]
fn c5_fault_formulas() {
    let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
    let mut worst = 0.0f64;
    for i in 0..100 {
        let t = i as f64 / 99.0;
        let gamma = 0.5 + 0.2 * i as f64;
        worst = worst.max(rel(temporal_decay(t, gamma).unwrap(), (-gamma * t).exp()));

        let d = i % 20;
        let n_spatial = 1 + i % 4;
        let n = n_spatial as f64;
        worst = worst.max(rel(spatial_decay(d, n_spatial), n * n / ((d as f64 + n) * (d as f64 + n))));

        let n_s = 1 + i % 12;
        let k = i % n_s;
        let cfg =
            RadiationFaultConfig { gamma, n_s, n_spatial, root_qubit: 0, peak_probability: (i as f64 + 1.0) / 100.0 };
        let want = cfg.peak_probability * (-gamma * k as f64 / n_s as f64).exp() * n * n / (d as f64 + n).powi(2);
        worst = worst.max(rel(fault_intensity(k, d, &cfg).unwrap(), want));
    }
    report(5, worst <= 1e-12, &format!("worst relative error {worst:e} over 100 points (<= 1e-12)"));
}

#[test]
fn c6_routing_preserves_semantics() {
    let graphs = ["linear:6", "mesh:2,3", "linear:4", "complete:5", "mesh:2,2", "linear:2"];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = Vec::new();
    let mut cases = 0;
    for i in 0..300 {
        let g = ArchitectureGraph::build(&graphs[i % graphs.len()].parse::<GraphSpec>().unwrap()).unwrap();
        let n = rng.gen_range(1..=g.num_nodes());
        let len = rng.gen_range(5..40);
        let c = common::random_circuit(&mut rng, n, len, 6);
        let (routed, _) = transpile(&c, &g, i as u64).unwrap();
        cases += 1;
        if !validate_routing(&routed, &g).is_empty()
            || exact_record_distribution(&c).unwrap() != exact_record_distribution(&routed).unwrap()
        {
            mismatches.push(i);
        }
    }
    for (code, arch) in [(build_repetition(3, 1).unwrap(), "linear:6"), (build_xxzz(1, 3).unwrap(), "mesh:2,3")] {
        let g = ArchitectureGraph::build(&arch.parse::<GraphSpec>().unwrap()).unwrap();
        let (routed, _) = transpile(&code.circuit, &g, 0).unwrap();
        cases += 1;
        if exact_record_distribution(&code.circuit).unwrap() != exact_record_distribution(&routed).unwrap() {
            mismatches.push(usize::MAX);
        }
    }
    report(6, mismatches.is_empty(), &format!("{cases} instances, {} with differing distributions", mismatches.len()));
}

fn rate_at(results: &[CampaignResult], p: f64, peak: f64) -> f64 {
    let close = |a: f64, b: f64| (a / b - 1.0).abs() < 1e-9;
    results
        .iter()
        .find(|r| close(r.point.phys_error_rate, p) && close(r.point.peak_prob, peak))
        .map(|r| r.rate.rate)
        .expect("grid point")
}

#[test]
fn c7_surface_corners() {
    let p_grid = log_grid(1e-8, 1e-1, 8);
    let peak_grid = log_grid(1e-8, 1.0, 8);
    let mut lines = Vec::new();
    let mut pass = true;
    for (code, arch, top, floor) in
        [(rep(5), GraphSpec::Mesh(5, 2), 0.48, 0.24), (xxzz(3, 3), GraphSpec::Mesh(5, 4), 0.54, 0.52)]
    {
        let start = Instant::now();
        let results = run_points(&plan_surface(code, &arch, &p_grid, &peak_grid, 2, &params())).unwrap();
        let elapsed = start.elapsed();
        let (hi, lo, zero) = (rate_at(&results, 0.1, 1.0), rate_at(&results, 1e-8, 1.0), rate_at(&results, 1e-8, 1e-8));
        let ok = within(hi, top, 0.10) && within(lo, floor, 0.10) && elapsed < Duration::from_secs(600);
        pass &= ok;
        lines.push(format!(
            "{code}: top {hi:.3} (want {top}±0.10), floor {lo:.3} (want {floor}±0.10), zero corner {zero:.3}, {elapsed:.1?}"
        ));
    }
    report(7, pass, &lines.join("; "));
}

#[test]
fn c8_distance_orderings() {
    let codes = [rep(3), rep(13), xxzz(3, 1), xxzz(1, 3), xxzz(5, 3), xxzz(3, 5)];
    let targets = [0.08, 0.205, 0.075, 0.12, 0.26, 0.295];
    let summaries = distance_summary(&run_points(&plan_distance(&codes, None, &params())).unwrap());
    let m: Vec<f64> = codes.iter().map(|&c| find(&summaries, c, "all").median).collect();
    let mut lines = Vec::new();
    let mut pass = true;
    for (a, b) in [(0, 1), (2, 3), (4, 5)] {
        let ok = below_2sigma(m[a], m[b], SHOTS);
        pass &= ok;
        lines.push(format!("{} {:.3} < {} {:.3}: {}", codes[a], m[a], codes[b], m[b], if ok { "ok" } else { "no" }));
    }
    for ((code, &got), &want) in codes.iter().zip(&m).zip(&targets) {
        let ok = within(got, want, 0.08);
        pass &= ok;
        lines.push(format!("{code} {got:.3} vs {want}±0.08: {}", if ok { "ok" } else { "no" }));
    }
    report(8, pass, &lines.join("; "));
}

#[test]
fn c9_spread_versus_erasure() {
    let arch = GraphSpec::Mesh(5, 6);
    let mut lines = Vec::new();
    let mut pass = true;
    for code in [rep(15), xxzz(3, 3)] {
        let over_half = code.num_qubits() / 2 + 1;
        let results = run_points(&plan_spread(code, &arch, &[1, over_half], 16, &params()).unwrap()).unwrap();
        let s = spread_summary(&results);
        let reference = find(&s, code, "reference").median;
        let single = find(&s, code, "k=1").median;
        let many = find(&s, code, &format!("k={over_half}")).median;
        let ok = below_2sigma(single, reference, SHOTS) && below_2sigma(reference, many, SHOTS);
        pass &= ok;
        lines.push(format!(
            "{code}: k=1 {single:.3} < reference {reference:.3} < k={over_half} {many:.3}: {}",
            if ok { "ok" } else { "no" }
        ));
        if code == rep(15) {
            let ok = within(single, 0.17, 0.08);
            pass &= ok;
            lines.push(format!("{code} k=1 {single:.3} vs 0.17±0.08: {}", if ok { "ok" } else { "no" }));
        }
    }
    report(9, pass, &lines.join("; "));
}

/// Average ranks, ties sharing the mean of their positions.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        for &k in &idx[i..=j] {
            out[k] = (i + j) as f64 / 2.0;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Spearman rho and its one-sided permutation p-value for rho < 0.
fn spearman_negative(x: &[f64], y: &[f64], rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (rx, mut ry) = (ranks(x), ranks(y));
    let rho = pearson(&rx, &ry);
    let perms = 10_000;
    let mut as_low = 0;
    for _ in 0..perms {
        ry.shuffle(rng);
        if pearson(&rx, &ry) <= rho {
            as_low += 1;
        }
    }
    (rho, (as_low + 1) as f64 / (perms + 1) as f64)
}

#[test]
fn c10_architecture_trends() {
    let rep_archs: Vec<GraphSpec> =
        ["linear:22", "mesh:5,6", "brooklyn", "cairo", "cambridge"].iter().map(|s| s.parse().unwrap()).collect();
    let xxzz_archs: Vec<GraphSpec> =
        ["complete:18", "linear:18", "mesh:5,4", "almaden", "brooklyn", "cambridge", "johannesburg"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lines = Vec::new();
    let mut pass = true;
    let mut check = |ok: bool, text: String| {
        pass &= ok;
        lines.push(format!("{text}: {}", if ok { "ok" } else { "no" }));
    };

    let mut per_root = Vec::new();
    for (code, archs) in [(rep(11), &rep_archs), (xxzz(3, 3), &xxzz_archs)] {
        let s = architecture_summary(&run_points(&plan_architecture(code, archs, &params()).unwrap()).unwrap());
        let all = |arch: &str| s.iter().find(|x| x.arch == arch && x.key == "all").expect("arch summary").median;
        if code == rep(11) {
            let cairo = all("cairo");
            for a in ["linear:22", "mesh:5,6"] {
                check(all(a) < cairo, format!("{code} {a} {:.3} < cairo {cairo:.3}", all(a)));
            }
        } else {
            let (mesh, linear) = (all("mesh:5,4"), all("linear:18"));
            check(mesh < linear, format!("{code} mesh:5,4 {mesh:.3} < linear:18 {linear:.3}"));
        }
        let (idx, rates): (Vec<f64>, Vec<f64>) =
            s.iter().filter_map(|x| x.key.strip_prefix("root=").map(|r| (r.parse::<f64>().unwrap(), x.median))).unzip();
        per_root.push((code, idx, rates));
    }
    for (code, idx, rates) in &per_root {
        let (rho, p) = spearman_negative(idx, rates, &mut rng);
        check(rho < 0.0 && p < 0.05, format!("{code} index/median Spearman {rho:.3} p={p:.4}"));
    }
    let all_rates: Vec<f64> = per_root.iter().flat_map(|r| r.2.iter().copied()).collect();
    lines.push(format!("overall per-root median {:.3}", median(&all_rates).unwrap()));
    report(10, pass, &lines.join("; "));
}
