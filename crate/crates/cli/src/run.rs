//! Turning a [`RunConfig`] into campaign points, running them and writing
//! the result files.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufWriter;

use qrad_core::arch::GraphSpec;
use qrad_core::campaign::{
    architecture_summary, default_codes, default_distance_arch, distance_summary, log_grid, plan_architecture,
    plan_distance, plan_spread, plan_surface, run_points, spread_summary, write_csv, write_summary_csv, CampaignPoint,
    CampaignResult, Manifest, Summary, SweepParams, ENGINE_VERSION,
};
use qrad_core::codes::{CheckBasis, CodeSpec};
use qrad_core::decode::Decoder;
use qrad_core::sim::{run_shot, Gate, GateKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{InjectKind, RunConfig, SweepKind};
use crate::CliError;

pub const RESULTS_FILE: &str = "results.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const MANIFEST_FILE: &str = "manifest.toml";

fn runtime(e: impl ToString) -> CliError {
    CliError::Runtime(e.to_string())
}

fn params(config: &RunConfig) -> SweepParams {
    SweepParams {
        master_seed: config.seed,
        shots: config.shots,
        phys_error_rate: config.phys_error_rate(),
        gamma: config.gamma,
        n_s: config.n_s,
    }
}

fn archs_for(config: &RunConfig, code: &CodeSpec) -> Vec<GraphSpec> {
    if config.archs.is_empty() {
        vec![default_distance_arch(code)]
    } else {
        config.archs.clone()
    }
}

/// The points a sweep runs, in execution order. Spread planning routes the
/// code, so routing failures surface here.
pub fn plan(config: &RunConfig) -> Result<Vec<CampaignPoint>, CliError> {
    let params = params(config);
    let mut out = Vec::new();
    match config.sweep {
        SweepKind::Surface => {
            let p_grid = config.p.map_or_else(|| log_grid(1e-8, 1e-1, config.grid), |p| vec![p]);
            let peak_grid = config.peak.map_or_else(|| log_grid(1e-8, 1.0, config.grid), |p| vec![p]);
            for code in &config.codes {
                for arch in archs_for(config, code) {
                    out.extend(plan_surface(*code, &arch, &p_grid, &peak_grid, config.root, &params));
                }
            }
        }
        SweepKind::Distance => {
            let codes = if config.codes.is_empty() { default_codes() } else { config.codes.clone() };
            if config.archs.is_empty() {
                out.extend(plan_distance(&codes, None, &params));
            }
            for arch in &config.archs {
                out.extend(plan_distance(&codes, Some(arch), &params));
            }
        }
        SweepKind::Spread => {
            for code in &config.codes {
                let ks: Vec<usize> =
                    if config.ks.is_empty() { (1..=code.num_qubits()).collect() } else { config.ks.clone() };
                for arch in archs_for(config, code) {
                    out.extend(plan_spread(*code, &arch, &ks, config.samples, &params).map_err(runtime)?);
                }
            }
        }
        SweepKind::Arch => {
            for code in &config.codes {
                out.extend(plan_architecture(*code, &config.archs, &params).map_err(runtime)?);
            }
        }
        SweepKind::DecodeDebug => {}
    }
    if let Some(peak) = config.peak.filter(|_| config.sweep != SweepKind::Surface) {
        for p in &mut out {
            p.peak_prob = peak;
            p.reseed(config.seed);
        }
    }
    Ok(out)
}

/// One line per point: index, seed, canonical description.
pub fn render_plan(points: &[CampaignPoint]) -> String {
    let mut s = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = writeln!(s, "{i}\t{}\t{}", p.seed, p.canonical());
    }
    s
}

pub fn summarize(sweep: SweepKind, results: &[CampaignResult]) -> Vec<Summary> {
    match sweep {
        SweepKind::Spread => spread_summary(results),
        SweepKind::Arch => architecture_summary(results),
        _ => distance_summary(results),
    }
}

/// Runs `points` on at most `config.threads` workers and writes results,
/// summary and manifest into `config.out`.
pub fn execute(config: &RunConfig, points: &[CampaignPoint]) -> Result<Vec<CampaignResult>, CliError> {
    fs::create_dir_all(&config.out)
        .map_err(|e| CliError::Config(format!("out: cannot create {}: {e}", config.out.display())))?;
    let results = match config.threads {
        Some(n) => {
            rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(runtime)?.install(|| run_points(points))
        }
        None => run_points(points),
    }
    .map_err(runtime)?;
    write_outputs(config, &results)?;
    Ok(results)
}

fn write_outputs(config: &RunConfig, results: &[CampaignResult]) -> Result<(), CliError> {
    let dir = &config.out;
    let create = |name: &str| File::create(dir.join(name)).map(BufWriter::new).map_err(runtime);
    write_csv(create(RESULTS_FILE)?, results).map_err(runtime)?;
    write_summary_csv(create(SUMMARY_FILE)?, &summarize(config.sweep, results)).map_err(runtime)?;
    let manifest = Manifest {
        engine_version: ENGINE_VERSION.to_string(),
        master_seed: config.seed,
        sweep: config.sweep.as_str().to_string(),
        points: results.len(),
        files: [RESULTS_FILE, SUMMARY_FILE, MANIFEST_FILE].map(String::from).to_vec(),
        config: config.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    };
    fs::write(dir.join(MANIFEST_FILE), manifest.to_toml().map_err(runtime)?).map_err(runtime)
}

fn bits(record: &[bool], slots: &[usize]) -> String {
    slots.iter().map(|&s| if record[s] { '1' } else { '0' }).collect()
}

/// Runs the code once without noise, with the configured injections placed
/// between the syndrome rounds, and describes every decoding step.
pub fn decode_debug(config: &RunConfig) -> Result<String, CliError> {
    let code = config.codes[0].build().map_err(runtime)?;
    let mut gates = Vec::new();
    for inj in &config.inject {
        let q = inj.qubit(&code).map_err(CliError::Config)?;
        let kind = match inj.kind {
            InjectKind::X => GateKind::X,
            InjectKind::Y => GateKind::Y,
            InjectKind::Z => GateKind::Z,
            InjectKind::Reset => GateKind::Reset,
        };
        gates.push(Gate::single(kind, q));
    }
    let circuit = code.circuit_with_inserted(code.between_rounds(), &gates).map_err(runtime)?;
    let record = run_shot(&circuit, &mut ChaCha8Rng::seed_from_u64(config.seed)).map_err(runtime)?;
    let decoded = Decoder::new(&code).decode(&record).map_err(runtime)?;

    let mut s = String::new();
    let _ = writeln!(s, "code {} ({} qubits)", code.spec, code.num_qubits());
    let injected: Vec<String> = config.inject.iter().zip(&gates).map(|(i, g)| format!("{i} ({g})")).collect();
    let _ = writeln!(s, "injected: {}", if injected.is_empty() { "none".into() } else { injected.join(", ") });
    for (basis, name) in [(CheckBasis::Z, "Z"), (CheckBasis::X, "X")] {
        let checks: Vec<usize> = code.checks_of(basis).map(|(i, _)| i).collect();
        if checks.is_empty() {
            continue;
        }
        for (round, slots) in code.syndrome_slots.iter().enumerate() {
            let slots: Vec<usize> = checks.iter().map(|&c| slots[c]).collect();
            let _ = writeln!(s, "syndrome {name} round {round}: {}", bits(&record, &slots));
        }
        let events: Vec<String> =
            decoded.events.of(basis).iter().map(|e| format!("r{}c{}", e.round, e.check)).collect();
        let _ = writeln!(s, "events {name}: {}", if events.is_empty() { "none".into() } else { events.join(" ") });
        let basis_dec = if basis == CheckBasis::Z { &decoded.z } else { &decoded.x };
        for pair in &basis_dec.pairs {
            let other = pair.b.map_or("boundary".to_string(), |b| format!("r{}c{}", b.round, b.check));
            let _ = writeln!(
                s,
                "match {name}: r{}c{} - {other} flips data {:?}",
                pair.a.round, pair.a.check, pair.correction
            );
        }
        let _ = writeln!(s, "correction {name}: {:?}", basis_dec.correction);
    }
    let _ = writeln!(s, "raw readout: {}", u8::from(decoded.raw_readout));
    let _ = writeln!(s, "decoded logical: {} (expected 1)", u8::from(decoded.logical));
    Ok(s)
}
