//! Subcommand bodies. Each returns the process exit code; errors map to
//! the input-error code in `main`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hcs_core::analysis::{cost_model, threshold_angle};
use hcs_core::codes::{macwilliams, min_distance_bruteforce, weight_distribution_bruteforce};
use hcs_core::css::{preset_instance, random_instance, CssInstance, Family};
use hcs_core::decoder::Decoder;
use hcs_core::dists::{
    amplitude_weight_enumerator_check, coset_state_joint, default_spoof_rate, ideal_joint, ideal_joint_naive,
    oracle_coset_joint, oracle_joint, sample_ideal_public, sample_spoofer, spoofer_joint, spoofer_joint_bruteforce,
};
use hcs_core::gf2::BitVector;
use hcs_core::hardness::{compile, qubit_budget, verify_compiled, CompiledInstance, GateCircuit};
use hcs_core::oracle::ORACLE_QUBIT_CAP;
use hcs_core::verify::{
    acceptance_mass, peak_verify_batch, reference_by_name, syndrome_verification, DEFAULT_RED_CONSTANT,
};
use hcs_core::HcsError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exit;
use crate::instance::InstanceFile;
use crate::samples;
use crate::sweep::{run_sweep, write_csv, SweepConfig};

/// Largest tolerated cross-method residual in `oracle-check`.
pub const ORACLE_TOLERANCE: f64 = 1e-10;

/// Peak verification passes when the acceptance rate is at least this many
/// binomial standard deviations below the exact honest acceptance mass.
pub const PEAK_SIGMAS: f64 = 5.0;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Writes to `out`, or to stdout when absent.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn gen_instance(n: usize, family: Family, theta: f64, seed: u64, out: Option<&Path>) -> Result<i32> {
    let inst = preset_instance(n, family, theta, &mut rng(seed))?;
    emit(out, &InstanceFile::from_instance(&inst, family.name(), seed).to_json()?)?;
    Ok(exit::OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Ideal,
    Pauli,
}

/// Bob's sampler. Reads only the public section.
pub fn bob_sample(instance: &Path, mode: Mode, shots: usize, seed: u64, out: Option<&Path>) -> Result<i32> {
    if shots == 0 {
        bail!("--shots must be positive");
    }
    let public = InstanceFile::read(instance)?.bob_public()?;
    let mut r = rng(seed);
    let batch = match mode {
        Mode::Ideal => sample_ideal_public(&public, shots, &mut r)?,
        Mode::Pauli => sample_spoofer(&public, default_spoof_rate(public.theta), shots, &mut r)?,
    };
    emit(out, &samples::to_text(&batch))?;
    Ok(exit::OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeakSection {
    pub shots: usize,
    pub accepted: usize,
    pub rate: f64,
    /// Exact honest acceptance probability.
    pub expected: f64,
    pub sigma: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RedSection {
    pub reference: String,
    pub mean: f64,
    pub stderr: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub peak: PeakSection,
    pub red_threshold: f64,
    pub red: Vec<RedSection>,
    /// Set when a shot hit a syndrome of zero probability.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub red_error: Option<String>,
    pub verdict: String,
    pub exit_code: i32,
}

pub fn verify_report(inst: &CssInstance, batch: &hcs_core::dists::SampleBatch, refs: &[String]) -> Result<VerifyReport> {
    let dec = Decoder::coset_leader(inst.hx())?;
    let peak = peak_verify_batch(inst, &dec, batch)?;
    let expected = acceptance_mass(&ideal_joint(inst)?, inst, &dec);
    let m = batch.len() as f64;
    let sigma = (expected * (1.0 - expected) / m).sqrt();
    let threshold = expected - PEAK_SIGMAS * sigma;
    let peak = PeakSection {
        shots: batch.len(),
        accepted: peak.records.iter().filter(|r| r.accepted).count(),
        rate: peak.rate,
        expected,
        sigma,
        threshold,
        passed: peak.rate >= threshold,
    };

    let references = refs
        .iter()
        .map(|name| reference_by_name(name))
        .collect::<hcs_core::Result<Vec<_>>>()?;
    let red_threshold = DEFAULT_RED_CONSTANT / inst.n() as f64;
    let (red, red_error, red_passed) = match syndrome_verification(batch, inst, &references, DEFAULT_RED_CONSTANT) {
        Ok(v) => (
            v.reports
                .iter()
                .map(|r| RedSection {
                    reference: r.reference.clone(),
                    mean: r.mean,
                    stderr: r.stderr,
                    passed: r.passes(v.threshold),
                })
                .collect(),
            None,
            v.passed,
        ),
        // a shot outside the ideal support cannot come from the ideal law
        Err(e @ HcsError::ZeroProbability { .. }) => (Vec::new(), Some(e.to_string()), false),
        Err(e) => return Err(e.into()),
    };
    let (verdict, exit_code) = match (peak.passed, red_passed) {
        (true, true) => ("pass", exit::OK),
        (false, true) => ("peak-fail", exit::PEAK_FAIL),
        (true, false) => ("red-fail", exit::RED_FAIL),
        (false, false) => ("both-fail", exit::BOTH_FAIL),
    };
    Ok(VerifyReport {
        peak,
        red_threshold,
        red,
        red_error,
        verdict: verdict.into(),
        exit_code,
    })
}

pub fn verify(instance: &Path, samples_path: &Path, refs: &[String], out: Option<&Path>) -> Result<i32> {
    let inst = InstanceFile::read(instance)?.instance()?;
    let batch = samples::read(samples_path, inst.n())?;
    let report = verify_report(&inst, &batch, refs)?;
    emit(out, &json(&report)?)?;
    Ok(report.exit_code)
}

pub fn red_sweep(config: &SweepConfig, out: Option<&Path>) -> Result<i32> {
    let rows = run_sweep(config);
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    emit(out, &String::from_utf8(buf)?)?;
    Ok(exit::OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub check: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub theta: f64,
    pub seed: u64,
    pub k: usize,
    pub kx: usize,
    pub kz: usize,
    pub residuals: Vec<Residual>,
    pub tolerance: f64,
    pub passed: bool,
}

/// Runs every cross-method comparison on one instance.
pub fn oracle_residuals(inst: &CssInstance) -> Result<Vec<Residual>> {
    let mut out = Vec::new();
    let mut push = |check: &str, residual: f64| {
        out.push(Residual {
            check: check.into(),
            residual,
        })
    };
    let fast = ideal_joint(inst)?;
    if inst.n() <= ORACLE_QUBIT_CAP {
        push("ideal_joint vs statevector", fast.max_abs_diff(&oracle_joint(inst)?));
    }
    if inst.kz() <= 13 {
        push("ideal_joint vs codeword sum", fast.max_abs_diff(&ideal_joint_naive(inst)?));
    }
    if inst.n() <= 22 {
        let p = default_spoof_rate(inst.theta());
        push(
            "spoofer_joint vs error enumeration",
            spoofer_joint(inst, p)?.max_abs_diff(&spoofer_joint_bruteforce(inst, p)?),
        );
    }
    if inst.n() <= ORACLE_QUBIT_CAP {
        let mut worst = 0.0f64;
        for l in 0..1u64 << inst.k() {
            let l0 = BitVector::from_u64(inst.k(), l);
            worst = worst.max(coset_state_joint(inst, &l0)?.max_abs_diff(&oracle_coset_joint(inst, &l0)?));
        }
        push("coset_state_joint vs statevector", worst);
    }
    push(
        "zero amplitude vs weight enumerators",
        amplitude_weight_enumerator_check(inst.cz(), inst.theta())?.max(),
    );
    let dist = weight_distribution_bruteforce(inst.cz())?;
    let dual = macwilliams(&dist, inst.n(), inst.kz())?;
    let back = macwilliams(&dual, inst.n(), inst.n() - inst.kz())?;
    let round_trip = dist
        .counts
        .iter()
        .zip(&back.counts)
        .filter(|(a, b)| a != b)
        .count();
    push("MacWilliams round trip", round_trip as f64);
    let enumerated = weight_distribution_bruteforce(&inst.cz().dual())?;
    let mismatched = dual
        .counts
        .iter()
        .zip(&enumerated.counts)
        .filter(|(a, b)| a != b)
        .count();
    push("MacWilliams vs dual enumeration", mismatched as f64);
    Ok(out)
}

pub fn oracle_check(n: usize, family: Option<Family>, theta: f64, seed: u64, out: Option<&Path>) -> Result<i32> {
    if n > ORACLE_QUBIT_CAP {
        bail!("oracle-check needs n <= {ORACLE_QUBIT_CAP}, got {n}");
    }
    let mut r = rng(seed);
    let inst = match family {
        Some(f) => preset_instance(n, f, theta, &mut r)?,
        None => random_instance(n, theta, &mut r)?,
    };
    let residuals = oracle_residuals(&inst)?;
    let passed = residuals.iter().all(|r| r.residual <= ORACLE_TOLERANCE);
    let report = OracleReport {
        n,
        theta,
        seed,
        k: inst.k(),
        kx: inst.kx(),
        kz: inst.kz(),
        residuals,
        tolerance: ORACLE_TOLERANCE,
        passed,
    };
    emit(out, &json(&report)?)?;
    Ok(if passed { exit::OK } else { exit::ORACLE_MISMATCH })
}

#[derive(Debug, Clone, Serialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompiledFile {
    pub n: usize,
    pub m: usize,
    pub budget: usize,
    pub h_count: usize,
    pub t_count: usize,
    pub theta: f64,
    pub plus_mask: String,
    pub cnots: Vec<(usize, usize)>,
    pub rotation_mask: String,
    pub postselect_mask: String,
    pub postselect_values: String,
    pub generator_rows: Vec<String>,
    pub norm: Complex,
    pub target_amplitude: Complex,
    /// Present when the dense oracle fits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

pub fn compiled_file(ci: &CompiledInstance, circuit: &GateCircuit) -> Result<CompiledFile> {
    let target = circuit.zero_amplitude()?;
    let residual = if ci.m <= ORACLE_QUBIT_CAP {
        Some(verify_compiled(ci, circuit)?)
    } else {
        None
    };
    Ok(CompiledFile {
        n: ci.n,
        m: ci.m,
        budget: qubit_budget(circuit),
        h_count: circuit.h_count(),
        t_count: circuit.t_count(),
        theta: ci.theta,
        plus_mask: ci.prep.plus_mask.to_string(),
        cnots: ci.prep.cnots.clone(),
        rotation_mask: ci.rotation_mask.to_string(),
        postselect_mask: ci.postselect_mask.to_string(),
        postselect_values: ci.postselect_values.to_string(),
        generator_rows: ci.generator.rows().iter().map(ToString::to_string).collect(),
        norm: Complex {
            re: ci.norm.re,
            im: ci.norm.im,
        },
        target_amplitude: Complex {
            re: target.re,
            im: target.im,
        },
        residual,
    })
}

pub fn compile_hardness(circuit_path: &PathBuf, n: Option<usize>, out: Option<&Path>) -> Result<i32> {
    let text = std::fs::read_to_string(circuit_path)
        .with_context(|| format!("cannot read {}", circuit_path.display()))?;
    let circuit = GateCircuit::parse(&text, n)?;
    let ci = compile(&circuit)?;
    let file = compiled_file(&ci, &circuit)?;
    let mismatch = file.residual.is_some_and(|r| r > 1e-8);
    emit(out, &json(&file)?)?;
    Ok(if mismatch { exit::ORACLE_MISMATCH } else { exit::OK })
}

#[derive(Debug, Clone, Serialize)]
pub struct CostFile {
    pub n: usize,
    pub k: usize,
    pub kx: usize,
    pub kz: usize,
    pub theta: f64,
    pub rank_sim: usize,
    pub rank_verify: usize,
    /// `2^k` in decimal.
    pub gap: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extent_per_gate: Option<f64>,
    /// Minimum distance of the peakedness code, when small enough to enumerate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_distance: Option<usize>,
    /// Angle bound for the decoding radius `(d - 1) / 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold_angle: Option<f64>,
}

pub fn cost_model_cmd(instance: &Path, out: Option<&Path>) -> Result<i32> {
    let inst = InstanceFile::read(instance)?.instance()?;
    let c = cost_model(&inst);
    let min_distance = if inst.kx() <= 22 {
        Some(min_distance_bruteforce(inst.cx())?)
    } else {
        None
    };
    let threshold = min_distance.and_then(|d| threshold_angle(d.saturating_sub(1) / 2, inst.n()).ok());
    let file = CostFile {
        n: inst.n(),
        k: inst.k(),
        kx: inst.kx(),
        kz: inst.kz(),
        theta: inst.theta(),
        rank_sim: c.rank_sim,
        rank_verify: c.rank_verify,
        gap: c.gap.to_string(),
        extent_per_gate: c.extent_per_gate,
        min_distance,
        threshold_angle: threshold,
    };
    emit(out, &json(&file)?)?;
    Ok(exit::OK)
}
