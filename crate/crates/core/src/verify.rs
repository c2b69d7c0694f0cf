//! Alice's two tests and the diagnostics built on the exact tables.
//!
//! Peak verification decodes the syndrome of each shot and accepts when the
//! logical readout matches the decoder's logical correction. Syndrome
//! verification scores the shots by the mean log-ratio of ideal to
//! reference syndrome probabilities against every registered reference.

use crate::css::CssInstance;
use crate::decoder::{pack_syndrome, Decoder};
use crate::dists::{coset_syndrome_marginal, ideal_joint, spoofer_joint, JointLS, SampleBatch, SpoofRate};
use crate::error::{HcsError, Result};
use crate::gf2::BitVector;

/// Outcome of peak verification for one shot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakRecord {
    pub x: BitVector,
    pub l: BitVector,
    pub s: BitVector,
    /// Decoder estimate; `None` when the decoder gave up.
    pub e_hat: Option<BitVector>,
    /// Logical correction `L_Z e_hat`.
    pub correction: Option<BitVector>,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    pub records: Vec<PeakRecord>,
    pub rate: f64,
}

pub fn peak_verify(inst: &CssInstance, dec: &Decoder, x: &BitVector) -> Result<PeakRecord> {
    let out = inst.unencode(x)?;
    let e_hat = dec.decode(&out.s);
    let correction = e_hat.as_ref().map(|e| inst.lz().mul_vec(e));
    let accepted = correction.as_ref() == Some(&out.l);
    Ok(PeakRecord {
        x: x.clone(),
        l: out.l,
        s: out.s,
        e_hat,
        correction,
        accepted,
    })
}

pub fn peak_verify_batch(inst: &CssInstance, dec: &Decoder, batch: &SampleBatch) -> Result<PeakReport> {
    if batch.is_empty() {
        return Err(HcsError::EmptyBatch);
    }
    let records = batch
        .shots
        .iter()
        .map(|x| peak_verify(inst, dec, x))
        .collect::<Result<Vec<_>>>()?;
    let rate = records.iter().filter(|r| r.accepted).count() as f64 / records.len() as f64;
    Ok(PeakReport { records, rate })
}

/// Decoder's logical correction for every syndrome, `None` where it fails.
pub fn corrections_by_syndrome(inst: &CssInstance, dec: &Decoder) -> Vec<Option<usize>> {
    (0..1usize << inst.ns())
        .map(|s| {
            dec.decode(&BitVector::from_u64(inst.ns(), s as u64))
                .map(|e| inst.lz().mul_vec(&e).to_u64() as usize)
        })
        .collect()
}

/// Exact acceptance probability `sum_s q(L(s), s)` of a table.
pub fn acceptance_mass(joint: &JointLS, inst: &CssInstance, dec: &Decoder) -> f64 {
    corrections_by_syndrome(inst, dec)
        .iter()
        .enumerate()
        .filter_map(|(s, l)| l.map(|l| joint.prob(l, s)))
        .sum()
}

/// `D(q || p)` in nats; `+inf` when `q` charges a zero of `p`.
pub fn relative_entropy(q: &[f64], p: &[f64]) -> f64 {
    assert_eq!(q.len(), p.len(), "label spaces differ");
    let mut acc = 0.0;
    for (&a, &b) in q.iter().zip(p) {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            acc += a * (a / b).ln();
        }
    }
    acc
}

/// `D(q_u || q_ref) - D(q_u || q_ideal)`, which is
/// `sum q_u log(q_ideal / q_ref)` whenever both terms are finite.
pub fn red_exact(q_unknown: &[f64], q_ref: &[f64], q_ideal: &[f64]) -> f64 {
    let to_ref = relative_entropy(q_unknown, q_ref);
    let to_ideal = relative_entropy(q_unknown, q_ideal);
    if !(to_ref.is_finite() && to_ideal.is_finite()) {
        return to_ref - to_ideal;
    }
    q_unknown
        .iter()
        .zip(q_ref.iter().zip(q_ideal))
        .filter(|(&u, _)| u > 0.0)
        .map(|(&u, (&r, &i))| u * (i / r).ln())
        .sum()
}

/// A syndrome law Alice can score shots against.
pub trait ReferenceDistribution: Sync {
    fn name(&self) -> String;
    fn syndrome_table(&self, inst: &CssInstance) -> Result<Vec<f64>>;
}

/// Independent `Z` flips at a rate tied to the rotation angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PauliDephasing {
    pub rate: SpoofRate,
}

impl ReferenceDistribution for PauliDephasing {
    fn name(&self) -> String {
        match self.rate {
            SpoofRate::HalfAngle => "pauli".into(),
            SpoofRate::Twirl => "pauli-twirl".into(),
        }
    }

    fn syndrome_table(&self, inst: &CssInstance) -> Result<Vec<f64>> {
        Ok(spoofer_joint(inst, self.rate.rate(inst.theta()))?.syndrome_marginal())
    }
}

/// Every syndrome equally likely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UniformSyndrome;

impl ReferenceDistribution for UniformSyndrome {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn syndrome_table(&self, inst: &CssInstance) -> Result<Vec<f64>> {
        let size = 1usize << inst.ns();
        Ok(vec![1.0 / size as f64; size])
    }
}

/// The shipped references: Pauli dephasing at the default rate and the
/// uniform syndrome law.
pub fn default_references() -> Vec<Box<dyn ReferenceDistribution>> {
    vec![Box::new(PauliDephasing::default()), Box::new(UniformSyndrome)]
}

/// Looks up a shipped reference by name.
pub fn reference_by_name(name: &str) -> Result<Box<dyn ReferenceDistribution>> {
    match name {
        "pauli" => Ok(Box::new(PauliDephasing::default())),
        "pauli-twirl" => Ok(Box::new(PauliDephasing {
            rate: SpoofRate::Twirl,
        })),
        "uniform" => Ok(Box::new(UniformSyndrome)),
        other => Err(HcsError::InvalidParameter(format!(
            "unknown reference {other:?} (expected pauli, pauli-twirl or uniform)"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RedReport {
    pub reference: String,
    pub log_ratios: Vec<f64>,
    pub mean: f64,
    pub stderr: f64,
}

impl RedReport {
    pub fn passes(&self, threshold: f64) -> bool {
        self.mean >= threshold
    }
}

fn syndrome_label(s: usize, ns: usize) -> String {
    BitVector::from_u64(ns, s as u64).to_string()
}

/// Mean of `log(q_ideal(s_i) / q_ref(s_i))` over the batch.
pub fn red_estimate(
    batch: &SampleBatch,
    inst: &CssInstance,
    q_ideal_s: &[f64],
    q_ref_s: &[f64],
    reference: &str,
) -> Result<RedReport> {
    if batch.is_empty() {
        return Err(HcsError::EmptyBatch);
    }
    let ns = inst.ns();
    let mut log_ratios = Vec::with_capacity(batch.len());
    for x in &batch.shots {
        let s = pack_syndrome(&inst.unencode(x)?.s);
        for (table, value) in [("ideal", q_ideal_s[s]), (reference, q_ref_s[s])] {
            if value <= 0.0 {
                return Err(HcsError::ZeroProbability {
                    syndrome: syndrome_label(s, ns),
                    table: table.to_string(),
                });
            }
        }
        log_ratios.push((q_ideal_s[s] / q_ref_s[s]).ln());
    }
    let m = log_ratios.len() as f64;
    let mean = log_ratios.iter().sum::<f64>() / m;
    let stderr = if log_ratios.len() > 1 {
        let var = log_ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    } else {
        0.0
    };
    Ok(RedReport {
        reference: reference.to_string(),
        log_ratios,
        mean,
        stderr,
    })
}

/// Default constant `c` in the pass threshold `c / n`.
pub const DEFAULT_RED_CONSTANT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct SyndromeVerdict {
    pub threshold: f64,
    pub reports: Vec<RedReport>,
    pub passed: bool,
}

/// Passes when the mean score against every reference reaches `c / n`.
pub fn syndrome_verification(
    batch: &SampleBatch,
    inst: &CssInstance,
    refs: &[Box<dyn ReferenceDistribution>],
    c: f64,
) -> Result<SyndromeVerdict> {
    if batch.is_empty() {
        return Err(HcsError::EmptyBatch);
    }
    if refs.is_empty() {
        return Err(HcsError::InvalidParameter("no reference distributions given".into()));
    }
    let threshold = c / inst.n() as f64;
    let ideal = ideal_joint(inst)?.syndrome_marginal();
    let reports = refs
        .iter()
        .map(|r| red_estimate(batch, inst, &ideal, &r.syndrome_table(inst)?, &r.name()))
        .collect::<Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passes(threshold));
    Ok(SyndromeVerdict {
        threshold,
        reports,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyndromePeak {
    pub s: usize,
    pub weight: f64,
    pub argmax_l: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakFraction {
    /// `q(s)`-weighted share of syndromes with `max_l q(l|s) >= threshold`.
    pub fraction: f64,
    /// `q(s)`-weighted share where the argmax equals the decoder's logical.
    pub decoder_agreement: f64,
    pub peaks: Vec<SyndromePeak>,
}

/// Default conditional mass a syndrome's top logical needs to count as peaked.
pub const DEFAULT_PEAK_MASS: f64 = 0.99;

pub fn peak_fraction(joint: &JointLS, inst: &CssInstance, dec: &Decoder, mass_threshold: f64) -> PeakFraction {
    let corrections = corrections_by_syndrome(inst, dec);
    let logicals = 1usize << joint.k;
    let mut fraction = 0.0;
    let mut agreement = 0.0;
    let mut peaks = Vec::new();
    for (s, chunk) in joint.probs.chunks(logicals).enumerate() {
        let weight: f64 = chunk.iter().sum();
        if weight <= 0.0 {
            continue;
        }
        let (argmax_l, top) = chunk
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (l, &p)| if p > best.1 { (l, p) } else { best });
        let mass = top / weight;
        if mass >= mass_threshold {
            fraction += weight;
        }
        if corrections[s] == Some(argmax_l) {
            agreement += weight;
        }
        peaks.push(SyndromePeak {
            s,
            weight,
            argmax_l,
            mass,
        });
    }
    PeakFraction {
        fraction,
        decoder_agreement: agreement,
        peaks,
    }
}

/// `max_s |q(s | +) - q(s | l0)|` between the ideal syndrome law and the
/// one of the code state for logical `l0`.
pub fn syndrome_independence_gap(inst: &CssInstance, l0: &BitVector) -> Result<f64> {
    let plus = ideal_joint(inst)?.syndrome_marginal();
    gap_against(&plus, inst, l0)
}

fn gap_against(plus: &[f64], inst: &CssInstance, l0: &BitVector) -> Result<f64> {
    let coset = coset_syndrome_marginal(inst, l0)?;
    Ok(plus
        .iter()
        .zip(&coset)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Largest gap over every logical `l0`.
pub fn max_independence_gap(inst: &CssInstance) -> Result<f64> {
    let plus = ideal_joint(inst)?.syndrome_marginal();
    let mut worst = 0.0f64;
    for l in 0..(1u64 << inst.k()) {
        worst = worst.max(gap_against(&plus, inst, &BitVector::from_u64(inst.k(), l))?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionStats {
    /// `sum q(l, s)^2`.
    pub sum_sq: f64,
    /// `2^{k_z} sum q^2`; one for the uniform label law.
    pub normalized_ls: f64,
    /// `2^n sum_x p(x)^2` over full strings. Each label covers `2^{n-k_z}`
    /// strings of equal probability, so this equals `normalized_ls`.
    pub normalized_full: f64,
    /// `2^n sum q^2`, the label sum with an `n`-bit normalizer.
    pub n_bit_normalized: f64,
}

pub fn collision_stats(joint: &JointLS, inst: &CssInstance) -> CollisionStats {
    let sum_sq: f64 = joint.probs.iter().map(|q| q * q).sum();
    let kz = joint.label_bits() as i32;
    let n = inst.n() as i32;
    let per_string = sum_sq * (2f64).powi(kz - n);
    CollisionStats {
        sum_sq,
        normalized_ls: sum_sq * (2f64).powi(kz),
        normalized_full: per_string * (2f64).powi(n),
        n_bit_normalized: sum_sq * (2f64).powi(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::css::{preset_instance, Family};
    use crate::dists::{default_spoof_rate, oracle_coset_joint, oracle_joint, sample_ideal, sample_spoofer};
    use crate::oracle::{oracle_statevector, Preparation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{LN_2, PI};

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn decoder(inst: &CssInstance) -> Decoder {
        Decoder::coset_leader(inst.hx()).unwrap()
    }

    #[test]
    fn error_free_shot_is_accepted() {
        let inst = preset_instance(18, Family::Gallager, 0.05, &mut rng(1)).unwrap();
        let dec = decoder(&inst);
        let basis = inst.public().dual_basis();
        let x = basis.combine_rows(&BitVector::random(basis.nrows(), &mut rng(2)));
        let rec = peak_verify(&inst, &dec, &x).unwrap();
        assert!(rec.l.is_zero() && rec.s.is_zero());
        assert!(rec.e_hat.unwrap().is_zero());
        assert!(rec.accepted);
    }

    #[test]
    fn every_single_error_is_accepted() {
        let inst = preset_instance(18, Family::Gallager, 0.05, &mut rng(3)).unwrap();
        let dec = decoder(&inst);
        let basis = inst.public().dual_basis();
        let mut r = rng(4);
        for i in 0..18 {
            let mut x = basis.combine_rows(&BitVector::random(basis.nrows(), &mut r));
            x.flip(i);
            assert!(peak_verify(&inst, &dec, &x).unwrap().accepted, "qubit {i}");
        }
    }

    #[test]
    fn uniform_shots_are_accepted_at_rate_two_to_minus_k() {
        let inst = preset_instance(18, Family::Gallager, 0.05, &mut rng(5)).unwrap();
        let dec = decoder(&inst);
        let trials = 10_000;
        let mut r = rng(6);
        let batch = SampleBatch {
            n: 18,
            shots: (0..trials).map(|_| BitVector::random(18, &mut r)).collect(),
        };
        let rate = peak_verify_batch(&inst, &dec, &batch).unwrap().rate;
        let expected = 1.0 / 8.0;
        let sd = (expected * (1.0 - expected) / trials as f64).sqrt();
        assert!((rate - expected).abs() <= 5.0 * sd, "rate {rate}");
        let uniform = JointLS::uniform(inst.k(), inst.ns());
        assert!((acceptance_mass(&uniform, &inst, &dec) - expected).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_basics() {
        let q = [0.25, 0.5, 0.25];
        assert_eq!(relative_entropy(&q, &q), 0.0);
        let point = [1.0, 0.0, 0.0, 0.0];
        assert!((relative_entropy(&point, &[0.25; 4]) - 2.0 * LN_2).abs() < 1e-15);
        assert_eq!(relative_entropy(&[0.5, 0.5], &[1.0, 0.0]), f64::INFINITY);
    }

    #[test]
    fn relative_entropy_from_oracle_tables() {
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng(7)).unwrap();
        let p = default_spoof_rate(inst.theta());
        let fast = relative_entropy(
            &ideal_joint(&inst).unwrap().syndrome_marginal(),
            &spoofer_joint(&inst, p).unwrap().syndrome_marginal(),
        );
        let oracle = relative_entropy(
            &oracle_joint(&inst).unwrap().syndrome_marginal(),
            &crate::dists::spoofer_joint_bruteforce(&inst, p)
                .unwrap()
                .syndrome_marginal(),
        );
        assert!((fast - oracle).abs() < 1e-10);
        assert!(fast > 0.0);
    }

    #[test]
    fn red_exact_identities() {
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng(8)).unwrap();
        let ideal = ideal_joint(&inst).unwrap().syndrome_marginal();
        let spoof = spoofer_joint(&inst, default_spoof_rate(inst.theta()))
            .unwrap()
            .syndrome_marginal();
        let uniform = vec![1.0 / ideal.len() as f64; ideal.len()];
        assert!((red_exact(&ideal, &spoof, &ideal) - relative_entropy(&ideal, &spoof)).abs() < 1e-12);
        assert!((red_exact(&spoof, &spoof, &ideal) + relative_entropy(&spoof, &ideal)).abs() < 1e-12);
        assert!(red_exact(&spoof, &spoof, &ideal) <= 0.0);
        assert_eq!(red_exact(&uniform, &ideal, &ideal), 0.0);
        assert!(red_exact(&uniform, &uniform, &ideal) <= 0.0);
    }

    #[test]
    fn spoofer_scores_at_most_zero() {
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng(9)).unwrap();
        let p = default_spoof_rate(inst.theta());
        let ideal = ideal_joint(&inst).unwrap().syndrome_marginal();
        let spoof = spoofer_joint(&inst, p).unwrap().syndrome_marginal();
        let batch = sample_spoofer(&inst.public(), p, 10_000, &mut rng(10)).unwrap();
        let rep = red_estimate(&batch, &inst, &ideal, &spoof, "pauli").unwrap();
        assert!(rep.mean < 3.0 * rep.stderr);
    }

    #[test]
    fn ideal_score_matches_exact_value() {
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng(11)).unwrap();
        let q = ideal_joint(&inst).unwrap();
        let ideal = q.syndrome_marginal();
        let spoof = spoofer_joint(&inst, default_spoof_rate(inst.theta()))
            .unwrap()
            .syndrome_marginal();
        let batch = sample_ideal(&inst, &q, 10_000, &mut rng(12)).unwrap();
        let rep = red_estimate(&batch, &inst, &ideal, &spoof, "pauli").unwrap();
        let exact = red_exact(&ideal, &spoof, &ideal);
        assert!((rep.mean - exact).abs() <= 5.0 * rep.stderr, "{} vs {exact}", rep.mean);
    }

    #[test]
    fn zero_angle_scores_are_zero() {
        let inst = preset_instance(12, Family::Random, 0.0, &mut rng(13)).unwrap();
        let q = ideal_joint(&inst).unwrap();
        let batch = sample_ideal(&inst, &q, 100, &mut rng(14)).unwrap();
        let ideal = q.syndrome_marginal();
        let reference = spoofer_joint(&inst, 0.0).unwrap().syndrome_marginal();
        let rep = red_estimate(&batch, &inst, &ideal, &reference, "pauli").unwrap();
        assert!(rep.log_ratios.iter().all(|&r| r == 0.0));
        assert_eq!(rep.mean, 0.0);
    }

    #[test]
    fn zero_probability_is_named() {
        let inst = preset_instance(12, Family::Random, 0.3, &mut rng(15)).unwrap();
        let ideal = ideal_joint(&inst).unwrap().syndrome_marginal();
        let mut reference = ideal.clone();
        reference[0] = 0.0;
        let batch = SampleBatch {
            n: 12,
            shots: vec![BitVector::zeros(12)],
        };
        let err = red_estimate(&batch, &inst, &ideal, &reference, "broken").unwrap_err();
        assert_eq!(
            err,
            HcsError::ZeroProbability {
                syndrome: "0000".into(),
                table: "broken".into()
            }
        );
    }

    #[test]
    fn verification_verdicts() {
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng(16)).unwrap();
        let q = ideal_joint(&inst).unwrap();
        let honest = sample_ideal(&inst, &q, 10_000, &mut rng(17)).unwrap();
        let verdict = syndrome_verification(&honest, &inst, &default_references(), DEFAULT_RED_CONSTANT).unwrap();
        assert!(verdict.passed, "{:?}", verdict.reports.iter().map(|r| r.mean).collect::<Vec<_>>());

        let p = default_spoof_rate(inst.theta());
        let spoofed = sample_spoofer(&inst.public(), p, 10_000, &mut rng(18)).unwrap();
        let verdict = syndrome_verification(&spoofed, &inst, &default_references(), DEFAULT_RED_CONSTANT).unwrap();
        assert!(!verdict.passed);

        let empty = SampleBatch { n: 12, shots: vec![] };
        assert_eq!(
            syndrome_verification(&empty, &inst, &default_references(), 0.1).unwrap_err(),
            HcsError::EmptyBatch
        );
    }

    #[test]
    fn peak_fraction_limits() {
        let inst = preset_instance(18, Family::Gallager, 0.0, &mut rng(19)).unwrap();
        let dec = decoder(&inst);
        let pf = peak_fraction(&ideal_joint(&inst).unwrap(), &inst, &dec, 0.99);
        assert_eq!(pf.fraction, 1.0);
        assert_eq!(pf.peaks.len(), 1);

        let quarter = inst.with_theta(PI / 2.0);
        let pf = peak_fraction(&ideal_joint(&quarter).unwrap(), &quarter, &dec, 0.99);
        assert!((pf.fraction - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_angle_is_peaked() {
        let inst = preset_instance(18, Family::Gallager, 0.05, &mut rng(20)).unwrap();
        let dec = decoder(&inst);
        let pf = peak_fraction(&ideal_joint(&inst).unwrap(), &inst, &dec, 0.99);
        assert!(pf.fraction >= 0.99, "{}", pf.fraction);
        assert!(pf.decoder_agreement >= 0.99, "{}", pf.decoder_agreement);
    }

    #[test]
    fn independence_gap_zero_without_rotation() {
        let inst = preset_instance(12, Family::Random, 0.0, &mut rng(21)).unwrap();
        for l in 0..4 {
            assert_eq!(syndrome_independence_gap(&inst, &BitVector::from_u64(2, l)).unwrap(), 0.0);
        }
    }

    #[test]
    fn independence_gap_matches_oracle() {
        let inst = preset_instance(12, Family::Random, 0.05, &mut rng(22)).unwrap();
        let plus = oracle_joint(&inst).unwrap().syndrome_marginal();
        for l in 0..4 {
            let l0 = BitVector::from_u64(2, l);
            let coset = oracle_coset_joint(&inst, &l0).unwrap().syndrome_marginal();
            let oracle_gap = plus.iter().zip(&coset).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let gap = syndrome_independence_gap(&inst, &l0).unwrap();
            assert!((gap - oracle_gap).abs() < 1e-10);
        }
    }

    #[test]
    fn collision_statistics() {
        let inst = preset_instance(12, Family::Random, 0.0, &mut rng(23)).unwrap();
        let point = collision_stats(&ideal_joint(&inst).unwrap(), &inst);
        assert!((point.sum_sq - 1.0).abs() < 1e-12);
        assert!((point.normalized_ls - 64.0).abs() < 1e-9);
        let uniform = collision_stats(&JointLS::uniform(2, 4), &inst);
        assert!((uniform.normalized_ls - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_string_collision_matches_oracle() {
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng(24)).unwrap();
        let stats = collision_stats(&ideal_joint(&inst).unwrap(), &inst);
        let probs = oracle_statevector(
            &Preparation::code_state(inst.cz().generator()),
            inst.theta(),
            &BitVector::ones(12),
        )
        .unwrap()
        .probabilities();
        let direct = 4096.0 * probs.iter().map(|p| p * p).sum::<f64>();
        assert!((stats.normalized_full - direct).abs() < 1e-9);
        assert!(stats.normalized_ls >= 1.0);
    }
}
