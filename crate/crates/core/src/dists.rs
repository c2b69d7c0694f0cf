//! Exact output distributions over packed `(l, s)` labels.
//!
//! The honest sampler prepares the uniform superposition over `C_Z`, rotates
//! every qubit by `exp(iθZ)` and measures in the `X` basis. Its output law
//! is constant on cosets of `C_Z^⊥`, so it is summarized by a table over the
//! `2^{k_z}` coset labels. The fast routine evaluates all coset amplitudes
//! with one Walsh-Hadamard transform over the message space of `G_Z`.

use std::sync::OnceLock;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::codes::{weight_distribution_bruteforce, LinearCode};
use crate::css::{BobPublic, CssInstance};
use crate::error::{HcsError, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::oracle::{oracle_statevector, walsh_hadamard, Preparation, ORACLE_QUBIT_CAP};

/// Default largest label width for exact tables.
pub const DEFAULT_LABEL_CAP: usize = 26;

/// Probabilities below this are stored as exact zeros.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

/// Label width cap, overridable through `HCS_LABEL_CAP`.
pub fn label_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("HCS_LABEL_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_LABEL_CAP)
    })
}

fn check_label_width(bits: usize) -> Result<()> {
    let cap = label_cap();
    if bits > cap {
        return Err(HcsError::SizeCap {
            what: "label bits",
            value: bits,
            cap,
        });
    }
    Ok(())
}

fn check_mask_width(n: usize) -> Result<()> {
    if n > 64 {
        return Err(HcsError::SizeCap {
            what: "block length for exact tables",
            value: n,
            cap: 64,
        });
    }
    Ok(())
}

/// Exact table `q(l, s)` indexed by `l | s << k`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointLS {
    pub k: usize,
    pub ns: usize,
    pub probs: Vec<f64>,
    /// Labels whose value fell below [`PROBABILITY_FLOOR`] and was zeroed.
    pub floored: Vec<usize>,
}

impl JointLS {
    /// Builds a table, zeroing and recording sub-floor entries.
    pub fn new(k: usize, ns: usize, mut probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 1 << (k + ns), "table size mismatch");
        let mut floored = Vec::new();
        for (i, p) in probs.iter_mut().enumerate() {
            if p.abs() < PROBABILITY_FLOOR {
                if *p != 0.0 {
                    floored.push(i);
                }
                *p = 0.0;
            }
        }
        Self {
            k,
            ns,
            probs,
            floored,
        }
    }

    pub fn uniform(k: usize, ns: usize) -> Self {
        let size = 1usize << (k + ns);
        Self::new(k, ns, vec![1.0 / size as f64; size])
    }

    pub fn label_bits(&self) -> usize {
        self.k + self.ns
    }

    pub fn index(&self, l: usize, s: usize) -> usize {
        l | s << self.k
    }

    pub fn prob(&self, l: usize, s: usize) -> f64 {
        self.probs[self.index(l, s)]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `q(s) = sum_l q(l, s)`.
    pub fn syndrome_marginal(&self) -> Vec<f64> {
        let logicals = 1usize << self.k;
        self.probs
            .chunks(logicals)
            .map(|chunk| chunk.iter().sum())
            .collect()
    }

    /// Largest entrywise difference to another table on the same labels.
    pub fn max_abs_diff(&self, other: &JointLS) -> f64 {
        assert_eq!(self.probs.len(), other.probs.len(), "label spaces differ");
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Shots of `n`-bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBatch {
    pub n: usize,
    pub shots: Vec<BitVector>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.shots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shots.is_empty()
    }
}

fn row_masks(m: &BitMatrix) -> Vec<u64> {
    m.rows().iter().map(BitVector::to_u64).collect()
}

/// `phase(w) = exp(iθ(n - 2|w|))` for every `w = m^T u`, indexed by `u`.
fn span_phases(n: usize, rows: &[u64], offset: u64, theta: f64) -> Vec<Complex64> {
    let dim = rows.len();
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << dim];
    let mut word = offset;
    out[0] = Complex64::from_polar(1.0, theta * (n as f64 - 2.0 * word.count_ones() as f64));
    for i in 1usize..(1 << dim) {
        word ^= rows[i.trailing_zeros() as usize];
        let gray = i ^ (i >> 1);
        out[gray] = Complex64::from_polar(1.0, theta * (n as f64 - 2.0 * word.count_ones() as f64));
    }
    out
}

/// Unnormalized coset amplitudes `ĝ(v) = sum_u (-1)^{u.v} exp(iθ(n - 2|G^T u|))`
/// for every `v` in the message space of `gz`. The amplitude of any `x`
/// with `G_Z x = v` is `2^{-n/2} |C_Z|^{-1/2} ĝ(v)`. Needs only public data.
pub fn coset_amplitudes(public: &BobPublic) -> Result<Vec<Complex64>> {
    let kz = public.gz.nrows();
    check_label_width(kz)?;
    check_mask_width(public.n)?;
    let mut g = span_phases(public.n, &row_masks(&public.gz), 0, public.theta);
    walsh_hadamard(&mut g);
    Ok(g)
}

/// Matrix `M` with `label(x) = M (G_Z x)`, returned as packed columns.
fn message_to_label_columns(inst: &CssInstance) -> Result<Vec<usize>> {
    let kz = inst.kz();
    let gz_t = inst.cz().generator().transpose();
    let mut columns = vec![0usize; kz];
    for r in 0..kz {
        let a = gz_t.solve(inst.t_map().row(r))?;
        for j in a.iter_ones() {
            columns[j] |= 1 << r;
        }
    }
    Ok(columns)
}

/// Exact ideal table through one Walsh-Hadamard transform.
pub fn ideal_joint(inst: &CssInstance) -> Result<JointLS> {
    let kz = inst.kz();
    let amps = coset_amplitudes(&inst.public())?;
    let columns = message_to_label_columns(inst)?;
    let scale = ((1u64 << (2 * kz)) as f64).recip();
    let mut probs = vec![0.0; 1 << kz];
    let mut label = 0usize;
    probs[0] = amps[0].norm_sqr() * scale;
    for i in 1usize..(1 << kz) {
        label ^= columns[i.trailing_zeros() as usize];
        let v = i ^ (i >> 1);
        probs[label] = amps[v].norm_sqr() * scale;
    }
    Ok(JointLS::new(inst.k(), inst.ns(), probs))
}

/// Reference implementation: for each label, pick the representative
/// `x = T^{-1}(label || 0)` and sum the amplitude over all of `C_Z`.
/// Cost is `4^{k_z}` codeword visits.
pub fn ideal_joint_naive(inst: &CssInstance) -> Result<JointLS> {
    let (n, kz, theta) = (inst.n(), inst.kz(), inst.theta());
    if kz > 13 {
        return Err(HcsError::SizeCap {
            what: "label bits for the naive sum",
            value: kz,
            cap: 13,
        });
    }
    let words = inst.cz().codewords()?;
    let phases: Vec<Complex64> = words
        .iter()
        .map(|w| Complex64::from_polar(1.0, theta * (n as f64 - 2.0 * w.weight() as f64)))
        .collect();
    let zeros = BitVector::zeros(n - kz);
    let mut probs = Vec::with_capacity(1 << kz);
    for label in 0..(1usize << kz) {
        let x = inst.encode(label, &zeros);
        let amp: Complex64 = words
            .iter()
            .zip(&phases)
            .map(|(w, ph)| if x.dot(w) { -ph } else { *ph })
            .sum();
        // 2^{n-k_z} strings per coset, each with |amp|^2 / (2^n |C_Z|)
        probs.push(amp.norm_sqr() / (1u64 << (2 * kz)) as f64);
    }
    Ok(JointLS::new(inst.k(), inst.ns(), probs))
}

/// Flip rate the shipped spoofer uses for a rotation angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpoofRate {
    /// `sin^2(θ/2)`.
    #[default]
    HalfAngle,
    /// `sin^2(θ)`, the Pauli twirl of `exp(iθZ)`.
    Twirl,
}

impl SpoofRate {
    pub fn rate(self, theta: f64) -> f64 {
        match self {
            SpoofRate::HalfAngle => (theta / 2.0).sin().powi(2),
            SpoofRate::Twirl => theta.sin().powi(2),
        }
    }
}

/// `sin^2(θ/2)`.
pub fn default_spoof_rate(theta: f64) -> f64 {
    SpoofRate::HalfAngle.rate(theta)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HcsError::InvalidParameter(format!(
            "flip probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// Law of the label of `e` for iid Bernoulli(`p_flip`) errors, by one
/// two-point convolution per qubit.
pub fn spoofer_joint(inst: &CssInstance, p_flip: f64) -> Result<JointLS> {
    check_probability(p_flip)?;
    let kz = inst.kz();
    check_label_width(kz)?;
    let mut dist = vec![0.0; 1 << kz];
    dist[0] = 1.0;
    let mut next = vec![0.0; 1 << kz];
    for col in inst.unit_labels() {
        for (label, out) in next.iter_mut().enumerate() {
            *out = (1.0 - p_flip) * dist[label] + p_flip * dist[label ^ col];
        }
        std::mem::swap(&mut dist, &mut next);
    }
    Ok(JointLS::new(inst.k(), inst.ns(), dist))
}

/// Reference: sum over all `2^n` error patterns.
pub fn spoofer_joint_bruteforce(inst: &CssInstance, p_flip: f64) -> Result<JointLS> {
    check_probability(p_flip)?;
    let n = inst.n();
    if n > ORACLE_QUBIT_CAP {
        return Err(HcsError::SizeCap {
            what: "qubits for error enumeration",
            value: n,
            cap: ORACLE_QUBIT_CAP,
        });
    }
    let mut probs = vec![0.0; 1 << inst.kz()];
    for bits in 0u64..(1 << n) {
        let e = BitVector::from_u64(n, bits);
        let w = e.weight() as i32;
        probs[inst.label(&e)] += p_flip.powi(w) * (1.0 - p_flip).powi(n as i32 - w);
    }
    Ok(JointLS::new(inst.k(), inst.ns(), probs))
}

/// Honest shots: draw a label from `joint`, uniform garbage, `x = T^{-1} y`.
pub fn sample_ideal<R: Rng + ?Sized>(
    inst: &CssInstance,
    joint: &JointLS,
    shots: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    if joint.label_bits() != inst.kz() {
        return Err(HcsError::DimensionMismatch {
            expected: inst.kz(),
            found: joint.label_bits(),
        });
    }
    let index = WeightedIndex::new(&joint.probs)
        .map_err(|e| HcsError::InvalidParameter(format!("joint table is not a distribution: {e}")))?;
    let garbage_bits = inst.n() - inst.kz();
    let shots = (0..shots)
        .map(|_| {
            let label = index.sample(rng);
            inst.encode(label, &BitVector::random(garbage_bits, rng))
        })
        .collect();
    Ok(SampleBatch { n: inst.n(), shots })
}

/// Honest shots from Bob's data alone: draw a coset `v` of `C_Z^⊥` with
/// probability `|ĝ(v)|^2 / 4^{k_z}`, then a uniform word of that coset.
pub fn sample_ideal_public<R: Rng + ?Sized>(public: &BobPublic, shots: usize, rng: &mut R) -> Result<SampleBatch> {
    let kz = public.gz.nrows();
    let amps = coset_amplitudes(public)?;
    let scale = ((1u64 << (2 * kz)) as f64).recip();
    let probs: Vec<f64> = amps.iter().map(|a| a.norm_sqr() * scale).collect();
    let index = WeightedIndex::new(&probs)
        .map_err(|e| HcsError::InvalidParameter(format!("coset table is not a distribution: {e}")))?;
    // particular solutions of G_Z x = e_j
    let particular = (0..kz)
        .map(|j| public.gz.solve(&BitVector::unit(kz, j)))
        .collect::<Result<Vec<_>>>()?;
    let particular = BitMatrix::from_rows(public.n, particular)?;
    let basis = public.dual_basis();
    let shots = (0..shots)
        .map(|_| {
            let v = BitVector::from_u64(kz, index.sample(rng) as u64);
            let mut x = particular.combine_rows(&v);
            x.xor_assign(&basis.combine_rows(&BitVector::random(basis.nrows(), rng)));
            x
        })
        .collect();
    Ok(SampleBatch { n: public.n, shots })
}

/// Pauli spoofer: a uniform word of `C_Z^⊥` plus iid `Z` flips. Reads only
/// Bob's data.
pub fn sample_spoofer<R: Rng + ?Sized>(
    public: &BobPublic,
    p_flip: f64,
    shots: usize,
    rng: &mut R,
) -> Result<SampleBatch> {
    check_probability(p_flip)?;
    let basis = public.dual_basis();
    let n = public.n;
    let shots = (0..shots)
        .map(|_| {
            let coeffs = BitVector::random(basis.nrows(), rng);
            let mut x = basis.combine_rows(&coeffs);
            for i in 0..n {
                if rng.random_bool(p_flip) {
                    x.flip(i);
                }
            }
            x
        })
        .collect();
    Ok(SampleBatch { n, shots })
}

/// Shift `L_Z^T l0` selecting the computational code state of logical `l0`.
pub fn logical_shift(inst: &CssInstance, l0: &BitVector) -> Result<BitVector> {
    if l0.len() != inst.k() {
        return Err(HcsError::DimensionMismatch {
            expected: inst.k(),
            found: l0.len(),
        });
    }
    Ok(inst.lz().combine_rows(l0))
}

/// Syndrome law `q(s)` when the prepared state is the uniform superposition
/// over `L_Z^T l0 + C_X^⊥`.
pub fn coset_syndrome_marginal(inst: &CssInstance, l0: &BitVector) -> Result<Vec<f64>> {
    let ns = inst.ns();
    check_label_width(ns)?;
    check_mask_width(inst.n())?;
    let d = logical_shift(inst, l0)?;
    let mut f = span_phases(inst.n(), &row_masks(inst.hx()), d.to_u64(), inst.theta());
    walsh_hadamard(&mut f);
    let scale = ((1u64 << (2 * ns)) as f64).recip();
    Ok(f.iter().map(|a| a.norm_sqr() * scale).collect())
}

/// Joint table for the code state of logical `l0`. Its amplitudes carry
/// the logical only as a sign `(-1)^{l0.l}`, so `q(l, s) = q(s) / 2^k`.
pub fn coset_state_joint(inst: &CssInstance, l0: &BitVector) -> Result<JointLS> {
    check_label_width(inst.kz())?;
    let marginal = coset_syndrome_marginal(inst, l0)?;
    let logicals = 1usize << inst.k();
    let mut probs = Vec::with_capacity(logicals * marginal.len());
    for q in &marginal {
        probs.extend(std::iter::repeat_n(q / logicals as f64, logicals));
    }
    Ok(JointLS::new(inst.k(), inst.ns(), probs))
}

/// Aggregates oracle probabilities by unencoded label.
fn aggregate_by_label(inst: &CssInstance, probs: &[f64]) -> JointLS {
    let n = inst.n();
    let mut table = vec![0.0; 1 << inst.kz()];
    for (x, p) in probs.iter().enumerate() {
        let out = inst
            .unencode(&BitVector::from_u64(n, x as u64))
            .expect("length matches");
        let label = out.l.to_u64() as usize | (out.s.to_u64() as usize) << inst.k();
        table[label] += p;
    }
    JointLS::new(inst.k(), inst.ns(), table)
}

/// Statevector reference for [`ideal_joint`].
pub fn oracle_joint(inst: &CssInstance) -> Result<JointLS> {
    let prep = Preparation::code_state(inst.cz().generator());
    let state = oracle_statevector(&prep, inst.theta(), &BitVector::ones(inst.n()))?;
    Ok(aggregate_by_label(inst, &state.probabilities()))
}

/// Statevector reference for [`coset_state_joint`].
pub fn oracle_coset_joint(inst: &CssInstance, l0: &BitVector) -> Result<JointLS> {
    let prep = Preparation::coset_state(inst.hx(), logical_shift(inst, l0)?);
    let state = oracle_statevector(&prep, inst.theta(), &BitVector::ones(inst.n()))?;
    Ok(aggregate_by_label(inst, &state.probabilities()))
}

/// Residuals of the two weight-enumerator identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumeratorResidual {
    /// `|A(0^n) - 2^{-n/2} |C|^{-1/2} e^{iθn} W_C(e^{-2iθ})|`, with the
    /// amplitude taken from the transform.
    pub amplitude: f64,
    /// `|W_{C^⊥}(e^{iθ}) - 2^{n-k} e^{iθn/2} cos^n(θ/2) W_C(-i tan(θ/2))|`
    /// divided by `|C^⊥|`.
    pub dual_evaluation: f64,
}

impl EnumeratorResidual {
    pub fn max(&self) -> f64 {
        self.amplitude.max(self.dual_evaluation)
    }
}

pub fn amplitude_weight_enumerator_check(cz: &LinearCode, theta: f64) -> Result<EnumeratorResidual> {
    let (n, k) = (cz.n(), cz.k());
    let public = BobPublic {
        n,
        theta,
        gz: cz.generator().clone(),
    };
    let norm = (2f64).powf(-(n as f64) / 2.0) * (2f64).powf(-(k as f64) / 2.0);
    let a0 = coset_amplitudes(&public)?[0] * norm;
    let w = weight_distribution_bruteforce(cz)?;
    let rhs = Complex64::from_polar(norm, theta * n as f64) * w.evaluate(Complex64::from_polar(1.0, -2.0 * theta));
    let amplitude = (a0 - rhs).norm();

    let w_dual = weight_distribution_bruteforce(&cz.dual())?;
    let dual_size = (2f64).powi((n - k) as i32);
    let lhs = w_dual.evaluate(Complex64::from_polar(1.0, theta));
    let rhs = Complex64::from_polar(dual_size * (theta / 2.0).cos().powi(n as i32), theta * n as f64 / 2.0)
        * w.evaluate(Complex64::new(0.0, -(theta / 2.0).tan()));
    let dual_evaluation = (lhs - rhs).norm() / dual_size;
    Ok(EnumeratorResidual {
        amplitude,
        dual_evaluation,
    })
}
