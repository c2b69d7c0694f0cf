//! Dense statevector simulation for small qubit counts.
//!
//! Basis index bit `i` is qubit `i`. Everything here is brute force and
//! serves as the reference the fast routines are checked against.

use num_complex::Complex64;

use crate::error::{HcsError, Result};
use crate::gf2::{BitMatrix, BitVector};

pub const ORACLE_QUBIT_CAP: usize = 20;

fn check_cap(n: usize) -> Result<()> {
    if n > ORACLE_QUBIT_CAP {
        return Err(HcsError::SizeCap {
            what: "oracle qubits",
            value: n,
            cap: ORACLE_QUBIT_CAP,
        });
    }
    Ok(())
}

/// In-place unnormalized Walsh-Hadamard transform,
/// `out[v] = sum_u (-1)^{u.v} in[u]`. Length must be a power of two.
pub fn walsh_hadamard(data: &mut [Complex64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "transform length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (data[i], data[i + half]);
                data[i] = a + b;
                data[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

/// State preparation: `|+>` on `plus_mask`, `|0>` elsewhere, then CNOTs
/// `(control, target)` in order, then an optional `X` on `shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preparation {
    pub n: usize,
    pub plus_mask: BitVector,
    pub cnots: Vec<(usize, usize)>,
    pub shift: Option<BitVector>,
}

impl Preparation {
    /// Encoding network for the row space of `g`: pivots of the reduced
    /// form start in `|+>` and fan out to the other ones of their row.
    pub fn code_state(g: &BitMatrix) -> Self {
        let n = g.ncols();
        let reduced = g.rref();
        let mut plus_mask = BitVector::zeros(n);
        let mut cnots = Vec::new();
        for (r, &p) in reduced.pivots.iter().enumerate() {
            plus_mask.set(p, true);
            for c in reduced.reduced.row(r).iter_ones() {
                if c != p {
                    cnots.push((p, c));
                }
            }
        }
        Self {
            n,
            plus_mask,
            cnots,
            shift: None,
        }
    }

    /// Uniform superposition over `shift + rowspace(g)`.
    pub fn coset_state(g: &BitMatrix, shift: BitVector) -> Self {
        let mut prep = Self::code_state(g);
        prep.shift = Some(shift);
        prep
    }

    /// GF(2) action of the CNOT network on computational basis strings.
    pub fn network_matrix(&self) -> BitMatrix {
        network_matrix(self.n, &self.cnots)
    }
}

/// Matrix `V` with `V x` the image of basis string `x` under the CNOTs.
pub fn network_matrix(n: usize, cnots: &[(usize, usize)]) -> BitMatrix {
    let mut v = BitMatrix::identity(n);
    for &(c, t) in cnots {
        // x_t ^= x_c acts on rows of the accumulated map
        let control = v.row(c).clone();
        let mut target = v.row(t).clone();
        target.xor_assign(&control);
        let mut rows = v.into_rows();
        rows[t] = target;
        v = BitMatrix::from_rows(n, rows).expect("square map");
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl OracleState {
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn amplitude(&self, x: &BitVector) -> Complex64 {
        self.amps[x.to_u64() as usize]
    }
}

/// Prepares the state, rotates the masked qubits by `diag(e^{iθ}, e^{-iθ})`
/// and applies a Hadamard to every qubit.
pub fn oracle_statevector(prep: &Preparation, theta: f64, rotation_mask: &BitVector) -> Result<OracleState> {
    let n = prep.n;
    check_cap(n)?;
    if prep.plus_mask.len() != n || rotation_mask.len() != n {
        return Err(HcsError::DimensionMismatch {
            expected: n,
            found: rotation_mask.len().min(prep.plus_mask.len()),
        });
    }
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(1.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for q in prep.plus_mask.iter_ones() {
        let bit = 1usize << q;
        for i in 0..dim {
            if i & bit == 0 {
                let (a, b) = (amps[i], amps[i | bit]);
                amps[i] = (a + b) * h;
                amps[i | bit] = (a - b) * h;
            }
        }
    }
    for &(c, t) in &prep.cnots {
        let (cb, tb) = (1usize << c, 1usize << t);
        for i in 0..dim {
            if i & cb != 0 && i & tb == 0 {
                amps.swap(i, i | tb);
            }
        }
    }
    if let Some(shift) = &prep.shift {
        let s = shift.to_u64() as usize;
        let mut shifted = vec![Complex64::new(0.0, 0.0); dim];
        for (i, a) in amps.iter().enumerate() {
            shifted[i ^ s] = *a;
        }
        amps = shifted;
    }
    let rot = rotation_mask.to_u64() as usize;
    let rotated = rot.count_ones() as f64;
    for (i, a) in amps.iter_mut().enumerate() {
        let flips = (i & rot).count_ones() as f64;
        *a *= Complex64::from_polar(1.0, theta * (rotated - 2.0 * flips));
    }
    walsh_hadamard(&mut amps);
    let scale = (dim as f64).sqrt().recip();
    for a in amps.iter_mut() {
        *a *= scale;
    }
    Ok(OracleState { n, amps })
}

/// A general statevector with the gates the compiler and the commutation
/// check need.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn zero(n: usize) -> Result<Self> {
        check_cap(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Tensor product of single-qubit states `(alpha, beta)`, qubit 0 first.
    pub fn product(qubits: &[(Complex64, Complex64)]) -> Result<Self> {
        let n = qubits.len();
        check_cap(n)?;
        let mut amps = vec![Complex64::new(1.0, 0.0); 1 << n];
        for (i, a) in amps.iter_mut().enumerate() {
            for (q, (alpha, beta)) in qubits.iter().enumerate() {
                *a *= if i >> q & 1 == 0 { *alpha } else { *beta };
            }
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn h(&mut self, q: usize) {
        let bit = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * s;
                self.amps[i | bit] = (a - b) * s;
            }
        }
    }

    /// `diag(1, e^{i phi})` on qubit `q`.
    pub fn phase(&mut self, q: usize, phi: f64) {
        let bit = 1usize << q;
        let w = Complex64::from_polar(1.0, phi);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= w;
            }
        }
    }

    pub fn t(&mut self, q: usize) {
        self.phase(q, std::f64::consts::FRAC_PI_4);
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    /// `exp(iθ Z_S)` for the parity operator `Z_S = prod_{j in S} Z_j`.
    pub fn z_parity_rotation(&mut self, support: &BitVector, theta: f64) {
        let mask = support.to_u64() as usize;
        for (i, a) in self.amps.iter_mut().enumerate() {
            let sign = if (i & mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            *a *= Complex64::from_polar(1.0, sign * theta);
        }
    }

    pub fn distance(&self, other: &Statevector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn transform_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let input: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(rng.random(), rng.random()))
            .collect();
        let mut fast = input.clone();
        walsh_hadamard(&mut fast);
        for v in 0..16usize {
            let direct: Complex64 = (0..16usize)
                .map(|u| if (u & v).count_ones() % 2 == 0 { input[u] } else { -input[u] })
                .sum();
            assert!((direct - fast[v]).norm() < 1e-12);
        }
    }

    #[test]
    fn hadamard_on_zero_is_uniform() {
        let prep = Preparation {
            n: 4,
            plus_mask: BitVector::zeros(4),
            cnots: vec![],
            shift: None,
        };
        let st = oracle_statevector(&prep, 0.0, &BitVector::zeros(4)).unwrap();
        assert!(st.probabilities().iter().all(|&p| (p - 1.0 / 16.0).abs() < 1e-15));
        assert!((st.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repetition_code_state_maps_to_even_weight() {
        let g = BitMatrix::parse_rows(&["111"]).unwrap();
        let st = oracle_statevector(&Preparation::code_state(&g), 0.0, &BitVector::ones(3)).unwrap();
        for (x, p) in st.probabilities().iter().enumerate() {
            let expected = if (x as u32).count_ones() % 2 == 0 { 0.25 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12, "x={x} p={p}");
        }
    }

    #[test]
    fn code_state_network_spans_row_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = BitMatrix::random(4, 9, &mut rng);
        let prep = Preparation::code_state(&g);
        // the network maps the pivot subspace onto rowspace(g)
        let v = prep.network_matrix();
        for bits in 0u64..(1 << 9) {
            let x = BitVector::from_u64(9, bits);
            let on_pivots = x.iter_ones().all(|i| prep.plus_mask.get(i));
            if on_pivots {
                assert!(g.row_space_contains(&v.mul_vec(&x)));
            }
        }
    }

    #[test]
    fn network_matrix_tracks_basis_states() {
        let cnots = vec![(0, 1), (1, 2), (2, 0)];
        let v = network_matrix(3, &cnots);
        for bits in 0u64..8 {
            let mut sv = Statevector::zero(3).unwrap();
            for q in 0..3 {
                if bits >> q & 1 == 1 {
                    sv.h(q);
                    sv.phase(q, std::f64::consts::PI);
                    sv.h(q);
                }
            }
            for &(c, t) in &cnots {
                sv.cnot(c, t);
            }
            let image = v.mul_vec(&BitVector::from_u64(3, bits)).to_u64() as usize;
            assert!((sv.amplitude(image).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(Statevector::zero(21).is_err());
    }
}
