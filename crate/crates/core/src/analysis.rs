//! Closed-form quantities: threshold angle, diamond distance, stabilizer
//! extent, the simulation/verification cost model and the rotation-through-
//! CNOT commutation identity.

use std::f64::consts::{E, FRAC_PI_4, PI};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;
use rand::Rng;

use crate::css::CssInstance;
use crate::error::{HcsError, Result};
use crate::gf2::BitVector;
use crate::oracle::{network_matrix, Statevector};

/// Largest angle for which the peakedness bound applies to a code that
/// corrects `t` of `n` errors: `arcsin((t/n) / (2e(4e+2)))`.
pub fn threshold_angle(t: usize, n: usize) -> Result<f64> {
    if t == 0 || t >= n {
        return Err(HcsError::InvalidParameter(format!("need 0 < t < n, got t={t}, n={n}")));
    }
    let ratio = t as f64 / n as f64;
    Ok((ratio / (2.0 * E * (4.0 * E + 2.0))).asin())
}

/// Diamond-norm distance between `exp(iθZ)` and the identity, `2|sin θ|`.
pub fn diamond_distance_rotation(theta: f64) -> f64 {
    2.0 * theta.sin().abs()
}

/// Stabilizer extent of `exp(iθZ)`, `(cos θ + tan(π/8) sin θ)^2`.
pub fn stabilizer_extent_rotation(theta: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_4).contains(&theta) {
        return Err(HcsError::InvalidParameter(format!(
            "extent formula holds for 0 <= theta <= pi/4, got {theta}"
        )));
    }
    Ok((theta.cos() + (PI / 8.0).tan() * theta.sin()).powi(2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    /// Stabilizer-rank exponent of simulation, `k + n - k_x`.
    pub rank_sim: usize,
    /// Exponent of verification, `n - k_x`.
    pub rank_verify: usize,
    /// `2^k`.
    pub gap: BigUint,
    /// Extent of one rotation gate, when the angle is in the formula's range.
    pub extent_per_gate: Option<f64>,
}

pub fn cost_model(inst: &CssInstance) -> CostReport {
    let theta = inst.theta().abs();
    CostReport {
        rank_sim: inst.k() + inst.ns(),
        rank_verify: inst.ns(),
        gap: BigUint::one() << inst.k(),
        extent_per_gate: stabilizer_extent_rotation(theta).ok(),
    }
}

fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    let polar: f64 = rng.random_range(0.0..PI);
    let azimuth: f64 = rng.random_range(0.0..2.0 * PI);
    (
        Complex64::new((polar / 2.0).cos(), 0.0),
        Complex64::from_polar((polar / 2.0).sin(), azimuth),
    )
}

/// Largest distance between `exp(iθZ_a) V |ψ>` and `V exp(iθZ_{M^T a}) |ψ>`
/// over `trials` random product states, where `M` is the GF(2) map of the
/// CNOT network `V`.
pub fn commutation_check<R: Rng + ?Sized>(
    n: usize,
    cnots: &[(usize, usize)],
    theta: f64,
    support: &BitVector,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if support.len() != n {
        return Err(HcsError::DimensionMismatch {
            expected: n,
            found: support.len(),
        });
    }
    if let Some(&(c, t)) = cnots.iter().find(|&&(c, t)| c >= n || t >= n || c == t) {
        return Err(HcsError::InvalidParameter(format!("bad CNOT ({c}, {t}) on {n} qubits")));
    }
    let pulled_back = network_matrix(n, cnots).transpose().mul_vec(support);
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let qubits: Vec<_> = (0..n).map(|_| random_qubit(rng)).collect();
        let input = Statevector::product(&qubits)?;
        let mut lhs = input.clone();
        for &(c, t) in cnots {
            lhs.cnot(c, t);
        }
        lhs.z_parity_rotation(support, theta);
        let mut rhs = input;
        rhs.z_parity_rotation(&pulled_back, theta);
        for &(c, t) in cnots {
            rhs.cnot(c, t);
        }
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::css::{preset_instance, Family};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn threshold_angle_values() {
        assert!(threshold_angle(1, 1_000_000).unwrap() < 1e-7);
        let a = threshold_angle(10, 100).unwrap();
        assert!((a - 0.0014289).abs() < 1e-7, "{a}");
        let constant = 2.0 * E * (4.0 * E + 2.0);
        assert!((constant - 69.985).abs() < 1e-3);
        let mut last = 0.0;
        for t in 1..50 {
            let v = threshold_angle(t, 50).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(threshold_angle(0, 5).is_err());
    }

    /// Grid maximum of `4|sin θ| sqrt(p(1-p))` over the population `p` of
    /// a pure input state.
    fn grid_diamond(theta: f64) -> f64 {
        (0..=10_000)
            .map(|i| {
                let p = i as f64 / 10_000.0;
                4.0 * theta.sin().abs() * (p * (1.0 - p)).sqrt()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn diamond_distance_values() {
        assert_eq!(diamond_distance_rotation(0.0), 0.0);
        assert!((diamond_distance_rotation(PI / 6.0) - 1.0).abs() < 1e-15);
        assert!((diamond_distance_rotation(PI / 2.0) - 2.0).abs() < 1e-15);
        for theta in [0.1, PI / 8.0, PI / 2.0, 2.0] {
            assert!((grid_diamond(theta) - diamond_distance_rotation(theta)).abs() < 1e-12);
        }
    }

    #[test]
    fn extent_values() {
        assert_eq!(stabilizer_extent_rotation(0.0).unwrap(), 1.0);
        let at = stabilizer_extent_rotation(PI / 8.0).unwrap();
        assert!((at - 1.171573).abs() < 1e-6);
        assert!((at - 1.0 / (PI / 8.0).cos().powi(2)).abs() < 1e-12);
        assert!(stabilizer_extent_rotation(1.0).is_err());
    }

    #[test]
    fn cost_model_presets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = preset_instance(18, Family::Gallager, PI / 8.0, &mut rng).unwrap();
        let c = cost_model(&inst);
        assert_eq!((c.rank_sim, c.rank_verify), (9, 6));
        assert_eq!(c.gap.to_string(), "8");
        let inst = preset_instance(12, Family::Random, PI / 8.0, &mut rng).unwrap();
        let c = cost_model(&inst);
        assert_eq!((c.rank_sim, c.rank_verify, c.gap.clone()), (6, 4, BigUint::from(4u8)));
        assert_eq!(c.gap, BigUint::one() << (c.rank_sim - c.rank_verify));
    }

    #[test]
    fn commutation_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let support = BitVector::from_u64(3, 0b011);
        assert_eq!(commutation_check(3, &[], 0.3, &support, 3, &mut rng).unwrap(), 0.0);
        let control = BitVector::unit(2, 0);
        assert!(commutation_check(2, &[(0, 1)], 0.7, &control, 5, &mut rng).unwrap() <= 1e-12);
        let target = BitVector::unit(2, 1);
        assert!(commutation_check(2, &[(0, 1)], 0.7, &target, 5, &mut rng).unwrap() <= 1e-12);
    }

    #[test]
    fn commutation_random_network() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cnots: Vec<(usize, usize)> = (0..25)
            .map(|_| {
                let c = rng.random_range(0..10);
                let mut t = rng.random_range(0..10);
                while t == c {
                    t = rng.random_range(0..10);
                }
                (c, t)
            })
            .collect();
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let support = BitVector::random(10, &mut rng);
            worst = worst.max(commutation_check(10, &cnots, PI / 8.0, &support, 1, &mut rng).unwrap());
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn wrong_pullback_is_detected() {
        // a rotation on the target does not commute through unchanged
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let qubits: Vec<_> = (0..2).map(|_| random_qubit(&mut rng)).collect();
        let input = Statevector::product(&qubits).unwrap();
        let target = BitVector::unit(2, 1);
        let mut lhs = input.clone();
        lhs.cnot(0, 1);
        lhs.z_parity_rotation(&target, 0.7);
        let mut rhs = input;
        rhs.z_parity_rotation(&target, 0.7);
        rhs.cnot(0, 1);
        assert!(lhs.distance(&rhs) > 1e-3);
    }
}
