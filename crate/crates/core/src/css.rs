//! CSS instances: the peakedness code `C_X`, the hardness code `C_Z`, the
//! logical readout `L_Z` and the unencoder `T = [L_Z; H_X; garbage]`.
//!
//! The readout of a sample `x` is `y = T x`, split as `(l, s, g)` with `k`
//! logical bits, `n - k_x` syndrome bits and `n - k_z` garbage bits. The
//! first `k_z` bits of `y` are packed into an integer label, bit `i` of the
//! label holding `y_i`, so `l = label & (2^k - 1)` and `s = label >> k`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::codes::{gallager_ldpc, random_linear, LinearCode};
use crate::error::{HcsError, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Code family used by [`preset_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gallager,
    Random,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Gallager => "gallager",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = HcsError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gallager" => Ok(Family::Gallager),
            "random" => Ok(Family::Random),
            other => Err(HcsError::InvalidParameter(format!(
                "unknown family {other:?} (expected gallager or random)"
            ))),
        }
    }
}

/// Everything Alice holds.
#[derive(Debug, Clone, PartialEq)]
pub struct CssInstance {
    n: usize,
    theta: f64,
    cx: LinearCode,
    cz: LinearCode,
    lz: BitMatrix,
    garbage: BitMatrix,
    t_map: BitMatrix,
    t_inv: BitMatrix,
}

/// The part of an instance Bob receives.
#[derive(Debug, Clone, PartialEq)]
pub struct BobPublic {
    pub n: usize,
    pub theta: f64,
    pub gz: BitMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnencodedOutcome {
    pub l: BitVector,
    pub s: BitVector,
    pub g: BitVector,
}

impl CssInstance {
    /// Assembles an instance from its parts, checking every invariant.
    pub fn from_parts(
        theta: f64,
        cx: LinearCode,
        cz: LinearCode,
        lz: BitMatrix,
        garbage: BitMatrix,
    ) -> Result<Self> {
        let n = cx.n();
        if cz.n() != n {
            return Err(HcsError::DimensionMismatch {
                expected: n,
                found: cz.n(),
            });
        }
        if !theta.is_finite() {
            return Err(HcsError::InvalidParameter(format!("theta must be finite, got {theta}")));
        }
        check_css(&cx, &cz)?;
        let k = logical_count(&cx, &cz)?;
        let hx = cx.parity_check();
        if lz.nrows() != k || lz.ncols() != n {
            return Err(HcsError::DimensionMismatch {
                expected: k,
                found: lz.nrows(),
            });
        }
        if let Some(row) = lz.rows().iter().position(|r| !cz.contains(r)) {
            return Err(HcsError::InvalidParameter(format!(
                "logical row {row} is not a codeword of the hardness code"
            )));
        }
        let stacked = lz.vstack(hx);
        if stacked.rank() != cz.k() {
            return Err(HcsError::InvalidParameter(
                "logical rows are not independent modulo the peakedness dual".into(),
            ));
        }
        if garbage.nrows() != n - cz.k() || garbage.ncols() != n {
            return Err(HcsError::DimensionMismatch {
                expected: n - cz.k(),
                found: garbage.nrows(),
            });
        }
        let t_map = stacked.vstack(&garbage);
        let t_inv = t_map.invert()?;
        Ok(Self {
            n,
            theta,
            cx,
            cz,
            lz,
            garbage,
            t_map,
            t_inv,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Same codes and unencoder at another rotation angle.
    pub fn with_theta(&self, theta: f64) -> CssInstance {
        CssInstance {
            theta,
            ..self.clone()
        }
    }

    pub fn cx(&self) -> &LinearCode {
        &self.cx
    }

    pub fn cz(&self) -> &LinearCode {
        &self.cz
    }

    pub fn hx(&self) -> &BitMatrix {
        self.cx.parity_check()
    }

    pub fn lz(&self) -> &BitMatrix {
        &self.lz
    }

    pub fn garbage(&self) -> &BitMatrix {
        &self.garbage
    }

    pub fn t_map(&self) -> &BitMatrix {
        &self.t_map
    }

    pub fn t_inv(&self) -> &BitMatrix {
        &self.t_inv
    }

    pub fn k(&self) -> usize {
        self.lz.nrows()
    }

    pub fn kx(&self) -> usize {
        self.cx.k()
    }

    pub fn kz(&self) -> usize {
        self.cz.k()
    }

    /// Number of syndrome bits, `n - k_x`.
    pub fn ns(&self) -> usize {
        self.n - self.cx.k()
    }

    pub fn public(&self) -> BobPublic {
        BobPublic {
            n: self.n,
            theta: self.theta,
            gz: self.cz.generator().clone(),
        }
    }

    pub fn unencode(&self, x: &BitVector) -> Result<UnencodedOutcome> {
        if x.len() != self.n {
            return Err(HcsError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let y = self.t_map.mul_vec(x);
        let (k, kz) = (self.k(), self.kz());
        Ok(UnencodedOutcome {
            l: y.slice(0, k),
            s: y.slice(k, kz),
            g: y.slice(kz, self.n),
        })
    }

    /// Packed `(l, s)` label of `x`.
    pub fn label(&self, x: &BitVector) -> usize {
        assert_eq!(x.len(), self.n, "sample length mismatch");
        (0..self.kz())
            .filter(|&r| self.t_map.row(r).dot(x))
            .fold(0usize, |acc, r| acc | 1 << r)
    }

    /// A sample with the given label and garbage bits, `x = T^{-1} y`.
    pub fn encode(&self, label: usize, garbage: &BitVector) -> BitVector {
        let y_label = BitVector::from_u64(self.kz(), label as u64);
        self.t_inv.mul_vec(&BitVector::concat(&[&y_label, garbage]))
    }

    /// Packed label of each unit vector `e_i`.
    pub fn unit_labels(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| {
                (0..self.kz())
                    .filter(|&r| self.t_map.get(r, i))
                    .fold(0usize, |acc, r| acc | 1 << r)
            })
            .collect()
    }
}

impl UnencodedOutcome {
    pub fn y(&self) -> BitVector {
        BitVector::concat(&[&self.l, &self.s, &self.g])
    }
}

impl BobPublic {
    /// A basis of `C_Z^⊥`, the support of the error-free state.
    pub fn dual_basis(&self) -> BitMatrix {
        self.gz.nullspace_basis()
    }
}

/// Checks `H_X H_Z^T = 0`, naming the first offending row of `H_Z`.
pub fn check_css(cx: &LinearCode, cz: &LinearCode) -> Result<()> {
    match cz.parity_check().rows().iter().position(|r| !cx.contains(r)) {
        Some(row) => Err(HcsError::CssViolation { row }),
        None => Ok(()),
    }
}

fn logical_count(cx: &LinearCode, cz: &LinearCode) -> Result<usize> {
    let k = cx.k() as i64 + cz.k() as i64 - cx.n() as i64;
    if k < 1 {
        return Err(HcsError::NoLogicals { k });
    }
    Ok(k as usize)
}

/// Rows of `G_Z` that extend a basis of `C_X^⊥` to a basis of `C_Z`,
/// scanned in order.
pub fn logical_representatives(cx: &LinearCode, cz: &LinearCode) -> BitMatrix {
    let mut span = cx.parity_check().clone();
    let mut rank = span.rank();
    let mut lz = BitMatrix::empty(cx.n());
    for row in cz.generator().rows() {
        span.push_row(row.clone());
        let next = span.rank();
        if next > rank {
            lz.push_row(row.clone());
            rank = next;
        } else {
            let last = span.nrows() - 1;
            span = BitMatrix::from_rows(span.ncols(), span.rows()[..last].to_vec())
                .expect("rows share a width");
        }
    }
    lz
}

/// Builds the instance, drawing garbage rows until `T` is invertible.
pub fn build_css<R: Rng + ?Sized>(
    cx: LinearCode,
    cz: LinearCode,
    theta: f64,
    rng: &mut R,
) -> Result<CssInstance> {
    if cx.n() != cz.n() {
        return Err(HcsError::DimensionMismatch {
            expected: cx.n(),
            found: cz.n(),
        });
    }
    check_css(&cx, &cz)?;
    logical_count(&cx, &cz)?;
    let n = cx.n();
    let lz = logical_representatives(&cx, &cz);
    let top = lz.vstack(cx.parity_check());
    let extra = n - top.nrows();
    let garbage = loop {
        let candidate = BitMatrix::random(extra, n, rng);
        if top.vstack(&candidate).rank() == n {
            break candidate;
        }
    };
    CssInstance::from_parts(theta, cx, cz, lz, garbage)
}

/// `C_Z` whose dual is a random `dim`-dimensional subspace of `C_X`.
pub fn sample_subcode<R: Rng + ?Sized>(cx: &LinearCode, dim: usize, rng: &mut R) -> Result<LinearCode> {
    if dim > cx.k() {
        return Err(HcsError::InvalidParameter(format!(
            "subcode dimension {dim} exceeds k_x = {}",
            cx.k()
        )));
    }
    let n = cx.n();
    if dim == 0 {
        return LinearCode::from_generator(BitMatrix::identity(n));
    }
    let hz = loop {
        let coeffs = BitMatrix::random(dim, cx.k(), rng);
        let candidate = coeffs.mul(cx.generator());
        if candidate.rank() == dim {
            break candidate;
        }
    };
    LinearCode::from_parity_check(hz)
}

/// Code sizes for the protocol presets: `(k, k_x, k_z)`.
pub fn preset_dimensions(n: usize, family: Family) -> Result<(usize, usize, usize)> {
    let modulus = match family {
        Family::Gallager => 18,
        Family::Random => 6,
    };
    if n == 0 || n % modulus != 0 {
        return Err(HcsError::InvalidParameter(format!(
            "{family} preset needs n divisible by {modulus}, got n={n}"
        )));
    }
    Ok((n / 6, 2 * n / 3, n / 2))
}

/// Preset instance: `k_x = 2n/3`, `dim C_Z^⊥ = n/2`, hence `k = n/6`.
pub fn preset_instance<R: Rng + ?Sized>(
    n: usize,
    family: Family,
    theta: f64,
    rng: &mut R,
) -> Result<CssInstance> {
    let (_, kx, kz) = preset_dimensions(n, family)?;
    let cx = match family {
        Family::Gallager => gallager_ldpc(n, 3, 9, rng)?,
        Family::Random => random_linear(n, kx, rng)?,
    };
    let cz = sample_subcode(&cx, n - kz, rng)?;
    build_css(cx, cz, theta, rng)
}

/// Random instance of any size with `k_x = floor(2n/3)` and
/// `dim C_Z^⊥ = floor(n/2)`; used where presets have no legal size.
pub fn random_instance<R: Rng + ?Sized>(n: usize, theta: f64, rng: &mut R) -> Result<CssInstance> {
    let kx = 2 * n / 3;
    let perp = n / 2;
    if kx == 0 || kx <= perp {
        return Err(HcsError::InvalidParameter(format!(
            "n={n} leaves no logical qubits"
        )));
    }
    let cx = random_linear(n, kx, rng)?;
    let cz = sample_subcode(&cx, perp, rng)?;
    build_css(cx, cz, theta, rng)
}

/// `prod_{j<k} (1 + 2^j) - 1`, the closed form offered for the number of
/// peakedness codes strictly containing a fixed `C_Z^⊥` with `k` free
/// dimensions. It agrees with the exact count only for `k <= 1`; see
/// [`count_nontrivial_subspaces`] for the exact value. Both grow like
/// `2^{k^2/4}` or faster, which is what the counting argument needs.
pub fn count_compatible_codes(k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= BigUint::one() + (BigUint::one() << j);
    }
    acc - BigUint::one()
}

/// Number of nonzero subspaces of `F_2^k`: the sum of Gaussian binomials
/// over dimensions `1..=k`.
pub fn count_nontrivial_subspaces(k: usize) -> BigUint {
    let mut total = BigUint::from(0u8);
    for d in 1..=k {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for i in 0..d {
            num *= (BigUint::one() << (k - i)) - BigUint::one();
            den *= (BigUint::one() << (i + 1)) - BigUint::one();
        }
        total += num / den;
    }
    total
}
