//! Binary linear codes: constructions, duals and weight enumerators.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{HcsError, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest dimension for which codewords are enumerated exhaustively.
pub const ENUMERATION_CAP: usize = 26;

/// Restart budget for the regular LDPC sampler.
pub const GALLAGER_ATTEMPTS: usize = 10_000;

/// A binary linear code held in both generator and parity-check form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    g: BitMatrix,
    h: BitMatrix,
}

impl LinearCode {
    /// Code spanned by the rows of a full-rank generator.
    pub fn from_generator(g: BitMatrix) -> Result<Self> {
        let rank = g.rank();
        if rank != g.nrows() {
            return Err(HcsError::RankDeficient {
                rank,
                rows: g.nrows(),
            });
        }
        let h = g.nullspace_basis();
        Ok(Self {
            n: g.ncols(),
            g,
            h,
        })
    }

    /// Kernel of a full-rank parity-check matrix.
    pub fn from_parity_check(h: BitMatrix) -> Result<Self> {
        let rank = h.rank();
        if rank != h.nrows() {
            return Err(HcsError::RankDeficient {
                rank,
                rows: h.nrows(),
            });
        }
        let g = h.nullspace_basis();
        Ok(Self {
            n: h.ncols(),
            g,
            h,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.g.nrows()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    /// The dual code; its generator is this code's parity check.
    pub fn dual(&self) -> LinearCode {
        LinearCode {
            n: self.n,
            g: self.h.clone(),
            h: self.g.clone(),
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.h.mul_vec(v).is_zero()
    }

    /// Same row space, regardless of the chosen bases.
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n
            && self.k() == other.k()
            && other.g.rows().iter().all(|r| self.contains(r))
    }

    /// Visits every codeword once, in Gray-code order starting from zero.
    pub fn for_each_codeword<F: FnMut(&BitVector)>(&self, mut f: F) -> Result<()> {
        let k = self.k();
        if k > ENUMERATION_CAP {
            return Err(HcsError::SizeCap {
                what: "code dimension",
                value: k,
                cap: ENUMERATION_CAP,
            });
        }
        let mut word = BitVector::zeros(self.n);
        f(&word);
        for i in 1u64..(1u64 << k) {
            word.xor_assign(self.g.row(i.trailing_zeros() as usize));
            f(&word);
        }
        Ok(())
    }

    pub fn codewords(&self) -> Result<Vec<BitVector>> {
        let mut out = Vec::with_capacity(1 << self.k().min(ENUMERATION_CAP));
        self.for_each_codeword(|w| out.push(w.clone()))?;
        Ok(out)
    }
}

/// Uniformly random full-rank `k x n` generator.
pub fn random_linear<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<LinearCode> {
    if k == 0 || k > n {
        return Err(HcsError::InvalidParameter(format!(
            "random_linear needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    loop {
        let g = BitMatrix::random(k, n, rng);
        if g.rank() == k {
            return LinearCode::from_generator(g);
        }
    }
}

fn check_regular_shape(n: usize, col_wt: usize, row_wt: usize) -> Result<usize> {
    if col_wt == 0 || row_wt == 0 || n == 0 || n % row_wt != 0 || row_wt > n {
        return Err(HcsError::InvalidParameter(format!(
            "regular LDPC needs row weight {row_wt} dividing n={n}"
        )));
    }
    let m = col_wt * n / row_wt;
    if col_wt > m {
        return Err(HcsError::InvalidParameter(format!(
            "column weight {col_wt} exceeds the {m} available checks"
        )));
    }
    Ok(m)
}

/// Classic stacked-block construction: block one has disjoint row supports,
/// later blocks are column permutations of it. Every row in a block sums to
/// the all-ones word, so the result has rank at most `m - col_wt + 1`.
pub fn gallager_block_parity_check<R: Rng + ?Sized>(
    n: usize,
    col_wt: usize,
    row_wt: usize,
    rng: &mut R,
) -> Result<BitMatrix> {
    check_regular_shape(n, col_wt, row_wt)?;
    let per_block = n / row_wt;
    let mut h = BitMatrix::empty(n);
    let mut perm: Vec<usize> = (0..n).collect();
    for block in 0..col_wt {
        if block > 0 {
            perm.shuffle(rng);
        }
        for r in 0..per_block {
            let mut row = BitVector::zeros(n);
            for c in r * row_wt..(r + 1) * row_wt {
                row.set(perm[c], true);
            }
            h.push_row(row);
        }
    }
    Ok(h)
}

/// One pass of the column-by-column regular sampler. Each column draws
/// `col_wt` distinct checks among those with spare capacity, never
/// repeating an earlier column. Returns `None` on a dead end.
fn try_regular_columns<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    col_wt: usize,
    row_wt: usize,
    rng: &mut R,
) -> Option<BitMatrix> {
    let mut spare = vec![row_wt; m];
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut open: Vec<usize> = (0..m).filter(|&r| spare[r] > 0).collect();
        if open.len() < col_wt {
            return None;
        }
        let mut chosen = None;
        for _ in 0..32 {
            open.shuffle(rng);
            let mut pick = open[..col_wt].to_vec();
            pick.sort_unstable();
            if !columns.contains(&pick) {
                chosen = Some(pick);
                break;
            }
        }
        let pick = chosen?;
        for &r in &pick {
            spare[r] -= 1;
        }
        columns.push(pick);
    }
    let mut h = BitMatrix::zeros(m, n);
    for (c, rows) in columns.iter().enumerate() {
        for &r in rows {
            h.set(r, c, true);
        }
    }
    Some(h)
}

/// A random `(col_wt, row_wt)`-regular parity-check matrix with pairwise
/// distinct columns, so the code has distance at least three. Rank is not
/// enforced here.
pub fn regular_parity_check<R: Rng + ?Sized>(
    n: usize,
    col_wt: usize,
    row_wt: usize,
    rng: &mut R,
) -> Result<BitMatrix> {
    let m = check_regular_shape(n, col_wt, row_wt)?;
    for _ in 0..GALLAGER_ATTEMPTS {
        if let Some(h) = try_regular_columns(n, m, col_wt, row_wt, rng) {
            return Ok(h);
        }
    }
    Err(HcsError::ResampleLimit {
        what: "regular parity check with distinct columns",
        attempts: GALLAGER_ATTEMPTS,
    })
}

/// Random regular LDPC code whose parity check has full rank, so
/// `k = n - col_wt * n / row_wt` exactly.
pub fn gallager_ldpc<R: Rng + ?Sized>(
    n: usize,
    col_wt: usize,
    row_wt: usize,
    rng: &mut R,
) -> Result<LinearCode> {
    let m = check_regular_shape(n, col_wt, row_wt)?;
    for _ in 0..GALLAGER_ATTEMPTS {
        let Some(h) = try_regular_columns(n, m, col_wt, row_wt, rng) else {
            continue;
        };
        if h.rank() == m {
            return LinearCode::from_parity_check(h);
        }
    }
    Err(HcsError::ResampleLimit {
        what: "full-rank regular parity check",
        attempts: GALLAGER_ATTEMPTS,
    })
}

/// Codeword counts by Hamming weight, `counts[w] = A_w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub counts: Vec<u128>,
}

impl WeightDistribution {
    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().sum()
    }

    /// Evaluates `sum_w A_w z^w`.
    pub fn evaluate(&self, z: num_complex::Complex64) -> num_complex::Complex64 {
        self.counts
            .iter()
            .rev()
            .fold(num_complex::Complex64::zero(), |acc, &a| acc * z + a as f64)
    }
}

pub fn weight_distribution_bruteforce(code: &LinearCode) -> Result<WeightDistribution> {
    let mut counts = vec![0u128; code.n() + 1];
    code.for_each_codeword(|w| counts[w.weight()] += 1)?;
    Ok(WeightDistribution { counts })
}

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::from(1u8);
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Weight distribution of the dual code of dimension `n - k`, through
/// Krawtchouk polynomials in exact integer arithmetic.
pub fn macwilliams(dist: &WeightDistribution, n: usize, k: usize) -> Result<WeightDistribution> {
    if dist.counts.len() != n + 1 {
        return Err(HcsError::DimensionMismatch {
            expected: n + 1,
            found: dist.counts.len(),
        });
    }
    if k > n || n >= 127 {
        return Err(HcsError::InvalidParameter(format!(
            "macwilliams needs k <= n < 127, got k={k}, n={n}"
        )));
    }
    let size = BigInt::from(1u8) << k;
    let binom: Vec<Vec<BigInt>> = (0..=n)
        .map(|a| (0..=n).map(|b| binomial(a, b)).collect())
        .collect();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut acc = BigInt::zero();
        for (w, &a) in dist.counts.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut kraw = BigInt::zero();
            for s in 0..=j.min(w) {
                if j - s > n - w {
                    continue;
                }
                let term = &binom[w][s] * &binom[n - w][j - s];
                if s % 2 == 0 {
                    kraw += term;
                } else {
                    kraw -= term;
                }
            }
            acc += kraw * BigInt::from(a);
        }
        if !(&acc % &size).is_zero() {
            return Err(HcsError::NonIntegerMacWilliams { weight: j });
        }
        let value = (acc / &size)
            .to_u128()
            .ok_or(HcsError::NonIntegerMacWilliams { weight: j })?;
        out.push(value);
    }
    Ok(WeightDistribution { counts: out })
}

/// Minimum nonzero weight; `n + 1` for the zero code.
pub fn min_distance_bruteforce(code: &LinearCode) -> Result<usize> {
    let dist = weight_distribution_bruteforce(code)?;
    Ok(dist
        .counts
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, &a)| a > 0)
        .map_or(code.n() + 1, |(w, _)| w))
}
