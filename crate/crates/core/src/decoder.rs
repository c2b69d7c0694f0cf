//! Syndrome decoders: an exact coset-leader table and sum-product belief
//! propagation.
//!
//! Syndromes are packed into integers with bit `j` holding check `j`.

use crate::error::{HcsError, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest number of checks the lookup table will index.
pub const TABLE_CHECK_CAP: usize = 24;

pub fn pack_syndrome(s: &BitVector) -> usize {
    s.iter_ones().fold(0usize, |acc, j| acc | 1 << j)
}

pub fn unpack_syndrome(len: usize, packed: usize) -> BitVector {
    BitVector::from_u64(len, packed as u64)
}

/// Minimum-weight coset leaders for every reachable syndrome.
///
/// Candidates are scanned weight by weight. Within a weight they are
/// visited in increasing order of the bit string `e_0 e_1 ... e_{n-1}`, so
/// the first hit per syndrome is the lexicographically smallest leader.
#[derive(Debug, Clone)]
pub struct CosetLeaderTable {
    n: usize,
    checks: usize,
    leaders: Vec<Option<u64>>,
}

impl CosetLeaderTable {
    pub fn build(h: &BitMatrix) -> Result<Self> {
        let (checks, n) = (h.nrows(), h.ncols());
        if checks > TABLE_CHECK_CAP {
            return Err(HcsError::SizeCap {
                what: "parity checks for the coset-leader table",
                value: checks,
                cap: TABLE_CHECK_CAP,
            });
        }
        if n > 64 {
            return Err(HcsError::SizeCap {
                what: "block length for the coset-leader table",
                value: n,
                cap: 64,
            });
        }
        // Integer bit b stands for coordinate n-1-b.
        let col_syn: Vec<usize> = (0..n).map(|b| pack_syndrome(&h.column(n - 1 - b))).collect();
        let reachable = 1usize << h.rank();
        let mut leaders = vec![None; 1 << checks];
        leaders[0] = Some(0u64);
        let mut filled = 1;
        'weights: for w in 1..=n {
            if filled == reachable {
                break;
            }
            let mut mask: u64 = (1u64 << w) - 1;
            let limit = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            loop {
                let mut syn = 0usize;
                let mut rest = mask;
                while rest != 0 {
                    syn ^= col_syn[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                if leaders[syn].is_none() {
                    leaders[syn] = Some(mask);
                    filled += 1;
                    if filled == reachable {
                        break 'weights;
                    }
                }
                // Gosper's hack: next integer with the same popcount.
                let c = mask & mask.wrapping_neg();
                let r = mask.wrapping_add(c);
                if r == 0 || r > limit {
                    break;
                }
                let next = (((r ^ mask) >> 2) / c) | r;
                if next > limit {
                    break;
                }
                mask = next;
            }
        }
        Ok(Self { n, checks, leaders })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn checks(&self) -> usize {
        self.checks
    }

    fn expand(&self, mask: u64) -> BitVector {
        let mut e = BitVector::zeros(self.n);
        for b in 0..self.n {
            if mask >> b & 1 == 1 {
                e.set(self.n - 1 - b, true);
            }
        }
        e
    }

    /// Leader for a packed syndrome, `None` if the syndrome is unreachable.
    pub fn leader_packed(&self, syndrome: usize) -> Option<BitVector> {
        self.leaders
            .get(syndrome)
            .copied()
            .flatten()
            .map(|m| self.expand(m))
    }

    pub fn leader(&self, s: &BitVector) -> Option<BitVector> {
        assert_eq!(s.len(), self.checks, "syndrome length mismatch");
        self.leader_packed(pack_syndrome(s))
    }
}

/// Sum-product decoder over the Tanner graph of `h`.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    h: BitMatrix,
    prior: f64,
    max_iters: usize,
    check_nbrs: Vec<Vec<usize>>,
}

impl BpDecoder {
    pub fn new(h: &BitMatrix, prior: f64, max_iters: usize) -> Result<Self> {
        if !(prior > 0.0 && prior < 1.0) {
            return Err(HcsError::InvalidParameter(format!(
                "BP prior must lie in (0, 1), got {prior}"
            )));
        }
        let check_nbrs = h.rows().iter().map(|r| r.iter_ones().collect()).collect();
        Ok(Self {
            h: h.clone(),
            prior,
            max_iters,
            check_nbrs,
        })
    }

    /// A solution of `H e = s`, or `None` when the iteration cap is hit.
    pub fn decode(&self, s: &BitVector) -> Option<BitVector> {
        let n = self.h.ncols();
        assert_eq!(s.len(), self.h.nrows(), "syndrome length mismatch");
        if s.is_zero() {
            return Some(BitVector::zeros(n));
        }
        let channel = ((1.0 - self.prior) / self.prior).ln();
        // Messages are stored per edge, indexed like check_nbrs.
        let mut v2c: Vec<Vec<f64>> = self.check_nbrs.iter().map(|nb| vec![channel; nb.len()]).collect();
        let mut c2v: Vec<Vec<f64>> = self.check_nbrs.iter().map(|nb| vec![0.0; nb.len()]).collect();
        for _ in 0..self.max_iters {
            for (c, nbrs) in self.check_nbrs.iter().enumerate() {
                let sign = if s.get(c) { -1.0 } else { 1.0 };
                let t: Vec<f64> = v2c[c].iter().map(|m| (m / 2.0).tanh()).collect();
                for j in 0..nbrs.len() {
                    let prod: f64 = t
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != j)
                        .map(|(_, x)| x)
                        .product();
                    let prod = prod.clamp(-1.0 + 1e-15, 1.0 - 1e-15);
                    c2v[c][j] = sign * 2.0 * prod.atanh();
                }
            }
            let mut posterior = vec![channel; n];
            for (c, nbrs) in self.check_nbrs.iter().enumerate() {
                for (j, &v) in nbrs.iter().enumerate() {
                    posterior[v] += c2v[c][j];
                }
            }
            let mut e = BitVector::zeros(n);
            for (v, &llr) in posterior.iter().enumerate() {
                if llr < 0.0 {
                    e.set(v, true);
                }
            }
            if self.h.mul_vec(&e) == *s {
                return Some(e);
            }
            for (c, nbrs) in self.check_nbrs.iter().enumerate() {
                for (j, &v) in nbrs.iter().enumerate() {
                    v2c[c][j] = posterior[v] - c2v[c][j];
                }
            }
        }
        None
    }
}

/// Free-function form of [`BpDecoder::decode`].
pub fn bp_decode(h: &BitMatrix, s: &BitVector, prior: f64, max_iters: usize) -> Result<Option<BitVector>> {
    Ok(BpDecoder::new(h, prior, max_iters)?.decode(s))
}

/// Reference decoder used by peak verification.
#[derive(Debug, Clone)]
pub enum Decoder {
    Table(CosetLeaderTable),
    BeliefPropagation(BpDecoder),
}

impl Decoder {
    pub fn coset_leader(h: &BitMatrix) -> Result<Self> {
        Ok(Decoder::Table(CosetLeaderTable::build(h)?))
    }

    pub fn belief_propagation(h: &BitMatrix, prior: f64, max_iters: usize) -> Result<Self> {
        Ok(Decoder::BeliefPropagation(BpDecoder::new(h, prior, max_iters)?))
    }

    /// Estimated error, or `None` when the decoder gives up.
    pub fn decode(&self, s: &BitVector) -> Option<BitVector> {
        match self {
            Decoder::Table(t) => t.leader(s),
            Decoder::BeliefPropagation(bp) => bp.decode(s),
        }
    }
}
