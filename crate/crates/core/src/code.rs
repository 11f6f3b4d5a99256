//! Linear code model: canonical generator, membership, exhaustive weight
//! distribution, and the MacWilliams dual transform.
//!
//! Weight distributions are computed exactly by walking all 2^k messages in
//! Gray-code order, so each step XORs a single generator row into the
//! current codeword and takes a popcount. The message space can be split
//! into 2^b lanes by fixing the top b message bits; lanes run independently
//! (in parallel via rayon) and merge by elementwise addition, which makes
//! the result identical for every b.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};

/// Default cap on the enumerated dimension: 2^28 Gray steps at most.
pub const DEFAULT_ENUM_LIMIT: usize = 28;

/// Errors from enumeration and distribution handling.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("dimension {k} exceeds the enumeration limit {limit}")]
    EnumerationRefused { k: usize, limit: usize },
    #[error("vector length {got} does not match code length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid weight distribution: {0}")]
    InvalidDistribution(String),
}

/// Knobs for exhaustive enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Refuse codes with k above this.
    pub limit: usize,
    /// Split into 2^lane_exp lanes (clamped to k).
    pub lane_exp: u32,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            limit: DEFAULT_ENUM_LIMIT,
            lane_exp: 0,
        }
    }
}

/// A binary linear [n, k] code held as its canonical generator matrix
/// (reduced row echelon form, full rank; empty for the zero code).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: BitMatrix,
    pivots: Vec<usize>,
}

impl LinearCode {
    /// Canonicalize an arbitrary spanning matrix: RREF, zero rows dropped.
    pub fn from_generator(matrix: &BitMatrix) -> LinearCode {
        let (generator, pivots) = matrix.rref();
        LinearCode {
            n: matrix.cols(),
            k: generator.rows(),
            generator,
            pivots,
        }
    }

    /// The code {v : H v^T = 0}.
    pub fn from_parity_check(h: &BitMatrix) -> LinearCode {
        LinearCode::from_generator(&h.nullspace())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Canonical k×n generator in RREF.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Pivot column of each generator row.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Membership by eliminating v against the RREF rows.
    pub fn contains(&self, v: &BitVec) -> Result<bool, CodeError> {
        if v.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let mut words = v.words().to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if words[p / 64] >> (p % 64) & 1 == 1 {
                for (w, s) in words.iter_mut().zip(self.generator.row_words(r)) {
                    *w ^= s;
                }
            }
        }
        Ok(words.iter().all(|&w| w == 0))
    }

    /// Exhaustive enumeration of all 2^k codewords.
    pub fn enumerate(&self, opts: &EnumOptions) -> Result<Enumeration, CodeError> {
        if self.k > opts.limit {
            return Err(CodeError::EnumerationRefused {
                k: self.k,
                limit: opts.limit,
            });
        }
        let b = (opts.lane_exp as usize).min(self.k);
        let low = self.k - b;
        let lanes = 1u64 << b;
        let merged = (0..lanes)
            .into_par_iter()
            .map(|lane| self.run_lane(lane, low))
            .reduce(
                || LaneResult::empty(self.n, self.generator.words_per_row()),
                LaneResult::merge,
            );
        let support = BitVec::from_bits(
            (0..self.n).map(|i| merged.min_support[i / 64] >> (i % 64) & 1 == 1),
        );
        Ok(Enumeration {
            distribution: WeightDistribution::from_counts(merged.counts),
            min_weight: (merged.min_weight != usize::MAX).then_some(merged.min_weight),
            min_weight_support: support,
        })
    }

    /// One Gray-code lane: top message bits fixed to `lane`, low bits swept.
    fn run_lane(&self, lane: u64, low: usize) -> LaneResult {
        let wpr = self.generator.words_per_row().max(1);
        let mut result = LaneResult::empty(self.n, self.generator.words_per_row());
        let mut cw = vec![0u64; wpr];
        for j in 0..64 {
            if lane >> j & 1 == 1 {
                for (w, s) in cw.iter_mut().zip(self.generator.row_words(low + j)) {
                    *w ^= s;
                }
            }
        }
        result.record(&cw);
        for i in 1..1u64 << low {
            let row = i.trailing_zeros() as usize;
            for (w, s) in cw.iter_mut().zip(self.generator.row_words(row)) {
                *w ^= s;
            }
            result.record(&cw);
        }
        result
    }

    /// Full weight distribution (refuses k over the limit).
    pub fn weight_distribution(&self, opts: &EnumOptions) -> Result<WeightDistribution, CodeError> {
        Ok(self.enumerate(opts)?.distribution)
    }

    /// Minimum distance; None for the zero code.
    pub fn min_distance(&self, opts: &EnumOptions) -> Result<Option<usize>, CodeError> {
        Ok(self.enumerate(opts)?.min_weight)
    }
}

/// Result of one enumeration pass.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub distribution: WeightDistribution,
    /// Smallest positive codeword weight, tracked by an accumulator
    /// independent of the counts array; None for the zero code.
    pub min_weight: Option<usize>,
    /// OR of the supports of all minimum-weight codewords (zero vector when
    /// min_weight is None).
    pub min_weight_support: BitVec,
}

struct LaneResult {
    counts: Vec<u64>,
    min_weight: usize,
    min_support: Vec<u64>,
}

impl LaneResult {
    fn empty(n: usize, wpr: usize) -> LaneResult {
        LaneResult {
            counts: vec![0; n + 1],
            min_weight: usize::MAX,
            min_support: vec![0; wpr.max(1)],
        }
    }

    #[inline]
    fn record(&mut self, cw: &[u64]) {
        let w = cw.iter().map(|x| x.count_ones() as usize).sum::<usize>();
        self.counts[w] += 1;
        if w > 0 {
            if w < self.min_weight {
                self.min_weight = w;
                self.min_support.copy_from_slice(cw);
            } else if w == self.min_weight {
                for (s, c) in self.min_support.iter_mut().zip(cw) {
                    *s |= c;
                }
            }
        }
    }

    /// Commutative, associative merge, so the reduction order (and hence
    /// the lane split) never changes the result.
    fn merge(mut self, other: LaneResult) -> LaneResult {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        match self.min_weight.cmp(&other.min_weight) {
            std::cmp::Ordering::Greater => {
                self.min_weight = other.min_weight;
                self.min_support = other.min_support;
            }
            std::cmp::Ordering::Equal => {
                for (s, o) in self.min_support.iter_mut().zip(&other.min_support) {
                    *s |= o;
                }
            }
            std::cmp::Ordering::Less => {}
        }
        self
    }
}

/// Exact codeword counts by weight, A_0..A_n.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> WeightDistribution {
        assert!(!counts.is_empty(), "distribution needs at least A_0");
        WeightDistribution { counts }
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// A_w (zero beyond n).
    pub fn a(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    /// Total number of codewords, Σ A_w.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Smallest positive weight with A_w > 0.
    pub fn min_positive_weight(&self) -> Option<usize> {
        (1..=self.n()).find(|&w| self.counts[w] > 0)
    }

    /// A_w = A_{n-w} for all w.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..=n).all(|w| self.counts[w] == self.counts[n - w])
    }

    /// Nonzero (w, A_w) pairs, ascending w.
    pub fn nonzero_terms(&self) -> Vec<(usize, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &a)| a > 0)
            .map(|(w, &a)| (w, a))
            .collect()
    }

    /// Render Σ A_w x^w y^{n-w}, descending w, zero terms and unit
    /// coefficients omitted.
    pub fn render_enumerator(&self) -> String {
        let n = self.n();
        let mut terms = Vec::new();
        for w in (0..=n).rev() {
            let a = self.counts[w];
            if a == 0 {
                continue;
            }
            let mut parts = Vec::new();
            if a != 1 {
                parts.push(a.to_string());
            }
            if w > 0 {
                parts.push(var_pow("x", w));
            }
            if w < n {
                parts.push(var_pow("y", n - w));
            }
            if parts.is_empty() {
                parts.push("1".to_string());
            }
            terms.push(parts.join(" "));
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

fn var_pow(var: &str, e: usize) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

/// MacWilliams transform: dual counts A'_j = 2^{-k} Σ_w A_w K_j(w; n).
///
/// The Krawtchouk values K_j(w; n) for fixed w are the coefficients of
/// (1-z)^w (1+z)^{n-w}; the table is walked incrementally in w (multiply by
/// (1-z), exact synthetic division by (1+z)), keeping everything integer.
/// Dual coefficients can reach ~2^{n-k}, hence arbitrary precision.
pub fn macwilliams_dual(counts: &[BigUint], k: usize) -> Result<Vec<BigUint>, CodeError> {
    let n = counts
        .len()
        .checked_sub(1)
        .ok_or_else(|| CodeError::InvalidDistribution("empty distribution".to_string()))?;
    let total: BigUint = counts.iter().sum();
    if total != BigUint::one() << k {
        return Err(CodeError::InvalidDistribution(format!(
            "counts sum to {total}, expected 2^{k}"
        )));
    }

    // p = coefficients of (1+z)^{n}, the w = 0 row.
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::one());
    for j in 1..=n {
        let next = &p[j - 1] * BigInt::from(n - j + 1) / BigInt::from(j);
        p.push(next);
    }

    let mut acc = vec![BigInt::zero(); n + 1];
    for w in 0..=n {
        if !counts[w].is_zero() {
            let a = BigInt::from(counts[w].clone());
            for j in 0..=n {
                acc[j] += &a * &p[j];
            }
        }
        if w == n {
            break;
        }
        // p <- p * (1-z) / (1+z), exactly.
        let mut q = vec![BigInt::zero(); n + 2];
        for (j, item) in q.iter_mut().enumerate() {
            if j <= n {
                *item += &p[j];
            }
            if j >= 1 {
                *item -= &p[j - 1];
            }
        }
        let mut prev = BigInt::zero();
        for j in 0..=n {
            let r = &q[j] - &prev;
            p[j] = r.clone();
            prev = r;
        }
        debug_assert_eq!(q[n + 1], prev, "inexact division by (1+z)");
    }

    let modulus = BigInt::one() << k;
    let mut dual = Vec::with_capacity(n + 1);
    for (j, v) in acc.into_iter().enumerate() {
        if v.is_negative() {
            return Err(CodeError::InvalidDistribution(format!(
                "dual coefficient A'_{j} is negative"
            )));
        }
        let (q, r) = (&v / &modulus, &v % &modulus);
        if !r.is_zero() {
            return Err(CodeError::InvalidDistribution(format!(
                "dual coefficient A'_{j} is not integral"
            )));
        }
        dual.push(q.to_biguint().expect("nonnegative"));
    }
    Ok(dual)
}

/// JSON-facing snapshot of a code: parameters, certified distribution (when
/// enumeration ran), and a human-readable construction trail. Counts are
/// decimal strings so the schema never depends on integer width.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CodeRecord {
    pub n: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    pub a: Option<Vec<(usize, String)>>,
    pub provenance: String,
}

impl CodeRecord {
    /// Record with a certified distribution; d is its least positive weight.
    pub fn certified(
        code: &LinearCode,
        distribution: &WeightDistribution,
        provenance: impl Into<String>,
    ) -> CodeRecord {
        CodeRecord {
            n: code.n(),
            k: code.k(),
            d: distribution.min_positive_weight(),
            a: Some(
                distribution
                    .nonzero_terms()
                    .into_iter()
                    .map(|(w, a)| (w, a.to_string()))
                    .collect(),
            ),
            provenance: provenance.into(),
        }
    }

    /// Record for a code whose distribution was not enumerated: n and k
    /// only, no claimed d.
    pub fn uncertified(code: &LinearCode, provenance: impl Into<String>) -> CodeRecord {
        CodeRecord {
            n: code.n(),
            k: code.k(),
            d: None,
            a: None,
            provenance: provenance.into(),
        }
    }
}
