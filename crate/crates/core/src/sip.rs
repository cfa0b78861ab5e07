//! Watermark ⇄ self-inverting permutation codec.
//!
//! A watermark `w` with binary representation `B = b1…bn` is expanded to the
//! `2n+1` bit string `B' = 0ⁿ ‖ B ‖ 1` and complemented to `B*`. The zero
//! positions `X` and one positions `Y` of `B*` give the bitonic permutation
//! `X ‖ reverse(Y)`, whose outermost elements are paired off into 2-cycles
//! (the middle element becomes the single fixed point). Materialising those
//! cycles yields the self-inverting permutation.
//!
//! Decoding walks the increasing cycle representation with a front and a
//! back cursor to rebuild the bitonic permutation, then reads the bits back.
//! The three structural properties of codec output (odd length, bitonic
//! rebuild, `0ⁿ ‖ B ‖ 1` block layout) double as tamper checks; see
//! [`validate_sip`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::perm::{PermutationError, SelfInvertingPermutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SipError {
    #[error("watermark must be a positive integer")]
    InvalidWatermark,
    #[error("not a valid watermark integer: {0:?}")]
    ParseWatermark(String),
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error("permutation has even length {0}; codec permutations have odd length")]
    EvenLength(usize),
    #[error("cycle list does not cover 1..={len} exactly once in increasing order: {reason}")]
    CycleCoverage { len: usize, reason: String },
    #[error("decoded middle block is all zeros")]
    ZeroWatermark,
    #[error("tampered permutation: {0}")]
    Tampered(SipTamperReport),
}

/// A positive integer of arbitrary magnitude.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Watermark(BigUint);

impl Watermark {
    pub fn new(value: BigUint) -> Result<Self, SipError> {
        if value.is_zero() {
            return Err(SipError::InvalidWatermark);
        }
        Ok(Watermark(value))
    }

    /// Builds a watermark from its most-significant-first bits. The first bit
    /// must be 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self, SipError> {
        if bits.first() != Some(&1) || bits.iter().any(|&b| b > 1) {
            return Err(SipError::InvalidWatermark);
        }
        let value = BigUint::from_radix_be(bits, 2).ok_or(SipError::InvalidWatermark)?;
        Ok(Watermark(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn into_value(self) -> BigUint {
        self.0
    }

    pub fn bit_length(&self) -> usize {
        self.0.bits() as usize
    }

    /// `b1…bn`, most significant first, `b1 = 1`.
    pub fn bits(&self) -> Vec<u8> {
        self.0.to_radix_be(2)
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u32> for Watermark {
    /// Panics on zero.
    fn from(value: u32) -> Self {
        Watermark::new(BigUint::from(value)).expect("watermark must be positive")
    }
}

impl TryFrom<u64> for Watermark {
    type Error = SipError;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Watermark::new(BigUint::from(value))
    }
}

impl FromStr for Watermark {
    type Err = SipError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        if trimmed.is_empty() || !trimmed.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SipError::ParseWatermark(s.to_owned()));
        }
        let value = BigUint::parse_bytes(trimmed.as_bytes(), 10)
            .ok_or_else(|| SipError::ParseWatermark(s.to_owned()))?;
        Watermark::new(value)
    }
}

impl fmt::Display for Watermark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// `B' = 0ⁿ ‖ B ‖ 1` and its complement `B*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitBlocks {
    pub b_prime: Vec<u8>,
    pub b_star: Vec<u8>,
}

impl BitBlocks {
    pub fn from_watermark(w: &Watermark) -> Self {
        let bits = w.bits();
        let n = bits.len();
        let mut b_prime = Vec::with_capacity(2 * n + 1);
        b_prime.resize(n, 0);
        b_prime.extend_from_slice(&bits);
        b_prime.push(1);
        let b_star = flip(&b_prime);
        BitBlocks { b_prime, b_star }
    }
}

/// Bitwise complement of a 0/1 sequence.
pub fn flip(bits: &[u8]) -> Vec<u8> {
    bits.iter().map(|&b| 1 - b).collect()
}

/// One-indexed positions of the zeros (`x`) and ones (`y`) of a bit string,
/// each in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionSequences {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

impl PositionSequences {
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (idx, &b) in bits.iter().enumerate() {
            if b == 0 {
                x.push(idx + 1);
            } else {
                y.push(idx + 1);
            }
        }
        PositionSequences { x, y }
    }
}

/// A sequence that is meant to rise and then fall.
///
/// Codec-built instances always are; instances rebuilt from a tampered
/// permutation may not be, which is what [`BitonicPermutation::is_bitonic`]
/// detects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitonicPermutation(Vec<usize>);

impl BitonicPermutation {
    /// `X ‖ reverse(Y)`.
    pub fn from_positions(seq: &PositionSequences) -> Self {
        let mut values = Vec::with_capacity(seq.x.len() + seq.y.len());
        values.extend_from_slice(&seq.x);
        values.extend(seq.y.iter().rev());
        BitonicPermutation(values)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Index just past the first increasing run: `X = π[..k]`, `Y = π[k..]`.
    pub fn split_point(&self) -> usize {
        self.0
            .windows(2)
            .position(|w| w[0] > w[1])
            .map_or(self.0.len(), |i| i + 1)
    }

    /// The first increasing subsequence and the remainder.
    pub fn split(&self) -> (&[usize], &[usize]) {
        self.0.split_at(self.split_point())
    }

    /// One-indexed positions inside the tail where the sequence rises again.
    pub fn ascents_after_peak(&self) -> Vec<usize> {
        let k = self.split_point();
        (k..self.0.len().saturating_sub(1))
            .filter(|&i| self.0[i] < self.0[i + 1])
            .map(|i| i + 2)
            .collect()
    }

    pub fn is_bitonic(&self) -> bool {
        self.ascents_after_peak().is_empty()
    }
}

/// A 1-cycle `(x)` or a 2-cycle `(x, y)` with `x < y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cycle {
    Fixed(usize),
    Pair(usize, usize),
}

impl Cycle {
    pub fn min(&self) -> usize {
        match *self {
            Cycle::Fixed(x) | Cycle::Pair(x, _) => x,
        }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cycle::Fixed(x) => write!(f, "({x})"),
            Cycle::Pair(x, y) => write!(f, "({x},{y})"),
        }
    }
}

/// The cycles of a self-inverting permutation sorted by smallest element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleRepresentation(Vec<Cycle>);

impl CycleRepresentation {
    /// Checks that the cycles are sorted, well formed, and cover `1..=len`
    /// exactly once.
    pub fn new(cycles: Vec<Cycle>) -> Result<Self, SipError> {
        let len: usize = cycles
            .iter()
            .map(|c| match c {
                Cycle::Fixed(_) => 1,
                Cycle::Pair(..) => 2,
            })
            .sum();
        let fail = |reason: String| SipError::CycleCoverage { len, reason };
        let mut seen = vec![false; len];
        let mut mark = |v: usize| -> Result<(), SipError> {
            if v == 0 || v > len {
                return Err(fail(format!("element {v} out of range")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(fail(format!("element {v} repeated")));
            }
            Ok(())
        };
        let mut prev = 0;
        for c in &cycles {
            match *c {
                Cycle::Fixed(x) => mark(x)?,
                Cycle::Pair(x, y) => {
                    if x >= y {
                        return Err(fail(format!("2-cycle ({x},{y}) not ascending")));
                    }
                    mark(x)?;
                    mark(y)?;
                }
            }
            if c.min() <= prev {
                return Err(fail(format!("cycle {c} out of order")));
            }
            prev = c.min();
        }
        Ok(CycleRepresentation(cycles))
    }

    /// Cycle decomposition of an arbitrary sequence; fails unless it is a
    /// self-inverting permutation.
    pub fn from_sequence(values: &[usize]) -> Result<Self, SipError> {
        let sip = SelfInvertingPermutation::new(values.to_vec())?;
        Ok(to_cycle_representation(&sip))
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.0
    }

    /// Total number of elements covered.
    pub fn len(&self) -> usize {
        self.0
            .iter()
            .map(|c| if matches!(c, Cycle::Fixed(_)) { 1 } else { 2 })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Outcome of one structural check in a [`SipTamperReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    Pass,
    Fail,
    /// Could not be evaluated because an earlier check failed.
    Skipped,
}

impl Check {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }
}

/// Result of [`validate_sip`]. Valid iff every check passes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SipTamperReport {
    /// Odd, non-zero length.
    pub length: Check,
    /// A permutation of `1..=n'` that is its own inverse.
    pub sip: Check,
    /// The permutation rebuilt from the cycles rises and then falls.
    pub bitonic: Check,
    /// The recovered bit string has the `0ⁿ ‖ B ‖ 1` layout.
    pub block: Check,
    pub details: Vec<String>,
}

impl SipTamperReport {
    pub fn length_ok(&self) -> bool {
        self.length == Check::Pass
    }

    pub fn sip_ok(&self) -> bool {
        self.sip == Check::Pass
    }

    pub fn bitonic_ok(&self) -> bool {
        self.bitonic == Check::Pass
    }

    pub fn block_ok(&self) -> bool {
        self.block == Check::Pass
    }

    pub fn is_valid(&self) -> bool {
        self.length_ok() && self.sip_ok() && self.bitonic_ok() && self.block_ok()
    }

    /// Names of the failed checks, in check order.
    pub fn failed(&self) -> Vec<&'static str> {
        [
            ("length", self.length),
            ("sip", self.sip),
            ("bitonic", self.bitonic),
            ("block", self.block),
        ]
        .into_iter()
        .filter(|(_, c)| *c == Check::Fail)
        .map(|(name, _)| name)
        .collect()
    }
}

impl fmt::Display for SipTamperReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("all checks pass");
        }
        write!(f, "failed [{}]", self.failed().join(", "))?;
        if !self.details.is_empty() {
            write!(f, ": {}", self.details.join("; "))?;
        }
        Ok(())
    }
}

/// Whether [`decode_sip_to_w`] runs the tamper checks first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodeMode {
    #[default]
    Strict,
    Lenient,
}

pub fn encode_w_to_sip(w: &Watermark) -> SelfInvertingPermutation {
    let blocks = BitBlocks::from_watermark(w);
    let positions = PositionSequences::from_bits(&blocks.b_star);
    let bitonic = BitonicPermutation::from_positions(&positions);
    sip_from_bitonic(&bitonic)
}

/// Pairs the bitonic sequence from both ends into cycles and applies them to
/// the identity.
pub fn sip_from_bitonic(bitonic: &BitonicPermutation) -> SelfInvertingPermutation {
    let b = bitonic.as_slice();
    let mut out: Vec<usize> = (1..=b.len()).collect();
    let (mut i, mut j) = (0, b.len().saturating_sub(1));
    while i < j {
        let (x, y) = (b[i], b[j]);
        out[x - 1] = y;
        out[y - 1] = x;
        i += 1;
        j -= 1;
    }
    SelfInvertingPermutation::from_vec_unchecked(out)
}

pub fn to_cycle_representation(p: &SelfInvertingPermutation) -> CycleRepresentation {
    let mut cycles = Vec::new();
    for (idx, &v) in p.iter().enumerate() {
        let i = idx + 1;
        if v == i {
            cycles.push(Cycle::Fixed(i));
        } else if v > i {
            cycles.push(Cycle::Pair(i, v));
        }
    }
    CycleRepresentation(cycles)
}

/// Two-cursor reconstruction: a 2-cycle `(a, b)` puts `b` at the front
/// cursor and `a` at the back cursor; a 1-cycle `(a)` puts `a` at the front.
pub fn rebuild_bitonic(c: &CycleRepresentation) -> BitonicPermutation {
    let len = c.len();
    let mut out = vec![0; len];
    let (mut i, mut j) = (0, len);
    for cycle in c.cycles() {
        match *cycle {
            Cycle::Pair(a, b) => {
                out[i] = b;
                j -= 1;
                out[j] = a;
                i += 1;
            }
            Cycle::Fixed(a) => {
                out[i] = a;
                i += 1;
            }
        }
    }
    BitonicPermutation(out)
}

/// `B'` as recovered by the decoder: zeros at the `X` positions, ones at the
/// `Y` positions, then complemented.
pub fn recovered_b_prime(bitonic: &BitonicPermutation) -> Vec<u8> {
    let (x, y) = bitonic.split();
    let mut b_star = vec![0u8; x.len() + y.len()];
    for &pos in y {
        b_star[pos - 1] = 1;
    }
    flip(&b_star)
}

pub fn decode_sip_to_w(p: &[usize], mode: DecodeMode) -> Result<Watermark, SipError> {
    if mode == DecodeMode::Strict {
        let report = validate_sip(p);
        if !report.is_valid() {
            return Err(SipError::Tampered(report));
        }
    }
    let sip = SelfInvertingPermutation::new(p.to_vec())?;
    if sip.len() % 2 == 0 {
        return Err(SipError::EvenLength(sip.len()));
    }
    let n = (sip.len() - 1) / 2;
    let bitonic = rebuild_bitonic(&to_cycle_representation(&sip));
    let b_prime = recovered_b_prime(&bitonic);
    let value = BigUint::from_radix_be(&b_prime[n..2 * n], 2).unwrap_or_default();
    if value.is_zero() {
        return Err(SipError::ZeroWatermark);
    }
    Ok(Watermark(value))
}

/// Runs the length, self-inversion, bitonic and block checks on an arbitrary
/// sequence and reports every failure.
pub fn validate_sip(p: &[usize]) -> SipTamperReport {
    let mut details = Vec::new();
    let length_ok = p.len() % 2 == 1;
    if !length_ok {
        details.push(format!("length {} is even", p.len()));
    }

    let sip = match SelfInvertingPermutation::new(p.to_vec()) {
        Ok(sip) => Some(sip),
        Err(e) => {
            details.push(e.to_string());
            None
        }
    };

    let Some(sip) = sip else {
        return SipTamperReport {
            length: Check::from_ok(length_ok),
            sip: Check::Fail,
            bitonic: Check::Skipped,
            block: Check::Skipped,
            details,
        };
    };

    let bitonic = rebuild_bitonic(&to_cycle_representation(&sip));
    let ascents = bitonic.ascents_after_peak();
    if !ascents.is_empty() {
        details.push(format!(
            "decreasing part rises again at positions {ascents:?}"
        ));
    }

    let block = if length_ok {
        let n = (p.len() - 1) / 2;
        let b_prime = recovered_b_prime(&bitonic);
        let stray: Vec<usize> = (0..n).filter(|&i| b_prime[i] == 1).map(|i| i + 1).collect();
        let last_ok = b_prime[2 * n] == 1;
        if !stray.is_empty() {
            details.push(format!("leading block has 1s at bits {stray:?}"));
        }
        if !last_ok {
            details.push(format!("final bit {} is 0", 2 * n + 1));
        }
        Check::from_ok(stray.is_empty() && last_ok)
    } else {
        Check::Skipped
    };

    SipTamperReport {
        length: Check::from_ok(length_ok),
        sip: Check::Pass,
        bitonic: Check::from_ok(ascents.is_empty()),
        block,
        details,
    }
}
