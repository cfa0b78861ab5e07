//! One-indexed permutations and the self-inverting subset.

use std::fmt;
use std::ops::Deref;

use thiserror::Error;

/// Why a sequence is not a (self-inverting) permutation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("empty sequence")]
    Empty,
    #[error("value {value} at position {position} is outside 1..={len}")]
    OutOfRange {
        position: usize,
        value: usize,
        len: usize,
    },
    #[error("value {value} appears more than once (again at position {position})")]
    Repeated { position: usize, value: usize },
    #[error("not self-inverting: position {position} maps to {value}, which maps to {back}")]
    NotSelfInverting {
        position: usize,
        value: usize,
        back: usize,
    },
}

/// A permutation of `1..=n` stored as the sequence `(π_1, …, π_n)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermutationError> {
        check_permutation(&values)?;
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// Wraps a sequence the caller has already proven to be a permutation.
    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(check_permutation(&values).is_ok());
        Permutation(values)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// `π(i)` for a one-indexed position `i`.
    pub fn at(&self, position: usize) -> usize {
        self.0[position - 1]
    }

    /// Position of each value: `inverse()[v - 1]` is where `v` sits (one-indexed).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (idx, &v) in self.0.iter().enumerate() {
            pos[v - 1] = idx + 1;
        }
        pos
    }

    pub fn is_self_inverting(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(idx, &v)| self.0[v - 1] == idx + 1)
    }
}

impl Deref for Permutation {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spaced(f, &self.0)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermutationError;

    fn try_from(values: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::new(values)
    }
}

/// A permutation equal to its own inverse: `π(π(i)) = i`.
///
/// All cycles of such a permutation have length one or two. Codec-produced
/// instances additionally have odd length, but that is checked at decode
/// time rather than here so damaged inputs can still be represented.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SelfInvertingPermutation(Permutation);

impl SelfInvertingPermutation {
    pub fn new(values: Vec<usize>) -> Result<Self, PermutationError> {
        check_permutation(&values)?;
        check_self_inverting(&values)?;
        Ok(SelfInvertingPermutation(Permutation(values)))
    }

    pub(crate) fn from_vec_unchecked(values: Vec<usize>) -> Self {
        debug_assert!(SelfInvertingPermutation::new(values.clone()).is_ok());
        SelfInvertingPermutation(Permutation(values))
    }

    pub fn as_permutation(&self) -> &Permutation {
        &self.0
    }

    pub fn into_permutation(self) -> Permutation {
        self.0
    }
}

impl TryFrom<Permutation> for SelfInvertingPermutation {
    type Error = PermutationError;

    fn try_from(p: Permutation) -> Result<Self, Self::Error> {
        check_self_inverting(&p.0)?;
        Ok(SelfInvertingPermutation(p))
    }
}

impl Deref for SelfInvertingPermutation {
    type Target = Permutation;

    fn deref(&self) -> &Permutation {
        &self.0
    }
}

impl AsRef<Permutation> for SelfInvertingPermutation {
    fn as_ref(&self) -> &Permutation {
        &self.0
    }
}

impl AsRef<Permutation> for Permutation {
    fn as_ref(&self) -> &Permutation {
        self
    }
}

impl fmt::Debug for SelfInvertingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelfInvertingPermutation{:?}", (self.0).0)
    }
}

impl fmt::Display for SelfInvertingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_spaced(f, &(self.0).0)
    }
}

pub(crate) fn check_permutation(values: &[usize]) -> Result<(), PermutationError> {
    if values.is_empty() {
        return Err(PermutationError::Empty);
    }
    let len = values.len();
    let mut seen = vec![false; len];
    for (idx, &value) in values.iter().enumerate() {
        if value == 0 || value > len {
            return Err(PermutationError::OutOfRange {
                position: idx + 1,
                value,
                len,
            });
        }
        if std::mem::replace(&mut seen[value - 1], true) {
            return Err(PermutationError::Repeated {
                position: idx + 1,
                value,
            });
        }
    }
    Ok(())
}

// Assumes `values` is already a permutation.
fn check_self_inverting(values: &[usize]) -> Result<(), PermutationError> {
    for (idx, &value) in values.iter().enumerate() {
        let back = values[value - 1];
        if back != idx + 1 {
            return Err(PermutationError::NotSelfInverting {
                position: idx + 1,
                value,
                back,
            });
        }
    }
    Ok(())
}

fn write_spaced(f: &mut fmt::Formatter<'_>, values: &[usize]) -> fmt::Result {
    for (idx, v) in values.iter().enumerate() {
        if idx > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}
