//! Integer partitions and the multiplicity factor `m_lambda` that appears in
//! every counting formula in this crate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// A partition: weakly decreasing positive parts. The empty partition is a
/// first-class value (it is the type of an all-diagonal path).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Canonicalizes an arbitrary list of positive integers into a partition.
    /// Rejects non-positive parts.
    pub fn new<I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = i64>,
    {
        let mut out: Vec<u32> = Vec::new();
        for p in parts {
            if p <= 0 {
                return Err(Error::NonPositivePart(p));
            }
            out.push(p as u32);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts: out })
    }

    /// Builds from parts already known to be positive (e.g. run lengths).
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// |lambda|, the sum of parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// ell(lambda), the number of parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// m_i(lambda), the number of parts equal to `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// m_lambda = m_1(lambda)! m_2(lambda)! m_3(lambda)! ...
    pub fn multiplicity_factor(&self) -> MultiplicityFactor {
        let mut value = BigUint::one();
        let mut run = 0u64;
        let mut prev = 0u32;
        for &p in &self.parts {
            if p == prev {
                run += 1;
                value *= BigUint::from(run);
            } else {
                prev = p;
                run = 1;
            }
        }
        MultiplicityFactor { value }
    }

    /// Multiset union of parts.
    pub fn merge(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.parts.len() + other.parts.len());
        parts.extend_from_slice(&self.parts);
        parts.extend_from_slice(&other.parts);
        Partition::from_unsorted(parts)
    }

    /// All partitions of weight exactly `w`, in increasing [`Ord`] order.
    pub fn all_of_weight(w: u64) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(remaining: u64, max_part: u64, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition {
                    parts: current.clone(),
                });
                return;
            }
            for p in 1..=remaining.min(max_part) {
                current.push(p as u32);
                rec(remaining - p, p, current, out);
                current.pop();
            }
        }
        rec(w, w.max(1), &mut current, &mut out);
        out.sort();
        out
    }

    /// All partitions of weight at most `w`, in increasing [`Ord`] order.
    pub fn all_up_to_weight(w: u64) -> Vec<Partition> {
        (0..=w).flat_map(Partition::all_of_weight).collect()
    }
}

/// Partitions order by weight, then lexicographically on the part list.
/// This is the canonical key order for censuses and JSON output.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// The product of factorials of part multiplicities, always at least 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicityFactor {
    value: BigUint,
}

impl MultiplicityFactor {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }
}
