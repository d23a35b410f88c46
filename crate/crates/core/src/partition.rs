//! Integer partitions of `d` and ramification profiles.
//!
//! Partitions name both conjugacy classes of the symmetric group `S_d` and
//! ramification behaviour over a marked point. The canonical order used
//! throughout is reverse-lexicographic on the descending part list, so `(d)`
//! comes first and `(1^d)` last.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, BigUint, One};

use crate::error::{Error, Result};

pub fn factorial(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=n {
        acc *= BigUint::from(k);
    }
    acc
}

/// An integer partition of `d`, stored as parts in descending order.
///
/// Partitions of different `d` never compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("non-positive part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    /// The identity cycle type `(1^d)`.
    pub fn identity(d: usize) -> Self {
        assert!(d >= 1);
        Partition { parts: vec![1; d] }
    }

    /// Parses either comma-separated parts ("2,1") or multiplicity form
    /// ("1^a 2^b"), validating the parts sum to `d`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::InvalidPartition("empty text".into()));
        }
        let parts: Vec<usize> = if text.contains('^') || text.split_whitespace().count() > 1 {
            let mut parts = Vec::new();
            for token in text.split_whitespace() {
                let (size, count) = match token.split_once('^') {
                    Some((s, c)) => {
                        let size: usize = s
                            .parse()
                            .map_err(|_| Error::InvalidPartition(format!("bad token '{token}'")))?;
                        let count: usize = c
                            .parse()
                            .map_err(|_| Error::InvalidPartition(format!("bad token '{token}'")))?;
                        (size, count)
                    }
                    None => {
                        let size: usize = token
                            .parse()
                            .map_err(|_| Error::InvalidPartition(format!("bad token '{token}'")))?;
                        (size, 1)
                    }
                };
                parts.extend(std::iter::repeat_n(size, count));
            }
            parts
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPartition(format!("bad part '{}'", t.trim())))
                })
                .collect::<Result<Vec<usize>>>()?
        };
        let p = Partition::new(parts)?;
        if p.d() != d {
            return Err(Error::PartitionSum {
                expected: d,
                actual: p.d(),
            });
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Multiplicity form: part size -> count, zero counts absent.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// Number of parts, `ell = sum of multiplicities`.
    pub fn ell(&self) -> usize {
        self.parts.len()
    }

    /// Ramification contribution `r = d - ell`.
    pub fn ramification(&self) -> usize {
        self.d() - self.ell()
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// Size of the conjugacy class with this cycle type:
    /// `d! / (1^{n_1} n_1! 2^{n_2} n_2! ... d^{n_d} n_d!)`.
    pub fn class_size(&self) -> BigUint {
        let mut denom = BigUint::one();
        for (size, count) in self.multiplicities() {
            denom *= BigUint::from(size).pow(count as u32);
            denom *= factorial(count);
        }
        factorial(self.d()) / denom
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d()
            .cmp(&other.d())
            // reverse-lexicographic: (d) first, (1^d) last
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// All partitions of `d` in canonical order: `(d)` first, `(1^d)` last.
pub fn all_partitions(d: usize) -> Vec<Partition> {
    assert!(d >= 1);
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    rec(d, d, &mut prefix, &mut out);
    return out;

    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        let hi = max_part.min(remaining);
        for p in (1..=hi).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
}

/// An ordered list of `n >= 3` partitions of the same `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RamificationProfile {
    d: usize,
    parts: Vec<Partition>,
}

impl RamificationProfile {
    pub fn new(d: usize, parts: Vec<Partition>) -> Result<Self> {
        if parts.len() < 3 {
            return Err(Error::InvalidProfile(format!(
                "need at least 3 partitions, got {}",
                parts.len()
            )));
        }
        for p in &parts {
            if p.d() != d {
                return Err(Error::MixedDegrees {
                    left: d,
                    right: p.d(),
                });
            }
        }
        Ok(RamificationProfile { d, parts })
    }

    /// Parses "2,1;2,1;3" against `d`.
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        let parts = text
            .split(';')
            .map(|t| Partition::parse(t, d))
            .collect::<Result<Vec<_>>>()?;
        RamificationProfile::new(d, parts)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    /// Riemann-Hurwitz genus of the covering curve over a genus-0 base:
    /// `g = 1 - d + (sum of r(sigma_i)) / 2`.
    ///
    /// The value may be non-integral or negative for profiles that no
    /// connected smooth cover realizes; interpretation is the caller's.
    pub fn genus(&self) -> BigRational {
        let sum_r: usize = self.parts.iter().map(|p| p.ramification()).sum();
        let numer = BigInt::from(2) - BigInt::from(2 * self.d) + BigInt::from(sum_r);
        BigRational::new(numer, BigInt::from(2))
    }
}

impl fmt::Display for RamificationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(";"))
    }
}
