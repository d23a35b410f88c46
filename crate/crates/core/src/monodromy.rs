//! Brute-force Hurwitz numbers by counting permutation tuples.
//!
//! This is the ground-truth oracle: enumerate ordered tuples of permutations
//! with prescribed cycle types whose product is the identity, divide by `d!`.
//! Everything here works with explicit elements of `S_d`, so it shares no
//! algebraic shortcuts with the class-algebra route it cross-checks.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::sync::Mutex;

use itertools::Itertools;
use num::{BigRational, BigUint};
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::{factorial, Partition, RamificationProfile};

pub const DEFAULT_MAX_WORK: u64 = 100_000_000;

/// A permutation of `{0..d-1}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(Error::Invalid("not a bijection".into()));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Left-to-right composition: `(a.then(b))(i) = b(a(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.d(), other.d());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.d()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Cycle type as an integer partition of `d`.
    pub fn cycle_type(&self) -> Partition {
        let d = self.d();
        let mut seen = vec![false; d];
        let mut lengths = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur];
                len += 1;
            }
            lengths.push(len);
        }
        Partition::new(lengths).expect("cycle lengths form a partition")
    }
}

/// Permutations of `S_d` bucketed by cycle type.
pub type ClassBuckets = BTreeMap<Partition, Vec<Permutation>>;

/// All of `S_d`, bucketed by cycle type. Cached per `d`.
pub fn conjugacy_classes(d: usize) -> Arc<ClassBuckets> {
    static CACHE: Lazy<Mutex<HashMap<usize, Arc<ClassBuckets>>>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    let mut cache = CACHE.lock().unwrap();
    cache
        .entry(d)
        .or_insert_with(|| {
            let mut buckets: BTreeMap<Partition, Vec<Permutation>> = BTreeMap::new();
            for images in (0..d).permutations(d) {
                let g = Permutation { images };
                buckets.entry(g.cycle_type()).or_default().push(g);
            }
            Arc::new(buckets)
        })
        .clone()
}

/// Counts ordered tuples `(g_1, ..., g_n)` with `cycle_type(g_i) = sigma_i`
/// and `g_1 g_2 ... g_n = e`. The last entry is forced as the inverse of the
/// prefix product and only checked for cycle type, so the enumerated work is
/// the product of the first `n-1` class sizes; `max_work` bounds it.
pub fn count_monodromy_tuples(profile: &RamificationProfile, max_work: u64) -> Result<u64> {
    let d = profile.d();
    let classes = conjugacy_classes(d);
    let sigmas = profile.partitions();
    let n = sigmas.len();

    let mut work: u128 = 1;
    for sigma in &sigmas[..n - 1] {
        work = work.saturating_mul(classes[sigma].len() as u128);
    }
    if work > max_work as u128 {
        return Err(Error::ResourceGuard {
            work,
            limit: max_work,
        });
    }

    let last = &sigmas[n - 1];
    let first_class = &classes[&sigmas[0]];
    let count = first_class
        .par_iter()
        .map(|g1| {
            let mut local = 0u64;
            rec(g1.clone(), &sigmas[1..n - 1], &classes, last, &mut local);
            local
        })
        .sum();
    return Ok(count);

    fn rec(
        prefix: Permutation,
        remaining: &[Partition],
        classes: &BTreeMap<Partition, Vec<Permutation>>,
        last: &Partition,
        count: &mut u64,
    ) {
        match remaining.split_first() {
            None => {
                if prefix.inverse().cycle_type() == *last {
                    *count += 1;
                }
            }
            Some((sigma, rest)) => {
                for g in &classes[sigma] {
                    rec(prefix.then(g), rest, classes, last, count);
                }
            }
        }
    }
}

/// `h(sigma-bar)` as counted tuples over `d!`, exact.
pub fn oracle_hurwitz(profile: &RamificationProfile, max_work: u64) -> Result<BigRational> {
    let count = count_monodromy_tuples(profile, max_work)?;
    Ok(BigRational::new(
        BigUint::from(count).into(),
        factorial(profile.d()).into(),
    ))
}
