//! A bounded, seeded invariant suite for quick end-to-end verification.
//!
//! Each check exercises one mathematical invariant across randomly sampled
//! inputs and reports a pass/fail with a short summary. Sizes are capped so a
//! full run stays fast regardless of the requested bounds.

use num::{BigInt, BigRational, BigUint, One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::class_algebra::{frobenius_pairing, hurwitz_number, triple_index, CentralElement};
use crate::complex::{degree, degree_recursive, enumerate_cells};
use crate::embedding::{embed, recover_point, MetricPoint};
use crate::monodromy::{oracle_hurwitz, DEFAULT_MAX_WORK};
use crate::partition::{all_partitions, factorial, Partition, RamificationProfile};
use crate::tree::{double_factorial_types, enumerate_trivalent_types};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        CheckResult {
            name: name.to_string(),
            pass,
            detail,
        }
    }
}

/// Runs every check with sizes capped at `max_d` / `max_n` (further clamped
/// per check to keep the suite fast). The same seed reproduces the same run.
pub fn run_selfcheck(max_d: usize, max_n: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        check_class_sizes(max_d.min(7)),
        check_orthogonality(max_d.min(6), &mut rng),
        check_symmetry_of_triple_index(max_d.min(5), &mut rng),
        check_tree_counts(max_n.min(8)),
        check_four_way_agreement(max_d.min(4), max_n.min(5), &mut rng),
        check_trivial_degree(max_n.min(6)),
        check_embedding_roundtrip(max_n.min(6), &mut rng),
    ]
}

fn check_class_sizes(max_d: usize) -> CheckResult {
    let mut tested = 0;
    for d in 1..=max_d {
        let total: BigUint = all_partitions(d).iter().map(Partition::class_size).sum();
        if total != factorial(d) {
            return CheckResult::new(
                "class-sizes",
                false,
                format!(
                    "class sizes of S_{d} sum to {total}, expected {}",
                    factorial(d)
                ),
            );
        }
        tested += 1;
    }
    CheckResult::new(
        "class-sizes",
        true,
        format!("class sizes sum to d! for d <= {tested}"),
    )
}

fn check_orthogonality(max_d: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut pairs = 0;
    for d in 2..=max_d {
        let parts = all_partitions(d);
        for _ in 0..50 {
            let a = parts.choose(rng).unwrap();
            let b = parts.choose(rng).unwrap();
            let tr = frobenius_pairing(
                &CentralElement::basis(a.clone()),
                &CentralElement::basis(b.clone()),
            )
            .unwrap();
            let expected = if a == b {
                BigRational::from(BigInt::from(a.class_size()))
            } else {
                BigRational::zero()
            };
            if tr != expected {
                return CheckResult::new(
                    "orthogonality",
                    false,
                    format!("tr(K_{a} K_{b}) = {tr} in S_{d}, expected {expected}"),
                );
            }
            pairs += 1;
        }
    }
    CheckResult::new(
        "orthogonality",
        true,
        format!("tr(K_a K_b) = [a = b] |K_a| on {pairs} random pairs"),
    )
}

fn check_symmetry_of_triple_index(max_d: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut triples = 0;
    for d in 2..=max_d {
        let parts = all_partitions(d);
        for _ in 0..40 {
            let a = parts.choose(rng).unwrap().clone();
            let b = parts.choose(rng).unwrap().clone();
            let c = parts.choose(rng).unwrap().clone();
            let reference = triple_index(&a, &b, &c).unwrap();
            let mut perm = [a.clone(), b.clone(), c.clone()];
            perm.shuffle(rng);
            let shuffled = triple_index(&perm[0], &perm[1], &perm[2]).unwrap();
            if shuffled != reference {
                return CheckResult::new(
                    "triple-index-symmetry",
                    false,
                    format!("I({a},{b},{c}) changed under reordering in S_{d}"),
                );
            }
            triples += 1;
        }
    }
    CheckResult::new(
        "triple-index-symmetry",
        true,
        format!("vertex index symmetric on {triples} random triples"),
    )
}

fn check_tree_counts(max_n: usize) -> CheckResult {
    for n in 3..=max_n {
        let count = match enumerate_trivalent_types(n) {
            Ok(trees) => trees.len() as u64,
            Err(e) => return CheckResult::new("tree-counts", false, e.to_string()),
        };
        if count != double_factorial_types(n) {
            return CheckResult::new(
                "tree-counts",
                false,
                format!(
                    "{count} trivalent types for n={n}, expected {}",
                    double_factorial_types(n)
                ),
            );
        }
    }
    CheckResult::new(
        "tree-counts",
        true,
        format!("(2n-5)!! trivalent types for n <= {max_n}"),
    )
}

fn check_four_way_agreement(max_d: usize, max_n: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut profiles = 0;
    for d in 1..=max_d {
        let parts = all_partitions(d);
        for n in 3..=max_n {
            for _ in 0..3 {
                let sigmas: Vec<Partition> =
                    (0..n).map(|_| parts.choose(rng).unwrap().clone()).collect();
                let profile = RamificationProfile::new(d, sigmas).unwrap();
                let algebraic = hurwitz_number(&profile);
                let oracle = match oracle_hurwitz(&profile, DEFAULT_MAX_WORK) {
                    Ok(v) => v,
                    Err(_) => continue, // over the work guard; skip
                };
                let direct = degree(&profile).unwrap();
                let recursive = degree_recursive(&profile);
                if !(algebraic == oracle && algebraic == direct && algebraic == recursive) {
                    return CheckResult::new(
                        "four-way-agreement",
                        false,
                        format!(
                            "profile {profile}: algebra {algebraic}, oracle {oracle}, \
                             degree {direct}, recursion {recursive}"
                        ),
                    );
                }
                profiles += 1;
            }
        }
    }
    CheckResult::new(
        "four-way-agreement",
        true,
        format!("algebra = oracle = degree = recursion on {profiles} random profiles"),
    )
}

fn check_trivial_degree(max_n: usize) -> CheckResult {
    for n in 3..=max_n {
        let profile = RamificationProfile::new(1, vec![Partition::identity(1); n]).unwrap();
        let cells = match enumerate_cells(&profile) {
            Ok(cells) => cells,
            Err(e) => return CheckResult::new("trivial-cover", false, e.to_string()),
        };
        let ok = cells.len() as u64 == double_factorial_types(n)
            && cells.iter().all(|c| c.weight().is_one())
            && degree(&profile).map(|d| d.is_one()).unwrap_or(false);
        if !ok {
            return CheckResult::new(
                "trivial-cover",
                false,
                format!("d=1, n={n}: complex is not the weight-1 tree space"),
            );
        }
    }
    CheckResult::new(
        "trivial-cover",
        true,
        format!("d=1 complex has (2n-5)!! weight-1 cells and degree 1 for n <= {max_n}"),
    )
}

fn check_embedding_roundtrip(max_n: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let mut points = 0;
    for n in 4..=max_n {
        let types = enumerate_trivalent_types(n).unwrap();
        for _ in 0..20 {
            let tree = types[rng.gen_range(0..types.len())].clone();
            let lengths = tree
                .bounded_edges_canonical()
                .into_iter()
                .map(|(bip, _)| {
                    let len = num::BigRational::new(
                        rng.gen_range(0..30).into(),
                        rng.gen_range(1..6).into(),
                    );
                    (bip, len)
                })
                .collect();
            let point = MetricPoint::new(tree, lengths).unwrap();
            let coords = embed(&point).unwrap();
            let back = recover_point(point.tree(), &coords).unwrap();
            if back != point {
                return CheckResult::new(
                    "embedding-roundtrip",
                    false,
                    format!("round-trip failed for a random point with n={n}"),
                );
            }
            points += 1;
        }
    }
    CheckResult::new(
        "embedding-roundtrip",
        true,
        format!("embed/recover round-trips on {points} random points"),
    )
}
