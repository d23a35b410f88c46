//! Exact arithmetic for tropical Hurwitz numbers.
//!
//! The library builds the tropical Hurwitz complex attached to a ramification
//! profile over the Riemann sphere, computes the degree of its forgetful map
//! to the moduli space of marked tropical curves, and cross-checks that
//! degree against the classical Hurwitz number via two independent routes:
//! the class algebra of the symmetric group and brute-force monodromy
//! counting. All arithmetic is exact (arbitrary-precision rationals).
//!
//! Module map:
//! - [`partition`]: integer partitions, conjugacy-class sizes, profiles;
//! - [`monodromy`]: the permutation-tuple counting oracle;
//! - [`class_algebra`]: the center of the rational group algebra of `S_d`;
//! - [`tree`]: leaf-labeled trees, topological types, degenerations;
//! - [`complex`]: cells, weights, degrees, faces, and gluing;
//! - [`embedding`]: double-ratio coordinates for metric trees;
//! - [`selfcheck`]: a seeded invariant suite.

pub mod class_algebra;
pub mod complex;
pub mod embedding;
pub mod error;
pub mod monodromy;
pub mod partition;
pub mod selfcheck;
pub mod tree;

pub use class_algebra::{hurwitz_number, trace_product, triple_index, CentralElement};
pub use complex::{
    build_export, degree, degree_recursive, degree_single_chamber, enumerate_cells, glue,
    ComplexExport, HurwitzCell,
};
pub use embedding::{canonical_splits, double_ratio, embed, recover_point, MetricPoint};
pub use error::{Error, Result};
pub use monodromy::{count_monodromy_tuples, oracle_hurwitz, Permutation, DEFAULT_MAX_WORK};
pub use partition::{all_partitions, factorial, Partition, RamificationProfile};
pub use selfcheck::{run_selfcheck, CheckResult};
pub use tree::{enumerate_trivalent_types, LeafBipartition, LeafLabeledTree};
