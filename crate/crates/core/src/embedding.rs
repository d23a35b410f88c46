//! Embedding metric trees by double ratios.
//!
//! A metric tree (a stable leaf-labeled tree with nonnegative bounded-edge
//! lengths) maps to a vector of double ratios `d_{(w,x),(y,z)}`: the signed
//! length of the common part of the leaf paths `w -> x` and `y -> z`. One
//! coordinate per canonical quadruple split gives an injective linear-on-cells
//! embedding, and every edge length can be read back off the image.

use std::collections::BTreeMap;

use num::{BigRational, Signed, Zero};

use crate::error::{Error, Result};
use crate::tree::{LeafBipartition, LeafLabeledTree};

/// A point of a cell: a stable tree with a length for each bounded edge,
/// keyed by the edge's leaf bipartition. Omitted edges have length zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricPoint {
    tree: LeafLabeledTree,
    lengths: BTreeMap<LeafBipartition, BigRational>,
}

impl MetricPoint {
    pub fn new(
        tree: LeafLabeledTree,
        lengths: BTreeMap<LeafBipartition, BigRational>,
    ) -> Result<Self> {
        let bounded: BTreeMap<LeafBipartition, _> =
            tree.bounded_edges_canonical().into_iter().collect();
        for (bip, len) in &lengths {
            if !bounded.contains_key(bip) {
                return Err(Error::Invalid(format!(
                    "no bounded edge with bipartition {bip}"
                )));
            }
            if len.is_negative() {
                return Err(Error::Invalid(format!("negative length on edge {bip}")));
            }
        }
        let lengths = bounded
            .into_keys()
            .map(|bip| {
                let len = lengths.get(&bip).cloned().unwrap_or_else(BigRational::zero);
                (bip, len)
            })
            .collect();
        Ok(MetricPoint { tree, lengths })
    }

    pub fn tree(&self) -> &LeafLabeledTree {
        &self.tree
    }

    pub fn lengths(&self) -> &BTreeMap<LeafBipartition, BigRational> {
        &self.lengths
    }

    pub fn n(&self) -> usize {
        self.tree.n()
    }
}

/// An ordered pair of disjoint leaf pairs in canonical form: `w < x`,
/// `y < z`, `w < y` (0-based labels).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuadrupleSplit {
    pub first: (usize, usize),
    pub second: (usize, usize),
}

impl QuadrupleSplit {
    pub fn new(first: (usize, usize), second: (usize, usize)) -> Result<Self> {
        let (w, x) = first;
        let (y, z) = second;
        let mut all = [w, x, y, z];
        all.sort_unstable();
        if all.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Invalid("quadruple leaves must be distinct".into()));
        }
        if w >= x || y >= z || w >= y {
            return Err(Error::Invalid(
                "quadruple split not in canonical form".into(),
            ));
        }
        Ok(QuadrupleSplit { first, second })
    }
}

/// The canonical coordinate order: 4-element leaf subsets `{a<b<c<d}` in
/// lexicographic order, each contributing its three splits
/// `(ab|cd), (ac|bd), (ad|bc)`. The total count is `3 * C(n, 4)`.
pub fn canonical_splits(n: usize) -> Vec<QuadrupleSplit> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push(QuadrupleSplit {
                        first: (a, b),
                        second: (c, d),
                    });
                    out.push(QuadrupleSplit {
                        first: (a, c),
                        second: (b, d),
                    });
                    out.push(QuadrupleSplit {
                        first: (a, d),
                        second: (b, c),
                    });
                }
            }
        }
    }
    out
}

/// Signed length of the intersection of the leaf paths `w -> x` and
/// `y -> z`: positive when the paths traverse the common part in the same
/// direction. A bounded edge lies on both paths exactly when its bipartition
/// separates both pairs, and the paths agree in direction exactly when `w`
/// and `y` sit on the same side.
pub fn double_ratio(
    point: &MetricPoint,
    (w, x): (usize, usize),
    (y, z): (usize, usize),
) -> Result<BigRational> {
    let n = point.n();
    for leaf in [w, x, y, z] {
        if leaf >= n {
            return Err(Error::OutOfRange(format!("leaf {leaf} out of range")));
        }
    }
    if w == x || y == z {
        return Err(Error::Invalid("pair endpoints must differ".into()));
    }
    let mut total = BigRational::zero();
    for (bip, len) in point.lengths() {
        if !(bip.separates(w, x) && bip.separates(y, z)) {
            continue;
        }
        if bip.separates(w, y) {
            total -= len;
        } else {
            total += len;
        }
    }
    Ok(total)
}

/// The full coordinate vector of a point, aligned with
/// [`canonical_splits`]`(n)`.
pub fn embed(point: &MetricPoint) -> Result<Vec<BigRational>> {
    canonical_splits(point.n())
        .into_iter()
        .map(|q| double_ratio(point, q.first, q.second))
        .collect()
}

/// True iff both leaf paths of the split cross the edge with this
/// bipartition.
pub fn compatible(bip: &LeafBipartition, q: &QuadrupleSplit) -> bool {
    bip.separates(q.first.0, q.first.1) && bip.separates(q.second.0, q.second.1)
}

/// Reads one edge length off an embedded vector: the minimum of `|d_q|` over
/// the splits compatible with the edge. Any compatible split's paths share a
/// subpath through the edge whose edges all carry the same sign, so each
/// `|d_q|` is at least the edge length, and a split isolating the edge (one
/// always exists) attains it — in particular a degenerate edge reads back as
/// zero.
pub fn recover_edge_length(
    n: usize,
    coords: &[BigRational],
    bip: &LeafBipartition,
) -> Result<BigRational> {
    let splits = canonical_splits(n);
    if coords.len() != splits.len() {
        return Err(Error::Invalid(format!(
            "expected {} coordinates for n={n}, got {}",
            splits.len(),
            coords.len()
        )));
    }
    splits
        .iter()
        .zip(coords)
        .filter(|(q, _)| compatible(bip, q))
        .map(|(_, v)| v.abs())
        .min()
        .ok_or_else(|| Error::Invalid(format!("no split compatible with {bip}")))
}

/// Rebuilds a metric point on a known tree from its embedded coordinates.
pub fn recover_point(tree: &LeafLabeledTree, coords: &[BigRational]) -> Result<MetricPoint> {
    let n = tree.n();
    let lengths = tree
        .bounded_edges_canonical()
        .into_iter()
        .map(|(bip, _)| {
            let len = recover_edge_length(n, coords, &bip)?;
            Ok((bip, len))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    MetricPoint::new(tree.clone(), lengths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_trivalent_types;
    use num::{BigInt, One};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn caterpillar4(len: BigRational) -> MetricPoint {
        let tree = LeafLabeledTree::new(4, vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap();
        let bip = LeafBipartition::parse("12|34", 4).unwrap();
        MetricPoint::new(tree, [(bip, len)].into_iter().collect()).unwrap()
    }

    fn random_point(n: usize, rng: &mut ChaCha8Rng) -> MetricPoint {
        let types = enumerate_trivalent_types(n).unwrap();
        let tree = types[rng.gen_range(0..types.len())].clone();
        let lengths = tree
            .bounded_edges_canonical()
            .into_iter()
            .map(|(bip, _)| (bip, rat(rng.gen_range(0..20), rng.gen_range(1..5))))
            .collect();
        MetricPoint::new(tree, lengths).unwrap()
    }

    #[test]
    fn split_counts() {
        assert_eq!(canonical_splits(4).len(), 3);
        assert_eq!(canonical_splits(5).len(), 15);
        assert_eq!(canonical_splits(6).len(), 45);
        for q in canonical_splits(6) {
            assert!(QuadrupleSplit::new(q.first, q.second).is_ok());
        }
        assert!(QuadrupleSplit::new((1, 0), (2, 3)).is_err());
        assert!(QuadrupleSplit::new((2, 3), (0, 1)).is_err());
        assert!(QuadrupleSplit::new((0, 1), (1, 2)).is_err());
    }

    #[test]
    fn n4_double_ratios() {
        let point = caterpillar4(rat(5, 1));
        // paths within / across the cherry {1,2} | {3,4}
        assert_eq!(double_ratio(&point, (0, 1), (2, 3)).unwrap(), rat(0, 1));
        assert_eq!(double_ratio(&point, (0, 2), (1, 3)).unwrap(), rat(5, 1));
        assert_eq!(double_ratio(&point, (0, 3), (1, 2)).unwrap(), rat(5, 1));
        // flipping one pair flips the sign; swapping the pairs does not
        assert_eq!(double_ratio(&point, (2, 0), (1, 3)).unwrap(), rat(-5, 1));
        assert_eq!(double_ratio(&point, (1, 3), (0, 2)).unwrap(), rat(5, 1));
    }

    #[test]
    fn sign_symmetries_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in 4..=6 {
            for _ in 0..20 {
                let point = random_point(n, &mut rng);
                let w = rng.gen_range(0..n);
                let x = (w + rng.gen_range(1..n)) % n;
                let y = rng.gen_range(0..n);
                let z = (y + rng.gen_range(1..n)) % n;
                let base = double_ratio(&point, (w, x), (y, z)).unwrap();
                assert_eq!(double_ratio(&point, (x, w), (y, z)).unwrap(), -base.clone());
                assert_eq!(double_ratio(&point, (w, x), (z, y)).unwrap(), -base.clone());
                assert_eq!(double_ratio(&point, (y, z), (w, x)).unwrap(), base);
            }
        }
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in 4..=6 {
            for _ in 0..100 {
                let point = random_point(n, &mut rng);
                let coords = embed(&point).unwrap();
                let back = recover_point(point.tree(), &coords).unwrap();
                assert_eq!(back, point);
            }
        }
    }

    #[test]
    fn degenerate_edge_recovers_zero() {
        let point = caterpillar4(rat(0, 1));
        let coords = embed(&point).unwrap();
        let bip = LeafBipartition::parse("12|34", 4).unwrap();
        assert!(recover_edge_length(4, &coords, &bip).unwrap().is_zero());
        // and recovery is unaffected by which trivalent type we assume
        for tree in enumerate_trivalent_types(4).unwrap() {
            let back = recover_point(&tree, &coords).unwrap();
            assert!(back.lengths().values().all(Zero::is_zero));
        }
    }

    #[test]
    fn embedding_is_linear_on_a_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for n in 4..=6 {
            let types = enumerate_trivalent_types(n).unwrap();
            for _ in 0..20 {
                let tree = types[rng.gen_range(0..types.len())].clone();
                let mk = |rng: &mut ChaCha8Rng| {
                    let lengths = tree
                        .bounded_edges_canonical()
                        .into_iter()
                        .map(|(bip, _)| (bip, rat(rng.gen_range(0..10), 1)))
                        .collect();
                    MetricPoint::new(tree.clone(), lengths).unwrap()
                };
                let p1 = mk(&mut rng);
                let p2 = mk(&mut rng);
                let (a, b) = (rat(2, 3), rat(3, 1));
                let combined = MetricPoint::new(
                    tree.clone(),
                    p1.lengths()
                        .iter()
                        .map(|(bip, l1)| {
                            let l2 = &p2.lengths()[bip];
                            (bip.clone(), a.clone() * l1 + b.clone() * l2)
                        })
                        .collect(),
                )
                .unwrap();
                let e1 = embed(&p1).unwrap();
                let e2 = embed(&p2).unwrap();
                let ec = embed(&combined).unwrap();
                for ((v1, v2), vc) in e1.iter().zip(&e2).zip(&ec) {
                    assert_eq!(a.clone() * v1 + b.clone() * v2, *vc);
                }
            }
        }
    }

    #[test]
    fn embedding_is_injective_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for n in 4..=5 {
            let mut seen: Vec<(MetricPoint, Vec<BigRational>)> = Vec::new();
            for _ in 0..40 {
                let point = random_point(n, &mut rng);
                let coords = embed(&point).unwrap();
                for (other, other_coords) in &seen {
                    // distinct interior points must embed differently; points
                    // agreeing after dropping zero-length edges coincide
                    let reduced = |p: &MetricPoint| -> BTreeMap<LeafBipartition, BigRational> {
                        p.lengths()
                            .iter()
                            .filter(|(_, l)| !l.is_zero())
                            .map(|(b, l)| (b.clone(), l.clone()))
                            .collect()
                    };
                    assert_eq!(reduced(&point) == reduced(other), coords == *other_coords);
                }
                seen.push((point, coords));
            }
        }
    }

    #[test]
    fn integer_lengths_embed_integrally() {
        let point = caterpillar4(rat(7, 1));
        for v in embed(&point).unwrap() {
            assert!(v.denom().is_one());
        }
    }

    #[test]
    fn metric_point_validation() {
        let tree = LeafLabeledTree::new(4, vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap();
        let wrong = LeafBipartition::parse("13|24", 4).unwrap();
        assert!(
            MetricPoint::new(tree.clone(), [(wrong, rat(1, 1))].into_iter().collect()).is_err()
        );
        let bip = LeafBipartition::parse("12|34", 4).unwrap();
        assert!(MetricPoint::new(
            tree.clone(),
            [(bip.clone(), rat(-1, 1))].into_iter().collect()
        )
        .is_err());
        // omitted edges default to zero
        let p = MetricPoint::new(tree, BTreeMap::new()).unwrap();
        assert!(p.lengths()[&bip].is_zero());
    }
}
