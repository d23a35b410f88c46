//! Leaf-labeled trees with bounded/unbounded edges.
//!
//! Leaves carry labels `0..n-1` (displayed 1-based); internal vertices carry
//! opaque ids `>= n`. All semantics flow through leaf labels and the leaf
//! bipartitions of edges: the sorted set of bounded-edge bipartitions is a
//! complete invariant of a stable leaf-labeled tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Unordered vertex pair, normalized so `.0 < .1`.
pub type Edge = (usize, usize);

pub fn mk_edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The bipartition of leaf labels induced by deleting an edge, stored as the
/// side that does not contain leaf 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafBipartition {
    n: usize,
    mask: u32,
}

impl LeafBipartition {
    pub fn new(n: usize, side: impl IntoIterator<Item = usize>) -> Result<Self> {
        assert!(n <= 32);
        let mut mask: u32 = 0;
        for leaf in side {
            if leaf >= n {
                return Err(Error::Invalid(format!(
                    "leaf {leaf} out of range for n={n}"
                )));
            }
            mask |= 1 << leaf;
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        if mask & 1 != 0 {
            mask = full & !mask;
        }
        if mask == 0 {
            return Err(Error::Invalid("bipartition side is empty".into()));
        }
        Ok(LeafBipartition { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The side not containing leaf 0, as 0-based labels.
    pub fn side(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.mask >> i & 1 == 1).collect()
    }

    pub fn side_size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// True iff the bipartition separates leaves `a` and `b`.
    pub fn separates(&self, a: usize, b: usize) -> bool {
        (self.mask >> a ^ self.mask >> b) & 1 == 1
    }

    /// Parses "12|34" (compact 1-based labels) or "1,2|3,10".
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let (left, right) = text
            .split_once('|')
            .ok_or_else(|| Error::Invalid(format!("bipartition '{text}' missing '|'")))?;
        let parse_side = |s: &str| -> Result<Vec<usize>> {
            let labels: Vec<usize> = if s.contains(',') {
                s.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Invalid(format!("bad leaf label '{t}'")))
                    })
                    .collect::<Result<_>>()?
            } else {
                s.trim()
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|v| v as usize)
                            .ok_or_else(|| Error::Invalid(format!("bad leaf label '{c}'")))
                    })
                    .collect::<Result<_>>()?
            };
            labels
                .into_iter()
                .map(|l| {
                    if l >= 1 && l <= n {
                        Ok(l - 1)
                    } else {
                        Err(Error::Invalid(format!("leaf label {l} out of 1..={n}")))
                    }
                })
                .collect()
        };
        let left = parse_side(left)?;
        let right = parse_side(right)?;
        if left.is_empty() || right.is_empty() {
            return Err(Error::Invalid(format!(
                "bipartition '{text}' has an empty side"
            )));
        }
        let mut all: Vec<usize> = left.iter().chain(right.iter()).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != n || left.len() + right.len() != n {
            return Err(Error::Invalid(format!(
                "bipartition '{text}' does not cover leaves 1..={n} exactly once"
            )));
        }
        // normalization picks the side without leaf 0, so either side works
        LeafBipartition::new(n, right)
    }
}

impl fmt::Display for LeafBipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // side containing leaf 1 (label 0) first
        let with_zero: Vec<usize> = (0..self.n).filter(|&i| self.mask >> i & 1 == 0).collect();
        let other = self.side();
        let fmt_side = |side: &[usize]| -> String {
            if self.n <= 9 {
                side.iter().map(|l| (l + 1).to_string()).collect()
            } else {
                side.iter()
                    .map(|l| (l + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }
        };
        write!(f, "{}|{}", fmt_side(&with_zero), fmt_side(&other))
    }
}

/// A stable tree with `n` labeled leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeafLabeledTree {
    n: usize,
    edges: Vec<Edge>,
}

impl LeafLabeledTree {
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidTree(format!("need n >= 3 leaves, got {n}")));
        }
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidTree("multiple edge".into()));
            }
        }
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidTree("self-loop".into()));
            }
            *degree.entry(a).or_insert(0) += 1;
            *degree.entry(b).or_insert(0) += 1;
        }
        let vertices: BTreeSet<usize> = degree.keys().copied().collect();
        if edges.len() + 1 != vertices.len() {
            return Err(Error::InvalidTree("edge count is not |V| - 1".into()));
        }
        for leaf in 0..n {
            match degree.get(&leaf) {
                Some(1) => {}
                _ => {
                    return Err(Error::InvalidTree(format!(
                        "leaf {leaf} must have degree exactly 1"
                    )))
                }
            }
        }
        for (&v, &deg) in &degree {
            if v >= n && deg < 3 {
                return Err(Error::InvalidTree(format!(
                    "internal vertex {v} has degree {deg} < 3 (unstable)"
                )));
            }
        }
        let tree = LeafLabeledTree { n, edges };
        if !tree.is_connected() {
            return Err(Error::InvalidTree("disconnected".into()));
        }
        Ok(tree)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.n
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        self.vertices()
            .into_iter()
            .filter(|&v| v >= self.n)
            .collect()
    }

    pub fn adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let vertices = self.vertices();
        let Some(&start) = vertices.iter().next() else {
            return false;
        };
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == vertices.len()
    }

    /// An edge is bounded iff neither endpoint is a leaf.
    pub fn is_bounded(&self, edge: Edge) -> bool {
        !self.is_leaf(edge.0) && !self.is_leaf(edge.1)
    }

    pub fn bounded_edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|&e| self.is_bounded(e))
            .collect()
    }

    pub fn unbounded_edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|&e| !self.is_bounded(e))
            .collect()
    }

    pub fn is_trivalent(&self) -> bool {
        let mut degree: BTreeMap<usize, usize> = BTreeMap::new();
        for &(a, b) in &self.edges {
            *degree.entry(a).or_insert(0) += 1;
            *degree.entry(b).or_insert(0) += 1;
        }
        degree.values().all(|&d| d == 1 || d == 3)
    }

    pub fn contains_edge(&self, edge: Edge) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// The leaf bipartition from deleting `edge`.
    pub fn leaf_bipartition(&self, edge: Edge) -> Result<LeafBipartition> {
        if !self.contains_edge(edge) {
            return Err(Error::EdgeNotInTree);
        }
        let adj = self.adjacency();
        let mut side = Vec::new();
        let mut seen = BTreeSet::from([edge.0]);
        let mut queue = VecDeque::from([edge.0]);
        while let Some(v) = queue.pop_front() {
            if self.is_leaf(v) {
                side.push(v);
            }
            for &w in &adj[&v] {
                if (v, w) == edge || (w, v) == edge {
                    continue;
                }
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        LeafBipartition::new(self.n, side)
    }

    /// Bounded edges paired with their bipartitions, in canonical
    /// (bipartition-sorted) order. This order assigns the labels `e_1..e_m`.
    pub fn bounded_edges_canonical(&self) -> Vec<(LeafBipartition, Edge)> {
        let mut out: Vec<(LeafBipartition, Edge)> = self
            .bounded_edges()
            .into_iter()
            .map(|e| (self.leaf_bipartition(e).expect("edge in tree"), e))
            .collect();
        out.sort();
        out
    }

    /// The sorted set of bounded-edge bipartitions: equal keys iff the trees
    /// are isomorphic respecting leaf labels.
    pub fn canonical_key(&self) -> Vec<LeafBipartition> {
        self.bounded_edges_canonical()
            .into_iter()
            .map(|(b, _)| b)
            .collect()
    }

    /// Contracts the given bounded edges (in any order; the result is the
    /// same). Surviving edges keep their bipartitions.
    pub fn degenerate(&self, contract: &[Edge]) -> Result<LeafLabeledTree> {
        for &e in contract {
            if !self.contains_edge(e) {
                return Err(Error::EdgeNotInTree);
            }
            if !self.is_bounded(e) {
                return Err(Error::ContractUnbounded);
            }
        }
        let contract: BTreeSet<Edge> = contract.iter().copied().collect();
        // union-find over vertex ids
        let vertices = self.vertices();
        let mut parent: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
            let p = parent[&v];
            if p == v {
                return v;
            }
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
        for &(a, b) in &contract {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent.insert(hi, lo);
            }
        }
        let new_edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| !contract.contains(e))
            .map(|&(a, b)| mk_edge(find(&mut parent, a), find(&mut parent, b)))
            .collect();
        LeafLabeledTree::new(self.n, new_edges)
    }

    /// Like [`degenerate`](Self::degenerate), keyed by bipartitions.
    pub fn degenerate_by_bipartitions(
        &self,
        contract: &BTreeSet<LeafBipartition>,
    ) -> Result<LeafLabeledTree> {
        let by_bip: BTreeMap<LeafBipartition, Edge> =
            self.bounded_edges_canonical().into_iter().collect();
        let edges: Vec<Edge> = contract
            .iter()
            .map(|b| by_bip.get(b).copied().ok_or(Error::EdgeNotInTree))
            .collect::<Result<_>>()?;
        self.degenerate(&edges)
    }

    /// Finds a cherry: an internal vertex where two distinct unbounded edges
    /// meet. Deterministic choice: the vertex whose two lowest adjacent
    /// leaves are lexicographically smallest.
    pub fn find_cherry(&self) -> Result<Cherry> {
        let adj = self.adjacency();
        let mut best: Option<Cherry> = None;
        for &v in adj.keys() {
            if self.is_leaf(v) {
                continue;
            }
            let mut leaves: Vec<usize> = adj[&v]
                .iter()
                .copied()
                .filter(|&w| self.is_leaf(w))
                .collect();
            if leaves.len() < 2 {
                continue;
            }
            leaves.sort_unstable();
            let (l1, l2) = (leaves[0], leaves[1]);
            let third_neighbor = adj[&v]
                .iter()
                .copied()
                .find(|&w| w != l1 && w != l2)
                .ok_or_else(|| Error::InvalidTree("vertex of degree < 3".into()))?;
            let candidate = Cherry {
                vertex: v,
                leaves: (l1, l2),
                leaf_edges: (mk_edge(v, l1), mk_edge(v, l2)),
                third_edge: mk_edge(v, third_neighbor),
            };
            if best
                .as_ref()
                .map(|b| candidate.leaves < b.leaves)
                .unwrap_or(true)
            {
                best = Some(candidate);
            }
        }
        best.ok_or_else(|| Error::InvalidTree("no cherry found".into()))
    }
}

/// A pair of unbounded edges meeting at an internal vertex, plus the third
/// edge there (bounded, or the tripod's remaining unbounded edge).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cherry {
    pub vertex: usize,
    pub leaves: (usize, usize),
    pub leaf_edges: (Edge, Edge),
    pub third_edge: Edge,
}

/// All topological types of trivalent trees with `n` labeled leaves, one
/// representative per type, in deterministic order.
///
/// Enumeration grows from the tripod by subdividing each edge and attaching
/// the next leaf; with leaves added in label order every type appears exactly
/// once, giving `(2n-5)!!` trees.
pub fn enumerate_trivalent_types(n: usize) -> Result<Vec<LeafLabeledTree>> {
    if !(3..=10).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "trivalent enumeration supports 3 <= n <= 10, got {n}"
        )));
    }
    // tripod on leaves 0,1,2 with internal vertex n
    let mut trees = vec![LeafLabeledTree {
        n,
        edges: vec![(0, n), (1, n), (2, n)],
    }];
    for leaf in 3..n {
        let fresh = n + (leaf - 2); // internal ids n..n+(k-2) at k leaves
        let mut next = Vec::with_capacity(trees.len() * (2 * leaf - 3));
        for tree in &trees {
            for &(a, b) in &tree.edges {
                let mut edges: Vec<Edge> = tree
                    .edges
                    .iter()
                    .copied()
                    .filter(|&e| e != (a, b))
                    .collect();
                edges.push(mk_edge(a, fresh));
                edges.push(mk_edge(b, fresh));
                edges.push(mk_edge(leaf, fresh));
                edges.sort_unstable();
                next.push(LeafLabeledTree { n, edges });
            }
        }
        trees = next;
    }
    Ok(trees)
}

/// `(2n-5)!!`, the number of trivalent topological types.
pub fn double_factorial_types(n: usize) -> u64 {
    assert!(n >= 3);
    let mut acc = 1u64;
    let mut k = 2 * n as u64 - 5;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tripod() -> LeafLabeledTree {
        LeafLabeledTree::new(3, vec![(0, 3), (1, 3), (2, 3)]).unwrap()
    }

    fn caterpillar4() -> LeafLabeledTree {
        // cherry {1,2} | {3,4}
        LeafLabeledTree::new(4, vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_trees() {
        // degree-2 internal vertex
        assert!(LeafLabeledTree::new(3, vec![(0, 3), (1, 3), (2, 4), (3, 4)]).is_err());
        // disconnected
        assert!(LeafLabeledTree::new(4, vec![(0, 4), (1, 4), (2, 5), (3, 5)]).is_err());
        // leaf of degree 2
        assert!(LeafLabeledTree::new(3, vec![(0, 1), (0, 2)]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trivalent_types(3).unwrap().len(), 1);
        assert_eq!(enumerate_trivalent_types(4).unwrap().len(), 3);
        assert_eq!(enumerate_trivalent_types(5).unwrap().len(), 15);
        for n in 3..=7 {
            assert_eq!(
                enumerate_trivalent_types(n).unwrap().len() as u64,
                double_factorial_types(n)
            );
        }
        assert!(enumerate_trivalent_types(11).is_err());
    }

    #[test]
    fn trivalent_trees_have_n_minus_3_bounded_edges() {
        for n in 3..=7 {
            for tree in enumerate_trivalent_types(n).unwrap() {
                assert!(tree.is_trivalent());
                assert_eq!(tree.bounded_edges().len(), n - 3);
                assert_eq!(tree.unbounded_edges().len(), n);
            }
        }
    }

    #[test]
    fn bipartition_examples() {
        let t = tripod();
        let b = t.leaf_bipartition((0, 3)).unwrap();
        assert_eq!(b.side(), vec![1, 2]); // {1} | {2,3} stored as {2,3} side
        assert_eq!(b.to_string(), "1|23");

        let c = caterpillar4();
        let bounded = c.bounded_edges();
        assert_eq!(bounded, vec![(4, 5)]);
        let b = c.leaf_bipartition(bounded[0]).unwrap();
        assert_eq!(b.to_string(), "12|34");
        assert!(b.separates(0, 2));
        assert!(!b.separates(0, 1));
    }

    #[test]
    fn bipartition_parse_roundtrip() {
        let b = LeafBipartition::parse("12|34", 4).unwrap();
        assert_eq!(b, LeafBipartition::new(4, [2, 3]).unwrap());
        assert_eq!(b, LeafBipartition::parse("34|12", 4).unwrap());
        assert_eq!(b, LeafBipartition::parse("3,4|1,2", 4).unwrap());
        assert!(LeafBipartition::parse("12|3", 4).is_err());
        assert!(LeafBipartition::parse("12|345", 4).is_err());
        assert!(LeafBipartition::parse("1234", 4).is_err());
    }

    #[test]
    fn distinct_edges_distinct_bipartitions() {
        for n in 3..=6 {
            for tree in enumerate_trivalent_types(n).unwrap() {
                let bips: Vec<LeafBipartition> = tree
                    .edges()
                    .iter()
                    .map(|&e| tree.leaf_bipartition(e).unwrap())
                    .collect();
                let set: BTreeSet<_> = bips.iter().cloned().collect();
                assert_eq!(set.len(), bips.len());
            }
        }
    }

    #[test]
    fn bounded_bipartitions_have_both_sides_at_least_2() {
        for n in 4..=7 {
            for tree in enumerate_trivalent_types(n).unwrap() {
                for e in tree.bounded_edges() {
                    let b = tree.leaf_bipartition(e).unwrap();
                    assert!(b.side_size() >= 2);
                    assert!(n - b.side_size() >= 2);
                }
            }
        }
    }

    #[test]
    fn canonical_keys_pairwise_distinct() {
        for n in 3..=7 {
            let trees = enumerate_trivalent_types(n).unwrap();
            let keys: BTreeSet<Vec<LeafBipartition>> =
                trees.iter().map(|t| t.canonical_key()).collect();
            assert_eq!(keys.len(), trees.len());
        }
        let keys: BTreeSet<String> = enumerate_trivalent_types(4)
            .unwrap()
            .iter()
            .map(|t| t.canonical_key()[0].to_string())
            .collect();
        let expected: BTreeSet<String> = ["12|34", "13|24", "14|23"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(keys, expected);
    }

    #[test]
    fn canonical_key_ignores_internal_ids() {
        // same shape as caterpillar4 with internal vertices renamed
        let renamed =
            LeafLabeledTree::new(4, vec![(0, 9), (1, 9), (2, 7), (3, 7), (7, 9)]).unwrap();
        assert_eq!(renamed.canonical_key(), caterpillar4().canonical_key());
    }

    #[test]
    fn degenerate_single_edge_gives_star() {
        let c = caterpillar4();
        let star = c.degenerate(&[(4, 5)]).unwrap();
        assert!(star.canonical_key().is_empty());
        assert_eq!(star.vertices().len(), 5);
        assert!(!star.is_trivalent());
    }

    #[test]
    fn degenerate_empty_is_identity() {
        let c = caterpillar4();
        assert_eq!(c.degenerate(&[]).unwrap(), c);
    }

    #[test]
    fn degenerate_rejects_unbounded() {
        let c = caterpillar4();
        match c.degenerate(&[(0, 4)]) {
            Err(Error::ContractUnbounded) => {}
            other => panic!("expected ContractUnbounded, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_order_independent() {
        for tree in enumerate_trivalent_types(6).unwrap().into_iter().take(20) {
            let bounded = tree.bounded_edges();
            let (e1, e2) = (bounded[0], bounded[1]);
            let both = tree.degenerate(&[e1, e2]).unwrap();
            let seq1 = tree.degenerate(&[e1]).unwrap();
            // after contracting e1, e2 survives with the same bipartition
            let bip2 = tree.leaf_bipartition(e2).unwrap();
            let seq1 = seq1
                .degenerate_by_bipartitions(&BTreeSet::from([bip2]))
                .unwrap();
            assert_eq!(both.canonical_key(), seq1.canonical_key());
        }
    }

    #[test]
    fn degenerate_all_yields_star() {
        for n in 4..=6 {
            for tree in enumerate_trivalent_types(n).unwrap() {
                let star = tree.degenerate(&tree.bounded_edges()).unwrap();
                assert!(star.canonical_key().is_empty());
                assert_eq!(star.internal_vertices().len(), 1);
            }
        }
    }

    #[test]
    fn surviving_bipartitions_preserved_under_contraction() {
        for tree in enumerate_trivalent_types(6).unwrap().into_iter().take(30) {
            let bounded = tree.bounded_edges();
            let contracted = tree.degenerate(&[bounded[0]]).unwrap();
            let mut survivors: Vec<LeafBipartition> = contracted.canonical_key();
            survivors.sort();
            let mut expected: Vec<LeafBipartition> = bounded[1..]
                .iter()
                .map(|&e| tree.leaf_bipartition(e).unwrap())
                .collect();
            expected.sort();
            assert_eq!(survivors, expected);
        }
    }

    #[test]
    fn cherry_examples() {
        let t = tripod();
        let cherry = t.find_cherry().unwrap();
        assert_eq!(cherry.leaves, (0, 1));
        assert_eq!(cherry.third_edge, (2, 3));

        let c = caterpillar4();
        let cherry = c.find_cherry().unwrap();
        assert_eq!(cherry.leaves, (0, 1));
        assert_eq!(cherry.third_edge, (4, 5));
        assert!(c.is_bounded(cherry.third_edge));
    }

    #[test]
    fn every_trivalent_type_has_a_cherry() {
        for n in 3..=7 {
            for tree in enumerate_trivalent_types(n).unwrap() {
                let cherry = tree.find_cherry().unwrap();
                assert!(tree.is_leaf(cherry.leaves.0));
                assert!(tree.is_leaf(cherry.leaves.1));
                assert!(tree.contains_edge(cherry.third_edge));
            }
        }
    }
}
