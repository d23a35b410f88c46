//! The tropical Hurwitz complex for a ramification profile.
//!
//! Top-dimensional cells are pairs (trivalent topological type, assignment of
//! a partition to every bounded edge) in which every internal vertex is
//! acceptable. Each cell carries an exact rational weight, and the degree of
//! the forgetful morphism to the moduli space of marked tropical curves is
//! the weighted cell count over any chamber.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, BigUint, One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::class_algebra::triple_index;
use crate::error::{Error, Result};
use crate::partition::{all_partitions, factorial, Partition, RamificationProfile};
use crate::tree::{enumerate_trivalent_types, LeafBipartition, LeafLabeledTree};

const MAX_N: usize = 8;
const MAX_D: usize = 6;

/// One top-dimensional cell: a trivalent type with a partition on every
/// bounded edge (keyed by the edge's leaf bipartition) and its cached weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzCell {
    tree: LeafLabeledTree,
    nu: BTreeMap<LeafBipartition, Partition>,
    weight: BigRational,
}

impl HurwitzCell {
    pub fn tree(&self) -> &LeafLabeledTree {
        &self.tree
    }

    pub fn nu(&self) -> &BTreeMap<LeafBipartition, Partition> {
        &self.nu
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }
}

// the partition slots around one internal vertex
#[derive(Debug, Clone)]
enum Slot {
    Sigma(usize), // leaf label -> profile partition
    Nu(usize),    // index into the canonical bounded-edge order
}

fn vertex_slots(tree: &LeafLabeledTree) -> Vec<Vec<Slot>> {
    let adj = tree.adjacency();
    let canonical = tree.bounded_edges_canonical();
    let index_of: BTreeMap<_, usize> = canonical
        .iter()
        .enumerate()
        .map(|(i, (_, e))| (*e, i))
        .collect();
    tree.internal_vertices()
        .into_iter()
        .map(|v| {
            adj[&v]
                .iter()
                .map(|&w| {
                    if tree.is_leaf(w) {
                        Slot::Sigma(w)
                    } else {
                        Slot::Nu(index_of[&crate::tree::mk_edge(v, w)])
                    }
                })
                .collect()
        })
        .collect()
}

fn guard(profile: &RamificationProfile) -> Result<()> {
    if profile.n() > MAX_N || profile.d() > MAX_D {
        return Err(Error::OutOfRange(format!(
            "cell enumeration supports n <= {MAX_N}, d <= {MAX_D}; got n={}, d={}",
            profile.n(),
            profile.d()
        )));
    }
    Ok(())
}

/// All acceptable cells on one trivalent type, by depth-first assignment over
/// the bounded edges in canonical order with per-vertex pruning: a vertex is
/// checked as soon as its last incident partition is fixed.
pub fn enumerate_cells_on_type(
    profile: &RamificationProfile,
    tree: &LeafLabeledTree,
) -> Result<Vec<HurwitzCell>> {
    guard(profile)?;
    if !tree.is_trivalent() || tree.n() != profile.n() {
        return Err(Error::InvalidTree(
            "chamber must be a trivalent type for the profile's n".into(),
        ));
    }
    let d = profile.d();
    let sigmas = profile.partitions();
    let canonical = tree.bounded_edges_canonical();
    let m = canonical.len();
    let slots = vertex_slots(tree);

    // a vertex becomes checkable once its highest Nu slot is assigned
    let ready_at: Vec<isize> = slots
        .iter()
        .map(|sv| {
            sv.iter()
                .filter_map(|s| match s {
                    Slot::Nu(i) => Some(*i as isize),
                    Slot::Sigma(_) => None,
                })
                .max()
                .unwrap_or(-1)
        })
        .collect();

    let slot_partition = |slot: &Slot, assigned: &[Option<Partition>]| -> Partition {
        match slot {
            Slot::Sigma(leaf) => sigmas[*leaf].clone(),
            Slot::Nu(i) => assigned[*i].clone().expect("slot assigned"),
        }
    };

    let check_vertices = |depth: isize, assigned: &[Option<Partition>]| -> Result<bool> {
        for (vi, sv) in slots.iter().enumerate() {
            if ready_at[vi] != depth {
                continue;
            }
            let mus: Vec<Partition> = sv.iter().map(|s| slot_partition(s, assigned)).collect();
            if triple_index(&mus[0], &mus[1], &mus[2])?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };

    let parts = all_partitions(d);
    let mut cells = Vec::new();
    let mut assigned: Vec<Option<Partition>> = vec![None; m];
    // vertices with no bounded edges (tripod) are checked up front
    if check_vertices(-1, &assigned)? {
        dfs(
            0,
            &mut assigned,
            &parts,
            &check_vertices,
            &mut |nu: &[Option<Partition>]| -> Result<()> {
                let nu: BTreeMap<LeafBipartition, Partition> = canonical
                    .iter()
                    .zip(nu.iter())
                    .map(|((bip, _), p)| (bip.clone(), p.clone().expect("complete assignment")))
                    .collect();
                let weight = cell_weight(profile, tree, &nu)?;
                cells.push(HurwitzCell {
                    tree: tree.clone(),
                    nu,
                    weight,
                });
                Ok(())
            },
        )?;
    }
    return Ok(cells);

    type Check<'a> = &'a dyn Fn(isize, &[Option<Partition>]) -> Result<bool>;

    fn dfs(
        depth: usize,
        assigned: &mut Vec<Option<Partition>>,
        parts: &[Partition],
        check: Check<'_>,
        emit: &mut dyn FnMut(&[Option<Partition>]) -> Result<()>,
    ) -> Result<()> {
        if depth == assigned.len() {
            return emit(assigned);
        }
        for p in parts {
            assigned[depth] = Some(p.clone());
            if check(depth as isize, assigned)? {
                dfs(depth + 1, assigned, parts, check, emit)?;
            }
        }
        assigned[depth] = None;
        Ok(())
    }
}

/// All acceptable cells of the complex, grouped by the deterministic order of
/// the trivalent types.
pub fn enumerate_cells(profile: &RamificationProfile) -> Result<Vec<HurwitzCell>> {
    guard(profile)?;
    let mut cells = Vec::new();
    for tree in enumerate_trivalent_types(profile.n())? {
        cells.extend(enumerate_cells_on_type(profile, &tree)?);
    }
    Ok(cells)
}

/// `w = (1/d!) (prod over bounded edges of 1/|K_nu|) (prod over internal
/// vertices of I(v))`. Strictly positive for acceptable cells; errors if any
/// `I(v) = 0`.
pub fn cell_weight(
    profile: &RamificationProfile,
    tree: &LeafLabeledTree,
    nu: &BTreeMap<LeafBipartition, Partition>,
) -> Result<BigRational> {
    let d = profile.d();
    let sigmas = profile.partitions();
    let canonical = tree.bounded_edges_canonical();
    let assigned: Vec<Option<Partition>> = canonical
        .iter()
        .map(|(bip, _)| nu.get(bip).cloned())
        .collect();
    if assigned.iter().any(|a| a.is_none()) || nu.len() != canonical.len() {
        return Err(Error::Invalid(
            "nu must assign exactly the bounded edges".into(),
        ));
    }

    let mut index_product = BigUint::one();
    for sv in vertex_slots(tree) {
        let mus: Vec<Partition> = sv
            .iter()
            .map(|s| match s {
                Slot::Sigma(leaf) => sigmas[*leaf].clone(),
                Slot::Nu(i) => assigned[*i].clone().unwrap(),
            })
            .collect();
        let idx = triple_index(&mus[0], &mus[1], &mus[2])?;
        if idx.is_zero() {
            return Err(Error::UnacceptableCell);
        }
        index_product *= idx;
    }

    let mut denom = factorial(d);
    for p in nu.values() {
        denom *= p.class_size();
    }
    Ok(BigRational::new(
        BigInt::from(index_product),
        BigInt::from(denom),
    ))
}

/// Weighted preimage count over a generic point of one chamber: the sum of
/// the acceptable cell weights on this type. Lattice indices are all 1 here
/// (integral image coordinates force integral edge lengths), so no index
/// factor appears.
pub fn degree_at_chamber(
    profile: &RamificationProfile,
    tree: &LeafLabeledTree,
) -> Result<BigRational> {
    let cells = enumerate_cells_on_type(profile, tree)?;
    Ok(cells.iter().map(|c| c.weight.clone()).sum())
}

/// Degree of the forgetful morphism, evaluated on every chamber; the values
/// must agree, and any disagreement is reported as an error (it would mean an
/// implementation bug, not a mathematical possibility).
pub fn degree(profile: &RamificationProfile) -> Result<BigRational> {
    guard(profile)?;
    let types = enumerate_trivalent_types(profile.n())?;
    let degrees: Vec<BigRational> = types
        .par_iter()
        .map(|t| degree_at_chamber(profile, t))
        .collect::<Result<_>>()?;
    let first = degrees[0].clone();
    for (i, deg) in degrees.iter().enumerate() {
        if *deg != first {
            return Err(Error::ChamberDisagreement(format!(
                "chamber 0 gives {first}, chamber {i} gives {deg}"
            )));
        }
    }
    Ok(first)
}

/// Degree computed on the first chamber only, skipping the cross-chamber
/// agreement check.
pub fn degree_single_chamber(profile: &RamificationProfile) -> Result<BigRational> {
    guard(profile)?;
    let types = enumerate_trivalent_types(profile.n())?;
    degree_at_chamber(profile, &types[0])
}

/// Degree by the cherry-stripping recursion: the base case `n = 3` is
/// `I(sigma_1, sigma_2, sigma_3) / d!`; otherwise strip the last two profile
/// entries and sum over the partition on the edge that supported them.
pub fn degree_recursive(profile: &RamificationProfile) -> BigRational {
    let d = profile.d();
    let sigmas = profile.partitions();
    let n = sigmas.len();
    if n == 3 {
        let idx =
            triple_index(&sigmas[0], &sigmas[1], &sigmas[2]).expect("profile partitions share d");
        return BigRational::new(BigInt::from(idx), BigInt::from(factorial(d)));
    }
    let mut total = BigRational::zero();
    for nu in all_partitions(d) {
        let idx =
            triple_index(&sigmas[n - 2], &sigmas[n - 1], &nu).expect("profile partitions share d");
        if idx.is_zero() {
            continue;
        }
        let mut reduced: Vec<Partition> = sigmas[..n - 2].to_vec();
        reduced.push(nu.clone());
        let reduced = RamificationProfile::new(d, reduced).expect("n-1 >= 3");
        let factor = BigRational::new(BigInt::from(idx), BigInt::from(nu.class_size()));
        total += factor * degree_recursive(&reduced);
    }
    total
}

/// Identification key of a face: the surviving (bipartition -> partition)
/// assignments. Faces of different cells glue exactly when their keys match
/// (the profile is fixed across the whole complex).
pub type FaceKey = BTreeMap<LeafBipartition, Partition>;

/// A coordinate face of a cell: a choice of contracted bounded edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub contracted: BTreeSet<LeafBipartition>,
    pub key: FaceKey,
}

/// All `2^m` coordinate faces of a cell (the empty contraction is the cell
/// itself).
pub fn faces_of(cell: &HurwitzCell) -> Vec<Face> {
    let bips: Vec<&LeafBipartition> = cell.nu.keys().collect();
    let m = bips.len();
    (0..(1usize << m))
        .map(|subset| {
            let contracted: BTreeSet<LeafBipartition> = (0..m)
                .filter(|i| subset >> i & 1 == 1)
                .map(|i| bips[i].clone())
                .collect();
            let key: FaceKey = cell
                .nu
                .iter()
                .filter(|(bip, _)| !contracted.contains(*bip))
                .map(|(bip, p)| (bip.clone(), p.clone()))
                .collect();
            Face { contracted, key }
        })
        .collect()
}

/// One gluing class of faces across the complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentificationClass {
    pub key: FaceKey,
    /// (cell index, contracted edge set) per member face.
    pub members: Vec<(usize, BTreeSet<LeafBipartition>)>,
}

/// Groups all faces of all cells into identification classes by key.
pub fn glue(cells: &[HurwitzCell]) -> Vec<IdentificationClass> {
    let mut classes: BTreeMap<FaceKey, Vec<(usize, BTreeSet<LeafBipartition>)>> = BTreeMap::new();
    for (i, cell) in cells.iter().enumerate() {
        for face in faces_of(cell) {
            classes
                .entry(face.key)
                .or_default()
                .push((i, face.contracted));
        }
    }
    classes
        .into_iter()
        .map(|(key, members)| IdentificationClass { key, members })
        .collect()
}

pub const EXPORT_FORMAT: &str = "hurwitz-complex/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellExport {
    pub tree: Vec<String>,
    pub nu: BTreeMap<String, String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExport {
    pub key: BTreeMap<String, String>,
    pub members: Vec<(usize, Vec<String>)>,
}

/// Serializable snapshot of the whole complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexExport {
    pub d: usize,
    pub profile: Vec<String>,
    pub degree: String,
    pub cells: Vec<CellExport>,
    pub classes: Vec<ClassExport>,
}

/// Builds the export: cells, gluing classes, and the (all-chamber) degree.
pub fn build_export(profile: &RamificationProfile) -> Result<ComplexExport> {
    let cells = enumerate_cells(profile)?;
    let deg = degree(profile)?;
    let classes = glue(&cells);
    Ok(ComplexExport {
        d: profile.d(),
        profile: profile.partitions().iter().map(|p| p.to_string()).collect(),
        degree: deg.to_string(),
        cells: cells
            .iter()
            .map(|c| CellExport {
                tree: c
                    .tree
                    .canonical_key()
                    .iter()
                    .map(|b| b.to_string())
                    .collect(),
                nu: c
                    .nu
                    .iter()
                    .map(|(b, p)| (b.to_string(), p.to_string()))
                    .collect(),
                weight: c.weight.to_string(),
            })
            .collect(),
        classes: classes
            .into_iter()
            .map(|c| ClassExport {
                key: c
                    .key
                    .iter()
                    .map(|(b, p)| (b.to_string(), p.to_string()))
                    .collect(),
                members: c
                    .members
                    .into_iter()
                    .map(|(i, contracted)| (i, contracted.iter().map(|b| b.to_string()).collect()))
                    .collect(),
            })
            .collect(),
    })
}

impl ComplexExport {
    pub fn to_json(&self) -> Value {
        json!({
            "format": EXPORT_FORMAT,
            "d": self.d,
            "profile": self.profile,
            "degree": self.degree,
            "cells": self.cells.iter().map(|c| json!({
                "tree": c.tree,
                "nu": c.nu,
                "weight": c.weight,
            })).collect::<Vec<_>>(),
            "classes": self.classes.iter().map(|c| json!({
                "key": c.key,
                "members": c.members.iter().map(|(i, contracted)| json!({
                    "cell": i,
                    "contracted": contracted,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Invalid("expected JSON object".into()))?;
        if obj.get("format").and_then(Value::as_str) != Some(EXPORT_FORMAT) {
            return Err(Error::Invalid(format!(
                "unsupported format, expected {EXPORT_FORMAT}"
            )));
        }
        let str_of = |v: &Value| -> Result<String> {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Invalid("expected string".into()))
        };
        let str_map = |v: &Value| -> Result<BTreeMap<String, String>> {
            v.as_object()
                .ok_or_else(|| Error::Invalid("expected object".into()))?
                .iter()
                .map(|(k, v)| Ok((k.clone(), str_of(v)?)))
                .collect()
        };
        let str_vec = |v: &Value| -> Result<Vec<String>> {
            v.as_array()
                .ok_or_else(|| Error::Invalid("expected array".into()))?
                .iter()
                .map(str_of)
                .collect()
        };
        let d = obj
            .get("d")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Invalid("missing d".into()))? as usize;
        let profile = str_vec(
            obj.get("profile")
                .ok_or_else(|| Error::Invalid("missing profile".into()))?,
        )?;
        let degree = str_of(
            obj.get("degree")
                .ok_or_else(|| Error::Invalid("missing degree".into()))?,
        )?;
        let cells = obj
            .get("cells")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("missing cells".into()))?
            .iter()
            .map(|c| {
                Ok(CellExport {
                    tree: str_vec(
                        c.get("tree")
                            .ok_or_else(|| Error::Invalid("missing tree".into()))?,
                    )?,
                    nu: str_map(
                        c.get("nu")
                            .ok_or_else(|| Error::Invalid("missing nu".into()))?,
                    )?,
                    weight: str_of(
                        c.get("weight")
                            .ok_or_else(|| Error::Invalid("missing weight".into()))?,
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let classes =
            obj.get("classes")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Invalid("missing classes".into()))?
                .iter()
                .map(|c| {
                    let members =
                        c.get("members")
                            .and_then(Value::as_array)
                            .ok_or_else(|| Error::Invalid("missing members".into()))?
                            .iter()
                            .map(|m| {
                                let cell =
                                    m.get("cell").and_then(Value::as_u64).ok_or_else(|| {
                                        Error::Invalid("missing cell index".into())
                                    })? as usize;
                                let contracted =
                                    str_vec(m.get("contracted").ok_or_else(|| {
                                        Error::Invalid("missing contracted".into())
                                    })?)?;
                                Ok((cell, contracted))
                            })
                            .collect::<Result<Vec<_>>>()?;
                    Ok(ClassExport {
                        key: str_map(
                            c.get("key")
                                .ok_or_else(|| Error::Invalid("missing key".into()))?,
                        )?,
                        members,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        Ok(ComplexExport {
            d,
            profile,
            degree,
            cells,
            classes,
        })
    }
}
