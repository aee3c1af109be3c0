//! Symbolic expression trees for higher Whitehead maps.
//!
//! An expression is a leaf (an abstract map `f: ΣX → Y`), a node
//! `hw(e_1,…,e_m)` optionally anchored in an ambient complex, or a folded
//! node post-composing an anchored `hw` with a vertex fold of its ambient.
//! Each leaf is bound to a vertex of the codomain combinatorics; by default
//! the binding is parsed from the trailing digits of the map name
//! (`f1_2 ↦ 1_2`), with an explicit override for repeated maps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::folds::{folded_complex, max_folding_complex, Fold};
use crate::polyjoin::{substitution_with, Labeling};
use crate::vertex::{vertex_from_name, VertexId};

/// A named target space with the structure flags the fold rules consult.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SpaceRef {
    pub name: String,
    #[serde(rename = "h_space")]
    pub is_h_space: bool,
    #[serde(rename = "associative")]
    pub is_associative: bool,
}

impl SpaceRef {
    pub fn new(name: impl Into<String>, is_h_space: bool, is_associative: bool) -> Result<Self> {
        if is_associative && !is_h_space {
            return Err(Error::InvalidExpression {
                reason: "an associative space must be an H-space".into(),
            });
        }
        Ok(SpaceRef {
            name: name.into(),
            is_h_space,
            is_associative,
        })
    }
}

impl<'de> Deserialize<'de> for SpaceRef {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            name: String,
            h_space: bool,
            associative: bool,
        }
        let raw = Raw::deserialize(deserializer)?;
        SpaceRef::new(raw.name, raw.h_space, raw.associative).map_err(serde::de::Error::custom)
    }
}

/// An abstract map `f: ΣX → Y`. In spherical mode `sphere_dim = p` means
/// `f: S^p → Y`; since `S^{p-1}` is a suspension for `p ≥ 2`, such leaves
/// must have a suspension domain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MapLeaf {
    pub name: String,
    pub sphere_dim: Option<u32>,
    pub domain_is_suspension: bool,
    pub codomain: SpaceRef,
    pub is_null: bool,
}

impl MapLeaf {
    pub fn new(
        name: impl Into<String>,
        sphere_dim: Option<u32>,
        domain_is_suspension: bool,
        codomain: SpaceRef,
        is_null: bool,
    ) -> Result<Self> {
        let name = name.into();
        if let Some(p) = sphere_dim {
            if p < 1 {
                return Err(Error::InvalidExpression {
                    reason: format!("leaf `{name}` has sphere dimension {p} < 1"),
                });
            }
            if p >= 2 && !domain_is_suspension {
                return Err(Error::InvalidExpression {
                    reason: format!(
                        "leaf `{name}` with sphere dimension {p} must have a suspension domain"
                    ),
                });
            }
        }
        Ok(MapLeaf {
            name,
            sphere_dim,
            domain_is_suspension,
            codomain,
            is_null,
        })
    }

    /// A spherical leaf `f: S^p → Y`.
    pub fn spherical(name: impl Into<String>, p: u32, codomain: SpaceRef) -> Result<Self> {
        MapLeaf::new(name, Some(p), true, codomain, false)
    }
}

/// Three-valued outcome of the triviality classifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Triviality {
    Trivial { rule: TrivialityRule },
    NonTrivial { certificate: Vec<VertexId> },
    Unknown,
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial { .. })
    }
}

/// Which sufficient condition fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrivialityRule {
    /// Some argument map is null-homotopic.
    NullArgument,
    /// The ambient contains the full-simplex substitution of the argument
    /// shapes.
    FullSimplexSubstitution,
    /// The ambient contains the boundary substitution with a full simplex
    /// at some nested slot.
    FullSimplexAtNestedSlot,
    /// The fold of a trivializing complex lands inside the folded ambient.
    FoldedShapeCollapse,
    /// The expression re-anchored over the maximal unfolding complex is
    /// trivial.
    UnfoldingTrivial,
    /// The bottom-cell criterion: the full-simplex substitution shape is
    /// contained in the ambient.
    BottomCellCriterion,
    /// A joined factor folds back onto the original complex.
    JoinCollapse,
}

/// Classifier mode: `Dj` treats every leaf as a degree-two bottom-cell
/// inclusion into one projective space, where triviality of a singly-nested
/// map is an if-and-only-if condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    General,
    Dj,
}

/// Expression tree over abstract map leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HwExpr {
    Leaf {
        map: MapLeaf,
        vertex: VertexId,
    },
    Hw {
        args: Vec<HwExpr>,
        ambient: Option<SimplicialComplex>,
    },
    Folded {
        inner: Box<HwExpr>,
        fold: Fold,
    },
}

impl HwExpr {
    /// A leaf bound to the vertex parsed from its name suffix.
    pub fn leaf(map: MapLeaf) -> Result<Self> {
        let vertex = vertex_from_name(&map.name).ok_or_else(|| Error::InvalidExpression {
            reason: format!(
                "cannot derive a vertex from map name `{}`; bind one explicitly",
                map.name
            ),
        })?;
        Ok(HwExpr::Leaf { map, vertex })
    }

    /// A leaf bound to an explicit vertex (for repeated maps).
    pub fn leaf_at(map: MapLeaf, vertex: VertexId) -> Self {
        HwExpr::Leaf { map, vertex }
    }

    /// An unanchored node `hw(args)`.
    pub fn hw(args: Vec<HwExpr>) -> Result<Self> {
        Self::hw_build(args, None)
    }

    /// A node anchored in `ambient`; the ambient must contain the codomain
    /// shape of the node.
    pub fn hw_anchored(args: Vec<HwExpr>, ambient: SimplicialComplex) -> Result<Self> {
        Self::hw_build(args, Some(ambient))
    }

    fn hw_build(args: Vec<HwExpr>, ambient: Option<SimplicialComplex>) -> Result<Self> {
        if args.len() < 2 {
            return Err(Error::InvalidExpression {
                reason: format!("hw needs at least 2 arguments, got {}", args.len()),
            });
        }
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for arg in &args {
            for v in arg.arg_shape()?.vertices() {
                if !seen.insert(v.clone()) {
                    return Err(Error::InvalidExpression {
                        reason: format!("argument supports overlap at vertex {v}"),
                    });
                }
            }
        }
        let expr = HwExpr::Hw { args, ambient };
        if let HwExpr::Hw {
            ambient: Some(a), ..
        } = &expr
        {
            let shape = expr.codomain_complex()?;
            if !shape.is_subcomplex_of(a) {
                let witness = first_missing_face(&shape, a);
                return Err(Error::containment("the codomain shape", &witness));
            }
        }
        Ok(expr)
    }

    /// Post-composition with a fold of the ambient. The inner expression
    /// must be an anchored node; the fold must identify vertices whose
    /// bound maps share a codomain, and that codomain must carry enough
    /// structure: none when the identified vertices span no edge of the
    /// ambient, an H-space for a single identification, an associative
    /// H-space otherwise.
    pub fn folded(inner: HwExpr, fold: Fold) -> Result<Self> {
        let ambient = match &inner {
            HwExpr::Hw {
                ambient: Some(a), ..
            } => a.clone(),
            _ => {
                return Err(Error::InvalidExpression {
                    reason: "folded expressions require an anchored hw inner".into(),
                })
            }
        };
        fold.validate_on(ambient.vertices())?;
        let leaves: BTreeMap<VertexId, MapLeaf> = inner
            .leaves()
            .into_iter()
            .map(|(v, m)| (v.clone(), m.clone()))
            .collect();
        for j in fold.targets() {
            let target_map = leaves.get(&j).ok_or_else(|| Error::InvalidFold {
                reason: format!("fold target {j} is not bound to any map"),
            })?;
            let block = fold.block(&j);
            for i in &block {
                let source_map = leaves.get(i).ok_or_else(|| Error::InvalidFold {
                    reason: format!("folded vertex {i} is not bound to any map"),
                })?;
                if source_map.codomain != target_map.codomain {
                    return Err(Error::InvalidFold {
                        reason: format!(
                            "maps at {i} and {j} have different codomains ({} vs {})",
                            source_map.codomain.name, target_map.codomain.name
                        ),
                    });
                }
            }
            let mut w: BTreeSet<VertexId> = block.clone();
            w.insert(j.clone());
            let restricted = ambient.full_subcomplex(&w)?;
            let discrete = restricted.dim().map_or(true, |d| d <= 0);
            if discrete {
                continue;
            }
            if block.len() == 1 {
                if !target_map.codomain.is_h_space {
                    return Err(Error::InvalidFold {
                        reason: format!(
                            "identifying {} with {j} requires an H-space codomain",
                            block.iter().next().unwrap()
                        ),
                    });
                }
            } else if !target_map.codomain.is_associative {
                return Err(Error::InvalidFold {
                    reason: format!(
                        "identifying {} vertices onto {j} requires an associative H-space",
                        block.len()
                    ),
                });
            }
        }
        Ok(HwExpr::Folded {
            inner: Box::new(inner),
            fold,
        })
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, HwExpr::Leaf { .. })
    }

    /// All leaves with their vertex bindings, in tree order.
    pub fn leaves(&self) -> Vec<(&VertexId, &MapLeaf)> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<(&'a VertexId, &'a MapLeaf)>) {
        match self {
            HwExpr::Leaf { map, vertex } => out.push((vertex, map)),
            HwExpr::Hw { args, .. } => {
                for a in args {
                    a.collect_leaves(out);
                }
            }
            HwExpr::Folded { inner, .. } => inner.collect_leaves(out),
        }
    }

    /// The shape this expression contributes as an argument of an enclosing
    /// node: the bound vertex for a leaf, the anchor for an anchored node,
    /// the codomain shape otherwise.
    pub fn arg_shape(&self) -> Result<SimplicialComplex> {
        match self {
            HwExpr::Leaf { vertex, .. } => SimplicialComplex::simplex([vertex.clone()]),
            HwExpr::Hw {
                ambient: Some(a), ..
            } => Ok(a.clone()),
            HwExpr::Hw { .. } => self.codomain_complex(),
            HwExpr::Folded { .. } => self.codomain_complex(),
        }
    }

    /// The codomain combinatorics: for `hw(e_1,…,e_m)` the boundary-simplex
    /// substitution of the argument shapes, for a folded node the fold of
    /// the inner anchor.
    pub fn codomain_complex(&self) -> Result<SimplicialComplex> {
        match self {
            HwExpr::Leaf { .. } => Err(Error::InvalidExpression {
                reason: "codomain complex is defined for hw and folded expressions".into(),
            }),
            HwExpr::Hw { args, .. } => {
                let shapes = args
                    .iter()
                    .map(|a| a.arg_shape())
                    .collect::<Result<Vec<_>>>()?;
                boundary_substitution(&shapes)
            }
            HwExpr::Folded { inner, fold } => {
                let ambient = inner.ambient_or_shape()?;
                folded_complex(&ambient, fold)
            }
        }
    }

    /// The explicit anchor, or the codomain shape when unanchored.
    pub fn ambient_or_shape(&self) -> Result<SimplicialComplex> {
        match self {
            HwExpr::Hw {
                ambient: Some(a), ..
            } => Ok(a.clone()),
            _ => self.codomain_complex(),
        }
    }

    /// Re-anchors a node in a different ambient, revalidating containment.
    pub fn reanchored(&self, ambient: SimplicialComplex) -> Result<HwExpr> {
        match self {
            HwExpr::Hw { args, .. } => Self::hw_build(args.clone(), Some(ambient)),
            _ => Err(Error::InvalidExpression {
                reason: "only hw expressions can be re-anchored".into(),
            }),
        }
    }

    /// Paper-style rendering, e.g. `∇_(4->1)hw^{K}(hw(f1,f2,f3),f4)`.
    pub fn pretty(&self) -> String {
        match self {
            HwExpr::Leaf { map, .. } => map.name.clone(),
            HwExpr::Hw { args, ambient } => {
                let inner = args.iter().map(|a| a.pretty()).collect::<Vec<_>>().join(",");
                if ambient.is_some() {
                    format!("hw^{{K}}({inner})")
                } else {
                    format!("hw({inner})")
                }
            }
            HwExpr::Folded { inner, fold } => format!("∇_({}){}", fold, inner.pretty()),
        }
    }
}

/// Spherical/suspension bookkeeping for the domain of an expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Domain {
    /// Suspensions in front of the smash of the (desuspended) leaf domains
    /// when writing the map's domain as `Σ^s X_1 ∧ ⋯ ∧ X_l`. A leaf
    /// `f: ΣX → Y` counts one; a node `hw(g_1,…,g_n)` has the join of its
    /// argument domains, which works out to the sum of their counts minus
    /// one. A node of two nested blocks covering `m` leaves thus shows the
    /// familiar `Σ^{m-2}`.
    pub suspensions: usize,
    /// Leaf names in tree order, the factors of the smash.
    pub smash_factors: Vec<String>,
    /// Degree of the expression as an element: a leaf `f: S^p → Y` has
    /// degree `p`, a node has the sum of its argument degrees minus one.
    /// `None` as soon as some leaf carries no sphere dimension.
    pub sphere_dim: Option<i64>,
}

/// Domain bookkeeping; pure and total over well-formed expressions.
pub fn domain(e: &HwExpr) -> Domain {
    match e {
        HwExpr::Leaf { map, .. } => Domain {
            suspensions: 1,
            smash_factors: vec![map.name.clone()],
            sphere_dim: map.sphere_dim.map(|p| p as i64),
        },
        HwExpr::Hw { args, .. } => {
            let parts: Vec<Domain> = args.iter().map(domain).collect();
            let sphere_dim = parts
                .iter()
                .map(|p| p.sphere_dim)
                .sum::<Option<i64>>()
                .map(|s| s - 1);
            Domain {
                suspensions: parts.iter().map(|p| p.suspensions).sum::<usize>() - 1,
                smash_factors: parts.into_iter().flat_map(|p| p.smash_factors).collect(),
                sphere_dim,
            }
        }
        HwExpr::Folded { inner, .. } => domain(inner),
    }
}

/// A permutation of `{1,…,m}` in one-line notation: `images[t]` is the
/// element at position `t+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &x in &images {
            if x == 0 || x > m || seen[x] {
                return Err(Error::InvalidPermutation {
                    reason: format!("{images:?} is not a bijection on 1..={m}"),
                });
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: usize) -> Self {
        Permutation {
            images: (1..=m).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(images).map_err(serde::de::Error::custom)
    }
}

/// The Koszul sign of a permutation of graded elements: the product of
/// `(-1)^{d_a d_b}` over the inversions, where `dims[x-1]` is the degree of
/// element `x`.
pub fn koszul_sign(perm: &Permutation, dims: &[i64]) -> Result<i32> {
    if dims.len() != perm.len() {
        return Err(Error::InvalidPermutation {
            reason: format!(
                "permutation of length {} with {} degrees",
                perm.len(),
                dims.len()
            ),
        });
    }
    let mut sign = 1i32;
    let images = perm.images();
    for s in 0..images.len() {
        for t in s + 1..images.len() {
            if images[s] > images[t] {
                let d = dims[images[s] - 1] * dims[images[t] - 1];
                if d % 2 != 0 {
                    sign = -sign;
                }
            }
        }
    }
    Ok(sign)
}

/// Sorts the arguments of every node into canonical order (by leaf-name
/// sequence) and returns the accumulated Koszul sign of the rearrangement.
/// Errors when some leaf carries no sphere dimension.
pub fn normalize_spherical(e: &HwExpr) -> Result<(HwExpr, i32)> {
    for (_, map) in e.leaves() {
        if map.sphere_dim.is_none() {
            return Err(Error::NonSphericalLeaf {
                name: map.name.clone(),
            });
        }
    }
    normalize_rec(e)
}

fn sort_key(e: &HwExpr) -> (Vec<String>, Vec<VertexId>) {
    let leaves = e.leaves();
    (
        leaves.iter().map(|(_, m)| m.name.clone()).collect(),
        leaves.iter().map(|(v, _)| (*v).clone()).collect(),
    )
}

fn normalize_rec(e: &HwExpr) -> Result<(HwExpr, i32)> {
    match e {
        HwExpr::Leaf { .. } => Ok((e.clone(), 1)),
        HwExpr::Hw { args, ambient } => {
            let mut sign = 1i32;
            let mut normalized = Vec::with_capacity(args.len());
            for a in args {
                let (na, s) = normalize_rec(a)?;
                sign *= s;
                normalized.push(na);
            }
            let degrees: Vec<i64> = normalized
                .iter()
                .map(|a| domain(a).sphere_dim.expect("checked spherical"))
                .collect();
            let mut order: Vec<usize> = (0..normalized.len()).collect();
            order.sort_by_key(|&t| sort_key(&normalized[t]));
            // inversion count of the rearrangement, weighted by degrees
            for s in 0..order.len() {
                for t in s + 1..order.len() {
                    if order[s] > order[t] && (degrees[order[s]] * degrees[order[t]]) % 2 != 0 {
                        sign = -sign;
                    }
                }
            }
            let args: Vec<HwExpr> = order.into_iter().map(|t| normalized[t].clone()).collect();
            Ok((
                HwExpr::Hw {
                    args,
                    ambient: ambient.clone(),
                },
                sign,
            ))
        }
        HwExpr::Folded { inner, fold } => {
            let (ni, sign) = normalize_rec(inner)?;
            Ok((
                HwExpr::Folded {
                    inner: Box::new(ni),
                    fold: fold.clone(),
                },
                sign,
            ))
        }
    }
}

/// Replaces the leaf at `slot_path` (indices into nested argument lists) by
/// each of `summands` in turn, distributing a formal sum over the slot.
/// The slot's domain must be a suspension.
pub fn expand_linear(
    e: &HwExpr,
    slot_path: &[usize],
    summands: &[MapLeaf],
) -> Result<Vec<HwExpr>> {
    let target = resolve_slot(e, slot_path)?;
    let (map, vertex) = match target {
        HwExpr::Leaf { map, vertex } => (map, vertex.clone()),
        _ => {
            return Err(Error::InvalidExpression {
                reason: "the summed slot must be a leaf".into(),
            })
        }
    };
    if !map.domain_is_suspension {
        return Err(Error::SuspensionRequired {
            name: map.name.clone(),
        });
    }
    summands
        .iter()
        .map(|m| replace_slot(e, slot_path, HwExpr::leaf_at(m.clone(), vertex.clone())))
        .collect()
}

fn resolve_slot<'a>(e: &'a HwExpr, path: &[usize]) -> Result<&'a HwExpr> {
    match path.split_first() {
        None => Ok(e),
        Some((&head, rest)) => match e {
            HwExpr::Hw { args, .. } => {
                let arg = args.get(head).ok_or_else(|| Error::InvalidExpression {
                    reason: format!("slot index {head} out of range"),
                })?;
                resolve_slot(arg, rest)
            }
            HwExpr::Folded { inner, .. } => resolve_slot(inner, path),
            HwExpr::Leaf { .. } => Err(Error::InvalidExpression {
                reason: "slot path descends below a leaf".into(),
            }),
        },
    }
}

fn replace_slot(e: &HwExpr, path: &[usize], replacement: HwExpr) -> Result<HwExpr> {
    match path.split_first() {
        None => Ok(replacement),
        Some((&head, rest)) => match e {
            HwExpr::Hw { args, ambient } => {
                let mut args = args.clone();
                if head >= args.len() {
                    return Err(Error::InvalidExpression {
                        reason: format!("slot index {head} out of range"),
                    });
                }
                args[head] = replace_slot(&args[head], rest, replacement)?;
                Ok(HwExpr::Hw {
                    args,
                    ambient: ambient.clone(),
                })
            }
            HwExpr::Folded { inner, fold } => Ok(HwExpr::Folded {
                inner: Box::new(replace_slot(inner, path, replacement)?),
                fold: fold.clone(),
            }),
            HwExpr::Leaf { .. } => Err(Error::InvalidExpression {
                reason: "slot path descends below a leaf".into(),
            }),
        },
    }
}

/// Boundary-simplex substitution `∂Δ⟨shape_1,…,shape_m⟩` of already-labeled
/// shapes.
pub(crate) fn boundary_substitution(shapes: &[SimplicialComplex]) -> Result<SimplicialComplex> {
    let outer = SimplicialComplex::boundary_simplex(
        (1..=shapes.len() as u32).map(VertexId::from_index),
    )?;
    substitution_with(&outer, shapes, Labeling::Keep)
}

/// Full-simplex substitution `Δ⟨shape_1,…,shape_m⟩` of already-labeled
/// shapes.
pub(crate) fn full_substitution(shapes: &[SimplicialComplex]) -> Result<SimplicialComplex> {
    let outer =
        SimplicialComplex::simplex((1..=shapes.len() as u32).map(VertexId::from_index))?;
    substitution_with(&outer, shapes, Labeling::Keep)
}

/// First face of `small` (smallest, lexicographically first) that is not a
/// face of `big`.
pub(crate) fn first_missing_face(small: &SimplicialComplex, big: &SimplicialComplex) -> Face {
    let mut faces: Vec<&Face> = small.faces().iter().collect();
    faces.sort_by_key(|f| (f.len(), (*f).clone()));
    for f in faces {
        if !f.iter().all(|v| big.vertices().contains(v)) || !big.is_face(f) {
            return f.clone();
        }
    }
    Face::new()
}

/// The trivializing complexes of an `hw` node: the full-simplex
/// substitution of the argument shapes, and for each nested slot the
/// boundary substitution with that slot's shape replaced by the full
/// simplex on its support.
fn trivializing_shapes(args: &[HwExpr]) -> Result<Vec<(TrivialityRule, SimplicialComplex)>> {
    let shapes = args
        .iter()
        .map(|a| a.arg_shape())
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![(
        TrivialityRule::FullSimplexSubstitution,
        full_substitution(&shapes)?,
    )];
    for (t, arg) in args.iter().enumerate() {
        if arg.is_leaf() {
            continue;
        }
        let mut widened = shapes.clone();
        widened[t] = SimplicialComplex::simplex(shapes[t].vertices().iter().cloned())?;
        out.push((
            TrivialityRule::FullSimplexAtNestedSlot,
            boundary_substitution(&widened)?,
        ));
    }
    Ok(out)
}

/// Applies the sufficient triviality conditions in order; in `Dj` mode a
/// singly-nested unfolded expression falls through to the bottom-cell
/// if-and-only-if criterion, which alone may report `NonTrivial`.
pub fn triviality(e: &HwExpr, mode: Mode) -> Result<Triviality> {
    if e.leaves().iter().any(|(_, m)| m.is_null) {
        return Ok(Triviality::Trivial {
            rule: TrivialityRule::NullArgument,
        });
    }
    match e {
        HwExpr::Leaf { .. } => Ok(Triviality::Unknown),
        HwExpr::Hw { args, .. } => {
            let ambient = e.ambient_or_shape()?;
            for (rule, shape) in trivializing_shapes(args)? {
                if shape.is_subcomplex_of(&ambient) {
                    return Ok(Triviality::Trivial { rule });
                }
            }
            if mode == Mode::Dj {
                if let Some(shape) = bottom_cell_shape(args)? {
                    if shape.is_subcomplex_of(&ambient) {
                        return Ok(Triviality::Trivial {
                            rule: TrivialityRule::BottomCellCriterion,
                        });
                    }
                    let witness = first_missing_face(&shape, &ambient);
                    return Ok(Triviality::NonTrivial {
                        certificate: witness.into_iter().collect(),
                    });
                }
            }
            Ok(Triviality::Unknown)
        }
        HwExpr::Folded { inner, fold } => {
            let (args, iambient) = match inner.as_ref() {
                HwExpr::Hw {
                    args,
                    ambient: Some(a),
                } => (args, a.clone()),
                _ => {
                    return Err(Error::InvalidExpression {
                        reason: "folded expressions require an anchored hw inner".into(),
                    })
                }
            };
            let folded_ambient = folded_complex(&iambient, fold)?;
            for (_, shape) in trivializing_shapes(args)? {
                let folded_shape = folded_complex(&shape, fold)?;
                if folded_shape.is_subcomplex_of(&folded_ambient) {
                    return Ok(Triviality::Trivial {
                        rule: TrivialityRule::FoldedShapeCollapse,
                    });
                }
            }
            let lpsi = max_folding_complex(&iambient, fold)?;
            let reanchored = inner.reanchored(lpsi)?;
            if triviality(&reanchored, Mode::General)?.is_trivial() {
                return Ok(Triviality::Trivial {
                    rule: TrivialityRule::UnfoldingTrivial,
                });
            }
            Ok(Triviality::Unknown)
        }
    }
}

/// The bottom-cell criterion applies to unfolded nodes with exactly one
/// nested argument, itself a node of leaves, all leaves of degree two.
fn bottom_cell_shape(args: &[HwExpr]) -> Result<Option<SimplicialComplex>> {
    let mut nested = 0usize;
    for a in args {
        match a {
            HwExpr::Leaf { map, .. } => {
                if map.sphere_dim != Some(2) {
                    return Ok(None);
                }
            }
            HwExpr::Hw {
                args: inner_args, ..
            } => {
                nested += 1;
                if !inner_args
                    .iter()
                    .all(|x| matches!(x, HwExpr::Leaf { map, .. } if map.sphere_dim == Some(2)))
                {
                    return Ok(None);
                }
            }
            HwExpr::Folded { .. } => return Ok(None),
        }
    }
    if nested != 1 {
        return Ok(None);
    }
    let shapes = args
        .iter()
        .map(|a| a.arg_shape())
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(full_substitution(&shapes)?))
}

mod serde_repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub(super) enum ExprRepr {
        #[serde(rename = "leaf")]
        Leaf(LeafRepr),
        #[serde(rename = "hw")]
        Hw {
            args: Vec<ExprRepr>,
            ambient: Option<SimplicialComplex>,
        },
        #[serde(rename = "folded")]
        Folded {
            inner: Box<ExprRepr>,
            #[serde(rename = "I")]
            sources: Vec<VertexId>,
            #[serde(rename = "J")]
            targets: Vec<VertexId>,
            map: BTreeMap<VertexId, VertexId>,
        },
    }

    #[derive(Serialize, Deserialize)]
    pub(super) struct LeafRepr {
        name: String,
        sphere_dim: Option<u32>,
        suspension: bool,
        null: bool,
        codomain: SpaceRef,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        vertex: Option<VertexId>,
    }

    impl ExprRepr {
        pub(super) fn from_expr(e: &HwExpr) -> ExprRepr {
            match e {
                HwExpr::Leaf { map, vertex } => {
                    let derived = vertex_from_name(&map.name);
                    ExprRepr::Leaf(LeafRepr {
                        name: map.name.clone(),
                        sphere_dim: map.sphere_dim,
                        suspension: map.domain_is_suspension,
                        null: map.is_null,
                        codomain: map.codomain.clone(),
                        vertex: if derived.as_ref() == Some(vertex) {
                            None
                        } else {
                            Some(vertex.clone())
                        },
                    })
                }
                HwExpr::Hw { args, ambient } => ExprRepr::Hw {
                    args: args.iter().map(ExprRepr::from_expr).collect(),
                    ambient: ambient.clone(),
                },
                HwExpr::Folded { inner, fold } => ExprRepr::Folded {
                    inner: Box::new(ExprRepr::from_expr(inner)),
                    sources: fold.sources().into_iter().collect(),
                    targets: fold.targets().into_iter().collect(),
                    map: fold.map().clone(),
                },
            }
        }

        pub(super) fn into_expr(self) -> Result<HwExpr> {
            match self {
                ExprRepr::Leaf(l) => {
                    let map = MapLeaf::new(l.name, l.sphere_dim, l.suspension, l.codomain, l.null)?;
                    match l.vertex {
                        Some(v) => Ok(HwExpr::leaf_at(map, v)),
                        None => HwExpr::leaf(map),
                    }
                }
                ExprRepr::Hw { args, ambient } => {
                    let args = args
                        .into_iter()
                        .map(ExprRepr::into_expr)
                        .collect::<Result<Vec<_>>>()?;
                    HwExpr::hw_build(args, ambient)
                }
                ExprRepr::Folded { inner, map, .. } => {
                    let inner = inner.into_expr()?;
                    HwExpr::folded(inner, Fold::new(map)?)
                }
            }
        }
    }
}

impl Serialize for HwExpr {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serde_repr::ExprRepr::from_expr(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HwExpr {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        serde_repr::ExprRepr::deserialize(deserializer)?
            .into_expr()
            .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for HwExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}
