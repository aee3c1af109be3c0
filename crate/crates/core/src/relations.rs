//! Identity complexes and relation families among higher Whitehead maps.
//!
//! For an ordered partition of a vertex set into `k ≥ 3` blocks, the
//! identity complex carries a `k`-term relation whose summands nest the
//! maps indexed by each block complement. Substitution, folding the
//! identity complex, folding inside substituted factors, and folding one
//! factor onto another each propagate the relation to a new ambient
//! complex; triviality of every summand is annotated by the rule engine.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::folds::{folded_complex, Fold};
use crate::polyjoin::{composition, substitution_with, Labeling};
use crate::vertex::VertexId;
use crate::whitehead::{
    domain, koszul_sign, normalize_spherical, triviality, HwExpr, MapLeaf, Mode, Permutation,
    Triviality, TrivialityRule,
};

/// An ordered partition of a vertex set into non-empty disjoint blocks.
/// Block order is significant: it fixes the summand order and the
/// coordinate permutations of the generated relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<BTreeSet<VertexId>>,
}

impl Partition {
    pub fn new(blocks: Vec<BTreeSet<VertexId>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition {
                reason: "a partition needs at least one block".into(),
            });
        }
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition {
                    reason: "blocks must be non-empty".into(),
                });
            }
            for v in b {
                if !seen.insert(v.clone()) {
                    return Err(Error::InvalidPartition {
                        reason: format!("blocks overlap at vertex {v}"),
                    });
                }
            }
        }
        Ok(Partition { blocks })
    }

    /// Parses the CLI grammar: blocks separated by `|`, vertices by `,`.
    pub fn parse(s: &str) -> Result<Self> {
        let blocks = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|t| t.trim().parse())
                    .collect::<Result<BTreeSet<VertexId>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(blocks)
    }

    pub fn blocks(&self) -> &[BTreeSet<VertexId>] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    /// The partitioned vertex set, sorted.
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn m(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// The complement of block `i` in the vertex set.
    pub fn complement(&self, i: usize) -> BTreeSet<VertexId> {
        let block = &self.blocks[i];
        self.vertices()
            .into_iter()
            .filter(|v| !block.contains(v))
            .collect()
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<BTreeSet<VertexId>>::deserialize(deserializer)?;
        Partition::new(blocks).map_err(serde::de::Error::custom)
    }
}

/// The identity complex of a partition: the composition of the block
/// boundary simplices into the `(k-3)`-skeleton of the `(k-1)`-simplex.
/// Its minimal missing faces are exactly the block complements.
pub fn identity_complex(partition: &Partition) -> Result<SimplicialComplex> {
    let k = partition.k();
    if k < 3 {
        return Err(Error::PartitionTooSmall { k });
    }
    let outer = SimplicialComplex::simplex((1..=k as u32).map(VertexId::from_index))?
        .skeleton(k as i64 - 3);
    let inner = partition
        .blocks()
        .iter()
        .map(|b| SimplicialComplex::boundary_simplex(b.iter().cloned()))
        .collect::<Result<Vec<_>>>()?;
    let built = composition(&outer, &inner)?;
    debug_assert!(
        partition.m() > 5
            || (built == identity_complex_via_missing_faces(partition).unwrap()
                && built == identity_complex_via_union(partition).unwrap()),
        "identity complex routes disagree"
    );
    Ok(built)
}

/// Alternative construction from the missing-face description: the unique
/// complex whose minimal missing faces are the block complements.
pub fn identity_complex_via_missing_faces(partition: &Partition) -> Result<SimplicialComplex> {
    if partition.k() < 3 {
        return Err(Error::PartitionTooSmall { k: partition.k() });
    }
    let mfs: Vec<Face> = (0..partition.k())
        .map(|i| partition.complement(i).into_iter().collect())
        .collect();
    SimplicialComplex::from_minimal_missing_faces(partition.vertices(), mfs)
}

/// Alternative construction as the union over blocks of the boundary
/// substitutions `∂Δ⟨∂Δ[complement], block vertices⟩`.
pub fn identity_complex_via_union(partition: &Partition) -> Result<SimplicialComplex> {
    if partition.k() < 3 {
        return Err(Error::PartitionTooSmall { k: partition.k() });
    }
    let mut acc: Option<SimplicialComplex> = None;
    for i in 0..partition.k() {
        let mut shapes = vec![SimplicialComplex::boundary_simplex(partition.complement(i))?];
        for p in &partition.blocks()[i] {
            shapes.push(SimplicialComplex::simplex([p.clone()])?);
        }
        let outer = SimplicialComplex::boundary_simplex(
            (1..=shapes.len() as u32).map(VertexId::from_index),
        )?;
        let piece = substitution_with(&outer, &shapes, Labeling::Keep)?;
        acc = Some(match acc {
            None => piece,
            Some(prev) => prev.union(&piece)?,
        });
    }
    Ok(acc.expect("k >= 3 blocks"))
}

/// One term of a relation: an expression, the coordinate permutation it is
/// precomposed with, its Koszul sign in spherical mode, an integer
/// coefficient (1 unless equal summands were collected), and the
/// triviality annotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub expr: HwExpr,
    pub permutation: Permutation,
    pub sign: Option<i32>,
    pub coefficient: i64,
    pub triviality: Triviality,
}

impl Summand {
    /// Element degree in spherical mode.
    pub fn degree(&self) -> Option<i64> {
        domain(&self.expr).sphere_dim
    }
}

/// A generated relation: the ambient complex and its signed summands.
/// Trivial summands are annotated, never dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub ambient: SimplicialComplex,
    pub summands: Vec<Summand>,
}

impl Relation {
    fn validate(self) -> Result<Self> {
        for s in &self.summands {
            let codomain = s.expr.codomain_complex()?;
            if !codomain.is_subcomplex_of(&self.ambient) {
                let witness = codomain
                    .maximal_faces()
                    .iter()
                    .find(|f| !self.ambient.is_face(f))
                    .cloned()
                    .unwrap_or_default();
                return Err(Error::containment("a summand codomain", &witness));
            }
        }
        Ok(self)
    }

    /// Merges non-trivial summands that are syntactically equal after
    /// spherical normalization (vertex bindings ignored), summing signs
    /// into coefficients. Requires spherical leaves.
    pub fn collect(&self) -> Result<Relation> {
        let mut merged: Vec<Summand> = Vec::new();
        let mut keys: Vec<Option<String>> = Vec::new();
        for s in &self.summands {
            if s.triviality.is_trivial() {
                merged.push(s.clone());
                keys.push(None);
                continue;
            }
            let (normalized, extra_sign) = normalize_spherical(&s.expr)?;
            let key = normalized.pretty();
            let contribution =
                s.coefficient * i64::from(s.sign.unwrap_or(1)) * i64::from(extra_sign);
            if let Some(pos) = keys.iter().position(|k| k.as_deref() == Some(&key)) {
                merged[pos].coefficient += contribution;
            } else {
                merged.push(Summand {
                    expr: normalized,
                    permutation: s.permutation.clone(),
                    sign: None,
                    coefficient: contribution,
                    triviality: s.triviality.clone(),
                });
                keys.push(Some(key));
            }
        }
        Relation {
            ambient: self.ambient.clone(),
            summands: merged,
        }
        .validate()
    }
}

/// Ordered blocks as slot indices into the argument list.
struct SlotPartition {
    blocks: Vec<Vec<usize>>,
}

impl SlotPartition {
    fn complement(&self, i: usize, m: usize) -> Vec<usize> {
        let block: BTreeSet<usize> = self.blocks[i].iter().copied().collect();
        (0..m).filter(|t| !block.contains(t)).collect()
    }
}

fn check_leaves(leaves: &[MapLeaf]) -> Result<bool> {
    for l in leaves {
        if !l.domain_is_suspension {
            return Err(Error::SuspensionRequired {
                name: l.name.clone(),
            });
        }
    }
    let spherical = leaves.iter().all(|l| l.sphere_dim.is_some());
    if spherical {
        for l in leaves {
            if l.sphere_dim.unwrap() < 2 {
                return Err(Error::InvalidExpression {
                    reason: format!(
                        "spherical relations need degrees >= 2, `{}` has {}",
                        l.name,
                        l.sphere_dim.unwrap()
                    ),
                });
            }
        }
    }
    Ok(spherical)
}

/// Builds the `k` summands `hw(hw(args over complement), args over block)`
/// over `ambient`, wrapping each in `fold` when one is given.
fn assemble(
    slots: &SlotPartition,
    args: &[HwExpr],
    ambient: &SimplicialComplex,
    fold: Option<&Fold>,
    spherical: bool,
    mode: Mode,
) -> Result<Vec<Summand>> {
    let m = args.len();
    let degrees: Vec<Option<i64>> = args.iter().map(|a| domain(a).sphere_dim).collect();
    let mut out = Vec::with_capacity(slots.blocks.len());
    for i in 0..slots.blocks.len() {
        let q = slots.complement(i, m);
        let p = &slots.blocks[i];
        let inner = HwExpr::hw(q.iter().map(|&t| args[t].clone()).collect())?;
        let mut outer_args = vec![inner];
        outer_args.extend(p.iter().map(|&t| args[t].clone()));
        let anchored = HwExpr::hw_anchored(outer_args, ambient.clone())?;
        let expr = match fold {
            Some(f) => HwExpr::folded(anchored, f.clone())?,
            None => anchored,
        };
        let images: Vec<usize> = q.iter().chain(p.iter()).map(|&t| t + 1).collect();
        let permutation = Permutation::new(images)?;
        let sign = if spherical {
            let dims: Vec<i64> = degrees
                .iter()
                .map(|d| d.expect("spherical args have degrees"))
                .collect();
            Some(koszul_sign(&permutation, &dims)?)
        } else {
            None
        };
        let t = triviality(&expr, mode)?;
        out.push(Summand {
            expr,
            permutation,
            sign,
            coefficient: 1,
            triviality: t,
        });
    }
    Ok(out)
}

fn leaf_args(partition: &Partition, leaves: &[MapLeaf]) -> Result<Vec<HwExpr>> {
    let vertices: Vec<VertexId> = partition.vertices().into_iter().collect();
    if leaves.len() != vertices.len() {
        return Err(Error::ArityMismatch {
            expected: vertices.len(),
            got: leaves.len(),
        });
    }
    Ok(vertices
        .iter()
        .zip(leaves)
        .map(|(v, l)| HwExpr::leaf_at(l.clone(), v.clone()))
        .collect())
}

fn vertex_slot_partition(partition: &Partition) -> SlotPartition {
    let vertices: Vec<VertexId> = partition.vertices().into_iter().collect();
    let index: BTreeMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(t, v)| (v, t)).collect();
    SlotPartition {
        blocks: partition
            .blocks()
            .iter()
            .map(|b| {
                let mut slots: Vec<usize> = b.iter().map(|v| index[v]).collect();
                slots.sort_unstable();
                slots
            })
            .collect(),
    }
}

/// The basic relation over the identity complex: `k` summands
/// `hw^{K_Π}(hw(f over complement), f over block) ∘ σ_i`, with Koszul
/// signs when every leaf is spherical. Leaves are bound to the partition's
/// vertices in sorted order.
pub fn relation(partition: &Partition, leaves: &[MapLeaf], mode: Mode) -> Result<Relation> {
    let spherical = check_leaves(leaves)?;
    let ambient = identity_complex(partition)?;
    let args = leaf_args(partition, leaves)?;
    let slots = vertex_slot_partition(partition);
    let summands = assemble(&slots, &args, &ambient, None, spherical, mode)?;
    Relation { ambient, summands }.validate()
}

/// Materializes the argument expression for an inner complex: a leaf for a
/// single vertex, a node of constituent leaves for a boundary simplex, an
/// anchored node for a full simplex. Constituents inherit the template
/// leaf's data and are named by their vertex.
fn realize_arg(inner: &SimplicialComplex, template: &MapLeaf) -> Result<HwExpr> {
    let verts: Vec<VertexId> = inner.vertices().iter().cloned().collect();
    if verts.len() == 1 && *inner == SimplicialComplex::simplex([verts[0].clone()])? {
        return Ok(HwExpr::leaf_at(template.clone(), verts[0].clone()));
    }
    let prefix: String = template
        .name
        .chars()
        .take_while(|c| !c.is_ascii_digit())
        .collect();
    let prefix = if prefix.is_empty() {
        "f".to_string()
    } else {
        prefix
    };
    let constituents: Vec<HwExpr> = verts
        .iter()
        .map(|w| {
            let map = MapLeaf::new(
                format!("{prefix}{w}"),
                template.sphere_dim,
                template.domain_is_suspension,
                template.codomain.clone(),
                template.is_null,
            )?;
            Ok(HwExpr::leaf_at(map, w.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    if verts.len() >= 2 && *inner == SimplicialComplex::boundary_simplex(verts.clone())? {
        return HwExpr::hw(constituents);
    }
    if verts.len() >= 2 && *inner == SimplicialComplex::simplex(verts.clone())? {
        return HwExpr::hw_anchored(constituents, inner.clone());
    }
    Err(Error::InvalidExpression {
        reason: format!(
            "inner complex on {{{}}} is not realizable as a map codomain (expected a vertex, a boundary simplex or a full simplex)",
            verts
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
    })
}

/// The relation with complexes substituted into the identity complex:
/// argument `i` is anchored over `inner[i]` and the summands live in
/// `ambient` (defaults to the substituted identity complex, which any
/// provided ambient must contain).
pub fn substituted_relation(
    partition: &Partition,
    inner: &[SimplicialComplex],
    leaves: &[MapLeaf],
    ambient: Option<SimplicialComplex>,
    mode: Mode,
) -> Result<Relation> {
    let spherical = check_leaves(leaves)?;
    if partition.k() < 3 {
        return Err(Error::PartitionTooSmall { k: partition.k() });
    }
    if inner.len() != partition.m() || leaves.len() != partition.m() {
        return Err(Error::ArityMismatch {
            expected: partition.m(),
            got: inner.len().max(leaves.len()),
        });
    }
    let k_pi = identity_complex(partition)?;
    let substituted = substitution_with(&k_pi, inner, Labeling::Keep)?;
    let ambient = match ambient {
        None => substituted,
        Some(a) => {
            if !substituted.is_subcomplex_of(&a) {
                let witness = substituted
                    .maximal_faces()
                    .iter()
                    .find(|f| !a.is_face(f))
                    .cloned()
                    .unwrap_or_default();
                return Err(Error::containment(
                    "the substituted identity complex",
                    &witness,
                ));
            }
            a
        }
    };
    let args = inner
        .iter()
        .zip(leaves)
        .map(|(s, l)| realize_arg(s, l))
        .collect::<Result<Vec<_>>>()?;
    let slots = vertex_slot_partition(partition);
    let summands = assemble(&slots, &args, &ambient, None, spherical, mode)?;
    Relation { ambient, summands }.validate()
}

/// The relation obtained by folding the identity complex. For a fold of a
/// single vertex onto a single vertex across two blocks, exactly the two
/// summands indexed by the touched blocks survive; folds inside one block
/// or with several identified vertices trivialize every summand.
pub fn folded_relation(
    partition: &Partition,
    fold: &Fold,
    leaves: &[MapLeaf],
    mode: Mode,
) -> Result<Relation> {
    let spherical = check_leaves(leaves)?;
    let k_pi = identity_complex(partition)?;
    fold.validate_on(&partition.vertices())?;
    let ambient = folded_complex(&k_pi, fold)?;
    let args = leaf_args(partition, leaves)?;
    let slots = vertex_slot_partition(partition);
    let summands = assemble(&slots, &args, &k_pi, Some(fold), spherical, mode)?;
    Relation { ambient, summands }.validate()
}

/// The substituted relation folded inside the blocks: the fold must send
/// each inner vertex set into itself. Fold and substitution commute, so
/// the summands carry folded argument anchors over the substitution of the
/// folded inner complexes.
pub fn fold_within_relation(
    partition: &Partition,
    inner: &[SimplicialComplex],
    fold: &Fold,
    leaves: &[MapLeaf],
    mode: Mode,
) -> Result<Relation> {
    let spherical = check_leaves(leaves)?;
    if partition.k() < 3 {
        return Err(Error::PartitionTooSmall { k: partition.k() });
    }
    if inner.len() != partition.m() || leaves.len() != partition.m() {
        return Err(Error::ArityMismatch {
            expected: partition.m(),
            got: inner.len().max(leaves.len()),
        });
    }
    for s in fold.sources() {
        let home = inner.iter().position(|c| c.vertices().contains(&s));
        let target_home = inner
            .iter()
            .position(|c| c.vertices().contains(&fold.apply_vertex(&s)));
        match (home, target_home) {
            (Some(a), Some(b)) if a == b => {}
            _ => {
                return Err(Error::InvalidFold {
                    reason: format!(
                        "fold must send each block into itself, {s} -> {} crosses blocks",
                        fold.apply_vertex(&s)
                    ),
                });
            }
        }
    }
    let k_pi = identity_complex(partition)?;
    let folded_inner: Vec<SimplicialComplex> = inner
        .iter()
        .map(|c| match fold.restrict_to(c.vertices()) {
            Some(f) => folded_complex(c, &f),
            None => Ok(c.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    let ambient = substitution_with(&k_pi, &folded_inner, Labeling::Keep)?;
    debug_assert_eq!(
        ambient,
        folded_complex(&substitution_with(&k_pi, inner, Labeling::Keep)?, fold)?,
        "folding does not commute with substitution"
    );
    let args = inner
        .iter()
        .zip(leaves)
        .map(|(s, l)| {
            let base = realize_arg(s, l)?;
            match fold.restrict_to(s.vertices()) {
                None => Ok(base),
                Some(f) => {
                    let anchored = match base {
                        HwExpr::Hw {
                            ambient: Some(_), ..
                        } => base,
                        HwExpr::Hw { args, .. } => HwExpr::hw_anchored(args, s.clone())?,
                        other => other,
                    };
                    HwExpr::folded(anchored, f)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let slots = vertex_slot_partition(partition);
    let summands = assemble(&slots, &args, &ambient, None, spherical, mode)?;
    Relation { ambient, summands }.validate()
}

/// The three-block relation folding the last factor onto a full subcomplex
/// of the first. `vertex_map` must identify `km` with the full subcomplex
/// of `k1` on its image. The middle summand, the one containing
/// `hw(f_1, f_m)`, is trivial exactly when joining `km` to `k1` and
/// folding lands back on `k1`.
pub fn fold_across_relation(
    m: usize,
    k1: &SimplicialComplex,
    km: &SimplicialComplex,
    vertex_map: &BTreeMap<VertexId, VertexId>,
    leaves: &[MapLeaf],
    mode: Mode,
) -> Result<Relation> {
    if m < 3 {
        return Err(Error::InvalidPartition {
            reason: format!("folding across needs at least 3 slots, got {m}"),
        });
    }
    if leaves.len() != m {
        return Err(Error::ArityMismatch {
            expected: m,
            got: leaves.len(),
        });
    }
    let spherical = check_leaves(leaves)?;

    let sources: BTreeSet<VertexId> = vertex_map.keys().cloned().collect();
    if &sources != km.vertices() {
        return Err(Error::InvalidFold {
            reason: "the vertex map must be defined on exactly the vertices of the last factor"
                .into(),
        });
    }
    let image: BTreeSet<VertexId> = vertex_map.values().cloned().collect();
    if image.len() != vertex_map.len() {
        return Err(Error::InvalidFold {
            reason: "the vertex map must be injective".into(),
        });
    }
    if !image.is_subset(k1.vertices()) {
        return Err(Error::InvalidFold {
            reason: "the vertex map must land in the first factor".into(),
        });
    }
    let relabeled_km = SimplicialComplex::new(
        image.clone(),
        km.maximal_faces()
            .iter()
            .map(|f| f.iter().map(|v| vertex_map[v].clone()).collect::<Face>()),
    )?;
    if relabeled_km != k1.full_subcomplex(&image)? {
        return Err(Error::InvalidFold {
            reason:
                "the vertex map is not an isomorphism onto a full subcomplex of the first factor"
                    .into(),
        });
    }

    // middles are plain vertices 2..m-1
    let mut inner: Vec<SimplicialComplex> = vec![k1.clone()];
    for t in 2..m {
        inner.push(SimplicialComplex::simplex([VertexId::from_index(t as u32)])?);
    }
    inner.push(km.clone());

    let slot_blocks = SlotPartition {
        blocks: vec![vec![0], (1..m - 1).collect(), vec![m - 1]],
    };
    let slot_partition = Partition::new(vec![
        [VertexId::from_index(1)].into_iter().collect(),
        (2..m as u32).map(VertexId::from_index).collect(),
        [VertexId::from_index(m as u32)].into_iter().collect(),
    ])?;

    let fold = Fold::new(vertex_map.clone())?;
    let k_pi = identity_complex(&slot_partition)?;
    let s_pi = substitution_with(&k_pi, &inner, Labeling::Keep)?;
    let ambient = folded_complex(&s_pi, &fold)?;

    let args = inner
        .iter()
        .zip(leaves)
        .map(|(s, l)| realize_arg(s, l))
        .collect::<Result<Vec<_>>>()?;
    let mut summands = assemble(&slot_blocks, &args, &s_pi, Some(&fold), spherical, mode)?;

    // the hw(f_1, f_m) summand folds away iff joining km changes nothing
    let collapse = folded_complex(&k1.join(km)?, &fold)? == *k1;
    if collapse && !summands[1].triviality.is_trivial() {
        summands[1].triviality = Triviality::Trivial {
            rule: TrivialityRule::JoinCollapse,
        };
    }
    Relation { ambient, summands }.validate()
}

mod serde_repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub(super) struct RelationRepr {
        ambient: SimplicialComplex,
        summands: Vec<SummandRepr>,
    }

    #[derive(Serialize, Deserialize)]
    pub(super) struct SummandRepr {
        expr: HwExpr,
        permutation: Vec<usize>,
        sign: Option<i32>,
        coefficient: i64,
        triviality: Triviality,
        degree: Option<i64>,
    }

    impl RelationRepr {
        pub(super) fn from_relation(r: &Relation) -> Self {
            RelationRepr {
                ambient: r.ambient.clone(),
                summands: r
                    .summands
                    .iter()
                    .map(|s| SummandRepr {
                        expr: s.expr.clone(),
                        permutation: s.permutation.images().to_vec(),
                        sign: s.sign,
                        coefficient: s.coefficient,
                        triviality: s.triviality.clone(),
                        degree: s.degree(),
                    })
                    .collect(),
            }
        }

        pub(super) fn into_relation(self) -> Result<Relation> {
            let summands = self
                .summands
                .into_iter()
                .map(|s| {
                    let summand = Summand {
                        expr: s.expr,
                        permutation: Permutation::new(s.permutation)?,
                        sign: s.sign,
                        coefficient: s.coefficient,
                        triviality: s.triviality,
                    };
                    if s.degree.is_some() && summand.degree() != s.degree {
                        return Err(Error::Parse(format!(
                            "declared degree {:?} does not match the expression ({:?})",
                            s.degree,
                            summand.degree()
                        )));
                    }
                    Ok(summand)
                })
                .collect::<Result<Vec<_>>>()?;
            Relation {
                ambient: self.ambient,
                summands,
            }
            .validate()
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serde_repr::RelationRepr::from_relation(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        serde_repr::RelationRepr::deserialize(deserializer)?
            .into_relation()
            .map_err(serde::de::Error::custom)
    }
}

/// Default leaves `f1,…,fm` for CLI use: suspension domains, a shared
/// H-space codomain, optional sphere dimensions.
pub fn default_leaves(m: usize, dims: Option<&[u32]>) -> Result<Vec<MapLeaf>> {
    if let Some(d) = dims {
        if d.len() != m {
            return Err(Error::ArityMismatch {
                expected: m,
                got: d.len(),
            });
        }
    }
    let codomain = crate::whitehead::SpaceRef::new("Y", true, true)?;
    (1..=m)
        .map(|t| {
            MapLeaf::new(
                format!("f{t}"),
                dims.map(|d| d[t - 1]),
                true,
                codomain.clone(),
                false,
            )
        })
        .collect()
}

/// Leaves for the bottom-cell mode: degree two into one projective space.
pub fn dj_leaves(m: usize) -> Result<Vec<MapLeaf>> {
    let codomain = crate::whitehead::SpaceRef::new("CP", true, true)?;
    (1..=m)
        .map(|t| MapLeaf::spherical(format!("f{t}"), 2, codomain.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{face, v};

    fn partition(s: &str) -> Partition {
        Partition::parse(s).unwrap()
    }

    #[test]
    fn identity_complex_examples() {
        // three singletons: three disjoint vertices
        let p = partition("1|2|3");
        let k = identity_complex(&p).unwrap();
        let expected =
            SimplicialComplex::new([v(1), v(2), v(3)], [face([1]), face([2]), face([3])]).unwrap();
        assert_eq!(k, expected);

        // all singletons on [m]: the (m-3)-skeleton of the simplex
        let p = partition("1|2|3|4|5");
        let k = identity_complex(&p).unwrap();
        let sk = SimplicialComplex::simplex((1..=5).map(v))
            .unwrap()
            .skeleton(2);
        assert_eq!(k, sk);

        // the worked example {{1},{2,3},{4}}
        let p = partition("1|2,3|4");
        let k = identity_complex(&p).unwrap();
        let expected = SimplicialComplex::new(
            (1..=4).map(v),
            [face([1, 2]), face([1, 3]), face([2, 3]), face([2, 4]), face([3, 4])],
        )
        .unwrap();
        assert_eq!(k, expected);
        assert_eq!(k, identity_complex_via_missing_faces(&p).unwrap());
        assert_eq!(k, identity_complex_via_union(&p).unwrap());

        assert!(matches!(
            identity_complex(&partition("1|2")),
            Err(Error::PartitionTooSmall { k: 2 })
        ));
    }

    #[test]
    fn jacobi_relation_shape() {
        let p = partition("1|2|3");
        let leaves = default_leaves(3, Some(&[2, 2, 2])).unwrap();
        let r = relation(&p, &leaves, Mode::General).unwrap();
        assert_eq!(r.summands.len(), 3);
        assert_eq!(r.summands[0].expr.pretty(), "hw^{K}(hw(f2,f3),f1)");
        assert_eq!(r.summands[1].expr.pretty(), "hw^{K}(hw(f1,f3),f2)");
        assert_eq!(r.summands[2].expr.pretty(), "hw^{K}(hw(f1,f2),f3)");
        assert_eq!(r.summands[0].permutation.images(), &[2, 3, 1]);
        assert_eq!(r.summands[1].permutation.images(), &[1, 3, 2]);
        assert_eq!(r.summands[2].permutation.images(), &[1, 2, 3]);
        for s in &r.summands {
            assert_eq!(s.degree(), Some(4));
        }
    }

    #[test]
    fn singleton_signs_match_closed_form() {
        for m in 3..=6usize {
            let p = Partition::new(
                (1..=m as u32).map(|t| [v(t)].into_iter().collect()).collect(),
            )
            .unwrap();
            let dims: Vec<u32> = (0..m).map(|t| if t % 2 == 0 { 2 } else { 3 }).collect();
            let leaves = default_leaves(m, Some(&dims)).unwrap();
            let r = relation(&p, &leaves, Mode::General).unwrap();
            for (i, s) in r.summands.iter().enumerate() {
                let p_i = i64::from(dims[i]);
                let tail: i64 = dims[i + 1..].iter().map(|&d| i64::from(d)).sum();
                let expected = if (p_i * tail) % 2 == 0 { 1 } else { -1 };
                assert_eq!(s.sign, Some(expected), "block {i} of m={m}");
            }
        }
    }

    #[test]
    fn mixed_partition_relation() {
        let p = partition("1|2,3|4");
        let leaves = dj_leaves(4).unwrap();
        let r = relation(&p, &leaves, Mode::Dj).unwrap();
        assert_eq!(r.summands.len(), 3);
        assert_eq!(r.summands[0].expr.pretty(), "hw^{K}(hw(f2,f3,f4),f1)");
        assert_eq!(r.summands[1].expr.pretty(), "hw^{K}(hw(f1,f4),f2,f3)");
        assert_eq!(r.summands[2].expr.pretty(), "hw^{K}(hw(f1,f2,f3),f4)");
        for s in &r.summands {
            assert!(
                matches!(s.triviality, Triviality::NonTrivial { .. }),
                "got {:?}",
                s.triviality
            );
            assert_eq!(s.degree(), Some(6));
        }
    }

    #[test]
    fn suspension_is_required() {
        let codomain = crate::whitehead::SpaceRef::new("Y", true, true).unwrap();
        let mut leaves = default_leaves(3, None).unwrap();
        leaves[1] = MapLeaf::new("f2", None, false, codomain, false).unwrap();
        assert!(matches!(
            relation(&partition("1|2|3"), &leaves, Mode::General),
            Err(Error::SuspensionRequired { .. })
        ));
    }

    #[test]
    fn substituted_relation_reduces_for_points() {
        let p = partition("1|2,3|4");
        let leaves = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        let inner: Vec<SimplicialComplex> = (1..=4)
            .map(|t| SimplicialComplex::simplex([v(t)]).unwrap())
            .collect();
        let r = substituted_relation(&p, &inner, &leaves, None, Mode::General).unwrap();
        let base = relation(&p, &leaves, Mode::General).unwrap();
        assert_eq!(r, base);
    }

    #[test]
    fn substituted_relation_zhuravleva_ambient() {
        let p = partition("1|2,3|4");
        let leaves = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        let k1 = SimplicialComplex::boundary_simplex([
            "1_1".parse::<VertexId>().unwrap(),
            "1_2".parse().unwrap(),
            "1_3".parse().unwrap(),
        ])
        .unwrap();
        let inner = vec![
            k1.clone(),
            SimplicialComplex::simplex([v(2)]).unwrap(),
            SimplicialComplex::simplex([v(3)]).unwrap(),
            SimplicialComplex::simplex([v(4)]).unwrap(),
        ];
        let r = substituted_relation(&p, &inner, &leaves, None, Mode::General).unwrap();
        // S_Π = ∂Δ⟨K_1 ⊔ K_4, K_2, K_3⟩
        let outer = SimplicialComplex::boundary_simplex([v(1), v(2), v(3)]).unwrap();
        let disjoint = k1
            .union(&SimplicialComplex::simplex([v(4)]).unwrap())
            .unwrap();
        let expected = substitution_with(
            &outer,
            &[
                disjoint,
                SimplicialComplex::simplex([v(2)]).unwrap(),
                SimplicialComplex::simplex([v(3)]).unwrap(),
            ],
            Labeling::Keep,
        )
        .unwrap();
        assert_eq!(r.ambient, expected);
        assert_eq!(
            r.summands[1].expr.pretty(),
            "hw^{K}(hw(hw(f1_1,f1_2,f1_3),f4),f2,f3)"
        );

        // a strictly larger ambient is accepted
        let bigger = r
            .ambient
            .union(&SimplicialComplex::simplex([v(2), v(3), v(4)]).unwrap())
            .unwrap();
        let r2 =
            substituted_relation(&p, &inner, &leaves, Some(bigger.clone()), Mode::General)
                .unwrap();
        assert_eq!(r2.ambient, bigger);

        // an ambient missing the substituted complex is rejected
        let too_small = identity_complex(&p).unwrap();
        assert!(matches!(
            substituted_relation(&p, &inner, &leaves, Some(too_small), Mode::General),
            Err(Error::ContainmentFailure { .. })
        ));
    }

    #[test]
    fn folded_relation_cross_block_survivors() {
        let p = partition("1|2|3|4");
        let leaves = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        let fold = Fold::single(v(4), v(1)).unwrap();
        let r = folded_relation(&p, &fold, &leaves, Mode::General).unwrap();
        assert_eq!(r.summands.len(), 4);
        let trivial: Vec<bool> = r
            .summands
            .iter()
            .map(|s| s.triviality.is_trivial())
            .collect();
        // blocks {1} and {4} survive, {2} and {3} fold away
        assert_eq!(trivial, vec![false, true, true, false]);
        assert_eq!(
            r.ambient,
            folded_complex(&identity_complex(&p).unwrap(), &fold).unwrap()
        );
    }

    #[test]
    fn folded_relation_within_block_all_trivial() {
        let p = partition("1|2,3,4|5");
        let leaves = default_leaves(5, Some(&[2, 2, 2, 2, 2])).unwrap();
        let fold = Fold::single(v(3), v(2)).unwrap();
        let r = folded_relation(&p, &fold, &leaves, Mode::General).unwrap();
        assert!(r.summands.iter().all(|s| s.triviality.is_trivial()));
    }

    #[test]
    fn folded_relation_multi_vertex_all_trivial() {
        let p = partition("1|2|3|4|5");
        let leaves = default_leaves(5, Some(&[2, 2, 2, 2, 2])).unwrap();
        let fold = Fold::new([(v(4), v(1)), (v(5), v(2))].into_iter().collect()).unwrap();
        let r = folded_relation(&p, &fold, &leaves, Mode::General).unwrap();
        assert!(r.summands.iter().all(|s| s.triviality.is_trivial()));
    }

    #[test]
    fn collect_merges_repeated_maps() {
        // fold m -> 1 with f_m = f_1: the two survivors merge to coefficient 2
        let m = 4;
        let p = partition("1|2|3|4");
        let mut leaves = default_leaves(m, Some(&[2, 2, 2, 2])).unwrap();
        leaves[m - 1] = leaves[0].clone();
        let fold = Fold::single(v(4), v(1)).unwrap();
        let r = folded_relation(&p, &fold, &leaves, Mode::General).unwrap();
        let collected = r.collect().unwrap();
        let nontrivial: Vec<&Summand> = collected
            .summands
            .iter()
            .filter(|s| !s.triviality.is_trivial())
            .collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].coefficient, 2);
    }

    #[test]
    fn fold_within_keeps_ambient_in_step() {
        let p = partition("1|2,3|4");
        let leaves = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        let k1 = SimplicialComplex::boundary_simplex([
            "1_1".parse::<VertexId>().unwrap(),
            "1_2".parse().unwrap(),
            "1_3".parse().unwrap(),
        ])
        .unwrap();
        let inner = vec![
            k1,
            SimplicialComplex::simplex([v(2)]).unwrap(),
            SimplicialComplex::simplex([v(3)]).unwrap(),
            SimplicialComplex::simplex([v(4)]).unwrap(),
        ];
        let fold = Fold::single("1_2".parse().unwrap(), "1_1".parse().unwrap()).unwrap();
        let r = fold_within_relation(&p, &inner, &fold, &leaves, Mode::General).unwrap();
        let folded_inner: Vec<SimplicialComplex> = inner
            .iter()
            .map(|c| match fold.restrict_to(c.vertices()) {
                Some(f) => folded_complex(c, &f).unwrap(),
                None => c.clone(),
            })
            .collect();
        let expected = substitution_with(
            &identity_complex(&p).unwrap(),
            &folded_inner,
            Labeling::Keep,
        )
        .unwrap();
        assert_eq!(r.ambient, expected);

        // a cross-block fold is rejected
        let bad = Fold::single(v(4), "1_1".parse().unwrap()).unwrap();
        assert!(matches!(
            fold_within_relation(&p, &inner, &bad, &leaves, Mode::General),
            Err(Error::InvalidFold { .. })
        ));
    }

    #[test]
    fn fold_within_null_inner_leaf_trivializes_everything() {
        let p = partition("1|2,3|4");
        let codomain = crate::whitehead::SpaceRef::new("Y", true, true).unwrap();
        let mut leaves = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        leaves[0] = MapLeaf::new("f1", Some(2), true, codomain, true).unwrap();
        let k1 = SimplicialComplex::boundary_simplex([
            "1_1".parse::<VertexId>().unwrap(),
            "1_2".parse().unwrap(),
        ])
        .unwrap();
        let inner = vec![
            k1,
            SimplicialComplex::simplex([v(2)]).unwrap(),
            SimplicialComplex::simplex([v(3)]).unwrap(),
            SimplicialComplex::simplex([v(4)]).unwrap(),
        ];
        let fold = Fold::single("1_2".parse().unwrap(), "1_1".parse().unwrap()).unwrap();
        let r = fold_within_relation(&p, &inner, &fold, &leaves, Mode::General).unwrap();
        assert!(r.summands.iter().all(|s| s.triviality.is_trivial()));
    }

    #[test]
    fn fold_across_zhuravleva_example() {
        let k1 = SimplicialComplex::boundary_simplex([
            "1_1".parse::<VertexId>().unwrap(),
            "1_2".parse().unwrap(),
            "1_3".parse().unwrap(),
        ])
        .unwrap();
        let km = SimplicialComplex::simplex([v(4)]).unwrap();
        let map: BTreeMap<VertexId, VertexId> =
            [(v(4), "1_1".parse().unwrap())].into_iter().collect();
        let leaves = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        let r = fold_across_relation(4, &k1, &km, &map, &leaves, Mode::General).unwrap();

        // ambient is ∂Δ⟨∂Δ[1_1,1_2,1_3], 2, 3⟩
        let expected = substitution_with(
            &SimplicialComplex::boundary_simplex([v(1), v(2), v(3)]).unwrap(),
            &[
                k1.clone(),
                SimplicialComplex::simplex([v(2)]).unwrap(),
                SimplicialComplex::simplex([v(3)]).unwrap(),
            ],
            Labeling::Keep,
        )
        .unwrap();
        assert_eq!(r.ambient, expected);
        assert_eq!(r.summands.len(), 3);
        // middle summand survives: (K_1 * K_4) folded = Δ ≠ K_1
        assert!(!r.summands[1].triviality.is_trivial());

        // with K_1 an edge and the point folded onto a cone vertex, the
        // middle summand collapses
        let full = SimplicialComplex::simplex([
            "1_1".parse::<VertexId>().unwrap(),
            "1_2".parse().unwrap(),
        ])
        .unwrap();
        let km2 = SimplicialComplex::simplex([v(3)]).unwrap();
        let map2: BTreeMap<VertexId, VertexId> =
            [(v(3), "1_1".parse().unwrap())].into_iter().collect();
        let leaves3 = default_leaves(3, Some(&[2, 2, 2])).unwrap();
        let r2 = fold_across_relation(3, &full, &km2, &map2, &leaves3, Mode::General).unwrap();
        assert!(r2.summands[1].triviality.is_trivial());
        // the join test itself: folding the joined point lands back on K_1
        let fold2 = Fold::new(map2).unwrap();
        assert_eq!(folded_complex(&full.join(&km2).unwrap(), &fold2).unwrap(), full);

        // a map that is not onto a full subcomplex is rejected
        let not_full = SimplicialComplex::boundary_simplex([
            "1_1".parse::<VertexId>().unwrap(),
            "1_2".parse().unwrap(),
        ])
        .unwrap();
        let km3 = SimplicialComplex::simplex([v(3), v(4)]).unwrap();
        let map3: BTreeMap<VertexId, VertexId> = [
            (v(3), "1_1".parse().unwrap()),
            (v(4), "1_2".parse().unwrap()),
        ]
        .into_iter()
        .collect();
        let leaves4 = default_leaves(4, Some(&[2, 2, 2, 2])).unwrap();
        assert!(
            fold_across_relation(4, &not_full, &km3, &map3, &leaves4, Mode::General).is_err()
        );
    }

    #[test]
    fn relation_json_roundtrip() {
        let p = partition("1|2,3|4");
        let leaves = dj_leaves(4).unwrap();
        let r = relation(&p, &leaves, Mode::Dj).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: Relation = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(json.contains("\"degree\":6"));
    }
}
