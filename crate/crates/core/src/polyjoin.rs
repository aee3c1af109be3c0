//! Polyhedral join products and their substitution/composition
//! specializations.
//!
//! The polyhedral join of simplicial pairs `(S_i, T_i)` over an outer
//! complex `K` glues, for every face `σ` of `K`, the join that uses `S_i`
//! at the slots inside `σ` and `T_i` outside. Substitution takes
//! `T_i = {∅}`, composition takes `S_i` to be the full simplex.

use std::collections::BTreeSet;

use crate::complex::{Face, SimplicialComplex, SimplicialPair};
use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// How child vertices of the inner complexes are named in the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Labeling {
    /// Vertex `v` of the inner complex at outer vertex `i` becomes the path
    /// `i_v`. Inner complexes on a single vertex keep the outer label `i`
    /// when `flatten` is set, so `K⟨∂Δ[1,2,3], •, •⟩` lives on
    /// `{1_1,1_2,1_3, 2, 3}` rather than `{1_1,1_2,1_3, 2_1, 3_1}`.
    PathRelabel { flatten: bool },
    /// Inner vertex sets are kept verbatim; they must be pairwise disjoint.
    Keep,
}

impl Labeling {
    pub fn relabel() -> Self {
        Labeling::PathRelabel { flatten: true }
    }
}

fn child_label(labeling: Labeling, outer: &VertexId, singleton: bool, v: &VertexId) -> VertexId {
    match labeling {
        Labeling::PathRelabel { flatten } if flatten && singleton => outer.clone(),
        Labeling::PathRelabel { .. } => outer.extend(v),
        Labeling::Keep => v.clone(),
    }
}

fn relabel_complex(
    labeling: Labeling,
    outer: &VertexId,
    inner: &SimplicialComplex,
) -> SimplicialComplex {
    let singleton = inner.vertices().len() == 1;
    let map = |v: &VertexId| child_label(labeling, outer, singleton, v);
    SimplicialComplex::new(
        inner.vertices().iter().map(&map),
        inner
            .maximal_faces()
            .iter()
            .map(|f| f.iter().map(&map).collect::<Face>()),
    )
    .expect("relabeling preserves validity")
}

/// The polyhedral join `(S, T)^{*K}` of `pairs` over `K`, built by direct
/// enumeration of the faces of `K`: each face `σ ∈ K` contributes the join
/// of the `S_i` for `i ∈ σ` with the `T_j` for `j ∉ σ`.
///
/// The outer vertices are taken in sorted order; `pairs[t]` sits at the
/// `t`-th outer vertex. Errors when the counts disagree or (with
/// [`Labeling::Keep`]) when inner vertex sets overlap.
pub fn polyhedral_join(
    outer: &SimplicialComplex,
    pairs: &[SimplicialPair],
    labeling: Labeling,
) -> Result<SimplicialComplex> {
    if outer.is_void() {
        return Err(Error::VoidInput {
            op: "polyhedral_join",
        });
    }
    if outer.vertices().len() != pairs.len() {
        return Err(Error::ArityMismatch {
            expected: outer.vertices().len(),
            got: pairs.len(),
        });
    }
    for p in pairs {
        if p.big().is_void() {
            return Err(Error::VoidInput {
                op: "polyhedral_join (big side of a pair)",
            });
        }
    }
    let outer_verts: Vec<VertexId> = outer.vertices().iter().cloned().collect();
    let bigs: Vec<SimplicialComplex> = outer_verts
        .iter()
        .zip(pairs)
        .map(|(o, p)| relabel_complex(labeling, o, p.big()))
        .collect();
    let smalls: Vec<SimplicialComplex> = outer_verts
        .iter()
        .zip(pairs)
        .map(|(o, p)| relabel_complex(labeling, o, p.small()))
        .collect();

    let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
    for b in &bigs {
        for v in b.vertices() {
            if !vertices.insert(v.clone()) {
                return Err(Error::OverlappingVertices { vertex: v.clone() });
            }
        }
    }

    let mut facets: Vec<Face> = Vec::new();
    'outer_face: for sigma in outer.faces() {
        // Iterate the product of maximal-face choices; T ⊆ S makes faces of
        // sub-faces of σ redundant, void slots contribute nothing.
        let mut choices: Vec<Vec<&Face>> = Vec::with_capacity(pairs.len());
        for (t, o) in outer_verts.iter().enumerate() {
            let side = if sigma.contains(o) { &bigs[t] } else { &smalls[t] };
            if side.is_void() {
                continue 'outer_face;
            }
            choices.push(side.maximal_faces().iter().collect());
        }
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut face = Face::new();
            for (t, c) in choices.iter().enumerate() {
                face.extend(c[idx[t]].iter().cloned());
            }
            facets.push(face);
            let mut t = choices.len();
            loop {
                if t == 0 {
                    break;
                }
                t -= 1;
                idx[t] += 1;
                if idx[t] < choices[t].len() {
                    break;
                }
                idx[t] = 0;
                if t == 0 {
                    t = usize::MAX;
                    break;
                }
            }
            if t == usize::MAX {
                break;
            }
        }
    }
    SimplicialComplex::new(vertices, facets)
}

/// Substitution `K⟨S_1,…,S_m⟩`: the polyhedral join with `T_i = {∅}` on
/// each inner vertex set. Child vertices are path-relabeled, singleton
/// inner complexes keep the outer label.
pub fn substitution(
    outer: &SimplicialComplex,
    inner: &[SimplicialComplex],
) -> Result<SimplicialComplex> {
    substitution_with(outer, inner, Labeling::relabel())
}

/// Substitution with explicit labeling; [`Labeling::Keep`] is used where
/// the inner complexes already live on their final, disjoint vertex sets.
pub fn substitution_with(
    outer: &SimplicialComplex,
    inner: &[SimplicialComplex],
    labeling: Labeling,
) -> Result<SimplicialComplex> {
    let pairs = inner
        .iter()
        .map(|s| {
            SimplicialPair::new(
                s.clone(),
                SimplicialComplex::empty(s.vertices().iter().cloned())?,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    polyhedral_join(outer, &pairs, labeling)
}

/// Composition `K(T_1,…,T_m)`: the polyhedral join with `S_i` the full
/// simplex on the vertex set of `T_i`. Inner labels are kept, so the
/// composition of complexes on disjoint pieces of a ground set stays on
/// that ground set.
pub fn composition(
    outer: &SimplicialComplex,
    inner: &[SimplicialComplex],
) -> Result<SimplicialComplex> {
    composition_with(outer, inner, Labeling::Keep)
}

pub fn composition_with(
    outer: &SimplicialComplex,
    inner: &[SimplicialComplex],
    labeling: Labeling,
) -> Result<SimplicialComplex> {
    let pairs = inner
        .iter()
        .map(|t| {
            SimplicialPair::new(
                SimplicialComplex::simplex(t.vertices().iter().cloned())?,
                t.clone(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    polyhedral_join(outer, &pairs, labeling)
}

/// Minimal missing faces of the polyhedral join, by the closed formula:
/// the missing faces of the `S_i` whose slot is a vertex of `K`, together
/// with the disjoint unions over each missing face `κ` of `K` of missing
/// faces of `T_i` that are faces of `S_i`.
///
/// The formula presumes every vertex of `K` is a face; with ghost outer
/// vertices it falls back to the brute-force computation on the enumerated
/// join (logged at debug level).
pub fn mf_polyhedral_join(
    outer: &SimplicialComplex,
    pairs: &[SimplicialPair],
    labeling: Labeling,
) -> Result<BTreeSet<Face>> {
    if outer.is_void() {
        return Err(Error::VoidInput {
            op: "mf_polyhedral_join",
        });
    }
    if outer.vertices().len() != pairs.len() {
        return Err(Error::ArityMismatch {
            expected: outer.vertices().len(),
            got: pairs.len(),
        });
    }
    let outer_verts: Vec<VertexId> = outer.vertices().iter().cloned().collect();
    let every_vertex_is_face = outer_verts
        .iter()
        .all(|v| outer.is_face(&[v.clone()].into_iter().collect()));
    if !every_vertex_is_face || pairs.iter().any(|p| p.small().is_void()) {
        log::debug!("ghost outer vertex or void small side; using brute-force missing faces");
        return polyhedral_join(outer, pairs, labeling)?.minimal_missing_faces();
    }

    let mut out: BTreeSet<Face> = BTreeSet::new();
    let relabeled = |t: usize, k: &SimplicialComplex| relabel_complex(labeling, &outer_verts[t], k);
    for (t, p) in pairs.iter().enumerate() {
        for mf in relabeled(t, p.big()).minimal_missing_faces()? {
            out.insert(mf);
        }
    }
    for kappa in outer.minimal_missing_faces()? {
        // one missing face of T_i per slot of κ, each a face of S_i
        let slots: Vec<usize> = outer_verts
            .iter()
            .enumerate()
            .filter(|(_, v)| kappa.contains(v))
            .map(|(t, _)| t)
            .collect();
        let mut per_slot: Vec<Vec<Face>> = Vec::new();
        for &t in &slots {
            let big = relabeled(t, pairs[t].big());
            let small = relabeled(t, pairs[t].small());
            if small.is_void() {
                per_slot.push(Vec::new());
                continue;
            }
            let candidates: Vec<Face> = small
                .minimal_missing_faces()?
                .into_iter()
                .filter(|tau| big.is_face(tau))
                .collect();
            per_slot.push(candidates);
        }
        if per_slot.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; per_slot.len()];
        loop {
            let mut face = Face::new();
            for (s, c) in per_slot.iter().enumerate() {
                face.extend(c[idx[s]].iter().cloned());
            }
            out.insert(face);
            let mut s = per_slot.len();
            loop {
                if s == 0 {
                    break;
                }
                s -= 1;
                idx[s] += 1;
                if idx[s] < per_slot[s].len() {
                    break;
                }
                idx[s] = 0;
                if s == 0 {
                    s = usize::MAX;
                    break;
                }
            }
            if s == usize::MAX {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{face, v};

    fn bullet(n: u32) -> SimplicialComplex {
        SimplicialComplex::simplex([v(n)]).unwrap()
    }

    #[test]
    fn substitution_of_points_is_identity() {
        let k = SimplicialComplex::new(
            [v(1), v(2), v(3)],
            [face([1, 2]), face([3])],
        )
        .unwrap();
        let inner = vec![bullet(1), bullet(1), bullet(1)];
        assert_eq!(substitution(&k, &inner).unwrap(), k);
    }

    #[test]
    fn composition_with_empties_is_identity() {
        let k = SimplicialComplex::new([v(1), v(2), v(3)], [face([1, 2]), face([3])]).unwrap();
        let inner: Vec<SimplicialComplex> = [1, 2, 3]
            .into_iter()
            .map(|n| SimplicialComplex::empty([v(n)]).unwrap())
            .collect();
        assert_eq!(composition(&k, &inner).unwrap(), k);
    }

    #[test]
    fn substitution_boundary_into_boundary() {
        // ∂Δ[1,2]⟨∂Δ[1,2], •⟩ = three disjoint vertices 1_1, 1_2, 2
        let outer = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let inner = vec![
            SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap(),
            bullet(1),
        ];
        let res = substitution(&outer, &inner).unwrap();
        let expected = SimplicialComplex::new(
            ["1_1".parse().unwrap(), "1_2".parse().unwrap(), v(2)],
            [
                ["1_1".parse().unwrap()].into_iter().collect(),
                ["1_2".parse().unwrap()].into_iter().collect(),
                face([2]),
            ],
        )
        .unwrap();
        assert_eq!(res, expected);
    }

    #[test]
    fn composition_reproduces_identity_complex() {
        // sk^0 Δ^2 (∂Δ[1], ∂Δ[2,3], ∂Δ[4]) has maximal faces
        // {1,2},{1,3},{2,3},{2,4},{3,4}
        let outer = SimplicialComplex::simplex([v(1), v(2), v(3)])
            .unwrap()
            .skeleton(0);
        let inner = vec![
            SimplicialComplex::boundary_simplex([v(1)]).unwrap(),
            SimplicialComplex::boundary_simplex([v(2), v(3)]).unwrap(),
            SimplicialComplex::boundary_simplex([v(4)]).unwrap(),
        ];
        let res = composition(&outer, &inner).unwrap();
        let expected = SimplicialComplex::new(
            [v(1), v(2), v(3), v(4)],
            [face([1, 2]), face([1, 3]), face([2, 3]), face([2, 4]), face([3, 4])],
        )
        .unwrap();
        assert_eq!(res, expected);
    }

    #[test]
    fn composition_with_full_simplices_fills_everything() {
        let outer = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let inner = vec![
            SimplicialComplex::simplex([v(1)]).unwrap(),
            SimplicialComplex::simplex([v(2)]).unwrap(),
        ];
        let res = composition(&outer, &inner).unwrap();
        assert_eq!(res, SimplicialComplex::simplex([v(1), v(2)]).unwrap());
    }

    #[test]
    fn mf_formula_on_substituted_boundary() {
        // MF(∂Δ[1,2]⟨∂Δ[a,b], •⟩) = {{1_a,1_b},{1_a,2},{1_b,2}}
        let outer = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let s1 = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let pairs = vec![
            SimplicialPair::new(
                s1.clone(),
                SimplicialComplex::empty(s1.vertices().iter().cloned()).unwrap(),
            )
            .unwrap(),
            SimplicialPair::new(bullet(1), SimplicialComplex::empty([v(1)]).unwrap()).unwrap(),
        ];
        let got = mf_polyhedral_join(&outer, &pairs, Labeling::relabel()).unwrap();
        let a: VertexId = "1_1".parse().unwrap();
        let b: VertexId = "1_2".parse().unwrap();
        let expected: BTreeSet<Face> = [
            [a.clone(), b.clone()].into_iter().collect::<Face>(),
            [a, v(2)].into_iter().collect(),
            [b, v(2)].into_iter().collect(),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, expected);

        let brute = polyhedral_join(&outer, &pairs, Labeling::relabel())
            .unwrap()
            .minimal_missing_faces()
            .unwrap();
        assert_eq!(got, brute);
    }

    #[test]
    fn monotone_in_the_small_side() {
        let outer = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let small = [
            SimplicialComplex::empty([v(1), v(2)]).unwrap(),
            SimplicialComplex::empty([v(3), v(4)]).unwrap(),
        ];
        let big = [
            SimplicialComplex::new([v(1), v(2)], [face([1]), face([2])]).unwrap(),
            SimplicialComplex::new([v(3), v(4)], [face([3]), face([4])]).unwrap(),
        ];
        let a = composition(&outer, &small).unwrap();
        let b = composition(&outer, &big).unwrap();
        assert!(a.is_subcomplex_of(&b));
    }
}
