use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// A face is a sorted set of vertex labels. The empty set is the empty face.
pub type Face = BTreeSet<VertexId>;

/// Upper bound on vertex-set sizes, so subset enumeration stays tractable.
/// Defaults to 16; `PWH_MAX_VERTICES` overrides it (read once per process).
pub fn vertex_cap() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("PWH_MAX_VERTICES")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(16)
    })
}

/// A finite abstract simplicial complex with an explicit vertex set, stored
/// by its maximal faces.
///
/// Ghost vertices (vertices belonging to no face) are allowed; they are
/// needed for the empty complex on a vertex and for Alexander duality over a
/// fixed ground set. Two degenerate states are distinguished on every vertex
/// set: VOID (no faces at all, `maximal_faces = {}`) and EMPTY (the single
/// face `∅`, `maximal_faces = {∅}`). Every value is canonical on
/// construction: faces are antichain-pruned and everything is kept sorted.
#[derive(Serialize)]
pub struct SimplicialComplex {
    vertices: BTreeSet<VertexId>,
    maximal_faces: BTreeSet<Face>,
    #[serde(skip)]
    face_cache: OnceLock<BTreeSet<Face>>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces` on the given vertex set.
    /// Non-maximal generators are pruned. Passing no faces yields VOID,
    /// passing only `∅` yields EMPTY.
    pub fn new<V, F>(vertices: V, faces: F) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        F: IntoIterator<Item = Face>,
    {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        if vertices.len() > vertex_cap() {
            return Err(Error::VertexCapExceeded {
                count: vertices.len(),
                cap: vertex_cap(),
            });
        }
        let mut generators: Vec<Face> = faces.into_iter().collect();
        for f in &generators {
            if !f.is_subset(&vertices) {
                return Err(Error::FaceOutsideVertexSet {
                    face: f.iter().map(|v| v.to_string()).collect(),
                });
            }
        }
        generators.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut maximal_faces: BTreeSet<Face> = BTreeSet::new();
        for f in generators {
            if !maximal_faces.iter().any(|m| f.is_subset(m)) {
                maximal_faces.insert(f);
            }
        }
        Ok(SimplicialComplex {
            vertices,
            maximal_faces,
            face_cache: OnceLock::new(),
        })
    }

    /// The void complex on `vertices`: no faces, not even `∅`.
    pub fn void<V: IntoIterator<Item = VertexId>>(vertices: V) -> Result<Self> {
        Self::new(vertices, [])
    }

    /// The empty complex on `vertices`: the single face `∅`, every vertex a ghost.
    pub fn empty<V: IntoIterator<Item = VertexId>>(vertices: V) -> Result<Self> {
        Self::new(vertices, [Face::new()])
    }

    /// The full simplex `Δ[J]` on the vertex set `J`. For `J = ∅` this is the
    /// EMPTY complex on no vertices.
    pub fn simplex<V: IntoIterator<Item = VertexId>>(j: V) -> Result<Self> {
        let j: BTreeSet<VertexId> = j.into_iter().collect();
        Self::new(j.clone(), [j])
    }

    /// The boundary complex `∂Δ[J]`: all proper subsets of `J`. For a single
    /// vertex this is the EMPTY complex on that vertex (`∂Δ^0 = ∅`).
    pub fn boundary_simplex<V: IntoIterator<Item = VertexId>>(j: V) -> Result<Self> {
        let j: BTreeSet<VertexId> = j.into_iter().collect();
        if j.is_empty() {
            return Err(Error::BoundaryOfVoid);
        }
        if j.len() == 1 {
            return Self::empty(j);
        }
        let facets = j.iter().map(|drop| {
            j.iter()
                .filter(|v| *v != drop)
                .cloned()
                .collect::<Face>()
        });
        Self::new(j.clone(), facets)
    }

    /// Rebuilds the unique complex on `vertices` whose minimal missing faces
    /// are exactly `mfs`: the faces are the subsets containing none of them.
    pub fn from_minimal_missing_faces<V, F>(vertices: V, mfs: F) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        F: IntoIterator<Item = Face>,
    {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        let mfs: Vec<Face> = mfs.into_iter().collect();
        let verts: Vec<VertexId> = vertices.iter().cloned().collect();
        if verts.len() > vertex_cap() {
            return Err(Error::VertexCapExceeded {
                count: verts.len(),
                cap: vertex_cap(),
            });
        }
        if mfs.iter().any(|m| m.is_empty()) {
            return Self::void(vertices);
        }
        let mf_masks: Vec<u64> = mfs.iter().map(|m| face_to_mask(m, &verts)).collect();
        let n = verts.len();
        let mut maximal: Vec<u64> = Vec::new();
        // Scan subsets largest-first so the antichain check stays local.
        let mut by_size: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
        for mask in 0..(1u64 << n) {
            by_size[mask.count_ones() as usize].push(mask);
        }
        for size in (0..=n).rev() {
            for &mask in &by_size[size] {
                if mf_masks.iter().any(|&m| m & mask == m) {
                    continue;
                }
                if !maximal.iter().any(|&m| mask & m == mask) {
                    maximal.push(mask);
                }
            }
        }
        Self::new(
            vertices,
            maximal.into_iter().map(|m| mask_to_face(m, &verts)),
        )
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn maximal_faces(&self) -> &BTreeSet<Face> {
        &self.maximal_faces
    }

    pub fn is_void(&self) -> bool {
        self.maximal_faces.is_empty()
    }

    /// True for the EMPTY state: `∅` is the only face.
    pub fn is_empty_complex(&self) -> bool {
        self.maximal_faces.len() == 1 && self.maximal_faces.iter().next().unwrap().is_empty()
    }

    /// Dimension of the complex, `None` for VOID (EMPTY has dimension -1).
    pub fn dim(&self) -> Option<i64> {
        self.maximal_faces
            .iter()
            .map(|f| f.len() as i64 - 1)
            .max()
    }

    /// Membership test; `∅` is a face of every non-void complex.
    pub fn is_face(&self, face: &Face) -> bool {
        self.maximal_faces.iter().any(|m| face.is_subset(m))
    }

    /// The full face set: downward closure of the maximal faces, memoized.
    /// Contains `∅` exactly when the complex is non-void.
    pub fn faces(&self) -> &BTreeSet<Face> {
        self.face_cache.get_or_init(|| {
            let mut all = BTreeSet::new();
            for m in &self.maximal_faces {
                let verts: Vec<&VertexId> = m.iter().collect();
                for mask in 0..(1u64 << verts.len()) {
                    let face: Face = verts
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, v)| (*v).clone())
                        .collect();
                    all.insert(face);
                }
            }
            all
        })
    }

    /// All inclusion-minimal subsets of the vertex set that are not faces.
    /// Ghost vertices appear as singleton missing faces. Errors on VOID.
    pub fn minimal_missing_faces(&self) -> Result<BTreeSet<Face>> {
        if self.is_void() {
            return Err(Error::VoidInput {
                op: "minimal_missing_faces",
            });
        }
        let verts: Vec<VertexId> = self.vertices.iter().cloned().collect();
        let max_masks: Vec<u64> = self
            .maximal_faces
            .iter()
            .map(|f| face_to_mask(f, &verts))
            .collect();
        let n = verts.len();
        let is_face = |mask: u64| max_masks.iter().any(|&m| mask & m == mask);
        let mut out = BTreeSet::new();
        for mask in 1u64..(1 << n) {
            if is_face(mask) {
                continue;
            }
            let mut minimal = true;
            let mut bits = mask;
            while bits != 0 {
                let low = bits & bits.wrapping_neg();
                if !is_face(mask ^ low) {
                    minimal = false;
                    break;
                }
                bits ^= low;
            }
            if minimal {
                out.insert(mask_to_face(mask, &verts));
            }
        }
        Ok(out)
    }

    /// The Alexander dual on the same ground set: faces are complements of
    /// non-faces; maximal faces are complements of the minimal missing
    /// faces. The dual of the full simplex is VOID. Errors on VOID input.
    pub fn alexander_dual(&self) -> Result<Self> {
        let mfs = self.minimal_missing_faces()?;
        let facets = mfs.into_iter().map(|m| {
            self.vertices
                .iter()
                .filter(|v| !m.contains(*v))
                .cloned()
                .collect::<Face>()
        });
        Self::new(self.vertices.clone(), facets)
    }

    /// All faces of dimension at most `d`, on the same vertex set. `d = -1`
    /// keeps only `∅` (EMPTY for non-void input); VOID stays VOID.
    pub fn skeleton(&self, d: i64) -> Self {
        let keep = |f: &Face| f.len() as i64 <= d + 1;
        let mut facets: BTreeSet<Face> = BTreeSet::new();
        for f in self.faces() {
            if keep(f) {
                facets.insert(f.clone());
            }
        }
        Self::new(self.vertices.clone(), facets)
            .expect("skeleton of a valid complex is valid")
    }

    /// The join `K1 * K2` on the disjoint union of the vertex sets; faces
    /// are unions of faces. Joining with VOID gives VOID. Errors when the
    /// vertex sets overlap.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if let Some(v) = self.vertices.intersection(&other.vertices).next() {
            return Err(Error::OverlappingVertices { vertex: v.clone() });
        }
        let vertices: BTreeSet<VertexId> =
            self.vertices.union(&other.vertices).cloned().collect();
        let mut facets = Vec::new();
        for a in &self.maximal_faces {
            for b in &other.maximal_faces {
                facets.push(a.union(b).cloned().collect::<Face>());
            }
        }
        Self::new(vertices, facets)
    }

    /// Union of face sets on the union of the vertex sets.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let vertices: BTreeSet<VertexId> =
            self.vertices.union(&other.vertices).cloned().collect();
        let facets = self
            .maximal_faces
            .iter()
            .chain(other.maximal_faces.iter())
            .cloned();
        Self::new(vertices, facets)
    }

    /// True when every face of `self` is a face of `other` (vertex sets may
    /// differ; `self`'s must be contained in `other`'s).
    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.maximal_faces.iter().all(|f| other.is_face(f))
    }

    /// The full subcomplex `K|_W`: faces of `K` contained in `W`,
    /// equivalently `{σ ∩ W : σ ∈ K}`.
    pub fn full_subcomplex(&self, w: &BTreeSet<VertexId>) -> Result<Self> {
        if let Some(v) = w.difference(&self.vertices).next() {
            return Err(Error::UnknownVertex { vertex: v.clone() });
        }
        let facets = self
            .maximal_faces
            .iter()
            .map(|f| f.intersection(w).cloned().collect::<Face>());
        Self::new(w.clone(), facets)
    }

    /// Searches for a vertex bijection carrying faces onto faces, returning
    /// a witness when one exists. Backtracking pruned by per-vertex facet
    /// signatures; intended for complexes on at most ~12 vertices.
    pub fn is_isomorphic(&self, other: &Self) -> Option<BTreeMap<VertexId, VertexId>> {
        if self.vertices.len() != other.vertices.len()
            || self.maximal_faces.len() != other.maximal_faces.len()
        {
            return None;
        }
        let sizes = |k: &Self| {
            let mut s: Vec<usize> = k.maximal_faces.iter().map(|f| f.len()).collect();
            s.sort_unstable();
            s
        };
        if sizes(self) != sizes(other) {
            return None;
        }
        let sig = |k: &Self, v: &VertexId| {
            let mut s: Vec<usize> = k
                .maximal_faces
                .iter()
                .filter(|f| f.contains(v))
                .map(|f| f.len())
                .collect();
            s.sort_unstable();
            s
        };
        let left: Vec<VertexId> = self.vertices.iter().cloned().collect();
        let right: Vec<VertexId> = other.vertices.iter().cloned().collect();
        let left_sigs: Vec<_> = left.iter().map(|v| sig(self, v)).collect();
        let right_sigs: Vec<_> = right.iter().map(|v| sig(other, v)).collect();

        fn extend(
            pos: usize,
            left: &[VertexId],
            right: &[VertexId],
            left_sigs: &[Vec<usize>],
            right_sigs: &[Vec<usize>],
            used: &mut Vec<bool>,
            map: &mut BTreeMap<VertexId, VertexId>,
            a: &SimplicialComplex,
            b: &SimplicialComplex,
        ) -> bool {
            if pos == left.len() {
                let image: BTreeSet<Face> = a
                    .maximal_faces
                    .iter()
                    .map(|f| f.iter().map(|v| map[v].clone()).collect())
                    .collect();
                return image == b.maximal_faces;
            }
            for j in 0..right.len() {
                if used[j] || left_sigs[pos] != right_sigs[j] {
                    continue;
                }
                map.insert(left[pos].clone(), right[j].clone());
                used[j] = true;
                // Every fully-mapped maximal face must land on a face.
                let assigned: BTreeSet<&VertexId> = map.keys().collect();
                let ok = a.maximal_faces.iter().all(|f| {
                    if f.iter().all(|v| assigned.contains(v)) {
                        let img: Face = f.iter().map(|v| map[v].clone()).collect();
                        b.is_face(&img)
                    } else {
                        true
                    }
                });
                if ok
                    && extend(
                        pos + 1,
                        left,
                        right,
                        left_sigs,
                        right_sigs,
                        used,
                        map,
                        a,
                        b,
                    )
                {
                    return true;
                }
                used[j] = false;
                map.remove(&left[pos]);
            }
            false
        }

        let mut used = vec![false; right.len()];
        let mut map = BTreeMap::new();
        if extend(
            0,
            &left,
            &right,
            &left_sigs,
            &right_sigs,
            &mut used,
            &mut map,
            self,
            other,
        ) {
            Some(map)
        } else {
            None
        }
    }

    /// Rebuilds the value through the canonical constructor. Idempotent by
    /// construction; exposed so canonical-form invariants can be asserted.
    pub fn canonicalize(&self) -> Self {
        Self::new(self.vertices.clone(), self.maximal_faces.clone())
            .expect("canonical value stays valid")
    }
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        SimplicialComplex {
            vertices: self.vertices.clone(),
            maximal_faces: self.maximal_faces.clone(),
            face_cache: OnceLock::new(),
        }
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.maximal_faces == other.maximal_faces
    }
}

impl Eq for SimplicialComplex {}

impl PartialOrd for SimplicialComplex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SimplicialComplex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .cmp(&other.vertices)
            .then_with(|| self.maximal_faces.cmp(&other.maximal_faces))
    }
}

impl Hash for SimplicialComplex {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
        self.maximal_faces.hash(state);
    }
}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SimplicialComplex{{vertices: {:?}, maximal_faces: {:?}}}",
            self.vertices, self.maximal_faces)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<VertexId>,
            maximal_faces: Vec<Vec<VertexId>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        SimplicialComplex::new(
            raw.vertices,
            raw.maximal_faces
                .into_iter()
                .map(|f| f.into_iter().collect::<Face>()),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// A simplicial pair `(S, T)`: two complexes on the same vertex set with
/// `T` a subcomplex of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialPair {
    big: SimplicialComplex,
    small: SimplicialComplex,
}

impl SimplicialPair {
    pub fn new(big: SimplicialComplex, small: SimplicialComplex) -> Result<Self> {
        if big.vertices() != small.vertices() {
            return Err(Error::InvalidPair {
                reason: "big and small must share one vertex set".into(),
            });
        }
        if !small.is_subcomplex_of(&big) {
            return Err(Error::InvalidPair {
                reason: "small is not a subcomplex of big".into(),
            });
        }
        Ok(SimplicialPair { big, small })
    }

    pub fn big(&self) -> &SimplicialComplex {
        &self.big
    }

    pub fn small(&self) -> &SimplicialComplex {
        &self.small
    }
}

impl<'de> Deserialize<'de> for SimplicialPair {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            big: SimplicialComplex,
            small: SimplicialComplex,
        }
        let raw = Raw::deserialize(deserializer)?;
        SimplicialPair::new(raw.big, raw.small).map_err(serde::de::Error::custom)
    }
}

fn face_to_mask(face: &Face, verts: &[VertexId]) -> u64 {
    let mut mask = 0u64;
    for v in face {
        let i = verts.binary_search(v).expect("face vertex in vertex list");
        mask |= 1 << i;
    }
    mask
}

fn mask_to_face(mask: u64, verts: &[VertexId]) -> Face {
    verts
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, v)| v.clone())
        .collect()
}

/// Convenience constructors for tests and fixtures.
pub fn v(n: u32) -> VertexId {
    VertexId::from_index(n)
}

pub fn face<I: IntoIterator<Item = u32>>(it: I) -> Face {
    it.into_iter().map(v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(vertices: &[u32], faces: &[&[u32]]) -> SimplicialComplex {
        SimplicialComplex::new(
            vertices.iter().copied().map(v),
            faces.iter().map(|f| face(f.iter().copied())),
        )
        .unwrap()
    }

    #[test]
    fn simplex_and_boundary() {
        let s = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        assert_eq!(s.maximal_faces().len(), 1);
        assert!(s.is_face(&face([1, 2])));

        let e = SimplicialComplex::simplex(std::iter::empty::<VertexId>()).unwrap();
        assert!(e.is_empty_complex());
        assert!(e.vertices().is_empty());

        let pt = SimplicialComplex::simplex([v(1)]).unwrap();
        assert_eq!(pt.dim(), Some(0));

        let b = SimplicialComplex::boundary_simplex([v(1), v(2), v(3)]).unwrap();
        let expected: BTreeSet<Face> =
            [face([1, 2]), face([1, 3]), face([2, 3])].into_iter().collect();
        assert_eq!(b.maximal_faces(), &expected);

        let b1 = SimplicialComplex::boundary_simplex([v(1)]).unwrap();
        assert!(b1.is_empty_complex());
        assert_eq!(b1.vertices().len(), 1);

        let b2 = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        assert_eq!(b2.maximal_faces().len(), 2);
        assert_eq!(b2.dim(), Some(0));

        assert_eq!(
            SimplicialComplex::boundary_simplex(std::iter::empty::<VertexId>()),
            Err(Error::BoundaryOfVoid)
        );
    }

    #[test]
    fn faces_closure_and_membership() {
        let b = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let fs: Vec<Face> = b.faces().iter().cloned().collect();
        assert_eq!(fs, vec![face([]), face([1]), face([2])]);

        let void = SimplicialComplex::void([v(1), v(2)]).unwrap();
        assert!(void.faces().is_empty());
        assert!(!void.is_face(&face([])));

        let s = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        assert_eq!(s.faces().len(), 4);
    }

    #[test]
    fn skeleton_examples() {
        let d3 = SimplicialComplex::simplex([v(1), v(2), v(3)]).unwrap();
        let sk0 = d3.skeleton(0);
        assert_eq!(sk0.maximal_faces().len(), 3);
        assert_eq!(sk0.dim(), Some(0));

        let d4 = SimplicialComplex::simplex([v(1), v(2), v(3), v(4)]).unwrap();
        let sk1 = d4.skeleton(1);
        assert_eq!(sk1.maximal_faces().len(), 6);

        assert!(d3.skeleton(-1).is_empty_complex());
        assert_eq!(d3.skeleton(-1).vertices().len(), 3);
    }

    #[test]
    fn minimal_missing_faces_examples() {
        let b = SimplicialComplex::boundary_simplex([v(1), v(2), v(3)]).unwrap();
        let mfs = b.minimal_missing_faces().unwrap();
        assert_eq!(mfs, [face([1, 2, 3])].into_iter().collect());

        // identity complex of {{1},{2,3},{4}}
        let k = complex(&[1, 2, 3, 4], &[&[1, 2], &[1, 3], &[2, 3], &[2, 4], &[3, 4]]);
        let mfs = k.minimal_missing_faces().unwrap();
        let expected: BTreeSet<Face> =
            [face([1, 4]), face([1, 2, 3]), face([2, 3, 4])].into_iter().collect();
        assert_eq!(mfs, expected);

        let void = SimplicialComplex::void([v(1)]).unwrap();
        assert!(void.minimal_missing_faces().is_err());

        // ghost vertex shows up as a singleton missing face
        let ghost = complex(&[1, 2], &[&[1]]);
        assert_eq!(
            ghost.minimal_missing_faces().unwrap(),
            [face([2])].into_iter().collect()
        );
    }

    #[test]
    fn alexander_dual_examples() {
        // m disjoint points dualize to sk^{m-3} of the simplex
        let pts = complex(&[1, 2, 3, 4], &[&[1], &[2], &[3], &[4]]);
        let dual = pts.alexander_dual().unwrap();
        let sk1 = SimplicialComplex::simplex([v(1), v(2), v(3), v(4)])
            .unwrap()
            .skeleton(1);
        assert_eq!(dual, sk1);

        let full = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        assert!(full.alexander_dual().unwrap().is_void());

        let k = complex(&[1, 2, 3], &[&[1, 2], &[3]]);
        assert_eq!(k.alexander_dual().unwrap().alexander_dual().unwrap(), k);
    }

    #[test]
    fn join_examples() {
        let p1 = SimplicialComplex::simplex([v(1)]).unwrap();
        let p2 = SimplicialComplex::simplex([v(2)]).unwrap();
        let edge = p1.join(&p2).unwrap();
        assert_eq!(edge, SimplicialComplex::simplex([v(1), v(2)]).unwrap());

        let b = SimplicialComplex::boundary_simplex([v(2), v(3)]).unwrap();
        let joined = p1.join(&b).unwrap();
        assert_eq!(joined, complex(&[1, 2, 3], &[&[1, 2], &[1, 3]]));

        let void = SimplicialComplex::void([v(9)]).unwrap();
        assert!(p1.join(&void).unwrap().is_void());

        assert!(p1.join(&p1).is_err());
    }

    #[test]
    fn union_and_subcomplex() {
        let a = complex(&[1, 2], &[&[1, 2]]);
        let b = complex(&[2, 3], &[&[2, 3]]);
        let u = a.union(&b).unwrap();
        assert_eq!(u, complex(&[1, 2, 3], &[&[1, 2], &[2, 3]]));

        let bd = SimplicialComplex::boundary_simplex([v(1), v(2)]).unwrap();
        let full = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        assert!(bd.is_subcomplex_of(&full));
        assert!(!full.is_subcomplex_of(&bd));
    }

    #[test]
    fn full_subcomplex_examples() {
        let k = complex(&[1, 2, 3], &[&[1, 2], &[2, 3]]);
        let w: BTreeSet<VertexId> = [v(1)].into_iter().collect();
        let restricted = k.full_subcomplex(&w).unwrap();
        assert_eq!(restricted, SimplicialComplex::simplex([v(1)]).unwrap());

        let w13: BTreeSet<VertexId> = [v(1), v(3)].into_iter().collect();
        let r13 = k.full_subcomplex(&w13).unwrap();
        assert_eq!(r13, complex(&[1, 3], &[&[1], &[3]]));

        // {σ ∩ W} and {σ ∈ K : σ ⊆ W} agree
        let direct: BTreeSet<Face> = k
            .faces()
            .iter()
            .filter(|f| f.is_subset(&w13))
            .cloned()
            .collect();
        assert_eq!(r13.faces(), &direct);
    }

    #[test]
    fn isomorphism_examples() {
        let a = SimplicialComplex::boundary_simplex([v(1), v(2), v(3)]).unwrap();
        let b = SimplicialComplex::boundary_simplex([v(7), v(8), v(9)]).unwrap();
        let witness = a.is_isomorphic(&b).unwrap();
        for m in a.maximal_faces() {
            let img: Face = m.iter().map(|x| witness[x].clone()).collect();
            assert!(b.is_face(&img));
        }

        let two_pts = complex(&[1, 2], &[&[1], &[2]]);
        let edge = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        assert!(two_pts.is_isomorphic(&edge).is_none());
    }

    #[test]
    fn rebuild_from_mf_roundtrip() {
        let k = complex(&[1, 2, 3, 4], &[&[1, 2], &[1, 3], &[2, 3], &[2, 4], &[3, 4]]);
        let rebuilt = SimplicialComplex::from_minimal_missing_faces(
            k.vertices().clone(),
            k.minimal_missing_faces().unwrap(),
        )
        .unwrap();
        assert_eq!(rebuilt, k);
    }

    #[test]
    fn vertex_cap_is_enforced() {
        let verts: Vec<VertexId> = (1..=17).map(v).collect();
        let err = SimplicialComplex::void(verts).unwrap_err();
        assert!(matches!(err, Error::VertexCapExceeded { count: 17, .. }));
    }

    #[test]
    fn serde_roundtrip_and_schema() {
        let k = complex(&[1, 2], &[&[1, 2]]);
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(json, r#"{"vertices":["1","2"],"maximal_faces":[["1","2"]]}"#);
        let back: SimplicialComplex = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k);

        let void: SimplicialComplex =
            serde_json::from_str(r#"{"vertices":["1"],"maximal_faces":[]}"#).unwrap();
        assert!(void.is_void());
        let empty: SimplicialComplex =
            serde_json::from_str(r#"{"vertices":["1"],"maximal_faces":[[]]}"#).unwrap();
        assert!(empty.is_empty_complex());

        assert!(serde_json::from_str::<SimplicialComplex>(
            r#"{"vertices":["1"],"maximal_faces":[["2"]]}"#
        )
        .is_err());
    }
}
