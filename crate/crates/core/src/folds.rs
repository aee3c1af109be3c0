//! Vertex folds of simplicial complexes and the maximal unfolding complex.
//!
//! A fold is a surjection `ψ: I → J` of disjoint vertex subsets. It extends
//! to the whole vertex set by the identity, and the folded complex is the
//! image of this extension. `L_ψ` is the largest complex with the same fold
//! image, obtained by thickening each target vertex by its preimage block.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// A vertex-identification map `ψ: I → J` with `I`, `J` disjoint and
/// non-empty and `ψ` surjective onto `J`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Fold {
    psi: BTreeMap<VertexId, VertexId>,
}

impl Fold {
    pub fn new(psi: BTreeMap<VertexId, VertexId>) -> Result<Self> {
        if psi.is_empty() {
            return Err(Error::InvalidFold {
                reason: "fold must identify at least one vertex".into(),
            });
        }
        let sources: BTreeSet<&VertexId> = psi.keys().collect();
        for target in psi.values() {
            if sources.contains(target) {
                return Err(Error::InvalidFold {
                    reason: format!("source and target sets overlap at {target}"),
                });
            }
        }
        Ok(Fold { psi })
    }

    /// Single identification `i ↦ j`.
    pub fn single(i: VertexId, j: VertexId) -> Result<Self> {
        Self::new([(i, j)].into_iter().collect())
    }

    /// Parses the CLI map syntax: semicolon-separated `i->j` entries.
    pub fn parse(s: &str) -> Result<Self> {
        let mut psi = BTreeMap::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (from, to) = part
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `i->j`, got `{part}`")))?;
            let from: VertexId = from.trim().parse()?;
            let to: VertexId = to.trim().parse()?;
            if psi.insert(from.clone(), to).is_some() {
                return Err(Error::InvalidFold {
                    reason: format!("vertex {from} is folded twice"),
                });
            }
        }
        Self::new(psi)
    }

    /// The identified vertices `I` (map sources).
    pub fn sources(&self) -> BTreeSet<VertexId> {
        self.psi.keys().cloned().collect()
    }

    /// The target vertices `J` (map image).
    pub fn targets(&self) -> BTreeSet<VertexId> {
        self.psi.values().cloned().collect()
    }

    pub fn map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.psi
    }

    /// The preimage block `I_j = ψ⁻¹(j)`.
    pub fn block(&self, j: &VertexId) -> BTreeSet<VertexId> {
        self.psi
            .iter()
            .filter(|(_, t)| *t == j)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// `ψ̄(v)`: `ψ` on `I`, identity elsewhere.
    pub fn apply_vertex(&self, v: &VertexId) -> VertexId {
        self.psi.get(v).cloned().unwrap_or_else(|| v.clone())
    }

    /// Image of a face under `ψ̄`, as a set.
    pub fn apply_face(&self, face: &Face) -> Face {
        face.iter().map(|v| self.apply_vertex(v)).collect()
    }

    /// Checks the fold lives inside the given vertex set.
    pub fn validate_on(&self, vertices: &BTreeSet<VertexId>) -> Result<()> {
        for (s, t) in &self.psi {
            if !vertices.contains(s) {
                return Err(Error::InvalidFold {
                    reason: format!("folded vertex {s} is not a vertex of the complex"),
                });
            }
            if !vertices.contains(t) {
                return Err(Error::InvalidFold {
                    reason: format!("fold target {t} is not a vertex of the complex"),
                });
            }
        }
        Ok(())
    }

    /// Restriction of the fold to the sources inside `vertices`, if any.
    pub fn restrict_to(&self, vertices: &BTreeSet<VertexId>) -> Option<Fold> {
        let psi: BTreeMap<VertexId, VertexId> = self
            .psi
            .iter()
            .filter(|(s, _)| vertices.contains(*s))
            .map(|(s, t)| (s.clone(), t.clone()))
            .collect();
        if psi.is_empty() {
            None
        } else {
            Some(Fold { psi })
        }
    }
}

impl fmt::Display for Fold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, t) in &self.psi {
            if !first {
                write!(f, ";")?;
            }
            write!(f, "{s}->{t}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Fold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fold({self})")
    }
}

impl<'de> Deserialize<'de> for Fold {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let psi = BTreeMap::<VertexId, VertexId>::deserialize(deserializer)?;
        Fold::new(psi).map_err(serde::de::Error::custom)
    }
}

/// The folded complex: the image `ψ̄(K)` on the vertex set `K` minus the
/// identified vertices. Target vertices keep their original labels.
///
/// In debug builds the image is checked against the one-replacement
/// characterization, applied one target block at a time.
pub fn folded_complex(k: &SimplicialComplex, fold: &Fold) -> Result<SimplicialComplex> {
    fold.validate_on(k.vertices())?;
    let sources = fold.sources();
    let vertices: BTreeSet<VertexId> = k
        .vertices()
        .iter()
        .filter(|v| !sources.contains(*v))
        .cloned()
        .collect();
    let image = SimplicialComplex::new(
        vertices,
        k.maximal_faces().iter().map(|f| fold.apply_face(f)),
    )?;
    // The redundant route costs 2^n per call; keep the inline assertion to
    // sizes where exhaustive tests live and check larger cases in the
    // verification suite.
    debug_assert!(
        k.vertices().len() > 5 || image == folded_by_characterization(k, fold),
        "fold image disagrees with the replacement characterization"
    );
    Ok(image)
}

/// The characterization route: for a single target `j`, a subset `σ` of the
/// reduced vertex set is a face iff `σ ∈ K` or `(σ∖{j}) ⊔ {i} ∈ K` for some
/// identified `i ↦ j`. General folds are handled one target block at a
/// time; one-shot single replacement would miss faces mixing several
/// blocks.
pub fn folded_by_characterization(k: &SimplicialComplex, fold: &Fold) -> SimplicialComplex {
    let mut current = k.clone();
    for j in fold.targets() {
        let block = fold.block(&j);
        let vertices: Vec<VertexId> = current
            .vertices()
            .iter()
            .filter(|v| !block.contains(*v))
            .cloned()
            .collect();
        let mut facets: Vec<Face> = Vec::new();
        for mask in 0..(1u64 << vertices.len()) {
            let sigma: Face = vertices
                .iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            let mut keep = current.is_face(&sigma);
            if !keep && sigma.contains(&j) {
                let mut reduced = sigma.clone();
                reduced.remove(&j);
                keep = block.iter().any(|i| {
                    let mut candidate = reduced.clone();
                    candidate.insert(i.clone());
                    current.is_face(&candidate)
                });
            }
            if keep {
                facets.push(sigma);
            }
        }
        current = SimplicialComplex::new(vertices.into_iter().collect::<BTreeSet<_>>(), facets)
            .expect("fold image is valid");
    }
    current
}

/// The maximal unfolding complex `L_ψ`, on the original vertex set: the
/// largest complex whose fold under `ψ` lands inside the fold of `K`.
/// Equivalently the substitution of the full simplex on `{j} ⊔ ψ⁻¹(j)` at
/// every target vertex of the folded complex, which makes a subset a face
/// exactly when its `ψ̄`-image is a face of the folded complex.
pub fn max_folding_complex(k: &SimplicialComplex, fold: &Fold) -> Result<SimplicialComplex> {
    let folded = folded_complex(k, fold)?;
    let facets = folded.maximal_faces().iter().map(|f| {
        let mut big: Face = f.clone();
        for v in f {
            big.extend(fold.block(v));
        }
        big
    });
    SimplicialComplex::new(k.vertices().clone(), facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{face, v};

    fn figure1_complex() -> SimplicialComplex {
        SimplicialComplex::new(
            [v(1), v(2), v(3), v(4)],
            [face([1, 2]), face([1, 3]), face([2, 3]), face([2, 4]), face([3, 4])],
        )
        .unwrap()
    }

    #[test]
    fn apply_fold_face_examples() {
        let fold = Fold::single(v(4), v(1)).unwrap();
        assert_eq!(fold.apply_face(&face([2, 4])), face([1, 2]));
        assert_eq!(fold.apply_face(&face([2, 3])), face([2, 3]));
        assert_eq!(fold.apply_face(&face([1, 4])), face([1]));
    }

    #[test]
    fn fold_of_figure1_is_boundary_triangle() {
        let k = figure1_complex();
        let fold = Fold::single(v(4), v(1)).unwrap();
        let folded = folded_complex(&k, &fold).unwrap();
        assert_eq!(
            folded,
            SimplicialComplex::boundary_simplex([v(1), v(2), v(3)]).unwrap()
        );
    }

    #[test]
    fn fold_of_edge_is_point() {
        let k = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        let fold = Fold::single(v(2), v(1)).unwrap();
        assert_eq!(
            folded_complex(&k, &fold).unwrap(),
            SimplicialComplex::simplex([v(1)]).unwrap()
        );
    }

    #[test]
    fn multi_source_fold_equals_iterated_single_folds() {
        let k = SimplicialComplex::new(
            [v(1), v(2), v(3), v(4)],
            [face([2, 3]), face([3, 4]), face([1, 4]), face([1, 2])],
        )
        .unwrap();
        let fold = Fold::new([(v(3), v(1)), (v(4), v(1))].into_iter().collect()).unwrap();
        let one_shot = folded_complex(&k, &fold).unwrap();
        let step1 = folded_complex(&k, &Fold::single(v(3), v(1)).unwrap()).unwrap();
        let step2 = folded_complex(&step1, &Fold::single(v(4), v(1)).unwrap()).unwrap();
        assert_eq!(one_shot, step2);
    }

    #[test]
    fn multi_target_fold_collapses_mixed_faces() {
        // face {3,4} with 3→1, 4→2 must land on {1,2}
        let k = SimplicialComplex::new([v(1), v(2), v(3), v(4)], [face([3, 4])]).unwrap();
        let fold = Fold::new([(v(3), v(1)), (v(4), v(2))].into_iter().collect()).unwrap();
        let folded = folded_complex(&k, &fold).unwrap();
        assert!(folded.is_face(&face([1, 2])));
    }

    #[test]
    fn lpsi_of_figure1() {
        let k = figure1_complex();
        let fold = Fold::single(v(4), v(1)).unwrap();
        let lpsi = max_folding_complex(&k, &fold).unwrap();
        let expected = SimplicialComplex::new(
            [v(1), v(2), v(3), v(4)],
            [face([1, 2, 4]), face([1, 3, 4]), face([2, 3])],
        )
        .unwrap();
        assert_eq!(lpsi, expected);
        assert!(k.is_subcomplex_of(&lpsi));
        assert_eq!(
            folded_complex(&lpsi, &fold).unwrap(),
            folded_complex(&k, &fold).unwrap()
        );
    }

    #[test]
    fn lpsi_of_full_simplex_is_full() {
        let k = SimplicialComplex::simplex([v(1), v(2), v(3)]).unwrap();
        let fold = Fold::single(v(3), v(2)).unwrap();
        assert_eq!(max_folding_complex(&k, &fold).unwrap(), k);
    }

    #[test]
    fn single_fold_symmetry() {
        let k = figure1_complex();
        let a = folded_complex(&k, &Fold::single(v(2), v(3)).unwrap()).unwrap();
        let b = folded_complex(&k, &Fold::single(v(3), v(2)).unwrap()).unwrap();
        assert!(a.is_isomorphic(&b).is_some());
    }

    #[test]
    fn invalid_folds_are_rejected() {
        assert!(Fold::single(v(1), v(1)).is_err());
        assert!(Fold::new(BTreeMap::new()).is_err());
        let k = SimplicialComplex::simplex([v(1), v(2)]).unwrap();
        let fold = Fold::single(v(5), v(1)).unwrap();
        assert!(folded_complex(&k, &fold).is_err());
    }

    #[test]
    fn parse_map_syntax() {
        let fold = Fold::parse("4->1;5->2").unwrap();
        assert_eq!(fold.apply_vertex(&v(4)), v(1));
        assert_eq!(fold.apply_vertex(&v(5)), v(2));
        assert!(Fold::parse("4->4").is_err());
        assert!(Fold::parse("nope").is_err());
    }
}
