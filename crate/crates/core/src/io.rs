//! Plain-text formats: a small line-based DSL for complexes and DOT export
//! of the 1-skeleton.

use std::collections::BTreeSet;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::vertex::VertexId;

/// Renders the text DSL:
///
/// ```text
/// vertices: 1 2 3 4
/// faces: {1 2} {2 3}
/// ```
///
/// The VOID complex has an empty face list, the EMPTY complex is `{}`.
pub fn to_text(k: &SimplicialComplex) -> String {
    let vertices = k
        .vertices()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let faces = k
        .maximal_faces()
        .iter()
        .map(|f| {
            let inner = f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            format!("{{{inner}}}")
        })
        .collect::<Vec<_>>()
        .join(" ");
    format!("vertices: {vertices}\nfaces: {faces}\n")
}

/// Parses the text DSL produced by [`to_text`].
pub fn from_text(s: &str) -> Result<SimplicialComplex> {
    let mut vertices: Option<Vec<VertexId>> = None;
    let mut faces: Option<Vec<Face>> = None;
    for line in s.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            let vs = rest
                .split_whitespace()
                .map(|t| t.parse())
                .collect::<Result<Vec<VertexId>>>()?;
            vertices = Some(vs);
        } else if let Some(rest) = line.strip_prefix("faces:") {
            faces = Some(parse_face_list(rest)?);
        } else {
            return Err(Error::Parse(format!("unexpected line `{line}`")));
        }
    }
    let vertices = vertices.ok_or_else(|| Error::Parse("missing `vertices:` line".into()))?;
    let faces = faces.ok_or_else(|| Error::Parse("missing `faces:` line".into()))?;
    SimplicialComplex::new(vertices, faces)
}

fn parse_face_list(s: &str) -> Result<Vec<Face>> {
    let mut faces = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        if !rest.starts_with('{') {
            return Err(Error::Parse(format!("expected `{{` in face list at `{rest}`")));
        }
        let end = rest
            .find('}')
            .ok_or_else(|| Error::Parse("unterminated face".into()))?;
        let inner = &rest[1..end];
        let face = inner
            .split_whitespace()
            .map(|t| t.parse())
            .collect::<Result<Face>>()?;
        faces.push(face);
        rest = rest[end + 1..].trim_start();
    }
    Ok(faces)
}

/// DOT export of the 1-skeleton. Vertices become nodes (ghosts included),
/// edges become undirected graph edges, and each 2-face is listed as a
/// filled-triangle annotation so viewers can shade them.
pub fn to_dot(k: &SimplicialComplex) -> String {
    let mut out = String::from("graph complex {\n  node [shape=circle];\n");
    for v in k.vertices() {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    let mut edges: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut triangles: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    for f in k.faces() {
        let vs: Vec<&VertexId> = f.iter().collect();
        if vs.len() == 2 {
            edges.insert((vs[0].clone(), vs[1].clone()));
        } else if vs.len() == 3 {
            triangles.insert(vs.into_iter().cloned().collect());
        }
    }
    for (a, b) in &edges {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    for t in &triangles {
        let label = t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        out.push_str(&format!("  // filled 2-face: {{{label}}}\n"));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{face, v};

    #[test]
    fn text_roundtrip() {
        let k = SimplicialComplex::new(
            [v(1), v(2), v(3), v(4)],
            [face([1, 2]), face([2, 3])],
        )
        .unwrap();
        let text = to_text(&k);
        assert_eq!(text, "vertices: 1 2 3 4\nfaces: {1 2} {2 3}\n");
        assert_eq!(from_text(&text).unwrap(), k);

        let void = SimplicialComplex::void([v(1)]).unwrap();
        assert_eq!(from_text(&to_text(&void)).unwrap(), void);

        let empty = SimplicialComplex::empty([v(1)]).unwrap();
        assert_eq!(to_text(&empty), "vertices: 1\nfaces: {}\n");
        assert_eq!(from_text(&to_text(&empty)).unwrap(), empty);
    }

    #[test]
    fn dot_lists_skeleton_and_triangles() {
        let k = SimplicialComplex::new([v(1), v(2), v(3)], [face([1, 2, 3])]).unwrap();
        let dot = to_dot(&k);
        assert!(dot.contains("\"1\" -- \"2\""));
        assert!(dot.contains("filled 2-face: {1 2 3}"));
    }

    #[test]
    fn malformed_text_is_rejected() {
        assert!(from_text("faces: {1}").is_err());
        assert!(from_text("vertices: 1\nfaces: {1").is_err());
        assert!(from_text("vertices: 1\nnope").is_err());
    }
}
