use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex label: a non-empty path of positive integers, rendered with
/// underscores. Plain vertices are one-component paths (`"4"`), vertices
/// produced by substitution carry their ancestry (`"1_2"` is child `2` of
/// vertex `1`). The total order is lexicographic on paths and is used for
/// every canonical sort in the library.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    path: Vec<u32>,
}

impl VertexId {
    pub fn new(path: Vec<u32>) -> Result<Self> {
        if path.is_empty() || path.iter().any(|&c| c == 0) {
            return Err(Error::Parse(format!(
                "vertex path must be a non-empty sequence of positive integers, got {path:?}"
            )));
        }
        Ok(VertexId { path })
    }

    /// Single-component vertex `n`.
    pub fn from_index(n: u32) -> Self {
        VertexId { path: vec![n] }
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    /// Child label `self_v`: the path of `child` appended to `self`.
    pub fn extend(&self, child: &VertexId) -> Self {
        let mut path = self.path.clone();
        path.extend_from_slice(&child.path);
        VertexId { path }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.path {
            if !first {
                write!(f, "_")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let path = s
            .split('_')
            .map(|c| {
                c.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid vertex label `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        VertexId::new(path)
    }
}

impl From<u32> for VertexId {
    fn from(n: u32) -> Self {
        VertexId::from_index(n)
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parse the vertex a map name is bound to: the longest `digits(_digits)*`
/// suffix of the name, e.g. `f1_2 -> 1_2`, `mu14 -> 14`. Returns `None` when
/// the name carries no such suffix.
pub fn vertex_from_name(name: &str) -> Option<VertexId> {
    let bytes = name.as_bytes();
    let mut start = bytes.len();
    while start > 0 {
        let c = bytes[start - 1];
        if c.is_ascii_digit() || c == b'_' {
            start -= 1;
        } else {
            break;
        }
    }
    let suffix = name[start..].trim_matches('_');
    if suffix.is_empty() {
        return None;
    }
    suffix.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_lexicographic_on_paths() {
        let v1: VertexId = "1".parse().unwrap();
        let v12: VertexId = "1_2".parse().unwrap();
        let v2: VertexId = "2".parse().unwrap();
        assert!(v1 < v12);
        assert!(v12 < v2);
    }

    #[test]
    fn rejects_zero_and_empty() {
        assert!("".parse::<VertexId>().is_err());
        assert!("0".parse::<VertexId>().is_err());
        assert!("1_0".parse::<VertexId>().is_err());
        assert!("1_".parse::<VertexId>().is_err());
    }

    #[test]
    fn name_suffix_parsing() {
        assert_eq!(vertex_from_name("f1"), Some(VertexId::from_index(1)));
        assert_eq!(
            vertex_from_name("f1_2"),
            Some(VertexId::new(vec![1, 2]).unwrap())
        );
        assert_eq!(vertex_from_name("mu14"), Some(VertexId::from_index(14)));
        assert_eq!(vertex_from_name("f"), None);
    }
}
