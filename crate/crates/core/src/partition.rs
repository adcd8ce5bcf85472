//! Vertex partitions in canonical form.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Disjoint, exhaustive classes over `0..n`.
///
/// Members are sorted ascending and classes are sorted by their smallest member, so two
/// partitions of the same set-of-sets compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Groups vertices with equal keys; vertex `v` has key `keys[v]`.
    pub fn from_keys<K: Eq + Hash>(keys: &[K]) -> Self {
        let mut index: HashMap<&K, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (v, k) in keys.iter().enumerate() {
            let c = *index.entry(k).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(v);
        }
        // first-occurrence order already sorts classes by smallest member
        Partition { classes }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            classes: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn unit(n: usize) -> Self {
        if n == 0 {
            return Partition { classes: vec![] };
        }
        Partition {
            classes: vec![(0..n).collect()],
        }
    }

    /// Validates and canonicalises an arbitrary list of classes over `0..n`.
    pub fn from_classes(n: usize, mut classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for class in &mut classes {
            if class.is_empty() {
                return Err(Error::Validation("empty partition class".into()));
            }
            class.sort_unstable();
            for &v in class.iter() {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Validation(format!(
                        "vertex {v} is out of range or appears twice"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Validation(
                "partition does not cover every vertex".into(),
            ));
        }
        classes.sort_unstable_by_key(|c| c[0]);
        Ok(Partition { classes })
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// Class index of every vertex.
    pub fn class_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.vertex_count()];
        for (c, class) in self.classes.iter().enumerate() {
            for &v in class {
                ids[v] = c;
            }
        }
        ids
    }

    pub fn class_of(&self, v: usize) -> &[usize] {
        self.classes
            .iter()
            .find(|c| c.binary_search(&v).is_ok())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn same_class(&self, u: usize, v: usize) -> bool {
        self.class_of(u).binary_search(&v).is_ok()
    }

    /// Every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let ids = coarser.class_ids();
        self.vertex_count() == ids.len()
            && self
                .classes
                .iter()
                .all(|c| c.iter().all(|&v| ids[v] == ids[c[0]]))
    }

    /// Parses the `{0,2} {1}` rendering produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut classes = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .and_then(|r| r.split_once('}'))
                .ok_or_else(|| Error::parse(1, text.len() - rest.len(), "expected '{...}'"))?;
            let members = body
                .0
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::parse(1, text.len() - rest.len(), e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            classes.push(members);
            rest = body.1.trim_start();
        }
        let n = classes.iter().map(Vec::len).sum();
        Partition::from_classes(n, classes)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.classes.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{{")?;
            for (i, v) in class.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}
