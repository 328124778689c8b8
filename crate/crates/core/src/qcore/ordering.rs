use crate::error::{Error, Result};

/// Names the tensor factors of a register; position 0 is the leftmost ket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitOrdering {
    labels: Vec<String>,
}

impl QubitOrdering {
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let mut out: Vec<String> = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            if out.iter().any(|x| x == l) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            out.push(l.to_string());
        }
        Ok(Self { labels: out })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l.as_ref())).collect()
    }

    /// `perm[i]` is the position in `self` of the label at position `i`
    /// of `target`. Both orderings must hold the same label set.
    pub fn permutation_to(&self, target: &QubitOrdering) -> Result<Vec<usize>> {
        if self.len() != target.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: target.len() });
        }
        target.labels.iter().map(|l| self.position(l)).collect()
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &QubitOrdering) -> Result<Self> {
        let all: Vec<&str> = self.labels.iter().chain(&other.labels).map(String::as_str).collect();
        Self::new(&all)
    }
}
