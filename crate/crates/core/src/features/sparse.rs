use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Sparse vector with strictly increasing indices and no explicit zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, indices: Vec::new(), values: Vec::new() }
    }

    /// Builds a vector from `(index, value)` pairs in any order. Duplicate
    /// indices are summed and zeros are dropped.
    pub fn from_pairs(dim: usize, mut pairs: Vec<(usize, f64)>) -> Result<Self> {
        pairs.sort_by_key(|&(i, _)| i);
        let mut indices: Vec<usize> = Vec::with_capacity(pairs.len());
        let mut values: Vec<f64> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            if i >= dim {
                return Err(Error::invalid(format!("index {i} out of range for dimension {dim}")));
            }
            match indices.last() {
                Some(&last) if last == i => *values.last_mut().unwrap() += v,
                _ => {
                    indices.push(i);
                    values.push(v);
                }
            }
        }
        let mut out = Self { dim, indices, values };
        out.prune();
        Ok(out)
    }

    /// Dense to sparse; exact zeros are skipped.
    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .unzip();
        Self { dim: dense.len(), indices, values }
    }

    fn prune(&mut self) {
        let mut k = 0;
        for j in 0..self.indices.len() {
            if self.values[j] != 0.0 {
                self.indices[k] = self.indices[j];
                self.values[k] = self.values[j];
                k += 1;
            }
        }
        self.indices.truncate(k);
        self.values.truncate(k);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_zero(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.indices.binary_search(&index) {
            Ok(k) => self.values[k],
            Err(_) => 0.0,
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Dot product with a dense vector of at least `dim` entries.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i]).sum()
    }

    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (mut a, mut b, mut acc) = (0, 0, 0.0);
        while a < self.indices.len() && b < other.indices.len() {
            match self.indices[a].cmp(&other.indices[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += self.values[a] * other.values[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    /// `dense += scale * self`
    pub fn axpy_into(&self, scale: f64, dense: &mut [f64]) {
        for (i, v) in self.iter() {
            dense[i] += scale * v;
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    pub fn scale(&mut self, factor: f64) {
        self.values.iter_mut().for_each(|v| *v *= factor);
        self.prune();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_pairs_sorts_merges_and_prunes() {
        let v = SparseVector::from_pairs(5, vec![(3, 1.0), (0, 2.0), (3, -1.0), (1, 0.5)]).unwrap();
        assert_eq!(v.indices(), &[0, 1]);
        assert_eq!(v.values(), &[2.0, 0.5]);
    }

    #[test]
    fn out_of_range_index_rejected() {
        assert!(SparseVector::from_pairs(2, vec![(2, 1.0)]).is_err());
    }

    #[test]
    fn sparse_dot_matches_dense() {
        let a = SparseVector::from_dense(&[1.0, 0.0, 2.0, 0.0, 3.0]);
        let b = SparseVector::from_dense(&[0.0, 4.0, 5.0, 0.0, -1.0]);
        assert_eq!(a.dot(&b), 7.0);
        assert_eq!(a.dot_dense(&b.to_dense()), 7.0);
    }
}
