use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Row-compressed complex matrix; every operator here is banded.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    /// Duplicate entries are summed, exact zeros dropped.
    pub fn from_entries<I>(dim: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut acc: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); dim];
        for (i, j, v) in entries {
            assert!(i < dim && j < dim, "entry ({i}, {j}) outside dimension {dim}");
            *acc[i].entry(j).or_default() += v;
        }
        let rows = acc
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| *v != Complex64::new(0.0, 0.0)).collect())
            .collect();
        Self { dim, rows }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_entries(dim, (0..dim).map(|k| (k, k, Complex64::new(1.0, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[(usize, Complex64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map_or(Complex64::new(0.0, 0.0), |(_, v)| *v)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    /// Largest `|i − j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.entries().map(|(i, j, _)| i.abs_diff(j)).max().unwrap_or(0)
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(j, a)| a * v[j]).sum())
            .collect()
    }

    pub fn mul(&self, o: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, o.dim);
        let entries = self.entries().flat_map(|(i, k, a)| o.rows[k].iter().map(move |&(j, b)| (i, j, a * b)));
        SparseMatrix::from_entries(self.dim, entries.collect::<Vec<_>>())
    }

    pub fn add(&self, o: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, o.dim);
        SparseMatrix::from_entries(self.dim, self.entries().chain(o.entries()).collect::<Vec<_>>())
    }

    pub fn sub(&self, o: &SparseMatrix) -> SparseMatrix {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> SparseMatrix {
        SparseMatrix::from_entries(self.dim, self.entries().map(|(i, j, v)| (i, j, s * v)).collect::<Vec<_>>())
    }

    pub fn adjoint(&self) -> SparseMatrix {
        SparseMatrix::from_entries(self.dim, self.entries().map(|(i, j, v)| (j, i, v.conj())).collect::<Vec<_>>())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_abs()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }
}
