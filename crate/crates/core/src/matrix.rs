//! Dense square matrices over the complex numbers and the nonnegative reals.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major n×n complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

/// Dense row-major n×n matrix with nonnegative finite entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonnegMatrix {
    n: usize,
    data: Vec<f64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected {n} (matrix must be square)",
                    i + 1,
                    row.len()
                )));
            }
            data.extend(row);
        }
        Self::from_vec(n, data)
    }

    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries, got {}", n * n, data.len())));
        }
        if let Some(p) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::invalid(format!(
                "entry ({}, {}) is not finite",
                p / n + 1,
                p % n + 1
            )));
        }
        Ok(Self { n, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Entrywise modulus |A|.
    pub fn abs(&self) -> NonnegMatrix {
        NonnegMatrix { n: self.n, data: self.data.iter().map(|z| z.norm()).collect() }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Submatrix A[rows, cols].
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ComplexMatrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self[(i, j)])
            .collect();
        ComplexMatrix { n: rows.len(), data }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self[(i, l)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[l * n + j];
                }
            }
        }
        out
    }

    /// Companion matrix of `a_0 + a_1 z + ... + a_n z^n`, normalised to be monic:
    /// ones on the superdiagonal, last row `-a_0/a_n, ..., -a_{n-1}/a_n`.
    pub fn companion(coeffs: &[Complex64]) -> Result<Self> {
        let Some(&lead) = coeffs.last() else {
            return Err(Error::invalid("empty polynomial"));
        };
        if lead == Complex64::new(0.0, 0.0) {
            return Err(Error::invalid("leading coefficient must be nonzero"));
        }
        let n = coeffs.len() - 1;
        if n == 0 {
            return Err(Error::invalid("degree ≥ 1 required"));
        }
        let mut m = Self::zeros(n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
        for j in 0..n {
            m[(n - 1, j)] = -coeffs[j] / lead;
        }
        Ok(m)
    }
}

impl NonnegMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn filled(n: usize, value: f64) -> Result<Self> {
        Self::from_vec(n, vec![value; n * n])
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid(format!(
                    "row {} has {} entries, expected {n} (matrix must be square)",
                    i + 1,
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(n, data)
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries, got {}", n * n, data.len())));
        }
        if let Some(p) = data.iter().position(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::invalid(format!(
                "entry ({}, {}) = {} is not a finite nonnegative number",
                p / n + 1,
                p % n + 1,
                data[p]
            )));
        }
        Ok(Self { n, data })
    }

    pub fn diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            data[i * n + i] = v;
        }
        Self::from_vec(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> NonnegMatrix {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self[(i, j)])
            .collect();
        NonnegMatrix { n: rows.len(), data }
    }

    /// Entrywise natural logarithm, with `log 0 = -inf`.
    pub fn log(&self) -> Vec<f64> {
        self.data.iter().map(|&x| if x > 0.0 { x.ln() } else { f64::NEG_INFINITY }).collect()
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix { n: self.n, data: self.data.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    /// True when `self <= other` entrywise.
    pub fn le(&self, other: &NonnegMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<NonnegMatrix> {
        NonnegMatrix::from_vec(self.n, self.data.iter().map(|&x| f(x)).collect())
    }

    pub(crate) fn from_vec_unchecked(n: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        Self { n, data }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Index<(usize, usize)> for NonnegMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}
