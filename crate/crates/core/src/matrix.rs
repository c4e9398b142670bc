//! Dense square complex matrices — the universal carrier for all operators.
//!
//! The JSON form is `{ "dim": n, "entries": [[[re, im], ...], ...] }` with
//! row-major entries and complex scalars as two-element `[re, im]` arrays.

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square matrix of complex doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub(crate) m: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds from row-major rows, validating squareness and finiteness.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        for row in &rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
        Self::from_inner(m)
    }

    /// Builds from a generator over (row, col).
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        Self {
            m: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Builds from row-major real entries (imaginary parts zero).
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                cols: entries.len() / dim.max(1),
            });
        }
        Ok(Self::from_fn(dim, |i, j| {
            Complex64::new(entries[i * dim + j], 0.0)
        }))
    }

    pub(crate) fn from_inner(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { m })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.m[(row, col)] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.m.diagonal().sum()
    }

    /// Real part of the trace.
    pub fn trace_re(&self) -> f64 {
        self.trace().re
    }

    /// Entrywise max modulus (the ‖·‖_max norm used by all certifications).
    pub fn max_norm(&self) -> f64 {
        self.m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    pub fn fro_norm(&self) -> f64 {
        self.m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm distance to the adjoint; zero for Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        (self - &self.adjoint()).max_norm()
    }

    /// (M + M†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self {
            m: (&self.m + self.m.adjoint()).scale(0.5),
        }
    }

    /// AB - BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            m: &self.m * &other.m - &other.m * &self.m,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            m: self.m.scale(factor),
        }
    }

    /// tr(AB) without forming the product.
    pub fn product_trace(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.m[(i, j)] * other.m[(j, i)];
            }
        }
        Ok(acc)
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Max-norm of U†U - I.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim();
        (self.m.adjoint() * &self.m - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()))
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in +");
        ComplexMatrix {
            m: &self.m + &rhs.m,
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in -");
        ComplexMatrix {
            m: &self.m - &rhs.m,
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in *");
        ComplexMatrix {
            m: &self.m * &rhs.m,
        }
    }
}

impl std::ops::Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix { m: -&self.m }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.m[idx]
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl From<ComplexMatrix> for MatrixRepr {
    fn from(value: ComplexMatrix) -> Self {
        let dim = value.dim();
        let entries = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let z = value.m[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        MatrixRepr { dim, entries }
    }
}

impl TryFrom<MatrixRepr> for ComplexMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.entries.len() != repr.dim {
            return Err(Error::NotSquare {
                rows: repr.entries.len(),
                cols: repr.dim,
            });
        }
        let rows = repr
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        // from_rows re-checks squareness and finiteness
        let mat = ComplexMatrix::from_rows(rows)?;
        if mat.dim() != repr.dim {
            return Err(Error::NotSquare {
                rows: mat.dim(),
                cols: repr.dim,
            });
        }
        Ok(mat)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr::from(self.clone()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        ComplexMatrix::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_bit_exact() {
        let m = ComplexMatrix::from_fn(3, |i, j| {
            Complex64::new(
                (i as f64 + 1.0) / (j as f64 + 3.0),
                (j as f64 - 1.5) / 7.0,
            )
        });
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j).re.to_bits(), back.get(i, j).re.to_bits());
                assert_eq!(m.get(i, j).im.to_bits(), back.get(i, j).im.to_bits());
            }
        }
    }

    #[test]
    fn rejects_non_square_entries() {
        let text = r#"{"dim":2,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0]]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }

    #[test]
    fn rejects_dim_mismatch() {
        let text = r#"{"dim":3,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(text).is_err());
    }

    #[test]
    fn rejects_nan_entry() {
        let mut rows = vec![vec![Complex64::new(1.0, 0.0); 2]; 2];
        rows[0][1] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            ComplexMatrix::from_rows(rows),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn product_trace_matches_full_product() {
        let a = ComplexMatrix::from_fn(4, |i, j| Complex64::new(i as f64 * 0.3, j as f64 * 0.1));
        let b = ComplexMatrix::from_fn(4, |i, j| Complex64::new(j as f64 - 0.4, i as f64 * 0.2));
        let direct = (&a * &b).trace();
        let fast = a.product_trace(&b).unwrap();
        assert!((direct - fast).norm() < 1e-14);
    }
}
