//! Certified operator types: Hermitian operators, projectors, density
//! matrices, plus the Löwner order test and Born expectations.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::tolerance;

/// A matrix certified Hermitian within `HERM_TOL`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianOperator {
    mat: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let residual = mat.hermiticity_residual();
        if residual > tolerance::HERM_TOL {
            return Err(Error::NotHermitian {
                residual,
                tolerance: tolerance::HERM_TOL,
            });
        }
        Ok(Self { mat })
    }

    /// Wraps the Hermitian part of `mat`; never fails.
    pub fn symmetrized(mat: &ComplexMatrix) -> Self {
        Self {
            mat: mat.hermitian_part(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl TryFrom<ComplexMatrix> for HermitianOperator {
    type Error = Error;
    fn try_from(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat)
    }
}

impl From<HermitianOperator> for ComplexMatrix {
    fn from(h: HermitianOperator) -> ComplexMatrix {
        h.mat
    }
}

/// Hermitian idempotent with certified rank.
///
/// Certification requires every eigenvalue within `SNAP_REJECT_TOL` of
/// {0, 1} and the idempotency residual ‖P² − P‖_max within `IDEM_TOL`; the
/// rank is the size of the 1-cluster and must match round(tr P).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Projector {
    op: HermitianOperator,
    rank: usize,
}

impl Projector {
    /// Validates and keeps the matrix as given.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(mat)?;
        let (rank, _) = Self::check_spectrum(op.matrix())?;
        Self::check_idempotent(op.matrix())?;
        Ok(Self { op, rank })
    }

    /// Validates, then rebuilds the matrix from the snapped eigenspace so
    /// accumulated drift does not propagate through composed expressions.
    pub fn snap(mat: &ComplexMatrix) -> Result<Self> {
        let residual = mat.hermiticity_residual();
        if residual > tolerance::HERM_TOL {
            return Err(Error::NotHermitian {
                residual,
                tolerance: tolerance::HERM_TOL,
            });
        }
        let es = eigen::eigh(mat)?;
        let mut cols = Vec::new();
        for (k, &lam) in es.eigenvalues.iter().enumerate() {
            let snapped = if lam >= 0.5 { 1.0 } else { 0.0 };
            if (lam - snapped).abs() > tolerance::SNAP_REJECT_TOL {
                return Err(Error::NotProjector {
                    reason: "eigenvalue away from {0,1}",
                    residual: (lam - snapped).abs(),
                });
            }
            if snapped == 1.0 {
                cols.push(es.eigenvectors.m.column(k).into_owned());
            }
        }
        Ok(Self::from_orthonormal_columns(
            mat.dim(),
            &cols.iter().collect::<Vec<_>>(),
        ))
    }

    /// P = VV† for orthonormal columns V; rank is the column count.
    pub(crate) fn from_orthonormal_columns(
        dim: usize,
        cols: &[&DVector<Complex64>],
    ) -> Self {
        let rank = cols.len();
        if rank == 0 {
            return Self {
                op: HermitianOperator {
                    mat: ComplexMatrix::zeros(dim),
                },
                rank: 0,
            };
        }
        let mut v = DMatrix::<Complex64>::zeros(dim, rank);
        for (j, c) in cols.iter().enumerate() {
            v.set_column(j, c);
        }
        let p = &v * v.adjoint();
        Self {
            op: HermitianOperator {
                mat: ComplexMatrix { m: p },
            },
            rank,
        }
    }

    /// Wraps a matrix known to be an exact projector by construction.
    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, rank: usize) -> Self {
        debug_assert!(mat.hermiticity_residual() <= tolerance::HERM_TOL);
        debug_assert!({
            let sq = &mat * &mat;
            (&sq - &mat).max_norm() <= tolerance::IDEM_TOL
        });
        Self {
            op: HermitianOperator { mat },
            rank,
        }
    }

    fn check_spectrum(mat: &ComplexMatrix) -> Result<(usize, Vec<f64>)> {
        let vals = eigen::eigenvalues_only(mat);
        let mut rank = 0usize;
        for &lam in &vals {
            let snapped = if lam >= 0.5 { 1.0 } else { 0.0 };
            if (lam - snapped).abs() > tolerance::SNAP_REJECT_TOL {
                return Err(Error::NotProjector {
                    reason: "eigenvalue away from {0,1}",
                    residual: (lam - snapped).abs(),
                });
            }
            if snapped == 1.0 {
                rank += 1;
            }
        }
        let trace = mat.trace_re();
        if (trace - rank as f64).abs() > 1e-6 {
            return Err(Error::NotProjector {
                reason: "trace does not match eigenvalue count",
                residual: (trace - rank as f64).abs(),
            });
        }
        Ok((rank, vals))
    }

    fn check_idempotent(mat: &ComplexMatrix) -> Result<()> {
        let sq = mat * mat;
        let residual = (&sq - mat).max_norm();
        if residual > tolerance::IDEM_TOL {
            return Err(Error::NotProjector {
                reason: "idempotency residual",
                residual,
            });
        }
        Ok(())
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            op: HermitianOperator {
                mat: ComplexMatrix::zeros(dim),
            },
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: HermitianOperator {
                mat: ComplexMatrix::identity(dim),
            },
            rank: dim,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl TryFrom<ComplexMatrix> for Projector {
    type Error = Error;
    fn try_from(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat)
    }
}

impl From<Projector> for ComplexMatrix {
    fn from(p: Projector) -> ComplexMatrix {
        p.op.mat
    }
}

/// Hermitian, positive semidefinite, unit-trace state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let op = HermitianOperator::new(mat)?;
        let min = eigen::min_eigenvalue(op.matrix());
        if min < -tolerance::PSD_TOL {
            return Err(Error::NotDensity {
                reason: "negative eigenvalue",
                residual: -min,
            });
        }
        let trace_err = (op.matrix().trace_re() - 1.0).abs();
        if trace_err > tolerance::TRACE_TOL {
            return Err(Error::NotDensity {
                reason: "trace differs from one",
                residual: trace_err,
            });
        }
        Ok(Self { op })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Maximally mixed state I/d.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator {
                mat: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
            },
        }
    }
}

impl TryFrom<ComplexMatrix> for DensityMatrix {
    type Error = Error;
    fn try_from(mat: ComplexMatrix) -> Result<Self> {
        Self::new(mat)
    }
}

impl From<DensityMatrix> for ComplexMatrix {
    fn from(rho: DensityMatrix) -> ComplexMatrix {
        rho.op.mat
    }
}

/// Löwner order: true iff the smallest eigenvalue of B − A is ≥ −tol.
pub fn loewner_leq(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<bool> {
    a.matrix().check_same_dim(b.matrix())?;
    let diff = b.matrix() - a.matrix();
    Ok(eigen::min_eigenvalue(&diff) >= -tol)
}

/// Born expectation: real part of tr(ρΩ).
///
/// The imaginary residue is an internal-consistency signal; exceeding
/// `BORN_IMAG_TOL` indicates corrupted inputs rather than rounding.
pub fn born_expectation(rho: &DensityMatrix, omega: &HermitianOperator) -> Result<f64> {
    let tr = rho.matrix().product_trace(omega.matrix())?;
    if tr.im.abs() > tolerance::BORN_IMAG_TOL {
        return Err(Error::InternalConsistency {
            what: "imaginary residue of tr(ρΩ)",
            amount: tr.im.abs(),
        });
    }
    Ok(tr.re)
}

/// Projector onto the span of the given vectors.
///
/// Modified Gram–Schmidt with one reorthogonalization pass; directions whose
/// residual drops below 1e-8 of their normalized input are treated as
/// dependent and dropped.
pub fn projector_from_columns(vectors: &[Vec<Complex64>]) -> Result<Projector> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput("projector_from_columns"));
    }
    let dim = vectors[0].len();
    if dim == 0 {
        return Err(Error::EmptyInput("zero-length vectors"));
    }
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.len(),
            });
        }
    }

    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for raw in vectors {
        let mut v = DVector::from_column_slice(raw);
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        v /= Complex64::new(scale, 0.0);
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
        }
        let residual = v.norm();
        if residual > 1e-8 {
            v /= Complex64::new(residual, 0.0);
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return Err(Error::ZeroSpan);
    }
    let refs: Vec<&DVector<Complex64>> = basis.iter().collect();
    Ok(Projector::from_orthonormal_columns(dim, &refs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit_pair() -> (Projector, Projector) {
        // the non-commuting spin pair: P projects onto (1,-1)/√2, Q onto (0,1)
        let p = Projector::new(
            ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap(),
        )
        .unwrap();
        let q = Projector::new(ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        (p, q)
    }

    #[test]
    fn every_projector_is_below_identity() {
        let (_, q) = qubit_pair();
        let id = HermitianOperator::new(ComplexMatrix::identity(2)).unwrap();
        assert!(loewner_leq(q.operator(), &id, tolerance::LOEWNER_TOL).unwrap());
    }

    #[test]
    fn non_commuting_qubit_pair_is_loewner_incomparable() {
        // eigenvalues of Q - P are ±1/√2, so neither order holds
        let (p, q) = qubit_pair();
        assert!(!loewner_leq(p.operator(), q.operator(), tolerance::LOEWNER_TOL).unwrap());
        assert!(!loewner_leq(q.operator(), p.operator(), tolerance::LOEWNER_TOL).unwrap());
        let diff = q.matrix() - p.matrix();
        let vals = eigen::eigenvalues_only(&diff);
        let r = 0.5f64.sqrt();
        assert!((vals[0] + r).abs() < 1e-14);
        assert!((vals[1] - r).abs() < 1e-14);
    }

    #[test]
    fn columns_single_basis_vector() {
        let p = projector_from_columns(&[vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]])
        .unwrap();
        assert_eq!(p.rank(), 1);
        assert!((p.matrix().get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(p.matrix().get(1, 1).norm() < 1e-15);
    }

    #[test]
    fn columns_diagonal_direction() {
        let r = 0.5f64.sqrt();
        let p = projector_from_columns(&[vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)]])
            .unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.matrix().get(i, j).re - 0.5).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn columns_duplicate_direction_collapses() {
        let v = vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.7)];
        let twice: Vec<Complex64> = v.iter().map(|z| z * 2.0).collect();
        let p = projector_from_columns(&[v, twice]).unwrap();
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn columns_zero_span_rejected() {
        let z = vec![Complex64::new(0.0, 0.0); 3];
        assert!(matches!(
            projector_from_columns(&[z]),
            Err(Error::ZeroSpan)
        ));
    }

    #[test]
    fn born_maximally_mixed_qubit() {
        let (_, q) = qubit_pair();
        let rho = DensityMatrix::maximally_mixed(2);
        let v = born_expectation(&rho, q.operator()).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_identity_is_one() {
        let rho = DensityMatrix::maximally_mixed(3);
        let id = HermitianOperator::new(ComplexMatrix::identity(3)).unwrap();
        assert!((born_expectation(&rho, &id).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn near_projector_with_drifted_eigenvalue_is_rejected() {
        let m = ComplexMatrix::from_real(2, &[1.0 - 1e-7, 0.0, 0.0, 0.0]).unwrap();
        assert!(Projector::new(m).is_err());
    }

    #[test]
    fn density_requires_unit_trace() {
        let m = ComplexMatrix::from_real(2, &[0.7, 0.0, 0.0, 0.7]).unwrap();
        assert!(DensityMatrix::new(m).is_err());
    }
}
