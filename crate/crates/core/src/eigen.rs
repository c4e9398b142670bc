//! Hermitian eigensystems and the Moore–Penrose pseudo-inverse.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operators::HermitianOperator;
use crate::tolerance;

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending,
/// eigenvector columns orthonormal.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Diagonalizes a Hermitian operator, verifying the reconstruction
/// `H = V diag(λ) V†` and the orthonormality of `V` to within `EIG_TOL`.
pub fn hermitian_eigensystem(h: &HermitianOperator) -> Result<Eigensystem> {
    let residual = h.matrix().hermiticity_residual();
    if residual > tolerance::HERM_TOL {
        return Err(Error::NotHermitian {
            residual,
            tolerance: tolerance::HERM_TOL,
        });
    }
    eigh(h.matrix())
}

/// Internal eigensolve; symmetrizes first, then checks the residual against
/// the symmetrized input.
pub(crate) fn eigh(m: &ComplexMatrix) -> Result<Eigensystem> {
    let n = m.dim();
    if n == 0 {
        return Ok(Eigensystem {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0),
        });
    }
    let sym = m.hermitian_part();
    let se = sym.m.clone().symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }

    let mut diag = DMatrix::<Complex64>::zeros(n, n);
    for (i, &lam) in eigenvalues.iter().enumerate() {
        diag[(i, i)] = Complex64::new(lam, 0.0);
    }
    let reconstruction = &vectors * diag * vectors.adjoint();
    let rec_residual = (&reconstruction - &sym.m)
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()));
    let orth_residual = (vectors.adjoint() * &vectors - DMatrix::<Complex64>::identity(n, n))
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()));
    let worst = rec_residual.max(orth_residual);
    if worst > tolerance::EIG_TOL {
        return Err(Error::EigenResidual {
            residual: worst,
            tolerance: tolerance::EIG_TOL,
        });
    }

    Ok(Eigensystem {
        eigenvalues,
        eigenvectors: ComplexMatrix { m: vectors },
    })
}

/// Eigenvalues only (ascending), no eigenvector accumulation.
pub(crate) fn eigenvalues_only(m: &ComplexMatrix) -> Vec<f64> {
    if m.dim() == 0 {
        return Vec::new();
    }
    let sym = m.hermitian_part();
    let mut vals: Vec<f64> = sym.m.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Smallest eigenvalue of the Hermitian part.
pub(crate) fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigenvalues_only(m).first().copied().unwrap_or(0.0)
}

/// Singular value decomposition through the Hermitian eigensolver.
///
/// For σ > 0 the eigenvectors [u; v]/√2 of the embedding [[0,M],[M†,0]]
/// carry consistent left/right singular pairs even inside degenerate
/// clusters, which keeps rank decisions exact where a bidiagonal SVD can
/// lose orthogonality.
pub(crate) struct SingularTriples {
    /// Descending, strictly positive up to `keep_above`.
    pub values: Vec<f64>,
    pub left: Vec<DVector<Complex64>>,
    pub right: Vec<DVector<Complex64>>,
}

pub(crate) fn singular_triples(m: &ComplexMatrix, keep_above: f64) -> Result<SingularTriples> {
    let n = m.dim();
    let mut embed = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            embed[(i, n + j)] = m.m[(i, j)];
            embed[(n + i, j)] = m.m[(j, i)].conj();
        }
    }
    let es = eigh(&ComplexMatrix { m: embed })?;
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut values = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    // take the positive branch, descending
    for k in (0..2 * n).rev() {
        let sigma = es.eigenvalues[k];
        if sigma <= keep_above {
            break;
        }
        let w = es.eigenvectors.m.column(k);
        let mut u = DVector::<Complex64>::zeros(n);
        let mut v = DVector::<Complex64>::zeros(n);
        for i in 0..n {
            u[i] = w[i] * sqrt2;
            v[i] = w[n + i] * sqrt2;
        }
        values.push(sigma);
        left.push(u);
        right.push(v);
    }
    Ok(SingularTriples {
        values,
        left,
        right,
    })
}

/// Moore–Penrose pseudo-inverse of a square complex matrix.
///
/// Singular values below `rank_rtol · σ_max` are treated as exact zeros, so
/// the zero matrix maps to the zero matrix. Hermitian inputs invert through
/// their own eigensystem; general inputs go through [`singular_triples`].
pub fn pseudo_inverse(m: &ComplexMatrix, rank_rtol: f64) -> Result<ComplexMatrix> {
    let n = m.dim();
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0));
    }
    if m.hermiticity_residual() <= tolerance::HERM_TOL {
        let es = eigh(m)?;
        let sigma_max = es
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()));
        let cutoff = rank_rtol * sigma_max;
        let mut pinv = DMatrix::<Complex64>::zeros(n, n);
        for (k, &lam) in es.eigenvalues.iter().enumerate() {
            if lam.abs() > cutoff {
                let v = es.eigenvectors.m.column(k);
                let scale = Complex64::new(1.0 / lam, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        pinv[(i, j)] += v[i] * v[j].conj() * scale;
                    }
                }
            }
        }
        return Ok(ComplexMatrix { m: pinv });
    }

    let probe = singular_triples(m, 0.0)?;
    let sigma_max = probe.values.first().copied().unwrap_or(0.0);
    let cutoff = rank_rtol * sigma_max;
    let mut pinv = DMatrix::<Complex64>::zeros(n, n);
    for ((sigma, u), v) in probe
        .values
        .iter()
        .zip(&probe.left)
        .zip(&probe.right)
    {
        if *sigma > cutoff {
            let scale = Complex64::new(1.0 / sigma, 0.0);
            for i in 0..n {
                for j in 0..n {
                    pinv[(i, j)] += v[i] * u[j].conj() * scale;
                }
            }
        }
    }
    Ok(ComplexMatrix { m: pinv })
}
