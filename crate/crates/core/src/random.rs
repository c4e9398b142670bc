//! Seeded, bit-reproducible random operators.
//!
//! Seed derivation: the child seed for stream `k` is the SplitMix64
//! finalizer applied to `master + (k+1)·0x9E3779B97F4A7C15`, so per-sample
//! seeds are pure functions of (master, stream index) and campaigns can
//! replay any sample in isolation. Draws go through ChaCha12, which is
//! stable across platforms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operators::{DensityMatrix, HermitianOperator, Projector};

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

fn splitmix_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// 64-bit master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    /// Deterministic child seed for a numbered stream.
    pub fn derive(self, stream: u64) -> Seed {
        Seed(splitmix_finalize(
            self.0
                .wrapping_add(stream.wrapping_add(1).wrapping_mul(GOLDEN)),
        ))
    }

    pub(crate) fn rng(self) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(self.0)
    }
}

fn standard_complex(rng: &mut ChaCha12Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| standard_complex(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the R
/// diagonal phase-normalized.
pub fn haar_random_unitary(dim: usize, seed: Seed) -> ComplexMatrix {
    if dim == 0 {
        return ComplexMatrix::zeros(0);
    }
    let mut rng = seed.rng();
    let g = gaussian_matrix(dim, dim, &mut rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    ComplexMatrix { m: u }
}

/// Rank-`rank` projector with unitarily invariant distribution.
pub fn haar_random_projector(dim: usize, rank: usize, seed: Seed) -> Result<Projector> {
    if rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    if rank == 0 {
        return Ok(Projector::zero(dim));
    }
    if rank == dim {
        return Ok(Projector::identity(dim));
    }
    let u = haar_random_unitary(dim, seed);
    let cols: Vec<DVector<Complex64>> = (0..rank).map(|j| u.m.column(j).into_owned()).collect();
    let refs: Vec<&DVector<Complex64>> = cols.iter().collect();
    Ok(Projector::from_orthonormal_columns(dim, &refs))
}

/// ρ = GG†/tr(GG†) for a seeded dim×rank complex Gaussian factor G.
pub fn random_density(dim: usize, rank: usize, seed: Seed) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = seed.rng();
    let g = gaussian_matrix(dim, rank, &mut rng);
    let gram = &g * g.adjoint();
    let trace: f64 = (0..dim).map(|i| gram[(i, i)].re).sum();
    let rho = ComplexMatrix {
        m: gram.scale(1.0 / trace),
    };
    DensityMatrix::new(rho)
}

/// Random resolution of identity with `parts` blocks of Haar-random
/// orthonormal directions.
pub fn random_resolution(dim: usize, parts: usize, seed: Seed) -> Result<Vec<Projector>> {
    if parts == 0 || parts > dim {
        return Err(Error::RankOutOfRange { rank: parts, dim });
    }
    let u = haar_random_unitary(dim, seed);
    // near-even split of the columns
    let base = dim / parts;
    let extra = dim % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0usize;
    for k in 0..parts {
        let size = base + usize::from(k < extra);
        let cols: Vec<DVector<Complex64>> = (start..start + size)
            .map(|j| u.m.column(j).into_owned())
            .collect();
        let refs: Vec<&DVector<Complex64>> = cols.iter().collect();
        out.push(Projector::from_orthonormal_columns(dim, &refs));
        start += size;
    }
    Ok(out)
}

/// Random projector pair commuting by construction: both are spanned by
/// columns of one Haar unitary, with membership drawn per column.
pub fn commuting_projector_pair(
    dim: usize,
    seed: Seed,
) -> Result<(Projector, Projector)> {
    let u = haar_random_unitary(dim, seed);
    let mut rng = seed.derive(0xC0).rng();
    let mut p_cols: Vec<DVector<Complex64>> = Vec::new();
    let mut q_cols: Vec<DVector<Complex64>> = Vec::new();
    for j in 0..dim {
        let in_p = rng.random::<bool>();
        let in_q = rng.random::<bool>();
        if in_p {
            p_cols.push(u.m.column(j).into_owned());
        }
        if in_q {
            q_cols.push(u.m.column(j).into_owned());
        }
    }
    let p_refs: Vec<&DVector<Complex64>> = p_cols.iter().collect();
    let q_refs: Vec<&DVector<Complex64>> = q_cols.iter().collect();
    Ok((
        Projector::from_orthonormal_columns(dim, &p_refs),
        Projector::from_orthonormal_columns(dim, &q_refs),
    ))
}

/// Certifies a matrix as unitary within `UNITARY_TOL`.
pub fn certify_unitary(u: &ComplexMatrix) -> Result<()> {
    let residual = u.unitarity_residual();
    if residual > crate::tolerance::UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Mixtures α·P/tr(P) + (1−α)·P⊥/tr(P⊥): states commuting with P by
/// construction. Degenerate ranks (0 or full) skip the missing term.
pub fn commuting_states(p: &Projector, weights: &[f64]) -> Vec<DensityMatrix> {
    let dim = p.dim();
    let rank = p.rank();
    let mut out = Vec::new();
    for &alpha in weights {
        let mat = if rank == 0 {
            ComplexMatrix::identity(dim).scale(1.0 / dim as f64)
        } else if rank == dim {
            ComplexMatrix::identity(dim).scale(1.0 / dim as f64)
        } else {
            let inside = p.matrix().scale(alpha / rank as f64);
            let complement = &ComplexMatrix::identity(dim) - p.matrix();
            let outside = complement.scale((1.0 - alpha) / (dim - rank) as f64);
            &inside + &outside
        };
        let rho = DensityMatrix::new(mat).expect("mixture of projections is a state");
        out.push(rho);
        if rank == 0 || rank == dim {
            break; // all weights give the same state
        }
    }
    out
}

/// Deterministic Hermitian operator for tests and campaigns.
pub fn random_hermitian(dim: usize, seed: Seed) -> HermitianOperator {
    let mut rng = seed.rng();
    let g = gaussian_matrix(dim, dim, &mut rng);
    let h = (&g + g.adjoint()).scale(0.5);
    HermitianOperator::symmetrized(&ComplexMatrix { m: h })
}

/// Seeded square complex Gaussian matrix (no structure).
pub fn random_complex_matrix(dim: usize, seed: Seed) -> ComplexMatrix {
    let mut rng = seed.rng();
    ComplexMatrix {
        m: gaussian_matrix(dim, dim, &mut rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen;

    #[test]
    fn zero_rank_gives_zero_matrix() {
        let p = haar_random_projector(5, 0, Seed(7)).unwrap();
        assert_eq!(p.matrix().max_norm(), 0.0);
        assert_eq!(p.rank(), 0);
    }

    #[test]
    fn full_rank_gives_identity() {
        let p = haar_random_projector(5, 5, Seed(7)).unwrap();
        assert_eq!((p.matrix() - &ComplexMatrix::identity(5)).max_norm(), 0.0);
    }

    #[test]
    fn rank3_dim6_projector_invariants() {
        let p = haar_random_projector(6, 3, Seed(1234)).unwrap();
        assert!((p.matrix().trace_re() - 3.0).abs() < 1e-12);
        let sq = p.matrix() * p.matrix();
        assert!((&sq - p.matrix()).max_norm() < 1e-12);
    }

    #[test]
    fn rank_out_of_range_rejected() {
        assert!(haar_random_projector(4, 5, Seed(1)).is_err());
        assert!(random_density(4, 0, Seed(1)).is_err());
    }

    #[test]
    fn fixed_seed_is_bit_reproducible() {
        let a = haar_random_projector(7, 3, Seed(99)).unwrap();
        let b = haar_random_projector(7, 3, Seed(99)).unwrap();
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(
                    a.matrix().get(i, j).re.to_bits(),
                    b.matrix().get(i, j).re.to_bits()
                );
                assert_eq!(
                    a.matrix().get(i, j).im.to_bits(),
                    b.matrix().get(i, j).im.to_bits()
                );
            }
        }
    }

    #[test]
    fn derived_seeds_differ_by_stream() {
        let s = Seed(42);
        assert_ne!(s.derive(0), s.derive(1));
        assert_eq!(s.derive(3), s.derive(3));
    }

    #[test]
    fn pure_random_density_has_unit_eigenvalue() {
        let rho = random_density(2, 1, Seed(5)).unwrap();
        let vals = eigen::eigenvalues_only(rho.matrix());
        assert!(vals[0].abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_rank_density_trace_one() {
        let rho = random_density(6, 6, Seed(8)).unwrap();
        assert!((rho.matrix().trace_re() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_two_density_has_two_significant_eigenvalues() {
        let rho = random_density(4, 2, Seed(17)).unwrap();
        let vals = eigen::eigenvalues_only(rho.matrix());
        let above: usize = vals.iter().filter(|v| **v > 1e-10).count();
        assert_eq!(above, 2);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_random_unitary(9, Seed(3));
        assert!(u.unitarity_residual() < 1e-13);
    }

    #[test]
    fn commuting_pair_commutes() {
        let (p, q) = commuting_projector_pair(6, Seed(21)).unwrap();
        assert!(p.matrix().commutator(q.matrix()).unwrap().max_norm() < 1e-13);
    }

    #[test]
    fn resolution_sums_to_identity() {
        let parts = random_resolution(7, 3, Seed(11)).unwrap();
        let mut acc = ComplexMatrix::zeros(7);
        for p in &parts {
            acc = &acc + p.matrix();
        }
        assert!((&acc - &ComplexMatrix::identity(7)).max_norm() < 1e-12);
    }
}
