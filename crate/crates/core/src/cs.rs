//! Joint block-diagonalization of a projector pair.
//!
//! Any pair (P, Q) splits the space into a generic sector of dimension 2m
//! where the pair genuinely fails to commute, plus four commuting sectors:
//! the ranges of P∧Q, P⊥∧Q, P∧Q⊥ and P⊥∧Q⊥. In the adapted basis
//!
//! ```text
//!   U P U† = dg[ P̂, I, 0, I, 0 ]      U Q U† = dg[ Q̂, I, I, 0, 0 ]
//! ```
//!
//! with the generic blocks parameterized by commuting Hermitian
//! positive-definite matrices C, S (cosines and sines of the principal
//! angles, C² + S² = I):
//!
//! ```text
//!   P̂ = [ C²  CS ]      Q̂ = [ I  0 ]
//!       [ CS  S² ]          [ 0  0 ]
//! ```
//!
//! Principal angles are ordered ascending, so C and S come out diagonal
//! with C entries descending. Degenerate-angle clusters keep whatever basis
//! the eigensolver returns; downstream checks are conjugation-invariant
//! within clusters.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::lattice;
use crate::matrix::ComplexMatrix;
use crate::operators::{HermitianOperator, Projector};
use crate::tolerance;

/// Sector dimensions of a decomposed pair.
///
/// `generic` is the half-dimension m of the non-commuting sector; the four
/// commuting sectors are the ranks of P∧Q, P⊥∧Q, P∧Q⊥ and P⊥∧Q⊥.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CSSignature {
    pub generic: usize,
    pub in_both: usize,
    pub in_q_only: usize,
    pub in_p_only: usize,
    pub in_neither: usize,
}

impl CSSignature {
    pub fn dim(&self) -> usize {
        2 * self.generic + self.in_both + self.in_q_only + self.in_p_only + self.in_neither
    }

    /// Block sizes in canonical order [generic, both, q_only, p_only, neither].
    pub fn sector_dims(&self) -> [usize; 5] {
        [
            2 * self.generic,
            self.in_both,
            self.in_q_only,
            self.in_p_only,
            self.in_neither,
        ]
    }

    /// (offset, size) per sector in canonical order.
    pub fn sector_spans(&self) -> [(usize, usize); 5] {
        let dims = self.sector_dims();
        let mut spans = [(0usize, 0usize); 5];
        let mut off = 0usize;
        for (k, &d) in dims.iter().enumerate() {
            spans[k] = (off, d);
            off += d;
        }
        spans
    }
}

/// Canonical sector names, in block order.
pub const SECTOR_NAMES: [&str; 5] = ["generic", "both", "q_only", "p_only", "neither"];

/// Result of jointly block-diagonalizing a projector pair.
///
/// `u` maps to the adapted basis: `u · P · u†` is block diagonal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CSDecomposition {
    pub u: ComplexMatrix,
    pub signature: CSSignature,
    pub c: ComplexMatrix,
    pub s: ComplexMatrix,
}

fn collect_refs(cols: &[DVector<Complex64>]) -> Vec<&DVector<Complex64>> {
    cols.iter().collect()
}

/// Orthonormalizes `cols` in place against everything before them
/// (modified Gram–Schmidt, two passes).
fn polish_columns(cols: &mut [DVector<Complex64>]) {
    for i in 0..cols.len() {
        for _ in 0..2 {
            for j in 0..i {
                let overlap = cols[j].dotc(&cols[i]);
                let proj = &cols[j] * overlap;
                cols[i] -= proj;
            }
        }
        let norm = cols[i].norm();
        cols[i] /= Complex64::new(norm, 0.0);
    }
}

fn compress(basis: &[DVector<Complex64>], op: &ComplexMatrix) -> DMatrix<Complex64> {
    let k = basis.len();
    let dim = op.dim();
    let mut b = DMatrix::<Complex64>::zeros(dim, k);
    for (j, col) in basis.iter().enumerate() {
        b.set_column(j, col);
    }
    b.adjoint() * &op.m * b
}

/// Decomposes a projector pair into CS canonical form.
///
/// `tol` gates the sector-orthogonality and block-reproduction diagnostics;
/// `CS_BLOCK_TOL` is the default choice.
pub fn cs_decompose(p: &Projector, q: &Projector, tol: f64) -> Result<CSDecomposition> {
    p.matrix().check_same_dim(q.matrix())?;
    let dim = p.dim();
    let pc = lattice::complement(p);
    let qc = lattice::complement(q);

    let mut sectors = [
        lattice::intersection_basis(p, q)?,
        lattice::intersection_basis(&pc, q)?,
        lattice::intersection_basis(p, &qc)?,
        lattice::intersection_basis(&pc, &qc)?,
    ];

    // the four sectors are mutually orthogonal in exact arithmetic; a large
    // cross-overlap means the meets themselves are unreliable
    let mut cross = 0.0f64;
    for a in 0..4 {
        for b in (a + 1)..4 {
            for x in &sectors[a] {
                for y in &sectors[b] {
                    cross = cross.max(x.dotc(y).norm());
                }
            }
        }
    }
    if cross > tol.max(1e-10) {
        return Err(Error::SectorOrthogonality {
            residual: cross,
            tolerance: tol.max(1e-10),
        });
    }

    let counts = [
        sectors[0].len(),
        sectors[1].len(),
        sectors[2].len(),
        sectors[3].len(),
    ];
    let mut flat: Vec<DVector<Complex64>> = Vec::new();
    for sector in &mut sectors {
        flat.append(sector);
    }
    let sector_counts_total = flat.len();
    polish_columns(&mut flat);

    let generic_dim = dim - sector_counts_total;
    if generic_dim % 2 != 0 {
        return Err(Error::OddGenericSector { dim: generic_dim });
    }
    let m = generic_dim / 2;

    // generic sector: kernel of the sector-span projector
    let generic_basis: Vec<DVector<Complex64>> = if generic_dim > 0 {
        let span = Projector::from_orthonormal_columns(dim, &collect_refs(&flat));
        let residual_proj = &ComplexMatrix::identity(dim) - span.matrix();
        let es = eigen::eigh(&residual_proj)?;
        let mut cols = Vec::new();
        for (k, &lam) in es.eigenvalues.iter().enumerate() {
            if lam >= 0.5 {
                cols.push(es.eigenvectors.m.column(k).into_owned());
            }
        }
        if cols.len() != generic_dim {
            return Err(Error::InternalConsistency {
                what: "generic sector dimension",
                amount: cols.len() as f64 - generic_dim as f64,
            });
        }
        cols
    } else {
        Vec::new()
    };

    let (x_cols, y_cols, c_diag, s_diag) = if m > 0 {
        split_generic_sector(&generic_basis, p, q, m)?
    } else {
        (Vec::new(), Vec::new(), Vec::new(), Vec::new())
    };

    // column order: [X | Y | both | q_only | p_only | neither]
    let mut ordered: Vec<DVector<Complex64>> = Vec::with_capacity(dim);
    ordered.extend(x_cols);
    ordered.extend(y_cols);
    let mut offset = 0usize;
    for &count in &counts {
        ordered.extend(flat[offset..offset + count].iter().cloned());
        offset += count;
    }

    let mut u_cols = DMatrix::<Complex64>::zeros(dim, dim);
    for (j, col) in ordered.iter().enumerate() {
        u_cols.set_column(j, col);
    }
    let u = ComplexMatrix {
        m: u_cols.adjoint(),
    };

    let signature = CSSignature {
        generic: m,
        in_both: counts[0],
        in_q_only: counts[1],
        in_p_only: counts[2],
        in_neither: counts[3],
    };

    let c = ComplexMatrix::from_fn(m, |i, j| {
        if i == j {
            Complex64::new(c_diag[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let s = ComplexMatrix::from_fn(m, |i, j| {
        if i == j {
            Complex64::new(s_diag[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    let dec = CSDecomposition { u, signature, c, s };
    validate_decomposition(&dec, p, q, tol)?;
    Ok(dec)
}

/// Builds the adapted generic basis: X spans range(Q) within the generic
/// sector, Y its complement, rotated so the compression of P is in CS form.
fn split_generic_sector(
    generic_basis: &[DVector<Complex64>],
    p: &Projector,
    q: &Projector,
    m: usize,
) -> Result<(
    Vec<DVector<Complex64>>,
    Vec<DVector<Complex64>>,
    Vec<f64>,
    Vec<f64>,
)> {
    let qg = ComplexMatrix::from_inner(compress(generic_basis, q.matrix()))?;
    let qg_eig = eigen::eigh(&qg)?;
    let mut x_local: Vec<DVector<Complex64>> = Vec::new();
    let mut y_local: Vec<DVector<Complex64>> = Vec::new();
    for (k, &lam) in qg_eig.eigenvalues.iter().enumerate() {
        let snapped = if lam >= 0.5 { 1.0 } else { 0.0 };
        if (lam - snapped).abs() > 1e-6 {
            return Err(Error::InternalConsistency {
                what: "generic compression of Q is not a projector",
                amount: (lam - snapped).abs(),
            });
        }
        if snapped == 1.0 {
            x_local.push(qg_eig.eigenvectors.m.column(k).into_owned());
        } else {
            y_local.push(qg_eig.eigenvectors.m.column(k).into_owned());
        }
    }
    if x_local.len() != m || y_local.len() != m {
        return Err(Error::InternalConsistency {
            what: "generic sector is not balanced between Q and Q⊥",
            amount: x_local.len() as f64 - m as f64,
        });
    }

    // lift local (generic-space) coordinates to the full space
    let dim = generic_basis[0].len();
    let lift = |local: &DVector<Complex64>| -> DVector<Complex64> {
        let mut v = DVector::<Complex64>::zeros(dim);
        for (idx, b) in generic_basis.iter().enumerate() {
            v += b * local[idx];
        }
        v
    };
    let mut x_cols: Vec<DVector<Complex64>> = x_local.iter().map(lift).collect();
    let mut y_cols: Vec<DVector<Complex64>> = y_local.iter().map(lift).collect();

    // rotate X so the compression of P onto X is diagonal, angles ascending
    let a = ComplexMatrix::from_inner(compress(&x_cols, p.matrix()))?;
    let a_eig = eigen::eigh(&a)?;
    let order: Vec<usize> = (0..m).rev().collect(); // cos² descending
    let mut c_diag = Vec::with_capacity(m);
    let mut s_diag = Vec::with_capacity(m);
    let mut x_rotated: Vec<DVector<Complex64>> = Vec::with_capacity(m);
    for &k in &order {
        let lam = a_eig.eigenvalues[k].clamp(0.0, 1.0);
        let c = lam.sqrt();
        let s = (1.0 - lam).sqrt();
        if c < tolerance::ANGLE_FLOOR || s < tolerance::ANGLE_FLOOR {
            return Err(Error::AngleFloor {
                value: c.min(s),
                floor: tolerance::ANGLE_FLOOR,
            });
        }
        c_diag.push(c);
        s_diag.push(s);
        let mut v = DVector::<Complex64>::zeros(x_cols[0].len());
        for (idx, col) in x_cols.iter().enumerate() {
            v += col * a_eig.eigenvectors.m[(idx, k)];
        }
        x_rotated.push(v);
    }
    x_cols = x_rotated;

    // rotate Y so the off-diagonal block becomes the Hermitian factor of K;
    // K = UΣV† gives the unitary V U†, and K·(V U†) = U Σ U† ⪰ 0
    let mut k_block = DMatrix::<Complex64>::zeros(m, m);
    let projected_y: Vec<DVector<Complex64>> =
        y_cols.iter().map(|y| &p.matrix().m * y).collect();
    for (i, x) in x_cols.iter().enumerate() {
        for (j, py) in projected_y.iter().enumerate() {
            k_block[(i, j)] = x.dotc(py);
        }
    }
    // polar rotation K = UΣV† → V U†, via the Hermitian-eigen SVD route;
    // K is invertible here (all singular values are cᵢsᵢ > 0)
    let triples = eigen::singular_triples(&ComplexMatrix { m: k_block }, 0.0)?;
    if triples.values.len() != m {
        return Err(Error::InternalConsistency {
            what: "off-diagonal generic block rank",
            amount: triples.values.len() as f64 - m as f64,
        });
    }
    let mut rotation = DMatrix::<Complex64>::zeros(m, m);
    for (u, v) in triples.left.iter().zip(&triples.right) {
        for i in 0..m {
            for j in 0..m {
                rotation[(i, j)] += v[i] * u[j].conj();
            }
        }
    }
    let mut y_rotated: Vec<DVector<Complex64>> = Vec::with_capacity(m);
    for jj in 0..m {
        let mut v = DVector::<Complex64>::zeros(y_cols[0].len());
        for (idx, col) in y_cols.iter().enumerate() {
            v += col * rotation[(idx, jj)];
        }
        y_rotated.push(v);
    }
    y_cols = y_rotated;

    Ok((x_cols, y_cols, c_diag, s_diag))
}

fn validate_decomposition(
    dec: &CSDecomposition,
    p: &Projector,
    q: &Projector,
    tol: f64,
) -> Result<()> {
    let unit = dec.u.unitarity_residual();
    if unit > tolerance::UNITARY_TOL {
        return Err(Error::NotUnitary { residual: unit });
    }
    let (p_block, q_block) = canonical_projector_blocks(dec);
    let p_trans = &(&dec.u * p.matrix()) * &dec.u.adjoint();
    let q_trans = &(&dec.u * q.matrix()) * &dec.u.adjoint();
    let rp = (&p_trans - &p_block).max_norm();
    let rq = (&q_trans - &q_block).max_norm();
    if rp.max(rq) > tol {
        return Err(Error::SectorOrthogonality {
            residual: rp.max(rq),
            tolerance: tol,
        });
    }
    Ok(())
}

/// Assembles square blocks into a block-diagonal matrix.
pub(crate) fn block_diagonal(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let dim: usize = blocks.iter().map(|b| b.dim()).sum();
    let mut out = ComplexMatrix::zeros(dim);
    let mut off = 0usize;
    for b in blocks {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                out.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.dim();
    }
    out
}

/// The generic 2m×2m blocks (P̂, Q̂); `None` when the pair commutes (m = 0).
pub fn generic_blocks(dec: &CSDecomposition) -> Option<(Projector, Projector)> {
    let m = dec.signature.generic;
    if m == 0 {
        return None;
    }
    let c2 = &dec.c * &dec.c;
    let s2 = &dec.s * &dec.s;
    let cs = &dec.c * &dec.s;
    let mut p_hat = ComplexMatrix::zeros(2 * m);
    let mut q_hat = ComplexMatrix::zeros(2 * m);
    for i in 0..m {
        for j in 0..m {
            p_hat.set(i, j, c2.get(i, j));
            p_hat.set(i, m + j, cs.get(i, j));
            p_hat.set(m + i, j, cs.get(i, j));
            p_hat.set(m + i, m + j, s2.get(i, j));
        }
        q_hat.set(i, i, Complex64::new(1.0, 0.0));
    }
    let p_proj = Projector::new(p_hat).expect("CS generic block is a projector");
    let q_proj = Projector::from_parts_unchecked(q_hat, m);
    Some((p_proj, q_proj))
}

/// Block forms of P and Q in the adapted basis: dg[P̂,I,0,I,0], dg[Q̂,I,I,0,0].
pub fn canonical_projector_blocks(dec: &CSDecomposition) -> (ComplexMatrix, ComplexMatrix) {
    let sig = &dec.signature;
    let (p_hat, q_hat) = match generic_blocks(dec) {
        Some((p, q)) => (p.matrix().clone(), q.matrix().clone()),
        None => (ComplexMatrix::zeros(0), ComplexMatrix::zeros(0)),
    };
    let p_block = block_diagonal(&[
        p_hat,
        ComplexMatrix::identity(sig.in_both),
        ComplexMatrix::zeros(sig.in_q_only),
        ComplexMatrix::identity(sig.in_p_only),
        ComplexMatrix::zeros(sig.in_neither),
    ]);
    let q_block = block_diagonal(&[
        q_hat,
        ComplexMatrix::identity(sig.in_both),
        ComplexMatrix::identity(sig.in_q_only),
        ComplexMatrix::zeros(sig.in_p_only),
        ComplexMatrix::zeros(sig.in_neither),
    ]);
    (p_block, q_block)
}

/// Rebuilds (P, Q) from the decomposition data.
pub fn reconstruct(dec: &CSDecomposition) -> Result<(Projector, Projector)> {
    let (p_block, q_block) = canonical_projector_blocks(dec);
    let u_cols = dec.u.adjoint();
    let p = &(&u_cols * &p_block) * &dec.u;
    let q = &(&u_cols * &q_block) * &dec.u;
    let sig = &dec.signature;
    let p_proj = Projector::new(p.hermitian_part())?;
    let q_proj = Projector::new(q.hermitian_part())?;
    if p_proj.rank() != sig.generic + sig.in_both + sig.in_p_only {
        return Err(Error::InternalConsistency {
            what: "reconstructed P rank",
            amount: p_proj.rank() as f64,
        });
    }
    if q_proj.rank() != sig.generic + sig.in_both + sig.in_q_only {
        return Err(Error::InternalConsistency {
            what: "reconstructed Q rank",
            amount: q_proj.rank() as f64,
        });
    }
    Ok((p_proj, q_proj))
}

/// Report for the generic-block relations P̂∨Q̂ = I, P̂∧Q̂ = 0, tr P̂ = tr Q̂ = m.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenericRelationsReport {
    pub vacuous: bool,
    pub join_residual: f64,
    pub meet_residual: f64,
    pub trace_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn generic_relations_check(dec: &CSDecomposition) -> Result<GenericRelationsReport> {
    let tol = tolerance::CS_BLOCK_TOL;
    let Some((p_hat, q_hat)) = generic_blocks(dec) else {
        return Ok(GenericRelationsReport {
            vacuous: true,
            join_residual: 0.0,
            meet_residual: 0.0,
            trace_residual: 0.0,
            tolerance: tol,
            pass: true,
        });
    };
    let m = dec.signature.generic as f64;
    let join = lattice::join(&p_hat, &q_hat, lattice::MeetJoinMethod::Spectral)?;
    let meet = lattice::meet(&p_hat, &q_hat, lattice::MeetJoinMethod::Spectral)?;
    let join_residual =
        (join.matrix() - &ComplexMatrix::identity(2 * dec.signature.generic)).max_norm();
    let meet_residual = meet.matrix().max_norm();
    let trace_residual = (p_hat.matrix().trace_re() - m)
        .abs()
        .max((q_hat.matrix().trace_re() - m).abs());
    let pass = join_residual <= tol && meet_residual <= tol && trace_residual <= tol;
    Ok(GenericRelationsReport {
        vacuous: false,
        join_residual,
        meet_residual,
        trace_residual,
        tolerance: tol,
        pass,
    })
}

/// Canonical probability operators in the adapted basis:
/// upper = dg[I − (P̂−Q̂)², I, 0, 0, 0], lower = dg[0, I, 0, 0, 0].
pub fn canonical_imprecise(dec: &CSDecomposition) -> (HermitianOperator, Projector) {
    let sig = &dec.signature;
    let upper_generic = match generic_blocks(dec) {
        Some((p_hat, q_hat)) => {
            let diff = p_hat.matrix() - q_hat.matrix();
            let sq = &diff * &diff;
            &ComplexMatrix::identity(2 * sig.generic) - &sq
        }
        None => ComplexMatrix::zeros(0),
    };
    let upper = block_diagonal(&[
        upper_generic,
        ComplexMatrix::identity(sig.in_both),
        ComplexMatrix::zeros(sig.in_q_only),
        ComplexMatrix::zeros(sig.in_p_only),
        ComplexMatrix::zeros(sig.in_neither),
    ]);
    let lower = block_diagonal(&[
        ComplexMatrix::zeros(2 * sig.generic),
        ComplexMatrix::identity(sig.in_both),
        ComplexMatrix::zeros(sig.in_q_only),
        ComplexMatrix::zeros(sig.in_p_only),
        ComplexMatrix::zeros(sig.in_neither),
    ]);
    (
        HermitianOperator::symmetrized(&upper),
        Projector::from_parts_unchecked(lower, sig.in_both),
    )
}

/// Conjugates a block-basis operator back to the original basis: u† · M · u.
pub fn to_original_basis(dec: &CSDecomposition, block: &ComplexMatrix) -> ComplexMatrix {
    &(&dec.u.adjoint() * block) * &dec.u
}

/// Meet computed through the decomposition: the projector onto the
/// `in_both` sector columns.
pub(crate) fn meet_via_decomposition(p: &Projector, q: &Projector) -> Result<Projector> {
    let dec = cs_decompose(p, q, tolerance::CS_BLOCK_TOL)?;
    let (offset, size) = dec.signature.sector_spans()[1];
    let u_cols = dec.u.adjoint();
    let cols: Vec<DVector<Complex64>> = (offset..offset + size)
        .map(|j| u_cols.m.column(j).into_owned())
        .collect();
    let refs: Vec<&DVector<Complex64>> = cols.iter().collect();
    Ok(Projector::from_orthonormal_columns(p.dim(), &refs))
}
