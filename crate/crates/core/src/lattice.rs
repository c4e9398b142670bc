//! Projector lattice: complement, meet, join.
//!
//! Meet and join each come in independent algorithmic routes so the campaign
//! can cross-validate them: a spectral route (eigenspace of P+Q), an
//! iterated-power route (repeated squaring of PQ), a pseudo-inverse route
//! for the join, and a route through the joint block decomposition. The
//! spectral route is the default; the iterated route converges as
//! (cos²θ)ⁿ in the smallest principal angle θ and is capped, reporting the
//! achieved gap on non-convergence so callers can fall back.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cs;
use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operators::{loewner_leq, Projector};
use crate::tolerance;

/// Algorithm selector for meet/join.
///
/// `PinvJoin` applies to the join only; `CsBased` routes through the joint
/// block decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeetJoinMethod {
    Iterate,
    Spectral,
    PinvJoin,
    CsBased,
}

impl MeetJoinMethod {
    fn name(self) -> &'static str {
        match self {
            MeetJoinMethod::Iterate => "iterate",
            MeetJoinMethod::Spectral => "spectral",
            MeetJoinMethod::PinvJoin => "pinv_join",
            MeetJoinMethod::CsBased => "cs_based",
        }
    }
}

/// Negation P⊥ = I − P. Involutive; rank is the co-rank.
pub fn complement(p: &Projector) -> Projector {
    let dim = p.dim();
    let mat = &ComplexMatrix::identity(dim) - p.matrix();
    Projector::from_parts_unchecked(mat, dim - p.rank())
}

/// Orthonormal basis of range(P) ∩ range(Q): the eigenvectors of P+Q with
/// eigenvalue within `MEET_EIG_TOL` of 2.
pub(crate) fn intersection_basis(
    p: &Projector,
    q: &Projector,
) -> Result<Vec<DVector<Complex64>>> {
    p.matrix().check_same_dim(q.matrix())?;
    let sum = p.matrix() + q.matrix();
    let es = eigen::eigh(&sum)?;
    let mut cols = Vec::new();
    for (k, &lam) in es.eigenvalues.iter().enumerate() {
        if 2.0 - lam <= tolerance::MEET_EIG_TOL {
            cols.push(es.eigenvectors.m.column(k).into_owned());
        }
    }
    Ok(cols)
}

fn meet_spectral(p: &Projector, q: &Projector) -> Result<Projector> {
    let cols = intersection_basis(p, q)?;
    let refs: Vec<&DVector<Complex64>> = cols.iter().collect();
    Ok(Projector::from_orthonormal_columns(p.dim(), &refs))
}

fn meet_iterate(p: &Projector, q: &Projector) -> Result<Projector> {
    p.matrix().check_same_dim(q.matrix())?;
    let mut m = p.matrix() * q.matrix();
    let mut gap = f64::INFINITY;
    for _ in 0..tolerance::ITERATE_MAX_SQUARINGS {
        let squared = &m * &m;
        gap = (&squared - &m).fro_norm();
        m = squared;
        if gap < tolerance::ITERATE_FRO_TOL {
            let sym = m.hermitian_part();
            return Projector::snap(&sym);
        }
    }
    Err(Error::NonConvergence {
        gap,
        squarings: tolerance::ITERATE_MAX_SQUARINGS,
    })
}

fn join_pinv(p: &Projector, q: &Projector) -> Result<Projector> {
    p.matrix().check_same_dim(q.matrix())?;
    let sum = p.matrix() + q.matrix();
    let pinv = eigen::pseudo_inverse(&sum, tolerance::default_rank_rtol(p.dim()))?;
    let product = (&sum * &pinv).hermitian_part();
    Projector::snap(&product)
}

/// P ∧ Q: projector onto the intersection of the ranges.
pub fn meet(p: &Projector, q: &Projector, method: MeetJoinMethod) -> Result<Projector> {
    match method {
        MeetJoinMethod::Spectral => meet_spectral(p, q),
        MeetJoinMethod::Iterate => meet_iterate(p, q),
        MeetJoinMethod::CsBased => cs::meet_via_decomposition(p, q),
        MeetJoinMethod::PinvJoin => Err(Error::MethodNotApplicable {
            method: method.name(),
            operation: "meet",
        }),
    }
}

/// P ∨ Q: projector onto the closed span of the union of ranges.
///
/// All routes except `PinvJoin` go through De Morgan: (P⊥ ∧ Q⊥)⊥.
pub fn join(p: &Projector, q: &Projector, method: MeetJoinMethod) -> Result<Projector> {
    match method {
        MeetJoinMethod::PinvJoin => join_pinv(p, q),
        _ => {
            let inner = meet(&complement(p), &complement(q), method)?;
            Ok(complement(&inner))
        }
    }
}

/// Report for the ordered-pair product identity PP' = P'P = P'.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderProductReport {
    pub left_residual: f64,
    pub right_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verifies PP' = P'P = P' for a pair with P' ≤ P in the Löwner order;
/// the precondition failing is reported as a distinct error.
pub fn order_product_check(p: &Projector, p_sub: &Projector) -> Result<OrderProductReport> {
    p.matrix().check_same_dim(p_sub.matrix())?;
    if !loewner_leq(p_sub.operator(), p.operator(), tolerance::LOEWNER_TOL)? {
        return Err(Error::PreconditionViolated(
            "order_product_check requires P' ≤ P",
        ));
    }
    let left = (&(p.matrix() * p_sub.matrix()) - p_sub.matrix()).max_norm();
    let right = (&(p_sub.matrix() * p.matrix()) - p_sub.matrix()).max_norm();
    let tol = tolerance::ORDER_PRODUCT_TOL;
    Ok(OrderProductReport {
        left_residual: left,
        right_residual: right,
        tolerance: tol,
        pass: left <= tol && right <= tol,
    })
}

/// Report for tr(P∨Q) + tr(P∧Q) = tr(P) + tr(Q).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionIdentityReport {
    pub trace_p: f64,
    pub trace_q: f64,
    pub trace_meet: f64,
    pub trace_join: f64,
    pub identity_residual: f64,
    pub integer_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks the rank-counting identity with all four traces integer.
pub fn dimension_identity_check(p: &Projector, q: &Projector) -> Result<DimensionIdentityReport> {
    let m = meet(p, q, MeetJoinMethod::Spectral)?;
    let j = join(p, q, MeetJoinMethod::Spectral)?;
    let tp = p.matrix().trace_re();
    let tq = q.matrix().trace_re();
    let tm = m.matrix().trace_re();
    let tj = j.matrix().trace_re();
    let identity_residual = ((tj + tm) - (tp + tq)).abs();
    let integer_residual = [tp, tq, tm, tj]
        .iter()
        .map(|t| (t - t.round()).abs())
        .fold(0.0f64, f64::max);
    let tol = tolerance::TRACE_IDENTITY_TOL;
    Ok(DimensionIdentityReport {
        trace_p: tp,
        trace_q: tq,
        trace_meet: tm,
        trace_join: tj,
        identity_residual,
        integer_residual,
        tolerance: tol,
        pass: identity_residual <= tol && integer_residual <= tol,
    })
}
