//! Lower/upper probability operators and the axiom validator.
//!
//! For a projector pair the lower operator is the meet P∧Q and the upper
//! operator is P∨Q − (P−Q)². Born expectations of the two operators bound
//! every admissible joint probability of the pair; commuting pairs collapse
//! the interval to the classical value tr(ρPQ).

use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::lattice::{self, MeetJoinMethod};
use crate::matrix::ComplexMatrix;
use crate::operators::{born_expectation, DensityMatrix, HermitianOperator, Projector};
use crate::random::{certify_unitary, commuting_states};
use crate::report::CheckSet;
use crate::tolerance;

/// ω̲(P,Q) = P∧Q. Symmetric in its arguments.
pub fn lower_operator(p: &Projector, q: &Projector) -> Result<Projector> {
    lattice::meet(p, q, MeetJoinMethod::Spectral)
}

/// ω̄(P,Q) = P∨Q − (P−Q)².
///
/// The result is validated positive semidefinite, below the identity, and
/// commuting with both arguments, all within `AXIOM_TOL`.
pub fn upper_operator(p: &Projector, q: &Projector) -> Result<HermitianOperator> {
    let join = lattice::join(p, q, MeetJoinMethod::Spectral)?;
    let diff = p.matrix() - q.matrix();
    let omega = (join.matrix() - &(&diff * &diff)).hermitian_part();
    let op = HermitianOperator::new(omega)?;

    let vals = eigen::eigenvalues_only(op.matrix());
    let min = vals.first().copied().unwrap_or(0.0);
    let max = vals.last().copied().unwrap_or(0.0);
    if min < -tolerance::AXIOM_TOL {
        return Err(Error::InternalConsistency {
            what: "upper operator positivity",
            amount: -min,
        });
    }
    if max > 1.0 + tolerance::AXIOM_TOL {
        return Err(Error::InternalConsistency {
            what: "upper operator exceeds identity",
            amount: max - 1.0,
        });
    }
    for other in [p.matrix(), q.matrix()] {
        let comm = op.matrix().commutator(other)?.max_norm();
        if comm > tolerance::AXIOM_TOL {
            return Err(Error::InternalConsistency {
                what: "upper operator commutation",
                amount: comm,
            });
        }
    }
    Ok(op)
}

/// Both probability operators for a pair, with the sources they came from.
#[derive(Debug, Clone)]
pub struct ImpreciseOperatorPair {
    pub lower: Projector,
    pub upper: HermitianOperator,
    pub source_p: Projector,
    pub source_q: Projector,
}

impl ImpreciseOperatorPair {
    pub fn compute(p: &Projector, q: &Projector) -> Result<Self> {
        Ok(Self {
            lower: lower_operator(p, q)?,
            upper: upper_operator(p, q)?,
            source_p: p.clone(),
            source_q: q.clone(),
        })
    }
}

/// Interval [lower, upper] ⊆ [0,1] of admissible probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityInterval {
    pub lower: f64,
    pub upper: f64,
}

impl ProbabilityInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower > upper + tolerance::INTERVAL_ORDER_TOL {
            return Err(Error::InternalConsistency {
                what: "interval ordering",
                amount: lower - upper,
            });
        }
        if !(0.0..=1.0).contains(&lower) || !(0.0..=1.0).contains(&upper) {
            return Err(Error::ParameterDomain(format!(
                "interval [{lower}, {upper}] outside [0,1]"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn clamp_unit(value: f64, what: &'static str) -> Result<f64> {
    if value < -tolerance::INTERVAL_CLAMP_TOL || value > 1.0 + tolerance::INTERVAL_CLAMP_TOL {
        return Err(Error::InternalConsistency {
            what,
            amount: value.min(0.0).abs().max(value - 1.0),
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Born interval (tr(ρω̲), tr(ρω̄)); values clamp to [0,1] only when within
/// `INTERVAL_CLAMP_TOL` of the boundary.
pub fn imprecise_probability(
    rho: &DensityMatrix,
    p: &Projector,
    q: &Projector,
) -> Result<ProbabilityInterval> {
    let ops = ImpreciseOperatorPair::compute(p, q)?;
    let lower = born_expectation(rho, ops.lower.operator())?;
    let upper = born_expectation(rho, &ops.upper)?;
    ProbabilityInterval::new(
        clamp_unit(lower, "lower probability outside [0,1]")?,
        clamp_unit(upper, "upper probability outside [0,1]")?,
    )
}

/// Interval consistency: `b` holds simultaneously with (is coarser than) `a`
/// iff b.lower ≤ a.lower and b.upper ≥ a.upper.
pub fn interval_consistent(a: &ProbabilityInterval, b: &ProbabilityInterval) -> bool {
    b.lower <= a.lower && b.upper >= a.upper
}

/// A family {P_a} with ΣP_a = I and pairwise orthogonality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectorResolution {
    parts: Vec<Projector>,
}

impl ProjectorResolution {
    pub fn new(parts: Vec<Projector>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::EmptyInput("resolution of identity"));
        }
        let dim = parts[0].dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for part in &parts {
            part.matrix().check_same_dim(&sum)?;
            sum = &sum + part.matrix();
        }
        let sum_residual = (&sum - &ComplexMatrix::identity(dim)).max_norm();
        if sum_residual > 1e-10 {
            return Err(Error::InvalidResolution {
                reason: "parts do not sum to identity",
                residual: sum_residual,
            });
        }
        for (i, a) in parts.iter().enumerate() {
            for b in parts.iter().skip(i + 1) {
                let cross = (a.matrix() * b.matrix()).max_norm();
                if cross > 1e-10 {
                    return Err(Error::InvalidResolution {
                        reason: "parts are not pairwise orthogonal",
                        residual: cross,
                    });
                }
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[Projector] {
        &self.parts
    }

    pub fn dim(&self) -> usize {
        self.parts[0].dim()
    }
}

/// Axiom report for one projector pair.
///
/// `monotonicity_holds` records whether ω̄(P,Q) ≤ Q happened to hold; it is
/// an observation, not a pass/fail gate — monotonicity is expected to fail
/// for generic non-commuting pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairValidationReport {
    pub checks: CheckSet,
    pub monotonicity_holds: bool,
}

impl PairValidationReport {
    pub fn pass(&self) -> bool {
        self.checks.all_pass()
    }
}

const MIXTURE_WEIGHTS: [f64; 4] = [0.0, 0.3, 0.7, 1.0];

/// Runs every probability-operator axiom on one pair: ordering, symmetry,
/// commutation, commuting reduction, consistency with classical values on
/// compatible states, joint commutation, the sandwich bounds, sub- and
/// super-additivity over the given resolution, and unitary covariance.
pub fn validate_pair(
    p: &Projector,
    q: &Projector,
    states: &[DensityMatrix],
    resolution: &ProjectorResolution,
    u: &ComplexMatrix,
) -> Result<PairValidationReport> {
    p.matrix().check_same_dim(q.matrix())?;
    if resolution.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            left: resolution.dim(),
            right: p.dim(),
        });
    }
    u.check_same_dim(p.matrix())?;
    certify_unitary(u)?;

    let mut checks = CheckSet::new();
    let tol = tolerance::AXIOM_TOL;

    let ops = ImpreciseOperatorPair::compute(p, q)?;
    let lower = ops.lower.matrix();
    let upper = ops.upper.matrix();
    let dim = p.dim();
    let id = ComplexMatrix::identity(dim);

    // ordering chain 0 ≤ ω̲ ≤ ω̄ ≤ I
    checks.record(
        "ordering_lower_nonnegative",
        (-eigen::min_eigenvalue(lower)).max(0.0),
        tol,
    );
    checks.record(
        "ordering_lower_below_upper",
        (-eigen::min_eigenvalue(&(upper - lower))).max(0.0),
        tol,
    );
    checks.record(
        "ordering_upper_below_identity",
        (-eigen::min_eigenvalue(&(&id - upper))).max(0.0),
        tol,
    );

    // symmetry in the arguments
    let swapped = ImpreciseOperatorPair::compute(q, p)?;
    checks.record(
        "symmetry_lower",
        (lower - swapped.lower.matrix()).max_norm(),
        tolerance::SYMMETRY_TOL,
    );
    checks.record(
        "symmetry_upper",
        (upper - swapped.upper.matrix()).max_norm(),
        tolerance::SYMMETRY_TOL,
    );

    // both operators commute with both arguments
    checks.record(
        "commutation_lower",
        lower
            .commutator(p.matrix())?
            .max_norm()
            .max(lower.commutator(q.matrix())?.max_norm()),
        tol,
    );
    checks.record(
        "commutation_upper",
        upper
            .commutator(p.matrix())?
            .max_norm()
            .max(upper.commutator(q.matrix())?.max_norm()),
        tol,
    );

    // commuting pairs reduce to the classical product
    let commutator_norm = p.matrix().commutator(q.matrix())?.max_norm();
    if commutator_norm <= tolerance::COMMUTATION_EXACT_TOL {
        let pq = p.matrix() * q.matrix();
        let reduction = (lower - &pq).max_norm().max((upper - &pq).max_norm());
        checks.record(
            "commuting_reduction",
            reduction,
            tolerance::COMMUTING_REDUCTION_TOL,
        );
    } else {
        checks.record_vacuous("commuting_reduction");
    }

    // classical consistency on states commuting with P or with Q
    let mut consistency = 0.0f64;
    let mut imag_residue = 0.0f64;
    for anchor in [p, q] {
        for rho in commuting_states(anchor, &MIXTURE_WEIGHTS) {
            let pq = p.matrix() * q.matrix();
            let sym_avg = pq.hermitian_part();
            let classical = rho.matrix().product_trace(&sym_avg)?;
            let raw = rho.matrix().product_trace(&pq)?;
            imag_residue = imag_residue.max(raw.im.abs());
            let lo = born_expectation(&rho, ops.lower.operator())?;
            let hi = born_expectation(&rho, &ops.upper)?;
            consistency = consistency
                .max(lo - classical.re)
                .max(classical.re - hi);
        }
    }
    checks.record("state_consistency", consistency.max(0.0), tol);
    checks.record(
        "state_consistency_imag",
        imag_residue,
        tolerance::STATE_IMAG_TOL,
    );

    // the two probability operators commute with each other
    checks.record("joint_commutation", upper.commutator(lower)?.max_norm(), tol);

    // sandwich: ω̲ ≤ PQP, QPQ ≤ ω̄
    let pqp = &(p.matrix() * q.matrix()) * p.matrix();
    let qpq = &(q.matrix() * p.matrix()) * q.matrix();
    let sandwich = [
        eigen::min_eigenvalue(&(&pqp - lower)),
        eigen::min_eigenvalue(&(&qpq - lower)),
        eigen::min_eigenvalue(&(upper - &pqp)),
        eigen::min_eigenvalue(&(upper - &qpq)),
    ]
    .iter()
    .fold(0.0f64, |acc, &v| acc.max((-v).max(0.0)));
    checks.record("sandwich", sandwich, tol);

    // sub/super-additivity over the resolution
    let mut upper_sum = ComplexMatrix::zeros(dim);
    let mut lower_sum = ComplexMatrix::zeros(dim);
    for part in resolution.parts() {
        let member = ImpreciseOperatorPair::compute(part, q)?;
        upper_sum = &upper_sum + member.upper.matrix();
        lower_sum = &lower_sum + member.lower.matrix();
    }
    checks.record(
        "superadditivity_upper",
        (-eigen::min_eigenvalue(&(&upper_sum - q.matrix()))).max(0.0),
        tol,
    );
    checks.record(
        "subadditivity_lower",
        (-eigen::min_eigenvalue(&(q.matrix() - &lower_sum))).max(0.0),
        tol,
    );

    // unitary covariance
    let conj = |proj: &Projector| -> Result<Projector> {
        let rotated = &(u * proj.matrix()) * &u.adjoint();
        Projector::snap(&rotated.hermitian_part())
    };
    let p_rot = conj(p)?;
    let q_rot = conj(q)?;
    let rotated_ops = ImpreciseOperatorPair::compute(&p_rot, &q_rot)?;
    let transport = |mat: &ComplexMatrix| -> ComplexMatrix { &(u * mat) * &u.adjoint() };
    checks.record(
        "covariance_lower",
        (&transport(lower) - rotated_ops.lower.matrix()).max_norm(),
        tol,
    );
    checks.record(
        "covariance_upper",
        (&transport(upper) - rotated_ops.upper.matrix()).max_norm(),
        tol,
    );

    // interval bounds over the supplied states
    let mut interval_violation = 0.0f64;
    for rho in states {
        let lo = born_expectation(rho, ops.lower.operator())?;
        let hi = born_expectation(rho, &ops.upper)?;
        interval_violation = interval_violation
            .max(-lo)
            .max(lo - hi)
            .max(hi - 1.0);
    }
    checks.record("interval_bounds", interval_violation.max(0.0), tol);

    // observation, not an axiom: does ω̄(P,Q) ≤ Q hold?
    let monotonicity_holds =
        eigen::min_eigenvalue(&(q.matrix() - upper)) >= -tolerance::LOEWNER_TOL;

    Ok(PairValidationReport {
        checks,
        monotonicity_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{
        commuting_projector_pair, haar_random_projector, haar_random_unitary, random_density, Seed,
    };

    fn qubit_pair() -> (Projector, Projector) {
        let p = Projector::new(
            ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap(),
        )
        .unwrap();
        let q =
            Projector::new(ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, 1.0]).unwrap()).unwrap();
        (p, q)
    }

    #[test]
    fn qubit_lower_is_zero_upper_is_half_identity() {
        let (p, q) = qubit_pair();
        let lower = lower_operator(&p, &q).unwrap();
        assert_eq!(lower.rank(), 0);
        assert!(lower.matrix().max_norm() < 1e-12);
        // (P−Q)² = S²·I = I/2 here, and P∨Q = I, so ω̄ = I/2
        let upper = upper_operator(&p, &q).unwrap();
        let expected = ComplexMatrix::identity(2).scale(0.5);
        assert!((upper.matrix() - &expected).max_norm() < 1e-12);
    }

    #[test]
    fn commuting_pair_collapses_to_product() {
        let (p, q) = commuting_projector_pair(5, Seed(44)).unwrap();
        let pq = p.matrix() * q.matrix();
        let lower = lower_operator(&p, &q).unwrap();
        let upper = upper_operator(&p, &q).unwrap();
        assert!((lower.matrix() - &pq).max_norm() < 1e-9);
        assert!((upper.matrix() - &pq).max_norm() < 1e-9);
    }

    #[test]
    fn marginal_case_is_precise() {
        let p = haar_random_projector(4, 2, Seed(12)).unwrap();
        let id = Projector::identity(4);
        let lower = lower_operator(&p, &id).unwrap();
        let upper = upper_operator(&p, &id).unwrap();
        assert!((lower.matrix() - p.matrix()).max_norm() < 1e-9);
        assert!((upper.matrix() - p.matrix()).max_norm() < 1e-9);
    }

    #[test]
    fn qubit_interval_for_maximally_mixed() {
        let (p, q) = qubit_pair();
        let rho = DensityMatrix::maximally_mixed(2);
        let interval = imprecise_probability(&rho, &p, &q).unwrap();
        assert!(interval.lower.abs() < 1e-12);
        assert!((interval.upper - 0.5).abs() < 1e-12);
    }

    #[test]
    fn commuting_interval_degenerates() {
        let (p, q) = commuting_projector_pair(4, Seed(91)).unwrap();
        let rho = random_density(4, 4, Seed(92)).unwrap();
        let interval = imprecise_probability(&rho, &p, &q).unwrap();
        let classical = rho
            .matrix()
            .product_trace(&(p.matrix() * q.matrix()))
            .unwrap()
            .re;
        assert!((interval.lower - classical).abs() < 1e-9);
        assert!((interval.upper - classical).abs() < 1e-9);
    }

    #[test]
    fn consistency_examples() {
        let a = ProbabilityInterval::new(0.2, 0.4).unwrap();
        let non_informative = ProbabilityInterval::new(0.0, 1.0).unwrap();
        assert!(interval_consistent(&a, &non_informative));
        let tighter = ProbabilityInterval::new(0.3, 0.4).unwrap();
        assert!(!interval_consistent(&a, &tighter));
        assert!(interval_consistent(&a, &a));
    }

    #[test]
    fn validate_qubit_pair_passes_and_witnesses_monotonicity_failure() {
        let (p, q) = qubit_pair();
        let resolution =
            ProjectorResolution::new(vec![q.clone(), lattice::complement(&q)]).unwrap();
        let states = vec![
            DensityMatrix::maximally_mixed(2),
            random_density(2, 1, Seed(7)).unwrap(),
        ];
        // Hadamard-like rotation
        let r = 0.5f64.sqrt();
        let u = ComplexMatrix::from_real(2, &[r, r, r, -r]).unwrap();
        let report = validate_pair(&p, &q, &states, &resolution, &u).unwrap();
        assert!(report.pass(), "{:?}", report.checks.failures().collect::<Vec<_>>());
        // ω̄ = I/2 and Q has a zero eigenvalue, so ω̄ ≤ Q must fail
        assert!(!report.monotonicity_holds);
    }

    #[test]
    fn validate_commuting_pair_passes() {
        let (p, q) = commuting_projector_pair(4, Seed(33)).unwrap();
        let resolution =
            ProjectorResolution::new(vec![p.clone(), lattice::complement(&p)]).unwrap();
        let states = vec![random_density(4, 2, Seed(34)).unwrap()];
        let u = haar_random_unitary(4, Seed(35));
        let report = validate_pair(&p, &q, &states, &resolution, &u).unwrap();
        assert!(report.pass());
    }

    #[test]
    fn resolution_rejects_non_orthogonal_parts() {
        let p = haar_random_projector(4, 2, Seed(1)).unwrap();
        let q = haar_random_projector(4, 2, Seed(2)).unwrap();
        assert!(ProjectorResolution::new(vec![p, q]).is_err());
    }

    #[test]
    fn clamp_violation_is_an_error() {
        assert!(clamp_unit(0.5, "x").is_ok());
        assert!(clamp_unit(-1e-10, "x").is_ok());
        assert!(clamp_unit(-1e-6, "x").is_err());
        assert!(clamp_unit(1.0 + 1e-6, "x").is_err());
    }
}
