//! Centralized numerical tolerances.
//!
//! Everything here is sized for IEEE 754 f64 with dense operator products up
//! to dimension 256, which leaves several orders of magnitude of headroom
//! between honest rounding noise and the acceptance thresholds.

/// Hermiticity certification: max-norm of M - M†.
pub const HERM_TOL: f64 = 1e-10;

/// Projector idempotency certification: max-norm of P² - P.
pub const IDEM_TOL: f64 = 1e-10;

/// Density matrices may dip below zero by this much (smallest eigenvalue).
pub const PSD_TOL: f64 = 1e-10;

/// Unit-trace certification for density matrices.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigensystem post-condition: reconstruction and orthonormality residual.
pub const EIG_TOL: f64 = 1e-11;

/// Moore–Penrose residuals on well-conditioned inputs.
pub const PINV_TOL: f64 = 1e-10;

/// Imaginary residue allowed in Born expectations tr(ρΩ).
pub const BORN_IMAG_TOL: f64 = 1e-10;

/// Projector certification rejects eigenvalues farther than this from {0,1};
/// snapping uses threshold 0.5.
pub const SNAP_REJECT_TOL: f64 = 1e-8;

/// Spectral meet: eigenvalues of P+Q within this of 2 count as intersection.
pub const MEET_EIG_TOL: f64 = 1e-8;

/// Iterated-power meet: Frobenius gap between successive squarings.
pub const ITERATE_FRO_TOL: f64 = 1e-12;

/// Iterated-power meet cap: 2^20 effective powers via repeated squaring.
pub const ITERATE_MAX_SQUARINGS: usize = 20;

/// Independent meet/join algorithms must agree to this in max-norm.
pub const METHOD_AGREEMENT_TOL: f64 = 1e-8;

/// Löwner-order slack used for lattice and axiom orderings.
pub const LOEWNER_TOL: f64 = 1e-9;

/// Residual allowed in PP' = P'P = P' for an ordered projector pair.
pub const ORDER_PRODUCT_TOL: f64 = 1e-9;

/// Commuting pairs reduce to PQ within this.
pub const COMMUTING_REDUCTION_TOL: f64 = 1e-9;

/// Two operators count as commuting when the commutator max-norm is below this.
pub const COMMUTATION_EXACT_TOL: f64 = 1e-12;

/// Argument symmetry of meet/join and of the probability operators.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Trace identity tr(P∨Q)+tr(P∧Q)=tr P+tr Q and integer-trace residuals.
pub const TRACE_IDENTITY_TOL: f64 = 1e-8;

/// Residual tolerance for the probability-operator axioms.
pub const AXIOM_TOL: f64 = 1e-9;

/// Imaginary residue of tr(ρPQ) for states commuting with P or Q.
pub const STATE_IMAG_TOL: f64 = 1e-10;

/// Probability intervals clamp to [0,1] only within this of the boundary.
pub const INTERVAL_CLAMP_TOL: f64 = 1e-9;

/// lower ≤ upper slack inside a probability interval.
pub const INTERVAL_ORDER_TOL: f64 = 1e-12;

/// Unitarity certification: max-norm of U†U - I.
pub const UNITARY_TOL: f64 = 1e-10;

/// Block reproduction residual for a CS decomposition.
pub const CS_BLOCK_TOL: f64 = 1e-9;

/// Round-trip residual decompose → reconstruct.
pub const CS_ROUNDTRIP_TOL: f64 = 1e-9;

/// Principal angles this close to 0 or π/2 belong to commuting sectors.
pub const ANGLE_FLOOR: f64 = 1e-6;

/// The upper-probability gap must be PSD within this.
pub const GAP_PSD_TOL: f64 = 1e-9;

/// Transported gap vs block form, and off-block leakage.
pub const GAP_BLOCK_TOL: f64 = 1e-8;

/// Gap max-norm when either pair commutes.
pub const GAP_VANISH_TOL: f64 = 1e-9;

/// Triple equality of the lower-operator factorization.
pub const LOWER_LOCALITY_TOL: f64 = 1e-8;

/// Tensor-block identities on the generic sectors.
pub const PRODUCT_IDENTITY_TOL: f64 = 1e-8;

/// Exact-value reproduction for the spin-½ example.
pub const SPIN_EXACT_TOL: f64 = 1e-12;

/// Dual-route agreement of the separable witness.
pub const WITNESS_TOL: f64 = 1e-12;

/// Default relative rank cutoff for the pseudo-inverse, scaled by dimension.
pub fn default_rank_rtol(dim: usize) -> f64 {
    dim.max(1) as f64 * f64::EPSILON
}
