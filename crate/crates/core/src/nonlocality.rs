//! Two-particle analysis: tensor products, the factorization of the lower
//! probability operator, and the non-factorization gap of the upper one.
//!
//! For local pairs (P₁,Q₁) and (P₂,Q₂) the lower operator factorizes,
//!
//! ```text
//!   ω̲(P₁⊗P₂, Q₁⊗Q₂) = ω̲(P₁,Q₁) ⊗ ω̲(P₂,Q₂) = ω̲(P₁⊗Q₂, Q₁⊗P₂),
//! ```
//!
//! while the upper operator does not: the gap
//! ω̄(P₁,Q₁)⊗ω̄(P₂,Q₂) − ω̄(P₁⊗P₂, Q₁⊗Q₂) is positive semidefinite, vanishes
//! iff either pair commutes, and in the sector-product basis is supported
//! entirely on the (generic, generic) block, where it equals the upper
//! operator of the complemented generic blocks ω̄(P̂₁⊥⊗Q̂₂⊥, Q̂₁⊥⊗P̂₂⊥).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cs::{self, CSDecomposition, SECTOR_NAMES};
use crate::eigen;
use crate::error::{Error, Result};
use crate::imprecise::{lower_operator, upper_operator};
use crate::lattice::complement;
use crate::matrix::ComplexMatrix;
use crate::operators::{DensityMatrix, HermitianOperator, Projector};
use crate::report::CheckSet;
use crate::tolerance;

/// Standard left-to-right tensor (Kronecker) product.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let da = a.dim();
    let db = b.dim();
    ComplexMatrix::from_fn(da * db, |row, col| {
        let (i1, i2) = (row / db, row % db);
        let (j1, j2) = (col / db, col % db);
        a.get(i1, j1) * b.get(i2, j2)
    })
}

/// The swapped product A•B = B⊗A.
pub fn swap_kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    kron(b, a)
}

/// Permutation W with W(A⊗B)W† = B⊗A for every A of dimension `dim_a` and
/// B of dimension `dim_b`; depends only on the two dimensions.
pub fn swap_unitary(dim_a: usize, dim_b: usize) -> ComplexMatrix {
    let dim = dim_a * dim_b;
    let mut w = ComplexMatrix::zeros(dim);
    for i in 0..dim_a {
        for j in 0..dim_b {
            w.set(j * dim_a + i, i * dim_b + j, Complex64::new(1.0, 0.0));
        }
    }
    w
}

/// Tensor product of projectors, rank multiplicative.
pub fn kron_projector(a: &Projector, b: &Projector) -> Projector {
    let mat = kron(a.matrix(), b.matrix());
    Projector::from_parts_unchecked(mat, a.rank() * b.rank())
}

/// Two local projector pairs with their block decompositions.
#[derive(Debug, Clone)]
pub struct TwoParticleScene {
    p1: Projector,
    q1: Projector,
    p2: Projector,
    q2: Projector,
    cs1: CSDecomposition,
    cs2: CSDecomposition,
}

impl TwoParticleScene {
    /// Certifies the four projectors (snapping away drift) and decomposes
    /// both pairs.
    pub fn new(p1: &Projector, q1: &Projector, p2: &Projector, q2: &Projector) -> Result<Self> {
        p1.matrix().check_same_dim(q1.matrix())?;
        p2.matrix().check_same_dim(q2.matrix())?;
        let p1 = Projector::snap(p1.matrix())?;
        let q1 = Projector::snap(q1.matrix())?;
        let p2 = Projector::snap(p2.matrix())?;
        let q2 = Projector::snap(q2.matrix())?;
        let cs1 = cs::cs_decompose(&p1, &q1, tolerance::CS_BLOCK_TOL)?;
        let cs2 = cs::cs_decompose(&p2, &q2, tolerance::CS_BLOCK_TOL)?;
        Ok(Self {
            p1,
            q1,
            p2,
            q2,
            cs1,
            cs2,
        })
    }

    pub fn first_pair(&self) -> (&Projector, &Projector) {
        (&self.p1, &self.q1)
    }

    pub fn second_pair(&self) -> (&Projector, &Projector) {
        (&self.p2, &self.q2)
    }

    pub fn decomposition_1(&self) -> &CSDecomposition {
        &self.cs1
    }

    pub fn decomposition_2(&self) -> &CSDecomposition {
        &self.cs2
    }

    pub fn product_dim(&self) -> usize {
        self.p1.dim() * self.p2.dim()
    }

    /// True when the corresponding pair commutes (no generic sector).
    pub fn pair_commutes(&self, which: usize) -> bool {
        match which {
            1 => self.cs1.signature.generic == 0,
            _ => self.cs2.signature.generic == 0,
        }
    }
}

/// Report for the triple equality of the lower-operator factorization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LowerFactorizationReport {
    pub direct_vs_product: f64,
    pub direct_vs_swapped: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verifies ω̲(P₁⊗P₂, Q₁⊗Q₂) = ω̲(P₁,Q₁)⊗ω̲(P₂,Q₂) = ω̲(P₁⊗Q₂, Q₁⊗P₂).
pub fn lower_factorization_check(scene: &TwoParticleScene) -> Result<LowerFactorizationReport> {
    let (p1, q1) = scene.first_pair();
    let (p2, q2) = scene.second_pair();

    let direct = lower_operator(&kron_projector(p1, p2), &kron_projector(q1, q2))?;
    let local = kron(
        lower_operator(p1, q1)?.matrix(),
        lower_operator(p2, q2)?.matrix(),
    );
    let swapped = lower_operator(&kron_projector(p1, q2), &kron_projector(q1, p2))?;

    let direct_vs_product = (direct.matrix() - &local).max_norm();
    let direct_vs_swapped = (direct.matrix() - swapped.matrix()).max_norm();
    let tol = tolerance::LOWER_LOCALITY_TOL;
    Ok(LowerFactorizationReport {
        direct_vs_product,
        direct_vs_swapped,
        tolerance: tol,
        pass: direct_vs_product <= tol && direct_vs_swapped <= tol,
    })
}

/// One sector pair in the transported-basis ordering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectorPairEntry {
    pub first: String,
    pub second: String,
    pub dim: usize,
}

/// The upper-probability gap and its block structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapReport {
    /// ω̄(P₁,Q₁)⊗ω̄(P₂,Q₂) − ω̄(P₁⊗P₂, Q₁⊗Q₂) in the original basis.
    pub gap: HermitianOperator,
    /// Expected form in the sector-pair basis: zero outside the leading
    /// (generic, generic) block.
    pub block_form: HermitianOperator,
    /// Sector pairs in transport order, with their block dimensions.
    pub sector_map: Vec<SectorPairEntry>,
    /// ‖transported gap − block_form‖_max.
    pub residual: f64,
    /// Smallest eigenvalue of the gap (PSD means ≥ −GAP_PSD_TOL).
    pub min_eigenvalue: f64,
    /// Largest entry of the gap; ≤ GAP_VANISH_TOL when a pair commutes.
    pub max_norm: f64,
}

impl GapReport {
    pub fn psd_ok(&self) -> bool {
        self.min_eigenvalue >= -tolerance::GAP_PSD_TOL
    }

    pub fn block_form_ok(&self) -> bool {
        self.residual <= tolerance::GAP_BLOCK_TOL
    }
}

fn sector_pair_permutation(
    spans1: &[(usize, usize)],
    spans2: &[(usize, usize)],
    d2: usize,
) -> Vec<usize> {
    let mut perm = Vec::new();
    for &(off1, s1) in spans1 {
        for &(off2, s2) in spans2 {
            for i in off1..off1 + s1 {
                for j in off2..off2 + s2 {
                    perm.push(i * d2 + j);
                }
            }
        }
    }
    perm
}

fn permute_conjugate(m: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    ComplexMatrix::from_fn(perm.len(), |r, c| m.get(perm[r], perm[c]))
}

/// Computes the gap ω̄⊗ω̄ − ω̄(⊗-pair), transports it to the sector-pair
/// basis, and compares with the single-block form predicted on the
/// (generic, generic) sector.
pub fn upper_gap(scene: &TwoParticleScene) -> Result<GapReport> {
    let (p1, q1) = scene.first_pair();
    let (p2, q2) = scene.second_pair();

    let w1 = upper_operator(p1, q1)?;
    let w2 = upper_operator(p2, q2)?;
    let local = kron(w1.matrix(), w2.matrix());

    let joint = upper_operator(&kron_projector(p1, p2), &kron_projector(q1, q2))?;
    let gap_matrix = (&local - joint.matrix()).hermitian_part();
    let min_eigenvalue = eigen::min_eigenvalue(&gap_matrix);
    let max_norm = gap_matrix.max_norm();

    // transport: rows of U are the adapted basis, so conjugate by U₁⊗U₂ and
    // regroup indices by sector pair
    let u12 = kron(&scene.cs1.u, &scene.cs2.u);
    let transported = &(&u12 * &gap_matrix) * &u12.adjoint();
    let spans1 = scene.cs1.signature.sector_spans();
    let spans2 = scene.cs2.signature.sector_spans();
    let d2 = p2.dim();
    let perm = sector_pair_permutation(&spans1, &spans2, d2);
    let regrouped = permute_conjugate(&transported, &perm);

    let dim = scene.product_dim();
    let mut block_form = ComplexMatrix::zeros(dim);
    let g1 = scene.cs1.signature.generic;
    let g2 = scene.cs2.signature.generic;
    if g1 > 0 && g2 > 0 {
        let (p1_hat, q1_hat) = cs::generic_blocks(&scene.cs1).expect("g1 > 0");
        let (p2_hat, q2_hat) = cs::generic_blocks(&scene.cs2).expect("g2 > 0");
        let left = kron_projector(&complement(&p1_hat), &complement(&q2_hat));
        let right = kron_projector(&complement(&q1_hat), &complement(&p2_hat));
        let leading = upper_operator(&left, &right)?;
        for i in 0..leading.dim() {
            for j in 0..leading.dim() {
                block_form.set(i, j, leading.matrix().get(i, j));
            }
        }
    }
    let residual = (&regrouped - &block_form).max_norm();

    let mut sector_map = Vec::new();
    for (a, &(_, s1)) in spans1.iter().enumerate() {
        for (b, &(_, s2)) in spans2.iter().enumerate() {
            if s1 > 0 && s2 > 0 {
                sector_map.push(SectorPairEntry {
                    first: SECTOR_NAMES[a].to_string(),
                    second: SECTOR_NAMES[b].to_string(),
                    dim: s1 * s2,
                });
            }
        }
    }

    Ok(GapReport {
        gap: HermitianOperator::symmetrized(&gap_matrix),
        block_form: HermitianOperator::symmetrized(&block_form),
        sector_map,
        residual,
        min_eigenvalue,
        max_norm,
    })
}

/// Difference of the two pairings of the same four local projectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairingReport {
    /// ω̄(P₁⊗P₂, Q₁⊗Q₂) − ω̄(P₁⊗Q₂, Q₁⊗P₂).
    pub difference: HermitianOperator,
    pub max_norm: f64,
    pub trace: f64,
}

/// The upper operator depends on how the four local projectors pair up;
/// the two choices share a spectrum, so the difference is traceless.
pub fn pairing_difference(scene: &TwoParticleScene) -> Result<PairingReport> {
    let (p1, q1) = scene.first_pair();
    let (p2, q2) = scene.second_pair();
    let direct = upper_operator(&kron_projector(p1, p2), &kron_projector(q1, q2))?;
    let swapped = upper_operator(&kron_projector(p1, q2), &kron_projector(q1, p2))?;
    let difference = (direct.matrix() - swapped.matrix()).hermitian_part();
    Ok(PairingReport {
        max_norm: difference.max_norm(),
        trace: difference.trace_re(),
        difference: HermitianOperator::symmetrized(&difference),
    })
}

/// The spin-½ x/z pair under the sign convention that reproduces the
/// reference two-particle matrices entrywise: P = (1−σx)/2, Q = (1−σz)/2.
pub fn spin_pair() -> (Projector, Projector) {
    let p = Projector::new(ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap())
        .expect("spin projector");
    let q = Projector::new(ComplexMatrix::from_real(2, &[0.0, 0.0, 0.0, 1.0]).unwrap())
        .expect("spin projector");
    (p, q)
}

fn spin_scene() -> TwoParticleScene {
    let (p, q) = spin_pair();
    TwoParticleScene::new(&p, &q, &p, &q).expect("spin scene")
}

/// Single-particle state [[a, b e^{iφ}],[b e^{-iφ}, 1−a]].
pub fn witness_state(a: f64, b: f64, phi: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::ParameterDomain(format!("a = {a} outside [0,1]")));
    }
    if b * b > a * (1.0 - a) + 1e-12 {
        return Err(Error::ParameterDomain(format!(
            "b² = {} exceeds a(1−a) = {}",
            b * b,
            a * (1.0 - a)
        )));
    }
    if !(0.0..std::f64::consts::TAU).contains(&phi) {
        return Err(Error::ParameterDomain(format!(
            "phi = {phi} outside [0, 2π)"
        )));
    }
    let off = Complex64::new(b * phi.cos(), b * phi.sin());
    let mat = ComplexMatrix::from_rows(vec![
        vec![Complex64::new(a, 0.0), off],
        vec![off.conj(), Complex64::new(1.0 - a, 0.0)],
    ])?;
    DensityMatrix::new(mat)
}

/// Dual-route evaluation of the separable witness tr(D·ρ⊗ρ).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WitnessValue {
    pub numeric: f64,
    pub closed_form: f64,
}

impl WitnessValue {
    pub fn mismatch(&self) -> f64 {
        (self.numeric - self.closed_form).abs()
    }
}

/// Evaluates tr(D ρ⊗ρ) for the spin example both numerically and via the
/// closed form ((1−2a)² + 4b² + 4b(1−2a)cos φ)/12.
pub fn separable_witness(a: f64, b: f64, phi: f64) -> Result<WitnessValue> {
    let rho = witness_state(a, b, phi)?;
    let scene = spin_scene();
    let pairing = pairing_difference(&scene)?;
    let product_state = kron(rho.matrix(), rho.matrix());
    let tr = pairing.difference.matrix().product_trace(&product_state)?;
    if tr.im.abs() > tolerance::BORN_IMAG_TOL {
        return Err(Error::InternalConsistency {
            what: "imaginary residue of witness trace",
            amount: tr.im.abs(),
        });
    }
    let closed_form =
        ((1.0 - 2.0 * a).powi(2) + 4.0 * b * b + 4.0 * b * (1.0 - 2.0 * a) * phi.cos()) / 12.0;
    Ok(WitnessValue {
        numeric: tr.re,
        closed_form,
    })
}

/// Identity checks on the generic blocks of a scene.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductIdentitiesReport {
    /// True when either pair commutes, leaving nothing to check.
    pub vacuous: bool,
    pub checks: CheckSet,
}

impl ProductIdentitiesReport {
    pub fn pass(&self) -> bool {
        self.checks.all_pass()
    }
}

/// On the generic blocks P̂₁, Q̂₁, P̂₂, Q̂₂ verifies the tensor-block
/// identities behind the gap theorem: the squared-difference identity, the
/// complementary joins summing to the identity, cross-orthogonality, the
/// vanishing meets, integer trace bookkeeping, and the block-regrouping of
/// a tensor product of block-diagonal matrices.
pub fn product_identities_check(scene: &TwoParticleScene) -> Result<ProductIdentitiesReport> {
    let g1 = scene.cs1.signature.generic;
    let g2 = scene.cs2.signature.generic;
    if g1 == 0 || g2 == 0 {
        return Ok(ProductIdentitiesReport {
            vacuous: true,
            checks: CheckSet::new(),
        });
    }
    let tol = tolerance::PRODUCT_IDENTITY_TOL;
    let mut checks = CheckSet::new();

    let (p1, q1) = cs::generic_blocks(&scene.cs1).expect("g1 > 0");
    let (p2, q2) = cs::generic_blocks(&scene.cs2).expect("g2 > 0");
    let p1c = complement(&p1);
    let q1c = complement(&q1);
    let p2c = complement(&p2);
    let q2c = complement(&q2);

    let pp = kron_projector(&p1, &p2);
    let qq = kron_projector(&q1, &q2);
    let left_cross = kron_projector(&p1c, &q2c);
    let right_cross = kron_projector(&q1c, &p2c);
    let dim = pp.dim();
    let id = ComplexMatrix::identity(dim);

    // (P̂₁⊥⊗Q̂₂⊥ − Q̂₁⊥⊗P̂₂⊥)² = I − (P̂₁⊗P̂₂ − Q̂₁⊗Q̂₂)²
    //                           − (I−(P̂₁−Q̂₁)²)⊗(I−(P̂₂−Q̂₂)²)
    let cross_diff = left_cross.matrix() - right_cross.matrix();
    let lhs = &cross_diff * &cross_diff;
    let direct_diff = pp.matrix() - qq.matrix();
    let w1 = {
        let d = p1.matrix() - q1.matrix();
        &ComplexMatrix::identity(2 * g1) - &(&d * &d)
    };
    let w2 = {
        let d = p2.matrix() - q2.matrix();
        &ComplexMatrix::identity(2 * g2) - &(&d * &d)
    };
    let rhs = &(&id - &(&direct_diff * &direct_diff)) - &kron(&w1, &w2);
    checks.record("difference_square_identity", (&lhs - &rhs).max_norm(), tol);

    // the two joins are complementary projectors
    let join_direct = crate::lattice::join(&pp, &qq, crate::lattice::MeetJoinMethod::Spectral)?;
    let join_cross = crate::lattice::join(
        &left_cross,
        &right_cross,
        crate::lattice::MeetJoinMethod::Spectral,
    )?;
    checks.record(
        "complementary_joins_sum",
        (&(join_direct.matrix() + join_cross.matrix()) - &id).max_norm(),
        tol,
    );

    // cross products vanish
    let cross_residual = [
        (pp.matrix() * left_cross.matrix()).max_norm(),
        (qq.matrix() * left_cross.matrix()).max_norm(),
        (pp.matrix() * right_cross.matrix()).max_norm(),
        (qq.matrix() * right_cross.matrix()).max_norm(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    checks.record("cross_orthogonality", cross_residual, tol);

    // both meets vanish
    let meet_direct = crate::lattice::meet(&pp, &qq, crate::lattice::MeetJoinMethod::Spectral)?;
    let meet_cross = crate::lattice::meet(
        &left_cross,
        &right_cross,
        crate::lattice::MeetJoinMethod::Spectral,
    )?;
    checks.record(
        "meets_vanish",
        meet_direct
            .matrix()
            .max_norm()
            .max(meet_cross.matrix().max_norm()),
        tol,
    );

    // trace bookkeeping: tr(P̂₁⊗P̂₂) = tr(Q̂₁⊗Q̂₂) = g₁g₂, joins trace 2g₁g₂
    let expected = (g1 * g2) as f64;
    let trace_residual = [
        pp.matrix().trace_re() - expected,
        qq.matrix().trace_re() - expected,
        join_direct.matrix().trace_re() - 2.0 * expected,
        join_cross.matrix().trace_re() - 2.0 * expected,
    ]
    .into_iter()
    .map(f64::abs)
    .fold(0.0f64, f64::max);
    checks.record("trace_bookkeeping", trace_residual, tol);

    // regrouping dg(A,B)⊗dg(C,D) by sector pairs, then swapping each block,
    // reproduces dg(A•C, A•D, B•C, B•D)
    let a = p1.matrix();
    let b = q1.matrix();
    let c = p2.matrix();
    let d = q2.matrix();
    let left_block = cs::block_diagonal(&[a.clone(), b.clone()]);
    let right_block = cs::block_diagonal(&[c.clone(), d.clone()]);
    let product = kron(&left_block, &right_block);
    let spans1 = [(0usize, 2 * g1), (2 * g1, 2 * g1)];
    let spans2 = [(0usize, 2 * g2), (2 * g2, 2 * g2)];
    let perm = sector_pair_permutation(&spans1, &spans2, 4 * g2);
    let regrouped = permute_conjugate(&product, &perm);
    let w = swap_unitary(2 * g1, 2 * g2);
    let swapper = cs::block_diagonal(&[w.clone(), w.clone(), w.clone(), w]);
    let swapped = &(&swapper * &regrouped) * &swapper.adjoint();
    let expected_blocks = cs::block_diagonal(&[
        swap_kron(a, c),
        swap_kron(a, d),
        swap_kron(b, c),
        swap_kron(b, d),
    ]);
    checks.record(
        "block_rearrangement",
        (&swapped - &expected_blocks).max_norm(),
        tol,
    );

    Ok(ProductIdentitiesReport {
        vacuous: false,
        checks,
    })
}

/// Reference numerators (over 12) for the spin-½ upper operators.
const REFERENCE_CROSS_NUM: [[i32; 4]; 4] = [
    [0, 0, 0, 0],
    [0, 2, -1, -1],
    [0, -1, 2, -1],
    [0, -1, -1, 2],
];
const REFERENCE_DIRECT_NUM: [[i32; 4]; 4] = [
    [1, -1, -1, 0],
    [-1, 1, 1, 0],
    [-1, 1, 1, 0],
    [0, 0, 0, 3],
];

fn reference_matrix(num: &[[i32; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| Complex64::new(num[i][j] as f64 / 12.0, 0.0))
}

/// Full spin-½ worked example.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpinReport {
    /// ω̄(P⊗P, Q⊗Q).
    pub direct_upper: ComplexMatrix,
    /// ω̄(P⊗Q, Q⊗P).
    pub cross_upper: ComplexMatrix,
    pub reference_direct: ComplexMatrix,
    pub reference_cross: ComplexMatrix,
    pub direct_spectrum: Vec<f64>,
    pub cross_spectrum: Vec<f64>,
    pub trace_difference: f64,
    /// ‖(ω̄⊗ω̄ − ω̄_direct) − ω̄_cross‖_max: the chained equality as printed.
    /// Reported, not gated; the gap theorem only fixes the spectrum of the
    /// gap, not its entries in the original basis.
    pub chain_residual_direct: f64,
    /// ‖(ω̄⊗ω̄ − ω̄_cross) − ω̄_direct‖_max.
    pub chain_residual_cross: f64,
    pub chain_agrees: bool,
    pub witness_max_mismatch: f64,
    pub witness_min_value: f64,
    pub checks: CheckSet,
}

impl SpinReport {
    pub fn pass(&self) -> bool {
        self.checks.all_pass()
    }
}

/// Computes the spin-½ example end to end: both pairings, spectra
/// {0, 0, ¼, ¼}, entrywise agreement with the reference matrices, the
/// traceless difference, the chain equalities, and the witness grid.
pub fn spin_half_report() -> Result<SpinReport> {
    let scene = spin_scene();
    let (p, q) = scene.first_pair();

    let direct = upper_operator(&kron_projector(p, p), &kron_projector(q, q))?;
    let cross = upper_operator(&kron_projector(p, q), &kron_projector(q, p))?;
    let reference_direct = reference_matrix(&REFERENCE_DIRECT_NUM);
    let reference_cross = reference_matrix(&REFERENCE_CROSS_NUM);

    let tol = tolerance::SPIN_EXACT_TOL;
    let mut checks = CheckSet::new();

    let direct_spectrum = eigen::eigenvalues_only(direct.matrix());
    let cross_spectrum = eigen::eigenvalues_only(cross.matrix());
    let expected = [0.0, 0.0, 0.25, 0.25];
    let spectrum_residual = direct_spectrum
        .iter()
        .chain(cross_spectrum.iter())
        .zip(expected.iter().chain(expected.iter()))
        .map(|(got, want)| (got - want).abs())
        .fold(0.0f64, f64::max);
    checks.record("spin_spectra", spectrum_residual, tol);

    checks.record(
        "spin_direct_entries",
        (direct.matrix() - &reference_direct).max_norm(),
        tol,
    );
    checks.record(
        "spin_cross_entries",
        (cross.matrix() - &reference_cross).max_norm(),
        tol,
    );

    let trace_difference = direct.matrix().trace_re() - cross.matrix().trace_re();
    checks.record("spin_trace_difference", trace_difference.abs(), tol);

    let w1 = upper_operator(p, q)?;
    let local = kron(w1.matrix(), w1.matrix());
    let chain_residual_direct = (&(&local - direct.matrix()) - cross.matrix()).max_norm();
    let chain_residual_cross = (&(&local - cross.matrix()) - direct.matrix()).max_norm();
    let chain_agrees = chain_residual_direct <= tolerance::GAP_BLOCK_TOL
        && chain_residual_cross <= tolerance::GAP_BLOCK_TOL;

    // witness grid: a ∈ {0, 0.1, …, 1}, admissible b, twelve phases
    let mut witness_max_mismatch = 0.0f64;
    let mut witness_min_value = f64::INFINITY;
    for ia in 0..=10 {
        let a = ia as f64 / 10.0;
        let b_max = (a * (1.0 - a)).sqrt();
        for b in [0.0, 0.99 * b_max] {
            for k in 0..12 {
                let phi = std::f64::consts::TAU * k as f64 / 12.0;
                let value = separable_witness(a, b, phi)?;
                witness_max_mismatch = witness_max_mismatch.max(value.mismatch());
                witness_min_value = witness_min_value
                    .min(value.numeric)
                    .min(value.closed_form);
            }
        }
    }
    checks.record(
        "witness_dual_route",
        witness_max_mismatch,
        tolerance::WITNESS_TOL,
    );
    checks.record(
        "witness_nonnegative",
        (-witness_min_value).max(0.0),
        tolerance::WITNESS_TOL,
    );

    Ok(SpinReport {
        direct_upper: direct.matrix().clone(),
        cross_upper: cross.matrix().clone(),
        reference_direct,
        reference_cross,
        direct_spectrum,
        cross_spectrum,
        trace_difference,
        chain_residual_direct,
        chain_residual_cross,
        chain_agrees,
        witness_max_mismatch,
        witness_min_value,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{commuting_projector_pair, haar_random_projector, Seed};

    #[test]
    fn kron_of_diagonal_projectors() {
        let a = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let k = kron(&a, &a);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 0).re, 1.0);
        for i in 1..4 {
            assert_eq!(k.get(i, i).re, 0.0);
        }
    }

    #[test]
    fn kron_identity_left_is_block_diagonal_copies() {
        let b = ComplexMatrix::from_real(2, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let k = kron(&ComplexMatrix::identity(2), &b);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(k.get(i, j), b.get(i, j));
                assert_eq!(k.get(2 + i, 2 + j), b.get(i, j));
                assert_eq!(k.get(i, 2 + j).norm(), 0.0);
            }
        }
    }

    #[test]
    fn kron_of_half_ones_projector() {
        let p = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let k = kron(&p, &p);
        for i in 0..4 {
            for j in 0..4 {
                assert!((k.get(i, j).re - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn swap_kron_is_reversed_kron() {
        let a = ComplexMatrix::from_real(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let b =
            ComplexMatrix::from_real(3, &[1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap();
        assert_eq!(swap_kron(&a, &b), kron(&b, &a));
    }

    #[test]
    fn swap_unitary_conjugates_products_exactly() {
        let w = swap_unitary(2, 3);
        assert_eq!(w.unitarity_residual(), 0.0);
        for k in 0..20u64 {
            let a = haar_random_projector(2, 1, Seed(500 + k)).unwrap();
            let b = haar_random_projector(3, 2, Seed(600 + k)).unwrap();
            let lhs = &(&w * &kron(a.matrix(), b.matrix())) * &w.adjoint();
            let rhs = kron(b.matrix(), a.matrix());
            assert!((&lhs - &rhs).max_norm() < 1e-14);
        }
    }

    #[test]
    fn swap_unitary_with_trivial_factor_is_identity() {
        let w = swap_unitary(1, 4);
        assert_eq!((&w - &ComplexMatrix::identity(4)).max_norm(), 0.0);
    }

    #[test]
    fn spin_scene_lower_factorization_is_zero() {
        let scene = spin_scene();
        let report = lower_factorization_check(&scene).unwrap();
        assert!(report.pass);
        let (p, q) = scene.first_pair();
        let direct = lower_operator(&kron_projector(p, p), &kron_projector(q, q)).unwrap();
        assert_eq!(direct.rank(), 0);
    }

    #[test]
    fn commuting_scene_lower_factorization() {
        let (p1, q1) = commuting_projector_pair(3, Seed(70)).unwrap();
        let (p2, q2) = commuting_projector_pair(4, Seed(71)).unwrap();
        let scene = TwoParticleScene::new(&p1, &q1, &p2, &q2).unwrap();
        let report = lower_factorization_check(&scene).unwrap();
        assert!(report.pass);
        let (sp1, sq1) = scene.first_pair();
        let (sp2, sq2) = scene.second_pair();
        let direct =
            lower_operator(&kron_projector(sp1, sp2), &kron_projector(sq1, sq2)).unwrap();
        let pq1 = sp1.matrix() * sq1.matrix();
        let pq2 = sp2.matrix() * sq2.matrix();
        assert!((direct.matrix() - &kron(&pq1, &pq2)).max_norm() < 1e-8);
    }

    #[test]
    fn random_scene_triple_equality() {
        let p1 = haar_random_projector(3, 1, Seed(81)).unwrap();
        let q1 = haar_random_projector(3, 2, Seed(82)).unwrap();
        let p2 = haar_random_projector(4, 2, Seed(83)).unwrap();
        let q2 = haar_random_projector(4, 2, Seed(84)).unwrap();
        let scene = TwoParticleScene::new(&p1, &q1, &p2, &q2).unwrap();
        let report = lower_factorization_check(&scene).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn gap_vanishes_when_one_pair_commutes() {
        let (p1, q1) = commuting_projector_pair(3, Seed(90)).unwrap();
        let p2 = haar_random_projector(3, 1, Seed(91)).unwrap();
        let q2 = haar_random_projector(3, 2, Seed(92)).unwrap();
        let scene = TwoParticleScene::new(&p1, &q1, &p2, &q2).unwrap();
        assert!(scene.pair_commutes(1));
        let report = upper_gap(&scene).unwrap();
        assert!(
            report.max_norm <= tolerance::GAP_VANISH_TOL,
            "{}",
            report.max_norm
        );
        assert!(report.psd_ok());
        assert!(report.block_form_ok());
    }

    #[test]
    fn gap_vanishes_for_identity_second_pair() {
        let p1 = haar_random_projector(3, 1, Seed(95)).unwrap();
        let q1 = haar_random_projector(3, 2, Seed(96)).unwrap();
        let id = Projector::identity(4);
        let scene = TwoParticleScene::new(&p1, &q1, &id, &id).unwrap();
        let report = upper_gap(&scene).unwrap();
        assert!(report.max_norm <= tolerance::GAP_VANISH_TOL);
        // the joint upper operator reduces to the marginal ω̄(P₁,Q₁)⊗I
        let (sp1, sq1) = scene.first_pair();
        let w1 = upper_operator(sp1, sq1).unwrap();
        let joint =
            upper_operator(&kron_projector(sp1, &id), &kron_projector(sq1, &id)).unwrap();
        let marginal = kron(w1.matrix(), &ComplexMatrix::identity(4));
        assert!((joint.matrix() - &marginal).max_norm() < 1e-9);
    }

    #[test]
    fn spin_gap_spectrum_is_quarter_doubly_degenerate() {
        let scene = spin_scene();
        let report = upper_gap(&scene).unwrap();
        let vals = eigen::eigenvalues_only(report.gap.matrix());
        let expected = [0.0, 0.0, 0.25, 0.25];
        for (got, want) in vals.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{vals:?}");
        }
        assert!(report.psd_ok());
        assert!(report.block_form_ok());
    }

    #[test]
    fn spin_pairing_difference_is_traceless_but_nonzero() {
        let scene = spin_scene();
        let report = pairing_difference(&scene).unwrap();
        assert!(report.trace.abs() < 1e-12);
        assert!(report.max_norm > 1e-6);
    }

    #[test]
    fn witness_matches_reference_values() {
        // maximally mixed: vanishes
        let v = separable_witness(0.5, 0.0, 0.0).unwrap();
        assert!(v.numeric.abs() < 1e-13 && v.closed_form.abs() < 1e-15);
        // pure |0⟩⟨0|: 1/12
        let v = separable_witness(1.0, 0.0, 0.0).unwrap();
        assert!((v.numeric - 1.0 / 12.0).abs() < 1e-13);
        assert!((v.closed_form - 1.0 / 12.0).abs() < 1e-15);
        // generic point: dual routes agree
        let v = separable_witness(0.7, 0.3, std::f64::consts::PI / 3.0).unwrap();
        assert!(v.mismatch() < 1e-12, "{v:?}");
    }

    #[test]
    fn witness_rejects_out_of_domain_parameters() {
        assert!(separable_witness(1.2, 0.0, 0.0).is_err());
        assert!(separable_witness(0.5, 0.6, 0.0).is_err());
        assert!(separable_witness(0.5, 0.0, 7.0).is_err());
    }

    #[test]
    fn product_identities_hold_on_spin_scene() {
        let scene = spin_scene();
        let report = product_identities_check(&scene).unwrap();
        assert!(!report.vacuous);
        assert!(report.pass(), "{:?}", report.checks);
        // traces: 1, 1 and joins 2, 2 for g1 = g2 = 1
        let trace_check = &report.checks.checks["trace_bookkeeping"];
        assert!(trace_check.residual < 1e-12);
    }

    #[test]
    fn product_identities_vacuous_for_commuting_side() {
        let (p1, q1) = commuting_projector_pair(3, Seed(64)).unwrap();
        let p2 = haar_random_projector(3, 1, Seed(65)).unwrap();
        let q2 = haar_random_projector(3, 2, Seed(66)).unwrap();
        let scene = TwoParticleScene::new(&p1, &q1, &p2, &q2).unwrap();
        let report = product_identities_check(&scene).unwrap();
        assert!(report.vacuous);
    }

    #[test]
    fn spin_report_passes_all_gated_checks() {
        let report = spin_half_report().unwrap();
        assert!(report.pass(), "{:?}", report.checks);
        assert!(report.witness_min_value >= -1e-12);
        // the printed chain does not hold entrywise in the original basis;
        // the gap shares the spectrum of the other pairing instead
        assert!(!report.chain_agrees);
        let gap_vals = {
            let (p, q) = spin_pair();
            let w = upper_operator(&p, &q).unwrap();
            let local = kron(w.matrix(), w.matrix());
            let diff = &local - &report.direct_upper;
            eigen::eigenvalues_only(&diff)
        };
        for (got, want) in gap_vals.iter().zip([0.0, 0.0, 0.25, 0.25]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
