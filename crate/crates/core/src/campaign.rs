//! Randomized verification campaigns over every module.
//!
//! A campaign draws seeded projector pairs, states, resolutions and
//! unitaries for each (dimension, sample) cell, runs the selected check
//! groups, and aggregates named residuals. Reports are deterministic
//! functions of (config, master seed): per-sample seeds derive from the
//! master via fixed streams, samples are collected in index order, and all
//! maps are ordered, so the same bytes come out no matter how many workers
//! ran. With the `parallel` feature (default) samples fan out over rayon;
//! [`run_campaign_sequential`] is the same loop on one thread and is what
//! `run_campaign` degrades to when the feature is off. The `IMPQ_THREADS`
//! environment variable caps the worker count.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cs;
use crate::error::{Error, Result};
use crate::imprecise::{self, ProjectorResolution};
use crate::lattice::{self, MeetJoinMethod};
use crate::matrix::ComplexMatrix;
use crate::nonlocality::{self, TwoParticleScene};
use crate::operators::{DensityMatrix, Projector};
use crate::random::{
    commuting_projector_pair, haar_random_projector, haar_random_unitary, random_density,
    random_resolution, Seed,
};
use crate::report::{CheckResult, CheckSet};
use crate::tolerance;

/// Check groups a campaign can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckGroup {
    Lattice,
    Imprecise,
    Cs,
    Nonlocality,
    Spin,
}

fn default_dims() -> Vec<(usize, usize)> {
    vec![(2, 2), (2, 3), (3, 3), (4, 4), (3, 5)]
}

fn default_samples() -> usize {
    50
}

fn default_seed() -> u64 {
    0xA11CE
}

fn default_checks() -> BTreeSet<CheckGroup> {
    [
        CheckGroup::Lattice,
        CheckGroup::Imprecise,
        CheckGroup::Cs,
        CheckGroup::Nonlocality,
    ]
    .into_iter()
    .collect()
}

fn default_cap() -> usize {
    256
}

/// Campaign parameters; all fields have defaults so a config file may be
/// sparse or absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default = "default_dims")]
    pub dims: Vec<(usize, usize)>,
    #[serde(default = "default_samples")]
    pub samples_per_dim: usize,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    /// Overrides keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default = "default_checks")]
    pub checks: BTreeSet<CheckGroup>,
    #[serde(default = "default_cap")]
    pub product_dim_cap: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            dims: default_dims(),
            samples_per_dim: default_samples(),
            master_seed: default_seed(),
            tolerances: BTreeMap::new(),
            checks: default_checks(),
            product_dim_cap: default_cap(),
        }
    }
}

/// Check names a tolerance override may target.
pub const CHECK_CATALOG: &[&str] = &[
    // lattice
    "meet_agreement_iterate",
    "meet_agreement_cs",
    "join_agreement_pinv",
    "join_agreement_cs",
    "lattice_bounds",
    "meet_symmetry",
    "commuting_reduction_lattice",
    "dimension_identity",
    "order_product",
    // pair axioms
    "ordering_lower_nonnegative",
    "ordering_lower_below_upper",
    "ordering_upper_below_identity",
    "symmetry_lower",
    "symmetry_upper",
    "commutation_lower",
    "commutation_upper",
    "commuting_reduction",
    "state_consistency",
    "state_consistency_imag",
    "joint_commutation",
    "sandwich",
    "superadditivity_upper",
    "subadditivity_lower",
    "covariance_lower",
    "covariance_upper",
    "interval_bounds",
    // block decomposition
    "cs_roundtrip",
    "cs_signature_dim",
    "cs_generic_relations",
    "cs_canonical_upper",
    "cs_canonical_lower",
    "cs_signature_invariance",
    // two-particle
    "lower_locality",
    "gap_psd",
    "gap_block_form",
    "gap_vanishes_commuting",
    "pairing_trace",
    "difference_square_identity",
    "complementary_joins_sum",
    "cross_orthogonality",
    "meets_vanish",
    "trace_bookkeeping",
    "block_rearrangement",
];

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("dims must be non-empty".into()));
        }
        for &(d1, d2) in &self.dims {
            if d1 < 2 || d2 < 2 {
                return Err(Error::InvalidConfig(format!(
                    "dimensions must be at least 2, got ({d1}, {d2})"
                )));
            }
            if d1 * d2 > self.product_dim_cap {
                return Err(Error::InvalidConfig(format!(
                    "product dimension {} exceeds cap {}",
                    d1 * d2,
                    self.product_dim_cap
                )));
            }
        }
        if self.samples_per_dim == 0 {
            return Err(Error::InvalidConfig(
                "samples_per_dim must be positive".into(),
            ));
        }
        for key in self.tolerances.keys() {
            if !CHECK_CATALOG.contains(&key.as_str()) {
                return Err(Error::InvalidConfig(format!(
                    "unknown tolerance override '{key}'"
                )));
            }
        }
        Ok(())
    }

    fn runs_samples(&self) -> bool {
        self.checks.iter().any(|g| *g != CheckGroup::Spin)
    }
}

/// Outcome of one sample cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub dims: (usize, usize),
    pub seed: u64,
    pub checks: CheckSet,
    /// Observation from the pair validator; None when the group did not run.
    pub monotonicity_holds: Option<bool>,
}

impl SampleOutcome {
    pub fn pass(&self) -> bool {
        self.checks.all_pass()
    }
}

/// Aggregate view of one named check across all samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckAggregate {
    pub count: usize,
    pub failures: usize,
    pub worst_residual: f64,
    pub tolerance: f64,
}

/// Full campaign result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignReport {
    pub master_seed: u64,
    pub total_samples: usize,
    pub passed_samples: usize,
    pub failed_samples: usize,
    /// Count of samples where ω̄(P,Q) ≤ Q failed — expected for most
    /// non-commuting pairs; the campaign requires at least one.
    pub monotonicity_violations: usize,
    pub per_check: BTreeMap<String, CheckAggregate>,
    /// Reproduction seeds for every failed sample.
    pub failure_seeds: Vec<u64>,
    pub samples: Vec<SampleOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin: Option<nonlocality::SpinReport>,
}

impl CampaignReport {
    pub fn all_pass(&self) -> bool {
        self.failed_samples == 0 && self.spin.as_ref().map_or(true, |s| s.pass())
    }

    /// Canonical JSON bytes; identical for identical (config, seed).
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report serializes");
        bytes.push(b'\n');
        bytes
    }
}

fn apply_overrides(checks: &mut CheckSet, overrides: &BTreeMap<String, f64>) {
    for (name, result) in checks.checks.iter_mut() {
        if let Some(&tol) = overrides.get(name) {
            *result = CheckResult::new(result.residual, tol);
        }
    }
}

struct SampleDraw {
    p1: Projector,
    q1: Projector,
    p2: Projector,
    q2: Projector,
    states: Vec<DensityMatrix>,
    resolution: ProjectorResolution,
    unitary: ComplexMatrix,
}

fn draw_sample(dims: (usize, usize), seed: Seed) -> Result<SampleDraw> {
    let (d1, d2) = dims;
    let mut rng = seed.derive(0).rng();
    // one pair in five commutes by construction, covering the classical
    // reduction and the vanishing-gap clause
    let commuting1 = rng.random_range(0..5u8) == 0;
    let commuting2 = rng.random_range(0..5u8) == 0;

    let (p1, q1) = if commuting1 {
        commuting_projector_pair(d1, seed.derive(1))?
    } else {
        let r1 = rng.random_range(1..d1);
        let r2 = rng.random_range(1..d1);
        (
            haar_random_projector(d1, r1, seed.derive(1))?,
            haar_random_projector(d1, r2, seed.derive(2))?,
        )
    };
    let (p2, q2) = if commuting2 {
        commuting_projector_pair(d2, seed.derive(3))?
    } else {
        let r1 = rng.random_range(1..d2);
        let r2 = rng.random_range(1..d2);
        (
            haar_random_projector(d2, r1, seed.derive(3))?,
            haar_random_projector(d2, r2, seed.derive(4))?,
        )
    };

    let states = vec![
        random_density(d1, d1, seed.derive(5))?,
        random_density(d1, 1 + rng.random_range(0..d1), seed.derive(6))?,
    ];
    let parts = if d1 >= 3 && rng.random::<bool>() { 3 } else { 2 };
    let resolution = ProjectorResolution::new(random_resolution(d1, parts, seed.derive(7))?)?;
    let unitary = haar_random_unitary(d1, seed.derive(8));

    Ok(SampleDraw {
        p1,
        q1,
        p2,
        q2,
        states,
        resolution,
        unitary,
    })
}

fn run_lattice_group(draw: &SampleDraw, checks: &mut CheckSet) -> Result<()> {
    let (p, q) = (&draw.p1, &draw.q1);
    let spectral = lattice::meet(p, q, MeetJoinMethod::Spectral)?;

    match lattice::meet(p, q, MeetJoinMethod::Iterate) {
        Ok(iterate) => checks.record(
            "meet_agreement_iterate",
            (spectral.matrix() - iterate.matrix()).max_norm(),
            tolerance::METHOD_AGREEMENT_TOL,
        ),
        // cap exhaustion on a near-commuting draw is designed behavior:
        // fall back to the spectral result and skip the cross-check
        Err(Error::NonConvergence { .. }) => checks.record_vacuous("meet_agreement_iterate"),
        Err(e) => return Err(e),
    }
    let cs_meet = lattice::meet(p, q, MeetJoinMethod::CsBased)?;
    checks.record(
        "meet_agreement_cs",
        (spectral.matrix() - cs_meet.matrix()).max_norm(),
        tolerance::METHOD_AGREEMENT_TOL,
    );

    let join_spectral = lattice::join(p, q, MeetJoinMethod::Spectral)?;
    let join_pinv = lattice::join(p, q, MeetJoinMethod::PinvJoin)?;
    let join_cs = lattice::join(p, q, MeetJoinMethod::CsBased)?;
    checks.record(
        "join_agreement_pinv",
        (join_spectral.matrix() - join_pinv.matrix()).max_norm(),
        tolerance::METHOD_AGREEMENT_TOL,
    );
    checks.record(
        "join_agreement_cs",
        (join_spectral.matrix() - join_cs.matrix()).max_norm(),
        tolerance::METHOD_AGREEMENT_TOL,
    );

    // R ≤ P, R ≤ Q, P ≤ J, Q ≤ J
    let bound = [
        crate::eigen::min_eigenvalue(&(p.matrix() - spectral.matrix())),
        crate::eigen::min_eigenvalue(&(q.matrix() - spectral.matrix())),
        crate::eigen::min_eigenvalue(&(join_spectral.matrix() - p.matrix())),
        crate::eigen::min_eigenvalue(&(join_spectral.matrix() - q.matrix())),
    ]
    .into_iter()
    .fold(0.0f64, |acc, v| acc.max((-v).max(0.0)));
    checks.record("lattice_bounds", bound, tolerance::LOEWNER_TOL);

    let meet_swapped = lattice::meet(q, p, MeetJoinMethod::Spectral)?;
    checks.record(
        "meet_symmetry",
        (spectral.matrix() - meet_swapped.matrix()).max_norm(),
        tolerance::SYMMETRY_TOL,
    );

    let commutator = p.matrix().commutator(q.matrix())?.max_norm();
    if commutator <= tolerance::COMMUTATION_EXACT_TOL {
        let pq = p.matrix() * q.matrix();
        let expected_join = &(p.matrix() + q.matrix()) - &pq;
        let residual = (spectral.matrix() - &pq)
            .max_norm()
            .max((join_spectral.matrix() - &expected_join).max_norm());
        checks.record(
            "commuting_reduction_lattice",
            residual,
            tolerance::COMMUTING_REDUCTION_TOL,
        );
    } else {
        checks.record_vacuous("commuting_reduction_lattice");
    }

    let identity = lattice::dimension_identity_check(p, q)?;
    checks.record(
        "dimension_identity",
        identity.identity_residual.max(identity.integer_residual),
        tolerance::TRACE_IDENTITY_TOL,
    );

    let nested = lattice::order_product_check(&join_spectral, p)?;
    checks.record(
        "order_product",
        nested.left_residual.max(nested.right_residual),
        tolerance::ORDER_PRODUCT_TOL,
    );
    Ok(())
}

fn run_cs_group(draw: &SampleDraw, checks: &mut CheckSet, seed: Seed) -> Result<()> {
    let mut roundtrip = 0.0f64;
    let mut signature_dim = 0.0f64;
    let mut generic_relations = 0.0f64;
    let mut canonical_upper = 0.0f64;
    let mut canonical_lower = 0.0f64;
    for (p, q) in [(&draw.p1, &draw.q1), (&draw.p2, &draw.q2)] {
        let dec = cs::cs_decompose(p, q, tolerance::CS_BLOCK_TOL)?;
        let (p_back, q_back) = cs::reconstruct(&dec)?;
        roundtrip = roundtrip
            .max((p_back.matrix() - p.matrix()).max_norm())
            .max((q_back.matrix() - q.matrix()).max_norm());
        signature_dim = signature_dim.max((dec.signature.dim() as f64 - p.dim() as f64).abs());
        let relations = cs::generic_relations_check(&dec)?;
        if !relations.vacuous {
            generic_relations = generic_relations
                .max(relations.join_residual)
                .max(relations.meet_residual)
                .max(relations.trace_residual);
        }
        let (upper_blk, lower_blk) = cs::canonical_imprecise(&dec);
        let upper_back = cs::to_original_basis(&dec, upper_blk.matrix());
        let lower_back = cs::to_original_basis(&dec, lower_blk.matrix());
        canonical_upper = canonical_upper
            .max((&upper_back - imprecise::upper_operator(p, q)?.matrix()).max_norm());
        canonical_lower = canonical_lower
            .max((&lower_back - imprecise::lower_operator(p, q)?.matrix()).max_norm());
    }
    checks.record("cs_roundtrip", roundtrip, tolerance::CS_ROUNDTRIP_TOL);
    checks.record("cs_signature_dim", signature_dim, 0.0);
    checks.record(
        "cs_generic_relations",
        generic_relations,
        tolerance::CS_BLOCK_TOL,
    );
    checks.record(
        "cs_canonical_upper",
        canonical_upper,
        tolerance::CS_BLOCK_TOL,
    );
    checks.record(
        "cs_canonical_lower",
        canonical_lower,
        tolerance::CS_BLOCK_TOL,
    );

    // signature is invariant under a change of basis
    let dec = cs::cs_decompose(&draw.p1, &draw.q1, tolerance::CS_BLOCK_TOL)?;
    let v = haar_random_unitary(draw.p1.dim(), seed.derive(40));
    let conj = |proj: &Projector| -> Result<Projector> {
        let rotated = &(&v * proj.matrix()) * &v.adjoint();
        Projector::snap(&rotated.hermitian_part())
    };
    let rotated_dec =
        cs::cs_decompose(&conj(&draw.p1)?, &conj(&draw.q1)?, tolerance::CS_BLOCK_TOL)?;
    let invariant = rotated_dec.signature == dec.signature;
    checks.record(
        "cs_signature_invariance",
        if invariant { 0.0 } else { 1.0 },
        0.0,
    );
    Ok(())
}

fn run_nonlocality_group(draw: &SampleDraw, checks: &mut CheckSet) -> Result<()> {
    let scene = TwoParticleScene::new(&draw.p1, &draw.q1, &draw.p2, &draw.q2)?;

    let lower = nonlocality::lower_factorization_check(&scene)?;
    checks.record(
        "lower_locality",
        lower.direct_vs_product.max(lower.direct_vs_swapped),
        tolerance::LOWER_LOCALITY_TOL,
    );

    let gap = nonlocality::upper_gap(&scene)?;
    checks.record(
        "gap_psd",
        (-gap.min_eigenvalue).max(0.0),
        tolerance::GAP_PSD_TOL,
    );
    checks.record("gap_block_form", gap.residual, tolerance::GAP_BLOCK_TOL);
    if scene.pair_commutes(1) || scene.pair_commutes(2) {
        checks.record(
            "gap_vanishes_commuting",
            gap.max_norm,
            tolerance::GAP_VANISH_TOL,
        );
    } else {
        checks.record_vacuous("gap_vanishes_commuting");
    }

    let pairing = nonlocality::pairing_difference(&scene)?;
    checks.record(
        "pairing_trace",
        pairing.trace.abs(),
        tolerance::TRACE_IDENTITY_TOL,
    );

    let identities = nonlocality::product_identities_check(&scene)?;
    if identities.vacuous {
        for name in [
            "difference_square_identity",
            "complementary_joins_sum",
            "cross_orthogonality",
            "meets_vanish",
            "trace_bookkeeping",
            "block_rearrangement",
        ] {
            checks.record_vacuous(name);
        }
    } else {
        for (name, result) in &identities.checks.checks {
            checks.record(name, result.residual, result.tolerance);
        }
    }
    Ok(())
}

fn run_sample(config: &CampaignConfig, index: usize, dims: (usize, usize)) -> SampleOutcome {
    let seed = Seed(config.master_seed).derive(index as u64);
    let mut checks = CheckSet::new();
    let mut monotonicity = None;

    let result = (|| -> Result<()> {
        let draw = draw_sample(dims, seed)?;
        if config.checks.contains(&CheckGroup::Lattice) {
            run_lattice_group(&draw, &mut checks)?;
        }
        if config.checks.contains(&CheckGroup::Imprecise) {
            let report = imprecise::validate_pair(
                &draw.p1,
                &draw.q1,
                &draw.states,
                &draw.resolution,
                &draw.unitary,
            )?;
            monotonicity = Some(report.monotonicity_holds);
            checks.merge_prefixed("", &report.checks);
        }
        if config.checks.contains(&CheckGroup::Cs) {
            run_cs_group(&draw, &mut checks, seed)?;
        }
        if config.checks.contains(&CheckGroup::Nonlocality) {
            run_nonlocality_group(&draw, &mut checks)?;
        }
        Ok(())
    })();

    if let Err(err) = result {
        // an operation-level error is a failed sample with context
        checks.checks.insert(
            format!("sample_error:{err}"),
            CheckResult::new(f64::INFINITY, 0.0),
        );
    }

    apply_overrides(&mut checks, &config.tolerances);
    SampleOutcome {
        index,
        dims,
        seed: seed.0,
        checks,
        monotonicity_holds: monotonicity,
    }
}

fn assemble(
    config: &CampaignConfig,
    samples: Vec<SampleOutcome>,
    spin: Option<nonlocality::SpinReport>,
) -> CampaignReport {
    let total_samples = samples.len();
    let mut passed = 0usize;
    let mut failure_seeds = Vec::new();
    let mut per_check: BTreeMap<String, CheckAggregate> = BTreeMap::new();
    let mut monotonicity_violations = 0usize;
    for sample in &samples {
        if sample.pass() {
            passed += 1;
        } else {
            failure_seeds.push(sample.seed);
        }
        if sample.monotonicity_holds == Some(false) {
            monotonicity_violations += 1;
        }
        for (name, result) in &sample.checks.checks {
            let entry = per_check.entry(name.clone()).or_insert(CheckAggregate {
                count: 0,
                failures: 0,
                worst_residual: 0.0,
                tolerance: result.tolerance,
            });
            entry.count += 1;
            if !result.pass {
                entry.failures += 1;
            }
            if result.residual > entry.worst_residual {
                entry.worst_residual = result.residual;
            }
        }
    }
    CampaignReport {
        master_seed: config.master_seed,
        total_samples,
        passed_samples: passed,
        failed_samples: total_samples - passed,
        monotonicity_violations,
        per_check,
        failure_seeds,
        samples,
        spin,
    }
}

fn sample_cells(config: &CampaignConfig) -> Vec<(usize, (usize, usize))> {
    let mut cells = Vec::new();
    let mut index = 0usize;
    for &dims in &config.dims {
        for _ in 0..config.samples_per_dim {
            cells.push((index, dims));
            index += 1;
        }
    }
    cells
}

fn run_spin_if_selected(config: &CampaignConfig) -> Result<Option<nonlocality::SpinReport>> {
    if config.checks.contains(&CheckGroup::Spin) {
        Ok(Some(nonlocality::spin_half_report()?))
    } else {
        Ok(None)
    }
}

/// Runs the campaign sequentially regardless of features; the reference
/// path the parallel runner must match byte for byte.
pub fn run_campaign_sequential(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let samples = if config.runs_samples() {
        sample_cells(config)
            .into_iter()
            .map(|(index, dims)| run_sample(config, index, dims))
            .collect()
    } else {
        Vec::new()
    };
    Ok(assemble(config, samples, run_spin_if_selected(config)?))
}

/// Runs the campaign, fanning samples out over rayon when the `parallel`
/// feature is enabled (the default). `IMPQ_THREADS` caps the worker count.
#[cfg(feature = "parallel")]
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    use rayon::prelude::*;

    config.validate()?;
    let samples = if config.runs_samples() {
        let cells = sample_cells(config);
        let work = || -> Vec<SampleOutcome> {
            cells
                .par_iter()
                .map(|&(index, dims)| run_sample(config, index, dims))
                .collect()
        };
        match thread_cap() {
            Some(threads) => rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
                .install(work),
            None => work(),
        }
    } else {
        Vec::new()
    };
    Ok(assemble(config, samples, run_spin_if_selected(config)?))
}

#[cfg(not(feature = "parallel"))]
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    run_campaign_sequential(config)
}

#[cfg(feature = "parallel")]
fn thread_cap() -> Option<usize> {
    std::env::var("IMPQ_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> CampaignConfig {
        CampaignConfig {
            dims: vec![(2, 2)],
            samples_per_dim: 10,
            master_seed: 1234,
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn small_campaign_passes() {
        let start = std::time::Instant::now();
        let report = run_campaign(&small_config()).unwrap();
        assert_eq!(report.total_samples, 10);
        assert!(report.all_pass(), "failures: {:?}", report.failure_seeds);
        assert!(start.elapsed().as_secs() < 5);
    }

    #[test]
    fn report_bytes_are_deterministic() {
        let a = run_campaign(&small_config()).unwrap().to_json_bytes();
        let b = run_campaign(&small_config()).unwrap().to_json_bytes();
        assert_eq!(a, b);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential_bytes() {
        let config = small_config();
        let par = run_campaign(&config).unwrap().to_json_bytes();
        let seq = run_campaign_sequential(&config).unwrap().to_json_bytes();
        assert_eq!(par, seq);
    }

    #[test]
    fn spin_only_config_dispatches_to_spin_report() {
        let config = CampaignConfig {
            checks: [CheckGroup::Spin].into_iter().collect(),
            ..small_config()
        };
        let report = run_campaign(&config).unwrap();
        assert_eq!(report.total_samples, 0);
        let spin = report.spin.expect("spin report present");
        assert!(spin.pass());
    }

    #[test]
    fn unknown_tolerance_override_is_rejected() {
        let mut config = small_config();
        config.tolerances.insert("no_such_check".into(), 1.0);
        assert!(matches!(
            run_campaign(&config),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn tolerance_override_applies() {
        let mut config = small_config();
        // an impossible tolerance forces failures without touching the math
        config.tolerances.insert("gap_block_form".into(), 0.0);
        config.checks = [CheckGroup::Nonlocality].into_iter().collect();
        let report = run_campaign(&config).unwrap();
        let agg = &report.per_check["gap_block_form"];
        assert_eq!(agg.tolerance, 0.0);
    }

    #[test]
    fn dims_below_two_rejected() {
        let mut config = small_config();
        config.dims = vec![(1, 2)];
        assert!(run_campaign(&config).is_err());
    }

    #[test]
    fn product_cap_enforced() {
        let mut config = small_config();
        config.dims = vec![(16, 17)];
        assert!(run_campaign(&config).is_err());
    }

    #[test]
    fn monotonicity_violations_appear() {
        let config = CampaignConfig {
            dims: vec![(3, 3)],
            samples_per_dim: 8,
            master_seed: 99,
            checks: [CheckGroup::Imprecise].into_iter().collect(),
            ..CampaignConfig::default()
        };
        let report = run_campaign(&config).unwrap();
        assert!(report.all_pass());
        assert!(report.monotonicity_violations >= 1);
    }
}
