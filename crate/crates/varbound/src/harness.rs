//! Randomized verification engine: draws random Hermitian observables and
//! pure states, evaluates every inequality in the crate, and aggregates slack
//! statistics and counterexamples into a deterministic report.
//!
//! Determinism contract: each trial derives its own RNG from
//! `base seed + trial index`, so trials are order-independent, reports are
//! reproducible, and increasing the trial count extends (never changes) the
//! earlier trials.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, OrthogonalMode};
use crate::error::Error;
use crate::geometry;
use crate::hilbert::{self, Observable, PureState, UnitCoeff, C64};
use crate::multi::{self, MultiObsSpec, UpperVariant};

/// Name and version of the RNG algorithm, pinned so counterexamples replay.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), per-trial seed = base seed + index";

/// Fuzz run configuration. All fields have defaults matching the reference
/// verification run (seed 42, 10^4 trials, dims 2-6).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    /// Inclusive dimension range, within [2, 16].
    pub dims: (usize, usize),
    /// Inclusive observable-count range for the multi-observable checks.
    pub n_observables: (usize, usize),
    /// Draws with any standard deviation below this are rejected, not tested.
    pub eps_var_reject: f64,
    /// A check fails when its slack drops below minus this.
    pub slack_tolerance: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 10_000,
            dims: (2, 6),
            n_observables: (2, 5),
            eps_var_reject: 1e-3,
            slack_tolerance: 1e-9,
        }
    }
}

impl FuzzConfig {
    pub fn validate(&self) -> crate::error::Result<()> {
        if self.trials < 1 {
            return Err(Error::EmptyInput);
        }
        if self.dims.0 < 2 || self.dims.1 > 16 || self.dims.0 > self.dims.1 {
            return Err(Error::Numerical(format!(
                "dims range ({}, {}) outside [2, 16]",
                self.dims.0, self.dims.1
            )));
        }
        if self.n_observables.0 < 2 || self.n_observables.0 > self.n_observables.1 {
            return Err(Error::Numerical(format!(
                "nObservables range ({}, {}) invalid",
                self.n_observables.0, self.n_observables.1
            )));
        }
        Ok(())
    }
}

/// Aggregated statistics for one named check.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckStats {
    /// Trials attempted (accepted + rejected).
    pub trials: usize,
    /// Degenerate draws skipped for this check.
    pub rejected: usize,
    /// Minimum slack over accepted trials; absent if every draw was rejected.
    pub min_slack: Option<f64>,
    /// Mean slack over accepted trials.
    pub mean_slack: Option<f64>,
    /// Accepted trials with slack below -slackTolerance.
    pub failures: usize,
}

/// One failing trial, replayable from the seed offset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub check: String,
    /// Trial index; the trial RNG seed is base seed + this offset.
    pub seed_offset: u64,
    /// Short human-readable digest of the drawn inputs.
    pub inputs_digest: String,
    pub slack: f64,
}

/// Deterministic fuzz report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FuzzReport {
    pub rng: String,
    pub config: FuzzConfig,
    pub per_check: BTreeMap<String, CheckStats>,
    pub counterexamples: Vec<Counterexample>,
}

impl FuzzReport {
    pub fn total_failures(&self) -> usize {
        self.per_check.values().map(|s| s.failures).sum()
    }
}

/// Standard-normal draw via Box-Muller on the given RNG.
fn normal(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_complex_vector(dim: usize, rng: &mut impl Rng) -> DVector<C64> {
    DVector::from_fn(dim, |_, _| C64::new(normal(rng), normal(rng)))
}

/// Haar-like random pure state: complex standard-normal components,
/// normalized.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> PureState {
    assert!(dim >= 2);
    loop {
        if let Ok(state) = PureState::normalized(random_complex_vector(dim, rng)) {
            return state;
        }
    }
}

/// GUE-like random Hermitian: (G + G^H)/2 with complex standard-normal G.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> Observable {
    let g = DMatrix::from_fn(dim, dim, |_, _| C64::new(normal(rng), normal(rng)));
    let h = (&g + g.adjoint()).map(|z| z * 0.5);
    Observable::new(h).expect("symmetrized matrix is Hermitian")
}

/// Per-check accumulator; aggregation is order-independent (min/sum only).
#[derive(Debug, Default)]
struct Accumulator {
    trials: usize,
    rejected: usize,
    accepted: usize,
    min_slack: f64,
    slack_sum: f64,
    failures: usize,
}

struct Recorder<'a> {
    accs: BTreeMap<&'static str, Accumulator>,
    counterexamples: Vec<Counterexample>,
    tolerance: f64,
    digest: &'a dyn Fn() -> String,
    trial: u64,
}

impl<'a> Recorder<'a> {
    fn acc(&mut self, check: &'static str) -> &mut Accumulator {
        self.accs.entry(check).or_insert_with(|| Accumulator {
            min_slack: f64::INFINITY,
            ..Default::default()
        })
    }

    fn record(&mut self, check: &'static str, slack: f64) {
        let tolerance = self.tolerance;
        let trial = self.trial;
        let failed = slack < -tolerance;
        let acc = self.acc(check);
        acc.trials += 1;
        acc.accepted += 1;
        acc.min_slack = acc.min_slack.min(slack);
        acc.slack_sum += slack;
        if failed {
            acc.failures += 1;
            let digest = (self.digest)();
            self.counterexamples.push(Counterexample {
                check: check.to_string(),
                seed_offset: trial,
                inputs_digest: digest,
                slack,
            });
        }
    }

    fn reject(&mut self, check: &'static str) {
        let acc = self.acc(check);
        acc.trials += 1;
        acc.rejected += 1;
    }
}

fn uniform_in(range: (usize, usize), rng: &mut impl Rng) -> usize {
    rng.gen_range(range.0..=range.1)
}

/// Minimum bracketing slack of a two-branch bound pair around `sum`.
fn pair_slack(set: &bounds::BoundPairSet, sum: f64) -> f64 {
    (sum - set.lower_plus)
        .min(sum - set.lower_minus)
        .min(set.upper_plus - sum)
        .min(set.upper_minus - sum)
}

/// Runs the full randomized verification suite.
pub fn run_fuzz(config: &FuzzConfig) -> crate::error::Result<FuzzReport> {
    config.validate()?;
    let mut accs: BTreeMap<&'static str, Accumulator> = BTreeMap::new();
    let mut counterexamples = Vec::new();

    for trial in 0..config.trials as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(trial));
        let dim = uniform_in(config.dims, &mut rng);
        let n_obs = uniform_in(config.n_observables, &mut rng);
        let psi = random_state(dim, &mut rng);
        let a = random_hermitian(dim, &mut rng);
        let b = random_hermitian(dim, &mut rng);

        let digest_fn = {
            let psi0 = psi.amplitudes()[0];
            let a00 = a.matrix()[(0, 0)].re;
            move || format!("dim={dim} n={n_obs} psi[0]={psi0:.6e} a[0,0]={a00:.6e}")
        };
        let mut rec = Recorder {
            accs: std::mem::take(&mut accs),
            counterexamples: std::mem::take(&mut counterexamples),
            tolerance: config.slack_tolerance,
            digest: &digest_fn,
            trial,
        };

        run_trial(&mut rec, &mut rng, config, dim, n_obs, &psi, &a, &b);

        accs = rec.accs;
        counterexamples = rec.counterexamples;
    }

    let per_check = accs
        .into_iter()
        .map(|(name, acc)| {
            (
                name.to_string(),
                CheckStats {
                    trials: acc.trials,
                    rejected: acc.rejected,
                    min_slack: (acc.accepted > 0).then_some(acc.min_slack),
                    mean_slack: (acc.accepted > 0)
                        .then_some(acc.slack_sum / acc.accepted as f64),
                    failures: acc.failures,
                },
            )
        })
        .collect();

    Ok(FuzzReport {
        rng: RNG_ALGORITHM.to_string(),
        config: config.clone(),
        per_check,
        counterexamples,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    rec: &mut Recorder<'_>,
    rng: &mut impl Rng,
    config: &FuzzConfig,
    dim: usize,
    n_obs: usize,
    psi: &PureState,
    a: &Observable,
    b: &Observable,
) {
    let eps = config.eps_var_reject;

    // Raw-vector geometry checks on freshly drawn vectors.
    let x1 = random_complex_vector(dim, rng);
    let x2 = random_complex_vector(dim, rng);
    match geometry::maligranda_sandwich(&x1, &x2) {
        Ok(r) => {
            rec.record("maligranda_linear", r.linear_lower_slack().min(r.linear_upper_slack()));
            rec.record(
                "maligranda_squared",
                r.sandwich_lower_slack.min(r.sandwich_upper_slack),
            );
        }
        Err(_) => {
            rec.reject("maligranda_linear");
            rec.reject("maligranda_squared");
        }
    }
    let kato_vecs: Vec<DVector<C64>> =
        (0..n_obs).map(|_| random_complex_vector(dim, rng)).collect();
    match geometry::kato_sandwich(&kato_vecs) {
        Ok(k) => rec.record("kato", k.lower_slack().min(k.upper_slack())),
        Err(_) => rec.reject("kato"),
    }

    // Two-observable families on (a, b, psi).
    let m = match hilbert::moments(a, b, psi) {
        Ok(m) => m,
        Err(_) => {
            for check in TWO_OBS_CHECKS {
                rec.reject(check);
            }
            return;
        }
    };
    let sum = m.var_a + m.var_b;
    let degenerate = m.std_a.min(m.std_b) <= eps;
    if degenerate {
        for check in TWO_OBS_CHECKS {
            rec.reject(check);
        }
    } else {
        let f1 = bounds::family1_eps(a, b, psi, eps);
        let f3 = bounds::family3_eps(a, b, psi, eps);
        match &f1 {
            Ok(set) => rec.record("family1", pair_slack(set, sum)),
            Err(_) => rec.reject("family1"),
        }
        match &f3 {
            Ok(set) => rec.record("family3", pair_slack(set, sum)),
            Err(_) => rec.reject("family3"),
        }

        let perp = bounds::construct_orthogonal(a, b, psi, OrthogonalMode::Auto);
        match &perp {
            Ok(perp) => {
                match bounds::family2_eps(a, b, psi, perp, eps) {
                    Ok(set) => rec.record("family2", pair_slack(&set, sum)),
                    Err(_) => rec.reject("family2"),
                }
                match bounds::family4_eps(a, b, psi, perp, eps) {
                    Ok(set) => rec.record("family4", pair_slack(&set, sum)),
                    Err(_) => rec.reject("family4"),
                }
                match bounds::maccone_pati(a, b, psi, perp) {
                    Ok((mp_plus, mp_minus)) => {
                        rec.record("maccone_pati", (sum - mp_plus).min(sum - mp_minus))
                    }
                    Err(_) => rec.reject("maccone_pati"),
                }
            }
            Err(_) => {
                rec.reject("family2");
                rec.reject("family4");
                rec.reject("maccone_pati");
            }
        }

        let mut sets = Vec::new();
        if let Ok(set) = f1 {
            sets.push(set);
        }
        if let Ok(set) = f3 {
            sets.push(set);
        }
        if let (Ok(perp), true) = (&perp, true) {
            if let Ok(set) = bounds::family2_eps(a, b, psi, perp, eps) {
                sets.push(set);
            }
            if let Ok(set) = bounds::family4_eps(a, b, psi, perp, eps) {
                sets.push(set);
            }
        }
        match bounds::combined(&sets) {
            Ok(comb) => rec.record("combined", (sum - comb.lower).min(comb.upper - sum)),
            Err(_) => rec.reject("combined"),
        }

        match bounds::reverse_cov_eps(a, b, psi, eps) {
            Ok(upper) => rec.record("reverse_cov", upper - sum),
            Err(_) => rec.reject("reverse_cov"),
        }
    }

    // Multi-observable checks on n fresh observables.
    let observables: Vec<Observable> = (0..n_obs).map(|_| random_hermitian(dim, rng)).collect();
    let coefficients: Vec<UnitCoeff> =
        (0..n_obs).map(|_| UnitCoeff::ALL[rng.gen_range(0..4)]).collect();
    let spec = MultiObsSpec::new(observables, coefficients).expect("lengths match");
    match multi::multi_bounds_eps(&spec, psi, eps) {
        Ok(r) => rec.record("multi", r.lower_slack().min(r.upper_slack())),
        Err(_) => rec.reject("multi"),
    }

    let raw_perp = random_state(dim, rng);
    match hilbert::gram_schmidt_orthogonalize(&raw_perp, psi) {
        Ok(zeta_perp) => {
            match multi::multi_bounds_orthogonal_eps(
                &spec,
                psi,
                &zeta_perp,
                UpperVariant::MaxStd,
                eps,
            ) {
                Ok(r) => rec.record("multi_orthogonal", r.lower_slack().min(r.upper_slack())),
                Err(_) => rec.reject("multi_orthogonal"),
            }
        }
        Err(_) => rec.reject("multi_orthogonal"),
    }
}

const TWO_OBS_CHECKS: [&str; 8] = [
    "family1",
    "family2",
    "family3",
    "family4",
    "combined",
    "maccone_pati",
    "reverse_cov",
    "multi",
];
