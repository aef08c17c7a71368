//! Multi-observable forward and reverse bounds: the state-only n-observable
//! sandwich, its orthogonal-projection variant, and an exhaustive search for
//! the tightest unit-coefficient assignment.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::hilbert::{self, Observable, PureState, UnitCoeff, C64};

/// Default floor on standard deviations (same role as in the two-observable
/// families).
pub const EPS_VAR: f64 = crate::bounds::EPS_VAR;
/// Tolerance for accepting the companion state as orthogonal.
pub const ORTHO_TOL: f64 = crate::bounds::ORTHO_TOL;
/// Slack allowed on the G-parameter radicand before erroring.
pub const RADICAND_SLOP: f64 = 1e-10;
/// Exhaustive coefficient search is limited to this many observables.
pub const MAX_SEARCH_N: usize = 8;

/// A set of observables with unit coefficients attached.
#[derive(Debug, Clone)]
pub struct MultiObsSpec {
    observables: Vec<Observable>,
    coefficients: Vec<UnitCoeff>,
}

impl MultiObsSpec {
    pub fn new(observables: Vec<Observable>, coefficients: Vec<UnitCoeff>) -> Result<Self> {
        if observables.len() < 2 {
            return Err(Error::TooFewVectors { count: observables.len() });
        }
        if observables.len() != coefficients.len() {
            return Err(Error::DimensionMismatch {
                left: observables.len(),
                right: coefficients.len(),
            });
        }
        let dim = observables[0].dim();
        for obs in &observables {
            if obs.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: obs.dim() });
            }
        }
        Ok(Self { observables, coefficients })
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn coefficients(&self) -> &[UnitCoeff] {
        &self.coefficients
    }
}

/// Scalar ingredients of the n-observable bounds.
#[derive(Debug, Clone)]
pub struct MultiMoments {
    /// Delta A_j for each observable.
    pub stds: Vec<f64>,
    /// F = Delta(sum_j a_j A_j), the norm of the summed deviation vectors.
    pub combined_dev: f64,
    /// G = || sum_j x_j / ||x_j|| ||, in [0, n].
    pub g_param: f64,
    /// sum_{i != j} Delta A_i Delta A_j.
    pub cross_sum: f64,
}

/// Which std enters the upper bound's bracket in the orthogonal variant.
///
/// The state-only form pairs the upper bound with max_k and the lower bound
/// with min_k; `MaxStd` carries that pairing over (the default), `MinStd`
/// uses min_k in both brackets and is emitted for comparison only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpperVariant {
    #[default]
    MaxStd,
    MinStd,
}

/// Result of one multi-observable bound evaluation.
#[derive(Debug, Clone)]
pub struct MultiBoundResult {
    pub lower: f64,
    pub upper: f64,
    pub used_orthogonal: bool,
    /// F-perp = |<perp| sum_j a_j A_j |psi>| when orthogonal.
    pub f_perp: Option<f64>,
    /// G-perp = |<perp| sum_j a_j A_j / dA_j |psi>| when orthogonal.
    pub g_perp: Option<f64>,
    pub moments: MultiMoments,
}

impl MultiBoundResult {
    pub fn variance_sum(&self) -> f64 {
        self.moments.stds.iter().map(|s| s * s).sum()
    }

    pub fn upper_slack(&self) -> f64 {
        self.upper - self.variance_sum()
    }

    pub fn lower_slack(&self) -> f64 {
        self.variance_sum() - self.lower
    }
}

fn deviation_vectors(
    spec: &MultiObsSpec,
    psi: &PureState,
    eps_var: f64,
) -> Result<(Vec<DVector<C64>>, Vec<f64>)> {
    let mut vecs = Vec::with_capacity(spec.len());
    let mut stds = Vec::with_capacity(spec.len());
    for (obs, &coeff) in spec.observables.iter().zip(&spec.coefficients) {
        let dev = hilbert::deviation_vector(obs, psi, coeff)?;
        let std = dev.norm();
        if std <= eps_var {
            return Err(Error::DegenerateVariance { std, eps: eps_var });
        }
        vecs.push(dev.components);
        stds.push(std);
    }
    Ok((vecs, stds))
}

fn multi_moments(vecs: &[DVector<C64>], stds: &[f64]) -> Result<MultiMoments> {
    let n = vecs.len();
    let dim = vecs[0].len();
    let mut total = DVector::<C64>::zeros(dim);
    let mut unit_total = DVector::<C64>::zeros(dim);
    for (x, &s) in vecs.iter().zip(stds) {
        total += x;
        unit_total += x / C64::new(s, 0.0);
    }
    let g_raw = unit_total.norm();
    if g_raw > n as f64 + RADICAND_SLOP {
        return Err(Error::Numerical(format!("G parameter {g_raw:.6e} exceeds n = {n}")));
    }
    let linear: f64 = stds.iter().sum();
    let cross_sum = linear * linear - stds.iter().map(|s| s * s).sum::<f64>();
    Ok(MultiMoments {
        stds: stds.to_vec(),
        combined_dev: total.norm(),
        g_param: g_raw.min(n as f64),
        cross_sum,
    })
}

/// State-only n-observable sandwich:
/// `[F + (n-G) max]^2 - cross >= sum var >= (1/n)[F + (n-G) min]^2`.
pub fn multi_bounds(spec: &MultiObsSpec, psi: &PureState) -> Result<MultiBoundResult> {
    multi_bounds_eps(spec, psi, EPS_VAR)
}

pub fn multi_bounds_eps(
    spec: &MultiObsSpec,
    psi: &PureState,
    eps_var: f64,
) -> Result<MultiBoundResult> {
    if spec.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { left: spec.dim(), right: psi.dim() });
    }
    let (vecs, stds) = deviation_vectors(spec, psi, eps_var)?;
    let m = multi_moments(&vecs, &stds)?;
    let n = spec.len() as f64;
    let gap = n - m.g_param;
    let min = stds.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = stds.iter().cloned().fold(0.0, f64::max);
    Ok(MultiBoundResult {
        lower: (m.combined_dev + gap * min).powi(2) / n,
        upper: (m.combined_dev + gap * max).powi(2) - m.cross_sum,
        used_orthogonal: false,
        f_perp: None,
        g_perp: None,
        moments: m,
    })
}

/// Orthogonal-projection variant with F, G replaced by the companion-state
/// projections F-perp, G-perp.
pub fn multi_bounds_orthogonal(
    spec: &MultiObsSpec,
    psi: &PureState,
    zeta_perp: &PureState,
    variant: UpperVariant,
) -> Result<MultiBoundResult> {
    multi_bounds_orthogonal_eps(spec, psi, zeta_perp, variant, EPS_VAR)
}

pub fn multi_bounds_orthogonal_eps(
    spec: &MultiObsSpec,
    psi: &PureState,
    zeta_perp: &PureState,
    variant: UpperVariant,
    eps_var: f64,
) -> Result<MultiBoundResult> {
    if spec.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { left: spec.dim(), right: psi.dim() });
    }
    let overlap = hilbert::orthogonality_check(psi, zeta_perp)?;
    if overlap > ORTHO_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    let (vecs, stds) = deviation_vectors(spec, psi, eps_var)?;
    let m = multi_moments(&vecs, &stds)?;

    let dim = spec.dim();
    let mut weighted = DVector::<C64>::zeros(dim);
    let mut unit_weighted = DVector::<C64>::zeros(dim);
    for (x, &s) in vecs.iter().zip(&stds) {
        weighted += x;
        unit_weighted += x / C64::new(s, 0.0);
    }
    let f_perp = zeta_perp.amplitudes().dotc(&weighted).norm();
    let g_perp = zeta_perp.amplitudes().dotc(&unit_weighted).norm();

    let n = spec.len() as f64;
    let gap = n - g_perp;
    let min = stds.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = stds.iter().cloned().fold(0.0, f64::max);
    let upper_std = match variant {
        UpperVariant::MaxStd => max,
        UpperVariant::MinStd => min,
    };
    Ok(MultiBoundResult {
        lower: (f_perp + gap * min).powi(2) / n,
        upper: (f_perp + gap * upper_std).powi(2) - m.cross_sum,
        used_orthogonal: true,
        f_perp: Some(f_perp),
        g_perp: Some(g_perp),
        moments: m,
    })
}

/// Objective of the coefficient search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchGoal {
    /// Maximize the lower bound.
    #[default]
    MaxLower,
    /// Minimize the upper bound.
    MinUpper,
}

/// Exhaustively searches coefficient assignments (first coefficient pinned to
/// +1 by global-phase invariance) for the tightest bound.
///
/// Ties break lexicographically over (+1, +i, -1, -i) per position, so the
/// result is deterministic and independent of evaluation order.
pub fn tightest_coefficients(
    observables: &[Observable],
    psi: &PureState,
    zeta_perp: Option<&PureState>,
    goal: SearchGoal,
) -> Result<(MultiObsSpec, MultiBoundResult)> {
    let n = observables.len();
    if n < 2 {
        return Err(Error::TooFewVectors { count: n });
    }
    if n > MAX_SEARCH_N {
        return Err(Error::Numerical(format!(
            "coefficient search limited to {MAX_SEARCH_N} observables (got {n})"
        )));
    }

    let mut best: Option<(MultiObsSpec, MultiBoundResult)> = None;
    let total = 4usize.pow((n - 1) as u32);
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(n);
        coeffs.push(UnitCoeff::One);
        let mut rem = idx;
        for _ in 1..n {
            coeffs.push(UnitCoeff::ALL[rem % 4]);
            rem /= 4;
        }
        let spec = MultiObsSpec::new(observables.to_vec(), coeffs)?;
        let result = match zeta_perp {
            Some(perp) => multi_bounds_orthogonal(&spec, psi, perp, UpperVariant::MaxStd)?,
            None => multi_bounds(&spec, psi)?,
        };
        let better = match (&best, goal) {
            (None, _) => true,
            (Some((_, cur)), SearchGoal::MaxLower) => result.lower > cur.lower + 1e-15,
            (Some((_, cur)), SearchGoal::MinUpper) => result.upper < cur.upper - 1e-15,
        };
        if better {
            best = Some((spec, result));
        }
    }
    Ok(best.expect("search space is nonempty"))
}
