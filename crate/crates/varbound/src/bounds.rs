//! The four two-observable bound families on Delta A^2 + Delta B^2, their
//! combination, the classic baselines, and the companion-orthogonal-state
//! construction.
//!
//! Families 1 and 3 use only the measurement state; families 2 and 4
//! additionally project onto a state orthogonal to it. Odd families are
//! covariance-sensitive, even... no: families 1/2 are covariance-sensitive,
//! families 3/4 commutator-sensitive.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    self, moments, Observable, PureState, Sign, TwoObsMoments, C64,
};

/// Default floor on standard deviations entering a denominator.
pub const EPS_VAR: f64 = 1e-6;
/// Tolerance for accepting a companion state as orthogonal.
pub const ORTHO_TOL: f64 = 1e-10;
/// Radicands may stray outside their exact range by at most this before the
/// computation is treated as a genuine numerical error.
pub const RADICAND_SLOP: f64 = 1e-10;

/// Family-specific intermediate scalars.
#[derive(Debug, Clone)]
pub enum FamilyScalars {
    /// Family 1: G_+/- = 2 - sqrt(2 +/- 2 Cov/(dA dB)).
    Covariance { g_plus: f64, g_minus: f64 },
    /// Family 2: J_+/- = |<perp|A +/- B|psi>|, K_+/- = 2 - |<perp|A/dA +/- B/dB|psi>|.
    CovarianceOrthogonal { j_plus: f64, j_minus: f64, k_plus: f64, k_minus: f64 },
    /// Family 3: mu_+/- = Delta(A +/- iB), nu_+/- = 2 - sqrt(2 +/- i<[A,B]>/(dA dB)).
    Commutator { mu_plus: f64, mu_minus: f64, nu_plus: f64, nu_minus: f64 },
    /// Family 4: Lambda_+/- = |<perp|A +/- iB|psi>|, chi_+/- = 2 - |<perp|A/dA +/- iB/dB|psi>|.
    CommutatorOrthogonal { lambda_plus: f64, lambda_minus: f64, chi_plus: f64, chi_minus: f64 },
}

/// The +/- lower and upper bounds of one family.
#[derive(Debug, Clone)]
pub struct BoundPairSet {
    pub family: u8,
    pub lower_plus: f64,
    pub lower_minus: f64,
    pub upper_plus: f64,
    pub upper_minus: f64,
    pub scalars: FamilyScalars,
}

impl BoundPairSet {
    pub fn best_lower(&self) -> f64 {
        self.lower_plus.max(self.lower_minus)
    }

    pub fn best_upper(&self) -> f64 {
        self.upper_plus.min(self.upper_minus)
    }
}

/// Identifier of the (family, sign) branch achieving a combined bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundSource {
    pub family: u8,
    pub sign: Sign,
}

impl std::fmt::Display for BoundSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.family, self.sign.label())
    }
}

/// max of lower bounds / min of upper bounds over a collection of families.
#[derive(Debug, Clone)]
pub struct CombinedBound {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
}

/// How to pick the companion operator O in [`construct_orthogonal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthogonalMode {
    /// Eigenstate of A -> O = B; eigenstate of B -> O = A; otherwise O = A + B.
    Auto,
    OpA,
    OpB,
    SumPlus,
    SumMinus,
}

fn check_nondegenerate(m: &TwoObsMoments, eps: f64) -> Result<()> {
    let s = m.std_a.min(m.std_b);
    if s <= eps {
        return Err(Error::DegenerateVariance { std: s, eps });
    }
    Ok(())
}

fn clipped_sqrt_radicand(x: f64, hi: f64) -> Result<f64> {
    if x < -RADICAND_SLOP || x > hi + RADICAND_SLOP {
        return Err(Error::Numerical(format!("radicand {x:.6e} outside [0, {hi}]")));
    }
    Ok(x.clamp(0.0, hi))
}

fn pair_set(
    family: u8,
    base_plus: f64,
    gap_plus: f64,
    base_minus: f64,
    gap_minus: f64,
    m: &TwoObsMoments,
    scalars: FamilyScalars,
) -> BoundPairSet {
    let lo = m.std_a.min(m.std_b);
    let hi = m.std_a.max(m.std_b);
    let cross = 2.0 * m.std_a * m.std_b;
    BoundPairSet {
        family,
        lower_plus: 0.5 * (base_plus + gap_plus * lo).powi(2),
        lower_minus: 0.5 * (base_minus + gap_minus * lo).powi(2),
        upper_plus: (base_plus + gap_plus * hi).powi(2) - cross,
        upper_minus: (base_minus + gap_minus * hi).powi(2) - cross,
        scalars,
    }
}

/// Family 1: state-only, covariance-sensitive.
pub fn family1(a: &Observable, b: &Observable, psi: &PureState) -> Result<BoundPairSet> {
    family1_eps(a, b, psi, EPS_VAR)
}

pub fn family1_eps(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    eps_var: f64,
) -> Result<BoundPairSet> {
    let m = moments(a, b, psi)?;
    check_nondegenerate(&m, eps_var)?;
    let ratio = 2.0 * m.cov / (m.std_a * m.std_b);
    let g_plus = 2.0 - clipped_sqrt_radicand(2.0 + ratio, 4.0)?.sqrt();
    let g_minus = 2.0 - clipped_sqrt_radicand(2.0 - ratio, 4.0)?.sqrt();
    Ok(pair_set(
        1,
        m.dev_sum_plus,
        g_plus,
        m.dev_sum_minus,
        g_minus,
        &m,
        FamilyScalars::Covariance { g_plus, g_minus },
    ))
}

fn projection(op_psi: &nalgebra::DVector<C64>, perp: &PureState) -> f64 {
    perp.amplitudes().dotc(op_psi).norm()
}

fn check_orthogonal(psi: &PureState, perp: &PureState) -> Result<()> {
    let overlap = hilbert::orthogonality_check(psi, perp)?;
    if overlap > ORTHO_TOL {
        return Err(Error::NotOrthogonal { overlap });
    }
    Ok(())
}

/// Family 2: orthogonal-state projection, covariance-sensitive.
pub fn family2(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    psi_perp: &PureState,
) -> Result<BoundPairSet> {
    family2_eps(a, b, psi, psi_perp, EPS_VAR)
}

pub fn family2_eps(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    psi_perp: &PureState,
    eps_var: f64,
) -> Result<BoundPairSet> {
    let m = moments(a, b, psi)?;
    check_nondegenerate(&m, eps_var)?;
    check_orthogonal(psi, psi_perp)?;
    let a_psi = a.matrix() * psi.amplitudes();
    let b_psi = b.matrix() * psi.amplitudes();
    let j_plus = projection(&(&a_psi + &b_psi), psi_perp);
    let j_minus = projection(&(&a_psi - &b_psi), psi_perp);
    let sa = C64::new(1.0 / m.std_a, 0.0);
    let sb = C64::new(1.0 / m.std_b, 0.0);
    let k_plus = 2.0 - projection(&(&a_psi * sa + &b_psi * sb), psi_perp);
    let k_minus = 2.0 - projection(&(&a_psi * sa - &b_psi * sb), psi_perp);
    Ok(pair_set(
        2,
        j_plus,
        k_plus,
        j_minus,
        k_minus,
        &m,
        FamilyScalars::CovarianceOrthogonal { j_plus, j_minus, k_plus, k_minus },
    ))
}

/// Family 3: state-only, commutator-sensitive.
pub fn family3(a: &Observable, b: &Observable, psi: &PureState) -> Result<BoundPairSet> {
    family3_eps(a, b, psi, EPS_VAR)
}

pub fn family3_eps(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    eps_var: f64,
) -> Result<BoundPairSet> {
    let m = moments(a, b, psi)?;
    check_nondegenerate(&m, eps_var)?;
    // i<[A,B]> is real for Hermitian A, B.
    let ratio = (Complex64::new(0.0, 1.0) * m.comm_exp).re / (m.std_a * m.std_b);
    let nu_plus = 2.0 - clipped_sqrt_radicand(2.0 + ratio, 4.0)?.sqrt();
    let nu_minus = 2.0 - clipped_sqrt_radicand(2.0 - ratio, 4.0)?.sqrt();
    Ok(pair_set(
        3,
        m.dev_isum_plus,
        nu_plus,
        m.dev_isum_minus,
        nu_minus,
        &m,
        FamilyScalars::Commutator {
            mu_plus: m.dev_isum_plus,
            mu_minus: m.dev_isum_minus,
            nu_plus,
            nu_minus,
        },
    ))
}

/// Family 4: orthogonal-state projection, commutator-sensitive.
pub fn family4(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    psi_perp: &PureState,
) -> Result<BoundPairSet> {
    family4_eps(a, b, psi, psi_perp, EPS_VAR)
}

pub fn family4_eps(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    psi_perp: &PureState,
    eps_var: f64,
) -> Result<BoundPairSet> {
    let m = moments(a, b, psi)?;
    check_nondegenerate(&m, eps_var)?;
    check_orthogonal(psi, psi_perp)?;
    let a_psi = a.matrix() * psi.amplitudes();
    let b_psi = b.matrix() * psi.amplitudes();
    let i = C64::new(0.0, 1.0);
    let lambda_plus = projection(&(&a_psi + &b_psi * i), psi_perp);
    let lambda_minus = projection(&(&a_psi - &b_psi * i), psi_perp);
    let sa = C64::new(1.0 / m.std_a, 0.0);
    let sb = i / m.std_b;
    let chi_plus = 2.0 - projection(&(&a_psi * sa + &b_psi * sb), psi_perp);
    let chi_minus = 2.0 - projection(&(&a_psi * sa - &b_psi * sb), psi_perp);
    Ok(pair_set(
        4,
        lambda_plus,
        chi_plus,
        lambda_minus,
        chi_minus,
        &m,
        FamilyScalars::CommutatorOrthogonal { lambda_plus, lambda_minus, chi_plus, chi_minus },
    ))
}

/// Tightest combination over a collection of family bound sets.
///
/// Ties break deterministically toward the lowest family index, then the '+'
/// branch, so sweep output columns are reproducible.
pub fn combined(sets: &[BoundPairSet]) -> Result<CombinedBound> {
    if sets.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted: Vec<&BoundPairSet> = sets.iter().collect();
    sorted.sort_by_key(|s| s.family);

    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    let mut lower_source = BoundSource { family: sorted[0].family, sign: Sign::Plus };
    let mut upper_source = lower_source;
    for set in sorted {
        for (value, sign) in [(set.lower_plus, Sign::Plus), (set.lower_minus, Sign::Minus)] {
            if value > lower {
                lower = value;
                lower_source = BoundSource { family: set.family, sign };
            }
        }
        for (value, sign) in [(set.upper_plus, Sign::Plus), (set.upper_minus, Sign::Minus)] {
            if value < upper {
                upper = value;
                upper_source = BoundSource { family: set.family, sign };
            }
        }
    }
    Ok(CombinedBound { lower, upper, lower_source, upper_source })
}

/// |<[A,B]>/2|^2: lower bound on the variance product.
pub fn robertson(a: &Observable, b: &Observable, psi: &PureState) -> Result<f64> {
    let comm = hilbert::commutator_expectation(a, b, psi)?;
    Ok((comm * 0.5).norm_sqr())
}

/// Robertson plus the squared covariance.
pub fn schrodinger(a: &Observable, b: &Observable, psi: &PureState) -> Result<f64> {
    let cov = hilbert::covariance(a, b, psi)?;
    Ok(robertson(a, b, psi)? + cov * cov)
}

/// Both sign branches of the projection-strengthened sum lower bound
/// `+/- i<[A,B]> + |<psi|A +/- iB|perp>|^2`.
pub fn maccone_pati(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    psi_perp: &PureState,
) -> Result<(f64, f64)> {
    check_orthogonal(psi, psi_perp)?;
    let comm = hilbert::commutator_expectation(a, b, psi)?;
    let i_comm = (C64::new(0.0, 1.0) * comm).re;
    let i = C64::new(0.0, 1.0);
    let a_perp = a.matrix() * psi_perp.amplitudes();
    let b_perp = b.matrix() * psi_perp.amplitudes();
    let proj_plus = psi.amplitudes().dotc(&(&a_perp + &b_perp * i)).norm_sqr();
    let proj_minus = psi.amplitudes().dotc(&(&a_perp - &b_perp * i)).norm_sqr();
    Ok((i_comm + proj_plus, -i_comm + proj_minus))
}

/// Covariance-based reverse bound
/// `2 Delta(A-B)^2 / (1 - Cov/(dA dB)) - 2 dA dB`.
///
/// The excess over the variance sum is `(1+r)(dA-dB)^2/(1-r)` with
/// `r = Cov/(dA dB)`, so the bound is sound whenever the denominator is
/// positive; without the square on Delta(A-B) it is dimensionally wrong and
/// fails on random draws.
pub fn reverse_cov(a: &Observable, b: &Observable, psi: &PureState) -> Result<f64> {
    reverse_cov_eps(a, b, psi, EPS_VAR)
}

pub fn reverse_cov_eps(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    eps_var: f64,
) -> Result<f64> {
    let m = moments(a, b, psi)?;
    check_nondegenerate(&m, eps_var)?;
    let denom = 1.0 - m.cov / (m.std_a * m.std_b);
    if denom <= 1e-9 {
        return Err(Error::SingularDenominator);
    }
    Ok(2.0 * m.dev_sum_minus.powi(2) / denom - 2.0 * m.std_a * m.std_b)
}

/// Builds a unit companion state orthogonal to `psi` as the normalized
/// deviation of a chosen operator O: result ~ (O - <O>)|psi>.
pub fn construct_orthogonal(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    mode: OrthogonalMode,
) -> Result<PureState> {
    const EIG_EPS: f64 = 1e-10;
    let op = match mode {
        OrthogonalMode::OpA => a.clone(),
        OrthogonalMode::OpB => b.clone(),
        OrthogonalMode::SumPlus => a.add(b)?,
        OrthogonalMode::SumMinus => a.sub(b)?,
        OrthogonalMode::Auto => {
            let std_a = hilbert::std_dev(a, psi)?;
            let std_b = hilbert::std_dev(b, psi)?;
            if std_a < EIG_EPS {
                b.clone()
            } else if std_b < EIG_EPS {
                a.clone()
            } else {
                a.add(b)?
            }
        }
    };
    let dev = hilbert::deviation_vector(&op, psi, crate::hilbert::UnitCoeff::One)?;
    let norm = dev.norm();
    if norm <= EIG_EPS {
        return Err(Error::DegenerateVariance { std: norm, eps: EIG_EPS });
    }
    PureState::normalized(dev.components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::UnitCoeff;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> Observable {
        Observable::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    fn pauli_y() -> Observable {
        Observable::new(DMatrix::from_row_slice(2, 2, &[
            c(0.0, 0.0),
            c(0.0, -1.0),
            c(0.0, 1.0),
            c(0.0, 0.0),
        ]))
        .unwrap()
    }

    fn pauli_z() -> Observable {
        Observable::from_real_rows(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    fn plus_state() -> PureState {
        let h = 0.5f64.sqrt();
        PureState::from_slice(&[c(h, 0.0), c(h, 0.0)]).unwrap()
    }

    fn number_op(levels: usize) -> Observable {
        Observable::new(DMatrix::from_fn(levels, levels, |i, j| {
            if i == j { c(i as f64, 0.0) } else { c(0.0, 0.0) }
        }))
        .unwrap()
    }

    fn quadrature_op(levels: usize) -> Observable {
        Observable::new(DMatrix::from_fn(levels, levels, |i, j| {
            if i + 1 == j {
                c(0.5 * (j as f64).sqrt(), 0.0)
            } else if j + 1 == i {
                c(0.5 * (i as f64).sqrt(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
        .unwrap()
    }

    fn fock_superposition(levels: usize, theta: f64, phi: f64) -> (PureState, PureState) {
        let mut amps = DVector::zeros(levels);
        amps[0] = c(theta.cos(), 0.0);
        amps[1] = C64::from_polar(theta.sin(), phi);
        let mut perp = DVector::zeros(levels);
        perp[0] = c(theta.sin(), 0.0);
        perp[1] = -C64::from_polar(theta.cos(), phi);
        (PureState::new(amps).unwrap(), PureState::new(perp).unwrap())
    }

    #[test]
    fn family1_identical_observables_saturate() {
        let z = pauli_z();
        let set = family1(&z, &z, &plus_state()).unwrap();
        assert_abs_diff_eq!(set.lower_plus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_plus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(set.lower_minus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_minus, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn family1_degenerate_variance_error() {
        let set = family1(&pauli_z(), &pauli_x(), &PureState::basis(2, 0));
        assert!(matches!(set, Err(Error::DegenerateVariance { .. })));
    }

    #[test]
    fn family1_brackets_number_quadrature_sum() {
        let (psi, _) = fock_superposition(8, std::f64::consts::FRAC_PI_4, FRAC_PI_2);
        let (a, b) = (number_op(8), quadrature_op(8));
        let set = family1(&a, &b, &psi).unwrap();
        let sum = 0.75;
        assert!(set.best_lower() <= sum + 1e-9);
        assert!(set.best_upper() >= sum - 1e-9);
    }

    #[test]
    fn family2_brackets_number_quadrature_sum() {
        let (psi, perp) = fock_superposition(8, std::f64::consts::FRAC_PI_4, FRAC_PI_2);
        let (a, b) = (number_op(8), quadrature_op(8));
        let set = family2(&a, &b, &psi, &perp).unwrap();
        assert!(set.best_lower() <= 0.75 + 1e-9);
        assert!(set.best_upper() >= 0.75 - 1e-9);
    }

    #[test]
    fn family2_rejects_non_orthogonal() {
        let (psi, _) = fock_superposition(8, 0.7, 0.2);
        let (other, _) = fock_superposition(8, 0.9, 0.2);
        let err = family2(&number_op(8), &quadrature_op(8), &psi, &other);
        assert!(matches!(err, Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn family3_pauli_ground_state_saturates() {
        // mu_+ = 0, nu_+ = 2, mu_- = 2, nu_- = 0
        let set = family3(&pauli_x(), &pauli_y(), &PureState::basis(2, 0)).unwrap();
        match set.scalars {
            FamilyScalars::Commutator { mu_plus, mu_minus, nu_plus, nu_minus } => {
                assert_abs_diff_eq!(mu_plus, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(nu_plus, 2.0, epsilon = 1e-12);
                assert_abs_diff_eq!(mu_minus, 2.0, epsilon = 1e-12);
                assert_abs_diff_eq!(nu_minus, 0.0, epsilon = 1e-12);
            }
            _ => panic!("wrong scalar kind"),
        }
        assert_abs_diff_eq!(set.lower_plus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(set.lower_minus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_plus, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_minus, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn family3_number_quadrature_point_values() {
        // Hand oracle: mu_+ = sqrt(5)/2, nu_+ = 2 - sqrt(2 + sqrt 2),
        // dA = 1/2, dB = 1/sqrt(2).
        let (psi, _) = fock_superposition(8, std::f64::consts::FRAC_PI_4, FRAC_PI_2);
        let set = family3(&number_op(8), &quadrature_op(8), &psi).unwrap();
        let mu = 1.25f64.sqrt();
        let nu = 2.0 - (2.0 + 2f64.sqrt()).sqrt();
        let expected_lower = 0.5 * (mu + nu * 0.5).powi(2);
        let expected_upper = (mu + nu * 0.5f64.sqrt()).powi(2) - 2.0 * 0.5 * 0.5f64.sqrt();
        assert_abs_diff_eq!(set.lower_plus, expected_lower, epsilon = 1e-10);
        assert_abs_diff_eq!(set.upper_plus, expected_upper, epsilon = 1e-10);
        assert!(set.lower_plus <= 0.75 && set.upper_plus >= 0.75);
    }

    #[test]
    fn family4_rejects_non_orthogonal() {
        let (psi, _) = fock_superposition(8, 0.7, 0.2);
        let (other, _) = fock_superposition(8, 0.9, 0.2);
        let err = family4(&number_op(8), &quadrature_op(8), &psi, &other);
        assert!(matches!(err, Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn family4_brackets_number_quadrature_sum() {
        let (psi, perp) = fock_superposition(8, 1.0, 0.6);
        let (a, b) = (number_op(8), quadrature_op(8));
        let m = moments(&a, &b, &psi).unwrap();
        let sum = m.var_a + m.var_b;
        let set = family4(&a, &b, &psi, &perp).unwrap();
        assert!(set.best_lower() <= sum + 1e-9);
        assert!(set.best_upper() >= sum - 1e-9);
    }

    #[test]
    fn combined_single_set() {
        let (psi, _) = fock_superposition(8, 0.8, 0.3);
        let set = family1(&number_op(8), &quadrature_op(8), &psi).unwrap();
        let comb = combined(std::slice::from_ref(&set)).unwrap();
        assert_abs_diff_eq!(comb.lower, set.best_lower(), epsilon = 1e-15);
        assert_abs_diff_eq!(comb.upper, set.best_upper(), epsilon = 1e-15);
        assert_eq!(comb.lower_source.family, 1);
    }

    #[test]
    fn combined_empty_errors() {
        assert!(matches!(combined(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn combined_number_quadrature_prefers_family3_lower() {
        let (psi, _) = fock_superposition(8, std::f64::consts::FRAC_PI_4, FRAC_PI_2);
        let (a, b) = (number_op(8), quadrature_op(8));
        let sets = vec![family1(&a, &b, &psi).unwrap(), family3(&a, &b, &psi).unwrap()];
        let comb = combined(&sets).unwrap();
        let mu = 1.25f64.sqrt();
        let nu = 2.0 - (2.0 + 2f64.sqrt()).sqrt();
        assert_abs_diff_eq!(comb.lower, 0.5 * (mu + nu * 0.5).powi(2), epsilon = 1e-10);
        assert_eq!(comb.lower_source, BoundSource { family: 3, sign: Sign::Plus });
    }

    #[test]
    fn robertson_schrodinger_ordering() {
        let (psi, _) = fock_superposition(8, 0.9, 0.7);
        let (a, b) = (number_op(8), quadrature_op(8));
        let r = robertson(&a, &b, &psi).unwrap();
        let s = schrodinger(&a, &b, &psi).unwrap();
        assert!(s >= r - 1e-12);
        let m = moments(&a, &b, &psi).unwrap();
        assert!(m.var_a * m.var_b >= s - 1e-9);
    }

    #[test]
    fn robertson_commuting_pair_is_zero() {
        let z = pauli_z();
        let z2 = pauli_z();
        let psi = PureState::basis(2, 0);
        assert_abs_diff_eq!(robertson(&z, &z2, &psi).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(schrodinger(&z, &z2, &psi).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn maccone_pati_pauli_branches() {
        let (mp_plus, mp_minus) =
            maccone_pati(&pauli_x(), &pauli_y(), &PureState::basis(2, 0), &PureState::basis(2, 1))
                .unwrap();
        // sum of variances is 2; the larger branch saturates it
        assert_abs_diff_eq!(mp_plus.max(mp_minus), 2.0, epsilon = 1e-12);
        assert!(mp_plus <= 2.0 + 1e-9 && mp_minus <= 2.0 + 1e-9);
    }

    #[test]
    fn reverse_cov_singular_for_identical() {
        let err = reverse_cov(&pauli_z(), &pauli_z(), &plus_state());
        assert!(matches!(err, Err(Error::SingularDenominator)));
    }

    #[test]
    fn reverse_cov_bounds_sum_from_above() {
        let (psi, _) = fock_superposition(8, 0.9, 0.7);
        let (a, b) = (number_op(8), quadrature_op(8));
        let m = moments(&a, &b, &psi).unwrap();
        let u = reverse_cov(&a, &b, &psi).unwrap();
        assert!(u >= m.var_a + m.var_b - 1e-9);
    }

    #[test]
    fn construct_orthogonal_eigenstate_branch() {
        // |0> is an eigenstate of sigma_z, so O = sigma_x and the companion is |1>
        let perp =
            construct_orthogonal(&pauli_x(), &pauli_z(), &PureState::basis(2, 0), OrthogonalMode::Auto);
        // arguments are (A, B): here psi is an eigenstate of B = sigma_z
        let perp = perp.unwrap();
        assert!(perp.fidelity(&PureState::basis(2, 1)) >= 1.0 - 1e-12);
    }

    #[test]
    fn construct_orthogonal_sum_mode() {
        let (psi, _) = fock_superposition(8, std::f64::consts::FRAC_PI_4, 0.78);
        let perp = construct_orthogonal(
            &number_op(8),
            &quadrature_op(8),
            &psi,
            OrthogonalMode::SumPlus,
        )
        .unwrap();
        assert!(hilbert::orthogonality_check(&psi, &perp).unwrap() <= 1e-12);
    }

    #[test]
    fn construct_orthogonal_joint_eigenstate_fails() {
        let err = construct_orthogonal(&pauli_z(), &pauli_z(), &PureState::basis(2, 0), OrthogonalMode::Auto);
        assert!(matches!(err, Err(Error::DegenerateVariance { .. })));
    }

    #[test]
    fn family1_matches_maligranda_on_deviation_vectors() {
        let (psi, _) = fock_superposition(8, 0.85, 1.9);
        let (a, b) = (number_op(8), quadrature_op(8));
        let set = family1(&a, &b, &psi).unwrap();
        let x1 = hilbert::deviation_vector(&a, &psi, UnitCoeff::One).unwrap().components;
        let x2p = hilbert::deviation_vector(&b, &psi, UnitCoeff::One).unwrap().components;
        let x2m = hilbert::deviation_vector(&b, &psi, UnitCoeff::MinusOne).unwrap().components;
        let rp = crate::geometry::maligranda_sandwich(&x1, &x2p).unwrap();
        let rm = crate::geometry::maligranda_sandwich(&x1, &x2m).unwrap();
        assert_abs_diff_eq!(set.lower_plus, 0.5 * rp.f_r, epsilon = 1e-12);
        assert_abs_diff_eq!(set.lower_minus, 0.5 * rm.f_r, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_plus, rp.f_l - 2.0 * rp.norm1 * rp.norm2, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_minus, rm.f_l - 2.0 * rm.norm1 * rm.norm2, epsilon = 1e-12);
    }

    #[test]
    fn family3_matches_maligranda_on_deviation_vectors() {
        let (psi, _) = fock_superposition(8, 0.85, 1.9);
        let (a, b) = (number_op(8), quadrature_op(8));
        let set = family3(&a, &b, &psi).unwrap();
        let x1 = hilbert::deviation_vector(&a, &psi, UnitCoeff::One).unwrap().components;
        let x2p = hilbert::deviation_vector(&b, &psi, UnitCoeff::PlusI).unwrap().components;
        let rp = crate::geometry::maligranda_sandwich(&x1, &x2p).unwrap();
        assert_abs_diff_eq!(set.lower_plus, 0.5 * rp.f_r, epsilon = 1e-12);
        assert_abs_diff_eq!(set.upper_plus, rp.f_l - 2.0 * rp.norm1 * rp.norm2, epsilon = 1e-12);
    }
}
