//! Finite-dimensional complex states, Hermitian observables, and the moment
//! computations every bound consumes.
//!
//! All types are immutable after construction and every operation is a pure
//! function of its inputs. Second moments are computed as `<M psi | N psi>`
//! so that truncated operators stay exact as long as a single application of
//! each operator does not leave the truncated basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Norm tolerance for accepting a state as normalized.
pub const NORM_TOL: f64 = 1e-10;
/// Max-entry tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// A normalized pure state. Construction rejects non-normalized input rather
/// than repairing it; use [`PureState::normalized`] to normalize explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: DVector<C64>,
}

impl PureState {
    pub fn new(amps: DVector<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimTooSmall { dim: amps.len() });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amps })
    }

    /// Normalizes `amps` and wraps it as a state. Errors on (near-)zero input.
    pub fn normalized(amps: DVector<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimTooSmall { dim: amps.len() });
        }
        let norm = amps.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self { amps: amps / C64::new(norm, 0.0) })
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(DVector::from_row_slice(amps))
    }

    /// Basis state |k> of the given dimension.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim && dim >= 2);
        let mut amps = DVector::zeros(dim);
        amps[k] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// |<self|other>|; states are compared by fidelity, never componentwise.
    pub fn fidelity(&self, other: &PureState) -> f64 {
        self.amps.dotc(&other.amps).norm()
    }

    /// Componentwise complex conjugate of the state.
    pub fn conjugate(&self) -> Self {
        Self { amps: self.amps.map(|a| a.conj()) }
    }
}

/// A Hermitian operator. Matrices within [`HERMITICITY_TOL`] of Hermitian are
/// symmetrized as (M + M^H)/2 on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: DMatrix<C64>,
}

impl Observable {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { left: matrix.nrows(), right: matrix.ncols() });
        }
        let adj = matrix.adjoint();
        let deviation = (&matrix - &adj).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = (matrix + adj).map(|z| z * 0.5);
        Ok(Self { matrix })
    }

    pub fn from_real_rows(dim: usize, rows: &[f64]) -> Result<Self> {
        let m = DMatrix::from_row_slice(dim, dim, rows).map(|x| C64::new(x, 0.0));
        Self::new(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// A + c*I for real c.
    pub fn shifted(&self, c: f64) -> Self {
        let dim = self.dim();
        Self { matrix: &self.matrix + DMatrix::<C64>::identity(dim, dim) * C64::new(c, 0.0) }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { matrix: self.matrix.map(|z| z * c) }
    }

    pub fn add(&self, other: &Observable) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { matrix: &self.matrix + &other.matrix })
    }

    pub fn sub(&self, other: &Observable) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self { matrix: &self.matrix - &other.matrix })
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Unit coefficient attached to a deviation vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitCoeff {
    One,
    PlusI,
    MinusOne,
    MinusI,
}

impl UnitCoeff {
    pub const ALL: [UnitCoeff; 4] =
        [UnitCoeff::One, UnitCoeff::PlusI, UnitCoeff::MinusOne, UnitCoeff::MinusI];

    pub fn value(self) -> C64 {
        match self {
            UnitCoeff::One => C64::new(1.0, 0.0),
            UnitCoeff::PlusI => C64::new(0.0, 1.0),
            UnitCoeff::MinusOne => C64::new(-1.0, 0.0),
            UnitCoeff::MinusI => C64::new(0.0, -1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            UnitCoeff::One => "+1",
            UnitCoeff::PlusI => "+i",
            UnitCoeff::MinusOne => "-1",
            UnitCoeff::MinusI => "-i",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "+1" | "1" => Some(UnitCoeff::One),
            "+i" | "i" => Some(UnitCoeff::PlusI),
            "-1" => Some(UnitCoeff::MinusOne),
            "-i" => Some(UnitCoeff::MinusI),
            _ => None,
        }
    }
}

/// Sign choice in a +/- branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// coefficient * (M - <M> I) |psi>.
#[derive(Debug, Clone)]
pub struct DeviationVector {
    pub components: DVector<C64>,
    pub coefficient: UnitCoeff,
}

impl DeviationVector {
    pub fn norm(&self) -> f64 {
        self.components.norm()
    }
}

/// All scalar moments of an observable pair in one state.
#[derive(Debug, Clone)]
pub struct TwoObsMoments {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    pub std_a: f64,
    pub std_b: f64,
    pub cov: f64,
    /// <[A,B]>; purely imaginary for Hermitian A, B.
    pub comm_exp: C64,
    /// Delta(A+B), Delta(A-B).
    pub dev_sum_plus: f64,
    pub dev_sum_minus: f64,
    /// mu_+ = Delta(A+iB), mu_- = Delta(A-iB).
    pub dev_isum_plus: f64,
    pub dev_isum_minus: f64,
}

/// <psi|M|psi>.
pub fn expectation(obs: &Observable, psi: &PureState) -> Result<C64> {
    check_dims(obs.dim(), psi.dim())?;
    let m_psi = obs.matrix() * psi.amplitudes();
    Ok(psi.amplitudes().dotc(&m_psi))
}

/// Delta(M)^2 as the squared norm of (M - <M>)|psi|>.
///
/// The two-pass deviation form avoids the cancellation of <M^2> - <M>^2 and
/// matches the vector norms used everywhere else, so single- and
/// multi-observable code paths agree to machine precision.
pub fn variance(obs: &Observable, psi: &PureState) -> Result<f64> {
    check_dims(obs.dim(), psi.dim())?;
    let m_psi = obs.matrix() * psi.amplitudes();
    let mean = psi.amplitudes().dotc(&m_psi);
    Ok((m_psi - psi.amplitudes() * mean).norm_squared())
}

pub fn std_dev(obs: &Observable, psi: &PureState) -> Result<f64> {
    Ok(variance(obs, psi)?.sqrt())
}

/// Cov(A,B) = Re<(A - <A>) psi|(B - <B>) psi>.
pub fn covariance(a: &Observable, b: &Observable, psi: &PureState) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), psi.dim())?;
    let a_psi = a.matrix() * psi.amplitudes();
    let b_psi = b.matrix() * psi.amplitudes();
    let mean_a = psi.amplitudes().dotc(&a_psi).re;
    let mean_b = psi.amplitudes().dotc(&b_psi).re;
    let dev_a = a_psi - psi.amplitudes() * C64::new(mean_a, 0.0);
    let dev_b = b_psi - psi.amplitudes() * C64::new(mean_b, 0.0);
    Ok(dev_a.dotc(&dev_b).re)
}

/// <[A,B]> = <A psi|B psi> - <B psi|A psi>; purely imaginary.
pub fn commutator_expectation(a: &Observable, b: &Observable, psi: &PureState) -> Result<C64> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), psi.dim())?;
    let a_psi = a.matrix() * psi.amplitudes();
    let b_psi = b.matrix() * psi.amplitudes();
    let ab = a_psi.dotc(&b_psi);
    Ok(ab - ab.conj())
}

/// coefficient * (M - <M> I)|psi>; norm equals Delta(M) for any coefficient.
pub fn deviation_vector(obs: &Observable, psi: &PureState, coeff: UnitCoeff) -> Result<DeviationVector> {
    check_dims(obs.dim(), psi.dim())?;
    let m_psi = obs.matrix() * psi.amplitudes();
    let mean = psi.amplitudes().dotc(&m_psi);
    let dev = (m_psi - psi.amplitudes() * mean) * coeff.value();
    Ok(DeviationVector { components: dev, coefficient: coeff })
}

/// Delta(A +/- iB): norm of (A +/- iB - <A +/- iB>)|psi>.
pub fn non_hermitian_deviation_norm(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    sign: Sign,
) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), psi.dim())?;
    let i = C64::new(0.0, sign.factor());
    let m_psi = a.matrix() * psi.amplitudes() + (b.matrix() * psi.amplitudes()) * i;
    let mean = psi.amplitudes().dotc(&m_psi);
    Ok((m_psi - psi.amplitudes() * mean).norm())
}

/// All two-observable moments at once.
pub fn moments(a: &Observable, b: &Observable, psi: &PureState) -> Result<TwoObsMoments> {
    check_dims(a.dim(), b.dim())?;
    check_dims(a.dim(), psi.dim())?;
    let a_psi = a.matrix() * psi.amplitudes();
    let b_psi = b.matrix() * psi.amplitudes();
    let mean_a = psi.amplitudes().dotc(&a_psi).re;
    let mean_b = psi.amplitudes().dotc(&b_psi).re;
    let ab = a_psi.dotc(&b_psi);
    let comm_exp = ab - ab.conj();

    let dev_a = &a_psi - psi.amplitudes() * C64::new(mean_a, 0.0);
    let dev_b = &b_psi - psi.amplitudes() * C64::new(mean_b, 0.0);
    let var_a = dev_a.norm_squared();
    let var_b = dev_b.norm_squared();
    let cov = dev_a.dotc(&dev_b).re;
    let dev_sum_plus = (&dev_a + &dev_b).norm();
    let dev_sum_minus = (&dev_a - &dev_b).norm();
    let i = C64::new(0.0, 1.0);
    let dev_isum_plus = (&dev_a + &dev_b * i).norm();
    let dev_isum_minus = (&dev_a - &dev_b * i).norm();

    Ok(TwoObsMoments {
        mean_a,
        mean_b,
        var_a,
        var_b,
        std_a: var_a.sqrt(),
        std_b: var_b.sqrt(),
        cov,
        comm_exp,
        dev_sum_plus,
        dev_sum_minus,
        dev_isum_plus,
        dev_isum_minus,
    })
}

/// |<psi|psi_perp>|.
pub fn orthogonality_check(psi: &PureState, psi_perp: &PureState) -> Result<f64> {
    check_dims(psi.dim(), psi_perp.dim())?;
    Ok(psi.fidelity(psi_perp))
}

/// Projects `psi` out of `psi_perp` and renormalizes.
pub fn gram_schmidt_orthogonalize(psi_perp: &PureState, psi: &PureState) -> Result<PureState> {
    check_dims(psi.dim(), psi_perp.dim())?;
    let overlap = psi.amplitudes().dotc(psi_perp.amplitudes());
    let residual = psi_perp.amplitudes() - psi.amplitudes() * overlap;
    let norm = residual.norm();
    if norm < 1e-10 {
        return Err(Error::ParallelStates { residual: norm });
    }
    PureState::normalized(residual)
}
