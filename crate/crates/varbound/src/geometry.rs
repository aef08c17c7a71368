//! Normed-space inequality primitives on raw complex vectors: the two-vector
//! angular-distance sandwich and its n-vector generalization. Independent of
//! any quantum semantics; inner products are conjugate-linear in the first
//! argument, matching the bra-ket convention used elsewhere.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::hilbert::C64;

/// Vectors with Euclidean norm at or below this are rejected as degenerate.
pub const ZERO_TOL: f64 = 1e-12;

/// Two-vector sandwich report.
///
/// `f_l`/`f_r` are the squared bracket terms built from the angular distance;
/// the slacks measure by how much the two-sided squared inequality
/// `f_l - 2 n1 n2 >= n1^2 + n2^2 >= f_r / 2` holds.
#[derive(Debug, Clone)]
pub struct MaligrandaReport {
    pub norm1: f64,
    pub norm2: f64,
    pub norm_sum: f64,
    pub angular_distance: f64,
    pub f_l: f64,
    pub f_r: f64,
    pub sandwich_lower_slack: f64,
    pub sandwich_upper_slack: f64,
}

impl MaligrandaReport {
    /// Slack of the linear triangle-refinement sandwich
    /// `max(2-D) >= n1 + n2 - |x1+x2| >= min(2-D)` (upper side).
    pub fn linear_upper_slack(&self) -> f64 {
        let middle = self.norm1 + self.norm2 - self.norm_sum;
        self.norm1.max(self.norm2) * (2.0 - self.angular_distance) - middle
    }

    /// Lower side of the linear sandwich.
    pub fn linear_lower_slack(&self) -> f64 {
        let middle = self.norm1 + self.norm2 - self.norm_sum;
        middle - self.norm1.min(self.norm2) * (2.0 - self.angular_distance)
    }
}

/// n-vector sandwich report around `sum ||x_j||^2`.
#[derive(Debug, Clone)]
pub struct KatoReport {
    pub norms: Vec<f64>,
    pub norm_sum: f64,
    /// Xi = n - ||sum x_j / ||x_j|| ||.
    pub xi: f64,
    pub upper: f64,
    pub lower: f64,
    /// sum_{i != j} ||x_i|| ||x_j||.
    pub cross_term_sum: f64,
}

impl KatoReport {
    pub fn sum_of_squares(&self) -> f64 {
        self.norms.iter().map(|n| n * n).sum()
    }

    pub fn upper_slack(&self) -> f64 {
        self.upper - self.sum_of_squares()
    }

    pub fn lower_slack(&self) -> f64 {
        self.sum_of_squares() - self.lower
    }
}

fn nonzero_norm(x: &DVector<C64>) -> Result<f64> {
    let n = x.norm();
    if n <= ZERO_TOL {
        return Err(Error::ZeroVector { norm: n });
    }
    Ok(n)
}

/// || x1/||x1|| + x2/||x2|| || in [0, 2].
pub fn angular_distance(x1: &DVector<C64>, x2: &DVector<C64>) -> Result<f64> {
    let n1 = nonzero_norm(x1)?;
    let n2 = nonzero_norm(x2)?;
    let d = (x1 / C64::new(n1, 0.0) + x2 / C64::new(n2, 0.0)).norm();
    Ok(d.min(2.0))
}

/// Evaluates the two-sided squared sandwich for a pair of nonzero vectors.
pub fn maligranda_sandwich(x1: &DVector<C64>, x2: &DVector<C64>) -> Result<MaligrandaReport> {
    let n1 = nonzero_norm(x1)?;
    let n2 = nonzero_norm(x2)?;
    let norm_sum = (x1 + x2).norm();
    let d = angular_distance(x1, x2)?;
    let gap = 2.0 - d;
    let f_r = (norm_sum + n1.min(n2) * gap).powi(2);
    let f_l = (norm_sum + n1.max(n2) * gap).powi(2);
    let squares = n1 * n1 + n2 * n2;
    Ok(MaligrandaReport {
        norm1: n1,
        norm2: n2,
        norm_sum,
        angular_distance: d,
        f_l,
        f_r,
        sandwich_lower_slack: squares - 0.5 * f_r,
        sandwich_upper_slack: (f_l - 2.0 * n1 * n2) - squares,
    })
}

/// n-vector sandwich; for n = 2 it agrees with [`maligranda_sandwich`].
pub fn kato_sandwich(xs: &[DVector<C64>]) -> Result<KatoReport> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewVectors { count: n });
    }
    let norms: Vec<f64> = xs.iter().map(nonzero_norm).collect::<Result<_>>()?;
    let dim = xs[0].len();
    for x in xs.iter() {
        if x.len() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: x.len() });
        }
    }

    let mut total = DVector::<C64>::zeros(dim);
    let mut unit_total = DVector::<C64>::zeros(dim);
    for (x, nx) in xs.iter().zip(&norms) {
        total += x;
        unit_total += x / C64::new(*nx, 0.0);
    }
    let norm_sum = total.norm();
    let xi = (n as f64 - unit_total.norm()).max(0.0);

    let min = norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let linear_sum: f64 = norms.iter().sum();
    let cross_term_sum = linear_sum * linear_sum - norms.iter().map(|x| x * x).sum::<f64>();

    Ok(KatoReport {
        norms,
        norm_sum,
        xi,
        upper: (norm_sum + xi * max).powi(2) - cross_term_sum,
        lower: (norm_sum + xi * min).powi(2) / n as f64,
        cross_term_sum,
    })
}
