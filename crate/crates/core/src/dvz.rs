//! Forward and inverse DVZ correspondence between `(lambda0, lambda1, alpha)`
//! and Jacobi matrices.
//!
//! A Jacobi matrix with entries `b_n`, `a_n > 0` is a DVZ transform iff the
//! points `z_n = b_0 + ... + b_n + i a_n` with even `n` lie on one circle
//! centred at `lambda1` and those with odd `n` lie on the concentric circle
//! through the origin. The inverse below recovers the centre from each odd
//! point in closed form, checks that all estimates agree, and reads off
//! `alpha_n = (b_0 + ... + b_n - lambda1) / lambda_{n mod 2}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrices::{build_k, jacobi_from_k, Tridiagonal};
use crate::seqcore::VerblunskySequence;

/// Default absolute tolerance on circle residuals.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Canonical DVZ parameters, `lambda0 > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DvzParameters {
    lambda0: f64,
    lambda1: f64,
    alphas: VerblunskySequence,
}

impl DvzParameters {
    /// Any non-zero `lambda0` is accepted; a negative one is normalized with
    /// `J(lambda0, lambda1, alpha) = J(-lambda0, lambda1, ((-1)^{n+1} alpha_n))`.
    pub fn new(lambda0: f64, lambda1: f64, alphas: VerblunskySequence) -> Result<Self> {
        if lambda0 == 0.0 || lambda1 == 0.0 || !lambda0.is_finite() || !lambda1.is_finite() {
            return Err(Error::ZeroLambda);
        }
        if lambda0 < 0.0 {
            Ok(Self {
                lambda0: -lambda0,
                lambda1,
                alphas: alphas.flip_even(),
            })
        } else {
            Ok(Self {
                lambda0,
                lambda1,
                alphas,
            })
        }
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn alphas(&self) -> &VerblunskySequence {
        &self.alphas
    }

    /// `lambda_{n mod 2}`.
    pub fn lambda_for(&self, n: usize) -> f64 {
        if n % 2 == 0 {
            self.lambda0
        } else {
            self.lambda1
        }
    }

    pub fn forward(&self, n: usize) -> Result<Tridiagonal> {
        forward(&self.alphas, self.lambda0, self.lambda1, n)
    }
}

/// `J_{lambda0, lambda1}` of size `n`.
pub fn forward(
    seq: &VerblunskySequence,
    lambda0: f64,
    lambda1: f64,
    n: usize,
) -> Result<Tridiagonal> {
    let k = build_k(seq, lambda0, lambda1, n)?;
    jacobi_from_k(&k, lambda0, lambda1)
}

/// Points `z_n = sum_{j <= n} b_j + i a_n` for every `n` with a known `a_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePoints {
    pub points: Vec<Complex64>,
}

impl CirclePoints {
    pub fn from_jacobi(j: &Tridiagonal) -> Self {
        let mut partial = 0.0;
        let points = j
            .offdiag
            .iter()
            .zip(&j.diag)
            .map(|(&a, &b)| {
                partial += b;
                Complex64::new(partial, a)
            })
            .collect();
        Self { points }
    }
}

/// Recovers canonical DVZ parameters from a Jacobi matrix.
///
/// `z_n` needs `a_n`, so an `N x N` matrix yields `z_0 .. z_{N-2}`; the last
/// coefficient `alpha_{N-1}` is read from the diagonal alone and is not covered
/// by the circle test. Fewer than three rows leave no odd point to fix the
/// centre and give [`Error::DegenerateInput`].
pub fn invert(j: &Tridiagonal, tol: f64) -> Result<DvzParameters> {
    let size = j.size();
    if size < 3 {
        return Err(Error::DegenerateInput(format!(
            "a {size}x{size} matrix has no odd-index circle point; need N >= 3"
        )));
    }
    if let Some((n, &a)) = j.offdiag.iter().enumerate().find(|(_, &a)| !(a > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "off-diagonal a_{n} = {a} is not positive"
        )));
    }
    let pts = CirclePoints::from_jacobi(j).points;
    let not_dvz = |reason: String, residual: f64| Err(Error::NotDvz { reason, residual });

    // |z - c|^2 = c^2  =>  c = |z|^2 / (2 Re z)
    let centre_of = |z: Complex64| z.norm_sqr() / (2.0 * z.re);
    let z1 = pts[1];
    if z1.re == 0.0 {
        return not_dvz("odd point z_1 lies on the imaginary axis".into(), f64::INFINITY);
    }
    let lambda1 = centre_of(z1);
    let radius1 = lambda1.abs();
    let lambda0 = (pts[0] - lambda1).norm();

    let mut worst = 0.0f64;
    let mut worst_reason = String::new();
    for (n, z) in pts.iter().enumerate() {
        let r = if n % 2 == 0 { lambda0 } else { radius1 };
        let res = ((z - lambda1).norm() - r).abs();
        if res > worst {
            worst = res;
            worst_reason = if n % 2 == 0 {
                format!("even point z_{n} is off the circle of radius {lambda0} about {lambda1}")
            } else {
                format!("odd point z_{n} is off the circle through 0 about {lambda1}")
            };
        }
    }
    if worst > tol {
        return not_dvz(worst_reason, worst);
    }

    let mut partial = 0.0;
    let alphas: Vec<f64> = j
        .diag
        .iter()
        .enumerate()
        .map(|(n, &b)| {
            partial += b;
            let lam = if n % 2 == 0 { lambda0 } else { lambda1 };
            (partial - lambda1) / lam
        })
        .collect();
    if let Some((n, &a)) = alphas.iter().enumerate().find(|(_, a)| !(a.abs() < 1.0)) {
        return not_dvz(format!("recovered alpha_{n} = {a} is outside (-1, 1)"), worst);
    }
    DvzParameters::new(lambda0, lambda1, VerblunskySequence::new(alphas)?)
}

/// `max_n |(sum_{j<=n} b_j - lambda1)^2 + a_n^2 - lambda_{n mod 2}^2|` for
/// recovered parameters.
pub fn circle_residual(j: &Tridiagonal, params: &DvzParameters) -> f64 {
    CirclePoints::from_jacobi(j)
        .points
        .iter()
        .enumerate()
        .map(|(n, z)| {
            let lam = params.lambda_for(n);
            ((z.re - params.lambda1).powi(2) + z.im * z.im - lam * lam).abs()
        })
        .fold(0.0, f64::max)
}
