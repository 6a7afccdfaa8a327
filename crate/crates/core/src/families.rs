//! Explicit families with closed forms for `alpha_n`, `mu`, `chi_n`,
//! `q_n^{(lambda)}` and `nu_lambda`.
//!
//! The closed forms here are written out by hand and share no code with the
//! recurrences in [`crate::poly`], [`crate::matrices`] or [`crate::measures`],
//! so they serve as independent references for them.

use std::f64::consts::{FRAC_1_PI, PI};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measures::{CircleAtom, CircleMeasure};
use crate::oprl::cheb_u;
use crate::poly::LaurentPoly;
use crate::seqcore::VerblunskySequence;

/// A named Verblunsky family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `alpha_n = 0`, Lebesgue measure.
    Free,
    /// `alpha_0 = alpha`, the rest zero; `w = rho^2 / (2 pi |1 - alpha e^{i theta}|^2)`.
    BernsteinSzego { alpha: f64 },
    /// `alpha_n = m / (n m + 1)`; `(1 - m) dtheta / 2 pi + m delta_1`.
    LebesgueMass { m: f64 },
    /// `alpha_n = -m / (n m + 1)`, the second kind partner of `LebesgueMass`.
    SecondKind { m: f64 },
}

fn check_unit(name: &'static str, v: f64, lo_open: f64) -> Result<f64> {
    if v > lo_open && v < 1.0 {
        Ok(v)
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value: v,
            expected: if lo_open < 0.0 { "(-1, 1)" } else { "(0, 1)" },
        })
    }
}

impl Family {
    pub fn bernstein_szego(alpha: f64) -> Result<Self> {
        Ok(Self::BernsteinSzego {
            alpha: check_unit("alpha", alpha, -1.0)?,
        })
    }

    pub fn lebesgue_mass(m: f64) -> Result<Self> {
        Ok(Self::LebesgueMass {
            m: check_unit("m", m, 0.0)?,
        })
    }

    pub fn second_kind(m: f64) -> Result<Self> {
        Ok(Self::SecondKind {
            m: check_unit("m", m, 0.0)?,
        })
    }

    /// Parses `free`, `bernstein_szego`, `lebesgue_mass` (alias `mass_point`)
    /// or `second_kind`; all but `free` need a parameter.
    pub fn from_name(name: &str, param: Option<f64>) -> Result<Self> {
        let need = || {
            param.ok_or_else(|| Error::InvalidInput(format!("family {name:?} needs a parameter")))
        };
        match name {
            "free" => Ok(Self::Free),
            "bernstein_szego" => Self::bernstein_szego(need()?),
            "lebesgue_mass" | "mass_point" => Self::lebesgue_mass(need()?),
            "second_kind" => Self::second_kind(need()?),
            other => Err(Error::InvalidInput(format!("unknown family {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Free => "free",
            Self::BernsteinSzego { .. } => "bernstein_szego",
            Self::LebesgueMass { .. } => "lebesgue_mass",
            Self::SecondKind { .. } => "second_kind",
        }
    }

    pub fn param(&self) -> Option<f64> {
        match *self {
            Self::Free => None,
            Self::BernsteinSzego { alpha } => Some(alpha),
            Self::LebesgueMass { m } | Self::SecondKind { m } => Some(m),
        }
    }

    /// `alpha_n` from the defining formula. For the mass families the formula
    /// is also used at `n = -1`, where it is `+-m / (1 - m)` rather than `-1`.
    pub fn alpha(&self, n: i64) -> f64 {
        match *self {
            Self::Free => 0.0,
            Self::BernsteinSzego { alpha } => {
                if n == 0 {
                    alpha
                } else if n < 0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Self::LebesgueMass { m } => 1.0 / (n as f64 + 1.0 / m),
            Self::SecondKind { m } => -1.0 / (n as f64 + 1.0 / m),
        }
    }

    pub fn sequence(&self, len: usize) -> Result<VerblunskySequence> {
        match *self {
            Self::Free => VerblunskySequence::free(len),
            Self::BernsteinSzego { alpha } => VerblunskySequence::bernstein_szego(alpha, len),
            Self::LebesgueMass { m } => VerblunskySequence::mass_point(m, len),
            Self::SecondKind { m } => VerblunskySequence::second_kind(m, len),
        }
    }

    /// Orthogonality measure on the circle.
    pub fn measure(&self) -> CircleMeasure {
        let half_pi_inv = 0.5 * FRAC_1_PI;
        let (density, atoms): (crate::measures::Density, Vec<CircleAtom>) = match *self {
            Self::Free => return CircleMeasure::lebesgue(),
            Self::BernsteinSzego { alpha } => (
                Arc::new(move |th: f64| {
                    (1.0 - alpha * alpha) * half_pi_inv
                        / (1.0 - 2.0 * alpha * th.cos() + alpha * alpha)
                }),
                vec![],
            ),
            Self::LebesgueMass { m } => (
                Arc::new(move |_| (1.0 - m) * half_pi_inv),
                vec![CircleAtom { theta: 0.0, mass: m }],
            ),
            Self::SecondKind { m } => (
                Arc::new(move |th: f64| {
                    let c = 1.0 - th.cos();
                    (1.0 - m) * c / ((1.0 - 2.0 * m) * c + 2.0 * m * m) * half_pi_inv
                }),
                vec![],
            ),
        };
        CircleMeasure::new(Some(density), atoms).expect("family measures are probability measures")
    }

    /// `kappa_n = 1 / (rho_0 ... rho_{n-1})`.
    pub fn kappa(&self, n: usize) -> f64 {
        match *self {
            Self::Free => 1.0,
            Self::BernsteinSzego { alpha } => {
                if n == 0 {
                    1.0
                } else {
                    1.0 / (1.0 - alpha * alpha).sqrt()
                }
            }
            // telescoping product: kappa_n^2 = alpha_n / ((1 - m) alpha_{n-1})
            Self::LebesgueMass { m } | Self::SecondKind { m } => {
                let a = |j: i64| 1.0 / (j as f64 + 1.0 / m);
                let n = n as i64;
                (a(n) / ((1.0 - m) * a(n - 1))).sqrt()
            }
        }
    }

    /// `chi_n` in closed form.
    pub fn chi(&self, n: usize) -> LaurentPoly {
        let k = (n / 2) as i64;
        let even = n % 2 == 0;
        match *self {
            Self::Free => LaurentPoly::monomial(if even { -k } else { k + 1 }, 1.0),
            Self::BernsteinSzego { alpha } => {
                if n == 0 {
                    return LaurentPoly::monomial(0, 1.0);
                }
                let r = 1.0 / (1.0 - alpha * alpha).sqrt();
                if even {
                    LaurentPoly::from_pairs([(-k, r), (1 - k, -alpha * r)])
                } else {
                    LaurentPoly::from_pairs([(k, -alpha * r), (k + 1, r)])
                }
            }
            Self::LebesgueMass { m } | Self::SecondKind { m } => {
                let kap = self.kappa(n);
                let a = self.alpha(n as i64 - 1);
                let second = matches!(self, Self::SecondKind { .. });
                let weight = |j: i64| {
                    if !second {
                        1.0
                    } else if even {
                        1.0 + 2.0 * (k - j) as f64 * m
                    } else {
                        1.0 + 2.0 * (k + j) as f64 * m
                    }
                };
                let (lead, range) = if even {
                    (-k, (1 - k)..=k)
                } else {
                    (k + 1, -k..=k)
                };
                let mut pairs = vec![(lead, kap)];
                pairs.extend(range.map(|j| (j, -kap * a * weight(j))));
                LaurentPoly::from_pairs(pairs)
            }
        }
    }

    /// `q_n^{(lambda)}(x)` in closed form, or `None` where no closed form is
    /// provided (odd `n` of the second kind family).
    pub fn q(&self, n: usize, lambda: f64, x: f64) -> Option<f64> {
        let k = (n / 2) as i64;
        let even = n % 2 == 0;
        let t = x * x / lambda - (lambda + 1.0 / lambda);
        let u = |j: i64| cheb_u(j, t);
        let y = x - lambda;
        match *self {
            Self::Free => Some(if even { u(k) - y * u(k - 1) } else { y * u(k) - u(k - 1) }),
            Self::BernsteinSzego { alpha } => {
                if n == 0 {
                    return Some(1.0);
                }
                let r = 1.0 / (1.0 - alpha * alpha).sqrt();
                Some(
                    r * if even {
                        u(k) - (y + alpha) * u(k - 1) + alpha * y * u(k - 2)
                    } else {
                        y * u(k) - (alpha * y + 1.0) * u(k - 1) + alpha * u(k - 2)
                    },
                )
            }
            Self::LebesgueMass { .. } => {
                let kap = self.kappa(n);
                let (an, ap) = (self.alpha(n as i64), self.alpha(n as i64 - 1));
                Some(
                    kap * if even {
                        u(k) - ap / an * (y + an) * u(k - 1)
                    } else {
                        (y - ap) * u(k) - ap / an * u(k - 1)
                    },
                )
            }
            Self::SecondKind { m } => {
                if n == 0 {
                    return Some(1.0);
                }
                if !even {
                    return None;
                }
                let kap = self.kappa(n);
                let a = |j: usize| self.alpha(j as i64);
                let tail: f64 = (0..(k - 1).max(0)).map(|j| (j + 1) as f64 * u(j)).sum();
                Some(
                    kap * (u(k)
                        - a(n - 1) / a(n - 2) * (y - m * a(n - 2) / a(2 * n - 2)) * u(k - 1)
                        + 4.0 * m * a(n - 1) * (y - 1.0) * tail),
                )
            }
        }
    }

    /// Density of `nu_lambda` at `x`; zero off `E_lambda`.
    pub fn nu_density(&self, lambda: f64, x: f64) -> Result<f64> {
        if lambda == 0.0 {
            return Err(Error::ZeroLambda);
        }
        let l = lambda.abs();
        let ax = x.abs();
        if ax < (1.0 - l).abs() || ax > 1.0 + l {
            return Ok(0.0);
        }
        let g = (((x + lambda).powi(2) - 1.0) / (1.0 - (x - lambda).powi(2))).max(0.0);
        let root = g.sqrt() / (2.0 * PI);
        Ok(match *self {
            Self::Free => root / l,
            Self::BernsteinSzego { alpha } => {
                root * (1.0 - alpha * alpha)
                    / ((1.0 + alpha * lambda) * (lambda + alpha) - alpha * x * x).abs()
            }
            Self::LebesgueMass { m } => (1.0 - m) * root / l,
            Self::SecondKind { m } => {
                let d = (x * x - (1.0 + lambda).powi(2)).abs();
                root / l * (1.0 - m) * d / ((1.0 - 2.0 * m) * d + 4.0 * m * m * l)
            }
        })
    }

    /// Atoms of `nu_lambda` as `(location, mass)`.
    pub fn nu_atoms(&self, lambda: f64) -> Result<Vec<(f64, f64)>> {
        if lambda == 0.0 {
            return Err(Error::ZeroLambda);
        }
        Ok(match *self {
            Self::LebesgueMass { m } => vec![(1.0 + lambda, m)],
            _ => vec![],
        })
    }
}
