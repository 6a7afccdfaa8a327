//! Real Verblunsky coefficient sequences.
//!
//! A [`VerblunskySequence`] is a finite prefix `alpha_0, ..., alpha_{N-1}` of
//! real coefficients in `(-1, 1)`. Every matrix and polynomial in the crate is
//! generated from one. The complementary parameters `rho_n = sqrt(1 - alpha_n^2)`
//! and the normalizations `kappa_n = 1 / (rho_0 ... rho_{n-1})` are derived on
//! first use and cached.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The value of `alpha_{-1}` used by the Szegő and Delsarte–Genin normalizations.
pub const ALPHA_MINUS_ONE: f64 = -1.0;

/// Validated real Verblunsky coefficients.
#[derive(Debug)]
pub struct VerblunskySequence {
    values: Vec<f64>,
    derived: OnceLock<DerivedScalars>,
}

/// `rho_n` for every stored coefficient and `kappa_0 ..= kappa_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedScalars {
    pub rho: Vec<f64>,
    pub kappa: Vec<f64>,
}

impl Clone for VerblunskySequence {
    fn clone(&self) -> Self {
        Self {
            values: self.values.clone(),
            derived: self.derived.clone(),
        }
    }
}

impl PartialEq for VerblunskySequence {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl VerblunskySequence {
    /// Checks `|alpha_n| < 1` for every entry.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        for (index, &value) in values.iter().enumerate() {
            // NaN fails this comparison as well.
            if !(value.abs() < 1.0) {
                return Err(Error::CoefficientOutOfRange { index, value });
            }
        }
        Ok(Self {
            values,
            derived: OnceLock::new(),
        })
    }

    /// Accepts complex input as long as every imaginary part is exactly zero.
    pub fn from_complex(values: &[Complex64]) -> Result<Self> {
        if let Some((index, c)) = values.iter().enumerate().find(|(_, c)| c.im != 0.0) {
            return Err(Error::NonReal { index, imag: c.im });
        }
        Self::new(values.iter().map(|c| c.re).collect())
    }

    /// All-zero coefficients (Lebesgue measure on the circle).
    pub fn free(len: usize) -> Result<Self> {
        Self::new(vec![0.0; len])
    }

    /// `alpha_n = m / (n m + 1)`: Lebesgue measure with a mass point at `z = 1`.
    pub fn mass_point(m: f64, len: usize) -> Result<Self> {
        check_mass(m)?;
        Self::new((0..len).map(|n| m / (n as f64 * m + 1.0)).collect())
    }

    /// Second kind polynomials of [`VerblunskySequence::mass_point`]: every sign flipped.
    pub fn second_kind(m: f64, len: usize) -> Result<Self> {
        check_mass(m)?;
        Self::new((0..len).map(|n| -m / (n as f64 * m + 1.0)).collect())
    }

    /// Degree one Bernstein–Szegő: `(alpha, 0, 0, ...)`.
    pub fn bernstein_szego(alpha: f64, len: usize) -> Result<Self> {
        if !(alpha.abs() < 1.0) {
            return Err(Error::ParamOutOfRange {
                name: "alpha",
                value: alpha,
                expected: "(-1, 1)",
            });
        }
        let mut values = vec![0.0; len.max(1)];
        values[0] = alpha;
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `alpha_n`, with `alpha_{-1} = -1` for `n = -1`.
    pub fn alpha(&self, n: isize) -> f64 {
        if n < 0 {
            ALPHA_MINUS_ONE
        } else {
            self.values[n as usize]
        }
    }

    pub fn derived(&self) -> &DerivedScalars {
        self.derived.get_or_init(|| {
            let rho: Vec<f64> = self.values.iter().map(|a| (1.0 - a * a).sqrt()).collect();
            let mut kappa = Vec::with_capacity(rho.len() + 1);
            kappa.push(1.0);
            for r in &rho {
                let last = *kappa.last().unwrap();
                kappa.push(last / r);
            }
            DerivedScalars { rho, kappa }
        })
    }

    pub fn rho(&self, n: usize) -> f64 {
        self.derived().rho[n]
    }

    /// `kappa_n` for `n <= len`.
    pub fn kappa(&self, n: usize) -> f64 {
        self.derived().kappa[n]
    }

    /// Leading prefix of length `len`.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        if len > self.len() {
            return Err(Error::SizeExceedsSequence {
                requested: len,
                available: self.len(),
            });
        }
        Self::new(self.values[..len].to_vec())
    }

    /// Coefficients `((-1)^{n+1} alpha_n)`: flips the even-index entries.
    pub fn flip_even(&self) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, &a)| if n % 2 == 0 { -a } else { a })
            .collect();
        Self {
            values,
            derived: OnceLock::new(),
        }
    }

    /// Coefficients of the symmetrized measure: `0, alpha_0, 0, alpha_1, ...`.
    pub fn symmetrized(&self) -> Self {
        let values = self.values.iter().flat_map(|&a| [0.0, a]).collect();
        Self {
            values,
            derived: OnceLock::new(),
        }
    }
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m < 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name: "m",
            value: m,
            expected: "(0, 1)",
        })
    }
}
