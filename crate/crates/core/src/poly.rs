//! Polynomials and Laurent polynomials with real coefficients, and the OPUC /
//! OLPUC generated by a Verblunsky sequence.
//!
//! Zero coefficients are pruned only when they are exactly zero; no epsilon
//! pruning is done anywhere, so degrees reflect the arithmetic that produced
//! them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::seqcore::VerblunskySequence;

/// Dense polynomial, ascending powers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `z^j`, zero outside the stored range.
    pub fn coeff(&self, j: usize) -> f64 {
        self.coeffs.get(j).copied().unwrap_or(0.0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(z) -> z^k p(z)`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.coeffs);
        Self::new(out)
    }

    /// `p(z) -> p(z^2)`.
    pub fn compose_square(&self) -> Self {
        let mut out = vec![0.0; (2 * self.coeffs.len()).saturating_sub(1)];
        for (j, &c) in self.coeffs.iter().enumerate() {
            out[2 * j] = c;
        }
        Self::new(out)
    }

    /// Synthetic division by `z + 1`; returns quotient and remainder.
    pub fn div_by_z_plus_one(&self) -> (Self, f64) {
        let Some(deg) = self.degree() else {
            return (Self::zero(), 0.0);
        };
        if deg == 0 {
            return (Self::zero(), self.coeffs[0]);
        }
        let mut quot = vec![0.0; deg];
        let mut carry = 0.0;
        for j in (1..=deg).rev() {
            carry = self.coeffs[j] - carry;
            quot[j - 1] = carry;
        }
        // remainder = p(-1)
        let rem = self.coeffs[0] - carry;
        (Self::new(quot), rem)
    }

    /// Lift to a Laurent polynomial multiplied by `z^shift`.
    pub fn to_laurent(&self, shift: i64) -> LaurentPoly {
        LaurentPoly::from_pairs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| (j as i64 + shift, c)),
        )
    }
}

/// Real Laurent polynomial `sum_j c_j z^j` with finite support.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, f64>,
}

impl LaurentPoly {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, f64)>) -> Self {
        let mut out = Self::default();
        for (j, c) in pairs {
            out.add_term(j, c);
        }
        out
    }

    pub fn monomial(j: i64, c: f64) -> Self {
        Self::from_pairs([(j, c)])
    }

    fn add_term(&mut self, j: i64, c: f64) {
        let entry = self.coeffs.entry(j).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.coeffs.remove(&j);
        }
    }

    pub fn coeff(&self, j: i64) -> f64 {
        self.coeffs.get(&j).copied().unwrap_or(0.0)
    }

    /// Non-zero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.coeffs.iter().map(|(&j, &c)| (j, c))
    }

    /// `(min, max)` exponent of the support, `None` when zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms()
            .map(|(j, c)| c * z.powi(j as i32))
            .sum::<Complex64>()
    }

    /// Value at `e^{i theta}`.
    pub fn eval_on_circle(&self, theta: f64) -> Complex64 {
        self.terms()
            .map(|(j, c)| Complex64::from_polar(c, j as f64 * theta))
            .sum::<Complex64>()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_pairs(self.terms().map(|(j, c)| (j, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_pairs(self.terms().chain(other.terms()))
    }

    pub fn shift(&self, k: i64) -> Self {
        Self::from_pairs(self.terms().map(|(j, c)| (j + k, c)))
    }

    /// The substar involution `c_j -> c_{-j}`.
    pub fn substar(&self) -> Self {
        Self::from_pairs(self.terms().map(|(j, c)| (-j, c)))
    }
}

/// Reversed polynomial `z^n p(1/z)` for real coefficients (`deg p <= n`).
pub fn reversed(p: &Poly, n: usize) -> Poly {
    let mut out = vec![0.0; n + 1];
    for (j, &c) in p.coeffs().iter().enumerate() {
        assert!(j <= n, "degree {} exceeds reversal order {n}", j);
        out[n - j] = c;
    }
    Poly::new(out)
}

fn check_degree(seq: &VerblunskySequence, n: usize) -> Result<()> {
    if n > seq.len() {
        Err(Error::DegreeExceedsSequence {
            requested: n,
            available: seq.len(),
        })
    } else {
        Ok(())
    }
}

/// Monic OPUC `phi_0 ..= phi_n` by the Szegő recurrence
/// `phi_{k+1} = z phi_k - alpha_k phi_k^*`.
pub fn monic_opuc_all(seq: &VerblunskySequence, n: usize) -> Result<Vec<Poly>> {
    check_degree(seq, n)?;
    let mut out = Vec::with_capacity(n + 1);
    let mut phi = Poly::one();
    for k in 0..n {
        let next = phi
            .shift(1)
            .add(&reversed(&phi, k).scale(-seq.alpha(k as isize)));
        out.push(std::mem::replace(&mut phi, next));
    }
    out.push(phi);
    Ok(out)
}

/// Monic OPUC `phi_n`.
pub fn monic_opuc(seq: &VerblunskySequence, n: usize) -> Result<Poly> {
    Ok(monic_opuc_all(seq, n)?.pop().unwrap())
}

/// Orthonormal OPUC `kappa_n phi_n`.
pub fn orthonormal_opuc(seq: &VerblunskySequence, n: usize) -> Result<Poly> {
    Ok(monic_opuc(seq, n)?.scale(seq.kappa(n)))
}

fn chi_from_phi(phi: &Poly, kappa: f64, n: usize) -> LaurentPoly {
    let k = (n / 2) as i64;
    if n % 2 == 0 {
        reversed(phi, n).scale(kappa).to_laurent(-k)
    } else {
        phi.scale(kappa).to_laurent(-k)
    }
}

/// Orthonormal Laurent polynomial `chi_n`: `z^{-k} varphi_{2k}^*` for `n = 2k`
/// and `z^{-k} varphi_{2k+1}` for `n = 2k + 1`.
pub fn olpuc(seq: &VerblunskySequence, n: usize) -> Result<LaurentPoly> {
    let phi = monic_opuc(seq, n)?;
    Ok(chi_from_phi(&phi, seq.kappa(n), n))
}

/// `chi_0 ..= chi_n`.
pub fn olpuc_all(seq: &VerblunskySequence, n: usize) -> Result<Vec<LaurentPoly>> {
    let phis = monic_opuc_all(seq, n)?;
    Ok(phis
        .iter()
        .enumerate()
        .map(|(k, phi)| chi_from_phi(phi, seq.kappa(k), k))
        .collect())
}

/// `chi_{n*}`.
pub fn substar(p: &LaurentPoly) -> LaurentPoly {
    p.substar()
}

/// Monic symmetrized OPUC: `phi_k(z^2)` for `n = 2k`, `z phi_k(z^2)` for
/// `n = 2k + 1`. These are the monic OPUC of [`VerblunskySequence::symmetrized`].
pub fn symmetrized_opuc(seq: &VerblunskySequence, n: usize) -> Result<Poly> {
    if n > 2 * seq.len() + 1 {
        return Err(Error::DegreeExceedsSequence {
            requested: n,
            available: 2 * seq.len() + 1,
        });
    }
    let squared = monic_opuc(seq, n / 2)?.compose_square();
    Ok(if n % 2 == 0 { squared } else { squared.shift(1) })
}

/// CSV table of OLPUC coefficients with header `n,j,c_j`, for `chi_0 ..= chi_{n_max}`.
pub fn coefficient_table_csv(seq: &VerblunskySequence, n_max: usize) -> Result<String> {
    let mut out = String::from("n,j,c_j\n");
    for (n, chi) in olpuc_all(seq, n_max)?.iter().enumerate() {
        for (j, c) in chi.terms() {
            writeln!(out, "{n},{j},{}", crate::format::sig17(c)).unwrap();
        }
    }
    Ok(out)
}
