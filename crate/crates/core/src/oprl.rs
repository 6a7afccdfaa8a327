//! Orthogonal polynomials on the real line attached to a Verblunsky sequence.
//!
//! The OPRL `q_n` of `K_lambda = L + lambda M` are evaluated in two independent
//! ways: by the three-term recurrence of the matrix, and by the closed form
//!
//! ```text
//! q_n(x) = Q_n(t) + (x - lambda) Qt_n(t),    t = x^2 / lambda - (lambda + 1 / lambda)
//! ```
//!
//! where `Q_n` and `Qt_n` are `lambda`-independent series in second-kind
//! Chebyshev polynomials `U_j` on `[-2, 2]`, read directly off the Laurent
//! coefficients of `chi_n`. Nothing here ever picks a branch of a square root
//! in the complex plane: every real-line polynomial is extracted through the
//! identity `U_j(z + 1/z) = (z^{j+1} - z^{-j-1}) / (z - 1/z)`.

use crate::error::{Error, Result};
use crate::matrices::Tridiagonal;
use crate::poly::{monic_opuc, olpuc, reversed, LaurentPoly, Poly};
use crate::seqcore::VerblunskySequence;

/// Second-kind Chebyshev polynomial on `[-2, 2]`: `U_{-1} = 0`, `U_0 = 1`,
/// `U_n = t U_{n-1} - U_{n-2}`. Negative indices follow `U_{-j} = -U_{j-2}`,
/// so `U_{-2} = -1`.
pub fn cheb_u(n: i64, t: f64) -> f64 {
    if n < -1 {
        return -cheb_u(-n - 2, t);
    }
    if n == -1 {
        return 0.0;
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..n {
        (prev, cur) = (cur, t * cur - prev);
    }
    cur
}

/// Finite series `sum_j c_j U_j(t)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChebSeries(Vec<f64>);

impl ChebSeries {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Clenshaw backward summation.
    pub fn eval(&self, t: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.0.iter().rev() {
            (b1, b2) = (c + t * b1 - b2, b1);
        }
        b1
    }

    /// U-basis coefficients of a Laurent polynomial symmetric under substar
    /// (`c_j = c_{-j}`), as a polynomial in `x = z + 1/z`.
    pub fn from_symmetric_laurent(p: &LaurentPoly) -> Self {
        // (z - 1/z) f(z) = sum_{m >= 1} (c_{m-1} - c_{m+1}) (z^m - z^{-m})
        let Some((_, hi)) = p.support() else {
            return Self::default();
        };
        Self::new(
            (0..=hi.max(0))
                .map(|j| p.coeff(j) - p.coeff(j + 2))
                .collect(),
        )
    }
}

/// `Q_n` and `Qt_n` of the Chebyshev closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebForm {
    pub n: usize,
    pub q: ChebSeries,
    pub qt: ChebSeries,
}

impl ChebForm {
    /// Builds the form from the Laurent coefficients `c_j` of `chi_n`:
    /// `Q` has `U_j` coefficient `c_{-j} - c_{j+2}`, `Qt` has `c_{j+1} - c_{-j-1}`.
    pub fn from_chi(n: usize, chi: &LaurentPoly) -> Self {
        let Some((lo, hi)) = chi.support() else {
            return Self {
                n,
                q: ChebSeries::default(),
                qt: ChebSeries::default(),
            };
        };
        let top = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
        let q = (0..=top).map(|j| chi.coeff(-j) - chi.coeff(j + 2)).collect();
        let qt = (0..=top).map(|j| chi.coeff(j + 1) - chi.coeff(-j - 1)).collect();
        Self {
            n,
            q: ChebSeries::new(q),
            qt: ChebSeries::new(qt),
        }
    }

    /// `q_n^{(lambda)}(x)`.
    pub fn eval(&self, lambda: f64, x: f64) -> Result<f64> {
        let t = VariableMap::new(lambda)?.t(x);
        Ok(self.q.eval(t) + (x - lambda) * self.qt.eval(t))
    }
}

/// `t_lambda(x) = x^2 / lambda - (lambda + 1 / lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableMap {
    lambda: f64,
}

impl VariableMap {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda == 0.0 {
            Err(Error::ZeroLambda)
        } else {
            Ok(Self { lambda })
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn t(&self, x: f64) -> f64 {
        let l = self.lambda;
        x * x / l - (l + 1.0 / l)
    }

    /// `arccos(t / 2)` with `t / 2` clamped to `[-1, 1]`.
    pub fn theta(&self, x: f64) -> f64 {
        (0.5 * self.t(x)).clamp(-1.0, 1.0).acos()
    }

    /// `sqrt(1 + lambda^2 + 2 lambda cos(theta))`, the inverse on the upper arc.
    pub fn x_of_theta(&self, theta: f64) -> f64 {
        let l = self.lambda;
        (1.0 + l * l + 2.0 * l * theta.cos()).max(0.0).sqrt()
    }
}

/// Chebyshev form of `q_n` from the OLPUC `chi_n` of `seq`.
pub fn cheb_form(seq: &VerblunskySequence, n: usize) -> Result<ChebForm> {
    Ok(ChebForm::from_chi(n, &olpuc(seq, n)?))
}

/// `q_n^{(lambda)}(x)` from a Chebyshev form.
pub fn eval_q(form: &ChebForm, lambda: f64, x: f64) -> Result<f64> {
    form.eval(lambda, x)
}

/// `q_0(x) ..= q_n(x)` of a tridiagonal matrix via
/// `a_k q_{k+1} = (x - b_k) q_k - a_{k-1} q_{k-1}`.
pub fn recurrence_eval(j: &Tridiagonal, x: f64, n: usize) -> Result<Vec<f64>> {
    if n >= j.size() {
        return Err(Error::IndexOutOfRange {
            index: n,
            size: j.size(),
        });
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    let mut prev = 0.0;
    for k in 0..n {
        let cur = out[k];
        let back = if k == 0 { 0.0 } else { j.offdiag[k - 1] * prev };
        out.push(((x - j.diag[k]) * cur - back) / j.offdiag[k]);
        prev = cur;
    }
    Ok(out)
}

/// Basic DVZ OPRL (`lambda = 1`).
pub fn basic_dvz_q(seq: &VerblunskySequence, n: usize, x: f64) -> Result<f64> {
    cheb_form(seq, n)?.eval(1.0, x)
}

fn check_domain(x: f64) -> Result<()> {
    if x.abs() <= 2.0 {
        Ok(())
    } else {
        Err(Error::DomainError(x))
    }
}

// varphi + varphi^* of degree `deg` (orthonormal), as a polynomial.
fn self_reciprocal_sum(seq: &VerblunskySequence, deg: usize) -> Result<Poly> {
    let phi = monic_opuc(seq, deg)?.scale(seq.kappa(deg));
    Ok(phi.add(&reversed(&phi, deg)))
}

fn normalizer(seq: &VerblunskySequence, idx: isize) -> f64 {
    (2.0 * (1.0 - seq.alpha(idx))).sqrt()
}

/// U-basis form of the Szegő OPRL `p_n`: `z^{-n} (varphi_{2n} + varphi_{2n}^*)`
/// normalized by `sqrt(2 (1 - alpha_{2n-1}))`.
pub fn szego_series(seq: &VerblunskySequence, n: usize) -> Result<ChebSeries> {
    let sum = self_reciprocal_sum(seq, 2 * n)?;
    let lp = sum.to_laurent(-(n as i64));
    let s = ChebSeries::from_symmetric_laurent(&lp);
    let norm = normalizer(seq, 2 * n as isize - 1);
    Ok(ChebSeries::new(s.coeffs().iter().map(|c| c / norm).collect()))
}

/// Szegő OPRL `p_n(x)` for `x` in `[-2, 2]`.
pub fn szego_oprl(seq: &VerblunskySequence, n: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(szego_series(seq, n)?.eval(x))
}

/// U-basis form of the OPRL `pt_n` of `(2 + x) dsigma`:
/// `z^{-n} (varphi_{2n+1} + varphi_{2n+1}^*) / (1 + z)` normalized by
/// `sqrt(2 (1 - alpha_{2n}))`.
pub fn christoffel_szego_series(seq: &VerblunskySequence, n: usize) -> Result<ChebSeries> {
    let sum = self_reciprocal_sum(seq, 2 * n + 1)?;
    let (quot, _rem) = sum.div_by_z_plus_one();
    let lp = quot.to_laurent(-(n as i64));
    let s = ChebSeries::from_symmetric_laurent(&lp);
    let norm = normalizer(seq, 2 * n as isize);
    Ok(ChebSeries::new(s.coeffs().iter().map(|c| c / norm).collect()))
}

/// `pt_n(x)` for `x` in `[-2, 2]`.
pub fn christoffel_szego_oprl(seq: &VerblunskySequence, n: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(christoffel_szego_series(seq, n)?.eval(x))
}

/// U-basis form of the Delsarte–Genin OPRL `ph_n`, in the variable
/// `x = z^{1/2} + z^{-1/2}`.
pub fn dg_series(seq: &VerblunskySequence, n: usize) -> Result<ChebSeries> {
    let sum = self_reciprocal_sum(seq, n)?;
    // w = z^{1/2}: w^{-n} sum(w^2)
    let lp = sum.compose_square().to_laurent(-(n as i64));
    let s = ChebSeries::from_symmetric_laurent(&lp);
    let norm = normalizer(seq, n as isize - 1);
    Ok(ChebSeries::new(s.coeffs().iter().map(|c| c / norm).collect()))
}

/// Delsarte–Genin OPRL `ph_n(x)` for `x` in `[-2, 2]`.
pub fn dg_oprl(seq: &VerblunskySequence, n: usize, x: f64) -> Result<f64> {
    check_domain(x)?;
    Ok(dg_series(seq, n)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::build_k_lambda;

    fn seq(v: &[f64]) -> VerblunskySequence {
        VerblunskySequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(cheb_u(1, 0.7), 0.7);
        for n in 0..12 {
            assert_eq!(cheb_u(n, 2.0), (n + 1) as f64);
        }
        assert_eq!(cheb_u(3, 0.0), 0.0);
        assert_eq!(cheb_u(2, 0.0), -1.0);
        assert_eq!(cheb_u(-1, 0.3), 0.0);
        assert_eq!(cheb_u(-2, 0.3), -1.0);
        assert_eq!(cheb_u(-4, 0.3), -cheb_u(2, 0.3));
    }

    #[test]
    fn u_of_z_identity() {
        use num_complex::Complex64;
        let z = Complex64::from_polar(1.0, 0.77);
        let t = (z + 1.0 / z).re;
        for j in 0..10 {
            let rhs = (z.powi(j + 1) - z.powi(-j - 1)) / (z - 1.0 / z);
            assert!((cheb_u(j as i64, t) - rhs.re).abs() < 1e-12);
            assert!(rhs.im.abs() < 1e-12);
        }
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let s = ChebSeries::new(vec![0.5, -1.0, 0.25, 2.0]);
        for &t in &[-2.0, -0.3, 1.1, 1.999] {
            let direct: f64 = s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| c * cheb_u(j as i64, t))
                .sum();
            assert!((s.eval(t) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn free_forms() {
        let s = seq(&[0.0; 4]);
        let f1 = cheb_form(&s, 1).unwrap();
        assert!(f1.q.coeffs().is_empty());
        assert_eq!(f1.qt.coeffs(), &[1.0]);
        let f2 = cheb_form(&s, 2).unwrap();
        assert_eq!(f2.q.coeffs(), &[0.0, 1.0]);
        assert_eq!(f2.qt.coeffs(), &[-1.0]);
        // q_2 = (x^2 - lambda x - 1) / lambda
        assert_eq!(eval_q(&f2, 2.0, 1.0).unwrap(), -1.0);
        assert_eq!(eval_q(&cheb_form(&s, 0).unwrap(), -3.3, 0.4).unwrap(), 1.0);
        assert_eq!(eval_q(&f2, 0.0, 1.0).unwrap_err(), Error::ZeroLambda);
    }

    #[test]
    fn degree_table() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05, -0.66, 0.9, -0.2, 0.1, 0.0]);
        for n in 0..=12usize {
            let f = cheb_form(&s, n).unwrap();
            let k = n / 2;
            if n % 2 == 0 {
                assert_eq!(f.q.degree(), Some(k));
                assert_eq!(f.qt.degree(), k.checked_sub(1));
            } else {
                assert!(f.q.degree().map_or(true, |d| d <= k));
                assert_eq!(f.qt.degree(), Some(k));
            }
        }
    }

    #[test]
    fn recurrence_leading_coefficient() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4]);
        let j = build_k_lambda(&s, 1.4, 6).unwrap().to_tridiagonal().unwrap();
        assert!(recurrence_eval(&j, 0.0, 6).is_err());
        // leading coefficient via q_n(x) / x^n for large x
        let x = 1e5;
        let q = recurrence_eval(&j, x, 5).unwrap();
        let mut lead = 1.0;
        for n in 1..=5 {
            lead /= j.offdiag[n - 1];
            assert!((q[n] / x.powi(n as i32) / lead - 1.0).abs() < 1e-4);
        }
        let free = build_k_lambda(&seq(&[0.0; 3]), 2.0, 3).unwrap().to_tridiagonal().unwrap();
        assert_eq!(recurrence_eval(&free, 0.5, 1).unwrap()[1], 0.5 - 2.0);
    }

    #[test]
    fn closed_form_matches_recurrence() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05, -0.66, 0.9, -0.2]);
        for &lambda in &[0.4, 1.0, -1.0, 2.5, -0.7] {
            let j = build_k_lambda(&s, lambda, 10).unwrap().to_tridiagonal().unwrap();
            for &x in &[-2.9, -0.3, 0.0, 0.8, 1.7] {
                let rec = recurrence_eval(&j, x, 9).unwrap();
                for (n, r) in rec.iter().enumerate() {
                    let c = cheb_form(&s, n).unwrap().eval(lambda, x).unwrap();
                    assert!((c - r).abs() <= 1e-11 * r.abs().max(1.0), "lambda={lambda} x={x} n={n}");
                }
            }
        }
    }

    #[test]
    fn free_szego_is_chebyshev() {
        let s = seq(&[0.0; 8]);
        for &x in &[-1.5, 0.0, 0.3, 2.0] {
            assert_eq!(szego_oprl(&s, 0, x).unwrap(), 1.0);
            assert!((szego_oprl(&s, 1, x).unwrap() - x / 2f64.sqrt()).abs() < 1e-15);
            // z^2 + z^-2 over sqrt(2)
            let t2 = (cheb_u(2, x) - 1.0) / 2f64.sqrt();
            assert!((szego_oprl(&s, 2, x).unwrap() - t2).abs() < 1e-14);
        }
        assert_eq!(szego_oprl(&s, 1, 2.5).unwrap_err(), Error::DomainError(2.5));
        assert!(dg_oprl(&s, 1, -2.01).is_err());
    }

    #[test]
    fn szego_matches_complex_evaluation() {
        use num_complex::Complex64;
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05]);
        for &th in &[0.3, 1.1, 2.9] {
            let z = Complex64::from_polar(1.0, th);
            let x = 2.0 * th.cos();
            for n in 0..=3usize {
                let phi = monic_opuc(&s, 2 * n).unwrap().scale(s.kappa(2 * n));
                let star = reversed(&phi, 2 * n);
                let v = (phi.eval_complex(z) + star.eval_complex(z)) * z.powi(-(n as i32))
                    / (2.0 * (1.0 - s.alpha(2 * n as isize - 1))).sqrt();
                assert!((szego_oprl(&s, n, x).unwrap() - v.re).abs() < 1e-12);
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn splitting_identities() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05, -0.66, 0.1]);
        for i in 0..25 {
            let x = -2.0 + 4.0 * (i as f64 + 0.5) / 25.0;
            let y = x * x - 2.0;
            for n in 0..=4usize {
                let even = dg_oprl(&s, 2 * n, x).unwrap();
                assert!((even - szego_oprl(&s, n, y).unwrap()).abs() < 1e-11);
                if 2 * n + 1 <= s.len() {
                    let odd = dg_oprl(&s, 2 * n + 1, x).unwrap();
                    let rhs = x * christoffel_szego_oprl(&s, n, y).unwrap();
                    assert!((odd - rhs).abs() < 1e-11, "n={n} x={x}");
                }
            }
        }
    }
}
