//! Finite sections of the CMV factors `L`, `M`, the CMV matrix `C = ML`, the
//! pencil `K = lambda0 L + lambda1 M` and its Jacobi form `J = Pi K Pi`.
//!
//! All matrices are `N x N` leading sections. When a `Theta` block of `L` or
//! `M` would straddle the last row it is replaced by its `(0, 0)` entry
//! `alpha_{N-1}`; `boundary_clean_rows` records how many leading rows are
//! unaffected by that cut.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::seqcore::VerblunskySequence;

/// Symmetric orthogonal `2 x 2` block `[[alpha, rho], [rho, -alpha]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaBlock {
    pub alpha: f64,
    pub rho: f64,
}

impl ThetaBlock {
    pub fn new(seq: &VerblunskySequence, n: usize) -> Self {
        Self {
            alpha: seq.alpha(n as isize),
            rho: seq.rho(n),
        }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.alpha, self.rho], [self.rho, -self.alpha]]
    }
}

/// Symmetric banded matrix; `bands[d][i]` is entry `(i, i + d)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymMatrix {
    n: usize,
    bands: Vec<Vec<f64>>,
    boundary_clean_rows: usize,
}

impl BandedSymMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bands = (0..=bandwidth).map(|d| vec![0.0; n.saturating_sub(d)]).collect();
        Self {
            n,
            bands,
            boundary_clean_rows: n,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    /// Number of leading rows that coincide with the infinite operator.
    pub fn boundary_clean_rows(&self) -> usize {
        self.boundary_clean_rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands
            .get(hi - lo)
            .and_then(|b| b.get(lo))
            .copied()
            .unwrap_or(0.0)
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands[hi - lo][lo] = v;
    }

    pub fn band(&self, d: usize) -> &[f64] {
        &self.bands[d]
    }

    pub fn diag(&self) -> &[f64] {
        &self.bands[0]
    }

    /// `a A + b B`, boundary counts combined pessimistically.
    pub fn lin_comb(a: f64, lhs: &Self, b: f64, rhs: &Self) -> Self {
        assert_eq!(lhs.n, rhs.n);
        let bw = lhs.bandwidth().max(rhs.bandwidth());
        let mut out = Self::zeros(lhs.n, bw);
        for d in 0..=bw {
            for i in 0..lhs.n.saturating_sub(d) {
                out.bands[d][i] = a * lhs.get(i, i + d) + b * rhs.get(i, i + d);
            }
        }
        out.boundary_clean_rows = lhs.boundary_clean_rows.min(rhs.boundary_clean_rows);
        out
    }

    pub fn to_banded(&self) -> BandedMatrix {
        let bw = self.bandwidth();
        let mut out = BandedMatrix::zeros(self.n, bw, bw);
        for i in 0..self.n {
            for j in i.saturating_sub(bw)..(i + bw + 1).min(self.n) {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    pub fn to_tridiagonal(&self) -> Result<Tridiagonal> {
        if self.bands.iter().skip(2).any(|b| b.iter().any(|&v| v != 0.0)) {
            return Err(Error::NotTridiagonal);
        }
        Ok(Tridiagonal {
            diag: self.bands[0].clone(),
            offdiag: self.bands.get(1).cloned().unwrap_or_default(),
        })
    }

    /// Matrix-vector product over complex vectors.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n);
        let bw = self.bandwidth();
        (0..self.n)
            .map(|i| {
                (i.saturating_sub(bw)..(i + bw + 1).min(self.n))
                    .map(|j| self.get(i, j) * v[j])
                    .sum()
            })
            .collect()
    }

    /// JSON dump `{ "n": N, "bands": { "0": [...], "1": [...] } }`.
    pub fn to_json_value(&self) -> BandedDump {
        BandedDump {
            n: self.n,
            bands: self
                .bands
                .iter()
                .enumerate()
                .map(|(d, b)| (d.to_string(), b.clone()))
                .collect(),
        }
    }
}

/// Serialized form of a banded matrix, keyed by diagonal offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandedDump {
    pub n: usize,
    pub bands: BTreeMap<String, Vec<f64>>,
}

/// General banded matrix with `lower` sub- and `upper` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    // data[i][j - i + lower]
    data: Vec<Vec<f64>>,
    boundary_clean_rows: usize,
}

impl BandedMatrix {
    pub fn zeros(n: usize, lower: usize, upper: usize) -> Self {
        Self {
            n,
            lower,
            upper,
            data: vec![vec![0.0; lower + upper + 1]; n],
            boundary_clean_rows: n,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n, 0, 0);
        for i in 0..n {
            out.data[i][0] = 1.0;
        }
        out
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn boundary_clean_rows(&self) -> usize {
        self.boundary_clean_rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.lower < i || j > i + self.upper || i >= self.n || j >= self.n {
            0.0
        } else {
            self.data[i][j + self.lower - i]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(j + self.lower >= i && j <= i + self.upper, "({i}, {j}) outside band");
        self.data[i][j + self.lower - i] = v;
    }

    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.lower)..(i + self.upper + 1).min(self.n)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let mut out = Self::zeros(self.n, self.lower + rhs.lower, self.upper + rhs.upper);
        for i in 0..self.n {
            for k in self.cols(i) {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in rhs.cols(k) {
                    let idx = j + out.lower - i;
                    out.data[i][idx] += a * rhs.get(k, j);
                }
            }
        }
        out.boundary_clean_rows = self
            .boundary_clean_rows
            .min(rhs.boundary_clean_rows)
            .saturating_sub(self.upper.max(rhs.upper));
        out
    }

    /// `a A + b B`.
    pub fn lin_comb(a: f64, lhs: &Self, b: f64, rhs: &Self) -> Self {
        assert_eq!(lhs.n, rhs.n);
        let mut out = Self::zeros(lhs.n, lhs.lower.max(rhs.lower), lhs.upper.max(rhs.upper));
        for i in 0..lhs.n {
            for j in out.cols(i) {
                out.set(i, j, a * lhs.get(i, j) + b * rhs.get(i, j));
            }
        }
        out.boundary_clean_rows = lhs.boundary_clean_rows.min(rhs.boundary_clean_rows);
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n, self.upper, self.lower);
        for i in 0..self.n {
            for j in self.cols(i) {
                out.set(j, i, self.get(i, j));
            }
        }
        out.boundary_clean_rows = self.boundary_clean_rows;
        out
    }

    /// Maximum absolute entry over the square index block `range x range`.
    pub fn max_abs_on(&self, range: std::ops::Range<usize>) -> f64 {
        let mut m = 0.0f64;
        for i in range.clone() {
            for j in self.cols(i) {
                if range.contains(&j) {
                    m = m.max(self.get(i, j).abs());
                }
            }
        }
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// Symmetric tridiagonal matrix: diagonal `b_0..b_{N-1}`, off-diagonal
/// `a_0..a_{N-2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal needs diag of length N >= 1 and offdiag of length N - 1, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn to_sym(&self) -> BandedSymMatrix {
        let mut out = BandedSymMatrix::zeros(self.size(), 1);
        out.bands[0].clone_from(&self.diag);
        out.bands[1].clone_from(&self.offdiag);
        out
    }

    /// JSON dump `{ "n": N, "diag": [...], "offdiag": [...] }`.
    pub fn to_dump(&self) -> TridiagonalDump {
        TridiagonalDump {
            n: self.size(),
            diag: self.diag.clone(),
            offdiag: self.offdiag.clone(),
        }
    }
}

/// Serialized form of a tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalDump {
    pub n: usize,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TryFrom<TridiagonalDump> for Tridiagonal {
    type Error = Error;

    fn try_from(d: TridiagonalDump) -> Result<Self> {
        if d.n != d.diag.len() {
            return Err(Error::InvalidInput(format!(
                "n = {} but diag has {} entries",
                d.n,
                d.diag.len()
            )));
        }
        Tridiagonal::new(d.diag, d.offdiag)
    }
}

/// Diagonal sign matrix with period-four pattern `1, e0, e0 e1, e1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignDiagonal {
    signs: Vec<f64>,
}

impl SignDiagonal {
    /// Signs taken from `sgn(lambda0)`, `sgn(lambda1)`.
    pub fn new(n: usize, lambda0: f64, lambda1: f64) -> Self {
        let e0 = lambda0.signum();
        let e1 = lambda1.signum();
        let pattern = [1.0, e0, e0 * e1, e1];
        Self {
            signs: (0..n).map(|i| pattern[i % 4]).collect(),
        }
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    /// `Pi T Pi`.
    pub fn conjugate(&self, t: &Tridiagonal) -> Tridiagonal {
        let s = &self.signs;
        Tridiagonal {
            diag: t.diag.clone(),
            offdiag: t
                .offdiag
                .iter()
                .enumerate()
                .map(|(i, a)| s[i] * a * s[i + 1])
                .collect(),
        }
    }
}

fn check_size(seq: &VerblunskySequence, n: usize) -> Result<()> {
    if n > seq.len() {
        Err(Error::SizeExceedsSequence {
            requested: n,
            available: seq.len(),
        })
    } else {
        Ok(())
    }
}

// Block-diagonal matrix with blocks Theta_{first}, Theta_{first+2}, ... placed
// from row `offset`; rows before `offset` get a leading 1.
fn theta_diag(seq: &VerblunskySequence, n: usize, offset: usize) -> BandedSymMatrix {
    let mut out = BandedSymMatrix::zeros(n, 1);
    if offset == 1 && n > 0 {
        out.set(0, 0, 1.0);
    }
    let mut row = offset;
    while row < n {
        let theta = ThetaBlock::new(seq, row);
        if row + 1 < n {
            let m = theta.matrix();
            out.set(row, row, m[0][0]);
            out.set(row, row + 1, m[0][1]);
            out.set(row + 1, row + 1, m[1][1]);
        } else {
            out.set(row, row, theta.alpha);
            out.boundary_clean_rows = row;
        }
        row += 2;
    }
    out
}

/// `L = Theta_0 + Theta_2 + ...` (direct sum), `N x N`.
pub fn build_l(seq: &VerblunskySequence, n: usize) -> Result<BandedSymMatrix> {
    check_size(seq, n)?;
    Ok(theta_diag(seq, n, 0))
}

/// `M = 1 + Theta_1 + Theta_3 + ...` (direct sum), `N x N`.
pub fn build_m(seq: &VerblunskySequence, n: usize) -> Result<BandedSymMatrix> {
    check_size(seq, n)?;
    Ok(theta_diag(seq, n, 1))
}

/// CMV matrix `C = M L` from the truncated factors.
pub fn build_cmv(seq: &VerblunskySequence, n: usize) -> Result<BandedMatrix> {
    let l = build_l(seq, n)?.to_banded();
    let m = build_m(seq, n)?.to_banded();
    Ok(m.mul(&l))
}

/// The pencil `lambda0 L + lambda1 M`. Its `N x N` section is exact: the
/// trailing cut blocks reproduce the diagonal entry of the infinite matrix.
pub fn build_k(
    seq: &VerblunskySequence,
    lambda0: f64,
    lambda1: f64,
    n: usize,
) -> Result<BandedSymMatrix> {
    if lambda0 == 0.0 || lambda1 == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let l = build_l(seq, n)?;
    let m = build_m(seq, n)?;
    let mut k = BandedSymMatrix::lin_comb(lambda0, &l, lambda1, &m);
    k.boundary_clean_rows = n;
    Ok(k)
}

/// `K_lambda = L + lambda M`.
pub fn build_k_lambda(seq: &VerblunskySequence, lambda: f64, n: usize) -> Result<BandedSymMatrix> {
    build_k(seq, 1.0, lambda, n)
}

/// `J = Pi K Pi` with `Pi` the sign pattern of `(lambda0, lambda1)`; the
/// result has non-negative off-diagonal.
pub fn jacobi_from_k(k: &BandedSymMatrix, lambda0: f64, lambda1: f64) -> Result<Tridiagonal> {
    let t = k.to_tridiagonal()?;
    Ok(SignDiagonal::new(t.size(), lambda0, lambda1).conjugate(&t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> VerblunskySequence {
        VerblunskySequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn free_factors() {
        let s = seq(&[0.0; 4]);
        let l = build_l(&s, 4).unwrap().to_banded().to_dense();
        assert_eq!(
            l,
            vec![
                vec![0.0, 1.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 1.0],
                vec![0.0, 0.0, 1.0, 0.0]
            ]
        );
        let m = build_m(&s, 4).unwrap();
        assert_eq!(
            m.to_banded().to_dense(),
            vec![
                vec![1.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0, 0.0],
                vec![0.0, 1.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0]
            ]
        );
        assert_eq!(m.boundary_clean_rows(), 3);
        // free CMV: e_0 -> e_1, the rest a shift by two in each parity class
        let c = build_cmv(&s, 4).unwrap().to_dense();
        assert_eq!(c[0], vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(c[1], vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(c[2], vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn theta_upper_left_block() {
        let l = build_l(&seq(&[0.6, 0.1]), 2).unwrap();
        assert_eq!(l.get(0, 0), 0.6);
        assert!((l.get(0, 1) - 0.8).abs() < 1e-15);
        assert!((l.get(1, 1) + 0.6).abs() < 1e-15);
        let b = ThetaBlock { alpha: 0.6, rho: 0.8 }.matrix();
        assert_eq!(b, [[0.6, 0.8], [0.8, -0.6]]);
    }

    #[test]
    fn odd_size_truncation() {
        let s = seq(&[0.1, 0.2, 0.3]);
        let l = build_l(&s, 3).unwrap();
        assert_eq!(l.get(2, 2), 0.3);
        assert_eq!(l.boundary_clean_rows(), 2);
        let m = build_m(&s, 3).unwrap();
        assert_eq!(m.boundary_clean_rows(), 3);
        assert!(build_l(&s, 4).is_err());
    }

    #[test]
    fn free_k() {
        let k = build_k_lambda(&seq(&[0.0; 6]), 2.0, 6).unwrap().to_tridiagonal().unwrap();
        assert_eq!(k.diag, vec![2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(k.offdiag, vec![1.0, 2.0, 1.0, 2.0, 1.0]);
        assert_eq!(build_k(&seq(&[0.0]), 0.0, 1.0, 1).unwrap_err(), Error::ZeroLambda);
        assert_eq!(build_k_lambda(&seq(&[0.0]), 0.0, 1).unwrap_err(), Error::ZeroLambda);
    }

    #[test]
    fn pencil_entries_match_closed_layout() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4]);
        let (l0, l1) = (1.3, -0.8);
        let k = build_k(&s, l0, l1, 6).unwrap().to_tridiagonal().unwrap();
        let a = s.values();
        assert!((k.diag[0] - (l0 * a[0] + l1)).abs() < 1e-15);
        for n in 1..6 {
            let expect = if n % 2 == 1 {
                l1 * a[n] - l0 * a[n - 1]
            } else {
                l0 * a[n] - l1 * a[n - 1]
            };
            assert!((k.diag[n] - expect).abs() < 1e-15, "n={n}");
        }
        for n in 0..5 {
            let lam = if n % 2 == 0 { l0 } else { l1 };
            assert!((k.offdiag[n] - lam * s.rho(n)).abs() < 1e-15);
        }
    }

    #[test]
    fn bernstein_szego_k() {
        let (a, lam) = (0.6, 1.7);
        let s = VerblunskySequence::bernstein_szego(a, 8).unwrap();
        let k = build_k_lambda(&s, lam, 8).unwrap().to_tridiagonal().unwrap();
        assert!((k.offdiag[0] - 0.8).abs() < 1e-15);
        for n in 1..7 {
            let expect = if n % 2 == 0 { 1.0 } else { lam };
            assert_eq!(k.offdiag[n], expect);
        }
        assert!((k.diag[0] - (a + lam)).abs() < 1e-15);
        assert_eq!(k.diag[1], -a);
        assert!(k.diag[2..].iter().all(|&b| b == 0.0));
    }

    #[test]
    fn mass_point_k() {
        let s = VerblunskySequence::mass_point(0.5, 4).unwrap();
        let k = build_k_lambda(&s, 2.0, 4).unwrap().to_tridiagonal().unwrap();
        assert!((k.diag[0] - 2.5).abs() < 1e-15);
        assert!((k.diag[1] - 1.0 / 6.0).abs() < 1e-15);
        assert!((k.offdiag[0] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((k.offdiag[1] - 4.0 * 2f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_conjugation() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05, -0.66]);
        let k = build_k_lambda(&s, 0.9, 8).unwrap();
        assert_eq!(jacobi_from_k(&k, 1.0, 0.9).unwrap(), k.to_tridiagonal().unwrap());
        // lambda = -1: K_- = L - M, conjugated by diag(1, 1, -1, -1, ...)
        let km = build_k_lambda(&s, -1.0, 8).unwrap();
        let j = jacobi_from_k(&km, 1.0, -1.0).unwrap();
        let pi = SignDiagonal::new(8, 1.0, -1.0);
        assert_eq!(pi.signs(), &[1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0]);
        for (n, (a, b)) in j.offdiag.iter().zip(&km.to_tridiagonal().unwrap().offdiag).enumerate() {
            assert_eq!(*a, b.abs(), "n={n}");
            assert!(*a > 0.0);
        }
        for (l0, l1) in [(-2.0, 0.5), (0.7, -3.0), (-1.0, -1.0)] {
            let k = build_k(&s, l0, l1, 8).unwrap();
            let j = jacobi_from_k(&k, l0, l1).unwrap();
            let kt = k.to_tridiagonal().unwrap();
            assert_eq!(j.diag, kt.diag);
            for (a, b) in j.offdiag.iter().zip(&kt.offdiag) {
                assert_eq!(*a, b.abs());
            }
        }
    }

    #[test]
    fn sign_diagonal_is_involution() {
        for (l0, l1) in [(1.0, 1.0), (-1.0, 2.0), (3.0, -0.5), (-1.0, -1.0)] {
            let p = SignDiagonal::new(11, l0, l1);
            assert!(p.signs().iter().all(|s| s * s == 1.0));
        }
    }

    #[test]
    fn involutions_on_complete_blocks() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05, -0.66]);
        let l = build_l(&s, 8).unwrap().to_banded();
        let l2 = l.mul(&l);
        let id = BandedMatrix::identity(8);
        assert!(BandedMatrix::lin_comb(1.0, &l2, -1.0, &id).max_abs_on(0..8) < 1e-15);
        let m = build_m(&s, 8).unwrap().to_banded();
        let m2 = m.mul(&m);
        // the last row of M is a cut block
        assert!(BandedMatrix::lin_comb(1.0, &m2, -1.0, &id).max_abs_on(0..7) < 1e-15);
    }

    #[test]
    fn banded_product_matches_dense() {
        let s = seq(&[0.3, -0.5, 0.7, 0.2, -0.1, 0.4, 0.05]);
        let l = build_l(&s, 7).unwrap().to_banded();
        let m = build_m(&s, 7).unwrap().to_banded();
        let c = m.mul(&l).to_dense();
        let (ld, md) = (l.to_dense(), m.to_dense());
        for i in 0..7 {
            for j in 0..7 {
                let e: f64 = (0..7).map(|k| md[i][k] * ld[k][j]).sum();
                assert!((c[i][j] - e).abs() < 1e-15);
            }
        }
        let ct = m.mul(&l).transpose().to_dense();
        assert_eq!(ct[2][0], c[0][2]);
    }

    #[test]
    fn dumps() {
        let t = Tridiagonal::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        let d = t.to_dump();
        assert_eq!(d.n, 2);
        assert_eq!(Tridiagonal::try_from(d).unwrap(), t);
        assert!(Tridiagonal::new(vec![1.0], vec![0.5]).is_err());
        let b = build_l(&seq(&[0.0; 2]), 2).unwrap().to_json_value();
        assert_eq!(b.bands["1"], vec![1.0]);
    }
}
