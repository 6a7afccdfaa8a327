//! Numerical check of the diagram relating a measure on the circle, its Szegő
//! projection, its symmetrization, the Delsarte–Genin measure and the DVZ
//! measure `nu_1`.
//!
//! Each arrow is checked at the Jacobi-matrix or measure level and reported
//! as a residual.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrices::Tridiagonal;
use crate::measures::{
    christoffel_line, dvz_pushforward, normalize, symmetrize, szego_projection, CircleMeasure,
};
use crate::oprl::cheb_form;
use crate::poly::Poly;
use crate::quadrature::{gram_line, stieltjes_jacobi, QuadratureSpec};
use crate::seqcore::VerblunskySequence;

/// Smallest size accepted by the splitting check.
pub const MIN_SIZE: usize = 8;
const DENSITY_SAMPLES: usize = 200;

/// Residual per arrow and the overall verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagramReport {
    pub residuals: BTreeMap<String, f64>,
    pub tol: f64,
    pub pass: bool,
}

/// `Jh^2 - 2I` against `J (+) Jt` on rows `0 ..= N - 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplittingResidual {
    /// Even rows against `J`.
    pub even: f64,
    /// Odd rows against `Jt`.
    pub odd: f64,
    /// Entries coupling an even and an odd index.
    pub cross: f64,
}

impl SplittingResidual {
    pub fn max(&self) -> f64 {
        self.even.max(self.odd).max(self.cross)
    }
}

// (T^2)_{ij} for a symmetric tridiagonal T
fn square_entry(t: &Tridiagonal, i: usize, j: usize) -> f64 {
    let a = |k: usize| t.offdiag.get(k).copied().unwrap_or(0.0);
    let (lo, hi) = (i.min(j), i.max(j));
    match hi - lo {
        0 => {
            let left = if lo > 0 { a(lo - 1).powi(2) } else { 0.0 };
            left + t.diag[lo].powi(2) + a(lo).powi(2)
        }
        1 => a(lo) * (t.diag[lo] + t.diag[hi]),
        2 => a(lo) * a(lo + 1),
        _ => 0.0,
    }
}

fn tri_entry(t: &Tridiagonal, i: usize, j: usize) -> f64 {
    match i.abs_diff(j) {
        0 => t.diag[i],
        1 => t.offdiag[i.min(j)],
        _ => 0.0,
    }
}

/// Compares `Jh^2 - 2I` with the interleaving of `J` (even indices) and `Jt`
/// (odd indices), where `Jh`, `J`, `Jt` are the Jacobi matrices of the
/// Delsarte–Genin measure, the Szegő projection `sigma` and normalized
/// `(2 + x) dsigma`, all obtained by the Stieltjes procedure.
pub fn verify_splitting(
    mu: &CircleMeasure,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<SplittingResidual> {
    if n < MIN_SIZE {
        return Err(Error::InvalidInput(format!(
            "splitting check needs N >= {MIN_SIZE}, got {n}"
        )));
    }
    let sigma = szego_projection(mu)?;
    let dg = szego_projection(&symmetrize(mu))?;
    let sigma_t = normalize(&christoffel_line(&sigma, &Poly::new(vec![2.0, 1.0]))?, spec)?;
    let jh = stieltjes_jacobi(&dg, n, spec)?;
    let half = n.div_ceil(2);
    let j = stieltjes_jacobi(&sigma, half, spec)?;
    let jt = stieltjes_jacobi(&sigma_t, half, spec)?;

    let mut out = SplittingResidual {
        even: 0.0,
        odd: 0.0,
        cross: 0.0,
    };
    let last = n - 4;
    for r in 0..=last {
        for c in r.saturating_sub(2)..=(r + 2).min(last) {
            let lhs = square_entry(&jh, r, c) - if r == c { 2.0 } else { 0.0 };
            match (r % 2, c % 2) {
                (0, 0) => out.even = out.even.max((lhs - tri_entry(&j, r / 2, c / 2)).abs()),
                (1, 1) => out.odd = out.odd.max((lhs - tri_entry(&jt, r / 2, c / 2)).abs()),
                _ => out.cross = out.cross.max(lhs.abs()),
            }
        }
    }
    Ok(out)
}

/// Jacobi matrix of the Szegő projection from the Verblunsky coefficients
/// (Geronimus relations, with `alpha_{-1} = -1`):
/// `b_n = (1 - alpha_{2n-1}) alpha_{2n} - (1 + alpha_{2n-1}) alpha_{2n-2}`,
/// `a_n^2 = (1 - alpha_{2n-1}) (1 - alpha_{2n}^2) (1 + alpha_{2n+1})`.
pub fn geronimus_szego(seq: &VerblunskySequence, n: usize) -> Result<Tridiagonal> {
    if 2 * n > seq.len() {
        return Err(Error::SizeExceedsSequence {
            requested: 2 * n,
            available: seq.len(),
        });
    }
    let a = |k: isize| if k < -1 { 0.0 } else { seq.alpha(k) };
    let diag = (0..n as isize)
        .map(|k| (1.0 - a(2 * k - 1)) * a(2 * k) - (1.0 + a(2 * k - 1)) * a(2 * k - 2))
        .collect();
    let offdiag = (0..n.saturating_sub(1) as isize)
        .map(|k| ((1.0 - a(2 * k - 1)) * (1.0 - a(2 * k).powi(2)) * (1.0 + a(2 * k + 1))).sqrt())
        .collect();
    Tridiagonal::new(diag, offdiag)
}

/// Jacobi matrix of the Delsarte–Genin measure: zero diagonal and
/// `a_n = sqrt((1 - alpha_{n-1}) (1 + alpha_n))`.
pub fn geronimus_dg(seq: &VerblunskySequence, n: usize) -> Result<Tridiagonal> {
    if n > seq.len() {
        return Err(Error::SizeExceedsSequence {
            requested: n,
            available: seq.len(),
        });
    }
    let offdiag = (0..n.saturating_sub(1) as isize)
        .map(|k| ((1.0 - seq.alpha(k - 1)) * (1.0 + seq.alpha(k))).sqrt())
        .collect();
    Tridiagonal::new(vec![0.0; n], offdiag)
}

fn max_entry_diff(a: &Tridiagonal, b: &Tridiagonal) -> f64 {
    a.diag
        .iter()
        .zip(&b.diag)
        .chain(a.offdiag.iter().zip(&b.offdiag))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The two routes to `nu_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompositionResidual {
    /// Gram defect of the basic DVZ OPRL against the composed measure.
    pub gram: f64,
    /// Largest relative density difference between the routes.
    pub density: f64,
    /// Largest difference in atom location or mass.
    pub atoms: f64,
}

/// `nu_1` as the normalized Christoffel transform `(2 + x) / 2` of the
/// Szegő projection of the symmetrization, compared with the direct
/// pushforward and tested against `q_0 .. q_{n-1}` at `lambda = 1`.
pub fn verify_dvz_composition(
    mu: &CircleMeasure,
    seq: &VerblunskySequence,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<CompositionResidual> {
    let composed = normalize(
        &christoffel_line(
            &szego_projection(&symmetrize(mu))?,
            &Poly::new(vec![1.0, 0.5]),
        )?,
        spec,
    )?;
    let direct = dvz_pushforward(mu, 1.0)?;

    let forms = (0..n).map(|k| cheb_form(seq, k)).collect::<Result<Vec<_>>>()?;
    let gram = gram_line(
        &composed,
        n,
        |x| forms.iter().map(|f| f.eval(1.0, x).expect("lambda = 1")).collect(),
        spec,
    )?
    .defect;

    let mut density = 0.0f64;
    for i in 0..DENSITY_SAMPLES {
        let x = -2.0 + 4.0 * (i as f64 + 0.5) / DENSITY_SAMPLES as f64;
        let (p, q) = (composed.density_at(x), direct.density_at(x));
        density = density.max((p - q).abs() / q.abs().max(f64::MIN_POSITIVE));
    }

    let atoms = if composed.atoms().len() == direct.atoms().len() {
        composed
            .atoms()
            .iter()
            .zip(direct.atoms())
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(CompositionResidual {
        gram,
        density,
        atoms,
    })
}

/// Runs every arrow. `seq` must hold at least `n + 2` coefficients of `mu`.
pub fn run_diagram(
    mu: &CircleMeasure,
    seq: &VerblunskySequence,
    n: usize,
    tol: f64,
    spec: &QuadratureSpec,
) -> Result<DiagramReport> {
    let mut residuals = BTreeMap::new();
    let split = verify_splitting(mu, n, spec)?;
    residuals.insert("splitting_even".to_string(), split.even);
    residuals.insert("splitting_odd".to_string(), split.odd);
    residuals.insert("splitting_cross".to_string(), split.cross);

    let half = n.div_ceil(2);
    let sigma_j = stieltjes_jacobi(&szego_projection(mu)?, half, spec)?;
    residuals.insert(
        "szego_jacobi".to_string(),
        max_entry_diff(&sigma_j, &geronimus_szego(seq, half)?),
    );
    let dg_j = stieltjes_jacobi(&szego_projection(&symmetrize(mu))?, n, spec)?;
    residuals.insert(
        "dg_jacobi".to_string(),
        max_entry_diff(&dg_j, &geronimus_dg(seq, n)?),
    );

    let comp = verify_dvz_composition(mu, seq, n, spec)?;
    residuals.insert("nu1_gram".to_string(), comp.gram);
    residuals.insert("nu1_density".to_string(), comp.density);
    residuals.insert("nu1_atoms".to_string(), comp.atoms);

    let pass = residuals.values().all(|r| *r < tol);
    Ok(DiagramReport {
        residuals,
        tol,
        pass,
    })
}
