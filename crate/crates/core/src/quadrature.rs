//! Numerical integration against line and circle measures, Gram matrices,
//! and the Stieltjes procedure.
//!
//! Line densities are integrated with Gauss–Legendre panels. Segments that
//! declare a fractional endpoint exponent are first pulled back through
//! `x = a + (b - a) sin^2(pi v / 2)`, which turns `(x - a)^{+-1/2}` and
//! `(b - x)^{+-1/2}` into smooth integrands. Circle densities are periodic and
//! get the trapezoid rule.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrices::Tridiagonal;
use crate::measures::{CircleMeasure, LineMeasure, Segment};

/// Environment variable overriding the node count per segment.
pub const NODES_ENV: &str = "CMVDVZ_QUAD_NODES";
pub const DEFAULT_NODES: usize = 200;
pub const MIN_NODES: usize = 8;

const POSITIVITY_FLOOR: f64 = 1e-13;

/// Quadrature resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    nodes_per_segment: usize,
    panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_per_segment: DEFAULT_NODES,
            panels: 1,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes_per_segment: usize) -> Result<Self> {
        Self::with_panels(nodes_per_segment, 1)
    }

    /// `panels` Gauss–Legendre panels of `nodes_per_segment / panels` nodes each
    /// (rounded up) on every segment.
    pub fn with_panels(nodes_per_segment: usize, panels: usize) -> Result<Self> {
        if nodes_per_segment < MIN_NODES {
            return Err(Error::InvalidInput(format!(
                "need at least {MIN_NODES} quadrature nodes, got {nodes_per_segment}"
            )));
        }
        if panels == 0 {
            return Err(Error::InvalidInput("need at least one panel".into()));
        }
        Ok(Self {
            nodes_per_segment,
            panels,
        })
    }

    /// Default spec, with the node count taken from `CMVDVZ_QUAD_NODES` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(NODES_ENV) {
            Ok(s) => {
                let n = s.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidInput(format!("{NODES_ENV}={s:?} is not a node count"))
                })?;
                Self::new(n)
            }
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn nodes_per_segment(&self) -> usize {
        self.nodes_per_segment
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    /// Trapezoid points on the circle.
    pub fn circle_nodes(&self) -> usize {
        2 * self.nodes_per_segment
    }

    /// Same spec with twice the nodes.
    pub fn doubled(&self) -> Self {
        Self {
            nodes_per_segment: 2 * self.nodes_per_segment,
            panels: self.panels,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1], ascending
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Finite atomic measure `sum_i w_i delta_{x_i}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn segment_rule(seg: &Segment, spec: &QuadratureSpec, out: &mut DiscreteMeasure) -> Result<()> {
    let per_panel = spec.nodes_per_segment.div_ceil(spec.panels);
    let (v, wv) = gauss_legendre(per_panel);
    let singular = seg.exponents.0.fract() != 0.0 || seg.exponents.1.fract() != 0.0;
    let len = seg.b - seg.a;
    let h = 1.0 / spec.panels as f64;
    for p in 0..spec.panels {
        for (&vi, &wi) in v.iter().zip(&wv) {
            let s = h * (p as f64 + vi);
            let (x, jac) = if singular {
                let sn = (0.5 * PI * s).sin();
                let x = seg.a + len * sn * sn;
                // dx/ds = pi sqrt((x - a)(b - x)), taken at the rounded node so
                // that it cancels against endpoint factors of the density
                (x, PI * ((x - seg.a) * (seg.b - x)).max(0.0).sqrt())
            } else {
                (seg.a + len * s, len)
            };
            let d = (seg.density)(x);
            if !d.is_finite() {
                return Err(Error::NonFiniteIntegrand(x));
            }
            out.nodes.push(x);
            out.weights.push(h * wi * jac * d);
        }
    }
    Ok(())
}

/// Quadrature nodes of every segment followed by the atoms.
pub fn discretize(nu: &LineMeasure, spec: &QuadratureSpec) -> Result<DiscreteMeasure> {
    let mut out = DiscreteMeasure::default();
    for seg in nu.segments() {
        segment_rule(seg, spec, &mut out)?;
    }
    for &(x, m) in nu.atoms() {
        out.nodes.push(x);
        out.weights.push(m);
    }
    Ok(out)
}

/// `int f dnu`.
pub fn integrate_line(
    nu: &LineMeasure,
    f: impl Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let d = discretize(nu, spec)?;
    let v = d.integrate(f);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand(f64::NAN))
    }
}

/// Trapezoid nodes in `theta` on `[-pi, pi)` plus every atom point (`+-theta_k`
/// for interior atoms).
pub fn discretize_circle(mu: &CircleMeasure, spec: &QuadratureSpec) -> DiscreteMeasure {
    let mut out = DiscreteMeasure::default();
    if mu.density_fn().is_some() {
        let k = spec.circle_nodes();
        let h = 2.0 * PI / k as f64;
        for i in 0..k {
            let th = -PI + h * i as f64;
            out.nodes.push(th);
            out.weights.push(h * mu.density(th));
        }
    }
    for a in mu.atoms() {
        out.nodes.push(a.theta);
        out.weights.push(a.mass);
        if !a.is_edge() {
            out.nodes.push(-a.theta);
            out.weights.push(a.mass);
        }
    }
    out
}

/// `int f(theta) dmu(theta)`.
pub fn integrate_circle(
    mu: &CircleMeasure,
    f: impl Fn(f64) -> f64,
    spec: &QuadratureSpec,
) -> f64 {
    discretize_circle(mu, spec).integrate(f)
}

/// Gram matrix and its distance `max |G_ij - delta_ij|` from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct GramReport {
    pub matrix: Vec<Vec<f64>>,
    pub defect: f64,
}

impl GramReport {
    fn from_matrix(matrix: Vec<Vec<f64>>) -> Self {
        let mut defect = 0.0f64;
        for (i, row) in matrix.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((g - target).abs());
            }
        }
        Self { matrix, defect }
    }
}

/// `G_ij = int f_i f_j dnu`, with `basis(x)` returning `(f_0(x), ..., f_{n-1}(x))`.
pub fn gram_line(
    nu: &LineMeasure,
    n: usize,
    basis: impl Fn(f64) -> Vec<f64>,
    spec: &QuadratureSpec,
) -> Result<GramReport> {
    let d = discretize(nu, spec)?;
    let mut g = vec![vec![0.0; n]; n];
    for (&x, &w) in d.nodes.iter().zip(&d.weights) {
        let v = basis(x);
        for i in 0..n {
            for j in 0..=i {
                g[i][j] += w * v[i] * v[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[j][i] = g[i][j];
        }
    }
    if g.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteIntegrand(f64::NAN));
    }
    Ok(GramReport::from_matrix(g))
}

/// `G_ij = int f_i conj(f_j) dmu`, with `basis(theta)` evaluating at `e^{i theta}`.
/// The report holds `|G_ij|` entrywise; the defect uses the complex entries.
pub fn gram_circle(
    mu: &CircleMeasure,
    n: usize,
    basis: impl Fn(f64) -> Vec<Complex64>,
    spec: &QuadratureSpec,
) -> GramReport {
    let d = discretize_circle(mu, spec);
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (&th, &w) in d.nodes.iter().zip(&d.weights) {
        let v = basis(th);
        for i in 0..n {
            for j in 0..n {
                g[i][j] += w * v[i] * v[j].conj();
            }
        }
    }
    let mut defect = 0.0f64;
    for (i, row) in g.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((z - target).norm());
        }
    }
    GramReport {
        matrix: g.iter().map(|r| r.iter().map(|z| z.norm()).collect()).collect(),
        defect,
    }
}

/// First `n` rows of the Jacobi matrix of `nu`, by the Stieltjes procedure on
/// its discretization. Fails with [`Error::LossOfPositivity`] once the
/// discrete measure has fewer support points than requested.
pub fn stieltjes_jacobi(nu: &LineMeasure, n: usize, spec: &QuadratureSpec) -> Result<Tridiagonal> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one row".into()));
    }
    let d = discretize(nu, spec)?;
    let mass = d.total_mass();
    if !(mass > 0.0) {
        return Err(Error::LossOfPositivity { step: 0, value: mass });
    }
    let mut prev = vec![0.0; d.len()];
    let mut cur = vec![1.0 / mass.sqrt(); d.len()];
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let b: f64 = d
            .nodes
            .iter()
            .zip(&d.weights)
            .zip(&cur)
            .map(|((&x, &w), &p)| w * x * p * p)
            .sum();
        diag.push(b);
        if k + 1 == n {
            break;
        }
        let a_prev = offdiag.last().copied().unwrap_or(0.0);
        let next: Vec<f64> = (0..d.len())
            .map(|i| (d.nodes[i] - b) * cur[i] - a_prev * prev[i])
            .collect();
        let a2: f64 = next.iter().zip(&d.weights).map(|(r, w)| w * r * r).sum();
        // a_k^2 = int (x - b_k)^2 p_k^2 - a_{k-1}^2; below rounding level it is zero
        let scale: f64 = (0..d.len())
            .map(|i| d.weights[i] * ((d.nodes[i] - b) * cur[i]).powi(2))
            .sum::<f64>()
            + a_prev * a_prev;
        if !(a2 > POSITIVITY_FLOOR * scale) {
            return Err(Error::LossOfPositivity { step: k, value: a2 });
        }
        let a = a2.sqrt();
        offdiag.push(a);
        prev = std::mem::replace(&mut cur, next.into_iter().map(|r| r / a).collect());
    }
    Tridiagonal::new(diag, offdiag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{szego_projection, CircleAtom};
    use std::sync::Arc;

    #[test]
    fn gauss_legendre_is_exact_for_low_degree() {
        for n in [1usize, 2, 5, 8, 33, 200] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13, "n={n}");
            for deg in 0..(2 * n).min(30) {
                let approx: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = 1.0 / (deg as f64 + 1.0);
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(7).is_err());
        assert!(QuadratureSpec::new(8).is_ok());
        assert!(QuadratureSpec::with_panels(8, 0).is_err());
        assert_eq!(QuadratureSpec::default().nodes_per_segment(), DEFAULT_NODES);
        assert_eq!(QuadratureSpec::default().doubled().nodes_per_segment(), 400);
    }

    #[test]
    fn arcsine_mass_and_moments() {
        let sigma = szego_projection(&CircleMeasure::lebesgue()).unwrap();
        let spec = QuadratureSpec::default();
        assert!((sigma.total_mass(&spec).unwrap() - 1.0).abs() < 1e-13);
        // int x^2 dsigma = 2 for the arcsine law on [-2, 2]
        let m2 = integrate_line(&sigma, |x| x * x, &spec).unwrap();
        assert!((m2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn panels_agree() {
        let sigma = szego_projection(&CircleMeasure::lebesgue()).unwrap();
        let a = integrate_line(&sigma, |x| x.powi(4), &QuadratureSpec::new(64).unwrap()).unwrap();
        let b =
            integrate_line(&sigma, |x| x.powi(4), &QuadratureSpec::with_panels(64, 4).unwrap())
                .unwrap();
        assert!((a - 6.0).abs() < 1e-12 && (b - 6.0).abs() < 1e-12);
    }

    #[test]
    fn circle_trapezoid_with_atoms() {
        let mu = CircleMeasure::new(
            Some(Arc::new(|_| 0.5 * 0.5 / PI)),
            vec![CircleAtom { theta: 1.0, mass: 0.25 }],
        )
        .unwrap();
        let spec = QuadratureSpec::default();
        assert!((mu.total_mass(&spec) - 1.0).abs() < 1e-14);
        let c = integrate_circle(&mu, |th| th.cos(), &spec);
        assert!((c - 0.5 * 1f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn stieltjes_on_arcsine_law() {
        let sigma = szego_projection(&CircleMeasure::lebesgue()).unwrap();
        let j = stieltjes_jacobi(&sigma, 6, &QuadratureSpec::default()).unwrap();
        assert!(j.diag.iter().all(|b| b.abs() < 1e-12));
        assert!((j.offdiag[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!(j.offdiag[1..].iter().all(|a| (a - 1.0).abs() < 1e-12));
    }

    #[test]
    fn stieltjes_detects_exhausted_support() {
        let atoms = crate::measures::LineMeasure::new(vec![], vec![(0.0, 0.5), (1.0, 0.5)]).unwrap();
        let err = stieltjes_jacobi(&atoms, 3, &QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::LossOfPositivity { step: 1, .. }));
    }

    #[test]
    fn non_finite_density_is_reported() {
        let bad = crate::measures::LineMeasure::new(
            vec![Segment::new(0.0, 1.0, Arc::new(|_| f64::NAN), (0.0, 0.0)).unwrap()],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            integrate_line(&bad, |x| x, &QuadratureSpec::default()),
            Err(Error::NonFiniteIntegrand(_))
        ));
    }

    #[test]
    fn circle_gram_of_monomials() {
        let spec = QuadratureSpec::default();
        let g = gram_circle(
            &CircleMeasure::lebesgue(),
            4,
            |th| (0..4).map(|k| Complex64::from_polar(1.0, k as f64 * th)).collect(),
            &spec,
        );
        assert!(g.defect < 1e-13);
    }
}
