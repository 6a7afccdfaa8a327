//! Measures on the unit circle and on the real line, and the maps between them:
//! the DVZ pushforward `nu_lambda`, Szegő projection, symmetrization,
//! Christoffel multiplication, and the `lambda = +-1` specializations.
//!
//! Densities are kept as callables with declared support; nothing is sampled
//! until a quadrature rule asks for values.

use std::f64::consts::{FRAC_1_PI, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oprl::VariableMap;
use crate::poly::Poly;
use crate::quadrature::{integrate_circle, integrate_line, QuadratureSpec};

/// A pure, shareable real function.
pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Pushforward atoms lighter than this are dropped.
pub const ATOM_PRUNE: f64 = 1e-15;

const SYMMETRY_SAMPLES: usize = 64;
const SYMMETRY_TOL: f64 = 1e-12;
const MASS_TOL: f64 = 1e-8;

/// Paired circle atom: mass `m` at each of `e^{+-i theta}` for `0 < theta < pi`,
/// or a single mass `m` at `z = 1` (`theta = 0`) or `z = -1` (`theta = pi`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleAtom {
    pub theta: f64,
    pub mass: f64,
}

impl CircleAtom {
    pub fn is_edge(&self) -> bool {
        self.theta == 0.0 || self.theta == PI
    }

    /// Total mass carried by this entry (`2m` for an interior pair).
    pub fn total_mass(&self) -> f64 {
        if self.is_edge() {
            self.mass
        } else {
            2.0 * self.mass
        }
    }
}

/// Probability measure on the unit circle, symmetric under conjugation:
/// `w(theta) dtheta` plus paired atoms.
#[derive(Clone)]
pub struct CircleMeasure {
    density: Option<Density>,
    atoms: Vec<CircleAtom>,
}

impl fmt::Debug for CircleMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircleMeasure")
            .field("has_density", &self.density.is_some())
            .field("atoms", &self.atoms)
            .finish()
    }
}

fn wrap_angle(theta: f64) -> f64 {
    if (-PI..=PI).contains(&theta) {
        theta
    } else {
        let r = (theta + PI).rem_euclid(2.0 * PI) - PI;
        if r == -PI {
            PI
        } else {
            r
        }
    }
}

impl CircleMeasure {
    /// Validates conjugation symmetry of `w` and total mass 1.
    pub fn new(density: Option<Density>, atoms: Vec<CircleAtom>) -> Result<Self> {
        let out = Self::new_unchecked(density, atoms)?;
        if let Some(w) = &out.density {
            let mut worst = 0.0f64;
            for i in 0..SYMMETRY_SAMPLES {
                let th = PI * (i as f64 + 0.5) / SYMMETRY_SAMPLES as f64;
                let (p, m) = (w(th), w(-th));
                worst = worst.max((p - m).abs() / p.abs().max(1.0));
            }
            if !(worst < SYMMETRY_TOL) {
                return Err(Error::NonSymmetricMeasure(worst));
            }
        }
        let mass = out.total_mass(&QuadratureSpec::default());
        if !((mass - 1.0).abs() < MASS_TOL) {
            return Err(Error::NotProbability(mass));
        }
        Ok(out)
    }

    fn new_unchecked(density: Option<Density>, atoms: Vec<CircleAtom>) -> Result<Self> {
        for a in &atoms {
            if !(0.0..=PI).contains(&a.theta) || !(a.mass > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "circle atom needs theta in [0, pi] and positive mass, got {a:?}"
                )));
            }
        }
        Ok(Self { density, atoms })
    }

    /// Normalized Lebesgue measure `dtheta / 2 pi`.
    pub fn lebesgue() -> Self {
        Self {
            density: Some(Arc::new(|_| 0.5 * FRAC_1_PI)),
            atoms: Vec::new(),
        }
    }

    /// `w(theta)`, any real `theta` (reduced to `(-pi, pi]`). Zero when purely atomic.
    pub fn density(&self, theta: f64) -> f64 {
        self.density.as_ref().map_or(0.0, |w| w(wrap_angle(theta)))
    }

    pub fn density_fn(&self) -> Option<&Density> {
        self.density.as_ref()
    }

    pub fn atoms(&self) -> &[CircleAtom] {
        &self.atoms
    }

    pub fn total_mass(&self, spec: &QuadratureSpec) -> f64 {
        integrate_circle(self, |_| 1.0, spec)
    }
}

/// Absolutely continuous piece of a line measure on `[a, b]`.
#[derive(Clone)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub density: Density,
    /// Endpoint behaviour `(x - a)^p`, `(b - x)^q` used to pick the quadrature
    /// substitution; `+-1/2` for the DVZ and Szegő densities.
    pub exponents: (f64, f64),
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Segment")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("exponents", &self.exponents)
            .finish()
    }
}

impl Segment {
    pub fn new(a: f64, b: f64, density: Density, exponents: (f64, f64)) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidInput(format!("empty segment [{a}, {b}]")));
        }
        if !(exponents.0 > -1.0 && exponents.1 > -1.0) {
            return Err(Error::InvalidInput(format!(
                "endpoint exponents {exponents:?} are not integrable"
            )));
        }
        Ok(Self {
            a,
            b,
            density,
            exponents,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

/// Measure on the real line: densities on disjoint intervals plus atoms.
#[derive(Clone, Debug, Default)]
pub struct LineMeasure {
    segments: Vec<Segment>,
    atoms: Vec<(f64, f64)>,
}

impl LineMeasure {
    /// Segments must be pairwise disjoint (shared endpoints allowed); they are
    /// stored sorted by left endpoint.
    pub fn new(mut segments: Vec<Segment>, atoms: Vec<(f64, f64)>) -> Result<Self> {
        segments.sort_by(|s, t| s.a.total_cmp(&t.a));
        for w in segments.windows(2) {
            if w[1].a < w[0].b {
                return Err(Error::InvalidInput(format!(
                    "segments [{}, {}] and [{}, {}] overlap",
                    w[0].a, w[0].b, w[1].a, w[1].b
                )));
            }
        }
        if let Some(&(x, m)) = atoms.iter().find(|(x, m)| !x.is_finite() || !(*m >= 0.0)) {
            return Err(Error::InvalidInput(format!("bad atom ({x}, {m})")));
        }
        let mut atoms: Vec<_> = atoms.into_iter().filter(|&(_, m)| m >= ATOM_PRUNE).collect();
        atoms.sort_by(|p, q| p.0.total_cmp(&q.0));
        Ok(Self { segments, atoms })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `(location, mass)` sorted by location.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// Sum of the densities of all segments containing `x`.
    pub fn density_at(&self, x: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.contains(x))
            .map(|s| (s.density)(x))
            .sum()
    }

    pub fn total_mass(&self, spec: &QuadratureSpec) -> Result<f64> {
        integrate_line(self, |_| 1.0, spec)
    }

    /// Same measure with every density and atom multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|seg| {
                let d = seg.density.clone();
                Segment {
                    density: Arc::new(move |x| s * d(x)),
                    ..seg.clone()
                }
            })
            .collect();
        Self {
            segments,
            atoms: self.atoms.iter().map(|&(x, m)| (x, s * m)).collect(),
        }
    }
}

/// Support `E_lambda = +-[|1 - |lambda||, 1 + |lambda|]`, a single interval
/// `[-2, 2]` when `|lambda| = 1`. Intervals are listed left to right.
pub fn support_e(lambda: f64) -> Result<Vec<(f64, f64)>> {
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let l = lambda.abs();
    let (inner, outer) = ((1.0 - l).abs(), 1.0 + l);
    if l == 1.0 {
        Ok(vec![(-2.0, 2.0)])
    } else {
        Ok(vec![(-outer, -inner), (inner, outer)])
    }
}

/// `sqrt(((x + lambda)^2 - 1) / (1 - (x - lambda)^2))`, using the reduced
/// forms `(2 + x) / (2 - x)` and `(2 - x) / (2 + x)` at `lambda = +-1`.
pub fn dvz_factor(x: f64, lambda: f64) -> f64 {
    let ratio = if lambda == 1.0 {
        (2.0 + x) / (2.0 - x)
    } else if lambda == -1.0 {
        (2.0 - x) / (2.0 + x)
    } else {
        let g1 = (x + lambda - 1.0) * (x + lambda + 1.0);
        let g2 = (1.0 - x + lambda) * (1.0 + x - lambda);
        g1 / g2
    };
    ratio.max(0.0).sqrt()
}

// Endpoint exponent of the DVZ density: -1/2 where 1 - (x - lambda)^2 vanishes,
// +1/2 where (x + lambda)^2 - 1 does.
fn dvz_edge_exponent(e: f64, lambda: f64) -> f64 {
    let g1 = ((e + lambda - 1.0) * (e + lambda + 1.0)).abs();
    let g2 = ((1.0 - e + lambda) * (1.0 + e - lambda)).abs();
    if g2 <= g1 {
        -0.5
    } else {
        0.5
    }
}

/// Image of a circle atom under the DVZ map: up to two real atoms.
pub fn dvz_atoms(atom: &CircleAtom, lambda: f64) -> Vec<(f64, f64)> {
    let m = atom.mass;
    if atom.theta == 0.0 {
        return vec![(1.0 + lambda, m)];
    }
    if atom.theta == PI {
        return vec![(lambda - 1.0, m)];
    }
    let xk = VariableMap::new(lambda)
        .expect("lambda checked by caller")
        .x_of_theta(atom.theta);
    let plus = m * ((xk + lambda).powi(2) - 1.0) / (2.0 * lambda * xk);
    let minus = m * (1.0 - (xk - lambda).powi(2)) / (2.0 * lambda * xk);
    vec![(xk, plus), (-xk, minus)]
}

/// The DVZ orthogonality measure `nu_lambda` of `q_n^{(lambda)}`.
pub fn dvz_pushforward(mu: &CircleMeasure, lambda: f64) -> Result<LineMeasure> {
    let support = support_e(lambda)?;
    let map = VariableMap::new(lambda)?;
    let mut segments = Vec::new();
    if let Some(w) = mu.density_fn() {
        for &(a, b) in &support {
            let w = w.clone();
            let inv_abs = 1.0 / lambda.abs();
            let density: Density =
                Arc::new(move |x| inv_abs * dvz_factor(x, lambda) * w(map.theta(x)));
            let exps = (dvz_edge_exponent(a, lambda), dvz_edge_exponent(b, lambda));
            segments.push(Segment::new(a, b, density, exps)?);
        }
    }
    let atoms = mu.atoms().iter().flat_map(|a| dvz_atoms(a, lambda)).collect();
    LineMeasure::new(segments, atoms)
}

/// Szegő projection `dsigma(x) = 2 dmu(arccos(x / 2))` on `[-2, 2]`.
pub fn szego_projection(mu: &CircleMeasure) -> Result<LineMeasure> {
    let mut segments = Vec::new();
    if let Some(w) = mu.density_fn() {
        let w = w.clone();
        let density: Density =
            Arc::new(move |x| 2.0 * w((0.5 * x).clamp(-1.0, 1.0).acos()) / ((2.0 - x) * (2.0 + x)).sqrt());
        segments.push(Segment::new(-2.0, 2.0, density, (-0.5, -0.5))?);
    }
    let atoms = mu
        .atoms()
        .iter()
        .map(|a| {
            let x = 2.0 * a.theta.cos();
            if a.is_edge() {
                (if a.theta == 0.0 { 2.0 } else { -2.0 }, a.mass)
            } else {
                (x, 2.0 * a.mass)
            }
        })
        .collect();
    LineMeasure::new(segments, atoms)
}

/// Symmetrization `dmu_hat(theta) = (dmu(2 theta) + dmu(2 theta - 2 pi)) / 2`,
/// invariant under `z -> -z`.
pub fn symmetrize(mu: &CircleMeasure) -> CircleMeasure {
    let density = mu.density_fn().map(|w| {
        let w = w.clone();
        Arc::new(move |th: f64| w(wrap_angle(2.0 * th))) as Density
    });
    let mut atoms = Vec::new();
    for a in mu.atoms() {
        let half = 0.5 * a.mass;
        if a.theta == 0.0 {
            atoms.push(CircleAtom { theta: 0.0, mass: half });
            atoms.push(CircleAtom { theta: PI, mass: half });
        } else if a.theta == PI {
            atoms.push(CircleAtom { theta: 0.5 * PI, mass: half });
        } else {
            atoms.push(CircleAtom { theta: 0.5 * a.theta, mass: half });
            atoms.push(CircleAtom { theta: PI - 0.5 * a.theta, mass: half });
        }
    }
    CircleMeasure { density, atoms }
}

const CHRISTOFFEL_SAMPLES: usize = 64;

/// Multiplies `sigma` by a polynomial that is non-negative on its support.
pub fn christoffel_line(sigma: &LineMeasure, poly: &Poly) -> Result<LineMeasure> {
    let scale = poly.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    let check = |x: f64| -> Result<f64> {
        let v = poly.eval(x);
        if v < -1e-14 * scale {
            Err(Error::NegativeWeight { x, value: v })
        } else {
            Ok(v.max(0.0))
        }
    };
    let mut segments = Vec::new();
    for seg in sigma.segments() {
        for i in 0..=CHRISTOFFEL_SAMPLES {
            check(seg.a + (seg.b - seg.a) * i as f64 / CHRISTOFFEL_SAMPLES as f64)?;
        }
        let d = seg.density.clone();
        let p = poly.clone();
        let bump = |e: f64, x: f64| if p_vanishes(poly, x) { e + 1.0 } else { e };
        let exponents = (bump(seg.exponents.0, seg.a), bump(seg.exponents.1, seg.b));
        segments.push(Segment::new(
            seg.a,
            seg.b,
            Arc::new(move |x| p.eval(x).max(0.0) * d(x)),
            exponents,
        )?);
    }
    let mut atoms = Vec::new();
    for &(x, m) in sigma.atoms() {
        atoms.push((x, m * check(x)?));
    }
    LineMeasure::new(segments, atoms)
}

fn p_vanishes(p: &Poly, x: f64) -> bool {
    p.eval(x) == 0.0
}

/// Rescales to total mass 1.
pub fn normalize(nu: &LineMeasure, spec: &QuadratureSpec) -> Result<LineMeasure> {
    let mass = nu.total_mass(spec)?;
    if !(mass > 0.0) {
        return Err(Error::InvalidInput(format!("cannot normalize mass {mass}")));
    }
    Ok(nu.scaled(1.0 / mass))
}

/// `nu_{+1}` (`sign = 1`) or `nu_{-1}` (`sign = -1`) through the half-angle maps
/// `theta = 2 arccos(x / 2)` and `theta = 2 arcsin(x / 2)`:
/// `dnu_{+-}(x) = (2 +- x) / 2 dmu(theta(x))`.
pub fn basic_dvz_measure(mu: &CircleMeasure, sign: i8) -> Result<LineMeasure> {
    let s = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => {
            return Err(Error::InvalidInput(format!(
                "sign must be +1 or -1, got {sign}"
            )))
        }
    };
    let theta_of = move |x: f64| {
        let h = (0.5 * x).clamp(-1.0, 1.0);
        if s > 0.0 {
            2.0 * h.acos()
        } else {
            2.0 * h.asin()
        }
    };
    let mut segments = Vec::new();
    if let Some(w) = mu.density_fn() {
        let w = w.clone();
        // |dtheta / dx| = 2 / sqrt(4 - x^2)
        let density: Density =
            Arc::new(move |x| (2.0 + s * x) * w(wrap_angle(theta_of(x))) / ((2.0 - x) * (2.0 + x)).sqrt());
        let exps = if s > 0.0 { (0.5, -0.5) } else { (-0.5, 0.5) };
        segments.push(Segment::new(-2.0, 2.0, density, exps)?);
    }
    let mut atoms = Vec::new();
    // x(theta) = 2 cos(theta / 2) on [0, 2 pi] or 2 sin(theta / 2) on [-pi, pi]
    let x_of = |th: f64| if s > 0.0 { 2.0 * (0.5 * th).cos() } else { 2.0 * (0.5 * th).sin() };
    let weight = |x: f64| 0.5 * (2.0 + s * x);
    for a in mu.atoms() {
        let points: Vec<(f64, f64)> = if a.theta == 0.0 {
            if s > 0.0 {
                vec![(0.0, 0.5 * a.mass), (2.0 * PI, 0.5 * a.mass)]
            } else {
                vec![(0.0, a.mass)]
            }
        } else if a.theta == PI {
            if s > 0.0 {
                vec![(PI, a.mass)]
            } else {
                vec![(-PI, 0.5 * a.mass), (PI, 0.5 * a.mass)]
            }
        } else if s > 0.0 {
            vec![(a.theta, a.mass), (2.0 * PI - a.theta, a.mass)]
        } else {
            vec![(a.theta, a.mass), (-a.theta, a.mass)]
        };
        for (th, m) in points {
            let x = x_of(th);
            atoms.push((x, m * weight(x)));
        }
    }
    LineMeasure::new(segments, atoms)
}
