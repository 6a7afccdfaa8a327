//! `verify` subcommand: runs invariant suites and reports residuals.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cmvdvz::diagram::run_diagram;
use cmvdvz::matrices::{build_cmv, build_k, build_l, build_m, jacobi_from_k, BandedMatrix};
use cmvdvz::measures::dvz_pushforward;
use cmvdvz::oprl::recurrence_eval;
use cmvdvz::poly::olpuc_all;
use cmvdvz::quadrature::{gram_circle, gram_line, stieltjes_jacobi};
use cmvdvz::{Family, QuadratureSpec, VerblunskySequence};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Gram,
    Mass,
    Stieltjes,
    MatrixIdentities,
    Diagram,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Self::Gram => "gram",
            Self::Mass => "mass",
            Self::Stieltjes => "stieltjes",
            Self::MatrixIdentities => "matrix-identities",
            Self::Diagram => "diagram",
            Self::All => "all",
        }
    }

    fn default_size(self) -> usize {
        match self {
            Self::Gram | Self::Diagram | Self::Mass => 16,
            Self::Stieltjes => 8,
            Self::MatrixIdentities => 32,
            Self::All => 0,
        }
    }

    fn default_tol(self) -> f64 {
        match self {
            Self::MatrixIdentities => 1e-13,
            Self::Mass => 1e-8,
            _ => 1e-7,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Number of polynomials, Jacobi rows or matrix size, depending on the suite.
    #[arg(long)]
    size: Option<usize>,
    /// Pass threshold on every residual; each suite has its own default.
    #[arg(long)]
    tol: Option<f64>,
    /// Restrict to one family (default: all).
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    param: Option<f64>,
    /// Restrict to one lambda (default: -2, -1, -0.5, 0.5, 1, 2).
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    /// Seed for the random sequences of matrix-identities.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Where to write the JSON report (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub quadrature_nodes: usize,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl Report {
    /// Human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            for c in &s.checks {
                let _ = writeln!(
                    out,
                    "{:<18} {:<44} {:>11.3e} {:>9.1e}  {}",
                    s.suite,
                    c.name,
                    c.residual,
                    c.tol,
                    if c.pass { "PASS" } else { "FAIL" }
                );
            }
        }
        let _ = writeln!(out, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

const LAMBDAS: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];

struct Ctx {
    families: Vec<Family>,
    lambdas: Vec<f64>,
    spec: QuadratureSpec,
    seed: u64,
}

fn check(name: String, residual: f64, tol: f64) -> Check {
    Check {
        name,
        residual,
        tol,
        pass: residual < tol,
    }
}

fn label(f: &Family) -> String {
    match f.param() {
        Some(p) => format!("{}({p})", f.name()),
        None => f.name().to_string(),
    }
}

fn jacobi(seq: &VerblunskySequence, lambda: f64, n: usize) -> anyhow::Result<cmvdvz::Tridiagonal> {
    Ok(jacobi_from_k(&build_k(seq, 1.0, lambda, n)?, 1.0, lambda)?)
}

fn gram_suite(ctx: &Ctx, n: usize, tol: f64) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in &ctx.families {
        let seq = f.sequence(n + 1)?;
        let mu = f.measure();
        let chis = olpuc_all(&seq, n - 1)?;
        let g = gram_circle(
            &mu,
            n,
            |th| chis.iter().map(|c| c.eval_on_circle(th)).collect(),
            &ctx.spec,
        );
        out.push(check(format!("chi {} n<{n}", label(f)), g.defect, tol.max(1e-8)));
        for &lambda in &ctx.lambdas {
            let j = jacobi(&seq, lambda, n + 1)?;
            let nu = dvz_pushforward(&mu, lambda)?;
            let g = gram_line(&nu, n, |x| recurrence_eval(&j, x, n - 1).expect("n < size"), &ctx.spec)?;
            out.push(check(format!("q {} lambda={lambda} n<{n}", label(f)), g.defect, tol));
        }
    }
    Ok(out)
}

fn mass_suite(ctx: &Ctx, tol: f64) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in &ctx.families {
        for &lambda in &ctx.lambdas {
            let nu = dvz_pushforward(&f.measure(), lambda)?;
            let m = nu.total_mass(&ctx.spec)?;
            out.push(check(format!("{} lambda={lambda}", label(f)), (m - 1.0).abs(), tol));
        }
    }
    Ok(out)
}

fn stieltjes_suite(ctx: &Ctx, rows: usize, tol: f64) -> anyhow::Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in &ctx.families {
        let seq = f.sequence(rows)?;
        for &lambda in &ctx.lambdas {
            let s = stieltjes_jacobi(&dvz_pushforward(&f.measure(), lambda)?, rows, &ctx.spec)?;
            let k = jacobi(&seq, lambda, rows)?;
            let err = s
                .diag
                .iter()
                .chain(&s.offdiag)
                .zip(k.diag.iter().chain(&k.offdiag))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            out.push(check(format!("{} lambda={lambda} rows={rows}", label(f)), err, tol));
        }
    }
    Ok(out)
}

fn matrix_suite(ctx: &Ctx, n: usize, tol: f64) -> anyhow::Result<Vec<Check>> {
    if n < 4 {
        anyhow::bail!("matrix-identities needs --size >= 4");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let (mut l_err, mut m_err, mut sum_err) = (0.0f64, 0.0f64, 0.0f64);
    let id = BandedMatrix::identity(n);
    for _ in 0..50 {
        let seq = VerblunskySequence::new((0..n).map(|_| rng.gen_range(-0.99..0.99)).collect())?;
        let l = build_l(&seq, n)?;
        let m = build_m(&seq, n)?;
        let (lc, mc) = (l.boundary_clean_rows(), m.boundary_clean_rows());
        let (l, m) = (l.to_banded(), m.to_banded());
        l_err = l_err.max(BandedMatrix::lin_comb(1.0, &l.mul(&l), -1.0, &id).max_abs_on(0..lc));
        m_err = m_err.max(BandedMatrix::lin_comb(1.0, &m.mul(&m), -1.0, &id).max_abs_on(0..mc));
        let lm = BandedMatrix::lin_comb(1.0, &l, 1.0, &m);
        let lhs = BandedMatrix::lin_comb(1.0, &lm.mul(&lm), -2.0, &id);
        let c = build_cmv(&seq, n)?;
        let rhs = BandedMatrix::lin_comb(1.0, &c, 1.0, &c.transpose());
        let clean = lc.min(mc);
        sum_err = sum_err.max(BandedMatrix::lin_comb(1.0, &lhs, -1.0, &rhs).max_abs_on(0..clean));
    }
    Ok(vec![
        check(format!("L^2 = I, N={n}"), l_err, tol),
        check(format!("M^2 = I, N={n}"), m_err, tol),
        check(format!("(L+M)^2 - 2I = C + C^t, N={n}"), sum_err, tol),
    ])
}

fn diagram_suite(ctx: &Ctx, explicit_family: bool, n: usize, tol: f64) -> anyhow::Result<Vec<Check>> {
    let families = if explicit_family {
        ctx.families.clone()
    } else {
        vec![Family::Free, Family::bernstein_szego(0.4)?]
    };
    let mut out = Vec::new();
    for f in &families {
        let r = run_diagram(&f.measure(), &f.sequence(n + 2)?, n, tol, &ctx.spec)?;
        for (arrow, res) in r.residuals {
            out.push(check(format!("{} {arrow} N={n}", label(f)), res, tol));
        }
    }
    Ok(out)
}

pub fn run(a: &VerifyArgs) -> anyhow::Result<Report> {
    let spec = QuadratureSpec::from_env()?;
    let families = match &a.family {
        Some(name) => vec![Family::from_name(name, a.param)?],
        None => vec![
            Family::Free,
            Family::bernstein_szego(0.6)?,
            Family::lebesgue_mass(0.5)?,
            Family::second_kind(0.3)?,
        ],
    };
    let lambdas = match a.lambda {
        Some(0.0) => return Err(cmvdvz::Error::ZeroLambda.into()),
        Some(l) => vec![l],
        None => LAMBDAS.to_vec(),
    };
    if let Some(n) = a.size {
        if n < 2 {
            anyhow::bail!("--size must be at least 2");
        }
    }
    let ctx = Ctx {
        families,
        lambdas,
        spec,
        seed: a.seed,
    };
    let suites = match a.suite {
        Suite::All => vec![
            Suite::MatrixIdentities,
            Suite::Gram,
            Suite::Mass,
            Suite::Stieltjes,
            Suite::Diagram,
        ],
        s => vec![s],
    };
    let mut reports = Vec::new();
    for s in suites {
        let size = a.size.unwrap_or(s.default_size());
        let tol = a.tol.unwrap_or(s.default_tol());
        let checks = match s {
            Suite::Gram => gram_suite(&ctx, size, tol)?,
            Suite::Mass => mass_suite(&ctx, tol)?,
            Suite::Stieltjes => stieltjes_suite(&ctx, size, tol)?,
            Suite::MatrixIdentities => matrix_suite(&ctx, size, tol)?,
            Suite::Diagram => diagram_suite(&ctx, a.family.is_some(), size, tol)?,
            Suite::All => unreachable!(),
        };
        let pass = checks.iter().all(|c| c.pass);
        reports.push(SuiteReport {
            suite: s.name(),
            checks,
            pass,
        });
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(Report {
        quadrature_nodes: ctx.spec.nodes_per_segment(),
        suites: reports,
        pass,
    })
}
