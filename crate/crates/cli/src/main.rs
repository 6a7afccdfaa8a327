use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cmvdvz::dvz::{self, DEFAULT_TOL};
use cmvdvz::format::{sig17, to_json_string};
use cmvdvz::io::AlphaSource;
use cmvdvz::matrices::TridiagonalDump;
use cmvdvz::measures::dvz_pushforward;
use cmvdvz::oprl::cheb_form;
use cmvdvz::poly::coefficient_table_csv;
use cmvdvz::quadrature::integrate_line;
use cmvdvz::{Error, Family, QuadratureSpec, Tridiagonal, VerblunskySequence};

mod verify;

const EXIT_INPUT: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "cmvdvz", version, about = "DVZ transforms of CMV matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobi matrix J_{lambda0, lambda1} of a Verblunsky sequence.
    Transform(TransformArgs),
    /// Recover (lambda0, lambda1, alpha) from a Jacobi matrix.
    Invert(InvertArgs),
    /// Tabulate q_0 .. q_n on a grid.
    Eval(EvalArgs),
    /// Sample the DVZ measure nu_lambda of a family.
    Measure(MeasureArgs),
    /// U-basis coefficients of Q_n and Qt_n.
    ChebForm(ChebFormArgs),
    /// Run verification suites.
    Verify(verify::VerifyArgs),
}

/// Verblunsky input: a JSON file or a named family.
#[derive(Args, Debug, Clone)]
struct SourceArgs {
    /// JSON file with `{"alphas": [...]}` or `{"family": ..., "params": {...}, "n": N}`.
    #[arg(long, conflicts_with = "family")]
    alphas: Option<PathBuf>,
    /// free, bernstein_szego, lebesgue_mass (or mass_point), second_kind.
    #[arg(long)]
    family: Option<String>,
    /// Family parameter (alpha or m).
    #[arg(long, allow_hyphen_values = true)]
    param: Option<f64>,
}

impl SourceArgs {
    /// Sequence with at least `min_len` coefficients when it comes from a family.
    fn sequence(&self, min_len: usize) -> anyhow::Result<VerblunskySequence> {
        if let Some(path) = &self.alphas {
            let src = AlphaSource::from_json(&read(path)?)?;
            return Ok(match src {
                AlphaSource::Family { n, .. } if n < min_len => {
                    src.family()?.expect("family source").sequence(min_len)?
                }
                _ => src.sequence()?,
            });
        }
        Ok(self.family()?.sequence(min_len)?)
    }

    fn family(&self) -> anyhow::Result<Family> {
        if let Some(path) = &self.alphas {
            return AlphaSource::from_json(&read(path)?)?
                .family()?
                .ok_or_else(|| anyhow!("{} lists explicit alphas, not a family", path.display()));
        }
        let name = self
            .family
            .as_deref()
            .ok_or_else(|| anyhow!("give --alphas FILE or --family NAME"))?;
        Ok(Family::from_name(name, self.param)?)
    }
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// lambda1 with lambda0 = 1.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["lambda0", "lambda1"])]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "lambda1")]
    lambda0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "lambda0")]
    lambda1: Option<f64>,
    /// Matrix size; defaults to the length of an explicit sequence.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct InvertArgs {
    /// JSON file `{"n": N, "diag": [...], "offdiag": [...]}`.
    #[arg(long)]
    jacobi: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long)]
    degree: usize,
    /// `a:b:steps`, `steps` equally spaced points including both ends.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// Density samples per segment, at cell midpoints.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChebFormArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Largest index n.
    #[arg(long)]
    degree: usize,
    /// Emit the OLPUC coefficient table `n,j,c_j` instead.
    #[arg(long)]
    olpuc: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<String> {
    Ok(to_json_string(value)? + "\n")
}

#[derive(Serialize)]
struct TransformOut {
    n: usize,
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    lambda0: f64,
    lambda1: f64,
}

fn cmd_transform(a: &TransformArgs) -> anyhow::Result<()> {
    let (l0, l1) = match (a.lambda, a.lambda0, a.lambda1) {
        (Some(l), _, _) => (1.0, l),
        (None, Some(l0), Some(l1)) => (l0, l1),
        _ => bail!("give --lambda or both --lambda0 and --lambda1"),
    };
    if l0 == 0.0 || l1 == 0.0 {
        return Err(Error::ZeroLambda.into());
    }
    let seq = a.source.sequence(a.size.unwrap_or(0))?;
    let n = a.size.unwrap_or(seq.len());
    let j = dvz::forward(&seq, l0, l1, n)?;
    emit(
        a.output.as_deref(),
        &json_line(&TransformOut {
            n,
            diag: j.diag,
            offdiag: j.offdiag,
            lambda0: l0,
            lambda1: l1,
        })?,
    )
}

fn cmd_invert(a: &InvertArgs) -> anyhow::Result<()> {
    let dump: TridiagonalDump = serde_json::from_str(&read(&a.jacobi)?)
        .with_context(|| format!("parsing {}", a.jacobi.display()))?;
    let j = Tridiagonal::try_from(dump)?;
    let value = match dvz::invert(&j, a.tol) {
        Ok(p) => json!({
            "lambda0": p.lambda0(),
            "lambda1": p.lambda1(),
            "alphas": p.alphas().values(),
        }),
        Err(Error::NotDvz { reason, residual }) => json!({
            "not_dvz": reason,
            "residual": residual,
        }),
        Err(e @ Error::DegenerateInput(_)) => json!({
            "not_dvz": e.to_string(),
            "underdetermined": true,
        }),
        Err(e) => return Err(e.into()),
    };
    emit(a.output.as_deref(), &json_line(&value)?)
}

/// Parses `a:b:steps`.
fn parse_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, steps] = parts[..] else {
        bail!("grid {s:?} is not of the form a:b:steps");
    };
    let a: f64 = a.trim().parse().with_context(|| format!("grid start {a:?}"))?;
    let b: f64 = b.trim().parse().with_context(|| format!("grid end {b:?}"))?;
    let steps: usize = steps.trim().parse().with_context(|| format!("grid steps {steps:?}"))?;
    if steps == 0 || !a.is_finite() || !b.is_finite() {
        bail!("grid {s:?} needs finite ends and at least one point");
    }
    if steps == 1 {
        return Ok(vec![a]);
    }
    let h = (b - a) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { b } else { a + h * i as f64 })
        .collect())
}

fn cmd_eval(a: &EvalArgs) -> anyhow::Result<()> {
    if a.lambda == 0.0 {
        return Err(Error::ZeroLambda.into());
    }
    let grid = parse_grid(&a.grid)?;
    let seq = a.source.sequence(a.degree)?;
    let forms = (0..=a.degree)
        .map(|n| cheb_form(&seq, n))
        .collect::<cmvdvz::Result<Vec<_>>>()?;
    let mut out = String::from("x");
    for n in 0..=a.degree {
        write!(out, ",q_{n}")?;
    }
    out.push('\n');
    for x in grid {
        out.push_str(&sig17(x));
        for f in &forms {
            write!(out, ",{}", sig17(f.eval(a.lambda, x)?))?;
        }
        out.push('\n');
    }
    emit(a.output.as_deref(), &out)
}

#[derive(Serialize)]
struct SegmentOut {
    a: f64,
    b: f64,
    exponents: [f64; 2],
    mass: f64,
}

#[derive(Serialize)]
struct SampleOut {
    segment: usize,
    x: f64,
    density: f64,
}

fn cmd_measure(a: &MeasureArgs) -> anyhow::Result<()> {
    if a.samples == 0 {
        bail!("--samples must be positive");
    }
    let family = a.source.family()?;
    let spec = QuadratureSpec::from_env()?;
    let nu = dvz_pushforward(&family.measure(), a.lambda)?;
    let mut samples = Vec::new();
    let mut segments = Vec::new();
    for (i, seg) in nu.segments().iter().enumerate() {
        for k in 0..a.samples {
            let x = seg.a + (seg.b - seg.a) * (k as f64 + 0.5) / a.samples as f64;
            samples.push(SampleOut {
                segment: i,
                x,
                density: (seg.density)(x),
            });
        }
        let only = cmvdvz::LineMeasure::new(vec![seg.clone()], vec![])?;
        segments.push(SegmentOut {
            a: seg.a,
            b: seg.b,
            exponents: [seg.exponents.0, seg.exponents.1],
            mass: integrate_line(&only, |_| 1.0, &spec)?,
        });
    }
    let text = match a.format {
        Format::Csv => {
            let mut out = String::from("segment,x,density\n");
            for s in &samples {
                writeln!(out, "{},{},{}", s.segment, sig17(s.x), sig17(s.density))?;
            }
            out.push_str("\natom_x,atom_mass\n");
            for &(x, m) in nu.atoms() {
                writeln!(out, "{},{}", sig17(x), sig17(m))?;
            }
            out
        }
        Format::Json => {
            let atoms: Vec<_> = nu.atoms().iter().map(|&(x, m)| json!({"x": x, "mass": m})).collect();
            json_line(&json!({
                "family": family.name(),
                "param": family.param(),
                "lambda": a.lambda,
                "quadrature_nodes": spec.nodes_per_segment(),
                "segments": segments,
                "atoms": atoms,
                "total_mass": nu.total_mass(&spec)?,
                "samples": samples,
            }))?
        }
    };
    emit(a.output.as_deref(), &text)
}

fn cmd_cheb_form(a: &ChebFormArgs) -> anyhow::Result<()> {
    let seq = a.source.sequence(a.degree)?;
    let text = if a.olpuc {
        coefficient_table_csv(&seq, a.degree)?
    } else {
        let forms = (0..=a.degree)
            .map(|n| {
                cheb_form(&seq, n).map(|f| json!({"n": n, "q": f.q.coeffs(), "qt": f.qt.coeffs()}))
            })
            .collect::<cmvdvz::Result<Vec<_>>>()?;
        json_line(&json!({ "forms": forms }))?
    };
    emit(a.output.as_deref(), &text)
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match &cli.command {
        Command::Transform(a) => cmd_transform(a)?,
        Command::Invert(a) => cmd_invert(a)?,
        Command::Eval(a) => cmd_eval(a)?,
        Command::Measure(a) => cmd_measure(a)?,
        Command::ChebForm(a) => cmd_cheb_form(a)?,
        Command::Verify(a) => {
            let report = verify::run(a)?;
            emit(a.output.as_deref(), &json_line(&report)?)?;
            eprint!("{}", report.table());
            if !report.pass {
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
