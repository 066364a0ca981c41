//! `ising-hj`: plot data and self-checks for the mean-field Ising entropy.
//!
//! Exit codes: 0 success, 1 domain error or failed check, 2 usage error.

mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ising_hj::criticality::{fit_exponents, FitWindow};
use ising_hj::curve::{sample_curve, CurveSample};
use ising_hj::ideal_gas::{gas_entropy, gas_hj_residual, gas_recover_eos, GasState};
use ising_hj::numeric::grid;
use ising_hj::selfconsistent::{solve, zero_field_branch, Stability};
use ising_hj::surface::{surface_grid, EntropyBranch, Range};
use ising_hj::verify::{self, VerifyConfig};
use ising_hj::{ConjugateCoords, ModelParams, Spacing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::table::{Cell, Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "ising-hj",
    version,
    about = "Mean-field Ising entropy as a Hamilton-Jacobi solution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Coupling product J·z.
    #[arg(long, default_value_t = 1.0)]
    jz: f64,
    /// Boltzmann constant.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Site count (finite oracle and extensive quantities).
    #[arg(long, default_value_t = 12)]
    n: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for randomized verification grids.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl Common {
    fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::with_jz(self.jz, self.k, self.n).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Log => Spacing::Log,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solution curve rows (m, beta, xi, T, h, u, s, chi, c) for both signs of m.
    Curve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -0.95, allow_negative_numbers = true)]
        m_min: f64,
        #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
        m_max: f64,
        #[arg(long, default_value_t = 381)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
        spacing: SpacingArg,
    },
    /// Entropy S(U, M) on a grid, with forbidden cells masked.
    Surface {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        u_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        u_max: f64,
        /// Lower bound of the total magnetization M.
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        m_min: f64,
        #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
        m_max: f64,
        /// Grid points along each axis.
        #[arg(long, default_value_t = 81)]
        samples: usize,
        /// Coefficient of the homogeneous a·M²/U term.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a: f64,
    },
    /// All roots of m = tanh(beta·Jz·m − xi).
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi: f64,
    },
    /// Zero-field branch over a range of beta.
    ZeroField {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        beta_min: f64,
        #[arg(long, default_value_t = 2.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 151)]
        samples: usize,
    },
    /// Critical exponents fitted along the curve.
    Exponents {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-3)]
        m_min: f64,
        #[arg(long, default_value_t = 1e-2)]
        m_max: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Run every invariant check; exit 0 iff all pass.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Ideal-gas Hamilton-Jacobi residual report on random states.
    Idealgas {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ising_hj::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(
                ising_hj::Error::TooLarge { .. } | ising_hj::Error::InvalidRange(_),
            ) => 2,
            CliError::Model(_) | CliError::Io(_) | CliError::CheckFailed(_) => 1,
        }
    }
}

fn open_output(common: &Common) -> Result<Box<dyn Write>, CliError> {
    Ok(match &common.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(common: &Common, table: &Table) -> Result<(), CliError> {
    let mut out = open_output(common)?;
    table.write(common.format, &mut out)?;
    out.flush()?;
    Ok(())
}

fn curve_row(s: &CurveSample) -> Vec<Cell> {
    vec![
        s.m.into(),
        s.beta.into(),
        s.xi.into(),
        s.t.into(),
        s.h.into(),
        s.u.into(),
        s.s.into(),
        s.chi.map_or_else(|| "divergent".into(), Cell::Num),
        s.c.into(),
    ]
}

/// Samples the requested range; a range with `m_min ≥ 0` is mirrored so that
/// both signs of `m` are always present.
fn cmd_curve(
    common: &Common,
    m_min: f64,
    m_max: f64,
    samples: usize,
    spacing: Spacing,
) -> Result<(), CliError> {
    let p = common.params()?;
    if !(m_min > -1.0 && m_min < m_max && m_max < 1.0) || samples < 2 {
        return Err(CliError::Usage(format!(
            "need -1 < m-min < m-max < 1 and samples >= 2, got [{m_min}, {m_max}] with {samples}"
        )));
    }
    let mut rows = sample_curve(m_min, m_max, samples, spacing, &p)?;
    if m_min >= 0.0 {
        let mirrored: Vec<CurveSample> = rows
            .iter()
            .rev()
            .filter(|s| s.m > 0.0)
            .map(|s| CurveSample::at(-s.m, &p))
            .collect::<Result<_, _>>()?;
        rows = mirrored.into_iter().chain(rows).collect();
    }
    let mut table = Table::new(&["m", "beta", "xi", "T", "h", "u", "s", "chi", "c"]);
    for s in &rows {
        table.push(curve_row(s));
    }
    emit(common, &table)
}

#[allow(clippy::too_many_arguments)]
fn cmd_surface(
    common: &Common,
    u_min: f64,
    u_max: f64,
    m_min: f64,
    m_max: f64,
    samples: usize,
    a: f64,
) -> Result<(), CliError> {
    let p = common.params()?;
    if !(u_min < u_max && m_min < m_max) || samples < 2 {
        return Err(CliError::Usage(
            "surface ranges must be increasing with samples >= 2".into(),
        ));
    }
    let cells = surface_grid(
        Range {
            lo: u_min,
            hi: u_max,
        },
        Range {
            lo: m_min,
            hi: m_max,
        },
        samples,
        samples,
        &p,
        &EntropyBranch::new(a),
    )?;
    let mut table = Table::new(&["U", "M", "S", "valid"]);
    for c in &cells {
        table.push(vec![
            c.u.into(),
            c.m.into(),
            c.entropy.into(),
            c.is_valid().into(),
        ]);
    }
    emit(common, &table)
}

fn cmd_solve(common: &Common, beta: f64, xi: f64) -> Result<(), CliError> {
    let p = common.params()?;
    let coords = ConjugateCoords::new(beta, xi)?;
    let set = solve(coords, &p)?;
    let mut table = Table::new(&["m", "stability", "massieu_per_site", "selected"]);
    for (i, r) in set.roots.iter().enumerate() {
        let stability = match r.stability {
            Stability::Stable => "stable",
            Stability::Unstable => "unstable",
        };
        table.push(vec![
            r.m.into(),
            stability.into(),
            r.massieu_per_site.into(),
            (i == set.selected).into(),
        ]);
    }
    emit(common, &table)
}

fn cmd_zero_field(
    common: &Common,
    beta_min: f64,
    beta_max: f64,
    samples: usize,
) -> Result<(), CliError> {
    let p = common.params()?;
    if !(beta_min > 0.0 && beta_min < beta_max) || samples < 2 {
        return Err(CliError::Usage(
            "need 0 < beta-min < beta-max and samples >= 2".into(),
        ));
    }
    let betas = grid(beta_min, beta_max, samples, Spacing::Linear)?;
    let points = zero_field_branch(&betas, &p)?;
    let mut table = Table::new(&["beta", "xi", "m", "s", "u", "lambda"]);
    for z in &points {
        table.push(vec![
            z.beta.into(),
            0.0.into(),
            z.m.into(),
            z.s.into(),
            ising_hj::curve::u_of_m(z.m, &p).into(),
            z.lambda.into(),
        ]);
    }
    emit(common, &table)
}

fn cmd_exponents(common: &Common, window: FitWindow) -> Result<(), CliError> {
    let p = common.params()?;
    if window.points < 2 || !(window.m_min < window.m_max) {
        return Err(CliError::Usage("exponent window must be increasing".into()));
    }
    let r = fit_exponents(&p, window)?;
    let mut table = Table::new(&[
        "exponent",
        "value",
        "target",
        "tolerance",
        "residual",
        "m_min",
        "m_max",
        "points",
        "pass",
    ]);
    let w = |t: &mut Table, name: &str, f: &ising_hj::criticality::ExponentFit| {
        t.push(vec![
            name.into(),
            f.value.into(),
            f.target.into(),
            f.tolerance.into(),
            f.residual.into(),
            f.window.m_min.into(),
            f.window.m_max.into(),
            Cell::Int(f.window.points as i64),
            f.within_tolerance().into(),
        ]);
    };
    w(&mut table, "delta", &r.delta);
    w(&mut table, "beta", &r.beta);
    w(&mut table, "gamma", &r.gamma);
    // For alpha the residual column carries max |C/k − 1|, which the tolerance bounds.
    table.push(vec![
        "alpha".into(),
        (-r.alpha.log_slope).into(),
        0.0.into(),
        ising_hj::criticality::ALPHA_TOL.into(),
        r.alpha.max_deviation.into(),
        r.alpha.window.m_min.into(),
        r.alpha.window.m_max.into(),
        Cell::Int(r.alpha.window.points as i64),
        r.alpha.is_zero.into(),
    ]);
    emit(common, &table)?;
    if r.all_within_tolerance() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(
            "an exponent is outside its tolerance".into(),
        ))
    }
}

fn cmd_verify(common: &Common) -> Result<(), CliError> {
    let p = common.params()?;
    let cfg = VerifyConfig {
        params: p,
        seed: common.seed,
        ..VerifyConfig::default()
    };
    let report = verify::run(&cfg)?;
    match common.format {
        Format::Csv => {
            let mut out = open_output(common)?;
            write!(out, "{report}")?;
            out.flush()?;
        }
        Format::Json => {
            let mut table = Table::new(&["check", "passed", "detail"]);
            for c in &report.checks {
                table.push(vec![
                    c.name.into(),
                    c.passed.into(),
                    c.detail.as_str().into(),
                ]);
            }
            emit(common, &table)?;
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(CliError::CheckFailed(format!(
            "failed checks: {}",
            names.join(", ")
        )))
    }
}

fn cmd_idealgas(common: &Common, samples: usize) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut table = Table::new(&[
        "U",
        "V",
        "r",
        "S",
        "hj_residual",
        "T",
        "p",
        "caloric_residual",
        "state_residual",
    ]);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let g = GasState::new(
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..5.0),
            0.0,
        )?;
        let residual = gas_hj_residual(&g)?;
        let eos = gas_recover_eos(&g)?;
        worst = worst.max(residual.abs());
        table.push(vec![
            g.u.into(),
            g.v.into(),
            g.r.into(),
            gas_entropy(&g)?.into(),
            residual.into(),
            eos.t.into(),
            eos.p.into(),
            eos.caloric_residual(&g).into(),
            eos.state_residual(&g).into(),
        ]);
    }
    emit(common, &table)?;
    if worst < 1e-13 {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!(
            "ideal-gas residual {worst:e} exceeds 1e-13"
        )))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Curve {
            common,
            m_min,
            m_max,
            samples,
            spacing,
        } => cmd_curve(&common, m_min, m_max, samples, spacing.into()),
        Command::Surface {
            common,
            u_min,
            u_max,
            m_min,
            m_max,
            samples,
            a,
        } => cmd_surface(&common, u_min, u_max, m_min, m_max, samples, a),
        Command::Solve { common, beta, xi } => cmd_solve(&common, beta, xi),
        Command::ZeroField {
            common,
            beta_min,
            beta_max,
            samples,
        } => cmd_zero_field(&common, beta_min, beta_max, samples),
        Command::Exponents {
            common,
            m_min,
            m_max,
            samples,
        } => cmd_exponents(
            &common,
            FitWindow {
                m_min,
                m_max,
                points: samples,
            },
        ),
        Command::Verify { common } => cmd_verify(&common),
        Command::Idealgas { common, samples } => cmd_idealgas(&common, samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
