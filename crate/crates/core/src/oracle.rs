//! Exact finite-N grand-canonical ensemble.
//!
//! The weight of a configuration `{S_i = ±1}` is
//!
//! ```text
//! exp[−β(N·Jz·m²/2 − Jz·m·ΣS_i) − ξ·ΣS_i]
//! ```
//!
//! with `m` an external parameter of the mean-field Hamiltonian. The grand
//! Massieu function `Ψ = k·log Ξ` is differentiated in `(β, ξ)` at fixed
//! `m`; only afterwards is `M = N·m` imposed. Swapping those two steps gives
//! different derivatives, so every routine here keeps `m` frozen.
//!
//! Two independent evaluations of `log Ξ` are provided: brute-force
//! enumeration of all `2^N` configurations, and a sum over total spin with
//! binomial multiplicities.

use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::curve::s_of_m;
use crate::error::{Error, Result};
use crate::numeric::{central_difference, log_2cosh, richardson_central, LogSumExp};
use crate::params::{ConjugateCoords, ModelParams};

/// Largest `N` for full enumeration (`2^20 ≈ 10^6` configurations).
pub const ENUM_MAX_SITES: u64 = 20;
/// Largest `N` for the binomial sum.
pub const BINOM_MAX_SITES: u64 = 1_000_000;
/// Default central-difference step in `β` and `ξ`.
pub const DEFAULT_STEP: f64 = 1e-6;
/// Relative tolerance for reproducing `M = Nm` and `U = −JzNm²/2`.
pub const SELF_CONSISTENCY_TOL: f64 = 1e-5;
/// Relative deviation above which a point is reported as off the curve.
pub const VIOLATION_THRESHOLD: f64 = 1e-3;

fn check_m(m: f64) -> Result<()> {
    if m.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "m",
            m,
            "order parameter must satisfy |m| < 1",
        ))
    }
}

/// Log-weight of a configuration with total spin `total`.
fn log_weight(total: f64, m: f64, c: &ConjugateCoords, p: &ModelParams) -> f64 {
    let n = p.n() as f64;
    let jz = p.jz();
    -c.beta * (0.5 * n * jz * m * m - jz * m * total) - c.xi * total
}

/// Pairwise reduction over configuration indices `[lo, hi)`; the fixed tree
/// shape makes the result independent of how the range is traversed.
fn enum_range(lo: u64, hi: u64, m: f64, c: &ConjugateCoords, p: &ModelParams) -> LogSumExp {
    const LEAF: u64 = 256;
    if hi - lo <= LEAF {
        let n = p.n() as i64;
        let mut acc = LogSumExp::new();
        for cfg in lo..hi {
            let up = cfg.count_ones() as i64;
            acc.push(log_weight((2 * up - n) as f64, m, c, p));
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        enum_range(lo, mid, m, c, p).merge(enum_range(mid, hi, m, c, p))
    }
}

/// `log Ξ` by summing over all `2^N` spin configurations.
pub fn log_partition_enum(m: f64, c: ConjugateCoords, p: &ModelParams) -> Result<f64> {
    check_m(m)?;
    if p.n() > ENUM_MAX_SITES {
        return Err(Error::TooLarge {
            n: p.n(),
            limit: ENUM_MAX_SITES,
            method: "enumeration",
        });
    }
    Ok(enum_range(0, 1u64 << p.n(), m, &c, p).value())
}

/// `log Ξ` by grouping configurations with `j` up-spins, `C(N, j)` each.
pub fn log_partition_binom(m: f64, c: ConjugateCoords, p: &ModelParams) -> Result<f64> {
    check_m(m)?;
    if p.n() > BINOM_MAX_SITES {
        return Err(Error::TooLarge {
            n: p.n(),
            limit: BINOM_MAX_SITES,
            method: "binomial sum",
        });
    }
    let n = p.n();
    let mut acc = LogSumExp::new();
    for j in 0..=n {
        let total = (2 * j) as f64 - n as f64;
        acc.push(ln_binomial(n, j) + log_weight(total, m, &c, p));
    }
    Ok(acc.value())
}

/// `log Ξ = −β·N·Jz·m²/2 + N·log(2cosh(β·Jz·m − ξ))`: the sites decouple
/// once `m` is fixed.
pub fn log_partition_factorized(m: f64, c: ConjugateCoords, p: &ModelParams) -> Result<f64> {
    check_m(m)?;
    let n = p.n() as f64;
    let jz = p.jz();
    Ok(-0.5 * c.beta * n * jz * m * m + n * log_2cosh(c.beta * jz * m - c.xi))
}

/// Exact `log Ξ`: enumeration where feasible, binomial sum otherwise.
pub fn log_partition(m: f64, c: ConjugateCoords, p: &ModelParams) -> Result<f64> {
    if p.n() <= ENUM_MAX_SITES {
        log_partition_enum(m, c, p)
    } else {
        log_partition_binom(m, c, p)
    }
}

/// Grand-canonical quantities at one `(m, β, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub log_xi: f64,
    /// `Ψ = k·log Ξ`.
    pub psi: f64,
    /// `−(1/k)·∂Ψ/∂ξ` by central difference.
    pub m_numeric: f64,
    /// `−(1/k)·∂Ψ/∂β` by central difference.
    pub u_numeric: f64,
    /// `Ψ + kβU + kξM` from the numeric `U` and `M`.
    pub s_entropy1: f64,
}

/// Evaluates `Ψ` and its numeric `(β, ξ)` derivatives at fixed `m`.
///
/// A derivative that strays more than `1e-6` (relative) from its analytic
/// value gets one Richardson step with `step` and `step/2`.
pub fn evaluate(m: f64, c: ConjugateCoords, p: &ModelParams, step: f64) -> Result<OracleResult> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "difference step must be positive, got {step}"
        )));
    }
    let log_xi = log_partition(m, c, p)?;
    let k = p.k();
    let n = p.n() as f64;
    let jz = p.jz();
    // Errors are impossible below: the size and m checks already passed.
    let psi_of = |beta: f64, xi: f64| {
        k * log_partition(m, ConjugateCoords { beta, xi }, p).unwrap_or(f64::NAN)
    };

    let theta = c.beta * jz * m - c.xi;
    let d_xi_exact = -k * n * theta.tanh();
    let d_beta_exact = k * (-0.5 * n * jz * m * m + n * jz * m * theta.tanh());

    let refine = |f: &dyn Fn(f64) -> f64, x: f64, exact: f64| {
        let plain = central_difference(f, x, step);
        if (plain - exact).abs() > 1e-6 * exact.abs().max(1.0) {
            richardson_central(f, x, step)
        } else {
            plain
        }
    };
    let d_xi = refine(&|xi| psi_of(c.beta, xi), c.xi, d_xi_exact);
    let d_beta = refine(&|beta| psi_of(beta, c.xi), c.beta, d_beta_exact);

    let psi = k * log_xi;
    let m_numeric = -d_xi / k;
    let u_numeric = -d_beta / k;
    Ok(OracleResult {
        log_xi,
        psi,
        m_numeric,
        u_numeric,
        s_entropy1: psi + k * c.beta * u_numeric + k * c.xi * m_numeric,
    })
}

/// How well the ensemble reproduces `M = Nm` and `U = −Jz·N·m²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfConsistencyReport {
    pub m_numeric: f64,
    pub m_expected: f64,
    pub u_numeric: f64,
    pub u_expected: f64,
    /// Relative deviation of `M`.
    pub m_residual: f64,
    /// Relative deviation of `U`.
    pub u_residual: f64,
}

impl SelfConsistencyReport {
    /// Both relations reproduced to [`SELF_CONSISTENCY_TOL`].
    pub fn passes(&self) -> bool {
        self.m_residual <= SELF_CONSISTENCY_TOL && self.u_residual <= SELF_CONSISTENCY_TOL
    }

    /// Some relation misses by more than [`VIOLATION_THRESHOLD`]: `(β, ξ)`
    /// is not a solution of the self-consistent equation at this `m`.
    pub fn violated(&self) -> bool {
        self.m_residual > VIOLATION_THRESHOLD || self.u_residual > VIOLATION_THRESHOLD
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn check_self_consistency(
    m: f64,
    c: ConjugateCoords,
    p: &ModelParams,
    step: f64,
) -> Result<SelfConsistencyReport> {
    let r = evaluate(m, c, p, step)?;
    let n = p.n() as f64;
    let m_expected = n * m;
    let u_expected = -0.5 * p.jz() * n * m * m;
    Ok(SelfConsistencyReport {
        m_numeric: r.m_numeric,
        m_expected,
        u_numeric: r.u_numeric,
        u_expected,
        m_residual: relative(r.m_numeric, m_expected),
        u_residual: relative(r.u_numeric, u_expected),
    })
}

/// `S_entropy1 − N·s(m)`: the constant separating the ensemble entropy from
/// the curve entropy. It comes out as `k·N·log 2` at every `m`.
pub fn check_entropy_offset(m: f64, c: ConjugateCoords, p: &ModelParams) -> Result<f64> {
    let r = evaluate(m, c, p, DEFAULT_STEP)?;
    Ok(r.s_entropy1 - p.n() as f64 * s_of_m(m, p)?)
}
