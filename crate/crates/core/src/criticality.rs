//! Response functions and critical exponents along the solution curve.
//!
//! The curve approaches the critical point `(β, ξ) = (1/Jz, 0)` as `m → 0`,
//! and that approach is the path along which the exponents are measured:
//! each exponent is the slope of a log-log fit over a window of small `m`.

use serde::{Deserialize, Serialize};

use crate::curve::{beta_of_m, xi_of_m, BETA_SERIES_SWITCH, XI_SERIES_SWITCH};
use crate::error::{Error, Result};
use crate::numeric::{central_difference, fit_line, grid, LineFit, Spacing};
use crate::params::ModelParams;

/// Below this `|m|`, [`susceptibility`] evaluates its denominator by series.
pub const CHI_SERIES_SWITCH: f64 = 1e-2;
/// Fewest points accepted in a fit window.
pub const MIN_WINDOW_POINTS: usize = 5;

pub const DELTA_TOL: f64 = 0.01;
pub const BETA_EXP_TOL: f64 = 0.005;
pub const GAMMA_TOL: f64 = 0.02;
/// Bound on `|C/k − 1|` for declaring `α = 0`.
pub const ALPHA_TOL: f64 = 1e-3;

fn require_nonzero(m: f64) -> Result<()> {
    if m == 0.0 {
        Err(Error::domain(
            "m",
            m,
            "diverges at the critical point m = 0",
        ))
    } else if !(m.abs() < 1.0) {
        Err(Error::domain(
            "m",
            m,
            "order parameter must satisfy |m| < 1",
        ))
    } else {
        Ok(())
    }
}

/// Reduced temperature `t = (T − T_c)/T_c = 1/(Jz·β) − 1`; negative on the ordered side.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ReducedTemperature(pub f64);

impl ReducedTemperature {
    pub fn from_beta(beta: f64, p: &ModelParams) -> Self {
        Self(1.0 / (p.jz() * beta) - 1.0)
    }

    pub fn along_curve(m: f64, p: &ModelParams) -> Result<Self> {
        Ok(Self::from_beta(beta_of_m(m, p)?, p))
    }
}

/// `χ = β·m²(1−m²) / (m² + (1−m²)·log(1−m²))` along the curve.
///
/// The denominator is `Σ_{n≥2} m^{2n}/(n(n−1)) = m⁴/2 + m⁶/6 + m⁸/12 + …`,
/// which the closed form only reaches through cancellation; below
/// [`CHI_SERIES_SWITCH`] the series is used instead.
pub fn susceptibility(m: f64, p: &ModelParams) -> Result<f64> {
    require_nonzero(m)?;
    let beta = beta_of_m(m, p)?;
    let m2 = m * m;
    if m.abs() < CHI_SERIES_SWITCH {
        // χ = β(1−m²) / Σ_{n≥2} m^{2n−2}/(n(n−1))
        let mut power = m2;
        let mut denom = 0.0;
        for n in 2..=12u32 {
            let nf = n as f64;
            denom += power / (nf * (nf - 1.0));
            power *= m2;
        }
        Ok(beta * (1.0 - m2) / denom)
    } else {
        Ok(beta * m2 * (1.0 - m2) / (m2 + (1.0 - m2) * (-m2).ln_1p()))
    }
}

fn temperature_of_m(m: f64, p: &ModelParams) -> f64 {
    1.0 / (p.k() * beta_of_m(m, p).unwrap_or(f64::NAN))
}

/// Specific heat per site `C = (du/dm)/(dT/dm)` along the curve.
///
/// `du/dm = −Jz·m` is exact; `dT/dm` is a central difference with step
/// `1e−6·|m|`. Tends to `k` as `m → 0`.
pub fn specific_heat(m: f64, p: &ModelParams) -> Result<f64> {
    require_nonzero(m)?;
    let step = 1e-6 * m.abs();
    if !((m.abs() + step) < 1.0) {
        return Err(Error::domain(
            "m",
            m,
            "too close to saturation for a central difference",
        ));
    }
    let dt_dm = central_difference(|x| temperature_of_m(x, p), m, step);
    Ok(-p.jz() * m / dt_dm)
}

/// Euclidean norm of `(dβ/dm, dξ/dm)`, the Jacobian of `m ↦ (β, ξ)`.
///
/// Vanishes linearly (`≈ |m|/Jz`) at the cusp.
pub fn jacobian_norm(m: f64, p: &ModelParams) -> Result<f64> {
    require_nonzero(m)?;
    let step = 1e-6 * m.abs().max(1e-3);
    if !((m.abs() + step) < 1.0) {
        return Err(Error::domain(
            "m",
            m,
            "too close to saturation for a central difference",
        ));
    }
    let db = central_difference(|x| beta_of_m(x, p).unwrap_or(f64::NAN), m, step);
    let dx = central_difference(|x| xi_of_m(x, p).unwrap_or(f64::NAN), m, step);
    Ok(db.hypot(dx))
}

/// Log-spaced window in `m` over which exponents are fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    pub m_min: f64,
    pub m_max: f64,
    pub points: usize,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self {
            m_min: 1e-3,
            m_max: 1e-2,
            points: 20,
        }
    }
}

impl FitWindow {
    /// Positive sample points; rejects narrow windows and windows straddling
    /// a series/closed-form seam.
    pub fn samples(&self) -> Result<Vec<f64>> {
        if self.points < MIN_WINDOW_POINTS {
            return Err(Error::InvalidRange(format!(
                "fit window needs at least {MIN_WINDOW_POINTS} points, got {}",
                self.points
            )));
        }
        if !(self.m_min > 0.0 && self.m_min < self.m_max && self.m_max < 1.0) {
            return Err(Error::InvalidRange(format!(
                "fit window [{}, {}] must satisfy 0 < m_min < m_max < 1",
                self.m_min, self.m_max
            )));
        }
        for seam in [BETA_SERIES_SWITCH, XI_SERIES_SWITCH, CHI_SERIES_SWITCH] {
            if self.m_min < seam && seam < self.m_max {
                return Err(Error::InvalidRange(format!(
                    "fit window [{}, {}] straddles the series switch at m = {seam}",
                    self.m_min, self.m_max
                )));
            }
        }
        grid(self.m_min, self.m_max, self.points, Spacing::Log)
    }
}

/// One fitted exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    /// Fitted value, sign-adjusted to the usual convention.
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub window: FitWindow,
    /// RMS residual of the log-log line.
    pub residual: f64,
}

impl ExponentFit {
    pub fn within_tolerance(&self) -> bool {
        (self.value - self.target).abs() <= self.tolerance
    }
}

/// The `α = 0` check: `C/k` stays at one across the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaCheck {
    /// `max |C/k − 1|` over the window.
    pub max_deviation: f64,
    /// Slope of `log C` against `log|t|`, i.e. `−α`.
    pub log_slope: f64,
    pub window: FitWindow,
    pub is_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    /// From `ξ ∝ m^δ`.
    pub delta: ExponentFit,
    /// From `m ∝ |t|^β`.
    pub beta: ExponentFit,
    /// From `|χ| ∝ |t|^{−γ}`.
    pub gamma: ExponentFit,
    pub alpha: AlphaCheck,
    /// Sign of `χ` observed across the window (`+1`, `−1`, or `0` if mixed).
    pub chi_sign: i8,
}

impl ExponentReport {
    pub fn all_within_tolerance(&self) -> bool {
        self.delta.within_tolerance()
            && self.beta.within_tolerance()
            && self.gamma.within_tolerance()
            && self.alpha.is_zero
    }
}

/// Fits `δ`, `β`, `γ` and checks `α` over the given window.
pub fn fit_exponents(p: &ModelParams, window: FitWindow) -> Result<ExponentReport> {
    let ms = window.samples()?;
    let mut log_m = Vec::with_capacity(ms.len());
    let mut log_xi = Vec::with_capacity(ms.len());
    let mut log_t = Vec::with_capacity(ms.len());
    let mut log_chi = Vec::with_capacity(ms.len());
    let mut log_c = Vec::with_capacity(ms.len());
    let mut max_dev: f64 = 0.0;
    let (mut pos, mut neg) = (false, false);
    for &m in &ms {
        let t = ReducedTemperature::along_curve(m, p)?.0;
        let chi = susceptibility(m, p)?;
        let c = specific_heat(m, p)?;
        log_m.push(m.ln());
        log_xi.push(xi_of_m(m, p)?.ln());
        log_t.push(t.abs().ln());
        log_chi.push(chi.abs().ln());
        log_c.push(c.ln());
        max_dev = max_dev.max((c / p.k() - 1.0).abs());
        pos |= chi > 0.0;
        neg |= chi < 0.0;
    }

    let delta_line = fit_line(&log_m, &log_xi)?;
    let beta_line = fit_line(&log_t, &log_m)?;
    let gamma_line = fit_line(&log_t, &log_chi)?;
    let alpha_line = fit_line(&log_t, &log_c)?;

    let entry = |value: f64, target: f64, tolerance: f64, line: LineFit| ExponentFit {
        value,
        target,
        tolerance,
        window,
        residual: line.rms_residual,
    };
    Ok(ExponentReport {
        delta: entry(delta_line.slope, 3.0, DELTA_TOL, delta_line),
        beta: entry(beta_line.slope, 0.5, BETA_EXP_TOL, beta_line),
        gamma: entry(-gamma_line.slope, 1.0, GAMMA_TOL, gamma_line),
        alpha: AlphaCheck {
            max_deviation: max_dev,
            log_slope: alpha_line.slope,
            window,
            is_zero: max_dev < ALPHA_TOL,
        },
        chi_sign: match (pos, neg) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        },
    })
}
