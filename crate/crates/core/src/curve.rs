//! The parametric solution curve `m ↦ (β, ξ, U, S)`.
//!
//! Every point of the curve satisfies the self-consistent equation
//! `m = tanh(β·Jz·m − ξ)` by construction, so the curve is sampled in `m`
//! directly and never obtained by inverting `β(m)` or `ξ(m)`.
//!
//! Near `m = 0` the closed forms cancel catastrophically, so both `β(m)` and
//! `ξ(m)` switch to their Taylor series below a threshold.

use serde::{Deserialize, Serialize};

use crate::criticality;
use crate::error::{Error, Result};
use crate::numeric::{grid, Spacing};
use crate::params::{ConjugateCoords, ModelParams};

/// Below this `|m|`, [`beta_of_m`] uses its series.
pub const BETA_SERIES_SWITCH: f64 = 1e-3;

/// Below this `|m|`, [`xi_of_m`] uses its series. The closed form for `ξ`
/// subtracts two `O(m)` terms to get an `O(m³)` result, so it needs a wider
/// series region than `β` to keep full relative precision.
pub const XI_SERIES_SWITCH: f64 = 0.1;

fn check_open_unit(m: f64) -> Result<()> {
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

/// Inverse temperature along the curve, `β(m) = −log(1−m²)/(Jz·m²)`.
///
/// Even in `m`, equal to `1/Jz` at `m = 0` and divergent as `|m| → 1`.
pub fn beta_of_m(m: f64, p: &ModelParams) -> Result<f64> {
    check_open_unit(m)?;
    let m2 = m * m;
    let reduced = if m.abs() < BETA_SERIES_SWITCH {
        1.0 + m2 * (1.0 / 2.0 + m2 * (1.0 / 3.0 + m2 * (1.0 / 4.0 + m2 / 5.0)))
    } else {
        -(-m2).ln_1p() / m2
    };
    Ok(reduced / p.jz())
}

/// Field parameter along the curve, `ξ(m) = −atanh(m) − log(1−m²)/m`.
///
/// Odd in `m` with the sign of `m`; `ξ = m³/6 + 2m⁵/15 + …` near zero.
/// Independent of the model parameters; `p` is accepted for symmetry with
/// the other curve functions.
pub fn xi_of_m(m: f64, _p: &ModelParams) -> Result<f64> {
    check_open_unit(m)?;
    let a = m.abs();
    let value = if a < XI_SERIES_SWITCH {
        xi_series(a)
    } else {
        -a.atanh() - (-a * a).ln_1p() / a
    };
    Ok(value.copysign(m))
}

/// `Σ_{n≥1} n/((n+1)(2n+1)) m^{2n+1}`, the difference of the `−log(1−m²)/m`
/// and `atanh m` series.
fn xi_series(m: f64) -> f64 {
    let m2 = m * m;
    let mut power = m * m2;
    let mut sum = 0.0;
    for n in 1..=60u32 {
        let nf = n as f64;
        let term = power * nf / ((nf + 1.0) * (2.0 * nf + 1.0));
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
        power *= m2;
    }
    sum
}

/// Energy per site along the curve, `u = −Jz·m²/2`.
pub fn u_of_m(m: f64, p: &ModelParams) -> f64 {
    // `+ 0.0` turns −0 into +0 at m = 0.
    -0.5 * p.jz() * m * m + 0.0
}

/// Entropy per site along the curve, `s = −k·m·atanh(m) − (k/2)·log(1−m²)`.
///
/// Carries no `k·log 2` constant; see [`crate::oracle::check_entropy_offset`].
pub fn s_of_m(m: f64, p: &ModelParams) -> Result<f64> {
    check_open_unit(m)?;
    let a = m.abs();
    Ok(-p.k() * (a * a.atanh() + 0.5 * (-a * a).ln_1p()) + 0.0)
}

/// Momenta `(β(m), ξ(m))` of the curve point at `m`.
pub fn coords_of_m(m: f64, p: &ModelParams) -> Result<ConjugateCoords> {
    Ok(ConjugateCoords {
        beta: beta_of_m(m, p)?,
        xi: xi_of_m(m, p)?,
    })
}

/// One point of the solution curve with every derived quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub m: f64,
    pub beta: f64,
    pub xi: f64,
    /// Temperature `1/(kβ)`.
    pub t: f64,
    /// Magnetic field `ξ/β`.
    pub h: f64,
    /// Energy per site.
    pub u: f64,
    /// Entropy per site.
    pub s: f64,
    /// Susceptibility; `None` at `m = 0` where it diverges.
    pub chi: Option<f64>,
    /// Specific heat per site; the ordered-side limit `k` at `m = 0`.
    pub c: f64,
}

impl CurveSample {
    /// Evaluates the curve at `m`, including the `m = 0` limit.
    pub fn at(m: f64, p: &ModelParams) -> Result<Self> {
        let coords = coords_of_m(m, p)?;
        let field = coords.to_field_coords(p)?;
        let (chi, c) = if m == 0.0 {
            (None, p.k())
        } else {
            (
                Some(criticality::susceptibility(m, p)?),
                criticality::specific_heat(m, p)?,
            )
        };
        Ok(Self {
            m,
            beta: coords.beta,
            xi: coords.xi,
            t: field.t,
            h: field.h,
            u: u_of_m(m, p),
            s: s_of_m(m, p)?,
            chi,
            c,
        })
    }

    /// `β·Jz·m − ξ − atanh(m)`, zero along the curve.
    pub fn identity_residual(&self, p: &ModelParams) -> f64 {
        self.beta * p.jz() * self.m - self.xi - self.m.atanh()
    }
}

/// Samples the curve on `[m_min, m_max]`.
pub fn sample_curve(
    m_min: f64,
    m_max: f64,
    n_samples: usize,
    spacing: Spacing,
    p: &ModelParams,
) -> Result<Vec<CurveSample>> {
    if !(m_min > -1.0 && m_max < 1.0) {
        return Err(Error::InvalidRange(format!(
            "curve range [{m_min}, {m_max}] must lie inside (-1, 1)"
        )));
    }
    grid(m_min, m_max, n_samples, spacing)?
        .into_iter()
        .map(|m| CurveSample::at(m, p))
        .collect()
}
