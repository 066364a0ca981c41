//! The ideal gas as a Hamilton-Jacobi problem.
//!
//! The virial relation `U = (3/2)pV` becomes `U·∂S/∂U − (3V/2)·∂S/∂V = 0`,
//! solved by `S = (3/2)r·log U + r·log V + S₀`. Both the caloric equation
//! `U = (3/2)rT` and the state equation `pV = rT` then follow from the
//! gradient alone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasState {
    pub u: f64,
    pub v: f64,
    /// Entropy scale (absorbs `N·k`).
    pub r: f64,
    pub s0: f64,
}

impl GasState {
    pub fn new(u: f64, v: f64, r: f64, s0: f64) -> Result<Self> {
        let g = Self { u, v, r, s0 };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if !(self.u > 0.0 && self.u.is_finite()) {
            return Err(Error::domain(
                "U",
                self.u,
                "internal energy must be positive",
            ));
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(Error::domain("V", self.v, "volume must be positive"));
        }
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::domain("r", self.r, "entropy scale must be positive"));
        }
        Ok(())
    }
}

/// `(p_U, p_V) = (∂S/∂U, ∂S/∂V)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasMomenta {
    pub p_u: f64,
    pub p_v: f64,
}

pub fn gas_entropy(g: &GasState) -> Result<f64> {
    g.validate()?;
    Ok(1.5 * g.r * g.u.ln() + g.r * g.v.ln() + g.s0)
}

pub fn gas_momenta(g: &GasState) -> Result<GasMomenta> {
    g.validate()?;
    Ok(GasMomenta {
        p_u: 1.5 * g.r / g.u,
        p_v: g.r / g.v,
    })
}

/// Virial function `G = p_U·U − (3/2)·p_V·V`.
pub fn virial(g: &GasState, q: GasMomenta) -> f64 {
    q.p_u * g.u - 1.5 * q.p_v * g.v
}

/// `U·∂S/∂U − (3V/2)·∂S/∂V` for the analytic gradient.
pub fn gas_hj_residual(g: &GasState) -> Result<f64> {
    Ok(virial(g, gas_momenta(g)?))
}

/// Temperature and pressure read off the gradient: `1/T = p_U`, `p/T = p_V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquationOfState {
    pub t: f64,
    pub p: f64,
}

impl EquationOfState {
    /// `U − (3/2)rT`, zero for the ideal gas.
    pub fn caloric_residual(&self, g: &GasState) -> f64 {
        g.u - 1.5 * g.r * self.t
    }

    /// `pV − rT`, zero for the ideal gas.
    pub fn state_residual(&self, g: &GasState) -> f64 {
        self.p * g.v - g.r * self.t
    }
}

pub fn gas_recover_eos(g: &GasState) -> Result<EquationOfState> {
    let q = gas_momenta(g)?;
    let t = 1.0 / q.p_u;
    Ok(EquationOfState { t, p: q.p_v * t })
}
