//! Model parameters and the coordinate types shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the mean-field Ising model.
///
/// Only the product `J·z` enters the mean-field formulas; the site count `n`
/// is used by the finite-N oracle and for converting per-site quantities to
/// extensive ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    j: f64,
    z: u32,
    k: f64,
    n: u64,
}

impl ModelParams {
    pub fn new(j: f64, z: u32, k: f64, n: u64) -> Result<Self> {
        if !(j.is_finite() && j > 0.0) {
            return Err(Error::InvalidParameter {
                name: "J",
                value: j,
                reason: "coupling must be positive and finite",
            });
        }
        if z < 1 {
            return Err(Error::InvalidParameter {
                name: "z",
                value: z as f64,
                reason: "coordination number must be at least 1",
            });
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter {
                name: "k",
                value: k,
                reason: "Boltzmann constant must be positive and finite",
            });
        }
        if n < 1 {
            return Err(Error::InvalidParameter {
                name: "N",
                value: n as f64,
                reason: "site count must be at least 1",
            });
        }
        Ok(Self { j, z, k, n })
    }

    /// Parameters with a given `J·z` product (`z = 1`), Boltzmann constant and site count.
    pub fn with_jz(jz: f64, k: f64, n: u64) -> Result<Self> {
        Self::new(jz, 1, k, n)
    }

    /// Returns a copy with a different site count.
    pub fn with_sites(self, n: u64) -> Result<Self> {
        Self::new(self.j, self.z, self.k, n)
    }

    pub fn j(&self) -> f64 {
        self.j
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The coupling product `J·z`, the energy scale of every mean-field formula.
    pub fn jz(&self) -> f64 {
        self.j * self.z as f64
    }

    /// Critical temperature `T_c = Jz/k`.
    pub fn critical_temperature(&self) -> f64 {
        self.jz() / self.k
    }
}

impl Default for ModelParams {
    /// `k = J = z = 1`, `N = 12`.
    fn default() -> Self {
        Self {
            j: 1.0,
            z: 1,
            k: 1.0,
            n: 12,
        }
    }
}

/// Magnetization per site, `-1 < m < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct OrderParameter(f64);

impl OrderParameter {
    pub fn new(m: f64) -> Result<Self> {
        if !(m.abs() < 1.0) {
            return Err(Error::domain(
                "m",
                m,
                "order parameter must satisfy |m| < 1",
            ));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for OrderParameter {
    type Error = Error;

    fn try_from(m: f64) -> Result<Self> {
        Self::new(m)
    }
}

/// Conjugate momenta `(β, ξ)` of the entropy with respect to `(U, M)`, divided by `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugateCoords {
    pub beta: f64,
    pub xi: f64,
}

/// Temperature and magnetic field, the physical face of [`ConjugateCoords`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCoords {
    pub t: f64,
    pub h: f64,
}

impl ConjugateCoords {
    /// Checked constructor; `beta` must be positive and finite.
    pub fn new(beta: f64, xi: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(
                "beta",
                beta,
                "inverse temperature must be positive",
            ));
        }
        if !xi.is_finite() {
            return Err(Error::domain("xi", xi, "field parameter must be finite"));
        }
        Ok(Self { beta, xi })
    }

    /// `T = 1/(kβ)` and `h = ξ/β` (from `ξ = βh`).
    pub fn to_field_coords(&self, p: &ModelParams) -> Result<FieldCoords> {
        if !(self.beta > 0.0) {
            return Err(Error::domain(
                "beta",
                self.beta,
                "inverse temperature must be positive",
            ));
        }
        Ok(FieldCoords {
            t: 1.0 / (p.k() * self.beta),
            h: self.xi / self.beta,
        })
    }

    pub fn from_field_coords(f: FieldCoords, p: &ModelParams) -> Result<Self> {
        if !(f.t > 0.0) {
            return Err(Error::domain("T", f.t, "temperature must be positive"));
        }
        let beta = 1.0 / (p.k() * f.t);
        Self::new(beta, beta * f.h)
    }
}
