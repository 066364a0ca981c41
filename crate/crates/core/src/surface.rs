//! Entropy on the extensive state space `(U, M)`.
//!
//! The general solution of the Hamilton-Jacobi equation
//!
//! ```text
//! (2U/(kM))·∂S/∂U + (1/k)·∂S/∂M = atanh(2U/(JzM))
//! ```
//!
//! that is homogeneous of degree one in `(U, M)` is
//!
//! ```text
//! S = kM·atanh(x) + (kJzM²/(4U))·log(1 − x²) + a·M²/U,   x = 2U/(JzM).
//! ```
//!
//! The `a·M²/U` term solves the homogeneous equation and blows up at `U = 0`;
//! the physical branch is `a = 0`. Its gradient is `(kβ, kξ)`, and pulling it
//! back along `U = −Jz·M²/(2N)` recovers the solution curve of [`crate::curve`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::grid;
use crate::numeric::Spacing;
use crate::params::ModelParams;

/// Margin kept from `|x| = 1`, where `atanh` and the logarithm diverge.
pub const DOMAIN_MARGIN: f64 = 1e-12;

/// `atanh` evaluated on `|x|` so that parity in `M` holds bit for bit.
fn odd_atanh(x: f64) -> f64 {
    x.abs().atanh().copysign(x)
}

/// A point `(U, M)` of the thermodynamic state space (extensive values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub u: f64,
    pub m: f64,
}

impl ThermoState {
    pub fn new(u: f64, m: f64) -> Self {
        Self { u, m }
    }

    /// The state reached on the solution curve at order parameter `m_site`
    /// for `N` sites: `(N·u(m), N·m)`.
    pub fn on_curve(m_site: f64, p: &ModelParams) -> Self {
        let n = p.n() as f64;
        Self {
            u: n * crate::curve::u_of_m(m_site, p),
            m: n * m_site,
        }
    }

    /// `x = 2U/(Jz·M)`, after checking that `(U, M)` is an allowed combination.
    pub fn reduced_ratio(&self, p: &ModelParams) -> Result<f64> {
        if !self.u.is_finite() || self.u == 0.0 {
            return Err(Error::domain(
                "U",
                self.u,
                "energy must be finite and nonzero",
            ));
        }
        if !self.m.is_finite() || self.m == 0.0 {
            return Err(Error::domain(
                "M",
                self.m,
                "magnetization must be finite and nonzero",
            ));
        }
        let x = 2.0 * self.u / (p.jz() * self.m);
        if !(x.abs() <= 1.0 - DOMAIN_MARGIN) {
            return Err(Error::domain(
                "2U/(JzM)",
                x,
                "atanh argument must satisfy |x| < 1",
            ));
        }
        Ok(x)
    }

    /// Positive energy is outside the physical curve (`U = −JzM²/2N < 0`)
    /// but still inside the formula's domain.
    pub fn is_positive_energy(&self) -> bool {
        self.u > 0.0
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self {
            u: lambda * self.u,
            m: lambda * self.m,
        }
    }
}

/// Coefficient `a` of the homogeneous solution `a·M²/U`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EntropyBranch {
    pub a: f64,
}

impl EntropyBranch {
    pub const PHYSICAL: EntropyBranch = EntropyBranch { a: 0.0 };

    pub fn new(a: f64) -> Self {
        Self { a }
    }
}

/// `(∂S/∂U, ∂S/∂M)`, equal to `(kβ, kξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyGradient {
    pub d_u: f64,
    pub d_m: f64,
}

pub fn entropy(s: &ThermoState, p: &ModelParams, b: &EntropyBranch) -> Result<f64> {
    let x = s.reduced_ratio(p)?;
    let k = p.k();
    Ok(k * s.m * odd_atanh(x)
        + k * p.jz() * s.m * s.m / (4.0 * s.u) * (-x * x).ln_1p()
        + b.a * s.m * s.m / s.u)
}

/// Closed-form gradient of [`entropy`].
pub fn gradient(s: &ThermoState, p: &ModelParams, b: &EntropyBranch) -> Result<EntropyGradient> {
    let x = s.reduced_ratio(p)?;
    let k = p.k();
    let log_term = (-x * x).ln_1p();
    let d_u = -k * p.jz() * s.m * s.m / (4.0 * s.u * s.u) * log_term;
    let d_m = k * odd_atanh(x) + k * p.jz() * s.m / (2.0 * s.u) * log_term;
    Ok(EntropyGradient {
        d_u: d_u - b.a * s.m * s.m / (s.u * s.u),
        d_m: d_m + 2.0 * b.a * s.m / s.u,
    })
}

/// Left side minus right side of the Hamilton-Jacobi equation, evaluated
/// with the analytic gradient.
pub fn hj_residual(s: &ThermoState, p: &ModelParams, b: &EntropyBranch) -> Result<f64> {
    let g = gradient(s, p, b)?;
    hj_residual_with(s, p, g)
}

/// The same residual for an arbitrary gradient, so that candidate entropies
/// other than [`entropy`] can be tested against the equation.
pub fn hj_residual_with(s: &ThermoState, p: &ModelParams, g: EntropyGradient) -> Result<f64> {
    let x = s.reduced_ratio(p)?;
    let k = p.k();
    Ok(2.0 * s.u / (k * s.m) * g.d_u + g.d_m / k - odd_atanh(x))
}

/// One cell of an entropy grid; `entropy` is `None` where `(U, M)` is not allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub u: f64,
    pub m: f64,
    pub entropy: Option<f64>,
}

impl SurfaceCell {
    pub fn is_valid(&self) -> bool {
        self.entropy.is_some()
    }
}

/// Inclusive linear range used by [`surface_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

/// Evaluates [`entropy`] on a `nu × nm` grid, `U` varying slowest.
/// Cells outside the domain are kept and masked.
pub fn surface_grid(
    u_range: Range,
    m_range: Range,
    nu: usize,
    nm: usize,
    p: &ModelParams,
    b: &EntropyBranch,
) -> Result<Vec<SurfaceCell>> {
    let us = grid(u_range.lo, u_range.hi, nu, Spacing::Linear)?;
    let ms = grid(m_range.lo, m_range.hi, nm, Spacing::Linear)?;
    let mut cells = Vec::with_capacity(nu * nm);
    for &u in &us {
        for &m in &ms {
            let state = ThermoState::new(u, m);
            cells.push(SurfaceCell {
                u,
                m,
                entropy: entropy(&state, p, b).ok(),
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{beta_of_m, s_of_m, xi_of_m};

    fn unit() -> ModelParams {
        ModelParams::with_jz(1.0, 1.0, 1).unwrap()
    }

    const A0: EntropyBranch = EntropyBranch::PHYSICAL;

    #[test]
    fn pullback_matches_curve_entropy() {
        let p = unit();
        let s = entropy(&ThermoState::on_curve(0.5, &p), &p, &A0).unwrap();
        assert!((s + 0.1308120360).abs() < 1e-10);
        assert!((s - s_of_m(0.5, &p).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn spin_flip_and_scaling() {
        let p = unit();
        let st = ThermoState::new(-0.125, 1.0);
        let s = entropy(&st, &p, &A0).unwrap();
        assert_eq!(
            entropy(&ThermoState::new(-0.125, -1.0), &p, &A0).unwrap(),
            s
        );
        let s2 = entropy(&st.scaled(2.0), &p, &A0).unwrap();
        assert!((s2 - 2.0 * s).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_name_the_quantity() {
        let p = unit();
        let err = entropy(&ThermoState::new(0.0, 1.0), &p, &A0).unwrap_err();
        assert!(matches!(err, Error::Domain { quantity: "U", .. }));
        let err = entropy(&ThermoState::new(-0.1, 0.0), &p, &A0).unwrap_err();
        assert!(matches!(err, Error::Domain { quantity: "M", .. }));
        let err = entropy(&ThermoState::new(-0.5, 1.0), &p, &A0).unwrap_err();
        assert!(matches!(
            err,
            Error::Domain {
                quantity: "2U/(JzM)",
                ..
            }
        ));
        assert!(gradient(&ThermoState::new(0.6, 1.0), &p, &A0).is_err());
    }

    #[test]
    fn gradient_pullback_equals_curve_momenta() {
        let p = unit();
        let g = gradient(&ThermoState::on_curve(0.5, &p), &p, &A0).unwrap();
        assert!((g.d_u - 1.1507282897).abs() < 1e-9);
        assert!((g.d_m - 0.0260580006).abs() < 1e-9);
        assert!((g.d_u - beta_of_m(0.5, &p).unwrap()).abs() < 1e-14);
        assert!((g.d_m - xi_of_m(0.5, &p).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = unit();
        let st = ThermoState::on_curve(0.5, &p);
        let g = gradient(&st, &p, &A0).unwrap();
        let f = |u: f64, m: f64| entropy(&ThermoState::new(u, m), &p, &A0).unwrap();
        let h = 1e-6;
        let du = (f(st.u + h, st.m) - f(st.u - h, st.m)) / (2.0 * h);
        let dm = (f(st.u, st.m + h) - f(st.u, st.m - h)) / (2.0 * h);
        assert!((du - g.d_u).abs() / g.d_u.abs() < 1e-8);
        assert!((dm - g.d_m).abs() / g.d_m.abs() < 1e-6);
    }

    #[test]
    fn a_shift_is_linear() {
        let p = unit();
        let st = ThermoState::new(-0.125, 1.0);
        let g0 = gradient(&st, &p, &A0).unwrap();
        let g1 = gradient(&st, &p, &EntropyBranch::new(1.0)).unwrap();
        let (u, m) = (st.u, st.m);
        assert!((g1.d_u - g0.d_u - (-m * m / (u * u))).abs() < 1e-12);
        assert!((g1.d_m - g0.d_m - 2.0 * m / u).abs() < 1e-12);
    }

    #[test]
    fn residual_vanishes_for_every_branch() {
        let p = unit();
        let st = ThermoState::new(-0.125, 1.0);
        assert!(hj_residual(&st, &p, &A0).unwrap().abs() < 1e-12);
        assert!(
            hj_residual(&st, &p, &EntropyBranch::new(7.3))
                .unwrap()
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn residual_detects_a_non_solution() {
        // S + εU² adds 2εU to ∂S/∂U.
        let p = unit();
        let st = ThermoState::new(-0.125, 1.0);
        let eps = 0.1;
        let mut g = gradient(&st, &p, &A0).unwrap();
        g.d_u += 2.0 * eps * st.u;
        let r = hj_residual_with(&st, &p, g).unwrap();
        assert!(r.abs() > 1e-3);
        assert!((r - 4.0 * eps * st.u * st.u / st.m).abs() < 1e-12);
    }

    #[test]
    fn beta_is_positive_on_physical_region() {
        let p = unit();
        for i in 1..20 {
            for j in 1..20 {
                let m = 0.1 * j as f64;
                let u = -0.5 * m * (i as f64) / 20.0;
                let g = gradient(&ThermoState::new(u, m), &p, &A0).unwrap();
                assert!(g.d_u > 0.0, "dS/dU = {} at ({u}, {m})", g.d_u);
            }
        }
    }

    #[test]
    fn grid_masks_forbidden_cells() {
        let p = unit();
        let r = |lo, hi| Range { lo, hi };
        let cells = surface_grid(r(-1.0, 1.0), r(-2.0, 2.0), 81, 81, &p, &A0).unwrap();
        assert_eq!(cells.len(), 81 * 81);
        assert!(cells.iter().filter(|c| c.m == 0.0).all(|c| !c.is_valid()));
        let masked = cells.iter().filter(|c| !c.is_valid()).count();
        assert!(masked > 0 && masked < cells.len());
        // (−0.125, 0.5) is the curve point m = 0.5 for N = 1.
        let hit = cells.iter().find(|c| c.u == -0.125 && c.m == 0.5).unwrap();
        assert!((hit.entropy.unwrap() + 0.1308120360).abs() < 1e-10);
        let hit = cells.iter().find(|c| c.u == -0.125 && c.m == 1.0).unwrap();
        assert!((hit.entropy.unwrap() + 0.126335769607853).abs() < 1e-14);
        assert!(surface_grid(r(-1.0, 1.0), r(-1.0, 1.0), 1, 5, &p, &A0).is_err());
    }
}
