//! Roots of the self-consistent equation `m = tanh(β·Jz·m − ξ)` at fixed `(β, ξ)`.
//!
//! `f(m) = m − tanh(β·Jz·m − ξ)` is negative at `m = −1` and positive at
//! `m = 1`, and has at most two critical points, so it has between one and
//! three roots. The interval is cut at a uniform subdivision plus the
//! critical points of `f`, which makes `f` monotone on every piece; each
//! sign change is then refined by bisection.

use serde::{Deserialize, Serialize};

use crate::curve::s_of_m;
use crate::error::{Error, Result};
use crate::numeric::log_2cosh;
use crate::params::{ConjugateCoords, ModelParams};

/// Segments of the first bracketing pass.
pub const COARSE_SEGMENTS: usize = 64;
/// Segments of the refinement pass, used when roots crowd together.
pub const FINE_SEGMENTS: usize = 1024;
/// Width of the final bisection bracket.
pub const BISECTION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub m: f64,
    pub stability: Stability,
    /// Grand Massieu function per site, `Ψ/(kN) = −β·Jz·m²/2 + log(2cosh(β·Jz·m − ξ))`.
    pub massieu_per_site: f64,
}

/// All roots at one `(β, ξ)`, sorted by `m`, with the equilibrium marked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Index into `roots` of the equilibrium root.
    pub selected: usize,
}

impl RootSet {
    pub fn selected_root(&self) -> &Root {
        &self.roots[self.selected]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn stable(&self) -> impl Iterator<Item = &Root> {
        self.roots
            .iter()
            .filter(|r| r.stability == Stability::Stable)
    }
}

struct Equation {
    gain: f64,
    xi: f64,
}

impl Equation {
    fn residual(&self, m: f64) -> f64 {
        m - (self.gain * m - self.xi).tanh()
    }

    /// Slope of the fixed-point map `m ↦ tanh(β·Jz·m − ξ)`.
    fn map_slope(&self, m: f64) -> f64 {
        let c = (self.gain * m - self.xi).cosh();
        self.gain / (c * c)
    }

    /// Points in `(−1, 1)` where `f' = 0`, i.e. `cosh²(β·Jz·m − ξ) = β·Jz`.
    fn critical_points(&self) -> Vec<f64> {
        if self.gain <= 1.0 {
            return Vec::new();
        }
        let w = self.gain.sqrt().acosh();
        [(self.xi - w) / self.gain, (self.xi + w) / self.gain]
            .into_iter()
            .filter(|c| c.abs() < 1.0)
            .collect()
    }

    fn bisect(&self, mut a: f64, mut b: f64) -> f64 {
        let mut fa = self.residual(a);
        while b - a > BISECTION_TOL {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.residual(mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm < 0.0) == (fa < 0.0) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    fn roots_with(&self, segments: usize) -> Vec<f64> {
        let mut nodes: Vec<f64> = (0..=segments)
            .map(|i| -1.0 + 2.0 * (i as f64) / (segments as f64))
            .collect();
        nodes.extend(self.critical_points());
        nodes.sort_by(|a, b| a.total_cmp(b));
        nodes.dedup();

        let values: Vec<f64> = nodes.iter().map(|&m| self.residual(m)).collect();
        let mut roots = Vec::new();
        for i in 0..nodes.len() {
            // The endpoints ±1 are never roots: f(−1) < 0 < f(1).
            if values[i] == 0.0 && nodes[i].abs() < 1.0 {
                roots.push(nodes[i]);
            }
            if i + 1 < nodes.len() && values[i] * values[i + 1] < 0.0 {
                roots.push(self.bisect(nodes[i], nodes[i + 1]));
            }
        }
        roots
    }
}

/// Finds every root of the self-consistent equation at `(β, ξ)`.
///
/// A root is stable when the fixed-point map contracts there,
/// `β·Jz·sech²(β·Jz·m − ξ) < 1`. The equilibrium is the stable root with the
/// largest grand Massieu function; symmetric ties go to positive `m`.
pub fn solve(c: ConjugateCoords, p: &ModelParams) -> Result<RootSet> {
    if !(c.beta.is_finite() && c.beta > 0.0) {
        return Err(Error::domain(
            "beta",
            c.beta,
            "inverse temperature must be positive",
        ));
    }
    if !c.xi.is_finite() {
        return Err(Error::domain("xi", c.xi, "field parameter must be finite"));
    }
    let eq = Equation {
        gain: c.beta * p.jz(),
        xi: c.xi,
    };

    let mut ms = eq.roots_with(COARSE_SEGMENTS);
    let crowded = ms
        .windows(2)
        .any(|w| w[1] - w[0] < 1.0 / COARSE_SEGMENTS as f64);
    if crowded {
        ms = eq.roots_with(FINE_SEGMENTS);
    }
    if ms.len() > 3 {
        return Err(Error::TooManyRoots { count: ms.len() });
    }

    let roots: Vec<Root> = ms
        .into_iter()
        .map(|m| Root {
            m,
            stability: if eq.map_slope(m) < 1.0 {
                Stability::Stable
            } else {
                Stability::Unstable
            },
            massieu_per_site: -0.5 * eq.gain * m * m + log_2cosh(eq.gain * m - eq.xi),
        })
        .collect();

    let selected = select_equilibrium(&roots);
    Ok(RootSet { roots, selected })
}

fn select_equilibrium(roots: &[Root]) -> usize {
    let any_stable = roots.iter().any(|r| r.stability == Stability::Stable);
    let mut best: Option<usize> = None;
    for (i, r) in roots.iter().enumerate() {
        if any_stable && r.stability != Stability::Stable {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(j) => {
                let cur = roots[j].massieu_per_site;
                let tol = 1e-12 * cur.abs().max(1.0);
                // Roots are ascending, so on a tie the later one has larger m.
                if r.massieu_per_site >= cur - tol {
                    Some(i)
                } else {
                    Some(j)
                }
            }
        };
    }
    best.unwrap_or(0)
}

/// One point of the zero-field (`ξ = 0`) solution family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroFieldPoint {
    pub beta: f64,
    /// Non-negative stable root; zero when `β·Jz ≤ 1`.
    pub m: f64,
    /// Entropy per site at that root.
    pub s: f64,
    /// `λ = kβ` in `S = λU`.
    pub lambda: f64,
}

/// Zero-field branch at each requested inverse temperature.
pub fn zero_field_branch(betas: &[f64], p: &ModelParams) -> Result<Vec<ZeroFieldPoint>> {
    betas
        .iter()
        .map(|&beta| {
            let set = solve(ConjugateCoords::new(beta, 0.0)?, p)?;
            let m = if beta * p.jz() <= 1.0 {
                0.0
            } else {
                set.stable().map(|r| r.m).fold(0.0, f64::max)
            };
            let lambda = p.k() * beta;
            debug_assert!(m == 0.0 || lambda > p.k() / p.jz());
            Ok(ZeroFieldPoint {
                beta,
                m,
                s: s_of_m(m, p)?,
                lambda,
            })
        })
        .collect()
}
