//! Aggregated self-check over every module, driven by a seeded random grid.
//!
//! The same seed always produces the same report, byte for byte.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::criticality::{fit_exponents, jacobian_norm, FitWindow};
use crate::curve::{beta_of_m, coords_of_m, s_of_m, xi_of_m};
use crate::error::{Error, Result};
use crate::ideal_gas::{gas_hj_residual, gas_recover_eos, GasState};
use crate::numeric::richardson_central;
use crate::oracle::{self, ENUM_MAX_SITES};
use crate::params::ModelParams;
use crate::selfconsistent::{solve, zero_field_branch};
use crate::surface::{entropy, gradient, hj_residual, EntropyBranch, ThermoState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub params: ModelParams,
    pub seed: u64,
    /// Random `(U, M)` states per surface check.
    pub states: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            seed: 42,
            states: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        writeln!(
            f,
            "{passed}/{} checks passed (seed {})",
            self.checks.len(),
            self.seed
        )
    }
}

/// Random allowed states with `|2U/(JzM)|` in `[0.05, 0.95]` and `|M|` in `[0.1, 2]`.
pub fn random_states(p: &ModelParams, count: usize, rng: &mut impl Rng) -> Vec<ThermoState> {
    (0..count)
        .map(|_| {
            let m = rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let x = rng.gen_range(0.05..0.95) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            ThermoState::new(0.5 * x * p.jz() * m, m)
        })
        .collect()
}

struct Checks {
    out: Vec<CheckOutcome>,
}

impl Checks {
    fn record(&mut self, name: &'static str, passed: bool, detail: String) {
        self.out.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    }

    /// Records a check whose evaluation can fail; an error counts as a failure.
    fn record_with(&mut self, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) {
        match f() {
            Ok((passed, detail)) => self.record(name, passed, detail),
            Err(e) => self.record(name, false, format!("error: {e}")),
        }
    }
}

/// Runs every check. Fails early only for configurations the finite oracle
/// cannot handle (`N` above the enumeration cap).
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let p = cfg.params;
    if p.n() > ENUM_MAX_SITES {
        return Err(Error::TooLarge {
            n: p.n(),
            limit: ENUM_MAX_SITES,
            method: "enumeration",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let states = random_states(&p, cfg.states, &mut rng);
    let mut checks = Checks { out: Vec::new() };

    checks.record_with("hj-residual", || {
        let mut worst: f64 = 0.0;
        for a in [0.0, 1.0, -3.0] {
            let b = EntropyBranch::new(a);
            for s in &states {
                let rhs = s.reduced_ratio(&p)?.atanh();
                let r = hj_residual(s, &p, &b)?;
                worst = worst.max(r.abs() / (1.0 + rhs.abs()));
            }
        }
        Ok((
            worst < 1e-10,
            format!("max scaled residual {worst:.3e} (< 1e-10)"),
        ))
    });

    checks.record_with("gradient-fd", || {
        let b = EntropyBranch::PHYSICAL;
        let mut worst: f64 = 0.0;
        for s in &states {
            let g = gradient(s, &p, &b)?;
            // Steps of 1e-3 relative keep every probe inside |x| < 1.
            let e = |u, m| entropy(&ThermoState::new(u, m), &p, &b).unwrap_or(f64::NAN);
            let du = richardson_central(|u| e(u, s.m), s.u, 1e-3 * s.u.abs());
            let dm = richardson_central(|m| e(s.u, m), s.m, 1e-3 * s.m.abs());
            let dev = ((du - g.d_u) / g.d_u)
                .abs()
                .max(((dm - g.d_m) / g.d_m).abs());
            worst = if dev.is_nan() {
                f64::INFINITY
            } else {
                worst.max(dev)
            };
        }
        Ok((
            worst < 1e-6,
            format!("max relative deviation {worst:.3e} (< 1e-6)"),
        ))
    });

    checks.record_with("curve-identity", || {
        let mut worst: f64 = 0.0;
        for m in signed(&[0.01, 0.1, 0.3, 0.5, 0.8, 0.95]) {
            let lhs = beta_of_m(m, &p)? * p.jz() * m - xi_of_m(m, &p)?;
            worst = worst.max((lhs - m.atanh()).abs());
        }
        Ok((
            worst < 1e-10,
            format!("max |βJzm − ξ − atanh m| {worst:.3e} (< 1e-10)"),
        ))
    });

    checks.record_with("pullback", || {
        let mut worst: f64 = 0.0;
        for m in signed(&[0.1, 0.3, 0.5, 0.8]) {
            let s = entropy(&ThermoState::on_curve(m, &p), &p, &EntropyBranch::PHYSICAL)?;
            let target = p.n() as f64 * s_of_m(m, &p)?;
            worst = worst.max((s - target).abs() / target.abs());
        }
        Ok((
            worst < 1e-12,
            format!("max relative deviation {worst:.3e} (< 1e-12)"),
        ))
    });

    checks.record_with("oracle-methods", || {
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let c = crate::ConjugateCoords {
                beta: rng.gen_range(0.1..2.0),
                xi: rng.gen_range(-1.0..1.0),
            };
            let m = rng.gen_range(-0.9..0.9);
            let e = oracle::log_partition_enum(m, c, &p)?;
            let b = oracle::log_partition_binom(m, c, &p)?;
            worst = worst.max((e - b).abs() / e.abs());
        }
        Ok((
            worst < 1e-12,
            format!("N={} enum vs binomial max rel {worst:.3e} (< 1e-12)", p.n()),
        ))
    });

    checks.record_with("oracle-self-consistency", || {
        let mut worst: f64 = 0.0;
        for m in signed(&[0.1, 0.3, 0.5, 0.8]) {
            let rep =
                oracle::check_self_consistency(m, coords_of_m(m, &p)?, &p, oracle::DEFAULT_STEP)?;
            worst = worst.max(rep.m_residual).max(rep.u_residual);
        }
        Ok((
            worst < oracle::SELF_CONSISTENCY_TOL,
            format!("max relative residual {worst:.3e} (< 1e-5)"),
        ))
    });

    checks.record_with("entropy-offset", || {
        let expected = p.k() * p.n() as f64 * std::f64::consts::LN_2;
        let offsets = (1..=8)
            .map(|i| {
                let m = 0.1 * i as f64;
                oracle::check_entropy_offset(m, coords_of_m(m, &p)?, &p)
            })
            .collect::<Result<Vec<_>>>()?;
        let lo = offsets.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = offsets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let err = offsets
            .iter()
            .map(|o| (o - expected).abs())
            .fold(0.0, f64::max);
        Ok((
            err < 1e-6 && hi - lo < 1e-8,
            format!(
                "offset kN·log2 = {expected:.10}, max error {err:.3e}, spread {:.3e}",
                hi - lo
            ),
        ))
    });

    checks.record_with("cusp", || {
        let j = jacobian_norm(1e-3, &p)?;
        let target = 1e-3 / p.jz();
        let ms: Vec<f64> = (0..=30)
            .map(|i| 1e-4 * 10f64.powf(i as f64 / 10.0))
            .collect();
        let norms = ms
            .iter()
            .map(|&m| jacobian_norm(m, &p))
            .collect::<Result<Vec<_>>>()?;
        let monotone = norms.windows(2).all(|w| w[0] < w[1]);
        let beta0 = beta_of_m(0.0, &p)?;
        Ok((
            (j - target).abs() < 0.05 * target && monotone && beta0 == 1.0 / p.jz(),
            format!("|J(1e-3)| = {j:.6e}, monotone toward m=0: {monotone}"),
        ))
    });

    checks.record_with("exponents", || {
        let r = fit_exponents(&p, FitWindow::default())?;
        Ok((
            r.all_within_tolerance(),
            format!(
                "delta {:.4}, beta {:.4}, gamma {:.4}, alpha max|C/k-1| {:.2e}",
                r.delta.value, r.beta.value, r.gamma.value, r.alpha.max_deviation
            ),
        ))
    });

    checks.record_with("series", || {
        let m: f64 = 1e-2;
        let db = (beta_of_m(m, &p)? * p.jz() - (1.0 + m * m / 2.0 + m.powi(4) / 3.0)).abs();
        let dx = (xi_of_m(m, &p)? - (m.powi(3) / 6.0 + 2.0 * m.powi(5) / 15.0)).abs();
        Ok((
            db < 1e-11 && dx < 1e-13,
            format!("beta {db:.3e} (< 1e-11), xi {dx:.3e} (< 1e-13)"),
        ))
    });

    checks.record_with("zero-field", || {
        let jz = p.jz();
        let betas = [0.5 / jz, 1.0 / jz, 1.2 / jz, 2.0 / jz];
        let pts = zero_field_branch(&betas, &p)?;
        let mut ok = true;
        for (pt, &beta) in pts.iter().zip(&betas) {
            let count = solve(crate::ConjugateCoords::new(beta, 0.0)?, &p)?.len();
            if beta * jz <= 1.0 {
                ok &= pt.m == 0.0 && pt.s == 0.0 && count == 1;
            } else {
                ok &= pt.m > 0.0 && pt.lambda > p.k() / jz && count == 3;
            }
        }
        Ok((ok, format!("m* at beta=1.2/Jz: {:.12}", pts[2].m)))
    });

    checks.record_with("ideal-gas", || {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let g = GasState::new(
                rng.gen_range(0.1..10.0),
                rng.gen_range(0.1..10.0),
                rng.gen_range(0.1..5.0),
                0.0,
            )?;
            let eos = gas_recover_eos(&g)?;
            worst = worst
                .max(gas_hj_residual(&g)?.abs())
                .max(eos.caloric_residual(&g).abs() / g.u)
                .max(eos.state_residual(&g).abs() / (g.r * eos.t));
        }
        Ok((worst < 1e-13, format!("max residual {worst:.3e} (< 1e-13)")))
    });

    Ok(VerifyReport {
        seed: cfg.seed,
        checks: checks.out,
    })
}

fn signed(ms: &[f64]) -> Vec<f64> {
    ms.iter().flat_map(|&m| [m, -m]).collect()
}
