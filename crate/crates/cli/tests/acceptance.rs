//! End-to-end acceptance suite: one check per criterion, each printing a
//! single PASS/FAIL line. Run with `--nocapture` to see the table.
//!
//! Every reference value is recomputed here from closed forms or by brute
//! force, independently of the library code paths under test.

use std::process::Command;

use ising_hj::criticality::{fit_exponents, jacobian_norm, specific_heat, FitWindow};
use ising_hj::curve::{beta_of_m, s_of_m, u_of_m, xi_of_m};
use ising_hj::ideal_gas::{gas_hj_residual, gas_recover_eos, GasState};
use ising_hj::oracle::{self, log_partition_binom, log_partition_enum};
use ising_hj::selfconsistent::{solve, zero_field_branch, Stability};
use ising_hj::surface::{entropy, gradient, hj_residual, EntropyBranch, ThermoState};
use ising_hj::{ConjugateCoords, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 42;

fn unit() -> ModelParams {
    ModelParams::default()
}

fn report(id: u32, name: &str, passed: bool, detail: String) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id:>2} {name}: {detail}");
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

/// 1000 random `(U, M)` states with `|2U/(JzM)| ∈ [0.05, 0.95]`, drawn here
/// rather than through the library sampler.
fn states() -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..1000)
        .map(|_| {
            let m: f64 = rng.gen_range(0.1..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let x: f64 = rng.gen_range(0.05..0.95) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            (0.5 * x * m, m)
        })
        .collect()
}

/// Closed-form entropy for `k = Jz = 1`, written out independently.
fn entropy_oracle(u: f64, m: f64, a: f64) -> f64 {
    let x = 2.0 * u / m;
    m * x.atanh() + m * m / (4.0 * u) * (1.0 - x * x).ln() + a * m * m / u
}

fn signed(ms: &[f64]) -> Vec<f64> {
    ms.iter().flat_map(|&m| [m, -m]).collect()
}

#[test]
fn c01_hj_certificate() {
    let p = unit();
    let mut worst: f64 = 0.0;
    for a in [0.0, 1.0, -3.0] {
        let b = EntropyBranch::new(a);
        for (u, m) in states() {
            let rhs = (2.0 * u / m).atanh();
            let r = hj_residual(&ThermoState::new(u, m), &p, &b).unwrap();
            worst = worst.max(r.abs() / (1.0 + rhs.abs()));
        }
    }
    report(
        1,
        "HJ residual",
        worst < 1e-10,
        format!("max |r|/(1+|rhs|) = {worst:.2e} (< 1e-10)"),
    );
}

fn five_point(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

#[test]
fn c02_gradient_matches_finite_differences() {
    // Per-component relative error against a five-point stencil on the
    // independent closed form.
    let p = unit();
    let mut worst: f64 = 0.0;
    for a in [0.0, 1.0, -3.0] {
        let b = EntropyBranch::new(a);
        for (u, m) in states() {
            let g = gradient(&ThermoState::new(u, m), &p, &b).unwrap();
            let du = five_point(|x| entropy_oracle(x, m, a), u, 1e-3 * u.abs());
            let dm = five_point(|x| entropy_oracle(u, x, a), m, 1e-3 * m.abs());
            worst = worst.max(
                ((du - g.d_u) / g.d_u)
                    .abs()
                    .max(((dm - g.d_m) / g.d_m).abs()),
            );
        }
    }
    report(
        2,
        "gradient vs FD",
        worst < 1e-6,
        format!("max relative deviation {worst:.2e} (< 1e-6)"),
    );
}

#[test]
fn c03_curve_identity() {
    let p = unit();
    let mut worst: f64 = 0.0;
    for m in signed(&[0.01, 0.1, 0.3, 0.5, 0.8, 0.95]) {
        let lhs = beta_of_m(m, &p).unwrap() * m - xi_of_m(m, &p).unwrap();
        worst = worst.max((lhs - m.atanh()).abs());
    }
    report(
        3,
        "curve identity",
        worst < 1e-10,
        format!("max deviation {worst:.2e} (< 1e-10)"),
    );
}

#[test]
fn c04_pullback() {
    let p = unit();
    let n = p.n() as f64;
    let mut worst: f64 = 0.0;
    for m in signed(&[0.05, 0.1, 0.3, 0.5, 0.8, 0.95]) {
        let s = entropy(
            &ThermoState::new(n * u_of_m(m, &p), n * m),
            &p,
            &EntropyBranch::PHYSICAL,
        )
        .unwrap();
        let expected = n * s_of_m(m, &p).unwrap();
        worst = worst.max((s - expected).abs() / expected.abs());
    }
    report(
        4,
        "pullback",
        worst < 1e-12,
        format!("max relative deviation {worst:.2e} (< 1e-12)"),
    );
}

/// `log Ξ` by a direct sum over all `2^N` configurations.
fn brute_log_xi(m: f64, beta: f64, xi: f64, n: u32) -> f64 {
    let theta = beta * m - xi;
    let terms: Vec<f64> = (0u32..1 << n)
        .map(|c| {
            let up = c.count_ones() as f64;
            theta * (2.0 * up - n as f64)
        })
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = terms.iter().map(|t| (t - top).exp()).sum();
    -0.5 * beta * n as f64 * m * m + top + sum.ln()
}

#[test]
fn c05_oracle_agreement() {
    let p = unit();
    let n = p.n() as f64;
    let m = 0.5;
    let c = ConjugateCoords::new(1.1507282897, 0.0260580006).unwrap();
    let e = log_partition_enum(m, c, &p).unwrap();
    let b = log_partition_binom(m, c, &p).unwrap();
    let brute = brute_log_xi(m, c.beta, c.xi, 12);
    let methods = (e - b).abs() / e.abs();
    let vs_brute = (e - brute).abs() / brute.abs();

    let r = oracle::evaluate(m, c, &p, oracle::DEFAULT_STEP).unwrap();
    let dm = (r.m_numeric - 6.0).abs();
    let du = (r.u_numeric + 1.5).abs();

    let offset = oracle::check_entropy_offset(m, c, &p).unwrap();
    let target = n * std::f64::consts::LN_2;
    let offset_err = (offset - target).abs();

    let offsets: Vec<f64> = (1..=8)
        .map(|i| {
            let m = 0.1 * i as f64;
            let c =
                ConjugateCoords::new(beta_of_m(m, &p).unwrap(), xi_of_m(m, &p).unwrap()).unwrap();
            oracle::check_entropy_offset(m, c, &p).unwrap()
        })
        .collect();
    let spread = offsets.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - offsets.iter().copied().fold(f64::INFINITY, f64::min);

    let passed = methods < 1e-12
        && vs_brute < 1e-12
        && dm < 1e-4
        && du < 1e-4
        && offset_err < 1e-6
        && spread < 1e-8;
    report(
        5,
        "finite oracle",
        passed,
        format!(
            "enum/binom {methods:.1e}, enum/brute {vs_brute:.1e}, |M−6| {dm:.1e}, |U+1.5| {du:.1e}, \
             offset {offset:.9} (err {offset_err:.1e}), spread {spread:.1e}"
        ),
    );
}

#[test]
fn c06_cusp_location() {
    let p = unit();
    let out = Command::new(env!("CARGO_BIN_EXE_ising-hj"))
        .arg("curve")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .take(3)
                .map(|f| f.parse().unwrap())
                .collect::<Vec<f64>>()
        })
        .min_by(|a, b| a[0].abs().total_cmp(&b[0].abs()))
        .unwrap();
    let (db, dx) = ((row[1] - 1.0).abs(), row[2].abs());

    let j = jacobian_norm(1e-3, &p).unwrap();
    let ms: Vec<f64> = (0..=40)
        .map(|i| 1e-3 * 10f64.powf(-i as f64 / 10.0))
        .collect();
    let norms: Vec<f64> = ms.iter().map(|&m| jacobian_norm(m, &p).unwrap()).collect();
    let monotone = norms.windows(2).all(|w| w[1] < w[0]);

    let passed = db < 1e-4 && dx < 1e-6 && (j / 1e-3 - 1.0).abs() < 0.05 && monotone;
    report(
        6,
        "cusp location",
        passed,
        format!("|Δβ| {db:.1e}, |Δξ| {dx:.1e}, J(1e-3) = {j:.4e}, monotone to 1e-7: {monotone}"),
    );
}

/// Least-squares slope of `log y` against `log x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn c07_critical_exponents() {
    let p = unit();
    let r = fit_exponents(&p, FitWindow::default()).unwrap();

    // Independent refit over the same window straight from the curve.
    let ms: Vec<f64> = (0..20)
        .map(|i| 1e-3 * 10f64.powf(i as f64 / 19.0))
        .collect();
    let xi: Vec<f64> = ms.iter().map(|&m| xi_of_m(m, &p).unwrap()).collect();
    let t: Vec<f64> = ms
        .iter()
        .map(|&m| 1.0 / beta_of_m(m, &p).unwrap() - 1.0)
        .collect();
    let delta = log_slope(&ms, &xi);
    let beta_exp = 1.0 / log_slope(&ms, &t.iter().map(|t| -t).collect::<Vec<_>>());

    let c_dev = (specific_heat(1e-3, &p).unwrap() - 1.0).abs();
    let passed = (r.delta.value - 3.0).abs() < 0.01
        && (r.beta.value - 0.5).abs() < 0.005
        && (r.gamma.value - 1.0).abs() < 0.02
        && c_dev < 1e-3
        && (delta - r.delta.value).abs() < 1e-6
        && (beta_exp - r.beta.value).abs() < 1e-6;
    report(
        7,
        "critical exponents",
        passed,
        format!(
            "δ {:.5} (refit {delta:.5}), β {:.5} (refit {beta_exp:.5}), γ {:.5}, |C/k−1| {c_dev:.1e}",
            r.delta.value, r.beta.value, r.gamma.value
        ),
    );
}

#[test]
fn c08_series_fidelity() {
    let p = unit();
    let m: f64 = 1e-2;
    let db = (beta_of_m(m, &p).unwrap() - (1.0 + m * m / 2.0 + m.powi(4) / 3.0)).abs();
    let dx = (xi_of_m(m, &p).unwrap() - (m.powi(3) / 6.0 + 2.0 * m.powi(5) / 15.0)).abs();
    report(
        8,
        "series fidelity",
        db < 1e-11 && dx < 1e-13,
        format!("β deviation {db:.2e} (< 1e-11), ξ deviation {dx:.2e} (< 1e-13)"),
    );
}

/// Positive root of `m = tanh(βm)` by plain bisection.
fn bisect_zero_field(beta: f64) -> f64 {
    let f = |m: f64| m - (beta * m).tanh();
    let (mut lo, mut hi) = (1e-6, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn c09_zero_field_branch() {
    let p = unit();
    let below = [0.2, 0.5, 0.8, 0.99, 1.0];
    let single = below.iter().all(|&b| {
        solve(ConjugateCoords::new(b, 0.0).unwrap(), &p)
            .unwrap()
            .len()
            == 1
    });
    let flat = zero_field_branch(&below, &p)
        .unwrap()
        .iter()
        .all(|z| z.m == 0.0 && z.s == 0.0);

    let set = solve(ConjugateCoords::new(1.2, 0.0).unwrap(), &p).unwrap();
    let stable: Vec<f64> = set.stable().map(|r| r.m).collect();
    let oracle = bisect_zero_field(1.2);
    let err = stable
        .iter()
        .map(|m| (m.abs() - oracle).abs())
        .fold(0.0, f64::max);
    let symmetric = stable.len() == 2 && stable[0] < 0.0 && stable[1] > 0.0;
    let middle_unstable = set
        .roots
        .iter()
        .any(|r| r.m.abs() < 1e-12 && r.stability == Stability::Unstable);
    let z = zero_field_branch(&[1.2], &p).unwrap()[0];
    let lambda_ok = z.lambda == 1.2 && z.lambda > 1.0 && (z.m - oracle).abs() < 1e-10;

    let passed = single && flat && symmetric && middle_unstable && err < 1e-10 && lambda_ok;
    report(
        9,
        "zero-field branch",
        passed,
        format!("m* {oracle:.12}, max root error {err:.1e}, λ {}", z.lambda),
    );
}

#[test]
fn c10_ideal_gas() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut hj, mut caloric, mut state): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..100 {
        let g = GasState::new(
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.5..5.0),
            rng.gen_range(-1.0..1.0),
        )
        .unwrap();
        hj = hj.max(gas_hj_residual(&g).unwrap().abs());
        let eos = gas_recover_eos(&g).unwrap();
        caloric = caloric.max((g.u - 1.5 * g.r * eos.t).abs() / g.u);
        state = state.max((eos.p * g.v - g.r * eos.t).abs() / (g.r * eos.t));
    }
    let eps = 8.0 * f64::EPSILON;
    report(
        10,
        "ideal gas",
        hj < 1e-13 && caloric < eps && state < eps,
        format!("HJ {hj:.1e}, U−(3/2)rT {caloric:.1e}, pV−rT {state:.1e} (relative)"),
    );
}

#[test]
fn c11_cli_determinism_and_figure_parity() {
    let dir = tempfile::tempdir().unwrap();
    let emit = |name: &str, args: &[&str]| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_ising-hj"))
            .args(args)
            .arg("--output")
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(path).unwrap()
    };
    let mut identical = true;
    for (i, args) in [
        &["curve"][..],
        &["surface"],
        &["solve", "--beta", "1.2"],
        &["zero-field"],
        &["exponents"],
        &["idealgas", "--seed", "7"],
        &["verify", "--format", "json", "--seed", "7"],
    ]
    .iter()
    .enumerate()
    {
        identical &= emit(&format!("{i}a"), args) == emit(&format!("{i}b"), args);
    }

    let text = String::from_utf8(emit("curve.csv", &["curve"])).unwrap();
    let rows: Vec<[f64; 3]> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').take(3).map(|x| x.parse().unwrap()).collect();
            [f[0], f[1], f[2]]
        })
        .collect();
    let centre = rows.iter().position(|r| r[0] == 0.0).unwrap();
    let steps: Vec<f64> = rows
        .windows(2)
        .map(|w| (w[1][1] - w[0][1]).hypot(w[1][2] - w[0][2]))
        .collect();
    // Steps shrink toward the m = 0 row from either side.
    let left = steps[..centre]
        .windows(2)
        .rev()
        .take(20)
        .all(|w| w[1] < w[0]);
    let right = steps[centre..].windows(2).take(20).all(|w| w[0] < w[1]);
    let nearest = steps[centre - 1].max(steps[centre]);

    report(
        11,
        "CLI determinism and figure parity",
        identical && left && right && nearest < 1e-4,
        format!("byte-identical: {identical}, shrinking left/right: {left}/{right}, step at m=0 {nearest:.1e}"),
    );
}
