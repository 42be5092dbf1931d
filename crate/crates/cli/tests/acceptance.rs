//! Acceptance suite. Every test prints one `PASS`/`FAIL` line before asserting.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use qutrit_dfs::correlations::oracle::{discord_hs_oracle, OracleOptions};
use qutrit_dfs::correlations::{discord_lower_bound, negativity};
use qutrit_dfs::dfs::{closure_report, coefficients_closed_form, coefficients_ode_series};
use qutrit_dfs::linalg::{kron, DensityMatrix, C64};
use qutrit_dfs::random::{random_product_state, random_separable, random_two_qutrit, random_unitary};
use qutrit_dfs::ModelParams;
use qutrit_dfs_cli::claims::{plateau, time_to_plateau, worst_increase};
use qutrit_dfs_cli::validate::{oracle_agreement, rk4_errors, ORACLE_PAIRS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

// Written to the raw stderr handle so the line shows even when the harness
// captures output of passing tests.
fn verdict(name: &str, pass: bool, detail: String) {
    let line = format!("\n{} {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{name}: {detail}");
}

fn times_quarter() -> Vec<f64> {
    (0..=20).map(|i| 0.25 * i as f64).collect()
}

#[test]
fn oracle_agreement_with_full_integration() {
    let start = Instant::now();
    let cases: Vec<(usize, f64, f64)> = (2..=4)
        .flat_map(|n| ORACLE_PAIRS.into_iter().map(move |(a2, a3)| (n, a2, a3)))
        .collect();
    let times = times_quarter();
    let dist = cases
        .par_iter()
        .map(|&(n, a2, a3)| {
            oracle_agreement(&ModelParams::new(n, a2, a3).unwrap(), &times, 1e-3, None)
                .unwrap()
                .0
        })
        .reduce(|| 0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        "oracle agreement",
        dist <= 1e-6 && secs <= 180.0,
        format!("max trace distance {dist:.3e} (tol 1e-6) over n=2..4 x 4 rate pairs, {secs:.1}s (limit 180s)"),
    );
}

#[test]
fn dfs_closure() {
    let mut worst = 0.0f64;
    for n in 2..=5 {
        for (a2, a3) in ORACLE_PAIRS {
            worst = worst.max(
                closure_report(&ModelParams::new(n, a2, a3).unwrap(), 0)
                    .unwrap()
                    .max_residual(),
            );
        }
    }
    verdict(
        "dfs closure",
        worst <= 1e-10,
        format!("max projection residual {worst:.3e} (tol 1e-10) for n=2..5"),
    );
}

#[test]
fn trace_identity_and_rk4_drift() {
    let grid: Vec<f64> = (0..=500).map(|i| i as f64 / 100.0).collect();
    let mut coeff = 0.0f64;
    for n in 2..=6 {
        for (a2, a3) in ORACLE_PAIRS {
            let p = ModelParams::new(n, a2, a3).unwrap();
            for &t in &grid {
                coeff = coeff.max((coefficients_closed_form(&p, t).unwrap().trace(&p) - 1.0).abs());
            }
            for c in coefficients_ode_series(&p, &grid, 1e-3).unwrap() {
                coeff = coeff.max((c.trace(&p) - 1.0).abs());
            }
        }
    }
    let drift = [(2, 1.0, 1.0), (3, 0.5, 1.0), (4, 1.0, 0.1)]
        .par_iter()
        .map(|&(n, a2, a3)| {
            oracle_agreement(&ModelParams::new(n, a2, a3).unwrap(), &times_quarter(), 1e-3, None)
                .unwrap()
                .1
        })
        .reduce(|| 0.0, f64::max);
    verdict(
        "trace identity",
        coeff <= 1e-9 && drift <= 1e-9,
        format!("coefficient trace error {coeff:.3e} (tol 1e-9), RK4 trace drift {drift:.3e} at dt=1e-3 (tol 1e-9)"),
    );
}

#[test]
fn steady_state() {
    let p = ModelParams::new(2, 1.0, 1.0).unwrap();
    let target = [0.25, 9.0 / 16.0, 1.0 / 16.0, -3.0 / 16.0];
    let ode = coefficients_ode_series(&p, &[10.0], 1e-3).unwrap()[0].as_array();
    let closed = coefficients_closed_form(&p, 10.0).unwrap().as_array();
    let err = ode
        .iter()
        .chain(&closed)
        .zip(target.iter().chain(&target))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    verdict(
        "steady state",
        err <= 1e-8,
        format!("max |a(10) - (1/4, 9/16, 1/16, -3/16)| = {err:.3e} (tol 1e-8)"),
    );
}

#[test]
fn negativity_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let sep = (0..100)
        .map(|i| negativity(&random_separable(&mut rng, 1 + i % 5), 0).unwrap())
        .fold(0.0, f64::max);
    let mut v = vec![C64::new(0.0, 0.0); 9];
    v[1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let bell = (negativity(&DensityMatrix::pure(&v, vec![3, 3]).unwrap(), 0).unwrap() - 0.5).abs();
    let mut lu = 0.0f64;
    for _ in 0..20 {
        let rho = random_two_qutrit(&mut rng);
        let u = kron(&random_unitary(&mut rng, 3), &random_unitary(&mut rng, 3));
        let rotated =
            DensityMatrix::new(u.matmul(rho.matrix()).matmul(&u.adjoint()).hermitian_part(), vec![3, 3]).unwrap();
        lu = lu.max((negativity(&rotated, 0).unwrap() - negativity(&rho, 0).unwrap()).abs());
    }
    verdict(
        "negativity contract",
        sep <= 1e-12 && bell <= 1e-10 && lu <= 1e-10,
        format!("separable max {sep:.3e} (tol 1e-12), |N(bell) - 0.5| {bell:.3e} (tol 1e-10), local-unitary change {lu:.3e} (tol 1e-10)"),
    );
}

#[test]
fn discord_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let states: Vec<DensityMatrix> = (0..50).map(|_| random_two_qutrit(&mut rng)).collect();
    let opts = OracleOptions {
        seed: 5,
        ..Default::default()
    };
    let pairs: Vec<(f64, f64)> = states
        .par_iter()
        .map(|rho| {
            (
                discord_lower_bound(rho).unwrap(),
                discord_hs_oracle(rho, &opts).unwrap().value,
            )
        })
        .collect();
    let min_lb = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let gap = pairs.iter().map(|p| p.0 - p.1).fold(f64::NEG_INFINITY, f64::max);
    let product = (0..50)
        .map(|_| discord_lower_bound(&random_product_state(&mut rng)).unwrap())
        .fold(0.0, f64::max);
    let a = discord_hs_oracle(&states[3], &opts).unwrap();
    let b = discord_hs_oracle(&states[3], &opts).unwrap();
    let deterministic = a.value.to_bits() == b.value.to_bits() && a.params == b.params;
    verdict(
        "discord contract",
        min_lb >= 0.0 && gap <= 1e-6 && product <= 1e-10 && deterministic,
        format!(
            "min bound {min_lb:.3e} (>= 0), max bound - oracle {gap:.3e} (tol 1e-6), product max {product:.3e} (tol 1e-10), deterministic {deterministic}"
        ),
    );
}

/// Curves from `qutrit-dfs scan`, keyed by `(n, a2, a3)`, with `gamma`.
struct Curve {
    label: String,
    gamma: f64,
    negativity: Vec<(f64, f64)>,
    discord_lb: Vec<(f64, f64)>,
}

fn scan(n: &str, a2: f64, a3: f64) -> Vec<Curve> {
    let out = Command::new(env!("CARGO_BIN_EXE_qutrit-dfs"))
        .args(["scan", "--n", n, "--a2", &a2.to_string(), "--a3", &a3.to_string()])
        .args([
            "--t-max",
            "5",
            "--t-steps",
            "501",
            "--measures",
            "negativity,discord_lb",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,n,a2,a3,negativity,discord_lb"));
    let mut curves: Vec<Curve> = Vec::new();
    for line in lines {
        let r: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let label = format!("n={} A2={} A3={}", r[1], r[2], r[3]);
        if curves.last().is_none_or(|c| c.label != label) {
            curves.push(Curve {
                gamma: ModelParams::new(r[1] as usize, r[2], r[3]).unwrap().gamma(),
                label,
                negativity: Vec::new(),
                discord_lb: Vec::new(),
            });
        }
        let c = curves.last_mut().unwrap();
        c.negativity.push((r[0], r[4]));
        c.discord_lb.push((r[0], r[5]));
    }
    curves
}

fn n_sweep() -> Vec<Curve> {
    scan("2,3,4,5,6", 1.0, 1.0)
}

fn pair_sweep() -> Vec<Curve> {
    [(1.0, 1.0), (1.0, 0.5), (1.0, 0.1)]
        .into_iter()
        .flat_map(|(a2, a3)| scan("2", a2, a3))
        .collect()
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.5}")).collect();
    format!("[{}]", parts.join(", "))
}

type Pick = fn(&Curve) -> &[(f64, f64)];
const MEASURES: [(&str, Pick); 2] = [("negativity", |c| &c.negativity), ("discord_lb", |c| &c.discord_lb)];

#[test]
fn claim_a_start_at_zero_and_plateau() {
    let curves: Vec<Curve> = n_sweep().into_iter().chain(pair_sweep()).collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, pick) in MEASURES {
        let start = curves.iter().map(|c| pick(c)[0].1.abs()).fold(0.0, f64::max);
        // settles to within 1% of its final value, and stays there, by t = 10/gamma
        let late: Vec<&str> = curves
            .iter()
            .filter(|c| time_to_plateau(pick(c), 0.01) > 10.0 / c.gamma)
            .map(|c| c.label.as_str())
            .collect();
        pass &= start <= 1e-12 && late.is_empty();
        detail.push(format!(
            "{name}: max |value(0)| {start:.1e}, curves not settled by 10/gamma {late:?}"
        ));
    }
    verdict("claim (a) start at zero and plateau", pass, detail.join("; "));
}

#[test]
fn claim_b_plateau_decreases_with_n() {
    let curves = n_sweep();
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, pick) in MEASURES {
        let p: Vec<f64> = curves.iter().map(|c| plateau(pick(c))).collect();
        let ok = worst_increase(&p) < 0.0;
        pass &= ok;
        detail.push(format!(
            "{name} at t=5 for n=2..6 {} strictly decreasing: {ok}",
            fmt_list(&p)
        ));
    }
    verdict("claim (b) plateau decreases with n", pass, detail.join("; "));
}

#[test]
fn claim_c_plateau_decreases_with_rate_asymmetry() {
    let curves = pair_sweep();
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, pick) in MEASURES {
        let p: Vec<f64> = curves.iter().map(|c| plateau(pick(c))).collect();
        let ok = worst_increase(&p) < 0.0;
        pass &= ok;
        detail.push(format!(
            "{name} at t=5 for (1,1),(1,0.5),(1,0.1) {} decreasing: {ok}",
            fmt_list(&p)
        ));
    }
    verdict("claim (c) plateau decreases with |A2-A3|", pass, detail.join("; "));
}

#[test]
fn claim_d_settling_time_decreases_with_n() {
    let curves = n_sweep();
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, pick) in MEASURES {
        let ts: Vec<f64> = curves.iter().map(|c| time_to_plateau(pick(c), 0.01)).collect();
        let scaled: Vec<f64> = curves.iter().zip(&ts).map(|(c, t)| t * c.gamma).collect();
        let mean = scaled.iter().sum::<f64>() / scaled.len() as f64;
        let spread = scaled.iter().map(|s| (s / mean - 1.0).abs()).fold(0.0, f64::max);
        let ok = worst_increase(&ts) < 0.0 && spread <= 0.15;
        pass &= ok;
        detail.push(format!(
            "{name} 1% settling times {} decreasing, gamma*t within 15% of mean {:.2} (max dev {:.0}%): {ok}",
            fmt_list(&ts),
            mean,
            100.0 * spread
        ));
    }
    verdict("claim (d) settling time decreases with n", pass, detail.join("; "));
}

#[test]
fn rk4_convergence_order() {
    let dts = [0.04, 0.02, 0.01, 0.005];
    let errs = rk4_errors(&ModelParams::new(2, 1.0, 1.0).unwrap(), 1.0, &dts).unwrap();
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    verdict(
        "rk4 convergence order",
        ratios.iter().all(|r| (12.0..=20.0).contains(r)),
        format!(
            "terminal errors [{}] for dt {dts:?}, halving ratios {} (want 12..20)",
            errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", "),
            fmt_list(&ratios)
        ),
    );
}
