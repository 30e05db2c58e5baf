//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hyppoisson_core::quadrature::DEFAULT_GRID_SIZE;
use hyppoisson_core::verify::{self, SuiteConfig};
use hyppoisson_core::{Result, ZonalGrid};

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn criterion<F>(id: u32, name: &'static str, budget_s: u64, body: F) -> Line
where
    F: FnOnce() -> Result<(bool, String)>,
{
    let start = Instant::now();
    let (pass, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    Line { id, name, pass: pass && elapsed <= budget, detail, elapsed, budget }
}

fn within(residual: f64, tol: f64) -> (bool, String) {
    (residual <= tol, format!("residual {residual:.3e} <= {tol:.0e}"))
}

fn seed() -> u64 {
    SuiteConfig::default().seed
}

fn grid(n: u32) -> Result<ZonalGrid> {
    ZonalGrid::normalized(n, DEFAULT_GRID_SIZE)
}

fn verify_report(path: &std::path::Path) -> std::io::Result<(bool, Vec<u8>)> {
    let status = Command::new(env!("CARGO_BIN_EXE_hyppoisson"))
        .args(["verify", "--n", "2", "--output"])
        .arg(path)
        .env_remove("HYPPOISSON_GRID")
        .status()?;
    Ok((status.success(), std::fs::read(path)?))
}

fn main() -> ExitCode {
    let lines = vec![
        criterion(1, "takahashi integral", 10, || Ok(within(verify::check_takahashi(seed())?, 1e-8))),
        criterion(2, "bateman integral", 10, || Ok(within(verify::check_bateman(seed())?, 1e-8))),
        criterion(3, "contiguous relation", 5, || {
            let (printed, classical) = verify::check_contiguous(seed())?;
            let (pass, detail) = within(classical, 1e-10);
            Ok((pass, format!("{detail}, sign (a-b) [printed (b-a): {printed:.2e}]")))
        }),
        criterion(4, "kernel K-invariance", 5, || Ok(within(verify::check_kernel_invariance(2, seed())?, 1e-11))),
        criterion(5, "elementary spherical vs oracle", 60, || {
            let r2 = verify::check_elementary(&grid(2)?)?;
            let r3 = verify::check_elementary(&grid(3)?)?;
            let (pass, detail) = within(r2.max(r3), 1e-6);
            Ok((pass, format!("{detail} (n=2: {r2:.2e}, n=3: {r3:.2e})")))
        }),
        criterion(6, "scalarity and generalized spherical", 300, || {
            let g = grid(2)?;
            let (spreads, _) = verify::check_scalarity_profiles(&g)?;
            let points = verify::check_scalarity_points(&g)?;
            let winner = if spreads[0] <= spreads[1] { "r^q" } else { "r^p" };
            let pass = spreads[0].min(spreads[1]) < 1e-5 && points < 1e-6;
            Ok((
                pass,
                format!(
                    "spread {:.3e} < 1e-5, exponent {winner} wins (r^q {:.2e}, r^p {:.2e}), point spread {points:.2e} < 1e-6",
                    spreads[0].min(spreads[1]),
                    spreads[0],
                    spreads[1]
                ),
            ))
        }),
        criterion(7, "limit law", 60, || Ok(within(verify::check_limit(2)?, 1e-3))),
        criterion(8, "Phi_00 consistency", 10, || {
            let prop = verify::check_zonal_ratio(2)?;
            let collapse = verify::check_bracket_collapse(2)?;
            Ok((prop < 1e-8 && collapse < 1e-9, format!("ratio spread {prop:.2e} < 1e-8, collapse {collapse:.2e} < 1e-9")))
        }),
        criterion(9, "sandwich inequality", 120, || Ok(within(verify::check_sandwich(&grid(2)?, seed())?, 1e-12))),
        criterion(10, "inversion", 30, || {
            let (residual, errors) = verify::check_inversion(&grid(2)?)?;
            let (pass, detail) = within(residual, 1e-2);
            let errors: Vec<_> = errors.iter().map(|e| format!("{e:.2e}")).collect();
            Ok((pass, format!("{detail}, errors along 0.9/0.99/0.999: {}", errors.join(" > "))))
        }),
        criterion(11, "determinism", 600, || {
            let dir = tempfile::tempdir().expect("temporary directory");
            let run = |name: &str| verify_report(&dir.path().join(name)).map_err(|e| hyppoisson_core::Error::Domain(e.to_string()));
            let (ok_a, a) = run("a.json")?;
            let (ok_b, b) = run("b.json")?;
            let same = a == b;
            Ok((same && ok_a && ok_b, format!("byte-identical: {same}, {} bytes, exit 0: {}", a.len(), ok_a && ok_b)))
        }),
    ];

    let mut failures = 0;
    for l in &lines {
        failures += usize::from(!l.pass);
        println!(
            "criterion {:>2} {:<36} {}  {} [{:.1} s of {} s]",
            l.id,
            l.name,
            if l.pass { "PASS" } else { "FAIL" },
            l.detail,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", lines.len() - failures, lines.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
