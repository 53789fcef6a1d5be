//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure. Runs under `cargo test` with its own `main`.

mod common;

use std::time::{Duration, Instant};

use mixquant::oracle::{initial_codebook, lloyd_from};
use mixquant::{
    f_value, lloyd, mixture_density, seed_sequence, select_k, solve, Error, LloydOptions, Parity,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use common::{adaptive_simpson, centroid_residual, mixture_pdf, MIXTURE_BREAKS};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget: Duration) -> Outcome {
    ensure(elapsed <= budget, || format!("took {elapsed:.2?}, budget {budget:.0?}"))
}

// ---------------------------------------------------------------------------

fn small_n_values() -> Outcome {
    let start = Instant::now();
    enum Entry {
        Exact(f64),
        Printed(f64),
    }
    use Entry::{Exact as E, Printed as P};
    let expected: [(usize, f64, f64, Vec<Entry>); 6] = [
        (1, 7.0 / 48.0, 1e-12, vec![E(0.75)]),
        (2, 37.0 / 768.0, 1e-12, vec![E(7.0 / 16.0), E(17.0 / 16.0)]),
        (3, 1.0 / 48.0, 1e-12, vec![E(0.25), E(0.75), E(1.25)]),
        (4, 0.01057, 1e-5, vec![P(0.198223), P(0.59467), P(0.90533), P(1.30178)]),
        (5, 0.00721728, 1e-5, vec![P(0.169821), P(0.509464), E(0.75), P(0.990536), P(1.33018)]),
        (
            6,
            0.00520833,
            1e-5,
            vec![E(0.125), E(0.375), E(0.625), E(0.875), E(1.125), E(1.375)],
        ),
    ];
    for (n, v, tol, pts) in expected {
        let r = solve(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure((r.error - v).abs() < tol, || format!("V{n} = {} vs {v}", r.error))?;
        ensure(r.codebook.len() == pts.len(), || format!("n={n}: {} points", r.codebook.len()))?;
        for (got, want) in r.codebook.points().iter().zip(&pts) {
            let (want, tol) = match *want {
                E(x) => (x, 1e-12),
                P(x) => (x, 1e-4),
            };
            ensure((got - want).abs() < tol, || format!("n={n}: point {got} vs {want}"))?;
        }
    }
    within_budget(start.elapsed(), Duration::from_secs(1))
}

fn sequence_fidelity() -> Outcome {
    let start = Instant::now();
    let listed: [usize; 50] = [
        0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 6, 6, 7, 7, 7, 7, 8, 8, 8, 8, 9,
        9, 10, 10, 10, 10, 11, 11, 11, 11, 12, 12, 13, 13, 13, 13, 14, 14, 14, 14, 15,
    ];
    for (i, &want) in listed.iter().enumerate() {
        let got = seed_sequence(i + 1);
        ensure(got == want, || format!("a({}) = {got}, listed {want}", i + 1))?;
    }
    ensure(seed_sequence(50) == 15, || "a(50)".into())?;
    ensure(seed_sequence(1001) == 304, || format!("a(1001) = {}", seed_sequence(1001)))?;
    within_budget(start.elapsed(), Duration::from_secs(1))
}

fn selector_endpoints() -> Outcome {
    let start = Instant::now();
    for (n, want) in [(5, 1), (6, 2), (9, 3), (50, 15), (1001, 307)] {
        let (k, _) = select_k(n).map_err(|e| format!("n={n}: {e}"))?;
        ensure(k == want, || format!("n={n}: k={k}, expected {want}"))?;
    }
    within_budget(start.elapsed(), Duration::from_secs(30))
}

fn brute_force_equivalence() -> Outcome {
    let start = Instant::now();
    for n in 5..=40usize {
        let half = n / 2;
        let parity = Parity::of(n);
        let (chosen, _) = select_k(n).map_err(|e| format!("n={n}: {e}"))?;
        let mut best: Option<(usize, f64)> = None;
        for k in 1..half {
            let v = match f_value(k, half - k, parity) {
                Ok(v) => v,
                // (1, 1) at n = 5 is the only split and has no F value
                Err(Error::OutsideDomain { .. }) => 0.0,
                Err(Error::Infeasible { .. }) => continue,
                Err(e) => return Err(format!("n={n}, k={k}: {e}")),
            };
            if best.map_or(true, |(_, b)| v < b) {
                best = Some((k, v));
            }
        }
        let (argmin, _) = best.ok_or_else(|| format!("n={n}: no feasible k"))?;
        ensure(chosen == argmin, || format!("n={n}: selector {chosen}, sweep {argmin}"))?;
    }
    within_budget(start.elapsed(), Duration::from_secs(120))
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let density = mixture_density(0.5).unwrap();
    let opts = LloydOptions::default();
    let mut bad = Vec::new();
    for n in 1..=40 {
        let closed = solve(n).map_err(|e| format!("n={n}: {e}"))?;
        let oracle = lloyd(&density, n, &opts).map_err(|e| format!("n={n}: {e}"))?;
        let err_gap = (closed.error - oracle.error).abs();
        let pt_gap = closed.codebook.max_gap(&oracle.codebook).unwrap_or(f64::INFINITY);
        if err_gap >= 1e-7 || pt_gap >= 1e-5 {
            // signed: positive means Lloyd found a lower distortion
            println!(
                "      n={n:2}: closed - oracle = {:+.3e}, codepoint gap {pt_gap:.3e}",
                closed.error - oracle.error
            );
            bad.push(n);
        }
    }
    ensure(bad.is_empty(), || format!("disagreement at n = {bad:?}"))?;
    within_budget(start.elapsed(), Duration::from_secs(300))
}

fn invariants() -> Outcome {
    let pdf = mixture_pdf(0.5);
    let density = mixture_density(0.5).unwrap();
    let results: Vec<_> = (1..=60)
        .map(|n| solve(n).map_err(|e| format!("n={n}: {e}")))
        .collect::<Result<_, _>>()?;

    let mut runner = TestRunner::new(Config { cases: 64, failure_persistence: None, ..Config::default() });
    let check = |runner: &mut TestRunner, name: &str, f: &dyn Fn(usize) -> Result<(), TestCaseError>| {
        runner
            .run(&(1usize..=60), f)
            .map_err(|e| format!("{name}: {e}"))
    };

    check(&mut runner, "centroid stationarity", &|n| {
        let r = centroid_residual(&pdf, &MIXTURE_BREAKS, results[n - 1].codebook.points());
        prop_assert!(r < 1e-9, "n={} residual {:e}", n, r);
        Ok(())
    })?;
    check(&mut runner, "reflection symmetry", &|n| {
        let c = &results[n - 1].codebook;
        let gap = c.max_gap(&c.reflect(0.75)).unwrap();
        prop_assert!(gap < 1e-10, "n={} asymmetry {:e}", n, gap);
        Ok(())
    })?;
    check(&mut runner, "distortion vs formula", &|n| {
        let r = &results[n - 1];
        let d = density.distortion(&r.codebook);
        prop_assert!((d - r.error).abs() < 1e-10, "n={} {} vs {}", n, d, r.error);
        Ok(())
    })?;

    // exhaustive over the small range as well
    for w in results.windows(2) {
        ensure(w[1].error < w[0].error, || format!("V{} >= V{}", w[1].n, w[0].n))?;
    }
    for r in &results[3..] {
        let pts = r.codebook.points();
        let left = pts.iter().any(|&x| x > 0.0 && x < 0.5);
        let mid = pts.iter().any(|&x| x > 0.5 && x < 0.75);
        ensure(left && mid, || format!("n={}: occupancy violated", r.n))?;
    }

    runner
        .run(&(1usize..=30, 1usize..64, any::<u64>()), |(n, restart, seed)| {
            let init = initial_codebook(&density, n, restart, seed).unwrap();
            let run = lloyd_from(&density, init, 500, 1e-12, Some(10));
            for w in run.history.windows(2) {
                prop_assert!(w[1] <= w[0] + 1e-14, "n={} ascent {} -> {}", n, w[0], w[1]);
            }
            Ok(())
        })
        .map_err(|e| format!("Lloyd descent: {e}"))?;

    let quick = |seed| LloydOptions { restarts: 8, seed, ..LloydOptions::default() };
    runner
        .run(&(1usize..=20, any::<u64>()), |(n, seed)| {
            let a = lloyd(&density, n, &quick(seed)).unwrap();
            let b = lloyd(&density, n, &quick(seed)).unwrap();
            prop_assert_eq!(a, b);
            Ok(())
        })
        .map_err(|e| format!("oracle determinism: {e}"))?;
    Ok(())
}

fn general_moments() -> Outcome {
    for p in [0.1, 0.25, 0.5, 0.9] {
        let m = mixture_density(p).map_err(|e| e.to_string())?.moments();
        let pdf = mixture_pdf(p);
        let integrate = |g: &dyn Fn(f64) -> f64| -> f64 {
            MIXTURE_BREAKS.windows(2).map(|w| adaptive_simpson(g, w[0], w[1], 1e-16)).sum()
        };
        let mean_q = integrate(&|x| x * pdf(x));
        let var_q = integrate(&|x| (x - mean_q) * (x - mean_q) * pdf(x));
        let mean_c = (2.0 - p) / 2.0;
        let var_c = (-3.0 * p * p + 3.0 * p + 1.0) / 12.0;
        for (what, got, quad, closed) in
            [("mean", m.mean, mean_q, mean_c), ("variance", m.variance, var_q, var_c)]
        {
            ensure((got - quad).abs() < 1e-12, || format!("p={p}: {what} {got} vs quadrature {quad}"))?;
            ensure((got - closed).abs() < 1e-12, || format!("p={p}: {what} {got} vs {closed}"))?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 small-n values and codebooks", small_n_values),
        ("2 sequence a(n)", sequence_fidelity),
        ("3 selector endpoints", selector_endpoints),
        ("4 selector vs exhaustive sweep, 5 <= n <= 40", brute_force_equivalence),
        ("5 Lloyd oracle agreement, 1 <= n <= 40", oracle_agreement),
        ("6 invariants", invariants),
        ("7 moments for general p", general_moments),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS  {name}  ({took:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  ({took:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
