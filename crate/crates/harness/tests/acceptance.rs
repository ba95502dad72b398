//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use harness::{case_rng, counterexample, run_suite, threshold_report, Report, SuiteConfig};
use polyslice::quadrature::{adaptive, gauss10};
use polyslice::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = (bool, String);

const KINDS: [BodyKind; 3] = [BodyKind::Simplex, BodyKind::CrossPolytope, BodyKind::Cube];

fn separating_query(body: Body, rng: &mut ChaCha8Rng) -> SectionQuery<f64> {
    loop {
        let a = sample_direction::<f64, _>(body, rng);
        let f = apex_frame(body, a.coords());
        let t = f.neighbor_dot + (f.apex_dot - f.neighbor_dot) * rng.random_range(0.02..0.98);
        let q = SectionQuery::new(body, a, t).unwrap();
        if regime_check(&q).is_separating() {
            return q;
        }
    }
}

fn rel(x: f64, y: f64) -> f64 {
    let s = x.abs().max(y.abs());
    if s == 0.0 {
        0.0
    } else {
        (x - y).abs() / s
    }
}

/// Absolute below 1, relative above: oscillatory integrals lose relative accuracy on tiny sections.
fn scaled(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

fn suites_pass(reports: &[Report]) -> Outcome {
    let failed: usize = reports.iter().map(|r| r.summary.failed).sum();
    let passed: usize = reports.iter().map(|r| r.summary.passed).sum();
    let worst = reports.iter().map(|r| r.summary.max_violation).fold(0.0, f64::max);
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.cases.iter().filter(|c| !c.pass && !c.evidence).map(move |c| format!("{} {} n={} t={:.4} {}", r.suite, c.body, c.n, c.t, c.method)))
        .take(5)
        .collect();
    (failed == 0 && passed > 0, format!("{passed} checks passed, {failed} failed, max violation {worst:e} {bad:?}"))
}

fn formula_oracle() -> Outcome {
    let jobs: Vec<(BodyKind, usize)> = KINDS.iter().flat_map(|&k| (3..=7).map(move |n| (k, n))).collect();
    let worst: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(kind, n)| {
            let body = Body::new(kind, n).unwrap();
            let mut rng = case_rng(1, &[kind as u64, n as u64]);
            let (mut wa, mut wp) = (0.0f64, 0.0f64);
            for _ in 0..200 {
                let q = separating_query(body, &mut rng);
                wa = wa.max(rel(closed_a(&q).unwrap().value, section_volume_exact(&q).unwrap()));
                wp = wp.max(rel(closed_p(&q).unwrap().value, perimeter_exact(&q).unwrap()));
            }
            (wa, wp)
        })
        .collect();
    let wa = worst.iter().map(|w| w.0).fold(0.0, f64::max);
    let wp = worst.iter().map(|w| w.1).fold(0.0, f64::max);
    (wa <= 1e-9 && wp <= 1e-9, format!("3000 queries; worst relative gap A {wa:e}, P {wp:e}"))
}

fn printed_examples() -> Outcome {
    let s3 = Body::simplex(3);
    let bar = SectionQuery::new(s3, canonical_direction(s3, Canonical::Alternating).unwrap(), 0.0).unwrap();
    let apex = SectionQuery::new(s3, extremal_direction(s3), 0.0).unwrap();
    let got = [
        (section_volume_exact(&bar).unwrap(), 0.5),
        (section_volume_exact(&apex).unwrap(), 9.0 * 3f64.sqrt() / 32.0),
        (perimeter_exact(&bar).unwrap(), 2.0 * 2f64.sqrt()),
        (perimeter_exact(&apex).unwrap(), 9.0 * 2f64.sqrt() / 4.0),
    ];
    let worst = got.iter().map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    (worst <= 1e-12, format!("values {:?}; worst absolute gap {worst:e}", got.map(|g| g.0)))
}

fn normalization() -> Outcome {
    let jobs: Vec<(BodyKind, usize)> = KINDS.iter().flat_map(|&k| (2..=6).map(move |n| (k, n))).collect();
    let worst: Vec<f64> = jobs
        .par_iter()
        .map(|&(kind, n)| {
            let body = Body::new(kind, n).unwrap();
            let mut rng = case_rng(3, &[kind as u64, n as u64]);
            let mut worst = 0.0f64;
            for _ in 0..20 {
                let a = sample_direction::<f64, _>(body, &mut rng);
                let mut knots: Vec<f64> = (0..body.vertex_count()).map(|v| body.vertex_dot(a.coords(), v)).collect();
                knots.sort_by(f64::total_cmp);
                knots.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
                let area = |t: f64| section_volume_exact(&SectionQuery::new(body, a.clone(), t).unwrap()).unwrap();
                let total: f64 = knots.windows(2).map(|w| gauss10(&area, w[0], w[1])).sum();
                worst = worst.max(rel(total, body.volume::<f64>()));
            }
            worst
        })
        .collect();
    let worst = worst.into_iter().fold(0.0, f64::max);
    (worst <= 1e-6, format!("300 directions, n = 2..6; worst relative error {worst:e}"))
}

fn run(id: &str, ns: std::ops::RangeInclusive<usize>) -> Report {
    run_suite(id, ns, &SuiteConfig::default()).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn volume_sweeps() -> Outcome {
    let mut reports: Vec<Report> =
        ["simplex-volume-max", "crosspolytope-volume-max", "cube-volume-max"].iter().map(|id| run(id, 3..=8)).collect();
    let ce = counterexample("simplex-n2-volume", 42).unwrap();
    let (ok, msg) = {
        reports.push(ce.clone());
        suites_pass(&reports)
    };
    let c = &ce.cases[0];
    (ok, format!("{msg}; n=2 t=0.45: {:.6} > {:.6}", c.value, c.bound))
}

fn perimeter_sweeps() -> Outcome {
    let reports =
        [("simplex-perimeter-max", 5..=8), ("crosspolytope-perimeter-max", 4..=8), ("cube-perimeter-max", 4..=8)].map(|(id, ns)| run(id, ns));
    suites_pass(&reports)
}

fn threshold_scans() -> Outcome {
    let cfg = SuiteConfig::default();
    let plan = [
        (BodyKind::Simplex, Functional::Volume, 3..=7),
        (BodyKind::Simplex, Functional::Perimeter, 4..=7),
        (BodyKind::CrossPolytope, Functional::Volume, 3..=7),
        (BodyKind::Cube, Functional::Volume, 3..=7),
        (BodyKind::Cube, Functional::Perimeter, 6..=7),
        (BodyKind::Cube, Functional::Perimeter, 3..=3),
    ];
    let reports: Vec<Report> = plan.into_iter().map(|(k, f, ns)| threshold_report(k, f, ns, &cfg).unwrap()).collect();
    let gap = reports.iter().flat_map(|r| &r.cases).map(|c| (c.value - c.bound).abs()).fold(0.0, f64::max);
    let (ok, msg) = suites_pass(&reports);
    (ok, format!("{msg}; largest gap {gap:e}"))
}

fn central_perimeters() -> Outcome {
    suites_pass(&[run("crosspolytope-central-perimeter", 3..=7), run("simplex-central-perimeter", 3..=7)])
}

fn cube_half_perimeter() -> Outcome {
    let r = run("cube-half-perimeter", 3..=7);
    let mins: Vec<String> = r
        .cases
        .iter()
        .filter(|c| c.method == "sampled-min-perimeter")
        .map(|c| format!("n={} min {:.4} at {:?}", c.n, c.value, c.a_canonical.iter().map(|x| (x * 1e3).round() / 1e3).collect::<Vec<_>>()))
        .collect();
    let (ok, msg) = suites_pass(&[r]);
    (ok, format!("{msg}; {}", mins.join("; ")))
}

fn monte_carlo() -> Outcome {
    let inside: Vec<bool> = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(9, &[i]);
            loop {
                let kind = KINDS[rng.random_range(0..3)];
                let body = Body::new(kind, rng.random_range(3..=6)).unwrap();
                let a = sample_direction::<f64, _>(body, &mut rng);
                let f = apex_frame(body, a.coords());
                let t = f.min_dot + (f.apex_dot - f.min_dot) * rng.random_range(0.1..0.9);
                let q = SectionQuery::new(body, a, t).unwrap();
                match section_volume_mc(&q, 1_000_000, oracle::default_slab_eps(body), &mut rng) {
                    Ok(est) => return (est.value - section_volume_exact(&q).unwrap()).abs() <= 3.0 * est.std_error,
                    Err(SliceError::InsufficientHits { .. }) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
        })
        .collect();
    let hits = inside.iter().filter(|&&x| x).count();
    (hits >= 99, format!("{hits}/100 exact values within 3σ"))
}

/// (1/2π)∫ Re Π 1/(1 + i c s) ds after s = tan θ.
fn rational_by_quadrature(c: &[f64]) -> f64 {
    let f = |theta: f64| {
        let s = theta.tan();
        let (mut re, mut im) = (1.0, 0.0);
        for &ck in c {
            // divide by 1 + i·ck·s
            let d = 1.0 + ck * ck * s * s;
            let (x, y) = (re + im * ck * s, im - re * ck * s);
            re = x / d;
            im = y / d;
        }
        re * (1.0 + s * s)
    };
    let h = std::f64::consts::FRAC_PI_2;
    adaptive(f, -h, h, 1e-13, 1e-12, 20_000).unwrap() / (2.0 * std::f64::consts::PI)
}

fn integral_representations() -> Outcome {
    let mut rng = case_rng(10, &[]);
    let (mut wa, mut wp, mut wr) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..50 {
        let n = 3 + i % 4;
        let q = separating_query(Body::cube(n), &mut rng);
        wa = wa.max(scaled(analytic_a_integral(&q).unwrap().value, closed_a(&q).unwrap().value));
        let q = separating_query(Body::simplex(n), &mut rng);
        wp = wp.max(scaled(analytic_p_integral(&q).unwrap().value, closed_p(&q).unwrap().value));
    }
    let mut done = 0;
    while done < 50 {
        let m = rng.random_range(2..=6);
        let c: Vec<f64> = (0..m).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut sorted = c.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[1] - w[0] < 0.05) || c.iter().any(|x| x.abs() < 0.05) {
            continue;
        }
        wr = wr.max((rational_product_integral(&c).unwrap() - rational_by_quadrature(&c)).abs());
        done += 1;
    }
    (wa <= 1e-8 && wp <= 1e-8 && wr <= 1e-7, format!("cube A {wa:e}, simplex P {wp:e}, rational {wr:e}"))
}

fn uniqueness_and_locality() -> Outcome {
    let mut points = Vec::new();
    for kind in KINDS {
        for f in [Functional::Volume, Functional::Perimeter] {
            for n in 2..=6 {
                let body = Body::new(kind, n).unwrap();
                if let Some((lo, hi)) = maximality_range::<f64>(body, f) {
                    for i in 0..5 {
                        points.push((body, f, lo + (hi - lo) * (i + 1) as f64 / 6.0, i));
                    }
                }
            }
        }
    }
    let misses: Vec<String> = points
        .par_iter()
        .filter_map(|&(body, f, t, i)| {
            let mut rng = case_rng(11, &[body.kind as u64, f as u64, body.n as u64, i as u64]);
            let (d, _) = sphere_maximize(body, t, f, 64, &mut rng).unwrap();
            let want = canonicalize(&extremal_direction(body));
            let far = d.coords().iter().zip(want.coords()).any(|(x, y)| (x - y).abs() > 1e-6);
            far.then(|| format!("{:?} {} n={} t={t:.4}", body.kind, f.name(), body.n))
        })
        .collect();
    let mut wrong = Vec::new();
    for n in 3..=6 {
        let s = Body::simplex(n);
        let x = Body::cross_polytope(n);
        let c = s.thresholds::<f64>().volume_flip;
        let low = -1.0 / ((n * (n + 1)) as f64).sqrt();
        for t in [low + 0.25 * (c - low), 0.5 * (low + c), c - 0.25 * (c - low)] {
            if classify(s, &extremal_direction(s), t, Functional::Volume).unwrap().classification != Classification::LocalMin {
                wrong.push(format!("simplex n={n} t={t:.4}"));
            }
        }
        let m = 3.0 / (n + 2) as f64;
        for t in [0.25 * m, 0.5 * m, 0.75 * m] {
            if classify(x, &extremal_direction(x), t, Functional::Volume).unwrap().classification != Classification::LocalMin {
                wrong.push(format!("crosspolytope n={n} t={t:.4}"));
            }
        }
    }
    (
        misses.is_empty() && wrong.is_empty(),
        format!("{} maximisations, misses {misses:?}; 24 local-minimum checks, wrong {wrong:?}", points.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("closed forms agree with the exact oracle", formula_oracle),
        ("printed simplex examples", printed_examples),
        ("section volumes integrate to the body volume", normalization),
        ("volume maximality sweeps", volume_sweeps),
        ("perimeter maximality sweeps", perimeter_sweeps),
        ("threshold scans", threshold_scans),
        ("central perimeter bounds", central_perimeters),
        ("cube perimeter at distance one half", cube_half_perimeter),
        ("Monte Carlo coverage", monte_carlo),
        ("integral representations", integral_representations),
        ("maximiser uniqueness and local minima", uniqueness_and_locality),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            (false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        all &= ok;
        println!(
            "criterion {:>2} {}: {} ({:.1}s) {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
