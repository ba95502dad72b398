//! Sampled checks of the maximality, local-extremum and central-section
//! inequalities, one suite per statement.

use std::ops::RangeInclusive;

use polyslice::{
    canonical_direction, canonicalize, closed, extremal_direction, extremal_value, factorial, hessian_eigenvalues,
    make_direction, maximality_range, perimeter_exact, sample_direction, section_value, section_volume_exact,
    threshold_scan, Body, BodyKind, Canonical, Direction64, Functional, Objective, SectionQuery,
};
use rand::Rng;
use rayon::prelude::*;

use crate::report::{CaseRecord, Relation, Report};
use crate::{case_rng, HarnessError};

/// Largest `n` for suites that call the exact oracle.
pub const MAX_EXACT_N: usize = 8;
/// Largest `n` for suites built on closed forms alone.
pub const MAX_CLOSED_N: usize = 12;

pub const SUITES: &[&str] = &[
    "simplex-volume-max",
    "simplex-perimeter-max",
    "crosspolytope-volume-max",
    "crosspolytope-perimeter-max",
    "cube-volume-max",
    "cube-perimeter-max",
    "simplex-volume-local",
    "simplex-perimeter-local",
    "crosspolytope-volume-local",
    "crosspolytope-perimeter-local",
    "cube-volume-local",
    "cube-perimeter-local",
    "crosspolytope-central-perimeter",
    "simplex-central-perimeter",
    "cube-half-perimeter",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Directions per offset in the maximality sweeps.
    pub samples: usize,
    /// Directions per dimension in the suites that use the exact oracle.
    pub exact_samples: usize,
    /// Offsets per interval.
    pub t_points: usize,
    /// Overrides the suite's default tolerance.
    pub tol: Option<f64>,
    /// Restrict the sweeps to a single offset.
    pub t: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, samples: 10_000, exact_samples: 1_000, t_points: 5, tol: None, t: None }
    }
}

#[derive(Clone, Copy)]
enum Expect {
    Max,
    Min,
}

#[derive(Clone, Copy)]
enum Suite {
    Max(BodyKind, Functional),
    Local(BodyKind, Functional),
    CrossCentral,
    SimplexCentral,
    CubeHalf,
}

fn parse(id: &str) -> Option<Suite> {
    use BodyKind::*;
    use Functional::*;
    Some(match id {
        "simplex-volume-max" => Suite::Max(Simplex, Volume),
        "simplex-perimeter-max" => Suite::Max(Simplex, Perimeter),
        "crosspolytope-volume-max" => Suite::Max(CrossPolytope, Volume),
        "crosspolytope-perimeter-max" => Suite::Max(CrossPolytope, Perimeter),
        "cube-volume-max" => Suite::Max(Cube, Volume),
        "cube-perimeter-max" => Suite::Max(Cube, Perimeter),
        "simplex-volume-local" => Suite::Local(Simplex, Volume),
        "simplex-perimeter-local" => Suite::Local(Simplex, Perimeter),
        "crosspolytope-volume-local" => Suite::Local(CrossPolytope, Volume),
        "crosspolytope-perimeter-local" => Suite::Local(CrossPolytope, Perimeter),
        "cube-volume-local" => Suite::Local(Cube, Volume),
        "cube-perimeter-local" => Suite::Local(Cube, Perimeter),
        "crosspolytope-central-perimeter" => Suite::CrossCentral,
        "simplex-central-perimeter" => Suite::SimplexCentral,
        "cube-half-perimeter" => Suite::CubeHalf,
        _ => return None,
    })
}

pub fn run_suite(id: &str, n_range: RangeInclusive<usize>, cfg: &SuiteConfig) -> Result<Report, HarnessError> {
    let suite = parse(id).ok_or_else(|| HarnessError::UnknownSuite(id.to_string()))?;
    let exact = matches!(suite, Suite::CrossCentral | Suite::SimplexCentral | Suite::CubeHalf);
    let limit = if exact { MAX_EXACT_N } else { MAX_CLOSED_N };
    if *n_range.end() > limit {
        return Err(HarnessError::ResourceLimit(format!("suite `{id}` supports n <= {limit}")));
    }
    if *n_range.start() < 2 {
        return Err(HarnessError::InvalidArgument("n must be at least 2".into()));
    }
    let ns: Vec<usize> = n_range.collect();
    let cases = match suite {
        Suite::Max(kind, f) => max_suite(kind, f, &ns, cfg)?,
        Suite::Local(kind, f) => local_suite(kind, f, &ns, cfg)?,
        Suite::CrossCentral => central_suite(BodyKind::CrossPolytope, &ns, cfg)?,
        Suite::SimplexCentral => central_suite(BodyKind::Simplex, &ns, cfg)?,
        Suite::CubeHalf => cube_half_suite(&ns, cfg)?,
    };
    Ok(Report::assemble(id, cfg.seed, cases))
}

/// `k` points spread inside the open interval `(lo, hi)`.
fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| lo + (hi - lo) * (i + 1) as f64 / (k + 1) as f64).collect()
}

fn perturbed(body: Body, center: &Direction64, rng: &mut impl Rng) -> Direction64 {
    let sigma = 10f64.powf(rng.random_range(-4.0..-0.5));
    let g = sample_direction::<f64, _>(body, rng);
    let v: Vec<f64> = center.coords().iter().zip(g.coords()).map(|(c, x)| c + sigma * x).collect();
    make_direction(&v, body).unwrap_or_else(|_| center.clone())
}

fn offsets(cfg: &SuiteConfig, lo: f64, hi: f64) -> Vec<f64> {
    match cfg.t {
        Some(t) => vec![t],
        None => grid(lo, hi, cfg.t_points),
    }
}

fn max_suite(kind: BodyKind, f: Functional, ns: &[usize], cfg: &SuiteConfig) -> Result<Vec<CaseRecord>, HarnessError> {
    let mut jobs = Vec::new();
    for &n in ns {
        let body = Body::new(kind, n)?;
        let Some((lo, hi)) = maximality_range::<f64>(body, f) else { continue };
        for (i, t) in offsets(cfg, lo, hi).into_iter().enumerate() {
            jobs.push((body, t, i, false));
        }
        // Only numerical evidence is known below the proved range here.
        if kind == BodyKind::CrossPolytope && f == Functional::Perimeter && n == 3 && cfg.t.is_none() {
            for (i, t) in grid(std::f64::consts::FRAC_1_SQRT_2, lo, cfg.t_points).into_iter().enumerate() {
                jobs.push((body, t, 100 + i, true));
            }
        }
    }
    let rows: Result<Vec<Vec<CaseRecord>>, HarnessError> = jobs
        .par_iter()
        .map(|&(body, t, i, evidence)| {
            let mut rng = case_rng(cfg.seed, &[kind as u64, f as u64, body.n as u64, i as u64]);
            let mut rows = max_case(body, f, t, cfg, &mut rng)?;
            if evidence {
                rows = rows.into_iter().map(CaseRecord::as_evidence).collect();
            }
            Ok(rows)
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Largest sampled value against the extremal direction's value at one offset.
pub fn max_case(body: Body, f: Functional, t: f64, cfg: &SuiteConfig, rng: &mut impl Rng) -> Result<Vec<CaseRecord>, HarnessError> {
    let name = body.kind.name();
    let apex = extremal_direction::<f64>(body);
    let canonical = extremal_value(body, t, f).value;
    let (mut best, mut best_a) = (f64::NEG_INFINITY, apex.clone());
    let mut spot = 0.0f64;
    let mut spots = 0;
    for i in 0..cfg.samples {
        let a = if i % 2 == 0 { sample_direction::<f64, _>(body, rng) } else { perturbed(body, &apex, rng) };
        let v = section_value(body, a.coords(), t, f)?;
        if i % 100 == 0 && body.n <= MAX_EXACT_N {
            let q = SectionQuery::new(body, a.clone(), t)?;
            let e = match f {
                Functional::Volume => section_volume_exact(&q)?,
                Functional::Perimeter => perimeter_exact(&q)?,
            };
            let scale = v.abs().max(e.abs());
            if scale > 0.0 {
                spot = spot.max((v - e).abs() / scale);
            }
            spots += 1;
        }
        if v > best {
            best = v;
            best_a = a;
        }
    }
    let tol = cfg.tol.unwrap_or(1e-12);
    let mut rows = vec![CaseRecord::new(name, body.n, t, &format!("sweep-{}", f.name()), best, canonical, Relation::Le, tol)
        .with_direction(canonicalize(&best_a).coords())
        .with_samples(cfg.samples)];
    if spots > 0 {
        rows.push(CaseRecord::new(name, body.n, t, "oracle-spot-check", spot, 1e-9, Relation::Le, 0.0).with_samples(spots));
    }
    let q = SectionQuery::new(body, apex.clone(), t)?;
    let formula = closed(&q, f)?.value;
    rows.push(
        CaseRecord::new(name, body.n, t, &format!("extremal-{}", f.name()), formula, canonical, Relation::Rel, 1e-12)
            .with_direction(apex.coords()),
    );
    Ok(rows)
}

/// Intervals of `t` with the expected type of the extremal direction.
fn local_intervals(body: Body, f: Functional) -> Vec<(f64, f64, Expect)> {
    let n = body.n;
    let nf = n as f64;
    let th = body.thresholds::<f64>();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    match (body.kind, f) {
        (BodyKind::Simplex, Functional::Volume) if n >= 3 => {
            let low = -1.0 / (nf * (nf + 1.0)).sqrt();
            vec![(th.volume_flip, th.edge_midpoint, Expect::Max), (low, th.volume_flip, Expect::Min)]
        }
        (BodyKind::Simplex, Functional::Perimeter) if n >= 4 => {
            vec![(th.perimeter_flip.expect("n >= 3"), th.edge_midpoint, Expect::Max)]
        }
        (BodyKind::CrossPolytope, Functional::Volume) if n >= 3 => {
            vec![(th.volume_flip, half, Expect::Max), (0.0, th.volume_flip, Expect::Min)]
        }
        (BodyKind::CrossPolytope, Functional::Perimeter) if n >= 6 => vec![(4.0 / nf, half, Expect::Max)],
        (BodyKind::Cube, Functional::Volume) if n >= 5 => {
            vec![(th.cube_regime_floor.expect("cube"), th.edge_midpoint, Expect::Max)]
        }
        (BodyKind::Cube, Functional::Perimeter) if n >= 6 => {
            vec![(th.cube_regime_floor.expect("cube"), th.edge_midpoint, Expect::Max)]
        }
        _ => Vec::new(),
    }
}

fn local_suite(kind: BodyKind, f: Functional, ns: &[usize], cfg: &SuiteConfig) -> Result<Vec<CaseRecord>, HarnessError> {
    let mut jobs = Vec::new();
    for &n in ns {
        let body = Body::new(kind, n)?;
        for (lo, hi, expect) in local_intervals(body, f) {
            for t in offsets(cfg, lo, hi) {
                jobs.push((body, t, expect));
            }
        }
    }
    let rows: Result<Vec<CaseRecord>, HarnessError> =
        jobs.par_iter().map(|&(body, t, expect)| local_case(body, f, t, expect)).collect();
    rows
}

fn local_case(body: Body, f: Functional, t: f64, expect: Expect) -> Result<CaseRecord, HarnessError> {
    let a = extremal_direction::<f64>(body);
    let eig = hessian_eigenvalues(body, &a, t, Objective::Full(f))?;
    let (lo, hi) = eig.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let name = body.kind.name();
    let rec = match expect {
        Expect::Max => CaseRecord::new(name, body.n, t, &format!("hessian-{}-max-eig", f.name()), hi, 0.0, Relation::Lt, 0.0),
        Expect::Min => CaseRecord::new(name, body.n, t, &format!("hessian-{}-min-eig", f.name()), lo, 0.0, Relation::Gt, 0.0),
    };
    Ok(rec.with_direction(a.coords()))
}

fn exact_perimeter(body: Body, a: &Direction64, t: f64) -> Result<f64, HarnessError> {
    Ok(perimeter_exact(&SectionQuery::new(body, a.clone(), t)?)?)
}

/// Largest sampled value of `P(·,t)` with its canonical direction.
fn sampled_perimeter_extremes(
    body: Body,
    t: f64,
    samples: usize,
    seed: u64,
) -> Result<((f64, Direction64), (f64, Direction64)), HarnessError> {
    let chunk = 50;
    let parts: Result<Vec<Vec<(f64, Direction64)>>, HarnessError> = (0..samples.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut rng = case_rng(seed, &[body.kind as u64, body.n as u64, c as u64, t.to_bits()]);
            let m = chunk.min(samples - c * chunk);
            (0..m)
                .map(|_| {
                    let a = sample_direction::<f64, _>(body, &mut rng);
                    Ok((exact_perimeter(body, &a, t)?, a))
                })
                .collect()
        })
        .collect();
    let all: Vec<(f64, Direction64)> = parts?.into_iter().flatten().collect();
    let lo = all.iter().min_by(|x, y| x.0.total_cmp(&y.0)).cloned().ok_or(HarnessError::InvalidArgument("no samples".into()))?;
    let hi = all.iter().max_by(|x, y| x.0.total_cmp(&y.0)).cloned().expect("non-empty");
    Ok(((lo.0, canonicalize(&lo.1)), (hi.0, canonicalize(&hi.1))))
}

fn central_suite(kind: BodyKind, ns: &[usize], cfg: &SuiteConfig) -> Result<Vec<CaseRecord>, HarnessError> {
    let tol = cfg.tol.unwrap_or(1e-12);
    let mut rows = Vec::new();
    for &n in ns.iter().filter(|&&n| n >= 3) {
        let body = Body::new(kind, n)?;
        let nf = n as f64;
        let name = kind.name();
        let (reference, factor, formula) = match kind {
            BodyKind::CrossPolytope => {
                let e1 = extremal_direction::<f64>(body);
                let formula = (nf - 1.0).sqrt() / factorial::<f64>(n - 2) * 2f64.powi(n as i32 - 1);
                (e1, (nf / (nf - 1.0)).sqrt(), formula)
            }
            _ => {
                let a2 = canonical_direction::<f64>(body, Canonical::TwoCoordinate)?;
                let formula = (nf - 1.0).sqrt() / factorial::<f64>(n - 2) * ((nf * (nf - 1.0)).sqrt() / 2f64.sqrt() + 1.0);
                (a2, 1.0 + 1.0 / nf, formula)
            }
        };
        let p_ref = exact_perimeter(body, &reference, 0.0)?;
        rows.push(CaseRecord::new(name, n, 0.0, "reference-perimeter", p_ref, formula, Relation::Rel, 1e-12).with_direction(reference.coords()));
        let (_, (hi, hi_a)) = sampled_perimeter_extremes(body, 0.0, cfg.exact_samples, cfg.seed)?;
        rows.push(
            CaseRecord::new(name, n, 0.0, "sampled-max-perimeter", hi, factor * p_ref, Relation::Le, tol)
                .with_direction(hi_a.coords())
                .with_samples(cfg.exact_samples),
        );
    }
    Ok(rows)
}

fn cube_half_suite(ns: &[usize], cfg: &SuiteConfig) -> Result<Vec<CaseRecord>, HarnessError> {
    let tol = cfg.tol.unwrap_or(1e-12);
    let mut rows = Vec::new();
    for &n in ns.iter().filter(|&&n| n >= 3) {
        let body = Body::cube(n);
        let nf = n as f64;
        let central_max = 2.0 * ((nf - 2.0) * 2f64.sqrt() + 1.0);
        let a2 = canonical_direction::<f64>(body, Canonical::TwoCoordinate)?;
        let p2 = exact_perimeter(body, &a2, 0.0)?;
        rows.push(CaseRecord::new("cube", n, 0.0, "two-coordinate-central", p2, central_max, Relation::Rel, 1e-12).with_direction(a2.coords()));
        let ((lo, lo_a), (hi, hi_a)) = sampled_perimeter_extremes(body, 0.5, cfg.exact_samples, cfg.seed)?;
        rows.push(
            CaseRecord::new("cube", n, 0.5, "sampled-min-perimeter", lo, nf / 17.0, Relation::Ge, tol)
                .with_direction(lo_a.coords())
                .with_samples(cfg.exact_samples)
                .with_note("a_canonical is the empirical minimiser"),
        );
        rows.push(
            CaseRecord::new("cube", n, 0.5, "sampled-max-perimeter", hi, central_max, Relation::Le, tol)
                .with_direction(hi_a.coords())
                .with_samples(cfg.exact_samples),
        );
    }
    Ok(rows)
}

/// Bisected flip offsets against the analytic thresholds.
pub fn threshold_report(kind: BodyKind, f: Functional, ns: RangeInclusive<usize>, cfg: &SuiteConfig) -> Result<Report, HarnessError> {
    if *ns.end() > MAX_CLOSED_N {
        return Err(HarnessError::ResourceLimit(format!("threshold scans support n <= {MAX_CLOSED_N}")));
    }
    let tol = cfg.tol.unwrap_or(1e-6);
    let ns: Vec<usize> = ns.collect();
    let rows: Result<Vec<CaseRecord>, HarnessError> = ns
        .par_iter()
        .map(|&n| {
            let body = Body::new(kind, n)?;
            let r = threshold_scan(body, f, n)?;
            let method = match r.objective {
                Objective::Full(_) => format!("flip-{}", f.name()),
                Objective::Reduced(_) => format!("flip-{}-reduced", f.name()),
            };
            Ok(CaseRecord::new(kind.name(), n, r.analytic, &method, r.empirical, r.analytic, Relation::Abs, tol)
                .with_direction(extremal_direction::<f64>(body).coords()))
        })
        .collect();
    Ok(Report::assemble(&format!("thresholds-{}-{}", kind.name(), f.name()), cfg.seed, rows?))
}
