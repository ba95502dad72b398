use std::io::Write;
use std::ops::RangeInclusive;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harness::suites::max_case;
use harness::{case_rng, counterexample, run_suite, threshold_report, CaseRecord, Format, HarnessError, Relation, Report, SuiteConfig};
use polyslice::{
    analytic_a_integral, analytic_p_integral, closed, extremal_direction, make_direction, multistart_ascent, perimeter_exact,
    section_volume_exact, section_volume_mc, structured_critical_points, Body, BodyKind, Classification, Functional,
    SectionQuery,
};

#[derive(Parser)]
#[command(name = "polyslice", version, about = "Hyperplane sections of the simplex, cross-polytope and cube")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Evaluate A and P for one direction and offset.
    Eval(Common),
    /// Compare random directions with the extremal direction at offsets in the maximality range.
    Sweep(Common),
    /// Structured critical points and a multistart maximisation.
    Extrema(Common),
    /// Locate the offset where the extremal direction turns into a local maximum.
    Thresholds(Common),
    /// Run a named verification suite.
    Verify(Common),
    /// Reconstruct a known counterexample.
    Counterexample(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum BodyArg {
    Simplex,
    Crosspolytope,
    Cube,
}

impl From<BodyArg> for BodyKind {
    fn from(b: BodyArg) -> Self {
        match b {
            BodyArg::Simplex => BodyKind::Simplex,
            BodyArg::Crosspolytope => BodyKind::CrossPolytope,
            BodyArg::Cube => BodyKind::Cube,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Exact,
    Mc,
    Integral,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionalArg {
    Volume,
    Perimeter,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum)]
    body: Option<BodyArg>,
    /// Dimension, or an inclusive range such as `3..6`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Comma-separated coordinates, normalised (and centred for the simplex).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, value_enum, default_value = "closed")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "volume")]
    functional: FunctionalArg,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Suite id for `verify`.
    #[arg(long)]
    suite: Option<String>,
    /// Counterexample id.
    #[arg(long)]
    id: Option<String>,
    /// Record the wall-clock runtime (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn usage(msg: impl Into<String>) -> HarnessError {
    HarnessError::InvalidArgument(msg.into())
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, HarnessError> {
    let bad = || usage(format!("cannot parse dimension `{s}`"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..=").or_else(|| s.split_once("..")) {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        Ok(a..=b)
    } else {
        let n = num(s)?;
        Ok(n..=n)
    }
}

impl Common {
    fn range(&self) -> Result<RangeInclusive<usize>, HarnessError> {
        parse_range(self.n.as_deref().ok_or_else(|| usage("--n is required"))?)
    }

    fn single_n(&self) -> Result<usize, HarnessError> {
        let r = self.range()?;
        if r.start() != r.end() {
            return Err(usage("this verb takes a single dimension"));
        }
        Ok(*r.start())
    }

    fn body(&self) -> Result<Body, HarnessError> {
        let kind: BodyKind = self.body.ok_or_else(|| usage("--body is required"))?.into();
        Ok(Body::new(kind, self.single_n()?)?)
    }

    fn kind(&self) -> Result<BodyKind, HarnessError> {
        Ok(self.body.ok_or_else(|| usage("--body is required"))?.into())
    }

    fn t(&self) -> Result<f64, HarnessError> {
        self.t.ok_or_else(|| usage("--t is required"))
    }

    fn functional(&self) -> Functional {
        match self.functional {
            FunctionalArg::Volume => Functional::Volume,
            FunctionalArg::Perimeter => Functional::Perimeter,
        }
    }

    fn config(&self) -> SuiteConfig {
        let mut cfg = SuiteConfig { seed: self.seed, tol: self.tol, t: self.t, ..SuiteConfig::default() };
        if let Some(s) = self.samples {
            cfg.samples = s;
            cfg.exact_samples = s;
        }
        cfg
    }

    fn direction(&self, body: Body) -> Result<Vec<f64>, HarnessError> {
        match &self.a {
            None => Ok(extremal_direction::<f64>(body).into_coords()),
            Some(s) => {
                let v: Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
                let v = v.map_err(|_| usage(format!("cannot parse direction `{s}`")))?;
                Ok(make_direction(&v, body)?.into_coords())
            }
        }
    }
}

fn eval(c: &Common) -> Result<Report, HarnessError> {
    let body = c.body()?;
    let t = c.t()?;
    let a = c.direction(body)?;
    let q = SectionQuery::from_raw(body, &a, t)?;
    let name = body.kind.name();
    let tol = c.tol.unwrap_or(1e-9);
    let exact_ok = body.n <= harness::suites::MAX_EXACT_N;
    let exact_a = || section_volume_exact(&q);
    let exact_p = || perimeter_exact(&q);
    let mut rows = Vec::new();
    let mut push = |method: &str, value: f64, reference: Option<f64>, rel: Relation, tol: f64| {
        let bound = reference.unwrap_or(value);
        rows.push(CaseRecord::new(name, body.n, t, method, value, bound, rel, tol).with_direction(&a));
    };
    match c.method {
        MethodArg::Closed => {
            for f in [Functional::Volume, Functional::Perimeter] {
                let v = closed(&q, f)?.value;
                let reference = if exact_ok {
                    Some(match f {
                        Functional::Volume => exact_a()?,
                        Functional::Perimeter => exact_p()?,
                    })
                } else {
                    None
                };
                push(&format!("closed-{}", f.name()), v, reference, Relation::Rel, tol);
            }
        }
        MethodArg::Exact => {
            if !exact_ok {
                return Err(HarnessError::ResourceLimit(format!("the exact oracle supports n <= {}", harness::suites::MAX_EXACT_N)));
            }
            push("exact-volume", exact_a()?, None, Relation::Rel, tol);
            push("exact-perimeter", exact_p()?, None, Relation::Rel, tol);
        }
        MethodArg::Mc => {
            let samples = c.samples.unwrap_or(1_000_000);
            let mut rng = case_rng(c.seed, &[body.kind as u64, body.n as u64]);
            let est = section_volume_mc(&q, samples, polyslice::oracle::default_slab_eps(body), &mut rng)?;
            let reference = if exact_ok { Some(exact_a()?) } else { None };
            rows.push(
                CaseRecord::new(name, body.n, t, "mc-volume", est.value, reference.unwrap_or(est.value), Relation::Abs, 3.0 * est.std_error)
                    .with_direction(&a)
                    .with_samples(samples),
            );
        }
        MethodArg::Integral => {
            let mut any = false;
            if let Ok(v) = analytic_a_integral(&q) {
                push("integral-volume", v.value, exact_ok.then(exact_a).transpose()?, Relation::Rel, tol.max(1e-8));
                any = true;
            }
            if let Ok(v) = analytic_p_integral(&q) {
                push("integral-perimeter", v.value, exact_ok.then(exact_p).transpose()?, Relation::Rel, tol.max(1e-8));
                any = true;
            }
            if !any {
                return Err(usage("no integral representation applies to this query"));
            }
        }
    }
    Ok(Report::assemble("eval", c.seed, rows))
}

fn sweep(c: &Common) -> Result<Report, HarnessError> {
    let body = c.body()?;
    let f = c.functional();
    let cfg = c.config();
    let ts = match c.t {
        Some(t) => vec![t],
        None => {
            let (lo, hi) = polyslice::maximality_range::<f64>(body, f)
                .ok_or_else(|| usage("no maximality range is known; pass --t"))?;
            (0..cfg.t_points).map(|i| lo + (hi - lo) * (i + 1) as f64 / (cfg.t_points + 1) as f64).collect()
        }
    };
    let mut rows = Vec::new();
    for (i, &t) in ts.iter().enumerate() {
        let mut rng = case_rng(c.seed, &[body.kind as u64, f as u64, body.n as u64, i as u64]);
        rows.extend(max_case(body, f, t, &cfg, &mut rng)?);
    }
    Ok(Report::assemble(&format!("sweep-{}-{}", body.kind.name(), f.name()), c.seed, rows))
}

fn extrema(c: &Common) -> Result<Report, HarnessError> {
    let body = c.body()?;
    let t = c.t()?;
    let f = c.functional();
    let name = body.kind.name();
    let mut rows = Vec::new();
    for p in structured_critical_points(body, t, f)? {
        let label = match p.classification {
            Classification::LocalMax => "localmax",
            Classification::LocalMin => "localmin",
            Classification::Saddle => "saddle",
            Classification::Degenerate => "degenerate",
        };
        let value = polyslice::section_value(body, p.a.coords(), t, f)?;
        rows.push(
            CaseRecord::new(name, body.n, t, &format!("critical-{label}"), p.residual, 1e-9, Relation::Le, 0.0)
                .with_direction(p.a.coords())
                .with_note(format!("value {value:.16e}, second order {:.16e}", p.second_order)),
        );
    }
    let restarts = c.samples.unwrap_or(64);
    let mut rng = case_rng(c.seed, &[body.kind as u64, body.n as u64, t.to_bits()]);
    let runs = multistart_ascent(body, t, f, restarts, &mut rng)?;
    if let Some((best, value)) = runs.into_iter().max_by(|x, y| x.1.total_cmp(&y.1)) {
        let reference = polyslice::section_value(body, extremal_direction::<f64>(body).coords(), t, f)?;
        rows.push(
            CaseRecord::new(name, body.n, t, "multistart-maximum", value, reference, Relation::Ge, c.tol.unwrap_or(1e-9))
                .with_direction(best.coords())
                .with_samples(restarts),
        );
    }
    Ok(Report::assemble(&format!("extrema-{}-{}", name, f.name()), c.seed, rows))
}

fn run(c: &Common, verb: &Verb) -> Result<Report, HarnessError> {
    match verb {
        Verb::Eval(_) => eval(c),
        Verb::Sweep(_) => sweep(c),
        Verb::Extrema(_) => extrema(c),
        Verb::Thresholds(_) => threshold_report(c.kind()?, c.functional(), c.range()?, &c.config()),
        Verb::Verify(_) => {
            let id = c.suite.as_deref().ok_or_else(|| usage("--suite is required"))?;
            run_suite(id, c.range()?, &c.config())
        }
        Verb::Counterexample(_) => {
            let id = c.id.as_deref().ok_or_else(|| usage("--id is required"))?;
            counterexample(id, c.seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = match &cli.verb {
        Verb::Eval(c) | Verb::Sweep(c) | Verb::Extrema(c) | Verb::Thresholds(c) | Verb::Verify(c) | Verb::Counterexample(c) => c,
    };
    let start = Instant::now();
    let result = run(c, &cli.verb).and_then(|mut report| {
        if c.timing {
            report.runtime_ms = Some(start.elapsed().as_millis() as u64);
        }
        let format = match c.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
        match &c.out {
            Some(path) => {
                let mut file = std::fs::File::create(path)?;
                report.emit(format, &mut file)?;
                file.flush()?;
            }
            None => report.emit(format, &mut std::io::stdout().lock())?,
        }
        Ok(report)
    });
    match result {
        Ok(report) => {
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{} of {} checks failed", report.summary.failed, report.summary.failed + report.summary.passed);
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
