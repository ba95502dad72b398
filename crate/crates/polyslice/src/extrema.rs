//! Critical points of `A(·,t)` and `P(·,t)` on the direction sphere.
//!
//! Works in `f64`. Critical points are located on symmetric families where
//! the Lagrange system collapses to one scalar equation; classification uses a
//! finite-difference Riemannian Hessian.

use nalgebra::DMatrix;
use rand::Rng;

use crate::bodies::{extremal_direction, make_direction, Body, BodyKind, Direction, SectionQuery};
use crate::closed_form::{closed, Functional};
use crate::error::{Result, SliceError};
use crate::oracle::{hyperplane_frame, perimeter_exact, section_volume_exact};
use crate::scalar::{dot, norm};

const HESSIAN_STEP: f64 = 1e-4;
const GRADIENT_STEP: f64 = 1e-6;
const CRITICAL_TOL: f64 = 1e-6;
const FAMILY_GRID: usize = 4000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    LocalMax,
    LocalMin,
    Saddle,
    Degenerate,
}

/// What gets differentiated: the true functional, or the log of the product
/// part of its closed form with the direction-independent factors removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Full(Functional),
    Reduced(Functional),
}

impl Objective {
    pub fn functional(self) -> Functional {
        match self {
            Objective::Full(f) | Objective::Reduced(f) => f,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub a: Direction<f64>,
    /// Multiplier of `|a|² = 1`.
    pub lambda: f64,
    /// Multiplier of `Σa = 0` (simplex only).
    pub mu: Option<f64>,
    /// Largest coordinate (by modulus outside the simplex), and how many
    /// coordinates share the next value (the apex excluded, except for the cube).
    pub apex: f64,
    pub multiplicity: usize,
    pub classification: Classification,
    /// Positive at a local maximum. The analytic coefficient at the extremal
    /// direction, minus the mean Hessian eigenvalue elsewhere.
    pub second_order: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub body: Body,
    pub functional: Functional,
    pub objective: Objective,
    pub analytic: f64,
    pub empirical: f64,
    pub gap: f64,
}

/// `A` or `P`: the closed form when it applies, the exact oracle otherwise.
pub fn section_value(body: Body, a: &[f64], t: f64, functional: Functional) -> Result<f64> {
    let q = SectionQuery::from_raw(body, a, t)?;
    match closed(&q, functional) {
        Ok(v) => Ok(v.value),
        Err(SliceError::RegimeViolation) => match functional {
            Functional::Volume => section_volume_exact(&q),
            Functional::Perimeter => perimeter_exact(&q),
        },
        Err(e) => Err(e),
    }
}

fn exponent(body: Body, functional: Functional) -> f64 {
    let n = body.n as f64;
    match functional {
        Functional::Volume => n - 1.0,
        Functional::Perimeter => n - 2.0,
    }
}

/// Log of the reduced product objective, or `None` where a factor is not positive.
/// The apex coordinate is index 0 for the simplex and the cross-polytope.
fn reduced_log(body: Body, a: &[f64], t: f64, functional: Functional) -> Option<f64> {
    let n = body.n as f64;
    let e = exponent(body, functional);
    match body.kind {
        BodyKind::Simplex => {
            let a1 = a[0];
            if a1 - t <= 0.0 {
                return None;
            }
            let mut s = e * (a1 - t).ln();
            for &x in &a[1..] {
                if a1 - x <= 0.0 {
                    return None;
                }
                s -= (a1 - x).ln();
            }
            Some(s)
        }
        BodyKind::CrossPolytope => {
            if functional == Functional::Perimeter {
                return None;
            }
            let a1 = a[0];
            if a1 <= 0.0 || a1 - t <= 0.0 {
                return None;
            }
            let mut s = (n - 2.0) * a1.ln() + (n - 1.0) * (a1 - t).ln();
            for &x in &a[1..] {
                let d = a1 * a1 - x * x;
                if d <= 0.0 {
                    return None;
                }
                s -= d.ln();
            }
            Some(s)
        }
        BodyKind::Cube => {
            let half: f64 = a.iter().sum::<f64>() / 2.0;
            if half - t <= 0.0 || a.iter().any(|&x| x <= 0.0) {
                return None;
            }
            Some(e * (half - t).ln() - a.iter().map(|x| x.ln()).sum::<f64>())
        }
    }
}

fn reduced_gradient(body: Body, a: &[f64], t: f64, functional: Functional) -> Vec<f64> {
    let n = body.n as f64;
    let e = exponent(body, functional);
    match body.kind {
        BodyKind::Simplex => {
            let a1 = a[0];
            let mut g: Vec<f64> = a.iter().map(|&x| 1.0 / (a1 - x)).collect();
            g[0] = e / (a1 - t) - g[1..].iter().sum::<f64>();
            g
        }
        BodyKind::CrossPolytope => {
            let a1 = a[0];
            let mut g: Vec<f64> = a.iter().map(|&x| 2.0 * x / (a1 * a1 - x * x)).collect();
            g[0] = (n - 2.0) / a1 + (n - 1.0) / (a1 - t) - a[1..].iter().map(|&x| 2.0 * a1 / (a1 * a1 - x * x)).sum::<f64>();
            g
        }
        BodyKind::Cube => {
            let c = e / (a.iter().sum::<f64>() - 2.0 * t);
            a.iter().map(|&x| c - 1.0 / x).collect()
        }
    }
}

/// Norm of `∇F + λa + μ1` at the multipliers that minimise it.
pub fn lagrange_residual(body: Body, a: &[f64], gradient: &[f64]) -> (f64, f64, Option<f64>) {
    let lambda = -dot(gradient, a);
    let mu = (body.kind == BodyKind::Simplex).then(|| -gradient.iter().sum::<f64>() / a.len() as f64);
    let r: Vec<f64> = gradient.iter().zip(a).map(|(&g, &x)| g + lambda * x + mu.unwrap_or(0.0)).collect();
    (norm(&r), lambda, mu)
}

fn objective_value(body: Body, a: &[f64], t: f64, objective: Objective) -> Option<f64> {
    match objective {
        Objective::Reduced(f) => reduced_log(body, a, t, f),
        Objective::Full(f) => section_value(body, a, t, f).ok().filter(|&v| v > 0.0).map(f64::ln),
    }
}

/// `cos|s|·a + sin|s|·s/|s|` for the tangent vector `s`.
fn exp_map(a: &[f64], s: &[f64]) -> Vec<f64> {
    let r = norm(s);
    if r == 0.0 {
        return a.to_vec();
    }
    let (sn, cs) = r.sin_cos();
    a.iter().zip(s).map(|(&x, &y)| cs * x + sn * y / r).collect()
}

fn tangent_point(a: &[f64], basis: &[Vec<f64>], coeffs: &[(usize, f64)]) -> Vec<f64> {
    let mut s = vec![0.0; a.len()];
    for &(i, c) in coeffs {
        s.iter_mut().zip(&basis[i]).for_each(|(x, &b)| *x += c * b);
    }
    exp_map(a, &s)
}

fn tangent_gradient(body: Body, a: &[f64], t: f64, objective: Objective, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let h = GRADIENT_STEP;
    basis
        .iter()
        .enumerate()
        .map(|(i, _)| {
            let up = objective_value(body, &tangent_point(a, basis, &[(i, h)]), t, objective)?;
            let down = objective_value(body, &tangent_point(a, basis, &[(i, -h)]), t, objective)?;
            Some((up - down) / (2.0 * h))
        })
        .collect()
}

fn tangent_hessian(body: Body, a: &[f64], t: f64, objective: Objective, basis: &[Vec<f64>]) -> Option<DMatrix<f64>> {
    let h = HESSIAN_STEP;
    let k = basis.len();
    let f0 = objective_value(body, a, t, objective)?;
    let f = |c: &[(usize, f64)]| objective_value(body, &tangent_point(a, basis, c), t, objective);
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = (f(&[(i, h)])? - 2.0 * f0 + f(&[(i, -h)])?) / (h * h);
        for j in 0..i {
            let v = (f(&[(i, h), (j, h)])? - f(&[(i, h), (j, -h)])? - f(&[(i, -h), (j, h)])? + f(&[(i, -h), (j, -h)])?)
                / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Some(m)
}

fn classify_eigenvalues(eig: &[f64]) -> Classification {
    let scale = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let tol = (1e-6 * scale).max(1e-6);
    if eig.iter().any(|x| x.abs() <= tol) {
        Classification::Degenerate
    } else if eig.iter().all(|&x| x < 0.0) {
        Classification::LocalMax
    } else if eig.iter().all(|&x| x > 0.0) {
        Classification::LocalMin
    } else {
        Classification::Saddle
    }
}

fn eigenvalues(body: Body, a: &[f64], t: f64, objective: Objective) -> Result<Vec<f64>> {
    let basis = hyperplane_frame(body, a);
    let h = tangent_hessian(body, a, t, objective, &basis).ok_or(SliceError::DomainError("objective vanishes near a"))?;
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

/// Eigenvalues of the Riemannian Hessian of the objective at `a`, after
/// checking that `a` is critical.
pub fn hessian_eigenvalues(body: Body, a: &Direction<f64>, t: f64, objective: Objective) -> Result<Vec<f64>> {
    let basis = hyperplane_frame(body, a.coords());
    let g = tangent_gradient(body, a.coords(), t, objective, &basis).ok_or(SliceError::DomainError("objective vanishes near a"))?;
    let r = norm(&g);
    if r > CRITICAL_TOL {
        return Err(SliceError::NotCritical(r));
    }
    eigenvalues(body, a.coords(), t, objective)
}

fn ambient_gradient(body: Body, a: &[f64], t: f64, objective: Objective) -> Option<Vec<f64>> {
    match objective {
        Objective::Reduced(f) => {
            reduced_log(body, a, t, f)?;
            Some(reduced_gradient(body, a, t, f))
        }
        Objective::Full(_) => {
            let basis = hyperplane_frame(body, a);
            let g = tangent_gradient(body, a, t, objective, &basis)?;
            let mut amb = vec![0.0; a.len()];
            for (gi, b) in g.iter().zip(&basis) {
                amb.iter_mut().zip(b).for_each(|(x, &y)| *x += gi * y);
            }
            Some(amb)
        }
    }
}

fn same_orbit(x: &Direction<f64>, y: &Direction<f64>) -> bool {
    let (cx, cy) = (canonicalize(x), canonicalize(y));
    cx.coords().iter().zip(cy.coords()).all(|(u, v)| (u - v).abs() < 1e-9)
}

/// Classifies a critical point of `A(·,t)` or `P(·,t)`.
pub fn classify(body: Body, a: &Direction<f64>, t: f64, functional: Functional) -> Result<CriticalPoint> {
    classify_with(body, a, t, Objective::Full(functional))
}

/// As [`classify`], for either objective. The reduced objective singles out
/// coordinate 0 as the apex, so `a` is canonicalised first in that case.
pub fn classify_with(body: Body, a: &Direction<f64>, t: f64, objective: Objective) -> Result<CriticalPoint> {
    let a = match objective {
        Objective::Reduced(_) => canonicalize(a),
        Objective::Full(_) => a.clone(),
    };
    let g = ambient_gradient(body, a.coords(), t, objective).ok_or(SliceError::DomainError("objective vanishes near a"))?;
    let (residual, lambda, mu) = lagrange_residual(body, a.coords(), &g);
    if residual > CRITICAL_TOL {
        return Err(SliceError::NotCritical(residual));
    }
    let eig = eigenvalues(body, a.coords(), t, objective)?;
    // The coefficient describes the product objective; it decides the true
    // functional only where the two agree up to a constant factor.
    let product_like = matches!(objective, Objective::Reduced(_)) || objective.functional() == Functional::Volume;
    let analytic = if product_like && same_orbit(&a, &extremal_direction(body)) {
        second_order_coefficient(body, t, objective.functional()).ok()
    } else {
        None
    };
    let (second_order, classification) = match analytic {
        Some(c) if c.abs() <= 1e-9 => (c, Classification::Degenerate),
        Some(c) => (c, classify_eigenvalues(&eig)),
        None => (-eig.iter().sum::<f64>() / eig.len() as f64, classify_eigenvalues(&eig)),
    };
    let c = canonicalize(&a).into_coords();
    let first = usize::from(body.kind != BodyKind::Cube);
    let multiplicity = c[first..].iter().take_while(|&&x| (x - c[first]).abs() < 1e-9).count();
    Ok(CriticalPoint { a, lambda, mu, apex: c[0], multiplicity, classification, second_order, residual })
}

/// Sign-determining coefficient of the Hessian at the extremal direction:
/// positive means a strict local maximum.
pub fn second_order_coefficient(body: Body, t: f64, functional: Functional) -> Result<f64> {
    let n = body.n as f64;
    let e = exponent(body, functional);
    match body.kind {
        BodyKind::Simplex => {
            let r = (n / (n + 1.0)).sqrt();
            if t >= r {
                return Err(SliceError::DomainError("t at or beyond the apex"));
            }
            Ok(e / (r - t) - (n + 2.0) * r)
        }
        BodyKind::CrossPolytope => match functional {
            Functional::Volume if t < 1.0 => Ok((n - 1.0) / (1.0 - t) - (n + 2.0)),
            Functional::Volume => Err(SliceError::DomainError("t at or beyond the apex")),
            Functional::Perimeter => Err(SliceError::UnsupportedQuery("no scalar coefficient for the cross-polytope perimeter")),
        },
        BodyKind::Cube => {
            let s = n.sqrt();
            if 2.0 * t >= s {
                return Err(SliceError::DomainError("t at or beyond the apex"));
            }
            Ok(e / (s - 2.0 * t) - 2.0 * s)
        }
    }
}

/// Reorders coordinates so that symmetric copies of a direction compare equal:
/// descending values for the simplex, descending moduli (signs dropped) otherwise.
pub fn canonicalize(a: &Direction<f64>) -> Direction<f64> {
    let mut v = a.coords().to_vec();
    match a.kind() {
        BodyKind::Simplex => v.sort_by(|x, y| y.total_cmp(x)),
        _ => {
            v.iter_mut().for_each(|x| *x = x.abs());
            v.sort_by(|x, y| y.total_cmp(x));
        }
    }
    direction_unchecked(a.kind(), v)
}

fn direction_unchecked(kind: BodyKind, v: Vec<f64>) -> Direction<f64> {
    let body = Body { kind, n: if kind == BodyKind::Simplex { v.len() - 1 } else { v.len() } };
    make_direction(&v, body).expect("unit vector")
}

/// Roots of `g` on a uniform grid over `(lo, hi)`, refined by bisection.
fn scan_roots(lo: f64, hi: f64, g: impl Fn(f64) -> Option<f64>) -> Vec<f64> {
    let mut roots = Vec::new();
    if !(hi > lo) {
        return roots;
    }
    let step = (hi - lo) / FAMILY_GRID as f64;
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..FAMILY_GRID {
        let x = lo + step * i as f64;
        let Some(v) = g(x) else {
            prev = None;
            continue;
        };
        if v == 0.0 {
            roots.push(x);
        } else if let Some((px, pv)) = prev {
            if pv != 0.0 && pv.signum() != v.signum() {
                let (mut a, mut b, mut va) = (px, x, pv);
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if !(m > a && m < b) || b - a < 1e-15 {
                        break;
                    }
                    match g(m) {
                        Some(vm) if vm.signum() == va.signum() => {
                            a = m;
                            va = vm;
                        }
                        Some(_) => b = m,
                        None => break,
                    }
                }
                roots.push(0.5 * (a + b));
            }
        }
        prev = Some((x, v));
    }
    roots
}

/// Candidate points on the symmetric families.
fn family_candidates(body: Body, t: f64, functional: Functional) -> Vec<Vec<f64>> {
    let n = body.n;
    let nf = n as f64;
    let e = exponent(body, functional);
    let mut out = Vec::new();
    match body.kind {
        BodyKind::Simplex => {
            let r = (nf / (nf + 1.0)).sqrt();
            // m coordinates equal to x, n - m equal to y < x.
            let point = |a1: f64, m: usize| -> Option<(f64, f64)> {
                let d = nf - (nf + 1.0) * a1 * a1;
                if d < 0.0 {
                    return None;
                }
                let mf = m as f64;
                let x = (-a1 + ((nf - mf) * d / mf).sqrt()) / nf;
                let y = (-a1 - mf * x) / (nf - mf);
                Some((x, y))
            };
            // Cleared Lagrange equation for the shared value x; k = 1 (volume) or 2 (perimeter).
            let k = nf - 1.0 - e;
            let eq = |a1: f64, x: f64| {
                let c = (nf + 1.0) * (nf * t - (1.0 + k) * a1);
                c * x * x - (c * a1 - e) * x - ((nf + 1.0) * t - (2.0 + k) * a1)
            };
            for m in 1..n {
                let lo = t.max(0.0);
                for a1 in scan_roots(lo, r, |a1| point(a1, m).map(|(x, _)| eq(a1, x))) {
                    if let Some((x, y)) = point(a1, m) {
                        let mut v = vec![a1];
                        v.extend(std::iter::repeat_n(x, m));
                        v.extend(std::iter::repeat_n(y, n - m));
                        out.push(v);
                    }
                }
            }
        }
        BodyKind::CrossPolytope if functional == Functional::Volume => {
            for m in 1..n {
                let mf = m as f64;
                let g = |a1: f64| ((mf + 1.0) * a1 * a1 + 2.0 * mf - 1.0) * a1 - t * ((mf + 1.0) * nf * a1 * a1 + 2.0 * mf - nf);
                let lo = t.max(1.0 / (mf + 1.0).sqrt());
                for a1 in scan_roots(lo, 1.0 - 1e-9, |a1| Some(g(a1))) {
                    let z = ((1.0 - a1 * a1) / mf).sqrt();
                    let mut v = vec![0.0; n];
                    v[0] = a1;
                    v[1..=m].iter_mut().for_each(|x| *x = z);
                    out.push(v);
                }
            }
        }
        BodyKind::CrossPolytope => {}
        BodyKind::Cube => {
            for m in 1..n {
                let mf = m as f64;
                let point = |x: f64| -> Option<(f64, f64)> {
                    let rest = 1.0 - mf * x * x;
                    (rest > 0.0).then(|| (x, (rest / (nf - mf)).sqrt()))
                };
                let eq = |x: f64| {
                    let (x, y) = point(x)?;
                    let s = mf * x + (nf - mf) * y;
                    Some((2.0 * nf * t - (nf - e) * s) * x * x - e * x + (s - 2.0 * t))
                };
                for x in scan_roots(1.0 / nf.sqrt(), 1.0 / mf.sqrt(), eq) {
                    if let Some((x, y)) = point(x) {
                        let mut v = vec![x; m];
                        v.extend(std::iter::repeat_n(y, n - m));
                        out.push(v);
                    }
                }
            }
        }
    }
    out
}

fn in_regime(body: Body, a: &[f64], t: f64) -> bool {
    SectionQuery::from_raw(body, a, t).map(|q| crate::bodies::regime_check(&q).is_separating()).unwrap_or(false)
}

/// Critical points of the functional on the symmetric families, plus the
/// extremal direction, restricted to the vertex-separating regime.
pub fn structured_critical_points(body: Body, t: f64, functional: Functional) -> Result<Vec<CriticalPoint>> {
    let n = body.n;
    if n < 2 || (functional == Functional::Perimeter && n < 3) {
        return Err(SliceError::DimensionTooSmall(n));
    }
    let objective = match (body.kind, functional) {
        (BodyKind::CrossPolytope, Functional::Perimeter) => Objective::Full(functional),
        _ => Objective::Reduced(functional),
    };
    let mut candidates = vec![extremal_direction::<f64>(body).into_coords()];
    candidates.extend(family_candidates(body, t, functional));

    let mut points: Vec<CriticalPoint> = Vec::new();
    for v in candidates {
        if !in_regime(body, &v, t) {
            continue;
        }
        let a = make_direction(&v, body)?;
        if points.iter().any(|p| same_orbit(&p.a, &a)) {
            continue;
        }
        match classify_with(body, &a, t, objective) {
            Ok(p) => points.push(p),
            Err(SliceError::NotCritical(_) | SliceError::DomainError(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(points)
}

fn vertex_direction(body: Body, a: &[f64]) -> Vec<f64> {
    match body.kind {
        BodyKind::Simplex => {
            let j = (0..a.len()).max_by(|&i, &k| a[i].total_cmp(&a[k])).expect("non-empty");
            let mut v = vec![-1.0; a.len()];
            v[j] = a.len() as f64 - 1.0;
            v
        }
        BodyKind::CrossPolytope => {
            let j = (0..a.len()).max_by(|&i, &k| a[i].abs().total_cmp(&a[k].abs())).expect("non-empty");
            let mut v = vec![0.0; a.len()];
            v[j] = a[j].signum();
            v
        }
        BodyKind::Cube => a.iter().map(|x| if *x >= 0.0 { 1.0 } else { -1.0 }).collect(),
    }
}

/// One Newton step on the tangent space when the Hessian is negative definite
/// and the step does not decrease the objective. The flag reports convergence.
fn newton_step(
    body: Body,
    a: &[f64],
    t: f64,
    objective: Objective,
    basis: &[Vec<f64>],
    g: &[f64],
    f: f64,
) -> Option<(Vec<f64>, f64, bool)> {
    let h = tangent_hessian(body, a, t, objective, basis)?;
    let chol = (-h).cholesky()?;
    let d = chol.solve(&nalgebra::DVector::from_column_slice(g));
    let len = d.norm();
    if len > 0.1 {
        return None;
    }
    let coeffs: Vec<(usize, f64)> = d.iter().copied().enumerate().collect();
    let b = tangent_point(a, basis, &coeffs);
    let fb = objective_value(body, &b, t, objective)?;
    if fb < f - 1e-13 * f.abs().max(1.0) {
        return None;
    }
    let b = make_direction(&b, body).map(Direction::into_coords).unwrap_or(b);
    let stalled = fb - f <= 1e-14 * f.abs().max(1.0);
    Some((b, fb, len < 1e-9 || stalled))
}

/// Projected gradient ascent of `log F` from `a` until the tangent gradient vanishes.
fn ascend(body: Body, a: Vec<f64>, t: f64, functional: Functional) -> (Vec<f64>, f64) {
    let objective = Objective::Full(functional);
    let mut a = a;
    let mut f = objective_value(body, &a, t, objective).unwrap_or(f64::NEG_INFINITY);
    let mut step = 1e-2;
    let mut newton = 0;
    for _ in 0..20_000 {
        let basis = hyperplane_frame(body, &a);
        let Some(g) = tangent_gradient(body, &a, t, objective, &basis) else { break };
        let gn2 = dot(&g, &g);
        if gn2.sqrt() < 1e-10 {
            break;
        }
        if gn2.sqrt() < 1e-3 && newton < 30 {
            newton += 1;
            if let Some((b, fb, done)) = newton_step(body, &a, t, objective, &basis, &g, f) {
                a = b;
                f = fb;
                if done {
                    break;
                }
                continue;
            }
        }
        let mut moved = false;
        step *= 2.0;
        while step > 1e-14 {
            let coeffs: Vec<(usize, f64)> = g.iter().enumerate().map(|(i, &gi)| (i, step * gi)).collect();
            let b = tangent_point(&a, &basis, &coeffs);
            if let Some(fb) = objective_value(body, &b, t, objective) {
                if fb >= f + 1e-4 * step * gn2 {
                    a = make_direction(&b, body).map(Direction::into_coords).unwrap_or(b);
                    f = fb;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (a, f)
}

/// Local maxima reached by multistart ascent, canonicalised, with their values.
pub fn multistart_ascent<R: Rng + ?Sized>(
    body: Body,
    t: f64,
    functional: Functional,
    restarts: usize,
    rng: &mut R,
) -> Result<Vec<(Direction<f64>, f64)>> {
    if functional == Functional::Perimeter && body.n < 3 {
        return Err(SliceError::DimensionTooSmall(body.n));
    }
    let mut out = Vec::with_capacity(restarts);
    for _ in 0..restarts {
        let u = crate::bodies::sample_direction::<f64, R>(body, rng).into_coords();
        let v = make_direction(&vertex_direction(body, &u), body)?.into_coords();
        let start = (0..=10).map(|i| i as f64 / 10.0).find_map(|s| {
            let w: Vec<f64> = u.iter().zip(&v).map(|(&x, &y)| (1.0 - s) * x + s * y).collect();
            let d = make_direction(&w, body).ok()?.into_coords();
            objective_value(body, &d, t, Objective::Full(functional)).map(|_| d)
        });
        let Some(start) = start else { continue };
        let (a, _) = ascend(body, start, t, functional);
        let a = make_direction(&a, body)?;
        let value = section_value(body, a.coords(), t, functional)?;
        out.push((canonicalize(&a), value));
    }
    Ok(out)
}

/// Best direction found by [`multistart_ascent`], canonicalised.
pub fn sphere_maximize<R: Rng + ?Sized>(
    body: Body,
    t: f64,
    functional: Functional,
    restarts: usize,
    rng: &mut R,
) -> Result<(Direction<f64>, f64)> {
    multistart_ascent(body, t, functional, restarts.max(1), rng)?
        .into_iter()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or(SliceError::DomainError("no start with a non-empty section"))
}

/// Offset at which the extremal direction turns from a local minimum into a
/// local maximum, with the analytic threshold for comparison.
pub fn threshold_scan(body: Body, functional: Functional, n: usize) -> Result<ThresholdReport> {
    let body = Body::new(body.kind, n)?;
    let eps = 1e-3;
    // The log objective's higher derivatives blow up at the apex.
    let top = 2e-2;
    let th = body.thresholds::<f64>();
    let (analytic, objective, lo, hi) = match (body.kind, functional) {
        (BodyKind::Simplex, Functional::Volume) => (th.volume_flip, Objective::Reduced(functional), eps, th.circumradius - top),
        (BodyKind::Simplex, Functional::Perimeter) if n >= 3 => {
            (th.perimeter_flip.expect("n >= 3"), Objective::Reduced(functional), eps, th.circumradius - top)
        }
        (BodyKind::CrossPolytope, Functional::Volume) => (th.volume_flip, Objective::Reduced(functional), eps, 1.0 - top),
        (BodyKind::Cube, Functional::Volume) => (th.volume_flip, Objective::Reduced(functional), eps, th.circumradius - top),
        (BodyKind::Cube, Functional::Perimeter) if n == 3 => {
            let three = th.cube_three.expect("n = 3");
            let floor = th.cube_regime_floor.expect("cube");
            (three.perimeter_flip, Objective::Full(functional), floor + eps, th.circumradius - top)
        }
        (BodyKind::Cube, Functional::Perimeter) if n >= 4 => {
            (th.perimeter_flip.expect("n >= 4"), Objective::Reduced(functional), eps, th.circumradius - top)
        }
        _ => return Err(SliceError::InvalidArgument("no analytic threshold for this body and functional")),
    };
    let a = extremal_direction::<f64>(body);
    let sign = |t: f64| -> Result<f64> {
        Ok(eigenvalues(body, a.coords(), t, objective)?.iter().sum::<f64>())
    };
    let (mut lo, mut hi) = (lo, hi);
    let s_lo = sign(lo)?;
    let s_hi = sign(hi)?;
    if s_lo.signum() == s_hi.signum() {
        return Err(SliceError::NoFlipFound);
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if sign(mid)?.signum() == s_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let empirical = 0.5 * (lo + hi);
    Ok(ThresholdReport { body, functional, objective, analytic, empirical, gap: (empirical - analytic).abs() })
}
