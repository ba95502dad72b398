//! Closed forms for `A(a,t)` and `P(a,t)` in the vertex-separating regime,
//! their integral representations, and the maximal values at the extremal directions.

use crate::bodies::{apex_frame, extremal_direction, regime_check, Body, BodyKind, Regime, SectionQuery, TIE_TOL};
use crate::error::{Result, SliceError};
use crate::integral::{rational_product_integral, sinc_product_integral};
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functional {
    /// `A(a,t)`: (n-1)-volume of the section.
    Volume,
    /// `P(a,t)`: (n-2)-volume of the section of the boundary.
    Perimeter,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::Volume => "volume",
            Functional::Perimeter => "perimeter",
        }
    }
}

impl core::str::FromStr for Functional {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "volume" | "A" => Ok(Functional::Volume),
            "perimeter" | "P" => Ok(Functional::Perimeter),
            other => Err(format!("unknown functional `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Integral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionValue<T> {
    pub value: T,
    pub method: Method,
    pub regime: Regime<T>,
    /// Set by [`extremal_value`] when `t` lies outside the range where the
    /// value is known to be maximal.
    pub out_of_range: bool,
}

impl<T> SectionValue<T> {
    fn closed(value: T, regime: Regime<T>) -> Self {
        SectionValue { value, method: Method::ClosedForm, regime, out_of_range: false }
    }
}

/// Beyond this dimension products are accumulated in log space.
const LOG_SPACE_DIM: usize = 30;
/// The cross-polytope perimeter sums over `2^(n-1)` sign patterns.
pub const MAX_CROSS_PERIMETER_DIM: usize = 20;

enum Gate<T> {
    Zero(Regime<T>),
    Formula(Vec<T>, Regime<T>),
}

/// The closed forms hold when the apex lies strictly above `H` and every
/// neighbour lies on or below it; they vanish at an apex tie.
fn gate<T: Scalar>(q: &SectionQuery<T>) -> Result<Gate<T>> {
    let regime = regime_check(q);
    if regime == Regime::Empty {
        return Ok(Gate::Zero(regime));
    }
    let f = apex_frame(q.body, q.a.coords());
    let tol = T::lit(TIE_TOL);
    let t = q.t;
    if (f.apex_dot - t).abs() <= tol && f.neighbor_dot < t - tol {
        return Ok(Gate::Zero(regime));
    }
    if !(f.apex_dot - t > tol && f.neighbor_dot <= t + tol) {
        return Err(SliceError::RegimeViolation);
    }
    let a = f.normalized;
    let gap = T::lit(1e-13);
    let ok = match q.body.kind {
        BodyKind::Simplex => a[1..].iter().all(|&x| a[0] - x > gap),
        BodyKind::CrossPolytope => a[1..].iter().all(|&x| a[0] * a[0] - x * x > gap),
        BodyKind::Cube => a.iter().all(|&x| x > gap),
    };
    if !ok {
        return Err(SliceError::RegimeViolation);
    }
    Ok(Gate::Formula(a, regime))
}

/// `Π base^exp` over positive bases, in log space for large `n`.
fn positive_product<T: Scalar>(factors: impl Iterator<Item = (T, i32)>, n: usize) -> T {
    if n > LOG_SPACE_DIM {
        factors.map(|(b, e)| b.ln() * T::from(e).unwrap()).sum::<T>().exp()
    } else {
        factors.fold(T::one(), |acc, (b, e)| acc * b.powi(e))
    }
}

fn ln_factorial<T: Scalar>(k: usize) -> T {
    (2..=k).map(|j| T::of_usize(j).ln()).sum()
}

/// `c / k!` without overflowing for large `k`.
fn over_factorial<T: Scalar>(c: T, k: usize, n: usize) -> T {
    if n > LOG_SPACE_DIM {
        c * (-ln_factorial::<T>(k)).exp()
    } else {
        c / factorial::<T>(k)
    }
}

pub fn closed_a<T: Scalar>(q: &SectionQuery<T>) -> Result<SectionValue<T>> {
    let (a, regime) = match gate(q)? {
        Gate::Zero(r) => return Ok(SectionValue::closed(T::zero(), r)),
        Gate::Formula(a, r) => (a, r),
    };
    let n = q.body.n;
    let t = q.t;
    let e = (n - 1) as i32;
    let value = match q.body.kind {
        BodyKind::Simplex => {
            let a1 = a[0];
            let prod = positive_product(
                core::iter::once((a1 - t, e)).chain(a[1..].iter().map(|&x| (a1 - x, -1))),
                n,
            );
            over_factorial(T::of_usize(n + 1).sqrt(), n - 1, n) * prod
        }
        BodyKind::CrossPolytope => {
            let a1 = a[0];
            let prod = positive_product(
                [(a1 - t, e), (a1, e - 1), (T::lit(2.0), e)]
                    .into_iter()
                    .chain(a[1..].iter().map(|&x| (a1 * a1 - x * x, -1))),
                n,
            );
            over_factorial(T::one(), n - 1, n) * prod
        }
        BodyKind::Cube => {
            let h = a.iter().copied().sum::<T>() / T::lit(2.0) - t;
            let prod = positive_product(core::iter::once((h, e)).chain(a.iter().map(|&x| (x, -1))), n);
            over_factorial(T::one(), n - 1, n) * prod
        }
    };
    Ok(SectionValue::closed(value, regime))
}

pub fn closed_p<T: Scalar>(q: &SectionQuery<T>) -> Result<SectionValue<T>> {
    let n = q.body.n;
    if n < 3 {
        return Err(SliceError::InvalidArgument("perimeter closed forms need n >= 3"));
    }
    if q.body.kind == BodyKind::CrossPolytope && n > MAX_CROSS_PERIMETER_DIM {
        return Err(SliceError::ResourceLimit("cross-polytope perimeter sign sum"));
    }
    let (a, regime) = match gate(q)? {
        Gate::Zero(r) => return Ok(SectionValue::closed(T::zero(), r)),
        Gate::Formula(a, r) => (a, r),
    };
    let t = q.t;
    let nf = T::of_usize(n);
    let e = (n - 2) as i32;
    let value = match q.body.kind {
        BodyKind::Simplex => {
            // Π_{k≠j} 1/(a₁-a_k) = (a₁-a_j) · Π_k 1/(a₁-a_k)
            let a1 = a[0];
            let weights: T = a[1..]
                .iter()
                .map(|&x| (nf - (nf + T::one()) * x * x).max(T::zero()).sqrt() * (a1 - x))
                .sum();
            let prod = positive_product(
                core::iter::once((a1 - t, e)).chain(a[1..].iter().map(|&x| (a1 - x, -1))),
                n,
            );
            over_factorial(weights, n - 2, n) * prod
        }
        BodyKind::CrossPolytope => {
            let a1 = a[0];
            let rest = &a[1..];
            let mut sum = T::zero();
            for signs in 0..1usize << rest.len() {
                let mut dot = a1;
                let mut den = T::one();
                for (j, &x) in rest.iter().enumerate() {
                    let ex = if signs >> j & 1 == 0 { x } else { -x };
                    dot += ex;
                    den *= a1 - ex;
                }
                sum += (T::one() - dot * dot / nf).max(T::zero()).sqrt() / den;
            }
            over_factorial(nf.sqrt() * sum, n - 2, n) * (a1 - t).powi(e)
        }
        BodyKind::Cube => {
            let weights: T = a.iter().map(|&x| x * (T::one() - x * x).max(T::zero()).sqrt()).sum();
            let h = a.iter().copied().sum::<T>() / T::lit(2.0) - t;
            let prod = positive_product(core::iter::once((h, e)).chain(a.iter().map(|&x| (x, -1))), n);
            over_factorial(weights, n - 2, n) * prod
        }
    };
    Ok(SectionValue::closed(value, regime))
}

pub fn closed<T: Scalar>(q: &SectionQuery<T>, functional: Functional) -> Result<SectionValue<T>> {
    match functional {
        Functional::Volume => closed_a(q),
        Functional::Perimeter => closed_p(q),
    }
}

/// Cube volume through the sinc-product Fourier integral; valid for every `t`.
pub fn analytic_a_integral<T: Scalar>(q: &SectionQuery<T>) -> Result<SectionValue<T>> {
    if q.body.kind != BodyKind::Cube {
        return Err(SliceError::UnsupportedQuery("the sinc integral describes the cube only"));
    }
    let value = sinc_product_integral(q.a.coords(), q.t)?;
    Ok(SectionValue { value, method: Method::Integral, regime: regime_check(q), out_of_range: false })
}

/// Perimeter through an integral representation valid outside the separating regime.
///
/// Cube: per-facet sinc integrals, any `t`. Simplex: per-facet rational
/// product integrals, any `t`. Cross-polytope: only `t = 0`.
pub fn analytic_p_integral<T: Scalar>(q: &SectionQuery<T>) -> Result<SectionValue<T>> {
    let n = q.body.n;
    if n < 3 {
        return Err(SliceError::InvalidArgument("perimeter needs n >= 3"));
    }
    let a = q.a.coords();
    let t = q.t;
    let nf = T::of_usize(n);
    let value = match q.body.kind {
        BodyKind::Cube => {
            // cos(a_k s)cos(2ts) = (cos(2(t+a_k/2)s) + cos(2(t-a_k/2)s))/2
            let half = T::lit(0.5);
            let mut total = T::zero();
            for k in 0..n {
                let w = (T::one() - a[k] * a[k]).max(T::zero()).sqrt();
                if w == T::zero() {
                    continue;
                }
                let others: Vec<T> = a.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
                let plus = sinc_product_integral(&others, t + half * a[k])?;
                let minus = sinc_product_integral(&others, t - half * a[k])?;
                total += w * (plus + minus);
            }
            total
        }
        BodyKind::Simplex => {
            let mut total = T::zero();
            for j in 0..=n {
                let w = (nf - (nf + T::one()) * a[j] * a[j]).max(T::zero()).sqrt();
                if w == T::zero() {
                    continue;
                }
                let coeffs: Vec<T> = a.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x - t).collect();
                total += w * face_density(&coeffs)?;
            }
            total / factorial::<T>(n - 2)
        }
        BodyKind::CrossPolytope => {
            if t != T::zero() {
                return Err(SliceError::UnsupportedQuery("cross-polytope perimeter integral needs t = 0"));
            }
            if n > MAX_CROSS_PERIMETER_DIM {
                return Err(SliceError::ResourceLimit("cross-polytope face enumeration"));
            }
            let mut total = T::zero();
            for signs in 0..1usize << n {
                let coeffs: Vec<T> =
                    a.iter().enumerate().map(|(j, &x)| if signs >> j & 1 == 0 { x } else { -x }).collect();
                let dot: T = coeffs.iter().copied().sum();
                let w = (nf - dot * dot).max(T::zero()).sqrt();
                if w == T::zero() {
                    continue;
                }
                total += w * face_density(&coeffs)?;
            }
            total / factorial::<T>(n - 2)
        }
    };
    Ok(SectionValue { value, method: Method::Integral, regime: regime_check(q), out_of_range: false })
}

/// Rational product integral, extended to a single nonzero coefficient by
/// its principal value `1/(2|c|)`: a face lying inside `H` is shared by two
/// neighbouring faces, each of which gets half of it.
fn face_density<T: Scalar>(coeffs: &[T]) -> Result<T> {
    let nonzero: Vec<T> = coeffs.iter().copied().filter(|&c| c != T::zero()).collect();
    match nonzero.len() {
        0 => Err(SliceError::NotIntegrable),
        1 => Ok(T::one() / (T::lit(2.0) * nonzero[0].abs())),
        _ => rational_product_integral(&nonzero),
    }
}

/// Range of `t` on which the extremal direction is proved to be the global maximiser.
///
/// Returns `(lo, hi)` meaning `lo < t <= hi`, or `None` when no such range is known.
pub fn maximality_range<T: Scalar>(body: Body, functional: Functional) -> Option<(T, T)> {
    let n = body.n;
    let th = body.thresholds::<T>();
    let hi = th.circumradius;
    let d = th.edge_midpoint;
    match (body.kind, functional) {
        (BodyKind::Simplex, Functional::Volume) if n >= 3 => Some((d, hi)),
        (BodyKind::Simplex, Functional::Volume) => Some((T::lit(1.25) / T::lit(6.0).sqrt(), hi)),
        (BodyKind::Simplex, Functional::Perimeter) if n >= 5 => Some((d, hi)),
        (BodyKind::Simplex, Functional::Perimeter) if n == 4 => Some((T::lit(1.5).sqrt() * T::lit(0.3).sqrt(), hi)),
        (BodyKind::CrossPolytope, Functional::Volume) if n >= 3 => Some((d, hi)),
        (BodyKind::CrossPolytope, Functional::Perimeter) if n >= 4 => Some((d, hi)),
        (BodyKind::CrossPolytope, Functional::Perimeter) if n == 3 => Some((T::lit(0.8), hi)),
        (BodyKind::Cube, Functional::Volume) if n >= 3 => Some((d, hi)),
        (BodyKind::Cube, Functional::Perimeter) if n >= 4 => Some((d, hi)),
        (BodyKind::Cube, Functional::Perimeter) if n == 3 => th.cube_three.map(|c| (c.t0, hi)),
        _ => None,
    }
}

/// Value of `A` or `P` at the extremal direction, from the product formula
/// specialised to that direction.
pub fn extremal_value<T: Scalar>(body: Body, t: T, functional: Functional) -> SectionValue<T> {
    let n = body.n;
    let nf = T::of_usize(n);
    let one = T::one();
    let two = T::lit(2.0);
    let r = body.circumradius::<T>();
    let h = (r - t).max(T::zero());
    let value = match (body.kind, functional) {
        (BodyKind::Simplex, Functional::Volume) => {
            T::of_usize(n + 1).sqrt() / factorial::<T>(n - 1) * (nf / (nf + one)).powf(nf / two) * h.powi(n as i32 - 1)
        }
        (BodyKind::Simplex, Functional::Perimeter) => {
            nf * (nf - one).sqrt() / factorial::<T>(n - 2)
                * (nf / (nf + one)).powf((nf - two) / two)
                * h.powi(n as i32 - 2)
        }
        (BodyKind::CrossPolytope, Functional::Volume) => two.powi(n as i32 - 1) / factorial::<T>(n - 1) * h.powi(n as i32 - 1),
        (BodyKind::CrossPolytope, Functional::Perimeter) => {
            (nf - one).sqrt() / factorial::<T>(n - 2) * two.powi(n as i32 - 1) * h.powi(n as i32 - 2)
        }
        (BodyKind::Cube, Functional::Volume) => nf.powf(nf / two) / factorial::<T>(n - 1) * h.powi(n as i32 - 1),
        (BodyKind::Cube, Functional::Perimeter) => {
            (nf - one).sqrt() / factorial::<T>(n - 2) * nf.powf(nf / two) * h.powi(n as i32 - 2)
        }
    };
    let a = extremal_direction::<T>(body);
    let regime = regime_check(&SectionQuery { body, a, t });
    let out_of_range = match maximality_range::<T>(body, functional) {
        Some((lo, hi)) => !(t > lo && t <= hi),
        None => true,
    };
    SectionValue { value, method: Method::ClosedForm, regime, out_of_range }
}
