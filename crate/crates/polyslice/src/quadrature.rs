//! Gauss–Legendre panels and adaptive Gauss–Kronrod integration.

use core::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Result, SliceError};
use crate::scalar::Scalar;

// QUADPACK qk21 abscissae (positive half, descending) and weights.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525055930,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651146,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue<T>: Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> {
    fn magnitude(&self) -> T;
}

impl<T: Scalar> QuadValue<T> for T {
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Scalar> QuadValue<T> for Complex<T> {
    fn magnitude(&self) -> T {
        self.norm()
    }
}

/// 10-point Gauss–Legendre rule on `[a, b]`; exact for polynomials of degree ≤ 19.
pub fn gauss10<T: Scalar, V: QuadValue<T>>(f: &impl Fn(T) -> V, a: T, b: T) -> V {
    let c = (a + b) * T::lit(0.5);
    let h = (b - a) * T::lit(0.5);
    let mut acc = V::zero();
    for (i, &w) in WG.iter().enumerate() {
        let x = h * T::lit(XGK[2 * i + 1]);
        acc = acc + (f(c - x) + f(c + x)) * T::lit(w);
    }
    acc * h
}

fn kronrod21<T: Scalar, V: QuadValue<T>>(f: &impl Fn(T) -> V, a: T, b: T) -> (V, T) {
    let c = (a + b) * T::lit(0.5);
    let h = (b - a) * T::lit(0.5);
    let fc = f(c);
    let mut k = fc * T::lit(WGK[10]);
    let mut g = V::zero();
    for i in 0..10 {
        let x = h * T::lit(XGK[i]);
        let pair = f(c - x) + f(c + x);
        k = k + pair * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + pair * T::lit(WG[i / 2]);
        }
    }
    (k * h, ((k - g) * h).magnitude())
}

/// Globally adaptive Gauss–Kronrod (21-point) on a finite interval.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol·|I|)`.
pub fn adaptive<T: Scalar, V: QuadValue<T>>(
    f: impl Fn(T) -> V,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> Result<V> {
    let mut parts = vec![(a, b, kronrod21(&f, a, b))];
    loop {
        let total = parts.iter().fold(V::zero(), |acc, p| acc + p.2 .0);
        let err: T = parts.iter().map(|p| p.2 .1).sum();
        if err <= abs_tol.max(rel_tol * total.magnitude()) {
            return Ok(total);
        }
        if parts.len() >= max_intervals {
            return Err(SliceError::QuadratureFailure("interval budget exhausted"));
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].2 .1.partial_cmp(&parts[j].2 .1).unwrap_or(core::cmp::Ordering::Equal))
            .expect("non-empty");
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        if !(mid > lo && mid < hi) {
            return Err(SliceError::QuadratureFailure("interval below floating resolution"));
        }
        parts.push((lo, mid, kronrod21(&f, lo, mid)));
        parts.push((mid, hi, kronrod21(&f, mid, hi)));
    }
}

/// `∫_a^∞ f` through the substitution `x = a + u/(1-u)`.
pub fn adaptive_to_infinity<T: Scalar, V: QuadValue<T>>(
    f: impl Fn(T) -> V,
    a: T,
    abs_tol: T,
    rel_tol: T,
    max_intervals: usize,
) -> Result<V> {
    let one = T::one();
    let g = |u: T| {
        if u >= one {
            return V::zero();
        }
        let v = one - u;
        f(a + u / v) * (one / (v * v))
    };
    adaptive(g, T::zero(), one, abs_tol, rel_tol, max_intervals)
}
