//! The two integral kernels behind the Fourier representations of `A` and `P`.

use num_complex::Complex;

use crate::error::{Result, SliceError};
use crate::quadrature::{adaptive_to_infinity, gauss10};
use crate::scalar::Scalar;

/// `(1/2π) ∫_ℝ Π_k 1/(1 + i c_k s) ds` by residues in the upper half plane.
///
/// Equals `Σ_{c_k>0} c_k^{m-2} / Π_{j≠k}(c_k - c_j)`, the divided difference of
/// `x₊^{m-2}` at the nodes `c`. Zero coefficients are dropped. Positive nodes
/// closer than 1% of the largest are grouped and their joint residue is
/// summed through a Taylor expansion, so repeated nodes are exact.
pub fn rational_product_integral<T: Scalar>(coeffs: &[T]) -> Result<T> {
    let c: Vec<T> = coeffs.iter().copied().filter(|&x| x != T::zero()).collect();
    if c.len() < 2 {
        return Err(SliceError::NotIntegrable);
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(SliceError::InvalidArgument("non-finite coefficient"));
    }
    let p = c.len() - 2;
    let scale = c.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let mut pos: Vec<usize> = (0..c.len()).filter(|&k| c[k] > T::zero()).collect();
    pos.sort_by(|&i, &j| c[i].partial_cmp(&c[j]).expect("finite"));

    let eta = T::lit(1e-2) * scale;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &k in &pos {
        match clusters.last_mut() {
            Some(cl) if c[k] - c[*cl.last().expect("non-empty")] < eta => cl.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut total = T::zero();
    for cl in &clusters {
        total += cluster_residue(&c, cl, p);
    }
    Ok(total)
}

fn direct_terms<T: Scalar>(c: &[T], members: &[usize], p: usize) -> T {
    members
        .iter()
        .map(|&k| {
            let den = c.iter().enumerate().filter(|&(j, _)| j != k).fold(T::one(), |acc, (_, &cj)| acc * (c[k] - cj));
            c[k].powi(p as i32) / den
        })
        .sum()
}

/// Sum of residues of `z^p / Π_j (z - c_j)` at the nodes in `members`.
fn cluster_residue<T: Scalar>(c: &[T], members: &[usize], p: usize) -> T {
    let r = members.len();
    if r == 1 {
        return direct_terms(c, members, p);
    }
    let nu = members.iter().map(|&k| c[k]).sum::<T>() / T::of_usize(r);
    let delta: Vec<T> = members.iter().map(|&k| c[k] - nu).collect();
    let others: Vec<T> = (0..c.len()).filter(|k| !members.contains(k)).map(|k| c[k]).collect();
    let width = delta.iter().fold(T::zero(), |m, d| m.max(d.abs()));
    let reach = others.iter().fold(T::infinity(), |m, &o| m.min((nu - o).abs()));
    let ratio = width / reach;
    if !(ratio < T::lit(0.5)) {
        return direct_terms(c, members, p);
    }
    // Divided difference of φ(z) = z^p / Π_{others}(z - o) at ν + δ_i:
    // Σ_k φ_k h_{k-r+1}(δ), with φ_k the Taylor coefficients at ν.
    let order = if width == T::zero() {
        r
    } else {
        let extra = (T::lit(-40.0) / ratio.ln()).ceil().as_f64() as usize;
        r + extra.min(400)
    };
    let mut phi = vec![T::zero(); order];
    // (ν + h)^p
    let mut binom = T::one();
    for (i, slot) in phi.iter_mut().enumerate().take(p + 1) {
        *slot = binom * nu.powi((p - i) as i32);
        binom = binom * T::of_usize(p - i) / T::of_usize(i + 1);
    }
    for &o in &others {
        // 1/((ν - o) + h) = Σ (-1)^i h^i / (ν - o)^{i+1}
        let d = nu - o;
        let mut series = vec![T::zero(); order];
        let mut term = T::one() / d;
        for s in series.iter_mut() {
            *s = term;
            term = -term / d;
        }
        let mut next = vec![T::zero(); order];
        for i in 0..order {
            if phi[i] == T::zero() {
                continue;
            }
            for j in 0..order - i {
                next[i + j] += phi[i] * series[j];
            }
        }
        phi = next;
    }
    let len = order - (r - 1);
    let mut h = vec![T::zero(); len];
    h[0] = T::one();
    for &d in &delta {
        for j in 1..len {
            let prev = h[j - 1];
            h[j] += d * prev;
        }
    }
    (r - 1..order).map(|k| phi[k] * h[k - (r - 1)]).sum()
}

/// `(2/π) ∫₀^∞ Π_j sinc(w_j s) · cos(2ts) ds`: the density of `Σ w_j U_j` at
/// `t` for independent `U_j` uniform on `[-1/2, 1/2]`.
///
/// The integral is split at `S`: `[0, S]` by Gauss–Legendre panels that
/// resolve the fastest oscillation; beyond `S` the integrand is a finite sum
/// of `e^{iωs}/s^k`, each term integrated along the ray `S + iy`, where it
/// decays exponentially.
pub fn sinc_product_integral<T: Scalar>(weights: &[T], t: T) -> Result<T> {
    let scale = weights.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let w: Vec<T> = weights.iter().map(|x| x.abs()).filter(|&x| x > T::lit(1e-12) * scale).collect();
    let t = t.abs();
    match w.len() {
        0 => return Err(SliceError::QuadratureFailure("no decaying factor: the integral is a delta function")),
        1 => {
            let edge = w[0] / T::lit(2.0);
            let tol = T::lit(1e-14) * T::one().max(edge);
            return Ok(if (t - edge).abs() <= tol {
                T::one() / (T::lit(2.0) * w[0])
            } else if t < edge {
                T::one() / w[0]
            } else {
                T::zero()
            });
        }
        k if k > 16 => return Err(SliceError::ResourceLimit("sinc tail expansion")),
        _ => {}
    }
    let k = w.len();
    let two = T::lit(2.0);
    let w_min = w.iter().fold(T::infinity(), |m, &x| m.min(x));
    let s_cut = (T::lit(4.0) / w_min).max(T::lit(10.0)).min(T::lit(2000.0));
    let omega_max: T = w.iter().copied().sum::<T>() + two * t;
    let panel = T::PI() / (T::lit(4.0) * omega_max);
    let panels = (s_cut / panel).ceil().as_f64() as usize;
    let panel = s_cut / T::of_usize(panels);

    let integrand = |s: T| -> T {
        let mut v = (two * t * s).cos();
        for &x in &w {
            let z = x * s;
            v *= if z.abs() < T::lit(1e-8) { T::one() - z * z / T::lit(6.0) } else { z.sin() / z };
        }
        v
    };
    let mut head = T::zero();
    for i in 0..panels {
        let lo = panel * T::of_usize(i);
        head += gauss10(&integrand, lo, lo + panel);
    }

    // Π sin(w_j s) cos(2ts) = Σ_{σ,τ} Πσ_j / ((2i)^k·2) · e^{i(⟨σ,w⟩ + 2τt)s};
    // the (-σ,-τ) partner contributes (-1)^k times the conjugate tail.
    let prefactor = T::one() / w.iter().fold(T::one(), |acc, &x| acc * x);
    let mut tail = Complex::new(T::zero(), T::zero());
    for signs in 0..1usize << k {
        let mut omega = two * t;
        let mut parity = T::one();
        for (j, &x) in w.iter().enumerate() {
            if signs >> j & 1 == 1 {
                omega -= x;
                parity = -parity;
            } else {
                omega += x;
            }
        }
        let tk = power_tail(omega, s_cut, k)?;
        let pair = if k % 2 == 0 { tk + tk.conj() } else { tk - tk.conj() };
        tail = tail + pair * parity;
    }
    let denom = Complex::new(T::zero(), two).powi(k as i32) * two;
    let tail = (tail / denom).re * prefactor;
    Ok(T::FRAC_2_PI() * (head + tail))
}

/// `∫_S^∞ e^{iωs} s^{-k} ds` for `k >= 2`.
fn power_tail<T: Scalar>(omega: T, s: T, k: usize) -> Result<Complex<T>> {
    let kf = T::of_usize(k);
    let base = s.powi(1 - k as i32);
    let beta = omega.abs() * s;
    if beta < T::lit(1e-13) {
        return Ok(Complex::new(base / (kf - T::one()), T::zero()));
    }
    // s = S(1 + ix): ∫₀^∞ e^{-βx} (1 + ix)^{-k} dx, times i·S^{1-k}·e^{iωS}.
    let f = |x: T| Complex::new(T::one(), x).powi(-(k as i32)) * (-beta * x).exp();
    let j = adaptive_to_infinity(f, T::zero(), T::lit(1e-16), T::lit(1e-13), 2000)?;
    let phase = Complex::new(T::zero(), beta).exp();
    let v = Complex::new(T::zero(), T::one()) * phase * j * base;
    Ok(if omega > T::zero() { v } else { v.conj() })
}
