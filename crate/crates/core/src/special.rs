//! Fresnel integrals and the Dirichlet kernel.
//!
//! The Fresnel integrals use the unnormalised convention
//! `C(x) = int_0^x cos(t^2) dt`, `S(x) = int_0^x sin(t^2) dt`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `C(x)`, `S(x)` and `|C(x) + j S(x)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelValue {
    pub c: f64,
    pub s: f64,
    pub f_magnitude: f64,
}

impl FresnelValue {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.c, self.s)
    }
}

/// Below this argument the power series is used, above it the continued
/// fraction. Both agree to ~1e-15 at the seam.
pub(crate) const SERIES_LIMIT: f64 = 1.88;

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// Fresnel integrals at `x`.
pub fn fresnel(x: f64) -> Result<FresnelValue> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("fresnel argument {x} is not finite")));
    }
    let ax = x.abs();
    let (c, s) = if ax <= SERIES_LIMIT {
        fresnel_series(ax)
    } else {
        fresnel_continued_fraction(ax)
    };
    let (c, s) = if x.is_sign_negative() { (-c, -s) } else { (c, s) };
    Ok(FresnelValue {
        c,
        s,
        f_magnitude: c.hypot(s),
    })
}

/// `F(x) = C(x) + j S(x)` for finite `x`.
pub(crate) fn fresnel_f(x: f64) -> Complex64 {
    match fresnel(x) {
        Ok(v) => v.as_complex(),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// Alternating Maclaurin series, `x >= 0`:
/// `C = sum (-1)^k x^(4k+1) / ((2k)! (4k+1))`, `S = sum (-1)^k x^(4k+3) / ((2k+1)! (4k+3))`.
pub(crate) fn fresnel_series(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 0.0);
    }
    let x2 = x * x;
    let mut c = 0.0;
    let mut s = 0.0;
    // term = x^(2j+1) / j!, j = 0, 1, 2, ...; even j feed C, odd j feed S
    let mut term = x;
    let mut sign = 1.0;
    for j in 0..MAX_ITER {
        let contribution = term / (2 * j + 1) as f64;
        if j % 2 == 0 {
            c += sign * contribution;
        } else {
            s += sign * contribution;
            sign = -sign;
        }
        if contribution < EPS * c.abs().max(s.abs()) {
            break;
        }
        term *= x2 / (j + 1) as f64;
    }
    (c, s)
}

/// Modified Lentz evaluation of the complementary error function continued
/// fraction, `x > 0`.
pub(crate) fn fresnel_continued_fraction(x: f64) -> (f64, f64) {
    const TINY: f64 = 1e-300;
    // map to the pi/2-normalised variable u = x sqrt(2/pi), where pi u^2 = 2 x^2
    let u = x * (2.0 / PI).sqrt();
    let x2 = x * x;
    let mut b = Complex64::new(1.0, -2.0 * x2);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    let mut n = -1.0;
    for _ in 2..MAX_ITER {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += Complex64::new(4.0, 0.0);
        d = Complex64::new(1.0, 0.0) / (d * a + b);
        c = b + Complex64::new(a, 0.0) / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < EPS {
            break;
        }
    }
    h *= Complex64::new(u, -u);
    let phase = Complex64::new(x2.cos(), x2.sin());
    let cs = Complex64::new(0.5, 0.5) * (Complex64::new(1.0, 0.0) - phase * h);
    let scale = (PI / 2.0).sqrt();
    (scale * cs.re, scale * cs.im)
}

/// Dirichlet kernel `sin(pi M d x) / (M sin(pi d x))` for `M = count`,
/// `d = spacing`, `x = delta`.
///
/// The argument is reduced to the nearest period before evaluation, so the
/// kernel stays accurate next to its grating points `d x = k`, where it takes
/// the limit value `(-1)^(k (M - 1))`.
pub fn dirichlet_kernel(count: usize, spacing: f64, delta: f64) -> f64 {
    assert!(count >= 1, "dirichlet kernel needs at least one element");
    let x = spacing * delta;
    let k = x.round();
    let e = x - k;
    let odd_k = k.rem_euclid(2.0) == 1.0;
    let sign = if odd_k && count.is_multiple_of(2) { -1.0 } else { 1.0 };
    let den = (PI * e).sin();
    if den.abs() < 1e-9 {
        return sign;
    }
    sign * (PI * count as f64 * e).sin() / (count as f64 * den)
}
