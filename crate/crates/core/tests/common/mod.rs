//! Reference implementations written directly from the geometry, sharing no
//! code with the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct Geometry {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub d: f64,
    pub lambda: f64,
}

impl Geometry {
    pub fn k(&self) -> f64 {
        2.0 * PI / self.lambda
    }

    pub fn module_offsets(&self) -> Vec<f64> {
        centred(self.n)
    }

    pub fn antenna_offsets(&self) -> Vec<f64> {
        centred(self.m)
    }

    pub fn module_centre(&self, n: f64) -> f64 {
        n * self.gamma * self.d
    }
}

/// `0, 1, ..., k - 1` shifted to be symmetric about zero.
pub fn centred(k: usize) -> Vec<f64> {
    let shift = (k as f64 - 1.0) / 2.0;
    (0..k).map(|i| i as f64 - shift).collect()
}

/// Planar Euclidean distance from the source to the axis point `(0, y)`.
pub fn euclid(r: f64, theta: f64, y: f64) -> f64 {
    let (px, py) = (r * theta.cos(), r * theta.sin());
    (px * px + (py - y) * (py - y)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Usw,
    Upw,
    Diff,
    Common,
}

fn cis(phase: f64) -> Complex64 {
    Complex64::new(phase.cos(), phase.sin())
}

/// Element responses built from coordinates, module-major.
pub fn response(g: &Geometry, r: f64, theta: f64, kind: Kind) -> Vec<Complex64> {
    let k = g.k();
    let mut out = Vec::with_capacity(g.n * g.m);
    for n in g.module_offsets() {
        let yc = g.module_centre(n);
        let rn = euclid(r, theta, yc);
        let sin_n = (r * theta.sin() - yc) / rn;
        for m in g.antenna_offsets() {
            let y = yc + m * g.d;
            let z = match kind {
                Kind::Usw => cis(-k * euclid(r, theta, y)),
                Kind::Upw => cis(-k * r) * cis(k * y * theta.sin()),
                Kind::Diff => cis(-k * rn) * cis(k * m * g.d * sin_n),
                Kind::Common => cis(-k * rn) * cis(k * m * g.d * theta.sin()),
            };
            out.push(z);
        }
    }
    out
}

/// `|sum_i conj(a_i) b_i| / (N M)` as an explicit double loop.
pub fn brute_pattern(g: &Geometry, focus: (f64, f64), observed: (f64, f64), kind: Kind) -> f64 {
    let a = response(g, focus.0, focus.1, kind);
    let b = response(g, observed.0, observed.1, kind);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        acc += x.conj() * y;
    }
    acc.norm() / (g.n * g.m) as f64
}

/// `(1 / M) |sum_n exp(j 2 pi d delta n)|` over the symmetric grid.
pub fn phasor_sum_kernel(m: usize, d: f64, delta: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in centred(m) {
        acc += cis(2.0 * PI * d * delta * n);
    }
    acc.norm() / m as f64
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// Adaptive quadrature of `(cos t^2, sin t^2)` on `[a, b]`: a panel is
/// accepted when the 12- and 24-point Gauss rules agree.
pub struct FresnelQuadrature {
    coarse: Vec<(f64, f64)>,
    fine: Vec<(f64, f64)>,
}

impl FresnelQuadrature {
    pub fn new() -> Self {
        Self {
            coarse: gauss_legendre(12),
            fine: gauss_legendre(24),
        }
    }

    fn panel(rule: &[(f64, f64)], a: f64, b: f64) -> (f64, f64) {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        let (mut c, mut s) = (0.0, 0.0);
        for &(x, w) in rule {
            let t = mid + half * x;
            let (sn, cs) = (t * t).sin_cos();
            c += w * cs;
            s += w * sn;
        }
        (c * half, s * half)
    }

    pub fn integrate(&self, a: f64, b: f64) -> (f64, f64) {
        self.adapt(a, b, 0)
    }

    fn adapt(&self, a: f64, b: f64, depth: u32) -> (f64, f64) {
        let (c1, s1) = Self::panel(&self.coarse, a, b);
        let (c2, s2) = Self::panel(&self.fine, a, b);
        if depth >= 40 || ((c1 - c2).abs() < 1e-15 && (s1 - s2).abs() < 1e-15) {
            return (c2, s2);
        }
        let mid = (a + b) / 2.0;
        let (cl, sl) = self.adapt(a, mid, depth + 1);
        let (cr, sr) = self.adapt(mid, b, depth + 1);
        (cl + cr, sl + sr)
    }

    /// `C(x), S(x)` at every point, integrating between consecutive sorted
    /// abscissae so each interval is covered once.
    pub fn at_points(&self, xs: &[f64]) -> Vec<(f64, f64)> {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&i, &j| xs[i].abs().total_cmp(&xs[j].abs()));
        let mut out = vec![(0.0, 0.0); xs.len()];
        let (mut at, mut c, mut s) = (0.0, 0.0, 0.0);
        for i in order {
            let x = xs[i].abs();
            let (dc, ds) = self.integrate(at, x);
            c += dc;
            s += ds;
            at = x;
            out[i] = if xs[i] < 0.0 { (-c, -s) } else { (c, s) };
        }
        out
    }
}
