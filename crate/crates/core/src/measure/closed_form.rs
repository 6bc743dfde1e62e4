//! Exact antiderivative of `|h(iy)|²` for rational `h = P/Q` with
//! `deg Q ≤ 2`.
//!
//! On the axis `|h(iy)|² = N(y)/D(y)` with `N = p·p̄`, `D = q·q̄`, where
//! `p(y) = P(iy)` and `p̄` has conjugated coefficients. The roots of `D` are
//! `−i·r` and `i·conj(r)` for each root `r` of `Q`, so none are real unless
//! `Q` vanishes on the axis. Partial fractions then give logs and arctangents.

use num_complex::Complex;
use num_traits::Zero;

use crate::poly::{cluster_roots, roots, Poly};
use crate::Complex64;

#[derive(Clone, Debug)]
struct PoleTerm {
    /// Pole `u + iv` in the `y`-plane, `v ≠ 0`.
    u: f64,
    v: f64,
    /// Coefficients of `1/(y − y_p)` and `1/(y − y_p)²`.
    c1: Complex64,
    c2: Complex64,
}

#[derive(Clone, Debug)]
pub(crate) struct ClosedForm {
    /// Real polynomial part of `N/D`, increasing degree.
    poly: Vec<f64>,
    poles: Vec<PoleTerm>,
    integrable: bool,
}

/// Divides by `(y − r)`, dropping the remainder.
fn deflate(p: &Poly<Complex64>, r: Complex64) -> Poly<Complex64> {
    p.div_rem(&Poly::new(vec![-r, Complex64::new(1.0, 0.0)])).0
}

impl ClosedForm {
    pub(crate) fn new(p: &Poly<Complex64>, q: &Poly<Complex64>) -> Option<Self> {
        let dq = q.degree()?;
        if dq > 2 {
            return None;
        }
        let i = Complex64::i();
        let py = p.compose_scale(&i);
        let qy = q.compose_scale(&i);
        let n = py.mul(&py.conj_coeffs());
        let d = qy.mul(&qy.conj_coeffs());
        let (s, rem) = n.div_rem(&d);
        let mut y_poles = Vec::new();
        for r in roots(q) {
            y_poles.push(Complex64::new(r.im, -r.re));
            y_poles.push(Complex64::new(r.im, r.re));
        }
        let scale = y_poles.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let d_prime = d.derivative();
        let mut poles = Vec::new();
        for (yp, mult) in cluster_roots(&y_poles, 1e-9 * scale) {
            if yp.im.abs() <= 1e-12 * scale {
                return None;
            }
            let (c1, c2) = match mult {
                1 => (rem.eval(&yp) / d_prime.eval(&yp), Complex64::zero()),
                2 => {
                    let g = deflate(&deflate(&d, yp), yp);
                    let gv = g.eval(&yp);
                    let rv = rem.eval(&yp);
                    let c2 = rv / gv;
                    let c1 = (rem.derivative().eval(&yp) * gv - rv * g.derivative().eval(&yp)) / (gv * gv);
                    (c1, c2)
                }
                _ => return None,
            };
            poles.push(PoleTerm {
                u: yp.re,
                v: yp.im,
                c1,
                c2,
            });
        }
        let dp = p.degree().unwrap_or(0);
        Some(ClosedForm {
            poly: s.coeffs().iter().map(|c| c.re).collect(),
            poles,
            integrable: p.is_zero() || dp < dq,
        })
    }

    /// `∫_{y1}^{y2} |h(iy)|² dy`, with `width = y2 − y1` supplied exactly
    /// by the caller since the difference of two large endpoints is not.
    pub(crate) fn window(&self, y1: f64, y2: f64, width: f64) -> f64 {
        let mut total = 0.0;
        for (k, c) in self.poly.iter().enumerate() {
            // y2^{k+1} − y1^{k+1} = width · Σ y2^i y1^{k−i}
            let sum: f64 = (0..=k).map(|i| y2.powi(i as i32) * y1.powi((k - i) as i32)).sum();
            total += c * width * sum / (k as f64 + 1.0);
        }
        let mut acc = Complex64::zero();
        for t in &self.poles {
            let (u, v) = (t.u, t.v);
            let d1 = y1 - u;
            let dlog = 0.5 * (width * (y2 + y1 - 2.0 * u) / (d1 * d1 + v * v)).ln_1p();
            let x1 = d1 / v;
            let x2 = (y2 - u) / v;
            let datan = (width / v).atan2(1.0 + x1 * x2);
            acc += t.c1 * Complex::new(dlog, datan);
            if t.c2 != Complex64::zero() {
                let yp = Complex64::new(u, v);
                acc += t.c2 * (1.0 / (y1 - yp) - 1.0 / (y2 - yp));
            }
        }
        (total + acc.re).max(0.0)
    }

    /// `∫_ℝ |h(iy)|² dy`, or `None` when the integral diverges at infinity.
    pub(crate) fn total(&self) -> Option<f64> {
        if !self.integrable {
            return None;
        }
        let s: f64 = self
            .poles
            .iter()
            .map(|t| -std::f64::consts::PI * t.v.signum() * t.c1.im)
            .sum();
        Some(s.max(0.0))
    }
}
