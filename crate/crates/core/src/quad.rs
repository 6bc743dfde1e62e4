//! Globally adaptive 7/15-point Gauss–Kronrod quadrature.
//!
//! Intervals are bisected, largest error first, until the summed error
//! estimate meets `max(abs_tol, rel_tol·|I|)`. Infinite ranges are mapped to
//! finite ones by algebraic substitutions whose Jacobians keep `1/y²`-type
//! tails smooth at the mapped endpoints.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::Real;

/// Integrand value: a real scalar or a complex number over it.
pub trait QuadValue<F>: Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<F, Output = Self> {
    fn magnitude(&self) -> F;
    fn finite(&self) -> bool;
}

impl<F: Real> QuadValue<F> for F {
    fn magnitude(&self) -> F {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl<F: Real> QuadValue<F> for Complex<F> {
    fn magnitude(&self) -> F {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum QuadError<F: std::fmt::Debug + std::fmt::Display> {
    #[error("integrand is not finite at {at}")]
    NonFinite { at: F },
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V, F> {
    pub value: V,
    pub error: F,
    pub evaluations: usize,
    pub converged: bool,
}

// Kronrod abscissae, descending; odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct Integrator<F> {
    pub rel_tol: F,
    pub abs_tol: F,
    pub max_segments: usize,
}

impl<F: Real> Default for Integrator<F> {
    fn default() -> Self {
        Integrator {
            rel_tol: F::of(1e-10),
            abs_tol: F::of(1e-15),
            max_segments: 4000,
        }
    }
}

struct Segment<V, F> {
    a: F,
    b: F,
    value: V,
    error: F,
}

impl<F: Real + std::fmt::Display> Integrator<F> {
    pub fn with_tolerance(rel_tol: F, abs_tol: F) -> Self {
        Integrator {
            rel_tol,
            abs_tol,
            ..Default::default()
        }
    }

    fn panel<V, G>(&self, f: &mut G, a: F, b: F) -> Result<(V, F), QuadError<F>>
    where
        V: QuadValue<F>,
        G: FnMut(F) -> V,
    {
        let half = F::of(0.5);
        let center = (a + b) * half;
        let half_len = (b - a) * half;
        let mut eval = |x: F| -> Result<V, QuadError<F>> {
            let v = f(x);
            if v.finite() {
                Ok(v)
            } else {
                Err(QuadError::NonFinite { at: x })
            }
        };
        let fc = eval(center)?;
        let mut res_k = fc * F::of(WGK[7]);
        let mut res_g = fc * F::of(WG[3]);
        let mut res_abs = fc.magnitude() * F::of(WGK[7]);
        let mut values = [(V::zero(), V::zero()); 7];
        for (j, slot) in values.iter_mut().enumerate() {
            let dx = half_len * F::of(XGK[j]);
            let f1 = eval(center - dx)?;
            let f2 = eval(center + dx)?;
            *slot = (f1, f2);
            res_k = res_k + (f1 + f2) * F::of(WGK[j]);
            res_abs = res_abs + (f1.magnitude() + f2.magnitude()) * F::of(WGK[j]);
            if j % 2 == 1 {
                res_g = res_g + (f1 + f2) * F::of(WG[j / 2]);
            }
        }
        let mean = res_k * half;
        let mut res_asc = (fc - mean).magnitude() * F::of(WGK[7]);
        for (j, (f1, f2)) in values.iter().enumerate() {
            res_asc = res_asc + ((*f1 - mean).magnitude() + (*f2 - mean).magnitude()) * F::of(WGK[j]);
        }
        let scale = half_len.abs();
        let res_abs = res_abs * scale;
        let res_asc = res_asc * scale;
        let mut err = ((res_k - res_g) * half_len).magnitude();
        if res_asc > F::zero() && err > F::zero() {
            let r = (F::of(200.0) * err / res_asc).powf(F::of(1.5));
            err = res_asc * if r < F::one() { r } else { F::one() };
        }
        let floor = F::of(50.0) * F::epsilon() * res_abs;
        if floor > err {
            err = floor;
        }
        Ok((res_k * half_len, err))
    }

    /// Integral of `f` over the finite interval `[a, b]`.
    pub fn integrate<V, G>(&self, mut f: G, a: F, b: F) -> Result<QuadResult<V, F>, QuadError<F>>
    where
        V: QuadValue<F>,
        G: FnMut(F) -> V,
    {
        if a == b {
            return Ok(QuadResult {
                value: V::zero(),
                error: F::zero(),
                evaluations: 0,
                converged: true,
            });
        }
        let (v, e) = self.panel(&mut f, a, b)?;
        let mut segs = vec![Segment {
            a,
            b,
            value: v,
            error: e,
        }];
        let mut evaluations = 15;
        loop {
            let total = segs.iter().fold(V::zero(), |acc, s| acc + s.value);
            let err = segs.iter().fold(F::zero(), |acc, s| acc + s.error);
            let target = self.abs_tol.max(self.rel_tol * total.magnitude());
            if err <= target || segs.len() >= self.max_segments {
                return Ok(QuadResult {
                    value: total,
                    error: err,
                    evaluations,
                    converged: err <= target,
                });
            }
            let mut worst = 0;
            for (i, s) in segs.iter().enumerate() {
                if s.error > segs[worst].error {
                    worst = i;
                }
            }
            let s = segs.swap_remove(worst);
            let mid = (s.a + s.b) * F::of(0.5);
            if mid <= s.a.min(s.b) || mid >= s.a.max(s.b) {
                // Interval exhausted at working precision.
                segs.push(s);
                let total = segs.iter().fold(V::zero(), |acc, s| acc + s.value);
                let err = segs.iter().fold(F::zero(), |acc, s| acc + s.error);
                return Ok(QuadResult {
                    value: total,
                    error: err,
                    evaluations,
                    converged: false,
                });
            }
            let (v1, e1) = self.panel(&mut f, s.a, mid)?;
            let (v2, e2) = self.panel(&mut f, mid, s.b)?;
            evaluations += 30;
            segs.push(Segment {
                a: s.a,
                b: mid,
                value: v1,
                error: e1,
            });
            segs.push(Segment {
                a: mid,
                b: s.b,
                value: v2,
                error: e2,
            });
        }
    }

    /// Integral of `f` over the whole real line, via `y = x/(1-x²)`.
    pub fn integrate_real_line<V, G>(&self, mut f: G) -> Result<QuadResult<V, F>, QuadError<F>>
    where
        V: QuadValue<F>,
        G: FnMut(F) -> V,
    {
        let one = F::one();
        self.integrate(
            |x: F| {
                let d = one - x * x;
                if d <= F::zero() {
                    return V::zero();
                }
                let y = x / d;
                f(y) * ((one + x * x) / (d * d))
            },
            -one,
            one,
        )
    }

    /// Integral of `f` over `[a, ∞)`, via `t = a + x/(1-x)`.
    pub fn integrate_half_line<V, G>(&self, mut f: G, a: F) -> Result<QuadResult<V, F>, QuadError<F>>
    where
        V: QuadValue<F>,
        G: FnMut(F) -> V,
    {
        let one = F::one();
        self.integrate(
            |x: F| {
                let d = one - x;
                if d <= F::zero() {
                    return V::zero();
                }
                f(a + x / d) * (one / (d * d))
            },
            F::zero(),
            one,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        let q = Integrator::<f64>::default();
        let r = q.integrate(|x: f64| x * x, -1.0, 2.0).unwrap();
        assert_relative_eq!(r.value, 3.0, epsilon = 1e-15);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn lorentzian_window_matches_arctan() {
        let q = Integrator::<f64>::default();
        let r = q.integrate(|y: f64| 1.0 / (0.25 + y * y), -1.0, 1.0).unwrap();
        assert_relative_eq!(r.value, 4.0 * 2f64.atan(), max_relative = 1e-12);
        assert!(r.converged);
    }

    #[test]
    fn infinite_ranges() {
        let q = Integrator::<f64>::default();
        let r = q.integrate_real_line(|y: f64| 1.0 / (0.25 + y * y)).unwrap();
        assert_relative_eq!(r.value, 2.0 * PI, max_relative = 1e-10);
        let r = q.integrate_half_line(|t: f64| (-t).exp(), 0.0).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn complex_integrand() {
        let q = Integrator::<f64>::default();
        let r = q.integrate(|y: f64| Complex::new(0.0, y).exp(), 0.0, PI).unwrap();
        assert_relative_eq!(r.value.re, 0.0, epsilon = 1e-12);
        assert_relative_eq!(r.value.im, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn single_precision_works_too() {
        let q = Integrator::<f32>::with_tolerance(1e-5, 1e-7);
        let r = q.integrate(|x: f32| x.cos(), 0.0, std::f32::consts::FRAC_PI_2).unwrap();
        assert!((r.value - 1.0).abs() < 1e-5);
    }

    #[test]
    fn non_finite_is_reported() {
        let q = Integrator::<f64>::default();
        let e = q
            .integrate(|y: f64| if y == 0.5 { f64::NAN } else { y }, 0.0, 1.0)
            .unwrap_err();
        assert_eq!(e, QuadError::NonFinite { at: 0.5 });
    }

    #[test]
    fn singular_integrand_does_not_converge() {
        let q = Integrator::<f64>::default();
        let r = q.integrate(|y: f64| 1.0 / (y * y), -1.0, 1.0);
        match r {
            Err(QuadError::NonFinite { .. }) => {}
            Ok(res) => assert!(!res.converged || res.value > 1e6),
        }
    }
}
