//! The unitary chain `L²(0,1) → L²(0,∞) → H²(ℂ₊)` and identities checked
//! on reproducing kernels.
//!
//! `J f(t) = e^{−t/2} f(e^{−t})` is an isometry onto `L²(0,∞)`, and the
//! Laplace transform carries `J xⁿ = e^{−(n+½)t}` to the kernel
//! `k_{n+½}(s) = 1/(s + n + ½)`. The `H²` inner product is
//! `⟨F, G⟩ = (1/2π) ∫ F(iy)·conj(G(iy)) dy`, so `⟨k_w, k_z⟩ = 1/(z + conj w)`.

use std::cell::Cell;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::ComplexExpr;
use crate::quad::{Integrator, QuadError, QuadValue};
use crate::scalar::Real;
use crate::symbols::{AffineMap, MonomialSpec, SymbolPair};
use crate::Complex64;

/// `J f(t) = e^{−t/2}·f(e^{−t})`.
pub fn j_forward<F: Real, V: QuadValue<F>>(f: impl Fn(F) -> V, t: F) -> V {
    let e = (-t).exp();
    f(e) * e.sqrt()
}

/// `J⁻¹ g(x) = g(−ln x)/√x` for `x ∈ (0, 1)`.
pub fn j_inverse<F: Real, V: QuadValue<F>>(g: impl Fn(F) -> V, x: F) -> V {
    g(-x.ln()) * (F::one() / x.sqrt())
}

/// `k_w(s) = 1/(s + conj w)`, `Re w > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelVector<F> {
    pub w: Complex<F>,
}

impl<F: Real> KernelVector<F> {
    pub fn new(w: Complex<F>) -> Result<Self> {
        if w.re > F::zero() {
            Ok(KernelVector { w })
        } else {
            Err(Error::InvalidSpec(format!(
                "kernel parameter needs Re w > 0, got {:?}",
                w
            )))
        }
    }

    pub fn real(w: F) -> Result<Self> {
        Self::new(Complex::new(w, F::zero()))
    }

    pub fn eval(&self, s: Complex<F>) -> Complex<F> {
        (s + self.w.conj()).inv()
    }

    /// `⟨k_self, k_other⟩ = 1/(other + conj self) = k_self(other)`.
    pub fn inner(&self, other: &Self) -> Complex<F> {
        self.eval(other.w)
    }
}

/// Finite combination `Σ cⱼ k_{wⱼ}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelSpan<F> {
    pub terms: Vec<(Complex<F>, KernelVector<F>)>,
}

impl<F: Real> KernelSpan<F> {
    pub fn zero() -> Self {
        KernelSpan { terms: Vec::new() }
    }

    pub fn single(c: Complex<F>, k: KernelVector<F>) -> Self {
        KernelSpan { terms: vec![(c, k)] }
    }

    pub fn eval(&self, s: Complex<F>) -> Complex<F> {
        self.terms
            .iter()
            .fold(Complex::new(F::zero(), F::zero()), |acc, (c, k)| acc + *c * k.eval(s))
    }

    pub fn inner(&self, other: &Self) -> Complex<F> {
        let mut acc = Complex::new(F::zero(), F::zero());
        for (c, k) in &self.terms {
            for (d, m) in &other.terms {
                acc = acc + *c * d.conj() * k.inner(m);
            }
        }
        acc
    }

    pub fn norm(&self) -> F {
        self.inner(self).re.max(F::zero()).sqrt()
    }

    /// `G[i][j] = ⟨k_{wⱼ}, k_{wᵢ}⟩`.
    pub fn gram(&self) -> DMatrix<Complex<F>> {
        let n = self.terms.len();
        DMatrix::from_fn(n, n, |i, j| self.terms[j].1.inner(&self.terms[i].1))
    }
}

impl KernelSpan<f64> {
    /// Smallest eigenvalue of the (Hermitian) Gram matrix.
    pub fn gram_min_eigenvalue(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let g = self.gram();
        let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Laplace image of `J(Σ aₙ xⁿ)`, i.e. `Σ aₙ k_{n+½}`.
pub fn polynomial_kernel_span(coeffs: &[Complex64]) -> KernelSpan<f64> {
    KernelSpan {
        terms: coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| (*c, KernelVector::real(n as f64 + 0.5).expect("positive")))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampledInner {
    pub value: Complex64,
    pub error: f64,
    /// Set when the quadrature did not reach its tolerance.
    pub accuracy_warning: bool,
}

/// Integrator used for boundary inner products.
pub fn boundary_integrator() -> Integrator<f64> {
    Integrator::with_tolerance(1e-11, 1e-14)
}

/// `(1/2π) ∫ F(iy)·conj(G(iy)) dy` over the whole axis.
///
/// The line is compactified by `y = x/(1−x²)`, so no truncation at a finite
/// `Y_max` is involved.
pub fn h2_inner_sampled(f: impl Fn(f64) -> Complex64, g: impl Fn(f64) -> Complex64) -> Result<SampledInner> {
    let r = boundary_integrator()
        .integrate_real_line(|y: f64| f(y) * g(y).conj())
        .map_err(|QuadError::NonFinite { at }| Error::PoleOnGrid(at))?;
    let scale = 1.0 / (2.0 * std::f64::consts::PI);
    Ok(SampledInner {
        value: r.value * scale,
        error: r.error * scale,
        accuracy_warning: !r.converged || r.error * scale > 1e-8,
    })
}

/// `∫₀^∞ g(t) e^{−st} dt`.
pub fn laplace_transform(g: impl Fn(f64) -> Complex64, s: Complex64) -> Result<Complex64> {
    boundary_integrator()
        .integrate_half_line(|t: f64| g(t) * (-s * t).exp(), 0.0)
        .map(|r| r.value)
        .map_err(|QuadError::NonFinite { at }| Error::PoleOnGrid(at))
}

/// `‖f‖²` in `L²(0, 1)`.
pub fn unit_interval_norm_sq(f: impl Fn(f64) -> Complex64) -> Result<f64> {
    boundary_integrator()
        .integrate(|x: f64| f(x).norm_sqr(), 0.0, 1.0)
        .map(|r| r.value)
        .map_err(|QuadError::NonFinite { at }| Error::PoleOnGrid(at))
}

/// `‖g‖²` in `L²(0, ∞)`.
pub fn half_line_norm_sq(g: impl Fn(f64) -> Complex64) -> Result<f64> {
    boundary_integrator()
        .integrate_half_line(|t: f64| g(t).norm_sqr(), 0.0)
        .map(|r| r.value)
        .map_err(|QuadError::NonFinite { at }| Error::PoleOnGrid(at))
}

/// Image of `k_{n+½}` under `T₀`: `cₙ·k_{conj(pₙ)+½}`.
pub fn t0_on_kernels(spec: &MonomialSpec, n: usize) -> Result<KernelSpan<f64>> {
    let c = spec.coefficient(n)?;
    t0_image(c, Complex64::new(spec.exponent(n), 0.0))
}

/// `c·k_{conj(p)+½}` for a single monomial `x^p`, `Re p > −½`.
pub fn t0_image(c: Complex64, p: Complex64) -> Result<KernelSpan<f64>> {
    if c == Complex64::new(0.0, 0.0) {
        return Ok(KernelSpan::zero());
    }
    let k = KernelVector::new(p.conj() + 0.5)?;
    Ok(KernelSpan::single(c, k))
}

/// Symmetric grid: `0` and `±` a geometric sequence from `y_min` to `y_max`.
pub fn boundary_grid(y_min: f64, y_max: f64, points: usize) -> Vec<f64> {
    let half = (points.saturating_sub(1) / 2).max(1);
    let ratio = (y_max / y_min).powf(1.0 / (half.max(2) - 1) as f64);
    let pos: Vec<f64> = (0..half).map(|k| y_min * ratio.powi(k as i32)).collect();
    let mut out: Vec<f64> = pos.iter().rev().map(|y| -y).collect();
    out.push(0.0);
    out.extend(pos);
    out
}

/// Values of a function on a boundary grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundarySamples {
    pub ys: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl BoundarySamples {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,re,im\n");
        for (y, v) in self.ys.iter().zip(&self.values) {
            out.push_str(&format!("{y},{},{}\n", v.re, v.im));
        }
        out
    }
}

/// `iy ↦ h(iy)·F(φ(iy))` on `ys`.
pub fn weighted_comp_apply(
    h: &ComplexExpr,
    phi: &AffineMap<f64>,
    f: impl Fn(Complex64) -> Complex64,
    ys: &[f64],
) -> Result<BoundarySamples> {
    let mut values = Vec::with_capacity(ys.len());
    for &y in ys {
        let s = Complex64::new(0.0, y);
        let hv = h.eval(s).map_err(|_| Error::PoleOnGrid(y))?;
        values.push(hv * f(phi.apply_complex(&s)));
    }
    Ok(BoundarySamples {
        ys: ys.to_vec(),
        values,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Quadrature,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdjointCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub route: Route,
    pub accuracy_warning: bool,
}

/// Whether `W k_v` is square integrable on the axis, so that
/// `⟨k_u, W k_v⟩` can be computed by boundary quadrature.
fn sampled_route_applies(sym: &SymbolPair, v: Complex64) -> bool {
    let Some(h) = sym.closed_weight() else { return false };
    let Ok(r) = h.as_rational() else { return false };
    if r.denominator().has_root_on_imaginary_axis() {
        return false;
    }
    let dp = r.numerator().degree().unwrap_or(0);
    let dq = r.denominator().degree().unwrap_or(0);
    sym.slope() > 0.0 && dp <= dq && sym.intercept() + v.re > 0.0
}

/// `|⟨T₀ k_u, k_v⟩ − ⟨k_u, W_{h,φ} k_v⟩|` for `u = n + ½`.
///
/// The left side is the closed form `cₙ/(v + conj(pₙ) + ½)`. The right side
/// is boundary quadrature when `W k_v ∈ L²(iℝ)`, and otherwise the
/// reproducing identity `⟨k_u, G⟩ = conj(G(u))`.
pub fn adjoint_identity_check(spec: &MonomialSpec, sym: &SymbolPair, u: f64, v: Complex64) -> Result<AdjointCheck> {
    let n = u - 0.5;
    if n < 0.0 || n.fract() != 0.0 {
        return Err(Error::InvalidSpec(format!("u = {u} is not a node n + 1/2")));
    }
    let kv = KernelVector::new(v)?;
    let ku = KernelVector::real(u)?;
    let lhs = t0_on_kernels(spec, n as usize)?.inner(&KernelSpan::single(Complex64::new(1.0, 0.0), kv));
    let h = sym
        .closed_weight()
        .ok_or_else(|| Error::InvalidSpec("no closed-form weight h".into()))?;
    let map = sym.map.to_f64();
    let (rhs, route, warn) = if sampled_route_applies(sym, v) {
        let poles = Cell::new(None);
        let wk = |y: f64| {
            let s = Complex64::new(0.0, y);
            match h.eval(s) {
                Ok(hv) => hv * kv.eval(map.apply_complex(&s)),
                Err(_) => {
                    poles.set(Some(y));
                    Complex64::new(0.0, 0.0)
                }
            }
        };
        let r = h2_inner_sampled(|y| ku.eval(Complex64::new(0.0, y)), wk)?;
        if let Some(y) = poles.get() {
            return Err(Error::PoleOnGrid(y));
        }
        (r.value, Route::Quadrature, r.accuracy_warning)
    } else {
        let su = Complex64::new(u, 0.0);
        let g = h.eval(su)? * kv.eval(map.apply_complex(&su));
        (g.conj(), Route::ClosedForm, false)
    };
    Ok(AdjointCheck {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        route,
        accuracy_warning: warn,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// `‖W_{h,φ}F‖²` against `∫ |F|² dμ` (both with the `1/2π` of the `H²`
/// norm), by two quadratures: in `y` on the axis, and in the height
/// `η = a·y` along the supporting line `Re z = β`.
pub fn normid_check(sym: &SymbolPair, f: &KernelSpan<f64>) -> Result<NormIdentity> {
    let a = sym.slope();
    let beta = sym.intercept();
    if !(a > 0.0 && beta >= 0.0) {
        return Err(Error::InvalidSpec(format!(
            "norm identity needs a > 0 and beta >= 0, got a = {a}, beta = {beta}"
        )));
    }
    if f.terms.is_empty() {
        return Ok(NormIdentity {
            lhs: 0.0,
            rhs: 0.0,
            residual: 0.0,
        });
    }
    let h = sym
        .closed_weight()
        .ok_or_else(|| Error::InvalidSpec("no closed-form weight h".into()))?;
    let map = sym.map.to_f64();
    let scale = 1.0 / (2.0 * std::f64::consts::PI);
    let pole = Cell::new(None);
    let h2 = |y: f64| match h.eval(Complex64::new(0.0, y)) {
        Ok(v) => v.norm_sqr(),
        Err(_) => {
            pole.set(Some(y));
            0.0
        }
    };
    let q = boundary_integrator();
    let err = |QuadError::NonFinite { at }| Error::PoleOnGrid(at);
    let lhs = q
        .integrate_real_line(|y: f64| {
            let s = Complex64::new(0.0, y);
            f.eval(map.apply_complex(&s)).norm_sqr() * h2(y)
        })
        .map_err(err)?
        .value
        * scale;
    let rhs = q
        .integrate_real_line(|eta: f64| f.eval(Complex64::new(beta, eta)).norm_sqr() * h2(eta / a) / a)
        .map_err(err)?
        .value
        * scale;
    if let Some(y) = pole.get() {
        return Err(Error::PoleOnGrid(y));
    }
    let residual = if lhs == 0.0 && rhs == 0.0 {
        0.0
    } else {
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
    };
    Ok(NormIdentity { lhs, rhs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{affine_symbols, SpecDocument};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn spec(coeff: &str, a: f64, b: f64, h: &str) -> MonomialSpec {
        MonomialSpec::from_document(&SpecDocument {
            name: None,
            coeff_expr: coeff.into(),
            coeff_head: vec![],
            a,
            b,
            h_expr: Some(h.into()),
        })
        .unwrap()
    }

    #[test]
    fn j_examples() {
        let one = |_: f64| 1.0;
        assert!((j_forward(one, 2.0) - (-1.0f64).exp()).abs() < 1e-15);
        let cube = |x: f64| x * x * x;
        assert!((j_forward(cube, 0.7) - (-3.5f64 * 0.7).exp()).abs() < 1e-15);
        for x in [0.01, 0.3, 0.5, 0.99] {
            let back = j_inverse(|t| j_forward(|x: f64| x.sin() + 2.0, t), x);
            assert!((back - (x.sin() + 2.0)).abs() < 1e-14);
        }
        let norm = half_line_norm_sq(|t| c(j_forward(one, t))).unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
        // f32 works too.
        assert!((j_forward(|x: f32| x, 1.0f32) - (-1.5f32).exp()).abs() < 1e-6);
    }

    #[test]
    fn kernel_inner_products() {
        let k = |w: f64| KernelVector::real(w).unwrap();
        assert_eq!(k(0.5).inner(&k(0.5)), c(1.0));
        assert!((k(1.0).inner(&k(2.0)) - c(1.0 / 3.0)).norm() < 1e-16);
        assert!(KernelVector::real(0.0).is_err());
    }

    #[test]
    fn laplace_of_j_one_is_k_half() {
        for s in [c(1.0), Complex64::new(0.3, 2.0), Complex64::new(2.5, -1.0)] {
            let l = laplace_transform(|t| c((-t / 2.0).exp()), s).unwrap();
            let k = KernelVector::real(0.5).unwrap().eval(s);
            assert!((l - k).norm() < 1e-10);
        }
        let k = KernelSpan::single(c(1.0), KernelVector::real(0.5).unwrap());
        let q = h2_inner_sampled(|y| k.eval(Complex64::new(0.0, y)), |y| k.eval(Complex64::new(0.0, y))).unwrap();
        assert!((q.value - c(1.0)).norm() < 1e-9);
    }

    #[test]
    fn t0_examples() {
        let v = spec("1/(n+1)", 1.0, 1.0, "1/(s+1/2)");
        let img = t0_on_kernels(&v, 0).unwrap();
        assert_eq!(img.terms, vec![(c(1.0), KernelVector::real(1.5).unwrap())]);
        let hardy = spec("1/(n+1)", 1.0, 0.0, "1/(s+1/2)");
        let img = t0_on_kernels(&hardy, 1).unwrap();
        assert_eq!(img.terms, vec![(c(0.5), KernelVector::real(1.5).unwrap())]);
        assert!(t0_image(c(0.0), c(2.0)).unwrap().terms.is_empty());
        // Complex exponent: the image parameter is conj(p) + 1/2.
        let img = t0_image(c(1.0), Complex64::new(1.0, 2.0)).unwrap();
        assert_eq!(img.terms[0].1.w, Complex64::new(1.5, -2.0));
    }

    #[test]
    fn weighted_composition_examples() {
        let id = AffineMap {
            slope: 1.0,
            intercept: 1.0,
        };
        let k = KernelVector::real(0.5).unwrap();
        let ys = boundary_grid(1e-4, 1e4, 65);
        let one = ComplexExpr::parse("1", "s").unwrap();
        let r = weighted_comp_apply(&one, &id, |s| k.eval(s), &ys).unwrap();
        for (y, v) in ys.iter().zip(&r.values) {
            assert!((v - 1.0 / Complex64::new(1.5, *y)).norm() < 1e-15);
        }
        let zero = ComplexExpr::parse("0", "s").unwrap();
        let r = weighted_comp_apply(&zero, &id, |s| k.eval(s), &ys).unwrap();
        assert!(r.values.iter().all(|v| v.norm() == 0.0));
        let h = ComplexExpr::parse("1/(s+1/2)", "s").unwrap();
        let r = weighted_comp_apply(&h, &id, |s| k.eval(s), &ys).unwrap();
        for (y, v) in ys.iter().zip(&r.values) {
            let s = Complex64::new(0.0, *y);
            assert!((v - 1.0 / (s + 0.5) / (s + 1.5)).norm() < 1e-15);
        }
        let pole = ComplexExpr::parse("1/(2*s)", "s").unwrap();
        assert!(matches!(
            weighted_comp_apply(&pole, &id, |s| k.eval(s), &ys),
            Err(Error::PoleOnGrid(y)) if y == 0.0
        ));
        assert!(r.to_csv().starts_with("y,re,im\n"));
    }

    #[test]
    fn boundary_grid_shape() {
        let g = boundary_grid(1e-4, 1e4, 4097);
        assert_eq!(g.len(), 4097);
        assert_eq!(g[2048], 0.0);
        assert!((g[4096] - 1e4).abs() < 1e-8);
        assert!((g[2049] - 1e-4).abs() < 1e-18);
    }

    #[test]
    fn adjoint_examples() {
        let v = spec("1/(n+1)", 1.0, 1.0, "1/(s+1/2)");
        let r = adjoint_identity_check(&v, &affine_symbols(&v), 0.5, c(0.5)).unwrap();
        assert_eq!(r.route, Route::Quadrature);
        assert!((r.lhs - c(0.5)).norm() < 1e-15);
        assert!(r.residual < 1e-6);
        let t3 = spec("1/(2*n+2)", 2.0, 2.0, "1/(2*s+1)");
        let r = adjoint_identity_check(&t3, &affine_symbols(&t3), 0.5, c(1.0)).unwrap();
        assert!((r.lhs - c(1.0 / 7.0)).norm() < 1e-15);
        assert!(r.residual < 1e-6);
        let zero = spec("0", 1.0, 1.0, "0");
        let r = adjoint_identity_check(&zero, &affine_symbols(&zero), 1.5, c(2.5)).unwrap();
        assert_eq!(r.residual, 0.0);
        assert!(adjoint_identity_check(&v, &affine_symbols(&v), 0.7, c(1.0)).is_err());
    }

    #[test]
    fn norm_identity_examples() {
        let shift = spec("1", 1.0, 1.0, "1");
        let k = KernelSpan::single(c(1.0), KernelVector::real(0.5).unwrap());
        let r = normid_check(&affine_symbols(&shift), &k).unwrap();
        assert!((r.lhs - 1.0 / 3.0).abs() < 1e-10);
        assert!(r.residual < 1e-8);
        let v = spec("1/(n+1)", 1.0, 1.0, "1/(s+1/2)");
        let r = normid_check(&affine_symbols(&v), &k).unwrap();
        assert!(r.residual < 1e-8);
        assert_eq!(
            normid_check(&affine_symbols(&v), &KernelSpan::zero()).unwrap(),
            NormIdentity {
                lhs: 0.0,
                rhs: 0.0,
                residual: 0.0
            }
        );
        let t3 = spec("1/(2*n+2)", 2.0, 2.0, "1/(2*s+1)");
        let r = normid_check(
            &affine_symbols(&t3),
            &polynomial_kernel_span(&[c(1.0), c(-2.0), c(0.5)]),
        )
        .unwrap();
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn gram_is_positive_semidefinite() {
        let span = polynomial_kernel_span(&[c(1.0); 8]);
        // Hilbert-type Gram matrix 1/(i+j+1): positive definite, badly conditioned.
        assert!(span.gram_min_eigenvalue() > -1e-12);
        let g = span.gram();
        assert!((g[(2, 3)] - c(1.0 / 6.0)).norm() < 1e-16);
    }
}
