//! Dense univariate polynomials over a field, low-order coefficient first.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use crate::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Num> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Lowest-order nonzero coefficient.
    pub fn trailing(&self) -> Option<&T> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(T::zero);
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(T::zero() - T::one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in self.coeffs.iter() {
            out.push(c.clone() * k.clone());
            k = k + T::one();
        }
        if !out.is_empty() {
            out.remove(0);
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dlead = divisor.leading().expect("division by zero polynomial").clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() / dlead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = T::one() / l.clone();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor. Only meaningful for exact fields.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<T: Clone + Num + std::ops::Neg<Output = T>> Poly<Complex<T>> {
    /// Polynomial with every coefficient conjugated.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// `q(y) = p(k*y)` for a constant `k`.
    pub fn compose_scale(&self, k: &Complex<T>) -> Self {
        let mut pk = Complex::<T>::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * pk.clone());
            pk = pk * k.clone();
        }
        Self::new(out)
    }
}

pub type ExactComplex = Complex<BigRational>;

pub fn exact_to_f64(c: &ExactComplex) -> Complex64 {
    Complex64::new(
        crate::scalar::rational_to_f64(&c.re),
        crate::scalar::rational_to_f64(&c.im),
    )
}

impl Poly<ExactComplex> {
    pub fn to_f64(&self) -> Poly<Complex64> {
        Poly::new(self.coeffs.iter().map(exact_to_f64).collect())
    }

    /// Real and imaginary parts of `p(i*y)` as real polynomials in `y`.
    pub fn on_imaginary_axis(&self) -> (Poly<BigRational>, Poly<BigRational>) {
        let i = Complex::new(BigRational::zero(), BigRational::one());
        let q = self.compose_scale(&i);
        (
            Poly::new(q.coeffs.iter().map(|c| c.re.clone()).collect()),
            Poly::new(q.coeffs.iter().map(|c| c.im.clone()).collect()),
        )
    }

    /// Whether the polynomial vanishes somewhere on the imaginary axis,
    /// decided exactly: the real and imaginary parts of `p(iy)` must share a
    /// real root.
    pub fn has_root_on_imaginary_axis(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let (re, im) = self.on_imaginary_axis();
        let g = re.gcd(&im);
        count_real_roots(&g) > 0
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Number of distinct real roots of a rational polynomial (Sturm's theorem).
pub fn count_real_roots(p: &Poly<BigRational>) -> usize {
    match p.degree() {
        None => return usize::MAX,
        Some(0) => return 0,
        _ => {}
    }
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-BigRational::one()));
    }
    let changes = |signs: Vec<i32>| {
        let nz: Vec<i32> = signs.into_iter().filter(|s| *s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let at_pos_inf: Vec<i32> = seq.iter().map(|q| sign_of(q.leading().unwrap())).collect();
    let at_neg_inf: Vec<i32> = seq
        .iter()
        .map(|q| {
            let s = sign_of(q.leading().unwrap());
            if q.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg_inf).saturating_sub(changes(at_pos_inf))
}

/// Integer binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Roots of a complex polynomial with floating-point coefficients.
///
/// Degrees one and two use closed forms; higher degrees take the eigenvalues
/// of the companion matrix.
pub fn roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    let c = p.coeffs();
    match p.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![-c[0] / c[1]],
        Some(2) => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = (b * b - a * cc * 4.0).sqrt();
            // Pick the sign that avoids cancellation.
            let q = if (b.conj() * disc).re >= 0.0 {
                -(b + disc) * 0.5
            } else {
                -(b - disc) * 0.5
            };
            if q == Complex64::zero() {
                vec![Complex64::zero(), Complex64::zero()]
            } else {
                vec![q / a, cc / q]
            }
        }
        Some(n) => {
            let lead = c[n];
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for i in 1..n {
                m[(i, i - 1)] = Complex64::one();
            }
            for i in 0..n {
                m[(i, n - 1)] = -c[i] / lead;
            }
            let (_, t) = m.schur().unpack();
            t.diagonal().iter().copied().collect()
        }
    }
}

/// Groups numerically coincident roots, returning `(root, multiplicity)`.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for r in roots {
        if let Some(slot) = out.iter_mut().find(|(c, _)| (*c - r).norm() <= tol * (1.0 + c.norm())) {
            let m = slot.1 as f64;
            slot.0 = (slot.0 * m + r) / (m + 1.0);
            slot.1 += 1;
        } else {
            out.push((*r, 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cq(re: i64, im: i64) -> ExactComplex {
        Complex::new(q(re, 1), q(im, 1))
    }

    #[test]
    fn exact_gcd_cancels_common_factor() {
        // (s+1)(s+2) and (s+1)(s-3)
        let a = Poly::new(vec![cq(2, 0), cq(3, 0), cq(1, 0)]);
        let b = Poly::new(vec![cq(-3, 0), cq(-2, 0), cq(1, 0)]);
        assert_eq!(a.gcd(&b), Poly::new(vec![cq(1, 0), cq(1, 0)]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Poly::new(vec![cq(1, 1), cq(0, 2), cq(3, 0), cq(5, -1)]);
        let b = Poly::new(vec![cq(2, 0), cq(1, 1)]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn sturm_counts() {
        // (y^2 - 2)(y + 1) has three real roots, y^2 + 1 none.
        let p = Poly::new(vec![q(-2, 1), q(-2, 1), q(1, 1), q(1, 1)]);
        assert_eq!(count_real_roots(&p), 3);
        assert_eq!(count_real_roots(&Poly::new(vec![q(1, 1), q(0, 1), q(1, 1)])), 0);
        assert_eq!(count_real_roots(&Poly::new(vec![q(0, 1), q(0, 1), q(1, 1)])), 1);
    }

    #[test]
    fn imaginary_axis_roots() {
        // 2s vanishes at 0; 2s+1 does not vanish on the axis; s^2+1 vanishes at +-i.
        assert!(Poly::new(vec![cq(0, 0), cq(2, 0)]).has_root_on_imaginary_axis());
        assert!(!Poly::new(vec![cq(1, 0), cq(2, 0)]).has_root_on_imaginary_axis());
        assert!(Poly::new(vec![cq(1, 0), cq(0, 0), cq(1, 0)]).has_root_on_imaginary_axis());
        assert!(!Poly::new(vec![cq(1, 0), cq(1, 0), cq(1, 0)]).has_root_on_imaginary_axis());
    }

    #[test]
    fn numeric_roots() {
        let p = Poly::new(vec![
            Complex64::new(-6.0, 0.0),
            Complex64::new(11.0, 0.0),
            Complex64::new(-6.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let mut r: Vec<f64> = roots(&p).iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-10);
        }
        let quad = Poly::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let c = cluster_roots(&roots(&quad), 1e-8);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].1, 2);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }
}
