use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{EvalError, Node};
use crate::scalar::WideFloat;
use crate::Complex64;

/// Pole threshold for double-precision division.
pub const POLE_MODULUS: f64 = 1e-300;

/// Complex arithmetic an expression can be evaluated in.
pub trait ExprScalar: Clone {
    fn literal(q: &BigRational) -> Self;
    fn imag_unit() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn div(&self, o: &Self) -> Result<Self, EvalError>;
    fn exp(&self) -> Result<Self, EvalError>;
    /// Rejects non-finite intermediate results.
    fn check(self) -> Result<Self, EvalError> {
        Ok(self)
    }
}

impl ExprScalar for Complex64 {
    fn literal(q: &BigRational) -> Self {
        Complex64::new(crate::scalar::rational_to_f64(q), 0.0)
    }
    fn imag_unit() -> Self {
        Complex64::i()
    }
    fn one() -> Self {
        <Complex64 as One>::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn div(&self, o: &Self) -> Result<Self, EvalError> {
        if o.norm() < POLE_MODULUS {
            return Err(EvalError::Pole { point: None });
        }
        Ok(self / o)
    }
    fn exp(&self) -> Result<Self, EvalError> {
        Ok(Complex::exp(*self))
    }
    fn check(self) -> Result<Self, EvalError> {
        if self.re.is_finite() && self.im.is_finite() {
            Ok(self)
        } else {
            Err(EvalError::Overflow { point: None })
        }
    }
}

impl ExprScalar for Complex<BigRational> {
    fn literal(q: &BigRational) -> Self {
        Complex::new(q.clone(), <BigRational as Zero>::zero())
    }
    fn imag_unit() -> Self {
        Complex::new(<BigRational as Zero>::zero(), <BigRational as One>::one())
    }
    fn one() -> Self {
        <Complex<BigRational> as One>::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn div(&self, o: &Self) -> Result<Self, EvalError> {
        if o.is_zero() {
            return Err(EvalError::Pole { point: None });
        }
        Ok(self / o)
    }
    fn exp(&self) -> Result<Self, EvalError> {
        Err(EvalError::Unsupported("exp"))
    }
}

/// Complex number over [`WideFloat`]. Only real arguments are accepted by
/// `exp`.
#[derive(Clone, Debug)]
pub struct WideComplex<const BITS: usize> {
    pub re: WideFloat<BITS>,
    pub im: WideFloat<BITS>,
}

impl<const BITS: usize> WideComplex<BITS> {
    pub fn real_f64(x: f64) -> Self {
        WideComplex {
            re: WideFloat::from_f64(x),
            im: WideFloat::zero(),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        WideComplex {
            re: WideFloat::from_i64(n),
            im: WideFloat::zero(),
        }
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }
}

impl<const BITS: usize> ExprScalar for WideComplex<BITS> {
    fn literal(q: &BigRational) -> Self {
        WideComplex {
            re: WideFloat::from_rational(q),
            im: WideFloat::zero(),
        }
    }
    fn imag_unit() -> Self {
        WideComplex {
            re: WideFloat::zero(),
            im: WideFloat::from_i64(1),
        }
    }
    fn one() -> Self {
        WideComplex::from_i64(1)
    }
    fn add(&self, o: &Self) -> Self {
        WideComplex {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        WideComplex {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        WideComplex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
    fn neg(&self) -> Self {
        WideComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn conj(&self) -> Self {
        WideComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn div(&self, o: &Self) -> Result<Self, EvalError> {
        let den = &(&o.re * &o.re) + &(&o.im * &o.im);
        if den.is_zero() {
            return Err(EvalError::Pole { point: None });
        }
        let num = self.mul(&o.conj());
        Ok(WideComplex {
            re: &num.re / &den,
            im: &num.im / &den,
        })
    }
    fn exp(&self) -> Result<Self, EvalError> {
        if !self.im.is_zero() {
            return Err(EvalError::Unsupported("exp of a non-real argument"));
        }
        Ok(WideComplex {
            re: self.re.exp(),
            im: WideFloat::zero(),
        })
    }
}

fn powi<S: ExprScalar>(base: &S, k: i32) -> Result<S, EvalError> {
    let mut acc = S::one();
    let mut sq = base.clone();
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq).check()?;
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq).check()?;
        }
    }
    if k < 0 {
        S::one().div(&acc)?.check()
    } else {
        Ok(acc)
    }
}

pub(super) fn eval<S: ExprScalar>(node: &Node, z: &S) -> Result<S, EvalError> {
    let v = match node {
        Node::Number(l) => S::literal(&l.value),
        Node::Imag => S::imag_unit(),
        Node::Var => z.clone(),
        Node::Neg(a) => eval(a, z)?.neg(),
        Node::Add(a, b) => eval(a, z)?.add(&eval(b, z)?),
        Node::Sub(a, b) => eval(a, z)?.sub(&eval(b, z)?),
        Node::Mul(a, b) => eval(a, z)?.mul(&eval(b, z)?),
        Node::Div(a, b) => eval(a, z)?.div(&eval(b, z)?)?,
        Node::Pow(a, k) => powi(&eval(a, z)?, *k)?,
        Node::Exp(a) => eval(a, z)?.exp()?,
        Node::Conj(a) => eval(a, z)?.conj(),
    };
    v.check()
}
