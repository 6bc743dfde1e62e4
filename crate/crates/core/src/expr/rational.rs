//! Normalization of exp/conj-free expressions to `P/Q` with exact
//! Gaussian-rational coefficients.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use super::Node;
use crate::poly::{ExactComplex, Poly};
use crate::Complex64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotRational {
    #[error("expression contains exp()")]
    ContainsExp,
    #[error("expression contains conj()")]
    ContainsConj,
    #[error("expression divides by the zero polynomial")]
    ZeroDenominator,
}

/// `h = P/Q` in lowest terms; `Q`'s lowest-order nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSymbol {
    numerator: Poly<ExactComplex>,
    denominator: Poly<ExactComplex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RationalCoeffs {
    pub numerator: Vec<[f64; 2]>,
    pub denominator: Vec<[f64; 2]>,
}

impl RationalSymbol {
    pub fn new(p: Poly<ExactComplex>, q: Poly<ExactComplex>) -> Result<Self, NotRational> {
        if q.is_zero() {
            return Err(NotRational::ZeroDenominator);
        }
        if p.is_zero() {
            return Ok(RationalSymbol {
                numerator: Poly::zero(),
                denominator: Poly::constant(Complex::one()),
            });
        }
        let g = p.gcd(&q);
        let (p, _) = p.div_rem(&g);
        let (q, _) = q.div_rem(&g);
        let inv = ExactComplex::one() / q.trailing().expect("nonzero").clone();
        Ok(RationalSymbol {
            numerator: p.scale(&inv),
            denominator: q.scale(&inv),
        })
    }

    pub fn numerator(&self) -> &Poly<ExactComplex> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Poly<ExactComplex> {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn numerator_f64(&self) -> Poly<Complex64> {
        self.numerator.to_f64()
    }

    pub fn denominator_f64(&self) -> Poly<Complex64> {
        self.denominator.to_f64()
    }

    /// Multiplies numerator and denominator by the same nonzero constant
    /// and renormalizes.
    pub fn rescaled(&self, k: &ExactComplex) -> Self {
        Self::new(self.numerator.scale(k), self.denominator.scale(k)).expect("nonzero denominator")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.numerator_f64().eval(&z) / self.denominator_f64().eval(&z)
    }

    pub fn coeffs_f64(&self) -> RationalCoeffs {
        let dump = |p: &Poly<Complex64>| p.coeffs().iter().map(|c| [c.re, c.im]).collect();
        RationalCoeffs {
            numerator: dump(&self.numerator_f64()),
            denominator: dump(&self.denominator_f64()),
        }
    }
}

type Frac = (Poly<ExactComplex>, Poly<ExactComplex>);

fn build(node: &Node) -> Result<Frac, NotRational> {
    let one = || Poly::constant(ExactComplex::one());
    Ok(match node {
        Node::Number(l) => (
            Poly::constant(Complex::new(l.value.clone(), BigRational::zero())),
            one(),
        ),
        Node::Imag => (
            Poly::constant(Complex::new(BigRational::zero(), BigRational::one())),
            one(),
        ),
        Node::Var => (Poly::x(), one()),
        Node::Neg(a) => {
            let (p, q) = build(a)?;
            (p.scale(&-ExactComplex::one()), q)
        }
        Node::Add(a, b) | Node::Sub(a, b) => {
            let (p1, q1) = build(a)?;
            let (p2, q2) = build(b)?;
            let l = p1.mul(&q2);
            let r = p2.mul(&q1);
            let num = if matches!(node, Node::Add(..)) {
                l.add(&r)
            } else {
                l.sub(&r)
            };
            reduce(num, q1.mul(&q2))
        }
        Node::Mul(a, b) => {
            let (p1, q1) = build(a)?;
            let (p2, q2) = build(b)?;
            reduce(p1.mul(&p2), q1.mul(&q2))
        }
        Node::Div(a, b) => {
            let (p1, q1) = build(a)?;
            let (p2, q2) = build(b)?;
            if p2.is_zero() {
                return Err(NotRational::ZeroDenominator);
            }
            reduce(p1.mul(&q2), q1.mul(&p2))
        }
        Node::Pow(a, k) => {
            let (p, q) = build(a)?;
            let e = k.unsigned_abs();
            if *k < 0 {
                if p.is_zero() {
                    return Err(NotRational::ZeroDenominator);
                }
                (q.pow(e), p.pow(e))
            } else {
                (p.pow(e), q.pow(e))
            }
        }
        Node::Exp(_) => return Err(NotRational::ContainsExp),
        Node::Conj(_) => return Err(NotRational::ContainsConj),
    })
}

fn reduce(p: Poly<ExactComplex>, q: Poly<ExactComplex>) -> Frac {
    if p.is_zero() {
        return (p, Poly::constant(ExactComplex::one()));
    }
    let g = p.gcd(&q);
    if g.degree() == Some(0) {
        return (p, q);
    }
    (p.div_rem(&g).0, q.div_rem(&g).0)
}

pub(super) fn as_rational(node: &Node) -> Result<RationalSymbol, NotRational> {
    if node.contains(&|n| matches!(n, Node::Exp(_))) {
        return Err(NotRational::ContainsExp);
    }
    if node.contains(&|n| matches!(n, Node::Conj(_))) {
        return Err(NotRational::ContainsConj);
    }
    let (p, q) = build(node)?;
    RationalSymbol::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ComplexExpr;
    use proptest::prelude::*;

    fn re(n: i64) -> ExactComplex {
        Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    #[test]
    fn examples() {
        let r = ComplexExpr::parse("1/(2*s+1)", "s").unwrap().as_rational().unwrap();
        assert_eq!(r.numerator().coeffs(), &[re(1)]);
        assert_eq!(r.denominator().coeffs(), &[re(1), re(2)]);

        assert_eq!(
            ComplexExpr::parse("s*exp(-s)", "s").unwrap().as_rational(),
            Err(NotRational::ContainsExp)
        );

        let r = ComplexExpr::parse("(s+1)/(s+1)", "s").unwrap().as_rational().unwrap();
        assert_eq!(r.numerator().coeffs(), &[re(1)]);
        assert_eq!(r.denominator().coeffs(), &[re(1)]);
    }

    #[test]
    fn zero_polynomial_denominator() {
        assert_eq!(
            ComplexExpr::parse("1/(s-s)", "s").unwrap().as_rational(),
            Err(NotRational::ZeroDenominator)
        );
    }

    #[test]
    fn normalization_ignores_common_scale() {
        let a = ComplexExpr::parse("3/(6*s+3)", "s").unwrap().as_rational().unwrap();
        let b = ComplexExpr::parse("1/(2*s+1)", "s").unwrap().as_rational().unwrap();
        assert_eq!(a, b);
        let k = Complex::new(
            BigRational::new(2.into(), 7.into()),
            BigRational::from_integer((-5).into()),
        );
        assert_eq!(b.rescaled(&k), b);
    }

    const SAMPLES: &[&str] = &[
        "1/(s+1/2)",
        "(s^2 + i*s - 3)/(s^3 + 2)",
        "s*(s-1)/(s+2)^2 - 1/(s+i)",
        "(1 + 2*i)*s^-2 + s",
        "((s+1)^3)/((s+1)*(s-4))",
        "-(2.5*s - 0.125)^2 / (s^2 + 1)",
    ];

    proptest! {
        #[test]
        fn rational_form_matches_direct_evaluation(idx in 0..SAMPLES.len(), x in -4.0f64..4.0, y in -4.0f64..4.0) {
            let e = ComplexExpr::parse(SAMPLES[idx], "s").unwrap();
            let r = e.as_rational().unwrap();
            let z = Complex64::new(x, y);
            if let Ok(direct) = e.eval(z) {
                let den = r.denominator_f64().eval(&z);
                prop_assume!(den.norm() > 1e-3);
                let via = r.eval(z);
                prop_assert!((via - direct).norm() <= 1e-12 * (1.0 + direct.norm()), "{via} vs {direct}");
            }
        }
    }
}
