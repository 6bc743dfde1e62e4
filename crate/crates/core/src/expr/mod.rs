//! A small complex-valued expression language for symbols `h(s)` and
//! coefficient rules `c(n)`.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom { "^" [ "-" ] integer } ;
//! atom    = number | "i" | variable | func "(" expr ")" | "(" expr ")" ;
//! func    = "exp" | "conj" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! Multiplication is always explicit (`2*s`, not `2s`).

mod eval;
mod parser;
mod rational;

use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

pub use eval::{ExprScalar, WideComplex, POLE_MODULUS};
pub use rational::{NotRational, RationalSymbol};

use crate::Complex64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty expression")]
    Empty,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("variable `{found}` at position {pos} does not match the declared variable `{expected}`")]
    WrongVariable {
        found: String,
        expected: String,
        pos: usize,
    },
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("pole at {}", fmt_point(.point))]
    Pole { point: Option<Complex64> },
    #[error("overflow at {}", fmt_point(.point))]
    Overflow { point: Option<Complex64> },
    #[error("`{0}` is not available in this arithmetic")]
    Unsupported(&'static str),
}

fn fmt_point(p: &Option<Complex64>) -> String {
    match p {
        Some(z) => format!("{} {:+}i", z.re, z.im),
        None => "unknown point".into(),
    }
}

impl EvalError {
    fn at(self, z: Complex64) -> Self {
        match self {
            EvalError::Pole { point: None } => EvalError::Pole { point: Some(z) },
            EvalError::Overflow { point: None } => EvalError::Overflow { point: Some(z) },
            e => e,
        }
    }
}

/// A nonnegative numeric literal, kept with its source text so printing
/// round-trips exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct Literal {
    pub text: String,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Number(Literal),
    Imag,
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Exp(Box<Node>),
    Conj(Box<Node>),
}

impl Node {
    pub fn contains(&self, pred: &dyn Fn(&Node) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Node::Number(_) | Node::Imag | Node::Var => false,
            Node::Neg(a) | Node::Pow(a, _) | Node::Exp(a) | Node::Conj(a) => a.contains(pred),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.contains(pred) || b.contains(pred)
            }
        }
    }
}

/// Parsed expression in a single free variable.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexExpr {
    var: String,
    root: Node,
    source: String,
}

impl ComplexExpr {
    pub fn parse(text: &str, var: &str) -> Result<Self, ParseError> {
        let root = parser::parse(text, var)?;
        Ok(ComplexExpr {
            var: var.to_string(),
            root,
            source: text.to_string(),
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// The text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    /// Double-precision evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        eval::eval(&self.root, &z).map_err(|e| e.at(z))
    }

    /// Evaluation in an arbitrary scalar arithmetic.
    pub fn eval_in<S: ExprScalar>(&self, z: &S) -> Result<S, EvalError> {
        eval::eval(&self.root, z)
    }

    pub fn as_rational(&self) -> Result<RationalSymbol, NotRational> {
        rational::as_rational(&self.root)
    }

    pub fn uses_exp(&self) -> bool {
        self.root.contains(&|n| matches!(n, Node::Exp(_)))
    }
}

impl fmt::Display for ComplexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, &self.var)
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, n: &Node, var: &str) -> fmt::Result {
    let bin = |f: &mut fmt::Formatter<'_>, a: &Node, op: &str, b: &Node| -> fmt::Result {
        write!(f, "(")?;
        write_node(f, a, var)?;
        write!(f, " {op} ")?;
        write_node(f, b, var)?;
        write!(f, ")")
    };
    match n {
        Node::Number(l) => write!(f, "{}", l.text),
        Node::Imag => write!(f, "i"),
        Node::Var => write!(f, "{var}"),
        Node::Neg(a) => {
            write!(f, "(-")?;
            write_node(f, a, var)?;
            write!(f, ")")
        }
        Node::Add(a, b) => bin(f, a, "+", b),
        Node::Sub(a, b) => bin(f, a, "-", b),
        Node::Mul(a, b) => bin(f, a, "*", b),
        Node::Div(a, b) => bin(f, a, "/", b),
        Node::Pow(a, k) => {
            write!(f, "(")?;
            write_node(f, a, var)?;
            write!(f, "^{k})")
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            write_node(f, a, var)?;
            write!(f, ")")
        }
        Node::Conj(a) => {
            write!(f, "conj(")?;
            write_node(f, a, var)?;
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parse_and_eval_examples() {
        let h = ComplexExpr::parse("1/(s+1/2)", "s").unwrap();
        assert_eq!(h.eval(c(0.5, 0.0)).unwrap(), c(1.0, 0.0));

        let g = ComplexExpr::parse("s*exp(-s)", "s").unwrap();
        assert_eq!(g.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));

        let cn = ComplexExpr::parse("1/(n+1)", "n").unwrap();
        assert_eq!(cn.eval(c(3.0, 0.0)).unwrap(), c(0.25, 0.0));
    }

    #[test]
    fn eval_examples() {
        let h = ComplexExpr::parse("1/(2*s)", "s").unwrap();
        let v = h.eval(c(0.0, 1.0)).unwrap();
        assert!((v - c(0.0, -0.5)).norm() < 1e-16);

        let g = ComplexExpr::parse("s*exp(-s)", "s").unwrap();
        for y in [-7.5, -1.0, 0.3, 12.0] {
            assert!((g.eval(c(0.0, y)).unwrap().norm() - y.abs()).abs() < 1e-13 * (1.0 + y.abs()));
        }

        let k = ComplexExpr::parse("conj(s)", "s").unwrap();
        assert_eq!(k.eval(c(1.0, 1.0)).unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = ComplexExpr::parse("2 - 3 - 4", "s").unwrap();
        assert_eq!(e.eval(c(0.0, 0.0)).unwrap(), c(-5.0, 0.0));
        let e = ComplexExpr::parse("-s^2", "s").unwrap();
        assert_eq!(e.eval(c(3.0, 0.0)).unwrap(), c(-9.0, 0.0));
        let e = ComplexExpr::parse("8/2/2", "s").unwrap();
        assert_eq!(e.eval(c(0.0, 0.0)).unwrap(), c(2.0, 0.0));
        let e = ComplexExpr::parse("2*s^-1 + i", "s").unwrap();
        assert_eq!(e.eval(c(4.0, 0.0)).unwrap(), c(0.5, 1.0));
        let e = ComplexExpr::parse("1.5e1 * (s + 0.25)", "s").unwrap();
        assert_eq!(e.eval(c(0.75, 0.0)).unwrap(), c(15.0, 0.0));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(ComplexExpr::parse("  ", "s"), Err(ParseError::Empty));
        assert!(matches!(
            ComplexExpr::parse("1/(s+", "s"),
            Err(ParseError::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            ComplexExpr::parse("2s", "s"),
            Err(ParseError::Syntax { pos: 1, .. })
        ));
        assert!(matches!(
            ComplexExpr::parse("sin(s)", "s"),
            Err(ParseError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            ComplexExpr::parse("1/(n+1)", "s"),
            Err(ParseError::WrongVariable { .. })
        ));
        assert!(matches!(
            ComplexExpr::parse("s^1.5", "s"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(ComplexExpr::parse("s/0", "s"), Err(ParseError::Syntax { .. })));
        assert!(ComplexExpr::parse("s", "i").is_err());
    }

    #[test]
    fn pole_and_overflow_are_distinct() {
        let h = ComplexExpr::parse("1/(2*s)", "s").unwrap();
        assert!(matches!(h.eval(c(0.0, 0.0)), Err(EvalError::Pole { point: Some(_) })));
        let g = ComplexExpr::parse("exp(s)", "s").unwrap();
        assert!(matches!(g.eval(c(1000.0, 0.0)), Err(EvalError::Overflow { .. })));
    }

    #[test]
    fn exact_and_wide_evaluation() {
        let e = ComplexExpr::parse("1/(2*n+1) + i/3", "n").unwrap();
        let n = Complex::new(BigRational::from_integer(4.into()), BigRational::from_integer(0.into()));
        let v = e.eval_in(&n).unwrap();
        assert_eq!(v.re, BigRational::new(1.into(), 9.into()));
        assert_eq!(v.im, BigRational::new(1.into(), 3.into()));

        let g = ComplexExpr::parse("exp(-n)", "n").unwrap();
        assert!(matches!(g.eval_in(&n), Err(EvalError::Unsupported(_))));
        let w = g.eval_in(&WideComplex::<256>::real_f64(2.0)).unwrap();
        let e2 = 0.135_335_283_236_612_7;
        assert!((w.re_f64() - e2).abs() < 3e-17);
    }

    fn arb_node() -> impl Strategy<Value = Node> {
        let leaf = prop_oneof![
            (0u32..50).prop_map(|k| Node::Number(Literal {
                text: k.to_string(),
                value: BigRational::from_integer(k.into()),
            })),
            Just(Node::Imag),
            Just(Node::Var),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Node::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Node::Div(Box::new(a), Box::new(b))),
                (inner.clone(), -3i32..4).prop_map(|(a, k)| Node::Pow(Box::new(a), k)),
                inner.clone().prop_map(|a| Node::Exp(Box::new(a))),
                inner.prop_map(|a| Node::Conj(Box::new(a))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(root in arb_node()) {
            let e = ComplexExpr { var: "s".into(), root, source: String::new() };
            let printed = e.to_string();
            let back = ComplexExpr::parse(&printed, "s");
            // Literal-zero denominators are rejected by the parser.
            if let Ok(back) = back {
                prop_assert_eq!(back.root(), e.root());
            } else {
                prop_assert!(e.root().contains(&|n| matches!(n, Node::Div(_, d) if matches!(**d, Node::Number(ref l) if l.text == "0"))));
            }
        }

        #[test]
        fn evaluation_is_deterministic(root in arb_node(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let e = ComplexExpr { var: "s".into(), root, source: String::new() };
            let z = Complex64::new(re, im);
            let a = e.eval(z);
            let b = e.eval(z);
            match (a, b) {
                (Ok(x), Ok(y)) => {
                    prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
                    prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
                }
                (Err(x), Err(y)) => prop_assert_eq!(x, y),
                _ => prop_assert!(false),
            }
        }
    }
}
