//! Scalar expressions in the single variable `s`, with third-order forward-mode
//! derivatives.
//!
//! Grammar (EBNF, whitespace ignored between tokens):
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = primary [ "^" unary ] ;          (* right associative *)
//! primary = number | "s" | "pi" | func "(" expr ")" | "(" expr ")" ;
//! func    = "sin" | "cos" | "tan" | "atan" | "sqrt" | "exp" | "log" | "abs" ;
//! number  = digit { digit } [ "." { digit } ] [ ("e" | "E") [ "+" | "-" ] digit { digit } ]
//!         | "." digit { digit } [ exponent ] ;
//! ```
//!
//! Exponents must not depend on `s`. A non-integer exponent requires a
//! positive base at the evaluation point.

mod jet;
mod parser;

use std::fmt;

use thiserror::Error;

pub use jet::Jet3;
pub use parser::{parse, ParseError};

use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Atan,
    Sqrt,
    Exp,
    Log,
    Abs,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Atan,
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Atan => "atan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Parsed scalar function of `s`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(x: f64) -> Self {
        Expr::Num(x)
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Self {
        Expr::Call(f, Box::new(a))
    }


    /// True when the expression does not mention `s`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::Pi => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Value and first three derivatives at `s`.
    pub fn eval_jet<T: Real>(&self, s: T) -> Result<Jet3<T>, DomainError> {
        eval_jet(self, s)
    }

    pub fn eval<T: Real>(&self, s: T) -> Result<T, DomainError> {
        eval_jet(self, s).map(|j| j.value)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Num(_) | Expr::Var | Expr::Pi | Expr::Call(..) => 5,
        }
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{}` on f64 is the shortest decimal that round-trips
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var => f.write_str("s"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => {
                let (sym, p) = match op {
                    BinOp::Add => (" + ", 1),
                    BinOp::Sub => (" - ", 1),
                    BinOp::Mul => (" * ", 2),
                    BinOp::Div => (" / ", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    write_child(f, a, 5)?;
                    f.write_str(sym)?;
                    write_child(f, b, 3)
                } else {
                    write_child(f, a, p)?;
                    f.write_str(sym)?;
                    write_child(f, b, p + 1)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainErrorKind {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNonPositive,
    TangentPole,
    NegativeBaseRealPower,
    ZeroToNegativePower,
    NonFinite,
}

impl fmt::Display for DomainErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainErrorKind::DivisionByZero => "division by zero",
            DomainErrorKind::LogOfNonPositive => "log of non-positive value",
            DomainErrorKind::SqrtOfNonPositive => "sqrt of non-positive value",
            DomainErrorKind::TangentPole => "tan evaluated at a pole",
            DomainErrorKind::NegativeBaseRealPower => "non-integer power of negative base",
            DomainErrorKind::ZeroToNegativePower => "zero raised to a negative power",
            DomainErrorKind::NonFinite => "non-finite result",
        })
    }
}

/// Evaluation left the real domain of a subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{subexpr}` at s = {at}")]
pub struct DomainError {
    pub kind: DomainErrorKind,
    pub subexpr: String,
    pub at: f64,
}

/// Evaluates `e` and its first three derivatives at `s`, exactly up to rounding.
pub fn eval_jet<T: Real>(e: &Expr, s: T) -> Result<Jet3<T>, DomainError> {
    let fail = |kind| DomainError {
        kind,
        subexpr: e.to_string(),
        at: s.as_f64(),
    };
    let out = match e {
        Expr::Num(x) => Jet3::constant(T::lit(*x)),
        Expr::Pi => Jet3::constant(T::PI()),
        Expr::Var => Jet3::variable(s),
        Expr::Neg(a) => -eval_jet(a, s)?,
        Expr::Binary(op, a, b) => {
            let a = eval_jet(a, s)?;
            let b = eval_jet(b, s)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.value == T::zero() {
                        return Err(fail(DomainErrorKind::DivisionByZero));
                    }
                    a * b.recip()
                }
                BinOp::Pow => {
                    // exponent is constant by construction, so only its value matters
                    let p = b.value;
                    if p.fract() == T::zero() && p.abs() <= T::lit(f64::from(i32::MAX)) {
                        let n = p.to_i32().expect("integral exponent fits i32");
                        if n < 0 && a.value == T::zero() {
                            return Err(fail(DomainErrorKind::ZeroToNegativePower));
                        }
                        a.powi(n)
                    } else if a.value > T::zero() {
                        a.powf(p)
                    } else {
                        return Err(fail(DomainErrorKind::NegativeBaseRealPower));
                    }
                }
            }
        }
        Expr::Call(func, a) => {
            let a = eval_jet(a, s)?;
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => {
                    if a.value.cos().abs() < T::epsilon() {
                        return Err(fail(DomainErrorKind::TangentPole));
                    }
                    a.tan()
                }
                Func::Atan => a.atan(),
                Func::Sqrt => {
                    if a.value <= T::zero() {
                        return Err(fail(DomainErrorKind::SqrtOfNonPositive));
                    }
                    a.sqrt()
                }
                Func::Exp => a.exp(),
                Func::Log => {
                    if a.value <= T::zero() {
                        return Err(fail(DomainErrorKind::LogOfNonPositive));
                    }
                    a.ln()
                }
                Func::Abs => a.abs(),
            }
        }
    };
    if out.is_finite() {
        Ok(out)
    } else {
        Err(fail(DomainErrorKind::NonFinite))
    }
}
