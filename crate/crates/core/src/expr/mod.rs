//! Closed-form functions of time.
//!
//! A [`Expr`] is a small expression tree over the time variable `t` built from
//! constants, decaying exponentials `e^{-c t}`, cosines `cos(a t + b)`, sums,
//! products and scalar multiples. The family is closed under differentiation
//! and has no division node; quotients such as decoherence rates are evaluated
//! pointwise by the caller.
//!
//! Textual grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | atom
//! atom   := number | 't' | 'pi' | 'exp' '(' expr ')' | 'cos' '(' expr ')' | '(' expr ')'
//! ```
//!
//! The argument of `exp` must be affine in `t` with a non-positive slope, the
//! argument of `cos` must be affine in `t`.

mod normal;
mod parse;
mod sup;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Real;

pub use parse::parse_expr;
pub use sup::{supremum, supremum_with, SupEstimate, SupKind, SupOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("domain error at byte {offset}: {message}")]
    Domain { offset: usize, message: String },
    #[error("negative decay coefficient {0} (only e^(-c t) with c >= 0 is representable)")]
    NegativeDecay(f64),
    #[error("time {0} is outside [0, inf)")]
    BadTime(f64),
    #[error("evaluation overflowed at t = {t}")]
    Overflow { t: f64 },
}

/// Expression tree over the time variable.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr<T> {
    Const(T),
    /// The time variable `t`.
    Var,
    /// `e^{-c t}` with `c >= 0`.
    Exp(T),
    /// `cos(a t + b)`.
    Cos(T, T),
    Sum(Vec<Expr<T>>),
    Product(Vec<Expr<T>>),
    Scale(T, Box<Expr<T>>),
}

impl<T: Real> Expr<T> {
    pub fn constant(x: T) -> Self {
        Expr::Const(x)
    }

    pub fn zero() -> Self {
        Expr::Const(T::zero())
    }

    pub fn one() -> Self {
        Expr::Const(T::one())
    }

    pub fn t() -> Self {
        Expr::Var
    }

    /// `e^{-c t}`; rejects negative or non-finite `c`.
    pub fn exp_decay(c: T) -> Result<Self, ExprError> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(ExprError::NegativeDecay(c.as_f64()));
        }
        // canonicalize -0.0
        Ok(Expr::Exp(c + T::zero()))
    }

    pub fn cos(a: T, b: T) -> Self {
        Expr::Cos(a, b)
    }

    /// `k * e`, collapsing trivial cases.
    pub fn scale(k: T, e: Expr<T>) -> Self {
        if k == T::zero() {
            return Expr::zero();
        }
        match e {
            Expr::Const(c) => Expr::Const(k * c),
            Expr::Scale(m, inner) => Expr::scale(k * m, *inner),
            other if k == T::one() => other,
            other => Expr::Scale(k, Box::new(other)),
        }
    }

    /// Sum of `terms`, dropping literal zeros.
    pub fn sum(terms: Vec<Expr<T>>) -> Self {
        let mut kept: Vec<Expr<T>> = terms
            .into_iter()
            .filter(|e| !matches!(e, Expr::Const(c) if *c == T::zero()))
            .collect();
        match kept.len() {
            0 => Expr::zero(),
            1 => kept.pop().unwrap(),
            _ => Expr::Sum(kept),
        }
    }

    /// Product of `factors`, dropping literal ones.
    pub fn product(factors: Vec<Expr<T>>) -> Self {
        if factors
            .iter()
            .any(|e| matches!(e, Expr::Const(c) if *c == T::zero()))
        {
            return Expr::zero();
        }
        let mut kept: Vec<Expr<T>> = factors
            .into_iter()
            .filter(|e| !matches!(e, Expr::Const(c) if *c == T::one()))
            .collect();
        match kept.len() {
            0 => Expr::one(),
            1 => kept.pop().unwrap(),
            _ => Expr::Product(kept),
        }
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Exp(c) => {
                if *c == T::zero() {
                    T::one()
                } else {
                    (-*c * t).exp()
                }
            }
            Expr::Cos(a, b) => (*a * t + *b).cos(),
            Expr::Sum(xs) => xs.iter().fold(T::zero(), |acc, x| acc + x.eval(t)),
            Expr::Product(xs) => xs.iter().fold(T::one(), |acc, x| acc * x.eval(t)),
            Expr::Scale(k, x) => *k * x.eval(t),
        }
    }

    /// Evaluation that rejects negative times and reports non-finite results.
    pub fn eval_checked(&self, t: T) -> Result<T, ExprError> {
        if !(t >= T::zero()) {
            return Err(ExprError::BadTime(t.as_f64()));
        }
        let v = self.eval(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::Overflow { t: t.as_f64() })
        }
    }

    /// Symbolic derivative with respect to `t`.
    pub fn differentiate(&self) -> Expr<T> {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var => Expr::one(),
            Expr::Exp(c) => Expr::scale(-*c, Expr::Exp(*c)),
            Expr::Cos(a, b) => Expr::scale(-*a, Expr::Cos(*a, *b - T::FRAC_PI_2())),
            Expr::Sum(xs) => Expr::sum(xs.iter().map(|x| x.differentiate()).collect()),
            Expr::Product(xs) => {
                let terms = (0..xs.len())
                    .map(|i| {
                        let factors = xs
                            .iter()
                            .enumerate()
                            .map(|(j, x)| if i == j { x.differentiate() } else { x.clone() })
                            .collect();
                        Expr::product(factors)
                    })
                    .collect();
                Expr::sum(terms)
            }
            Expr::Scale(k, x) => Expr::scale(*k, x.differentiate()),
        }
    }

    /// Canonical form: an expanded sum of `coef * t^n * e^{-c t} * cos(a t + b)`
    /// monomials with like terms merged, sorted, and zero terms removed.
    pub fn normalize(&self) -> Expr<T> {
        normal::normalize(self)
    }

    /// Structural equality with numeric leaves compared to a relative tolerance.
    pub fn approx_eq(&self, other: &Expr<T>, tol: T) -> bool {
        use crate::scalar::close;
        match (self, other) {
            (Expr::Const(a), Expr::Const(b)) => close(*a, *b, tol),
            (Expr::Var, Expr::Var) => true,
            (Expr::Exp(a), Expr::Exp(b)) => close(*a, *b, tol),
            (Expr::Cos(a1, b1), Expr::Cos(a2, b2)) => close(*a1, *a2, tol) && close(*b1, *b2, tol),
            (Expr::Sum(xs), Expr::Sum(ys)) | (Expr::Product(xs), Expr::Product(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.approx_eq(y, tol))
            }
            (Expr::Scale(k1, x), Expr::Scale(k2, y)) => close(*k1, *k2, tol) && x.approx_eq(y, tol),
            _ => false,
        }
    }

    /// `true` when the expanded difference has no monomial above `tol`,
    /// relative to the largest monomial coefficient of either side.
    pub fn symbolically_equal(&self, other: &Expr<T>, tol: T) -> bool {
        normal::difference_vanishes(self, other, tol)
    }

    /// Returns `Some(c)` when the expression is literally a constant.
    pub fn as_const(&self) -> Option<T> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Map every numeric leaf into another scalar type.
    pub fn cast<U: Real>(&self) -> Expr<U> {
        let f = |x: T| U::lit(x.as_f64());
        match self {
            Expr::Const(c) => Expr::Const(f(*c)),
            Expr::Var => Expr::Var,
            Expr::Exp(c) => Expr::Exp(f(*c)),
            Expr::Cos(a, b) => Expr::Cos(f(*a), f(*b)),
            Expr::Sum(xs) => Expr::Sum(xs.iter().map(|x| x.cast()).collect()),
            Expr::Product(xs) => Expr::Product(xs.iter().map(|x| x.cast()).collect()),
            Expr::Scale(k, x) => Expr::Scale(f(*k), Box::new(x.cast())),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Sum(xs) | Expr::Product(xs) => {
                1 + xs.iter().map(|x| x.node_count()).sum::<usize>()
            }
            Expr::Scale(_, x) => 1 + x.node_count(),
            _ => 1,
        }
    }
}

impl<T: Real> Add for Expr<T> {
    type Output = Expr<T>;
    fn add(self, rhs: Expr<T>) -> Expr<T> {
        let mut terms = Vec::new();
        for e in [self, rhs] {
            match e {
                Expr::Sum(xs) => terms.extend(xs),
                other => terms.push(other),
            }
        }
        Expr::sum(terms)
    }
}

impl<T: Real> Sub for Expr<T> {
    type Output = Expr<T>;
    fn sub(self, rhs: Expr<T>) -> Expr<T> {
        self + (-rhs)
    }
}

impl<T: Real> Neg for Expr<T> {
    type Output = Expr<T>;
    fn neg(self) -> Expr<T> {
        Expr::scale(-T::one(), self)
    }
}

impl<T: Real> Mul for Expr<T> {
    type Output = Expr<T>;
    fn mul(self, rhs: Expr<T>) -> Expr<T> {
        match (self, rhs) {
            (Expr::Const(k), e) | (e, Expr::Const(k)) => Expr::scale(k, e),
            (a, b) => {
                let mut factors = Vec::new();
                for e in [a, b] {
                    match e {
                        Expr::Product(xs) => factors.extend(xs),
                        other => factors.push(other),
                    }
                }
                Expr::product(factors)
            }
        }
    }
}

fn write_num<T: Real>(f: &mut fmt::Formatter<'_>, x: T) -> fmt::Result {
    if x.is_sign_negative() && x != T::zero() {
        write!(f, "({})", x)
    } else {
        write!(f, "{}", x + T::zero())
    }
}

/// Prints in the parser's grammar; `parse_expr(&e.to_string())` rebuilds a
/// normalized `e` exactly.
impl<T: Real> fmt::Display for Expr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_num(f, *c),
            Expr::Var => write!(f, "t"),
            Expr::Exp(c) => {
                write!(f, "exp(-")?;
                write_num(f, *c)?;
                write!(f, "*t)")
            }
            Expr::Cos(a, b) => {
                write!(f, "cos(")?;
                write_num(f, *a)?;
                write!(f, "*t+")?;
                write_num(f, *b)?;
                write!(f, ")")
            }
            Expr::Sum(xs) | Expr::Product(xs) => {
                let sep = if matches!(self, Expr::Sum(_)) {
                    " + "
                } else {
                    "*"
                };
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Expr::Scale(k, x) => {
                write!(f, "(")?;
                write_num(f, *k)?;
                write!(f, "*{x})")
            }
        }
    }
}

impl serde::Serialize for Expr<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Expr<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_expr(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type E = Expr<f64>;

    #[test]
    fn eval_basics() {
        assert_eq!(E::one().eval(3.7), 1.0);
        assert_eq!(E::Exp(1.0).eval(0.0), 1.0);
        let p1 = E::scale(0.25, E::Cos(1.0, PI) + E::one());
        assert!((p1.eval(PI) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_checked_rejects_negative_time_and_overflow() {
        assert!(matches!(
            E::Var.eval_checked(-1.0),
            Err(ExprError::BadTime(_))
        ));
        let big = E::Product(vec![E::Var; 400]);
        assert!(matches!(
            big.eval_checked(1e3),
            Err(ExprError::Overflow { .. })
        ));
    }

    #[test]
    fn derivative_rules() {
        assert_eq!(
            E::Exp(2.0).differentiate(),
            E::Scale(-2.0, Box::new(E::Exp(2.0)))
        );
        assert_eq!(
            E::Cos(3.0, 0.5).differentiate(),
            E::Scale(-3.0, Box::new(E::Cos(3.0, 0.5 - PI / 2.0)))
        );
        let d = E::Cos(3.0, 0.5).differentiate().eval(0.2);
        assert!((d + 3.0 * (3.0f64 * 0.2 + 0.5).sin()).abs() < 1e-14);
        let e = E::one() - E::Exp(1.0);
        assert_eq!(e.differentiate(), E::Exp(1.0));
        assert_eq!(E::Const(4.0).differentiate(), E::zero());
    }

    #[test]
    fn exp_decay_rejects_negative() {
        assert!(E::exp_decay(-0.5).is_err());
        assert!(E::exp_decay(f64::NAN).is_err());
        assert_eq!(E::exp_decay(-0.0).unwrap(), E::Exp(0.0));
    }

    #[test]
    fn display_negative_constants_are_parenthesized() {
        let e = E::scale(-0.25, E::Exp(1.0));
        assert_eq!(e.to_string(), "((-0.25)*exp(-1*t))");
        assert_eq!(E::Cos(2.0, PI).to_string(), "cos(2*t+3.141592653589793)");
    }

    #[test]
    fn f32_instantiation_evaluates() {
        let e: Expr<f32> = Expr::scale(0.5, Expr::one() - Expr::Exp(2.0));
        assert!((e.eval(1.0) - 0.5 * (1.0 - (-2.0f32).exp())).abs() < 1e-6);
    }
}
