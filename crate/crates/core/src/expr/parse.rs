use super::{Expr, ExprError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent: e[+-]digits
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                out.push((start, Tok::Num(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!(
                        "unexpected character {:?}",
                        text[start..].chars().next().unwrap()
                    ),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a, T> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    _src: &'a str,
    _scalar: std::marker::PhantomData<T>,
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

impl<'a, T: Real> Parser<'a, T> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ExprError> {
        let off = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(syntax(off, format!("expected {what}, found {t:?}"))),
            None => Err(syntax(off, format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr<T>, ExprError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    terms.push(negate(self.term()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Expr<T>, ExprError> {
        let mut factors = vec![self.unary()?];
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            factors.push(self.unary()?);
        }
        if factors.len() == 1 {
            return Ok(factors.pop().unwrap());
        }
        let mut coef = T::one();
        let mut saw_const = false;
        let mut rest = Vec::new();
        for f in factors {
            match f {
                Expr::Const(c) => {
                    coef = coef * c;
                    saw_const = true;
                }
                other => rest.push(other),
            }
        }
        Ok(match (rest.len(), saw_const) {
            (0, _) => Expr::Const(coef),
            (_, false) => Expr::Product(rest),
            (1, true) => Expr::Scale(coef, Box::new(rest.pop().unwrap())),
            (_, true) => Expr::Scale(coef, Box::new(Expr::Product(rest))),
        })
    }

    fn unary(&mut self) -> Result<Expr<T>, ExprError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(negate(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr<T>, ExprError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(s)) => s
                .parse::<T>()
                .map(Expr::Const)
                .map_err(|_| syntax(off, format!("malformed number {s:?}"))),
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(T::PI())),
                "exp" | "cos" => {
                    self.expect(Tok::LParen, "'('")?;
                    let arg_off = self.offset();
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    let (slope, offset) = affine(&arg).ok_or_else(|| {
                        syntax(arg_off, format!("argument of {name} must be affine in t"))
                    })?;
                    if name == "cos" {
                        return Ok(Expr::Cos(slope, offset));
                    }
                    if slope > T::zero() {
                        return Err(ExprError::Domain {
                            offset: arg_off,
                            message: "exp argument must be -c*t with c >= 0".into(),
                        });
                    }
                    let decay = Expr::Exp(-slope + T::zero());
                    Ok(if offset == T::zero() {
                        decay
                    } else {
                        Expr::Scale(offset.exp(), Box::new(decay))
                    })
                }
                other => Err(syntax(off, format!("unknown identifier {other:?}"))),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(syntax(off, format!("unexpected token {t:?}"))),
            None => Err(syntax(off, "unexpected end of input")),
        }
    }
}

fn negate<T: Real>(e: Expr<T>) -> Expr<T> {
    match e {
        Expr::Const(c) => Expr::Const(-c),
        other => Expr::Scale(-T::one(), Box::new(other)),
    }
}

/// `Some((slope, offset))` when `e` is `slope * t + offset`.
fn affine<T: Real>(e: &Expr<T>) -> Option<(T, T)> {
    match e {
        Expr::Const(c) => Some((T::zero(), *c)),
        Expr::Var => Some((T::one(), T::zero())),
        Expr::Sum(xs) => xs.iter().try_fold((T::zero(), T::zero()), |(s, o), x| {
            affine(x).map(|(s2, o2)| (s + s2, o + o2))
        }),
        Expr::Scale(k, x) => affine(x).map(|(s, o)| (*k * s, *k * o)),
        Expr::Product(xs) => {
            let mut acc = (T::zero(), T::one());
            for x in xs {
                let (s, o) = affine(x)?;
                if acc.0 != T::zero() && s != T::zero() {
                    return None;
                }
                acc = (acc.0 * o + s * acc.1, acc.1 * o);
            }
            Some(acc)
        }
        Expr::Exp(_) | Expr::Cos(..) => None,
    }
}

/// Parse the textual expression grammar into a tree.
///
/// Subtraction becomes `Sum(.., Scale(-1, ..))`, literal factors of a product
/// chain collapse into a single `Scale`, and parenthesized groups are kept as
/// their own nodes.
pub fn parse_expr<T: Real>(text: &str) -> Result<Expr<T>, ExprError> {
    let toks = lex(text)?;
    let mut p: Parser<'_, T> = Parser {
        toks,
        pos: 0,
        end: text.len(),
        _src: text,
        _scalar: std::marker::PhantomData,
    };
    if p.peek().is_none() {
        return Err(syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let off = p.offset();
        return Err(syntax(off, "trailing input"));
    }
    Ok(e)
}
