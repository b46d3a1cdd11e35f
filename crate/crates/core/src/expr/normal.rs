//! Canonical form of expression trees.
//!
//! Every expression in the language expands to a finite sum of monomials
//! `Re(z * t^n * e^{-c t} * e^{i a t})` with `a >= 0`. Products of cosines are
//! rewritten with the product-to-sum identity so the expansion stays in that
//! shape. When `a == 0` only the real part of `z` is meaningful.

use std::cmp::Ordering;

use num_complex::Complex;

use super::Expr;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub(super) struct Term<T> {
    pub n: u32,
    pub c: T,
    pub a: T,
    pub z: Complex<T>,
}

impl<T: Real> Term<T> {
    fn constant(k: T) -> Self {
        Term {
            n: 0,
            c: T::zero(),
            a: T::zero(),
            z: Complex::new(k, T::zero()),
        }
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.c.partial_cmp(&other.c).unwrap_or(Ordering::Equal))
            .then_with(|| self.a.partial_cmp(&other.a).unwrap_or(Ordering::Equal))
    }

    fn same_key(&self, other: &Self) -> bool {
        let tol = T::tol(1e-12);
        self.n == other.n
            && crate::scalar::close(self.c, other.c, tol)
            && crate::scalar::close(self.a, other.a, tol)
    }
}

fn mul_terms<T: Real>(x: &Term<T>, y: &Term<T>, out: &mut Vec<Term<T>>) {
    let n = x.n + y.n;
    let c = x.c + y.c;
    let zero = T::zero();
    let half = T::lit(0.5);
    match (x.a == zero, y.a == zero) {
        (true, true) => out.push(Term {
            n,
            c,
            a: zero,
            z: Complex::new(x.z.re * y.z.re, zero),
        }),
        (true, false) => out.push(Term {
            n,
            c,
            a: y.a,
            z: y.z * x.z.re,
        }),
        (false, true) => out.push(Term {
            n,
            c,
            a: x.a,
            z: x.z * y.z.re,
        }),
        (false, false) => {
            // Re(u)Re(v) = (Re(u v) + Re(u conj v)) / 2
            out.push(Term {
                n,
                c,
                a: x.a + y.a,
                z: x.z * y.z * half,
            });
            let diff = x.a - y.a;
            let w = x.z * y.z.conj() * half;
            let (a, z) = if diff < zero {
                (-diff, w.conj())
            } else {
                (diff, w)
            };
            let z = if a == zero {
                Complex::new(z.re, zero)
            } else {
                z
            };
            out.push(Term { n, c, a, z });
        }
    }
}

fn merge<T: Real>(mut terms: Vec<Term<T>>) -> Vec<Term<T>> {
    terms.sort_by(|x, y| x.key_cmp(y));
    let mut merged: Vec<Term<T>> = Vec::with_capacity(terms.len());
    for term in terms {
        match merged.last_mut() {
            Some(last) if last.same_key(&term) => last.z = last.z + term.z,
            _ => merged.push(term),
        }
    }
    for term in merged.iter_mut() {
        if term.a == T::zero() {
            term.z.im = T::zero();
        }
    }
    let largest = merged.iter().fold(T::zero(), |m, t| m.max(t.z.norm()));
    let cutoff = largest * T::epsilon() * T::lit(4.0);
    merged.retain(|t| t.z.norm() > cutoff && t.z.norm() != T::zero());
    merged
}

pub(super) fn expand<T: Real>(e: &Expr<T>) -> Vec<Term<T>> {
    let zero = T::zero();
    let one = T::one();
    let terms = match e {
        Expr::Const(k) => vec![Term::constant(*k)],
        Expr::Var => vec![Term {
            n: 1,
            c: zero,
            a: zero,
            z: Complex::new(one, zero),
        }],
        Expr::Exp(c) => vec![Term {
            n: 0,
            c: *c,
            a: zero,
            z: Complex::new(one, zero),
        }],
        Expr::Cos(a, b) => {
            let (a, b) = if *a < zero { (-*a, -*b) } else { (*a, *b) };
            if a == zero {
                vec![Term::constant(b.cos())]
            } else {
                vec![Term {
                    n: 0,
                    c: zero,
                    a,
                    z: Complex::new(b.cos(), b.sin()),
                }]
            }
        }
        Expr::Sum(xs) => xs.iter().flat_map(expand).collect(),
        Expr::Product(xs) => {
            let mut acc = vec![Term::constant(one)];
            for x in xs {
                let rhs = expand(x);
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for l in &acc {
                    for r in &rhs {
                        mul_terms(l, r, &mut next);
                    }
                }
                acc = merge(next);
            }
            acc
        }
        Expr::Scale(k, x) => expand(x)
            .into_iter()
            .map(|t| Term { z: t.z * *k, ..t })
            .collect(),
    };
    merge(terms)
}

fn wrap_phase<T: Real>(phi: T) -> T {
    let two_pi = T::TAU();
    let mut p = phi % two_pi;
    if p < T::zero() {
        p = p + two_pi;
    }
    if p >= two_pi {
        p = p - two_pi;
    }
    p + T::zero()
}

pub(super) fn rebuild<T: Real>(terms: &[Term<T>]) -> Expr<T> {
    let mut out: Vec<Expr<T>> = terms
        .iter()
        .map(|t| {
            let mut factors: Vec<Expr<T>> = vec![Expr::Var; t.n as usize];
            if t.c != T::zero() {
                factors.push(Expr::Exp(t.c));
            }
            let coef = if t.a != T::zero() {
                factors.push(Expr::Cos(t.a, wrap_phase(t.z.im.atan2(t.z.re))));
                t.z.norm()
            } else {
                t.z.re
            };
            let mono = match factors.len() {
                0 => return Expr::Const(coef),
                1 => factors.pop().unwrap(),
                _ => Expr::Product(factors),
            };
            if coef == T::one() {
                mono
            } else {
                Expr::Scale(coef, Box::new(mono))
            }
        })
        .collect();
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::Sum(out),
    }
}

pub(super) fn normalize<T: Real>(e: &Expr<T>) -> Expr<T> {
    rebuild(&expand(e))
}

/// Every monomial of `a - b` is below `tol * max(1, largest monomial of a or b)`.
pub(super) fn difference_vanishes<T: Real>(a: &Expr<T>, b: &Expr<T>, tol: T) -> bool {
    let (ea, eb) = (expand(a), expand(b));
    let scale = ea
        .iter()
        .chain(&eb)
        .fold(T::one(), |m, t| m.max(t.z.norm()));
    let diff: Vec<Term<T>> = ea
        .into_iter()
        .chain(eb.into_iter().map(|t| Term { z: -t.z, ..t }))
        .collect();
    let mut sorted = diff;
    sorted.sort_by(|x, y| x.key_cmp(y));
    let mut merged: Vec<Term<T>> = Vec::with_capacity(sorted.len());
    for term in sorted {
        match merged.last_mut() {
            Some(last) if last.same_key(&term) => last.z = last.z + term.z,
            _ => merged.push(term),
        }
    }
    merged.iter().all(|t| {
        let z = if t.a == T::zero() {
            t.z.re.abs()
        } else {
            t.z.norm()
        };
        z <= tol * scale
    })
}
