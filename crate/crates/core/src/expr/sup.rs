//! Supremum of an expression over `[0, inf)`.
//!
//! Two families are handled in closed form: exponential sums
//! `a + sum_i b_i e^{-c_i t}` whose derivative has at most one sign change in
//! its coefficient sequence (so at most one critical point), and a single
//! sinusoid on top of a constant. Everything else falls back to a dense grid
//! with golden-section refinement and, when every non-constant monomial
//! decays, an upper bound on the tail beyond the grid.

use serde::Serialize;

use super::normal::{expand, Term};
use super::Expr;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupKind {
    ExactAnalytic,
    GridWithTailBound,
    /// Grid maximum only; some monomial does not decay.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupOptions<T> {
    pub t_max: T,
    pub n_points: usize,
    /// Minimum decay rate for the tail bound to apply.
    pub min_tail_rate: T,
}

impl<T: Real> Default for SupOptions<T> {
    fn default() -> Self {
        SupOptions {
            t_max: T::lit(50.0),
            n_points: 20_001,
            min_tail_rate: T::lit(0.01),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate<T> {
    pub value: T,
    pub kind: SupKind,
    /// Where the supremum is attained; `inf` when it is only approached.
    pub witness_t: T,
    /// `(t_max, n_points)` for grid estimates.
    pub grid: Option<(T, usize)>,
    /// Grid values were still increasing at `t_max` with no tail bound.
    pub unbounded_warning: bool,
}

pub fn supremum<T: Real>(e: &Expr<T>) -> SupEstimate<T> {
    supremum_with(e, &SupOptions::default())
}

pub fn supremum_with<T: Real>(e: &Expr<T>, opts: &SupOptions<T>) -> SupEstimate<T> {
    let terms = expand(e);
    if let Some(est) = exponential_sum(&terms) {
        return est;
    }
    if let Some(est) = sinusoid(&terms) {
        return est;
    }
    grid_sup(e, &terms, opts)
}

fn analytic<T: Real>(value: T, witness_t: T) -> SupEstimate<T> {
    SupEstimate {
        value,
        kind: SupKind::ExactAnalytic,
        witness_t,
        grid: None,
        unbounded_warning: false,
    }
}

fn exponential_sum<T: Real>(terms: &[Term<T>]) -> Option<SupEstimate<T>> {
    if terms.iter().any(|t| t.n != 0 || t.a != T::zero()) {
        return None;
    }
    let limit = terms
        .iter()
        .filter(|t| t.c == T::zero())
        .fold(T::zero(), |s, t| s + t.z.re);
    // (b_i, c_i) sorted by ascending rate
    let decaying: Vec<(T, T)> = terms
        .iter()
        .filter(|t| t.c > T::zero())
        .map(|t| (t.z.re, t.c))
        .collect();
    let f = |t: T| {
        decaying
            .iter()
            .fold(limit, |s, (b, c)| s + *b * (-*c * t).exp())
    };
    let at_zero = f(T::zero());
    if decaying.is_empty() {
        return Some(analytic(limit, T::zero()));
    }
    // f'(t) = sum w_i e^{-c_i t},  w_i = -b_i c_i
    let w: Vec<T> = decaying.iter().map(|(b, c)| -*b * *c).collect();
    let sign_changes = w
        .windows(2)
        .filter(|p| (p[0] > T::zero()) != (p[1] > T::zero()))
        .count();
    if sign_changes > 1 {
        return None;
    }
    let deriv = |t: T| {
        decaying
            .iter()
            .zip(&w)
            .fold(T::zero(), |s, ((_, c), wi)| s + *wi * (-*c * t).exp())
    };
    let tail_up = w[0] > T::zero();
    let d0 = deriv(T::zero());
    if sign_changes == 1 && d0 > T::zero() && !tail_up {
        // rises then falls: unique interior maximum at the root of f'
        let mut hi = T::one();
        while deriv(hi) > T::zero() {
            hi = hi * T::lit(2.0);
            if !hi.is_finite() {
                return None;
            }
        }
        let mut lo = T::zero();
        for _ in 0..400 {
            let mid = (lo + hi) * T::lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            if deriv(mid) > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (fl, fh) = (f(lo), f(hi));
        let (t_star, v) = if fh > fl { (hi, fh) } else { (lo, fl) };
        return Some(analytic(v, t_star));
    }
    // monotone, or falls then rises: the supremum sits at an end
    if limit > at_zero {
        Some(analytic(limit, T::infinity()))
    } else {
        Some(analytic(at_zero, T::zero()))
    }
}

fn sinusoid<T: Real>(terms: &[Term<T>]) -> Option<SupEstimate<T>> {
    let mut constant = T::zero();
    let mut wave = None;
    for t in terms {
        if t.n != 0 || t.c != T::zero() {
            return None;
        }
        if t.a == T::zero() {
            constant = constant + t.z.re;
        } else if wave.replace(*t).is_some() {
            return None;
        }
    }
    let wave = wave?;
    let amplitude = wave.z.norm();
    let phase = wave.z.im.atan2(wave.z.re);
    let two_pi = T::TAU();
    let mut shift = (-phase) % two_pi;
    if shift < T::zero() {
        shift = shift + two_pi;
    }
    Some(analytic(constant + amplitude, shift / wave.a))
}

/// `sup_{t >= from} t^n e^{-c t}` for `c > 0`.
fn monomial_tail<T: Real>(n: u32, c: T, from: T) -> T {
    let nf = T::lit(n as f64);
    let peak = nf / c;
    let at = if from >= peak { from } else { peak };
    at.powi(n as i32) * (-c * at).exp()
}

fn golden_max<T: Real>(e: &Expr<T>, mut lo: T, mut hi: T) -> (T, T) {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (e.eval(x1), e.eval(x2));
    for _ in 0..200 {
        if hi - lo <= T::epsilon() * (T::one() + hi.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = e.eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = e.eval(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn grid_sup<T: Real>(e: &Expr<T>, terms: &[Term<T>], opts: &SupOptions<T>) -> SupEstimate<T> {
    let n = opts.n_points.max(2);
    let step = opts.t_max / T::lit((n - 1) as f64);
    let ts: Vec<T> = (0..n).map(|i| step * T::lit(i as f64)).collect();
    let vals: Vec<T> = ts.iter().map(|&t| e.eval(t)).collect();
    let (imax, &vmax) =
        vals.iter().enumerate().fold(
            (0, &vals[0]),
            |(bi, bv), (i, v)| if *v > *bv { (i, v) } else { (bi, bv) },
        );
    let lo = ts[imax.saturating_sub(1)];
    let hi = ts[(imax + 1).min(n - 1)];
    let (t_ref, v_ref) = golden_max(e, lo, hi);
    let (mut witness, mut value) = if v_ref > vmax {
        (t_ref, v_ref)
    } else {
        (ts[imax], vmax)
    };

    let decays = terms
        .iter()
        .all(|t| (t.n == 0 && t.a == T::zero() && t.c == T::zero()) || t.c >= opts.min_tail_rate);
    if decays {
        let constant = terms
            .iter()
            .filter(|t| t.n == 0 && t.a == T::zero() && t.c == T::zero())
            .fold(T::zero(), |s, t| s + t.z.re);
        let tail = terms
            .iter()
            .filter(|t| t.c > T::zero())
            .fold(constant, |s, t| {
                s + t.z.norm() * monomial_tail(t.n, t.c, opts.t_max)
            });
        if tail > value {
            value = tail;
            witness = T::infinity();
        }
        SupEstimate {
            value,
            kind: SupKind::GridWithTailBound,
            witness_t: witness,
            grid: Some((opts.t_max, n)),
            unbounded_warning: false,
        }
    } else {
        let rising = imax == n - 1 && vals[n - 1] > vals[n - 2];
        SupEstimate {
            value,
            kind: SupKind::Grid,
            witness_t: witness,
            grid: Some((opts.t_max, n)),
            unbounded_warning: rising,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use std::f64::consts::PI;

    type E = Expr<f64>;

    #[test]
    fn shifted_cosine_peaks_at_pi() {
        let p1: E = parse_expr("(cos(1*t+pi)+1)*0.25").unwrap();
        let s = supremum(&p1);
        assert_eq!(s.kind, SupKind::ExactAnalytic);
        assert!((s.value - 0.5).abs() < 1e-15);
        assert!((s.witness_t - PI).abs() < 1e-12);
    }

    #[test]
    fn saturating_exponential_reaches_limit() {
        let e: E = parse_expr("0.25*(1-exp(-1*t))").unwrap();
        let s = supremum(&e);
        assert_eq!(s.kind, SupKind::ExactAnalytic);
        assert_eq!(s.value, 0.25);
        assert!(s.witness_t.is_infinite());
    }

    #[test]
    fn zero_and_decreasing() {
        assert_eq!(supremum(&E::zero()).value, 0.0);
        let s = supremum(&(E::Exp(2.0) + E::Exp(1.0)));
        assert_eq!((s.value, s.witness_t), (2.0, 0.0));
    }

    #[test]
    fn interior_maximum_of_two_exponentials() {
        // e^{-t} - e^{-2t} peaks at t = ln 2 with value 1/4
        let e = E::Exp(1.0) - E::Exp(2.0);
        let s = supremum(&e);
        assert_eq!(s.kind, SupKind::ExactAnalytic);
        assert!((s.value - 0.25).abs() < 1e-15);
        assert!((s.witness_t - 2f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn grid_fallback_with_tail_bound() {
        // t e^{-t} has its maximum 1/e at t = 1
        let e = E::Product(vec![E::Var, E::Exp(1.0)]);
        let s = supremum(&e);
        assert_eq!(s.kind, SupKind::GridWithTailBound);
        assert!((s.value - (-1f64).exp()).abs() < 1e-12);
        assert!((s.witness_t - 1.0).abs() < 1e-6);
    }

    #[test]
    fn growing_polynomial_warns() {
        let s = supremum(&E::Var);
        assert_eq!(s.kind, SupKind::Grid);
        assert!(s.unbounded_warning);
    }

    #[test]
    fn two_sinusoids_use_grid_without_tail() {
        let e = E::Cos(1.0, 0.0) + E::Cos(2.0, 0.0);
        let s = supremum(&e);
        assert_eq!(s.kind, SupKind::Grid);
        assert!((s.value - 2.0).abs() < 1e-12);
        assert!(!s.unbounded_warning);
    }
}
