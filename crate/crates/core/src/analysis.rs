//! Decision procedures over generalized Pauli and Weyl channels.
//!
//! Everything here works in `f64`: the tolerances are double-precision
//! numbers and several checks (exponential fits, zero refinement) need the
//! full mantissa.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::channels::{
    channel_equal, dephasing_channel, mix_gpc, Channel, ChannelError, EqualityMode,
    GeneralizedPauli,
};
use crate::expr::{supremum, Expr, SupKind};
use crate::grid::TimeGrid;
use crate::mub::Mubs;

type Gpc = GeneralizedPauli<f64>;
type E = Expr<f64>;

/// Membership slack on `Σ sup p_α <= 1`.
pub const MEMBERSHIP_TOL: f64 = 1e-12;
/// Maximum `|λ(t) - e^{-c t}|` for an accepted exponential fit.
pub const FIT_TOL: f64 = 1e-9;
/// Slack on `c_α >= 0` and `Σc >= d max c`.
pub const RATE_TOL: f64 = 1e-12;
/// `|λ|` below this is a zero of the spectrum.
pub const ZERO_TOL: f64 = 1e-9;
/// `|λ|` below this makes `γ` undefined at that time.
pub const POLE_TOL: f64 = 1e-10;
/// Rate sums and rates below `-SIGN_TOL` count as negative.
pub const SIGN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("not a mixture of dephasing channels: sum of suprema is {sup_sum}")]
    NotDecomposable { sup_sum: f64 },
    #[error("rate inequality violated at index {beta}: sum of rates {sum} < d * max = {bound}")]
    RateInequalityViolated { beta: usize, sum: f64, bound: f64 },
    #[error("rate at index {beta} is {value}, must be a nonnegative finite number")]
    NegativeRate { beta: usize, value: f64 },
    #[error("expected {expected} rates, got {found}")]
    RateCount { expected: usize, found: usize },
    #[error("rates cannot be ordered: {0}")]
    RateOrderError(String),
    #[error("operation needs {needed}, got d = {d}")]
    UnsupportedDimension { d: usize, needed: &'static str },
    #[error("input channel {0} is not a semigroup")]
    NotASemigroup(usize),
    #[error("split needs n >= 2, got {0}")]
    TooFewComponents(usize),
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

// ---------------------------------------------------------------- dephasing

#[derive(Debug, Clone, Serialize)]
pub struct DephasingMembership {
    pub member: bool,
    /// `sup_t p_α(t)` for `α = 1..=d+1`.
    pub sup_values: Vec<f64>,
    pub sup_kinds: Vec<SupKind>,
    pub sup_sum: f64,
    pub unbounded_warning: bool,
}

/// `Σ_α sup_t p_α(t) <= 1`.
pub fn in_dephasing_set(ch: &Gpc) -> DephasingMembership {
    let sups: Vec<_> = ch.p()[1..].iter().map(supremum).collect();
    let sup_values: Vec<f64> = sups.iter().map(|s| s.value).collect();
    let sup_sum = sup_values.iter().sum::<f64>();
    DephasingMembership {
        member: sup_sum <= 1.0 + MEMBERSHIP_TOL,
        sup_kinds: sups.iter().map(|s| s.kind).collect(),
        unbounded_warning: sups.iter().any(|s| s.unbounded_warning),
        sup_values,
        sup_sum,
    }
}

/// `Λ = m_0 id + Σ_α m_α Λ^{(α, π_α)}`.
#[derive(Debug, Clone, Serialize)]
pub struct DephasingDecomposition {
    /// `m_0 … m_{d+1}`.
    pub weights: Vec<f64>,
    /// `π_α` for `α = 1..=d+1`; `None` where `m_α = 0`.
    pub pi: Vec<Option<E>>,
}

impl DephasingDecomposition {
    /// The identity channel followed by one dephasing channel per positive
    /// weight, paired with their weights.
    pub fn components(
        &self,
        mubs: &Arc<Mubs<f64>>,
        grid: &TimeGrid<f64>,
    ) -> Result<Vec<(f64, Gpc)>, ChannelError> {
        let mut out = Vec::new();
        if self.weights[0] > 0.0 {
            out.push((self.weights[0], GeneralizedPauli::identity(mubs.clone())));
        }
        for (i, pi) in self.pi.iter().enumerate() {
            if let Some(pi) = pi {
                out.push((
                    self.weights[i + 1],
                    dephasing_channel(mubs.clone(), i + 1, pi.clone(), grid)?,
                ));
            }
        }
        Ok(out)
    }

    pub fn reconstruct(
        &self,
        mubs: &Arc<Mubs<f64>>,
        grid: &TimeGrid<f64>,
    ) -> Result<Gpc, ChannelError> {
        let parts = self.components(mubs, grid)?;
        let (w, chs): (Vec<f64>, Vec<&Gpc>) = parts.iter().map(|(w, c)| (*w, c)).unzip();
        mix_gpc(&chs, &w)
    }
}

/// `m_α = sup p_α`, `π_α = p_α / m_α`, `m_0 = 1 - Σ m_α`.
pub fn decompose_dephasing(ch: &Gpc) -> Result<DephasingDecomposition, AnalysisError> {
    let m = in_dephasing_set(ch);
    if !m.member {
        return Err(AnalysisError::NotDecomposable { sup_sum: m.sup_sum });
    }
    let mut weights = vec![(1.0 - m.sup_sum).max(0.0)];
    let mut pi = Vec::with_capacity(m.sup_values.len());
    for (p, &s) in ch.p()[1..].iter().zip(&m.sup_values) {
        if s > 0.0 {
            weights.push(s);
            pi.push(Some(Expr::scale(1.0 / s, p.clone()).normalize()));
        } else {
            weights.push(0.0);
            pi.push(None);
        }
    }
    Ok(DephasingDecomposition { weights, pi })
}

/// Qubit semigroup written as `½ Λ^{π_1} + ¼ Λ^{π_2} + ¼ Λ^{π_3}`.
#[derive(Debug, Clone, Serialize)]
pub struct QubitSemigroupDecomposition {
    pub weights: [f64; 3],
    /// 1-based basis index carrying each `π_i`; `order[0]` has the smallest rate.
    pub order: [usize; 3],
    pub pi: [E; 3],
}

impl QubitSemigroupDecomposition {
    pub fn components(
        &self,
        mubs: &Arc<Mubs<f64>>,
        grid: &TimeGrid<f64>,
    ) -> Result<Vec<Gpc>, ChannelError> {
        (0..3)
            .map(|i| dephasing_channel(mubs.clone(), self.order[i], self.pi[i].clone(), grid))
            .collect()
    }

    pub fn reconstruct(
        &self,
        mubs: &Arc<Mubs<f64>>,
        grid: &TimeGrid<f64>,
    ) -> Result<Gpc, ChannelError> {
        let parts = self.components(mubs, grid)?;
        mix_gpc(&parts.iter().collect::<Vec<_>>(), &self.weights)
    }
}

/// Every qubit semigroup is a mixture of three dephasing channels.
pub fn decompose_s2_into_d2(c: [f64; 3]) -> Result<QubitSemigroupDecomposition, AnalysisError> {
    check_rates(2, &c)?;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| c[i].partial_cmp(&c[j]).expect("finite rates"));
    let [c1, c2, c3] = [c[order[0]], c[order[1]], c[order[2]]];
    if !(c1 <= c2 && c2 <= c3) {
        return Err(AnalysisError::RateOrderError(format!("{c:?}")));
    }
    let e = |r: f64| Expr::Exp(r);
    let pi1 = Expr::scale(0.5, Expr::one() + e(c1) - e(c3) - e(c2)).normalize();
    let pi2 = (Expr::one() + e(c2) - e(c3) - e(c1)).normalize();
    let pi3 = (Expr::one() + e(c3) - e(c1) - e(c2)).normalize();
    Ok(QubitSemigroupDecomposition {
        weights: [0.5, 0.25, 0.25],
        order: [order[0] + 1, order[1] + 1, order[2] + 1],
        pi: [pi1, pi2, pi3],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuditWitness {
    /// Rate of the first basis; all others are 1.
    pub c: f64,
    /// Largest `c` for which the sum of suprema still exceeds 1 (bisection estimate).
    pub threshold: f64,
    pub sup_sum: f64,
    pub is_semigroup: bool,
    #[serde(skip)]
    pub channel: Option<Gpc>,
}

/// A semigroup outside the dephasing-mixture set for `d >= 3`, with rates
/// `(c, 1, …, 1)`.
pub fn sd_not_in_dd_witness(
    mubs: &Arc<Mubs<f64>>,
    grid: &TimeGrid<f64>,
) -> Result<QuditWitness, AnalysisError> {
    let d = mubs.dim();
    if d < 3 {
        return Err(AnalysisError::UnsupportedDimension {
            d,
            needed: "d >= 3",
        });
    }
    let rates = |c: f64| {
        let mut r = vec![1.0; d + 1];
        r[0] = c;
        r
    };
    let excess = |c: f64| -> Result<f64, AnalysisError> {
        let ch = semigroup_from_rates(mubs.clone(), &rates(c))?;
        Ok(in_dephasing_set(&ch).sup_sum - 1.0)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if excess(hi)? > 0.0 {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if mid > 0.0 && excess(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let threshold = lo;
    let mut c = 0.5 * threshold;
    let mut ch = semigroup_from_rates(mubs.clone(), &rates(c))?;
    let mut sup_sum = in_dephasing_set(&ch).sup_sum;
    while sup_sum <= 1.0 + 1e-9 && c > 1e-12 {
        c *= 0.5;
        ch = semigroup_from_rates(mubs.clone(), &rates(c))?;
        sup_sum = in_dephasing_set(&ch).sup_sum;
    }
    let is_semigroup = is_semigroup(&ch, grid).is_semigroup;
    Ok(QuditWitness {
        c,
        threshold,
        sup_sum,
        is_semigroup,
        channel: Some(ch),
    })
}

// ---------------------------------------------------------------- semigroups

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemigroupViolation {
    ExpFit,
    RateInequality,
    NegativeRate,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemigroupVerdict {
    pub is_semigroup: bool,
    /// Fitted `c_α`; present whenever every eigenvalue is a single exponential.
    pub rates: Option<Vec<f64>>,
    /// Largest `|λ_α(t) - e^{-c_α t}|` over the grid and all `α`.
    pub fit_residual: f64,
    pub violated: Option<SemigroupViolation>,
}

/// `Some(c)` when the normalized form is literally `e^{-c t}` or `1`.
fn single_exponential(l: &E) -> Option<f64> {
    let close = |k: f64| (k - 1.0).abs() <= RATE_TOL;
    match l.normalize() {
        Expr::Const(k) if close(k) => Some(0.0),
        Expr::Exp(c) => Some(c),
        Expr::Scale(k, inner) if close(k) => match *inner {
            Expr::Exp(c) => Some(c),
            _ => None,
        },
        _ => None,
    }
}

/// Least-squares `c` in `-ln λ = c t` through the origin, and the largest
/// deviation `|λ - e^{-c t}|`. `None` if `λ` is not positive on the grid.
fn fit_exponential(l: &E, grid: &TimeGrid<f64>) -> Option<(f64, f64)> {
    let mut num = 0.0;
    let mut den = 0.0;
    for t in grid.points() {
        let v = l.eval(t);
        if v <= 0.0 {
            return None;
        }
        if v > 1e-12 {
            num += t * -v.ln();
            den += t * t;
        }
    }
    let c = if den > 0.0 { num / den } else { 0.0 };
    let resid = grid
        .points()
        .map(|t| (l.eval(t) - (-c * t).exp()).abs())
        .fold(0.0, f64::max);
    Some((c, resid))
}

/// Spectral semigroup test: each `λ_α = e^{-c_α t}` with `c_α >= 0` and
/// `Σ c >= d · max c`.
pub fn is_semigroup(ch: &Gpc, grid: &TimeGrid<f64>) -> SemigroupVerdict {
    let spec = ch.spectrum();
    let mut rates = Vec::with_capacity(spec.lambdas.len());
    let mut residual = 0.0f64;
    for l in &spec.lambdas {
        if let Some(c) = single_exponential(l) {
            rates.push(c);
            continue;
        }
        match fit_exponential(l, grid) {
            Some((c, r)) => {
                residual = residual.max(r);
                rates.push(c);
            }
            None => {
                return SemigroupVerdict {
                    is_semigroup: false,
                    rates: None,
                    fit_residual: f64::INFINITY,
                    violated: Some(SemigroupViolation::ExpFit),
                }
            }
        }
    }
    let verdict = |violated: Option<SemigroupViolation>, rates: Vec<f64>| SemigroupVerdict {
        is_semigroup: violated.is_none(),
        rates: if violated == Some(SemigroupViolation::ExpFit) {
            None
        } else {
            Some(rates)
        },
        fit_residual: residual,
        violated,
    };
    if residual > FIT_TOL {
        return verdict(Some(SemigroupViolation::ExpFit), rates);
    }
    if rates.iter().any(|&c| c < -RATE_TOL) {
        return verdict(Some(SemigroupViolation::NegativeRate), rates);
    }
    if rate_inequality_gap(ch.dim(), &rates) < -RATE_TOL * rates.iter().sum::<f64>().abs().max(1.0)
    {
        return verdict(Some(SemigroupViolation::RateInequality), rates);
    }
    verdict(None, rates)
}

/// `Σ c - d · max c`.
fn rate_inequality_gap(d: usize, c: &[f64]) -> f64 {
    let sum: f64 = c.iter().sum();
    let max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    sum - d as f64 * max
}

fn check_rates(d: usize, c: &[f64]) -> Result<(), AnalysisError> {
    if c.len() != d + 1 {
        return Err(AnalysisError::RateCount {
            expected: d + 1,
            found: c.len(),
        });
    }
    if let Some((beta, &v)) = c
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v >= 0.0) || !v.is_finite())
    {
        return Err(AnalysisError::NegativeRate {
            beta: beta + 1,
            value: v,
        });
    }
    let gap = rate_inequality_gap(d, c);
    let sum: f64 = c.iter().sum();
    if gap < -RATE_TOL * sum.max(1.0) {
        let beta = c
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| {
                if v > bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            })
            .0;
        return Err(AnalysisError::RateInequalityViolated {
            beta: beta + 1,
            sum,
            bound: sum - gap,
        });
    }
    Ok(())
}

/// `p_β = (d-1)/d² (1 + d e^{-c_β t} - Σ_α e^{-c_α t})`.
pub fn semigroup_from_rates(mubs: Arc<Mubs<f64>>, c: &[f64]) -> Result<Gpc, AnalysisError> {
    let d = mubs.dim();
    check_rates(d, c)?;
    let k = (d - 1) as f64 / (d * d) as f64;
    let all: E = Expr::sum(c.iter().map(|&r| Expr::Exp(r)).collect());
    let weights = c
        .iter()
        .map(|&cb| {
            Expr::scale(
                k,
                Expr::one() + Expr::scale(d as f64, Expr::Exp(cb)) - all.clone(),
            )
            .normalize()
        })
        .collect();
    Ok(GeneralizedPauli::from_weights(mubs, weights)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct MixtureSemigroupReport {
    /// At least two distinct channels carry positive weight.
    pub nontrivial: bool,
    pub is_semigroup: bool,
    pub verdict: SemigroupVerdict,
}

/// Runs the semigroup test on a mixture of semigroups.
pub fn mixture_of_semigroups_is_semigroup(
    channels: &[&Gpc],
    weights: &[f64],
    grid: &TimeGrid<f64>,
) -> Result<MixtureSemigroupReport, AnalysisError> {
    for (i, ch) in channels.iter().enumerate() {
        if !is_semigroup(ch, grid).is_semigroup {
            return Err(AnalysisError::NotASemigroup(i));
        }
    }
    let mixture = mix_gpc(channels, weights)?;
    let active: Vec<Channel<f64>> = channels
        .iter()
        .zip(weights)
        .filter(|(_, &w)| w > 0.0)
        .map(|(c, _)| Channel::Gpc((*c).clone()))
        .collect();
    let distinct = |a: &Channel<f64>, b: &Channel<f64>| {
        !channel_equal(a, b, EqualityMode::Symbolic, grid)
            && !channel_equal(a, b, EqualityMode::Grid, grid)
    };
    let nontrivial =
        (0..active.len()).any(|i| (i + 1..active.len()).any(|j| distinct(&active[i], &active[j])));
    let verdict = is_semigroup(&mixture, grid);
    Ok(MixtureSemigroupReport {
        nontrivial,
        is_semigroup: verdict.is_semigroup,
        verdict,
    })
}

// ---------------------------------------------------------------- invertibility

#[derive(Debug, Clone, Serialize)]
pub struct InvertibilityReport {
    pub invertible: bool,
    pub first_zero: Option<f64>,
    /// Label of the eigenvalue vanishing first.
    pub zero_label: Option<String>,
    pub min_abs_eigenvalue: f64,
    pub min_t: f64,
    pub min_label: String,
}

fn bisect_root(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= 1e-13 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = 0.618_033_988_749_894_9;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo <= 1e-14 * (1.0 + hi.abs()) {
            break;
        }
        if f1 > f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Earliest zero of a function sampled on the grid: an exact zero, a sign
/// change (bisection), or an interior local minimum of `|f|` that refines
/// below [`ZERO_TOL`].
fn first_zero(f: &dyn Fn(f64) -> f64, real: bool, grid: &TimeGrid<f64>) -> Option<f64> {
    let ts: Vec<f64> = grid.points().collect();
    let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let abs = |t: f64| f(t).abs();
    for i in 0..ts.len() {
        if vs[i] == 0.0 {
            return Some(ts[i]);
        }
        if real && i + 1 < ts.len() && (vs[i] < 0.0) != (vs[i + 1] < 0.0) && vs[i + 1] != 0.0 {
            return Some(bisect_root(f, ts[i], ts[i + 1]));
        }
        if i > 0
            && i + 1 < ts.len()
            && vs[i].abs() <= vs[i - 1].abs()
            && vs[i].abs() <= vs[i + 1].abs()
        {
            let (tm, fm) = golden_min(&abs, ts[i - 1], ts[i + 1]);
            if fm <= ZERO_TOL {
                return Some(tm);
            }
        }
    }
    None
}

/// Zero search over every eigenvalue function of the channel.
pub fn invertibility(ch: &Channel<f64>, grid: &TimeGrid<f64>) -> InvertibilityReport {
    let mut fns: Vec<(String, Box<dyn Fn(f64) -> f64>, bool)> = Vec::new();
    match ch {
        Channel::Gpc(g) => {
            for (i, l) in g.spectrum().lambdas.into_iter().enumerate() {
                fns.push((format!("{}", i + 1), Box::new(move |t| l.eval(t)), true));
            }
        }
        Channel::Weyl(w) => {
            let spec = w.spectrum();
            let d = spec.d;
            for (idx, (re, im)) in spec.re.into_iter().zip(spec.im).enumerate() {
                let label = format!("{},{}", idx / d, idx % d);
                if im.normalize() == Expr::zero() {
                    fns.push((label, Box::new(move |t| re.eval(t)), true));
                } else {
                    fns.push((
                        label,
                        Box::new(move |t| re.eval(t).hypot(im.eval(t))),
                        false,
                    ));
                }
            }
        }
    }
    let mut min_abs = f64::INFINITY;
    let mut min_t = 0.0;
    let mut min_label = String::new();
    let mut zero: Option<(f64, String)> = None;
    for (label, f, real) in &fns {
        for t in grid.points() {
            let v = f(t).abs();
            if v < min_abs {
                min_abs = v;
                min_t = t;
                min_label = label.clone();
            }
        }
        if let Some(tz) = first_zero(f.as_ref(), *real, grid) {
            if zero.as_ref().is_none_or(|(z, _)| tz < *z) {
                zero = Some((tz, label.clone()));
            }
        }
    }
    if let Some((tz, label)) = &zero {
        let v = fns
            .iter()
            .find(|(l, _, _)| l == label)
            .map(|(_, f, _)| f(*tz).abs())
            .unwrap_or(0.0);
        if v < min_abs {
            min_abs = v;
            min_t = *tz;
            min_label = label.clone();
        }
    }
    InvertibilityReport {
        invertible: zero.is_none(),
        first_zero: zero.as_ref().map(|(t, _)| *t),
        zero_label: zero.map(|(_, l)| l),
        min_abs_eigenvalue: min_abs,
        min_t,
        min_label,
    }
}

// ---------------------------------------------------------------- rates

/// Pointwise decoherence rates; `gamma[α][i]` is `γ_{α+1}` at `times[i]`.
/// Values at pole times are `NaN`.
#[derive(Debug, Clone, Serialize)]
pub struct RateProfile {
    pub d: usize,
    pub times: Vec<f64>,
    pub gamma: Vec<Vec<f64>>,
    pub mu: Vec<Vec<f64>>,
    pub pole_times: Vec<f64>,
}

/// `μ_β = -λ̇_β / λ_β` and `γ_α = Σ_β μ_β / d - μ_α`.
pub fn decoherence_rates(ch: &Gpc, grid: &TimeGrid<f64>) -> RateProfile {
    let spec = ch.spectrum();
    let d = spec.d;
    let derivs: Vec<E> = spec.lambdas.iter().map(|l| l.differentiate()).collect();
    let n = spec.lambdas.len();
    let times: Vec<f64> = grid.points().collect();
    let mut mu = vec![Vec::with_capacity(times.len()); n];
    let mut gamma = vec![Vec::with_capacity(times.len()); n];
    let mut pole_times = Vec::new();
    for &t in &times {
        let lam: Vec<f64> = spec.lambdas.iter().map(|l| l.eval(t)).collect();
        if lam.iter().any(|v| v.abs() < POLE_TOL) {
            pole_times.push(t);
            for a in 0..n {
                mu[a].push(f64::NAN);
                gamma[a].push(f64::NAN);
            }
            continue;
        }
        let m: Vec<f64> = lam
            .iter()
            .zip(&derivs)
            .map(|(l, dl)| -dl.eval(t) / l)
            .collect();
        let total: f64 = m.iter().sum::<f64>() / d as f64;
        for a in 0..n {
            mu[a].push(m[a]);
            gamma[a].push(total - m[a]);
        }
    }
    RateProfile {
        d,
        times,
        gamma,
        mu,
        pole_times,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PDivisibilityReport {
    /// Per `β`: `Σ_{α≠β} γ_α(t) >= 0` at every non-pole grid time.
    pub per_beta: Vec<bool>,
    pub overall: bool,
    /// First `(β, t)` with a negative sum.
    pub first_violation: Option<(usize, f64)>,
}

pub fn pdivisibility_rate_check(profile: &RateProfile) -> PDivisibilityReport {
    let n = profile.gamma.len();
    let mut per_beta = vec![true; n];
    let mut first: Option<(usize, f64)> = None;
    for (i, &t) in profile.times.iter().enumerate() {
        let g: Vec<f64> = profile.gamma.iter().map(|row| row[i]).collect();
        if g.iter().any(|v| v.is_nan()) {
            continue;
        }
        let total: f64 = g.iter().sum();
        for beta in 0..n {
            if total - g[beta] < -SIGN_TOL {
                if per_beta[beta] && first.is_none_or(|(_, ft)| t < ft) {
                    first = Some((beta + 1, t));
                }
                per_beta[beta] = false;
            }
        }
    }
    PDivisibilityReport {
        overall: per_beta.iter().all(|b| *b),
        per_beta,
        first_violation: first,
    }
}

/// Number of `α` with `γ_α(t) < 0` at every grid time `t > 0`.
pub fn permanently_negative_count(profile: &RateProfile) -> usize {
    profile
        .gamma
        .iter()
        .filter(|row| {
            let mut seen = false;
            for (g, t) in row.iter().zip(&profile.times) {
                if *t <= 0.0 || g.is_nan() {
                    continue;
                }
                seen = true;
                if *g >= -SIGN_TOL {
                    return false;
                }
            }
            seen
        })
        .count()
}

// ---------------------------------------------------------------- splitting

#[derive(Debug, Clone)]
pub struct InvertibleSplit {
    /// `½, ¼, …, ½^{n-1}, ½^{n-1}`.
    pub weights: Vec<f64>,
    pub channels: Vec<Gpc>,
    /// Index of the component that is itself a semigroup (the last one).
    pub semigroup_index: usize,
    /// Its common rate, `2^{n-1}`.
    pub semigroup_rate: f64,
    /// The all-rates-one semigroup being split.
    pub base: Gpc,
}

/// Splits the semigroup with all rates 1 into `n` invertible channels by
/// repeatedly halving its semigroup part.
pub fn split_semigroup_invertible(
    mubs: Arc<Mubs<f64>>,
    n: usize,
) -> Result<InvertibleSplit, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::TooFewComponents(n));
    }
    let d = mubs.dim();
    let base = semigroup_from_rates(mubs.clone(), &vec![1.0; d + 1])?;
    let k = (d - 1) as f64 / (d * d) as f64;
    let mut weights = Vec::with_capacity(n);
    let mut channels = Vec::with_capacity(n);
    let mut w = 1.0;
    let mut rate = 1.0;
    for level in 1..n {
        let cur = Expr::scale(k, Expr::one() - Expr::Exp(rate));
        let a = (cur.clone() * (Expr::one() - Expr::Exp(rate))).normalize();
        w *= 0.5;
        weights.push(w);
        channels.push(GeneralizedPauli::from_weights(
            mubs.clone(),
            vec![a; d + 1],
        )?);
        rate *= 2.0;
        if level == n - 1 {
            let b = (cur * (Expr::one() + Expr::Exp(rate / 2.0))).normalize();
            weights.push(w);
            channels.push(GeneralizedPauli::from_weights(
                mubs.clone(),
                vec![b; d + 1],
            )?);
        }
    }
    Ok(InvertibleSplit {
        weights,
        semigroup_index: n - 1,
        semigroup_rate: rate,
        channels,
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::mub::mub_family;

    fn mubs(d: usize) -> Arc<Mubs<f64>> {
        Arc::new(mub_family(d).unwrap())
    }

    #[test]
    fn qubit_semigroup_membership() {
        let ch = semigroup_from_rates(mubs(2), &[1.0, 1.0, 1.0]).unwrap();
        let m = in_dephasing_set(&ch);
        assert!(m.member);
        assert!((m.sup_sum - 0.75).abs() < 1e-15);
        let dec = decompose_dephasing(&ch).unwrap();
        for w in &dec.weights {
            assert!((w - 0.25).abs() < 1e-15);
        }
        let want = parse_expr::<f64>("1-exp(-1*t)").unwrap();
        for pi in &dec.pi {
            assert!(pi.as_ref().unwrap().symbolically_equal(&want, 1e-12));
        }
    }

    #[test]
    fn rate_inequality_rejected() {
        let err = semigroup_from_rates(mubs(2), &[3.0, 0.1, 0.1]).unwrap_err();
        assert!(matches!(
            err,
            AnalysisError::RateInequalityViolated { beta: 1, .. }
        ));
        assert!(matches!(
            semigroup_from_rates(mubs(2), &[-1.0, 0.1, 0.1]),
            Err(AnalysisError::NegativeRate { beta: 1, .. })
        ));
    }

    #[test]
    fn semigroup_round_trip_and_rate_violation() {
        let grid = TimeGrid::default();
        let ch = semigroup_from_rates(mubs(3), &[0.2, 1.0, 1.0, 1.0]).unwrap();
        let v = is_semigroup(&ch, &grid);
        assert!(v.is_semigroup);
        let r = v.rates.unwrap();
        assert!((r[0] - 0.2).abs() < 1e-12 && (r[3] - 1.0).abs() < 1e-12);

        // spectra e^{-3t}, e^{-0.1t}, e^{-0.1t} for d = 2
        let w = vec![
            parse_expr("0.25*(1+2*exp(-3*t)-exp(-3*t)-2*exp(-0.1*t))").unwrap(),
            parse_expr("0.25*(1+2*exp(-0.1*t)-exp(-3*t)-2*exp(-0.1*t))").unwrap(),
            parse_expr("0.25*(1+2*exp(-0.1*t)-exp(-3*t)-2*exp(-0.1*t))").unwrap(),
        ];
        let bad = GeneralizedPauli::from_weights(mubs(2), w).unwrap();
        let v = is_semigroup(&bad, &grid);
        assert_eq!(v.violated, Some(SemigroupViolation::RateInequality));
    }

    #[test]
    fn mixture_of_two_semigroups_is_not_one() {
        let grid = TimeGrid::default();
        let a = semigroup_from_rates(mubs(2), &[1.0, 1.0, 1.0]).unwrap();
        let b = semigroup_from_rates(a.mubs().clone(), &[2.0, 2.0, 2.0]).unwrap();
        let r = mixture_of_semigroups_is_semigroup(&[&a, &b], &[0.5, 0.5], &grid).unwrap();
        assert!(r.nontrivial && !r.is_semigroup);
        let r = mixture_of_semigroups_is_semigroup(&[&a, &a], &[0.5, 0.5], &grid).unwrap();
        assert!(!r.nontrivial && r.is_semigroup);
    }

    #[test]
    fn semigroup_rates_are_constant() {
        let c = [0.5, 1.0, 1.5];
        let ch = semigroup_from_rates(mubs(2), &c).unwrap();
        let prof = decoherence_rates(&ch, &TimeGrid::new(5.0, 51).unwrap());
        let s: f64 = c.iter().sum();
        for (a, row) in prof.gamma.iter().enumerate() {
            for g in row {
                assert!((g - (s / 2.0 - c[a])).abs() < 1e-12);
            }
        }
        assert!(pdivisibility_rate_check(&prof).overall);
        assert_eq!(permanently_negative_count(&prof), 0);
    }

    #[test]
    fn eternal_style_mixture_has_one_negative_rate() {
        let grid = TimeGrid::default();
        let a = semigroup_from_rates(mubs(2), &[1.0, 1.0, 0.0]).unwrap();
        let b = semigroup_from_rates(a.mubs().clone(), &[1.0, 0.0, 1.0]).unwrap();
        let m = mix_gpc(&[&a, &b], &[0.5, 0.5]).unwrap();
        let prof = decoherence_rates(&m, &grid);
        assert_eq!(permanently_negative_count(&prof), 1);
        assert!(pdivisibility_rate_check(&prof).overall);
    }

    #[test]
    fn split_into_two() {
        let s = split_semigroup_invertible(mubs(3), 2).unwrap();
        assert_eq!(s.weights, vec![0.5, 0.5]);
        let l1 = &s.channels[0].spectrum().lambdas[0];
        let want = parse_expr::<f64>("1-(1-exp(-1*t))*(1-exp(-1*t))").unwrap();
        assert!(l1.symbolically_equal(&want, 1e-12));
        let l2 = &s.channels[1].spectrum().lambdas[2];
        assert!(l2.symbolically_equal(&Expr::Exp(2.0), 1e-12));
        assert_eq!(s.semigroup_rate, 2.0);
    }

    #[test]
    fn decaying_eigenvalue_is_not_a_zero() {
        let ch = semigroup_from_rates(mubs(2), &[3.0, 3.0, 3.0]).unwrap();
        let r = invertibility(&Channel::Gpc(ch), &TimeGrid::default());
        assert!(r.invertible);
        assert!(r.min_abs_eigenvalue < 1e-20);
    }
}
