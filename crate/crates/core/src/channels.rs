//! Generalized Pauli channels and Weyl channels.
//!
//! A generalized Pauli channel on `C^d` is
//!
//! ```text
//! Λ_t(ρ) = p_0(t) ρ + 1/(d-1) Σ_α p_α(t) Σ_{k=1}^{d-1} U_α^k ρ U_α^k†
//! ```
//!
//! with `α = 1..=d+1` running over the unitaries of a MUB family, and a Weyl
//! channel is `Σ_ij p_ij(t) U_ij ρ U_ij†` over the Weyl operators. In both
//! cases the probabilities are [`Expr`] values.

use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::expr::Expr;
use crate::grid::TimeGrid;
use crate::mub::{root_of_unity, Mubs, WeylOps};
use crate::qlinalg::{choi, conjugation_sum, min_eigenvalue, CMat, SuperOperator, PSD_TOL};
use crate::scalar::Real;

/// Tolerance on `p_0(0) = 1` (hard) and on `p_α(0) = 0` (warning).
pub const START_TOL: f64 = 1e-12;
/// Tolerance on `Σ p = 1` over the grid.
pub const SUM_TOL: f64 = 1e-9;
/// Tolerance of both Fujiwara-Algoet inequalities.
pub const FA_TOL: f64 = 1e-9;
/// Equality tolerance for grid and superoperator comparisons.
pub const EQUAL_TOL: f64 = 1e-9;
/// Relative tolerance for symbolic comparisons.
pub const SYMBOLIC_TOL: f64 = 1e-12;
const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("expected {expected} probability functions, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("identity weight at t = 0 is {0}, must be 1")]
    NotIdentityAtZero(f64),
    #[error("invalid state: {0}")]
    BadState(String),
    #[error("time {0} is outside [0, inf)")]
    BadTime(f64),
    #[error("invalid weights: {0}")]
    WeightError(String),
    #[error("channels cannot be mixed: {0}")]
    FamilyMismatch(String),
    #[error("dephasing function out of range at t = {t}: {value}")]
    RangeError { t: f64, value: f64 },
    #[error("basis index {alpha} outside 1..={max}")]
    BadIndex { alpha: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValidationWarning {
    SumNotOne { t: f64, sum: f64 },
    Negative { index: usize, t: f64, value: f64 },
    NonzeroAtStart { index: usize, value: f64 },
}

/// Generalized Pauli channel; `p[0]` is the identity weight and `p[α]` the
/// weight of basis `α` (1-based, matching `mubs.unitary(α - 1)`).
#[derive(Debug, Clone)]
pub struct GeneralizedPauli<T> {
    mubs: Arc<Mubs<T>>,
    p: Vec<Expr<T>>,
}

/// Weyl channel; `p[k * d + l]` multiplies `U_kl`.
#[derive(Debug, Clone)]
pub struct Weyl<T> {
    ops: Arc<WeylOps<T>>,
    p: Vec<Expr<T>>,
}

#[derive(Debug, Clone)]
pub enum Channel<T> {
    Gpc(GeneralizedPauli<T>),
    Weyl(Weyl<T>),
}

/// Eigenvalue functions `λ_α`, `α = 1..=d+1`, each with multiplicity `d - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GpcSpectrum<T> {
    pub d: usize,
    pub lambdas: Vec<Expr<T>>,
}

/// Complex eigenvalue functions `λ_kl = re + i·im`, stored at `k * d + l`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylSpectrum<T> {
    pub d: usize,
    pub re: Vec<Expr<T>>,
    pub im: Vec<Expr<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CpBound {
    /// `Σλ >= -1/(d-1)`.
    Lower,
    /// `Σλ <= 1 + d·min λ`.
    Upper,
    /// Negative Choi eigenvalue.
    Choi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CpVerdict<T> {
    Cp,
    NotCp { t: T, bound: CpBound, violation: T },
}

impl<T> CpVerdict<T> {
    pub fn is_cp(&self) -> bool {
        matches!(self, CpVerdict::Cp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityMode {
    Symbolic,
    Grid,
    Superop,
}

fn check_time<T: Real>(t: T) -> Result<(), ChannelError> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::BadTime(t.as_f64()))
    }
}

fn check_state<T: Real>(rho: &CMat<T>, d: usize) -> Result<(), ChannelError> {
    if rho.shape() != (d, d) {
        return Err(ChannelError::BadState(format!(
            "shape {:?}, expected ({d}, {d})",
            rho.shape()
        )));
    }
    let defect = rho.hermiticity_defect();
    if !(defect <= T::tol(crate::qlinalg::HERMITIAN_TOL)) {
        return Err(ChannelError::BadState(format!(
            "not Hermitian (defect {:e})",
            defect.as_f64()
        )));
    }
    let tr = rho.trace();
    if !((tr.re - T::one()).abs() <= T::tol(STATE_TOL)) {
        return Err(ChannelError::BadState(format!(
            "trace {} != 1",
            tr.re.as_f64()
        )));
    }
    Ok(())
}

fn validate_p<T: Real>(
    p: &[Expr<T>],
    identity: usize,
    grid: &TimeGrid<T>,
) -> Vec<ValidationWarning> {
    let mut out = Vec::new();
    for (i, pi) in p.iter().enumerate() {
        let v = pi.eval(T::zero());
        if i != identity && !(v.abs() <= T::tol(START_TOL)) {
            out.push(ValidationWarning::NonzeroAtStart {
                index: i,
                value: v.as_f64(),
            });
        }
    }
    let mut sum_reported = false;
    let mut neg_reported = vec![false; p.len()];
    for t in grid.points() {
        let vals: Vec<T> = p.iter().map(|e| e.eval(t)).collect();
        let s = vals.iter().fold(T::zero(), |a, b| a + *b);
        if !sum_reported && !((s - T::one()).abs() <= T::tol(SUM_TOL)) {
            out.push(ValidationWarning::SumNotOne {
                t: t.as_f64(),
                sum: s.as_f64(),
            });
            sum_reported = true;
        }
        for (i, v) in vals.iter().enumerate() {
            if !neg_reported[i] && !(*v >= -T::tol(START_TOL)) {
                out.push(ValidationWarning::Negative {
                    index: i,
                    t: t.as_f64(),
                    value: v.as_f64(),
                });
                neg_reported[i] = true;
            }
        }
    }
    out
}

fn check_identity_at_zero<T: Real>(p0: &Expr<T>) -> Result<(), ChannelError> {
    let v = p0.eval(T::zero());
    if (v - T::one()).abs() <= T::tol(START_TOL) {
        Ok(())
    } else {
        Err(ChannelError::NotIdentityAtZero(v.as_f64()))
    }
}

fn conjugate<T: Real>(u: &CMat<T>, rho: &CMat<T>) -> CMat<T> {
    u.matmul(rho).matmul(&u.adjoint())
}

impl<T: Real> GeneralizedPauli<T> {
    /// `p` holds `p_0 … p_{d+1}`. Only `p_0(0) = 1` is enforced; use
    /// [`validate`](Self::validate) for the remaining probability checks.
    pub fn new(mubs: Arc<Mubs<T>>, p: Vec<Expr<T>>) -> Result<Self, ChannelError> {
        let expected = mubs.dim() + 2;
        if p.len() != expected {
            return Err(ChannelError::WrongLength {
                expected,
                found: p.len(),
            });
        }
        check_identity_at_zero(&p[0])?;
        Ok(GeneralizedPauli { mubs, p })
    }

    /// Builds `p_0 = 1 - Σ_α p_α` from the `d + 1` basis weights.
    pub fn from_weights(mubs: Arc<Mubs<T>>, weights: Vec<Expr<T>>) -> Result<Self, ChannelError> {
        let expected = mubs.dim() + 1;
        if weights.len() != expected {
            return Err(ChannelError::WrongLength {
                expected,
                found: weights.len(),
            });
        }
        let rest = Expr::sum(weights.to_vec());
        let p0 = (Expr::one() - rest).normalize();
        let mut p = Vec::with_capacity(expected + 1);
        p.push(p0);
        p.extend(weights);
        GeneralizedPauli::new(mubs, p)
    }

    pub fn identity(mubs: Arc<Mubs<T>>) -> Self {
        let d = mubs.dim();
        let mut p = vec![Expr::zero(); d + 2];
        p[0] = Expr::one();
        GeneralizedPauli { mubs, p }
    }

    pub fn dim(&self) -> usize {
        self.mubs.dim()
    }

    pub fn mubs(&self) -> &Arc<Mubs<T>> {
        &self.mubs
    }

    pub fn p(&self) -> &[Expr<T>] {
        &self.p
    }

    pub fn p_at(&self, t: T) -> Vec<T> {
        self.p.iter().map(|e| e.eval(t)).collect()
    }

    pub fn validate(&self, grid: &TimeGrid<T>) -> Vec<ValidationWarning> {
        validate_p(&self.p, 0, grid)
    }

    pub fn apply(&self, t: T, rho: &CMat<T>) -> Result<CMat<T>, ChannelError> {
        check_time(t)?;
        let d = self.dim();
        check_state(rho, d)?;
        let p = self.p_at(t);
        let mut out = rho.scale_real(p[0]);
        let norm = T::one() / T::lit((d - 1) as f64);
        for alpha in 1..=d + 1 {
            let w = p[alpha] * norm;
            if w == T::zero() {
                continue;
            }
            for k in 1..d {
                out = &out + &conjugate(self.mubs.power(alpha - 1, k), rho).scale_real(w);
            }
        }
        Ok(out)
    }

    /// `λ_α = 1 - d/(d-1) (Σ_β p_β - p_α)`.
    pub fn spectrum(&self) -> GpcSpectrum<T> {
        let d = self.dim();
        let k = T::lit(d as f64) / T::lit((d - 1) as f64);
        let total = Expr::sum(self.p[1..].to_vec());
        let lambdas = (1..=d + 1)
            .map(|alpha| {
                (Expr::one() - Expr::scale(k, total.clone() - self.p[alpha].clone())).normalize()
            })
            .collect();
        GpcSpectrum { d, lambdas }
    }

    /// Superoperator at `t`; probabilities of either sign are represented.
    pub fn superop_at(&self, t: T) -> SuperOperator<T> {
        let d = self.dim();
        let p = self.p_at(t);
        let norm = T::one() / T::lit((d - 1) as f64);
        let mut terms = vec![(p[0], CMat::identity(d))];
        for alpha in 1..=d + 1 {
            for k in 1..d {
                terms.push((p[alpha] * norm, self.mubs.power(alpha - 1, k).clone()));
            }
        }
        conjugation_sum(&terms).expect("square Kraus operators of equal size")
    }

    /// Eigenvalues of the Choi matrix in closed form: `d p_0` once and
    /// `d p_α / (d-1)` with multiplicity `d - 1`.
    pub fn choi_eigenvalues_at(&self, t: T) -> Vec<T> {
        let d = T::lit(self.dim() as f64);
        let p = self.p_at(t);
        let mut out = vec![d * p[0]];
        out.extend(p[1..].iter().map(|x| d * *x / (d - T::one())));
        out
    }
}

impl<T: Real> Weyl<T> {
    pub fn new(ops: Arc<WeylOps<T>>, p: Vec<Expr<T>>) -> Result<Self, ChannelError> {
        let expected = ops.dim() * ops.dim();
        if p.len() != expected {
            return Err(ChannelError::WrongLength {
                expected,
                found: p.len(),
            });
        }
        check_identity_at_zero(&p[0])?;
        Ok(Weyl { ops, p })
    }

    pub fn dim(&self) -> usize {
        self.ops.dim()
    }

    pub fn ops(&self) -> &Arc<WeylOps<T>> {
        &self.ops
    }

    pub fn p(&self) -> &[Expr<T>] {
        &self.p
    }

    pub fn p_ij(&self, i: usize, j: usize) -> &Expr<T> {
        &self.p[i * self.dim() + j]
    }

    pub fn p_at(&self, t: T) -> Vec<T> {
        self.p.iter().map(|e| e.eval(t)).collect()
    }

    pub fn validate(&self, grid: &TimeGrid<T>) -> Vec<ValidationWarning> {
        validate_p(&self.p, 0, grid)
    }

    pub fn apply(&self, t: T, rho: &CMat<T>) -> Result<CMat<T>, ChannelError> {
        check_time(t)?;
        check_state(rho, self.dim())?;
        let p = self.p_at(t);
        let mut out = CMat::zeros(self.dim(), self.dim());
        for (w, u) in p.iter().zip(self.ops.all()) {
            if *w != T::zero() {
                out = &out + &conjugate(u, rho).scale_real(*w);
            }
        }
        Ok(out)
    }

    /// `λ_kl = Σ_ij ω^{jk - il} p_ij`.
    pub fn spectrum(&self) -> WeylSpectrum<T> {
        let d = self.dim();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        for k in 0..d {
            for l in 0..d {
                let mut r = Vec::new();
                let mut m = Vec::new();
                for i in 0..d {
                    for j in 0..d {
                        let w: Complex<T> = root_of_unity(d, (j * k) as i64 - (i * l) as i64);
                        let pij = self.p[i * d + j].clone();
                        r.push(Expr::scale(w.re, pij.clone()));
                        m.push(Expr::scale(w.im, pij));
                    }
                }
                re.push(Expr::sum(r).normalize());
                im.push(Expr::sum(m).normalize());
            }
        }
        WeylSpectrum { d, re, im }
    }

    pub fn superop_at(&self, t: T) -> SuperOperator<T> {
        let terms: Vec<(T, CMat<T>)> = self
            .p_at(t)
            .into_iter()
            .zip(self.ops.all().iter().cloned())
            .collect();
        conjugation_sum(&terms).expect("square Kraus operators of equal size")
    }
}

impl<T: Real> GpcSpectrum<T> {
    pub fn at(&self, t: T) -> Vec<T> {
        self.lambdas.iter().map(|e| e.eval(t)).collect()
    }

    pub fn multiplicity(&self) -> usize {
        self.d - 1
    }
}

impl<T: Real> WeylSpectrum<T> {
    pub fn at(&self, t: T) -> Vec<Complex<T>> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| Complex::new(r.eval(t), i.eval(t)))
            .collect()
    }

    pub fn get(&self, k: usize, l: usize) -> (&Expr<T>, &Expr<T>) {
        (&self.re[k * self.d + l], &self.im[k * self.d + l])
    }
}

impl<T: Real> Channel<T> {
    pub fn dim(&self) -> usize {
        match self {
            Channel::Gpc(c) => c.dim(),
            Channel::Weyl(c) => c.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Channel::Gpc(_) => "gpc",
            Channel::Weyl(_) => "weyl",
        }
    }

    pub fn p(&self) -> &[Expr<T>] {
        match self {
            Channel::Gpc(c) => c.p(),
            Channel::Weyl(c) => c.p(),
        }
    }

    pub fn apply(&self, t: T, rho: &CMat<T>) -> Result<CMat<T>, ChannelError> {
        match self {
            Channel::Gpc(c) => c.apply(t, rho),
            Channel::Weyl(c) => c.apply(t, rho),
        }
    }

    pub fn superop_at(&self, t: T) -> SuperOperator<T> {
        match self {
            Channel::Gpc(c) => c.superop_at(t),
            Channel::Weyl(c) => c.superop_at(t),
        }
    }

    pub fn validate(&self, grid: &TimeGrid<T>) -> Vec<ValidationWarning> {
        match self {
            Channel::Gpc(c) => c.validate(grid),
            Channel::Weyl(c) => c.validate(grid),
        }
    }
}

impl<T> From<GeneralizedPauli<T>> for Channel<T> {
    fn from(c: GeneralizedPauli<T>) -> Self {
        Channel::Gpc(c)
    }
}

impl<T> From<Weyl<T>> for Channel<T> {
    fn from(c: Weyl<T>) -> Self {
        Channel::Weyl(c)
    }
}

/// Fujiwara-Algoet test `-1/(d-1) <= Σλ <= 1 + d·min λ` over the grid.
pub fn fa_cp_check<T: Real>(spectrum: &GpcSpectrum<T>, grid: &TimeGrid<T>) -> CpVerdict<T> {
    fa_cp_at(spectrum, grid.points())
}

pub fn fa_cp_at<T: Real>(
    spectrum: &GpcSpectrum<T>,
    times: impl IntoIterator<Item = T>,
) -> CpVerdict<T> {
    let d = T::lit(spectrum.d as f64);
    let tol = T::tol(FA_TOL);
    for t in times {
        let l = spectrum.at(t);
        let sum = l.iter().fold(T::zero(), |a, b| a + *b);
        let min = l.iter().fold(T::infinity(), |a, b| a.min(*b));
        let lower = sum + T::one() / (d - T::one());
        if lower < -tol {
            return CpVerdict::NotCp {
                t,
                bound: CpBound::Lower,
                violation: -lower,
            };
        }
        let upper = T::one() + d * min - sum;
        if upper < -tol {
            return CpVerdict::NotCp {
                t,
                bound: CpBound::Upper,
                violation: -upper,
            };
        }
    }
    CpVerdict::Cp
}

/// Positivity of the numerically built Choi matrix at each grid time.
pub fn choi_cp_oracle<T: Real>(channel: &Channel<T>, grid: &TimeGrid<T>) -> CpVerdict<T> {
    choi_cp_at(channel, grid.points())
}

pub fn choi_cp_at<T: Real>(
    channel: &Channel<T>,
    times: impl IntoIterator<Item = T>,
) -> CpVerdict<T> {
    let tol = T::tol(PSD_TOL);
    for t in times {
        let c = choi(&channel.superop_at(t));
        let min = min_eigenvalue(&c).expect("Choi matrix of a Hermiticity-preserving map");
        if min < -tol {
            return CpVerdict::NotCp {
                t,
                bound: CpBound::Choi,
                violation: -min,
            };
        }
    }
    CpVerdict::Cp
}

fn check_weights<T: Real>(n: usize, weights: &[T]) -> Result<(), ChannelError> {
    if n == 0 {
        return Err(ChannelError::WeightError("no channels".into()));
    }
    if weights.len() != n {
        return Err(ChannelError::WeightError(format!(
            "{} weights for {n} channels",
            weights.len()
        )));
    }
    let tol = T::tol(START_TOL);
    if let Some(w) = weights.iter().find(|w| !(**w >= -tol)) {
        return Err(ChannelError::WeightError(format!(
            "negative weight {}",
            w.as_f64()
        )));
    }
    let s = weights.iter().fold(T::zero(), |a, b| a + *b);
    if !((s - T::one()).abs() <= tol) {
        return Err(ChannelError::WeightError(format!(
            "weights sum to {}",
            s.as_f64()
        )));
    }
    Ok(())
}

fn mix_p<T: Real>(ps: &[&[Expr<T>]], weights: &[T]) -> Vec<Expr<T>> {
    (0..ps[0].len())
        .map(|i| {
            Expr::sum(
                ps.iter()
                    .zip(weights)
                    .map(|(p, w)| Expr::scale(*w, p[i].clone()))
                    .collect(),
            )
            .normalize()
        })
        .collect()
}

pub fn mix_gpc<T: Real>(
    channels: &[&GeneralizedPauli<T>],
    weights: &[T],
) -> Result<GeneralizedPauli<T>, ChannelError> {
    check_weights(channels.len(), weights)?;
    let first = channels[0];
    for c in &channels[1..] {
        if c.dim() != first.dim() {
            return Err(ChannelError::FamilyMismatch(format!(
                "dimensions {} and {}",
                first.dim(),
                c.dim()
            )));
        }
        if !Arc::ptr_eq(&c.mubs, &first.mubs) && !c.mubs.approx_eq(&first.mubs, T::tol(START_TOL)) {
            return Err(ChannelError::FamilyMismatch(
                "different MUB families".into(),
            ));
        }
    }
    let ps: Vec<&[Expr<T>]> = channels.iter().map(|c| c.p()).collect();
    GeneralizedPauli::new(first.mubs.clone(), mix_p(&ps, weights))
}

pub fn mix_weyl<T: Real>(channels: &[&Weyl<T>], weights: &[T]) -> Result<Weyl<T>, ChannelError> {
    check_weights(channels.len(), weights)?;
    let first = channels[0];
    if let Some(c) = channels.iter().find(|c| c.dim() != first.dim()) {
        return Err(ChannelError::FamilyMismatch(format!(
            "dimensions {} and {}",
            first.dim(),
            c.dim()
        )));
    }
    let ps: Vec<&[Expr<T>]> = channels.iter().map(|c| c.p()).collect();
    Weyl::new(first.ops.clone(), mix_p(&ps, weights))
}

/// Mix channels of one kind.
pub fn mix<T: Real>(channels: &[Channel<T>], weights: &[T]) -> Result<Channel<T>, ChannelError> {
    let gpcs: Option<Vec<&GeneralizedPauli<T>>> = channels
        .iter()
        .map(|c| match c {
            Channel::Gpc(g) => Some(g),
            Channel::Weyl(_) => None,
        })
        .collect();
    if let Some(g) = gpcs {
        return mix_gpc(&g, weights).map(Channel::Gpc);
    }
    let weyls: Option<Vec<&Weyl<T>>> = channels
        .iter()
        .map(|c| match c {
            Channel::Weyl(w) => Some(w),
            Channel::Gpc(_) => None,
        })
        .collect();
    match weyls {
        Some(w) => mix_weyl(&w, weights).map(Channel::Weyl),
        None => Err(ChannelError::FamilyMismatch(
            "cannot mix generalized Pauli and Weyl channels".into(),
        )),
    }
}

/// Channel equality, which for both families is equality of the probability
/// functions.
pub fn channel_equal<T: Real>(
    a: &Channel<T>,
    b: &Channel<T>,
    mode: EqualityMode,
    grid: &TimeGrid<T>,
) -> bool {
    if a.kind() != b.kind() || a.dim() != b.dim() || a.p().len() != b.p().len() {
        return false;
    }
    match mode {
        EqualityMode::Symbolic => {
            let tol = T::tol(SYMBOLIC_TOL);
            a.p()
                .iter()
                .zip(b.p())
                .all(|(x, y)| x.symbolically_equal(y, tol))
        }
        EqualityMode::Grid => {
            let tol = T::tol(EQUAL_TOL);
            grid.points().all(|t| {
                a.p()
                    .iter()
                    .zip(b.p())
                    .all(|(x, y)| (x.eval(t) - y.eval(t)).abs() <= tol)
            })
        }
        EqualityMode::Superop => {
            let tol = T::tol(EQUAL_TOL);
            grid.sample(50)
                .into_iter()
                .all(|t| a.superop_at(t).max_abs_diff(&b.superop_at(t)) <= tol)
        }
    }
}

/// The dephasing channel `p = (1 - π, 0, …, π at α, …, 0)`, `α` 1-based.
pub fn dephasing_channel<T: Real>(
    mubs: Arc<Mubs<T>>,
    alpha: usize,
    pi: Expr<T>,
    grid: &TimeGrid<T>,
) -> Result<GeneralizedPauli<T>, ChannelError> {
    let d = mubs.dim();
    if alpha == 0 || alpha > d + 1 {
        return Err(ChannelError::BadIndex { alpha, max: d + 1 });
    }
    let start = pi.eval(T::zero());
    if !(start.abs() <= T::tol(START_TOL)) {
        return Err(ChannelError::RangeError {
            t: 0.0,
            value: start.as_f64(),
        });
    }
    let tol = T::tol(SUM_TOL);
    for t in grid.points() {
        let v = pi.eval(t);
        if !(v >= -tol && v <= T::one() + tol) {
            return Err(ChannelError::RangeError {
                t: t.as_f64(),
                value: v.as_f64(),
            });
        }
    }
    let mut p = vec![Expr::zero(); d + 2];
    p[0] = (Expr::one() - pi.clone()).normalize();
    p[alpha] = pi;
    GeneralizedPauli::new(mubs, p)
}
