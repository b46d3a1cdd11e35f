//! Seeded random channel families for property runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use gpauli::analysis::semigroup_from_rates;
use gpauli::channels::{dephasing_channel, mix_gpc, GeneralizedPauli, Weyl};
use gpauli::mub::{mub_family, weyl_set};
use gpauli::{Expr, GpcChannel, Grid, MubFamily, TimeExpr, WeylChannel};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Corpus {
    rng: ChaCha8Rng,
    mubs: BTreeMap<usize, Arc<MubFamily>>,
    grid: Grid,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
            mubs: BTreeMap::new(),
            grid: Grid::default(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn mubs(&mut self, d: usize) -> Arc<MubFamily> {
        self.mubs
            .entry(d)
            .or_insert_with(|| Arc::new(mub_family(d).expect("prime dimension")))
            .clone()
    }

    pub fn pick<T: Copy>(&mut self, xs: &[T]) -> T {
        *xs.choose(&mut self.rng).expect("nonempty choice")
    }

    /// Rates with `c >= 0` and `Σc >= d · max c`.
    pub fn valid_rates(&mut self, d: usize) -> Vec<f64> {
        let spread = 1.5 / (d + 1) as f64;
        loop {
            let base = self.rng.gen_range(0.2..2.0);
            let c: Vec<f64> = (0..=d)
                .map(|_| base * (1.0 + self.rng.gen_range(-spread..spread)))
                .collect();
            let sum: f64 = c.iter().sum();
            let max = c.iter().copied().fold(0.0, f64::max);
            if sum >= d as f64 * max {
                return c;
            }
        }
    }

    /// Nonnegative rates with `Σc < d · max c`.
    pub fn violating_rates(&mut self, d: usize) -> Vec<f64> {
        let mut c: Vec<f64> = (0..d).map(|_| self.rng.gen_range(0.0..1.0)).collect();
        let rest: f64 = c.iter().sum();
        let top = rest / (d - 1) as f64 + self.rng.gen_range(0.05..1.5);
        let at = self.rng.gen_range(0..=d);
        c.insert(at, top);
        c
    }

    pub fn semigroup(&mut self, d: usize) -> GpcChannel {
        let c = self.valid_rates(d);
        semigroup_from_rates(self.mubs(d), &c).expect("valid rates")
    }

    /// Positive weights summing to one, none below `0.05`.
    pub fn weights(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| self.rng.gen_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let tail: f64 = w[1..].iter().sum();
        w[0] = 1.0 - tail;
        w
    }

    /// A semigroup, or a dephasing channel whose eigenvalues stay positive.
    pub fn invertible_gpc(&mut self, d: usize) -> GpcChannel {
        if self.rng.gen_bool(0.5) {
            return self.semigroup(d);
        }
        let alpha = self.rng.gen_range(1..=d + 1);
        let amp = self.rng.gen_range(0.05..0.95) * (d - 1) as f64 / d as f64;
        let rate = self.rng.gen_range(0.2..3.0);
        let pi = Expr::scale(amp, Expr::one() - Expr::Exp(rate));
        dephasing_channel(self.mubs(d), alpha, pi, &self.grid).expect("amplitude below one")
    }

    /// Generalized Pauli channel with weights `a(1 - e^{-c t}) + b t e^{-c t}`;
    /// some draws are not completely positive.
    pub fn arbitrary_gpc(&mut self, d: usize) -> GpcChannel {
        let weights: Vec<TimeExpr> = (0..=d)
            .map(|_| {
                let a = self.rng.gen_range(-0.15..1.2 / (d + 1) as f64);
                let b = self.rng.gen_range(-0.3..0.5);
                let c = self.rng.gen_range(0.3..3.0);
                (Expr::scale(a, Expr::one() - Expr::Exp(c))
                    + Expr::scale(b, Expr::Var * Expr::Exp(c)))
                .normalize()
            })
            .collect();
        GeneralizedPauli::from_weights(self.mubs(d), weights).expect("weights vanish at zero")
    }

    pub fn mixture_of_semigroups(
        &mut self,
        d: usize,
        n: usize,
    ) -> (Vec<GpcChannel>, Vec<f64>, GpcChannel) {
        let parts: Vec<GpcChannel> = (0..n).map(|_| self.semigroup(d)).collect();
        let w = self.weights(n);
        let m = mix_gpc(&parts.iter().collect::<Vec<_>>(), &w).expect("same family");
        (parts, w, m)
    }

    /// Weyl channel with `p_ij = a_ij (1 - e^{-c_ij t})` off the identity;
    /// `allow_negative` lets some `a_ij` go below zero.
    pub fn weyl(&mut self, d: usize, allow_negative: bool) -> WeylChannel {
        let lo = if allow_negative { -0.1 } else { 0.0 };
        let hi = 1.0 / (d * d) as f64;
        let mut p: Vec<TimeExpr> = vec![Expr::zero(); d * d];
        for item in p.iter_mut().skip(1) {
            let a = self.rng.gen_range(lo..hi);
            let c = self.rng.gen_range(0.3..3.0);
            *item = Expr::scale(a, Expr::one() - Expr::Exp(c)).normalize();
        }
        p[0] = (Expr::one() - Expr::sum(p[1..].to_vec())).normalize();
        Weyl::new(Arc::new(weyl_set(d)), p).expect("identity weight one at zero")
    }
}
