use std::sync::Arc;

use gpauli::channels::{
    channel_equal, choi_cp_at, dephasing_channel, fa_cp_at, mix_gpc, GeneralizedPauli, Weyl,
};
use gpauli::mub::{mub_family, weyl_set};
use gpauli::qlinalg::CMat;
use gpauli::{Channel, EqualityMode, Expr, GpcChannel, Grid, MubFamily, WeylChannel};
use num_complex::Complex;
use proptest::prelude::*;

type E = Expr<f64>;

fn family(d: usize) -> Arc<MubFamily> {
    Arc::new(mub_family(d).unwrap())
}

/// `a (1 - e^{-c t}) + b t e^{-c t}`; not necessarily completely positive.
fn weight() -> impl Strategy<Value = E> {
    (-0.15..0.3f64, -0.3..0.5f64, 0.3..3.0f64).prop_map(|(a, b, c)| {
        (Expr::scale(a, Expr::one() - Expr::Exp(c)) + Expr::scale(b, Expr::Var * Expr::Exp(c)))
            .normalize()
    })
}

fn gpc() -> impl Strategy<Value = GpcChannel> {
    prop::sample::select(vec![2usize, 3, 5]).prop_flat_map(|d| {
        prop::collection::vec(weight(), d + 1)
            .prop_map(move |w| GeneralizedPauli::from_weights(family(d), w).unwrap())
    })
}

fn weyl() -> impl Strategy<Value = WeylChannel> {
    prop::sample::select(vec![2usize, 3]).prop_flat_map(|d| {
        prop::collection::vec(weight(), d * d - 1).prop_map(move |w| {
            let mut p = vec![Expr::one() - Expr::sum(w.clone())];
            p.extend(w);
            let p = p.into_iter().map(|e| e.normalize()).collect();
            Weyl::new(Arc::new(weyl_set(d)), p).unwrap()
        })
    })
}

fn state(d: usize, seed: &[(f64, f64)]) -> CMat<f64> {
    let a = CMat::from_fn(d, d, |i, j| {
        Complex::new(seed[i * d + j].0, seed[i * d + j].1)
    });
    let rho = a.matmul(&a.adjoint());
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

fn times() -> Vec<f64> {
    Grid::default().sample(50)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn gpc_apply_matches_superop(ch in gpc(), seed in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 25)) {
        let d = ch.dim();
        let rho = state(d, &seed);
        for t in times() {
            let direct = ch.apply(t, &rho).unwrap();
            let via = ch.superop_at(t).apply(&rho);
            prop_assert!(direct.max_abs_diff(&via) <= 1e-10);
        }
    }

    #[test]
    fn gpc_spectrum_on_mub_powers(ch in gpc()) {
        let spec = ch.spectrum();
        let m = ch.mubs().clone();
        for t in times() {
            let s = ch.superop_at(t);
            let lam = spec.at(t);
            for a in 0..=ch.dim() {
                for k in 1..ch.dim() {
                    let u = m.power(a, k);
                    let img = s.apply(u);
                    prop_assert!(img.max_abs_diff(&u.scale_real(lam[a])) <= 1e-10, "t={t} a={a} k={k}");
                }
            }
            prop_assert!(s.apply(&CMat::identity(ch.dim())).max_abs_diff(&CMat::identity(ch.dim())) <= 1e-10);
        }
    }

    #[test]
    fn fa_test_agrees_with_choi(ch in gpc()) {
        let spec = ch.spectrum();
        let c = Channel::Gpc(ch);
        for t in times() {
            prop_assert_eq!(fa_cp_at(&spec, [t]).is_cp(), choi_cp_at(&c, [t]).is_cp(), "t={}", t);
        }
    }

    #[test]
    fn spectrum_of_mixture_is_mixture_of_spectra(
        a in gpc(), seeds in prop::collection::vec(prop::collection::vec(weight(), 6), 2), x in 0.0..1.0f64
    ) {
        let d = a.dim();
        let b = GeneralizedPauli::from_weights(a.mubs().clone(), seeds[0][..=d].to_vec()).unwrap();
        let m = mix_gpc(&[&a, &b], &[x, 1.0 - x]).unwrap();
        let (sa, sb, sm) = (a.spectrum(), b.spectrum(), m.spectrum());
        for t in times() {
            let (la, lb, lm) = (sa.at(t), sb.at(t), sm.at(t));
            for i in 0..lm.len() {
                prop_assert!((lm[i] - (x * la[i] + (1.0 - x) * lb[i])).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn weights_are_determined_by_eigenvalues(ch in gpc(), t in 0.0..20.0f64) {
        // p_β = (d-1)/d² (1 + d λ_β - Σ λ)
        let d = ch.dim() as f64;
        let lam = ch.spectrum().at(t);
        let total: f64 = lam.iter().sum();
        let p = ch.p_at(t);
        for (b, l) in lam.iter().enumerate() {
            let back = (d - 1.0) / (d * d) * (1.0 + d * l - total);
            prop_assert!((back - p[b + 1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn weyl_apply_and_spectrum_match_superop(ch in weyl(), seed in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 9)) {
        let d = ch.dim();
        let rho = state(d, &seed);
        let spec = ch.spectrum();
        for t in times() {
            let s = ch.superop_at(t);
            prop_assert!(ch.apply(t, &rho).unwrap().max_abs_diff(&s.apply(&rho)) <= 1e-10);
            let lam = spec.at(t);
            for k in 0..d {
                for l in 0..d {
                    let u = ch.ops().get(k, l);
                    let want = u.scale(lam[k * d + l]);
                    prop_assert!(s.apply(u).max_abs_diff(&want) <= 1e-10, "t={t} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn equality_modes_agree(a in gpc(), same in any::<bool>()) {
        let b = if same {
            a.clone()
        } else {
            let mut w = a.p()[1..].to_vec();
            w[0] = (w[0].clone() + Expr::scale(0.01, Expr::one() - Expr::Exp(1.0))).normalize();
            GeneralizedPauli::from_weights(a.mubs().clone(), w).unwrap()
        };
        let (a, b) = (Channel::Gpc(a), Channel::Gpc(b));
        let grid = Grid::default();
        let modes = [EqualityMode::Symbolic, EqualityMode::Grid, EqualityMode::Superop];
        let verdicts: Vec<bool> = modes.iter().map(|m| channel_equal(&a, &b, *m, &grid)).collect();
        prop_assert!(verdicts.iter().all(|v| *v == same), "{:?}", verdicts);
    }
}

#[test]
fn depolarizing_spectrum_is_uniform() {
    for d in [2usize, 3, 5] {
        let k = (d - 1) as f64 / (d * d) as f64;
        let w = vec![Expr::scale(k, Expr::one() - Expr::Exp(1.0)); d + 1];
        let ch = GeneralizedPauli::from_weights(family(d), w).unwrap();
        for t in [0.0, 0.3, 2.0] {
            for l in ch.spectrum().at(t) {
                assert!((l - (-t).exp()).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn dephasing_channel_rejects_out_of_range() {
    let grid = Grid::default();
    let m = family(2);
    let bad: E = Expr::scale(2.0, Expr::one() - Expr::Exp(1.0));
    assert!(dephasing_channel(m.clone(), 1, bad, &grid).is_err());
    let good: E = Expr::scale(0.5, Expr::one() - Expr::Exp(1.0));
    let ch = dephasing_channel(m.clone(), 2, good, &grid).unwrap();
    // Dephasing along basis 2 leaves U_2 untouched and damps the others by 1 - 2π.
    let lam = ch.spectrum().at(1.0);
    let pi = 0.5 * (1.0 - (-1.0f64).exp());
    assert!((lam[1] - 1.0).abs() < 1e-14);
    assert!((lam[0] - (1.0 - 2.0 * pi)).abs() < 1e-14);
    assert!((lam[2] - (1.0 - 2.0 * pi)).abs() < 1e-14);
    assert!(dephasing_channel(m, 4, Expr::zero(), &grid).is_err());
}

#[test]
fn single_precision_channel() {
    let m = Arc::new(mub_family::<f32>(2).unwrap());
    let w: Vec<Expr<f32>> = vec![Expr::scale(0.25f32, Expr::one() - Expr::Exp(1.0f32)); 3];
    let ch = GeneralizedPauli::from_weights(m, w).unwrap();
    let l = ch.spectrum().at(1.0);
    assert!(l.iter().all(|x| (x - (-1.0f32).exp()).abs() < 1e-6));
    assert!(ch.superop_at(1.0).matrix().rows() == 4);
}
