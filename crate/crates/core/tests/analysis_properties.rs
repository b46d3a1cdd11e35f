use std::f64::consts::PI;
use std::sync::Arc;

use gpauli::analysis::{
    decoherence_rates, decompose_dephasing, decompose_s2_into_d2, in_dephasing_set, invertibility,
    is_semigroup, mixture_of_semigroups_is_semigroup, pdivisibility_rate_check,
    permanently_negative_count, sd_not_in_dd_witness, semigroup_from_rates,
    split_semigroup_invertible, AnalysisError, SemigroupViolation,
};
use gpauli::catalog::{oscillating_qubit, qutrit_weyl_pair};
use gpauli::channels::{channel_equal, choi_cp_at, dephasing_channel, mix_gpc, GeneralizedPauli};
use gpauli::expr::SupKind;
use gpauli::mub::mub_family;
use gpauli::{Channel, EqualityMode, Expr, GpcChannel, Grid, MubFamily};
use proptest::prelude::*;

fn family(d: usize) -> Arc<MubFamily> {
    Arc::new(mub_family(d).unwrap())
}

/// Rates with `Σc >= d · max c`, scaled from a common base.
fn valid_rates() -> impl Strategy<Value = (usize, Vec<f64>)> {
    prop::sample::select(vec![2usize, 3, 5]).prop_flat_map(|d| {
        let spread = 1.0 / (d + 1) as f64;
        (0.2..2.0f64, prop::collection::vec(-spread..spread, d + 1))
            .prop_map(move |(base, j)| {
                (d, j.iter().map(|x| base * (1.0 + x)).collect::<Vec<f64>>())
            })
            .prop_filter("rate inequality", move |(_, c)| {
                c.iter().sum::<f64>() >= d as f64 * c.iter().copied().fold(0.0, f64::max)
            })
    })
}

fn semigroup_mixture() -> impl Strategy<Value = (Vec<GpcChannel>, Vec<f64>)> {
    prop::collection::vec(valid_rates(), 2..4).prop_flat_map(|parts| {
        let d = parts[0].0;
        let chans: Vec<GpcChannel> = parts
            .iter()
            .filter(|(dd, _)| *dd == d)
            .map(|(_, c)| semigroup_from_rates(family(d), c).unwrap())
            .collect();
        let n = chans.len();
        prop::collection::vec(0.05..1.0f64, n).prop_map(move |raw| {
            let s: f64 = raw.iter().sum();
            (chans.clone(), raw.iter().map(|x| x / s).collect())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn semigroup_rates_round_trip((d, c) in valid_rates()) {
        let ch = semigroup_from_rates(family(d), &c).unwrap();
        let v = is_semigroup(&ch, &Grid::default());
        prop_assert!(v.is_semigroup);
        let r = v.rates.unwrap();
        for (a, b) in r.iter().zip(&c) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn semigroup_rates_are_constant((d, c) in valid_rates()) {
        let prof = decoherence_rates(&semigroup_from_rates(family(d), &c).unwrap(), &Grid::default());
        let mean = c.iter().sum::<f64>() / d as f64;
        prop_assert!(prof.gamma[0][..100].iter().all(|g| !g.is_nan()));
        for (a, row) in prof.gamma.iter().enumerate() {
            for g in row.iter().filter(|g| !g.is_nan()) {
                prop_assert!((g - (mean - c[a])).abs() <= 1e-8);
            }
        }
    }

    #[test]
    fn semigroup_mixtures_have_nonnegative_rate_sums((parts, w) in semigroup_mixture()) {
        let m = mix_gpc(&parts.iter().collect::<Vec<_>>(), &w).unwrap();
        let prof = decoherence_rates(&m, &Grid::default());
        prop_assert!(pdivisibility_rate_check(&prof).overall);
        prop_assert!(permanently_negative_count(&prof) < m.dim());
    }

    #[test]
    fn distinct_semigroups_do_not_mix_to_a_semigroup((parts, w) in semigroup_mixture()) {
        let grid = Grid::default();
        let r = mixture_of_semigroups_is_semigroup(&parts.iter().collect::<Vec<_>>(), &w, &grid).unwrap();
        prop_assume!(r.nontrivial);
        prop_assert!(!r.is_semigroup);
    }

    #[test]
    fn invertible_mixtures_stay_invertible((parts, w) in semigroup_mixture(), amp in 0.05..0.45f64, alpha in 1usize..4) {
        let d = parts[0].dim();
        let pi = Expr::scale(amp, Expr::one() - Expr::Exp(0.7));
        let deph = dephasing_channel(parts[0].mubs().clone(), alpha.min(d + 1), pi, &Grid::default()).unwrap();
        let mut chans = parts.clone();
        chans.push(deph);
        let mut w2: Vec<f64> = w.iter().map(|x| 0.5 * x).collect();
        w2.push(0.5);
        let m = mix_gpc(&chans.iter().collect::<Vec<_>>(), &w2).unwrap();
        let r = invertibility(&Channel::Gpc(m), &Grid::default());
        prop_assert!(r.invertible);
        prop_assert!(r.min_abs_eigenvalue > 0.0);
    }

    #[test]
    fn qubit_semigroups_decompose_exactly(c in prop::collection::vec(0.1..2.0f64, 3)) {
        prop_assume!(c.iter().sum::<f64>() >= 2.0 * c.iter().copied().fold(0.0, f64::max));
        let m = family(2);
        let grid = Grid::default();
        let sg = semigroup_from_rates(m.clone(), &c).unwrap();
        let dec = decompose_s2_into_d2([c[0], c[1], c[2]]).unwrap();
        prop_assert_eq!(dec.weights, [0.5, 0.25, 0.25]);
        let rec = dec.reconstruct(&m, &grid).unwrap();
        prop_assert!(channel_equal(&Channel::Gpc(sg.clone()), &Channel::Gpc(rec), EqualityMode::Symbolic, &grid));
        // The generic decomposition applies too: qubit semigroups lie in the dephasing set.
        let member = in_dephasing_set(&sg);
        prop_assert!(member.member);
        let generic = decompose_dephasing(&sg).unwrap().reconstruct(&m, &grid).unwrap();
        prop_assert!(channel_equal(&Channel::Gpc(sg), &Channel::Gpc(generic), EqualityMode::Grid, &grid));
    }

    #[test]
    fn dephasing_mixtures_round_trip(raw in prop::collection::vec(0.0..1.0f64, 4), rates in prop::collection::vec(0.2..3.0f64, 3)) {
        let m = family(2);
        let grid = Grid::default();
        let s: f64 = raw.iter().sum::<f64>() + 1e-3;
        let w: Vec<f64> = raw.iter().map(|x| x / s).collect();
        let mut chans = vec![GeneralizedPauli::identity(m.clone())];
        for a in 0..3 {
            let pi = Expr::one() - Expr::Exp(rates[a]);
            chans.push(dephasing_channel(m.clone(), a + 1, pi, &grid).unwrap());
        }
        let mut weights = vec![1.0 - w[1..].iter().sum::<f64>()];
        weights.extend(&w[1..]);
        let mixed = mix_gpc(&chans.iter().collect::<Vec<_>>(), &weights).unwrap();
        let dec = decompose_dephasing(&mixed).unwrap();
        let back = dec.reconstruct(&m, &grid).unwrap();
        prop_assert!(channel_equal(&Channel::Gpc(mixed), &Channel::Gpc(back), EqualityMode::Grid, &grid));
    }
}

#[test]
fn violating_rates_are_rejected() {
    let m = family(3);
    let err = semigroup_from_rates(m.clone(), &[2.0, 0.1, 0.1, 0.1]).unwrap_err();
    assert!(matches!(
        err,
        AnalysisError::RateInequalityViolated { beta: 1, .. }
    ));
    assert!(matches!(
        semigroup_from_rates(m.clone(), &[1.0, 1.0, 1.0]),
        Err(AnalysisError::RateCount { .. })
    ));
    assert!(matches!(
        semigroup_from_rates(m, &[1.0, -1.0, 1.0, 1.0]),
        Err(AnalysisError::NegativeRate { .. })
    ));
}

#[test]
fn oscillating_qubit_is_outside_dephasing_set() {
    let ch = oscillating_qubit(family(2));
    let m = in_dephasing_set(&ch);
    assert!((m.sup_sum - 13.0 / 12.0).abs() <= 1e-9);
    assert!(!m.member);
    assert!(m.sup_kinds.iter().all(|k| *k == SupKind::ExactAnalytic));
    assert!(matches!(
        decompose_dephasing(&ch),
        Err(AnalysisError::NotDecomposable { .. })
    ));
    // λ = (½, −½, 0) at t = π.
    let lam = ch.spectrum().at(PI);
    for (l, want) in lam.iter().zip([0.5, -0.5, 0.0]) {
        assert!((l - want).abs() < 1e-14);
    }
    assert!(!is_semigroup(&ch, &Grid::default()).is_semigroup);
    let r = invertibility(&Channel::Gpc(ch), &Grid::default());
    assert!(!r.invertible);
    assert!(r.first_zero.unwrap() <= PI + 1e-9);
}

#[test]
fn weyl_pair_mixture_loses_invertibility_but_stays_cp() {
    let grid = Grid::default();
    let (p, q, mix) = qutrit_weyl_pair();
    assert!(invertibility(&Channel::Weyl(p), &grid).invertible);
    assert!(invertibility(&Channel::Weyl(q), &grid).invertible);
    let mix = Channel::Weyl(mix);
    let r = invertibility(&mix, &grid);
    assert!(!r.invertible);
    assert!((r.first_zero.unwrap() - 5f64.ln()).abs() <= 1e-6);
    assert!(choi_cp_at(&mix, [5f64.ln()]).is_cp());
    // (5 e^{-t} - 1) / 4 for the vanishing eigenvalue.
    let Channel::Weyl(w) = &mix else {
        unreachable!()
    };
    let spec = w.spectrum();
    let (re, im) = spec.get(0, 1);
    for t in [0.0f64, 0.5, 1.0, 3.0] {
        let want = (5.0 * (-t).exp() - 1.0) / 4.0;
        assert!(
            (re.eval(t).hypot(im.eval(t)) - want.abs()).abs() < 1e-12,
            "t={t}"
        );
    }
}

#[test]
fn qudit_witness_is_a_semigroup_outside_dephasing_set() {
    for d in [3usize, 5] {
        let w = sd_not_in_dd_witness(&family(d), &Grid::default()).unwrap();
        assert!(w.c > 0.0 && w.c < 1.0, "d={d} c={}", w.c);
        assert!(w.is_semigroup);
        assert!(w.sup_sum > 1.0 + 1e-9);
    }
    assert!(matches!(
        sd_not_in_dd_witness(&family(2), &Grid::default()),
        Err(AnalysisError::UnsupportedDimension { .. })
    ));
}

#[test]
fn two_semigroup_qubit_mixture_has_one_eternally_negative_rate() {
    let m = family(2);
    let a = semigroup_from_rates(m.clone(), &[1.0, 1.0, 0.0]).unwrap();
    let b = semigroup_from_rates(m, &[1.0, 0.0, 1.0]).unwrap();
    let mix = mix_gpc(&[&a, &b], &[0.5, 0.5]).unwrap();
    let grid = Grid::default();
    let prof = decoherence_rates(&mix, &grid);
    for (i, &t) in prof.times.iter().enumerate() {
        let e = (-t).exp();
        let g1 = (e - 1.0) / (2.0 * (1.0 + e));
        assert!((prof.gamma[0][i] - g1).abs() < 1e-10, "t={t}");
        assert!((prof.gamma[1][i] - 0.5).abs() < 1e-10);
        assert!((prof.gamma[2][i] - 0.5).abs() < 1e-10);
    }
    assert_eq!(permanently_negative_count(&prof), 1);
    assert!(pdivisibility_rate_check(&prof).overall);
    let v = is_semigroup(&mix, &grid);
    assert!(!v.is_semigroup);
    assert_eq!(v.violated, Some(SemigroupViolation::ExpFit));
}

#[test]
fn splitting_yields_invertible_parts_and_one_semigroup() {
    let grid = Grid::default();
    for d in [2usize, 3] {
        for n in 2..=5 {
            let s = split_semigroup_invertible(family(d), n).unwrap();
            let mut want: Vec<f64> = (1..n).map(|k| 0.5f64.powi(k as i32)).collect();
            want.push(0.5f64.powi(n as i32 - 1));
            assert_eq!(s.weights, want);
            assert_eq!(s.semigroup_rate, 2f64.powi(n as i32 - 1));
            let mut semigroups = 0;
            for ch in &s.channels {
                assert!(invertibility(&Channel::Gpc(ch.clone()), &grid).invertible);
                if is_semigroup(ch, &grid).is_semigroup {
                    semigroups += 1;
                    for l in ch.spectrum().at(0.3) {
                        assert!((l - (-s.semigroup_rate * 0.3).exp()).abs() < 1e-12);
                    }
                }
            }
            assert_eq!(semigroups, 1);
            let rec = mix_gpc(&s.channels.iter().collect::<Vec<_>>(), &s.weights).unwrap();
            assert!(channel_equal(
                &Channel::Gpc(rec),
                &Channel::Gpc(s.base),
                EqualityMode::Symbolic,
                &grid
            ));
        }
    }
    assert!(split_semigroup_invertible(family(2), 1).is_err());
}
