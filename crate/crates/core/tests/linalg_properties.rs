use gpauli::mub::mub_family;
use gpauli::qlinalg::{
    choi, gram_condition, hermitian_eig, kraus_superop, trace_output, CMat, PSD_TOL,
};
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

/// Unitary from Gram-Schmidt on the columns of a random complex matrix.
fn unitary(d: usize, entries: &[(f64, f64)]) -> CMat<f64> {
    let mut cols: Vec<Vec<C>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v: Vec<C> = (0..d)
            .map(|i| C::new(entries[i * d + j].0, entries[i * d + j].1))
            .collect();
        for u in &cols {
            let proj: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / n).collect());
    }
    CMat::from_fn(d, d, |i, j| cols[j][i])
}

fn kraus_terms() -> impl Strategy<Value = (usize, Vec<(f64, CMat<f64>)>)> {
    (2usize..=4).prop_flat_map(|d| {
        let entry = (-1.0..1.0f64, -1.0..1.0f64);
        let one = (0.05..1.0f64, prop::collection::vec(entry, d * d));
        prop::collection::vec(one, 1..5).prop_map(move |raw| {
            let total: f64 = raw.iter().map(|r| r.0).sum();
            let terms = raw
                .iter()
                .map(|(w, e)| (w / total, unitary(d, e)))
                .collect();
            (d, terms)
        })
    })
}

fn random_matrix(d: usize) -> impl Strategy<Value = CMat<f64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), d * d)
        .prop_map(move |e| CMat::from_fn(d, d, |i, j| C::new(e[i * d + j].0, e[i * d + j].1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn choi_is_psd_and_trace_preserving((d, terms) in kraus_terms()) {
        let s = kraus_superop(&terms).unwrap();
        let c = choi(&s);
        let e = hermitian_eig(&c).unwrap();
        prop_assert!(*e.values.last().unwrap() >= -PSD_TOL);
        prop_assert!(trace_output(&c, d).max_abs_diff(&CMat::identity(d)) <= 1e-9);
    }

    #[test]
    fn superop_is_linear_in_weights((_, a) in kraus_terms(), (_, b) in kraus_terms(), x in 0.0..1.0f64) {
        prop_assume!(a[0].1.rows() == b[0].1.rows());
        let mixed: Vec<(f64, CMat<f64>)> = a
            .iter()
            .map(|(w, k)| (x * w, k.clone()))
            .chain(b.iter().map(|(w, k)| ((1.0 - x) * w, k.clone())))
            .collect();
        let lhs = kraus_superop(&mixed).unwrap();
        let sa = kraus_superop(&a).unwrap();
        let sb = kraus_superop(&b).unwrap();
        let rhs = &sa.matrix().scale_real(x) + &sb.matrix().scale_real(1.0 - x);
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn superop_action_matches_conjugation((d, terms) in kraus_terms(), x in (2usize..=4).prop_flat_map(random_matrix)) {
        prop_assume!(x.rows() == d);
        let s = kraus_superop(&terms).unwrap();
        let mut want = CMat::zeros(d, d);
        for (w, k) in &terms {
            want = &want + &k.matmul(&x).matmul(&k.adjoint()).scale_real(*w);
        }
        prop_assert!(s.apply(&x).max_abs_diff(&want) <= 1e-12);
    }

    #[test]
    fn eigendecomposition_reconstructs(h in (2usize..=6).prop_flat_map(random_matrix)) {
        let h = &h + &h.adjoint();
        let e = hermitian_eig(&h).unwrap();
        let n = h.rows();
        let v = &e.vectors;
        let back = v.matmul(&CMat::from_real_diag(&e.values)).matmul(&v.adjoint());
        prop_assert!(back.max_abs_diff(&h) <= 1e-10);
        prop_assert!(v.adjoint().matmul(v).max_abs_diff(&CMat::identity(n)) <= 1e-10);
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}

/// The identity and every nontrivial MUB power, as `U ⊗ conj(U)` vectors:
/// d⁴ of them, pairwise independent.
#[test]
fn conjugation_products_are_independent() {
    for d in [2usize, 3] {
        let m = mub_family::<f64>(d).unwrap();
        let ops = m.operator_basis();
        assert_eq!(ops.len(), d * d);
        let mut vecs = Vec::new();
        for u in &ops {
            for v in &ops {
                vecs.push(u.kron(&v.conj()).vec_cols());
            }
        }
        assert_eq!(vecs.len(), d.pow(4));
        let cond = gram_condition(&vecs);
        assert!(cond > 1e-6, "d={d} condition {cond}");
    }
}
