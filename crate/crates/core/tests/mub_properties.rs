use std::f64::consts::PI;

use gpauli::mub::{load_mub_table, mub_family, weyl_set, MubError, MubSource, MUB_TOL};
use gpauli::qlinalg::{gram_condition, CMat};
use num_complex::Complex;

const PRIMES: [usize; 4] = [2, 3, 5, 7];

#[test]
fn operator_basis_is_independent() {
    for d in PRIMES {
        let m = mub_family::<f64>(d).unwrap();
        let ops = m.operator_basis();
        assert_eq!(ops.len(), d * d);
        let vecs: Vec<_> = ops.iter().map(|u| u.vec_cols()).collect();
        let cond = gram_condition(&vecs);
        assert!(cond > 1e-6, "d={d}: condition {cond}");
    }
}

#[test]
fn nontrivial_powers_are_traceless() {
    for d in PRIMES {
        let m = mub_family::<f64>(d).unwrap();
        for a in 0..=d {
            for k in 1..d {
                assert!(m.power(a, k).trace().norm() <= 1e-10, "d={d} a={a} k={k}");
            }
        }
    }
}

#[test]
fn unitaries_have_simple_root_of_unity_spectrum() {
    for d in PRIMES {
        let m = mub_family::<f64>(d).unwrap();
        for (a, u) in m.unitaries().iter().enumerate() {
            assert!(u.is_unitary(1e-12));
            // Each basis vector is an eigenvector with eigenvalue ω^l.
            for (l, v) in m.bases()[a].iter().enumerate() {
                let w = Complex::from_polar(1.0, 2.0 * PI * l as f64 / d as f64);
                let uv = u.matvec(v);
                let err = uv
                    .iter()
                    .zip(v)
                    .map(|(x, y)| (x - w * y).norm())
                    .fold(0.0, f64::max);
                assert!(err <= 1e-12, "d={d} a={a} l={l}");
            }
        }
    }
}

#[test]
fn bases_are_mutually_unbiased() {
    for d in PRIMES {
        let m = mub_family::<f64>(d).unwrap();
        let bases = m.bases();
        assert_eq!(bases.len(), d + 1);
        for (a, ba) in bases.iter().enumerate() {
            for (b, bb) in bases.iter().enumerate() {
                for (i, x) in ba.iter().enumerate() {
                    for (j, y) in bb.iter().enumerate() {
                        let ov: Complex<f64> = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum();
                        let want = if a == b {
                            if i == j {
                                1.0
                            } else {
                                0.0
                            }
                        } else {
                            1.0 / d as f64
                        };
                        assert!(
                            (ov.norm_sqr() - want).abs() <= MUB_TOL,
                            "d={d} ({a},{i}) ({b},{j})"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn weyl_operators_are_orthogonal_unitaries() {
    for d in PRIMES {
        let w = weyl_set::<f64>(d);
        let all = w.all();
        assert_eq!(all.len(), d * d);
        for (i, a) in all.iter().enumerate() {
            assert!(a.is_unitary(1e-12));
            for (j, b) in all.iter().enumerate() {
                let ip = a.hs_inner(b);
                let want = if i == j { d as f64 } else { 0.0 };
                assert!(
                    (ip - Complex::new(want, 0.0)).norm() <= 1e-10,
                    "d={d} {i} {j}"
                );
            }
        }
        assert!(w.get(0, 0).max_abs_diff(&CMat::identity(d)) == 0.0);
    }
}

#[test]
fn composite_dimension_needs_a_table() {
    assert!(matches!(
        mub_family::<f64>(4),
        Err(MubError::UnsupportedDimension { .. })
    ));
    assert!(matches!(
        mub_family::<f64>(6),
        Err(MubError::UnsupportedDimension { .. })
    ));
}

#[test]
fn user_table_round_trips_builtin_family() {
    for d in [2usize, 3, 5] {
        let m = mub_family::<f64>(d).unwrap();
        let t = load_mub_table(d, m.bases().to_vec()).unwrap();
        assert_eq!(t.source(), MubSource::UserTable);
        assert!(t.approx_eq(&m, 1e-14));
    }
}

#[test]
fn biased_table_is_rejected() {
    let m = mub_family::<f64>(3).unwrap();
    let mut bases = m.bases().to_vec();
    bases[2] = bases[1].clone();
    assert!(matches!(
        load_mub_table(3, bases),
        Err(MubError::NotUnbiased { .. })
    ));
}

#[test]
fn single_precision_family() {
    let m = mub_family::<f32>(3).unwrap();
    for a in 0..=3 {
        assert!(m.power(a, 1).trace().norm() <= 1e-5);
    }
}
