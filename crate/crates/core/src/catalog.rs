//! Ready-made channels used throughout the documentation and tests.

use std::sync::Arc;

use crate::channels::{mix_weyl, GeneralizedPauli, Weyl};
use crate::expr::{parse_expr, Expr};
use crate::mub::{weyl_set, Mubs};

/// Qubit channel with `p_α(t) = (cos(α t + π) + 1) / (2(α + 1))`, `α = 1, 2, 3`.
///
/// Each weight oscillates between 0 and `1/(α + 1)`, so the suprema add up to
/// `1/2 + 1/3 + 1/4 = 13/12`.
pub fn oscillating_qubit(mubs: Arc<Mubs<f64>>) -> GeneralizedPauli<f64> {
    let weights = (1..=3)
        .map(|a| {
            parse_expr(&format!(
                "(cos({a}*t+pi)+1)*{}",
                1.0 / (2.0 * (a as f64 + 1.0))
            ))
            .expect("well-formed literal expression")
        })
        .collect();
    GeneralizedPauli::from_weights(mubs, weights).expect("three weights for a qubit family")
}

/// The pair of invertible qutrit Weyl channels whose even mixture is not
/// invertible, followed by that mixture.
///
/// With `s = 1 - e^{-t}`: `p = (1 - 5s/6, s/2, s/3)`, `q = (1 - 5s/6, s/3, s/2)`,
/// and `p_ij = p_i p_j`, `q_ij = q_i p_j`.
pub fn qutrit_weyl_pair() -> (Weyl<f64>, Weyl<f64>, Weyl<f64>) {
    let ops = Arc::new(weyl_set::<f64>(3));
    let s = Expr::one() - Expr::Exp(1.0);
    let p = [
        (Expr::one() - Expr::scale(5.0 / 6.0, s.clone())).normalize(),
        Expr::scale(0.5, s.clone()).normalize(),
        Expr::scale(1.0 / 3.0, s).normalize(),
    ];
    let q = [p[0].clone(), p[2].clone(), p[1].clone()];
    let outer = |a: &[Expr<f64>; 3], b: &[Expr<f64>; 3]| -> Vec<Expr<f64>> {
        (0..9)
            .map(|idx| (a[idx / 3].clone() * b[idx % 3].clone()).normalize())
            .collect()
    };
    let ep = Weyl::new(ops.clone(), outer(&p, &p)).expect("nine product weights");
    let eq = Weyl::new(ops, outer(&q, &p)).expect("nine product weights");
    let mixed = mix_weyl(&[&ep, &eq], &[0.5, 0.5]).expect("same-family mixture");
    (ep, eq, mixed)
}
