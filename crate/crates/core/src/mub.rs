//! Mutually unbiased bases, their cyclic unitaries, and Weyl operators.

use num_complex::Complex;
use thiserror::Error;

use crate::qlinalg::CMat;
use crate::scalar::Real;

/// Tolerance for orthonormality, unbiasedness and unitarity checks.
pub const MUB_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MubError {
    #[error("dimension {0} is not a prime; supply a basis table instead")]
    UnsupportedDimension(usize),
    #[error("basis {basis}: vectors {i} and {j} are not orthonormal (overlap {overlap:.3e})")]
    NotOrthonormal {
        basis: usize,
        i: usize,
        j: usize,
        overlap: f64,
    },
    #[error(
        "bases {alpha} and {beta} are not unbiased at vectors ({i}, {j}): |<.|.>|^2 = {overlap:.6}"
    )]
    NotUnbiased {
        alpha: usize,
        beta: usize,
        i: usize,
        j: usize,
        overlap: f64,
    },
    #[error("malformed basis table: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MubSource {
    BuiltinPrime,
    UserTable,
}

/// A basis: `vectors[k][m]` is component `m` of vector `k`.
pub type Basis<T> = Vec<Vec<Complex<T>>>;

/// `d + 1` mutually unbiased bases together with the unitaries
/// `U_α = Σ_l ω^l |φ_l⟩⟨φ_l|` (the `l`-th root of unity on the `l`-th vector,
/// counting from zero).
#[derive(Debug, Clone)]
pub struct Mubs<T> {
    d: usize,
    bases: Vec<Basis<T>>,
    unitaries: Vec<CMat<T>>,
    /// `powers[α][k - 1] = U_α^k` for `k = 1..d`.
    powers: Vec<Vec<CMat<T>>>,
    source: MubSource,
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

/// `ω_d^k = e^{2πi k / d}` with `k` reduced mod `d` first.
pub fn root_of_unity<T: Real>(d: usize, k: i64) -> Complex<T> {
    let m = k.rem_euclid(d as i64);
    if m == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let (m4, d4) = (4 * m as usize, d);
    if m4 == 2 * d4 {
        return Complex::new(-T::one(), T::zero());
    }
    if m4 == d4 {
        return Complex::new(T::zero(), T::one());
    }
    if m4 == 3 * d4 {
        return Complex::new(T::zero(), -T::one());
    }
    let angle = T::TAU() * T::lit(m as f64) / T::lit(d as f64);
    Complex::new(angle.cos(), angle.sin())
}

/// Built-in family for prime `d`: the computational basis first, then for
/// `d = 2` the σ_x and σ_y eigenbases and for odd `d` the bases with
/// components `ω^{a m² + k m} / √d`, `a = 0..d`.
pub fn mub_family<T: Real>(d: usize) -> Result<Mubs<T>, MubError> {
    if !is_prime(d) {
        return Err(MubError::UnsupportedDimension(d));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut bases: Vec<Basis<T>> = Vec::with_capacity(d + 1);
    bases.push(
        (0..d)
            .map(|k| (0..d).map(|m| if m == k { one } else { zero }).collect())
            .collect(),
    );
    let norm = T::one() / T::lit(d as f64).sqrt();
    if d == 2 {
        let i = Complex::new(T::zero(), T::one());
        bases.push(vec![
            vec![one * norm, one * norm],
            vec![one * norm, -one * norm],
        ]);
        bases.push(vec![
            vec![one * norm, i * norm],
            vec![one * norm, -i * norm],
        ]);
    } else {
        for a in 0..d as i64 {
            bases.push(
                (0..d as i64)
                    .map(|k| {
                        (0..d as i64)
                            .map(|m| root_of_unity::<T>(d, a * m * m + k * m) * norm)
                            .collect()
                    })
                    .collect(),
            );
        }
    }
    Mubs::from_bases(d, bases, MubSource::BuiltinPrime)
}

/// `U = Σ_l ω^l |φ_l⟩⟨φ_l|`.
pub fn unitary_from_basis<T: Real>(basis: &Basis<T>) -> Result<CMat<T>, MubError> {
    let d = basis.len();
    check_orthonormal(0, basis, d)?;
    let mut u = CMat::zeros(d, d);
    for (l, phi) in basis.iter().enumerate() {
        let w = root_of_unity::<T>(d, l as i64);
        for r in 0..d {
            for c in 0..d {
                u[(r, c)] = u[(r, c)] + w * phi[r] * phi[c].conj();
            }
        }
    }
    Ok(u)
}

fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |s, (x, y)| {
            s + x.conj() * *y
        })
}

fn check_orthonormal<T: Real>(index: usize, basis: &Basis<T>, d: usize) -> Result<(), MubError> {
    if basis.len() != d || basis.iter().any(|v| v.len() != d) {
        return Err(MubError::Shape(format!(
            "basis {index} must hold {d} vectors of length {d}"
        )));
    }
    let tol = T::tol(MUB_TOL);
    for i in 0..d {
        for j in i..d {
            let g = inner(&basis[i], &basis[j]);
            let want = if i == j { T::one() } else { T::zero() };
            let dev = (g - Complex::new(want, T::zero())).norm();
            if !(dev <= tol) {
                return Err(MubError::NotOrthonormal {
                    basis: index,
                    i,
                    j,
                    overlap: g.norm().as_f64(),
                });
            }
        }
    }
    Ok(())
}

impl<T: Real> Mubs<T> {
    fn from_bases(d: usize, bases: Vec<Basis<T>>, source: MubSource) -> Result<Self, MubError> {
        if d < 2 {
            return Err(MubError::Shape(format!("dimension {d} < 2")));
        }
        if bases.len() != d + 1 {
            return Err(MubError::Shape(format!(
                "expected {} bases, found {}",
                d + 1,
                bases.len()
            )));
        }
        for (idx, b) in bases.iter().enumerate() {
            check_orthonormal(idx, b, d)?;
        }
        let tol = T::tol(MUB_TOL);
        let target = T::one() / T::lit(d as f64);
        for alpha in 0..=d {
            for beta in (alpha + 1)..=d {
                for i in 0..d {
                    for j in 0..d {
                        let o = inner(&bases[alpha][i], &bases[beta][j]).norm_sqr();
                        if !((o - target).abs() <= tol) {
                            return Err(MubError::NotUnbiased {
                                alpha,
                                beta,
                                i,
                                j,
                                overlap: o.as_f64(),
                            });
                        }
                    }
                }
            }
        }
        let unitaries = bases
            .iter()
            .map(unitary_from_basis)
            .collect::<Result<Vec<_>, _>>()?;
        let powers = unitaries
            .iter()
            .map(|u| {
                let mut acc = Vec::with_capacity(d - 1);
                let mut cur = u.clone();
                for _ in 1..d {
                    acc.push(cur.clone());
                    cur = cur.matmul(u);
                }
                acc
            })
            .collect();
        Ok(Mubs {
            d,
            bases,
            unitaries,
            powers,
            source,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn source(&self) -> MubSource {
        self.source
    }

    /// Bases indexed from zero; index 0 is the first basis of the family.
    pub fn bases(&self) -> &[Basis<T>] {
        &self.bases
    }

    pub fn unitary(&self, alpha: usize) -> &CMat<T> {
        &self.unitaries[alpha]
    }

    pub fn unitaries(&self) -> &[CMat<T>] {
        &self.unitaries
    }

    /// `U_α^k` for `k = 1..d`.
    pub fn power(&self, alpha: usize, k: usize) -> &CMat<T> {
        &self.powers[alpha][k - 1]
    }

    /// The `d²` operators `{𝟙} ∪ {U_α^k}`.
    pub fn operator_basis(&self) -> Vec<CMat<T>> {
        let mut out = vec![CMat::identity(self.d)];
        for alpha in 0..=self.d {
            out.extend(self.powers[alpha].iter().cloned());
        }
        out
    }

    /// Same bases, compared to `tol` entrywise.
    pub fn approx_eq(&self, other: &Mubs<T>, tol: T) -> bool {
        self.d == other.d
            && self
                .unitaries
                .iter()
                .zip(&other.unitaries)
                .all(|(a, b)| a.max_abs_diff(b) <= tol)
    }
}

/// Validate a user-supplied table of `d + 1` bases.
pub fn load_mub_table<T: Real>(d: usize, bases: Vec<Basis<T>>) -> Result<Mubs<T>, MubError> {
    Mubs::from_bases(d, bases, MubSource::UserTable)
}

/// Weyl operators `U_kl = Σ_m ω^{k m} |m⟩⟨m + l|`, stored row-major in `(k, l)`.
#[derive(Debug, Clone)]
pub struct WeylOps<T> {
    d: usize,
    ops: Vec<CMat<T>>,
}

pub fn weyl_set<T: Real>(d: usize) -> WeylOps<T> {
    assert!(d >= 2, "Weyl operators need d >= 2");
    let mut ops = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let mut u = CMat::zeros(d, d);
            for m in 0..d {
                u[(m, (m + l) % d)] = root_of_unity(d, (k * m) as i64);
            }
            ops.push(u);
        }
    }
    WeylOps { d, ops }
}

impl<T: Real> WeylOps<T> {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, k: usize, l: usize) -> &CMat<T> {
        &self.ops[k * self.d + l]
    }

    pub fn all(&self) -> &[CMat<T>] {
        &self.ops
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = CMat<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn qubit_family_is_z_x_y() {
        let f = mub_family::<f64>(2).unwrap();
        assert_eq!(f.bases().len(), 3);
        let sz = M::from_real_diag(&[1.0, -1.0]);
        let sx = M::from_rows(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let sy = M::from_rows(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        assert!(f.unitary(0).max_abs_diff(&sz) < 1e-15);
        assert!(f.unitary(1).max_abs_diff(&sx) < 1e-15);
        assert!(f.unitary(2).max_abs_diff(&sy) < 1e-15);
    }

    #[test]
    fn qutrit_family_overlaps_and_order() {
        let f = mub_family::<f64>(3).unwrap();
        assert_eq!(f.bases().len(), 4);
        for u in f.unitaries() {
            assert!(u.pow(3).max_abs_diff(&M::identity(3)) < 1e-10);
        }
        let w = root_of_unity::<f64>(3, 1);
        let want = CMat::from_fn(
            3,
            3,
            |i, j| if i == j { w.powi(i as i32) } else { c(0., 0.) },
        );
        assert!(f.unitary(0).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn composite_dimension_is_unsupported() {
        assert!(matches!(
            mub_family::<f64>(4),
            Err(MubError::UnsupportedDimension(4))
        ));
        assert!(matches!(
            mub_family::<f64>(1),
            Err(MubError::UnsupportedDimension(1))
        ));
    }

    #[test]
    fn unitary_from_computational_basis() {
        let basis: Basis<f64> = vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(1., 0.)]];
        let u = unitary_from_basis(&basis).unwrap();
        assert_eq!(u, M::from_real_diag(&[1.0, -1.0]));
        let skew = vec![vec![c(1., 0.), c(0., 0.)], vec![c(1., 0.), c(0., 0.)]];
        assert!(matches!(
            unitary_from_basis(&skew),
            Err(MubError::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn weyl_examples() {
        let w2 = weyl_set::<f64>(2);
        assert_eq!(w2.get(0, 0), &M::identity(2));
        assert_eq!(w2.get(1, 0), &M::from_real_diag(&[1.0, -1.0]));
        let sx = M::from_rows(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        assert_eq!(w2.get(0, 1), &sx);
        assert!(
            w2.get(1, 1)
                .max_abs_diff(&M::from_real_diag(&[1.0, -1.0]).matmul(&sx))
                < 1e-15
        );

        let w3 = weyl_set::<f64>(3);
        let om = root_of_unity::<f64>(3, 1);
        let want = CMat::from_fn(
            3,
            3,
            |i, j| if i == j { om.powi(i as i32) } else { c(0., 0.) },
        );
        assert!(w3.get(1, 0).max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn table_validation_errors() {
        let f = mub_family::<f64>(3).unwrap();
        let mut scaled = f.bases().to_vec();
        for z in scaled[2][1].iter_mut() {
            *z *= 1.01;
        }
        assert!(matches!(
            load_mub_table(3, scaled),
            Err(MubError::NotOrthonormal { basis: 2, .. })
        ));

        let mut dup = f.bases().to_vec();
        dup[3] = dup[2].clone();
        assert!(matches!(
            load_mub_table(3, dup),
            Err(MubError::NotUnbiased {
                alpha: 2,
                beta: 3,
                ..
            })
        ));

        let short = f.bases()[..3].to_vec();
        assert!(matches!(load_mub_table(3, short), Err(MubError::Shape(_))));

        let reloaded = load_mub_table(3, f.bases().to_vec()).unwrap();
        assert_eq!(reloaded.source(), MubSource::UserTable);
        assert!(reloaded.approx_eq(&f, 0.0));
    }
}
