//! Dense complex linear algebra for small quantum systems.
//!
//! Vectorization convention: operators are vectorized by stacking columns,
//! `vec(X)[j * d + i] = X[i, j]`. Under this convention
//! `vec(A X B) = (B^T ⊗ A) vec(X)`, so the conjugation `X -> K X K†` is the
//! matrix `conj(K) ⊗ K`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("negative Kraus weight {0}")]
    NegativeWeight(f64),
    #[error("no Kraus terms given")]
    Empty,
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<T>,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Builds from row-major data; panics if the length does not match.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length");
        CMat { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(*d, T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| *z * k).collect(),
        }
    }

    pub fn scale_real(&self, k: T) -> Self {
        self.scale(Complex::new(k, T::zero()))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols))
            .fold(Complex::new(T::zero(), T::zero()), |s, i| s + self[(i, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len(), "matvec shape");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Complex::new(T::zero(), T::zero()), |s, j| {
                    s + self[(i, j)] * v[j]
                })
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.rows), |acc, _| acc.matmul(self))
    }

    /// `max_ij |A_ij - B_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn hermiticity_defect(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        self.max_abs_diff(&self.adjoint())
    }

    /// `‖A − A†‖_max <= tol`.
    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .max_abs_diff(&Self::identity(self.rows))
                <= tol
    }

    /// Column-stacking vectorization.
    pub fn vec_cols(&self) -> Vec<Complex<T>> {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)]);
            }
        }
        out
    }

    /// Inverse of [`CMat::vec_cols`] for a square `d x d` result.
    pub fn unvec_cols(v: &[Complex<T>], d: usize) -> Self {
        assert_eq!(v.len(), d * d, "unvec length");
        Self::from_fn(d, d, |i, j| v[j * d + i])
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Hilbert-Schmidt inner product `Tr(self† rhs)`.
    pub fn hs_inner(&self, rhs: &Self) -> Complex<T> {
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| {
                s + a.conj() * *b
            })
    }

    pub fn cast<U: Real>(&self) -> CMat<U> {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for CMat<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &CMat<T> {
    type Output = CMat<T>;
    fn add(self, rhs: &CMat<T>) -> CMat<T> {
        assert_eq!(self.shape(), rhs.shape(), "add shape");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &CMat<T> {
    type Output = CMat<T>;
    fn sub(self, rhs: &CMat<T>) -> CMat<T> {
        assert_eq!(self.shape(), rhs.shape(), "sub shape");
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &CMat<T> {
    type Output = CMat<T>;
    fn mul(self, rhs: &CMat<T>) -> CMat<T> {
        self.matmul(rhs)
    }
}

/// Default Hermiticity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default PSD tolerance: eigenvalues down to `-PSD_TOL` count as nonnegative.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Eigh<T> {
    /// Descending.
    pub values: Vec<T>,
    /// Column `i` is the eigenvector of `values[i]`.
    pub vectors: CMat<T>,
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi sweeps.
pub fn hermitian_eig<T: Real>(a: &CMat<T>) -> Result<Eigh<T>, LinalgError> {
    hermitian_eig_tol(a, T::tol(HERMITIAN_TOL))
}

pub fn hermitian_eig_tol<T: Real>(a: &CMat<T>, herm_tol: T) -> Result<Eigh<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch {
            expected: (a.rows, a.rows),
            found: a.shape(),
        });
    }
    let defect = a.hermiticity_defect();
    if !(defect <= herm_tol) {
        return Err(LinalgError::NotHermitian(defect.as_f64()));
    }
    let n = a.rows;
    let zero = Complex::new(T::zero(), T::zero());
    // symmetrize exactly
    let mut m = CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex::new(a[(i, i)].re, T::zero())
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5)
        }
    });
    let mut v = CMat::<T>::identity(n);
    let scale = m.max_abs().max(T::min_positive_value());
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + m[(i, j)].norm_sqr());
        if off.sqrt() <= T::epsilon() * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= T::epsilon() * T::epsilon() * scale {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let zeta = (aqq - app) / (T::lit(2.0) * r);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                // U = diag(1, e^{-i phi}) [[c, s], [-s, c]]
                let u00 = Complex::new(c, T::zero());
                let u01 = Complex::new(s, T::zero());
                let u10 = phase.conj() * (-s);
                let u11 = phase.conj() * c;
                // M <- M U (columns p, q)
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * u00 + mkq * u10;
                    m[(k, q)] = mkp * u01 + mkq * u11;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * u00 + vkq * u10;
                    v[(k, q)] = vkp * u01 + vkq * u11;
                }
                // M <- U† M (rows p, q)
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = u00.conj() * mpk + u10.conj() * mqk;
                    m[(q, k)] = u01.conj() * mpk + u11.conj() * mqk;
                }
                m[(p, q)] = zero;
                m[(q, p)] = zero;
                m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
                m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(j, j)]
            .re
            .partial_cmp(&m[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Eigh { values, vectors })
}

/// `true` iff the smallest eigenvalue is `>= -tol`.
pub fn is_psd<T: Real>(a: &CMat<T>, tol: T) -> Result<bool, LinalgError> {
    Ok(min_eigenvalue(a)? >= -tol)
}

pub fn min_eigenvalue<T: Real>(a: &CMat<T>) -> Result<T, LinalgError> {
    let e = hermitian_eig(a)?;
    Ok(e.values.last().copied().unwrap_or_else(T::zero))
}

/// Superoperator acting on column-vectorized `d x d` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator<T> {
    d: usize,
    matrix: CMat<T>,
}

impl<T: Real> SuperOperator<T> {
    pub fn from_matrix(d: usize, matrix: CMat<T>) -> Result<Self, LinalgError> {
        if matrix.shape() != (d * d, d * d) {
            return Err(LinalgError::DimensionMismatch {
                expected: (d * d, d * d),
                found: matrix.shape(),
            });
        }
        Ok(SuperOperator { d, matrix })
    }

    pub fn identity(d: usize) -> Self {
        SuperOperator {
            d,
            matrix: CMat::identity(d * d),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn apply(&self, x: &CMat<T>) -> CMat<T> {
        assert_eq!(x.shape(), (self.d, self.d), "superoperator input shape");
        CMat::unvec_cols(&self.matrix.matvec(&x.vec_cols()), self.d)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// `Σ w_i · X ↦ K_i X K_i†`, i.e. `Σ w_i conj(K_i) ⊗ K_i` under column stacking.
pub fn kraus_superop<T: Real>(terms: &[(T, CMat<T>)]) -> Result<SuperOperator<T>, LinalgError> {
    if let Some((w, _)) = terms.iter().find(|(w, _)| *w < T::zero()) {
        return Err(LinalgError::NegativeWeight(w.as_f64()));
    }
    conjugation_sum(terms)
}

/// Same as [`kraus_superop`] but accepts weights of either sign, so that
/// maps which are not completely positive can still be represented.
pub fn conjugation_sum<T: Real>(terms: &[(T, CMat<T>)]) -> Result<SuperOperator<T>, LinalgError> {
    let first = terms.first().ok_or(LinalgError::Empty)?;
    let d = first.1.rows();
    let mut acc = CMat::zeros(d * d, d * d);
    for (w, k) in terms {
        if k.shape() != (d, d) {
            return Err(LinalgError::DimensionMismatch {
                expected: (d, d),
                found: k.shape(),
            });
        }
        if *w == T::zero() {
            continue;
        }
        acc = &acc + &k.conj().kron(k).scale_real(*w);
    }
    Ok(SuperOperator { d, matrix: acc })
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ S(|i⟩⟨j|)`: input slot first, output slot second.
pub fn choi<T: Real>(s: &SuperOperator<T>) -> CMat<T> {
    let d = s.d;
    let mut out = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let mut eij = CMat::zeros(d, d);
            eij[(i, j)] = Complex::new(T::one(), T::zero());
            let img = s.apply(&eij);
            for a in 0..d {
                for b in 0..d {
                    out[(i * d + a, j * d + b)] = img[(a, b)];
                }
            }
        }
    }
    out
}

/// Partial trace of a Choi matrix over its output slot.
pub fn trace_output<T: Real>(c: &CMat<T>, d: usize) -> CMat<T> {
    CMat::from_fn(d, d, |i, j| {
        (0..d).fold(Complex::new(T::zero(), T::zero()), |s, a| {
            s + c[(i * d + a, j * d + a)]
        })
    })
}

/// Gram matrix `G_ij = ⟨v_i, v_j⟩` of a family of vectors.
pub fn gram<T: Real>(vectors: &[Vec<Complex<T>>]) -> CMat<T> {
    let n = vectors.len();
    CMat::from_fn(n, n, |i, j| {
        vectors[i]
            .iter()
            .zip(&vectors[j])
            .fold(Complex::new(T::zero(), T::zero()), |s, (a, b)| {
                s + a.conj() * *b
            })
    })
}

/// Ratio of smallest to largest Gram eigenvalue; zero means linear dependence.
pub fn gram_condition<T: Real>(vectors: &[Vec<Complex<T>>]) -> T {
    let g = gram(vectors);
    let e = hermitian_eig(&g).expect("Gram matrices are Hermitian");
    let hi = e.values.first().copied().unwrap_or_else(T::zero);
    let lo = e.values.last().copied().unwrap_or_else(T::zero);
    if hi <= T::zero() {
        T::zero()
    } else {
        lo / hi
    }
}
