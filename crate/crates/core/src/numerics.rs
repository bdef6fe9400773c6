//! Dense complex-matrix kernels: Hermitian spectral decomposition,
//! functional calculus, and Perron–Frobenius data for nonnegative matrices.
//!
//! Everything here is deterministic: eigenvector phases are fixed by making
//! the largest-magnitude component real positive, so golden tests can pin
//! decompositions bit-for-bit on a given platform.

use nalgebra::{ComplexField, RealField};
use num_complex::Complex;
use num_traits::{Float, FromPrimitive, Zero};

use crate::error::{Error, Result};
use crate::{CMat, CVec, RMat, RVec, C};

/// Real scalar the engine is generic over: `f32` or `f64`.
pub trait Real: RealField + Float + FromPrimitive + Copy + Default {}
impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an `f64` literal into the generic scalar.
pub fn r<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("literal fits in scalar")
}

pub fn rabs<R: Real>(x: R) -> R {
    <R as ComplexField>::abs(x)
}

pub fn rmax<R: Real>(x: R, y: R) -> R {
    <R as RealField>::max(x, y)
}

pub fn rexp<R: Real>(x: R) -> R {
    <R as ComplexField>::exp(x)
}

pub fn rln<R: Real>(x: R) -> R {
    <R as ComplexField>::ln(x)
}

pub fn rsqrt<R: Real>(x: R) -> R {
    <R as ComplexField>::sqrt(x)
}

pub fn rpowf<R: Real>(x: R, p: R) -> R {
    <R as ComplexField>::powf(x, p)
}

/// Complex scalar from real and imaginary `f64` literals.
pub fn c<R: Real>(re: f64, im: f64) -> C<R> {
    Complex::new(r(re), r(im))
}

/// Numerical tolerances used across the engine.
///
/// `hermitian_tol(a)` is relative, `1e-9 * (1 + ||a||)`; the positivity
/// floor is relative to the top of the spectrum, `1e-10 * max_eig`. Both
/// scales make exact paper-level assumptions (faithfulness, positivity)
/// checkable on floating-point data.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances<R: Real> {
    pub hermitian_rel: R,
    pub positivity_rel: R,
    pub gram_cutoff_rel: R,
}

impl<R: Real> Default for Tolerances<R> {
    fn default() -> Self {
        Tolerances {
            hermitian_rel: r(1e-9),
            positivity_rel: r(1e-10),
            gram_cutoff_rel: r(1e-10),
        }
    }
}

/// Outcome of a Hermitian eigendecomposition, eigenvalues ascending,
/// eigenvectors as the columns of a unitary.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum<R: Real> {
    pub eigenvalues: RVec<R>,
    pub eigenvectors: CMat<R>,
}

impl<R: Real> HermitianSpectrum<R> {
    /// `U diag(f(λ)) U*` for a complex-valued function of the spectrum.
    pub fn apply<F: Fn(R) -> C<R>>(&self, f: F) -> CMat<R> {
        let n = self.eigenvalues.len();
        let mut d = CMat::<R>::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = f(self.eigenvalues[i]);
        }
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    pub fn min_eig(&self) -> R {
        self.eigenvalues[0]
    }

    pub fn max_eig(&self) -> R {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Frobenius norm of a complex matrix.
pub fn fro_norm<R: Real>(a: &CMat<R>) -> R {
    a.norm()
}

/// Hermitian eigendecomposition with deterministic phases.
///
/// The input is symmetrized to `(A + A*)/2` before decomposing; a deviation
/// from Hermiticity beyond `hermitian_tol` is a validation error.
pub fn herm_eig<R: Real>(a: &CMat<R>, tol: &Tolerances<R>) -> Result<HermitianSpectrum<R>> {
    if a.nrows() != a.ncols() {
        return Err(Error::validation(format!(
            "herm_eig: matrix is {}x{}, not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let dev = fro_norm(&(a - a.adjoint()));
    let allowed = tol.hermitian_rel * (R::one() + fro_norm(a));
    if dev > allowed {
        return Err(Error::validation(format!(
            "herm_eig: non-Hermitian beyond tolerance (deviation {:e})",
            num_traits::ToPrimitive::to_f64(&dev).unwrap_or(f64::NAN)
        )));
    }
    let sym = (a + a.adjoint()).scale(r(0.5));
    let se = nalgebra::linalg::SymmetricEigen::new(sym);

    // Sort ascending and fix phases.
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        se.eigenvalues[i]
            .partial_cmp(&se.eigenvalues[j])
            .expect("finite eigenvalues")
    });
    let mut eigenvalues = RVec::<R>::zeros(n);
    let mut eigenvectors = CMat::<R>::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        eigenvalues[k] = se.eigenvalues[i];
        let col = se.eigenvectors.column(i);
        // Phase so the largest-magnitude component is real positive.
        let mut best = 0;
        let mut best_mag = R::zero();
        for (idx, v) in col.iter().enumerate() {
            let m = v.norm_sqr();
            if m > best_mag {
                best_mag = m;
                best = idx;
            }
        }
        let pivot = col[best];
        let phase = if pivot.norm() > R::zero() {
            pivot.unscale(pivot.norm()).conj()
        } else {
            Complex::new(R::one(), R::zero())
        };
        for idx in 0..n {
            eigenvectors[(idx, k)] = col[idx] * phase;
        }
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Spectral functions supported by [`func_calc`].
#[derive(Debug, Clone, Copy)]
pub enum MatrixFunction<R: Real> {
    Log,
    Exp,
    /// `A^{it}` for real `t`; returns a unitary.
    ImaginaryPower(R),
}

/// Functional calculus on a positive-definite (for `Log` and
/// `ImaginaryPower`) or Hermitian (for `Exp`) matrix.
pub fn func_calc<R: Real>(
    a: &CMat<R>,
    f: MatrixFunction<R>,
    tol: &Tolerances<R>,
) -> Result<CMat<R>> {
    let spec = herm_eig(a, tol)?;
    match f {
        MatrixFunction::Exp => Ok(spec.apply(|x| Complex::new(rexp(x), R::zero()))),
        MatrixFunction::Log => {
            check_positive(&spec, tol, "log")?;
            Ok(spec.apply(|x| Complex::new(rln(x), R::zero())))
        }
        MatrixFunction::ImaginaryPower(t) => {
            check_positive(&spec, tol, "imaginary-power")?;
            Ok(spec.apply(|x| {
                let theta = t * rln(x);
                Complex::new(<R as ComplexField>::cos(theta), <R as ComplexField>::sin(theta))
            }))
        }
    }
}

fn check_positive<R: Real>(
    spec: &HermitianSpectrum<R>,
    tol: &Tolerances<R>,
    what: &str,
) -> Result<()> {
    let floor = tol.positivity_rel * rmax(spec.max_eig(), R::zero());
    if spec.min_eig() <= floor {
        return Err(Error::singular(format!(
            "{what}: eigenvalue {:e} at or below positivity floor",
            num_traits::ToPrimitive::to_f64(&spec.min_eig()).unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

/// `A^p` for Hermitian positive-semidefinite `A` and real `p`.
///
/// Negative powers and `p in (0,1)` require strict positivity above the
/// floor; nonnegative integer-like powers tolerate a PSD input by clamping
/// tiny negative eigenvalues to zero.
pub fn hermitian_power<R: Real>(a: &CMat<R>, p: R, tol: &Tolerances<R>) -> Result<CMat<R>> {
    let spec = herm_eig(a, tol)?;
    let floor = tol.positivity_rel * rmax(spec.max_eig(), R::zero());
    if p < R::zero() && spec.min_eig() <= floor {
        return Err(Error::singular(
            "hermitian_power: negative power of a singular matrix".to_string(),
        ));
    }
    Ok(spec.apply(|x| {
        let x = rmax(x, R::zero());
        if x == R::zero() {
            Complex::zero()
        } else {
            Complex::new(rpowf(x, p), R::zero())
        }
    }))
}

/// Perron–Frobenius data of an entrywise-nonnegative real matrix: its
/// operator (largest singular) value and unit-length nonnegative extremal
/// vectors.
#[derive(Debug, Clone)]
pub struct PerronFrobenius<R: Real> {
    pub norm: R,
    pub left: RVec<R>,
    pub right: RVec<R>,
}

/// Largest singular value and extremal vectors of a nonnegative matrix.
pub fn pf_eigen<R: Real>(d: &RMat<R>) -> Result<PerronFrobenius<R>> {
    let mut positive = false;
    for v in d.iter() {
        if *v < R::zero() {
            return Err(Error::validation(
                "pf_eigen: matrix has a negative entry".to_string(),
            ));
        }
        if *v > R::zero() {
            positive = true;
        }
    }
    if !positive {
        return Err(Error::validation("pf_eigen: all-zero matrix".to_string()));
    }
    let svd = d.clone().svd(true, true);
    let mut best = 0;
    for i in 0..svd.singular_values.len() {
        if svd.singular_values[i] > svd.singular_values[best] {
            best = i;
        }
    }
    let norm = svd.singular_values[best];
    let u = svd.u.as_ref().expect("svd vectors requested");
    let vt = svd.v_t.as_ref().expect("svd vectors requested");
    let left = nonneg_unit(u.column(best).into_owned());
    let right = nonneg_unit(vt.row(best).transpose());
    Ok(PerronFrobenius { norm, left, right })
}

fn nonneg_unit<R: Real>(mut v: RVec<R>) -> RVec<R> {
    let mut best = R::zero();
    let mut sign = R::one();
    for x in v.iter() {
        if rabs(*x) > best {
            best = rabs(*x);
            sign = if *x < R::zero() { -R::one() } else { R::one() };
        }
    }
    for x in v.iter_mut() {
        *x = RealField::max(*x * sign, R::zero());
    }
    let n = v.norm();
    if n > R::zero() {
        v /= n;
    }
    v
}

// ---------------------------------------------------------------------------
// Tensor helpers (row-major vectorization convention).
// ---------------------------------------------------------------------------

/// Row-major vectorization: `vec_row(X)[i*cols + j] = X[(i, j)]`, so that
/// `vec_row(A X B) = (A ⊗ Bᵀ) vec_row(X)`.
pub fn vec_row<R: Real>(x: &CMat<R>) -> CVec<R> {
    let (rows, cols) = x.shape();
    let mut v = CVec::<R>::zeros(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            v[i * cols + j] = x[(i, j)];
        }
    }
    v
}

/// Inverse of [`vec_row`].
pub fn unvec_row<R: Real>(v: &CVec<R>, rows: usize, cols: usize) -> CMat<R> {
    assert_eq!(v.len(), rows * cols, "unvec_row: size mismatch");
    let mut x = CMat::<R>::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            x[(i, j)] = v[i * cols + j];
        }
    }
    x
}

/// `Tr₁` of an operator on `C^{d1} ⊗ C^{d2}`.
pub fn partial_trace_first<R: Real>(m: &CMat<R>, d1: usize, d2: usize) -> CMat<R> {
    assert_eq!(m.nrows(), d1 * d2);
    let mut out = CMat::<R>::zeros(d2, d2);
    for a in 0..d1 {
        for k in 0..d2 {
            for l in 0..d2 {
                out[(k, l)] += m[(a * d2 + k, a * d2 + l)];
            }
        }
    }
    out
}

/// `Tr₂` of an operator on `C^{d1} ⊗ C^{d2}`.
pub fn partial_trace_second<R: Real>(m: &CMat<R>, d1: usize, d2: usize) -> CMat<R> {
    assert_eq!(m.nrows(), d1 * d2);
    let mut out = CMat::<R>::zeros(d1, d1);
    for a in 0..d1 {
        for b in 0..d1 {
            for k in 0..d2 {
                out[(a, b)] += m[(a * d2 + k, b * d2 + k)];
            }
        }
    }
    out
}

/// Identity matrix.
pub fn eye<R: Real>(n: usize) -> CMat<R> {
    CMat::<R>::identity(n, n)
}

/// Kronecker product of three factors.
pub fn kron3<R: Real>(a: &CMat<R>, b: &CMat<R>, c: &CMat<R>) -> CMat<R> {
    a.kronecker(b).kronecker(c)
}

/// Permutation matrix sending basis vector `|a, s, c|` of
/// `C^{d1} ⊗ C^{d2} ⊗ C^{d3}` to `|a, c, s|` of `C^{d1} ⊗ C^{d3} ⊗ C^{d2}`.
pub fn swap_last_two<R: Real>(d1: usize, d2: usize, d3: usize) -> CMat<R> {
    let n = d1 * d2 * d3;
    let mut p = CMat::<R>::zeros(n, n);
    for a in 0..d1 {
        for s in 0..d2 {
            for cc in 0..d3 {
                let old = (a * d2 + s) * d3 + cc;
                let new = (a * d3 + cc) * d2 + s;
                p[(new, old)] = Complex::new(R::one(), R::zero());
            }
        }
    }
    p
}

/// Entrywise complex conjugate (not the adjoint).
pub fn conj_entrywise<R: Real>(a: &CMat<R>) -> CMat<R> {
    a.map(|z| z.conj())
}

// ---------------------------------------------------------------------------
// Seeded random matrix material for property suites and the CLI.
// ---------------------------------------------------------------------------

/// Standard-normal real sample via Box–Muller.
fn normal<R: Real, RNG: rand::Rng>(rng: &mut RNG) -> R {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    r((-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos())
}

/// Complex Ginibre matrix: iid standard-normal real and imaginary parts.
pub fn random_ginibre<R: Real, RNG: rand::Rng>(rng: &mut RNG, rows: usize, cols: usize) -> CMat<R> {
    CMat::<R>::from_fn(rows, cols, |_, _| Complex::new(normal(rng), normal(rng)))
}

/// Random Hermitian matrix.
pub fn random_hermitian<R: Real, RNG: rand::Rng>(rng: &mut RNG, n: usize) -> CMat<R> {
    let g = random_ginibre(rng, n, n);
    (&g + g.adjoint()).scale(r(0.5))
}

/// Random positive-definite matrix `G G* + εI`, well away from singular.
pub fn random_pd<R: Real, RNG: rand::Rng>(rng: &mut RNG, n: usize) -> CMat<R> {
    let g = random_ginibre::<R, _>(rng, n, n);
    &g * g.adjoint() + eye::<R>(n).scale(r(0.05))
}

/// Haar-ish random unitary from the QR decomposition of a Ginibre matrix,
/// with the R-diagonal phases absorbed.
pub fn random_unitary<R: Real, RNG: rand::Rng>(rng: &mut RNG, n: usize) -> CMat<R> {
    let g = random_ginibre::<R, _>(rng, n, n);
    let qr = g.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..n {
        let d = rr[(j, j)];
        let phase = if d.norm() > R::zero() {
            d.unscale(d.norm()).conj()
        } else {
            Complex::new(R::one(), R::zero())
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}
