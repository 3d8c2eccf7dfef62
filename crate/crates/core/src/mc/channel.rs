//! Rayleigh channels and zero-forcing precoders.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{invalid, Error, Result};

/// One `CN(0, variance)` sample.
pub fn complex_gaussian<R: Rng>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// `rows x cols` matrix with i.i.d. `CN(0, variance)` entries.
pub fn rayleigh_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, variance: f64) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, variance))
}

pub fn rayleigh_vector<R: Rng>(rng: &mut R, len: usize, variance: f64) -> DVector<Complex64> {
    DVector::from_fn(len, |_, _| complex_gaussian(rng, variance))
}

/// Zero-forcing precoder for the `M x K` channel matrix whose columns are
/// the UE channels: `H (H^H H)^-1` with unit-norm columns.
pub fn zf_precoder(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let (m, k) = h.shape();
    if m < k {
        return Err(invalid(format!("zero-forcing needs M >= K, got {m} x {k}")));
    }
    let gram = h.adjoint() * h;
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::SingularPrecoder("channel Gram matrix is not positive definite".into()))?;
    let mut w = h * chol.inverse();
    for mut col in w.column_iter_mut() {
        let norm = col.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::SingularPrecoder("zero-norm precoder column".into()));
        }
        col /= Complex64::new(norm, 0.0);
    }
    Ok(w)
}

/// `|h^H w|^2`.
pub fn beam_gain(h: &DVector<Complex64>, w: nalgebra::DVectorView<'_, Complex64>) -> f64 {
    h.dotc(&w).norm_sqr()
}

/// `||h^H W||^2`.
pub fn leakage_gain(h: &DVector<Complex64>, w: &DMatrix<Complex64>) -> f64 {
    (w.adjoint() * h).norm_squared()
}

/// Desired gain `|h_0^H w_0|^2` of the typical UE (column 0) under
/// zero-forcing to `k` UEs with channel variance `variance`.
pub fn explicit_desired_gain<R: Rng>(rng: &mut R, m: usize, k: usize, variance: f64) -> Result<f64> {
    let h = rayleigh_matrix(rng, m, k, variance);
    let w = zf_precoder(&h)?;
    Ok(beam_gain(&h.column(0).into_owned(), w.column(0)))
}

/// Leakage `||h^H W||^2` from an AP precoding for its own `k` UEs to a UE
/// whose channel has variance `variance`.
pub fn explicit_leakage<R: Rng>(rng: &mut R, m: usize, k: usize, variance: f64) -> Result<f64> {
    let own = rayleigh_matrix(rng, m, k, 1.0);
    let w = zf_precoder(&own)?;
    let h = rayleigh_vector(rng, m, variance);
    Ok(leakage_gain(&h, &w))
}

/// Gamma draw with integer shape and unit scale.
pub(crate) fn gamma_unit<R: Rng>(rng: &mut R, shape: f64) -> f64 {
    Gamma::new(shape, 1.0).expect("shape >= 1").sample(rng)
}

/// Desired gain drawn from its law `variance * Gamma(M - K + 1, 1)`.
pub fn distributional_desired_gain<R: Rng>(rng: &mut R, m: usize, k: usize, variance: f64) -> f64 {
    variance * gamma_unit(rng, (m - k + 1) as f64)
}

/// Leakage drawn as `variance * Gamma(K, 1)`: exact in mean, and in law when
/// the precoder columns are orthogonal.
pub fn distributional_leakage<R: Rng>(rng: &mut R, k: usize, variance: f64) -> f64 {
    variance * gamma_unit(rng, k as f64)
}
