//! Haar-distributed unitary samples.

use super::McError;
use ndarray::prelude::*;
use ndarray_linalg::QR;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// The first `m` columns of a Haar-distributed `n`×`n` unitary.
///
/// QR of an i.i.d. complex Gaussian block; the R-diagonal phases are
/// pushed into Q so the factorization becomes the unique one with a
/// positive diagonal, which makes the law exactly Haar rather than
/// merely unitary.
pub(crate) fn haar_frame(n: usize, m: usize, rng: &mut ChaCha12Rng) -> Array2<Complex64> {
    debug_assert!(0 < m && m <= n);
    let g = Array2::from_shape_fn((n, m), |_| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let (mut q, r) = g.qr().expect("QR of a Gaussian sample");
    for j in 0..m {
        let d = r[(j, j)];
        // d = 0 has probability zero; the fallback keeps the column unit.
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).mapv_inplace(|z| z * ph);
    }
    q
}

/// A Haar-distributed `n`×`n` unitary for the given seed. Identical
/// inputs reproduce the identical matrix.
pub fn haar_unitary(n: usize, seed: u64) -> Result<Array2<Complex64>, McError> {
    if n < 2 {
        return Err(McError::DimensionTooSmall { got: n, min: 2 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(haar_frame(n, n, &mut rng))
}
