use core::f64::consts::PI;

use num_complex::Complex64;

/// In-place iterative radix-2 transform computing Σ_k x_k e^{−2πi jk/N}.
///
/// Panics unless the length is a power of two.
pub(crate) fn forward(data: &mut [Complex64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let step = Complex64::from_polar(1.0, -2.0 * PI / len as f64);
        for chunk in data.chunks_mut(len) {
            let half = len / 2;
            let mut w = Complex64::new(1.0, 0.0);
            for k in 0..half {
                // recompute periodically to limit drift on long transforms
                if k % 64 == 0 {
                    w = Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64);
                }
                let t = chunk[k + half] * w;
                chunk[k + half] = chunk[k] - t;
                chunk[k] += t;
                w *= step;
            }
        }
        len <<= 1;
    }
}
