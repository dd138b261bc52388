//! Fixtures shared by the benchmarks.

use nhqc_core::linalg::{ComplexMatrix, C64};

/// Deterministic dense Hermitian matrix with entries of order one.
pub fn dense_hermitian(dim: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in r..dim {
            let x = ((r * 31 + c * 17) % 23) as f64 / 23.0 - 0.5;
            let y = if r == c { 0.0 } else { ((r * 7 + c * 13) % 19) as f64 / 19.0 - 0.5 };
            h.set(r, c, C64::new(x, y));
            h.set(c, r, C64::new(x, -y));
        }
    }
    h
}
