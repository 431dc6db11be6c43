//! Symmetrization: averaging a mechanism with its 180-degree rotation.

use alloc::vec::Vec;

use crate::mechanism::Mechanism;

/// Returns `(M + M^S) / 2` where `M^S[i][j] = M[n-i][n-j]`.
///
/// The result is centrosymmetric, keeps the trace, and keeps DP and every
/// structural property that held on `m`.
pub fn symmetrize(m: &Mechanism) -> Mechanism {
    let n = m.n();
    let entries: Vec<f64> = (0..m.dim() * m.dim())
        .map(|k| {
            let (i, j) = (k / m.dim(), k % m.dim());
            0.5 * (m.get(i, j) + m.get(n - i, n - j))
        })
        .collect();
    // columns of the rotation are columns of m reversed, so sums are preserved
    Mechanism::from_row_major(n, entries).expect("average of two valid mechanisms is valid")
}
