use nalgebra::DVector;

use crate::closed_form::spectrum_g;
use crate::error::{Error, Result};
use crate::level_ops::level_images;
use crate::tree_groups::{GroupPreset, TreeWord};

/// Tolerance for accepting `λ` as a member of the level-`n` spectrum.
const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

/// Words of length `n` along the Schreier path of G, starting at `1ⁿ`.
///
/// Each word `σⱼ` of the previous level is replaced by the pair
/// `(1σⱼ, 0σⱼ)` for odd `j` and `(0σⱼ, 1σⱼ)` for even `j`.
pub fn path_order_g(n: usize) -> Vec<TreeWord> {
    let mut order = vec![TreeWord::root()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(order.len() * 2);
        for (j, w) in order.iter().enumerate() {
            let (first, second) = if j % 2 == 0 { (1, 0) } else { (0, 1) };
            next.push(w.prefixed(first));
            next.push(w.prefixed(second));
        }
        order = next;
    }
    order
}

/// Values `v₁ … v_{2ⁿ}` of the eigenvector recursion, in path order.
pub fn path_values_g(n: usize, lambda: f64) -> Vec<f64> {
    let len = 1usize << n;
    let mut v = Vec::with_capacity(len);
    v.push(1.0);
    if len > 1 {
        v.push(lambda - 3.0);
    }
    for i in 3..=len {
        let (a, b) = (v[i - 2], v[i - 3]);
        v.push(if i % 2 == 1 {
            ((lambda - 1.0) * a - b) / 2.0
        } else {
            (lambda - 1.0) * a - 2.0 * b
        });
    }
    v
}

/// Eigenvector of `Δₙ` for G with eigenvalue `λ`, indexed by word index.
pub fn eigenvector_g(n: usize, lambda: f64) -> Result<DVector<f64>> {
    if !spectrum_g(n).contains(lambda, MEMBERSHIP_TOLERANCE) {
        return Err(Error::NotAnEigenvalue(lambda));
    }
    let mut out = DVector::zeros(1 << n);
    for (w, x) in path_order_g(n).iter().zip(path_values_g(n, lambda)) {
        out[w.index(2)] = x;
    }
    Ok(out)
}

/// `Δₙ v` computed from the generator images without forming a matrix.
pub fn apply_hecke(preset: GroupPreset, n: usize, v: &DVector<f64>) -> Result<DVector<f64>> {
    let images = level_images(preset, n)?;
    if v.len() != images[0].len() {
        return Err(Error::DimensionMismatch {
            left: v.len(),
            right: images[0].len(),
        });
    }
    let mut out = DVector::zeros(v.len());
    for g in preset.generators() {
        for (j, &i) in images[g.index()].iter().enumerate() {
            out[i] += v[j];
        }
    }
    Ok(out)
}

/// `‖Δₙv − λv‖ / ‖v‖`.
pub fn relative_residual(
    preset: GroupPreset,
    n: usize,
    v: &DVector<f64>,
    lambda: f64,
) -> Result<f64> {
    let r = apply_hecke(preset, n, v)? - v * lambda;
    Ok(r.norm() / v.norm())
}
