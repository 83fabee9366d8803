use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::closed_form::SpectrumMulti;
use crate::error::{Error, Result};
use crate::level_ops::LevelMatrix;

/// Relative residual accepted from the eigensolver.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Columns whose relative residual exceeds this are refined.
const REFINE_TRIGGER: f64 = 1e-11;

/// Relative width used to group numeric eigenvalues into multiplicities.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is a unit eigenvector for `values[i]`.
    pub vectors: Option<DMatrix<f64>>,
    /// `max_i ‖M vᵢ − λᵢ vᵢ‖`.
    pub residual: f64,
    /// Spectral-norm bound used to scale tolerances (max absolute eigenvalue).
    pub norm: f64,
}

impl EigenResult {
    /// Groups values closer than `CLUSTER_TOLERANCE · ‖M‖` into one pair.
    pub fn clustered(&self) -> SpectrumMulti {
        let tol = CLUSTER_TOLERANCE * self.norm.max(1.0);
        let mut pairs: Vec<(f64, u64, f64)> = Vec::new(); // (sum, count, last)
        for &v in &self.values {
            match pairs.last_mut() {
                Some((sum, count, last)) if v - *last <= tol => {
                    *sum += v;
                    *count += 1;
                    *last = v;
                }
                _ => pairs.push((v, 1, v)),
            }
        }
        SpectrumMulti::from_pairs_with_tolerance(
            pairs.into_iter().map(|(s, c, _)| (s / c as f64, c)),
            0.0,
        )
    }
}

/// Eigen-decomposition of an exactly symmetric rational matrix.
pub fn eigen_symmetric(m: &LevelMatrix) -> Result<EigenResult> {
    if let Some((row, col)) = m.asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    eigen_symmetric_f64(&m.to_f64())
}

/// Same for a float matrix; symmetry is required bit for bit.
pub fn eigen_symmetric_f64(m: &DMatrix<f64>) -> Result<EigenResult> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: m.ncols(),
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            if m[(i, j)] != m[(j, i)] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    if n == 0 {
        return Ok(EigenResult {
            values: Vec::new(),
            vectors: None,
            residual: 0.0,
            norm: 0.0,
        });
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let norm = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let scale = norm.max(1.0);

    let column_residual = |vectors: &DMatrix<f64>, values: &[f64], c: usize| -> f64 {
        let v: DVector<f64> = vectors.column(c).into_owned();
        (m * &v - &v * values[c]).norm()
    };
    // the QL iteration occasionally returns an inaccurate vector inside a
    // large degenerate cluster while the eigenvalues stay accurate
    let mut c = 0;
    while c < n {
        let mut end = c + 1;
        while end < n && values[end] - values[end - 1] <= CLUSTER_TOLERANCE * scale {
            end += 1;
        }
        if (c..end).any(|k| column_residual(&vectors, &values, k) > REFINE_TRIGGER * scale) {
            refine_cluster(m, &mut vectors, &mut values, c, end, scale)?;
        }
        c = end;
    }
    let residual = (0..n)
        .map(|c| column_residual(&vectors, &values, c))
        .fold(0.0f64, f64::max);
    if residual > RESIDUAL_TOLERANCE * scale {
        return Err(Error::Internal(format!(
            "eigensolver residual {residual:e} exceeds bound"
        )));
    }
    let gram = vectors.transpose() * &vectors;
    let orth = (&gram - DMatrix::identity(n, n)).amax();
    if orth > RESIDUAL_TOLERANCE * n as f64 {
        return Err(Error::Internal(format!(
            "eigenvectors not orthonormal ({orth:e})"
        )));
    }
    Ok(EigenResult {
        values,
        vectors: Some(vectors),
        residual,
        norm,
    })
}

/// Subspace inverse iteration on columns `lo..hi` followed by a Rayleigh–Ritz
/// rotation inside the refined block.
fn refine_cluster(
    m: &DMatrix<f64>,
    vectors: &mut DMatrix<f64>,
    values: &mut [f64],
    lo: usize,
    hi: usize,
    scale: f64,
) -> Result<()> {
    let n = m.nrows();
    let k = hi - lo;
    let mean = values[lo..hi].iter().sum::<f64>() / k as f64;
    let shifted = m - DMatrix::identity(n, n) * (mean + 1e-8 * scale);
    let lu = shifted.lu();
    let mut block = vectors.columns(lo, k).into_owned();
    for _ in 0..3 {
        let solved = lu
            .solve(&block)
            .ok_or_else(|| Error::Internal("singular shift in refinement".into()))?;
        block = solved.qr().q();
    }
    let small = block.transpose() * m * &block;
    let small = (&small + small.transpose()) * 0.5;
    let ritz = SymmetricEigen::new(small);
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| ritz.eigenvalues[a].total_cmp(&ritz.eigenvalues[b]));
    let rotated = &block * &ritz.eigenvectors;
    for (j, &i) in idx.iter().enumerate() {
        vectors.set_column(lo + j, &rotated.column(i));
        values[lo + j] = ritz.eigenvalues[i];
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumComparison {
    pub dim: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares the expanded closed-form list with numeric values, index by index
/// after sorting.
pub fn compare_spectra(
    closed: &SpectrumMulti,
    numeric: &EigenResult,
    tol: f64,
) -> Result<SpectrumComparison> {
    compare_value_lists(&closed.expand(), &numeric.values, tol)
}

pub fn compare_value_lists(a: &[f64], b: &[f64], tol: f64) -> Result<SpectrumComparison> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let max_deviation = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(SpectrumComparison {
        dim: a.len(),
        max_deviation,
        tolerance: tol,
        pass: max_deviation <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level_ops::integer;

    #[test]
    fn two_by_two() {
        let m = LevelMatrix::from_integer_rows(&[&[3, 1], &[1, 3]]).unwrap();
        let e = eigen_symmetric(&m).unwrap();
        assert!((e.values[0] - 2.0).abs() < 1e-12 && (e.values[1] - 4.0).abs() < 1e-12);
        let id = eigen_symmetric(&LevelMatrix::identity(5)).unwrap();
        let c = id.clustered();
        assert_eq!(c.pairs.len(), 1);
        assert_eq!(c.pairs[0].mult, 5);
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = LevelMatrix::identity(3);
        m.set(0, 2, integer(1));
        assert!(matches!(
            eigen_symmetric(&m),
            Err(Error::NotSymmetric { row: 0, col: 2 })
        ));
    }

    #[test]
    fn comparison_detects_perturbation() {
        let m = LevelMatrix::from_integer_rows(&[&[3, 1], &[1, 3]]).unwrap();
        let e = eigen_symmetric(&m).unwrap();
        let good = SpectrumMulti::from_pairs([(2.0, 1), (4.0, 1)]);
        assert!(compare_spectra(&good, &e, 1e-9).unwrap().pass);
        let bad = SpectrumMulti::from_pairs([(2.0, 1), (4.0 + 1e-6, 1)]);
        assert!(!compare_spectra(&bad, &e, 1e-9).unwrap().pass);
        let short = SpectrumMulti::from_pairs([(2.0, 1)]);
        assert!(compare_spectra(&short, &e, 1e-9).is_err());
    }
}
