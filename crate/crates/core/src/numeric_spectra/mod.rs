//! Numerical oracle: dense symmetric eigensolver, spectral measures and the
//! explicit eigenvectors for G.

mod eigen;
mod eigenvector;
mod measure;

pub use eigen::{
    compare_spectra, compare_value_lists, eigen_symmetric, eigen_symmetric_f64, EigenResult,
    SpectrumComparison, CLUSTER_TOLERANCE, RESIDUAL_TOLERANCE,
};
pub use eigenvector::{apply_hecke, eigenvector_g, path_order_g, path_values_g, relative_residual};
pub use measure::{
    cdf_g, cdf_gtilde, density_g, density_gtilde, empiric_histogram, integrate_density,
    kesten_measure, ks_distance, ks_distance_discrete, ks_distance_histogram, moment_check,
    DiscreteMeasure, Histogram, MomentReport, HISTOGRAM_RANGE,
};

use nalgebra::DMatrix;

use crate::error::Result;
use crate::level_ops::level_images;
use crate::limits;
use crate::tree_groups::GroupPreset;

/// `Δₙ` as a float matrix, built straight from the generator images.
pub fn hecke_f64(preset: GroupPreset, n: usize) -> Result<DMatrix<f64>> {
    let dim = limits::dense_dim(preset.alphabet_size(), n)?;
    let images = level_images(preset, n)?;
    let mut m = DMatrix::zeros(dim, dim);
    for g in preset.generators() {
        for (j, &i) in images[g.index()].iter().enumerate() {
            m[(i, j)] += 1.0;
        }
    }
    Ok(m)
}

/// Eigenvalues of `Δₙ` for a preset.
pub fn numeric_spectrum(preset: GroupPreset, n: usize) -> Result<EigenResult> {
    eigen_symmetric_f64(&hecke_f64(preset, n)?)
}
