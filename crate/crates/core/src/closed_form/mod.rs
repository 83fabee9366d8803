//! Closed-form spectra, renormalisation dynamics and limit sets.

mod dynamics;
mod limit_set;
mod spectrum;

pub use dynamics::{
    conjugate_to_julia, dyn_classify, julia_conjugation, julia_preimages, julia_preimages_of,
    julia_spectral_image, preimage_sets, DynamicsCase, JuliaConjugation, PreimageSets,
    QuadraticDynamics, ESCAPE_TOLERANCE, PREIMAGE_TOLERANCE,
};
pub use limit_set::{
    hausdorff_distance, limit_spectrum, limiting_weight, LimitSpectrum, RECOGNITION_TOLERANCE,
};
pub use spectrum::{
    closed_form_spectrum, pi_pm, spectrum_g, spectrum_gamma, spectrum_gamma_bar, spectrum_gtilde,
    EigenPair, SpectrumMulti, DEDUP_TOLERANCE,
};
