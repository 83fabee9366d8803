use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::dynamics::{
    conjugate_to_julia, dyn_classify, preimage_sets, DynamicsCase, QuadraticDynamics,
};
use super::spectrum::{pi_pm, spectrum_g, spectrum_gtilde};
use crate::error::{Error, Result};
use crate::level_ops::rational;
use crate::tree_groups::GroupPreset;

/// Tolerance for recognising an eigenvalue among the closed-form families.
pub const RECOGNITION_TOLERANCE: f64 = 1e-9;

/// Deepest preimage family searched by [`limiting_weight`].
const MAX_FAMILY_DEPTH: usize = 14;

/// Description of the spectrum of the operator on the boundary action.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitSpectrum {
    /// A finite union of closed intervals.
    Intervals { intervals: Vec<(f64, f64)> },
    /// `{1 ± √(5 − θ)}` over the invariant Cantor set of `F`, which is
    /// `ψ(K)` for the filled Julia set `K` of `z² − λ`.
    Cantor {
        lambda: String,
        psi_alpha: String,
        psi_beta: String,
        interval: (f64, f64),
        case: DynamicsCase,
        /// Seed whose backward orbit gives isolated eigenvalues, when it escapes.
        isolated_seed: Option<f64>,
    },
}

pub fn limit_spectrum(group: GroupPreset) -> Result<LimitSpectrum> {
    match group {
        GroupPreset::G => Ok(LimitSpectrum::Intervals {
            intervals: vec![(-2.0, 0.0), (2.0, 4.0)],
        }),
        GroupPreset::Gtilde => Ok(LimitSpectrum::Intervals {
            intervals: vec![(0.0, 4.0)],
        }),
        _ => {
            let d = QuadraticDynamics::for_group(group)?;
            let j = conjugate_to_julia(&d);
            let xi = if group == GroupPreset::Gamma {
                -1.0
            } else {
                2.0
            };
            let case = dyn_classify(&d, xi, 200);
            Ok(LimitSpectrum::Cantor {
                lambda: j.lambda.to_string(),
                psi_alpha: j.alpha.to_string(),
                psi_beta: j.beta.to_string(),
                interval: (d.a, d.b),
                case,
                isolated_seed: (case == DynamicsCase::SupersetXiNotInK).then_some(xi),
            })
        }
    }
}

fn third_power(m: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(3u32).pow(m as u32))
}

/// Limit of `mult/dim` as the level grows, read off the multiplicity tables.
///
/// For the binary presets every eigenvalue is simple so the weight is 0.
/// For the ternary presets a value `π±(θ)` with `θ` in the `m`-th family has
/// weight `3^-m`; this is per eigenvalue, a `±` pair carries twice that.
pub fn limiting_weight(group: GroupPreset, eigenvalue: f64) -> Result<BigRational> {
    let near = |x: f64| (eigenvalue - x).abs() <= RECOGNITION_TOLERANCE;
    match group {
        GroupPreset::G | GroupPreset::Gtilde => {
            for n in 0..=12 {
                let s = if group == GroupPreset::G {
                    spectrum_g(n)
                } else {
                    spectrum_gtilde(n)
                };
                if s.contains(eigenvalue, RECOGNITION_TOLERANCE) {
                    return Ok(BigRational::zero());
                }
            }
            Err(Error::NotAnEigenvalue(eigenvalue))
        }
        GroupPreset::Gamma => {
            if near(4.0) {
                return Ok(BigRational::zero());
            }
            if near(1.0) {
                return Ok(rational(1, 3));
            }
            let sets = preimage_sets(group, MAX_FAMILY_DEPTH)?;
            find_family(&sets.x, eigenvalue)
                .map(third_power)
                .ok_or(Error::NotAnEigenvalue(eigenvalue))
        }
        GroupPreset::GammaBar | GroupPreset::GammaBarBar => {
            if near(4.0) {
                return Ok(BigRational::zero());
            }
            if near(1.0) {
                return Ok(rational(2, 9));
            }
            if near(-2.0) {
                return Ok(rational(1, 3));
            }
            let sets = preimage_sets(group, MAX_FAMILY_DEPTH)?;
            find_family(&sets.x, eigenvalue)
                .or_else(|| find_family(&sets.y, eigenvalue))
                .map(third_power)
                .ok_or(Error::NotAnEigenvalue(eigenvalue))
        }
    }
}

fn find_family(families: &[(usize, Vec<f64>)], eigenvalue: f64) -> Option<usize> {
    families.iter().find_map(|(m, thetas)| {
        thetas
            .iter()
            .any(|&t| {
                let (lo, hi) = pi_pm(t);
                (lo - eigenvalue).abs() <= RECOGNITION_TOLERANCE
                    || (hi - eigenvalue).abs() <= RECOGNITION_TOLERANCE
            })
            .then_some(*m)
    })
}

/// Hausdorff distance between a finite set and a finite union of closed
/// intervals.
pub fn hausdorff_distance(points: &[f64], intervals: &[(f64, f64)]) -> f64 {
    if points.is_empty() || intervals.is_empty() {
        return f64::INFINITY;
    }
    let to_intervals = |x: f64| {
        intervals
            .iter()
            .map(|&(lo, hi)| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let to_points = |y: f64| {
        let i = sorted.partition_point(|&p| p < y);
        let mut best = f64::INFINITY;
        if i < sorted.len() {
            best = best.min((sorted[i] - y).abs());
        }
        if i > 0 {
            best = best.min((sorted[i - 1] - y).abs());
        }
        best
    };
    let from_points = sorted.iter().map(|&x| to_intervals(x)).fold(0.0, f64::max);
    // the farthest interval point from a sorted set is an endpoint or a
    // midpoint between consecutive set points
    let mut from_intervals: f64 = 0.0;
    for &(lo, hi) in intervals {
        from_intervals = from_intervals.max(to_points(lo)).max(to_points(hi));
        for w in sorted.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            if mid > lo && mid < hi {
                from_intervals = from_intervals.max(to_points(mid));
            }
        }
    }
    from_points.max(from_intervals)
}
