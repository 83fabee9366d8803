use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::dynamics::{preimage_sets, PreimageSets};
use crate::error::{Error, Result};
use crate::tree_groups::GroupPreset;

/// Values closer than this are merged.
pub const DEDUP_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    pub mult: u64,
}

/// Sorted eigenvalues with multiplicities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMulti {
    pub pairs: Vec<EigenPair>,
    pub dim: u64,
}

impl SpectrumMulti {
    /// Sorts, merges values within [`DEDUP_TOLERANCE`] (summing
    /// multiplicities) and drops zero multiplicities.
    pub fn from_pairs(raw: impl IntoIterator<Item = (f64, u64)>) -> Self {
        Self::from_pairs_with_tolerance(raw, DEDUP_TOLERANCE)
    }

    pub fn from_pairs_with_tolerance(raw: impl IntoIterator<Item = (f64, u64)>, tol: f64) -> Self {
        let mut raw: Vec<(f64, u64)> = raw.into_iter().filter(|&(_, m)| m > 0).collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pairs: Vec<EigenPair> = Vec::with_capacity(raw.len());
        for (value, mult) in raw {
            match pairs.last_mut() {
                Some(last) if (value - last.value).abs() <= tol * (1.0 + value.abs()) => {
                    last.mult += mult
                }
                _ => pairs.push(EigenPair { value, mult }),
            }
        }
        let dim = pairs.iter().map(|p| p.mult).sum();
        Self { pairs, dim }
    }

    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    /// Every value repeated according to its multiplicity.
    pub fn expand(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .flat_map(|p| std::iter::repeat_n(p.value, p.mult as usize))
            .collect()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.pairs.iter().map(|p| p.mult).sum()
    }

    /// Multiplicity of the value closest to `x`, if within `tol`.
    pub fn multiplicity_near(&self, x: f64, tol: f64) -> Option<u64> {
        self.pairs
            .iter()
            .find(|p| (p.value - x).abs() <= tol)
            .map(|p| p.mult)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.multiplicity_near(x, tol).is_some()
    }

    pub fn is_simple(&self) -> bool {
        self.pairs.iter().all(|p| p.mult == 1)
    }
}

fn pow3(k: i64) -> u64 {
    3u64.pow(u32::try_from(k).expect("non-negative exponent"))
}

/// `π±(θ) = 1 ± √(5 − θ)`.
pub fn pi_pm(theta: f64) -> (f64, f64) {
    let r = (5.0 - theta).max(0.0).sqrt();
    (1.0 - r, 1.0 + r)
}

/// `{1 ± √(5 − 4 cos φ) : φ ∈ 2πℤ/2ⁿ} \ {0, −2}`.
pub fn spectrum_g(n: usize) -> SpectrumMulti {
    if n == 0 {
        return SpectrumMulti::from_pairs([(4.0, 1)]);
    }
    let half = 1usize << (n - 1);
    let mut raw = Vec::with_capacity(1 << n);
    for j in 0..=half {
        let phi = 2.0 * PI * j as f64 / (1u64 << n) as f64;
        let r = (5.0 - 4.0 * phi.cos()).sqrt();
        if j == 0 {
            raw.push((2.0, 1)); // 1 − 1 = 0 is excluded
        } else if j == half {
            raw.push((4.0, 1)); // 1 − 3 = −2 is excluded
        } else {
            raw.push((1.0 - r, 1));
            raw.push((1.0 + r, 1));
        }
    }
    SpectrumMulti::from_pairs(raw)
}

/// `{2 + 2cos(2πj/2ⁿ⁺¹) : j = 0..2ⁿ−1}`.
pub fn spectrum_gtilde(n: usize) -> SpectrumMulti {
    let denom = (1u64 << (n + 1)) as f64;
    SpectrumMulti::from_pairs(
        (0..1u64 << n).map(|j| (2.0 + 2.0 * (2.0 * PI * j as f64 / denom).cos(), 1)),
    )
}

fn push_pi_pm(raw: &mut Vec<(f64, u64)>, thetas: &[f64], mult: u64) {
    for &t in thetas {
        let (lo, hi) = pi_pm(t);
        raw.push((lo, mult));
        raw.push((hi, mult));
    }
}

/// Spectrum of the Fabrykowski–Gupta operator from the preimage families.
pub fn spectrum_gamma(n: usize) -> Result<SpectrumMulti> {
    match n {
        0 => return Ok(SpectrumMulti::from_pairs([(4.0, 1)])),
        1 => return Ok(SpectrumMulti::from_pairs([(1.0, 2), (4.0, 1)])),
        _ => {}
    }
    let sets = preimage_sets(GroupPreset::Gamma, n)?;
    let n = n as i64;
    let mut raw = vec![(4.0, 1), (1.0, pow3(n - 1) + 1)];
    for (m, xs) in &sets.x {
        push_pi_pm(&mut raw, xs, pow3(n - *m as i64) + 1);
    }
    Ok(SpectrumMulti::from_pairs(raw))
}

/// Spectrum shared by `⟨a, t⟩` and `⟨a, r⟩`.
pub fn spectrum_gamma_bar(n: usize) -> Result<SpectrumMulti> {
    match n {
        0 => return Ok(SpectrumMulti::from_pairs([(4.0, 1)])),
        1 => return Ok(SpectrumMulti::from_pairs([(1.0, 2), (4.0, 1)])),
        _ => {}
    }
    let sets: PreimageSets = preimage_sets(GroupPreset::GammaBar, n + 1)?;
    let n = n as i64;
    let mut raw = vec![(4.0, 1), (1.0, 2 * pow3(n - 2)), (-2.0, pow3(n - 1) - 1)];
    for (m, xs) in &sets.x {
        let m = *m as i64;
        let mult = if m == n + 1 { 2 } else { pow3(n - m) + 1 };
        push_pi_pm(&mut raw, xs, mult);
    }
    for (m, ys) in &sets.y {
        let m = *m as i64;
        if m < n {
            push_pi_pm(&mut raw, ys, pow3(n - m) - 1);
        }
    }
    Ok(SpectrumMulti::from_pairs(raw))
}

/// Closed-form spectrum of `Δₙ` for any preset.
pub fn closed_form_spectrum(group: GroupPreset, n: usize) -> Result<SpectrumMulti> {
    let s = match group {
        GroupPreset::G => spectrum_g(n),
        GroupPreset::Gtilde => spectrum_gtilde(n),
        GroupPreset::Gamma => spectrum_gamma(n)?,
        GroupPreset::GammaBar | GroupPreset::GammaBarBar => spectrum_gamma_bar(n)?,
    };
    let expected = (group.alphabet_size() as u64).pow(n as u32);
    if s.dim != expected {
        return Err(Error::Internal(format!(
            "{group} level {n}: multiplicities sum to {} not {expected}",
            s.dim
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn first_levels_of_g() {
        assert!(close(&spectrum_g(0).values(), &[4.0]));
        assert!(close(&spectrum_g(1).values(), &[2.0, 4.0]));
        let s5 = 5f64.sqrt();
        assert!(close(
            &spectrum_g(2).values(),
            &[1.0 - s5, 2.0, 1.0 + s5, 4.0]
        ));
        let s3 = spectrum_g(3);
        assert_eq!(s3.dim, 8);
        assert!(s3.contains(1.0 + (5.0 + 2.0 * 2f64.sqrt()).sqrt(), 1e-12));
        assert!(s3.contains(1.0 - (5.0 - 2.0 * 2f64.sqrt()).sqrt(), 1e-12));
        assert!(s3.is_simple());
    }

    #[test]
    fn first_levels_of_gtilde() {
        assert!(close(&spectrum_gtilde(0).values(), &[4.0]));
        assert!(close(&spectrum_gtilde(1).values(), &[2.0, 4.0]));
        let r = 2f64.sqrt();
        assert!(close(
            &spectrum_gtilde(2).values(),
            &[2.0 - r, 2.0, 2.0 + r, 4.0]
        ));
    }

    #[test]
    fn ternary_tables() {
        let s = spectrum_gamma(2).unwrap();
        let r6 = 6f64.sqrt();
        assert_eq!(
            s.pairs,
            vec![
                EigenPair {
                    value: 1.0 - r6,
                    mult: 2
                },
                EigenPair {
                    value: 1.0,
                    mult: 4
                },
                EigenPair {
                    value: 1.0 + r6,
                    mult: 2
                },
                EigenPair {
                    value: 4.0,
                    mult: 1
                }
            ]
        );
        let b = spectrum_gamma_bar(2).unwrap();
        let mults: Vec<u64> = b.pairs.iter().map(|p| p.mult).collect();
        assert_eq!(mults, vec![2, 2, 2, 2, 1]);
        assert!((b.pairs[1].value - (1.0 - 3f64.sqrt())).abs() < 1e-12);
        for n in 0..=6 {
            assert_eq!(
                closed_form_spectrum(GroupPreset::Gamma, n).unwrap().dim,
                3u64.pow(n as u32)
            );
            assert_eq!(
                closed_form_spectrum(GroupPreset::GammaBar, n).unwrap().dim,
                3u64.pow(n as u32)
            );
        }
    }

    #[test]
    fn dedup_sums_multiplicities() {
        let s = SpectrumMulti::from_pairs([(1.0, 2), (1.0 + 1e-14, 3), (0.5, 1), (2.0, 0)]);
        assert_eq!(s.pairs.len(), 2);
        assert_eq!(s.pairs[1].mult, 5);
        assert_eq!(s.dim, 6);
        assert_eq!(s.expand(), vec![0.5, 1.0, 1.0, 1.0, 1.0, 1.0]);
    }
}
