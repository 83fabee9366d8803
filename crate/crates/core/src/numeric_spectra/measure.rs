use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::eigen::{eigen_symmetric, CLUSTER_TOLERANCE};
use crate::closed_form::SpectrumMulti;
use crate::error::{Error, Result};
use crate::level_ops::LevelMatrix;

/// Range covered by [`empiric_histogram`].
pub const HISTOGRAM_RANGE: (f64, f64) = (-4.0, 4.0);

/// Finitely supported measure on the line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteMeasure {
    /// Sorted by location.
    pub atoms: Vec<(f64, f64)>,
    pub total: f64,
}

impl DiscreteMeasure {
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms
            .iter()
            .any(|&(x, m)| !x.is_finite() || m.is_nan() || m < 0.0)
        {
            return Err(Error::InvalidInput(
                "atoms need finite locations and non-negative masses".into(),
            ));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = atoms.iter().map(|a| a.1).sum();
        Ok(Self { atoms, total })
    }

    /// The normalised counting measure of a spectrum: `mult / dim` at each value.
    pub fn from_spectrum(s: &SpectrumMulti) -> Self {
        let dim = s.dim.max(1) as f64;
        let atoms = s
            .pairs
            .iter()
            .map(|p| (p.value, p.mult as f64 / dim))
            .collect();
        Self {
            atoms,
            total: s.total_multiplicity() as f64 / dim,
        }
    }

    /// Mass of `(-∞, x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|a| a.0 <= x)
            .map(|a| a.1)
            .sum()
    }

    /// `∫ λⁿ`.
    pub fn moment(&self, n: u32) -> f64 {
        self.atoms.iter().map(|&(x, m)| m * x.powi(n as i32)).sum()
    }

    /// Locations carrying more than `eps` mass.
    pub fn support(&self, eps: f64) -> Vec<f64> {
        self.atoms
            .iter()
            .filter(|a| a.1 > eps)
            .map(|a| a.0)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("location,mass\n");
        for (x, m) in &self.atoms {
            out.push_str(&format!("{x:.15e},{m:.15e}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub masses: Vec<f64>,
}

impl Histogram {
    /// Each bin as an atom at its centre.
    pub fn as_measure(&self) -> DiscreteMeasure {
        let atoms = self
            .masses
            .iter()
            .enumerate()
            .map(|(i, &m)| (0.5 * (self.edges[i] + self.edges[i + 1]), m))
            .collect();
        DiscreteMeasure {
            atoms,
            total: self.masses.iter().sum(),
        }
    }

    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let last = *self.edges.last()?;
        if x < self.edges[0] || x > last {
            return None;
        }
        let i = self.edges.partition_point(|&e| e <= x);
        Some(i.saturating_sub(1).min(self.masses.len() - 1))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,mass\n");
        for (i, m) in self.masses.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{m:.15e}\n",
                self.edges[i],
                self.edges[i + 1]
            ));
        }
        out
    }
}

/// Normalised eigenvalue counts in `bins` equal bins over [`HISTOGRAM_RANGE`].
/// The last bin is closed on the right.
pub fn empiric_histogram(s: &SpectrumMulti, bins: usize) -> Result<Histogram> {
    if bins == 0 {
        return Err(Error::InvalidInput("bins must be at least 1".into()));
    }
    let (lo, hi) = HISTOGRAM_RANGE;
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut h = Histogram {
        edges,
        masses: vec![0.0; bins],
    };
    let dim = s.dim.max(1) as f64;
    for p in &s.pairs {
        if let Some(i) = h.bin_of(p.value) {
            h.masses[i] += p.mult as f64 / dim;
        }
    }
    Ok(h)
}

/// Density of the limiting eigenvalue distribution for G: the pushforward of
/// the uniform measure on `[0,π]×{±1}` under `1 ± √(5 + 4cos θ)`.
pub fn density_g(x: f64) -> Result<f64> {
    let inside = (x > -2.0 && x < 0.0) || (x > 2.0 && x < 4.0);
    if !inside {
        return Err(Error::OutsideSupport(x));
    }
    let c = ((x - 1.0).powi(2) - 5.0) / 4.0;
    Ok((x - 1.0).abs() / (4.0 * PI * (1.0 - c * c).sqrt()))
}

pub fn cdf_g(x: f64) -> f64 {
    let angle = |x: f64| (((x - 1.0).powi(2) - 5.0) / 4.0).clamp(-1.0, 1.0).acos() / PI;
    if x <= -2.0 {
        0.0
    } else if x < 0.0 {
        0.5 * angle(x)
    } else if x <= 2.0 {
        0.5
    } else if x < 4.0 {
        0.5 + 0.5 * (1.0 - angle(x))
    } else {
        1.0
    }
}

/// Arcsine density on `[0, 4]`.
pub fn density_gtilde(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 4.0) {
        return Err(Error::OutsideSupport(x));
    }
    Ok(1.0 / (PI * (4.0 * x - x * x).sqrt()))
}

pub fn cdf_gtilde(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 4.0 {
        1.0
    } else {
        1.0 - ((x - 2.0) / 2.0).acos() / PI
    }
}

/// `∫_lo^hi f` for integrands with inverse square-root endpoint singularities.
/// Substitutes `x = mid − half·cos t` and applies the midpoint rule in `t`.
pub fn integrate_density(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    nodes: usize,
) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let h = PI / nodes as f64;
    let mut sum = 0.0;
    for k in 0..nodes {
        let t = (k as f64 + 0.5) * h;
        sum += f(mid - half * t.cos())? * half * t.sin();
    }
    Ok(sum * h)
}

/// Supremum distance between the CDF of `h` and a continuous `cdf`.
pub fn ks_distance(h: &DiscreteMeasure, cdf: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    let mut worst: f64 = 0.0;
    for &(x, m) in &h.atoms {
        let f = cdf(x);
        worst = worst.max((acc - f).abs());
        acc += m;
        worst = worst.max((acc - f).abs());
    }
    worst
}

/// Distance between a histogram and a continuous `cdf`, read at the bin
/// edges where the histogram determines its own CDF.
pub fn ks_distance_histogram(h: &Histogram, cdf: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    let mut worst = (cdf(h.edges[0])).abs();
    for (i, m) in h.masses.iter().enumerate() {
        acc += m;
        worst = worst.max((acc - cdf(h.edges[i + 1])).abs());
    }
    worst
}

/// Supremum distance between the CDFs of two discrete measures.
pub fn ks_distance_discrete(a: &DiscreteMeasure, b: &DiscreteMeasure) -> f64 {
    a.atoms
        .iter()
        .chain(&b.atoms)
        .map(|&(x, _)| (a.cdf(x) - b.cdf(x)).abs())
        .fold(0.0, f64::max)
}

/// Spectral measure `σ_{x,x}` of a symmetric Markov matrix: mass
/// `Σ ⟨v, eₓ⟩²` over an orthonormal eigenbasis of each eigenvalue.
pub fn kesten_measure(m: &LevelMatrix, basepoint: usize) -> Result<DiscreteMeasure> {
    if basepoint >= m.dim() {
        return Err(Error::InvalidInput(format!(
            "basepoint {basepoint} outside dimension {}",
            m.dim()
        )));
    }
    if m.row_sums().iter().any(|s| !num_traits::One::is_one(s)) {
        return Err(Error::InvalidInput("matrix is not stochastic".into()));
    }
    let eig = eigen_symmetric(m)?;
    let vectors = eig
        .vectors
        .as_ref()
        .ok_or_else(|| Error::Internal("missing eigenvectors".into()))?;
    let tol = CLUSTER_TOLERANCE * eig.norm.max(1.0);
    let mut atoms: Vec<(f64, f64, usize)> = Vec::new(); // (sum of values, mass, count)
    let mut last = f64::NEG_INFINITY;
    for (i, &v) in eig.values.iter().enumerate() {
        let w = vectors[(basepoint, i)].powi(2);
        match atoms.last_mut() {
            Some(a) if v - last <= tol => {
                a.0 += v;
                a.1 += w;
                a.2 += 1;
            }
            _ => atoms.push((v, w, 1)),
        }
        last = v;
    }
    DiscreteMeasure::new(
        atoms
            .into_iter()
            .map(|(s, w, c)| (s / c as f64, w))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    /// `(n, ∫λⁿ dσ, (Mⁿ)ₓₓ)` for `n = 0..=N`.
    pub moments: Vec<(u32, f64, f64)>,
    pub max_deviation: f64,
}

/// Compares the moments of the Kesten measure at `basepoint` with diagonal
/// entries of exact matrix powers.
pub fn moment_check(m: &LevelMatrix, basepoint: usize, max_power: u32) -> Result<MomentReport> {
    if max_power == 0 {
        return Err(Error::InvalidInput("need at least one moment".into()));
    }
    let measure = kesten_measure(m, basepoint)?;
    let dim = m.dim();
    // v = Mⁿ eₓ kept exact
    let mut v: Vec<BigRational> = vec![BigRational::zero(); dim];
    v[basepoint] = num_traits::One::one();
    let mut moments = vec![(0, measure.moment(0), 1.0)];
    for n in 1..=max_power {
        let mut next = vec![BigRational::zero(); dim];
        for (i, row_out) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                let mij = m.get(i, j);
                if !mij.is_zero() && !vj.is_zero() {
                    *row_out += mij * vj;
                }
            }
        }
        v = next;
        let exact = v[basepoint].to_f64().unwrap_or(f64::NAN);
        moments.push((n, measure.moment(n), exact));
    }
    let max_deviation = moments
        .iter()
        .map(|&(_, a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(MomentReport {
        moments,
        max_deviation,
    })
}
