use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::level_ops::{integer, rational};
use crate::tree_groups::GroupPreset;

/// Residual allowed when certifying a float preimage.
pub const PREIMAGE_TOLERANCE: f64 = 1e-12;

/// Tolerance used when iterating a point to decide whether it escapes.
pub const ESCAPE_TOLERANCE: f64 = 1e-9;

/// `F(θ) = c₂θ² + c₁θ + c₀` on an interval `[a, b]` with `F(a) = F(b) = a`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticDynamics {
    pub c2: BigRational,
    pub c1: BigRational,
    pub c0: BigRational,
    pub a: f64,
    pub b: f64,
}

impl QuadraticDynamics {
    /// Builds the map and derives `[a, b]`: `a` is a fixed point and `b` the
    /// other solution of `F(b) = a`, chosen so that `a < b`.
    pub fn new(c2: BigRational, c1: BigRational, c0: BigRational) -> Result<Self> {
        if c2.is_zero() {
            return Err(Error::InvalidInput(
                "leading coefficient must be non-zero".into(),
            ));
        }
        let (f2, f1, f0) = (to_f64(&c2), to_f64(&c1), to_f64(&c0));
        // fixed points: c2 θ² + (c1 - 1) θ + c0 = 0
        let fixed = real_roots(f2, f1 - 1.0, f0)
            .ok_or_else(|| Error::InvalidInput("map has no real fixed point".into()))?;
        let sum = -f1 / f2;
        let (a, b) = [fixed.0, fixed.1]
            .into_iter()
            .map(|a| (a, sum - a))
            .find(|(a, b)| b > a)
            .ok_or_else(|| {
                Error::InvalidInput("no invariant interval with F(a) = F(b) = a".into())
            })?;
        let d = Self { c2, c1, c0, a, b };
        d.check_endpoints()?;
        Ok(d)
    }

    /// Uses a prescribed interval; `F(a) = F(b) = a` is checked.
    pub fn with_interval(
        c2: BigRational,
        c1: BigRational,
        c0: BigRational,
        a: f64,
        b: f64,
    ) -> Result<Self> {
        let d = Self { c2, c1, c0, a, b };
        d.check_endpoints()?;
        Ok(d)
    }

    fn check_endpoints(&self) -> Result<()> {
        let tol = 1e-9 * (1.0 + self.a.abs() + self.b.abs());
        if (self.eval(self.a) - self.a).abs() > tol || (self.eval(self.b) - self.a).abs() > tol {
            return Err(Error::InvalidInput(format!(
                "F(a) = F(b) = a fails on [{}, {}]",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// The renormalisation map of the Fabrykowski–Gupta group, `4 − 2θ − θ²`.
    pub fn gamma() -> Self {
        Self::new(integer(-1), integer(-2), integer(4)).expect("valid map")
    }

    /// The map for `⟨a, t⟩` and `⟨a, r⟩`, `(12 + θ − θ²)/2`.
    pub fn gamma_bar() -> Self {
        Self::new(rational(-1, 2), rational(1, 2), integer(6)).expect("valid map")
    }

    pub fn for_group(group: GroupPreset) -> Result<Self> {
        match group {
            GroupPreset::Gamma => Ok(Self::gamma()),
            GroupPreset::GammaBar | GroupPreset::GammaBarBar => Ok(Self::gamma_bar()),
            g => Err(Error::InvalidInput(format!(
                "{g} has no quadratic renormalisation map"
            ))),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        (to_f64(&self.c2) * x + to_f64(&self.c1)) * x + to_f64(&self.c0)
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        (&self.c2 * x + &self.c1) * x + &self.c0
    }

    /// Both solutions of `F(x) = target`, ascending.
    pub fn preimages(&self, target: f64) -> Result<(f64, f64)> {
        let (lo, hi) = real_roots(
            to_f64(&self.c2),
            to_f64(&self.c1),
            to_f64(&self.c0) - target,
        )
        .ok_or_else(|| Error::Internal(format!("F(x) = {target} has no real solution")))?;
        for x in [lo, hi] {
            let r = (self.eval(x) - target).abs();
            if r > PREIMAGE_TOLERANCE * (1.0 + target.abs()) {
                return Err(Error::Internal(format!(
                    "preimage {x} of {target} has residual {r:e}"
                )));
            }
        }
        Ok((lo, hi))
    }

    /// Value at `x` of the monic polynomial whose roots are the `k`-fold
    /// preimages of `seed`, i.e. `(Fᵏ(x) − seed) / c₂^(2ᵏ−1)`.
    pub fn preimage_polynomial(
        &self,
        seed: &BigRational,
        k: usize,
        x: &BigRational,
    ) -> BigRational {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.eval_exact(&y);
        }
        let mut lead = BigRational::one();
        for _ in 0..(1usize << k) - 1 {
            lead *= &self.c2;
        }
        (y - seed) / lead
    }

    /// Maximum of `F` on `[a, b]`.
    pub fn max_on_interval(&self) -> f64 {
        let vertex = -to_f64(&self.c1) / (2.0 * to_f64(&self.c2));
        let mut m = self.eval(self.a).max(self.eval(self.b));
        if vertex > self.a && vertex < self.b {
            m = m.max(self.eval(vertex));
        }
        m
    }

    /// Whether the forward orbit of `x` stays in `[a, b]` for `iters` steps.
    pub fn stays_in_interval(&self, x: f64, iters: usize) -> bool {
        let inside = |y: f64| y >= self.a - ESCAPE_TOLERANCE && y <= self.b + ESCAPE_TOLERANCE;
        let mut y = x;
        for _ in 0..=iters {
            if !inside(y) {
                return false;
            }
            y = self.eval(y).clamp(f64::MIN, f64::MAX);
        }
        true
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Real roots of `a x² + b x + c`, ascending, computed without cancellation.
pub(crate) fn real_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // allow tiny negative discriminants caused by rounding
        if disc > -1e-12 * (b * b).max(1.0) {
            let r = -b / (2.0 * a);
            return Some((r, r));
        }
        return None;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    Some((r1.min(r2), r1.max(r2)))
}

/// Outcome of comparing `F([a, b])` with `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DynamicsCase {
    /// `F([a,b]) ⊂ [a,b]`: the invariant set is the whole interval.
    Subset,
    /// `F([a,b]) = [a,b]`.
    Equal,
    /// Overshoot; the invariant set is a Cantor set containing the seed.
    SupersetXiInK,
    /// Overshoot; the seed escapes, so its backward orbit adds isolated points.
    SupersetXiNotInK,
}

pub fn dyn_classify(d: &QuadraticDynamics, xi: f64, iters: usize) -> DynamicsCase {
    let max = d.max_on_interval();
    let tol = ESCAPE_TOLERANCE * (1.0 + d.b.abs());
    if max < d.b - tol {
        DynamicsCase::Subset
    } else if max <= d.b + tol {
        DynamicsCase::Equal
    } else if d.stays_in_interval(xi, iters.max(1)) {
        DynamicsCase::SupersetXiInK
    } else {
        DynamicsCase::SupersetXiNotInK
    }
}

/// Affine change of variable `ψ(z) = αz + β` turning `F` into `z² − λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuliaConjugation {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub lambda: BigRational,
}

impl JuliaConjugation {
    /// Coefficients `[z⁰, z¹, z²]` of `ψ⁻¹(F(ψ(z)))`, expanded exactly.
    pub fn conjugated_coefficients(&self, d: &QuadraticDynamics) -> [BigRational; 3] {
        let (al, be) = (&self.alpha, &self.beta);
        // F(αz+β) = c2 α² z² + (2 c2 α β + c1 α) z + F(β)
        let z2 = &d.c2 * al * al;
        let z1 = (integer(2) * &d.c2 * al * be) + (&d.c1 * al);
        let z0 = d.eval_exact(be);
        [(z0 - be) / al, z1 / al, z2 / al]
    }

    /// `ψ⁻¹ ∘ F ∘ ψ = z² − λ` coefficient by coefficient.
    pub fn verify(&self, d: &QuadraticDynamics) -> bool {
        self.conjugated_coefficients(d)
            == [
                -self.lambda.clone(),
                BigRational::zero(),
                BigRational::one(),
            ]
    }

    pub fn psi(&self, z: f64) -> f64 {
        to_f64(&self.alpha) * z + to_f64(&self.beta)
    }

    pub fn psi_inverse(&self, x: f64) -> f64 {
        (x - to_f64(&self.beta)) / to_f64(&self.alpha)
    }
}

pub fn conjugate_to_julia(d: &QuadraticDynamics) -> JuliaConjugation {
    let alpha = BigRational::one() / &d.c2;
    let beta = -&d.c1 / (integer(2) * &d.c2);
    let lambda = -(d.eval_exact(&beta) - &beta) / &alpha;
    JuliaConjugation {
        alpha,
        beta,
        lambda,
    }
}

pub fn julia_conjugation(group: GroupPreset) -> Result<(QuadraticDynamics, JuliaConjugation)> {
    let d = QuadraticDynamics::for_group(group)?;
    let j = conjugate_to_julia(&d);
    Ok((d, j))
}

/// Real points `z` with `(z² − λ)^depth(z) = 0`, i.e. the nested radicals
/// `±√(λ ± √(λ ± …))` with `depth` signs. Complex branches are dropped.
pub fn julia_preimages(lambda: f64, depth: usize) -> Result<Vec<f64>> {
    if lambda.is_nan() || lambda <= 0.0 || depth == 0 {
        return Err(Error::InvalidInput("need λ > 0 and depth ≥ 1".into()));
    }
    julia_preimages_of(lambda, 0.0, depth)
}

/// Real preimages of `target` under `depth` iterations of `z² − λ`.
pub fn julia_preimages_of(lambda: f64, target: f64, depth: usize) -> Result<Vec<f64>> {
    if !lambda.is_finite() || !target.is_finite() {
        return Err(Error::InvalidInput("λ and target must be finite".into()));
    }
    let mut level = vec![target];
    for _ in 0..depth {
        level = level
            .iter()
            .filter(|&&w| lambda + w >= 0.0)
            .flat_map(|&w| {
                let r = (lambda + w).sqrt();
                [-r, r]
            })
            .collect();
    }
    level.sort_by(f64::total_cmp);
    Ok(level)
}

/// Eigenvalues `1 ± √(5 − ψ(z))` for `z` running over the depth-`depth`
/// preimages, under `z² − λ`, of the conjugated seeds of a ternary preset.
/// These are the families `X_{depth+2}` (and `Y_{depth+3}` for `⟨a, t⟩`)
/// shifted back into spectral coordinates.
pub fn julia_spectral_image(group: GroupPreset, depth: usize) -> Result<Vec<f64>> {
    let (_, j) = julia_conjugation(group)?;
    let lambda = j.lambda.to_f64().unwrap_or(f64::NAN);
    let seeds: &[i64] = if group == GroupPreset::Gamma {
        &[-1]
    } else {
        &[2, -1]
    };
    let mut out = Vec::new();
    for &seed in seeds {
        let z0 = j.psi_inverse(seed as f64);
        for z in julia_preimages_of(lambda, z0, depth)? {
            let theta = j.psi(z);
            let (lo, hi) = super::spectrum::pi_pm(theta);
            out.push(lo);
            out.push(hi);
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// The families of backward iterates defining the spectra of the ternary
/// presets: `X_m` for every group and `Y_m` for `⟨a, t⟩`/`⟨a, r⟩`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreimageSets {
    pub group: GroupPreset,
    /// `(m, X_m)` pairs, `m` ascending.
    pub x: Vec<(usize, Vec<f64>)>,
    /// `(m, Y_m)` pairs, empty for the Fabrykowski–Gupta group.
    pub y: Vec<(usize, Vec<f64>)>,
}

impl PreimageSets {
    pub fn x_family(&self, m: usize) -> Option<&[f64]> {
        self.x
            .iter()
            .find(|(k, _)| *k == m)
            .map(|(_, v)| v.as_slice())
    }

    pub fn y_family(&self, m: usize) -> Option<&[f64]> {
        self.y
            .iter()
            .find(|(k, _)| *k == m)
            .map(|(_, v)| v.as_slice())
    }
}

fn iterate_family(
    d: &QuadraticDynamics,
    seed: f64,
    first: usize,
    last: usize,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    if last < first {
        return Ok(out);
    }
    let mut current = vec![seed];
    out.push((first, current.clone()));
    for m in first + 1..=last {
        let mut next = Vec::with_capacity(current.len() * 2);
        for &t in &current {
            let (lo, hi) = d.preimages(t)?;
            next.push(lo);
            next.push(hi);
        }
        next.sort_by(f64::total_cmp);
        out.push((m, next.clone()));
        current = next;
    }
    Ok(out)
}

/// `X_2..X_n` for Γ (seed `X₂ = {−1}`); `X_3..X_n` and `Y_3..Y_n` for the
/// other two ternary presets (seeds `X₃ = {2}`, `Y₃ = {−1}`).
pub fn preimage_sets(group: GroupPreset, n: usize) -> Result<PreimageSets> {
    let d = QuadraticDynamics::for_group(group)?;
    match group {
        GroupPreset::Gamma => Ok(PreimageSets {
            group,
            x: iterate_family(&d, -1.0, 2, n)?,
            y: Vec::new(),
        }),
        _ => Ok(PreimageSets {
            group,
            x: iterate_family(&d, 2.0, 3, n)?,
            y: iterate_family(&d, -1.0, 3, n)?,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{spectrum_gamma, spectrum_gamma_bar};

    #[test]
    fn julia_images_land_in_spectra() {
        let g = julia_spectral_image(GroupPreset::Gamma, 1).unwrap();
        let s = spectrum_gamma(3).unwrap();
        assert!(g.iter().all(|&v| s.contains(v, 1e-9)));
        let r6 = 6f64.sqrt();
        assert!(g
            .iter()
            .any(|&v| (v - (1.0 + (6.0 - r6).sqrt())).abs() < 1e-12));
        // X_4 appears from level 3 and Y_4 from level 5
        let b = julia_spectral_image(GroupPreset::GammaBar, 1).unwrap();
        let s5 = spectrum_gamma_bar(5).unwrap();
        assert!(b.iter().all(|&v| s5.contains(v, 1e-9)), "{b:?}");
        let b2 = julia_spectral_image(GroupPreset::GammaBar, 2).unwrap();
        let s6 = spectrum_gamma_bar(6).unwrap();
        assert!(b2.iter().all(|&v| s6.contains(v, 1e-9)));
        // the bare preimages of 0, shifted by 1, are not eigenvalues
        let s4 = spectrum_gamma_bar(4).unwrap();
        let bare = julia_preimages(45.0 / 16.0, 2).unwrap();
        assert!(bare.iter().all(|&z| !s4.contains(1.0 + z, 1e-9)));
    }

    #[test]
    fn derived_intervals() {
        let g = QuadraticDynamics::gamma();
        assert_eq!((g.a, g.b), (-4.0, 2.0));
        let gb = QuadraticDynamics::gamma_bar();
        assert_eq!((gb.a, gb.b), (-4.0, 5.0));
        // the printed domain [−4, 5] does not satisfy F(b) = a for Γ's map
        assert!(
            QuadraticDynamics::with_interval(integer(-1), integer(-2), integer(4), -4.0, 5.0)
                .is_err()
        );
    }

    #[test]
    fn classification() {
        let g = QuadraticDynamics::gamma();
        assert_eq!(dyn_classify(&g, -1.0, 50), DynamicsCase::SupersetXiNotInK);
        let gb = QuadraticDynamics::gamma_bar();
        assert_eq!(dyn_classify(&gb, 2.0, 50), DynamicsCase::SupersetXiInK);
        // F(θ) = −θ² on [−1, 1] peaks at 0 < 1
        let sub = QuadraticDynamics::new(integer(-1), integer(0), integer(0)).unwrap();
        assert_eq!((sub.a, sub.b), (-1.0, 1.0));
        assert_eq!(dyn_classify(&sub, 0.0, 10), DynamicsCase::Subset);
        // F(θ) = 1 − 2θ² maps [−1, 1] onto itself
        let eq = QuadraticDynamics::new(integer(-2), integer(0), integer(1)).unwrap();
        assert_eq!((eq.a, eq.b), (-1.0, 1.0));
        assert_eq!(dyn_classify(&eq, 0.0, 10), DynamicsCase::Equal);
    }

    #[test]
    fn conjugations() {
        let (g, j) = julia_conjugation(GroupPreset::Gamma).unwrap();
        assert_eq!(
            (j.alpha.clone(), j.beta.clone(), j.lambda.clone()),
            (integer(-1), integer(-1), integer(6))
        );
        assert!(j.verify(&g));
        let (gb, jb) = julia_conjugation(GroupPreset::GammaBar).unwrap();
        assert_eq!(
            (jb.alpha.clone(), jb.beta.clone(), jb.lambda.clone()),
            (integer(-2), rational(1, 2), rational(45, 16))
        );
        assert!(jb.verify(&gb));
        assert!(!jb.verify(&g));
        // ψ⁻¹ F ψ (0) = −λ
        assert!((j.psi_inverse(g.eval(j.psi(0.0))) + 6.0).abs() < 1e-12);
    }

    #[test]
    fn preimage_families() {
        let s = preimage_sets(GroupPreset::Gamma, 5).unwrap();
        let x3 = s.x_family(3).unwrap();
        assert!((x3[0] - (-1.0 - 6f64.sqrt())).abs() < 1e-12);
        assert!((x3[1] - (-1.0 + 6f64.sqrt())).abs() < 1e-12);
        assert_eq!(s.x_family(5).unwrap().len(), 8);
        let sb = preimage_sets(GroupPreset::GammaBar, 4).unwrap();
        let x4 = sb.x_family(4).unwrap();
        assert!((x4[0] - (1.0 - 33f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((x4[1] - (1.0 + 33f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(sb.y_family(4).unwrap().len(), 2);
        assert!(preimage_sets(GroupPreset::G, 3).is_err());
    }

    #[test]
    fn preimage_polynomial_vanishes_on_family() {
        let g = QuadraticDynamics::gamma();
        // monic θ² + 2θ − 5 at θ = 1 is −2
        assert_eq!(
            g.preimage_polynomial(&integer(-1), 1, &integer(1)),
            integer(-2)
        );
        let gb = QuadraticDynamics::gamma_bar();
        // θ² − θ − 8 at θ = 0
        assert_eq!(
            gb.preimage_polynomial(&integer(2), 1, &integer(0)),
            integer(-8)
        );
    }

    #[test]
    fn nested_radicals() {
        let v = julia_preimages(6.0, 1).unwrap();
        assert_eq!(v, vec![-6f64.sqrt(), 6f64.sqrt()]);
        let v = julia_preimages(6.0, 2).unwrap();
        assert_eq!(v.len(), 4);
        assert!((v[3] - (6.0 + 6f64.sqrt()).sqrt()).abs() < 1e-15);
        assert!(julia_preimages(-1.0, 2).is_err());
    }
}
