//! Exact checks of the determinant recursions and factorisations of the
//! pencils at rational sample points.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{exact_determinant, integer, pencil_matrix, rational, Pencil};
use crate::closed_form::{preimage_sets, QuadraticDynamics};
use crate::error::Result;
use crate::tree_groups::GroupPreset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `|Qₙ(λ,μ)| = |2aₙ₋₁ − μ| · |Qₙ₋₁(λ', μ')|` for G.
    QgRecursion,
    /// `|Qₙ| = Φ₀Φ₁⋯Φₙ` for G.
    PhiProduct,
    /// `Q̃ₙ(λ,μ) = ½Qₙ(2λ,2μ)` as matrices.
    GtildeRescaling,
    /// One-step recursion for the Fabrykowski–Gupta pencil.
    GammaRecursion,
    /// One-step recursion for the `⟨a, t⟩` pencil.
    GammaBarRecursion,
    /// Full factorisation of the Fabrykowski–Gupta pencil determinant.
    GammaFactorization,
    /// Full factorisation of the `⟨a, t⟩` pencil determinant.
    GammaBarFactorization,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Self::QgRecursion,
        Self::PhiProduct,
        Self::GtildeRescaling,
        Self::GammaRecursion,
        Self::GammaBarRecursion,
        Self::GammaFactorization,
        Self::GammaBarFactorization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::QgRecursion => "qg_recursion",
            Self::PhiProduct => "phi_product",
            Self::GtildeRescaling => "gtilde_rescaling",
            Self::GammaRecursion => "gamma_recursion",
            Self::GammaBarRecursion => "gammabar_recursion",
            Self::GammaFactorization => "gamma_factorization",
            Self::GammaBarFactorization => "gammabar_factorization",
        }
    }

    /// Levels at which the identity is stated.
    pub fn levels(self, max_level: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            Self::QgRecursion | Self::GammaFactorization | Self::GammaBarFactorization => {
                2..=max_level
            }
            _ => 0..=max_level,
        }
    }

    /// Whether `(λ, μ)` avoids the poles of the renormalisation used by the identity.
    pub fn admissible(self, lambda: &BigRational, mu: &BigRational) -> bool {
        let (l, m) = (lambda, mu);
        if l.is_zero() {
            return false;
        }
        match self {
            Self::QgRecursion | Self::PhiProduct => !(integer(4) - m * m).is_zero(),
            Self::GtildeRescaling => true,
            Self::GammaRecursion | Self::GammaFactorization => {
                let (alpha, _, gamma, _) = gamma_polys(l, m);
                !(alpha * gamma).is_zero()
            }
            Self::GammaBarRecursion | Self::GammaBarFactorization => {
                let (alpha, _, _, delta) = gamma_bar_polys(l, m);
                !(alpha * delta).is_zero()
            }
        }
    }
}

/// One evaluated identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub level: usize,
    pub lambda: BigRational,
    pub mu: BigRational,
    pub lhs: BigRational,
    pub rhs: BigRational,
    /// For factorisations: whether the float evaluation of the factors over
    /// the preimage families agrees with the exact determinant.
    pub numeric_agrees: Option<bool>,
    pub holds: bool,
}

/// Determinants already computed, keyed by pencil.
#[derive(Default)]
pub struct DeterminantCache {
    map: HashMap<(GroupPreset, usize, BigRational, BigRational), BigRational>,
}

impl DeterminantCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pencil_det(
        &mut self,
        group: GroupPreset,
        n: usize,
        l: &BigRational,
        m: &BigRational,
    ) -> Result<BigRational> {
        let key = (group, n, l.clone(), m.clone());
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let det = exact_determinant(&pencil_matrix(&Pencil::new(
            group,
            n,
            l.clone(),
            m.clone(),
        ))?);
        self.map.insert(key, det.clone());
        Ok(det)
    }
}

/// Deterministic rational sample points `p/q` with `|p| ≤ 12`, `1 ≤ q ≤ 6`,
/// filtered by `admissible`.
pub fn sample_points(
    seed: u64,
    count: usize,
    admissible: impl Fn(&BigRational, &BigRational) -> bool,
) -> Vec<(BigRational, BigRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(BigRational, BigRational)> = Vec::with_capacity(count);
    while out.len() < count {
        let l = rational(rng.gen_range(-12..=12), rng.gen_range(1..=6));
        let m = rational(rng.gen_range(-12..=12), rng.gen_range(1..=6));
        if admissible(&l, &m) && !out.contains(&(l.clone(), m.clone())) {
            out.push((l, m));
        }
    }
    out
}

fn pow(x: &BigRational, e: u64) -> BigRational {
    x.pow(i32::try_from(e).expect("exponent fits in i32"))
}

fn pow3(e: usize) -> u64 {
    3u64.pow(e as u32)
}

/// `(α, β, γ, δ)` of the Fabrykowski–Gupta recursion.
fn gamma_polys(
    l: &BigRational,
    m: &BigRational,
) -> (BigRational, BigRational, BigRational, BigRational) {
    let two = integer(2);
    let alpha = &two - m + l;
    let beta = &two - m - l;
    let gamma = m * m - l * l - m - &two;
    let delta = m * m - l * l - &two * m - l;
    (alpha, beta, gamma, delta)
}

/// `(α, β, γ, δ)` of the `⟨a, t⟩` recursion.
fn gamma_bar_polys(
    l: &BigRational,
    m: &BigRational,
) -> (BigRational, BigRational, BigRational, BigRational) {
    let one = BigRational::one();
    let two = integer(2);
    (&two - m + l, &two - m - l, &one + m + l, &one + m - l)
}

fn check(
    identity: Identity,
    level: usize,
    l: &BigRational,
    m: &BigRational,
    lhs: BigRational,
    rhs: BigRational,
) -> IdentityCheck {
    let holds = lhs == rhs;
    IdentityCheck {
        identity,
        level,
        lambda: l.clone(),
        mu: m.clone(),
        lhs,
        rhs,
        numeric_agrees: None,
        holds,
    }
}

/// `|Qₙ(λ,μ)| = (μ² − 4)^(2ⁿ⁻²) |Qₙ₋₁(2λ²/(4−μ²), μ + μλ²/(4−μ²))|` for `n ≥ 2`.
///
/// The factor is `|2aₙ₋₁ − μ|`, a product of `2ⁿ⁻²` blocks of determinant
/// `μ² − 4`. It agrees with `(4 − μ²)^(2ⁿ⁻²)` except at `n = 2`, where the
/// two differ by a sign; [`qg_recursion_printed_sign`] evaluates that variant.
pub fn qg_recursion(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    let (lhs, factor, inner) = qg_parts(cache, n, l, m)?;
    Ok(check(
        Identity::QgRecursion,
        n,
        l,
        m,
        lhs,
        pow(&(m * m - integer(4)), factor) * inner,
    ))
}

/// Same recursion with the factor written `(4 − μ²)^(2ⁿ⁻²)`.
pub fn qg_recursion_printed_sign(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    let (lhs, factor, inner) = qg_parts(cache, n, l, m)?;
    Ok(check(
        Identity::QgRecursion,
        n,
        l,
        m,
        lhs,
        pow(&(integer(4) - m * m), factor) * inner,
    ))
}

fn qg_parts(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<(BigRational, u64, BigRational)> {
    assert!(n >= 2, "recursion starts at level 2");
    let g = GroupPreset::G;
    let lhs = cache.pencil_det(g, n, l, m)?;
    let q = integer(4) - m * m;
    let l2 = integer(2) * l * l / &q;
    let m2 = m + m * l * l / &q;
    let inner = cache.pencil_det(g, n - 1, &l2, &m2)?;
    Ok((lhs, 1u64 << (n - 2), inner))
}

/// `Φ₀, …, Φₙ` at `(λ, μ)`.
pub fn phi_sequence(n: usize, l: &BigRational, m: &BigRational) -> Vec<BigRational> {
    let two = integer(2);
    let mut phi = vec![&two - m - l];
    if n >= 1 {
        phi.push(&two - m + l);
    }
    if n >= 2 {
        phi.push(m * m - integer(4) - l * l);
    }
    for k in 3..=n {
        let prev = &phi[k - 1];
        let t = pow(&(&two * l), 1u64 << (k - 2));
        phi.push(prev * prev - &two * t);
    }
    phi
}

pub fn phi_product(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    let lhs = cache.pencil_det(GroupPreset::G, n, l, m)?;
    let rhs = phi_sequence(n, l, m)
        .iter()
        .fold(BigRational::one(), |acc, p| acc * p);
    Ok(check(Identity::PhiProduct, n, l, m, lhs, rhs))
}

/// Compares `Q̃ₙ(λ,μ)` with `½Qₙ(2λ,2μ)` entry by entry; `lhs`/`rhs` carry the
/// two determinants for reference.
pub fn gtilde_rescaling(n: usize, l: &BigRational, m: &BigRational) -> Result<IdentityCheck> {
    let two = integer(2);
    let tilde = pencil_matrix(&Pencil::new(GroupPreset::Gtilde, n, l.clone(), m.clone()))?;
    let scaled =
        pencil_matrix(&Pencil::new(GroupPreset::G, n, &two * l, &two * m))?.scale(&rational(1, 2));
    let equal = tilde.entries() == scaled.entries();
    let mut c = check(
        Identity::GtildeRescaling,
        n,
        l,
        m,
        exact_determinant(&tilde),
        exact_determinant(&scaled),
    );
    c.holds = equal && c.lhs == c.rhs;
    Ok(c)
}

/// Base cases `|Q₀| = α + λ`, `|Q₁| = (α + λ)β²`, then
/// `|Qₙ| = (αβγ²)^(3ⁿ⁻²) |Qₙ₋₁(λ²β/(αγ), μ + 2λ²δ/(αγ))|`.
pub fn gamma_recursion(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    let g = GroupPreset::Gamma;
    let lhs = cache.pencil_det(g, n, l, m)?;
    let (alpha, beta, gamma, delta) = gamma_polys(l, m);
    let rhs = match n {
        0 => &alpha + l,
        1 => (&alpha + l) * &beta * &beta,
        _ => {
            let ag = &alpha * &gamma;
            let l2 = l * l * &beta / &ag;
            let m2 = m + integer(2) * l * l * &delta / &ag;
            let factor = pow(&(&alpha * &beta * &gamma * &gamma), pow3(n - 2));
            factor * cache.pencil_det(g, n - 1, &l2, &m2)?
        }
    };
    Ok(check(Identity::GammaRecursion, n, l, m, lhs, rhs))
}

/// Base cases as for Γ, then
/// `|Qₙ| = (γδ)^(2·3ⁿ⁻²) (αβ)^(3ⁿ⁻²) |Qₙ₋₁(−2λ²/(αδ), μ + 2λ²(μ−λ−1)/(αδ))|`.
pub fn gamma_bar_recursion(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    let g = GroupPreset::GammaBar;
    let lhs = cache.pencil_det(g, n, l, m)?;
    let (alpha, beta, gamma, delta) = gamma_bar_polys(l, m);
    let rhs = match n {
        0 => &alpha + l,
        1 => (&alpha + l) * &beta * &beta,
        _ => {
            let ad = &alpha * &delta;
            let two_l2 = integer(2) * l * l;
            let l2 = -&two_l2 / &ad;
            let m2 = m + &two_l2 * (m - l - BigRational::one()) / &ad;
            let e = pow3(n - 2);
            let factor = pow(&(&gamma * &delta), 2 * e) * pow(&(&alpha * &beta), e);
            factor * cache.pencil_det(g, n - 1, &l2, &m2)?
        }
    };
    Ok(check(Identity::GammaBarRecursion, n, l, m, lhs, rhs))
}

/// `H_θ(λ, μ) = μ² − λμ − 2λ² − 2 − μ + θλ` without the `θλ` term.
fn h_constant(l: &BigRational, m: &BigRational) -> BigRational {
    m * m - l * m - integer(2) * l * l - integer(2) - m
}

/// `∏ H_θ` over the `k`-fold preimages of `seed`, exactly: with
/// `H_θ = c + λθ` and `P` the monic polynomial of the family,
/// the product is `(−λ)^(2ᵏ) P(−c/λ)`.
fn family_product(
    d: &QuadraticDynamics,
    seed: i64,
    k: usize,
    l: &BigRational,
    m: &BigRational,
) -> BigRational {
    let c = h_constant(l, m);
    let size = 1u64 << k;
    if l.is_zero() {
        return pow(&c, size);
    }
    pow(&-l, size) * d.preimage_polynomial(&integer(seed), k, &(-c / l))
}

fn ln_abs(x: &BigRational) -> f64 {
    fn ln_int(n: &BigInt) -> f64 {
        let bits = n.bits();
        if bits < 1000 {
            n.abs().to_f64().unwrap().ln()
        } else {
            let shift = bits - 64;
            (n.abs() >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
    ln_int(x.numer()) - ln_int(x.denom())
}

/// Sign and log-magnitude of a product of float factors raised to powers.
fn float_product(factors: &[(f64, u64)]) -> (bool, f64) {
    factors.iter().fold((false, 0.0), |(neg, ln), &(v, e)| {
        (neg ^ (v < 0.0 && e % 2 == 1), ln + e as f64 * v.abs().ln())
    })
}

fn numeric_agreement(exact: &BigRational, factors: &[(f64, u64)]) -> bool {
    if exact.is_zero() {
        return factors.iter().any(|&(v, _)| v.abs() < 1e-9);
    }
    let (neg, ln) = float_product(factors);
    let ln_exact = ln_abs(exact);
    neg == exact.is_negative() && (ln - ln_exact).abs() <= 1e-9 * ln_exact.abs().max(1.0)
}

/// `|Qₙ| = (2+2λ−μ)(2−λ−μ)^(3ⁿ⁻¹+1) ∏_{2≤m≤n, θ∈Xₘ} H_θ^(3ⁿ⁻ᵐ+1)`, `n ≥ 2`.
pub fn gamma_factorization(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    assert!(n >= 2, "factorisation starts at level 2");
    let d = QuadraticDynamics::gamma();
    let lhs = cache.pencil_det(GroupPreset::Gamma, n, l, m)?;
    let (alpha, beta, _, _) = gamma_polys(l, m);
    let mut rhs = (&alpha + l) * pow(&beta, pow3(n - 1) + 1);
    for k in 2..=n {
        rhs *= pow(&family_product(&d, -1, k - 2, l, m), pow3(n - k) + 1);
    }

    let (lf, mf) = (l.to_f64().unwrap(), m.to_f64().unwrap());
    let h = |theta: f64| mf * mf - lf * mf - 2.0 * lf * lf - 2.0 - mf + theta * lf;
    let mut factors = vec![(2.0 + 2.0 * lf - mf, 1), (2.0 - lf - mf, pow3(n - 1) + 1)];
    for (k, thetas) in preimage_sets(GroupPreset::Gamma, n)?.x {
        factors.extend(thetas.iter().map(|&t| (h(t), pow3(n - k) + 1)));
    }
    let mut c = check(Identity::GammaFactorization, n, l, m, lhs, rhs);
    c.numeric_agrees = Some(numeric_agreement(&c.lhs, &factors));
    Ok(c)
}

/// `|Qₙ| = (α+λ) β^(3ⁿ⁻²+1) γ^(3ⁿ⁻¹−1) (δ−λ)^(3ⁿ⁻²−1)
/// ∏_{3≤m≤n, Xₘ} H^(3ⁿ⁻ᵐ+1) ∏_{3≤m<n, Yₘ} H^(3ⁿ⁻ᵐ−1) ∏_{Xₙ₊₁} H²`, `n ≥ 2`.
pub fn gamma_bar_factorization(
    cache: &mut DeterminantCache,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    assert!(n >= 2, "factorisation starts at level 2");
    let d = QuadraticDynamics::gamma_bar();
    let lhs = cache.pencil_det(GroupPreset::GammaBar, n, l, m)?;
    let (alpha, beta, gamma, delta) = gamma_bar_polys(l, m);
    let e2 = pow3(n - 2);
    let mut rhs = (&alpha + l)
        * pow(&beta, e2 + 1)
        * pow(&gamma, pow3(n - 1) - 1)
        * pow(&(&delta - l), e2 - 1);
    for k in 3..=n {
        rhs *= pow(&family_product(&d, 2, k - 3, l, m), pow3(n - k) + 1);
    }
    for k in 3..n {
        rhs *= pow(&family_product(&d, -1, k - 3, l, m), pow3(n - k) - 1);
    }
    rhs *= pow(&family_product(&d, 2, n - 2, l, m), 2);

    let (lf, mf) = (l.to_f64().unwrap(), m.to_f64().unwrap());
    let h = |theta: f64| mf * mf - lf * mf - 2.0 * lf * lf - 2.0 - mf + theta * lf;
    let mut factors = vec![
        (2.0 + 2.0 * lf - mf, 1),
        (2.0 - mf - lf, e2 + 1),
        (1.0 + mf + lf, pow3(n - 1) - 1),
        (1.0 + mf - 2.0 * lf, e2 - 1),
    ];
    let sets = preimage_sets(GroupPreset::GammaBar, n + 1)?;
    for (k, thetas) in &sets.x {
        let e = if *k == n + 1 { 2 } else { pow3(n - k) + 1 };
        factors.extend(thetas.iter().map(|&t| (h(t), e)));
    }
    for (k, thetas) in &sets.y {
        if *k < n {
            factors.extend(thetas.iter().map(|&t| (h(t), pow3(n - k) - 1)));
        }
    }
    let mut c = check(Identity::GammaBarFactorization, n, l, m, lhs, rhs);
    c.numeric_agrees = Some(numeric_agreement(&c.lhs, &factors));
    Ok(c)
}

/// Evaluates one identity at one level and point.
pub fn evaluate(
    cache: &mut DeterminantCache,
    identity: Identity,
    n: usize,
    l: &BigRational,
    m: &BigRational,
) -> Result<IdentityCheck> {
    match identity {
        Identity::QgRecursion => qg_recursion(cache, n, l, m),
        Identity::PhiProduct => phi_product(cache, n, l, m),
        Identity::GtildeRescaling => gtilde_rescaling(n, l, m),
        Identity::GammaRecursion => gamma_recursion(cache, n, l, m),
        Identity::GammaBarRecursion => gamma_bar_recursion(cache, n, l, m),
        Identity::GammaFactorization => gamma_factorization(cache, n, l, m),
        Identity::GammaBarFactorization => gamma_bar_factorization(cache, n, l, m),
    }
}

/// Every identity at every stated level up to `max_level`, at `points`
/// admissible sample points drawn from `seed`.
pub fn run_identity_suite(
    seed: u64,
    points: usize,
    max_level: usize,
) -> Result<Vec<IdentityCheck>> {
    let mut out = Vec::new();
    let mut cache = DeterminantCache::new();
    for identity in Identity::ALL {
        let samples = sample_points(seed, points, |l, m| identity.admissible(l, m));
        for n in identity.levels(max_level) {
            for (l, m) in &samples {
                out.push(evaluate(&mut cache, identity, n, l, m)?);
            }
        }
    }
    Ok(out)
}
