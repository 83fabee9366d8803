//! Level-n generator matrices, the Hecke operator and the two-parameter
//! pencils, with exact determinants.

mod determinant;
pub mod identities;
mod matrix;

pub use determinant::{bareiss_determinant, exact_determinant};
pub use matrix::{integer, parse_rational, rational, LevelMatrix};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::limits;
use crate::tree_groups::{Generator, GroupPreset};

/// Images of every machine state on the level-`n` words, built level by level:
/// the image of `x·w` under state `q` is `τ_q(x)·(ω(q,x) applied to w)`, so the
/// block of rows for first letter `τ_q(x)` holds the level-(n-1) matrix of the
/// section.
pub fn level_images(preset: GroupPreset, n: usize) -> Result<Vec<Vec<usize>>> {
    let d = preset.alphabet_size();
    limits::level_dim(d, n)?;
    let machine = preset.machine();
    let mut images: Vec<Vec<usize>> = vec![vec![0]; machine.states().len()];
    let mut m = 1;
    for _ in 0..n {
        images = machine
            .states()
            .iter()
            .map(|s| {
                let mut out = vec![0; d * m];
                for x in 0..d {
                    let head = s.output.apply(x) * m;
                    let section = &images[s.transitions[x]];
                    for (j, &img) in section.iter().enumerate() {
                        out[x * m + j] = head + img;
                    }
                }
                out
            })
            .collect();
        m *= d;
    }
    Ok(images)
}

/// Image array of one generator at level `n`.
pub fn generator_images(preset: GroupPreset, generator: Generator, n: usize) -> Result<Vec<usize>> {
    Ok(level_images(preset, n)?.swap_remove(generator.index()))
}

/// Permutation matrix of a generator, acting on coordinate vectors:
/// column `j` has its single 1 in row `g(j)`.
pub fn perm_matrix(preset: GroupPreset, generator: Generator, n: usize) -> Result<LevelMatrix> {
    let mut weights = [
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    ];
    weights[generator.index()] = BigRational::one();
    weighted_operator(preset, n, &weights, &BigRational::zero())
}

/// `Σ w_g · g_n + shift · I` over the four generators.
pub fn weighted_operator(
    preset: GroupPreset,
    n: usize,
    weights: &[BigRational; 4],
    shift: &BigRational,
) -> Result<LevelMatrix> {
    let dim = limits::dense_dim(preset.alphabet_size(), n)?;
    let images = level_images(preset, n)?;
    let mut m = LevelMatrix::zeros(dim);
    for (g, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (j, &i) in images[g].iter().enumerate() {
            m.add_at(i, j, w);
        }
    }
    Ok(m.shift(shift).with_context(preset, n))
}

/// `Δ_n`: the sum of the four generator matrices.
pub fn hecke_operator(preset: GroupPreset, n: usize) -> Result<LevelMatrix> {
    let one = BigRational::one();
    weighted_operator(
        preset,
        n,
        &[one.clone(), one.clone(), one.clone(), one],
        &BigRational::zero(),
    )
}

/// `Δ_n / 4`, the transition matrix of the simple random walk.
pub fn markov_operator(preset: GroupPreset, n: usize) -> Result<LevelMatrix> {
    Ok(hecke_operator(preset, n)?.scale(&rational(1, 4)))
}

/// A point of the two-parameter deformation of `Δ_n`.
///
/// The convention depends on the group:
/// * G: `Δ − (λ+1)a − (μ+1)`
/// * G̃: `Δ − (λ+1)a − (μ+2)`
/// * ternary presets: `(x + x⁻¹) + λ(a + a⁻¹) − μ` with `x` the second generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    pub group: GroupPreset,
    pub level: usize,
    pub lambda: BigRational,
    pub mu: BigRational,
}

impl Pencil {
    pub fn new(group: GroupPreset, level: usize, lambda: BigRational, mu: BigRational) -> Self {
        Self {
            group,
            level,
            lambda,
            mu,
        }
    }
}

pub fn pencil_matrix(q: &Pencil) -> Result<LevelMatrix> {
    let one = BigRational::one();
    let (weights, shift) = match q.group {
        GroupPreset::G | GroupPreset::Gtilde => {
            let offset = if q.group == GroupPreset::G {
                integer(1)
            } else {
                integer(2)
            };
            (
                [-q.lambda.clone(), one.clone(), one.clone(), one],
                -(&q.mu + offset),
            )
        }
        _ => (
            [q.lambda.clone(), q.lambda.clone(), one.clone(), one],
            -q.mu.clone(),
        ),
    };
    weighted_operator(q.group, q.level, &weights, &shift)
}

/// Determinant of the pencil at `(λ, μ)`.
pub fn pencil_determinant(
    group: GroupPreset,
    level: usize,
    lambda: &BigRational,
    mu: &BigRational,
) -> Result<BigRational> {
    Ok(exact_determinant(&pencil_matrix(&Pencil::new(
        group,
        level,
        lambda.clone(),
        mu.clone(),
    ))?))
}
